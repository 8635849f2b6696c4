//! Backtracking search for morphisms between finite partial Boolean algebras.
//!
//! Decisions are always made on the smallest unassigned domain element and
//! try codomain values in ascending order, so solutions are produced in
//! lexicographic order of their maps. Each assignment propagates: it forces
//! the image of the complement, and for every already-assigned commeasurable
//! partner it checks commeasurability of the images and forces the images of
//! the meet and join.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::pba::PartialBooleanAlgebra;
use crate::ElemSet;

const FREE: usize = usize::MAX;

/// Configuration of one search for maps `dom → cod`.
#[derive(Clone)]
pub struct HomSearch<'a> {
    dom: &'a PartialBooleanAlgebra,
    cod: &'a PartialBooleanAlgebra,
    pins: Vec<(usize, usize)>,
    candidates: Option<Vec<ElemSet>>,
    injective: bool,
    reflect_comm: bool,
    limit: Option<usize>,
}

impl<'a> HomSearch<'a> {
    pub fn new(dom: &'a PartialBooleanAlgebra, cod: &'a PartialBooleanAlgebra) -> Self {
        Self {
            dom,
            cod,
            pins: Vec::new(),
            candidates: None,
            injective: false,
            reflect_comm: false,
            limit: None,
        }
    }

    /// Requires `x ↦ y`.
    pub fn pin(mut self, x: usize, y: usize) -> Self {
        self.pins.push((x, y));
        self
    }

    pub fn pins(mut self, pins: impl IntoIterator<Item = (usize, usize)>) -> Self {
        self.pins.extend(pins);
        self
    }

    /// Restricts the image of each domain element to a candidate set.
    pub fn candidates(mut self, c: Vec<ElemSet>) -> Self {
        self.candidates = Some(c);
        self
    }

    pub fn injective(mut self, on: bool) -> Self {
        self.injective = on;
        self
    }

    /// Also require `f(a) ⊙ f(b) ⇒ a ⊙ b`.
    pub fn reflect_comm(mut self, on: bool) -> Self {
        self.reflect_comm = on;
        self
    }

    /// Maximum number of solutions [`HomSearch::all`] may collect before
    /// failing with [`Error::SearchTooLarge`].
    pub fn limit(mut self, max: usize) -> Self {
        self.limit = Some(max);
        self
    }

    /// Visits every solution in lexicographic order until the visitor breaks.
    pub fn for_each(&self, mut visit: impl FnMut(&[usize]) -> ControlFlow<()>) {
        let mut st = State::new(self);
        let mut ok = st.assign(self.dom.zero(), self.cod.zero())
            && st.assign(self.dom.one(), self.cod.one());
        for &(x, y) in &self.pins {
            ok = ok && x < self.dom.len() && y < self.cod.len() && st.assign(x, y);
        }
        if ok {
            let _ = st.descend(0, &mut visit);
        }
    }

    pub fn first(&self) -> Option<Vec<usize>> {
        let mut out = None;
        self.for_each(|m| {
            out = Some(m.to_vec());
            ControlFlow::Break(())
        });
        out
    }

    pub fn all(&self) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut over = false;
        let limit = self.limit;
        self.for_each(|m| {
            if limit.is_some_and(|l| out.len() >= l) {
                over = true;
                return ControlFlow::Break(());
            }
            out.push(m.to_vec());
            ControlFlow::Continue(())
        });
        match (over, limit) {
            (true, Some(limit)) => Err(Error::SearchTooLarge { what: "morphism enumeration", limit }),
            _ => Ok(out),
        }
    }

    /// Counts solutions, stopping once `stop_at` have been seen.
    pub fn count_up_to(&self, stop_at: usize) -> usize {
        let mut n = 0;
        self.for_each(|_| {
            n += 1;
            if n >= stop_at {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        n
    }
}

struct State<'s, 'a> {
    cfg: &'s HomSearch<'a>,
    map: Vec<usize>,
    trail: Vec<usize>,
    used: Vec<u32>,
    assigned: ElemSet,
}

impl<'s, 'a> State<'s, 'a> {
    fn new(cfg: &'s HomSearch<'a>) -> Self {
        Self {
            cfg,
            map: vec![FREE; cfg.dom.len()],
            trail: Vec::new(),
            used: vec![0; cfg.cod.len()],
            assigned: ElemSet::with_capacity(cfg.dom.len()),
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().expect("trail above mark");
            self.used[self.map[x]] -= 1;
            self.map[x] = FREE;
            self.assigned.set(x, false);
        }
    }

    /// Assigns `x ↦ y` and propagates; false on contradiction. Partial work
    /// stays on the trail for the caller to undo.
    fn assign(&mut self, x: usize, y: usize) -> bool {
        let (dom, cod) = (self.cfg.dom, self.cfg.cod);
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            if self.map[x] != FREE {
                if self.map[x] != y {
                    return false;
                }
                continue;
            }
            if let Some(c) = &self.cfg.candidates {
                if !c[x].contains(y) {
                    return false;
                }
            }
            if self.cfg.injective && self.used[y] > 0 {
                return false;
            }
            self.map[x] = y;
            self.used[y] += 1;
            self.assigned.insert(x);
            self.trail.push(x);
            queue.push((dom.neg(x), cod.neg(y)));
            if self.cfg.reflect_comm {
                for z in self.assigned.ones() {
                    if dom.comm(x, z) != cod.comm(y, self.map[z]) {
                        return false;
                    }
                }
            }
            let mut partners = dom.comm_row(x).clone();
            partners.intersect_with(&self.assigned);
            for z in partners.ones() {
                let w = self.map[z];
                if !cod.comm(y, w) {
                    return false;
                }
                queue.push((dom.meet(x, z), cod.meet(y, w)));
                queue.push((dom.join(x, z), cod.join(y, w)));
            }
        }
        true
    }

    fn descend(&mut self, from: usize, visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        let n = self.map.len();
        let mut x = from;
        while x < n && self.map[x] != FREE {
            x += 1;
        }
        if x == n {
            return visit(&self.map);
        }
        let mark = self.trail.len();
        for y in 0..self.cfg.cod.len() {
            if let Some(c) = &self.cfg.candidates {
                if !c[x].contains(y) {
                    continue;
                }
            }
            if self.assign(x, y) {
                self.descend(x + 1, visit)?;
            }
            self.undo_to(mark);
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::morphism::check_map;

    /// Filters all `|B|^|A|` maps; only for tiny algebras.
    fn brute_force(a: &PartialBooleanAlgebra, b: &PartialBooleanAlgebra) -> Vec<Vec<usize>> {
        let (n, m) = (a.len(), b.len());
        let total = m.pow(n as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut map = vec![0; n];
            let mut c = code;
            for slot in map.iter_mut().rev() {
                *slot = c % m;
                c /= m;
            }
            if check_map(a, b, &map).is_ok() {
                out.push(map);
            }
        }
        out
    }

    #[test]
    fn agrees_with_brute_force_on_small_pairs() {
        let algebras = [
            corpus::terminal(),
            corpus::boolean(0),
            corpus::boolean(1),
            corpus::boolean(2),
            corpus::paper_six(),
        ];
        for a in &algebras {
            for b in &algebras {
                let found = HomSearch::new(a, b).all().unwrap();
                assert_eq!(found, brute_force(a, b), "{} -> {}", a.len(), b.len());
            }
        }
    }

    #[test]
    fn limit_is_reported() {
        let a = corpus::paper_six();
        let b = corpus::boolean(2);
        let err = HomSearch::new(&a, &b).limit(1).all().unwrap_err();
        assert!(err.is_cutoff());
    }

    #[test]
    fn pins_restrict_results() {
        let a = corpus::paper_six();
        let b = corpus::boolean(1);
        let x = a.index_of("a").unwrap();
        let all = HomSearch::new(&a, &b).pin(x, b.one()).all().unwrap();
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(|m| m[x] == b.one()));
    }
}
