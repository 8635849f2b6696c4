//! Finite Stone duality over `C(A)`: spectra of Boolean subalgebras, the
//! limit `K(A)` of spectra, the Boolean reflection `L(A)` and Kochen-Specker
//! detection.

use serde::Serialize;

use crate::construct::{boolean_on, coproduct};
use crate::error::{Error, Result};
use crate::morphism::PbaMorphism;
use crate::pba::PartialBooleanAlgebra;
use crate::poset::{boolean_subalgebras, SubalgebraPoset, DEFAULT_SUBALGEBRA_LIMIT};
use crate::ElemSet;

/// Points of `Σ(C)` for a Boolean subalgebra `C`: its atoms, ascending. The
/// point of atom `p` is the two-valued morphism `x ↦ [p ≤ x]`.
pub fn stone_spectrum(a: &PartialBooleanAlgebra, c: &ElemSet) -> Result<Vec<usize>> {
    let view = a
        .boolean_view(c)
        .map_err(|r| Error::domain(format!("not a Boolean subalgebra: {r}")))?;
    Ok(view.atoms)
}

/// The atom of `coarse` lying above `q`, where `q` is an atom of a finer
/// subalgebra containing `coarse`.
pub fn restrict_point(a: &PartialBooleanAlgebra, coarse: &[usize], q: usize) -> usize {
    *coarse
        .iter()
        .find(|&&c| a.leq(q, c))
        .expect("every atom of a larger subalgebra lies below an atom of a smaller one")
}

/// Spectra of every member of `C(A)` with their restriction maps.
#[derive(Clone, Debug)]
pub struct Spectra {
    pub poset: SubalgebraPoset,
    /// Points (atoms) of each member.
    pub points: Vec<Vec<usize>>,
    /// `restriction[j][i]`, for members `i ⊆ j`, maps point indices of `j`
    /// to point indices of `i`.
    restriction: Vec<Vec<Option<Vec<usize>>>>,
}

impl Spectra {
    pub fn new(a: &PartialBooleanAlgebra, poset: SubalgebraPoset) -> Result<Self> {
        let points = poset
            .members
            .iter()
            .map(|m| stone_spectrum(a, m))
            .collect::<Result<Vec<_>>>()?;
        let n = poset.len();
        let mut restriction = vec![vec![None; n]; n];
        for (j, row) in restriction.iter_mut().enumerate() {
            for (i, slot) in row.iter_mut().enumerate() {
                if poset.leq(i, j) {
                    let map = points[j]
                        .iter()
                        .map(|&q| {
                            let c = restrict_point(a, &points[i], q);
                            points[i].iter().position(|&x| x == c).expect("atom of member")
                        })
                        .collect();
                    *slot = Some(map);
                }
            }
        }
        Ok(Self {
            poset,
            points,
            restriction,
        })
    }

    pub fn of(a: &PartialBooleanAlgebra) -> Result<Self> {
        Self::new(a, boolean_subalgebras(a, DEFAULT_SUBALGEBRA_LIMIT)?)
    }

    /// Point index in member `i` of the restriction of point `k` of member
    /// `j ⊇ i`.
    pub fn restrict(&self, j: usize, i: usize, k: usize) -> usize {
        self.restriction[j][i].as_ref().expect("members are comparable")[k]
    }

    pub fn restriction_map(&self, j: usize, i: usize) -> Option<&[usize]> {
        self.restriction[j][i].as_deref()
    }
}

/// A point of `K(A)`: one point of `Σ(C)` per member, compatible with
/// restriction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CompatibleFamily {
    /// Point index per member of `C(A)`.
    pub choice: Vec<usize>,
}

impl CompatibleFamily {
    /// The two-valued morphism `A → {0, 1}` of the family, as a map into
    /// `{0 ↦ 0, 1 ↦ 1}` indices of [`crate::construct::initial`].
    pub fn valuation(&self, a: &PartialBooleanAlgebra, sp: &Spectra) -> PbaMorphism {
        let map = (0..a.len())
            .map(|x| {
                let i = sp.poset.principal(a, x);
                let p = sp.points[i][self.choice[i]];
                usize::from(a.leq(p, x))
            })
            .collect();
        PbaMorphism::new(map)
    }

    /// The family of a two-valued morphism.
    pub fn from_valuation(sp: &Spectra, v: &PbaMorphism) -> Option<Self> {
        let choice = sp
            .points
            .iter()
            .map(|pts| {
                let hits: Vec<usize> = (0..pts.len()).filter(|&k| v.map[pts[k]] == 1).collect();
                match hits.as_slice() {
                    [k] => Some(*k),
                    _ => None,
                }
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self { choice })
    }
}

/// Default cap on search nodes for block-constraint searches.
pub const DEFAULT_NODE_LIMIT: usize = 50_000_000;

/// Computes `K(A)` by choosing one atom per maximal Boolean subalgebra with
/// agreeing truth values on shared elements, then reading off the point of
/// every member.
pub struct BlockSearch<'s> {
    a: &'s PartialBooleanAlgebra,
    sp: &'s Spectra,
    blocks: Vec<usize>,
    node_limit: usize,
}

impl<'s> BlockSearch<'s> {
    pub fn new(a: &'s PartialBooleanAlgebra, sp: &'s Spectra) -> Self {
        let n = sp.poset.len();
        let maximal: Vec<usize> = (0..n)
            .filter(|&i| (0..n).all(|j| j == i || !sp.poset.leq(i, j)))
            .collect();
        // order blocks so each overlaps the earlier ones as much as possible
        let mut order = Vec::new();
        let mut covered = ElemSet::with_capacity(a.len());
        let mut left = maximal;
        while !left.is_empty() {
            let (pos, _) = left
                .iter()
                .enumerate()
                .max_by_key(|&(k, &i)| (sp.poset.members[i].intersection_count(&covered), std::cmp::Reverse(k)))
                .expect("non-empty");
            let i = left.remove(pos);
            covered.union_with(&sp.poset.members[i]);
            order.push(i);
        }
        Self {
            a,
            sp,
            blocks: order,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }

    pub fn node_limit(mut self, limit: usize) -> Self {
        self.node_limit = limit;
        self
    }

    /// Visits each compatible assignment of block atoms as a truth set (the
    /// elements valued 1). Stops early when `visit` returns false.
    fn run(&self, visit: &mut dyn FnMut(&ElemSet) -> bool) -> Result<()> {
        let a = self.a;
        let options: Vec<Vec<ElemSet>> = self
            .blocks
            .iter()
            .map(|&i| {
                self.sp.points[i]
                    .iter()
                    .map(|&p| a.set_of(self.sp.poset.members[i].ones().filter(|&x| a.leq(p, x))))
                    .collect()
            })
            .collect();
        let mut nodes = 0usize;
        let mut stack_ones = vec![a.empty_set()];
        let mut stack_assigned = vec![a.empty_set()];
        let mut choice = vec![0usize; self.blocks.len()];
        let mut depth = 0usize;
        if self.blocks.is_empty() {
            return Ok(());
        }
        loop {
            if choice[depth] >= options[depth].len() {
                if depth == 0 {
                    return Ok(());
                }
                choice[depth] = 0;
                depth -= 1;
                stack_ones.pop();
                stack_assigned.pop();
                choice[depth] += 1;
                continue;
            }
            nodes += 1;
            if nodes > self.node_limit {
                return Err(Error::SearchTooLarge {
                    what: "Kochen-Specker search nodes",
                    limit: self.node_limit,
                });
            }
            let member = &self.sp.poset.members[self.blocks[depth]];
            let ones = &options[depth][choice[depth]];
            let mut shared = member.clone();
            shared.intersect_with(&stack_assigned[depth]);
            let mut mine = ones.clone();
            mine.intersect_with(&shared);
            let mut theirs = stack_ones[depth].clone();
            theirs.intersect_with(&shared);
            if mine != theirs {
                choice[depth] += 1;
                continue;
            }
            let mut next_ones = stack_ones[depth].clone();
            next_ones.union_with(ones);
            let mut next_assigned = stack_assigned[depth].clone();
            next_assigned.union_with(member);
            if depth + 1 == self.blocks.len() {
                if !visit(&next_ones) {
                    return Ok(());
                }
                choice[depth] += 1;
                continue;
            }
            stack_ones.push(next_ones);
            stack_assigned.push(next_assigned);
            depth += 1;
        }
    }

    fn family_of(&self, truth: &ElemSet) -> CompatibleFamily {
        let choice = self
            .sp
            .points
            .iter()
            .map(|pts| pts.iter().position(|p| truth.contains(*p)).expect("one point per member"))
            .collect();
        CompatibleFamily { choice }
    }

    /// Every point of `K(A)`, sorted by choice vector.
    pub fn all(&self) -> Result<Vec<CompatibleFamily>> {
        let mut out = Vec::new();
        self.run(&mut |t| {
            out.push(self.family_of(t));
            true
        })?;
        out.sort();
        Ok(out)
    }

    pub fn first(&self) -> Result<Option<CompatibleFamily>> {
        let mut out = None;
        self.run(&mut |t| {
            out = Some(self.family_of(t));
            false
        })?;
        Ok(out)
    }
}

/// `K(A)` by block-constraint search.
pub fn limit_k(a: &PartialBooleanAlgebra, sp: &Spectra) -> Result<Vec<CompatibleFamily>> {
    if a.zero() == a.one() {
        return Ok(Vec::new());
    }
    BlockSearch::new(a, sp).all()
}

/// `K(A)` straight from the limit definition: backtracking over members in
/// decreasing size, checking compatibility with every comparable member
/// already chosen.
pub fn limit_k_poset(a: &PartialBooleanAlgebra, sp: &Spectra) -> Vec<CompatibleFamily> {
    if a.zero() == a.one() {
        return Vec::new();
    }
    let n = sp.poset.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(sp.poset.members[i].count_ones(..)));
    let mut choice = vec![usize::MAX; n];
    let mut out = Vec::new();
    fn go(d: usize, order: &[usize], sp: &Spectra, choice: &mut Vec<usize>, out: &mut Vec<CompatibleFamily>) {
        if d == order.len() {
            out.push(CompatibleFamily { choice: choice.clone() });
            return;
        }
        let i = order[d];
        for k in 0..sp.points[i].len() {
            let ok = order[..d].iter().all(|&j| {
                let cj = choice[j];
                if sp.poset.leq(i, j) {
                    sp.restrict(j, i, cj) == k
                } else if sp.poset.leq(j, i) {
                    sp.restrict(i, j, k) == cj
                } else {
                    true
                }
            });
            if ok {
                choice[i] = k;
                go(d + 1, order, sp, choice, out);
                choice[i] = usize::MAX;
            }
        }
    }
    go(0, &order, sp, &mut choice, &mut out);
    out.sort();
    out
}

/// `K(A) = ∅`: no two-valued morphism exists. A cutoff is an error, never a
/// silent answer.
pub fn is_kochen_specker(a: &PartialBooleanAlgebra) -> Result<bool> {
    if a.zero() == a.one() {
        return Ok(true);
    }
    let sp = Spectra::of(a)?;
    Ok(BlockSearch::new(a, &sp).first()?.is_none())
}

/// `L(A)`: the Boolean algebra of subsets of `K(A)`, with the unit
/// `η(a) = {k : k(a) = 1}`.
#[derive(Clone, Debug)]
pub struct Reflection {
    pub points: Vec<CompatibleFamily>,
    pub algebra: PartialBooleanAlgebra,
    pub unit: PbaMorphism,
}

/// Largest `|K(A)|` for which `L(A)` is built explicitly.
pub const MAX_REFLECTION_POINTS: usize = 12;

pub fn reflection_l(a: &PartialBooleanAlgebra) -> Result<Reflection> {
    let sp = Spectra::of(a)?;
    let points = limit_k(a, &sp)?;
    if points.len() > MAX_REFLECTION_POINTS {
        return Err(Error::SearchTooLarge {
            what: "points of K(A) for an explicit reflection",
            limit: MAX_REFLECTION_POINTS,
        });
    }
    let labels: Vec<String> = (0..points.len()).map(|k| format!("k{k}")).collect();
    let algebra = boolean_on(&labels);
    let vals: Vec<PbaMorphism> = points.iter().map(|f| f.valuation(a, &sp)).collect();
    let unit = PbaMorphism::new(
        (0..a.len())
            .map(|x| vals.iter().enumerate().fold(0usize, |m, (k, v)| m | (v.map[x] << k)))
            .collect(),
    );
    Ok(Reflection { points, algebra, unit })
}

/// Whether `A + B` is Kochen-Specker for a Kochen-Specker `A`.
pub fn coproduct_ideal_check(a: &PartialBooleanAlgebra, b: &PartialBooleanAlgebra) -> Result<bool> {
    if !is_kochen_specker(a)? {
        return Err(Error::domain("first argument is not Kochen-Specker"));
    }
    let (s, _) = coproduct(&[a, b])?;
    is_kochen_specker(&s)
}

/// `K(f) : K(B) → K(A)` for `f : A → B`, acting on two-valued morphisms by
/// precomposition.
pub fn k_on_morphism(f: &PbaMorphism, v: &PbaMorphism) -> PbaMorphism {
    f.then(v)
}
