//! Cocones over `C(A)`, their mediating morphisms, and verification of the
//! colimit property on generated cocones.

use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construct::{boolean_on, initial};
use crate::error::{Error, Result};
use crate::morphism::{check_map, enumerate_morphisms, PbaMorphism};
use crate::pba::PartialBooleanAlgebra;
use crate::poset::SubalgebraPoset;
use crate::search::HomSearch;
use crate::ElemSet;

const FREE: usize = usize::MAX;

/// A cocone over the diagram `C(A)`.
///
/// `legs[i][k]` is the image in the apex of the `k`-th smallest element of
/// member `i`.
#[derive(Clone, Debug)]
pub struct Cocone {
    pub apex: PartialBooleanAlgebra,
    pub legs: Vec<Vec<usize>>,
}

fn local(member: &ElemSet, x: usize) -> usize {
    member.count_ones(..x)
}

impl Cocone {
    /// The cocone `h ∘ i_C` of a morphism `h : A → apex`.
    pub fn of_morphism(poset: &SubalgebraPoset, apex: PartialBooleanAlgebra, h: &PbaMorphism) -> Self {
        let legs = poset.members.iter().map(|m| m.ones().map(|x| h.apply(x)).collect()).collect();
        Self { apex, legs }
    }

    /// Image of `x` under the leg of member `i`, if `x` lies in it.
    pub fn leg_at(&self, poset: &SubalgebraPoset, i: usize, x: usize) -> Option<usize> {
        let m = &poset.members[i];
        (x < m.len() && m.contains(x)).then(|| self.legs[i][local(m, x)])
    }

    /// Checks that every leg is a morphism out of its member.
    pub fn check_legs(&self, a: &PartialBooleanAlgebra, poset: &SubalgebraPoset) -> Result<()> {
        if self.legs.len() != poset.len() {
            return Err(Error::domain(format!(
                "cocone has {} legs for {} members",
                self.legs.len(),
                poset.len()
            )));
        }
        for (i, m) in poset.members.iter().enumerate() {
            let (c, _) = a.restrict(m)?;
            if let Err(v) = check_map(&c, &self.apex, &self.legs[i]) {
                return Err(Error::domain(format!("leg {i} is not a morphism: {v}")));
            }
        }
        Ok(())
    }

    /// First pair `C ⊆ C'` on which the legs disagree.
    pub fn incoherence(&self, poset: &SubalgebraPoset) -> Option<(usize, usize)> {
        for i in 0..poset.len() {
            for j in poset.order[i].ones().filter(|&j| j != i) {
                let m = &poset.members[i];
                let differs = m
                    .ones()
                    .enumerate()
                    .any(|(k, x)| Some(self.legs[i][k]) != self.leg_at(poset, j, x));
                if differs {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// The mediating morphism `m(x) = f⟨x⟩(x)` of a coherent cocone.
///
/// Legs that are not morphisms are a domain error; incoherent legs are
/// reported as [`Error::IncoherentCocone`] with the offending members. The
/// result is not re-checked here; see [`check_mediating`].
pub fn mediating_morphism(a: &PartialBooleanAlgebra, poset: &SubalgebraPoset, c: &Cocone) -> Result<PbaMorphism> {
    c.check_legs(a, poset)?;
    if let Some((i, j)) = c.incoherence(poset) {
        return Err(Error::IncoherentCocone(i, j));
    }
    let map = (0..a.len())
        .map(|x| c.leg_at(poset, poset.principal(a, x), x).expect("x ∈ ⟨x⟩"))
        .collect();
    Ok(PbaMorphism::new(map))
}

/// How `m` fails to mediate, if it does.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MediatingFailure {
    NotAMorphism(String),
    /// `m ∘ i_C ≠ f_C` at element `x` of member `member`.
    LegMismatch { member: usize, x: usize },
}

/// Checks that `m` is a morphism and that `m ∘ i_C = f_C` for every member.
pub fn check_mediating(
    a: &PartialBooleanAlgebra,
    poset: &SubalgebraPoset,
    c: &Cocone,
    m: &PbaMorphism,
) -> Result<(), MediatingFailure> {
    if let Err(v) = m.check(a, &c.apex) {
        return Err(MediatingFailure::NotAMorphism(v.to_string()));
    }
    for (i, member) in poset.members.iter().enumerate() {
        for (k, x) in member.ones().enumerate() {
            if m.apply(x) != c.legs[i][k] {
                return Err(MediatingFailure::LegMismatch { member: i, x });
            }
        }
    }
    Ok(())
}

/// Generates cocones by choosing a Boolean morphism out of each maximal
/// member, consistently on shared elements; the legs of smaller members are
/// restrictions.
pub struct CoconeSearch<'a> {
    a: &'a PartialBooleanAlgebra,
    poset: &'a SubalgebraPoset,
    apex: &'a PartialBooleanAlgebra,
    blocks: Vec<(PartialBooleanAlgebra, Vec<usize>)>,
    node_limit: usize,
}

/// Default cap on block-extension steps in one cocone search.
pub const DEFAULT_COCONE_NODES: usize = 200_000;

impl<'a> CoconeSearch<'a> {
    pub fn new(a: &'a PartialBooleanAlgebra, poset: &'a SubalgebraPoset, apex: &'a PartialBooleanAlgebra) -> Result<Self> {
        let maximal: Vec<usize> = (0..poset.len()).filter(|&i| poset.order[i].count_ones(..) == 1).collect();
        // visit blocks so that each one overlaps the earlier ones as much as possible
        let mut order = Vec::with_capacity(maximal.len());
        let mut covered = a.empty_set();
        let mut left = maximal;
        while !left.is_empty() {
            let (pos, _) = left
                .iter()
                .enumerate()
                .max_by_key(|&(p, &i)| (poset.members[i].intersection_count(&covered), std::cmp::Reverse(p)))
                .expect("non-empty");
            let i = left.remove(pos);
            covered.union_with(&poset.members[i]);
            order.push(i);
        }
        let blocks = order
            .iter()
            .map(|&i| a.restrict(&poset.members[i]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            a,
            poset,
            apex,
            blocks,
            node_limit: DEFAULT_COCONE_NODES,
        })
    }

    pub fn node_limit(mut self, limit: usize) -> Self {
        self.node_limit = limit;
        self
    }

    fn cocone(&self, assign: &[usize]) -> Cocone {
        let legs = self.poset.members.iter().map(|m| m.ones().map(|x| assign[x]).collect()).collect();
        Cocone {
            apex: self.apex.clone(),
            legs,
        }
    }

    fn extend(
        &self,
        depth: usize,
        assign: &mut Vec<usize>,
        nodes: &mut usize,
        shuffle: &mut Option<&mut ChaCha8Rng>,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        if depth == self.blocks.len() {
            return Ok(visit(assign));
        }
        *nodes += 1;
        if *nodes > self.node_limit {
            return Err(Error::SearchTooLarge {
                what: "cocone search",
                limit: self.node_limit,
            });
        }
        let (block, emb) = &self.blocks[depth];
        let pins: Vec<(usize, usize)> = emb
            .iter()
            .enumerate()
            .filter(|&(_, &x)| assign[x] != FREE)
            .map(|(k, &x)| (k, assign[x]))
            .collect();
        let mut options = HomSearch::new(block, self.apex).pins(pins).all()?;
        if let Some(rng) = shuffle.as_deref_mut() {
            options.shuffle(rng);
        }
        for map in options {
            let fresh: Vec<usize> = emb.iter().copied().filter(|&x| assign[x] == FREE).collect();
            for (k, &x) in emb.iter().enumerate() {
                assign[x] = map[k];
            }
            let flow = self.extend(depth + 1, assign, nodes, shuffle, visit)?;
            for x in fresh {
                assign[x] = FREE;
            }
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// The first `count` cocones in lexicographic order of block choices.
    pub fn first(&self, count: usize) -> Result<Vec<Cocone>> {
        let mut out = Vec::new();
        if count == 0 {
            return Ok(out);
        }
        let mut assign = vec![FREE; self.a.len()];
        let mut nodes = 0;
        let _ = self.extend(0, &mut assign, &mut nodes, &mut None, &mut |m| {
            out.push(self.cocone(m));
            if out.len() >= count {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(out)
    }

    /// One cocone reached by trying block choices in a seeded random order.
    pub fn random(&self, rng: &mut ChaCha8Rng) -> Result<Option<Cocone>> {
        let mut out = None;
        let mut assign = vec![FREE; self.a.len()];
        let mut nodes = 0;
        let _ = self.extend(0, &mut assign, &mut nodes, &mut Some(rng), &mut |m| {
            out = Some(self.cocone(m));
            ControlFlow::Break(())
        })?;
        Ok(out)
    }
}

/// How uniqueness of the mediating morphism was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UniquenessMethod {
    /// Every morphism `A → apex` was enumerated and filtered.
    Exhaustive,
    /// The apex or `Hom(A, apex)` exceeded the caps; the search was
    /// constrained by the legs of the maximal members only.
    Constrained,
}

/// Morphisms `A → apex` commuting with every leg, up to `stop_at` of them,
/// found without reference to the mediating formula.
pub fn alternative_mediators(
    a: &PartialBooleanAlgebra,
    poset: &SubalgebraPoset,
    c: &Cocone,
    all_morphisms: Option<&[PbaMorphism]>,
    stop_at: usize,
) -> (Vec<PbaMorphism>, UniquenessMethod) {
    let commutes = |h: &[usize]| {
        poset
            .members
            .iter()
            .zip(&c.legs)
            .all(|(m, leg)| m.ones().zip(leg).all(|(x, &y)| h[x] == y))
    };
    if let Some(all) = all_morphisms {
        let hits = all.iter().filter(|h| commutes(&h.map)).take(stop_at).cloned().collect();
        return (hits, UniquenessMethod::Exhaustive);
    }
    let mut candidates = vec![c.apex.full_set(); a.len()];
    for (i, m) in poset.members.iter().enumerate() {
        if poset.order[i].count_ones(..) != 1 {
            continue;
        }
        for (k, x) in m.ones().enumerate() {
            let mut only = c.apex.empty_set();
            only.insert(c.legs[i][k]);
            candidates[x].intersect_with(&only);
        }
    }
    let mut hits = Vec::new();
    HomSearch::new(a, &c.apex).candidates(candidates).for_each(|h| {
        if commutes(h) {
            hits.push(PbaMorphism::new(h.to_vec()));
        }
        if hits.len() >= stop_at {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    (hits, UniquenessMethod::Constrained)
}

/// Outcome for one generated cocone.
#[derive(Clone, Debug, Serialize)]
pub struct CoconeOutcome {
    pub apex: String,
    pub origin: &'static str,
    pub mediating: Option<Vec<usize>>,
    pub failure: Option<String>,
    pub uniqueness: Option<UniquenessMethod>,
    pub alternatives: usize,
    pub passed: bool,
}

/// Aggregated colimit check.
#[derive(Clone, Debug, Serialize)]
pub struct ColimitReport {
    pub members: usize,
    pub outcomes: Vec<CoconeOutcome>,
    pub passed: bool,
}

/// Options for [`verify_colimit`].
#[derive(Clone, Debug)]
pub struct ColimitOptions {
    /// Cocones per apex: half enumerated in order, half seeded-random.
    pub trial_cocones: usize,
    /// Largest apex for which `Hom(A, apex)` is enumerated in full.
    pub max_apex: usize,
    /// Cap on that enumeration.
    pub morphism_cap: usize,
    pub seed: u64,
    pub node_limit: usize,
}

impl Default for ColimitOptions {
    fn default() -> Self {
        Self {
            trial_cocones: 4,
            max_apex: 16,
            morphism_cap: 20_000,
            seed: 0,
            node_limit: DEFAULT_COCONE_NODES,
        }
    }
}

/// The default apex list: `{0,1}`, `2²`, `2³`.
pub fn default_apexes() -> Vec<(String, PartialBooleanAlgebra)> {
    vec![
        ("2".to_string(), initial()),
        ("2^2".to_string(), boolean_on(&["c1", "c2"])),
        ("2^3".to_string(), boolean_on(&["c1", "c2", "c3"])),
    ]
}

/// Generates cocones into each apex and checks existence, the morphism
/// property, commutation with the legs and uniqueness of the mediating map.
pub fn verify_colimit(
    a: &PartialBooleanAlgebra,
    poset: &SubalgebraPoset,
    apexes: &[(String, PartialBooleanAlgebra)],
    opts: &ColimitOptions,
) -> Result<ColimitReport> {
    let mut outcomes = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for (name, apex) in apexes {
        let search = CoconeSearch::new(a, poset, apex)?.node_limit(opts.node_limit);
        let ordered = opts.trial_cocones.div_ceil(2);
        let mut cocones: Vec<(&'static str, Cocone)> =
            search.first(ordered)?.into_iter().map(|c| ("enumerated", c)).collect();
        for _ in ordered..opts.trial_cocones {
            if let Some(c) = search.random(&mut rng)? {
                cocones.push(("random", c));
            }
        }
        let all = if apex.len() <= opts.max_apex {
            enumerate_morphisms(a, apex, opts.morphism_cap).ok()
        } else {
            None
        };
        for (origin, c) in cocones {
            outcomes.push(check_cocone(a, poset, name, origin, &c, all.as_deref()));
        }
    }
    let passed = outcomes.iter().all(|o| o.passed);
    Ok(ColimitReport {
        members: poset.len(),
        outcomes,
        passed,
    })
}

fn check_cocone(
    a: &PartialBooleanAlgebra,
    poset: &SubalgebraPoset,
    apex: &str,
    origin: &'static str,
    c: &Cocone,
    all: Option<&[PbaMorphism]>,
) -> CoconeOutcome {
    let mut out = CoconeOutcome {
        apex: apex.to_string(),
        origin,
        mediating: None,
        failure: None,
        uniqueness: None,
        alternatives: 0,
        passed: false,
    };
    let m = match mediating_morphism(a, poset, c) {
        Ok(m) => m,
        Err(e) => {
            out.failure = Some(e.to_string());
            return out;
        }
    };
    out.mediating = Some(m.map.clone());
    if let Err(f) = check_mediating(a, poset, c, &m) {
        out.failure = Some(format!("{f:?}"));
        return out;
    }
    let (alts, method) = alternative_mediators(a, poset, c, all, 2);
    out.uniqueness = Some(method);
    out.alternatives = alts.len();
    out.passed = alts.len() == 1 && alts[0] == m;
    if !out.passed {
        out.failure = Some(format!("{} mediating morphisms found by independent search", alts.len()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::poset::{boolean_subalgebras, DEFAULT_SUBALGEBRA_LIMIT};

    fn poset(a: &PartialBooleanAlgebra) -> SubalgebraPoset {
        boolean_subalgebras(a, DEFAULT_SUBALGEBRA_LIMIT).unwrap()
    }

    #[test]
    fn inclusion_legs_mediate_to_identity() {
        let a = corpus::mo(3);
        let p = poset(&a);
        let c = Cocone::of_morphism(&p, a.clone(), &PbaMorphism::identity(&a));
        let m = mediating_morphism(&a, &p, &c).unwrap();
        assert_eq!(m, PbaMorphism::identity(&a));
    }

    #[test]
    fn paper_cocone_gives_paper_map() {
        let (a, b, expected) = corpus::paper_m();
        let p = poset(&a);
        let c = Cocone::of_morphism(&p, b.clone(), &expected);
        let m = mediating_morphism(&a, &p, &c).unwrap();
        assert_eq!(m, expected);
        assert_eq!(check_mediating(&a, &p, &c, &m), Ok(()));
    }

    #[test]
    fn incoherent_legs_are_reported() {
        let a = corpus::boolean(3);
        let p = poset(&a);
        let mut c = Cocone::of_morphism(&p, a.clone(), &PbaMorphism::identity(&a));
        let top = p.len() - 1;
        // exchange the first two atoms (masks 1, 2) and their complements (6, 5) on the top member only
        let m = &p.members[top];
        c.legs[top].swap(local(m, 1), local(m, 2));
        c.legs[top].swap(local(m, 5), local(m, 6));
        assert!(c.check_legs(&a, &p).is_ok());
        assert!(matches!(mediating_morphism(&a, &p, &c), Err(Error::IncoherentCocone(_, j)) if j == top));
    }

    #[test]
    fn generated_cocones_are_cocones_of_morphisms() {
        let a = corpus::mo(3);
        let p = poset(&a);
        let apex = boolean_on(&["x", "y"]);
        let search = CoconeSearch::new(&a, &p, &apex).unwrap();
        let all = enumerate_morphisms(&a, &apex, 10_000).unwrap();
        let cocones = search.first(usize::MAX).unwrap();
        assert_eq!(cocones.len(), all.len());
        for c in &cocones {
            assert!(c.check_legs(&a, &p).is_ok());
            assert_eq!(c.incoherence(&p), None);
        }
    }

    #[test]
    fn paper_algebra_passes_with_uniqueness() {
        let a = corpus::paper_six();
        let p = poset(&a);
        let r = verify_colimit(&a, &p, &default_apexes(), &ColimitOptions::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.outcomes.len(), 12);
        assert!(r.outcomes.iter().all(|o| o.uniqueness == Some(UniquenessMethod::Exhaustive)));
    }

    #[test]
    fn random_cocone_recomputed_per_element() {
        let a = corpus::mo(3);
        let p = poset(&a);
        let apex = boolean_on(&["x", "y", "z"]);
        let search = CoconeSearch::new(&a, &p, &apex).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = search.random(&mut rng).unwrap().unwrap();
        let m = mediating_morphism(&a, &p, &c).unwrap();
        for x in 0..a.len() {
            let direct: Vec<usize> = (0..p.len()).filter_map(|i| c.leg_at(&p, i, x)).collect();
            assert!(direct.iter().all(|&y| y == m.apply(x)));
        }
    }

    #[test]
    fn ks_algebra_has_no_boolean_cocones() {
        let a = corpus::cabello18();
        let p = poset(&a);
        let two = initial();
        let search = CoconeSearch::new(&a, &p, &two).unwrap();
        assert!(search.first(1).unwrap().is_empty());
    }
}
