//! The external Bohrification frame `S(A)`: families of opens `F(C) ⊆ Σ(C)`
//! over `C(A)`, closed under pulling back along point restriction, and the
//! action `Sf` of a morphism.
//!
//! Finite spectra are discrete, so an open is any set of points, stored as a
//! bit mask per member.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::PbaMorphism;
use crate::pba::PartialBooleanAlgebra;
use crate::stone::{is_kochen_specker, Spectra};

/// Default cap on the number of frame elements enumerated.
pub const DEFAULT_MAX_FRAME: usize = 1 << 20;

/// An element of `S(A)`: `opens[i]` is the set of points of member `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BohrElement {
    pub opens: Vec<u64>,
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_spectra(sp: &Spectra) -> Result<()> {
    if sp.points.iter().any(|p| p.len() > 64) {
        return Err(Error::SearchTooLarge {
            what: "points in one spectrum",
            limit: 64,
        });
    }
    Ok(())
}

/// Points of member `j` whose restriction to member `i ⊆ j` lies in `open`.
fn pullback(sp: &Spectra, j: usize, i: usize, open: u64) -> u64 {
    let map = sp.restriction_map(j, i).expect("members are comparable");
    map.iter()
        .enumerate()
        .fold(0, |m, (q, &p)| if open >> p & 1 == 1 { m | 1 << q } else { m })
}

impl BohrElement {
    pub fn bottom(sp: &Spectra) -> Self {
        Self {
            opens: vec![0; sp.poset.len()],
        }
    }

    pub fn top(sp: &Spectra) -> Self {
        Self {
            opens: sp.points.iter().map(|p| full_mask(p.len())).collect(),
        }
    }

    pub fn meet(&self, other: &Self) -> Self {
        Self {
            opens: self.opens.iter().zip(&other.opens).map(|(x, y)| x & y).collect(),
        }
    }

    pub fn join(&self, other: &Self) -> Self {
        Self {
            opens: self.opens.iter().zip(&other.opens).map(|(x, y)| x | y).collect(),
        }
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.opens.iter().zip(&other.opens).all(|(x, y)| x & !y == 0)
    }

    /// Point indices of member `i`.
    pub fn points_of(&self, i: usize) -> Vec<usize> {
        (0..64).filter(|&k| self.opens[i] >> k & 1 == 1).collect()
    }
}

/// First comparable pair `i ⊆ j` and point of `j` restricting into `F(i)`
/// but missing from `F(j)`.
pub fn admissibility_violation(sp: &Spectra, f: &BohrElement) -> Option<(usize, usize, usize)> {
    let n = sp.poset.len();
    for j in 0..n {
        for i in 0..n {
            if i != j && sp.poset.leq(i, j) {
                let missing = pullback(sp, j, i, f.opens[i]) & !f.opens[j];
                if missing != 0 {
                    return Some((i, j, missing.trailing_zeros() as usize));
                }
            }
        }
    }
    None
}

pub fn admissible(sp: &Spectra, f: &BohrElement) -> bool {
    f.opens.len() == sp.poset.len()
        && f.opens.iter().zip(&sp.points).all(|(&m, p)| m & !full_mask(p.len()) == 0)
        && admissibility_violation(sp, f).is_none()
}

/// All of `S(A)`, in lexicographic order of the opens taken in member order.
pub fn enumerate_frame(sp: &Spectra, limit: usize) -> Result<Vec<BohrElement>> {
    check_spectra(sp)?;
    let n = sp.poset.len();
    let mut out = Vec::new();
    let mut opens = vec![0u64; n];
    fn go(sp: &Spectra, i: usize, opens: &mut Vec<u64>, out: &mut Vec<BohrElement>, limit: usize) -> Result<()> {
        if i == opens.len() {
            if out.len() == limit {
                return Err(Error::SearchTooLarge {
                    what: "elements of the Bohrification frame",
                    limit,
                });
            }
            out.push(BohrElement { opens: opens.clone() });
            return Ok(());
        }
        // members below i come earlier, so the forced points are known
        let forced = (0..i)
            .filter(|&h| sp.poset.leq(h, i))
            .fold(0, |m, h| m | pullback(sp, i, h, opens[h]));
        let free = full_mask(sp.points[i].len()) & !forced;
        let mut sub = 0u64;
        loop {
            opens[i] = forced | sub;
            go(sp, i + 1, opens, out, limit)?;
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
        Ok(())
    }
    go(sp, 0, &mut opens, &mut out, limit)?;
    out.sort();
    Ok(out)
}

/// Closure under pointwise meet and join, admissibility of every element,
/// and distributivity. Finite distributive lattices satisfy the infinite
/// distributive law, so this is the frame law.
pub fn check_frame_laws(sp: &Spectra, frame: &[BohrElement]) -> std::result::Result<(), String> {
    let set: HashSet<&BohrElement> = frame.iter().collect();
    for (i, x) in frame.iter().enumerate() {
        if !admissible(sp, x) {
            return Err(format!("element {i} is not admissible"));
        }
    }
    if !set.contains(&BohrElement::top(sp)) || !set.contains(&BohrElement::bottom(sp)) {
        return Err("top or bottom missing".into());
    }
    for (i, x) in frame.iter().enumerate() {
        for (j, y) in frame.iter().enumerate() {
            if !set.contains(&x.meet(y)) || !set.contains(&x.join(y)) {
                return Err(format!("elements {i} and {j} have no meet or join in the frame"));
            }
            for (k, z) in frame.iter().enumerate() {
                if x.meet(&y.join(z)) != x.meet(y).join(&x.meet(z)) {
                    return Err(format!("distributivity fails at ({i}, {j}, {k})"));
                }
            }
        }
    }
    Ok(())
}

/// Join-irreducible elements of an enumerated frame, which generate it
/// under joins.
pub fn join_irreducibles(sp: &Spectra, frame: &[BohrElement]) -> Vec<BohrElement> {
    let bottom = BohrElement::bottom(sp);
    frame
        .iter()
        .filter(|x| {
            **x != bottom
                && frame
                    .iter()
                    .filter(|y| y.leq(x) && y != x)
                    .fold(bottom.clone(), |acc, y| acc.join(y))
                    != **x
        })
        .cloned()
        .collect()
}

/// `Sf : S(A) → S(B)` for `f : A → B`.
#[derive(Clone, Debug)]
pub struct PushForward<'s> {
    sp_b: &'s Spectra,
    /// Per member `D` of `C(B)`: the members `C` of `C(A)` with `f(C) ⊆ D`,
    /// each with the point map `Σ(D) → Σ(C)`.
    sources: Vec<Vec<(usize, Vec<usize>)>>,
}

impl<'s> PushForward<'s> {
    pub fn new(
        a: &PartialBooleanAlgebra,
        sp_a: &Spectra,
        b: &PartialBooleanAlgebra,
        sp_b: &'s Spectra,
        f: &PbaMorphism,
    ) -> Result<Self> {
        check_spectra(sp_a)?;
        check_spectra(sp_b)?;
        f.check(a, b).map_err(|v| Error::domain(format!("not a morphism: {v}")))?;
        let sources = (0..sp_b.poset.len())
            .map(|d| {
                let dset = &sp_b.poset.members[d];
                (0..sp_a.poset.len())
                    .filter(|&c| sp_a.poset.members[c].ones().all(|x| dset.contains(f.apply(x))))
                    .map(|c| {
                        let map = sp_b.points[d]
                            .iter()
                            .map(|&q| {
                                sp_a.points[c]
                                    .iter()
                                    .position(|&p| b.leq(q, f.apply(p)))
                                    .expect("images of atoms cover the point")
                            })
                            .collect();
                        (c, map)
                    })
                    .collect()
            })
            .collect();
        Ok(Self { sp_b, sources })
    }

    pub fn apply(&self, x: &BohrElement) -> BohrElement {
        let opens = self
            .sources
            .iter()
            .map(|srcs| {
                srcs.iter().fold(0u64, |m, (c, map)| {
                    map.iter()
                        .enumerate()
                        .fold(m, |m, (q, &p)| if x.opens[*c] >> p & 1 == 1 { m | 1 << q } else { m })
                })
            })
            .collect();
        BohrElement { opens }
    }

    pub fn codomain(&self) -> &Spectra {
        self.sp_b
    }
}

/// A pair of frame elements (indices into the enumerated domain frame) and a
/// member `D` of the codomain where a law fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub f: usize,
    pub g: usize,
    pub member: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameMorphismReport {
    pub preserves_top: bool,
    pub preserves_bottom: bool,
    pub preserves_joins: bool,
    pub join_witness: Option<PairWitness>,
    pub preserves_binary_meets: bool,
    pub meet_witness: Option<PairWitness>,
    pub images_admissible: bool,
}

impl FrameMorphismReport {
    /// Top, the empty join and binary joins: all joins in a finite frame.
    pub fn preserves_all_joins(&self) -> bool {
        self.preserves_bottom && self.preserves_joins
    }

    pub fn is_frame_morphism(&self) -> bool {
        self.preserves_top && self.preserves_all_joins() && self.preserves_binary_meets && self.images_admissible
    }
}

fn first_difference(x: &BohrElement, y: &BohrElement) -> usize {
    x.opens.iter().zip(&y.opens).position(|(a, b)| a != b).expect("elements differ")
}

/// Checks `Sf` on every element and pair of the enumerated frame `frame_a`.
pub fn frame_morphism_report(sp_a: &Spectra, pf: &PushForward<'_>, frame_a: &[BohrElement]) -> FrameMorphismReport {
    let sp_b = pf.codomain();
    let images: Vec<BohrElement> = frame_a.iter().map(|x| pf.apply(x)).collect();
    let mut join_witness = None;
    let mut meet_witness = None;
    'outer: for i in 0..frame_a.len() {
        for j in i..frame_a.len() {
            if join_witness.is_none() {
                let lhs = pf.apply(&frame_a[i].join(&frame_a[j]));
                let rhs = images[i].join(&images[j]);
                if lhs != rhs {
                    join_witness = Some(PairWitness { f: i, g: j, member: first_difference(&lhs, &rhs) });
                }
            }
            if meet_witness.is_none() {
                let lhs = pf.apply(&frame_a[i].meet(&frame_a[j]));
                let rhs = images[i].meet(&images[j]);
                if lhs != rhs {
                    meet_witness = Some(PairWitness { f: i, g: j, member: first_difference(&lhs, &rhs) });
                }
            }
            if join_witness.is_some() && meet_witness.is_some() {
                break 'outer;
            }
        }
    }
    FrameMorphismReport {
        preserves_top: pf.apply(&BohrElement::top(sp_a)) == BohrElement::top(sp_b),
        preserves_bottom: pf.apply(&BohrElement::bottom(sp_a)) == BohrElement::bottom(sp_b),
        preserves_joins: join_witness.is_none(),
        join_witness,
        preserves_binary_meets: meet_witness.is_none(),
        meet_witness,
        images_admissible: images.iter().all(|y| admissible(sp_b, y)),
    }
}

/// `f(x) ⊙ f(y)` implies `x ⊙ y`.
pub fn reflects_commeasurability(a: &PartialBooleanAlgebra, b: &PartialBooleanAlgebra, f: &PbaMorphism) -> bool {
    (0..a.len()).all(|x| (x + 1..a.len()).all(|y| a.comm(x, y) || !b.comm(f.apply(x), f.apply(y))))
}

/// Whenever `f(C) ⊆ D` and `f(C') ⊆ D`, some `C'' ⊇ C, C'` has `f(C'') ⊆ D`.
pub fn lemma_condition_a(sp_a: &Spectra, sp_b: &Spectra, f: &PbaMorphism) -> bool {
    let lands = |c: usize, d: usize| {
        let dset = &sp_b.poset.members[d];
        sp_a.poset.members[c].ones().all(|x| dset.contains(f.apply(x)))
    };
    let n = sp_a.poset.len();
    (0..sp_b.poset.len()).all(|d| {
        let under: Vec<usize> = (0..n).filter(|&c| lands(c, d)).collect();
        under.iter().all(|&c| {
            under.iter().all(|&c2| {
                under
                    .iter()
                    .any(|&c3| sp_a.poset.leq(c, c3) && sp_a.poset.leq(c2, c3))
            })
        })
    })
}

/// `∅`, top, and a single point on the last maximal member.
pub fn three_families(sp: &Spectra) -> Result<[BohrElement; 3]> {
    check_spectra(sp)?;
    let last = sp.poset.len() - 1;
    let mut local = BohrElement::bottom(sp);
    if !sp.points[last].is_empty() {
        local.opens[last] = 1;
    }
    Ok([BohrElement::bottom(sp), BohrElement::top(sp), local])
}

/// Whether `A` is Kochen-Specker, so the limit `K(A)` is empty, while
/// `S(A)` has at least three elements.
pub fn two_dim_nontriviality(a: &PartialBooleanAlgebra) -> Result<bool> {
    if !is_kochen_specker(a)? {
        return Ok(false);
    }
    let sp = Spectra::of(a)?;
    let fams = three_families(&sp)?;
    let distinct: HashSet<&BohrElement> = fams.iter().collect();
    Ok(distinct.len() == 3 && fams.iter().all(|x| admissible(&sp, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::morphism::enumerate_morphisms;

    fn brute_force(sp: &Spectra) -> Vec<BohrElement> {
        let sizes: Vec<usize> = sp.points.iter().map(Vec::len).collect();
        let total: usize = sizes.iter().sum();
        let mut out = Vec::new();
        for code in 0u64..1 << total {
            let mut shift = 0;
            let opens = sizes
                .iter()
                .map(|&s| {
                    let m = (code >> shift) & full_mask(s);
                    shift += s;
                    m
                })
                .collect();
            let x = BohrElement { opens };
            if admissibility_violation(sp, &x).is_none() {
                out.push(x);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn paper_algebra_frame_has_seventeen_elements() {
        let a = corpus::paper_six();
        let sp = Spectra::of(&a).unwrap();
        let frame = enumerate_frame(&sp, DEFAULT_MAX_FRAME).unwrap();
        assert_eq!(frame.len(), 17);
        assert_eq!(frame, brute_force(&sp));
        check_frame_laws(&sp, &frame).unwrap();
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for a in [corpus::boolean(1), corpus::boolean(2), corpus::boolean(3), corpus::mo(3)] {
            let sp = Spectra::of(&a).unwrap();
            let frame = enumerate_frame(&sp, DEFAULT_MAX_FRAME).unwrap();
            assert_eq!(frame, brute_force(&sp));
            check_frame_laws(&sp, &frame).unwrap();
        }
        let sp = Spectra::of(&corpus::boolean(1)).unwrap();
        assert_eq!(enumerate_frame(&sp, 10).unwrap().len(), 2);
    }

    #[test]
    fn point_at_bottom_without_points_above_is_rejected() {
        let a = corpus::paper_six();
        let sp = Spectra::of(&a).unwrap();
        let mut x = BohrElement::bottom(&sp);
        x.opens[0] = 1;
        assert!(!admissible(&sp, &x));
        assert!(admissible(&sp, &BohrElement::top(&sp)));
        assert!(admissible(&sp, &BohrElement::bottom(&sp)));
    }

    #[test]
    fn paper_m_breaks_meets() {
        let (a, b, m) = corpus::paper_m();
        let (sp_a, sp_b) = (Spectra::of(&a).unwrap(), Spectra::of(&b).unwrap());
        let pf = PushForward::new(&a, &sp_a, &b, &sp_b, &m).unwrap();
        let frame = enumerate_frame(&sp_a, DEFAULT_MAX_FRAME).unwrap();
        let report = frame_morphism_report(&sp_a, &pf, &frame);
        assert!(report.preserves_top && report.preserves_all_joins());
        let w = report.meet_witness.clone().unwrap();
        let lhs = pf.apply(&frame[w.f].meet(&frame[w.g]));
        let rhs = pf.apply(&frame[w.f]).meet(&pf.apply(&frame[w.g]));
        assert_ne!(lhs.opens[w.member], rhs.opens[w.member]);
        assert!(!reflects_commeasurability(&a, &b, &m));
        assert!(!lemma_condition_a(&sp_a, &sp_b, &m));
    }

    #[test]
    fn identity_acts_as_identity() {
        let a = corpus::boolean(3);
        let sp = Spectra::of(&a).unwrap();
        let id = PbaMorphism::identity(&a);
        let pf = PushForward::new(&a, &sp, &a, &sp, &id).unwrap();
        for x in enumerate_frame(&sp, DEFAULT_MAX_FRAME).unwrap() {
            assert_eq!(pf.apply(&x), x);
        }
        assert!(reflects_commeasurability(&a, &a, &id));
    }

    #[test]
    fn conditions_agree_and_reflecting_maps_preserve_meets() {
        let algebras = [corpus::boolean(2), corpus::paper_six(), corpus::boolean(3)];
        for a in &algebras {
            let sp_a = Spectra::of(a).unwrap();
            let frame = enumerate_frame(&sp_a, DEFAULT_MAX_FRAME).unwrap();
            for b in &algebras {
                let sp_b = Spectra::of(b).unwrap();
                for f in enumerate_morphisms(a, b, 10_000).unwrap() {
                    let rc = reflects_commeasurability(a, b, &f);
                    assert_eq!(rc, lemma_condition_a(&sp_a, &sp_b, &f));
                    let pf = PushForward::new(a, &sp_a, b, &sp_b, &f).unwrap();
                    let report = frame_morphism_report(&sp_a, &pf, &frame);
                    assert!(report.preserves_top && report.preserves_all_joins() && report.images_admissible);
                    if rc {
                        assert!(report.preserves_binary_meets);
                    }
                }
            }
        }
    }

    #[test]
    fn nontriviality() {
        assert!(two_dim_nontriviality(&corpus::cabello18()).unwrap());
        assert!(!two_dim_nontriviality(&corpus::boolean(2)).unwrap());
        assert!(!two_dim_nontriviality(&corpus::boolean(1)).unwrap());
    }
}
