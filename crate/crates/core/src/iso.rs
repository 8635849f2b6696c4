//! Isomorphism search between finite partial Boolean algebras.

use crate::morphism::PbaMorphism;
use crate::pba::PartialBooleanAlgebra;
use crate::search::HomSearch;
use crate::ElemSet;

/// Per-element invariants preserved by isomorphisms, used to prune
/// candidates.
fn signature(a: &PartialBooleanAlgebra, x: usize) -> (usize, usize, usize) {
    let degree = a.comm_row(x).count_ones(..);
    let below = a.comm_row(x).ones().filter(|&y| a.leq(y, x)).count();
    let above = a.comm_row(x).ones().filter(|&y| a.leq(x, y)).count();
    (degree, below, above)
}

/// A bijective morphism `a → b` whose inverse is a morphism, if one exists.
/// The first one in lexicographic order is returned.
pub fn find_isomorphism(a: &PartialBooleanAlgebra, b: &PartialBooleanAlgebra) -> Option<PbaMorphism> {
    if a.len() != b.len() {
        return None;
    }
    let sig_b: Vec<_> = (0..b.len()).map(|y| signature(b, y)).collect();
    let mut sorted_a: Vec<_> = (0..a.len()).map(|x| signature(a, x)).collect();
    let mut sorted_b = sig_b.clone();
    sorted_a.sort_unstable();
    sorted_b.sort_unstable();
    if sorted_a != sorted_b {
        return None;
    }
    let candidates = (0..a.len())
        .map(|x| {
            let s = signature(a, x);
            let mut set = ElemSet::with_capacity(b.len());
            for (y, t) in sig_b.iter().enumerate() {
                if *t == s {
                    set.insert(y);
                }
            }
            set
        })
        .collect();
    HomSearch::new(a, b)
        .injective(true)
        .reflect_comm(true)
        .candidates(candidates)
        .first()
        .map(PbaMorphism::new)
}

pub fn are_isomorphic(a: &PartialBooleanAlgebra, b: &PartialBooleanAlgebra) -> bool {
    find_isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::morphism::check_map;

    #[test]
    fn isomorphism_is_a_bijective_morphism_with_morphism_inverse() {
        let a = corpus::paper_six();
        let b = corpus::mo(2);
        let f = find_isomorphism(&a, &b).unwrap();
        assert!(f.is_morphism(&a, &b));
        let mut inv = vec![0; b.len()];
        for (x, &y) in f.map.iter().enumerate() {
            inv[y] = x;
        }
        assert!(check_map(&b, &a, &inv).is_ok());
    }

    #[test]
    fn distinguishes_boolean_from_pasting() {
        assert!(!are_isomorphic(&corpus::boolean(3), &corpus::mo(3)));
        assert!(!are_isomorphic(&corpus::mo(2), &corpus::mo(3)));
        assert!(are_isomorphic(&corpus::boolean(2), &corpus::boolean(2)));
    }
}
