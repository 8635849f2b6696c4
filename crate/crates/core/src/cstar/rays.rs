//! Ray sets: orthogonal bases among a list of vectors become the blocks of a
//! pasted partial Boolean algebra.

use super::matrix::C64;
use crate::cliques::maximal_cliques;
use crate::error::{Error, Result};
use crate::pasting::{from_blocks, BlockHypergraph};
use crate::pba::PartialBooleanAlgebra;
use crate::ElemSet;

pub type Ray = Vec<C64>;

fn normalize(v: &[C64]) -> Option<Ray> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (n > 0.0).then(|| v.iter().map(|z| z / n).collect())
}

fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// The orthogonal bases among `rays` as a block hypergraph. Rays are labelled
/// `r1, r2, ...` by input position; rays in no basis are dropped.
pub fn ray_blocks(rays: &[Ray], dim: usize, eps: f64) -> Result<BlockHypergraph> {
    let mut unit = Vec::with_capacity(rays.len());
    for (i, r) in rays.iter().enumerate() {
        if r.len() != dim {
            return Err(Error::domain(format!("ray {} has {} coordinates, expected {dim}", i + 1, r.len())));
        }
        unit.push(normalize(r).ok_or_else(|| Error::domain(format!("ray {} is zero", i + 1)))?);
    }
    let n = unit.len();
    let mut adj = vec![ElemSet::with_capacity(n); n];
    for i in 0..n {
        for j in i + 1..n {
            let overlap = inner(&unit[i], &unit[j]).norm();
            if (overlap - 1.0).abs() <= eps {
                return Err(Error::domain(format!("rays {} and {} are parallel", i + 1, j + 1)));
            }
            if overlap <= eps {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    let bases: Vec<Vec<usize>> = maximal_cliques(&adj)
        .into_iter()
        .filter(|c| c.count_ones(..) == dim)
        .map(|c| c.ones().collect())
        .collect();
    if bases.is_empty() {
        return Err(Error::domain("no complete orthogonal basis among the rays"));
    }
    let mut used: Vec<usize> = bases.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let atoms = used.iter().map(|&i| format!("r{}", i + 1)).collect();
    let blocks = bases
        .iter()
        .map(|b| b.iter().map(|x| used.binary_search(x).expect("used")).collect())
        .collect();
    BlockHypergraph::loose(atoms, blocks)
}

/// Default cap on the number of rays after completion.
pub const MAX_COMPLETED_RAYS: usize = 4096;

fn completing_ray(rays: &[&Ray], dim: usize) -> Ray {
    let mut best: Option<(f64, Ray)> = None;
    for j in 0..dim {
        let mut v: Ray = (0..dim).map(|i| C64::new(f64::from(u8::from(i == j)), 0.0)).collect();
        for r in rays {
            let r = normalize(r).expect("nonzero ray");
            let c = inner(&r, &v);
            for (x, y) in v.iter_mut().zip(r.iter()) {
                *x -= c * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if best.as_ref().is_none_or(|(m, _)| n > *m) {
            best = Some((n, v));
        }
    }
    normalize(&best.expect("dim > 0").1).expect("rays do not span")
}

/// Closes a ray set so that its pasting is a partial Boolean algebra.
///
/// Atoms sharing a basis pairwise but not lying in one common basis form a
/// loop that no Boolean block contains. A loop of `dim - 1` rays is closed by
/// adding the unique ray orthogonal to all of them; repeated until no loop
/// remains. Shorter loops have no unique completion and are an error.
/// Returns the rays, the original ones first.
pub fn orthogonal_completion(rays: &[Ray], dim: usize, eps: f64) -> Result<Vec<Ray>> {
    let mut all: Vec<Ray> = rays.to_vec();
    loop {
        let h = ray_blocks(&all, dim, eps)?;
        let index: Vec<usize> = {
            let names: std::collections::HashMap<&str, usize> =
                h.atoms.iter().enumerate().map(|(k, a)| (a.as_str(), k)).collect();
            (0..all.len()).map(|i| names.get(format!("r{}", i + 1).as_str()).copied().unwrap_or(usize::MAX)).collect()
        };
        let used: Vec<usize> = (0..all.len()).filter(|&i| index[i] != usize::MAX).collect();
        let m = h.atoms.len();
        let mut share = vec![ElemSet::with_capacity(m); m];
        let block_sets: Vec<ElemSet> = h.blocks.iter().map(|b| crate::elem_set(m, b.iter().copied())).collect();
        for b in &h.blocks {
            for &x in b {
                for &y in b {
                    if x != y {
                        share[x].insert(y);
                    }
                }
            }
        }
        let mut added = Vec::new();
        for clique in maximal_cliques(&share) {
            if block_sets.iter().any(|b| clique.is_subset(b)) {
                continue;
            }
            let size = clique.count_ones(..);
            if size != dim - 1 {
                return Err(Error::domain(format!(
                    "{size} pairwise-orthogonal rays share bases pairwise but lie in no common basis"
                )));
            }
            let members: Vec<&Ray> = clique.ones().map(|k| &all[used[k]]).collect();
            let r = completing_ray(&members, dim);
            let fresh = all
                .iter()
                .chain(&added)
                .all(|q: &Ray| (inner(&normalize(q).expect("nonzero ray"), &r).norm() - 1.0).abs() > eps);
            if fresh {
                added.push(r);
            }
        }
        if added.is_empty() {
            return Ok(all);
        }
        all.extend(added);
        if all.len() > MAX_COMPLETED_RAYS {
            return Err(Error::SearchTooLarge {
                what: "completed ray set",
                limit: MAX_COMPLETED_RAYS,
            });
        }
    }
}

/// Pastes the rank-one projections of the rays along the orthogonal bases of
/// their [`orthogonal_completion`].
pub fn rays_to_pba(rays: &[Ray], dim: usize, eps: f64) -> Result<PartialBooleanAlgebra> {
    from_blocks(&ray_blocks(&orthogonal_completion(rays, dim, eps)?, dim, eps)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::iso::are_isomorphic;

    fn real(v: &[f64]) -> Ray {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn cabello_set_has_nine_bases() {
        let h = ray_blocks(&corpus::cabello18_rays(), 4, 1e-9).unwrap();
        assert_eq!(h.atoms.len(), 18);
        assert_eq!(h.blocks.len(), 9);
        for atom in 0..18 {
            assert_eq!(h.blocks.iter().filter(|b| b.contains(&atom)).count(), 2);
        }
    }

    #[test]
    fn cabello_completion_closes_six_loops() {
        let rays = orthogonal_completion(&corpus::cabello18_rays(), 4, 1e-9).unwrap();
        assert_eq!(rays.len(), 24);
        let h = ray_blocks(&rays, 4, 1e-9).unwrap();
        assert_eq!(h.blocks.len(), 24);
        for r in &rays[18..] {
            let orthogonal = rays.iter().filter(|q| inner(q, r).norm() < 1e-9).count();
            assert_eq!(orthogonal, 9);
        }
        assert!(rays_to_pba(&corpus::cabello18_rays(), 4, 1e-9).unwrap().validate().is_pass());
    }

    #[test]
    fn two_qubit_bases_give_paper_algebra() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rays = [real(&[1., 0.]), real(&[0., 1.]), real(&[h, h]), real(&[h, -h])];
        let a = rays_to_pba(&rays, 2, 1e-9).unwrap();
        assert!(are_isomorphic(&a, &corpus::paper_six()));
    }

    #[test]
    fn single_basis_is_cube() {
        let rays = [real(&[1., 0., 0.]), real(&[0., 1., 0.]), real(&[0., 0., 1.])];
        let a = rays_to_pba(&rays, 3, 1e-9).unwrap();
        assert!(are_isomorphic(&a, &corpus::boolean(3)));
    }

    #[test]
    fn no_basis_is_an_error() {
        let rays = [real(&[1., 0., 0.]), real(&[1., 1., 0.])];
        assert!(rays_to_pba(&rays, 3, 1e-9).is_err());
    }

    #[test]
    fn complex_rays() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rays = [
            vec![C64::new(h, 0.), C64::new(0., h)],
            vec![C64::new(h, 0.), C64::new(0., -h)],
        ];
        let a = rays_to_pba(&rays, 2, 1e-9).unwrap();
        assert_eq!(a.len(), 4);
    }
}
