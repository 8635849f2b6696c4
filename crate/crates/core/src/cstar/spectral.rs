//! Commutative *-subalgebras generated by commuting normal matrices, their
//! joint spectral projections, support projections and suprema.

use std::cmp::Ordering;

use nalgebra::DMatrix;

use super::matrix::{commeasurability, sa_parts, CMatrix, C64, EPS_DERIVED, EPS_STRUCTURAL};
use crate::error::{Error, Result};

/// A unital commutative *-subalgebra of `M_n`, presented by its minimal
/// projections. It is the span of those projections.
#[derive(Clone, Debug)]
pub struct CommutativeStarSubalgebra {
    pub dim: usize,
    /// Pairwise orthogonal, summing to the identity, ordered by joint
    /// eigenvalue.
    pub minimal_projections: Vec<CMatrix>,
    pub ranks: Vec<usize>,
    /// Joint eigenvalues of the generators' self-adjoint parts on each
    /// minimal projection.
    pub joint_eigenvalues: Vec<Vec<f64>>,
    pub generators: Vec<CMatrix>,
}

struct Piece {
    basis: DMatrix<C64>,
    key: Vec<f64>,
}

/// The least unital, *-closed, product-closed subspace containing `gens`,
/// computed by refining the eigenspaces of the generators' self-adjoint
/// parts. Eigenvalues closer than `eps · max(1, ‖h‖)` are merged; gaps
/// between that and ten times it are reported as degenerate.
pub fn gen_comm_subalg(dim: usize, gens: &[CMatrix], eps: f64) -> Result<CommutativeStarSubalgebra> {
    for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate().skip(i) {
            if let Err(why) = commeasurability(a, b, EPS_STRUCTURAL.max(eps / 10.0)) {
                return Err(Error::domain(format!("generators {i} and {j} are not commeasurable: {why:?}")));
            }
        }
    }
    let mut pieces = vec![Piece {
        basis: DMatrix::identity(dim, dim),
        key: Vec::new(),
    }];
    for g in gens {
        let (h1, h2) = sa_parts(g);
        for h in [h1, h2] {
            let tol = eps * h.norm().max(1.0);
            let mut next = Vec::new();
            for piece in pieces {
                let r = piece.basis.adjoint() * h.inner() * &piece.basis;
                let r = (&r + r.adjoint()).map(|z| z * 0.5);
                let eig = r.symmetric_eigen();
                let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
                order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(Ordering::Equal));
                let mut clusters: Vec<Vec<usize>> = Vec::new();
                for &k in &order {
                    let lambda = eig.eigenvalues[k];
                    match clusters.last_mut() {
                        Some(c) if (lambda - eig.eigenvalues[*c.last().expect("non-empty")]).abs() <= tol => c.push(k),
                        Some(c) => {
                            let gap = lambda - eig.eigenvalues[*c.last().expect("non-empty")];
                            if gap <= 10.0 * tol {
                                return Err(Error::Degenerate(format!(
                                    "eigenvalue gap {gap:.3e} is between the merge tolerance {tol:.1e} and ten times it"
                                )));
                            }
                            clusters.push(vec![k]);
                        }
                        None => clusters.push(vec![k]),
                    }
                }
                for c in clusters {
                    let cols: Vec<_> = c.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect();
                    let v = DMatrix::from_columns(&cols);
                    let mean = c.iter().map(|&k| eig.eigenvalues[k]).sum::<f64>() / c.len() as f64;
                    let mut key = piece.key.clone();
                    key.push(mean);
                    next.push(Piece {
                        basis: &piece.basis * v,
                        key,
                    });
                }
            }
            pieces = next;
        }
    }
    pieces.sort_by(|a, b| {
        let round = |x: f64| (x * 1e6).round() as i64;
        a.key
            .iter()
            .map(|&x| round(x))
            .cmp(b.key.iter().map(|&x| round(x)))
    });
    let minimal_projections = pieces
        .iter()
        .map(|p| CMatrix::new(&p.basis * p.basis.adjoint()).expect("square"))
        .collect();
    Ok(CommutativeStarSubalgebra {
        dim,
        ranks: pieces.iter().map(|p| p.basis.ncols()).collect(),
        joint_eigenvalues: pieces.into_iter().map(|p| p.key).collect(),
        minimal_projections,
        generators: gens.to_vec(),
    })
}

impl CommutativeStarSubalgebra {
    /// Vector-space dimension of the algebra.
    pub fn dimension(&self) -> usize {
        self.minimal_projections.len()
    }

    /// Hilbert–Schmidt orthonormal basis `pₖ / √rank(pₖ)`.
    pub fn basis(&self) -> Vec<CMatrix> {
        self.minimal_projections
            .iter()
            .zip(&self.ranks)
            .map(|(p, &r)| p.scale_re(1.0 / (r as f64).sqrt()))
            .collect()
    }

    /// Coefficients of the orthogonal projection of `b` onto the algebra in
    /// terms of the minimal projections.
    pub fn coefficients(&self, b: &CMatrix) -> Vec<C64> {
        self.minimal_projections
            .iter()
            .zip(&self.ranks)
            .map(|(p, &r)| (p * b).trace() / r as f64)
            .collect()
    }

    pub fn combine(&self, coeffs: &[C64]) -> CMatrix {
        coeffs
            .iter()
            .zip(&self.minimal_projections)
            .fold(CMatrix::zeros(self.dim), |acc, (&c, p)| &acc + &p.scale(c))
    }

    pub fn contains(&self, b: &CMatrix, eps: f64) -> bool {
        b.dist(&self.combine(&self.coefficients(b))) <= eps * b.norm().max(1.0)
    }

    /// Every projection in the algebra: sums of subsets of minimal
    /// projections, indexed by subset bitmask.
    pub fn projections(&self) -> Result<Vec<CMatrix>> {
        let k = self.minimal_projections.len();
        if k > 16 {
            return Err(Error::SearchTooLarge {
                what: "projections of a commutative subalgebra",
                limit: 1 << 16,
            });
        }
        Ok((0u32..1 << k)
            .map(|mask| {
                (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .fold(CMatrix::zeros(self.dim), |acc, i| &acc + &self.minimal_projections[i])
            })
            .collect())
    }
}

/// The minimal projections of `C`: pairwise orthogonal and summing to 1.
pub fn joint_spectral_projections(c: &CommutativeStarSubalgebra) -> Vec<CMatrix> {
    c.minimal_projections.clone()
}

/// Support projection of a normal `a`, with its verification data.
#[derive(Clone, Debug)]
pub struct RightProjection {
    pub projection: CMatrix,
    /// `‖a (1 − RP(a))‖`.
    pub residual: f64,
    /// Smallest absolute eigenvalue classified as nonzero, if any.
    pub smallest_nonzero: Option<f64>,
}

/// `RP(a)`: the sum of the spectral projections of `a` with nonzero
/// eigenvalue. An eigenvalue is zero below `eps · max(1, ‖a‖)`; anything up
/// to a thousand times that is ambiguous and reported as degenerate.
pub fn rp(a: &CMatrix, eps: f64) -> Result<RightProjection> {
    let c = gen_comm_subalg(a.dim(), std::slice::from_ref(a), EPS_DERIVED.min(eps * 10.0))?;
    rp_in(a, &c, eps)
}

/// [`rp`] inside a given commutative context containing `a`.
pub fn rp_in(a: &CMatrix, c: &CommutativeStarSubalgebra, eps: f64) -> Result<RightProjection> {
    if !c.contains(a, EPS_DERIVED.max(eps)) {
        return Err(Error::domain("element does not lie in the given commutative subalgebra"));
    }
    let zero_tol = eps * a.norm().max(1.0);
    let mut projection = CMatrix::zeros(a.dim());
    let mut smallest_nonzero: Option<f64> = None;
    for (lambda, p) in c.coefficients(a).into_iter().zip(&c.minimal_projections) {
        let mag = lambda.norm();
        if mag <= zero_tol {
            continue;
        }
        if mag <= 1e3 * zero_tol {
            return Err(Error::Degenerate(format!(
                "eigenvalue of modulus {mag:.3e} is neither zero (≤ {zero_tol:.1e}) nor clearly nonzero"
            )));
        }
        smallest_nonzero = Some(smallest_nonzero.map_or(mag, |s| s.min(mag)));
        projection = &projection + p;
    }
    let complement = &CMatrix::identity(a.dim()) - &projection;
    let residual = (a * &complement).norm();
    Ok(RightProjection {
        projection,
        residual,
        smallest_nonzero,
    })
}

/// Checks that `(1 − RP(a)) · C` is the right annihilator `{b ∈ C : ab = 0}`
/// by comparing, on every minimal projection `q` of `C`, whether `aq = 0`
/// with whether `q ≤ 1 − RP(a)`.
pub fn annihilator_check(a: &CMatrix, r: &RightProjection, c: &CommutativeStarSubalgebra, eps: f64) -> bool {
    let complement = &CMatrix::identity(a.dim()) - &r.projection;
    let tol = eps * a.norm().max(1.0);
    r.residual <= tol
        && c.minimal_projections.iter().all(|q| {
            let killed = (a * q).norm() <= tol;
            let under = (&complement * q).dist(q) <= eps;
            killed == under
        })
}

/// `⋁ P = 1 − ∏(1 − p)` for pairwise commuting projections.
pub fn sup_projections(dim: usize, ps: &[CMatrix], eps: f64) -> Result<CMatrix> {
    for (i, p) in ps.iter().enumerate() {
        if !p.is_projection(eps) {
            return Err(Error::domain(format!("element {i} is not a projection")));
        }
        for (j, q) in ps.iter().enumerate().skip(i + 1) {
            if p.commutator(q).norm() > eps {
                return Err(Error::domain(format!("projections {i} and {j} do not commute")));
            }
        }
    }
    let id = CMatrix::identity(dim);
    let rest = ps.iter().fold(id.clone(), |acc, p| &acc * &(&id - p));
    Ok(&id - &rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dimension of the span of words in `gens ∪ gens* ∪ {1}`, grown until
    /// it stabilizes, by Gram–Schmidt in the Hilbert–Schmidt inner product.
    fn word_closure_dimension(dim: usize, gens: &[CMatrix]) -> usize {
        let mut letters: Vec<CMatrix> = gens.to_vec();
        letters.extend(gens.iter().map(|g| g.adjoint()));
        let mut basis: Vec<DMatrix<C64>> = Vec::new();
        let add = |m: &CMatrix, basis: &mut Vec<DMatrix<C64>>| -> bool {
            let mut v = m.inner().clone();
            for b in basis.iter() {
                let c = b.dotc(&v);
                v -= b * c;
            }
            let nrm = v.norm();
            if nrm > 1e-9 {
                basis.push(v / C64::new(nrm, 0.0));
                true
            } else {
                false
            }
        };
        let mut frontier = vec![CMatrix::identity(dim)];
        add(&frontier[0], &mut basis);
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for l in &letters {
                    let nw = w * l;
                    if add(&nw, &mut basis) {
                        next.push(nw);
                    }
                }
            }
            frontier = next;
        }
        basis.len()
    }

    #[test]
    fn generated_dimensions() {
        let c = gen_comm_subalg(3, &[], EPS_DERIVED).unwrap();
        assert_eq!(c.dimension(), 1);
        let d = CMatrix::real_diag(&[1., 2., 2.]);
        let c = gen_comm_subalg(3, &[d.clone()], EPS_DERIVED).unwrap();
        assert_eq!(c.dimension(), 2);
        assert_eq!(word_closure_dimension(3, &[d.clone()]), 2);
        let e = CMatrix::real_diag(&[3., 3., 4.]);
        let c = gen_comm_subalg(3, &[d.clone(), e.clone()], EPS_DERIVED).unwrap();
        assert_eq!(c.dimension(), 3);
        assert_eq!(word_closure_dimension(3, &[d, e]), 3);
    }

    #[test]
    fn spectral_projections_of_diag() {
        let c = gen_comm_subalg(3, &[CMatrix::real_diag(&[1., 2., 2.])], EPS_DERIVED).unwrap();
        let p = joint_spectral_projections(&c);
        assert!(p[0].approx_eq(&CMatrix::real_diag(&[1., 0., 0.]), 1e-12));
        assert!(p[1].approx_eq(&CMatrix::real_diag(&[0., 1., 1.]), 1e-12));
        let sum = p.iter().fold(CMatrix::zeros(3), |acc, q| &acc + q);
        assert!(sum.approx_eq(&CMatrix::identity(3), 1e-12));
    }

    #[test]
    fn non_commuting_generators_rejected() {
        let err = gen_comm_subalg(2, &[CMatrix::sigma_x(), CMatrix::sigma_z()], EPS_DERIVED).unwrap_err();
        assert!(err.to_string().contains("0 and 1"));
    }

    #[test]
    fn near_degenerate_spectrum_is_reported() {
        let d = CMatrix::real_diag(&[1.0, 1.0 + 5e-8]);
        assert!(matches!(gen_comm_subalg(2, &[d], EPS_DERIVED), Err(Error::Degenerate(_))));
    }

    #[test]
    fn rp_examples() {
        let z = rp(&CMatrix::zeros(2), EPS_STRUCTURAL).unwrap();
        assert!(z.projection.approx_eq(&CMatrix::zeros(2), 1e-12));
        let inv = rp(&CMatrix::real_diag(&[2., -1.]), EPS_STRUCTURAL).unwrap();
        assert!(inv.projection.approx_eq(&CMatrix::identity(2), 1e-12));
        let a = CMatrix::real_diag(&[0., 3.]);
        let r = rp(&a, EPS_STRUCTURAL).unwrap();
        assert!(r.projection.approx_eq(&CMatrix::real_diag(&[0., 1.]), 1e-12));
        let c = gen_comm_subalg(2, &[CMatrix::real_diag(&[1., 2.])], EPS_DERIVED).unwrap();
        assert!(annihilator_check(&a, &r, &c, EPS_DERIVED));
    }

    #[test]
    fn rp_ambiguity() {
        let a = CMatrix::real_diag(&[1e-7, 3.]);
        assert!(matches!(rp(&a, EPS_STRUCTURAL), Err(Error::Degenerate(_))));
    }

    #[test]
    fn suprema() {
        let p = CMatrix::real_diag(&[1., 0., 0.]);
        let q = CMatrix::real_diag(&[0., 1., 0.]);
        let s = sup_projections(3, &[p.clone(), q], EPS_STRUCTURAL).unwrap();
        assert!(s.approx_eq(&CMatrix::real_diag(&[1., 1., 0.]), 1e-15));
        let not_p = &CMatrix::identity(3) - &p;
        let s = sup_projections(3, &[p, not_p], EPS_STRUCTURAL).unwrap();
        assert!(s.approx_eq(&CMatrix::identity(3), 1e-15));
        assert!(sup_projections(3, &[], EPS_STRUCTURAL).unwrap().approx_eq(&CMatrix::zeros(3), 0.0));
        let px = CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let pz = CMatrix::real_diag(&[1., 0.]);
        assert!(sup_projections(2, &[px, pz], EPS_STRUCTURAL).is_err());
    }
}
