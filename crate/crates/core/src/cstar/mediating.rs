//! Cocones of *-morphisms out of the commutative subalgebras of a seed
//! fragment, and the mediating map `m(a) = f⟨a₁⟩(a₁) + i f⟨a₂⟩(a₂)`.

use super::matrix::{commeasurable, is_normal, sa_parts, CMatrix, MatrixSeed, C64, EPS_DERIVED};
use super::spectral::{gen_comm_subalg, CommutativeStarSubalgebra};
use crate::error::{Error, Result};

/// A family of legs `f_C : C → B`, one per commutative subalgebra.
pub trait StarCocone {
    fn leg(&self, c: &CommutativeStarSubalgebra, a: &CMatrix) -> CMatrix;
}

/// Every leg is the inclusion into `M_n`.
pub struct Inclusion;

impl StarCocone for Inclusion {
    fn leg(&self, _: &CommutativeStarSubalgebra, a: &CMatrix) -> CMatrix {
        a.clone()
    }
}

/// Every leg is `a ↦ u a u*`.
pub struct Conjugation {
    pub u: CMatrix,
}

impl StarCocone for Conjugation {
    fn leg(&self, _: &CommutativeStarSubalgebra, a: &CMatrix) -> CMatrix {
        &(&self.u * a) * &self.u.adjoint()
    }
}

/// Every leg is the character `a ↦ ⟨v, a v⟩` into `M_1 = ℂ`; a *-morphism on
/// subalgebras having the unit vector `v` as a joint eigenvector.
pub struct Character {
    pub v: Vec<C64>,
}

impl StarCocone for Character {
    fn leg(&self, _: &CommutativeStarSubalgebra, a: &CMatrix) -> CMatrix {
        let n = self.v.len();
        let mut s = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                s += self.v[i].conj() * a.at(i, j) * self.v[j];
            }
        }
        CMatrix::diag(&[s])
    }
}

/// The commutative subalgebras the cocone is checked on: those generated by
/// each subset of a commuting seed, and by the self-adjoint parts of each
/// generator.
pub fn fragment_subalgebras(seed: &MatrixSeed) -> Result<Vec<CommutativeStarSubalgebra>> {
    let g = &seed.generators;
    if g.len() > 12 {
        return Err(Error::SearchTooLarge {
            what: "seed subsets",
            limit: 12,
        });
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << g.len() {
        let subset: Vec<CMatrix> = (0..g.len()).filter(|i| mask >> i & 1 == 1).map(|i| g[i].clone()).collect();
        let pairwise = subset
            .iter()
            .enumerate()
            .all(|(i, a)| subset[i + 1..].iter().all(|b| commeasurable(a, b, seed.tolerance)));
        if pairwise {
            out.push(gen_comm_subalg(seed.dim, &subset, EPS_DERIVED)?);
        }
    }
    for a in g {
        let (a1, a2) = sa_parts(a);
        out.push(gen_comm_subalg(seed.dim, &[a1], EPS_DERIVED)?);
        out.push(gen_comm_subalg(seed.dim, &[a2], EPS_DERIVED)?);
    }
    Ok(out)
}

fn subalgebra_within(c: &CommutativeStarSubalgebra, d: &CommutativeStarSubalgebra, eps: f64) -> bool {
    c.minimal_projections.iter().all(|p| d.contains(p, eps))
}

/// The mediating map of a coherent cocone.
pub struct Mediating<'c, K: StarCocone> {
    cocone: &'c K,
    dim: usize,
}

impl<K: StarCocone> Mediating<'_, K> {
    /// `m(a) = f⟨a₁⟩(a₁) + i f⟨a₂⟩(a₂)` for normal `a`.
    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        if !is_normal(a, EPS_DERIVED) {
            return Err(Error::domain("mediating map is defined on normal elements only"));
        }
        let (a1, a2) = sa_parts(a);
        let c1 = gen_comm_subalg(self.dim, std::slice::from_ref(&a1), EPS_DERIVED)?;
        let c2 = gen_comm_subalg(self.dim, std::slice::from_ref(&a2), EPS_DERIVED)?;
        let m1 = self.cocone.leg(&c1, &a1);
        let m2 = self.cocone.leg(&c2, &a2);
        Ok(&m1 + &m2.scale(C64::i()))
    }
}

/// Checks coherence of the cocone on the fragment (legs agree along every
/// inclusion `C ⊆ C'`, tested on the minimal projections of `C`) and returns
/// the mediating map. An incoherent pair is reported by fragment index.
pub fn mediating_cstar<'c, K: StarCocone>(seed: &MatrixSeed, cocone: &'c K, eps: f64) -> Result<Mediating<'c, K>> {
    let frag = fragment_subalgebras(seed)?;
    for (i, c) in frag.iter().enumerate() {
        for (j, d) in frag.iter().enumerate() {
            if i == j || !subalgebra_within(c, d, EPS_DERIVED) {
                continue;
            }
            for p in &c.minimal_projections {
                if cocone.leg(c, p).dist(&cocone.leg(d, p)) > eps {
                    return Err(Error::IncoherentCocone(i, j));
                }
            }
        }
    }
    Ok(Mediating { cocone, dim: seed.dim })
}

/// Checks `m ∘ i_C = f_C` on the minimal projections and generators of every
/// fragment subalgebra; returns the largest deviation.
pub fn mediating_residual<K: StarCocone>(seed: &MatrixSeed, m: &Mediating<'_, K>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for c in fragment_subalgebras(seed)? {
        for x in c.minimal_projections.iter().chain(&c.generators) {
            worst = worst.max(m.apply(x)?.dist(&m.cocone.leg(&c, x)));
        }
    }
    Ok(worst)
}

/// The clauses of a partial *-morphism checked on sample elements: unit,
/// adjoint, complex scaling, and on commeasurable pairs preservation of
/// commeasurability, sums, products and `f(a + ib) = f(a) + i f(b)` for
/// self-adjoint pairs. Returns the first failing clause.
pub fn check_star_morphism(
    f: &dyn Fn(&CMatrix) -> Result<CMatrix>,
    dim: usize,
    samples: &[CMatrix],
    eps: f64,
) -> Result<(), String> {
    let close = |x: &CMatrix, y: &CMatrix, scale: f64| x.dist(y) <= eps * scale.max(1.0);
    let fm = |x: &CMatrix| f(x).map_err(|e| e.to_string());
    let id = CMatrix::identity(dim);
    let f_id = fm(&id)?;
    if !close(&f_id, &CMatrix::identity(f_id.dim()), 1.0) {
        return Err("unit not preserved".into());
    }
    let z = C64::new(0.6, -1.3);
    for (i, a) in samples.iter().enumerate() {
        let fa = fm(a)?;
        if !close(&fm(&a.adjoint())?, &fa.adjoint(), a.norm()) {
            return Err(format!("adjoint not preserved at sample {i}"));
        }
        if !close(&fm(&a.scale(z))?, &fa.scale(z), a.norm() * z.norm()) {
            return Err(format!("scalar action not preserved at sample {i}"));
        }
        for (j, b) in samples.iter().enumerate() {
            if !commeasurable(a, b, eps) {
                continue;
            }
            let fb = fm(b)?;
            let scale = a.norm().max(1.0) * b.norm().max(1.0);
            if !commeasurable(&fa, &fb, eps * scale) {
                return Err(format!("commeasurability not preserved at ({i}, {j})"));
            }
            if !close(&fm(&(a + b))?, &(&fa + &fb), scale) {
                return Err(format!("sum not preserved at ({i}, {j})"));
            }
            if !close(&fm(&(a * b))?, &(&fa * &fb), scale) {
                return Err(format!("product not preserved at ({i}, {j})"));
            }
            if a.is_hermitian(eps) && b.is_hermitian(eps) {
                let lhs = fm(&(a + &b.scale(C64::i())))?;
                if !close(&lhs, &(&fa + &fb.scale(C64::i())), scale) {
                    return Err(format!("a + ib not preserved at ({i}, {j})"));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar::matrix::EPS_STRUCTURAL;

    fn diag_seed() -> MatrixSeed {
        MatrixSeed::new(
            3,
            vec![CMatrix::real_diag(&[1., 2., 3.]), CMatrix::real_diag(&[0., 0., 5.])],
            EPS_STRUCTURAL,
        )
        .unwrap()
    }

    #[test]
    fn inclusion_cocone_mediates_to_identity() {
        let seed = diag_seed();
        let m = mediating_cstar(&seed, &Inclusion, 1e-10).unwrap();
        let a = CMatrix::diag(&[C64::new(1., 2.), C64::new(-1., 0.5), C64::new(0., 0.)]);
        assert!(m.apply(&a).unwrap().approx_eq(&a, 1e-10));
        assert!(mediating_residual(&seed, &m).unwrap() < 1e-10);
    }

    #[test]
    fn character_cocone() {
        let seed = diag_seed();
        let v = vec![C64::new(0., 0.), C64::new(1., 0.), C64::new(0., 0.)];
        let chi = Character { v };
        let m = mediating_cstar(&seed, &chi, 1e-10).unwrap();
        let a = CMatrix::diag(&[C64::new(1., 2.), C64::new(-1., 0.5), C64::new(0., 0.)]);
        let value = m.apply(&a).unwrap();
        assert!(value.approx_eq(&CMatrix::diag(&[C64::new(-1., 0.5)]), 1e-10));
    }

    #[test]
    fn incoherent_cocone_is_reported() {
        struct ByDimension;
        impl StarCocone for ByDimension {
            fn leg(&self, c: &CommutativeStarSubalgebra, a: &CMatrix) -> CMatrix {
                if c.dimension() > 2 {
                    a.adjoint().scale_re(0.0)
                } else {
                    a.clone()
                }
            }
        }
        let err = mediating_cstar(&diag_seed(), &ByDimension, 1e-10).err().unwrap();
        assert!(matches!(err, Error::IncoherentCocone(..)));
    }

    #[test]
    fn conjugation_is_a_star_morphism() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMatrix::from_real_rows(&[&[h, h], &[h, -h]]);
        let conj = Conjugation { u };
        let f = |a: &CMatrix| -> Result<CMatrix> { Ok(conj.leg(&gen_comm_subalg(2, &[], EPS_DERIVED)?, a)) };
        let samples = [CMatrix::sigma_z(), CMatrix::real_diag(&[2., -1.]), CMatrix::sigma_x()];
        assert_eq!(check_star_morphism(&f, 2, &samples, 1e-10), Ok(()));
    }
}
