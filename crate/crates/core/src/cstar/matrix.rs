use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for structural predicates (normality, commutation,
/// projection tests).
pub const EPS_STRUCTURAL: f64 = 1e-9;
/// Default tolerance for derived equalities.
pub const EPS_DERIVED: f64 = 1e-8;

pub type C64 = Complex64;

/// A square complex matrix with its operator norm cached.
#[derive(Clone, Debug)]
pub struct CMatrix {
    m: DMatrix<C64>,
    norm: f64,
}

impl PartialEq for CMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl CMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::domain(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("matrix has non-finite entries"));
        }
        Ok(Self::from_square(m))
    }

    fn from_square(m: DMatrix<C64>) -> Self {
        let norm = if m.is_empty() {
            0.0
        } else {
            m.clone().singular_values().iter().copied().fold(0.0, f64::max)
        };
        Self { m, norm }
    }

    /// Row-major real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = DMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0));
        Self::from_square(m)
    }

    /// Row-major complex entries given as `(re, im)` pairs.
    pub fn from_pairs(n: usize, entries: &[(f64, f64)]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::domain(format!("expected {} entries, found {}", n * n, entries.len())));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            let (re, im) = entries[i * n + j];
            C64::new(re, im)
        }))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_square(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_square(DMatrix::zeros(n, n))
    }

    pub fn diag(d: &[C64]) -> Self {
        Self::from_square(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }

    pub fn real_diag(d: &[f64]) -> Self {
        Self::diag(&d.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    pub fn sigma_x() -> Self {
        Self::from_real_rows(&[&[0., 1.], &[1., 0.]])
    }

    pub fn sigma_y() -> Self {
        let i = C64::i();
        let z = C64::new(0.0, 0.0);
        Self::from_square(DMatrix::from_row_slice(2, 2, &[z, -i, i, z]))
    }

    pub fn sigma_z() -> Self {
        Self::real_diag(&[1., -1.])
    }

    /// `v v*` for a vector `v` (not normalized).
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_square(DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.m
    }

    /// Operator norm (largest singular value).
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn adjoint(&self) -> Self {
        Self::from_square(self.m.adjoint())
    }

    pub fn scale(&self, z: C64) -> Self {
        Self::from_square(self.m.map(|x| x * z))
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// `‖self − other‖`.
    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.dim() == other.dim() && self.dist(other) <= eps
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.dist(&self.adjoint()) <= eps * self.norm.max(1.0)
    }

    /// `p* = p = p²` within `eps`.
    pub fn is_projection(&self, eps: f64) -> bool {
        self.is_hermitian(eps) && self.dist(&(self * self)) <= eps
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_square(self.m.kronecker(&other.m))
    }

    /// Entry `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    /// Row-major entries.
    pub fn entries(&self) -> Vec<C64> {
        let n = self.dim();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.m[(i, j)]).collect()
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix::from_square(&self.m * &rhs.m)
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix::from_square(&self.m + &rhs.m)
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix::from_square(&self.m - &rhs.m)
    }
}

/// `‖aa* − a*a‖ ≤ eps · max(1, ‖a‖²)`.
pub fn is_normal(a: &CMatrix, eps: f64) -> bool {
    let a_star = a.adjoint();
    (&(a * &a_star) - &(&a_star * a)).norm() <= eps * (a.norm() * a.norm()).max(1.0)
}

/// `(a₁, a₂)` with `a₁ = (a + a*)/2`, `a₂ = (a − a*)/2i`, both self-adjoint
/// and `a = a₁ + i a₂`.
pub fn sa_parts(a: &CMatrix) -> (CMatrix, CMatrix) {
    let a_star = a.adjoint();
    let a1 = (a + &a_star).scale_re(0.5);
    let a2 = (a - &a_star).scale(C64::new(0.0, -0.5));
    (a1, a2)
}

/// Why two matrices are not commeasurable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Incommeasurable {
    FirstNotNormal,
    SecondNotNormal,
    DoNotCommute,
    DimensionMismatch,
}

/// Commeasurability of normal matrices is commutation; a non-normal matrix
/// is commeasurable with nothing, not even itself.
pub fn commeasurability(a: &CMatrix, b: &CMatrix, eps: f64) -> Result<(), Incommeasurable> {
    if a.dim() != b.dim() {
        return Err(Incommeasurable::DimensionMismatch);
    }
    if !is_normal(a, eps) {
        return Err(Incommeasurable::FirstNotNormal);
    }
    if !is_normal(b, eps) {
        return Err(Incommeasurable::SecondNotNormal);
    }
    if a.commutator(b).norm() > eps * (a.norm() * b.norm()).max(1.0) {
        return Err(Incommeasurable::DoNotCommute);
    }
    Ok(())
}

pub fn commeasurable(a: &CMatrix, b: &CMatrix, eps: f64) -> bool {
    commeasurability(a, b, eps).is_ok()
}

/// `a ⊗ 1ₖ`.
pub fn amplify(a: &CMatrix, k: usize) -> CMatrix {
    a.kron(&CMatrix::identity(k))
}

/// A finite list of normal matrices of one dimension.
#[derive(Clone, Debug)]
pub struct MatrixSeed {
    pub dim: usize,
    pub generators: Vec<CMatrix>,
    pub tolerance: f64,
}

impl MatrixSeed {
    pub fn new(dim: usize, generators: Vec<CMatrix>, tolerance: f64) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.dim() != dim {
                return Err(Error::domain(format!("generator {i} has dimension {}, expected {dim}", g.dim())));
            }
            if !is_normal(g, tolerance) {
                return Err(Error::domain(format!("generator {i} is not normal")));
            }
        }
        Ok(Self {
            dim,
            generators,
            tolerance,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normality_examples() {
        assert!(is_normal(&CMatrix::identity(3), EPS_STRUCTURAL));
        assert!(!is_normal(&CMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]]), EPS_STRUCTURAL));
        assert!(is_normal(&CMatrix::sigma_y(), EPS_STRUCTURAL));
    }

    #[test]
    fn sa_parts_of_nilpotent() {
        let a = CMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]]);
        let (a1, a2) = sa_parts(&a);
        assert!(a1.approx_eq(&CMatrix::sigma_x().scale_re(0.5), 1e-15));
        assert!(a2.approx_eq(&CMatrix::sigma_y().scale_re(0.5), 1e-15));
        let i_id = CMatrix::identity(2).scale(C64::i());
        let (b1, b2) = sa_parts(&i_id);
        assert!(b1.approx_eq(&CMatrix::zeros(2), 0.0));
        assert!(b2.approx_eq(&CMatrix::identity(2), 0.0));
    }

    #[test]
    fn commeasurability_examples() {
        let d1 = CMatrix::real_diag(&[1., 2.]);
        let d2 = CMatrix::real_diag(&[3., -1.]);
        assert!(commeasurable(&d1, &d2, EPS_STRUCTURAL));
        assert_eq!(
            commeasurability(&CMatrix::sigma_x(), &CMatrix::sigma_z(), EPS_STRUCTURAL),
            Err(Incommeasurable::DoNotCommute)
        );
        let nil = CMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]]);
        assert_eq!(commeasurability(&nil, &nil, EPS_STRUCTURAL), Err(Incommeasurable::FirstNotNormal));
    }

    #[test]
    fn amplification() {
        assert!(amplify(&CMatrix::identity(2), 2).approx_eq(&CMatrix::identity(4), 0.0));
        assert!(amplify(&CMatrix::sigma_z(), 2).approx_eq(&CMatrix::real_diag(&[1., 1., -1., -1.]), 0.0));
    }

    #[test]
    fn norm_is_largest_singular_value() {
        let a = CMatrix::real_diag(&[1., -3., 2.]);
        assert!((a.norm() - 3.0).abs() < 1e-12);
    }
}
