//! Finite-dimensional partial C*-algebra fragments over complex matrices.
//!
//! In finite dimensions every *-subalgebra is norm closed, and the
//! commutative ones are spans of their minimal projections, so generated
//! subalgebras are computed by joint diagonalization.

pub mod matrix;
pub mod mediating;
pub mod proj;
pub mod rays;
pub mod spectral;

pub use matrix::{amplify, commeasurable, is_normal, sa_parts, CMatrix, MatrixSeed, EPS_DERIVED, EPS_STRUCTURAL};
pub use spectral::{gen_comm_subalg, joint_spectral_projections, rp, sup_projections, CommutativeStarSubalgebra};
