//! Generalized Gegenbauer expansions on `[-1, 1]`.
//!
//! The weight family is `v(t) = |t|^(2 mu) * (1 - t^2)^(lambda - 1/2)` with
//! `lambda > -1/2` and `mu >= 0`. The crate provides:
//!
//! - stable evaluation of Jacobi, Gegenbauer, and generalized Gegenbauer
//!   polynomials, raw and orthonormal ([`special`]),
//! - Gauss-Jacobi quadrature and a derived rule for the weight `v`, with
//!   certified polynomial exactness ([`quadrature`]),
//! - forward/inverse transforms, weighted `L_p` norms, and sup-norm
//!   estimation ([`expansion`]),
//! - weighted coefficient functionals of Hardy-Littlewood and
//!   Hausdorff-Young type together with empirical verification harnesses
//!   for the associated inequalities ([`inequalities`], [`verify`]).
//!
//! Numerical kernels are generic over the scalar type through the [`Real`]
//! trait (implemented by `f32` and `f64`); the verification and report
//! layers are fixed to `f64`. Concrete `f64` aliases for the main types are
//! exported at the crate root.

pub mod error;
pub mod expansion;
pub mod extremum;
pub mod gamma;
pub mod inequalities;
pub mod io;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

/// Basis parameters over `f64`.
pub type BasisParams64 = special::BasisParams<f64>;
/// Jacobi parameters over `f64`.
pub type JacobiParams64 = special::JacobiParams<f64>;
/// Gauss-Jacobi rule over `f64`.
pub type GaussJacobiRule64 = quadrature::GaussJacobiRule<f64>;
/// Generalized Gegenbauer rule over `f64`.
pub type GenGegenbauerRule64 = quadrature::GenGegenbauerRule<f64>;
/// Orthonormal-basis coefficient vector over `f64`.
pub type CoefficientVector64 = expansion::CoefficientVector<f64>;
/// Test function over `f64`.
pub type TestFunction64 = expansion::TestFunction<f64>;
/// Precomputed orthonormal evaluator over `f64`.
pub type OrthonormalBasis64 = special::OrthonormalBasis<f64>;
