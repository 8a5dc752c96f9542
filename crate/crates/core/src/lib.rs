//! Graph-labeled representations of Mayer and virial coefficients: tree
//! sums over classes of rooted labeled trees, Ree-Hoover diagram sums,
//! complexity criteria on both, exact polynomial assembly of virial
//! coefficients, and Monte Carlo estimates of the underlying integrals.
//!
//! ```
//! use vlab_core::trees::{count_tr, enumerate_tr};
//!
//! assert_eq!(enumerate_tr(6).unwrap().len(), 44);
//! assert_eq!(count_tr(6), 44u32.into());
//! ```

pub mod criteria;
pub mod error;
pub mod graph;
pub mod mc;
pub mod numbers;
pub mod potential;
pub mod ree_hoover;
pub mod report;
pub mod scalar;
pub mod series;
pub mod trees;

pub use error::{Error, Result};
pub use scalar::{Linearized, Scalar};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Coefficient sequence in exact arithmetic.
pub type ExactSeq = series::CoeffSeq<Rational>;
/// Coefficient sequence in double precision.
pub type F64Seq = series::CoeffSeq<f64>;
/// Coefficient sequence in single precision.
pub type F32Seq = series::CoeffSeq<f32>;
/// Coefficient sequence of estimates carrying first-order error terms.
pub type EstimateSeq = series::CoeffSeq<Linearized>;
