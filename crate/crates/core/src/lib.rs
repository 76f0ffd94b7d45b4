//! Scaling-invariant (SI) and positively homogeneous (PH) functions:
//! canonical decomposition `f = φ ∘ p`, ray and level-set analysis,
//! Euler-type identities and seeded numerical probes.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases fix the scalar to `f64`.

// `!(a < b)` is used deliberately so NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decomposition;
pub mod error;
pub mod euler;
pub mod expr;
pub mod field;
pub mod gallery;
pub mod levelset;
pub mod quadrature;
pub mod ray;
pub mod report;
pub mod root;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use field::{FieldMeta, GradientSpec, RaySection, Regularity, ScalarField};
pub use report::Verdict;
pub use sampling::SamplingPlan;
pub use scalar::Real;

pub type Field64 = ScalarField<f64>;
pub type Field32 = ScalarField<f32>;
