//! Noncommutative modular symbols for weight-2 cusp forms on Γ₀(N) and the
//! real-analytic Eisenstein series twisted by them.
//!
//! The numerical core is generic over the real scalar type (see [`Real`]);
//! the aliases at the bottom of this file fix it to `f64`, which is what the
//! tolerances used throughout the test suite assume.

// `!(x > 0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cusp_forms;
pub mod eisenstein;
pub mod error;
pub mod free_series;
pub mod iterated_integrals;
pub mod modular_group;
pub mod scalar;
pub mod special;
pub mod stats;
pub mod verify;

pub use error::{NcmsError, Result};
pub use scalar::Real;

pub use cusp_forms::CuspForm;
pub use eisenstein::{EisParams, EisPayload, EisValue, HeightReport};
pub use free_series::{FreeSeries, Letter, Word};
pub use iterated_integrals::{ExpTermList, PathPoint, SymbolEngine};
pub use modular_group::{Cusp, CuspLabel, Gamma0, GroupElement, ScalingMatrix, UpperHalfPoint};

/// JSON schema tag written into every document the crate emits.
pub const SCHEMA_VERSION: &str = "ncms-1";

pub type Complex64 = num_complex::Complex<f64>;
pub type FreeSeries64 = FreeSeries<f64>;
pub type CuspForm64 = CuspForm<f64>;
pub type PathPoint64 = PathPoint<f64>;
pub type UpperHalfPoint64 = UpperHalfPoint<f64>;
pub type ScalingMatrix64 = ScalingMatrix<f64>;
pub type SymbolEngine64 = SymbolEngine<f64>;
pub type EisParams64 = EisParams<f64>;
pub type EisValue64 = EisValue<f64>;
