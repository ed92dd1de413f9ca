//! Truncated power series in one and two complex variables.

mod bi;
mod curve;
mod elementary;
mod io;
mod uni;

use num_complex::Complex64;
use thiserror::Error;

pub use bi::{powers, BiSeries};
pub use curve::{
    complexify, compose_w, curve_factor, decomplexify, exact_divide_by_curve, implicit_w,
    integrate_from_curve, DIVISION_TOL,
};
pub use io::{CoeffRecord, SeriesRecord};
pub use uni::UniSeries;

/// Which of the two variables an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Z,
    W,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("degree caps differ ({left} vs {right})")]
    CapMismatch { left: usize, right: usize },
    #[error("expansion centers differ")]
    CenterMismatch,
    #[error("curve must pass through the center, but w(0) = {0}")]
    CurveOffCenter(Complex64),
    #[error("cannot invert {name}: its constant term vanishes")]
    VanishingConstant { name: String },
    #[error("numerator does not vanish on the curve: |coefficient of z^{degree}| = {max:.3e} > {tol:.3e}")]
    NotDivisible { max: f64, degree: usize, tol: f64 },
    #[error("not in Γ: ∂_z̄B vanishes at the base point")]
    DegenerateCurve,
    #[error("malformed series record: {0}")]
    Parse(String),
}
