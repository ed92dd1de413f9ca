//! Complex vector potentials, their magnetic fields, admissibility data at a
//! point, and sampling checks of the global hypotheses.

mod conditions;
mod gamma;
mod potential;
mod scalar;
mod weyl;

pub use conditions::{
    check_c, check_h, CCheck, CVerdict, ConditionCheckConfig, HReport, Sign, TrendSign, TrendVerdict,
};
pub use gamma::{compute_q_at, gamma_scan, GammaCondition, GammaReport, Region, TAU_GAMMA};
pub use potential::{Monomial, Poly, Potential};
pub use scalar::Scalar;
pub use weyl::{poisson_bracket_direct, weyl_bracket, WeylSample};

use num_complex::Complex64;

use crate::cseries::{complexify, BiSeries, SeriesError};

/// Largest radius reported for fields whose Taylor data shows no decay.
pub const MAX_ANALYTIC_RADIUS: f64 = 10.0;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FieldError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("curl of A at the base point is {curl} but the Taylor data starts with {taylor}")]
    Inconsistent { taylor: Complex64, curl: Complex64 },
    #[error("field is not finite at the base point")]
    NonFinite,
    #[error("analytic radius must be positive, got {0}")]
    BadRadius(f64),
}

/// A potential together with the complexified Taylor data of its field at a base point.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    potential: Potential,
    base_point: [f64; 2],
    b_taylor: BiSeries,
    analytic_radius: f64,
}

impl FieldSpec {
    /// Expands `B` at `base_point` through degree `cap` and checks it against
    /// a finite-difference curl of `A`.
    pub fn new(potential: Potential, base_point: [f64; 2], cap: usize) -> Result<Self, FieldError> {
        let real = potential.b_real_taylor(base_point, cap);
        if real.terms().any(|(_, _, c)| !c.is_finite()) {
            return Err(FieldError::NonFinite);
        }
        let curl = fd_curl(&potential, base_point);
        let taylor = real.constant_term();
        if (curl - taylor).norm() > 1e-6 * taylor.norm().max(1.0) {
            return Err(FieldError::Inconsistent { taylor, curl });
        }
        let analytic_radius = root_test_radius(&real);
        Ok(Self {
            potential,
            base_point,
            b_taylor: complexify(&real),
            analytic_radius,
        })
    }

    pub fn with_analytic_radius(mut self, radius: f64) -> Result<Self, FieldError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(FieldError::BadRadius(radius));
        }
        self.analytic_radius = radius;
        Ok(self)
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn base_point(&self) -> [f64; 2] {
        self.base_point
    }

    /// `B~(z, w)` centred at the base point.
    pub fn b_taylor(&self) -> &BiSeries {
        &self.b_taylor
    }

    pub fn analytic_radius(&self) -> f64 {
        self.analytic_radius
    }

    pub fn degree_cap(&self) -> usize {
        self.b_taylor.cap()
    }

    pub fn b0(&self) -> Complex64 {
        self.b_taylor.constant_term()
    }

    /// `(d_z B, d_zbar B)` at the base point.
    pub fn wirtinger_at(&self) -> (Complex64, Complex64) {
        (self.b_taylor.coeff(1, 0), self.b_taylor.coeff(0, 1))
    }

    pub fn compute_q(&self) -> GammaReport {
        compute_q_at(&self.potential, self.base_point)
    }

    /// `A` at an offset `y` from the base point.
    pub fn a_at_offset(&self, y: [f64; 2]) -> [Complex64; 2] {
        self.potential
            .a_at([self.base_point[0] + y[0], self.base_point[1] + y[1]])
    }
}

fn fd_curl(p: &Potential, x: [f64; 2]) -> Complex64 {
    let h = 1e-5;
    let d1a2 = (p.a_at([x[0] + h, x[1]])[1] - p.a_at([x[0] - h, x[1]])[1]) / (2.0 * h);
    let d2a1 = (p.a_at([x[0], x[1] + h])[0] - p.a_at([x[0], x[1] - h])[0]) / (2.0 * h);
    d1a2 - d2a1
}

/// Root-test estimate `(M / |c_k|)^{1/k}` over the upper half of the degrees,
/// with `M` the largest coefficient of the lower half.
fn root_test_radius(real: &BiSeries) -> f64 {
    let d = real.cap();
    if d < 2 {
        return MAX_ANALYTIC_RADIUS;
    }
    let m = real.max_abs_in_degrees(0, d / 2);
    if m == 0.0 {
        return MAX_ANALYTIC_RADIUS;
    }
    (d / 2 + 1..=d)
        .filter_map(|k| {
            let s = real.max_abs_in_degrees(k, k);
            (s > 0.0).then(|| (m / s).powf(1.0 / k as f64))
        })
        .fold(MAX_ANALYTIC_RADIUS, f64::min)
        .max(1e-3)
}
