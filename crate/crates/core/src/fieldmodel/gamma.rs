use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::potential::Potential;
use crate::cseries::Var;

/// Threshold for "vanishes" and "is positive" on evaluated quantities.
pub const TAU_GAMMA: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaCondition {
    ImANonzero,
    BVanishes,
    DzbarBVanishes,
    Q1NotPositive,
    DetNotPositive,
}

impl GammaCondition {
    pub fn describe(&self) -> &'static str {
        match self {
            GammaCondition::ImANonzero => "Im A does not vanish",
            GammaCondition::BVanishes => "B vanishes",
            GammaCondition::DzbarBVanishes => "d_zbar B vanishes",
            GammaCondition::Q1NotPositive => "Q1 is not positive",
            GammaCondition::DetNotPositive => "Q1 Q3 - Q2^2 is not positive",
        }
    }
}

/// Admissibility data at one point. `q1..q3` and `det2` are NaN when
/// `d_zbar B` vanishes, since the quotient defining them does not exist.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaReport {
    pub point: [f64; 2],
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub det2: f64,
    /// Coefficients of the quadratic part of `Re P`,
    /// `phase_form[0] x1^2 - 2 phase_form[1] x1 x2 + phase_form[2] x2^2`.
    /// The middle entry carries the `Im A` term with the opposite sign to `q2`.
    pub phase_form: [f64; 3],
    pub phase_positive: bool,
    pub im_a_norm: f64,
    pub b0: Complex64,
    pub dz_b: Complex64,
    pub dzbar_b: Complex64,
    pub in_gamma: bool,
    pub failed_conditions: Vec<GammaCondition>,
}

impl GammaReport {
    /// Builds the report from point data: `b0`, the Wirtinger derivatives of
    /// `B`, `Im A`, and `dim_a[i][j] = d_j Im A_i`.
    pub fn from_data(
        point: [f64; 2],
        b0: Complex64,
        dz_b: Complex64,
        dzbar_b: Complex64,
        im_a: [f64; 2],
        dim_a: [[f64; 2]; 2],
    ) -> Self {
        let im_a_norm = im_a[0].hypot(im_a[1]);
        let sym = 0.25 * (dim_a[1][0] + dim_a[0][1]);
        let (q1, q2_base, q3) = if dzbar_b.norm() > TAU_GAMMA {
            let ratio = dz_b / dzbar_b;
            (
                0.25 * (b0 * (1.0 + ratio)).re + 0.5 * dim_a[0][0],
                0.25 * (b0 * ratio).im,
                0.25 * (b0 * (1.0 - ratio)).re + 0.5 * dim_a[1][1],
            )
        } else {
            (f64::NAN, f64::NAN, f64::NAN)
        };
        let q2 = q2_base + sym;
        let det2 = q1 * q3 - q2 * q2;
        let phase_form = [q1, q2_base - sym, q3];
        let phase_det = q1 * q3 - phase_form[1] * phase_form[1];
        let phase_positive = q1 > TAU_GAMMA && phase_det > TAU_GAMMA;
        let mut failed = Vec::new();
        if !(im_a_norm <= TAU_GAMMA) {
            failed.push(GammaCondition::ImANonzero);
        }
        if !(b0.norm() > TAU_GAMMA) {
            failed.push(GammaCondition::BVanishes);
        }
        if !(dzbar_b.norm() > TAU_GAMMA) {
            failed.push(GammaCondition::DzbarBVanishes);
        }
        if !(q1 > TAU_GAMMA) {
            failed.push(GammaCondition::Q1NotPositive);
        }
        if !(det2 > TAU_GAMMA) {
            failed.push(GammaCondition::DetNotPositive);
        }
        Self {
            point,
            q1,
            q2,
            q3,
            det2,
            phase_form,
            phase_positive,
            im_a_norm,
            b0,
            dz_b,
            dzbar_b,
            in_gamma: failed.is_empty(),
            failed_conditions: failed,
        }
    }

    pub fn failure_summary(&self) -> String {
        self.failed_conditions
            .iter()
            .map(|c| c.describe())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Admissibility data of `potential` at `x`, using exact second-order jets of `A`.
pub fn compute_q_at(potential: &Potential, x: [f64; 2]) -> GammaReport {
    let [a1, a2] = potential.jets(x, 2);
    let b = &a2.differentiate(Var::Z) - &a1.differentiate(Var::W);
    let (b10, b01) = (b.coeff(1, 0), b.coeff(0, 1));
    let i = Complex64::new(0.0, 1.0);
    let dz_b = 0.5 * (b10 - i * b01);
    let dzbar_b = 0.5 * (b10 + i * b01);
    let im_a = [a1.constant_term().im, a2.constant_term().im];
    let dim_a = [
        [a1.coeff(1, 0).im, a1.coeff(0, 1).im],
        [a2.coeff(1, 0).im, a2.coeff(0, 1).im],
    ];
    GammaReport::from_data(x, b.constant_term(), dz_b, dzbar_b, im_a, dim_a)
}

/// Axis-aligned rectangle `[x1_min, x1_max] x [x2_min, x2_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
}

impl Region {
    pub fn square(half_width: f64) -> Self {
        Self {
            x1: [-half_width, half_width],
            x2: [-half_width, half_width],
        }
    }

    /// `n x n` grid points including the edges, `x2` varying slowest.
    pub fn grid(&self, n: usize) -> Vec<[f64; 2]> {
        let step = |lo: f64, hi: f64, k: usize| {
            if n == 1 {
                lo
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        };
        (0..n)
            .flat_map(|j| (0..n).map(move |i| [step(self.x1[0], self.x1[1], i), step(self.x2[0], self.x2[1], j)]))
            .collect()
    }
}

/// Admissibility reports on an `n x n` grid of `region`.
pub fn gamma_scan(potential: &Potential, region: &Region, n: usize) -> Vec<GammaReport> {
    region
        .grid(n)
        .into_par_iter()
        .map(|x| compute_q_at(potential, x))
        .collect()
}
