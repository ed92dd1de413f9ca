//! Grid check of the two magnetic inequalities
//! `|int h Re B |u|^2| <= ||(-ih grad - Re A) u||^2` and
//! `|int h Im B |u|^2| <= ||(-ih grad - Re A) u||^2 + ||(Im A) u||^2`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{derivatives, Grid2D, GridFunction, NumopError, SUPPORT_LAYERS};
use crate::fieldmodel::FieldSpec;

/// Relative slack below which an inequality counts as violated.
pub const SLACK_TOL: f64 = 1e-6;

/// Both sides of both inequalities for one test function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagneticTerms {
    pub re_b_side: f64,
    pub im_b_side: f64,
    pub kinetic: f64,
    pub im_a_mass: f64,
}

impl MagneticTerms {
    /// `RHS - LHS` for the first and the second inequality.
    pub fn slacks(&self) -> [f64; 2] {
        [
            self.kinetic - self.re_b_side,
            self.kinetic + self.im_a_mass - self.im_b_side,
        ]
    }

    pub fn rhs(&self) -> [f64; 2] {
        [self.kinetic, self.kinetic + self.im_a_mass]
    }

    pub fn relative_slacks(&self) -> [f64; 2] {
        let [s1, s2] = self.slacks();
        let [r1, r2] = self.rhs();
        [s1 / r1, s2 / r2]
    }
}

/// Grid quadrature of the terms for `u`, which must vanish on the outer layers.
pub fn magnetic_terms(field: &FieldSpec, h: f64, u: &GridFunction) -> Result<MagneticTerms, NumopError> {
    if !(h > 0.0) {
        return Err(NumopError::Domain(h));
    }
    u.check_support()?;
    let grid = *u.grid();
    let n = grid.n();
    let base = field.base_point();
    let dx2 = grid.spacing() * grid.spacing();
    let rows: Vec<[f64; 4]> = (SUPPORT_LAYERS..n - SUPPORT_LAYERS)
        .into_par_iter()
        .map(|j| {
            let mut acc = [0.0; 4];
            for i in SUPPORT_LAYERS..n - SUPPORT_LAYERS {
                let v = u.at(i, j);
                let (g, _) = derivatives(u, i, j);
                if v == Complex64::new(0.0, 0.0) && g[0].norm() == 0.0 && g[1].norm() == 0.0 {
                    continue;
                }
                let y = grid.point(i, j);
                let x = [base[0] + y[0], base[1] + y[1]];
                let a = field.potential().a_at(x);
                let b = field.potential().b_at(x);
                let m = v.norm_sqr();
                let i_h = Complex64::new(0.0, -h);
                let k1 = i_h * g[0] - a[0].re * v;
                let k2 = i_h * g[1] - a[1].re * v;
                acc[0] += h * b.re * m;
                acc[1] += h * b.im * m;
                acc[2] += k1.norm_sqr() + k2.norm_sqr();
                acc[3] += (a[0].im * a[0].im + a[1].im * a[1].im) * m;
            }
            acc
        })
        .collect();
    let total = rows.iter().fold([0.0; 4], |mut s, r| {
        for k in 0..4 {
            s[k] += r[k];
        }
        s
    });
    Ok(MagneticTerms {
        re_b_side: (total[0] * dx2).abs(),
        im_b_side: (total[1] * dx2).abs(),
        kinetic: total[2] * dx2,
        im_a_mass: total[3] * dx2,
    })
}

/// `e^{-1/(1-r^2)}` bump of radius `rho` around `c`, times a quadratic
/// polynomial with coefficients `p` and a plane wave `e^{i k.x / h}`.
pub fn random_bump(rng: &mut impl Rng, reach: f64, h: f64) -> impl Fn([f64; 2]) -> Complex64 + Sync {
    let rho = rng.gen_range(0.3..0.6) * reach;
    let span = reach - rho;
    let c = [rng.gen_range(-span..span), rng.gen_range(-span..span)];
    let mut coeff = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let p: [Complex64; 6] = std::array::from_fn(|_| coeff());
    let k = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
    move |x: [f64; 2]| {
        let y = [(x[0] - c[0]) / rho, (x[1] - c[1]) / rho];
        let r2 = y[0] * y[0] + y[1] * y[1];
        if r2 >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let poly = p[0] + p[1] * y[0] + p[2] * y[1] + p[3] * y[0] * y[0] + p[4] * y[0] * y[1] + p[5] * y[1] * y[1];
        let wave = Complex64::from_polar(1.0, (k[0] * x[0] + k[1] * x[1]) / h);
        poly * wave * (-1.0 / (1.0 - r2)).exp()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub trials: Vec<MagneticTerms>,
    /// Smallest `RHS - LHS` over the trials, per inequality.
    pub worst_slack: [f64; 2],
    /// Smallest `(RHS - LHS) / RHS`, per inequality.
    pub worst_relative: [f64; 2],
    /// First trial with a relative slack below `-SLACK_TOL`.
    pub failing_trial: Option<usize>,
}

impl InequalityReport {
    pub fn holds(&self) -> bool {
        self.failing_trial.is_none()
    }
}

/// Both inequalities for `trials` seeded random bumps on an `n x n` grid
/// of half-width `half_width` around the base point.
pub fn verify_magnetic_inequalities(
    field: &FieldSpec,
    h: f64,
    trials: usize,
    seed: u64,
    half_width: f64,
    n: usize,
) -> Result<InequalityReport, NumopError> {
    let grid = Grid2D::new(half_width, n)?;
    let reach = half_width - (SUPPORT_LAYERS + 1) as f64 * grid.spacing();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::with_capacity(trials);
    for _ in 0..trials {
        let f = random_bump(&mut rng, reach, h);
        terms.push(magnetic_terms(field, h, &GridFunction::from_fn(grid, f))?);
    }
    let mut worst_slack = [f64::INFINITY; 2];
    let mut worst_relative = [f64::INFINITY; 2];
    let mut failing_trial = None;
    for (t, m) in terms.iter().enumerate() {
        let s = m.slacks();
        let r = m.relative_slacks();
        for k in 0..2 {
            worst_slack[k] = worst_slack[k].min(s[k]);
            worst_relative[k] = worst_relative[k].min(r[k]);
        }
        if failing_trial.is_none() && (r[0] < -SLACK_TOL || r[1] < -SLACK_TOL) {
            failing_trial = Some(t);
        }
    }
    Ok(InequalityReport {
        trials: terms,
        worst_slack,
        worst_relative,
        failing_trial,
    })
}
