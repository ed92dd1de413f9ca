//! The cut-off pseudomode `u_h = chi e^{-P/h} sum_j h^j a_j` in the
//! original gauge, its norm and its residual.

mod cutoff;
mod fit;
mod report;

pub use cutoff::{lambda_min, select_delta, smooth_step, CutoffJet, CutoffSpec};
pub use fit::{fit_decay, line_fit, DecayFit, DecayModel};
pub use report::{Evaluator, ResidualReport, CSV_HEADER};

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cseries::{decomplexify, powers, BiSeries, Var};
use crate::fieldmodel::FieldSpec;
use crate::quadrature::{adaptive, tensor_integrals};
use crate::wkb::WkbSolution;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest tolerated mismatch between the series field and `curl A` on the
/// cutoff disc, relative to `max(1, |B|)`.
pub const CURL_TOL: f64 = 1e-6;
/// Largest tolerated relative difference between two quadrature resolutions.
pub const QUAD_TOL: f64 = 0.01;
/// Absolute tolerance of the radial gauge integral.
const THETA_TOL: f64 = 1e-13;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PseudomodeError {
    #[error("the quadratic part of Re P is not positive definite (smallest eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("no radius keeps Re P above M1 |x|^2")]
    NoValidityDisc,
    #[error("series field and curl A differ by {mismatch:.3e} at offset {point:?}")]
    InconsistentField { point: [f64; 2], mismatch: f64 },
    #[error("h must be positive, got {0}")]
    Domain(f64),
    #[error("quadrature unresolved: relative change {rel_change:.3e} at {points} points per axis; try at least {required}")]
    Unresolved {
        rel_change: f64,
        points: usize,
        required: usize,
    },
    #[error("decay fit needs at least 4 reports spanning a decade of h")]
    TooFewReports,
}

/// How many transport corrections enter `u_h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NRule {
    Fixed { n: usize },
    /// `floor((e m h)^{-1/7})`, clipped to the computed amplitudes.
    Adaptive { m: f64 },
}

impl NRule {
    pub fn order(&self, h: f64, available: usize) -> usize {
        match *self {
            NRule::Fixed { n } => {
                if n > available {
                    log::warn!("fixed N = {n} clipped to the {available} computed corrections");
                }
                n.min(available)
            }
            NRule::Adaptive { m } => {
                let raw = (std::f64::consts::E * m * h).powf(-1.0 / 7.0).floor();
                let n = if raw.is_finite() { raw.max(0.0) as usize } else { available };
                if n > available {
                    log::warn!("adaptive N = {n} at h = {h} clipped to {available}");
                }
                n.min(available)
            }
        }
    }
}

/// Real-coordinate data of the series at one point, for every computed order.
#[derive(Clone, Debug)]
pub struct PointValue {
    pub s: Complex64,
    pub theta: Complex64,
    /// `grad S + i M`, which equals `grad P + i A`.
    pub g: [Complex64; 2],
    pub a: Vec<Complex64>,
    pub grad_a: Vec<[Complex64; 2]>,
    pub lap_a: Vec<Complex64>,
}

impl PointValue {
    pub fn p(&self) -> Complex64 {
        self.s + I * self.theta
    }
}

/// Real-coordinate derivative series, precomputed once.
#[derive(Clone, Debug)]
struct RealSeries {
    s: BiSeries,
    theta_m: BiSeries,
    g: [BiSeries; 2],
    a: Vec<BiSeries>,
    grad_a: Vec<[BiSeries; 2]>,
    lap_a: Vec<BiSeries>,
    cap: usize,
}

fn d1(s: &BiSeries) -> BiSeries {
    &s.differentiate(Var::Z) + &s.differentiate(Var::W)
}

fn d2(s: &BiSeries) -> BiSeries {
    (&s.differentiate(Var::Z) - &s.differentiate(Var::W)).scale(I)
}

/// `x1 = (z + w)/2` and `x2 = (z - w)/(2i)` as series.
fn coordinates(cap: usize, center: [Complex64; 2]) -> [BiSeries; 2] {
    let z = BiSeries::variable(Var::Z, cap).with_center(center);
    let w = BiSeries::variable(Var::W, cap).with_center(center);
    [(&z + &w).scale(Complex64::new(0.5, 0.0)), (&z - &w).scale(Complex64::new(0.0, -0.5))]
}

impl RealSeries {
    fn new(sol: &WkbSolution) -> Self {
        let phi = &sol.phi;
        let center = phi.center();
        // Canonical potential M = (-d2 phi, d1 phi).
        let m = [d2(phi).scale(Complex64::new(-1.0, 0.0)), d1(phi)];
        let cap_m = m[0].cap();
        let [x1, x2] = coordinates(cap_m, center);
        let radial = &(&m[0] * &x1) + &(&m[1] * &x2);
        // int_0^1 M(tx).x dt: the degree-k part of M.x picks up 1/k.
        let mut theta_m = BiSeries::zero(cap_m).with_center(center);
        for k in 1..=cap_m {
            theta_m = &theta_m + &radial.homogeneous_part(k).scale(Complex64::new(1.0 / k as f64, 0.0));
        }
        let s = sol.s.clone();
        let cs = s.cap() - 1;
        let g = [
            &d1(&s) + &m[0].truncate(cs).scale(I),
            &d2(&s) + &m[1].truncate(cs).scale(I),
        ];
        let a = sol.amplitudes.clone();
        let grad_a = a.iter().map(|a| [d1(a), d2(a)]).collect();
        let lap_a = a.iter().map(|a| a.derivative(1, 1).scale(Complex64::new(4.0, 0.0))).collect();
        let cap = s.cap().max(theta_m.cap());
        Self {
            s,
            theta_m,
            g,
            a,
            grad_a,
            lap_a,
            cap,
        }
    }
}

/// The phase `P = S + i theta` in the original gauge, with the real-coordinate
/// series data needed to evaluate amplitudes and residuals pointwise.
#[derive(Clone, Debug)]
pub struct Phase {
    field: FieldSpec,
    sol: Arc<WkbSolution>,
    series: RealSeries,
}

impl Phase {
    pub fn new(field: &FieldSpec, sol: Arc<WkbSolution>) -> Self {
        let series = RealSeries::new(&sol);
        Self {
            field: field.clone(),
            sol,
            series,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn solution(&self) -> &WkbSolution {
        &self.sol
    }

    /// `(Q1, Q2, Q3)` with `Re P(x) = Q1 x1^2 - 2 Q2 x1 x2 + Q3 x2^2 + O(|x|^3)`,
    /// read off the series and the first derivatives of `A`.
    pub fn quad_form(&self) -> [f64; 3] {
        let s = decomplexify(&self.series.s);
        let t = decomplexify(&self.series.theta_m);
        let da = self.field.potential().first_partials(self.field.base_point());
        // theta = Theta_M - int_0^1 A(tx).x dt, whose quadratic part is x.DA x / 2.
        let c20 = s.coeff(2, 0).re - t.coeff(2, 0).im + 0.5 * da[0][0].im;
        let c11 = s.coeff(1, 1).re - t.coeff(1, 1).im + 0.5 * (da[0][1] + da[1][0]).im;
        let c02 = s.coeff(0, 2).re - t.coeff(0, 2).im + 0.5 * da[1][1].im;
        [c20, -0.5 * c11, c02]
    }

    /// Gauge function `theta(x) = int_0^1 (M - A)(tx).x dt` at an offset `x`.
    pub fn theta(&self, x: [f64; 2]) -> Complex64 {
        let (zp, wp) = self.powers_at(x);
        self.theta_with(x, &zp, &wp)
    }

    fn theta_with(&self, x: [f64; 2], zp: &[Complex64], wp: &[Complex64]) -> Complex64 {
        let tm = self.series.theta_m.eval_with_powers(zp, wp);
        let integrand = |t: f64| {
            let a = self.field.a_at_offset([t * x[0], t * x[1]]);
            a[0] * x[0] + a[1] * x[1]
        };
        tm - adaptive(&integrand, 0.0, 1.0, THETA_TOL)
    }

    fn powers_at(&self, x: [f64; 2]) -> (Vec<Complex64>, Vec<Complex64>) {
        (
            powers(Complex64::new(x[0], x[1]), self.series.cap),
            powers(Complex64::new(x[0], -x[1]), self.series.cap),
        )
    }

    /// `P = S + i theta` at an offset `x`.
    pub fn value(&self, x: [f64; 2]) -> Complex64 {
        let (zp, wp) = self.powers_at(x);
        self.series.s.eval_with_powers(&zp, &wp) + I * self.theta_with(x, &zp, &wp)
    }

    /// Every real-coordinate quantity at `x` for orders `0..=n`.
    pub fn point(&self, x: [f64; 2], n: usize) -> PointValue {
        let (zp, wp) = self.powers_at(x);
        let ev = |s: &BiSeries| s.eval_with_powers(&zp, &wp);
        let r = &self.series;
        PointValue {
            s: ev(&r.s),
            theta: self.theta_with(x, &zp, &wp),
            g: [ev(&r.g[0]), ev(&r.g[1])],
            a: r.a[..=n].iter().map(ev).collect(),
            grad_a: r.grad_a[..=n].iter().map(|g| [ev(&g[0]), ev(&g[1])]).collect(),
            lap_a: r.lap_a[..=n].iter().map(ev).collect(),
        }
    }

    /// Compares the series field with `curl A` on the circle of radius `r`.
    pub fn check_field_consistency(&self, r: f64) -> Result<(), PseudomodeError> {
        let base = self.field.base_point();
        for k in 0..16 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
            let x = [r * t.cos(), r * t.sin()];
            let series = self.sol.btilde.realify(x);
            let exact = self.field.potential().b_at([base[0] + x[0], base[1] + x[1]]);
            let mismatch = (series - exact).norm() / exact.norm().max(1.0);
            if mismatch > CURL_TOL {
                return Err(PseudomodeError::InconsistentField { point: x, mismatch });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Pseudomode {
    phase: Phase,
    cutoff: CutoffSpec,
    rule: NRule,
    quad_form: [f64; 3],
    amplitude_tails: Vec<f64>,
}

impl Pseudomode {
    /// Builds the pseudomode and picks the cutoff. `delta` overrides the
    /// automatic validity radius.
    pub fn new(
        field: &FieldSpec,
        sol: Arc<WkbSolution>,
        rule: NRule,
        delta: Option<f64>,
    ) -> Result<Self, PseudomodeError> {
        let phase = Phase::new(field, sol);
        let quad_form = phase.quad_form();
        let lmin = lambda_min(quad_form);
        if !(lmin > 0.0) {
            return Err(PseudomodeError::NotPositive(lmin));
        }
        let m1 = 0.5 * lmin;
        let re_p = |x: [f64; 2]| phase.value(x).re;
        let cutoff = match delta {
            Some(d) => select_delta(re_p, d, m1)
                .filter(|c| c.delta == d)
                .ok_or(PseudomodeError::NoValidityDisc)?,
            None => {
                let r_max = (0.5 * field.analytic_radius()).min(phase.sol.trusted_radii[0]);
                select_delta(re_p, r_max, m1).ok_or(PseudomodeError::NoValidityDisc)?
            }
        };
        phase.check_field_consistency(cutoff.r_out)?;
        let amplitude_tails = amplitude_tails(&phase.series, cutoff.r_out);
        Ok(Self {
            phase,
            cutoff,
            rule,
            quad_form,
            amplitude_tails,
        })
    }

    pub fn phase(&self) -> &Phase {
        &self.phase
    }

    pub fn field(&self) -> &FieldSpec {
        &self.phase.field
    }

    pub fn solution(&self) -> &WkbSolution {
        &self.phase.sol
    }

    pub fn cutoff(&self) -> &CutoffSpec {
        &self.cutoff
    }

    pub fn rule(&self) -> NRule {
        self.rule
    }

    pub fn with_rule(mut self, rule: NRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn n_used(&self, h: f64) -> usize {
        self.rule.order(h, self.phase.sol.order)
    }

    /// See [`Phase::quad_form`].
    pub fn quad_form(&self) -> [f64; 3] {
        self.quad_form
    }

    /// `u_h(x)`.
    pub fn u(&self, x: [f64; 2], h: f64) -> Complex64 {
        let chi = self.cutoff.value(x);
        if chi == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.n_used(h);
        let pv = self.phase.point(x, n);
        let sum = (0..=n).fold(Complex64::new(0.0, 0.0), |acc, j| acc + pv.a[j] * h.powi(j as i32));
        (-pv.p() / h).exp() * sum * chi
    }

    /// `(u_h, interior residual, cutoff residual)` at `x`, where the residual
    /// of `(L - h mu) u_h` splits into `chi e^{-P/h} h^{N+2} (-Delta a_N)` and
    /// the commutator terms supported where `grad chi != 0`.
    pub fn residual_parts(&self, x: [f64; 2], h: f64) -> [Complex64; 3] {
        let zero = Complex64::new(0.0, 0.0);
        let jet = self.cutoff.jet(x);
        if jet.value == 0.0 && jet.laplacian == 0.0 {
            return [zero; 3];
        }
        let n = self.n_used(h);
        let pv = self.phase.point(x, n);
        let e = (-pv.p() / h).exp();
        let mut sum = zero;
        let mut grad = [zero; 2];
        let mut hj = 1.0;
        for j in 0..=n {
            sum += pv.a[j] * hj;
            grad[0] += pv.grad_a[j][0] * hj;
            grad[1] += pv.grad_a[j][1] * hj;
            hj *= h;
        }
        let u = e * sum * jet.value;
        let interior = -e * pv.lap_a[n] * (jet.value * h.powi(n as i32 + 2));
        let gdot = pv.g[0] * jet.grad[0] + pv.g[1] * jet.grad[1];
        let cut = (-h * h * jet.laplacian + 2.0 * h * gdot) * sum
            - 2.0 * h * h * (jet.grad[0] * grad[0] + jet.grad[1] * grad[1]);
        [u, interior, e * cut]
    }

    /// Series-truncation tail of `sum_j h^j a_j` at the outer radius.
    pub fn tail_estimate(&self, h: f64) -> f64 {
        let n = self.n_used(h);
        (0..=n).map(|j| self.amplitude_tails[j] * h.powi(j as i32)).sum()
    }
}

/// Largest modulus of each amplitude on the circle of radius `r`.
fn amplitude_tails(series: &RealSeries, r: f64) -> Vec<f64> {
    series
        .a
        .iter()
        .map(|a| {
            (0..16)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
                    let z = Complex64::from_polar(r, t);
                    a.evaluate(z, z.conj()).1
                })
                .fold(0.0, f64::max)
        })
        .collect()
}

/// `||f||_{L^2}` over `[-r, r]^2` and the relative change between `n` and `2n`
/// points per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    pub norm: f64,
    pub rel_change: f64,
    pub points: usize,
}

/// Points per axis resolving the Gaussian scale `sqrt(h)` on `[-r, r]`.
pub fn points_per_axis(r: f64, h: f64) -> usize {
    64.max((8.0 * r / h.sqrt()).ceil() as usize)
}

/// Tensor Gauss-Legendre estimate of several `L^2` norms at once: `n` and
/// `2n` points per axis, refusing if any nonzero norm moves by more than
/// [`QUAD_TOL`].
pub fn norms_l2<const K: usize, F: Fn([f64; 2]) -> [Complex64; K] + Sync>(
    f: F,
    r: f64,
    h: f64,
) -> Result<[NormEstimate; K], PseudomodeError> {
    if !(h > 0.0) {
        return Err(PseudomodeError::Domain(h));
    }
    let n = points_per_axis(r, h);
    let sq = |x: [f64; 2]| f(x).map(|v| v.norm_sqr());
    let coarse = tensor_integrals(sq, r, n);
    let fine = tensor_integrals(sq, r, 2 * n);
    let mut out = [NormEstimate {
        norm: 0.0,
        rel_change: 0.0,
        points: 2 * n,
    }; K];
    for k in 0..K {
        let rel = if fine[k] > 0.0 {
            (fine[k] - coarse[k]).abs() / fine[k]
        } else {
            0.0
        };
        if rel > QUAD_TOL {
            return Err(PseudomodeError::Unresolved {
                rel_change: rel,
                points: 2 * n,
                required: 4 * n,
            });
        }
        out[k] = NormEstimate {
            norm: fine[k].max(0.0).sqrt(),
            rel_change: rel,
            points: 2 * n,
        };
    }
    Ok(out)
}

/// `||f||_{L^2}` of one function; see [`norms_l2`].
pub fn norm_l2<F: Fn([f64; 2]) -> Complex64 + Sync>(f: F, r: f64, h: f64) -> Result<NormEstimate, PseudomodeError> {
    norms_l2(|x| [f(x)], r, h).map(|[e]| e)
}

/// Residual ratio `||(L - h mu) u_h|| / ||u_h||` from the series identities.
pub fn residual_series_exact(pm: &Pseudomode, h: f64) -> Result<ResidualReport, PseudomodeError> {
    if !(h > 0.0) {
        return Err(PseudomodeError::Domain(h));
    }
    let [u, interior, cut, total] = norms_l2(
        |x| {
            let [u, i, c] = pm.residual_parts(x, h);
            [u, i, c, i + c]
        },
        pm.cutoff().r_out,
        h,
    )?;
    Ok(ResidualReport {
        h,
        n_used: pm.n_used(h),
        evaluator: Evaluator::SeriesExact,
        u_norm: u.norm,
        residual_norm: total.norm,
        ratio: total.norm / u.norm,
        quad_points: u.points,
        tail_estimate: pm.tail_estimate(h),
        interior_norm: Some(interior.norm),
        cutoff_norm: Some(cut.norm),
    })
}
