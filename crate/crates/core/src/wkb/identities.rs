//! Series-level checks of the eikonal, transport and compatibility equations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::WkbSolution;
use crate::cseries::{compose_w, curve_factor, BiSeries, SeriesError, UniSeries, Var};

/// Every residual coefficient must be below this times the equation's scale.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub index: usize,
    pub degree: usize,
    pub residual: f64,
    pub scale: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: &str, index: usize, (degree, residual, scale): (usize, f64, f64)) -> Self {
        let scale = scale.max(f64::MIN_POSITIVE);
        Self {
            name: name.to_string(),
            index,
            degree,
            residual,
            scale,
            pass: residual <= IDENTITY_TOL * scale,
        }
    }

    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn first_failure(&self) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn worst_relative(&self) -> f64 {
        self.checks.iter().map(IdentityCheck::relative).fold(0.0, f64::max)
    }
}

/// Worst coefficient of `residual` relative to the matching coefficient of
/// `scale`, as `(degree, residual, scale)`.
fn worst<I: Iterator<Item = (usize, f64, f64)>>(items: I) -> (usize, f64, f64) {
    items
        .filter(|(_, r, _)| *r > 0.0)
        .fold((0, 0.0, 1.0), |best, cur| {
            if cur.1 * best.2 > best.1 * cur.2 {
                cur
            } else {
                best
            }
        })
}

/// Degrees whose scale acts as a floor for every coefficient, so that
/// cancellation upstream of the final expression is not mistaken for error.
const LEADING_DEGREES: usize = 2;

fn worst_bi(residual: &BiSeries, scale: &BiSeries) -> (usize, f64, f64) {
    let lead = scale.max_abs_in_degrees(0, LEADING_DEGREES);
    worst(residual.terms().map(|(a, b, c)| (a + b, c.norm(), scale.coeff(a, b).re.max(lead))))
}

fn worst_uni(residual: &UniSeries, scale: &UniSeries, from: usize) -> (usize, f64, f64) {
    let lead = scale.max_abs_in_degrees(0, LEADING_DEGREES);
    worst(
        residual
            .coeffs()
            .iter()
            .zip(scale.coeffs())
            .enumerate()
            .skip(from)
            .map(|(k, (r, s))| (k, r.norm(), s.re.max(lead))),
    )
}

/// Runs every check on a finished solution. Each residual coefficient is
/// compared with the same coefficient of the equation evaluated on
/// magnitudes, floored by that scale's low-degree part.
pub(super) fn verify(sol: &WkbSolution) -> Result<IdentityReport, SeriesError> {
    let mut checks = Vec::new();
    let center = sol.btilde.center();
    let w_abs = sol.w_curve.magnitude();
    let on = |g: &BiSeries| compose_w(g, &sol.w_curve);
    let on_abs = |g: &BiSeries| compose_w(&g.magnitude(), &w_abs);

    // The curve: B~(z, w(z)) = mu.
    checks.push(IdentityCheck::new(
        "level curve B(z, w(z)) = mu",
        0,
        worst_uni(&on(&sol.btilde)?, &on_abs(&sol.btilde)?, 1),
    ));

    // Eikonal: d_w S~ = d_w phi~, and 2 d_z phi~ + f' vanishes on the curve.
    let cap = sol.s.cap();
    let dw_phi = sol.phi.truncate(cap).differentiate(Var::W);
    let dw_gap = &sol.s.differentiate(Var::W) - &dw_phi;
    checks.push(IdentityCheck::new(
        "eikonal d_w S = d_w phi",
        0,
        worst_bi(&dw_gap, &dw_phi.magnitude()),
    ));
    let two = Complex64::new(2.0, 0.0);
    let fp = sol.f.derivative();
    let dz_phi = sol.phi.differentiate(Var::Z);
    let drive_on = &on(&dz_phi.scale(two))?.truncate(fp.cap()) + &fp;
    let drive_scale = &on_abs(&dz_phi.scale(two))?.truncate(fp.cap()) + &fp.magnitude();
    checks.push(IdentityCheck::new(
        "eikonal 2 d_z phi + f' on the curve",
        0,
        worst_uni(&drive_on, &drive_scale, 0),
    ));

    // J = 1 on the curve.
    let j_on = on(&sol.j)?;
    let j_gap = &j_on - &UniSeries::one(j_on.cap());
    let j_scale = &on_abs(&sol.j)? + &UniSeries::one(j_on.cap());
    checks.push(IdentityCheck::new("J = 1 on the curve", 0, worst_uni(&j_gap, &j_scale, 0)));

    // Transport in operator form:
    // [4(2 d_z phi~ + f') d_w + B~ - mu] a_k - 4 d_z d_w a_{k-1} = 0,
    // and in divided form:
    // (w - w(z)) [8V d_w + F] a_k - 4 d_z d_w a_{k-1} = 0.
    let four = Complex64::new(4.0, 0.0);
    let eight = Complex64::new(8.0, 0.0);
    let fp = fp.to_bi().with_center(center);
    for (k, a) in sol.amplitudes.iter().enumerate() {
        let c = a.cap() - 1;
        let dw_a = a.differentiate(Var::W);
        let a_c = a.truncate(c);
        let drive = &dz_phi.truncate(c).scale(two) + &fp.truncate(c);
        let drive_abs = &dz_phi.truncate(c).magnitude().scale(two) + &fp.truncate(c).magnitude();
        let shifted = sol.btilde.truncate(c).add_constant(-sol.mu);
        let source = match k {
            0 => BiSeries::zero(c).with_center(center),
            _ => sol.amplitudes[k - 1].derivative(1, 1).truncate(c).scale(four),
        };
        let lhs = &(&drive.scale(four) * &dw_a) + &(&shifted * &a_c);
        let scale = &(&(&drive_abs.scale(four) * &dw_a.magnitude()) + &(&shifted.magnitude() * &a_c.magnitude()))
            + &source.magnitude();
        checks.push(IdentityCheck::new("transport", k, worst_bi(&(&lhs - &source), &scale)));

        let factor = curve_factor(&sol.w_curve, c).with_center(center);
        let v8 = sol.v.truncate(c).scale(eight);
        let f_c = sol.f_div.truncate(c);
        let inner = &(&v8 * &dw_a) + &(&f_c * &a_c);
        let inner_abs = &(&v8.magnitude() * &dw_a.magnitude()) + &(&f_c.magnitude() * &a_c.magnitude());
        let divided = &factor * &inner;
        let scale = &(&factor.magnitude() * &inner_abs) + &source.magnitude();
        checks.push(IdentityCheck::new(
            "transport (divided form)",
            k,
            worst_bi(&(&divided - &source), &scale),
        ));

        let lap = a.derivative(1, 1).scale(four);
        checks.push(IdentityCheck::new(
            "compatibility 4 d_z d_w a on the curve",
            k,
            worst_uni(&on(&lap)?, &on_abs(&lap)?, 0),
        ));
    }
    Ok(IdentityReport { checks })
}
