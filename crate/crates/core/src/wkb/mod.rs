//! Eikonal phase and transport hierarchy in complexified coordinates.
//!
//! Everything is centred at the base point `x0`, so `(z, w) = (0, 0)`
//! corresponds to `x0` and real points are recovered at `w = conj(z)`.

mod growth;
mod identities;
mod record;

pub use growth::{fit_growth, BoundFit};
pub use identities::{IdentityCheck, IdentityReport, IDENTITY_TOL};
pub use record::WkbRecord;

use num_complex::Complex64;

use crate::cseries::{
    compose_w, exact_divide_by_curve, implicit_w, integrate_from_curve, BiSeries, SeriesError, UniSeries, Var,
};
use crate::fieldmodel::{FieldSpec, TAU_GAMMA};

pub const DEFAULT_DEGREE_CAP: usize = 24;
pub const DEFAULT_ORDER: usize = 3;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum WkbError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("degree cap {cap} is too small for {order} transport steps (need at least {need})")]
    Budget { cap: usize, order: usize, need: usize },
    #[error("not in Γ: B vanishes at the base point")]
    FieldVanishes,
    #[error("not in Γ: d_zbar B vanishes at the base point")]
    Degenerate,
    #[error("{equation} (index {index}) fails at degree {degree}: residual {residual:.3e} against scale {scale:.3e}")]
    Identity {
        equation: String,
        index: usize,
        degree: usize,
        residual: f64,
        scale: f64,
    },
}

/// Smallest degree cap that leaves room for `order` transport steps.
pub fn required_cap(order: usize) -> usize {
    3 * (order + 2)
}

/// `phi~` with `4 d_z d_w phi~ = B~` and `phi~(z, 0) = phi~(0, w) = 0`.
pub fn poisson_series(btilde: &BiSeries) -> BiSeries {
    let d = btilde.cap();
    let mut phi = BiSeries::zero(d + 2).with_center(btilde.center());
    for (a, b, c) in btilde.terms() {
        phi.set(a + 1, b + 1, c / (4.0 * ((a + 1) * (b + 1)) as f64));
    }
    phi
}

/// `f` with `f' = -2 d_z phi~(z, w(z))`, `f(0) = 0`, and `S~ = phi~ + f`.
pub fn eikonal_phase(phi: &BiSeries, w_curve: &UniSeries) -> Result<(UniSeries, BiSeries), SeriesError> {
    let dz_phi = phi.differentiate(Var::Z);
    let f = compose_w(&dz_phi, w_curve)?.scale(Complex64::new(-2.0, 0.0)).antiderivative();
    let cap = f.cap().min(phi.cap());
    let s = &phi.truncate(cap) + &f.truncate(cap).to_bi().with_center(phi.center());
    Ok((f, s))
}

/// `V`, `F` with `d_z phi~(z,w) - d_z phi~(z,w(z)) = (w - w(z)) V` and
/// `B~(z,w) - B~(z,w(z)) = (w - w(z)) F`, both at cap `B~.cap - 1`.
pub fn divided_data(
    phi: &BiSeries,
    btilde: &BiSeries,
    w_curve: &UniSeries,
) -> Result<(BiSeries, BiSeries), SeriesError> {
    let d = btilde.cap();
    let minus_curve = |g: &BiSeries| -> Result<BiSeries, SeriesError> {
        let on = compose_w(g, w_curve)?.to_bi().with_center(g.center());
        Ok(g - &on)
    };
    let dz_phi = phi.differentiate(Var::Z).truncate(d);
    let v = exact_divide_by_curve(&minus_curve(&dz_phi)?, w_curve)?;
    let f = exact_divide_by_curve(&minus_curve(btilde)?, w_curve)?;
    Ok((v, f))
}

/// Output of the first transport equation.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstTransport {
    pub mu: Complex64,
    pub j: BiSeries,
    pub a0_z: UniSeries,
    pub a0: BiSeries,
}

/// Relative size under which `d_w J` counts as identically zero on the curve.
const FLAT_TOL: f64 = 1e-13;

/// `d_w J` and `d_z d_w J` restricted to the curve, or `None` when both vanish
/// identically (the field is constant along `w`).
fn j_on_curve(j: &BiSeries, w_curve: &UniSeries) -> Result<Option<(UniSeries, UniSeries)>, SeriesError> {
    let dw = j.differentiate(Var::W);
    let dzdw = dw.differentiate(Var::Z);
    let p = compose_w(&dw, w_curve)?;
    let q = compose_w(&dzdw, w_curve)?;
    if p.max_abs() <= FLAT_TOL && q.max_abs() <= FLAT_TOL {
        return Ok(None);
    }
    Ok(Some((p, q)))
}

/// `mu = B(0)`, `J = exp(-int_{[w(z), w]} F/(8V))`, the factor `A0` fixed by the
/// next compatibility constraint, and `a0 = A0 J`.
pub fn first_transport(
    btilde: &BiSeries,
    v: &BiSeries,
    f: &BiSeries,
    w_curve: &UniSeries,
) -> Result<FirstTransport, SeriesError> {
    let mu = btilde.constant_term();
    let ratio = f.checked_div(&v.scale(Complex64::new(8.0, 0.0)), "V")?;
    let j = integrate_from_curve(&(-&ratio), w_curve)?.exp();
    let d = j.cap();
    let a0_z = match j_on_curve(&j, w_curve)? {
        None => UniSeries::one(d - 1),
        Some((p, q)) => {
            let p = p.truncate(d - 2);
            let log_deriv = q.checked_mul(&p.reciprocal("d_w J on the curve")?)?;
            log_deriv.antiderivative().scale(Complex64::new(-1.0, 0.0)).exp()
        }
    };
    let a0 = &a0_z.to_bi().with_center(j.center()) * &j.truncate(d - 1);
    Ok(FirstTransport { mu, j, a0_z, a0 })
}

/// Data shared by every transport step.
pub struct TransportContext<'a> {
    pub w_curve: &'a UniSeries,
    pub v: &'a BiSeries,
    pub j: &'a BiSeries,
    pub a0_z: &'a UniSeries,
    pub a0: &'a BiSeries,
}

/// `a_{j+1}` from `a_j`, three degrees below it.
///
/// Writes `a_{j+1} = J int_{[w(z), w]} T_j/(2JV) + c(z) a0` with
/// `T_j = d_z d_w a_j / (w - w(z))`; `c(0) = 0` and `c'` is fixed by
/// requiring `d_z d_w a_{j+1}` to vanish on the curve.
pub fn transport_step(ctx: &TransportContext<'_>, a_j: &BiSeries) -> Result<BiSeries, SeriesError> {
    let cap = a_j.cap();
    assert!(cap >= 4, "transport step needs at least degree 4, got {cap}");
    let m = a_j.derivative(1, 1);
    let t = exact_divide_by_curve(&m, ctx.w_curve)?;
    let c3 = cap - 3;
    let jv = &ctx.j.truncate(c3) * &ctx.v.truncate(c3);
    let g = t.checked_div(&jv.scale(Complex64::new(2.0, 0.0)), "J V")?;
    let k = integrate_from_curve(&g, ctx.w_curve)?;
    let b = &ctx.j.truncate(cap - 2) * &k;
    let coefficient = match j_on_curve(ctx.j, ctx.w_curve)? {
        None => UniSeries::zero(c3),
        Some((p, _)) => {
            let gz = compose_w(&b.derivative(1, 1), ctx.w_curve)?.scale(Complex64::new(-1.0, 0.0));
            let denom = &p.truncate(cap - 4) * &ctx.a0_z.truncate(cap - 4);
            gz.checked_mul(&denom.reciprocal("d_w J A0 on the curve")?)?.antiderivative()
        }
    };
    Ok(&b.truncate(c3) + &(&coefficient.to_bi().with_center(b.center()) * &ctx.a0.truncate(c3)))
}

/// Phase, curve, transport data and amplitudes at a base point.
#[derive(Clone, Debug)]
pub struct WkbSolution {
    pub btilde: BiSeries,
    pub phi: BiSeries,
    pub w_curve: UniSeries,
    pub f: UniSeries,
    pub s: BiSeries,
    pub v: BiSeries,
    pub f_div: BiSeries,
    pub j: BiSeries,
    pub a0_z: UniSeries,
    pub amplitudes: Vec<BiSeries>,
    pub mu: Complex64,
    pub order: usize,
    pub trusted_radii: [f64; 2],
    pub identities: IdentityReport,
}

impl WkbSolution {
    /// Full construction at the field's base point with `order` transport steps.
    /// Every series identity is checked; the first failure aborts.
    pub fn build(field: &FieldSpec, order: usize) -> Result<Self, WkbError> {
        let btilde = field.b_taylor();
        let cap = btilde.cap();
        if cap < required_cap(order) {
            return Err(WkbError::Budget {
                cap,
                order,
                need: required_cap(order),
            });
        }
        if btilde.constant_term().norm() <= TAU_GAMMA {
            return Err(WkbError::FieldVanishes);
        }
        if btilde.coeff(0, 1).norm() <= TAU_GAMMA {
            return Err(WkbError::Degenerate);
        }
        let w_curve = implicit_w(btilde)?;
        Self::build_on_curve(btilde, w_curve, order)
    }

    /// Construction along a caller-supplied curve, which must satisfy
    /// `B~(z, w(z)) = B~(0, 0)`. Used directly for fields with `d_w B~ = 0`,
    /// where the implicit function theorem gives no curve but `w = 0` works.
    pub fn build_on_curve(btilde: &BiSeries, w_curve: UniSeries, order: usize) -> Result<Self, WkbError> {
        let cap = btilde.cap();
        if cap < required_cap(order) {
            return Err(WkbError::Budget {
                cap,
                order,
                need: required_cap(order),
            });
        }
        if btilde.constant_term().norm() <= TAU_GAMMA {
            return Err(WkbError::FieldVanishes);
        }
        let phi = poisson_series(btilde);
        let (f, s) = eikonal_phase(&phi, &w_curve)?;
        let (v, f_div) = divided_data(&phi, btilde, &w_curve)?;
        let first = first_transport(btilde, &v, &f_div, &w_curve)?;
        let mut amplitudes = vec![first.a0.clone()];
        {
            let ctx = TransportContext {
                w_curve: &w_curve,
                v: &v,
                j: &first.j,
                a0_z: &first.a0_z,
                a0: &first.a0,
            };
            for k in 0..order {
                let next = transport_step(&ctx, &amplitudes[k])?;
                amplitudes.push(next);
            }
        }
        let mut sol = WkbSolution {
            btilde: btilde.clone(),
            phi,
            w_curve,
            f,
            s,
            v,
            f_div,
            j: first.j,
            a0_z: first.a0_z,
            amplitudes,
            mu: first.mu,
            order,
            trusted_radii: [0.0; 2],
            identities: IdentityReport::default(),
        };
        sol.trusted_radii = trusted_radii(&sol.amplitudes);
        let report = identities::verify(&sol)?;
        if let Some(fail) = report.first_failure() {
            return Err(WkbError::Identity {
                equation: fail.name.clone(),
                index: fail.index,
                degree: fail.degree,
                residual: fail.residual,
                scale: fail.scale,
            });
        }
        sol.identities = report;
        Ok(sol)
    }

    /// `4 d_z d_w a~_N`, the complexified Laplacian of the last amplitude.
    pub fn laplacian_of_last(&self) -> BiSeries {
        self.amplitudes[self.order].derivative(1, 1).scale(Complex64::new(4.0, 0.0))
    }
}

/// Radius inside which every amplitude's coefficients decay: half the
/// smallest root-test estimate over the upper half of each series' degrees.
fn trusted_radii(amplitudes: &[BiSeries]) -> [f64; 2] {
    let mut r = f64::INFINITY;
    for a in amplitudes {
        let d = a.cap();
        if d < 4 {
            continue;
        }
        let m = a.max_abs_in_degrees(0, d / 2).max(f64::MIN_POSITIVE);
        for k in d / 2 + 1..=d {
            let s = a.max_abs_in_degrees(k, k);
            if s > 0.0 {
                r = r.min((m / s).powf(1.0 / k as f64));
            }
        }
    }
    let r = if r.is_finite() { 0.5 * r } else { 1.0 };
    [r, r]
}
