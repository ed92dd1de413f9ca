//! Operations tied to a holomorphic curve `w = w(z)` through the center:
//! restriction, implicit definition, and exact division by `w - w(z)`.

use num_complex::Complex64;

use super::bi::BiSeries;
use super::uni::UniSeries;
use super::{SeriesError, Var};

/// Relative tolerance for "vanishes on the curve" checks.
pub const DIVISION_TOL: f64 = 1e-10;

/// Relative size below which `d_w B(0,0)` counts as zero for [`implicit_w`].
const DEGENERATE_TOL: f64 = 1e-12;

fn check_through_center(w_of_z: &UniSeries) -> Result<(), SeriesError> {
    let w0 = w_of_z.constant_term();
    if w0.norm() > 1e-14 * w_of_z.max_abs().max(1.0) {
        return Err(SeriesError::CurveOffCenter(w0));
    }
    Ok(())
}

/// Coefficient series `a_beta(z) = sum_alpha a[alpha, beta] z^alpha` at cap `d`.
fn w_slice(a: &BiSeries, beta: usize, d: usize) -> UniSeries {
    let mut s = UniSeries::zero(d);
    let c = s.coeffs_mut();
    for alpha in 0..=d {
        if alpha + beta <= a.cap() {
            c[alpha] = a.coeff(alpha, beta);
        }
    }
    s
}

/// `z -> a(z, w(z))`, exact through `min(a.cap, w.cap)`.
pub fn compose_w(a: &BiSeries, w_of_z: &UniSeries) -> Result<UniSeries, SeriesError> {
    check_through_center(w_of_z)?;
    let d = a.cap().min(w_of_z.cap());
    let w = w_of_z.truncate(d);
    let mut acc = w_slice(a, a.cap(), d);
    for beta in (0..a.cap()).rev() {
        acc = &(&acc * &w) + &w_slice(a, beta, d);
    }
    Ok(acc)
}

/// The curve `w(z)` with `w(0) = 0` on which `B(z, w(z)) = B(0, 0)`.
///
/// Solved degree by degree: the `z^k` coefficient of `B(z, w(z))` depends on
/// the unknown `w_k` only through `d_w B(0,0) * w_k`, so each step is one
/// Newton correction with the exact Jacobian.
pub fn implicit_w(btilde: &BiSeries) -> Result<UniSeries, SeriesError> {
    let d = btilde.cap();
    let slope = btilde.coeff(0, 1);
    if slope.norm() <= DEGENERATE_TOL * btilde.max_abs().max(f64::MIN_POSITIVE) {
        return Err(SeriesError::DegenerateCurve);
    }
    let mut w = UniSeries::zero(d);
    for k in 1..=d {
        let restricted = compose_w(btilde, &w)?;
        let wk = -restricted.coeff(k) / slope;
        w.coeffs_mut()[k] = wk;
    }
    Ok(w)
}

/// The bivariate series `w - w(z)`.
pub fn curve_factor(w_of_z: &UniSeries, cap: usize) -> BiSeries {
    let mut f = BiSeries::variable(Var::W, cap);
    for k in 0..=cap.min(w_of_z.cap()) {
        let v = f.coeff(k, 0) - w_of_z.coeff(k);
        f.set(k, 0, v);
    }
    f
}

/// Quotient `q` with `num = (w - w(z)) q`, exact through `num.cap - 1`.
///
/// Fails when some coefficient of `num(z, w(z))` exceeds [`DIVISION_TOL`]
/// times the larger of `num`'s biggest coefficient and the same coefficient
/// computed from magnitudes.
pub fn exact_divide_by_curve(num: &BiSeries, w_of_z: &UniSeries) -> Result<BiSeries, SeriesError> {
    let d = num.cap();
    if w_of_z.cap() < d {
        return Err(SeriesError::CapMismatch {
            left: d,
            right: w_of_z.cap(),
        });
    }
    let remainder = compose_w(num, w_of_z)?;
    let scale = compose_w(&num.magnitude(), &w_of_z.magnitude())?;
    let floor = num.max_abs();
    for (k, (r, s)) in remainder.coeffs().iter().zip(scale.coeffs()).enumerate() {
        let tol = DIVISION_TOL * s.re.max(floor);
        if r.norm() > tol {
            return Err(SeriesError::NotDivisible {
                max: r.norm(),
                degree: k,
                tol,
            });
        }
    }
    if d == 0 {
        return Ok(BiSeries::zero(0).with_center(num.center()));
    }
    // Synthetic division in w with coefficients in C[[z]]:
    // q_{k-1} = n_k + w(z) q_k, starting from q_{d-1} = n_d.
    let c = w_of_z.truncate(d);
    let mut q = BiSeries::zero(d - 1).with_center(num.center());
    let mut qk = UniSeries::zero(d);
    for k in (1..=d).rev() {
        qk = &(&c * &qk) + &w_slice(num, k, d);
        for alpha in 0..=(d - k) {
            q.set(alpha, k - 1, qk.coeff(alpha));
        }
    }
    Ok(q)
}

/// `int_{[w(z), w]} g(z, u) du`, exact through `min(g.cap + 1, w.cap)`.
pub fn integrate_from_curve(g: &BiSeries, w_of_z: &UniSeries) -> Result<BiSeries, SeriesError> {
    let big = g.antiderivative(Var::W);
    let d = big.cap().min(w_of_z.cap());
    let big = big.truncate(d);
    let on_curve = compose_w(&big, w_of_z)?.to_bi().with_center(g.center());
    Ok(&big - &on_curve)
}

fn binomials(n: usize) -> Vec<Vec<f64>> {
    let mut t = vec![vec![1.0]];
    for i in 1..=n {
        let prev = &t[i - 1];
        let mut row = vec![1.0; i + 1];
        for j in 1..i {
            row[j] = prev[j - 1] + prev[j];
        }
        t.push(row);
    }
    t
}

/// Complexification: from a Taylor series in real offsets `(x1, x2)` (stored
/// in the `(z, w)` slots) to `a~(z, w) = a((z + w)/2, (z - w)/(2i))`.
pub fn complexify(real: &BiSeries) -> BiSeries {
    let d = real.cap();
    let binom = binomials(d);
    let mut out = BiSeries::zero(d).with_center(real.center());
    let half = Complex64::new(0.5, 0.0);
    let half_over_i = Complex64::new(0.0, -0.5);
    for (m, n, c) in real.terms() {
        let scale = c * half.powu(m as u32) * half_over_i.powu(n as u32);
        for i in 0..=m {
            for j in 0..=n {
                let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
                let alpha = i + j;
                let beta = (m - i) + (n - j);
                let v = out.coeff(alpha, beta) + scale * (binom[m][i] * binom[n][j] * sign);
                out.set(alpha, beta, v);
            }
        }
    }
    out
}

/// Inverse of [`complexify`]: substitutes `z = x1 + i x2`, `w = x1 - i x2`.
pub fn decomplexify(tilde: &BiSeries) -> BiSeries {
    let d = tilde.cap();
    let binom = binomials(d);
    let mut out = BiSeries::zero(d).with_center(tilde.center());
    let i_unit = Complex64::new(0.0, 1.0);
    for (a, b, c) in tilde.terms() {
        // (x1 + i x2)^a (x1 - i x2)^b
        for p in 0..=a {
            for q in 0..=b {
                let f = i_unit.powu((a - p) as u32) * (-i_unit).powu((b - q) as u32);
                let m = p + q;
                let n = (a - p) + (b - q);
                let v = out.coeff(m, n) + c * f * (binom[a][p] * binom[b][q]);
                out.set(m, n, v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn substitution_into_w() {
        let a = BiSeries::variable(Var::W, 5);
        let w = UniSeries::from_coeffs(vec![c(0.0, 0.0), c(-0.5, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(compose_w(&a, &w).unwrap(), w);
    }

    #[test]
    fn series_without_w_is_unchanged() {
        let a = BiSeries::from_terms(4, [((0, 0), c(1.0, 0.0)), ((3, 0), c(2.0, -1.0))]);
        let w = UniSeries::from_coeffs(vec![c(0.0, 0.0), c(3.0, 0.0), c(1.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let r = compose_w(&a, &w).unwrap();
        assert_eq!(r.coeff(0), c(1.0, 0.0));
        assert_eq!(r.coeff(3), c(2.0, -1.0));
        assert_eq!(r.coeff(1), c(0.0, 0.0));
    }

    #[test]
    fn off_center_curve_is_rejected() {
        let a = BiSeries::variable(Var::W, 3);
        let w = UniSeries::constant(c(0.1, 0.0), 3);
        assert!(matches!(compose_w(&a, &w), Err(SeriesError::CurveOffCenter(_))));
    }

    #[test]
    fn linear_field_gives_straight_curve() {
        let (a0, b, cc) = (c(1.0, 0.5), c(0.3, -0.2), c(-0.7, 0.4));
        let bt = BiSeries::from_terms(8, [((0, 0), a0), ((1, 0), b), ((0, 1), cc)]);
        let w = implicit_w(&bt).unwrap();
        assert!((w.coeff(1) + b / cc).norm() < 1e-15);
        assert!(w.max_abs_in_degrees(2, 8) < 1e-15);
        let back = compose_w(&bt, &w).unwrap();
        assert!(back.max_abs_in_degrees(1, 8) < 1e-15);
    }

    #[test]
    fn z_only_field_gives_flat_curve() {
        let bt = BiSeries::from_terms(6, [((0, 0), c(1.0, 0.0)), ((0, 1), c(2.0, 0.0)), ((2, 0), c(0.0, 0.0))]);
        assert!(implicit_w(&bt).unwrap().is_zero());
    }

    #[test]
    fn implicit_w_needs_a_w_slope() {
        let bt = BiSeries::from_terms(6, [((0, 0), c(1.0, 0.0)), ((1, 0), c(2.0, 0.0))]);
        assert_eq!(implicit_w(&bt), Err(SeriesError::DegenerateCurve));
    }

    #[test]
    fn division_by_the_curve() {
        let w = UniSeries::from_coeffs(vec![c(0.0, 0.0), c(-1.0, 0.2), c(0.3, 0.0), c(0.0, 0.1), c(0.05, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let f = curve_factor(&w, 6);
        assert!((&exact_divide_by_curve(&f, &w).unwrap() - &BiSeries::one(5)).is_zero());
        let q = BiSeries::from_terms(6, [((0, 0), c(1.0, 0.0)), ((1, 1), c(1.0, 0.0))]);
        let num = &f * &q;
        let back = exact_divide_by_curve(&num, &w).unwrap();
        assert!((&back - &q.truncate(5)).max_abs() < 1e-14);
    }

    #[test]
    fn division_requires_vanishing_on_curve() {
        let w = UniSeries::from_coeffs(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let num = BiSeries::from_terms(2, [((1, 0), c(1.0, 0.0))]);
        match exact_divide_by_curve(&num, &w) {
            Err(SeriesError::NotDivisible { degree, .. }) => assert_eq!(degree, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn complexify_round_trip() {
        let real = BiSeries::from_terms(
            5,
            [((0, 0), c(1.0, 0.0)), ((1, 0), c(0.5, 0.0)), ((2, 3), c(0.0, 1.0)), ((0, 4), c(-2.0, 0.5))],
        );
        let t = complexify(&real);
        assert!((&decomplexify(&t) - &real).max_abs() < 1e-14);
        // realification of the complexified series reproduces the real one
        let x = [0.3, -0.2];
        let direct = real.evaluate(c(x[0], 0.0), c(x[1], 0.0)).0;
        assert!((t.realify(x) - direct).norm() < 1e-14);
    }
}
