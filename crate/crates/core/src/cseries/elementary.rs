//! Elementary functions of truncated series.
//!
//! Everything runs through the Euler operator `E = z d_z + w d_w`, which
//! multiplies the degree-`k` homogeneous part by `k`. For `y = exp(a)` the
//! identity `E y = (E a) y` gives every coefficient of degree `k` from lower
//! ones; `ln`, `sin` and `cos` follow from the analogous differential
//! identities. Univariate series use the same recurrences with `E = z d_z`.

use num_complex::Complex64;

use super::bi::{tri_index, BiSeries};
use super::uni::UniSeries;
use super::SeriesError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `sum (g+d) a[g,d] y[alpha-g, beta-d]` over `(g,d) != (0,0)`, `g <= alpha`, `d <= beta`.
#[inline]
fn euler_conv(a: &BiSeries, y: &BiSeries, alpha: usize, beta: usize) -> Complex64 {
    let mut acc = ZERO;
    for g in 0..=alpha {
        for d in 0..=beta {
            if g + d == 0 {
                continue;
            }
            let ac = a.coeff(g, d);
            if ac != ZERO {
                acc += ac * y.raw()[tri_index(alpha - g, beta - d)] * (g + d) as f64;
            }
        }
    }
    acc
}

/// `sum a[g,d] y[alpha-g, beta-d]` over `(g,d) != (0,0)`.
#[inline]
fn plain_conv(a: &BiSeries, y: &BiSeries, alpha: usize, beta: usize) -> Complex64 {
    let mut acc = ZERO;
    for g in 0..=alpha {
        for d in 0..=beta {
            if g + d == 0 {
                continue;
            }
            let ac = a.coeff(g, d);
            if ac != ZERO {
                acc += ac * y.raw()[tri_index(alpha - g, beta - d)];
            }
        }
    }
    acc
}

/// The constant term is judged against the degree-0 and degree-1 coefficients;
/// higher ones say more about the radius than about the constant.
fn invertible(c: Complex64, scale: f64) -> bool {
    c.norm() > 1e-14 * scale.max(f64::MIN_POSITIVE) && c.is_finite()
}

impl BiSeries {
    pub fn exp(&self) -> Self {
        let mut y = BiSeries::zero(self.cap()).with_center(self.center());
        y.set(0, 0, self.constant_term().exp());
        for k in 1..=self.cap() {
            for b in 0..=k {
                let a = k - b;
                let v = euler_conv(self, &y, a, b) / k as f64;
                y.set(a, b, v);
            }
        }
        y
    }

    /// Principal logarithm. A vanishing constant term yields non-finite coefficients.
    pub fn ln(&self) -> Self {
        let a0 = self.constant_term();
        let mut y = BiSeries::zero(self.cap()).with_center(self.center());
        y.set(0, 0, a0.ln());
        for k in 1..=self.cap() {
            for b in 0..=k {
                let a = k - b;
                // E(a) = a * E(y): k a[a,b] = sum (g+d) y[g,d] a[a-g,b-d]
                let mut acc = self.coeff(a, b) * k as f64;
                for g in 0..=a {
                    for d in 0..=b {
                        if g + d == 0 || (g == a && d == b) {
                            continue;
                        }
                        acc -= y.coeff(g, d) * self.coeff(a - g, b - d) * (g + d) as f64;
                    }
                }
                y.set(a, b, acc / (a0 * k as f64));
            }
        }
        y
    }

    /// `(sin a, cos a)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let a0 = self.constant_term();
        let mut s = BiSeries::zero(self.cap()).with_center(self.center());
        let mut c = s.clone();
        s.set(0, 0, a0.sin());
        c.set(0, 0, a0.cos());
        for k in 1..=self.cap() {
            for b in 0..=k {
                let a = k - b;
                let sv = euler_conv(self, &c, a, b) / k as f64;
                let cv = -euler_conv(self, &s, a, b) / k as f64;
                s.set(a, b, sv);
                c.set(a, b, cv);
            }
        }
        (s, c)
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    /// `a^p` on the principal branch.
    pub fn powc(&self, p: Complex64) -> Self {
        self.ln().scale(p).exp()
    }

    pub fn sqrt(&self) -> Self {
        self.powc(Complex64::new(0.5, 0.0))
    }

    /// Multiplicative inverse. `name` identifies the series in the error.
    pub fn reciprocal(&self, name: &str) -> Result<Self, SeriesError> {
        let a0 = self.constant_term();
        if !invertible(a0, self.max_abs_in_degrees(0, 1)) {
            return Err(SeriesError::VanishingConstant {
                name: name.to_string(),
            });
        }
        Ok(self.reciprocal_unchecked())
    }

    /// Inverse without the constant-term check; NaN/inf propagate like `1.0 / 0.0`.
    pub(crate) fn reciprocal_unchecked(&self) -> Self {
        let a0 = self.constant_term();
        let mut r = BiSeries::zero(self.cap()).with_center(self.center());
        r.set(0, 0, a0.inv());
        for k in 1..=self.cap() {
            for b in 0..=k {
                let a = k - b;
                let v = -plain_conv(self, &r, a, b) / a0;
                r.set(a, b, v);
            }
        }
        r
    }

    pub fn checked_div(&self, other: &Self, name: &str) -> Result<Self, SeriesError> {
        self.checked_mul(&other.reciprocal(name)?)
    }
}

impl UniSeries {
    pub fn exp(&self) -> Self {
        let d = self.cap();
        let a = self.coeffs();
        let mut y = vec![ZERO; d + 1];
        y[0] = a[0].exp();
        for k in 1..=d {
            let mut acc = ZERO;
            for i in 1..=k {
                acc += a[i] * y[k - i] * i as f64;
            }
            y[k] = acc / k as f64;
        }
        UniSeries::from_coeffs(y)
    }

    pub fn ln(&self) -> Self {
        let d = self.cap();
        let a = self.coeffs();
        let mut y = vec![ZERO; d + 1];
        y[0] = a[0].ln();
        for k in 1..=d {
            let mut acc = a[k] * k as f64;
            for i in 1..k {
                acc -= y[i] * a[k - i] * i as f64;
            }
            y[k] = acc / (a[0] * k as f64);
        }
        UniSeries::from_coeffs(y)
    }

    pub fn reciprocal(&self, name: &str) -> Result<Self, SeriesError> {
        let a = self.coeffs();
        if !invertible(a[0], self.max_abs_in_degrees(0, 1)) {
            return Err(SeriesError::VanishingConstant {
                name: name.to_string(),
            });
        }
        let d = self.cap();
        let mut r = vec![ZERO; d + 1];
        r[0] = a[0].inv();
        for k in 1..=d {
            let mut acc = ZERO;
            for i in 1..=k {
                acc += a[i] * r[k - i];
            }
            r[k] = -acc / a[0];
        }
        Ok(UniSeries::from_coeffs(r))
    }
}
