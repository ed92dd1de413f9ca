use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{SeriesError, Var};

/// Number of stored coefficients for total degree cap `cap`.
pub(crate) const fn tri_len(cap: usize) -> usize {
    (cap + 1) * (cap + 2) / 2
}

/// Dense index of `z^alpha w^beta`. Diagonals of fixed total degree are contiguous.
#[inline]
pub(crate) const fn tri_index(alpha: usize, beta: usize) -> usize {
    let k = alpha + beta;
    k * (k + 1) / 2 + beta
}

/// Truncated power series in two complex variables `(z, w)`.
///
/// Coefficients are stored densely for every exponent pair with
/// `alpha + beta <= cap`. The cap is the highest degree at which the stored
/// coefficients are exact: operations that lose precision (differentiation,
/// division by a curve) lower it, operations that gain it (integration)
/// raise it, and binary operations demand equal caps so that mixing
/// accuracies is always an explicit [`BiSeries::truncate`] at the call site.
#[derive(Clone, PartialEq)]
pub struct BiSeries {
    cap: usize,
    center: [Complex64; 2],
    coeffs: Vec<Complex64>,
}

impl BiSeries {
    pub fn zero(cap: usize) -> Self {
        Self {
            cap,
            center: [Complex64::new(0.0, 0.0); 2],
            coeffs: vec![Complex64::new(0.0, 0.0); tri_len(cap)],
        }
    }

    pub fn constant(value: Complex64, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        s.coeffs[0] = value;
        s
    }

    pub fn one(cap: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), cap)
    }

    /// The coordinate function `z` (or `w`).
    pub fn variable(var: Var, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        if cap >= 1 {
            match var {
                Var::Z => s.set(1, 0, Complex64::new(1.0, 0.0)),
                Var::W => s.set(0, 1, Complex64::new(1.0, 0.0)),
            }
        }
        s
    }

    /// Builds a series from `((alpha, beta), coefficient)` records. Terms
    /// beyond the cap are dropped.
    pub fn from_terms<I>(cap: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = ((usize, usize), Complex64)>,
    {
        let mut s = Self::zero(cap);
        for ((a, b), c) in terms {
            if a + b <= cap {
                s.coeffs[tri_index(a, b)] += c;
            }
        }
        s
    }

    pub fn with_center(mut self, center: [Complex64; 2]) -> Self {
        self.center = center;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn center(&self) -> [Complex64; 2] {
        self.center
    }

    #[inline]
    pub fn coeff(&self, alpha: usize, beta: usize) -> Complex64 {
        if alpha + beta > self.cap {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[tri_index(alpha, beta)]
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, alpha: usize, beta: usize, value: Complex64) {
        self.coeffs[tri_index(alpha, beta)] = value;
    }

    #[inline]
    pub(crate) fn raw(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Nonzero terms as `(alpha, beta, coefficient)`, ordered by total degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..=self.cap).flat_map(move |k| {
            (0..=k).filter_map(move |b| {
                let c = self.coeffs[tri_index(k - b, b)];
                (c != Complex64::new(0.0, 0.0)).then_some((k - b, b, c))
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// Coefficient-wise modulus. Evaluating an expression on magnitudes
    /// bounds the rounding error of the same expression on the series.
    pub fn magnitude(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = Complex64::new(c.norm(), 0.0);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude over total degrees in `lo..=hi` (clamped to the cap).
    pub fn max_abs_in_degrees(&self, lo: usize, hi: usize) -> f64 {
        let hi = hi.min(self.cap);
        let mut m: f64 = 0.0;
        for k in lo..=hi {
            for b in 0..=k {
                m = m.max(self.coeffs[tri_index(k - b, b)].norm());
            }
        }
        m
    }

    /// Drops every coefficient of total degree above `cap`.
    pub fn truncate(&self, cap: usize) -> Self {
        assert!(cap <= self.cap, "truncate cannot raise the cap ({} -> {cap})", self.cap);
        Self {
            cap,
            center: self.center,
            coeffs: self.coeffs[..tri_len(cap)].to_vec(),
        }
    }

    /// Homogeneous component of total degree `k`, as a series with the same cap.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        let mut out = Self::zero(self.cap).with_center(self.center);
        if k <= self.cap {
            for b in 0..=k {
                out.set(k - b, b, self.coeff(k - b, b));
            }
        }
        out
    }

    fn compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.cap != other.cap {
            return Err(SeriesError::CapMismatch {
                left: self.cap,
                right: other.cap,
            });
        }
        if self.center != other.center {
            return Err(SeriesError::CenterMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (o, c) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *o += c;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (o, c) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *o -= c;
        }
        Ok(out)
    }

    /// Cauchy product truncated at the common cap.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.compatible(other)?;
        let d = self.cap;
        let mut out = Self::zero(d).with_center(self.center);
        for k1 in 0..=d {
            for b1 in 0..=k1 {
                let a = self.coeffs[tri_index(k1 - b1, b1)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let a1 = k1 - b1;
                for k2 in 0..=(d - k1) {
                    for b2 in 0..=k2 {
                        let c = other.coeffs[tri_index(k2 - b2, b2)];
                        out.coeffs[tri_index(a1 + k2 - b2, b1 + b2)] += a * c;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= factor);
        out
    }

    pub fn add_constant(&self, value: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    /// Formal partial derivative. The result is exact through degree `cap - 1`.
    pub fn differentiate(&self, var: Var) -> Self {
        let d = self.cap.saturating_sub(1);
        let mut out = Self::zero(d).with_center(self.center);
        if self.cap == 0 {
            return out;
        }
        for k in 0..=d {
            for b in 0..=k {
                let a = k - b;
                let c = match var {
                    Var::Z => self.coeff(a + 1, b) * (a + 1) as f64,
                    Var::W => self.coeff(a, b + 1) * (b + 1) as f64,
                };
                out.set(a, b, c);
            }
        }
        out
    }

    /// Repeated partial derivatives `d_z^nz d_w^nw`.
    pub fn derivative(&self, nz: usize, nw: usize) -> Self {
        let mut out = self.clone();
        for _ in 0..nz {
            out = out.differentiate(Var::Z);
        }
        for _ in 0..nw {
            out = out.differentiate(Var::W);
        }
        out
    }

    /// Term-wise antiderivative vanishing on `var = 0`. Exact through `cap + 1`.
    pub fn antiderivative(&self, var: Var) -> Self {
        let d = self.cap + 1;
        let mut out = Self::zero(d).with_center(self.center);
        for (a, b, c) in self.terms() {
            match var {
                Var::Z => out.set(a + 1, b, c / (a + 1) as f64),
                Var::W => out.set(a, b + 1, c / (b + 1) as f64),
            }
        }
        out
    }

    /// Value at `(z, w)` (offsets from the center), with a crude truncation
    /// tail bound taken from the last retained diagonal.
    pub fn evaluate(&self, z: Complex64, w: Complex64) -> (Complex64, f64) {
        let zp = powers(z, self.cap);
        let wp = powers(w, self.cap);
        let mut total = Complex64::new(0.0, 0.0);
        let mut last = 0.0;
        for k in 0..=self.cap {
            let mut diag = Complex64::new(0.0, 0.0);
            let mut diag_abs = 0.0;
            for b in 0..=k {
                let t = self.coeffs[tri_index(k - b, b)] * zp[k - b] * wp[b];
                diag += t;
                diag_abs += t.norm();
            }
            total += diag;
            if k == self.cap {
                last = diag_abs;
            }
        }
        (total, last)
    }

    /// Evaluation using precomputed power tables (see [`powers`]).
    #[inline]
    pub fn eval_with_powers(&self, zp: &[Complex64], wp: &[Complex64]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        let mut i = 0;
        for k in 0..=self.cap {
            for b in 0..=k {
                total += self.coeffs[i] * zp[k - b] * wp[b];
                i += 1;
            }
        }
        total
    }

    /// Value on the real slice `w = conj(z)`, `z = x1 + i x2`, with `x`
    /// measured from the center.
    pub fn realify(&self, x: [f64; 2]) -> Complex64 {
        self.evaluate(Complex64::new(x[0], x[1]), Complex64::new(x[0], -x[1]))
            .0
    }

    /// `a(t z, t w)`.
    pub fn dilate(&self, t: Complex64) -> Self {
        let mut out = self.clone();
        let mut tk = Complex64::new(1.0, 0.0);
        for k in 0..=self.cap {
            for b in 0..=k {
                out.coeffs[tri_index(k - b, b)] *= tk;
            }
            tk *= t;
        }
        out
    }
}

/// `[1, x, x^2, ..., x^n]`.
pub fn powers(x: Complex64, n: usize) -> Vec<Complex64> {
    let mut p = Vec::with_capacity(n + 1);
    let mut cur = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        p.push(cur);
        cur *= x;
    }
    p
}

impl fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiSeries(cap={}", self.cap)?;
        for (a, b, c) in self.terms() {
            write!(f, ", ({a},{b}): {c}")?;
        }
        write!(f, ")")
    }
}

// Operators panic on incompatible operands; use the `checked_*` forms where
// the error has to be handled.
impl Add for &BiSeries {
    type Output = BiSeries;
    fn add(self, rhs: Self) -> BiSeries {
        self.checked_add(rhs).expect("series addition")
    }
}

impl Sub for &BiSeries {
    type Output = BiSeries;
    fn sub(self, rhs: Self) -> BiSeries {
        self.checked_sub(rhs).expect("series subtraction")
    }
}

impl Mul for &BiSeries {
    type Output = BiSeries;
    fn mul(self, rhs: Self) -> BiSeries {
        self.checked_mul(rhs).expect("series product")
    }
}

impl Mul<Complex64> for &BiSeries {
    type Output = BiSeries;
    fn mul(self, rhs: Complex64) -> BiSeries {
        self.scale(rhs)
    }
}

impl Mul<f64> for &BiSeries {
    type Output = BiSeries;
    fn mul(self, rhs: f64) -> BiSeries {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Neg for &BiSeries {
    type Output = BiSeries;
    fn neg(self) -> BiSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn difference_of_squares() {
        let zw = BiSeries::from_terms(4, [((1, 1), c(1.0, 0.0))]);
        let one = BiSeries::one(4);
        let p = &(&one + &zw) * &(&one - &zw);
        let expected = BiSeries::from_terms(4, [((0, 0), c(1.0, 0.0)), ((2, 2), c(-1.0, 0.0))]);
        assert_eq!(p, expected);
    }

    #[test]
    fn additive_identity() {
        let a = BiSeries::from_terms(5, [((2, 1), c(0.3, -1.0)), ((0, 4), c(2.0, 0.5))]);
        assert_eq!(&a + &BiSeries::zero(5), a);
    }

    #[test]
    fn product_is_truncated() {
        let z = BiSeries::variable(Var::Z, 1);
        let w = BiSeries::variable(Var::W, 1);
        assert!((&z * &w).is_zero());
    }

    #[test]
    fn mismatched_caps_are_rejected() {
        let a = BiSeries::one(3);
        let b = BiSeries::one(4);
        assert_eq!(
            a.checked_mul(&b),
            Err(SeriesError::CapMismatch { left: 3, right: 4 })
        );
        let shifted = BiSeries::one(3).with_center([c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(a.checked_add(&shifted), Err(SeriesError::CenterMismatch));
    }

    #[test]
    fn power_rule() {
        let a = BiSeries::from_terms(4, [((1, 2), c(1.0, 0.0))]);
        let d = a.differentiate(Var::W);
        assert_eq!(d.cap(), 3);
        assert_eq!(d, BiSeries::from_terms(3, [((1, 1), c(2.0, 0.0))]));
        assert!(BiSeries::constant(c(3.0, 1.0), 4).differentiate(Var::Z).is_zero());
    }

    #[test]
    fn antiderivative_of_zw() {
        let a = BiSeries::from_terms(3, [((1, 1), c(1.0, 0.0))]);
        let i = a.antiderivative(Var::W);
        assert_eq!(i, BiSeries::from_terms(4, [((1, 2), c(0.5, 0.0))]));
        assert!(BiSeries::zero(3).antiderivative(Var::Z).is_zero());
    }

    #[test]
    fn evaluation_and_realification() {
        let zw = BiSeries::from_terms(3, [((1, 1), c(1.0, 0.0))]);
        assert_eq!(zw.evaluate(c(2.0, 0.0), c(3.0, 0.0)).0, c(6.0, 0.0));
        let k = BiSeries::constant(c(-1.5, 2.0), 6);
        assert_eq!(k.evaluate(c(0.3, 0.1), c(-2.0, 1.0)).0, c(-1.5, 2.0));
        let v = zw.realify([0.6, -0.8]);
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);
        let z = BiSeries::variable(Var::Z, 2);
        assert_eq!(z.realify([0.25, -2.0]), c(0.25, -2.0));
    }

    #[test]
    fn tail_bound_comes_from_last_diagonal() {
        let a = BiSeries::from_terms(2, [((0, 0), c(1.0, 0.0)), ((2, 0), c(3.0, 0.0))]);
        let (_, tail) = a.evaluate(c(0.5, 0.0), c(0.0, 0.0));
        assert!((tail - 0.75).abs() < 1e-15);
    }
}
