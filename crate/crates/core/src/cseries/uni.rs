use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::bi::BiSeries;
use super::SeriesError;

/// Truncated power series in one complex variable, `c_0 + c_1 z + ... + c_D z^D`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniSeries {
    coeffs: Vec<Complex64>,
}

impl UniSeries {
    pub fn zero(cap: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); cap + 1],
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

    /// Coefficients `c_0..c_D`; the cap is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        Self { coeffs }
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// Coefficient-wise modulus.
    pub fn magnitude(&self) -> Self {
        Self::from_coeffs(self.coeffs().iter().map(|c| Complex64::new(c.norm(), 0.0)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_in_degrees(&self, lo: usize, hi: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| *k >= lo && *k <= hi)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn truncate(&self, cap: usize) -> Self {
        assert!(cap <= self.cap(), "truncate cannot raise the cap ({} -> {cap})", self.cap());
        Self {
            coeffs: self.coeffs[..=cap].to_vec(),
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.cap() != other.cap() {
            return Err(SeriesError::CapMismatch {
                left: self.cap(),
                right: other.cap(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.compatible(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.compatible(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.compatible(other)?;
        let d = self.cap();
        let mut out = vec![Complex64::new(0.0, 0.0); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs[..=d - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self { coeffs: out })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Exact through `cap - 1`.
    pub fn derivative(&self) -> Self {
        if self.cap() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=self.cap()).map(|k| self.coeffs[k] * k as f64).collect(),
        }
    }

    /// Antiderivative vanishing at 0, exact through `cap + 1`.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0)];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        Self { coeffs }
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// The same function viewed as a bivariate series depending on `z` only.
    pub fn to_bi(&self) -> BiSeries {
        BiSeries::from_terms(
            self.cap(),
            self.coeffs.iter().enumerate().map(|(k, c)| ((k, 0), *c)),
        )
    }
}

impl Add for &UniSeries {
    type Output = UniSeries;
    fn add(self, rhs: Self) -> UniSeries {
        self.checked_add(rhs).expect("series addition")
    }
}

impl Sub for &UniSeries {
    type Output = UniSeries;
    fn sub(self, rhs: Self) -> UniSeries {
        self.checked_sub(rhs).expect("series subtraction")
    }
}

impl Mul for &UniSeries {
    type Output = UniSeries;
    fn mul(self, rhs: Self) -> UniSeries {
        self.checked_mul(rhs).expect("series product")
    }
}

impl Mul<Complex64> for &UniSeries {
    type Output = UniSeries;
    fn mul(self, rhs: Complex64) -> UniSeries {
        self.scale(rhs)
    }
}

impl Neg for &UniSeries {
    type Output = UniSeries;
    fn neg(self) -> UniSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
