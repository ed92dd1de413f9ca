//! Arithmetic shared by plain complex numbers and Taylor jets, so one closed
//! form of a potential yields both point values and exact local expansions.

use num_complex::Complex64;

use crate::cseries::BiSeries;

pub trait Scalar: Clone {
    /// A constant of the same kind (and cap, for series) as `self`.
    fn lift(&self, v: Complex64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, v: Complex64) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn powf(&self, p: f64) -> Self;
    fn recip(&self) -> Self;

    fn scale_re(&self, v: f64) -> Self {
        self.scale(Complex64::new(v, 0.0))
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = self.lift(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Scalar for Complex64 {
    fn lift(&self, v: Complex64) -> Self {
        v
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, v: Complex64) -> Self {
        self * v
    }
    fn exp(&self) -> Self {
        Complex64::exp(*self)
    }
    fn sin(&self) -> Self {
        Complex64::sin(*self)
    }
    fn cos(&self) -> Self {
        Complex64::cos(*self)
    }
    fn sqrt(&self) -> Self {
        Complex64::sqrt(*self)
    }
    fn powf(&self, p: f64) -> Self {
        Complex64::powf(*self, p)
    }
    fn recip(&self) -> Self {
        self.inv()
    }
}

impl Scalar for BiSeries {
    fn lift(&self, v: Complex64) -> Self {
        BiSeries::constant(v, self.cap()).with_center(self.center())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, v: Complex64) -> Self {
        BiSeries::scale(self, v)
    }
    fn exp(&self) -> Self {
        BiSeries::exp(self)
    }
    fn sin(&self) -> Self {
        BiSeries::sin(self)
    }
    fn cos(&self) -> Self {
        BiSeries::cos(self)
    }
    fn sqrt(&self) -> Self {
        BiSeries::sqrt(self)
    }
    fn powf(&self, p: f64) -> Self {
        self.powc(Complex64::new(p, 0.0))
    }
    fn recip(&self) -> Self {
        self.reciprocal_unchecked()
    }
}
