use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::scalar::Scalar;
use crate::cseries::{BiSeries, Var};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// One term `coeff * x1^pow[0] * x2^pow[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub pow: [u32; 2],
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl Monomial {
    pub fn coeff(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Complex polynomial in `(x1, x2)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    pub terms: Vec<Monomial>,
}

impl Poly {
    pub fn new(terms: impl IntoIterator<Item = ([u32; 2], Complex64)>) -> Self {
        Self {
            terms: terms
                .into_iter()
                .map(|(pow, c)| Monomial { pow, re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.pow[0] + t.pow[1]).max().unwrap_or(0)
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.im == 0.0)
    }

    pub fn eval<T: Scalar>(&self, x1: &T, x2: &T) -> T {
        let zero = x1.lift(Complex64::new(0.0, 0.0));
        let (n1, n2) = self
            .terms
            .iter()
            .fold((0, 0), |(a, b), t| (a.max(t.pow[0]), b.max(t.pow[1])));
        let p1 = powers_of(x1, n1);
        let p2 = powers_of(x2, n2);
        self.terms.iter().fold(zero, |acc, t| {
            acc.add(&p1[t.pow[0] as usize].mul(&p2[t.pow[1] as usize]).scale(t.coeff()))
        })
    }

    /// Partial derivative in `x1` (`var = 0`) or `x2` (`var = 1`).
    pub fn derivative(&self, var: usize) -> Poly {
        Poly::new(self.terms.iter().filter(|t| t.pow[var] > 0).map(|t| {
            let mut pow = t.pow;
            pow[var] -= 1;
            (pow, t.coeff() * t.pow[var] as f64)
        }))
    }

    /// `int_0^{x1} p(s, x2) ds`.
    pub fn integrate_x1(&self) -> Poly {
        Poly::new(
            self.terms
                .iter()
                .map(|t| ([t.pow[0] + 1, t.pow[1]], t.coeff() / (t.pow[0] + 1) as f64)),
        )
    }
}

fn powers_of<T: Scalar>(x: &T, n: u32) -> Vec<T> {
    let mut out = vec![x.lift(Complex64::new(1.0, 0.0))];
    for k in 1..=n as usize {
        let next = out[k - 1].mul(x);
        out.push(next);
    }
    out
}

/// A complex vector potential `A = (A1, A2)` on the plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    /// `A1 = -sin(x1) x2 + i cos(x2)`, `A2 = i cos(x2)`, with `B = sin x1 + i sin x2`.
    Oscillating,
    /// `A1 = 0`, `A2 = int_0^{x1} B(s, x2) ds` for `B = a + b x1 + c x2 + R`, `R` real.
    Polynomial {
        a: Complex64,
        b: Complex64,
        c: Complex64,
        #[serde(default)]
        r: Poly,
    },
    /// `A = c (-x2, x1) / (1 + |x|)^alpha`.
    MillerSimon { c: Complex64, alpha: f64 },
    /// `A = i c e^{|x|^2} (-x2, x1)` with real `c`.
    Exponential { c: f64 },
    /// Polynomial components given as coefficient tables.
    User { a1: Poly, a2: Poly },
    /// `base + grad g`.
    Gauged { base: Box<Potential>, gauge: Poly },
}

impl Potential {
    pub fn gauged(self, gauge: Poly) -> Self {
        Potential::Gauged {
            base: Box::new(self),
            gauge,
        }
    }

    /// `A(x)` for any scalar kind; with jets this is the Taylor expansion of `A`.
    pub fn eval<T: Scalar>(&self, x1: &T, x2: &T) -> [T; 2] {
        let zero = x1.lift(re(0.0));
        match self {
            Potential::Oscillating => {
                let icos = x2.cos().scale(I);
                [x1.sin().mul(x2).scale_re(-1.0).add(&icos), icos]
            }
            Potential::Polynomial { a, b, c, r } => {
                let lin = x1
                    .scale(*a)
                    .add(&x1.mul(x1).scale(*b * 0.5))
                    .add(&x1.mul(x2).scale(*c));
                [zero, lin.add(&r.integrate_x1().eval(x1, x2))]
            }
            Potential::MillerSimon { c, alpha } => {
                let rho = x1.mul(x1).add(&x2.mul(x2)).sqrt();
                let w = rho.add(&x1.lift(re(1.0))).powf(-alpha);
                [x2.mul(&w).scale(-*c), x1.mul(&w).scale(*c)]
            }
            Potential::Exponential { c } => {
                let e = x1.mul(x1).add(&x2.mul(x2)).exp().scale(I * *c);
                [x2.mul(&e).scale_re(-1.0), x1.mul(&e)]
            }
            Potential::User { a1, a2 } => [a1.eval(x1, x2), a2.eval(x1, x2)],
            Potential::Gauged { base, gauge } => {
                let [b1, b2] = base.eval(x1, x2);
                [
                    b1.add(&gauge.derivative(0).eval(x1, x2)),
                    b2.add(&gauge.derivative(1).eval(x1, x2)),
                ]
            }
        }
    }

    pub fn a_at(&self, x: [f64; 2]) -> [Complex64; 2] {
        self.eval(&re(x[0]), &re(x[1]))
    }

    /// Taylor expansions of `A1`, `A2` in the real offsets `(x1 - x0_1, x2 - x0_2)`,
    /// stored in the `(z, w)` slots of the series.
    pub fn jets(&self, x0: [f64; 2], cap: usize) -> [BiSeries; 2] {
        let x1 = BiSeries::variable(Var::Z, cap).add_constant(re(x0[0]));
        let x2 = BiSeries::variable(Var::W, cap).add_constant(re(x0[1]));
        self.eval(&x1, &x2)
    }

    /// Taylor expansion of `B = d1 A2 - d2 A1` in real offsets, exact through `cap`.
    pub fn b_real_taylor(&self, x0: [f64; 2], cap: usize) -> BiSeries {
        let [a1, a2] = self.jets(x0, cap + 1);
        &a2.differentiate(Var::Z) - &a1.differentiate(Var::W)
    }

    /// `B(x)` from a closed form when one is known.
    pub fn b_closed_form(&self, x: [f64; 2]) -> Option<Complex64> {
        let r2 = x[0] * x[0] + x[1] * x[1];
        match self {
            Potential::Oscillating => Some(re(x[0].sin()) + I * x[1].sin()),
            Potential::Polynomial { a, b, c, r } => {
                Some(a + b * x[0] + c * x[1] + r.eval(&re(x[0]), &re(x[1])))
            }
            Potential::MillerSimon { c, alpha } => {
                let rho = r2.sqrt();
                let s = 2.0 / (1.0 + rho).powf(*alpha) - alpha * rho / (1.0 + rho).powf(alpha + 1.0);
                Some(c * s)
            }
            Potential::Exponential { c } => Some(I * (2.0 * c * r2.exp() * (1.0 + r2))),
            Potential::User { .. } => None,
            Potential::Gauged { base, .. } => base.b_closed_form(x),
        }
    }

    pub fn b_at(&self, x: [f64; 2]) -> Complex64 {
        self.b_closed_form(x)
            .unwrap_or_else(|| self.b_real_taylor(x, 0).constant_term())
    }

    /// `[[d1 A1, d2 A1], [d1 A2, d2 A2]]` at `x`.
    pub fn first_partials(&self, x: [f64; 2]) -> [[Complex64; 2]; 2] {
        let [a1, a2] = self.jets(x, 1);
        [
            [a1.coeff(1, 0), a1.coeff(0, 1)],
            [a2.coeff(1, 0), a2.coeff(0, 1)],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_curl(p: &Potential, x: [f64; 2]) -> Complex64 {
        let h = 1e-5;
        let a2p = p.a_at([x[0] + h, x[1]])[1];
        let a2m = p.a_at([x[0] - h, x[1]])[1];
        let a1p = p.a_at([x[0], x[1] + h])[0];
        let a1m = p.a_at([x[0], x[1] - h])[0];
        (a2p - a2m - a1p + a1m) / (2.0 * h)
    }

    fn builtins() -> Vec<Potential> {
        vec![
            Potential::Oscillating,
            Potential::Polynomial {
                a: re(1.0),
                b: I,
                c: re(1.0),
                r: Poly::new([([6, 0], re(1.0)), ([4, 2], re(3.0)), ([2, 4], re(3.0)), ([0, 6], re(1.0))]),
            },
            Potential::MillerSimon {
                c: Complex64::new(1.0, 1.0),
                alpha: 1.0,
            },
            Potential::Exponential { c: 0.4 },
        ]
    }

    #[test]
    fn closed_form_fields_match_jets_and_differences() {
        for p in builtins() {
            for x in [[0.3, -0.7], [1.1, 0.4], [-0.5, 1.3]] {
                let closed = p.b_closed_form(x).unwrap();
                let jet = p.b_real_taylor(x, 0).constant_term();
                assert!((closed - jet).norm() <= 1e-12 * closed.norm().max(1.0), "{p:?} at {x:?}");
                let fd = fd_curl(&p, x);
                assert!((closed - fd).norm() <= 1e-7 * closed.norm().max(1.0), "{p:?} at {x:?}");
            }
        }
    }

    #[test]
    fn example_field_with_polynomial_tables() {
        let p = Potential::User {
            a1: Poly::default(),
            a2: Poly::new([
                ([9, 0], re(1.0 / 9.0)),
                ([1, 8], re(1.0)),
                ([3, 0], I / 3.0),
                ([1, 2], I),
            ]),
        };
        let x: [f64; 2] = [0.7, -0.4];
        let expected = re(x[0].powi(8) + x[1].powi(8)) + I * (x[0] * x[0] + x[1] * x[1]);
        assert!((p.b_at(x) - expected).norm() < 1e-13);
    }

    #[test]
    fn gauge_terms_do_not_change_the_field() {
        let g = Poly::new([([2, 1], Complex64::new(0.3, -1.0)), ([0, 3], re(2.0))]);
        let base = Potential::Oscillating;
        let gauged = base.clone().gauged(g);
        let x = [0.4, 0.9];
        let t0 = base.b_real_taylor(x, 6);
        let t1 = gauged.b_real_taylor(x, 6);
        assert!((&t0 - &t1).max_abs() < 1e-13);
    }

    #[test]
    fn polynomial_potential_has_stated_imaginary_part() {
        let p = Potential::Polynomial {
            a: re(1.0),
            b: Complex64::new(0.5, 2.0),
            c: Complex64::new(1.0, -3.0),
            r: Poly::new([([4, 0], re(1.0))]),
        };
        let x = [0.3, -1.2];
        let im_a2 = p.a_at(x)[1].im;
        assert!((im_a2 - (2.0 / 2.0 * x[0] * x[0] - 3.0 * x[0] * x[1])).abs() < 1e-14);
        assert_eq!(p.a_at(x)[0], re(0.0));
    }
}
