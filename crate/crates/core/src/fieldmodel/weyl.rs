//! The Weyl symbol `p(x, xi) = |xi - Re A|^2 - |Im A|^2 - 2i <xi - Re A, Im A>`
//! and the Poisson bracket `{Re p, Im p}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::potential::Potential;

const STEP: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylSample {
    pub p: Complex64,
    pub bracket: f64,
}

fn symbol(potential: &Potential, x: [f64; 2], xi: [f64; 2]) -> Complex64 {
    let a = potential.a_at(x);
    let d = [xi[0] - a[0].re, xi[1] - a[1].re];
    let im = [a[0].im, a[1].im];
    let re_p = d[0] * d[0] + d[1] * d[1] - im[0] * im[0] - im[1] * im[1];
    let im_p = -2.0 * (d[0] * im[0] + d[1] * im[1]);
    Complex64::new(re_p, im_p)
}

fn grad_x(f: impl Fn([f64; 2]) -> f64, x: [f64; 2]) -> [f64; 2] {
    [
        (f([x[0] + STEP, x[1]]) - f([x[0] - STEP, x[1]])) / (2.0 * STEP),
        (f([x[0], x[1] + STEP]) - f([x[0], x[1] - STEP])) / (2.0 * STEP),
    ]
}

/// `p(x, xi)` and `{Re p, Im p}(x, xi) = -4 (xi - Re A) . d_x <xi - Re A, Im A>
/// + 2 d_x(Re p) . Im A`, with `x`-derivatives by central differences.
pub fn weyl_bracket(potential: &Potential, x: [f64; 2], xi: [f64; 2]) -> WeylSample {
    let p = symbol(potential, x, xi);
    let a = potential.a_at(x);
    let d = [xi[0] - a[0].re, xi[1] - a[1].re];
    let pairing = |y: [f64; 2]| -0.5 * symbol(potential, y, xi).im;
    let re_p = |y: [f64; 2]| symbol(potential, y, xi).re;
    let gp = grad_x(pairing, x);
    let gr = grad_x(re_p, x);
    let bracket = -4.0 * (d[0] * gp[0] + d[1] * gp[1]) + 2.0 * (gr[0] * a[0].im + gr[1] * a[1].im);
    WeylSample { p, bracket }
}

/// `{Re p, Im p} = sum_j d_{xi_j} Re p d_{x_j} Im p - d_{x_j} Re p d_{xi_j} Im p`
/// with every derivative by central differences.
pub fn poisson_bracket_direct(potential: &Potential, x: [f64; 2], xi: [f64; 2]) -> f64 {
    let f = |y: [f64; 2], e: [f64; 2]| symbol(potential, y, e);
    let mut acc = 0.0;
    for j in 0..2 {
        let mut xp = x;
        let mut xm = x;
        xp[j] += STEP;
        xm[j] -= STEP;
        let mut ep = xi;
        let mut em = xi;
        ep[j] += STEP;
        em[j] -= STEP;
        let dx = (f(xp, xi) - f(xm, xi)) / (2.0 * STEP);
        let dxi = (f(x, ep) - f(x, em)) / (2.0 * STEP);
        acc += dxi.re * dx.im - dx.re * dxi.im;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldmodel::Poly;
    use std::f64::consts::PI;

    #[test]
    fn characteristic_point_on_gamma() {
        let x0 = [PI / 3.0, -PI / 2.0];
        let a = Potential::Oscillating.a_at(x0);
        let xi0 = [a[0].re, a[1].re];
        let s = weyl_bracket(&Potential::Oscillating, x0, xi0);
        assert!(s.p.norm() <= 1e-9);
        assert!(s.bracket.abs() <= 1e-6);
    }

    #[test]
    fn real_potentials_have_real_symbols() {
        let p = Potential::MillerSimon {
            c: Complex64::new(0.7, 0.0),
            alpha: 1.0,
        };
        let s = weyl_bracket(&p, [0.4, -1.2], [0.3, 0.8]);
        assert_eq!(s.p.im, 0.0);
        assert_eq!(s.bracket, 0.0);
    }

    #[test]
    fn polynomial_potential_against_hand_computation() {
        // A = (i x2, x1): Re p = xi1^2 + (xi2 - x1)^2 - x2^2, Im p = -2 xi1 x2,
        // so {Re p, Im p} = -4 (xi2 - x1)(xi1 + x2).
        let p = Potential::User {
            a1: Poly::new([([0, 1], Complex64::new(0.0, 1.0))]),
            a2: Poly::new([([1, 0], Complex64::new(1.0, 0.0))]),
        };
        let (x, xi) = ([1.0, 2.0], [0.5, -1.0]);
        let exact = -4.0 * (xi[1] - x[0]) * (xi[0] + x[1]);
        assert!((weyl_bracket(&p, x, xi).bracket - exact).abs() < 1e-8);
        assert!((poisson_bracket_direct(&p, x, xi) - exact).abs() < 1e-8);
        assert!(exact != 0.0);
    }

    #[test]
    fn displayed_form_matches_definition_on_oscillating_field() {
        for (x, xi) in [([0.3, 0.2], [1.0, -0.5]), ([2.0, -0.4], [-0.3, 0.7])] {
            let a = weyl_bracket(&Potential::Oscillating, x, xi).bracket;
            let b = poisson_bracket_direct(&Potential::Oscillating, x, xi);
            assert!((a - b).abs() < 1e-7 * b.abs().max(1.0), "{a} vs {b}");
        }
    }
}
