//! The symbol `p(x, xi)` and `{Re p, Im p}` at a characteristic covector.

use std::f64::consts::PI;

use cmag_wkb::fieldmodel::{poisson_bracket_direct, weyl_bracket, Potential};

fn main() {
    let p = Potential::Oscillating;
    let x = [PI / 3.0, -PI / 2.0];
    let a = p.a_at(x);
    let xi = [a[0].re, a[1].re];
    let s = weyl_bracket(&p, x, xi);
    println!("p = {:.3e}, bracket = {:.6}", s.p, s.bracket);
    println!("bracket by direct differences {:.6}", poisson_bracket_direct(&p, x, xi));
}
