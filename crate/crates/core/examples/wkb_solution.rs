//! Phase and transport amplitudes at a point, with the identity checks that
//! certify them.

use cmag_wkb::fieldmodel::{FieldSpec, Poly, Potential};
use cmag_wkb::wkb::WkbSolution;
use num_complex::Complex64;

fn main() {
    let one = Complex64::new(1.0, 0.0);
    let p = Potential::Polynomial {
        a: one,
        b: Complex64::new(0.0, 1.0),
        c: one,
        r: Poly::new([([6, 0], one), ([4, 2], 3.0 * one), ([2, 4], 3.0 * one), ([0, 6], one)]),
    };
    let field = FieldSpec::new(p, [0.0, 0.0], 24).unwrap();
    let sol = WkbSolution::build(&field, 3).unwrap();
    println!("mu = {}", sol.mu);
    println!("trusted radii {:?}", sol.trusted_radii);
    for (j, a) in sol.amplitudes.iter().enumerate() {
        println!("a_{j}(0) = {:.6}", a.constant_term());
    }
    println!(
        "{} identity checks, worst relative residual {:.2e}",
        sol.identities.checks.len(),
        sol.identities.worst_relative()
    );
}
