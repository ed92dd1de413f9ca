//! Truncated series in `(z, w)`: products, elementary functions, the implicit
//! curve `B~(z, w(z)) = B~(0, 0)` and exact division by `w - w(z)`.

use cmag_wkb::cseries::{exact_divide_by_curve, implicit_w, BiSeries, Var};
use num_complex::Complex64;

fn main() {
    let cap = 12;
    let z = BiSeries::variable(Var::Z, cap);
    let w = BiSeries::variable(Var::W, cap);

    // exp(z) exp(w) = exp(z + w)
    let lhs = &z.exp() * &w.exp();
    let rhs = (&z + &w).exp();
    println!("|exp z exp w - exp(z+w)| = {:.2e}", (&lhs - &rhs).max_abs());

    // B~ = 1 + z + 2w + z w has a curve with B~(z, w(z)) = 1.
    let one = Complex64::new(1.0, 0.0);
    let b = BiSeries::from_terms(cap, [((0, 0), one), ((1, 0), one), ((0, 1), 2.0 * one), ((1, 1), one)]);
    let curve = implicit_w(&b).expect("d_w B~ does not vanish");
    println!("w(z) = {:.4} z + {:.4} z^2 + {:.4} z^3 + ...", curve.coeff(1), curve.coeff(2), curve.coeff(3));

    // B~ - 1 vanishes on the curve, so it is divisible by w - w(z).
    let quotient = exact_divide_by_curve(&b.add_constant(-one), &curve).expect("vanishes on the curve");
    println!("quotient constant term {:.4}", quotient.constant_term());
}
