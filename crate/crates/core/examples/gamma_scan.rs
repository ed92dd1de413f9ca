//! Admissibility of points for the oscillating field `B = sin x1 + i sin x2`.

use std::f64::consts::PI;

use cmag_wkb::fieldmodel::{compute_q_at, gamma_scan, Potential, Region};

fn main() {
    let p = Potential::Oscillating;
    for x in [[PI / 3.0, -PI / 2.0], [PI / 2.0, -PI / 2.0], [PI / 3.0, 0.0]] {
        let r = compute_q_at(&p, x);
        println!(
            "x = ({:.4}, {:.4}): in Γ = {}, Q = ({:.4}, {:.4}, {:.4}), {}",
            x[0],
            x[1],
            r.in_gamma,
            r.q1,
            r.q2,
            r.q3,
            r.failure_summary()
        );
    }
    let reports = gamma_scan(&p, &Region::square(2.0 * PI), 257);
    let members = reports.iter().filter(|r| r.in_gamma).count();
    println!("{members} of {} grid points lie in Γ", reports.len());
}
