//! The two magnetic inequalities tested on random compactly supported bumps.

use std::f64::consts::PI;

use cmag_wkb::fieldmodel::{FieldSpec, Potential};
use cmag_wkb::numop::verify_magnetic_inequalities;

fn main() {
    let field = FieldSpec::new(Potential::Oscillating, [PI / 3.0, -PI / 2.0], 8).unwrap();
    let report = verify_magnetic_inequalities(&field, 0.1, 50, 2024, 1.0, 201).unwrap();
    println!("trials: {}", report.trials.len());
    println!("worst slacks {:?}", report.worst_slack);
    println!("worst relative slacks {:?}", report.worst_relative);
    println!("hold: {}", report.holds());
}
