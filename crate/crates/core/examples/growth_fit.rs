//! Amplitude sup norms on a polydisc against the bound `m^{j+1} j^{7j}`.

use cmag_wkb::experiment::{solution_and_growth, ExperimentConfig, FieldConfig};

fn main() {
    let mut cfg = ExperimentConfig::new(FieldConfig::builtin("polynomial").unwrap(), [0.0, 0.0]);
    cfg.order = 6;
    let (_, fit) = solution_and_growth(&cfg).unwrap();
    println!("polydisc {:?}", fit.polydisc);
    for (j, n) in fit.per_j_norms.iter().enumerate() {
        println!("j = {j}: sup |a_j| = {n:.4e}, bound {:.4e}", fit.bound(j));
    }
    println!("m = {:.4}, sigma = {:.3}, holds = {}", fit.m_fitted, fit.sigma_fitted, fit.holds());
}
