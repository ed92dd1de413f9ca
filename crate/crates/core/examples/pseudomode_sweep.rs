//! Residual ratio `||(L - h mu) u_h|| / ||u_h||` of the cut-off pseudomode over
//! a geometric h-sweep, with power-law and stretched-exponential fits.

use std::sync::Arc;

use cmag_wkb::experiment::{FieldConfig, Sweep};
use cmag_wkb::fieldmodel::FieldSpec;
use cmag_wkb::pseudomode::{fit_decay, residual_series_exact, DecayModel, NRule, Pseudomode};
use cmag_wkb::wkb::WkbSolution;

fn main() {
    let field = FieldSpec::new(FieldConfig::builtin("polynomial").unwrap().potential(), [0.0, 0.0], 40).unwrap();
    let sol = Arc::new(WkbSolution::build(&field, 3).unwrap());
    for n in 0..=2 {
        let pm = Pseudomode::new(&field, sol.clone(), NRule::Fixed { n }, None).unwrap();
        let reports: Vec<_> = Sweep::default()
            .values()
            .into_iter()
            .map(|h| residual_series_exact(&pm, h).unwrap())
            .collect();
        let power = fit_decay(&reports, DecayModel::Power).unwrap();
        println!("N = {n}: slope {:.3} (R^2 {:.3})", power.parameter, power.r_squared);
        for r in &reports {
            println!("  h = {:.4}  ratio = {:.3e}  ||u|| = {:.4}", r.h, r.ratio, r.u_norm);
        }
    }
}
