//! The operator applied on a grid by fourth-order differences, compared with
//! the residual computed from the series identities.

use std::sync::Arc;

use cmag_wkb::experiment::FieldConfig;
use cmag_wkb::fieldmodel::FieldSpec;
use cmag_wkb::numop::residual_finite_difference;
use cmag_wkb::pseudomode::{residual_series_exact, NRule, Pseudomode};
use cmag_wkb::wkb::WkbSolution;

fn main() {
    let field = FieldSpec::new(FieldConfig::builtin("polynomial").unwrap().potential(), [0.0, 0.0], 40).unwrap();
    let sol = Arc::new(WkbSolution::build(&field, 3).unwrap());
    let pm = Pseudomode::new(&field, sol, NRule::Fixed { n: 1 }, None).unwrap();
    let h = 0.05;
    let exact = residual_series_exact(&pm, h).unwrap();
    for n in [128, 256, 512] {
        let fd = residual_finite_difference(&pm, h, n).unwrap();
        println!(
            "n = {n}: finite differences {:.4e}, series {:.4e}, relative gap {:.2e}",
            fd.ratio,
            exact.ratio,
            (fd.ratio - exact.ratio).abs() / exact.ratio
        );
    }
}
