//! Writing a sampled pseudomode to the binary grid format and reading it back.

use std::sync::Arc;

use cmag_wkb::experiment::FieldConfig;
use cmag_wkb::fieldmodel::FieldSpec;
use cmag_wkb::numop::{read_grid_function, write_grid_function, Grid2D, GridFunction};
use cmag_wkb::pseudomode::{NRule, Pseudomode};
use cmag_wkb::wkb::WkbSolution;

fn main() {
    let field = FieldSpec::new(FieldConfig::builtin("polynomial").unwrap().potential(), [0.0, 0.0], 40).unwrap();
    let sol = Arc::new(WkbSolution::build(&field, 3).unwrap());
    let pm = Pseudomode::new(&field, sol, NRule::Fixed { n: 1 }, None).unwrap();
    let grid = Grid2D::new(2.0 * pm.cutoff().r_out, 128).unwrap();
    let u = GridFunction::from_fn(grid, |x| pm.u(x, 0.05));
    let mut bytes = Vec::new();
    write_grid_function(&u, &mut bytes).unwrap();
    let back = read_grid_function(&bytes[..]).unwrap();
    println!("{} bytes, ||u|| = {:.6}, identical after reading: {}", bytes.len(), u.norm(), back == u);
}
