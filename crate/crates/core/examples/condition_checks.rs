//! Pointwise conditions C1/C2 and the growth hypotheses H1-H3 on sample fields.

use cmag_wkb::experiment::{check_conditions, default_condition_config, FieldConfig, DEFAULT_H_RADII};

fn main() {
    let cfg = default_condition_config();
    for name in ["miller_simon", "exponential"] {
        let field = FieldConfig::builtin(name).unwrap();
        let summary = check_conditions(&field.potential(), &cfg, &DEFAULT_H_RADII);
        println!("{name}: C1 {}, C2 {}", summary.c1_pass(), summary.c2_pass());
        print!("{}", summary.table());
    }
}
