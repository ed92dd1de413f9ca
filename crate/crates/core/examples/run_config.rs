//! A complete run from a TOML description, writing every report to a directory.

use cmag_wkb::experiment::{run, write_artifacts, ExperimentConfig};

const CONFIG: &str = r#"
base_point = [0.0, 0.0]
degree_cap = 40
order = 3
rule = { kind = "fixed", n = 1 }
sweep = { h_max = 0.1, h_min = 0.003, count = 8 }
output_dir = "target/run_config"

[field]
builtin = "polynomial"
a = "1"
b = "i"
c = "1"
"#;

fn main() {
    let cfg = ExperimentConfig::from_toml(CONFIG).unwrap();
    match run(&cfg) {
        Ok(artifacts) => {
            write_artifacts(&cfg.output_dir, &artifacts).unwrap();
            println!("reports written to {}", cfg.output_dir.display());
            if let Some(fit) = artifacts.power_fit {
                println!("power-law slope {:.3}", fit.parameter);
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
