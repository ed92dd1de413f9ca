//! Residual reports and their CSV and JSON forms.

use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str = "# cmag-wkb v1\nh,N_used,evaluator,u_norm,residual_norm,ratio,quad_points,tail_estimate";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluator {
    SeriesExact,
    FiniteDifference,
}

impl Evaluator {
    pub fn name(&self) -> &'static str {
        match self {
            Evaluator::SeriesExact => "series_exact",
            Evaluator::FiniteDifference => "finite_difference",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub h: f64,
    #[serde(rename = "N_used")]
    pub n_used: usize,
    pub evaluator: Evaluator,
    pub u_norm: f64,
    pub residual_norm: f64,
    pub ratio: f64,
    /// Points per axis at the finest resolution used.
    pub quad_points: usize,
    pub tail_estimate: f64,
    /// Norm of the part `chi e^{-P/h} h^{N+2} (-Delta a_N)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior_norm: Option<f64>,
    /// Norm of the commutator part supported where `grad chi != 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff_norm: Option<f64>,
}

impl ResidualReport {
    /// One CSV row; floats use the shortest round-trip form.
    pub fn csv_row(&self) -> String {
        format!(
            "{:?},{},{},{:?},{:?},{:?},{},{:?}",
            self.h,
            self.n_used,
            self.evaluator.name(),
            self.u_norm,
            self.residual_norm,
            self.ratio,
            self.quad_points,
            self.tail_estimate
        )
    }

    pub fn to_csv(reports: &[ResidualReport]) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in reports {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }

    pub fn to_json(reports: &[ResidualReport]) -> String {
        serde_json::to_string_pretty(reports).expect("reports always serialize")
    }
}
