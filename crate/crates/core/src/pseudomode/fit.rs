//! Least-squares decay models for residual ratios.

use serde::{Deserialize, Serialize};

use super::{PseudomodeError, ResidualReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayModel {
    /// `ratio ~ c h^slope`.
    Power,
    /// `ratio ~ c exp(-C / h^{1/7})`.
    Stretched,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub model: DecayModel,
    /// Power: the exponent. Stretched: the constant `C`.
    pub parameter: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Line fit `y = intercept + slope x` with its coefficient of determination.
pub fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (my - slope * mx, slope, r2)
}

pub fn fit_decay(reports: &[ResidualReport], model: DecayModel) -> Result<DecayFit, PseudomodeError> {
    let (lo, hi) = reports
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.h), hi.max(r.h)));
    if reports.len() < 4 || hi < 10.0 * lo * (1.0 - 1e-12) {
        return Err(PseudomodeError::TooFewReports);
    }
    let y: Vec<f64> = reports.iter().map(|r| r.ratio.ln()).collect();
    let x: Vec<f64> = reports
        .iter()
        .map(|r| match model {
            DecayModel::Power => r.h.ln(),
            DecayModel::Stretched => r.h.powf(-1.0 / 7.0),
        })
        .collect();
    let (intercept, slope, r_squared) = line_fit(&x, &y);
    let parameter = match model {
        DecayModel::Power => slope,
        DecayModel::Stretched => -slope,
    };
    Ok(DecayFit {
        model,
        parameter,
        intercept,
        r_squared,
    })
}
