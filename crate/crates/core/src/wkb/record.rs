//! Structured text form of a [`WkbSolution`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{IdentityReport, WkbSolution};
use crate::cseries::{BiSeries, UniSeries};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WkbRecord {
    pub mu: Complex64,
    pub order: usize,
    pub trusted_radii: [f64; 2],
    pub btilde: BiSeries,
    pub phi: BiSeries,
    pub w_curve: UniSeries,
    pub f: UniSeries,
    pub s: BiSeries,
    pub v: BiSeries,
    pub f_div: BiSeries,
    pub j: BiSeries,
    pub a0_z: UniSeries,
    pub amplitudes: Vec<BiSeries>,
    pub identities: IdentityReport,
}

impl From<&WkbSolution> for WkbRecord {
    fn from(s: &WkbSolution) -> Self {
        Self {
            mu: s.mu,
            order: s.order,
            trusted_radii: s.trusted_radii,
            btilde: s.btilde.clone(),
            phi: s.phi.clone(),
            w_curve: s.w_curve.clone(),
            f: s.f.clone(),
            s: s.s.clone(),
            v: s.v.clone(),
            f_div: s.f_div.clone(),
            j: s.j.clone(),
            a0_z: s.a0_z.clone(),
            amplitudes: s.amplitudes.clone(),
            identities: s.identities.clone(),
        }
    }
}

impl From<WkbRecord> for WkbSolution {
    fn from(r: WkbRecord) -> Self {
        Self {
            btilde: r.btilde,
            phi: r.phi,
            w_curve: r.w_curve,
            f: r.f,
            s: r.s,
            v: r.v,
            f_div: r.f_div,
            j: r.j,
            a0_z: r.a0_z,
            amplitudes: r.amplitudes,
            mu: r.mu,
            order: r.order,
            trusted_radii: r.trusted_radii,
            identities: r.identities,
        }
    }
}

impl WkbSolution {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&WkbRecord::from(self)).expect("records always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str::<WkbRecord>(text).map(Into::into)
    }
}
