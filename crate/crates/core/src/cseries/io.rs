//! Structured-text form of series: the cap, the center and one
//! `(alpha, beta, re, im)` record per nonzero coefficient. Floats are written
//! in shortest round-trip form, so a decode of an encode is bit-exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bi::BiSeries;
use super::uni::UniSeries;
use super::SeriesError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub alpha: usize,
    pub beta: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub cap: usize,
    pub center: [[f64; 2]; 2],
    pub coeffs: Vec<CoeffRecord>,
}

impl From<&BiSeries> for SeriesRecord {
    fn from(s: &BiSeries) -> Self {
        let c = s.center();
        Self {
            cap: s.cap(),
            center: [[c[0].re, c[0].im], [c[1].re, c[1].im]],
            coeffs: s
                .terms()
                .map(|(alpha, beta, v)| CoeffRecord {
                    alpha,
                    beta,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<SeriesRecord> for BiSeries {
    type Error = SeriesError;

    fn try_from(r: SeriesRecord) -> Result<Self, SeriesError> {
        let mut s = BiSeries::zero(r.cap).with_center([
            Complex64::new(r.center[0][0], r.center[0][1]),
            Complex64::new(r.center[1][0], r.center[1][1]),
        ]);
        for rec in r.coeffs {
            if rec.alpha + rec.beta > r.cap {
                return Err(SeriesError::Parse(format!(
                    "exponent ({}, {}) exceeds cap {}",
                    rec.alpha, rec.beta, r.cap
                )));
            }
            s.set(rec.alpha, rec.beta, Complex64::new(rec.re, rec.im));
        }
        Ok(s)
    }
}

impl From<&UniSeries> for SeriesRecord {
    fn from(s: &UniSeries) -> Self {
        SeriesRecord::from(&s.to_bi())
    }
}

impl TryFrom<SeriesRecord> for UniSeries {
    type Error = SeriesError;

    fn try_from(r: SeriesRecord) -> Result<Self, SeriesError> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); r.cap + 1];
        for rec in r.coeffs {
            if rec.beta != 0 || rec.alpha > r.cap {
                return Err(SeriesError::Parse(format!(
                    "univariate record ({}, {}) with cap {}",
                    rec.alpha, rec.beta, r.cap
                )));
            }
            coeffs[rec.alpha] = Complex64::new(rec.re, rec.im);
        }
        Ok(UniSeries::from_coeffs(coeffs))
    }
}

impl Serialize for BiSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesRecord::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BiSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = SeriesRecord::deserialize(deserializer)?;
        BiSeries::try_from(r).map_err(serde::de::Error::custom)
    }
}

impl Serialize for UniSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesRecord::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UniSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = SeriesRecord::deserialize(deserializer)?;
        UniSeries::try_from(r).map_err(serde::de::Error::custom)
    }
}

impl BiSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series records always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, SeriesError> {
        serde_json::from_str(text).map_err(|e| SeriesError::Parse(e.to_string()))
    }
}
