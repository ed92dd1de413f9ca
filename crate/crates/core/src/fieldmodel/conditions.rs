//! Sampling checks of the pointwise bounds on `|Im A|^2` and of the growth
//! hypotheses at infinity. Both are heuristics on finite samples, not proofs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gamma::Region;
use super::potential::Potential;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CCheck {
    /// `|Im A|^2 <= +-eps h Re B + C`
    C1,
    /// `|Im A|^2 <= +-eps h Im B + C`
    C2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheckConfig {
    pub epsilon: f64,
    pub c_const: f64,
    pub region: Region,
    pub density: usize,
    pub h: f64,
}

impl ConditionCheckConfig {
    /// Whether `epsilon` lies in the admissible range for `which`.
    pub fn epsilon_admissible(&self, which: CCheck) -> bool {
        let upper = match which {
            CCheck::C1 => 1.0,
            CCheck::C2 => 0.5,
        };
        self.epsilon > 0.0 && self.epsilon < upper
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CVerdict {
    pub which: CCheck,
    pub sign: Sign,
    pub pass: bool,
    pub epsilon_admissible: bool,
    pub min_slack: f64,
    pub worst_point: [f64; 2],
}

/// Smallest `+-eps h (Re|Im) B + C - |Im A|^2` over the sample grid.
pub fn check_c(potential: &Potential, cfg: &ConditionCheckConfig, which: CCheck, sign: Sign) -> CVerdict {
    let slack = |x: [f64; 2]| {
        let a = potential.a_at(x);
        let im_a2 = a[0].im * a[0].im + a[1].im * a[1].im;
        let b = potential.b_at(x);
        let part = match which {
            CCheck::C1 => b.re,
            CCheck::C2 => b.im,
        };
        sign.factor() * cfg.epsilon * cfg.h * part + cfg.c_const - im_a2
    };
    let (min_slack, worst_point) = cfg
        .region
        .grid(cfg.density)
        .into_par_iter()
        .map(|x| (slack(x), x))
        .reduce(
            || (f64::INFINITY, [f64::NAN; 2]),
            |a, b| if b.0 < a.0 || b.0.is_nan() { b } else { a },
        );
    let epsilon_admissible = cfg.epsilon_admissible(which);
    CVerdict {
        which,
        sign,
        pass: epsilon_admissible && min_slack >= 0.0,
        epsilon_admissible,
        min_slack,
        worst_point,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendSign {
    Positive,
    Negative,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendVerdict {
    pub diverges: bool,
    /// Minimum over each sampled circle.
    pub circle_minima: Vec<f64>,
    /// Slope of `log(min)` against `log(r)` over circles with positive minimum.
    pub growth_exponent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HReport {
    pub radii: Vec<f64>,
    pub h1: TrendVerdict,
    /// Sign of `Re B` on the outermost circle.
    pub h1_sign: TrendSign,
    pub h2: TrendVerdict,
    pub h3: TrendVerdict,
}

pub const H_ANGLES: usize = 64;
const H_GROWTH: f64 = 1.05;

/// Minimum over a circle, with values at rounding level relative to the
/// circle's maximum counted as zero.
fn circle_min(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo <= 1e-9 * hi {
        0.0
    } else {
        lo
    }
}

fn trend(minima: Vec<f64>, radii: &[f64]) -> TrendVerdict {
    let n = minima.len();
    let diverges = n >= 3
        && minima[n - 3..]
            .windows(2)
            .all(|w| w[0] > 0.0 && w[1] >= H_GROWTH * w[0]);
    let pts: Vec<(f64, f64)> = radii
        .iter()
        .zip(&minima)
        .filter(|(r, m)| **r > 0.0 && **m > 0.0 && m.is_finite())
        .map(|(r, m)| (r.ln(), m.ln()))
        .collect();
    let growth_exponent = if pts.len() >= 2 {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    } else {
        f64::NAN
    };
    TrendVerdict {
        diverges,
        circle_minima: minima,
        growth_exponent,
    }
}

/// Trend checks of `|Re B|`, `|Im B|`, `|Im A|` growing without bound, from
/// their minima over circles of the given increasing radii.
pub fn check_h(potential: &Potential, radii: &[f64]) -> HReport {
    let circle = |r: f64| -> Vec<[f64; 2]> {
        (0..H_ANGLES)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / H_ANGLES as f64;
                [r * t.cos(), r * t.sin()]
            })
            .collect()
    };
    let mut m1 = Vec::new();
    let mut m2 = Vec::new();
    let mut m3 = Vec::new();
    let mut last_re_b = Vec::new();
    for &r in radii {
        let pts = circle(r);
        let bs: Vec<_> = pts.iter().map(|x| potential.b_at(*x)).collect();
        let ims: Vec<f64> = pts
            .iter()
            .map(|x| {
                let a = potential.a_at(*x);
                a[0].im.hypot(a[1].im)
            })
            .collect();
        m1.push(circle_min(bs.iter().map(|b| b.re.abs())));
        m2.push(circle_min(bs.iter().map(|b| b.im.abs())));
        m3.push(circle_min(ims.into_iter()));
        last_re_b = bs.iter().map(|b| b.re).collect();
    }
    let h1_sign = if !last_re_b.is_empty() && last_re_b.iter().all(|v| *v > 0.0) {
        TrendSign::Positive
    } else if !last_re_b.is_empty() && last_re_b.iter().all(|v| *v < 0.0) {
        TrendSign::Negative
    } else {
        TrendSign::Mixed
    };
    HReport {
        radii: radii.to_vec(),
        h1: trend(m1, radii),
        h1_sign,
        h2: trend(m2, radii),
        h3: trend(m3, radii),
    }
}
