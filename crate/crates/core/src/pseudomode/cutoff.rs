//! Radial plateau cutoff and the choice of its radii.

use serde::{Deserialize, Serialize};

/// `e^{-1/t}` and its first two derivatives, zero for `t <= 0`.
fn bump_edge(t: f64) -> [f64; 3] {
    if t <= 0.0 {
        return [0.0; 3];
    }
    let f = (-1.0 / t).exp();
    let t2 = t * t;
    [f, f / t2, f * (1.0 / (t2 * t2) - 2.0 / (t2 * t))]
}

/// Smooth step: 1 for `t <= 0`, 0 for `t >= 1`, with its first two derivatives.
pub fn smooth_step(t: f64) -> [f64; 3] {
    let [p, dp0, ddp0] = bump_edge(1.0 - t);
    let [q, dq, ddq] = bump_edge(t);
    let (dp, ddp) = (-dp0, ddp0);
    let s = p + q;
    let n = dp * q - p * dq;
    let dn = ddp * q - p * ddq;
    [p / s, n / (s * s), (dn * s - 2.0 * n * (dp + dq)) / (s * s * s)]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub r_in: f64,
    pub r_out: f64,
    pub delta: f64,
    /// `M1 |x|^2 <= Re P(x)` on the validity disc.
    pub m1: f64,
    /// `Re P(x) <= M2 |x|^2` on the validity disc.
    pub m2: f64,
}

/// `chi`, `grad chi` and `Delta chi` at `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffJet {
    pub value: f64,
    pub grad: [f64; 2],
    pub laplacian: f64,
}

impl CutoffSpec {
    pub fn jet(&self, x: [f64; 2]) -> CutoffJet {
        let r = x[0].hypot(x[1]);
        if r <= self.r_in {
            return CutoffJet {
                value: 1.0,
                grad: [0.0; 2],
                laplacian: 0.0,
            };
        }
        if r >= self.r_out {
            return CutoffJet {
                value: 0.0,
                grad: [0.0; 2],
                laplacian: 0.0,
            };
        }
        let width = self.r_out - self.r_in;
        let [v, d1, d2] = smooth_step((r - self.r_in) / width);
        let (d1, d2) = (d1 / width, d2 / (width * width));
        CutoffJet {
            value: v,
            grad: [d1 * x[0] / r, d1 * x[1] / r],
            laplacian: d2 + d1 / r,
        }
    }

    pub fn value(&self, x: [f64; 2]) -> f64 {
        self.jet(x).value
    }
}

/// Smaller eigenvalue of `[[q1, -q2], [-q2, q3]]`.
pub fn lambda_min(q: [f64; 3]) -> f64 {
    let mean = 0.5 * (q[0] + q[2]);
    let half = 0.5 * (q[0] - q[2]);
    mean - (half * half + q[1] * q[1]).sqrt()
}

const RINGS: usize = 16;
const ANGLES: usize = 64;

/// Largest radius `delta <= r_max` (shrinking by 10% per try) on which the
/// sampled `Re P` stays above `m1 |x|^2`, together with the observed upper
/// constant. `None` if no radius down to `r_max / 1000` works.
pub fn select_delta(re_p: impl Fn([f64; 2]) -> f64, r_max: f64, m1: f64) -> Option<CutoffSpec> {
    let mut delta = r_max;
    while delta >= 1e-3 * r_max {
        let mut ok = true;
        let mut m2: f64 = 0.0;
        'rings: for k in 1..=RINGS {
            let r = delta * k as f64 / RINGS as f64;
            for a in 0..ANGLES {
                let t = 2.0 * std::f64::consts::PI * a as f64 / ANGLES as f64;
                let v = re_p([r * t.cos(), r * t.sin()]);
                if !(v >= m1 * r * r) {
                    ok = false;
                    break 'rings;
                }
                m2 = m2.max(v / (r * r));
            }
        }
        if ok {
            return Some(CutoffSpec {
                r_in: 0.5 * delta,
                r_out: delta,
                delta,
                m1,
                m2,
            });
        }
        delta *= 0.9;
    }
    None
}
