//! Sup-norms of the amplitudes on a polydisc and the growth constants of
//! the bound `|a_j| <= m^{j+1} j^{7j}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::WkbSolution;
use crate::cseries::powers;

/// Points per circle of the distinguished boundary.
pub const TORUS_MESH: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundFit {
    pub polydisc: [f64; 2],
    pub per_j_norms: Vec<f64>,
    pub m_fitted: f64,
    /// `sigma` in `|a_j| ~ m^j j^{sigma j}` by least squares over `j >= 1`;
    /// `NaN` with fewer than three nonzero norms.
    pub sigma_fitted: f64,
}

impl BoundFit {
    /// `m^{j+1} j^{7j}` with `0^0 = 1`.
    pub fn bound(&self, j: usize) -> f64 {
        let jj = if j == 0 { 1.0 } else { (j as f64).powf(7.0 * j as f64) };
        self.m_fitted.powi(j as i32 + 1) * jj
    }

    pub fn holds(&self) -> bool {
        self.per_j_norms
            .iter()
            .enumerate()
            .all(|(j, n)| *n <= self.bound(j) * (1.0 + 1e-12))
    }
}

/// Sup over the torus `|z| = R1, |w| = R2`, which bounds the polydisc by the
/// maximum principle.
fn torus_sup(a: &crate::cseries::BiSeries, radii: [f64; 2]) -> f64 {
    let d = a.cap();
    let angle = |k: usize| 2.0 * std::f64::consts::PI * k as f64 / TORUS_MESH as f64;
    let zp: Vec<Vec<Complex64>> = (0..TORUS_MESH)
        .map(|k| powers(Complex64::from_polar(radii[0], angle(k)), d))
        .collect();
    let wp: Vec<Vec<Complex64>> = (0..TORUS_MESH)
        .map(|k| powers(Complex64::from_polar(radii[1], angle(k) + 0.5 * angle(1)), d))
        .collect();
    let mut sup: f64 = 0.0;
    for z in &zp {
        for w in &wp {
            sup = sup.max(a.eval_with_powers(z, w).norm());
        }
    }
    sup
}

pub fn fit_growth(sol: &WkbSolution, polydisc: [f64; 2]) -> BoundFit {
    let per_j_norms: Vec<f64> = sol.amplitudes.iter().map(|a| torus_sup(a, polydisc)).collect();
    let m_fitted = per_j_norms
        .iter()
        .enumerate()
        .map(|(j, n)| {
            let jj = if j == 0 { 1.0 } else { (j as f64).powf(7.0 * j as f64) };
            (n / jj).powf(1.0 / (j as f64 + 1.0))
        })
        .fold(0.0, f64::max);
    BoundFit {
        polydisc,
        sigma_fitted: fit_sigma(&per_j_norms),
        per_j_norms,
        m_fitted,
    }
}

/// Least squares of `ln n_j = c + j ln m + sigma j ln j` over `j >= 1`.
fn fit_sigma(norms: &[f64]) -> f64 {
    let rows: Vec<([f64; 3], f64)> = norms
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, n)| **n > 0.0)
        .map(|(j, n)| {
            let jf = j as f64;
            ([1.0, jf, jf * jf.ln()], n.ln())
        })
        .collect();
    if rows.len() < 3 {
        return f64::NAN;
    }
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for (x, y) in &rows {
        for i in 0..3 {
            atb[i] += x[i] * y;
            for k in 0..3 {
                ata[i][k] += x[i] * x[k];
            }
        }
    }
    solve3(ata, atb).map_or(f64::NAN, |s| s[2])
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &k| a[i][col].abs().total_cmp(&a[k][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}
