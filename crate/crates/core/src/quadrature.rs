//! Gauss–Legendre rules: fixed, adaptive in one dimension, and tensor
//! products on squares with order-independent summation.

use num_complex::Complex64;
use rayon::prelude::*;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "a quadrature rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `(P_n(t), P_n'(t))` by the three-term recurrence.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Sum by recursive halving; the result depends only on the order of `v`.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `int_a^b f` with a fixed rule.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> Complex64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.0
        .iter()
        .zip(&rule.1)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, w)| acc + f(mid + half * x) * (w * half))
}

/// Adaptive bisection comparing 10- and 20-point rules until the
/// difference on each piece is below its share of `tol`.
pub fn adaptive<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    let coarse = gauss_legendre(10);
    let fine = gauss_legendre(20);
    adaptive_rec(f, a, b, tol, &coarse, &fine, 0)
}

fn adaptive_rec<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    coarse: &(Vec<f64>, Vec<f64>),
    fine: &(Vec<f64>, Vec<f64>),
    depth: usize,
) -> Complex64 {
    let i1 = integrate(f, a, b, coarse);
    let i2 = integrate(f, a, b, fine);
    if (i1 - i2).norm() <= tol || depth >= 30 {
        return i2;
    }
    let m = 0.5 * (a + b);
    adaptive_rec(f, a, m, 0.5 * tol, coarse, fine, depth + 1)
        + adaptive_rec(f, m, b, 0.5 * tol, coarse, fine, depth + 1)
}

/// Tensor rule with `n` nodes per axis on `[-r, r]^2`: returns the physical
/// nodes along one axis and the matching weights.
pub fn square_rule(r: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (x.iter().map(|t| t * r).collect(), w.iter().map(|v| v * r).collect())
}

/// `int_{[-r,r]^2} f` with `n` nodes per axis; rows run in parallel and are
/// combined by [`pairwise_sum`] in row order.
pub fn tensor_integral<F: Fn([f64; 2]) -> f64 + Sync>(f: F, r: f64, n: usize) -> f64 {
    let (x, w) = square_rule(r, n);
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let vals: Vec<f64> = (0..n).map(|i| w[i] * f([x[i], x[j]])).collect();
            w[j] * pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&rows)
}

/// Several integrals over `[-r,r]^2` sharing one set of nodes; each component
/// is summed exactly as in [`tensor_integral`].
pub fn tensor_integrals<const K: usize, F: Fn([f64; 2]) -> [f64; K] + Sync>(f: F, r: f64, n: usize) -> [f64; K] {
    let (x, w) = square_rule(r, n);
    let rows: Vec<[f64; K]> = (0..n)
        .into_par_iter()
        .map(|j| {
            let vals: Vec<[f64; K]> = (0..n).map(|i| f([x[i], x[j]])).collect();
            std::array::from_fn(|k| {
                let col: Vec<f64> = (0..n).map(|i| w[i] * vals[i][k]).collect();
                w[j] * pairwise_sum(&col)
            })
        })
        .collect();
    std::array::from_fn(|k| {
        let col: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        pairwise_sum(&col)
    })
}
