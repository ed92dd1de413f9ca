use std::f64::consts::PI;
use std::sync::Arc;

use super::*;
use crate::fieldmodel::{Poly, Potential};
use crate::pseudomode::{residual_series_exact, NRule};
use crate::wkb::WkbSolution;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn field(p: Potential, x0: [f64; 2]) -> FieldSpec {
    FieldSpec::new(p, x0, 8).unwrap()
}

fn oscillating() -> FieldSpec {
    field(Potential::Oscillating, [PI / 3.0, -PI / 2.0])
}

fn zero_potential() -> Potential {
    Potential::User {
        a1: Poly::default(),
        a2: Poly::default(),
    }
}

/// `e^{psi}` with `psi = -|x|^2/s + i k.x`, its gradient and Laplacian.
fn wave_packet(x: [f64; 2], s: f64, k: [f64; 2]) -> (Complex64, [Complex64; 2], Complex64) {
    let u = (c(-(x[0] * x[0] + x[1] * x[1]) / s, k[0] * x[0] + k[1] * x[1])).exp();
    let g = [c(-2.0 * x[0] / s, k[0]), c(-2.0 * x[1] / s, k[1])];
    let lap = g[0] * g[0] + g[1] * g[1] - 4.0 / s;
    (u, [g[0] * u, g[1] * u], lap * u)
}

fn exact_image(f: &FieldSpec, h: f64, x: [f64; 2], s: f64, k: [f64; 2]) -> Complex64 {
    let (u, g, lap) = wave_packet(x, s, k);
    let b = f.base_point();
    let p = [b[0] + x[0], b[1] + x[1]];
    let a = f.potential().a_at(p);
    let da = f.potential().first_partials(p);
    -h * h * lap + I * h * (da[0][0] + da[1][1]) * u + 2.0 * I * h * (a[0] * g[0] + a[1] * g[1]) + (a[0] * a[0] + a[1] * a[1]) * u
}

fn max_interior_error(f: &FieldSpec, h: f64, n: usize, s: f64, k: [f64; 2]) -> f64 {
    let grid = Grid2D::new(1.0, n).unwrap();
    let u = GridFunction::from_fn(grid, |x| wave_packet(x, s, k).0);
    let lu = apply_l(f, h, &u).unwrap();
    let mut worst: f64 = 0.0;
    for j in 2..n - 2 {
        for i in 2..n - 2 {
            worst = worst.max((lu.at(i, j) - exact_image(f, h, grid.point(i, j), s, k)).norm());
        }
    }
    worst
}

#[test]
fn grid_validation() {
    assert!(Grid2D::new(1.0, 15).is_err());
    assert!(Grid2D::new(0.0, 32).is_err());
    let g = Grid2D::new(1.0, 21).unwrap();
    assert!((g.spacing() - 0.1).abs() < 1e-15);
    assert_eq!(g.point(0, 20), [-1.0, 1.0]);
    assert!(GridFunction::new(g, vec![c(0.0, 0.0); 3]).is_err());
}

#[test]
fn free_plane_wave_has_the_laplacian_symbol() {
    let f = field(zero_potential(), [0.0, 0.0]);
    let (h, k) = (0.1, [3.0, -2.0]);
    // A broad envelope keeps the packet close to a plane wave near the centre.
    let s = 0.02;
    let grid = Grid2D::new(1.0, 257).unwrap();
    let u = GridFunction::from_fn(grid, |x| wave_packet(x, s, k).0);
    let lu = apply_l(&f, h, &u).unwrap();
    let x = grid.point(128, 128);
    assert_eq!(x, [0.0, 0.0]);
    // At the centre -Delta e^{psi} = (|k|^2 + 4/s) e^{psi}.
    let expected = h * h * (k[0] * k[0] + k[1] * k[1] + 4.0 / s);
    assert!((lu.at(128, 128) - c(expected, 0.0)).norm() < 1e-3 * expected);
}

#[test]
fn stencils_are_fourth_order() {
    let f = oscillating();
    let errs: Vec<f64> = [64, 128, 256].iter().map(|&n| max_interior_error(&f, 0.1, n, 0.02, [2.0, 1.0])).collect();
    let slopes: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    for s in &slopes {
        assert!((s - 4.0).abs() < 0.3, "{errs:?} {slopes:?}");
    }
}

#[test]
fn real_potentials_give_a_symmetric_operator() {
    let f = field(Potential::MillerSimon { c: c(0.7, 0.0), alpha: 1.0 }, [0.2, -0.1]);
    let grid = Grid2D::new(1.0, 257).unwrap();
    let u = GridFunction::from_fn(grid, |x| wave_packet(x, 0.02, [1.0, 3.0]).0 * c(1.0, 0.5));
    let lu = apply_l(&f, 0.1, &u).unwrap();
    let q = lu.inner(&u);
    assert!(q.im.abs() < 1e-8 * q.norm(), "{q}");
}

#[test]
fn real_gauge_changes_conjugate_the_operator() {
    let g = Poly::new([([2, 1], c(0.4, 0.0)), ([0, 2], c(-0.3, 0.0))]);
    let x0 = [PI / 3.0, -PI / 2.0];
    let f1 = oscillating();
    let f2 = field(Potential::Oscillating.gauged(g.clone()), x0);
    let h = 0.1;
    let phase = |x: [f64; 2]| {
        let v: Complex64 = g.eval(&c(x0[0] + x[0], 0.0), &c(x0[1] + x[1], 0.0));
        Complex64::from_polar(1.0, v.re / h)
    };
    let mismatch = |n: usize| {
        let grid = Grid2D::new(1.0, n).unwrap();
        let u = GridFunction::from_fn(grid, |x| wave_packet(x, 0.02, [0.0, 0.0]).0);
        let lu = apply_l(&f1, h, &u).unwrap().map(|x, v| phase(x) * v);
        let lv = apply_l(&f2, h, &u.map(|x, v| phase(x) * v)).unwrap();
        lv.axpy(c(-1.0, 0.0), &lu).norm() / lu.norm()
    };
    let (coarse, fine) = (mismatch(257), mismatch(513));
    assert!(coarse < 1e-4 && fine < coarse / 10.0, "{coarse} {fine}");
}

#[test]
fn support_violations_are_reported() {
    let f = oscillating();
    let grid = Grid2D::new(0.2, 64).unwrap();
    let u = GridFunction::from_fn(grid, |x| wave_packet(x, 0.02, [0.0, 0.0]).0);
    match apply_l(&f, 0.1, &u).unwrap_err() {
        NumopError::SupportViolation { suggested, .. } => assert!(suggested > 0.2),
        e => panic!("{e}"),
    }
    assert!(matches!(apply_l(&f, 0.0, &u), Err(NumopError::Domain(_))));
}

#[test]
fn magnetic_inequalities_hold_for_random_bumps() {
    let report = verify_magnetic_inequalities(&oscillating(), 0.1, 50, 7, 1.0, 201).unwrap();
    assert_eq!(report.trials.len(), 50);
    assert!(report.holds(), "{:?} {:?}", report.worst_relative, report.failing_trial);
    let free = verify_magnetic_inequalities(&field(zero_potential(), [0.0, 0.0]), 0.1, 5, 1, 1.0, 101).unwrap();
    assert!(free.trials.iter().all(|t| t.re_b_side == 0.0 && t.im_b_side == 0.0 && t.im_a_mass == 0.0));
    assert!(free.holds());
}

#[test]
fn landau_ground_state_is_nearly_tight() {
    // A = b (-x2, x1)/2 with e^{-b|x|^2/(4h)} attains equality in the first inequality.
    let b = 1.0;
    let p = Potential::User {
        a1: Poly::new([([0, 1], c(-0.5 * b, 0.0))]),
        a2: Poly::new([([1, 0], c(0.5 * b, 0.0))]),
    };
    let h = 0.1;
    let grid = Grid2D::new(3.5, 257).unwrap();
    let u = GridFunction::from_fn(grid, |x| c((-b * (x[0] * x[0] + x[1] * x[1]) / (4.0 * h)).exp(), 0.0));
    let t = magnetic_terms(&field(p, [0.0, 0.0]), h, &u).unwrap();
    let rel = t.relative_slacks()[0];
    assert!(rel.abs() <= 0.2, "{t:?}");
    assert!(rel.abs() < 1e-5, "{t:?}");
}

#[test]
fn grid_files_round_trip() {
    let grid = Grid2D::new(0.75, 17).unwrap();
    let u = GridFunction::from_fn(grid, |x| c(x[0].sin(), 1.0 / 3.0 + x[1]));
    let mut buf = Vec::new();
    write_grid_function(&u, &mut buf).unwrap();
    let header_end = buf.iter().position(|&b| b == b'\n').unwrap();
    assert!(std::str::from_utf8(&buf[..header_end]).unwrap().starts_with("cmag-grid v1 n=17 L=0.75"));
    assert_eq!(buf.len(), header_end + 1 + 16 * 17 * 17);
    let back = read_grid_function(&buf[..]).unwrap();
    assert_eq!(back, u);
    assert!(matches!(read_grid_function(&b"nonsense\n"[..]), Err(NumopError::Format(_))));
    assert!(matches!(read_grid_function(&buf[..buf.len() - 1]), Err(NumopError::Format(_))));
}

#[test]
fn finite_differences_agree_with_the_series_residual() {
    let p = Potential::Polynomial {
        a: c(1.0, 0.0),
        b: c(0.0, 1.0),
        c: c(1.0, 0.0),
        r: Poly::new([([6, 0], c(1.0, 0.0)), ([4, 2], c(3.0, 0.0)), ([2, 4], c(3.0, 0.0)), ([0, 6], c(1.0, 0.0))]),
    };
    let f = FieldSpec::new(p, [0.0, 0.0], 40).unwrap();
    let sol = Arc::new(WkbSolution::build(&f, 3).unwrap());
    let pm = Pseudomode::new(&f, sol, NRule::Fixed { n: 1 }, None).unwrap();
    let h = 0.05;
    let fd = residual_finite_difference(&pm, h, 256).unwrap();
    let se = residual_series_exact(&pm, h).unwrap();
    assert_eq!(fd.evaluator, Evaluator::FiniteDifference);
    assert!((fd.ratio - se.ratio).abs() < 0.1 * se.ratio, "{} vs {}", fd.ratio, se.ratio);
    assert!((fd.u_norm - se.u_norm).abs() < 1e-3 * se.u_norm);
}
