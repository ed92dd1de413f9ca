//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion,
//! followed by indented details, and exits non-zero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use cmag_wkb::experiment::{check_conditions, default_condition_config, probe_radius, FieldConfig, Sweep};
use cmag_wkb::fieldmodel::{compute_q_at, gamma_scan, weyl_bracket, FieldSpec, Poly, Potential, Region};
use cmag_wkb::numop::{residual_finite_difference, verify_magnetic_inequalities};
use cmag_wkb::pseudomode::{
    fit_decay, line_fit, residual_series_exact, DecayModel, NRule, Pseudomode, PseudomodeError, ResidualReport,
};
use cmag_wkb::wkb::{fit_growth, WkbSolution};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self {
            pass,
            summary: summary.into(),
            details: Vec::new(),
        }
    }

    fn note(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }
}

fn oscillating_point() -> [f64; 2] {
    [PI / 3.0, -PI / 2.0]
}

fn oscillating(cap: usize) -> FieldSpec {
    FieldSpec::new(Potential::Oscillating, oscillating_point(), cap).unwrap()
}

/// Polynomial example `a = 1, b = i, c = 1, R = (x1^2 + x2^2)^3` at the origin.
fn polynomial(cap: usize) -> FieldSpec {
    let p = FieldConfig::builtin("polynomial").unwrap().potential();
    FieldSpec::new(p, [0.0, 0.0], cap).unwrap()
}

fn sweep() -> Vec<f64> {
    Sweep::default().values()
}

fn series_sweep(pm: &Pseudomode, hs: &[f64]) -> Vec<ResidualReport> {
    hs.iter().map(|&h| residual_series_exact(pm, h).unwrap()).collect()
}

/// The pseudomode at the oscillating point, or the reason it does not exist.
fn oscillating_pseudomode(n: usize) -> Result<Pseudomode, PseudomodeError> {
    let field = oscillating(40);
    let sol = Arc::new(WkbSolution::build(&field, 3).unwrap());
    Pseudomode::new(&field, sol, NRule::Fixed { n }, None)
}

fn refusal(e: &PseudomodeError) -> String {
    format!("oscillating example at (pi/3, -pi/2): {e}")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    for (name, field) in [("oscillating", oscillating(24)), ("polynomial", polynomial(24))] {
        match WkbSolution::build(&field, 3) {
            Ok(sol) => {
                let r = &sol.identities;
                let transports = r.checks.iter().filter(|c| c.name.starts_with("transport")).count();
                let compat = r.checks.iter().filter(|c| c.name.starts_with("compatibility")).count();
                pass &= r.all_pass() && transports >= 4 && compat >= 4;
                details.push(format!(
                    "{name}: {} checks ({transports} transport, {compat} compatibility), worst relative {:.2e}",
                    r.checks.len(),
                    r.worst_relative()
                ));
            }
            Err(e) => {
                pass = false;
                details.push(format!("{name}: {e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs <= 10.0;
    let mut o = Outcome::new(pass, format!("series identities at D=24, N=3 within 1e-10 ({secs:.2} s)"));
    o.details = details;
    o
}

fn criterion_2() -> Outcome {
    let n = 257;
    let reports = gamma_scan(&Potential::Oscillating, &Region::square(2.0 * PI), n);
    // Grid coordinate k is -2 pi + k pi / 64; Γ is x2 = -pi/2 mod 2 pi and
    // x1 mod 2 pi in (0, pi) without pi/2.
    let on_line = |k: usize| k == 96 || k == 224;
    let in_interval = |k: usize| {
        let r = k % 128;
        r > 0 && r < 64 && r != 32
    };
    let mut wrong = 0;
    let mut members = 0;
    for (idx, r) in reports.iter().enumerate() {
        let (i, j) = (idx % n, idx / n);
        let expected = on_line(j) && in_interval(i);
        let grid_x = [-2.0 * PI + i as f64 * PI / 64.0, -2.0 * PI + j as f64 * PI / 64.0];
        assert!((grid_x[0] - r.point[0]).abs() < 1e-12 && (grid_x[1] - r.point[1]).abs() < 1e-12);
        members += expected as usize;
        wrong += (expected != r.in_gamma) as usize;
    }
    let q = compute_q_at(&Potential::Oscillating, oscillating_point());
    let target = [3f64.sqrt() / 4.0, 0.0, 0.5];
    let q_err = [q.q1 - target[0], q.q2 - target[1], q.q3 - target[2]]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    Outcome::new(
        wrong == 0 && q_err <= 1e-12,
        format!("Γ scan {n}x{n}: {wrong} misclassified of {members} members; Q error {q_err:.1e}"),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let powers: Vec<[u32; 2]> = (0..=4u32).flat_map(|d| (0..=d).map(move |a| [a, d - a])).collect();
    let random_poly = |rng: &mut ChaCha8Rng| {
        Poly::new(powers.iter().map(|p| (*p, Complex64::new(rng.gen_range(-1.0..1.0), 0.0))))
    };
    let mut worst: f64 = 0.0;
    let mut evaluated = 0;
    for _ in 0..100 {
        let p = Potential::User {
            a1: random_poly(&mut rng),
            a2: random_poly(&mut rng),
        };
        for _ in 0..10 {
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let r = compute_q_at(&p, x);
            if r.q1.is_nan() {
                continue;
            }
            evaluated += 1;
            worst = worst.max((r.q1 * r.q3 - r.q2 * r.q2).abs());
        }
    }
    Outcome::new(
        worst <= 1e-12 && evaluated >= 900,
        format!("real potentials: max |Q1 Q3 - Q2^2| = {worst:.1e} over {evaluated} points"),
    )
}

fn criterion_4() -> Outcome {
    let hs = sweep();
    let mut o = match oscillating_pseudomode(1) {
        Ok(_) => {
            let start = Instant::now();
            let mut pass = true;
            let mut lines = Vec::new();
            for n in 0..=2 {
                let pm = oscillating_pseudomode(n).unwrap();
                let fit = fit_decay(&series_sweep(&pm, &hs), DecayModel::Power).unwrap();
                let target = (n + 2) as f64;
                pass &= (fit.parameter - target).abs() <= 0.3;
                lines.push(format!("N={n}: slope {:.3}", fit.parameter));
            }
            let o = Outcome::new(pass, format!("oscillating slopes: {}", lines.join(", ")));
            o.note(format!("{:.1} s", start.elapsed().as_secs_f64()))
        }
        Err(e) => Outcome::new(false, refusal(&e)),
    };
    let field = polynomial(40);
    let sol = Arc::new(WkbSolution::build(&field, 3).unwrap());
    for n in 0..=2 {
        let start = Instant::now();
        let pm = Pseudomode::new(&field, sol.clone(), NRule::Fixed { n }, None).unwrap();
        let reports = series_sweep(&pm, &hs);
        let fit = fit_decay(&reports, DecayModel::Power).unwrap();
        let last = reports.last().unwrap();
        let log_h: Vec<f64> = reports.iter().map(|r| r.h.ln()).collect();
        let log_interior: Vec<f64> = reports
            .iter()
            .map(|r| (r.interior_norm.unwrap_or(f64::NAN) / r.u_norm).ln())
            .collect();
        let (_, interior_slope, _) = line_fit(&log_h, &log_interior);
        o = o.note(format!(
            "polynomial example, N={n}: slope {:.3} (target {}), R^2 {:.3}, interior-only slope {:.3}; at h={:.3}: interior {:.2e}, cutoff {:.2e} ({:.1} s)",
            fit.parameter,
            n + 2,
            fit.r_squared,
            interior_slope,
            last.h,
            last.interior_norm.unwrap_or(f64::NAN) / last.u_norm,
            last.cutoff_norm.unwrap_or(f64::NAN) / last.u_norm,
            start.elapsed().as_secs_f64()
        ));
    }
    o
}

fn criterion_5() -> Outcome {
    let h = 0.05;
    let gap = |pm: &Pseudomode| {
        let fd = residual_finite_difference(pm, h, 512).unwrap();
        let se = residual_series_exact(pm, h).unwrap();
        ((fd.ratio - se.ratio).abs() / se.ratio, fd.ratio, se.ratio)
    };
    let o = match oscillating_pseudomode(1) {
        Ok(pm) => {
            let (g, fd, se) = gap(&pm);
            Outcome::new(g <= 0.1, format!("oscillating: FD {fd:.4e} vs series {se:.4e}, gap {g:.2e}"))
        }
        Err(e) => Outcome::new(false, refusal(&e)),
    };
    let field = polynomial(40);
    let sol = Arc::new(WkbSolution::build(&field, 3).unwrap());
    let pm = Pseudomode::new(&field, sol, NRule::Fixed { n: 1 }, None).unwrap();
    let (g, fd, se) = gap(&pm);
    o.note(format!(
        "polynomial example: FD {fd:.4e} vs series {se:.4e}, relative gap {g:.2e} (tolerance 0.1)"
    ))
}

fn adaptive_check(field: &FieldSpec) -> (bool, String) {
    let sol = Arc::new(WkbSolution::build(field, 6).unwrap());
    let r = probe_radius(field, &sol);
    let m = fit_growth(&sol, [r, r]).m_fitted;
    let hs = sweep();
    let fixed = Pseudomode::new(field, sol.clone(), NRule::Fixed { n: 1 }, None).unwrap();
    let adaptive = fixed.clone().with_rule(NRule::Adaptive { m });
    let f = series_sweep(&fixed, &hs);
    let a = series_sweep(&adaptive, &hs);
    let dominated = f
        .iter()
        .zip(&a)
        .filter(|(x, _)| x.h <= 0.02)
        .all(|(x, y)| y.ratio <= x.ratio * (1.0 + 1e-12));
    let fit = fit_decay(&a, DecayModel::Stretched).unwrap();
    let ns: Vec<usize> = a.iter().map(|r| r.n_used).collect();
    (
        dominated && fit.r_squared >= 0.9,
        format!(
            "m = {m:.4}, N(h) = {ns:?}, adaptive <= fixed for h <= 0.02: {dominated}, stretched R^2 {:.3}",
            fit.r_squared
        ),
    )
}

fn criterion_6() -> Outcome {
    let o = match oscillating_pseudomode(1) {
        Ok(_) => {
            let (pass, text) = adaptive_check(&oscillating(40));
            Outcome::new(pass, format!("oscillating: {text}"))
        }
        Err(e) => Outcome::new(false, refusal(&e)),
    };
    let (pass, text) = adaptive_check(&polynomial(40));
    o.note(format!("polynomial example ({}): {text}", if pass { "met" } else { "not met" }))
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut o = Outcome::new(true, "");
    for (name, field) in [("oscillating", oscillating(40)), ("polynomial", polynomial(40))] {
        let sol = WkbSolution::build(&field, 6).unwrap();
        let r = probe_radius(&field, &sol);
        let fit = fit_growth(&sol, [r, r]);
        let ok = fit.m_fitted.is_finite() && fit.m_fitted > 0.0 && fit.holds() && fit.per_j_norms.len() == 7;
        pass &= ok;
        o = o.note(format!(
            "{name}: polydisc radius {r:.4}, m = {:.4}, sigma = {:.3} (recorded, <= 7: {}), bound holds: {}",
            fit.m_fitted,
            fit.sigma_fitted,
            fit.sigma_fitted <= 7.0,
            fit.holds()
        ));
    }
    o.pass = pass;
    o.summary = "amplitude growth bound m^{j+1} j^{7j} for j <= 6".into();
    o
}

fn criterion_8() -> Outcome {
    let report = verify_magnetic_inequalities(&oscillating(8), 0.1, 50, 8, 1.0, 201).unwrap();
    Outcome::new(
        report.holds() && report.trials.len() == 50,
        format!(
            "50 random bumps at h=0.1: worst relative slacks {:.3e}, {:.3e}",
            report.worst_relative[0], report.worst_relative[1]
        ),
    )
}

fn band(field: &FieldSpec) -> (bool, String) {
    let sol = Arc::new(WkbSolution::build(field, 3).unwrap());
    let pm = Pseudomode::new(field, sol, NRule::Fixed { n: 1 }, None).unwrap();
    let v: Vec<f64> = series_sweep(&pm, &sweep())
        .iter()
        .map(|r| r.u_norm * r.u_norm / r.h.sqrt())
        .collect();
    let (lo, hi) = v.iter().fold((f64::INFINITY, 0.0f64), |(l, h), x| (l.min(*x), h.max(*x)));
    (hi / lo <= 3.0, format!("||u||^2 / sqrt(h) in [{lo:.3}, {hi:.3}], spread {:.2}", hi / lo))
}

fn criterion_9() -> Outcome {
    let o = match oscillating_pseudomode(1) {
        Ok(_) => {
            let (pass, text) = band(&oscillating(40));
            Outcome::new(pass, format!("oscillating: {text}"))
        }
        Err(e) => Outcome::new(false, refusal(&e)),
    };
    let (pass, text) = band(&polynomial(40));
    o.note(format!("polynomial example ({}): {text}", if pass { "met" } else { "not met" }))
}

fn criterion_10() -> Outcome {
    let p = Potential::Oscillating;
    let x = oscillating_point();
    let a = p.a_at(x);
    let mut worst_p: f64 = 0.0;
    let mut worst_b: f64 = 0.0;
    for s in [1.0, -1.0] {
        let xi = [a[0].re - s * a[1].im, a[1].re + s * a[0].im];
        let w = weyl_bracket(&p, x, xi);
        worst_p = worst_p.max(w.p.norm());
        worst_b = worst_b.max(w.bracket.abs());
    }
    Outcome::new(
        worst_p <= 1e-9 && worst_b <= 1e-6,
        format!("at (pi/3, -pi/2): |p| = {worst_p:.1e}, |{{Re p, Im p}}| = {worst_b:.1e}"),
    )
}

fn criterion_11() -> Outcome {
    let cfg = default_condition_config();
    let radii = cmag_wkb::experiment::DEFAULT_H_RADII;
    let exp = check_conditions(&Potential::Exponential { c: 0.4 }, &cfg, &radii);
    let ms = check_conditions(
        &Potential::MillerSimon {
            c: Complex64::new(1.0, 1.0),
            alpha: 1.0,
        },
        &cfg,
        &radii,
    );
    let parts = [
        ("exponential C2 passes", exp.c2_pass()),
        ("exponential C1 fails", !exp.c1_pass()),
        ("Miller-Simon C1 passes", ms.c1_pass()),
        ("Miller-Simon C2 passes", ms.c2_pass()),
        ("exponential H2 holds", exp.h.h2.diverges),
        ("exponential H1 fails", !exp.h.h1.diverges),
    ];
    let mut o = Outcome::new(parts.iter().all(|p| p.1), "condition checkers on [-4, 4]^2, h = 1");
    for (what, ok) in parts {
        o = o.note(format!("{what}: {}", if ok { "yes" } else { "no" }));
    }
    let worst = exp.c2.iter().map(|v| v.min_slack).fold(f64::NEG_INFINITY, f64::max);
    o.note(format!("exponential C2 best min slack {worst:.3e}"))
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut failures = 0;
    for (k, check) in criteria {
        let o = check();
        failures += !o.pass as usize;
        println!("criterion {k:>2}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
        for d in &o.details {
            println!("    {d}");
        }
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
