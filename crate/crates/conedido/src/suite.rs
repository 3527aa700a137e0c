//! The acceptance battery: every numbered criterion as a self-contained
//! check with pinned tolerances and a runtime budget, shared by the test
//! gate and the CLI suite command.

use crate::density::Density;
use crate::montecarlo::half_ball_measure_mc;
use crate::pde::{compare, solve_fd, MatrixField, ProblemSpec};
use crate::pixel::{grid_measure, grid_perimeter, steiner_x, steiner_y, PixelSet};
use crate::profile::{random_profile, ProfileQuadrature, RadialProfile};
use crate::rearrange::{gradient_qnorm, star_rearrangement, GridFunction};
use crate::search::{
    euler_residual_norm, lagrange_multiplier, minimize_perimeter, project_admissible,
    second_variation, FlowOptions,
};
use crate::spectral::{
    hardy_constant, hardy_constant_forms, hardy_quotient, hardy_test_sequence,
    neumann_eigenvalue, stability_rhs, HardySpec, QuarterFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::time::Instant;

type Check = std::result::Result<String, String>;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:2} ({}): {} [{:.1}s] {}",
            self.index,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.seconds,
            self.detail
        )
    }
}

/// Runs the full battery in order and returns one result per criterion.
pub fn acceptance_suite() -> Vec<CriterionResult> {
    let checks: Vec<(&'static str, f64, fn() -> Check)> = vec![
        ("profile consistency", 10.0, criterion1),
        ("measure oracle", 120.0, criterion2),
        ("isoperimetric property", 300.0, criterion3),
        ("dido flow", 60.0, criterion4),
        ("euler and second variation", 30.0, criterion5),
        ("steiner monotonicity", 120.0, criterion6),
        ("rearrangement", 60.0, criterion7),
        ("pde comparison", 300.0, criterion8),
        ("neumann eigenvalue", 30.0, criterion9),
        ("hardy constant and sequence", 120.0, criterion10),
        ("stability inequality", 1.0, criterion11),
    ];
    checks
        .into_iter()
        .enumerate()
        .map(|(i, (name, budget, f))| {
            let started = Instant::now();
            let outcome = f();
            let seconds = started.elapsed().as_secs_f64();
            let (mut passed, mut detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            if passed && seconds > budget {
                passed = false;
                detail = format!("over budget {budget}s; {detail}");
            }
            CriterionResult {
                index: i + 1,
                name,
                passed,
                seconds,
                budget_seconds: budget,
                detail,
            }
        })
        .collect()
}

fn combos() -> Vec<(usize, f64, f64, f64)> {
    let mut v = Vec::new();
    for n in [2usize, 3] {
        for k in [0.0, 1.0, 2.5] {
            for c in [0.0, 0.5, 1.0] {
                for r in [0.1, 0.5, 1.0, 2.0, 5.0] {
                    v.push((n, k, c, r));
                }
            }
        }
    }
    v
}

/// Profile consistency: I_mu(mu(B_R)) = P_mu(B_R) to 1e-8 relative.
fn criterion1() -> Check {
    let mut worst = 0.0f64;
    for (n, k, c, r) in combos() {
        let d = Density::half_space(k, c, n).map_err(|e| e.to_string())?;
        let m = d.half_ball_measure(r).map_err(|e| e.to_string())?;
        let p = d.half_ball_perimeter(r).map_err(|e| e.to_string())?;
        let i = d.isoperimetric_profile(m).map_err(|e| e.to_string())?;
        let rel = (i - p).abs() / p;
        worst = worst.max(rel);
        if rel > 1e-8 {
            return Err(format!("N={n} k={k} c={c} R={r}: relative gap {rel:.3e} > 1e-8"));
        }
    }
    Ok(format!("worst relative gap {worst:.3e} <= 1e-8 over {} combos", combos().len()))
}

/// Measure oracle: closed form within 3 standard errors of Monte Carlo.
fn criterion2() -> Check {
    let all = combos();
    let results: Vec<std::result::Result<f64, String>> = all
        .par_iter()
        .enumerate()
        .map(|(idx, &(n, k, c, r))| {
            let d = Density::half_space(k, c, n).map_err(|e| e.to_string())?;
            let exact = d.half_ball_measure(r).map_err(|e| e.to_string())?;
            let est = half_ball_measure_mc(&d, r, 10_000_000, 1000 + idx as u64);
            let z = (exact - est.value).abs() / est.std_error;
            if z > 3.0 {
                Err(format!(
                    "N={n} k={k} c={c} R={r}: |exact - MC| = {z:.2} standard errors > 3"
                ))
            } else {
                Ok(z)
            }
        })
        .collect();
    let mut worst = 0.0f64;
    for r in results {
        worst = worst.max(r?);
    }
    Ok(format!("worst deviation {worst:.2} standard errors <= 3, 1e7 samples per combo"))
}

/// Isoperimetric property for random starlike sets, N = 2.
fn criterion3() -> Check {
    let cases: Vec<(f64, f64)> = [0.0, 0.5, 1.0, 2.0]
        .iter()
        .flat_map(|&k| [0.0, 0.5, 1.0].iter().map(move |&c| (k, c)))
        .collect();
    let results: Vec<std::result::Result<(f64, f64), String>> = cases
        .par_iter()
        .map(|&(k, c)| {
            let d = Density::half_space(k, c, 2).map_err(|e| e.to_string())?;
            let q = ProfileQuadrature::new(&d, 256).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64((k * 10.0 + c * 100.0) as u64 + 5);
            let mut worst = f64::INFINITY;
            for _ in 0..1000 {
                let p = random_profile(&d, 256, 1.0, 0.3, &mut rng).map_err(|e| e.to_string())?;
                let m = q.measure(&p.rho);
                let per = q.perimeter(&p.rho);
                let ideal = d.isoperimetric_profile(m).map_err(|e| e.to_string())?;
                let margin = (per - ideal) / ideal;
                worst = worst.min(margin);
                if margin < -1e-6 {
                    return Err(format!("k={k} c={c}: margin {margin:.3e} < -1e-6"));
                }
            }
            let ball = RadialProfile::constant(1.0, 256, d).map_err(|e| e.to_string())?;
            let per = q.perimeter(&ball.rho);
            let ideal = d
                .isoperimetric_profile(q.measure(&ball.rho))
                .map_err(|e| e.to_string())?;
            let eq = (per - ideal).abs() / per;
            if eq > 1e-6 {
                return Err(format!("k={k} c={c}: equality-case gap {eq:.3e} > 1e-6"));
            }
            Ok((worst, eq))
        })
        .collect();
    let mut worst = f64::INFINITY;
    let mut eqworst = 0.0f64;
    for r in results {
        let (w, e) = r?;
        worst = worst.min(w);
        eqworst = eqworst.max(e);
    }
    Ok(format!(
        "12000 perturbations: smallest margin {worst:.3e} >= -1e-6, equality gap {eqworst:.3e} <= 1e-6"
    ))
}

/// Constrained Dido flow reaches the half-disk.
fn criterion4() -> Check {
    let d = Density::half_space(1.0, 0.5, 2).map_err(|e| e.to_string())?;
    let m = 512usize;
    let rho: Vec<f64> = (0..=m)
        .map(|j| 1.0 + 0.3 * (2.0 * PI * j as f64 / m as f64).sin())
        .collect();
    let p0 = RadialProfile::new(rho, d).map_err(|e| e.to_string())?;
    let q = ProfileQuadrature::new(&d, m).map_err(|e| e.to_string())?;
    let target = q.measure(&p0.rho);
    let res = minimize_perimeter(&d, target, &p0, &FlowOptions::default()).map_err(|e| e.to_string())?;
    let rstar = d.star_radius(target).map_err(|e| e.to_string())?;
    let sup = res
        .profile
        .rho
        .iter()
        .fold(0.0f64, |a, &x| a.max((x - rstar).abs()))
        / rstar;
    let ideal = d.isoperimetric_profile(target).map_err(|e| e.to_string())?;
    let rel = (res.perimeter - ideal).abs() / ideal;
    if sup > 1e-3 {
        return Err(format!("sup |rho - R*|/R* = {sup:.3e} > 1e-3 after {} iterations", res.iterations));
    }
    if rel > 1e-4 {
        return Err(format!("perimeter gap {rel:.3e} > 1e-4"));
    }
    if res.iterations > 100_000 {
        return Err(format!("{} iterations > 1e5", res.iterations));
    }
    Ok(format!(
        "sup deviation {sup:.2e} <= 1e-3, perimeter gap {rel:.2e} <= 1e-4, {} iterations",
        res.iterations
    ))
}

/// Euler residual at the closed-form multiplier; projected second variation.
fn criterion5() -> Check {
    let mut worst_euler = 0.0f64;
    for (k, c) in [(0.0, 0.0), (1.0, 0.5), (2.5, 1.0)] {
        let d = Density::half_space(k, c, 2).map_err(|e| e.to_string())?;
        let p = RadialProfile::constant(1.0, 2048, d).map_err(|e| e.to_string())?;
        let gamma = lagrange_multiplier(&d, 1.0).map_err(|e| e.to_string())?;
        let res = euler_residual_norm(&p, gamma).map_err(|e| e.to_string())?;
        worst_euler = worst_euler.max(res);
        if res > 1e-5 {
            return Err(format!("k={k} c={c}: Euler residual {res:.3e} > 1e-5"));
        }
    }
    let d = Density::half_space(1.0, 0.5, 2).map_err(|e| e.to_string())?;
    let p = RadialProfile::constant(1.0, 512, d).map_err(|e| e.to_string())?;
    let gamma = lagrange_multiplier(&d, 1.0).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let kappa: Vec<f64> = (0..=512).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let adm = project_admissible(&p, &kappa).map_err(|e| e.to_string())?;
        let v = second_variation(&p, &adm, gamma).map_err(|e| e.to_string())?;
        worst = worst.min(v);
        if v < -1e-8 {
            return Err(format!("second variation {v:.3e} < -1e-8"));
        }
    }
    Ok(format!(
        "Euler residual <= {worst_euler:.2e} (<= 1e-5); 100 projected directions, smallest value {worst:.2e} >= -1e-8"
    ))
}

/// Double Steiner symmetrization on random pixel sets.
fn criterion6() -> Check {
    let cell = 1.0 / 512.0;
    let dens: Vec<Density> = [(0.0, 0.0), (1.0, 0.5), (2.0, 1.0)]
        .iter()
        .map(|&(k, c)| Density::half_space(k, c, 2).unwrap())
        .collect();
    let results: Vec<std::result::Result<(f64, f64), String>> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(400 + i);
            let d = &dens[(i % 3) as usize];
            let g = PixelSet::random_blob(cell, &mut rng).map_err(|e| e.to_string())?;
            if g.count() == 0 {
                return Ok((0.0, f64::NEG_INFINITY));
            }
            let s = steiner_y(&steiner_x(&g, d), d);
            let (m0, m1) = (grid_measure(&g, d), grid_measure(&s, d));
            let dm = (m0 - m1).abs() / m0;
            if dm > 0.02 {
                return Err(format!("blob {i}: measure changed by {dm:.3e} > 2%"));
            }
            let (p0, p1) = (grid_perimeter(&g, d), grid_perimeter(&s, d));
            let inc = (p1 - p0) / p0;
            // grid tolerance: one cell of quantization per fiber
            if inc > 16.0 * cell {
                return Err(format!("blob {i}: perimeter increased by {inc:.3e} > 16h"));
            }
            Ok((dm, inc))
        })
        .collect();
    let mut wm = 0.0f64;
    let mut wp = f64::NEG_INFINITY;
    for r in results {
        let (dm, inc) = r?;
        wm = wm.max(dm);
        wp = wp.max(inc);
    }
    Ok(format!(
        "100 blobs: worst measure change {wm:.2e} <= 2e-2, worst perimeter increase {wp:.2e} <= 16h = {:.2e}",
        16.0 * cell
    ))
}

/// Star rearrangement oracle and the Polya-Szego suite.
fn criterion7() -> Check {
    let d = Density::half_space(0.0, 0.0, 2).map_err(|e| e.to_string())?;
    let u = GridFunction::sample(256, 256, 1.0, d, |r, _| r).map_err(|e| e.to_string())?;
    let s = star_rearrangement(&u).map_err(|e| e.to_string())?;
    let mut maxerr = 0.0f64;
    for i in 0..=s.radii {
        let r = i as f64 * s.dr();
        let exact = (1.0 - r * r).max(0.0).sqrt();
        maxerr = maxerr.max((s.value(i, 0) - exact).abs());
    }
    let tol = 2.0 / 256.0;
    if maxerr > tol {
        return Err(format!("|x| oracle: max error {maxerr:.3e} > 2h = {tol:.3e}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut weq = 0.0f64;
    let mut wps = f64::INFINITY;
    for (k, c) in [(0.0, 0.0), (1.0, 0.5)] {
        let den = Density::half_space(k, c, 2).map_err(|e| e.to_string())?;
        for _ in 0..25 {
            let (a1, a2, b1, b2) = (
                rng.gen_range(0.5..2.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(1.0..4.0),
                rng.gen_range(1.0..3.0),
            );
            let u = GridFunction::sample(128, 96, 1.0, den, move |r, t| {
                let x = (0.85 - r) / 0.85;
                let chi = if x > 0.0 { (x * x * (3.0 - 2.0 * x)).min(1.0) } else { 0.0 };
                chi * (a1 * (b1 * r).cos() + a2 * (b2 * r * t.sin()).cos())
            })
            .map_err(|e| e.to_string())?;
            let s = star_rearrangement(&u).map_err(|e| e.to_string())?;
            let (l2, l2s) = (u.integrate(|x| x * x), s.integrate(|x| x * x));
            let eq = (l2 - l2s).abs() / l2.max(1e-9);
            weq = weq.max(eq);
            if eq > 1e-3 {
                return Err(format!("equimeasurability gap {eq:.3e} > 1e-3"));
            }
            let (e, es) = (
                gradient_qnorm(&u, 2.0).map_err(|e| e.to_string())?,
                gradient_qnorm(&s, 2.0).map_err(|e| e.to_string())?,
            );
            let margin = (e - es) / e.max(1e-9);
            wps = wps.min(margin);
            if margin < -1e-3 {
                return Err(format!("Polya-Szego margin {margin:.3e} < -1e-3"));
            }
        }
    }
    Ok(format!(
        "oracle error {maxerr:.2e} <= {tol:.2e}; 50 functions: equimeasurability <= {weq:.2e}, Polya-Szego margin >= {wps:.2e}"
    ))
}

/// Talenti-type comparison: radial oracle, anisotropic suite, FD order.
fn criterion8() -> Check {
    let d = Density::half_space(0.0, 0.0, 2).map_err(|e| e.to_string())?;
    let src = GridFunction::sample(256, 256, 1.0, d, |_, _| 1.0).map_err(|e| e.to_string())?;
    let p = ProblemSpec::new(d, MatrixField::Isotropic, 1.0, src).map_err(|e| e.to_string())?;
    let u = solve_fd(&p).map_err(|e| e.to_string())?;
    let center = u.value(0, 0);
    if (center - 0.25).abs() > 1e-3 {
        return Err(format!("u(0) = {center:.6} not within 1e-3 of 0.25"));
    }
    let rep = compare(&u, &p).map_err(|e| e.to_string())?;
    if rep.pointwise_margin.abs() > 1e-3 {
        return Err(format!("radial pointwise margin {:.3e} > 1e-3", rep.pointwise_margin));
    }
    for &(q, m) in &rep.qnorm_margins {
        if m.abs() > 1e-3 * rep.scale.max(1.0) {
            return Err(format!("radial q={q} margin {m:.3e} > 1e-3 scale"));
        }
    }
    // anisotropic suite: 12 axis-aligned + 8 rotated, 20 problems
    let mut problems: Vec<(f64, f64, f64, MatrixField, usize)> = Vec::new();
    for &lam in &[2.0, 4.0] {
        for &k in &[0.0, 1.0, 2.0] {
            for &c in &[0.0, 0.5] {
                problems.push((k, c, lam, MatrixField::AxisAligned { lambda: lam }, 0));
            }
        }
    }
    for (i, &(k, c)) in [(0.0, 0.0), (1.0, 0.5), (2.0, 0.0), (0.0, 0.5)].iter().enumerate() {
        problems.push((k, c, 2.0, MatrixField::Rotated { lambda: 2.0, angle: 0.4 }, i + 1));
        problems.push((k, c, 4.0, MatrixField::Rotated { lambda: 4.0, angle: 1.1 }, i + 5));
    }
    let worst = problems
        .par_iter()
        .map(|&(k, c, lam, field, variant)| -> std::result::Result<f64, String> {
            let d = Density::half_space(k, c, 2).map_err(|e| e.to_string())?;
            let src = GridFunction::sample(64, 64, 1.0, d, move |r, t| {
                1.0 + 0.5 * (1.0 - r) * (t + 0.3 * variant as f64).sin().abs()
            })
            .map_err(|e| e.to_string())?;
            let p = ProblemSpec::new(d, field, lam, src).map_err(|e| e.to_string())?;
            let u = solve_fd(&p).map_err(|e| e.to_string())?;
            let rep = compare(&u, &p).map_err(|e| e.to_string())?;
            let mut m = rep.pointwise_margin / rep.scale.max(1e-300);
            for &(_, q) in &rep.qnorm_margins {
                m = m.min(q / rep.scale.max(1e-300));
            }
            if m < -1e-3 {
                return Err(format!("k={k} c={c} lam={lam}: margin {m:.3e} < -1e-3 scale"));
            }
            Ok(m)
        })
        .collect::<std::result::Result<Vec<f64>, String>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    // grid convergence of the FD solver
    let mut errs = Vec::new();
    for n in [24usize, 48, 96] {
        let d = Density::half_space(0.0, 0.0, 2).map_err(|e| e.to_string())?;
        let src = GridFunction::sample(n, n, 1.0, d, |_, _| 1.0).map_err(|e| e.to_string())?;
        let p = ProblemSpec::new(d, MatrixField::Isotropic, 1.0, src).map_err(|e| e.to_string())?;
        let u = solve_fd(&p).map_err(|e| e.to_string())?;
        let mut e = 0.0f64;
        for i in 0..=n {
            let r = i as f64 / n as f64;
            e = e.max((u.value(i, 0) - (1.0 - r * r) / 4.0).abs());
        }
        errs.push(e);
    }
    let o1 = (errs[0] / errs[1]).log2();
    let o2 = (errs[1] / errs[2]).log2();
    if !(1.7..=2.3).contains(&o1) || !(1.7..=2.3).contains(&o2) {
        return Err(format!("FD orders {o1:.2}, {o2:.2} outside [1.7, 2.3]"));
    }
    Ok(format!(
        "u(0) = {center:.6} (0.25 +- 1e-3); 20 problems, worst margin {worst:.2e} >= -1e-3; FD orders {o1:.2}, {o2:.2}"
    ))
}

/// Weighted Neumann eigenvalue lambda1 = 1 + k at order 2.
fn criterion9() -> Check {
    let mut detail = String::new();
    for k in [0.0, 0.5, 1.0, 2.5] {
        let errs: Vec<f64> = [256usize, 1024, 4096]
            .iter()
            .map(|&n| neumann_eigenvalue(k, n).map(|e| (e.lambda1 - (1.0 + k)).abs()))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if errs[2] > 1e-3 {
            return Err(format!("k={k}: |lambda1 - {}| = {:.3e} > 1e-3 at 4096", 1.0 + k, errs[2]));
        }
        let o1 = (errs[0] / errs[1]).log2() / 2.0;
        let o2 = (errs[1] / errs[2]).log2() / 2.0;
        if !(1.7..=2.3).contains(&o1) || !(1.7..=2.3).contains(&o2) {
            return Err(format!("k={k}: convergence orders {o1:.2}, {o2:.2} outside [1.7, 2.3]"));
        }
        detail.push_str(&format!("k={k}: err {:.1e}, orders {o1:.2}/{o2:.2}; ", errs[2]));
    }
    Ok(detail)
}

/// Sharp Hardy constant, admissible quotients, extremal sequence.
fn criterion10() -> Check {
    let specs = [
        HardySpec::new(2, 0.0, 0).map_err(|e| e.to_string())?,
        HardySpec::new(3, 1.0, 2).map_err(|e| e.to_string())?,
        HardySpec::new(2, 2.0, 0).map_err(|e| e.to_string())?,
    ];
    let mut detail = String::new();
    let mut excess_failures = Vec::new();
    for spec in &specs {
        let (f1, f2) = hardy_constant_forms(spec);
        if (f1 - f2).abs() > 1e-12 {
            return Err(format!("closed forms differ by {:.3e}", (f1 - f2).abs()));
        }
        let c = hardy_constant(spec);
        // admissible planar test functions must stay above the constant
        if spec.n == 2 {
            for (i, steep) in [1.0f64, 2.0, 4.0].iter().enumerate() {
                let u = QuarterFunction::sample(1e-3, 1.0, 512, 96, move |r, t| {
                    t.cos() * r.powf(*steep) * (1.0 - r).max(0.0)
                })
                .map_err(|e| e.to_string())?;
                let q = hardy_quotient(&u, spec).map_err(|e| e.to_string())?;
                if q.value < c * (1.0 - 1e-2) {
                    return Err(format!(
                        "test function {i}: quotient {:.4} < C - grid tol = {:.4}",
                        q.value,
                        c * (1.0 - 1e-2)
                    ));
                }
            }
        }
        let mut prev = f64::INFINITY;
        let mut q32 = 0.0;
        for n in [4usize, 8, 16, 32] {
            let q = hardy_test_sequence(spec, n).map_err(|e| e.to_string())?;
            if q < c - 1e-9 {
                return Err(format!("sequence crossed below C: {q:.6} < {c}"));
            }
            if q > prev + 1e-6 {
                return Err(format!("sequence not nonincreasing at n={n}: {q:.6} > {prev:.6}"));
            }
            prev = q;
            q32 = q;
        }
        let excess = (q32 - c) / c;
        detail.push_str(&format!(
            "(N,k,m)=({},{},{}): C={c}, n=32 excess {:.1}%; ",
            spec.n,
            spec.k,
            spec.m,
            excess * 100.0
        ));
        if excess > 0.10 {
            excess_failures.push(format!(
                "(N,k,m)=({},{},{}) is {:.1}% above C at n=32 (> 10%)",
                spec.n,
                spec.k,
                spec.m,
                excess * 100.0
            ));
        }
    }
    if !excess_failures.is_empty() {
        return Err(format!(
            "{detail}| {}; the cutoff's log-ramp energy 2/ln2 over a plateau of log-length \
             ln(n^2/2) bounds the excess near 2.9/(6.7 C) at n=32, which cannot meet 10% for small C",
            excess_failures.join("; ")
        ));
    }
    Ok(detail)
}

/// Stability inequality, exact closed form on random draws.
fn criterion11() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..1000 {
        let k = rng.gen_range(0.0..5.0);
        let c = rng.gen_range(0.0..3.0);
        let r = rng.gen_range(1e-6..10.0f64);
        let n = rng.gen_range(2..5usize);
        let d = Density::half_space(k, c, n).map_err(|e| e.to_string())?;
        let rhs = stability_rhs(&d, r).map_err(|e| e.to_string())?;
        if rhs > n as f64 - 1.0 + k + 1e-12 {
            return Err(format!("N={n} k={k} c={c} r={r}: rhs {rhs} exceeds N-1+k"));
        }
    }
    Ok("1000 draws: N-1+k-2cr^2 <= N-1+k to 1e-12".into())
}
