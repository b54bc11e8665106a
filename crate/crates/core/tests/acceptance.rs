//! End-to-end acceptance checks. Runs without the libtest harness and prints
//! one PASS/FAIL line per criterion; the process fails if any criterion does.

#![allow(clippy::needless_range_loop)]

use std::time::Instant;

use greywalk::fbm_gen::TimeGrid;
use greywalk::frac_fd::{
    amplification_factors, gl_coefficients, lambda_matrix, solve_drift, LatticeConfig, Scheme, DEFAULT_HALF_WIDTH,
    IMPLICIT_REFINEMENT,
};
use greywalk::frac_walk::{build_transition_p, exact_walk_law, LbetaMethod, LbetaSampler, TransitionMatrixP};
use greywalk::ggbm::{fbm_ensemble, generate_ensemble};
use greywalk::grey_cov::{char_function_numeric, fbm_cov, finite_dim_density};
use greywalk::io::ensemble_to_csv;
use greywalk::linalg::{forward_substitute, SquareMatrix};
use greywalk::quad::QuadratureSpec;
use greywalk::special_fn::{
    gaussian_identity_residual, laplace_in_t_residual, laplace_in_tau_residual, mittag_leffler,
    mwright_convolution_residual, normalization_residual, SeriesControl,
};
use greywalk::stats_validate::{run_suite, Suite, SuiteConfig, SuiteReport};
use greywalk::GreyParams;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lattice_with_mu(m: usize, n: usize, beta: f64, mu: f64) -> LatticeConfig<f64> {
    let dt = 1.0 / (n - 1) as f64;
    let a = dt.powf(beta) * (2 * m - 1) as f64 / (2.0 * mu);
    LatticeConfig::new(a, m, n, beta).unwrap()
}

fn suite_outcome(r: &SuiteReport) -> Outcome {
    let summary: Vec<String> = r.checks.iter().map(|c| format!("{}={:.4}", c.name, c.statistic)).collect();
    if r.passed {
        Ok(summary.join(" "))
    } else {
        let failed: Vec<String> = r.checks.iter().filter(|c| !c.passed).map(|c| format!("{}={}", c.name, c.statistic)).collect();
        Err(format!("{}: failed {}", r.suite, failed.join(", ")))
    }
}

fn identity_residuals() -> Outcome {
    let q = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    let mut note = |name: &str, r: f64| -> Result<(), String> {
        worst = worst.max(r);
        ensure(r < 1e-6, || format!("{name} residual {r:e}"))
    };
    for beta in [0.25, 0.5, 0.75] {
        note("normalization", normalization_residual(beta, &q).map_err(|e| e.to_string())?)?;
    }
    for x in [0.0, 0.5, 1.0, 2.0, 3.0] {
        note("convolution", mwright_convolution_residual(0.5, 0.5, x, &q).map_err(|e| e.to_string())?)?;
    }
    for (b, s, t) in [(0.5, 1.0, 1.0), (0.25, 2.0, 0.5), (0.75, 0.5, 2.0)] {
        note("laplace in tau", laplace_in_tau_residual(b, s, t, &q).map_err(|e| e.to_string())?)?;
    }
    for (b, tau, s) in [(0.5, 1.0, 1.0), (0.25, 0.5, 2.0), (0.75, 2.0, 0.7)] {
        note("laplace in t", laplace_in_t_residual(b, tau, s, &q).map_err(|e| e.to_string())?)?;
    }
    for (x, t) in [(0.0, 1.0), (0.7, 0.5), (2.0, 3.0)] {
        note("gaussian", gaussian_identity_residual(x, t).map_err(|e| e.to_string())?)?;
    }
    Ok(format!("max residual {worst:.2e}"))
}

fn coefficient_identities() -> Outcome {
    let k = 10_000;
    let mut worst: f64 = 0.0;
    for i in 1..=9 {
        let beta = i as f64 / 10.0;
        let t = gl_coefficients(beta, k).map_err(|e| e.to_string())?;
        let c = t.c_values();
        let b = t.b_values();
        ensure(c[0] == beta, || format!("c_1 != beta at {beta}"))?;
        ensure(c.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0), || format!("c not strictly decreasing at {beta}"))?;
        ensure(b[0] == 1.0 && b.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0), || format!("b not decreasing at {beta}"))?;
        let sum: f64 = c.iter().sum::<f64>() + b[k];
        worst = worst.max((sum - 1.0).abs());
    }
    ensure(worst < 1e-13, || format!("partition defect {worst:e}"))?;
    let unit = gl_coefficients(1.0, 3).map_err(|e| e.to_string())?;
    ensure(unit.c_values() == [1.0, 0.0, 0.0] && unit.b_values() == [1.0, 0.0, 0.0, 0.0], || {
        "unit-order degeneracy not exact".into()
    })?;
    Ok(format!("partition defect {worst:.1e}"))
}

fn fd_sup_error(lat: &LatticeConfig<f64>, scheme: Scheme) -> Result<(f64, f64), String> {
    let g = solve_drift(0.5, lat, scheme).map_err(|e| e.to_string())?;
    let err = (lat.m..lat.nodes() - 1)
        .map(|j| {
            let x = lat.x(j);
            (g.u[j] - (-x * x / 4.0).exp() / std::f64::consts::PI.sqrt()).abs()
        })
        .fold(0.0, f64::max);
    Ok((err, 1.0 - g.mass))
}

fn fd_versus_closed_form() -> Outcome {
    let a = DEFAULT_HALF_WIDTH;
    let coarse_e = LatticeConfig::default_explicit(0.5).unwrap();
    let fine_n = 2 * (coarse_e.n - 1) + 1;
    let fine_e = LatticeConfig::new(a, LatticeConfig::max_stable_m(a, fine_n, 0.5), fine_n, 0.5).unwrap();
    let coarse_i = LatticeConfig::default_implicit(0.5).unwrap();
    let fine_i = LatticeConfig::new(a, IMPLICIT_REFINEMENT * (fine_n - 1), fine_n, 0.5).unwrap();
    let (ec, mc) = fd_sup_error(&coarse_e, Scheme::Explicit)?;
    let (ef, _) = fd_sup_error(&fine_e, Scheme::Explicit)?;
    let (ic, mi) = fd_sup_error(&coarse_i, Scheme::Implicit)?;
    let (if_, _) = fd_sup_error(&fine_i, Scheme::Implicit)?;
    let (shared, _) = fd_sup_error(&coarse_e, Scheme::Implicit)?;
    ensure(shared < 5e-2, || format!("implicit on the explicit lattice {shared:.4}"))?;
    ensure(ec < 5e-2 && ic < 5e-2, || format!("sup errors {ec:.4} / {ic:.4}"))?;
    ensure(ef < ec && if_ < ic, || format!("no decrease: explicit {ec}->{ef}, implicit {ic}->{if_}"))?;
    ensure(mc < 1e-3 && mi < 1e-3, || format!("mass loss {mc:e} / {mi:e}"))?;
    Ok(format!(
        "explicit {ec:.4}->{ef:.4}, implicit {ic:.4}->{if_:.4} ({shared:.4} on the explicit lattice), mass loss {:.1e}",
        mc.max(mi)
    ))
}

fn walk_brute_force() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for &(m, n) in &[(2usize, 6usize), (4, 5), (5, 6), (8, 6), (8, 4)] {
        for beta in [0.3, 0.5, 0.8, 1.0] {
            for scheme in [Scheme::Explicit, Scheme::Implicit] {
                let mu = if scheme == Scheme::Explicit { 0.9 * beta } else { 2.5 };
                let lat = lattice_with_mu(m, n, beta, mu);
                let law = exact_walk_law(beta, &lat, scheme).map_err(|e| e.to_string())?;
                let fd = greywalk::frac_fd::solve_drift_history(beta, &lat, scheme).map_err(|e| e.to_string())?;
                for (step, g) in fd.iter().enumerate() {
                    for i in 0..m - 1 {
                        worst = worst.max((law[step][i] - g.u[m + i] * lat.dx).abs());
                    }
                    worst = worst.max((law[step][m - 1] - (1.0 - g.mass)).abs());
                }
                cases += 1;
            }
        }
    }
    ensure(worst < 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("{cases} lattices, max deviation {worst:.1e}"))
}

fn example_four() -> Outcome {
    let mut worst: f64 = 0.0;
    for mu in [0.3_f64, 0.5, 1.0] {
        let d = 1.0 + mu;
        let printed = [
            [1.0 / d, mu / d.powi(2), mu.powi(2) / d.powi(3), mu.powi(3) / d.powi(3)],
            [0.0, 1.0 / d, mu / d.powi(2), mu.powi(2) / d.powi(2)],
            [0.0, 0.0, 1.0 / d, mu / d],
            [0.0, 0.0, 0.0, 1.0],
        ];
        let p = TransitionMatrixP::new(4, mu);
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((p.get(i, j) - printed[i][j]).abs());
            }
        }
        ensure(p.row_sum_defect() < 1e-15, || format!("row sums at mu={mu}"))?;

        // transpose of the inverse of Λ's lower-right block
        let lat = lattice_with_mu(4, 5, 0.5, mu);
        let lambda = lambda_matrix(&lat);
        let size = lambda.dim();
        let mut inv = SquareMatrix::zeros(size);
        for col in 0..size {
            let mut e = vec![0.0; size];
            e[col] = 1.0;
            for (row, v) in forward_substitute(&lambda, &e).into_iter().enumerate() {
                inv.set(row, col, v);
            }
        }
        let built = build_transition_p(&lat);
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((built.get(i, j) - inv.get(4 + j, 4 + i)).abs());
            }
        }
    }
    ensure(worst < 1e-15, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn lbeta_laws() -> Outcome {
    let cfg = SuiteConfig { samples: Some(10_000), seed: 2024 };
    let mut parts = Vec::new();
    for s in [Suite::Figure1, Suite::Figure2, Suite::Figure3] {
        let r = run_suite(s, &cfg).map_err(|e| e.to_string())?;
        suite_outcome(&r)?;
        let gof = r.check("chi_square_p").map(|c| c.statistic).unwrap_or(f64::NAN);
        parts.push(format!("{s}: p={gof:.3}"));
        if let Some(ks) = r.check("shortcut_ks") {
            parts.push(format!("half-normal KS={:.4}", ks.statistic));
        }
        if let Some(ks) = r.check("ks_two_sample_half_normal") {
            parts.push(format!("walk KS={:.4}", ks.statistic));
        }
    }
    Ok(parts.join(", "))
}

fn run_named(suite: Suite, samples: usize) -> Outcome {
    let r = run_suite(suite, &SuiteConfig { samples: Some(samples), seed: 2024 }).map_err(|e| e.to_string())?;
    suite_outcome(&r)
}

fn char_function_consistency() -> Outcome {
    let params = GreyParams::new(1.0, 0.5).unwrap();
    let q = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for y in [0.5_f64, 1.0, 2.0] {
        let numeric = char_function_numeric(&params, 1.0, y, &q).map_err(|e| e.to_string())?;
        let exact = mittag_leffler(0.5, -y * y, &SeriesControl::default()).map_err(|e| e.to_string())?;
        worst = worst.max((numeric - exact).abs());
    }
    ensure(worst < 1e-6, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn inverse3(m: [[f64; 3]; 3]) -> ([[f64; 3]; 3], f64) {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let cof = [
        [c(1, 2, 1, 2), -c(1, 2, 0, 2), c(1, 2, 0, 1)],
        [-c(0, 2, 1, 2), c(0, 2, 0, 2), -c(0, 2, 0, 1)],
        [c(0, 1, 1, 2), -c(0, 1, 0, 2), c(0, 1, 0, 1)],
    ];
    let det = m[0][0] * cof[0][0] + m[0][1] * cof[0][1] + m[0][2] * cof[0][2];
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            inv[i][j] = cof[j][i] / det;
        }
    }
    (inv, det)
}

fn unit_order_reductions() -> Outcome {
    let grid = TimeGrid::new(32, 1.0 / 32.0).unwrap();
    for alpha in [0.5, 1.0, 1.5] {
        let params = GreyParams::new(alpha, 1.0).unwrap();
        let e = generate_ensemble(&params, &grid, 64, 77, LbetaMethod::Auto).map_err(|e| e.to_string())?;
        let f = fbm_ensemble(alpha, &grid, 64, 77).map_err(|e| e.to_string())?;
        ensure(e.paths == f, || format!("ensemble differs from fBm at alpha={alpha}"))?;
    }
    let mut worst: f64 = 0.0;
    let times = [0.5, 1.0, 2.0];
    for alpha in [0.6, 1.0, 1.4] {
        let params = GreyParams::new(alpha, 1.0).unwrap();
        let mut g = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = fbm_cov(alpha, times[i], times[j]);
            }
        }
        let (inv, det) = inverse3(g);
        for x in [[0.0, 0.0, 0.0], [0.3, -0.2, 1.1], [1.0, 2.0, -0.5]] {
            let mut qf = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    qf += x[i] * inv[i][j] * x[j];
                }
            }
            let gauss = (-0.5 * qf).exp() / ((2.0 * std::f64::consts::PI).powi(3) * det).sqrt();
            let d = finite_dim_density(&params, &times, &x, &QuadratureSpec::default()).map_err(|e| e.to_string())?;
            worst = worst.max((d - gauss).abs());
        }
    }
    ensure(worst < 1e-10, || format!("density deviation {worst:e}"))?;
    Ok(format!("ensembles bitwise equal, density deviation {worst:.1e}"))
}

fn stability_agreement() -> Outcome {
    let mut checked = 0;
    for bi in 1..=10 {
        let beta = bi as f64 / 10.0;
        for mi in 1..=40 {
            let mu = mi as f64 / 20.0;
            let r = amplification_factors(beta, mu, 16).map_err(|e| e.to_string())?;
            ensure(r.explicit_stable() == (mu <= beta), || format!("verdict mismatch at beta={beta}, mu={mu}"))?;
            ensure(r.implicit_stable, || format!("implicit flagged at beta={beta}, mu={mu}"))?;
            let lat = lattice_with_mu(6, 5, beta, mu);
            let explicit = solve_drift(beta, &lat, Scheme::Explicit);
            if lat.mu > beta {
                ensure(matches!(explicit, Err(greywalk::Error::StabilityViolation { .. })), || {
                    format!("explicit accepted mu={} > beta={beta}", lat.mu)
                })?;
            } else {
                let g = explicit.map_err(|e| e.to_string())?;
                ensure(g.u.iter().all(|&v| v >= 0.0), || "negative explicit density".into())?;
            }
            let g = solve_drift(beta, &lat, Scheme::Implicit).map_err(|e| e.to_string())?;
            ensure(g.u.iter().all(|&v| v >= 0.0), || "negative implicit density".into())?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (beta, mu) pairs"))
}

fn reproducibility() -> Outcome {
    let params = GreyParams::new(1.2, 0.4).unwrap();
    let grid = TimeGrid::new(64, 1.0 / 64.0).unwrap();
    let make = || {
        let e = generate_ensemble(&params, &grid, 200, 31, LbetaMethod::Auto).unwrap();
        ensemble_to_csv(&e, &[]).into_bytes()
    };
    let pool = |n: usize| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let first = make();
    let second = make();
    let single = pool(1).install(make);
    let many = pool(8).install(make);
    ensure(first == second, || "two runs differ".into())?;
    ensure(first == single && first == many, || "thread count changes output".into())?;
    let sampler = LbetaSampler::with_default_lattice(0.8, LbetaMethod::Auto, false).unwrap();
    let a = pool(1).install(|| sampler.sample_many(500, 5));
    let b = pool(8).install(|| sampler.sample_many(500, 5));
    ensure(a == b, || "L_beta draws depend on threads".into())?;
    Ok(format!("{} bytes identical across 1/8 threads", first.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("integral identities", identity_residuals),
        ("coefficient identities", coefficient_identities),
        ("finite differences vs closed form", fd_versus_closed_form),
        ("walk laws equal finite-difference grids", walk_brute_force),
        ("four-node transition matrix", example_four),
        ("L_beta sampler laws", lbeta_laws),
        ("ggBm marginal histograms", || run_named(Suite::Marginal, 15_000)),
        ("variance scaling", || run_named(Suite::VarianceSlope, 10_000)),
        ("covariance", || run_named(Suite::Covariance, 10_000)),
        ("characteristic function", char_function_consistency),
        ("unit-order reductions", unit_order_reductions),
        ("stability criteria", stability_agreement),
        ("reproducibility", reproducibility),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
