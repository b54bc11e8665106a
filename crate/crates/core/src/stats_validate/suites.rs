//! Named end-to-end validation suites. Each suite runs a fixed experiment,
//! compares it with an exact or numerically certified reference, and
//! reports per-check verdicts plus plot-ready tables.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::covariance::empirical_covariance;
use super::gof::{
    atom_probabilities, chi_square_gof, density_gof, ks_distance, ks_distance_with_left, ks_two_sample, sorted,
    HistogramSpec,
};
use super::regression::{sample_variance, variance_slope};
use crate::error::{domain, Error, Result};
use crate::fbm_gen::TimeGrid;
use crate::frac_fd::solve_drift;
use crate::frac_walk::{LbetaMethod, LbetaSampler, Resolved};
use crate::ggbm::generate_ensemble;
use crate::grey_cov::{char_function, char_function_numeric, ggbm_cov, marginal_density};
use crate::params::GreyParams;
use crate::quad::QuadratureSpec;
use crate::seed::{stream_rng, substream_seed};
use crate::special_fn::{
    gaussian_identity_residual, laplace_in_t_residual, laplace_in_tau_residual, lbeta_moment, m_wright,
    mwright_convolution_residual, normalization_residual, SeriesControl,
};

pub const GOF_BINS: usize = 40;
pub const P_VALUE_FLOOR: f64 = 0.01;
pub const KS_LIMIT: f64 = 0.03;
pub const MOMENT_SE: f64 = 3.0;
pub const COVARIANCE_SE: f64 = 5.0;
pub const SLOPE_TOLERANCE: f64 = 0.05;
pub const IDENTITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Figure1,
    Figure2,
    Figure3,
    Marginal,
    VarianceSlope,
    Covariance,
    Identities,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Figure1,
        Suite::Figure2,
        Suite::Figure3,
        Suite::Marginal,
        Suite::VarianceSlope,
        Suite::Covariance,
        Suite::Identities,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Figure1 => "figure1",
            Suite::Figure2 => "figure2",
            Suite::Figure3 => "figure3",
            Suite::Marginal => "marginal",
            Suite::VarianceSlope => "variance-slope",
            Suite::Covariance => "covariance",
            Suite::Identities => "identities",
        }
    }

    /// Sample or path count used when none is configured.
    pub fn default_samples(&self) -> usize {
        match self {
            Suite::Marginal => 15_000,
            Suite::Identities => 0,
            _ => 10_000,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub samples: Option<usize>,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { samples: None, seed: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// Pass when `statistic < threshold`.
    Below,
    /// Pass when `statistic > threshold`.
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub statistic: f64,
    pub comparison: Comparison,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, statistic: f64, comparison: Comparison, threshold: f64) -> Self {
        let passed = match comparison {
            Comparison::Below => statistic < threshold,
            Comparison::Above => statistic > threshold,
        };
        Self { name: name.into(), statistic, comparison, threshold, passed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub samples: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let n = cfg.samples.unwrap_or_else(|| suite.default_samples());
    if suite != Suite::Identities && n < 100 {
        return Err(Error::InsufficientData(format!("suite {suite} needs at least 100 samples, got {n}")));
    }
    let mut checks = Vec::new();
    let mut tables = Vec::new();
    match suite {
        Suite::Figure1 => lbeta_law(0.4, n, cfg.seed, &mut checks, &mut tables)?,
        Suite::Figure2 => {
            lbeta_law(0.5, n, cfg.seed, &mut checks, &mut tables)?;
            half_normal_shortcut(n, cfg.seed, &mut checks)?;
        }
        Suite::Figure3 => lbeta_law(0.8, n, cfg.seed, &mut checks, &mut tables)?,
        Suite::Marginal => marginal(n, cfg.seed, &mut checks, &mut tables)?,
        Suite::VarianceSlope => slope(n, cfg.seed, &mut checks, &mut tables)?,
        Suite::Covariance => covariance(n, cfg.seed, &mut checks, &mut tables)?,
        Suite::Identities => identities(&mut checks)?,
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport { suite: suite.name().to_string(), samples: n, seed: cfg.seed, passed, checks, tables })
}

fn moment_checks(tag: &str, beta: f64, samples: &[f64], checks: &mut Vec<Check>) -> Result<()> {
    let n = samples.len() as f64;
    for k in 1..=2u32 {
        let powers: Vec<f64> = samples.iter().map(|x| x.powi(k as i32)).collect();
        let mean = powers.iter().sum::<f64>() / n;
        let se = (sample_variance(&powers) / n).sqrt();
        let exact = lbeta_moment(beta, k)?;
        checks.push(Check::new(format!("{tag}moment{k}_z"), (mean - exact).abs() / se, Comparison::Below, MOMENT_SE));
    }
    Ok(())
}

/// Walk samples of `L_β` against the lattice law of the matching
/// finite-difference scheme (chi-square and KS), plus exact moments.
fn lbeta_law(beta: f64, n: usize, seed: u64, checks: &mut Vec<Check>, tables: &mut Vec<Table>) -> Result<()> {
    let sampler = LbetaSampler::with_default_lattice(beta, LbetaMethod::Auto, true)?;
    let Resolved::Walk(scheme) = sampler.resolved() else {
        return domain("suite needs a random-walk sampler");
    };
    let lat = *sampler.lattice();
    let samples = sampler.sample_many(n, seed);
    moment_checks("", beta, &samples, checks)?;

    let grid = solve_drift(beta, &lat, scheme)?;
    let boundary = lat.m - 1;
    let atoms: Vec<(f64, f64)> = (0..lat.m)
        .map(|i| {
            let p = if i == boundary { 1.0 - grid.mass } else { grid.u[lat.m + i] * lat.dx };
            (i as f64 * lat.dx, p)
        })
        .collect();

    let spec = HistogramSpec::new(GOF_BINS, 0.0, 5.0)?;
    let probs = atom_probabilities(atoms.iter().copied(), &spec);
    let gof = chi_square_gof(&samples, &spec, &probs)?;
    checks.push(Check::new("chi_square_p", gof.p_value, Comparison::Above, P_VALUE_FLOOR));

    let cum: Vec<f64> = atoms
        .iter()
        .scan(0.0, |acc, &(_, p)| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let node = |x: f64| (x / lat.dx).round() as usize;
    let s = sorted(&samples)?;
    let ks = ks_distance_with_left(
        &s,
        |x| cum[node(x).min(boundary)],
        |x| if node(x) == 0 { 0.0 } else { cum[node(x).min(lat.m) - 1] },
    );
    checks.push(Check::new("ks_lattice", ks, Comparison::Below, KS_LIMIT));

    let ctrl = SeriesControl::unbounded();
    let mut sup = 0.0_f64;
    for (i, &(x, _)) in atoms.iter().enumerate().take(boundary) {
        sup = sup.max((grid.u[lat.m + i] - m_wright(beta, x, &ctrl)?).abs());
    }
    checks.push(Check::new("lattice_sup_error", sup, Comparison::Below, 5e-2));

    if beta == 0.5 {
        let mut rng = stream_rng(seed, "reference", 0);
        let reference: Vec<f64> =
            (0..n).map(|_| rng.sample::<f64, _>(StandardNormal).abs() * std::f64::consts::SQRT_2).collect();
        let d = ks_two_sample(&s, &sorted(&reference)?);
        checks.push(Check::new("ks_two_sample_half_normal", d, Comparison::Below, KS_LIMIT));
    }

    let mut bins = Table::new("bins", &["lo", "hi", "observed", "expected"]);
    bins.rows = gof.bins.iter().map(|b| vec![b.lo, b.hi, b.observed as f64, b.expected]).collect();
    let mut density = Table::new("density", &["x", "histogram", "lattice", "exact"]);
    let heights = spec.density_heights(&samples);
    for (b, h) in heights.iter().enumerate() {
        let (lo, hi) = spec.slot_edges(b + 1);
        let mid = 0.5 * (lo + hi);
        let j = node(mid).min(boundary - 1);
        density.rows.push(vec![mid, *h, grid.u[lat.m + j], m_wright(beta, mid, &ctrl)?]);
    }
    tables.push(bins);
    tables.push(density);
    Ok(())
}

fn half_normal_shortcut(n: usize, seed: u64, checks: &mut Vec<Check>) -> Result<()> {
    let sampler = LbetaSampler::with_default_lattice(0.5, LbetaMethod::Auto, false)?;
    let samples = sampler.sample_many(n, substream_seed(seed, "shortcut", 0));
    moment_checks("shortcut_", 0.5, &samples, checks)?;
    let s = sorted(&samples)?;
    let d = ks_distance(&s, |x| if x <= 0.0 { 0.0 } else { statrs::function::erf::erf(x / 2.0) });
    checks.push(Check::new("shortcut_ks", d, Comparison::Below, KS_LIMIT));
    Ok(())
}

fn std_at(params: &GreyParams<f64>, t: f64) -> f64 {
    ggbm_cov(params, t, t).sqrt()
}

const PROCESS_CASES: [(f64, f64); 2] = [(0.5, 0.5), (1.5, 0.5)];

fn marginal(n: usize, seed: u64, checks: &mut Vec<Check>, tables: &mut Vec<Table>) -> Result<()> {
    let grid = TimeGrid::new(4, 0.5)?;
    let quad = QuadratureSpec { abs_tol: 1e-10, rel_tol: 1e-9, ..QuadratureSpec::default() };
    for (alpha, beta) in PROCESS_CASES {
        let params = GreyParams::new(alpha, beta)?;
        let ens = generate_ensemble(&params, &grid, n, seed, LbetaMethod::Auto)?;
        for t in [1.0, 2.0] {
            let k = ens.index_of(t).expect("grid contains 1 and 2");
            let w = 4.0 * std_at(&params, t);
            let spec = HistogramSpec::new(GOF_BINS, -w, w)?;
            let column = ens.column(k);
            let f = |x: f64| marginal_density(&params, x, t).unwrap_or(f64::NAN);
            let gof = density_gof(&column, f, &spec, &quad)?;
            checks.push(Check::new(
                format!("chi_square_p_alpha{alpha}_t{t}"),
                gof.p_value,
                Comparison::Above,
                P_VALUE_FLOOR,
            ));
            let mut table = Table::new(format!("marginal_alpha{alpha}_t{t}"), &["x", "histogram", "density"]);
            for (b, h) in spec.density_heights(&column).into_iter().enumerate() {
                let (lo, hi) = spec.slot_edges(b + 1);
                let mid = 0.5 * (lo + hi);
                table.rows.push(vec![mid, h, f(mid)]);
            }
            tables.push(table);
        }
    }
    Ok(())
}

fn slope(n: usize, seed: u64, checks: &mut Vec<Check>, tables: &mut Vec<Table>) -> Result<()> {
    let grid = TimeGrid::with_horizon(50, 1.0)?;
    let times = grid.times();
    for (alpha, beta) in PROCESS_CASES {
        let params = GreyParams::new(alpha, beta)?;
        let ens = generate_ensemble(&params, &grid, n, seed, LbetaMethod::Auto)?;
        let fit = variance_slope(&ens, &times)?;
        checks.push(Check::new(format!("slope_error_alpha{alpha}"), (fit.slope - alpha).abs(), Comparison::Below, SLOPE_TOLERANCE));
        let mut table = Table::new(format!("variance_alpha{alpha}"), &["t", "sample_variance", "exact_variance"]);
        for &t in &times {
            let k = ens.index_of(t).expect("grid time");
            table.rows.push(vec![t, sample_variance(&ens.column(k)), ggbm_cov(&params, t, t)]);
        }
        tables.push(table);
    }
    Ok(())
}

fn covariance(n: usize, seed: u64, checks: &mut Vec<Check>, tables: &mut Vec<Table>) -> Result<()> {
    let params = GreyParams::new(1.0, 0.5)?;
    let grid = TimeGrid::new(4, 0.5)?;
    let times = [0.5, 1.0, 2.0];
    let ens = generate_ensemble(&params, &grid, n, seed, LbetaMethod::Auto)?;
    let est = empirical_covariance(&ens, &times)?;
    let mut table = Table::new("covariance", &["t", "s", "estimate", "stderr", "exact"]);
    for e in est.entries() {
        let (t, s) = (times[e.i], times[e.j]);
        let exact = ggbm_cov(&params, t, s);
        checks.push(Check::new(format!("cov_z_{t}_{s}"), (e.estimate - exact).abs() / e.stderr, Comparison::Below, COVARIANCE_SE));
        table.rows.push(vec![t, s, e.estimate, e.stderr, exact]);
    }
    tables.push(table);

    // a shared √L makes squared values more correlated than a Gaussian allows
    let (k1, k2) = (ens.index_of(1.0).expect("grid"), ens.index_of(2.0).expect("grid"));
    let sq: Vec<Vec<f64>> = ens.paths.iter().map(|p| vec![p[k1] * p[k1], p[k2] * p[k2]]).collect();
    let sq_cov = super::covariance::covariance_with_jackknife(&sq, &[1.0, 2.0])?;
    let c12 = ggbm_cov(&params, 1.0, 2.0);
    let excess = sq_cov.matrix.get(0, 1) - 2.0 * c12 * c12;
    checks.push(Check::new("squared_excess_z", excess / sq_cov.stderr.get(0, 1), Comparison::Above, 3.0));
    Ok(())
}

fn identities(checks: &mut Vec<Check>) -> Result<()> {
    let quad = QuadratureSpec::default();
    let tol = IDENTITY_TOLERANCE;
    for beta in [0.25, 0.5, 0.75] {
        checks.push(Check::new(format!("normalization_{beta}"), normalization_residual(beta, &quad)?, Comparison::Below, tol));
    }
    for x in [0.0, 0.5, 1.0, 2.0] {
        checks.push(Check::new(
            format!("convolution_{x}"),
            mwright_convolution_residual(0.5, 0.5, x, &quad)?,
            Comparison::Below,
            tol,
        ));
    }
    for (beta, s, t) in [(0.5, 1.0, 1.0), (0.3, 2.0, 0.5), (0.8, 0.5, 2.0)] {
        checks.push(Check::new(
            format!("laplace_tau_{beta}_{s}_{t}"),
            laplace_in_tau_residual(beta, s, t, &quad)?,
            Comparison::Below,
            tol,
        ));
    }
    for (beta, tau, s) in [(0.5, 1.0, 1.0), (0.3, 0.5, 2.0), (0.8, 2.0, 0.7)] {
        checks.push(Check::new(
            format!("laplace_t_{beta}_{tau}_{s}"),
            laplace_in_t_residual(beta, tau, s, &quad)?,
            Comparison::Below,
            tol,
        ));
    }
    for (x, t) in [(0.0, 1.0), (0.7, 0.5), (2.0, 3.0)] {
        checks.push(Check::new(format!("gaussian_{x}_{t}"), gaussian_identity_residual(x, t)?, Comparison::Below, tol));
    }
    let params: GreyParams<f64> = GreyParams::new(1.0, 0.5)?;
    for y in [0.5, 1.0, 2.0] {
        let numeric = char_function_numeric(&params, 1.0, y, &quad)?;
        let exact = char_function(&params, &[1.0], &[y])?;
        checks.push(Check::new(format!("char_function_{y}"), (numeric - exact).abs(), Comparison::Below, tol));
    }
    Ok(())
}
