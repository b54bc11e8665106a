use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use greywalk::fbm_gen::TimeGrid;
use greywalk::frac_fd::{gl_coefficients, solve_drift, LatticeConfig, Scheme};
use greywalk::frac_walk::{LbetaMethod, LbetaSampler};
use greywalk::ggbm::generate_ensemble_with;
use greywalk::grey_cov::{char_function, char_function_numeric, finite_dim_density, marginal_density};
use greywalk::io::{ensemble_to_csv, ensemble_to_json, OutputFormat, FORMAT_HEADER};
use greywalk::quad::QuadratureSpec;
use greywalk::special_fn::{gamma, m_wright, m_wright_cdf, mittag_leffler, SeriesControl};
use greywalk::stats_validate::{run_suite, Suite, SuiteConfig};
use greywalk::{Error, GreyParams};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Domain(_) | Error::Format { .. } | Error::Io(_)) => 2,
            CliError::Core(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Generalized grey Brownian motion toolkit.
#[derive(Debug, Parser)]
#[command(name = "greywalk", version, propagate_version = true)]
pub struct Cli {
    /// Worker threads for parallel sampling (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a special function over a uniform grid.
    #[command(args_override_self = true)]
    Eval(EvalArgs),
    /// Print Grünwald–Letnikov coefficients.
    #[command(args_override_self = true)]
    Coeffs(CoeffsArgs),
    /// Solve the fractional drift equation up to t = 1.
    #[command(name = "fd-solve", args_override_self = true)]
    FdSolve(FdSolveArgs),
    /// Draw samples of L_beta.
    #[command(name = "sample-lbeta", args_override_self = true)]
    SampleLbeta(SampleArgs),
    /// Generate fractional Brownian motion paths.
    #[command(args_override_self = true)]
    Fbm(FbmArgs),
    /// Generate generalized grey Brownian motion paths.
    #[command(args_override_self = true)]
    Ggbm(GgbmArgs),
    /// Evaluate the marginal or joint density.
    #[command(args_override_self = true)]
    Density(DensityArgs),
    /// Evaluate the one-point characteristic function.
    #[command(args_override_self = true)]
    Charfn(CharfnArgs),
    /// Run a validation suite and print a JSON verdict.
    #[command(args_override_self = true)]
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file (default: standard output).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SeedArg {
    /// Master seed.
    #[arg(long, env = "GREYWALK_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct LatticeArgs {
    /// Lattice half-width a.
    #[arg(id = "lattice_a", long = "lattice-a", value_name = "A")]
    a: Option<f64>,
    /// Space nodes per half-line M.
    #[arg(id = "lattice_m", long = "lattice-m", value_name = "M")]
    m: Option<usize>,
    /// Time nodes N.
    #[arg(id = "lattice_n", long = "lattice-n", value_name = "N")]
    n: Option<usize>,
}

impl LatticeArgs {
    fn resolve(&self, beta: f64, implicit: bool) -> CliResult<LatticeConfig<f64>> {
        let default = if implicit { LatticeConfig::default_implicit(beta)? } else { LatticeConfig::default_explicit(beta)? };
        if self.a.is_none() && self.m.is_none() && self.n.is_none() {
            return Ok(default);
        }
        let a = self.a.unwrap_or(default.a);
        let n = self.n.unwrap_or(default.n);
        let m = match self.m {
            Some(m) => m,
            None if implicit => default.m,
            None => LatticeConfig::max_stable_m(a, n, beta),
        };
        Ok(LatticeConfig::new(a, m, n, beta)?)
    }

    fn echo(&self, lat: &LatticeConfig<f64>) -> String {
        format!("{},{},{}", lat.a, lat.m, lat.n)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Function {
    Mwright,
    MwrightCdf,
    MittagLeffler,
    Gamma,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    function: Function,
    /// Order parameter (ignored for gamma).
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    #[arg(long, default_value_t = 5.0)]
    to: f64,
    #[arg(long, default_value_t = 51)]
    points: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CoeffTable {
    C,
    B,
}

#[derive(Debug, Args)]
struct CoeffsArgs {
    #[arg(long)]
    beta: f64,
    /// Highest index K.
    #[arg(long)]
    k: usize,
    /// Which sequence to print: c_k (k = 1..K) or b_n (n = 0..K).
    #[arg(long, value_enum, default_value = "c")]
    table: CoeffTable,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeChoice {
    Explicit,
    Implicit,
    Both,
}

#[derive(Debug, Args)]
struct FdSolveArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long, value_enum, default_value = "both")]
    scheme: SchemeChoice,
    #[command(flatten)]
    lattice: LatticeArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodChoice {
    Auto,
    Explicit,
    Implicit,
}

impl From<MethodChoice> for LbetaMethod {
    fn from(m: MethodChoice) -> Self {
        match m {
            MethodChoice::Auto => LbetaMethod::Auto,
            MethodChoice::Explicit => LbetaMethod::Explicit,
            MethodChoice::Implicit => LbetaMethod::Implicit,
        }
    }
}

#[derive(Debug, Args)]
struct WalkArgs {
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodChoice,
    /// Use the random walk even where an exact sampler exists (beta = 0.5).
    #[arg(long)]
    force_walk: bool,
    #[command(flatten)]
    lattice: LatticeArgs,
}

impl WalkArgs {
    fn sampler(&self, beta: f64) -> CliResult<LbetaSampler> {
        let method: LbetaMethod = self.method.into();
        let implicit = match method {
            LbetaMethod::Implicit => true,
            LbetaMethod::Explicit => false,
            LbetaMethod::Auto => beta < greywalk::frac_walk::AUTO_IMPLICIT_BELOW,
        };
        let lat = self.lattice.resolve(beta, implicit)?;
        Ok(LbetaSampler::new(beta, method, lat, self.force_walk)?)
    }
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    seed: SeedArg,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct PathArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    paths: usize,
    /// Grid points after the origin.
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Final time of the grid.
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatChoice,
    #[command(flatten)]
    seed: SeedArg,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatChoice {
    Csv,
    Json,
}

impl From<FormatChoice> for OutputFormat {
    fn from(f: FormatChoice) -> Self {
        match f {
            FormatChoice::Csv => OutputFormat::Csv,
            FormatChoice::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
struct FbmArgs {
    #[command(flatten)]
    path: PathArgs,
}

#[derive(Debug, Args)]
struct GgbmArgs {
    #[arg(long)]
    beta: f64,
    #[command(flatten)]
    path: PathArgs,
    #[command(flatten)]
    walk: WalkArgs,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    /// Time of the marginal density.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = -5.0)]
    from: f64,
    #[arg(long, default_value_t = 5.0)]
    to: f64,
    #[arg(long, default_value_t = 101)]
    points: usize,
    /// Comma-separated times for a single joint-density value.
    #[arg(long, value_delimiter = ',', requires = "at")]
    times: Option<Vec<f64>>,
    /// Comma-separated evaluation point matching --times.
    #[arg(long, value_delimiter = ',', requires = "times")]
    at: Option<Vec<f64>>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct CharfnArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    #[arg(long, default_value_t = 4.0)]
    to: f64,
    #[arg(long, default_value_t = 51)]
    points: usize,
    /// Also compute the transform of the density by quadrature.
    #[arg(long)]
    numeric: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Suite name, or `all`.
    suite: String,
    /// Sample or path count (suite default if omitted).
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    seed: SeedArg,
    /// Directory for per-check CSV tables.
    #[arg(long)]
    tables: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

pub fn run(cli: Cli) -> CliResult<bool> {
    match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?;
            pool.install(|| dispatch(cli.command))
        }
        None => dispatch(cli.command),
    }
}

fn dispatch(command: Command) -> CliResult<bool> {
    match command {
        Command::Eval(a) => eval(a),
        Command::Coeffs(a) => coeffs(a),
        Command::FdSolve(a) => fd_solve(a),
        Command::SampleLbeta(a) => sample(a),
        Command::Fbm(a) => fbm(a),
        Command::Ggbm(a) => ggbm(a),
        Command::Density(a) => density(a),
        Command::Charfn(a) => charfn(a),
        Command::Validate(a) => validate(a),
    }
}

fn emit(out: &OutputArgs, text: &str) -> CliResult<()> {
    match &out.output {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// CSV document with the format header and echoed `# key=value` metadata.
struct Csv {
    text: String,
}

impl Csv {
    fn new(meta: &[(&str, String)], header: &str) -> Self {
        let mut text = String::from(FORMAT_HEADER);
        text.push('\n');
        for (k, v) in meta {
            text.push_str(&format!("# {k}={v}\n"));
        }
        text.push_str(header);
        text.push('\n');
        Self { text }
    }

    fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }
}

fn grid(from: f64, to: f64, points: usize) -> CliResult<Vec<f64>> {
    if points == 0 || to.partial_cmp(&from).is_none_or(|o| o.is_lt()) {
        return Err(CliError::Usage("need --points >= 1 and --to >= --from".into()));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let h = (to - from) / (points - 1) as f64;
    Ok((0..points).map(|i| if i + 1 == points { to } else { from + i as f64 * h }).collect())
}

fn eval(a: EvalArgs) -> CliResult<bool> {
    let ctrl = SeriesControl::default();
    let name = match a.function {
        Function::Mwright => "mwright",
        Function::MwrightCdf => "mwright-cdf",
        Function::MittagLeffler => "mittag-leffler",
        Function::Gamma => "gamma",
    };
    let mut csv = Csv::new(&[("command", "eval".into()), ("function", name.into()), ("beta", a.beta.to_string())], "x,value");
    for x in grid(a.from, a.to, a.points)? {
        let v = match a.function {
            Function::Mwright => m_wright(a.beta, x, &ctrl)?,
            Function::MwrightCdf => m_wright_cdf(a.beta, x, &ctrl)?,
            Function::MittagLeffler => mittag_leffler(a.beta, x, &ctrl)?,
            Function::Gamma => gamma(x),
        };
        csv.row(&[x.to_string(), v.to_string()]);
    }
    emit(&a.out, &csv.text)?;
    Ok(true)
}

fn coeffs(a: CoeffsArgs) -> CliResult<bool> {
    if a.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let table = gl_coefficients(a.beta, a.k)?;
    let meta = [("command", "coeffs".to_string()), ("beta", a.beta.to_string()), ("k", a.k.to_string())];
    let mut csv = match a.table {
        CoeffTable::C => Csv::new(&meta, "k,c"),
        CoeffTable::B => Csv::new(&meta, "n,b"),
    };
    match a.table {
        CoeffTable::C => (1..=a.k).for_each(|k| csv.row(&[k.to_string(), table.c(k).to_string()])),
        CoeffTable::B => (0..=a.k).for_each(|n| csv.row(&[n.to_string(), table.b(n).to_string()])),
    }
    emit(&a.out, &csv.text)?;
    Ok(true)
}

fn fd_solve(a: FdSolveArgs) -> CliResult<bool> {
    let schemes: Vec<Scheme> = match a.scheme {
        SchemeChoice::Explicit => vec![Scheme::Explicit],
        SchemeChoice::Implicit => vec![Scheme::Implicit],
        SchemeChoice::Both => vec![Scheme::Explicit, Scheme::Implicit],
    };
    let lat = a.lattice.resolve(a.beta, schemes == [Scheme::Implicit])?;
    let grids = schemes.iter().map(|&s| solve_drift(a.beta, &lat, s)).collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = schemes.iter().map(|s| s.to_string()).collect();
    let mut meta = vec![
        ("command", "fd-solve".to_string()),
        ("beta", a.beta.to_string()),
        ("lattice", a.lattice.echo(&lat)),
        ("mu", lat.mu.to_string()),
    ];
    for (name, g) in names.iter().zip(&grids) {
        meta.push(if name == "explicit" { ("mass_explicit", g.mass.to_string()) } else { ("mass_implicit", g.mass.to_string()) });
    }
    let mut csv = Csv::new(&meta, &format!("x,{},exact", names.join(",")));
    let ctrl = SeriesControl::unbounded();
    for j in 0..lat.nodes() {
        let x = lat.x(j);
        let exact = if x < 0.0 {
            0.0
        } else if a.beta == 1.0 {
            f64::NAN
        } else {
            m_wright(a.beta, x, &ctrl)?
        };
        let mut row = vec![x.to_string()];
        row.extend(grids.iter().map(|g| g.u[j].to_string()));
        row.push(exact.to_string());
        csv.row(&row);
    }
    emit(&a.out, &csv.text)?;
    Ok(true)
}

fn sample(a: SampleArgs) -> CliResult<bool> {
    let sampler = a.walk.sampler(a.beta)?;
    let values = sampler.sample_many(a.samples, a.seed.seed);
    let meta = [
        ("command", "sample-lbeta".to_string()),
        ("beta", a.beta.to_string()),
        ("method", format!("{:?}", sampler.resolved()).to_lowercase()),
        ("lattice", a.walk.lattice.echo(sampler.lattice())),
        ("seed", a.seed.seed.to_string()),
    ];
    let mut csv = Csv::new(&meta, "index,value");
    for (i, v) in values.iter().enumerate() {
        csv.row(&[i.to_string(), v.to_string()]);
    }
    emit(&a.out, &csv.text)?;
    Ok(true)
}

fn write_paths(p: &PathArgs, params: GreyParams<f64>, sampler: &LbetaSampler, command: &str) -> CliResult<bool> {
    if p.paths == 0 {
        return Err(CliError::Usage("--paths must be at least 1".into()));
    }
    let grid = TimeGrid::with_horizon(p.n, p.horizon)?;
    let ens = generate_ensemble_with(&params, &grid, p.paths, p.seed.seed, sampler)?;
    let extra = vec![
        ("command".to_string(), command.to_string()),
        ("paths".to_string(), p.paths.to_string()),
        ("horizon".to_string(), p.horizon.to_string()),
    ];
    let text = match OutputFormat::from(p.format) {
        OutputFormat::Csv => ensemble_to_csv(&ens, &extra),
        OutputFormat::Json => ensemble_to_json(&ens, &extra),
    };
    emit(&p.out, &text)?;
    Ok(true)
}

fn fbm(a: FbmArgs) -> CliResult<bool> {
    let params = GreyParams::new(a.path.alpha, 1.0)?;
    let sampler = LbetaSampler::with_default_lattice(1.0, LbetaMethod::Auto, false)?;
    write_paths(&a.path, params, &sampler, "fbm")
}

fn ggbm(a: GgbmArgs) -> CliResult<bool> {
    let params = GreyParams::new(a.path.alpha, a.beta)?;
    let sampler = a.walk.sampler(a.beta)?;
    write_paths(&a.path, params, &sampler, "ggbm")
}

fn density(a: DensityArgs) -> CliResult<bool> {
    let params = GreyParams::new(a.alpha, a.beta)?;
    let meta = [("command", "density".to_string()), ("alpha", a.alpha.to_string()), ("beta", a.beta.to_string())];
    if let (Some(times), Some(at)) = (&a.times, &a.at) {
        let v = finite_dim_density(&params, times, at, &QuadratureSpec::default())?;
        let mut csv = Csv::new(&meta, "times,x,density");
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
        csv.row(&[join(times), join(at), v.to_string()]);
        emit(&a.out, &csv.text)?;
        return Ok(true);
    }
    let mut meta = meta.to_vec();
    meta.push(("t", a.t.to_string()));
    let mut csv = Csv::new(&meta, "x,density");
    for x in grid(a.from, a.to, a.points)? {
        csv.row(&[x.to_string(), marginal_density(&params, x, a.t)?.to_string()]);
    }
    emit(&a.out, &csv.text)?;
    Ok(true)
}

fn charfn(a: CharfnArgs) -> CliResult<bool> {
    let params = GreyParams::new(a.alpha, a.beta)?;
    let meta = [
        ("command", "charfn".to_string()),
        ("alpha", a.alpha.to_string()),
        ("beta", a.beta.to_string()),
        ("t", a.t.to_string()),
    ];
    let mut csv = Csv::new(&meta, if a.numeric { "y,value,numeric" } else { "y,value" });
    let quad = QuadratureSpec::default();
    for y in grid(a.from, a.to, a.points)? {
        let mut row = vec![y.to_string(), char_function(&params, &[a.t], &[y])?.to_string()];
        if a.numeric {
            row.push(char_function_numeric(&params, a.t, y, &quad)?.to_string());
        }
        csv.row(&row);
    }
    emit(&a.out, &csv.text)?;
    Ok(true)
}

fn validate(a: ValidateArgs) -> CliResult<bool> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?]
    };
    let cfg = SuiteConfig { samples: a.n, seed: a.seed.seed };
    let mut reports = Vec::new();
    for s in suites {
        reports.push(run_suite(s, &cfg)?);
    }
    if let Some(dir) = &a.tables {
        fs::create_dir_all(dir)?;
        for r in &reports {
            for t in &r.tables {
                fs::write(dir.join(format!("{}_{}.csv", r.suite, t.name)), t.to_csv())?;
            }
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    let doc = if reports.len() == 1 {
        serde_json::to_value(&reports[0])
    } else {
        serde_json::to_value(serde_json::json!({ "passed": passed, "suites": reports }))
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Usage(e.to_string()))?;
    text.push('\n');
    emit(&a.out, &text)?;
    Ok(passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn lattice_flags_coexist_with_grid_size() {
        let cli = Cli::try_parse_from(["greywalk", "ggbm", "--alpha", "1", "--beta", "0.5", "--n", "8", "--lattice-n", "65"]);
        assert!(cli.is_ok());
    }
}
