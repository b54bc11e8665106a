//! Ensemble files: a line-oriented CSV layout and an equivalent JSON document.
//!
//! CSV layout:
//!
//! ```text
//! # greywalk v1
//! # alpha=1.5
//! # beta=0.5
//! # seed=1
//! # method=half-normal
//! # lattice=none
//! # n_points=512
//! # dt=0.001953125
//! # lbeta=column
//! path_id,t,value,lbeta
//! 0,0,0,0.83
//! ```
//!
//! Floats use the shortest decimal that parses back to the same bits. The
//! `lbeta` key and column are omitted when `β = 1`. Unknown `# key=value`
//! lines are accepted and ignored on reading.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fbm_gen::TimeGrid;
use crate::ggbm::{LbetaProvenance, PathEnsemble};
use crate::params::GreyParams;

pub const FORMAT_HEADER: &str = "# greywalk v1";
const FORMAT_PREFIX: &str = "# greywalk ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => domain(format!("unknown format '{other}'")),
        }
    }
}

fn lattice_text(l: Option<(f64, usize, usize)>) -> String {
    match l {
        Some((a, m, n)) => format!("{a},{m},{n}"),
        None => "none".to_string(),
    }
}

fn parse_lattice(s: &str) -> std::result::Result<Option<(f64, usize, usize)>, String> {
    if s == "none" {
        return Ok(None);
    }
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("lattice must be 'a,M,N' or 'none', got '{s}'"));
    }
    let a = parts[0].parse().map_err(|e| format!("lattice a: {e}"))?;
    let m = parts[1].parse().map_err(|e| format!("lattice M: {e}"))?;
    let n = parts[2].parse().map_err(|e| format!("lattice N: {e}"))?;
    Ok(Some((a, m, n)))
}

/// CSV text of an ensemble, with `extra` metadata echoed after the fixed keys.
pub fn ensemble_to_csv(ens: &PathEnsemble, extra: &[(String, String)]) -> String {
    let mut out = String::new();
    let has_l = ens.lbeta_values.is_some();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    let _ = writeln!(out, "# alpha={}", ens.params.alpha());
    let _ = writeln!(out, "# beta={}", ens.params.beta());
    let _ = writeln!(out, "# seed={}", ens.master_seed);
    let _ = writeln!(out, "# method={}", ens.provenance.method);
    let _ = writeln!(out, "# lattice={}", lattice_text(ens.provenance.lattice));
    let _ = writeln!(out, "# n_points={}", ens.grid.n_points());
    let _ = writeln!(out, "# dt={}", ens.grid.dt());
    if has_l {
        out.push_str("# lbeta=column\n");
    }
    for (k, v) in extra {
        let _ = writeln!(out, "# {k}={v}");
    }
    out.push_str(if has_l { "path_id,t,value,lbeta\n" } else { "path_id,t,value\n" });
    let times = ens.times();
    for (i, path) in ens.paths.iter().enumerate() {
        for (t, v) in times.iter().zip(path) {
            match &ens.lbeta_values {
                Some(l) => {
                    let _ = writeln!(out, "{i},{t},{v},{}", l[i]);
                }
                None => {
                    let _ = writeln!(out, "{i},{t},{v}");
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct JsonMeta {
    format: String,
    alpha: f64,
    beta: f64,
    seed: u64,
    method: String,
    lattice: Option<(f64, usize, usize)>,
    n_points: usize,
    dt: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    extra: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct JsonEnsemble {
    meta: JsonMeta,
    grid: Vec<f64>,
    paths: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lbeta: Option<Vec<f64>>,
}

pub fn ensemble_to_json(ens: &PathEnsemble, extra: &[(String, String)]) -> String {
    let doc = JsonEnsemble {
        meta: JsonMeta {
            format: FORMAT_HEADER.trim_start_matches("# ").to_string(),
            alpha: ens.params.alpha(),
            beta: ens.params.beta(),
            seed: ens.master_seed,
            method: ens.provenance.method.clone(),
            lattice: ens.provenance.lattice,
            n_points: ens.grid.n_points(),
            dt: ens.grid.dt(),
            extra: extra.to_vec(),
        },
        grid: ens.times(),
        paths: ens.paths.clone(),
        lbeta: ens.lbeta_values.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("ensemble serializes");
    s.push('\n');
    s
}

pub fn write_ensemble<W: Write>(ens: &PathEnsemble, format: OutputFormat, extra: &[(String, String)], mut w: W) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => ensemble_to_csv(ens, extra),
        OutputFormat::Json => ensemble_to_json(ens, extra),
    };
    w.write_all(text.as_bytes())?;
    Ok(())
}

pub fn write_ensemble_file(ens: &PathEnsemble, format: OutputFormat, path: &Path) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_ensemble(ens, format, &[], &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn read_ensemble(path: &Path) -> Result<PathEnsemble> {
    parse_ensemble(&fs::read_to_string(path)?)
}

/// Parses either format, detected from the first non-blank character.
pub fn parse_ensemble(text: &str) -> Result<PathEnsemble> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}

fn fmt_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format { line, message: message.into() }
}

fn parse_json(text: &str) -> Result<PathEnsemble> {
    let doc: JsonEnsemble =
        serde_json::from_str(text).map_err(|e| fmt_err(e.line(), format!("invalid JSON: {e}")))?;
    if doc.meta.format != FORMAT_HEADER.trim_start_matches("# ") {
        return Err(fmt_err(1, format!("unsupported format '{}'", doc.meta.format)));
    }
    let ens = assemble(
        doc.meta.alpha,
        doc.meta.beta,
        doc.meta.seed,
        doc.meta.method,
        doc.meta.lattice,
        doc.meta.n_points,
        doc.meta.dt,
        doc.paths,
        doc.lbeta,
    )
    .map_err(|e| fmt_err(1, e.to_string()))?;
    if doc.grid != ens.times() {
        return Err(fmt_err(1, "grid does not match n_points and dt"));
    }
    Ok(ens)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    alpha: f64,
    beta: f64,
    seed: u64,
    method: String,
    lattice: Option<(f64, usize, usize)>,
    n_points: usize,
    dt: f64,
    paths: Vec<Vec<f64>>,
    lbeta: Option<Vec<f64>>,
) -> Result<PathEnsemble> {
    let params = GreyParams::new(alpha, beta)?;
    let grid = TimeGrid::new(n_points, dt)?;
    if paths.iter().any(|p| p.len() != n_points + 1) {
        return domain(format!("every path must have {} values", n_points + 1));
    }
    if let Some(l) = &lbeta {
        if l.len() != paths.len() {
            return domain("one lbeta value per path required");
        }
    }
    Ok(PathEnsemble {
        params,
        grid,
        master_seed: seed,
        provenance: LbetaProvenance { method, lattice },
        paths,
        lbeta_values: lbeta,
    })
}

fn parse_csv(text: &str) -> Result<PathEnsemble> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, FORMAT_HEADER)) => {}
        Some((n, l)) if l.starts_with(FORMAT_PREFIX) => {
            return Err(fmt_err(n, format!("unsupported version '{}'", &l[FORMAT_PREFIX.len()..])))
        }
        Some((n, _)) => return Err(fmt_err(n, format!("missing '{FORMAT_HEADER}' header"))),
        None => return Err(fmt_err(1, "empty input")),
    }

    let mut alpha = None;
    let mut beta = None;
    let mut seed = None;
    let mut method = None;
    let mut lattice = None;
    let mut n_points = None;
    let mut dt = None;
    let mut has_l = false;
    let header_line;
    loop {
        let Some((n, line)) = lines.next() else {
            return Err(fmt_err(0, "missing column header"));
        };
        let Some(meta) = line.strip_prefix("# ") else {
            header_line = (n, line);
            break;
        };
        let (k, v) = meta.split_once('=').ok_or_else(|| fmt_err(n, "metadata must be '# key=value'"))?;
        let bad = |e: String| fmt_err(n, format!("{k}: {e}"));
        match k {
            "alpha" => alpha = Some(v.parse::<f64>().map_err(|e| bad(e.to_string()))?),
            "beta" => beta = Some(v.parse::<f64>().map_err(|e| bad(e.to_string()))?),
            "seed" => seed = Some(v.parse::<u64>().map_err(|e| bad(e.to_string()))?),
            "method" => method = Some(v.to_string()),
            "lattice" => lattice = Some(parse_lattice(v).map_err(bad)?),
            "n_points" => n_points = Some(v.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "dt" => dt = Some(v.parse::<f64>().map_err(|e| bad(e.to_string()))?),
            "lbeta" if v == "column" => has_l = true,
            "lbeta" => return Err(bad(format!("unexpected value '{v}'"))),
            _ => {}
        }
    }
    let (hn, header) = header_line;
    let missing = |k: &str| fmt_err(hn, format!("missing metadata key '{k}'"));
    let alpha = alpha.ok_or_else(|| missing("alpha"))?;
    let beta = beta.ok_or_else(|| missing("beta"))?;
    let seed = seed.ok_or_else(|| missing("seed"))?;
    let method = method.ok_or_else(|| missing("method"))?;
    let lattice = lattice.ok_or_else(|| missing("lattice"))?;
    let n_points = n_points.ok_or_else(|| missing("n_points"))?;
    let dt = dt.ok_or_else(|| missing("dt"))?;
    let expected_header = if has_l { "path_id,t,value,lbeta" } else { "path_id,t,value" };
    if header != expected_header {
        return Err(fmt_err(hn, format!("expected column header '{expected_header}'")));
    }
    let grid = TimeGrid::new(n_points, dt).map_err(|e| fmt_err(hn, e.to_string()))?;
    let times = grid.times_with_origin();
    let width = n_points + 1;

    let mut paths: Vec<Vec<f64>> = Vec::new();
    let mut lbeta: Vec<f64> = Vec::new();
    let mut row = 0usize;
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != if has_l { 4 } else { 3 } {
            return Err(fmt_err(n, format!("expected {} fields, found {}", if has_l { 4 } else { 3 }, cells.len())));
        }
        let (pid, k) = (row / width, row % width);
        let id: usize = cells[0].parse().map_err(|e| fmt_err(n, format!("path_id: {e}")))?;
        if id != pid {
            return Err(fmt_err(n, format!("expected path_id {pid}, found {id}")));
        }
        let t: f64 = cells[1].parse().map_err(|e| fmt_err(n, format!("t: {e}")))?;
        if t.to_bits() != times[k].to_bits() {
            return Err(fmt_err(n, format!("expected t={}, found {t}", times[k])));
        }
        let v: f64 = cells[2].parse().map_err(|e| fmt_err(n, format!("value: {e}")))?;
        if k == 0 {
            paths.push(Vec::with_capacity(width));
            if has_l {
                lbeta.push(cells[3].parse().map_err(|e| fmt_err(n, format!("lbeta: {e}")))?);
            }
        } else if has_l {
            let l: f64 = cells[3].parse().map_err(|e| fmt_err(n, format!("lbeta: {e}")))?;
            if l.to_bits() != lbeta[pid].to_bits() {
                return Err(fmt_err(n, "lbeta changes within a path"));
            }
        }
        paths[pid].push(v);
        row += 1;
    }
    if !row.is_multiple_of(width) {
        return Err(fmt_err(text.lines().count(), "truncated final path"));
    }
    assemble(alpha, beta, seed, method, lattice, n_points, dt, paths, has_l.then_some(lbeta))
        .map_err(|e| fmt_err(hn, e.to_string()))
}
