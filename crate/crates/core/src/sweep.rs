//! Parameter sweeps over `(β, ε)` and their CSV output.
//!
//! Files are comma-separated with a mandatory header, `\n` line endings and
//! every number written with 12 significant digits in scientific notation.
//! Rows are ordered β-major; the same spec always produces the same bytes,
//! however many worker threads evaluate it.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::closed::{gqd_closed, min_closed, qd_closed};
use crate::density::Party;
use crate::dimer::{build_density, xstate_params, DimerParams};
use crate::error::{Error, Result};
use crate::optimize::OptimizerConfig;
use crate::oracle::{gqd_eigen_form, min_oracle, qd_oracle, DEFAULT_DEGENERACY_TOL};

pub const SWEEP_HEADER: [&str; 11] = [
    "beta",
    "epsilon",
    "qd_closed",
    "qd_oracle",
    "gqd_closed",
    "gqd_oracle",
    "min_closed",
    "min_oracle",
    "delta_qd",
    "delta_gqd",
    "delta_min",
];

pub const SURFACE_HEADER: [&str; 4] = ["beta", "epsilon", "measure", "value"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    Qd,
    Gqd,
    Min,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Qd, Measure::Gqd, Measure::Min];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Qd => "qd",
            Measure::Gqd => "gqd",
            Measure::Min => "min",
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qd" => Ok(Measure::Qd),
            "gqd" => Ok(Measure::Gqd),
            "min" => Ok(Measure::Min),
            _ => Err(Error::UnknownMeasure(s.trim().to_string())),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Comma-separated measure names, deduplicated into canonical order.
pub fn parse_measures(s: &str) -> Result<Vec<Measure>> {
    let mut out = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(Measure::from_str)
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::InvalidSpec("no measures selected".into()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Closed,
    Oracle,
    Both,
}

impl Method {
    pub fn closed(self) -> bool {
        matches!(self, Method::Closed | Method::Both)
    }

    pub fn oracle(self) -> bool {
        matches!(self, Method::Oracle | Method::Both)
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "closed" => Ok(Method::Closed),
            "oracle" => Ok(Method::Oracle),
            "both" => Ok(Method::Both),
            _ => Err(Error::UnknownMethod(s.trim().to_string())),
        }
    }
}

/// Parses an axis given either as a comma list (`0.1,0.5,0.9`) or as
/// `min:max:steps`, where `steps` is the number of evenly spaced points
/// including both ends.
pub fn parse_axis(s: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| Error::InvalidSpec(format!("{what} in axis `{s}`"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(&format!("bad number `{}`", t.trim())));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected min:max:steps"));
        }
        let (lo, hi) = (num(parts[0])?, num(parts[1])?);
        let steps: usize = parts[2].trim().parse().map_err(|_| bad("bad step count"))?;
        if steps == 0 {
            return Err(bad("steps must be >= 1"));
        }
        if steps == 1 {
            return Ok(vec![lo]);
        }
        let last = (steps - 1) as f64;
        Ok((0..steps)
            .map(|i| if i + 1 == steps { hi } else { lo + (hi - lo) * i as f64 / last })
            .collect())
    } else {
        s.split(',').filter(|t| !t.trim().is_empty()).map(num).collect()
    }
}

/// What to evaluate and where to write it.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub beta_values: Vec<f64>,
    pub epsilon_values: Vec<f64>,
    pub measures: Vec<Measure>,
    pub method: Method,
    pub output_path: Option<PathBuf>,
    pub oracle_config: OptimizerConfig,
    pub degeneracy_tol: f64,
}

impl SweepSpec {
    /// All measures, both methods, default optimiser, no output file.
    pub fn new(beta_values: Vec<f64>, epsilon_values: Vec<f64>) -> Self {
        SweepSpec {
            beta_values,
            epsilon_values,
            measures: Measure::ALL.to_vec(),
            method: Method::Both,
            output_path: None,
            oracle_config: OptimizerConfig::default(),
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta_values.is_empty() || self.epsilon_values.is_empty() {
            return Err(Error::InvalidSpec("need at least one beta and one epsilon value".into()));
        }
        if let Some(b) = self.beta_values.iter().find(|b| !(**b >= 0.0 && b.is_finite())) {
            return Err(Error::InvalidSpec(format!("beta values must be finite and >= 0, got {b}")));
        }
        if let Some(e) = self.epsilon_values.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(Error::InvalidSpec(format!("epsilon values must lie in [0, 1], got {e}")));
        }
        if self.measures.is_empty() {
            return Err(Error::InvalidSpec("no measures selected".into()));
        }
        self.oracle_config.validate().map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    fn points(&self) -> Vec<(f64, f64)> {
        self.beta_values
            .iter()
            .flat_map(|&b| self.epsilon_values.iter().map(move |&e| (b, e)))
            .collect()
    }

    fn wants(&self, m: Measure) -> bool {
        self.measures.contains(&m)
    }
}

/// One `(β, ε)` point; absent measures are `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub epsilon: f64,
    pub qd_closed: Option<f64>,
    pub qd_oracle: Option<f64>,
    pub gqd_closed: Option<f64>,
    pub gqd_oracle: Option<f64>,
    pub min_closed: Option<f64>,
    pub min_oracle: Option<f64>,
    pub delta_qd: Option<f64>,
    pub delta_gqd: Option<f64>,
    pub delta_min: Option<f64>,
}

fn delta(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some((a? - b?).abs())
}

impl SweepRow {
    fn fields(&self) -> [Option<f64>; 11] {
        [
            Some(self.beta),
            Some(self.epsilon),
            self.qd_closed,
            self.qd_oracle,
            self.gqd_closed,
            self.gqd_oracle,
            self.min_closed,
            self.min_oracle,
            self.delta_qd,
            self.delta_gqd,
            self.delta_min,
        ]
    }

    fn from_fields(f: [Option<f64>; 11]) -> Option<Self> {
        Some(SweepRow {
            beta: f[0]?,
            epsilon: f[1]?,
            qd_closed: f[2],
            qd_oracle: f[3],
            gqd_closed: f[4],
            gqd_oracle: f[5],
            min_closed: f[6],
            min_oracle: f[7],
            delta_qd: f[8],
            delta_gqd: f[9],
            delta_min: f[10],
        })
    }

    /// The row as it reads back from CSV: every value rounded to 12 significant digits.
    pub fn rounded(&self) -> SweepRow {
        let round = |v: Option<f64>| v.map(|x| format_value(x).parse::<f64>().expect("formatted float parses"));
        SweepRow::from_fields(self.fields().map(round)).expect("beta and epsilon are present")
    }

    /// Value of `measure` by the closed form (`oracle = false`) or the oracle.
    pub fn value(&self, measure: Measure, oracle: bool) -> Option<f64> {
        match (measure, oracle) {
            (Measure::Qd, false) => self.qd_closed,
            (Measure::Qd, true) => self.qd_oracle,
            (Measure::Gqd, false) => self.gqd_closed,
            (Measure::Gqd, true) => self.gqd_oracle,
            (Measure::Min, false) => self.min_closed,
            (Measure::Min, true) => self.min_oracle,
        }
    }
}

/// Evaluates the measures requested by `spec` at one point.
pub fn evaluate_point(beta: f64, epsilon: f64, spec: &SweepSpec) -> Result<SweepRow> {
    let params = DimerParams::new(beta, epsilon)?;
    let xp = xstate_params(&params);
    let rho = if spec.method.oracle() { Some(build_density(&xp)?) } else { None };
    let mut row = SweepRow { beta, epsilon, ..SweepRow::default() };
    let cfg = &spec.oracle_config;

    if spec.wants(Measure::Qd) {
        if spec.method.closed() {
            row.qd_closed = Some(qd_closed(&params)?);
        }
        if let Some(rho) = &rho {
            row.qd_oracle = Some(qd_oracle(rho, cfg)?.value);
        }
        row.delta_qd = delta(row.qd_closed, row.qd_oracle);
    }
    if spec.wants(Measure::Gqd) {
        if spec.method.closed() {
            row.gqd_closed = Some(gqd_closed(&xp));
        }
        if let Some(rho) = &rho {
            row.gqd_oracle = Some(gqd_eigen_form(rho));
        }
        row.delta_gqd = delta(row.gqd_closed, row.gqd_oracle);
    }
    if spec.wants(Measure::Min) {
        if spec.method.closed() {
            row.min_closed = Some(min_closed(&xp));
        }
        if let Some(rho) = &rho {
            row.min_oracle = Some(min_oracle(rho, Party::M, cfg, spec.degeneracy_tol).result.value);
        }
        row.delta_min = delta(row.min_closed, row.min_oracle);
    }
    Ok(row)
}

fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidSpec(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

/// Evaluates the full grid, `workers` threads (0 = one per core); writes
/// the CSV when the spec names an output path.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points = spec.points();
    let rows = with_workers(workers, || {
        points
            .par_iter()
            .map(|&(b, e)| evaluate_point(b, e, spec))
            .collect::<Result<Vec<_>>>()
    })??;
    if let Some(path) = &spec.output_path {
        let mut out = BufWriter::new(File::create(path)?);
        write_sweep_csv(&rows, &mut out)?;
        out.flush()?;
    }
    Ok(rows)
}

/// 12 significant digits, scientific notation, no negative zero.
pub fn format_value(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: &mut W) -> Result<()> {
    writeln!(out, "{}", SWEEP_HEADER.join(","))?;
    for row in rows {
        let line: Vec<String> = row.fields().iter().map(|f| f.map(format_value).unwrap_or_default()).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(input)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = rdr.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::InvalidSpec(format!("unexpected CSV header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    Ok(())
}

fn parse_field(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<f64>()
        .map(Some)
        .map_err(|_| Error::InvalidSpec(format!("bad CSV number `{s}`")))
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &SWEEP_HEADER)?;
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let mut fields = [None; 11];
        for (slot, raw) in fields.iter_mut().zip(record.iter()) {
            *slot = parse_field(raw)?;
        }
        rows.push(SweepRow::from_fields(fields).ok_or_else(|| Error::InvalidSpec("row without beta or epsilon".into()))?);
    }
    Ok(rows)
}

/// One line of the long-format surface table.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceRow {
    pub beta: f64,
    pub epsilon: f64,
    /// `<measure>_<method>`, e.g. `gqd_closed`.
    pub measure: String,
    pub value: f64,
}

/// Long-format rows for surface plots: per point, measures in canonical
/// order, closed before oracle.
pub fn surface_rows(rows: &[SweepRow], spec: &SweepSpec) -> Vec<SurfaceRow> {
    let mut methods = Vec::new();
    if spec.method.closed() {
        methods.push(false);
    }
    if spec.method.oracle() {
        methods.push(true);
    }
    let mut out = Vec::new();
    for row in rows {
        for &m in &spec.measures {
            for &oracle in &methods {
                if let Some(value) = row.value(m, oracle) {
                    out.push(SurfaceRow {
                        beta: row.beta,
                        epsilon: row.epsilon,
                        measure: format!("{}_{}", m.name(), if oracle { "oracle" } else { "closed" }),
                        value,
                    });
                }
            }
        }
    }
    out
}

/// Runs the sweep and writes it in long format instead of the wide table.
pub fn emit_surface(spec: &SweepSpec, workers: usize) -> Result<Vec<SurfaceRow>> {
    if spec.beta_values.len() < 2 || spec.epsilon_values.len() < 2 {
        return Err(Error::InvalidSpec("a surface needs at least two beta and two epsilon values".into()));
    }
    let unwritten = SweepSpec { output_path: None, ..spec.clone() };
    let rows = run_sweep(&unwritten, workers)?;
    let surface = surface_rows(&rows, spec);
    if let Some(path) = &spec.output_path {
        let mut out = BufWriter::new(File::create(path)?);
        write_surface_csv(&surface, &mut out)?;
        out.flush()?;
    }
    Ok(surface)
}

pub fn write_surface_csv<W: Write>(rows: &[SurfaceRow], out: &mut W) -> Result<()> {
    writeln!(out, "{}", SURFACE_HEADER.join(","))?;
    for r in rows {
        writeln!(out, "{},{},{},{}", format_value(r.beta), format_value(r.epsilon), r.measure, format_value(r.value))?;
    }
    Ok(())
}

pub fn read_surface_csv<R: Read>(input: R) -> Result<Vec<SurfaceRow>> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &SURFACE_HEADER)?;
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let num = |i: usize| parse_field(record.get(i).unwrap_or("")).and_then(|v| v.ok_or_else(|| Error::InvalidSpec("empty surface field".into())));
        rows.push(SurfaceRow {
            beta: num(0)?,
            epsilon: num(1)?,
            measure: record.get(2).unwrap_or("").to_string(),
            value: num(3)?,
        });
    }
    Ok(rows)
}
