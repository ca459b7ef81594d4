//! Command-line front end. Every subcommand writes one JSON document (or CSV)
//! to `--out` or stdout and returns exit code 0 when all checks pass, 1 on a
//! verification failure and 2 on a usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::apsymbol::{spectrum_inclusion_report, symbol_of_combination, Combination, InclusionReport};
use crate::error::{Error, Result};
use crate::measure::{
    exact_line_mass, kernel_ip, verify_kernel_ip, verify_mean_identity, verify_norm_bound, verify_three_lines,
    ExponentialCoefficients, MuQuadrature, QuadratureSpec,
};
use crate::operators::{
    composition_matrix, kernel_ip_matrix_form, residual_sequence, toeplitz_matrix, verify_adjoint_eigen,
    word_matrix, write_matrix_binary, write_matrix_csv, zero_direction_sequence, ResidualRow, ZeroDirectionRow,
};
use crate::report::VerificationReport;
use crate::spectra::{
    classify_joint_spectrum, exclusion_bound, joint_membership, random_exponential_sums, sample_curve,
    single_spectrum, verify_separation_with, write_curve_csv, ExponentTuple, JointSpectrumShape,
};
use crate::specialfn::verify_sech_integral;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "compsemi", version, about = "Composition-operator semigroup toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Largest line index in the μ-quadrature
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub max_line: Option<i32>,
    /// Half-width of each line integral
    #[arg(long, global = true)]
    pub y_cutoff: Option<f64>,
    /// Gauss–Legendre panels per unit length
    #[arg(long, global = true)]
    pub nodes_per_unit: Option<usize>,
    /// Quadrature target tolerance
    #[arg(long = "tol", global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for random sample grids
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// key=value file; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Total mass, line masses and exponential means of μ
    VerifyMeasure,
    /// Inner products of weighted kernels: closed form, quadrature and matrix form
    VerifyKernelIp(KernelIpArgs),
    /// Fourier transform of |Γ(c/2 + iα)|² against a power of sech
    VerifySech(SechArgs),
    /// Adjoint kernel eigenvalue identity on truncations
    VerifyEigen(EigenArgs),
    /// Averaging identity ∫₀¹ ⟨(sa)^z, b^z⟩ ds
    VerifyMean(MeanArgs),
    /// Log-convexity of line norms of Γ(z+1)a^z
    VerifyThreeLines(ThreeLinesArgs),
    /// Line-omission norm bound for exponential sums
    VerifyNormBound(NormBoundArgs),
    /// Lower bound for (T - s^{z0}) off the spectrum
    VerifySeparation(SeparationArgs),
    /// Spectrum of T_{s^z}: radius, residual scan and exclusion bounds
    Spectrum(SpectrumArgs),
    /// Joint spectrum geometry of a parameter family
    Joint(JointArgs),
    /// Symbol of an operator combination
    Symbol(SymbolArgs),
    /// Dump a truncated matrix
    DumpMatrix(DumpArgs),
}

#[derive(Debug, Args)]
pub struct KernelIpArgs {
    #[arg(long, value_parser = parse_f64, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    pub s: Vec<f64>,
    #[arg(long, value_parser = parse_f64, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    pub t: Vec<f64>,
    #[arg(long, value_parser = parse_complex, value_delimiter = ',', default_value = "0,0.5,1+1i,-0.3+2i", allow_hyphen_values = true)]
    pub w: Vec<Complex64>,
    /// Truncation for the matrix quadratic form
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub quad_tol: f64,
    /// Tolerance used when re(w) < 0. The default quadrature meets it down to
    /// re(w) = -0.45; closer to -1/2 raise --nodes-per-unit (32 suffices at -0.49).
    #[arg(long, default_value_t = 1e-4)]
    pub boundary_tol: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub matrix_tol: f64,
}

#[derive(Debug, Args)]
pub struct SechArgs {
    #[arg(long, value_parser = parse_f64, value_delimiter = ',', default_value = "1,2,3,5")]
    pub c: Vec<f64>,
    /// Defaults to 0, ln 2, 2 ln 2
    #[arg(long, value_parser = parse_f64, value_delimiter = ',', allow_hyphen_values = true)]
    pub u: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    #[arg(long, value_parser = parse_f64, value_delimiter = ',', default_value = "0.25,0.5")]
    pub s: Vec<f64>,
    #[arg(long, value_parser = parse_complex, value_delimiter = ',', default_value = "1,0,0.3+2i", allow_hyphen_values = true)]
    pub w: Vec<Complex64>,
    #[arg(long, value_parser = parse_usize, value_delimiter = ',', default_value = "2,10,200")]
    pub n: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    #[arg(long, value_parser = parse_f64, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    pub a: Vec<f64>,
    #[arg(long, value_parser = parse_f64, value_delimiter = ',', default_value = "0.25,0.5,0.75,1")]
    pub b: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub id_tol: f64,
}

#[derive(Debug, Args)]
pub struct ThreeLinesArgs {
    #[arg(long, value_parser = parse_f64, value_delimiter = ',', default_value = "0.3,0.5,0.9")]
    pub a: Vec<f64>,
    /// Triples alpha:beta:gamma separated by commas
    #[arg(long, value_parser = parse_triple, value_delimiter = ',', default_value = "-0.5:0:0.5,0:1:2", allow_hyphen_values = true)]
    pub triples: Vec<[f64; 3]>,
    #[arg(long, default_value_t = 1e-9)]
    pub slack_tol: f64,
}

#[derive(Debug, Args)]
pub struct NormBoundArgs {
    /// Number of random exponential sums in addition to the fixed examples
    #[arg(long, default_value_t = 10)]
    pub random: usize,
    #[arg(long, default_value_t = 4)]
    pub max_m: i32,
}

#[derive(Debug, Args)]
pub struct SeparationArgs {
    #[arg(long, value_parser = parse_f64, value_delimiter = ',', default_value = "0.25,0.5")]
    pub s: Vec<f64>,
    #[arg(long, value_parser = parse_usize, value_delimiter = ',', default_value = "0,1,2")]
    pub m: Vec<usize>,
    #[arg(long, value_parser = parse_f64, value_delimiter = ',', default_value = "0,1", allow_hyphen_values = true)]
    pub y0: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, value_parser = parse_u32, value_delimiter = ',', default_value = "1,2,3,4,5,10,20,50,100,200")]
    pub ell: Vec<u32>,
    #[arg(long, default_value_t = 400)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct JointArgs {
    /// Exponents q_j as integers, decimals or ratios p/q
    #[arg(long, value_parser = parse_rational, value_delimiter = ',')]
    pub q: Vec<Rational64>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Number of curve samples over one period
    #[arg(long, default_value_t = 65)]
    pub samples: usize,
    /// CSV of phases theta_1..theta_n to test for membership
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SymbolArgs {
    /// Combination such as "1.0*I + 2.0*C(0.25)C*(0.5)"
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
    /// Attach residual certificates for sampled symbol values
    #[arg(long)]
    pub inclusion: bool,
    #[arg(long, value_parser = parse_usize, value_delimiter = ',', default_value = "200,400")]
    pub n: Vec<usize>,
    #[arg(long, value_parser = parse_f64, value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
    pub y: Vec<f64>,
    #[arg(long, value_parser = parse_u32, value_delimiter = ',', default_value = "1,2,4,8")]
    pub ell: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    Composition,
    Toeplitz,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[arg(long, value_enum, default_value = "composition")]
    pub kind: MatrixKind,
    #[arg(long)]
    pub s: Option<f64>,
    /// Word expression; overrides --kind and --s
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long)]
    pub n: usize,
    /// Column-major binary instead of CSV (requires --out)
    #[arg(long)]
    pub binary: bool,
}

fn parse_f64(p: &str) -> std::result::Result<f64, String> {
    p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}"))
}

fn parse_usize(p: &str) -> std::result::Result<usize, String> {
    p.trim().parse::<usize>().map_err(|e| format!("'{p}': {e}"))
}

fn parse_u32(p: &str) -> std::result::Result<u32, String> {
    p.trim().parse::<u32>().map_err(|e| format!("'{p}': {e}"))
}

fn parse_rational(p: &str) -> std::result::Result<Rational64, String> {
    let p = p.trim();
    if let Some((n, d)) = p.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|e| format!("'{p}': {e}"))?;
        let d: i64 = d.trim().parse().map_err(|e| format!("'{p}': {e}"))?;
        if d == 0 {
            return Err(format!("'{p}': zero denominator"));
        }
        return Ok(Rational64::new(n, d));
    }
    if let Some((i, f)) = p.split_once('.') {
        let scale = 10i64
            .checked_pow(f.len() as u32)
            .ok_or_else(|| format!("'{p}': too many digits"))?;
        let whole: i64 = if i.is_empty() || i == "-" { 0 } else { i.parse().map_err(|e| format!("'{p}': {e}"))? };
        let frac: i64 = f.parse().map_err(|e| format!("'{p}': {e}"))?;
        let sign = if i.starts_with('-') { -1 } else { 1 };
        return Ok(Rational64::new(whole * scale + sign * frac, scale));
    }
    p.parse::<i64>().map(Rational64::from_integer).map_err(|e| format!("'{p}': {e}"))
}

/// `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(p: &str) -> std::result::Result<Complex64, String> {
    let p = p.trim();
    let bad = |e: std::num::ParseFloatError| format!("'{p}': {e}");
    let Some(body) = p.strip_suffix('i') else {
        return p.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(bad);
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(i, c)| (*c == '+' || *c == '-') && !body[..*i].ends_with(['e', 'E']))
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (body[..i].parse::<f64>().map_err(bad)?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().map_err(bad)?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_triple(p: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<f64> = p
        .split(':')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<std::result::Result<_, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|_| format!("'{p}': expected alpha:beta:gamma"))
}

/// Resolved settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub spec: QuadratureSpec,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            spec: QuadratureSpec::default(),
            format: Format::Json,
            out: None,
            threads: None,
            seed: 17,
        }
    }
}

impl RunConfig {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim().replace('-', "_"), value.trim());
            let bad = |what: &str| Error::Config(format!("line {}: invalid {what} '{value}'", lineno + 1));
            match key.as_str() {
                "max_line" => self.spec.max_line = value.parse().map_err(|_| bad("max_line"))?,
                "y_cutoff" => self.spec.y_cutoff = value.parse().map_err(|_| bad("y_cutoff"))?,
                "nodes_per_unit" => self.spec.nodes_per_unit = value.parse().map_err(|_| bad("nodes_per_unit"))?,
                "tol" | "tolerance" => self.spec.tolerance = value.parse().map_err(|_| bad("tolerance"))?,
                "format" => {
                    self.format = Format::from_str(value, true).map_err(|_| bad("format"))?;
                }
                "out" => self.out = Some(PathBuf::from(value)),
                "threads" => self.threads = Some(value.parse().map_err(|_| bad("threads"))?),
                "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
                other => return Err(Error::Config(format!("line {}: unknown key '{other}'", lineno + 1))),
            }
        }
        Ok(())
    }

    pub fn resolve(global: &GlobalArgs) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(path) = &global.config {
            let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            cfg.apply_config_text(&text)?;
        }
        if let Some(v) = global.max_line {
            cfg.spec.max_line = v;
        }
        if let Some(v) = global.y_cutoff {
            cfg.spec.y_cutoff = v;
        }
        if let Some(v) = global.nodes_per_unit {
            cfg.spec.nodes_per_unit = v;
        }
        if let Some(v) = global.tol {
            cfg.spec.tolerance = v;
        }
        if let Some(v) = global.format {
            cfg.format = v;
        }
        if let Some(v) = &global.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = global.threads {
            cfg.threads = Some(v);
        }
        if let Some(v) = global.seed {
            cfg.seed = v;
        }
        cfg.spec.validate()?;
        if cfg.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(cfg)
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::resolve(&cli.global) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(&cli.command, &cfg)) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(Error::QuadratureBudget { tail, tolerance }) => {
            eprintln!("verification failed: quadrature tail {tail:e} exceeds tolerance {tolerance:e}");
            EXIT_FAIL
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: &Command, cfg: &RunConfig) -> Result<bool> {
    match command {
        Command::VerifyMeasure => cmd_verify_measure(cfg),
        Command::VerifyKernelIp(a) => cmd_verify_kernel_ip(a, cfg),
        Command::VerifySech(a) => cmd_verify_sech(a, cfg),
        Command::VerifyEigen(a) => cmd_verify_eigen(a, cfg),
        Command::VerifyMean(a) => cmd_verify_mean(a, cfg),
        Command::VerifyThreeLines(a) => cmd_verify_three_lines(a, cfg),
        Command::VerifyNormBound(a) => cmd_verify_norm_bound(a, cfg),
        Command::VerifySeparation(a) => cmd_verify_separation(a, cfg),
        Command::Spectrum(a) => cmd_spectrum(a, cfg),
        Command::Joint(a) => cmd_joint(a, cfg),
        Command::Symbol(a) => cmd_symbol(a, cfg),
        Command::DumpMatrix(a) => cmd_dump_matrix(a, cfg),
    }
}

fn with_output<F>(cfg: &RunConfig, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let io = |e: io::Error| Error::Io(e.to_string());
    match &cfg.out {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path).map_err(io)?);
            write(&mut file)?;
            file.flush().map_err(io)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush().map_err(io)
        }
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out).map_err(|e| Error::Io(e.to_string()))
}

#[derive(Debug, Serialize)]
struct VerificationRun<'a> {
    command: &'a str,
    pass: bool,
    spec: QuadratureSpec,
    reports: &'a [VerificationReport],
}

fn emit_reports(command: &str, reports: &[VerificationReport], cfg: &RunConfig) -> Result<bool> {
    let pass = reports.iter().all(|r| r.pass);
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!(
            "FAIL {} {} abs_diff={:e} tail_estimate={:e}",
            r.identity, r.params, r.abs_diff, r.tail_estimate
        );
    }
    with_output(cfg, |out| match cfg.format {
        Format::Json => write_json(
            out,
            &VerificationRun {
                command,
                pass,
                spec: cfg.spec,
                reports,
            },
        ),
        Format::Csv => write_reports_csv(reports, out),
    })?;
    Ok(pass)
}

/// Columns identity, params, closed_re, closed_im, numeric_re, numeric_im, abs_diff, tail_estimate, pass.
pub fn write_reports_csv<W: Write>(reports: &[VerificationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([
        "identity",
        "params",
        "closed_re",
        "closed_im",
        "numeric_re",
        "numeric_im",
        "abs_diff",
        "tail_estimate",
        "pass",
    ])
    .map_err(err)?;
    for r in reports {
        w.serialize((
            &r.identity,
            r.params.to_string(),
            r.closed_form[0],
            r.closed_form[1],
            r.numeric[0],
            r.numeric[1],
            r.abs_diff,
            r.tail_estimate,
            r.pass,
        ))
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Total mass, masses of lines -1..=12 and ∫ c^z dμ for c = 0.1, …, 1.0.
pub fn measure_reports(spec: &QuadratureSpec) -> Result<Vec<VerificationReport>> {
    let quad = MuQuadrature::new(spec)?;
    let tail = quad.tail_estimate();
    let tol = spec.tolerance;
    let one = Complex64::new(1.0, 0.0);
    let mut reports = vec![VerificationReport::new(
        "total_mass",
        json!({}),
        one,
        quad.integrate(|_| one),
        tail,
        tol,
    )];
    for n in -1..=12.min(spec.max_line) {
        let numeric = quad.line_mass(n).unwrap_or(0.0);
        reports.push(VerificationReport::new(
            "line_mass",
            json!({ "n": n }),
            Complex64::new(exact_line_mass(n), 0.0),
            Complex64::new(numeric, 0.0),
            tail,
            tol,
        ));
    }
    for k in 1..=10 {
        let c = k as f64 / 10.0;
        let lc = c.ln();
        let v = quad.integrate(|p| (p.z() * lc).exp());
        reports.push(VerificationReport::new("exponential_mean", json!({ "c": c }), one, v, tail, tol));
    }
    Ok(reports)
}

pub fn cmd_verify_measure(cfg: &RunConfig) -> Result<bool> {
    let reports = measure_reports(&cfg.spec)?;
    emit_reports("verify-measure", &reports, cfg)
}

/// Closed form against quadrature on every grid point, and against the
/// truncated matrix form where re(w) >= 0.
pub fn kernel_ip_reports(args: &KernelIpArgs, spec: &QuadratureSpec) -> Result<Vec<VerificationReport>> {
    let ws: Vec<Complex64> = args.w.clone();
    let mut cells = Vec::new();
    for &s in &args.s {
        for &t in &args.t {
            for &w in &ws {
                cells.push((s, t, w));
            }
        }
    }
    let nested: Vec<Result<Vec<VerificationReport>>> = cells
        .par_iter()
        .map(|&(s, t, w)| {
            let tol = if w.re < 0.0 { args.boundary_tol } else { args.quad_tol };
            let mut out = vec![verify_kernel_ip(s, t, w, &QuadratureSpec { tolerance: tol, ..*spec })?];
            if w.re >= 0.0 {
                let closed = kernel_ip(s, t, w)?;
                let form = kernel_ip_matrix_form(s, t, w, args.n)?;
                out.push(VerificationReport::new(
                    "kernel_matrix_form",
                    json!({ "s": s, "t": t, "w": [w.re, w.im], "N": args.n, "tolerance": args.matrix_tol }),
                    closed,
                    form,
                    0.0,
                    args.matrix_tol,
                ));
            }
            Ok(out)
        })
        .collect();
    let mut reports = Vec::new();
    for r in nested {
        reports.extend(r?);
    }
    Ok(reports)
}

pub fn cmd_verify_kernel_ip(args: &KernelIpArgs, cfg: &RunConfig) -> Result<bool> {
    let reports = kernel_ip_reports(args, &cfg.spec)?;
    emit_reports("verify-kernel-ip", &reports, cfg)
}

fn cmd_verify_sech(args: &SechArgs, cfg: &RunConfig) -> Result<bool> {
    let ln2 = std::f64::consts::LN_2;
    let us = args.u.clone().unwrap_or_else(|| vec![0.0, ln2, 2.0 * ln2]);
    let mut reports = Vec::new();
    for &c in &args.c {
        for &u in &us {
            reports.push(verify_sech_integral(c, u, &cfg.spec)?);
        }
    }
    emit_reports("verify-sech", &reports, cfg)
}

fn cmd_verify_eigen(args: &EigenArgs, cfg: &RunConfig) -> Result<bool> {
    let mut reports = Vec::new();
    for &s in &args.s {
        for &w in &args.w {
            for &n in &args.n {
                reports.push(verify_adjoint_eigen(s, w, n)?);
            }
        }
    }
    emit_reports("verify-eigen", &reports, cfg)
}

fn cmd_verify_mean(args: &MeanArgs, cfg: &RunConfig) -> Result<bool> {
    let spec = QuadratureSpec {
        tolerance: args.id_tol,
        ..cfg.spec
    };
    let mut reports = Vec::new();
    for &a in &args.a {
        for &b in &args.b {
            reports.push(verify_mean_identity(a, b, &spec)?);
        }
    }
    emit_reports("verify-mean", &reports, cfg)
}

fn cmd_verify_three_lines(args: &ThreeLinesArgs, cfg: &RunConfig) -> Result<bool> {
    let spec = QuadratureSpec {
        tolerance: args.slack_tol,
        ..cfg.spec
    };
    let mut reports = Vec::new();
    for &a in &args.a {
        for tr in &args.triples {
            reports.push(verify_three_lines(a, tr[0], tr[1], tr[2], &spec)?);
        }
    }
    emit_reports("verify-three-lines", &reports, cfg)
}

fn cmd_verify_norm_bound(args: &NormBoundArgs, cfg: &RunConfig) -> Result<bool> {
    let one = Complex64::new(1.0, 0.0);
    let mut fs = vec![
        (ExponentialCoefficients::single(1.0)?, 0),
        (ExponentialCoefficients::single(0.5)?, 0),
        (ExponentialCoefficients::new(vec![(0.3, one), (0.7, -one)])?, 1),
    ];
    for (i, f) in random_exponential_sums(cfg.seed, args.random).into_iter().enumerate() {
        fs.push((f, i as i32 % (args.max_m + 1)));
    }
    let reports = fs
        .iter()
        .map(|(f, m)| verify_norm_bound(f, *m, &cfg.spec))
        .collect::<Result<Vec<_>>>()?;
    emit_reports("verify-norm-bound", &reports, cfg)
}

/// Separation checks over the (s, m, y₀) grid for seeded random exponential sums.
pub fn separation_reports(args: &SeparationArgs, spec: &QuadratureSpec, seed: u64) -> Result<Vec<VerificationReport>> {
    let quad = MuQuadrature::new(spec)?;
    quad.check_budget()?;
    let fs = random_exponential_sums(seed, args.samples);
    let mut cells = Vec::new();
    for &s in &args.s {
        for &m in &args.m {
            for &y0 in &args.y0 {
                for f in &fs {
                    cells.push((s, m as u32, y0, f));
                }
            }
        }
    }
    cells
        .par_iter()
        .map(|&(s, m, y0, f)| verify_separation_with(&quad, s, m, y0, f))
        .collect()
}

fn cmd_verify_separation(args: &SeparationArgs, cfg: &RunConfig) -> Result<bool> {
    let reports = separation_reports(args, &cfg.spec, cfg.seed)?;
    emit_reports("verify-separation", &reports, cfg)
}

#[derive(Debug, Serialize)]
struct SpectrumRow {
    #[serde(flatten)]
    row: ResidualRow,
    within_tail_bound: bool,
    warning: bool,
}

#[derive(Debug, Serialize)]
struct SpectrumOutput {
    s: f64,
    radius: f64,
    includes_zero: bool,
    y: f64,
    lambda: [f64; 2],
    pass: bool,
    residuals: Vec<SpectrumRow>,
    zero_direction: Vec<ZeroDirectionRow>,
    exclusion_bounds: Vec<serde_json::Value>,
}

fn cmd_spectrum(args: &SpectrumArgs, cfg: &RunConfig) -> Result<bool> {
    let sp = single_spectrum(args.s)?;
    let rows = residual_sequence(args.s, args.y, &args.ell, args.n)?;
    let zero = zero_direction_sequence(&[args.s], &args.ell, args.n)?;
    let lambda = (Complex64::new(-0.5, args.y) * args.s.ln()).exp();
    let tol = cfg.spec.tolerance;
    let residuals: Vec<SpectrumRow> = rows
        .into_iter()
        .map(|row| SpectrumRow {
            within_tail_bound: row.within_tail_bound(),
            warning: row.tail_mass > tol,
            row,
        })
        .collect();
    let pass = residuals.iter().all(|r| r.within_tail_bound);
    let exclusion_bounds = (0..=4u32)
        .map(|m| Ok(json!({ "m": m, "bound": exclusion_bound(args.s, m)? })))
        .collect::<Result<Vec<_>>>()?;
    let output = SpectrumOutput {
        s: args.s,
        radius: sp.radius,
        includes_zero: sp.includes_zero,
        y: args.y,
        lambda: [lambda.re, lambda.im],
        pass,
        residuals,
        zero_direction: zero,
        exclusion_bounds,
    };
    with_output(cfg, |out| match cfg.format {
        Format::Json => write_json(out, &output),
        Format::Csv => {
            writeln!(out, "# s={} radius={}", output.s, output.radius).map_err(|e| Error::Io(e.to_string()))?;
            let mut w = csv::Writer::from_writer(out);
            let err = |e: csv::Error| Error::Io(e.to_string());
            w.write_record([
                "s", "y", "ell", "N", "numeric", "analytic", "lower", "upper", "tail_mass", "warning",
            ])
            .map_err(err)?;
            for r in &output.residuals {
                let x = &r.row;
                w.serialize((x.s, x.y, x.ell, x.n, x.numeric, x.analytic, x.lower, x.upper, x.tail_mass, r.warning))
                    .map_err(err)?;
            }
            w.flush().map_err(|e| Error::Io(e.to_string()))
        }
    })?;
    Ok(pass)
}

#[derive(Debug, Serialize)]
struct MembershipRow {
    theta: Vec<f64>,
    member: bool,
}

#[derive(Debug, Serialize)]
struct JointOutput {
    q: Vec<String>,
    beta: f64,
    shape: JointSpectrumShape,
    samples: Vec<serde_json::Value>,
    membership: Vec<MembershipRow>,
}

fn read_points(path: &Path, arity: usize) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Config(e.to_string()))?;
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        let Ok(row) = parsed else {
            if i == 0 {
                continue;
            }
            return Err(Error::Config(format!("line {}: expected {arity} numbers", i + 1)));
        };
        if row.len() != arity {
            return Err(Error::Arity {
                expected: arity,
                found: row.len(),
            });
        }
        out.push(row);
    }
    Ok(out)
}

fn cmd_joint(args: &JointArgs, cfg: &RunConfig) -> Result<bool> {
    let q: Vec<Rational64> = args.q.clone();
    let tuple = ExponentTuple::new(args.beta, q)?;
    let shape = classify_joint_spectrum(&tuple);
    let period = shape.period.unwrap_or(2.0 * std::f64::consts::PI);
    let samples = sample_curve(&tuple, 0.0, period, args.samples.max(2))?;
    let points = match &args.points {
        Some(p) => read_points(p, tuple.arity())?,
        None => Vec::new(),
    };
    let membership = points
        .into_iter()
        .map(|theta| {
            let member = joint_membership(&tuple, &theta, cfg.spec.tolerance)?;
            Ok(MembershipRow { theta, member })
        })
        .collect::<Result<Vec<_>>>()?;
    let output = JointOutput {
        q: tuple.q().iter().map(|x| x.to_string()).collect(),
        beta: args.beta,
        shape,
        samples: samples
            .iter()
            .map(|s| json!({ "y": s.y, "point": s.point.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>() }))
            .collect(),
        membership,
    };
    with_output(cfg, |out| match cfg.format {
        Format::Json => write_json(out, &output),
        Format::Csv if args.points.is_some() => {
            let mut w = csv::Writer::from_writer(out);
            let err = |e: csv::Error| Error::Io(e.to_string());
            let mut header: Vec<String> = (1..=tuple.arity()).map(|j| format!("theta_{j}")).collect();
            header.push("member".into());
            w.write_record(&header).map_err(err)?;
            for row in &output.membership {
                let mut rec: Vec<String> = row.theta.iter().map(|x| x.to_string()).collect();
                rec.push(row.member.to_string());
                w.write_record(&rec).map_err(err)?;
            }
            w.flush().map_err(|e| Error::Io(e.to_string()))
        }
        Format::Csv => write_curve_csv(&samples, out),
    })?;
    Ok(true)
}

#[derive(Debug, Serialize)]
struct SymbolOutput {
    word: String,
    symbol: Vec<crate::apsymbol::FrequencyTerm>,
    point: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    inclusion: Option<InclusionReport>,
}

fn cmd_symbol(args: &SymbolArgs, cfg: &RunConfig) -> Result<bool> {
    let combo = Combination::parse(&args.expr)?;
    let sym = symbol_of_combination(&combo)?.to_json();
    let inclusion = if args.inclusion {
        Some(spectrum_inclusion_report(&combo, &args.n, &args.y, &args.ell)?)
    } else {
        None
    };
    let output = SymbolOutput {
        word: combo.to_string(),
        symbol: sym.symbol,
        point: sym.point,
        inclusion,
    };
    with_output(cfg, |out| match cfg.format {
        Format::Json => write_json(out, &output),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let err = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(["freq", "re", "im"]).map_err(err)?;
            for t in &output.symbol {
                w.serialize((t.freq, t.re, t.im)).map_err(err)?;
            }
            w.flush().map_err(|e| Error::Io(e.to_string()))
        }
    })?;
    Ok(true)
}

fn cmd_dump_matrix(args: &DumpArgs, cfg: &RunConfig) -> Result<bool> {
    let op = match (&args.word, args.s) {
        (Some(text), _) => {
            let combo = Combination::parse(text)?;
            match combo.terms.as_slice() {
                [(c, w)] if *c == Complex64::new(1.0, 0.0) && combo.c0 == Complex64::new(0.0, 0.0) => {
                    word_matrix(w, args.n)?
                }
                _ => return Err(Error::Config("--word expects a single word".into())),
            }
        }
        (None, Some(s)) => match args.kind {
            MatrixKind::Composition => composition_matrix(s, args.n)?,
            MatrixKind::Toeplitz => toeplitz_matrix(s, args.n)?,
        },
        (None, None) => return Err(Error::Config("either --s or --word is required".into())),
    };
    if args.binary {
        let path = cfg
            .out
            .as_ref()
            .ok_or_else(|| Error::Config("--binary requires --out".into()))?;
        let file = fs::File::create(path).map_err(|e| Error::Io(e.to_string()))?;
        write_matrix_binary(&op, io::BufWriter::new(file))?;
        return Ok(true);
    }
    with_output(cfg, |out| write_matrix_csv(&op, out))?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("1+1i").unwrap(), Complex64::new(1.0, 1.0));
        assert_eq!(parse_complex("-0.3+2i").unwrap(), Complex64::new(-0.3, 2.0));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("1-i").unwrap(), Complex64::new(1.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e-1i").unwrap(), Complex64::new(1e-3, 0.2));
        assert!(parse_complex("1+x").is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/2").unwrap(), Rational64::new(3, 2));
        assert_eq!(parse_rational("1.5").unwrap(), Rational64::new(3, 2));
        assert_eq!(parse_rational("2").unwrap(), Rational64::from_integer(2));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn config_text_and_flag_precedence() {
        let mut cfg = RunConfig::default();
        cfg.apply_config_text("# comment\nmax_line = 30\ny-cutoff=20\ntol=1e-6\nformat = csv\nseed=5\n")
            .unwrap();
        assert_eq!(cfg.spec.max_line, 30);
        assert_eq!(cfg.spec.y_cutoff, 20.0);
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.seed, 5);
        assert!(matches!(cfg.apply_config_text("bogus=1"), Err(Error::Config(_))));
        assert!(matches!(cfg.apply_config_text("max_line"), Err(Error::Config(_))));

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "max_line = 30\nnodes_per_unit = 4\n").unwrap();
        let global = GlobalArgs {
            config: Some(path),
            max_line: Some(12),
            ..GlobalArgs::default()
        };
        let cfg = RunConfig::resolve(&global).unwrap();
        assert_eq!(cfg.spec.max_line, 12);
        assert_eq!(cfg.spec.nodes_per_unit, 4);
        let bad = GlobalArgs {
            y_cutoff: Some(-1.0),
            ..GlobalArgs::default()
        };
        assert!(RunConfig::resolve(&bad).is_err());
    }

    #[test]
    fn starved_measure_run_fails() {
        let spec = QuadratureSpec {
            y_cutoff: 2.0,
            ..QuadratureSpec::default()
        };
        let reports = measure_reports(&spec).unwrap();
        assert!(reports.iter().any(|r| !r.pass));
        assert!(reports[0].tail_estimate > 1e-4);
    }

    #[test]
    fn usage_errors_are_rejected_before_dispatch() {
        assert!(Cli::try_parse_from(["compsemi", "no-such-command"]).is_err());
        assert!(Cli::try_parse_from(["compsemi", "verify-kernel-ip", "--s", "abc"]).is_err());
        assert!(Cli::try_parse_from(["compsemi", "verify-kernel-ip", "--w=-0.3+2i,1"]).is_ok());
        assert!(matches!(Combination::parse("C(0.5"), Err(Error::Parse { .. })));
    }
}
