//! Command-line front end behind the `asymrate` binary.
//!
//! Options may also come from a flat `key=value` file passed with
//! `--config`; a flag given on the command line wins over the file. Every
//! output embeds the effective [`RunConfig`], including the seed.

pub mod verify;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::asymptotics::{
    cost_lower_bound, dist_upper_bound, estimate_rates, Rate, RateReport, StateFamily,
};
use crate::error::{Error, Result};
use crate::monotone::MonotoneFunction;
use crate::operator::{
    read_matrix_json, trace_distance, variance, DensityMatrix, HermitianOperator, MatrixJson,
};
use crate::reference::{coherence_bit, qutrit_hamiltonian, qutrit_mixture, qutrit_psi1};
use crate::sequences::{
    default_lambda_cap, energy_distribution, f_max, f_min, normalize_period, read_sequence_csv, EnergyDistribution,
    MaxFisher,
};
use crate::skew::{qfi, skew_info};
use crate::smoothing::{smooth_skew_info, SmoothingOptions};
use verify::{run_suite, VerifyOptions};

/// Exit code for a failed invariant or assertion.
pub const EXIT_INVARIANT: i32 = 1;
/// Exit code for unusable input.
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "asymrate", version, about = "Skew informations, smoothed rates and Fisher information bounds")]
pub struct Cli {
    /// Flat key=value file supplying defaults for any long flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Metric adjusted skew information I^f(ρ, H).
    Skew(SkewArgs),
    /// ε-smoothed skew information over the trace-distance ball.
    Smooth(SmoothArgs),
    /// Finite-grid estimates of the smooth rates and the bounds they imply.
    Rates(RatesArgs),
    /// Max and min quantum Fisher information of an energy distribution.
    Maxmin(MaxminArgs),
    /// SLD and WYD upper bounds on distillable coherence for the qutrit mixture.
    Figure1(Figure1Args),
    /// Variance, distance and smoothed values along the non-i.i.d. family.
    ExampleNoniid(NoniidArgs),
    /// Runs invariant suites and reports each measured slack.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct StateInput {
    /// Density matrix as JSON {dim, re, im}.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Hamiltonian as JSON {dim, re, im}.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Builtin pair: coherence-bit, qutrit-psi1 or qutrit-mixture:<q>.
    #[arg(long, conflicts_with_all = ["state", "hamiltonian"])]
    pub preset: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct SkewArgs {
    #[command(flatten)]
    pub input: StateInput,
    /// sld, rld or wyd:p=<p>.
    #[arg(long, default_value = "sld")]
    pub f: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SmoothArgs {
    #[command(flatten)]
    pub input: StateInput,
    #[arg(long, default_value = "sld")]
    pub f: String,
    /// Comma-separated smoothing radii.
    #[arg(long, default_value = "0.1")]
    pub eps: String,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Writes the minimizers as a JSON list of {dim, re, im}.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct RatesArgs {
    /// iid:phi_coh, iid:qutrit-psi1, iid (with --state/--hamiltonian), noniid, or symmetric.
    #[arg(long, default_value = "iid:phi_coh")]
    pub family: String,
    #[command(flatten)]
    pub input: StateInput,
    /// Copies per index for i.i.d. families: 3, 3/4 or 0.75.
    #[arg(long = "R", default_value = "1")]
    pub rate: String,
    #[arg(long, default_value = "sld")]
    pub f: String,
    /// Index grid: a..b (inclusive) or a comma list; defaults to 2..m_cap.
    #[arg(long)]
    pub m: Option<String>,
    /// Strictly decreasing smoothing radii.
    #[arg(long, default_value = "0.2,0.1,0.05")]
    pub eps: String,
    /// Mixes every member with its dephased version at this weight first.
    #[arg(long)]
    pub dephase: Option<f64>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// JSON report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV value matrix.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct MaxminArgs {
    /// Energy distribution as CSV (n, value).
    #[arg(long, conflicts_with_all = ["state", "hamiltonian", "preset"])]
    pub dist: Option<PathBuf>,
    #[command(flatten)]
    pub input: StateInput,
    /// Largest λ tried for F_max; defaults to 64·max(Var, 1).
    #[arg(long)]
    pub lambda_cap: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct Figure1Args {
    /// WYD parameter p in (0, 1).
    #[arg(long)]
    pub p: f64,
    /// Mixing weights in (0, 1): a comma list or lo..hi:step.
    #[arg(long, default_value = "0.01..0.99:0.01")]
    pub q: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct NoniidArgs {
    /// Index list: a..b or a comma list.
    #[arg(long, default_value = "1..7")]
    pub m: String,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value = "sld")]
    pub f: String,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// skew, smooth, channels, sequences, rates or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Adds a non-covariant channel to the covariance check.
    #[arg(long)]
    pub inject_noncovariant: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Effective configuration recorded in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    pub version: String,
    pub options: serde_json::Value,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    result: T,
}

/// Parses a flat `key=value` file; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("config line {}: expected key=value", i + 1)))?;
        out.insert(k.trim().trim_start_matches("--").to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Appends config entries whose flag is absent from `args`. A value of
/// `true` becomes a bare switch and `false` is dropped.
pub fn merge_config(mut args: Vec<String>, config: &BTreeMap<String, String>) -> Vec<String> {
    for (k, v) in config {
        if k == "config" {
            continue;
        }
        let flag = format!("--{k}");
        let present = args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if present || v == "false" {
            continue;
        }
        args.push(flag);
        if v != "true" {
            args.push(v.clone());
        }
    }
    args
}

fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Parses arguments (with config defaults), runs the command and returns the exit code.
pub fn main_with_args(args: Vec<String>) -> i32 {
    let args = match config_path(&args) {
        None => args,
        Some(p) => match fs::read_to_string(&p).map_err(Error::from).and_then(|t| parse_config(&t)) {
            Ok(cfg) => merge_config(args, &cfg),
            Err(e) => {
                eprintln!("error: config {}: {e}", p.display());
                return EXIT_BAD_INPUT;
            }
        },
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_BAD_INPUT
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Skew(_) => "skew",
        Command::Smooth(_) => "smooth",
        Command::Rates(_) => "rates",
        Command::Maxmin(_) => "maxmin",
        Command::Figure1(_) => "figure1",
        Command::ExampleNoniid(_) => "example-noniid",
        Command::Verify(_) => "verify",
    }
}

/// Runs a parsed command; `Err` means bad input.
pub fn run(cli: &Cli) -> Result<i32> {
    let options = serde_json::to_value(&cli.command)?;
    let options = options.as_object().and_then(|o| o.values().next().cloned()).unwrap_or(options);
    let config = RunConfig {
        command: command_name(&cli.command).into(),
        seed: cli.seed,
        version: env!("CARGO_PKG_VERSION").into(),
        options,
    };
    match &cli.command {
        Command::Skew(a) => cmd_skew(a, &config),
        Command::Smooth(a) => cmd_smooth(a, &config, cli.seed),
        Command::Rates(a) => cmd_rates(a, &config, cli.seed),
        Command::Maxmin(a) => cmd_maxmin(a, &config),
        Command::Figure1(a) => cmd_figure1(a, &config),
        Command::ExampleNoniid(a) => cmd_example_noniid(a, &config, cli.seed),
        Command::Verify(a) => cmd_verify(a, &config, cli.seed),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                s.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, config: &RunConfig, result: T) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(&Envelope { config, result })?)
}

/// CSV text whose first line is `# config: <json>`.
fn csv_with_config(config: &RunConfig, header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(format!("# config: {}\n{body}", serde_json::to_string(config)?))
}

fn read_json_file(p: &Path) -> Result<crate::operator::CMatrix> {
    read_matrix_json(fs::File::open(p)?)
}

fn load_pair(input: &StateInput) -> Result<(DensityMatrix, HermitianOperator)> {
    if let Some(preset) = &input.preset {
        return preset_pair(preset);
    }
    match (&input.state, &input.hamiltonian) {
        (Some(s), Some(h)) => Ok((DensityMatrix::new(read_json_file(s)?)?, HermitianOperator::new(read_json_file(h)?)?)),
        _ => Err(Error::InvalidParameter("need --state and --hamiltonian, or --preset".into())),
    }
}

fn preset_pair(name: &str) -> Result<(DensityMatrix, HermitianOperator)> {
    match name {
        "coherence-bit" | "phi_coh" => Ok(coherence_bit()),
        "qutrit-psi1" => Ok((DensityMatrix::pure(&qutrit_psi1())?, qutrit_hamiltonian())),
        _ => {
            let q = name
                .strip_prefix("qutrit-mixture:")
                .ok_or_else(|| Error::InvalidParameter(format!("unknown preset '{name}'")))?;
            let q: f64 = q.parse().map_err(|_| Error::InvalidParameter(format!("bad q in '{name}'")))?;
            Ok((qutrit_mixture(q)?, qutrit_hamiltonian()))
        }
    }
}

/// Parses `a,b,c` or `lo..hi:step` (inclusive, within rounding).
pub fn parse_real_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("cannot parse grid '{s}'"));
    if let Some((range, step)) = s.split_once(':') {
        let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
        let (lo, hi, step): (f64, f64, f64) = (
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
            step.trim().parse().map_err(|_| bad())?,
        );
        if !(step > 0.0) || hi < lo {
            return Err(bad());
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|k| lo + k as f64 * step).collect());
    }
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    if v.is_empty() {
        return Err(bad());
    }
    Ok(v)
}

/// Parses `a..b` (inclusive) or `a,b,c`.
pub fn parse_int_grid(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidParameter(format!("cannot parse index list '{s}'"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn smoothing_options(o: &OptimizerArgs, seed: u64) -> SmoothingOptions {
    SmoothingOptions {
        restarts: o.restarts,
        max_iterations: o.max_iter,
        tolerance: o.tol,
        seed,
        ..Default::default()
    }
}

#[derive(Serialize)]
struct SkewOutput {
    f: String,
    value: f64,
    qfi: f64,
    variance: f64,
    eigenvalue_floor_used: f64,
}

fn cmd_skew(a: &SkewArgs, config: &RunConfig) -> Result<i32> {
    let (rho, h) = load_pair(&a.input)?;
    let f: MonotoneFunction = a.f.parse()?;
    let r = skew_info(&rho, &h, &f)?;
    emit_json(
        &a.out,
        config,
        SkewOutput {
            f: f.tag().to_string(),
            value: r.value,
            qfi: qfi(&rho, &h)?,
            variance: variance(&rho, &h)?,
            eigenvalue_floor_used: r.eigenvalue_floor_used,
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct SmoothRow {
    epsilon: f64,
    value: f64,
    unsmoothed: f64,
    witness_distance: f64,
    iterations: usize,
    converged: bool,
}

fn cmd_smooth(a: &SmoothArgs, config: &RunConfig, seed: u64) -> Result<i32> {
    let (rho, h) = load_pair(&a.input)?;
    let f: MonotoneFunction = a.f.parse()?;
    let opts = smoothing_options(&a.optimizer, seed);
    let base = skew_info(&rho, &h, &f)?.value;
    let mut rows = Vec::new();
    let mut witnesses = Vec::new();
    for eps in parse_real_grid(&a.eps)? {
        let r = smooth_skew_info(&rho, &h, &f, eps, &opts)?;
        rows.push(SmoothRow {
            epsilon: eps,
            value: r.value,
            unsmoothed: base,
            witness_distance: trace_distance(&rho, &r.witness)?,
            iterations: r.iterations,
            converged: r.converged,
        });
        witnesses.push(MatrixJson::from_matrix(r.witness.matrix()));
    }
    if let Some(p) = &a.witness {
        fs::write(p, serde_json::to_string_pretty(&witnesses)?)?;
    }
    emit_json(&a.out, config, rows)?;
    Ok(0)
}

fn build_family(a: &RatesArgs) -> Result<StateFamily> {
    let rate: Rate = a.rate.parse()?;
    let fam = match a.family.as_str() {
        "noniid" => StateFamily::noniid_example(),
        "iid" => {
            let (rho, h) = load_pair(&a.input)?;
            StateFamily::iid(&rho, &h, rate)?
        }
        "symmetric" => {
            let (rho, h) = load_pair(&a.input)?;
            StateFamily::symmetric(&rho, &h)?
        }
        other => {
            let preset = other
                .strip_prefix("iid:")
                .ok_or_else(|| Error::InvalidParameter(format!("unknown family '{other}'")))?;
            let (rho, h) = preset_pair(preset)?;
            StateFamily::iid(&rho, &h, rate)?
        }
    };
    match a.dephase {
        Some(w) => StateFamily::partially_dephased(fam, w),
        None => Ok(fam),
    }
}

#[derive(Serialize)]
struct RatesOutput<'a> {
    report: &'a RateReport,
    cost_lower_bound: f64,
    dist_upper_bound: f64,
}

fn cmd_rates(a: &RatesArgs, config: &RunConfig, seed: u64) -> Result<i32> {
    let family = build_family(a)?;
    let f: MonotoneFunction = a.f.parse()?;
    let m_grid = match &a.m {
        Some(s) => parse_int_grid(s)?,
        None => (2..=family.m_cap).collect(),
    };
    let eps_grid = parse_real_grid(&a.eps)?;
    let report = estimate_rates(&family, &f, &m_grid, &eps_grid, &smoothing_options(&a.optimizer, seed))?;
    if let Some(p) = &a.csv {
        let mut header = vec!["m".to_string()];
        header.extend(eps_grid.iter().map(|e| format!("eps={e}")));
        let rows: Vec<Vec<String>> = m_grid
            .iter()
            .zip(&report.values)
            .map(|(m, row)| std::iter::once(m.to_string()).chain(row.iter().map(|v| v.to_string())).collect())
            .collect();
        fs::write(p, csv_with_config(config, &header, &rows)?)?;
    }
    emit_json(
        &a.out,
        config,
        RatesOutput { report: &report, cost_lower_bound: cost_lower_bound(&report), dist_upper_bound: dist_upper_bound(&report) },
    )?;
    Ok(if report.sup_estimate + 1e-12 >= report.inf_estimate { 0 } else { EXIT_INVARIANT })
}

#[derive(Serialize)]
struct MaxminOutput {
    mean: f64,
    variance: f64,
    lambda_cap: f64,
    f_max: MaxFisher,
    f_min: f64,
    /// SLD Fisher information of the input state, when one was given.
    qfi: Option<f64>,
}

fn cmd_maxmin(a: &MaxminArgs, config: &RunConfig) -> Result<i32> {
    let (p, fisher) = match &a.dist {
        Some(path) => (EnergyDistribution::new(read_sequence_csv(fs::File::open(path)?)?)?, None),
        None => {
            let (rho, h) = load_pair(&a.input)?;
            if !rho.is_pure(1e-8) {
                return Err(Error::InvalidParameter("maxmin needs a pure state".into()));
            }
            let (hn, _) = normalize_period(&rho, &h)?;
            let f = qfi(&rho, &hn)?;
            (energy_distribution(&rho, &hn)?, Some(f))
        }
    };
    let cap = a.lambda_cap.unwrap_or_else(|| default_lambda_cap(&p));
    let out = MaxminOutput {
        mean: p.mean(),
        variance: p.variance(),
        lambda_cap: cap,
        f_max: f_max(&p, cap)?,
        f_min: f_min(&p, cap)?,
        qfi: fisher,
    };
    emit_json(&a.out, config, out)?;
    Ok(0)
}

/// Rows `(q, 4I^SLD, 4I^{WYD,p}, (9−7q)/4)` for the qutrit mixture.
pub fn figure1_rows(q_grid: &[f64], p: f64) -> Result<Vec<[f64; 4]>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in (0, 1)")));
    }
    let h = qutrit_hamiltonian();
    let sld = MonotoneFunction::sld();
    let wyd = MonotoneFunction::wyd(p)?;
    q_grid
        .iter()
        .map(|&q| {
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::InvalidParameter(format!("q = {q} must lie in (0, 1)")));
            }
            let rho = qutrit_mixture(q)?;
            Ok([q, 4.0 * skew_info(&rho, &h, &sld)?.value, 4.0 * skew_info(&rho, &h, &wyd)?.value, (9.0 - 7.0 * q) / 4.0])
        })
        .collect()
}

fn cmd_figure1(a: &Figure1Args, config: &RunConfig) -> Result<i32> {
    let rows = figure1_rows(&parse_real_grid(&a.q)?, a.p)?;
    let header: Vec<String> = ["q", "sld_bound", "wyd_bound", "wyd_limit_bound"].map(String::from).to_vec();
    let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
    emit(&a.out, &csv_with_config(config, &header, &text)?)?;
    let violated = rows.iter().filter(|r| r[2] > r[1] + 1e-12).count();
    if violated > 0 {
        eprintln!("WYD bound exceeds SLD bound at {violated} grid points");
        return Ok(EXIT_INVARIANT);
    }
    Ok(0)
}

/// Largest index accepted by `example-noniid`: the reduced member has dimension `2m + 1`.
pub const NONIID_MAX_M: usize = 2047;

fn cmd_example_noniid(a: &NoniidArgs, config: &RunConfig, seed: u64) -> Result<i32> {
    let ms = parse_int_grid(&a.m)?;
    if let Some(&m) = ms.iter().find(|&&m| m == 0 || m > NONIID_MAX_M) {
        return Err(Error::DimensionCap { dim: (2 * m + 1) as u128, cap: 2 * NONIID_MAX_M + 1 });
    }
    let f: MonotoneFunction = a.f.parse()?;
    let fam = StateFamily::noniid_example();
    let opts = smoothing_options(&a.optimizer, seed);
    let header: Vec<String> = [
        "m",
        "variance",
        "formula",
        "abs_diff",
        "trace_distance",
        "unsmoothed",
        "smoothed",
        "smoothed_over_quarter_m",
    ]
    .map(String::from)
    .to_vec();
    let mut rows = Vec::new();
    for m in ms {
        let mem = fam.member(m)?;
        let var = variance(&mem.state, &mem.hamiltonian)?;
        let formula = StateFamily::noniid_variance_formula(m);
        let d = trace_distance(&mem.state, &StateFamily::noniid_reference(m)?)?;
        let raw = skew_info(&mem.state, &mem.hamiltonian, &f)?.value;
        // smoothing is only run where the full many-copy space fits the dimension cap
        let (smoothed, ratio) = if m <= fam.m_cap {
            let s = smooth_skew_info(&mem.state, &mem.hamiltonian, &f, a.eps, &opts)?.value;
            (s.to_string(), (s / (m as f64 / 4.0)).to_string())
        } else {
            (String::new(), String::new())
        };
        rows.push(vec![
            m.to_string(),
            var.to_string(),
            formula.to_string(),
            (var - formula).abs().to_string(),
            d.to_string(),
            raw.to_string(),
            smoothed,
            ratio,
        ]);
    }
    emit(&a.out, &csv_with_config(config, &header, &rows)?)?;
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, config: &RunConfig, seed: u64) -> Result<i32> {
    let report = run_suite(&a.suite, VerifyOptions { seed, inject_noncovariant: a.inject_noncovariant })?;
    for inv in report.invariants.iter().filter(|i| !i.passed) {
        eprintln!("FAIL {}/{}: measured {:e} > tolerance {:e}", inv.suite, inv.name, inv.measured, inv.tolerance);
    }
    emit_json(&a.out, config, &report)?;
    Ok(if report.passed { 0 } else { EXIT_INVARIANT })
}
