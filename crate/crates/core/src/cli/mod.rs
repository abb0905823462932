//! Command-line front end shared by the `ppassoc` binary.
//!
//! Every subcommand writes JSON to stdout or `--out`. Exit codes: 0 on
//! success, 2 on bad input, 3 when `--strict` is set and the data are
//! degenerate.

mod config;
mod input;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub use config::KeyValueConfig;
pub use input::{
    group_records, parse_column, parse_events, parse_intensity, parse_pairs, read_event_records, EventRecord,
    EventStream, EventTable, Jitter,
};

use crate::diagnostics::{diagnose, write_ecdf_csv, KsConfig};
use crate::error::Error;
use crate::glrt::{run_test_anchored, GlrOutcome, TestOptions};
use crate::measure::{transform, Mode, NullIntensity, ObservationWindow, PointPattern};
use crate::multiplicity::{screen, triggering_report, PairInput};
use crate::simulate::{
    calibration_experiment, consistency_experiment, figure1_experiment, sample_alternative, AlternativeSpec,
    CalibrationConfig, ConsistencyConfig, RngSeed,
};

/// Exit code for input errors.
pub const EXIT_INPUT: i32 = 2;
/// Exit code for degenerate data under `--strict`.
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}, line {line}: {message}", path.display())]
    Input { path: PathBuf, line: u64, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ppassoc", version, about = "Exact likelihood-ratio tests for triggering and correlation between point processes")]
pub struct Cli {
    /// Worker threads for screening and simulation (0 = all cores).
    #[arg(long, global = true, env = "PPASSOC_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test whether events of A trigger events of B.
    Test(PairArgs),
    /// Test whether events of B cluster around events of A in either direction.
    Correlate(PairArgs),
    /// u-values, their ECDF, Fisher's combination and weighted K-S statistics.
    Diagnose(DiagnoseArgs),
    /// Test many stream pairs and control the false discovery rate.
    Screen(ScreenArgs),
    /// Draw B under the two-level alternative and write it as CSV.
    Simulate(SimulateArgs),
    /// Check that null p-values are uniform.
    Calibrate(CalibrateArgs),
    /// Compare the likelihood ratio with the weighted K-S statistic.
    Figure1(Figure1Args),
    /// Track the range estimate as rates grow.
    Consistency(ConsistencyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    /// Null intensity CSV (`breakpoint,density`).
    #[arg(long, conflicts_with_all = ["window_start", "window_end"])]
    pub intensity: Option<PathBuf>,
    /// Window start for the uniform intensity; defaults to the earliest event.
    #[arg(long)]
    pub window_start: Option<f64>,
    /// Window end for the uniform intensity.
    #[arg(long)]
    pub window_end: Option<f64>,
}

impl WindowArgs {
    fn resolve(&self, earliest: Option<f64>) -> Result<NullIntensity, CliError> {
        if let Some(path) = &self.intensity {
            return parse_intensity(path);
        }
        let end = self
            .window_end
            .ok_or_else(|| CliError::Usage("give --intensity or --window-end".into()))?;
        let start = self
            .window_start
            .or(earliest)
            .ok_or_else(|| CliError::Usage("no events to place the window start; give --window-start".into()))?;
        Ok(NullIntensity::uniform(ObservationWindow::new(start, end)?))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 3 when the data are degenerate.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct JitterArgs {
    /// Break duplicate times by moving tied events up to this amount.
    #[arg(long)]
    pub jitter: Option<f64>,
    /// Seed for the jitter.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl JitterArgs {
    fn get(&self) -> Option<Jitter> {
        self.jitter.map(|eps| Jitter { eps, seed: self.seed })
    }
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// Events of the source process A.
    #[arg(long)]
    pub a: PathBuf,
    /// Events of the response process B.
    #[arg(long)]
    pub b: PathBuf,
    /// Stream of A to use when the file holds several.
    #[arg(long)]
    pub a_stream: Option<String>,
    #[arg(long)]
    pub b_stream: Option<String>,
    /// Upper limit on the range tau.
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Also write the triggered-event report (JSON) here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub jitter: JitterArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnoseArgs {
    #[arg(long, requires = "b", required_unless_present = "u")]
    pub a: Option<PathBuf>,
    #[arg(long, requires = "a")]
    pub b: Option<PathBuf>,
    /// Precomputed u-values (CSV column `u`) instead of A and B.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    pub u: Option<PathBuf>,
    /// Use the correlation transform.
    #[arg(long)]
    pub correlation: bool,
    #[arg(long, default_value_t = 0.01)]
    pub gamma1: f64,
    #[arg(long, default_value_t = 0.99)]
    pub gamma2: f64,
    /// Write the ECDF table (`u,ecdf`) here.
    #[arg(long)]
    pub ecdf: Option<PathBuf>,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub jitter: JitterArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScreenArgs {
    /// Events of all streams (`time,stream[,payload]`).
    #[arg(long)]
    pub events: PathBuf,
    /// Pairs to test (`source,target`).
    #[arg(long)]
    pub pairs: PathBuf,
    /// FDR level.
    #[arg(long, default_value_t = 0.1)]
    pub q: f64,
    #[arg(long)]
    pub correlation: bool,
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Write the tier matrix CSV here.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub jitter: JitterArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Source events.
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub tau: f64,
    /// Rate multiplier inside the region.
    #[arg(long)]
    pub lambda1: f64,
    /// Rate multiplier outside the region.
    #[arg(long)]
    pub lambda2: f64,
    /// Draw exactly this many events instead of a Poisson number.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub correlation: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Write the events CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CalibrateArgs {
    /// Key-value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the p-values (`p`) here.
    #[arg(long)]
    pub p_values: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Figure1Args {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub gamma1: Option<f64>,
    #[arg(long)]
    pub gamma2: Option<f64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write both ECDFs (`statistic,value,ecdf`) here.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ConsistencyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Ratio lambda1 / lambda2.
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Comma-separated lambda2 values.
    #[arg(long, value_delimiter = ',')]
    pub ladder: Option<Vec<f64>>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Source events; defaults to five evenly spaced events on [0, 1).
    #[arg(long)]
    pub sources: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the table (CSV) here.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Summary printed by `figure1`; the full samples go to `--table`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure1Summary {
    pub n: usize,
    pub ks: KsConfig,
    pub replicates: usize,
    pub sup_distance: f64,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors are printed to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command on a pool of `--threads` workers.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(&cli.command))
}

fn dispatch(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Test(args) => pair_command(args, Mode::Triggering),
        Command::Correlate(args) => pair_command(args, Mode::Correlation),
        Command::Diagnose(args) => diagnose_command(args),
        Command::Screen(args) => screen_command(args),
        Command::Simulate(args) => simulate_command(args),
        Command::Calibrate(args) => calibrate_command(args),
        Command::Figure1(args) => figure1_command(args),
        Command::Consistency(args) => consistency_command(args),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

fn emit_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize");
    s.push('\n');
    s
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    emit_text(out, &to_json(value))
}

fn check_degeneracy(strict: bool, what: &str, outcomes: &[&GlrOutcome]) -> Result<(), CliError> {
    let flagged: Vec<_> = outcomes.iter().filter(|o| o.degeneracy.any()).collect();
    if flagged.is_empty() {
        return Ok(());
    }
    let msg = format!("{what}: {} result(s) with degeneracy flags", flagged.len());
    if strict {
        Err(CliError::Degenerate(msg))
    } else {
        eprintln!("warning: {msg}");
        Ok(())
    }
}

fn earliest(patterns: &[&PointPattern]) -> Option<f64> {
    patterns.iter().filter_map(|p| p.first()).min_by(f64::total_cmp)
}

fn pair_command(args: &PairArgs, mode: Mode) -> Result<(), CliError> {
    let jitter = args.jitter.get();
    let a_table = parse_events(&args.a, jitter)?;
    let b_table = parse_events(&args.b, jitter)?;
    let a = a_table.select(args.a_stream.as_deref(), &args.a)?;
    let b = b_table.select(args.b_stream.as_deref(), &args.b)?;
    let intensity = args.window.resolve(earliest(&[&a.pattern, &b.pattern]))?;
    let options = TestOptions { mode, tau_max: args.tau_max };
    let outcome = run_test_anchored(&a.pattern, &b.pattern, &intensity, &options)?;
    emit_json(args.output.out.as_deref(), &outcome)?;
    if let Some(path) = &args.report {
        let report = triggering_report(&a.pattern, &b.pattern, &b.payloads, &outcome)?;
        write_file(path, &to_json(&report))?;
    }
    check_degeneracy(args.output.strict, "test", &[&outcome])
}

fn diagnose_command(args: &DiagnoseArgs) -> Result<(), CliError> {
    let ks = KsConfig::new(args.gamma1, args.gamma2)?;
    let u = match (&args.u, &args.a, &args.b) {
        (Some(path), _, _) => {
            let mut u = parse_column(path, "u")?;
            u.sort_by(f64::total_cmp);
            u
        }
        (None, Some(a_path), Some(b_path)) => {
            let jitter = args.jitter.get();
            let a_table = parse_events(a_path, jitter)?;
            let b_table = parse_events(b_path, jitter)?;
            let a = a_table.select(None, a_path)?;
            let b = b_table.select(None, b_path)?;
            let intensity = args.window.resolve(earliest(&[&a.pattern, &b.pattern]))?;
            let mode = if args.correlation { Mode::Correlation } else { Mode::Triggering };
            let sample = match mode {
                Mode::Triggering => {
                    let anchored = crate::measure::anchor_to_source(&a.pattern, &b.pattern, &intensity)?;
                    transform(&a.pattern, &anchored.b, &anchored.intensity, mode, None)?
                }
                Mode::Correlation => transform(&a.pattern, &b.pattern, &intensity, mode, None)?,
            };
            sample.u
        }
        _ => return Err(CliError::Usage("give --u or both --a and --b".into())),
    };
    let report = diagnose(&u, &ks)?;
    if let Some(path) = &args.ecdf {
        let file = std::fs::File::create(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
        write_ecdf_csv(&report.ecdf, std::io::BufWriter::new(file))
            .map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    emit_json(args.out.as_deref(), &report)
}

fn screen_command(args: &ScreenArgs) -> Result<(), CliError> {
    let table = parse_events(&args.events, args.jitter.get())?;
    let pairs = parse_pairs(&args.pairs)?;
    let intensity = args.window.resolve(table.earliest())?;
    let lookup = |name: &str| {
        table
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("{}: unknown stream `{name}`", args.pairs.display())))
    };
    let inputs = pairs
        .iter()
        .map(|(s, t)| {
            let (a, b) = (lookup(s)?, lookup(t)?);
            Ok(PairInput { source: s, target: t, a: &a.pattern, b: &b.pattern, payloads: &b.payloads })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mode = if args.correlation { Mode::Correlation } else { Mode::Triggering };
    let result = screen(&inputs, &intensity, &TestOptions { mode, tau_max: args.tau_max }, args.q)?;
    emit_json(args.output.out.as_deref(), &result)?;
    if let Some(path) = &args.matrix {
        write_file(path, &result.to_csv_matrix())?;
    }
    let outcomes: Vec<&GlrOutcome> = result.entries.iter().map(|e| &e.outcome).collect();
    check_degeneracy(args.output.strict, "screen", &outcomes)
}

fn times_csv(times: &[f64], header: &str) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for t in times {
        s.push_str(&format!("{t}\n"));
    }
    s
}

fn simulate_command(args: &SimulateArgs) -> Result<(), CliError> {
    let table = parse_events(&args.a, None)?;
    let a = table.select(None, &args.a)?;
    let intensity = args.window.resolve(a.pattern.first())?;
    let spec = AlternativeSpec {
        a: a.pattern.clone(),
        intensity,
        mode: if args.correlation { Mode::Correlation } else { Mode::Triggering },
        tau: args.tau,
        lambda1: args.lambda1,
        lambda2: args.lambda2,
        fixed_n: args.n,
    };
    let b = sample_alternative(&spec, &mut RngSeed(args.seed).rng(0))?;
    emit_text(args.out.as_deref(), &times_csv(b.times(), "time"))
}

fn parse_mode(s: &str) -> Result<Mode, CliError> {
    match s {
        "triggering" => Ok(Mode::Triggering),
        "correlation" => Ok(Mode::Correlation),
        other => Err(CliError::Usage(format!("unknown mode `{other}`"))),
    }
}

fn config_intensity(cfg: &mut KeyValueConfig) -> Result<Option<NullIntensity>, CliError> {
    let path = cfg.take_path("intensity")?;
    let start = cfg.take::<f64>("window_start")?;
    let end = cfg.take::<f64>("window_end")?;
    Ok(match (path, start, end) {
        (Some(p), None, None) => Some(parse_intensity(&p)?),
        (Some(_), _, _) => return Err(CliError::Usage("config: intensity excludes window_start/window_end".into())),
        (None, None, None) => None,
        (None, s, Some(e)) => Some(NullIntensity::uniform(ObservationWindow::new(s.unwrap_or(0.0), e)?)),
        (None, Some(_), None) => return Err(CliError::Usage("config: window_start needs window_end".into())),
    })
}

fn open_config(path: &Option<PathBuf>) -> Result<KeyValueConfig, CliError> {
    path.as_deref().map_or_else(|| Ok(KeyValueConfig::default()), KeyValueConfig::read)
}

fn calibrate_command(args: &CalibrateArgs) -> Result<(), CliError> {
    let mut cfg = open_config(&args.config)?;
    let mut config = CalibrationConfig::default();
    if let Some(r) = config_intensity(&mut cfg)? {
        config.intensity = r;
    }
    if let Some(v) = cfg.take("replicates")? {
        config.replicates = v;
    }
    if let Some(v) = cfg.take("source_events")? {
        config.source_events = v;
    }
    if let Some(v) = cfg.take("mean_events")? {
        config.mean_events = v;
    }
    if let Some(v) = cfg.take::<String>("mode")? {
        config.mode = parse_mode(&v)?;
    }
    config.tau_max = cfg.take("tau_max")?;
    let seed = args.seed.or(cfg.take("seed")?).unwrap_or(0);
    cfg.finish()?;
    if let Some(r) = args.replicates {
        config.replicates = r;
    }
    let summary = calibration_experiment(&config, RngSeed(seed))?;
    if let Some(path) = &args.p_values {
        write_file(path, &times_csv(&summary.p_values, "p"))?;
    }
    emit_json(args.out.as_deref(), &summary)
}

fn figure1_command(args: &Figure1Args) -> Result<(), CliError> {
    let mut cfg = open_config(&args.config)?;
    let n = args.n.or(cfg.take("n")?).unwrap_or(1000);
    let gamma1 = args.gamma1.or(cfg.take("gamma1")?).unwrap_or(0.01);
    let gamma2 = args.gamma2.or(cfg.take("gamma2")?).unwrap_or(0.99);
    let replicates = args.replicates.or(cfg.take("replicates")?).unwrap_or(1000);
    let seed = args.seed.or(cfg.take("seed")?).unwrap_or(0);
    cfg.finish()?;
    let result = figure1_experiment(n, KsConfig::new(gamma1, gamma2)?, replicates, RngSeed(seed))?;
    if let Some(path) = &args.table {
        let mut s = String::from("statistic,value,ecdf\n");
        for (name, table) in [
            ("likelihood_ratio", result.likelihood_ratio_ecdf()),
            ("weighted_ks", result.weighted_ks_ecdf()),
        ] {
            for p in table {
                s.push_str(&format!("{name},{},{}\n", p.u, p.ecdf));
            }
        }
        write_file(path, &s)?;
    }
    let summary = Figure1Summary {
        n: result.n,
        ks: result.ks,
        replicates: result.replicates,
        sup_distance: result.sup_distance,
    };
    emit_json(args.out.as_deref(), &summary)
}

fn consistency_command(args: &ConsistencyArgs) -> Result<(), CliError> {
    let mut cfg = open_config(&args.config)?;
    let mut config = ConsistencyConfig::default();
    if let Some(r) = config_intensity(&mut cfg)? {
        config.intensity = r;
    }
    let sources = match &args.sources {
        Some(p) => Some(p.clone()),
        None => cfg.take_path("sources")?,
    };
    if let Some(path) = sources {
        let table = parse_events(&path, None)?;
        config.a = table.select(None, &path)?.pattern.clone();
    }
    if let Some(v) = args.ratio.or(cfg.take("ratio")?) {
        config.ratio = v;
    }
    if let Some(v) = args.tau.or(cfg.take("tau")?) {
        config.tau = v;
    }
    let ladder = cfg.take_list("ladder")?;
    if let Some(v) = args.ladder.clone().or(ladder) {
        config.lambda2_ladder = v;
    }
    if let Some(v) = args.replicates.or(cfg.take("replicates")?) {
        config.replicates = v;
    }
    if let Some(v) = args.alpha.or(cfg.take("alpha")?) {
        config.alpha = v;
    }
    let seed = args.seed.or(cfg.take("seed")?).unwrap_or(0);
    cfg.finish()?;
    let rows = consistency_experiment(&config, RngSeed(seed))?;
    if let Some(path) = &args.table {
        let mut s = String::from("lambda1,lambda2,mean_n,median_abs_error,power\n");
        for r in &rows {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.lambda1, r.lambda2, r.mean_n, r.median_abs_error, r.power
            ));
        }
        write_file(path, &s)?;
    }
    emit_json(args.out.as_deref(), &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glrt::run_test;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parse_errors_exit_with_input_code() {
        assert_eq!(run(["ppassoc", "test", "--bogus"]), EXIT_INPUT);
        assert_eq!(run(["ppassoc", "frobnicate"]), EXIT_INPUT);
    }

    #[test]
    fn missing_window_is_a_usage_error() {
        let w = WindowArgs { intensity: None, window_start: None, window_end: None };
        assert!(matches!(w.resolve(Some(0.0)), Err(CliError::Usage(_))));
        let w = WindowArgs { window_end: Some(2.0), ..w };
        assert_eq!(w.resolve(Some(0.5)).unwrap().window(), ObservationWindow::new(0.5, 2.0).unwrap());
    }

    #[test]
    fn degeneracy_escalates_only_when_strict() {
        let mut o = run_test(
            &PointPattern::new(vec![0.0]).unwrap(),
            &PointPattern::new(vec![0.5]).unwrap(),
            &NullIntensity::uniform(ObservationWindow::new(0.0, 1.0).unwrap()),
            &TestOptions::triggering(),
        )
        .unwrap();
        assert!(check_degeneracy(true, "t", &[&o]).is_ok());
        o.degeneracy.zero_u = 1;
        assert!(check_degeneracy(false, "t", &[&o]).is_ok());
        assert_eq!(check_degeneracy(true, "t", &[&o]).unwrap_err().exit_code(), EXIT_DEGENERATE);
    }
}
