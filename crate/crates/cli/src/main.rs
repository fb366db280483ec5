//! `bcmsr`: secrecy-rate regions, sweeps, Fourier-Motzkin elimination, key
//! simulation and the verification suite from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error, 3 I/O error.

mod config;
mod region;
mod render;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use bcmsr::bounds::{wynerziv_example, wynerziv_raw_system, WZ_AUX};
use bcmsr::channels::{sweep_blackwell_sumrate, sweep_dueck_sumrate, SweepRow};
use bcmsr::keysim::{bsc_channel, identical_channel, independent_channel, run_key_extraction, run_otp_roundtrip, KeySimConfig};
use bcmsr::polyregion::HalfSpaceSystem;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{ChannelSpec, Example, Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Verify(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Verify(m) => write!(f, "verification failed: {m}"),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Parser)]
#[command(name = "bcmsr", version, about = "Secrecy-rate regions of the broadcast channel with mutual secrecy and feedback")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vertices and inequalities of the four bounds for an example or a distribution file
    Region {
        #[command(flatten)]
        common: CommonArgs,
        /// SchemeDistribution JSON (6 or 9 variables); evaluated with the generic bounds
        #[arg(long)]
        dist: Option<String>,
    },
    /// Maximum sum rate of each bound over a p grid
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Eliminate variables from an inequality system and prune the result
    Fme {
        /// system file in the `c1*R1 + c2*R2 <= b` text format
        input: Option<String>,
        /// use a built-in system instead of a file
        #[arg(long, value_parser = ["wynerziv"])]
        builtin: Option<String>,
        /// comma-separated variables to eliminate
        #[arg(long, value_delimiter = ',')]
        eliminate: Option<Vec<String>>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Secret-key extraction from the feedback, with an optional one-time-pad run
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Cross-validation checks at pinned parameters
    Verify {
        /// run a single named check
        #[arg(long)]
        only: Option<String>,
        /// list check names and exit
        #[arg(long)]
        list: bool,
        #[arg(long)]
        out: Option<String>,
        /// test hook: shift the first closed-form inner1 constant
        #[arg(long, hide = true, allow_hyphen_values = true)]
        perturb_inner1: Option<f64>,
    },
}

#[derive(Args, Default)]
struct CommonArgs {
    #[arg(long, value_enum)]
    example: Option<Example>,
    /// Dueck noise case: 1 (chain) or 2 (star)
    #[arg(long)]
    case: Option<u8>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// simplex grid points per axis for the Blackwell sweep (default 201)
    #[arg(long)]
    grid: Option<usize>,
    /// p grid as lo:hi:n or a comma list (default 0:0.5:26)
    #[arg(long)]
    pgrid: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    blocklength: Option<usize>,
    #[arg(long)]
    rate: Option<f64>,
    /// named law: independent | identical | bsc:<e>
    #[arg(long)]
    channel: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// also run the one-time pad with a message of this many bits
    #[arg(long)]
    otp_bits: Option<usize>,
    /// JSON run configuration; flags override its fields
    #[arg(long)]
    config: Option<String>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Exhaustive,
    MonteCarlo,
}

impl CommonArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let flags = RunConfig {
            example: self.example,
            case: self.case,
            p: self.p,
            q: self.q,
            r: self.r,
            alpha: self.alpha,
            beta: self.beta,
            grid: self.grid,
            pgrid: self.pgrid.clone(),
            format: self.format,
            out: self.out.clone(),
            seed: self.seed,
            trials: self.trials,
            blocklength: self.blocklength,
            rate: self.rate,
            mode: self.mode.map(|m| match m {
                ModeArg::Exhaustive => bcmsr::keysim::SimMode::Exhaustive,
                ModeArg::MonteCarlo => bcmsr::keysim::SimMode::MonteCarlo,
            }),
            channel: self.channel.clone().map(ChannelSpec::Named),
            otp_bits: self.otp_bits,
            ..RunConfig::default()
        };
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Ok(base.merged(&flags))
    }
}

/// Writes to `out` or stdout.
fn emit(out: Option<&str>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{path}: {e}"))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_region(cfg: &RunConfig, dist: Option<&str>) -> Result<(), CliError> {
    let set = match dist {
        Some(path) => region::from_file(path)?,
        None => region::from_example(cfg)?,
    };
    let text = match cfg.format(Format::Csv) {
        Format::Json => json(&set),
        Format::Csv => region::csv(&set),
        Format::Svg => region::svg(&set),
    };
    emit(cfg.out.as_deref(), &text)
}

fn sweep_csv(label: &str, rows: &[SweepRow]) -> String {
    use render::num;
    let mut s = format!("# {label}\np,sum_in1,sum_in2,sum_out,sum_nofb\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{},{}\n", num(r.p), num(r.sum_in1), num(r.sum_in2), num(r.sum_out), num(r.sum_nofb)));
    }
    s
}

fn sweep_svg(label: &str, rows: &[SweepRow]) -> String {
    let ymax = rows.iter().map(|r| r.sum_in1.max(r.sum_in2).max(r.sum_out).max(r.sum_nofb)).fold(0.0, f64::max);
    let xmax = rows.iter().map(|r| r.p).fold(0.0, f64::max);
    let frame = render::Frame::new(xmax, ymax);
    let mut s = render::open(&frame, "p", "max sum rate (bits)", label);
    let series: [fn(&SweepRow) -> f64; 4] = [|r| r.sum_nofb, |r| r.sum_in1, |r| r.sum_in2, |r| r.sum_out];
    for (i, f) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.p, f(r))).collect();
        render::polyline(&mut s, &frame, &pts, render::COLORS[i]);
    }
    render::legend(&mut s, &["nofeedback", "inner1", "inner2", "outer"]);
    render::close(s)
}

fn cmd_sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let ps = cfg.p_grid()?;
    let (label, rows) = match cfg.example.unwrap_or(Example::Blackwell) {
        Example::Blackwell => {
            let grid = cfg.grid.unwrap_or(201);
            let rows = sweep_blackwell_sumrate(&ps, grid).map_err(usage)?;
            (format!("example=blackwell grid_resolution={grid} p_points={}", ps.len()), rows)
        }
        _ => {
            let d = cfg.dueck()?;
            let rows = sweep_dueck_sumrate(d.case, &ps, d.q, d.r).map_err(usage)?;
            let name = format!("dueck{}", d.case.index());
            (format!("example={name} q={} r={} grid_resolution=closed-form p_points={}", d.q, d.r, ps.len()), rows)
        }
    };
    let text = match cfg.format(Format::Csv) {
        Format::Csv => sweep_csv(&label, &rows),
        Format::Json => json(&serde_json::json!({ "meta": label, "rows": rows })),
        Format::Svg => sweep_svg(&label, &rows),
    };
    emit(cfg.out.as_deref(), &text)
}

fn cmd_fme(input: Option<&str>, builtin: Option<&str>, eliminate: Option<&[String]>, out: Option<&str>) -> Result<(), CliError> {
    let (system, default_elim): (HalfSpaceSystem, Vec<String>) = match (input, builtin) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give an input file or --builtin, not both".into())),
        (None, None) => return Err(CliError::Usage("missing input file (or --builtin wynerziv)".into())),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            let sys = HalfSpaceSystem::parse_text(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
            (sys, Vec::new())
        }
        (None, Some(_)) => {
            let sys = wynerziv_raw_system(&wynerziv_example()).map_err(usage)?;
            (sys, WZ_AUX.iter().map(|s| s.to_string()).collect())
        }
    };
    let vars: Vec<String> = eliminate
        .map(|v| v.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
        .unwrap_or(default_elim);
    for v in &vars {
        if !system.variables.contains(v) {
            return Err(CliError::Usage(format!("cannot eliminate `{v}`: not a system variable")));
        }
    }
    let mut result = system.eliminate_all(&vars).map_err(usage)?.prune_redundant();
    if !result.is_feasible() {
        result = result.infeasible_like();
    }
    let mut text = result.to_text();
    if result.is_infeasible_certificate() {
        text.push_str("# infeasible: the system has no solution\n");
        eprintln!("note: system is infeasible");
    }
    emit(out, &text)
}

#[derive(Serialize)]
struct SimulateOutput {
    config: KeySimConfig,
    report: bcmsr::keysim::KeySimReport,
    otp: Option<bcmsr::keysim::OtpReport>,
}

fn channel_table(spec: Option<&ChannelSpec>) -> Result<Vec<Vec<f64>>, CliError> {
    match spec {
        None => Ok(independent_channel()),
        Some(ChannelSpec::Table(t)) => Ok(t.clone()),
        Some(ChannelSpec::Named(n)) => match n.as_str() {
            "independent" => Ok(independent_channel()),
            "identical" => Ok(identical_channel()),
            other => {
                let e = other
                    .strip_prefix("bsc:")
                    .and_then(|e| e.parse::<f64>().ok())
                    .filter(|e| (0.0..=1.0).contains(e))
                    .ok_or_else(|| CliError::Usage(format!("unknown channel `{other}` (independent, identical, bsc:<e>)")))?;
                Ok(bsc_channel(e))
            }
        },
    }
}

fn cmd_simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let mut kc = KeySimConfig::new(
        channel_table(cfg.channel.as_ref())?,
        cfg.blocklength.unwrap_or(8),
        cfg.rate.unwrap_or(0.75),
        cfg.seed.unwrap_or(0),
    );
    kc.trials = cfg.trials.unwrap_or(kc.trials);
    kc.mode = cfg.mode.unwrap_or(kc.mode);
    kc.coloring = cfg.coloring.unwrap_or_default();
    let report = run_key_extraction(&kc).map_err(usage)?;
    let otp = cfg.otp_bits.map(|m| run_otp_roundtrip(&kc, m)).transpose().map_err(usage)?;
    eprintln!("{}", report.summary());
    emit(cfg.out.as_deref(), &json(&SimulateOutput { config: kc, report, otp }))
}

fn cmd_verify(only: Option<&str>, list: bool, out: Option<&str>, perturb: f64) -> Result<(), CliError> {
    if list {
        return emit(out, &(verify::NAMES.join("\n") + "\n"));
    }
    if let Some(n) = only {
        if !verify::NAMES.contains(&n) {
            return Err(CliError::Usage(format!("unknown check `{n}` (see verify --list)")));
        }
    }
    let report = verify::run(only, perturb);
    emit(out, &json(&report))?;
    if report.pass {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        Err(CliError::Verify(failed.join(", ")))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Region { common, dist } => cmd_region(&common.resolve()?, dist.as_deref()),
        Command::Sweep { common } => cmd_sweep(&common.resolve()?),
        Command::Fme { input, builtin, eliminate, out } => {
            cmd_fme(input.as_deref(), builtin.as_deref(), eliminate.as_deref(), out.as_deref())
        }
        Command::Simulate { common } => cmd_simulate(&common.resolve()?),
        Command::Verify { only, list, out, perturb_inner1 } => cmd_verify(only.as_deref(), list, out.as_deref(), perturb_inner1.unwrap_or(0.0)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
