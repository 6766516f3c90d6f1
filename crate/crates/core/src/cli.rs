//! Command-line front end. The `listfec` binary is a thin wrapper over
//! [`run`].

use std::cmp::Ordering;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bounds::{bound_curve, capacity_dispersion, BoundQuery};
use crate::error::{Error, Result};
use crate::harness::{
    csv_header_comments, sweep_crc_length, sweep_list_size, to_csv, RepetitionSource, SimConfig,
    SimResult, Simulator, DEFAULT_MAX_TRIALS, DEFAULT_MIN_FAILURES,
};
use crate::manifest::RunManifest;
use crate::registry::{
    code_entry, conv_code, crc_ids, resolve_crc, CODE_REGISTRY, DEFAULT_K_MESSAGE,
};
use crate::spectrum::{dso_search, weight_enumerator, CrcTbcc};
use crate::tbcc::TBCC_RATE_FIFTH_ID;

#[derive(Debug, Parser)]
#[command(
    name = "listfec",
    version,
    about = "CRC-aided list decoding experiments"
)]
pub struct Cli {
    /// Worker threads for simulations (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one code/CRC pair over a list of Eb/N0 points.
    Simulate(SimulateArgs),
    /// Simulate the TBCC with each DSO CRC of degree 8 to 16.
    SweepCrc(SweepCrcArgs),
    /// Simulate one code/CRC pair at several maximum list sizes.
    SweepList(SweepListArgs),
    /// Normal-approximation benchmark curve.
    Bound(BoundArgs),
    /// Exhaustive search for the distance-spectrum-optimal CRC of a degree.
    SearchCrc(SearchCrcArgs),
    /// Weight spectrum of a CRC + TBCC concatenation by enumeration.
    VerifySpectrum(VerifySpectrumArgs),
    /// Registered ids.
    Registry {
        #[command(subcommand)]
        action: RegistryAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum RegistryAction {
    /// Print every code and CRC id.
    List,
}

/// Stopping rule and seed shared by the simulation commands.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// Eb/N0 points in dB: `2.5,3,3.5` or `start:step:stop`.
    #[arg(long, value_parser = parse_ebno_grid)]
    pub ebno: Option<EbnoGrid>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Stop a point after this many TFR events.
    #[arg(long)]
    pub min_failures: Option<u64>,
    /// Stop a point after this many trials.
    #[arg(long)]
    pub max_trials: Option<u64>,
    /// Message bits per codeword.
    #[arg(long)]
    pub k_message: Option<usize>,
    /// CSV output; a `.manifest.json` is written beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// TOML configuration; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub code: Option<String>,
    /// CRC id or hex polynomial such as `0xA9D`.
    #[arg(long)]
    pub crc: Option<String>,
    #[arg(long)]
    pub lmax: Option<usize>,
    /// Repetition map file, one count per base-codeword bit.
    #[arg(long)]
    pub rep_map: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct SweepCrcArgs {
    #[arg(long, default_value = TBCC_RATE_FIFTH_ID)]
    pub code: String,
    #[arg(long, default_value_t = 2048)]
    pub lmax: usize,
    /// CRC degrees to sweep.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "8,9,10,11,12,13,14,15,16"
    )]
    pub m: Vec<usize>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct SweepListArgs {
    #[arg(long)]
    pub code: String,
    #[arg(long)]
    pub crc: Option<String>,
    /// Maximum list sizes to sweep.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1,2,4,8,16,32,64,128,256,512,1024,2048"
    )]
    pub lmax_list: Vec<usize>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    /// Channel uses per codeword.
    #[arg(long)]
    pub n: usize,
    /// Message bits.
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub ebno_start: f64,
    #[arg(long)]
    pub ebno_stop: f64,
    #[arg(long, default_value_t = 0.25)]
    pub ebno_step: f64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchCrcArgs {
    /// Registered TBCC id.
    #[arg(long, default_value = "tbcc-7-5")]
    pub code: String,
    /// CRC degree.
    #[arg(long)]
    pub m: usize,
    /// Message bits.
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifySpectrumArgs {
    #[arg(long, default_value = TBCC_RATE_FIFTH_ID)]
    pub code: String,
    /// CRC id or hex polynomial; omit for the bare TBCC.
    #[arg(long)]
    pub crc: Option<String>,
    /// Message bits.
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    /// Also rank the CRC among every polynomial of its degree.
    #[arg(long)]
    pub rank: bool,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// A parsed Eb/N0 list.
#[derive(Clone, Debug, PartialEq)]
pub struct EbnoGrid(pub Vec<f64>);

fn parse_ebno_grid(s: &str) -> std::result::Result<EbnoGrid, String> {
    parse_ebno_list(s).map(EbnoGrid)
}

/// Parses `a,b,c` or `start:step:stop` (inclusive, tolerant of rounding).
pub fn parse_ebno_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (a, d, b) = (num(start)?, num(step)?, num(stop)?);
            if d.is_nan() || d <= 0.0 || b < a {
                return Err(format!("range `{s}` needs step > 0 and stop >= start"));
            }
            let count = ((b - a) / d + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| round_db(a + i as f64 * d)).collect())
        }
        [_] => s.split(',').map(num).collect(),
        _ => Err(format!("`{s}` is neither a list nor start:step:stop")),
    }
}

/// Rounds to 1e-9 dB so generated grids print cleanly.
fn round_db(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

fn write_output(out: Option<&Path>, text: &str, manifest: &mut RunManifest) -> Result<()> {
    manifest.finish();
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Error::io(dir.display().to_string(), e))?;
            }
            std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))?;
            let m = manifest.write_for(path)?;
            eprintln!("wrote {} and {}", path.display(), m.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::io("stdout", e))?;
        }
    }
    Ok(())
}

fn apply_run_args(cfg: &mut SimConfig, run: &RunArgs, workers: Option<usize>) {
    if let Some(e) = &run.ebno {
        cfg.ebno_db = e.0.clone();
    }
    if let Some(s) = run.seed {
        cfg.seed = s;
    }
    if let Some(n) = run.min_failures {
        cfg.min_failures = n;
    }
    if let Some(n) = run.max_trials {
        cfg.max_trials = n;
    }
    if let Some(k) = run.k_message {
        cfg.k_message = k;
    }
    if workers.is_some() {
        cfg.workers = workers;
    }
}

fn fmt_dmin(d: Option<usize>) -> String {
    d.map_or_else(|| "none".into(), |d| d.to_string())
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::config(flag, format!("required: pass --{flag}")))
}

/// Config from flags alone, for commands without `--config`.
fn config_from_flags(
    code: &str,
    crc: Option<&str>,
    l_max: usize,
    run: &RunArgs,
    workers: Option<usize>,
) -> Result<SimConfig> {
    let mut cfg = SimConfig::new(
        code,
        require(run.ebno.clone().map(|g| g.0), "ebno")?,
        l_max,
        require(run.seed, "seed")?,
    );
    cfg.crc_id = crc.map(str::to_string);
    apply_run_args(&mut cfg, run, workers);
    cfg.validate()?;
    Ok(cfg)
}

fn log_point(r: &SimResult) {
    eprintln!(
        "{} {} Eb/N0={} Lmax={}: {} trials, TFR {:.3e} (UER {:.3e}, erasures {:.3e})",
        r.code_id,
        r.crc_id,
        r.ebno_db,
        r.l_max,
        r.trials,
        r.tfr(),
        r.uer(),
        r.erasure_rate()
    );
}

fn timing_rows(results: &[SimResult]) -> Vec<serde_json::Value> {
    results
        .iter()
        .map(|r| {
            serde_json::json!({
                "crc": r.crc_id,
                "ebno_db": r.ebno_db,
                "lmax": r.l_max,
                "stop": r.stop,
                "n_transmit": r.n_transmit,
                "uer_ci95": r.uer_ci95(),
                "erasure_ci95": r.erasure_ci95(),
                "decode_ms_p50": r.timing.quantile_ms(0.5),
                "decode_ms_p99": r.timing.quantile_ms(0.99),
            })
        })
        .collect()
}

fn cmd_simulate(args: SimulateArgs, workers: Option<usize>) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => SimConfig::load(path)?,
        None => {
            let code = require(args.code.clone(), "code")?;
            SimConfig::new(
                &code,
                require(args.run.ebno.clone().map(|g| g.0), "ebno")?,
                require(args.lmax, "lmax")?,
                require(args.run.seed, "seed")?,
            )
        }
    };
    if let Some(c) = args.code {
        cfg.code_id = c;
    }
    if let Some(c) = args.crc {
        cfg.crc_id = Some(c);
    }
    if let Some(l) = args.lmax {
        cfg.l_max = l;
    }
    if let Some(p) = args.rep_map {
        cfg.repetition_map = Some(RepetitionSource::File(p));
    }
    apply_run_args(&mut cfg, &args.run, workers);
    let sim = Simulator::new(cfg)?;
    let mut manifest = RunManifest::start("simulate", sim.config(), Some(sim.config().seed))?;
    let mut results = Vec::new();
    for &e in &sim.config().ebno_db {
        let r = sim.run_point(e)?;
        log_point(&r);
        results.push(r);
    }
    manifest.rows = timing_rows(&results);
    let csv = to_csv(&results, &csv_header_comments(sim.config()));
    write_output(args.run.out.as_deref(), &csv, &mut manifest)
}

fn cmd_sweep_crc(args: SweepCrcArgs, workers: Option<usize>) -> Result<()> {
    let cfg = config_from_flags(&args.code, None, args.lmax, &args.run, workers)?;
    let mut manifest = RunManifest::start(
        "sweep-crc",
        &serde_json::json!({ "config": &cfg, "m": &args.m }),
        Some(cfg.seed),
    )?;
    let results = sweep_crc_length(&cfg, &args.m)?;
    results.iter().for_each(log_point);
    manifest.rows = timing_rows(&results);
    write_output(
        args.run.out.as_deref(),
        &to_csv(&results, &csv_header_comments(&cfg)),
        &mut manifest,
    )
}

fn cmd_sweep_list(args: SweepListArgs, workers: Option<usize>) -> Result<()> {
    let top = args.lmax_list.iter().copied().max().unwrap_or(1);
    let cfg = config_from_flags(&args.code, args.crc.as_deref(), top, &args.run, workers)?;
    let mut manifest = RunManifest::start(
        "sweep-list",
        &serde_json::json!({ "config": &cfg, "lmax_list": &args.lmax_list }),
        Some(cfg.seed),
    )?;
    let results = sweep_list_size(&cfg, &args.lmax_list)?;
    results.iter().for_each(log_point);
    manifest.rows = timing_rows(&results);
    write_output(
        args.run.out.as_deref(),
        &to_csv(&results, &csv_header_comments(&cfg)),
        &mut manifest,
    )
}

fn cmd_bound(args: BoundArgs) -> Result<()> {
    BoundQuery::new(args.n, args.k, 0.0)?;
    let grid = parse_ebno_list(&format!(
        "{}:{}:{}",
        args.ebno_start, args.ebno_step, args.ebno_stop
    ))
    .map_err(|e| Error::config("ebno", e))?;
    let mut manifest = RunManifest::start("bound", &args, None)?;
    let mut s = String::new();
    s.push_str(&format!(
        "# listfec {} normal approximation (NA) for the BI-AWGN channel, Gauss-Hermite nodes = {}\n",
        env!("CARGO_PKG_VERSION"),
        crate::bounds::GH_NODES
    ));
    s.push_str("ebno_db,esno_db,capacity,dispersion,na_tfr\n");
    for (e, eps) in bound_curve(args.n, args.k, &grid)? {
        let q = BoundQuery::new(args.n, args.k, e)?;
        let (c, v) = capacity_dispersion(q.esno());
        s.push_str(&format!(
            "{e},{:.6},{c:.9},{v:.9},{eps:.6e}\n",
            10.0 * q.esno().log10()
        ));
    }
    write_output(args.out.as_deref(), &s, &mut manifest)
}

fn tbcc_for(code: &str) -> Result<crate::tbcc::ConvCodeSpec> {
    let entry = code_entry(code)?;
    conv_code(entry.inner)
        .ok_or_else(|| Error::config("code", format!("`{code}` is not a convolutional code")))
}

fn cmd_search_crc(args: SearchCrcArgs) -> Result<()> {
    let conv = tbcc_for(&args.code)?;
    let mut manifest = RunManifest::start("search-crc", &args, None)?;
    let r = dso_search(&conv, args.m, args.k)?;
    eprintln!(
        "best degree-{} CRC for {} at k={}: {:#X} (d_min {})",
        args.m,
        args.code,
        args.k,
        r.best.crc.poly(),
        fmt_dmin(r.best.spectrum.d_min())
    );
    write_output(args.out.as_deref(), &r.to_csv(), &mut manifest)
}

fn cmd_verify_spectrum(args: VerifySpectrumArgs) -> Result<()> {
    let conv = tbcc_for(&args.code)?;
    let crc = args.crc.as_deref().map(resolve_crc).transpose()?;
    let mut manifest = RunManifest::start("verify-spectrum", &args, None)?;
    let spectrum = weight_enumerator(&CrcTbcc::new(&conv, crc, args.k)?, args.k)?;
    let mut text = spectrum.to_csv();
    if let (true, Some(crc)) = (args.rank, crc) {
        let all = dso_search(&conv, crc.degree(), args.k)?;
        let better = all
            .candidates
            .iter()
            .filter(|c| c.spectrum.quality_cmp(&spectrum) == Ordering::Less)
            .count();
        let line = format!(
            "{:#X} ranks {} of {} degree-{} polynomials at k={} (best {:#X})",
            crc.poly(),
            better + 1,
            all.candidates.len(),
            crc.degree(),
            args.k,
            all.best.crc.poly()
        );
        eprintln!("{line}");
        text = format!("# {line}\n{text}");
        manifest
            .rows
            .push(serde_json::json!({ "rank": better + 1, "of": all.candidates.len() }));
    }
    eprintln!("d_min = {}", fmt_dmin(spectrum.d_min()));
    write_output(args.out.as_deref(), &text, &mut manifest)
}

fn cmd_registry_list() -> Result<()> {
    let mut s = String::from("# codes: id, default crc, summary\n");
    for e in CODE_REGISTRY {
        s.push_str(&format!(
            "code\t{}\t{}\t{}\n",
            e.id,
            e.default_crc.unwrap_or("-"),
            e.summary
        ));
    }
    s.push_str("# crcs: id, degree, polynomial\n");
    for (id, poly) in crc_ids() {
        let degree = 63 - poly.leading_zeros();
        s.push_str(&format!("crc\t{id}\t{degree}\t{poly:#X}\n"));
    }
    s.push_str(&format!(
        "# defaults: k_message={DEFAULT_K_MESSAGE} min_failures={DEFAULT_MIN_FAILURES} max_trials={DEFAULT_MAX_TRIALS}\n"
    ));
    print!("{s}");
    Ok(())
}

pub fn dispatch(cli: Cli) -> Result<()> {
    let workers = cli.workers;
    if workers == Some(0) {
        return Err(Error::config("workers", "must be at least 1"));
    }
    match cli.command {
        Command::Simulate(a) => cmd_simulate(a, workers),
        Command::SweepCrc(a) => cmd_sweep_crc(a, workers),
        Command::SweepList(a) => cmd_sweep_list(a, workers),
        Command::Bound(a) => cmd_bound(a),
        Command::SearchCrc(a) => with_workers(workers, || cmd_search_crc(a)),
        Command::VerifySpectrum(a) => with_workers(workers, || cmd_verify_spectrum(a)),
        Command::Registry {
            action: RegistryAction::List,
        } => cmd_registry_list(),
    }
}

/// Runs `f` on a pool of `workers` threads when given.
fn with_workers<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::config("workers", e.to_string()))?
            .install(f),
        None => f(),
    }
}

/// Parses `args` and runs the command. Usage errors exit 2, runtime errors 1.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
