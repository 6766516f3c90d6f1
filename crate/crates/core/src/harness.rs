//! Monte Carlo estimation of erasure, undetected-error and total failure
//! rates.
//!
//! Trial `i` of a point draws its message and noise from the stream
//! `(seed, i)`. Every point of a run reuses the same streams, so curves over
//! Eb/N0, CRC length or list size are compared on common randomness. Trials
//! are evaluated in parallel batches and then tallied in index order; the run
//! stops at the first trial index where the failure count reaches
//! `min_failures` or the trial count reaches `max_trials`. Counts therefore
//! depend only on the configuration, never on the worker count.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adaptive::{adaptive_decode, classify, TrialClass};
use crate::bits::BitBlock;
use crate::channel::{
    add_noise, demodulate_llr, modulate, trial_rng, ChannelParams, RNG_ALGORITHM,
};
use crate::error::{Error, Result};
use crate::registry::{Scheme, DEFAULT_K_MESSAGE};
use crate::repetition::RepetitionMap;

pub const DEFAULT_MIN_FAILURES: u64 = 50;
pub const DEFAULT_MAX_TRIALS: u64 = 1_000_000;

/// Fixed CSV column order.
pub const CSV_COLUMNS: &str =
    "code,crc,m,ebno_db,lmax,trials,correct,undetected,erasures,uer,erasure_rate,tfr,tfr_ci95,mean_list,mean_decode_ms";

fn default_min_failures() -> u64 {
    DEFAULT_MIN_FAILURES
}

fn default_max_trials() -> u64 {
    DEFAULT_MAX_TRIALS
}

fn default_k_message() -> usize {
    DEFAULT_K_MESSAGE
}

/// A repetition map given inline or as a file of one count per line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RepetitionSource {
    Counts(Vec<u32>),
    File(PathBuf),
}

impl RepetitionSource {
    pub fn load(&self) -> Result<RepetitionMap> {
        match self {
            RepetitionSource::Counts(c) => RepetitionMap::new(c.clone()),
            RepetitionSource::File(p) => RepetitionMap::load(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub code_id: String,
    /// Falls back to the code's default CRC.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crc_id: Option<String>,
    pub ebno_db: Vec<f64>,
    pub l_max: usize,
    #[serde(default = "default_max_trials")]
    pub max_trials: u64,
    #[serde(default = "default_min_failures")]
    pub min_failures: u64,
    pub seed: u64,
    /// Replaces the code's built-in repetition rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repetition_map: Option<RepetitionSource>,
    #[serde(default = "default_k_message")]
    pub k_message: usize,
    /// Worker threads; all available cores when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl SimConfig {
    /// Configuration with default stopping rule and message length.
    pub fn new(code_id: &str, ebno_db: Vec<f64>, l_max: usize, seed: u64) -> Self {
        SimConfig {
            code_id: code_id.to_string(),
            crc_id: None,
            ebno_db,
            l_max,
            max_trials: DEFAULT_MAX_TRIALS,
            min_failures: DEFAULT_MIN_FAILURES,
            seed,
            repetition_map: None,
            k_message: DEFAULT_K_MESSAGE,
            workers: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| {
            let field = e
                .span()
                .and_then(|s| text.get(s))
                .map(|s| s.split('=').next().unwrap_or(s).trim().to_string())
                .unwrap_or_else(|| "config".into());
            Error::config(field, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks field ranges; scheme-level checks happen in [`Self::scheme`].
    pub fn validate(&self) -> Result<()> {
        if self.ebno_db.is_empty() {
            return Err(Error::config("ebno_db", "no Eb/N0 points"));
        }
        if let Some(e) = self
            .ebno_db
            .iter()
            .find(|e| e.is_nan() || **e == f64::NEG_INFINITY)
        {
            return Err(Error::config(
                "ebno_db",
                format!("{e} is not a usable Eb/N0"),
            ));
        }
        if self.l_max == 0 || !self.l_max.is_power_of_two() {
            return Err(Error::config(
                "l_max",
                format!("{} is not a power of two >= 1", self.l_max),
            ));
        }
        if self.min_failures == 0 {
            return Err(Error::config("min_failures", "must be at least 1"));
        }
        if self.max_trials == 0 {
            return Err(Error::config("max_trials", "must be at least 1"));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "must be at least 1"));
        }
        Ok(())
    }

    pub fn scheme(&self) -> Result<Scheme> {
        let rep = self
            .repetition_map
            .as_ref()
            .map(RepetitionSource::load)
            .transpose()?;
        Scheme::build(&self.code_id, self.crc_id.as_deref(), self.k_message, rep)
    }
}

/// Outcome of one trial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialRecord {
    pub class: TrialClass,
    pub list_size_used: usize,
    pub decode_time: Duration,
}

/// Runs trial `trial`: random message, encode, repeat, BPSK, AWGN, LLRs,
/// combine, adaptive decode, classify.
pub fn simulate_trial(
    scheme: &Scheme,
    sigma: f64,
    seed: u64,
    trial: u64,
    l_max: usize,
) -> Result<TrialRecord> {
    let mut rng = trial_rng(seed, trial);
    let message = BitBlock::random(&mut rng, scheme.k_message());
    let tx = scheme.transmit(&message)?;
    let y = add_noise(&modulate(&tx), sigma, &mut rng);
    let llrs = scheme.combine(&demodulate_llr(&y, sigma))?;
    let out = adaptive_decode(&llrs, scheme.decoder(), scheme.crc(), l_max)?;
    Ok(TrialRecord {
        class: classify(&out, &message),
        list_size_used: out.list_size_used(),
        decode_time: out.decode_time,
    })
}

/// Log-spaced histogram of decode times, 20 bins per decade from 100 ns.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TimingStats {
    pub total_ns: u128,
    pub count: u64,
    bins: Vec<u64>,
}

impl TimingStats {
    const BINS_PER_DECADE: f64 = 20.0;
    const FLOOR_NS: f64 = 100.0;

    fn bin(ns: u128) -> usize {
        let x = (ns as f64).max(Self::FLOOR_NS) / Self::FLOOR_NS;
        (x.log10() * Self::BINS_PER_DECADE).floor() as usize
    }

    fn bin_upper_ns(bin: usize) -> f64 {
        Self::FLOOR_NS * 10f64.powf((bin + 1) as f64 / Self::BINS_PER_DECADE)
    }

    pub fn record(&mut self, d: Duration) {
        let ns = d.as_nanos();
        self.total_ns += ns;
        self.count += 1;
        let b = Self::bin(ns);
        if self.bins.len() <= b {
            self.bins.resize(b + 1, 0);
        }
        self.bins[b] += 1;
    }

    pub fn mean_ms(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.total_ns as f64 / self.count as f64 / 1e6
        }
    }

    /// Upper edge of the histogram bin holding quantile `q`, in ms; within
    /// 12% of the exact value.
    pub fn quantile_ms(&self, q: f64) -> f64 {
        let target = (q.clamp(0.0, 1.0) * self.count as f64).ceil().max(1.0) as u64;
        let mut seen = 0;
        for (b, &c) in self.bins.iter().enumerate() {
            seen += c;
            if seen >= target {
                return Self::bin_upper_ns(b) / 1e6;
            }
        }
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MinFailures,
    MaxTrials,
}

/// Tallies for one (code, CRC, Eb/N0, maximum list size) point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimResult {
    pub code_id: String,
    pub crc_id: String,
    pub m: usize,
    pub ebno_db: f64,
    pub l_max: usize,
    pub n_transmit: usize,
    pub trials: u64,
    pub correct: u64,
    pub undetected: u64,
    pub erasures: u64,
    pub list_size_sum: u64,
    pub stop: StopReason,
    pub timing: TimingStats,
}

/// Half width of the normal-approximation 95% interval for a rate.
pub fn ci95(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    1.96 * (p * (1.0 - p) / trials as f64).sqrt()
}

impl SimResult {
    fn rate(&self, x: u64) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            x as f64 / self.trials as f64
        }
    }

    pub fn failures(&self) -> u64 {
        self.undetected + self.erasures
    }

    pub fn uer(&self) -> f64 {
        self.rate(self.undetected)
    }

    pub fn erasure_rate(&self) -> f64 {
        self.rate(self.erasures)
    }

    pub fn tfr(&self) -> f64 {
        self.rate(self.failures())
    }

    pub fn uer_ci95(&self) -> f64 {
        ci95(self.uer(), self.trials)
    }

    pub fn erasure_ci95(&self) -> f64 {
        ci95(self.erasure_rate(), self.trials)
    }

    pub fn tfr_ci95(&self) -> f64 {
        ci95(self.tfr(), self.trials)
    }

    pub fn mean_list(&self) -> f64 {
        self.rate(self.list_size_sum)
    }

    /// Everything except timing, for reproducibility comparisons.
    pub fn counts(&self) -> (u64, u64, u64, u64, u64) {
        (
            self.trials,
            self.correct,
            self.undetected,
            self.erasures,
            self.list_size_sum,
        )
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.4},{:.6}",
            self.code_id,
            self.crc_id,
            self.m,
            self.ebno_db,
            self.l_max,
            self.trials,
            self.correct,
            self.undetected,
            self.erasures,
            self.uer(),
            self.erasure_rate(),
            self.tfr(),
            self.tfr_ci95(),
            self.mean_list(),
            self.timing.mean_ms(),
        )
    }
}

/// A configured simulation: resolved scheme plus a worker pool.
pub struct Simulator {
    config: SimConfig,
    scheme: Scheme,
    pool: rayon::ThreadPool,
}

impl Simulator {
    /// Validates the configuration and resolves the scheme before any trial
    /// runs. The stored configuration names the CRC actually used.
    pub fn new(mut config: SimConfig) -> Result<Self> {
        config.validate()?;
        let scheme = config.scheme()?;
        config.crc_id = Some(scheme.crc_id().to_string());
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(w) = config.workers {
            builder = builder.num_threads(w);
        }
        let pool = builder
            .build()
            .map_err(|e| Error::config("workers", e.to_string()))?;
        Ok(Simulator {
            config,
            scheme,
            pool,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn run_point(&self, ebno_db: f64) -> Result<SimResult> {
        let cfg = &self.config;
        let scheme = &self.scheme;
        let sigma = ChannelParams::new(ebno_db, scheme.k_message(), scheme.transmit_len()).sigma();
        let batch = (64 * self.pool.current_num_threads()).max(256) as u64;
        let mut res = SimResult {
            code_id: scheme.code_id().to_string(),
            crc_id: scheme.crc_id().to_string(),
            m: scheme.crc().degree(),
            ebno_db,
            l_max: cfg.l_max,
            n_transmit: scheme.transmit_len(),
            trials: 0,
            correct: 0,
            undetected: 0,
            erasures: 0,
            list_size_sum: 0,
            stop: StopReason::MaxTrials,
            timing: TimingStats::default(),
        };
        let mut next = 0u64;
        while next < cfg.max_trials {
            let end = (next + batch).min(cfg.max_trials);
            let records: Vec<TrialRecord> = self.pool.install(|| {
                (next..end)
                    .into_par_iter()
                    .map(|t| simulate_trial(scheme, sigma, cfg.seed, t, cfg.l_max))
                    .collect::<Result<_>>()
            })?;
            for r in records {
                res.trials += 1;
                match r.class {
                    TrialClass::Correct => res.correct += 1,
                    TrialClass::UndetectedError => res.undetected += 1,
                    TrialClass::Erasure => res.erasures += 1,
                }
                res.list_size_sum += r.list_size_used as u64;
                res.timing.record(r.decode_time);
                if res.failures() >= cfg.min_failures {
                    res.stop = StopReason::MinFailures;
                    return Ok(res);
                }
            }
            next = end;
        }
        Ok(res)
    }

    /// One result per configured Eb/N0, in order.
    pub fn run(&self) -> Result<Vec<SimResult>> {
        self.config
            .ebno_db
            .iter()
            .map(|&e| self.run_point(e))
            .collect()
    }
}

/// Single-point convenience wrapper.
pub fn run_point(config: &SimConfig, ebno_db: f64) -> Result<SimResult> {
    Simulator::new(config.clone())?.run_point(ebno_db)
}

/// Runs the configured code with each `tbcc-dso-<m>` CRC; rows ordered by
/// Eb/N0 then `m`.
pub fn sweep_crc_length(config: &SimConfig, m_list: &[usize]) -> Result<Vec<SimResult>> {
    let sims = m_list
        .iter()
        .map(|m| {
            let mut c = config.clone();
            c.crc_id = Some(format!("tbcc-dso-{m}"));
            Simulator::new(c)
        })
        .collect::<Result<Vec<_>>>()?;
    sweep(&sims, &config.ebno_db)
}

/// Runs the configured scheme at each maximum list size; rows ordered by
/// Eb/N0 then list size.
pub fn sweep_list_size(config: &SimConfig, l_max_list: &[usize]) -> Result<Vec<SimResult>> {
    let sims = l_max_list
        .iter()
        .map(|&l| {
            let mut c = config.clone();
            c.l_max = l;
            Simulator::new(c)
        })
        .collect::<Result<Vec<_>>>()?;
    sweep(&sims, &config.ebno_db)
}

fn sweep(sims: &[Simulator], ebno_db: &[f64]) -> Result<Vec<SimResult>> {
    let mut out = Vec::with_capacity(sims.len() * ebno_db.len());
    for &e in ebno_db {
        for s in sims {
            out.push(s.run_point(e)?);
        }
    }
    Ok(out)
}

/// `#` lines declaring the stopping rule and conventions behind a table.
pub fn csv_header_comments(config: &SimConfig) -> Vec<String> {
    vec![
        format!("listfec {}", env!("CARGO_PKG_VERSION")),
        format!(
            "stopping: min_failures={} TFR events or max_trials={}, whichever first",
            config.min_failures, config.max_trials
        ),
        "tfr_ci95: 1.96*sqrt(p(1-p)/trials)".into(),
        format!("seed={} rng={RNG_ALGORITHM}", config.seed),
        format!(
            "k_message={} (Eb counts message bits only)",
            config.k_message
        ),
        "mean_decode_ms: wall clock of the adaptive decode loop, machine dependent".into(),
    ]
}

pub fn to_csv(results: &[SimResult], comments: &[String]) -> String {
    let mut s = String::new();
    for c in comments {
        let _ = writeln!(s, "# {c}");
    }
    let _ = writeln!(s, "{CSV_COLUMNS}");
    for r in results {
        let _ = writeln!(s, "{}", r.csv_row());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tbcc::TBCC_RATE_FIFTH_ID;

    fn quick(code: &str, ebno: f64) -> SimConfig {
        let mut c = SimConfig::new(code, vec![ebno], 4, 7);
        c.max_trials = 300;
        c.min_failures = 10;
        c
    }

    #[test]
    fn counts_are_consistent() {
        let r = run_point(&quick(TBCC_RATE_FIFTH_ID, 1.0), 1.0).unwrap();
        assert_eq!(r.correct + r.undetected + r.erasures, r.trials);
        assert!((r.tfr() - (r.uer() + r.erasure_rate())).abs() < 1e-15);
        assert!(r.failures() <= 10);
        if r.stop == StopReason::MinFailures {
            assert_eq!(r.failures(), 10);
        }
        assert!(r.mean_list() >= 1.0 && r.mean_list() <= 4.0);
        assert!(r.timing.mean_ms() > 0.0);
    }

    #[test]
    fn noiseless_points_never_fail() {
        let mut c = quick(TBCC_RATE_FIFTH_ID, f64::INFINITY);
        c.l_max = 1;
        let r = run_point(&c, f64::INFINITY).unwrap();
        assert_eq!((r.trials, r.correct), (300, 300));
        assert_eq!(r.stop, StopReason::MaxTrials);
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let mut base = quick(TBCC_RATE_FIFTH_ID, 0.5);
        base.min_failures = 7;
        let run = |w| {
            let mut c = base.clone();
            c.workers = Some(w);
            run_point(&c, 0.5).unwrap().counts()
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn ci_formula() {
        assert_eq!(ci95(0.0, 100), 0.0);
        assert!((ci95(0.5, 100) - 0.098).abs() < 1e-12);
    }

    #[test]
    fn toml_round_trip_and_field_errors() {
        let text = r#"
code_id = "5g-pbch-polar-m24"
ebno_db = [1.0, 2.5]
l_max = 8
seed = 3
repetition_map = [1, 2]
"#;
        let c = SimConfig::from_toml_str(text).unwrap();
        assert_eq!(c.min_failures, DEFAULT_MIN_FAILURES);
        assert_eq!(c.repetition_map, Some(RepetitionSource::Counts(vec![1, 2])));
        assert_eq!(SimConfig::from_toml_str(&c.to_toml()).unwrap(), c);
        // A two-entry map does not fit the 512-bit codeword.
        assert!(matches!(c.scheme(), Err(Error::Config { .. })));

        let bad =
            SimConfig::from_toml_str("code_id = \"x\"\nebno_db = [1.0]\nl_max = 3\nseed = 1\n");
        assert!(matches!(bad, Err(Error::Config { ref field, .. }) if field == "l_max"));
        let unknown = SimConfig::from_toml_str(
            "code_id = \"x\"\nebno_db = [1.0]\nl_max = 2\nseed = 1\nspeed = 2\n",
        );
        assert!(matches!(unknown, Err(Error::Config { .. })));
        let file = SimConfig::from_toml_str(
            "code_id = \"x\"\nebno_db = [1.0]\nl_max = 2\nseed = 1\nrepetition_map = \"map.txt\"\n",
        )
        .unwrap();
        assert_eq!(
            file.repetition_map,
            Some(RepetitionSource::File("map.txt".into()))
        );
    }

    #[test]
    fn csv_layout() {
        let r = run_point(&quick(TBCC_RATE_FIFTH_ID, 2.0), 2.0).unwrap();
        let cfg = quick(TBCC_RATE_FIFTH_ID, 2.0);
        let text = to_csv(&[r], &csv_header_comments(&cfg));
        let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], CSV_COLUMNS);
        assert_eq!(lines[1].split(',').count(), CSV_COLUMNS.split(',').count());
        assert!(lines[1].starts_with("tbcc-575-623-727-561-753,tbcc-dso-11,11,2,4,"));
    }

    #[test]
    fn timing_quantiles_are_ordered() {
        let mut t = TimingStats::default();
        for us in 1..=100 {
            t.record(Duration::from_micros(us));
        }
        let (p50, p99) = (t.quantile_ms(0.5), t.quantile_ms(0.99));
        assert!(p50 <= p99);
        assert!((p50 / 0.050 - 1.0).abs() < 0.13);
        assert!((t.mean_ms() - 0.0505).abs() < 1e-12);
    }
}
