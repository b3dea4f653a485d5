//! Experiment configuration, paired policy runs and CSV summaries.
//!
//! A run is fully determined by its [`SimConfig`] and seed. For each seed one
//! [`Scenario`] (topology, item origins, workload) is generated and then
//! replayed under every requested policy, so paired runs differ only in the
//! replacement decision.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};

use crate::cache::Policy;
use crate::metrics::{self, MetricsSet};
use crate::netsim::{assign_origins, build_topology, NetConfig, SimWorld, Topology};
use crate::seed::{self, stream};
use crate::workload::{Workload, WorkloadConfig};
use crate::{Error, NodeId, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyChoice {
    Lru,
    Arm,
    Both,
}

impl PolicyChoice {
    pub fn policies(self) -> &'static [Policy] {
        match self {
            PolicyChoice::Lru => &[Policy::Lru],
            PolicyChoice::Arm => &[Policy::Arm],
            PolicyChoice::Both => &[Policy::Arm, Policy::Lru],
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            PolicyChoice::Lru => "lru",
            PolicyChoice::Arm => "arm",
            PolicyChoice::Both => "both",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub nodes: usize,
    pub field_width: f64,
    pub field_height: f64,
    pub radio_range: f64,
    /// Catalog size.
    pub catalog: usize,
    pub cache_capacity: usize,
    pub min_support: f64,
    pub eta: f64,
    /// Session gap threshold, seconds.
    pub gamma: f64,
    pub ttl: u32,
    pub mining_period: f64,
    pub log_capacity: usize,
    /// Sessions per node per second.
    pub session_rate: f64,
    pub per_hop_latency: f64,
    pub duration: f64,
    /// First seed.
    pub seed: u64,
    /// Number of consecutive seeds starting at `seed`.
    pub seeds: u64,
    pub policy: PolicyChoice,
    pub out: PathBuf,
    /// Also write `schedule_<seed>.csv` for each seed.
    pub dump_schedule: bool,
    /// Also write `<policy>_<seed>.trace.csv` for each run.
    pub dump_trace: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            nodes: 10,
            field_width: 500.0,
            field_height: 500.0,
            radio_range: 250.0,
            catalog: 100,
            cache_capacity: 10,
            min_support: 0.8,
            eta: 0.8,
            gamma: 0.5,
            ttl: 8,
            mining_period: 100.0,
            log_capacity: 50,
            session_rate: 0.1,
            per_hop_latency: 0.01,
            duration: 5000.0,
            seed: 1,
            seeds: 1,
            policy: PolicyChoice::Both,
            out: PathBuf::from("results"),
            dump_schedule: false,
            dump_trace: false,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!("invalid value {value:?} for {key}"))),
    }
}

impl SimConfig {
    pub fn seed_list(&self) -> impl Iterator<Item = u64> {
        let first = self.seed;
        (0..self.seeds).map(move |i| first.wrapping_add(i))
    }

    pub fn workload_config(&self, seed: u64) -> WorkloadConfig {
        WorkloadConfig {
            n: self.catalog,
            eta: self.eta,
            session_rate: self.session_rate,
            rng_seed: seed,
        }
    }

    pub fn net_config(&self, policy: Policy) -> NetConfig {
        NetConfig {
            policy,
            cache_capacity: self.cache_capacity,
            initial_ttl: self.ttl,
            per_hop_latency: self.per_hop_latency,
            log_capacity: self.log_capacity,
            gamma: self.gamma,
            min_support: self.min_support,
            mining_period: self.mining_period,
        }
    }

    /// Set one field by name. Accepts `snake_case` or `kebab-case` keys.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        let k = key.as_str();
        match k {
            "nodes" => self.nodes = parse_value(k, value)?,
            "field_width" => self.field_width = parse_value(k, value)?,
            "field_height" => self.field_height = parse_value(k, value)?,
            "radio_range" => self.radio_range = parse_value(k, value)?,
            "catalog" => self.catalog = parse_value(k, value)?,
            "cache_capacity" => self.cache_capacity = parse_value(k, value)?,
            "min_support" => self.min_support = parse_value(k, value)?,
            "eta" => self.eta = parse_value(k, value)?,
            "gamma" => self.gamma = parse_value(k, value)?,
            "ttl" => self.ttl = parse_value(k, value)?,
            "mining_period" => self.mining_period = parse_value(k, value)?,
            "log_capacity" => self.log_capacity = parse_value(k, value)?,
            "session_rate" => self.session_rate = parse_value(k, value)?,
            "per_hop_latency" => self.per_hop_latency = parse_value(k, value)?,
            "duration" => self.duration = parse_value(k, value)?,
            "seed" => self.seed = parse_value(k, value)?,
            "seeds" => self.seeds = parse_value(k, value)?,
            "policy" => {
                self.policy = PolicyChoice::from_str(value, true)
                    .map_err(|_| Error::Config(format!("invalid value {value:?} for policy")))?
            }
            "out" => self.out = PathBuf::from(value),
            "dump_schedule" => self.dump_schedule = parse_bool(k, value)?,
            "dump_trace" => self.dump_trace = parse_bool(k, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Apply a flat `key = value` file. `#` starts a comment.
    pub fn apply_file_str(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {}", i + 1, strip_prefix(&e))))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, msg: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Config(msg.to_string()))
            }
        }
        check(self.nodes >= 1, "nodes must be at least 1")?;
        check(self.field_width > 0.0 && self.field_height > 0.0, "field dimensions must be positive")?;
        check(self.radio_range >= 0.0, "radio_range must be nonnegative")?;
        check(self.catalog >= 1, "catalog must be at least 1")?;
        check(self.cache_capacity >= 1, "cache_capacity must be at least 1")?;
        check(self.min_support > 0.0 && self.min_support <= 1.0, "min_support must be in (0, 1]")?;
        check(self.eta > 0.0 && self.eta <= 1.0, "eta must be in (0, 1]")?;
        check(self.gamma >= 0.0, "gamma must be nonnegative")?;
        check(self.ttl >= 1, "ttl must be at least 1")?;
        check(self.mining_period > 0.0, "mining_period must be positive")?;
        check(self.log_capacity >= 1, "log_capacity must be at least 1")?;
        check(self.session_rate > 0.0 && self.session_rate.is_finite(), "session_rate must be positive")?;
        check(self.per_hop_latency > 0.0, "per_hop_latency must be positive")?;
        check(self.duration > 0.0 && self.duration.is_finite(), "duration must be positive")?;
        check(self.seeds >= 1, "seeds must be at least 1")?;
        Ok(())
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Config(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Resolved configuration in config-file syntax.
impl fmt::Display for SimConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes = {}", self.nodes)?;
        writeln!(f, "field_width = {}", self.field_width)?;
        writeln!(f, "field_height = {}", self.field_height)?;
        writeln!(f, "radio_range = {}", self.radio_range)?;
        writeln!(f, "catalog = {}", self.catalog)?;
        writeln!(f, "cache_capacity = {}", self.cache_capacity)?;
        writeln!(f, "min_support = {}", self.min_support)?;
        writeln!(f, "eta = {}", self.eta)?;
        writeln!(f, "gamma = {}", self.gamma)?;
        writeln!(f, "ttl = {}", self.ttl)?;
        writeln!(f, "mining_period = {}", self.mining_period)?;
        writeln!(f, "log_capacity = {}", self.log_capacity)?;
        writeln!(f, "session_rate = {}", self.session_rate)?;
        writeln!(f, "per_hop_latency = {}", self.per_hop_latency)?;
        writeln!(f, "duration = {}", self.duration)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "seeds = {}", self.seeds)?;
        writeln!(f, "policy = {}", self.policy.as_str())?;
        writeln!(f, "out = {}", self.out.display())?;
        writeln!(f, "dump_schedule = {}", self.dump_schedule)?;
        write!(f, "dump_trace = {}", self.dump_trace)
    }
}

/// Command-line overrides; every flag mirrors a [`SimConfig`] field.
#[derive(Args, Clone, Debug, Default)]
pub struct RunArgs {
    /// Flat `key = value` file applied before the flags.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub field_width: Option<f64>,
    #[arg(long)]
    pub field_height: Option<f64>,
    #[arg(long)]
    pub radio_range: Option<f64>,
    #[arg(long)]
    pub catalog: Option<usize>,
    #[arg(long)]
    pub cache_capacity: Option<usize>,
    #[arg(long)]
    pub min_support: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub ttl: Option<u32>,
    #[arg(long)]
    pub mining_period: Option<f64>,
    #[arg(long)]
    pub log_capacity: Option<usize>,
    #[arg(long)]
    pub session_rate: Option<f64>,
    #[arg(long)]
    pub per_hop_latency: Option<f64>,
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run this many consecutive seeds starting at --seed.
    #[arg(long)]
    pub seeds: Option<u64>,
    #[arg(long, value_enum)]
    pub policy: Option<PolicyChoice>,
    /// Output directory for CSVs.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Write the generated request schedule per seed.
    #[arg(long)]
    pub dump_schedule: bool,
    /// Write the full event trace per run.
    #[arg(long)]
    pub dump_trace: bool,
}

impl RunArgs {
    /// Defaults, then the config file, then flags; validated.
    pub fn resolve(&self) -> Result<SimConfig> {
        let mut config = SimConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            config.apply_file_str(&text)?;
        }
        macro_rules! flag {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    config.$field = v;
                }
            )*};
        }
        flag!(
            nodes, field_width, field_height, radio_range, catalog, cache_capacity, min_support, eta,
            gamma, ttl, mining_period, log_capacity, session_rate, per_hop_latency, duration, seed,
            seeds, policy, out
        );
        config.dump_schedule |= self.dump_schedule;
        config.dump_trace |= self.dump_trace;
        config.validate()?;
        Ok(config)
    }
}

#[derive(clap::Parser)]
#[command(no_binary_name = true)]
struct ArgsOnly {
    #[command(flatten)]
    run: RunArgs,
}

/// Parse run flags (without the program name) into a validated config.
pub fn parse_config<I, T>(args: I) -> Result<SimConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let parsed = ArgsOnly::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    parsed.run.resolve()
}

/// Topology, origins and workload for one seed, shared by every policy.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub seed: u64,
    pub topology: Topology,
    pub origins: Vec<NodeId>,
    pub workload: Workload,
}

impl Scenario {
    pub fn build(config: &SimConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let topology = build_topology(
            config.nodes,
            (config.field_width, config.field_height),
            config.radio_range,
            &mut seed::rng(seed, stream::TOPOLOGY, 0),
        );
        let origins = assign_origins(config.catalog, config.nodes, &mut seed::rng(seed, stream::ORIGINS, 0));
        let workload = Workload::generate(&config.workload_config(seed), config.nodes, config.duration)?;
        Ok(Scenario {
            seed,
            topology,
            origins,
            workload,
        })
    }

    /// A fresh world for `policy` over this scenario.
    pub fn world(&self, config: &SimConfig, policy: Policy) -> SimWorld {
        SimWorld::new(
            self.topology.clone(),
            self.origins.clone(),
            config.net_config(policy),
            self.seed,
        )
    }

    pub fn run(&self, config: &SimConfig, policy: Policy) -> Result<MetricsSet> {
        self.world(config, policy).run(&self.workload, config.duration)
    }
}

/// One line of the run table.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub policy: Policy,
    pub seed: u64,
    pub final_hit_ratio: f64,
    pub requests: usize,
    pub messages: u64,
    pub mean_latency: Option<f64>,
}

impl SummaryRow {
    pub fn from_metrics(m: &MetricsSet) -> Self {
        SummaryRow {
            policy: m.policy,
            seed: m.seed,
            final_hit_ratio: m.final_hit_ratio(),
            requests: m.requests(),
            messages: m.messages_sent,
            mean_latency: m.mean_first_reply_latency(),
        }
    }
}

pub fn csv_path(out: &Path, policy: Policy, seed: u64) -> PathBuf {
    out.join(format!("{policy}_{seed}.csv"))
}

/// Run every seed under every selected policy, writing one CSV per run.
pub fn run_experiment(config: &SimConfig) -> Result<Vec<SummaryRow>> {
    config.validate()?;
    fs::create_dir_all(&config.out).map_err(|e| Error::io(&config.out, e))?;
    let mut rows = Vec::new();
    for seed in config.seed_list() {
        let scenario = Scenario::build(config, seed)?;
        if config.dump_schedule {
            scenario
                .workload
                .write_schedule_csv(&config.out.join(format!("schedule_{seed}.csv")))?;
        }
        for &policy in config.policy.policies() {
            let mut world = scenario.world(config, policy);
            if config.dump_trace {
                world.enable_trace();
            }
            let metrics = world.run(&scenario.workload, config.duration)?;
            metrics.write_csv(&csv_path(&config.out, policy, seed))?;
            if config.dump_trace {
                world.write_trace_csv(&config.out.join(format!("{policy}_{seed}.trace.csv")))?;
            }
            rows.push(SummaryRow::from_metrics(&metrics));
        }
    }
    Ok(rows)
}

/// Tab-separated run table with a header line.
pub fn format_summary(rows: &[SummaryRow]) -> String {
    let mut out = String::from("policy\tseed\tfinal_hit_ratio\trequests\tmessages\tmean_latency\n");
    for r in rows {
        let latency = r
            .mean_latency
            .map_or_else(|| "-".to_string(), |l| format!("{l:.6}"));
        out.push_str(&format!(
            "{}\t{}\t{:.6}\t{}\t{}\t{}\n",
            r.policy, r.seed, r.final_hit_ratio, r.requests, r.messages, latency
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolicyStats {
    pub policy: Policy,
    pub runs: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub sd: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub stats: Vec<PolicyStats>,
    /// Seeds where ARM's final ratio beats LRU's, out of seeds with both.
    pub arm_wins: usize,
    pub paired: usize,
    /// Final ratio per (policy, seed).
    pub finals: BTreeMap<(Policy, u64), f64>,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<8}{:>6}{:>12}{:>12}", "policy", "runs", "mean", "sd")?;
        for s in &self.stats {
            writeln!(f, "{:<8}{:>6}{:>12.6}{:>12.6}", s.policy, s.runs, s.mean, s.sd)?;
        }
        write!(f, "arm wins: {}/{}", self.arm_wins, self.paired)
    }
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Policy and seed from a `<policy>_<seed>.csv` file name.
fn identity_from_name(path: &Path) -> Option<(Policy, u64)> {
    let stem = path.file_stem()?.to_str()?;
    let (policy, seed) = stem.split_once('_')?;
    Some((policy.parse().ok()?, seed.parse().ok()?))
}

/// Aggregate final hit ratios across metrics CSVs.
pub fn summarize<P: AsRef<Path>>(paths: &[P]) -> Result<Comparison> {
    if paths.is_empty() {
        return Err(Error::NoInput);
    }
    let mut finals = BTreeMap::new();
    for path in paths {
        let path = path.as_ref();
        let rows = metrics::read_csv(path)?;
        let identity = match rows.first() {
            Some(r) => (r.policy, r.seed),
            None => identity_from_name(path).ok_or_else(|| Error::Malformed {
                path: path.to_path_buf(),
                line: 1,
                message: "no rows and no <policy>_<seed> file name".into(),
            })?,
        };
        for (i, r) in rows.iter().enumerate() {
            if (r.policy, r.seed) != identity {
                return Err(Error::Malformed {
                    path: path.to_path_buf(),
                    line: i + 2,
                    message: "policy/seed differs from the first row".into(),
                });
            }
        }
        let ratio = if rows.is_empty() {
            0.0
        } else {
            rows.iter().filter(|r| r.hit).count() as f64 / rows.len() as f64
        };
        finals.insert(identity, ratio);
    }

    let mut by_policy: BTreeMap<Policy, Vec<f64>> = BTreeMap::new();
    for (&(policy, _), &ratio) in &finals {
        by_policy.entry(policy).or_default().push(ratio);
    }
    let stats = by_policy
        .into_iter()
        .map(|(policy, values)| {
            let (mean, sd) = mean_sd(&values);
            PolicyStats {
                policy,
                runs: values.len(),
                mean,
                sd,
            }
        })
        .collect();

    let mut arm_wins = 0;
    let mut paired = 0;
    for (&(policy, seed), &arm) in &finals {
        if policy != Policy::Arm {
            continue;
        }
        if let Some(&lru) = finals.get(&(Policy::Lru, seed)) {
            paired += 1;
            if arm > lru {
                arm_wins += 1;
            }
        }
    }
    Ok(Comparison {
        stats,
        arm_wins,
        paired,
        finals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_arguments_gives_defaults() {
        let c = parse_config(Vec::<String>::new()).unwrap();
        assert_eq!(c, SimConfig::default());
        assert_eq!(c.nodes, 10);
        assert_eq!(c.cache_capacity, 10);
        assert_eq!(c.min_support, 0.8);
        assert_eq!(c.eta, 0.8);
        assert_eq!(c.duration, 5000.0);
        assert_eq!((c.field_width, c.field_height), (500.0, 500.0));
    }

    #[test]
    fn nodes_flag_overrides_only_nodes() {
        let c = parse_config(["--nodes", "50"]).unwrap();
        assert_eq!(c, SimConfig { nodes: 50, ..Default::default() });
    }

    #[test]
    fn eta_out_of_range_is_usage_error() {
        let err = parse_config(["--eta", "1.5"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        assert_eq!(parse_config(["--colour", "blue"]).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn file_then_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sim.conf");
        fs::write(&path, "# larger setup\nnodes = 50\nduration = 1000\npolicy = lru\n").unwrap();
        let c = parse_config(["--config", path.to_str().unwrap(), "--duration", "20"]).unwrap();
        assert_eq!(c.nodes, 50);
        assert_eq!(c.duration, 20.0);
        assert_eq!(c.policy, PolicyChoice::Lru);
    }

    #[test]
    fn unknown_file_key_rejected() {
        let mut c = SimConfig::default();
        let err = c.apply_file_str("nodes = 3\nwarp = 9\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unreadable_file_is_usage_error() {
        let err = parse_config(["--config", "/nonexistent/sim.conf"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn display_round_trips_through_file_syntax() {
        let c = SimConfig {
            nodes: 7,
            gamma: 0.25,
            policy: PolicyChoice::Arm,
            dump_trace: true,
            ..Default::default()
        };
        let mut back = SimConfig::default();
        back.apply_file_str(&c.to_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn seed_list_expands() {
        let c = SimConfig { seed: 5, seeds: 3, ..Default::default() };
        assert_eq!(c.seed_list().collect::<Vec<_>>(), vec![5, 6, 7]);
    }

    #[test]
    fn mean_sd_small_cases() {
        assert_eq!(mean_sd(&[0.25]), (0.25, 0.0));
        let (m, s) = mean_sd(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn identity_from_file_name() {
        assert_eq!(identity_from_name(Path::new("out/arm_12.csv")), Some((Policy::Arm, 12)));
        assert_eq!(identity_from_name(Path::new("out/x.csv")), None);
    }
}
