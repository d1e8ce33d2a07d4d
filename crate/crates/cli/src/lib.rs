//! Experiment harness: each subcommand reads a network config, runs one
//! experiment, writes a CSV into the output directory and returns a
//! human-readable summary.
//!
//! Every CSV starts with a `# experiment=... seed=...` comment line, and all
//! randomness is drawn from a single generator seeded by `--seed`, so equal
//! inputs give byte-identical files.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tandem_core::config::{Config, NetworkConfig};
use tandem_core::network::{
    activity_signal, channel_trace, identify_senders, run_offset_discovery, simulate_subslot, HandshakeConfig,
    NodeView, Simulation, SlotRecord,
};
use tandem_core::protocol::{construct_sequences, CheckMode, Direction, DutyFactor, InvarianceBudget, SequenceSet};
use tandem_core::rates::{achievable_point, max_symmetric_rate, outer_point, region_boundary, Scheme, SearchConfig};
use tandem_core::{format_rational, parse_rational, Rational};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or config; exit status 2.
    #[error("usage: {0}")]
    Usage(String),
    /// The experiment ran but its outcome is a failure (e.g. decoding
    /// errors); exit status 1. The summary is still reported.
    #[error("{summary}")]
    Failed { summary: String },
    #[error(transparent)]
    Core(#[from] tandem_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(tandem_core::Error::Parse { .. }) => 2,
            CliError::Core(tandem_core::Error::InvalidArgument(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Construct,
    VerifySi,
    Simulate,
    IdentifySweep,
    DiscoverOffset,
    Regions,
    SymmetricRates,
    Boundary,
    ExpansionCheck,
}

impl Experiment {
    fn name(self) -> &'static str {
        match self {
            Experiment::Construct => "construct",
            Experiment::VerifySi => "verify-si",
            Experiment::Simulate => "simulate",
            Experiment::IdentifySweep => "identify-sweep",
            Experiment::DiscoverOffset => "discover-offset",
            Experiment::Regions => "regions",
            Experiment::SymmetricRates => "symmetric-rates",
            Experiment::Boundary => "boundary",
            Experiment::ExpansionCheck => "expansion-check",
        }
    }
}

#[derive(Clone, Debug, Parser)]
#[command(name = "tandem", about = "Protocol-sequence experiments on tandem collision networks")]
pub struct Args {
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// Network config (JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for CSV outputs; created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub periods: Option<usize>,
    /// Expansion factor for slot-asynchronous operation.
    #[arg(long)]
    pub m: Option<usize>,
    /// Sub-slots per slot.
    #[arg(long)]
    pub g: Option<usize>,
    /// Duty lattice step `1/L` for the rate optimizers.
    #[arg(long)]
    pub grid_step: Option<String>,
    /// Sample count: offset tuples for sweeps, boundary resolution for
    /// `boundary`, invariance samples for `verify-si`.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Override duties, e.g. `1/3,1/3,2/3`.
    #[arg(long)]
    pub duties: Option<String>,
    /// Override rates, e.g. `4/27,4/27`.
    #[arg(long)]
    pub rates: Option<String>,
    /// Override offsets, e.g. `0,5,3,0`.
    #[arg(long)]
    pub offsets: Option<String>,
}

/// What an experiment produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub summary: String,
    pub files: Vec<PathBuf>,
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn parse_duties(text: &str) -> Result<Vec<DutyFactor>> {
    split_list(text)
        .iter()
        .map(|s| s.parse::<DutyFactor>().map_err(|e| CliError::Usage(format!("--duties: {e}"))))
        .collect()
}

/// Loads the config and applies command-line overrides.
fn load_config(args: &Args) -> Result<Config> {
    let path = args
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{} needs --config", args.experiment.name())))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let base = Config::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut raw: NetworkConfig = base.raw.clone();
    let mut touched = false;
    if let Some(d) = &args.duties {
        raw.duties = Some(split_list(d));
        touched = true;
    }
    if let Some(r) = &args.rates {
        raw.rates = Some(split_list(r));
        touched = true;
    }
    if let Some(o) = &args.offsets {
        let offsets = split_list(o)
            .iter()
            .map(|s| s.parse::<i64>().map_err(|_| CliError::Usage(format!("--offsets: bad value {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        raw.offsets = Some(offsets);
        touched = true;
    }
    for (slot, value) in [(&mut raw.periods, args.periods), (&mut raw.m, args.m), (&mut raw.g, args.g)] {
        if value.is_some() {
            *slot = value;
            touched = true;
        }
    }
    if !touched {
        return Ok(base);
    }
    Config::from_raw(raw).map_err(|e| CliError::Usage(format!("after command-line overrides: {e}")))
}

/// Duties from `--duties` or the config, for experiments that need no
/// network.
fn load_duties(args: &Args) -> Result<Vec<DutyFactor>> {
    if let Some(d) = &args.duties {
        return parse_duties(d);
    }
    let cfg = load_config(args)?;
    Ok(cfg.require_duties().map_err(|e| CliError::Usage(e.to_string()))?.to_vec())
}

fn build_set(duties: &[DutyFactor]) -> Result<SequenceSet> {
    let common = DutyFactor::common_denominator(duties)?;
    Ok(construct_sequences(&common)?)
}

fn search_config(args: &Args) -> Result<SearchConfig> {
    let mut cfg = SearchConfig {
        seed: args.seed,
        ..SearchConfig::default()
    };
    if let Some(step) = &args.grid_step {
        cfg.grid_step = parse_rational(step).map_err(|e| CliError::Usage(format!("--grid-step: {e}")))?;
    }
    Ok(cfg)
}

/// Six significant digits, without trailing zeros.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    format!("{rounded}")
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

struct CsvOut {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
}

impl CsvOut {
    fn create(dir: &Path, name: &str, experiment: Experiment, args: &Args, header: &[&str]) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        let mut file = BufWriter::new(File::create(&path)?);
        let config = args
            .config
            .as_ref()
            .and_then(|p| p.file_name())
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "-".into());
        writeln!(file, "# experiment={} seed={} config={config}", experiment.name(), args.seed)?;
        let mut writer = csv::Writer::from_writer(file);
        writer.write_record(header)?;
        Ok(CsvOut { path, writer })
    }

    fn row<I, T>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    fn finish(mut self) -> Result<PathBuf> {
        self.writer.flush()?;
        Ok(self.path)
    }
}

/// Runs one experiment.
pub fn run(args: &Args) -> Result<Report> {
    match args.experiment {
        Experiment::Construct => construct(args),
        Experiment::VerifySi => verify_si(args),
        Experiment::Simulate => simulate(args),
        Experiment::IdentifySweep => identify_sweep(args),
        Experiment::DiscoverOffset => discover(args),
        Experiment::Regions => regions(args),
        Experiment::SymmetricRates => symmetric(args),
        Experiment::Boundary => boundary(args),
        Experiment::ExpansionCheck => expansion(args),
    }
}

fn construct(args: &Args) -> Result<Report> {
    let set = build_set(&load_duties(args)?)?;
    let mut out = CsvOut::create(&args.out, "sequences.csv", args.experiment, args, &["node", "duty", "bits"])?;
    let mut summary = format!("period {}\n", set.period());
    for (k, s) in set.sequences().iter().enumerate() {
        out.row([(k + 1).to_string(), s.duty().to_string(), s.to_string()])?;
        writeln!(summary, "s{} ({}): {s}", k + 1, s.duty()).unwrap();
    }
    Ok(Report {
        summary,
        files: vec![out.finish()?],
    })
}

fn verify_si(args: &Args) -> Result<Report> {
    let set = build_set(&load_duties(args)?)?;
    let budget = InvarianceBudget {
        seed: args.seed,
        samples: args.samples.unwrap_or(InvarianceBudget::default().samples),
        ..InvarianceBudget::default()
    };
    let report = set.check_shift_invariance(&budget);
    let mode = match &report.mode {
        CheckMode::Exhaustive => "exhaustive".to_string(),
        CheckMode::Sampled { samples, .. } => format!("sampled({samples})"),
    };
    let witness = report
        .witness
        .as_ref()
        .map(|w| {
            format!(
                "subset {:?}: offsets {:?} -> {}, offsets {:?} -> {}",
                w.subset, w.offsets_a, w.value_a, w.offsets_b, w.value_b
            )
        })
        .unwrap_or_default();
    let mut out = CsvOut::create(
        &args.out,
        "shift_invariance.csv",
        args.experiment,
        args,
        &["invariant", "mode", "tuples_checked", "witness"],
    )?;
    out.row([report.invariant.to_string(), mode.clone(), report.tuples_checked.to_string(), witness.clone()])?;
    let mut summary = format!(
        "shift-invariant: {}\nmode: {mode}\ntuples checked: {}\n",
        report.invariant, report.tuples_checked
    );
    if let CheckMode::Sampled { note, .. } = &report.mode {
        writeln!(summary, "note: {note}").unwrap();
    }
    if !witness.is_empty() {
        writeln!(summary, "witness: {witness}").unwrap();
    }
    Ok(Report {
        summary,
        files: vec![out.finish()?],
    })
}

/// The config's offsets followed by seeded random tuples, `samples` in all.
fn offset_tuples(cfg: &Config, args: &Args, period: usize, default_samples: usize) -> Vec<Vec<i64>> {
    let samples = args.samples.unwrap_or(default_samples).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut tuples = vec![cfg.offsets()];
    while tuples.len() < samples {
        tuples.push((0..cfg.spec.nodes()).map(|_| rng.random_range(0..period as i64)).collect());
    }
    tuples
}

fn simulate(args: &Args) -> Result<Report> {
    let cfg = load_config(args)?;
    let set = build_set(cfg.require_duties().map_err(|e| CliError::Usage(e.to_string()))?)?;
    let rates = cfg.require_rates().map_err(|e| CliError::Usage(e.to_string()))?.to_vec();
    let field = cfg.field();
    let sim = match Simulation::new(&cfg.spec, &set, &field, &rates) {
        Ok(sim) => sim,
        Err(e) => {
            return Err(CliError::Failed {
                summary: format!("rates rejected at setup: {e}"),
            })
        }
    };
    let tuples = offset_tuples(&cfg, args, set.period(), 1);
    let mut out = CsvOut::create(
        &args.out,
        "simulate.csv",
        args.experiment,
        args,
        &["trial", "offsets", "zero_error", "missing", "symbol_errors", "failure"],
    )?;
    let mut files = Vec::new();
    let mut errors = 0;
    let mut first_failure = None;
    for (trial, offsets) in tuples.iter().enumerate() {
        let seed = args.seed.wrapping_add(trial as u64);
        let (ok, missing, wrong, failure) = match sim.run(offsets, cfg.periods(), seed) {
            Ok(outcome) => {
                if trial == 0 {
                    let path = args.out.join("trace.csv");
                    outcome.trace.write_csv(BufWriter::new(File::create(&path)?))?;
                    files.push(path);
                }
                let missing: usize = outcome.deliveries.iter().map(|d| d.missing).sum();
                let wrong: usize = outcome.deliveries.iter().map(|d| d.symbol_errors).sum();
                (outcome.is_zero_error(), missing, wrong, String::new())
            }
            Err(e) => (false, 0, 0, e.to_string()),
        };
        if !ok {
            errors += 1;
            if first_failure.is_none() {
                let what = if failure.is_empty() {
                    format!("{missing} generations missing, {wrong} wrong symbols")
                } else {
                    failure.clone()
                };
                first_failure = Some(format!("offsets {offsets:?}: {what}"));
            }
        }
        out.row([
            trial.to_string(),
            join(offsets, " "),
            ok.to_string(),
            missing.to_string(),
            wrong.to_string(),
            failure,
        ])?;
    }
    files.insert(0, out.finish()?);
    let mut summary = format!(
        "rates: {}\nperiods: {}\nerrors: {errors}/{}\n",
        join(rates.iter().map(format_rational), ", "),
        cfg.periods(),
        tuples.len()
    );
    if let Some(f) = first_failure {
        writeln!(summary, "first failure: {f}").unwrap();
        return Err(CliError::Failed { summary });
    }
    Ok(Report { summary, files })
}

fn identify_sweep(args: &Args) -> Result<Report> {
    let cfg = load_config(args)?;
    let set = build_set(cfg.require_duties().map_err(|e| CliError::Usage(e.to_string()))?)?;
    let p = set.period();
    let tuples = offset_tuples(&cfg, args, p, 100);
    let m = set.len();
    let mut stats = vec![(0usize, 0usize, 0usize); m]; // packets, mislabels, inconsistent windows
    for offsets in &tuples {
        let trace = channel_trace(&set, offsets, 2 * p + p)?;
        for i in 1..=m {
            let own = offsets[i - 1].rem_euclid(p as i64) as usize;
            let signal = activity_signal(&trace, i)?;
            let view = NodeView::from_set(&set, i, own, own)?;
            match identify_senders(&signal, &view) {
                Ok(labels) => {
                    for (l, label) in labels.labels.iter().enumerate() {
                        let truth = match trace.record(own + l, i) {
                            SlotRecord::Receive { from, .. } => Some(from),
                            _ => None,
                        };
                        stats[i - 1].0 += truth.is_some() as usize;
                        stats[i - 1].1 += (*label != truth) as usize;
                    }
                }
                Err(_) => stats[i - 1].2 += 1,
            }
        }
    }
    let mut out = CsvOut::create(
        &args.out,
        "identify.csv",
        args.experiment,
        args,
        &["node", "trials", "packets", "mislabels", "unresolved"],
    )?;
    let mut summary = String::new();
    let mut bad = 0;
    for (k, (packets, mislabels, unresolved)) in stats.iter().enumerate() {
        out.row([
            (k + 1).to_string(),
            tuples.len().to_string(),
            packets.to_string(),
            mislabels.to_string(),
            unresolved.to_string(),
        ])?;
        writeln!(summary, "node {}: {packets} packets, {mislabels} mislabels, {unresolved} unresolved", k + 1).unwrap();
        bad += mislabels + unresolved;
    }
    writeln!(summary, "mislabels: {bad} over {} offset tuples", tuples.len()).unwrap();
    let files = vec![out.finish()?];
    if bad > 0 {
        return Err(CliError::Failed { summary });
    }
    Ok(Report { summary, files })
}

fn discover(args: &Args) -> Result<Report> {
    let cfg = load_config(args)?;
    let set = build_set(cfg.require_duties().map_err(|e| CliError::Usage(e.to_string()))?)?;
    let p = set.period() as i64;
    let field = cfg.field();
    let tuples = offset_tuples(&cfg, args, set.period(), 100);
    let mut out = CsvOut::create(
        &args.out,
        "discovery.csv",
        args.experiment,
        args,
        &["trial", "transmitter", "receiver", "true_offset", "found", "consistent", "error"],
    )?;
    let (mut runs, mut failures) = (0, 0);
    let m = set.len();
    for (trial, offsets) in tuples.iter().enumerate() {
        for tx in 1..=m {
            for rx in [tx.wrapping_sub(1), tx + 1].into_iter().filter(|&r| (1..=m).contains(&r)) {
                let hc = HandshakeConfig {
                    seed: args.seed.wrapping_add(trial as u64),
                    ..HandshakeConfig::default()
                };
                let truth = offsets[tx - 1].rem_euclid(p);
                let slots = |o: i64| -> Vec<i64> { (0..p).filter(|&k| set.bit(tx as isize, k - o)).collect() };
                let (found, ok, err) = match run_offset_discovery(&set, offsets, tx, rx, &field, &hc) {
                    Ok(d) => (d.offset.to_string(), slots(d.offset as i64) == slots(truth), String::new()),
                    Err(e) => (String::new(), false, e.to_string()),
                };
                runs += 1;
                failures += (!ok) as usize;
                out.row([
                    trial.to_string(),
                    tx.to_string(),
                    rx.to_string(),
                    truth.to_string(),
                    found,
                    ok.to_string(),
                    err,
                ])?;
            }
        }
    }
    let summary = format!("handshakes: {runs}\nfailures: {failures}/{runs}\n");
    let files = vec![out.finish()?];
    if failures > 0 {
        return Err(CliError::Failed { summary });
    }
    Ok(Report { summary, files })
}

fn regions(args: &Args) -> Result<Report> {
    let cfg = load_config(args)?;
    let duties = cfg.require_duties().map_err(|e| CliError::Usage(e.to_string()))?;
    let rates = cfg.require_rates().map_err(|e| CliError::Usage(e.to_string()))?;
    let f: Vec<Rational> = duties.iter().map(DutyFactor::to_rational).collect();
    let ach = achievable_point(&cfg.spec, &f, rates)?;
    let outer = outer_point(&cfg.spec, &f, rates)?;
    let mut out = CsvOut::create(&args.out, "regions.csv", args.experiment, args, &["region", "duties", "rates", "member"])?;
    let fd = join(f.iter().map(format_rational), " ");
    let rd = join(rates.iter().map(format_rational), " ");
    out.row(["achievable", fd.as_str(), rd.as_str(), &ach.to_string()])?;
    out.row(["outer", fd.as_str(), rd.as_str(), &outer.to_string()])?;
    let mut files = vec![out.finish()?];
    let mut summary = format!(
        "duties: {fd}\nrates: {rd}\nachievable: {ach}\nouter bound: {outer}\nbi-directional: {}\n",
        cfg.spec.is_bidirectional()
    );
    if cfg.spec.source_count() == 2 {
        let (path, text) = write_boundary(args, &cfg, 20)?;
        files.push(path);
        summary.push_str(&text);
    }
    Ok(Report { summary, files })
}

fn write_boundary(args: &Args, cfg: &Config, resolution: usize) -> Result<(PathBuf, String)> {
    let search = search_config(args)?;
    let mut out = CsvOut::create(&args.out, "boundary.csv", args.experiment, args, &["R1", "R2", "scheme"])?;
    let mut summary = String::new();
    for scheme in [Scheme::Capacity, Scheme::PureAloha, Scheme::SlottedAloha, Scheme::NcSlottedAloha] {
        let points = region_boundary(&cfg.spec, scheme, resolution, &search)?;
        for p in &points {
            let (r1, r2) = match p.exact {
                Some((a, b)) => (format_rational(&a), format_rational(&b)),
                None => (sig6(p.r1), sig6(p.r2)),
            };
            out.row([r1, r2, scheme.name().to_string()])?;
        }
        let (first, last) = (&points[0], &points[points.len() - 1]);
        writeln!(
            summary,
            "{}: R2 at R1=0 is {}, R1 max is {}",
            scheme,
            sig6(first.r2),
            sig6(last.r1)
        )
        .unwrap();
    }
    Ok((out.finish()?, summary))
}

fn boundary(args: &Args) -> Result<Report> {
    let cfg = load_config(args)?;
    let (path, summary) = write_boundary(args, &cfg, args.samples.unwrap_or(40).max(1))?;
    Ok(Report {
        summary,
        files: vec![path],
    })
}

fn symmetric(args: &Args) -> Result<Report> {
    let cfg = load_config(args)?;
    let search = search_config(args)?;
    let mut out = CsvOut::create(&args.out, "symmetric.csv", args.experiment, args, &["scheme", "rate", "witness_params"])?;
    let mut summary = String::new();
    for scheme in Scheme::ALL {
        let res = max_symmetric_rate(&cfg.spec, scheme, &search)?;
        let rate = match res.exact {
            Some(r) => format_rational(&r),
            None => sig6(res.rate),
        };
        let witness = match &res.exact_witness {
            Some(w) => join(w.iter().map(format_rational), " "),
            None => join(res.witness.iter().map(|&x| sig6(x)), " "),
        };
        out.row([scheme.name(), rate.as_str(), witness.as_str()])?;
        let exact = res.exact.map(|r| format!(" = {}", format_rational(&r))).unwrap_or_default();
        writeln!(summary, "{} {:.6}{exact} at {witness}", scheme, res.rate).unwrap();
    }
    Ok(Report {
        summary,
        files: vec![out.finish()?],
    })
}

fn expansion(args: &Args) -> Result<Report> {
    let duties = load_duties(args)?;
    let (m, g) = match &args.config {
        Some(_) => {
            let cfg = load_config(args)?;
            (cfg.expansion(), cfg.granularity())
        }
        None => (
            args.m.unwrap_or(tandem_core::config::DEFAULT_EXPANSION),
            args.g.unwrap_or(tandem_core::config::DEFAULT_GRANULARITY),
        ),
    };
    if m < 2 || g == 0 {
        return Err(CliError::Usage("need m >= 2 and g >= 1".into()));
    }
    let base = build_set(&duties)?;
    let set = base.expand(m)?;
    let f: Vec<Rational> = duties.iter().map(DutyFactor::to_rational).collect();
    let samples = args.samples.unwrap_or(1000).max(1);
    let cycle = (g * set.period()) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let n = set.len();
    let mut min_counts = vec![[u64::MAX; 2]; n];
    for _ in 0..samples {
        let offsets: Vec<i64> = (0..n).map(|_| rng.random_range(0..cycle)).collect();
        let counts = simulate_subslot(&set, &offsets, g)?;
        for i in 1..=n {
            for (d, dir) in [Direction::Forward, Direction::Backward].into_iter().enumerate() {
                min_counts[i - 1][d] = min_counts[i - 1][d].min(counts.link(i, dir));
            }
        }
    }
    let mut out = CsvOut::create(
        &args.out,
        "expansion.csv",
        args.experiment,
        args,
        &["node", "direction", "expanded_duty", "min_count", "bound", "ok"],
    )?;
    let mut violations = 0;
    let scale = Rational::from_integer(((m - 1) * base.period()) as i64);
    for i in 1..=n {
        for (d, dir) in [Direction::Forward, Direction::Backward].into_iter().enumerate() {
            let bound = base.predicted_throughput(i, dir)? * scale;
            let got = min_counts[i - 1][d];
            let ok = Rational::from_integer(got as i64) >= bound;
            violations += (!ok) as usize;
            out.row([
                i.to_string(),
                match dir {
                    Direction::Forward => "forward".into(),
                    Direction::Backward => "backward".to_string(),
                },
                format_rational(&set.duty(i as isize)),
                got.to_string(),
                format_rational(&bound),
                ok.to_string(),
            ])?;
        }
    }
    let duty_ok = (1..=n).all(|i| set.duty(i as isize) == f[i - 1] * Rational::new(m as i64 - 1, m as i64));
    let summary = format!(
        "m = {m}, g = {g}, {samples} offset tuples\nexpanded period: {}\nexpanded duty = f(m-1)/m: {duty_ok}\nviolations: {violations}\n",
        set.period()
    );
    let files = vec![out.finish()?];
    if violations > 0 || !duty_ok {
        return Err(CliError::Failed { summary });
    }
    Ok(Report { summary, files })
}
