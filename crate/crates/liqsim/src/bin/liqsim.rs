//! Command-line front end: thin argument parsing over the library.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rust_decimal::Decimal;

use liqsim::engine::{
    byzantine_attack, rational_attack, AttackConfig, AttackMode, EpsilonModel, FloodGasModel,
};
use liqsim::ingest::{
    self, generate_synthetic, LoadOptions, PriceTable, SyntheticProfile, TraceFormat,
};
use liqsim::liquidity::{ClassCriteria, IntentClass, SolverLiquidity, WindowMode};
use liqsim::model::{Bridge, ChainId, IntentRecord, SolverId};
use liqsim::money::MoneyUsd;
use liqsim::report::{
    aggregate, byzantine_aggregate, emit_reports, run_sweep, schedule_for, EmitFormat, RunMetadata,
    ScheduleSource, SweepCell, SweepGrid,
};
use liqsim::strategy::{detect_triggers, write_schedule, TriggerConfig, TriggerScope};

#[derive(Parser)]
#[command(
    name = "liqsim",
    about = "Replay-based liquidity exhaustion attack simulator for intent-based cross-chain bridges",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic intent trace and matching liquidity events.
    Synth(SynthArgs),
    /// Detect median-deviation attack triggers and export the schedule.
    Triggers(TriggersArgs),
    /// Simulate rational or byzantine attacks at detected triggers.
    Simulate(SimulateArgs),
    /// Measure availability impact of byzantine attacks (failed intents,
    /// missed revenue) with median/p90 summaries.
    Byzantine(ByzantineArgs),
    /// Run a parameter sweep over k, window, overrides, and multipliers.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Built-in profile: debridge | across | mayan.
    #[arg(long, conflicts_with = "profile_file")]
    profile: Option<String>,
    /// TOML file with SyntheticProfile fields.
    #[arg(long)]
    profile_file: Option<PathBuf>,
    /// Trace length in seconds.
    #[arg(long, default_value_t = 14 * 86_400)]
    duration_s: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Intent trace output path.
    #[arg(long)]
    out_traces: PathBuf,
    /// Liquidity event output path.
    #[arg(long)]
    out_events: PathBuf,
    /// Trace output format: csv | jsonl.
    #[arg(long, default_value = "csv")]
    format: TraceFileFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceFileFormat {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct InputArgs {
    /// Intent trace file (see docs for the column mapping).
    #[arg(long)]
    traces: PathBuf,
    /// Trace file format: csv | jsonl.
    #[arg(long, default_value = "csv")]
    traces_format: TraceFileFormat,
    /// Liquidity event file: solver,chain,at_epoch_s,delta_usd,kind.
    #[arg(long)]
    liquidity_events: PathBuf,
    /// Origin balance file: solver,chain,balance_usd. Balances default to
    /// zero (the event file then carries injections).
    #[arg(long)]
    origin_balances: Option<PathBuf>,
    /// Daily price file (symbol,date,price_usd) for traces that carry
    /// token amounts instead of USD values.
    #[arg(long)]
    prices: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<(Vec<IntentRecord>, SolverLiquidity)> {
        let prices = match &self.prices {
            Some(path) => Some(PriceTable::load(path).context("loading prices")?),
            None => None,
        };
        let format = match self.traces_format {
            TraceFileFormat::Csv => TraceFormat::DelimitedText { delimiter: b',' },
            TraceFileFormat::Jsonl => TraceFormat::RecordStream,
        };
        let load = ingest::load_traces(
            &self.traces,
            LoadOptions {
                format,
                prices: prices.as_ref(),
                ..LoadOptions::default()
            },
        )
        .context("loading traces")?;
        if !load.report.rejections.is_empty() {
            eprintln!(
                "warning: {} of {} trace rows rejected",
                load.report.rejections.len(),
                load.report.total_rows
            );
            for rejection in load.report.rejections.iter().take(5) {
                eprintln!("  line {}: {}", rejection.line, rejection.reason);
            }
        }
        let events = ingest::load_events(&self.liquidity_events).context("loading events")?;
        let origins = match &self.origin_balances {
            Some(path) => ingest::load_origin_balances(path).context("loading origin balances")?,
            None => BTreeMap::new(),
        };
        let liquidity = SolverLiquidity::build(&events, &origins)?;
        Ok((load.records, liquidity))
    }
}

#[derive(Args)]
struct TriggerArgs {
    /// Deviation threshold: higher k fires on rarer, deeper shortages.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Statistics window: causal (online attacker) or full (retrospective).
    #[arg(long, default_value = "causal")]
    window_mode: WindowModeArg,
    /// Sampling grid for liquidity statistics, seconds.
    #[arg(long, default_value_t = 60)]
    sample_resolution_s: u64,
    /// Trigger scope: total | per-solver | class.
    #[arg(long, default_value = "total")]
    scope: ScopeArg,
    /// Class scope: bridge of the intent class (defaults to --bridge).
    #[arg(long)]
    class_bridge: Option<String>,
    /// Class scope: destination token filter.
    #[arg(long)]
    class_token: Option<String>,
    /// Class scope: minimum intent value (inclusive).
    #[arg(long)]
    class_value_min: Option<MoneyUsd>,
    /// Class scope: maximum intent value (exclusive).
    #[arg(long)]
    class_value_max: Option<MoneyUsd>,
    /// Class scope: competing solvers as addr@chain, comma separated, or
    /// "auto" to infer from the trace's fulfillments.
    #[arg(long, default_value = "auto")]
    competing: String,
    /// Scan interval start (epoch seconds; ledger start when absent).
    #[arg(long)]
    from: Option<u64>,
    /// Scan interval end (epoch seconds; ledger end when absent).
    #[arg(long)]
    to: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum WindowModeArg {
    Causal,
    Full,
}

impl From<WindowModeArg> for WindowMode {
    fn from(w: WindowModeArg) -> WindowMode {
        match w {
            WindowModeArg::Causal => WindowMode::CausalExpanding,
            WindowModeArg::Full => WindowMode::FullPeriod,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Total,
    PerSolver,
    Class,
}

impl TriggerArgs {
    fn scope(
        &self,
        default_bridge: Option<&Bridge>,
        records: &[IntentRecord],
    ) -> Result<TriggerScope> {
        match self.scope {
            ScopeArg::Total => Ok(TriggerScope::Total),
            ScopeArg::PerSolver => Ok(TriggerScope::PerSolver),
            ScopeArg::Class => {
                let bridge = match (&self.class_bridge, default_bridge) {
                    (Some(label), _) => Bridge::parse(label)?,
                    (None, Some(bridge)) => bridge.clone(),
                    (None, None) => bail!("--class-bridge is required for class scope"),
                };
                let criteria = ClassCriteria::new(
                    bridge,
                    self.class_token.as_deref(),
                    self.class_value_min,
                    self.class_value_max,
                )?;
                let competing = if self.competing.trim().eq_ignore_ascii_case("auto") {
                    liqsim::infer_competing_set(records, &criteria)
                } else {
                    let mut set = std::collections::BTreeSet::new();
                    for part in self.competing.split(',') {
                        let (addr, chain) = part
                            .split_once('@')
                            .ok_or_else(|| anyhow!("--competing entries must be addr@chain"))?;
                        set.insert(SolverId::normalize(addr, ChainId::parse(chain)?)?);
                    }
                    set
                };
                Ok(TriggerScope::Class(IntentClass::new(criteria, competing)?))
            }
        }
    }

    fn interval(&self, liquidity: &SolverLiquidity) -> Result<(u64, u64)> {
        let (start, end) = liquidity
            .coverage()
            .ok_or_else(|| anyhow!("liquidity ledger has no events"))?;
        Ok((self.from.unwrap_or(start), self.to.unwrap_or(end)))
    }
}

#[derive(Args)]
struct TriggersArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    trigger: TriggerArgs,
    /// Minimum spacing between attack starts, seconds.
    #[arg(long, default_value_t = 1000)]
    cooldown_s: u64,
    /// Schedule output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also emit (t, L(t)) samples with trigger markers for plotting.
    #[arg(long)]
    plot_out: Option<PathBuf>,
}

#[derive(Args)]
struct RouteArgs {
    /// Source blockchain of the attacked route.
    #[arg(long)]
    src_blockchain: String,
    /// Destination blockchain of the attacked route.
    #[arg(long)]
    dst_blockchain: String,
    /// Bridge protocol of the attacked route.
    #[arg(long)]
    bridge: String,
    /// Attack window length in seconds.
    #[arg(long, env = "ATTACK_WINDOW", default_value_t = 1000)]
    attack_window: u64,
    /// Cap per flooding intent, USD.
    #[arg(long, env = "MAX_TX_VALUE", default_value = "10000")]
    max_tx_value: MoneyUsd,
    /// Volume multiplier: 1 preserves historical volume.
    #[arg(long, env = "VOLUME_MULTIPLIER", default_value = "1")]
    volume_multiplier: Decimal,
    /// Solver margin override as a fraction (0.01129 = 1.129%), or "real".
    #[arg(long, default_value = "real")]
    solver_profit_pct: String,
    /// Protocol fee override as a fraction, or "real".
    #[arg(long, default_value = "real")]
    protocol_fee_pct: String,
    /// Slippage model: zero | fixed:<usd> | bps:<bps of drained volume>.
    #[arg(long, default_value = "zero")]
    epsilon: String,
    /// Flooding gas model: trailing | fixed:<usd per intent>.
    #[arg(long, default_value = "trailing")]
    flood_gas: String,
}

fn parse_real_or_fraction(text: &str) -> Result<Option<Decimal>> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("real") {
        Ok(None)
    } else {
        Ok(Some(t.parse::<Decimal>().with_context(|| {
            format!("expected \"real\" or a fraction, got {t:?}")
        })?))
    }
}

impl RouteArgs {
    fn config(&self, mode: AttackMode) -> Result<AttackConfig> {
        let epsilon_model = match self.epsilon.trim().to_ascii_lowercase() {
            s if s == "zero" => EpsilonModel::Zero,
            s if s.starts_with("fixed:") => EpsilonModel::Fixed(s[6..].parse()?),
            s if s.starts_with("bps:") => EpsilonModel::BpsOfInducedVolume(s[4..].parse()?),
            other => bail!("bad --epsilon {other:?}; use zero | fixed:<usd> | bps:<bps>"),
        };
        let flood_gas_model = match self.flood_gas.trim().to_ascii_lowercase() {
            s if s == "trailing" => FloodGasModel::TrailingMedian,
            s if s.starts_with("fixed:") => FloodGasModel::FixedPerIntent(s[6..].parse()?),
            other => bail!("bad --flood-gas {other:?}; use trailing | fixed:<usd>"),
        };
        let config = AttackConfig {
            src_chain: ChainId::parse(&self.src_blockchain)?,
            dst_chain: ChainId::parse(&self.dst_blockchain)?,
            bridge: Bridge::parse(&self.bridge)?,
            attack_window_s: self.attack_window,
            max_tx_value: self.max_tx_value,
            volume_multiplier: self.volume_multiplier,
            override_solver_profit_pct: parse_real_or_fraction(&self.solver_profit_pct)?,
            override_protocol_fee_pct: parse_real_or_fraction(&self.protocol_fee_pct)?,
            epsilon_model,
            flood_gas_model,
            mode,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    route: RouteArgs,
    #[command(flatten)]
    trigger: TriggerArgs,
    /// rational | byzantine.
    #[arg(long, default_value = "rational")]
    mode: ModeArg,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Per-instance output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Aggregate report output path.
    #[arg(long)]
    aggregate_out: Option<PathBuf>,
    /// Output format: csv | jsonl | table (aggregate only).
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rational,
    Byzantine,
}

#[derive(Args)]
struct ByzantineArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    route: RouteArgs,
    #[command(flatten)]
    trigger: TriggerArgs,
    /// Attack placement: triggers | uniform:<n> (n evenly spaced points).
    #[arg(long, default_value = "triggers")]
    placement: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Per-instance impact output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Median/p90 summary output path.
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    route: RouteArgs,
    #[command(flatten)]
    trigger: TriggerArgs,
    /// Comma-separated k values, e.g. 0,1,2,3.
    #[arg(long = "k-values", default_value = "0,1,2,3")]
    k_values: String,
    /// Comma-separated attack windows in seconds (overrides --attack-window).
    #[arg(long)]
    attack_windows: Option<String>,
    /// Comma-separated margin overrides (fractions or "real").
    #[arg(long)]
    solver_profit_pcts: Option<String>,
    /// Comma-separated fee overrides (fractions or "real").
    #[arg(long)]
    protocol_fee_pcts: Option<String>,
    /// Comma-separated flooding caps in USD.
    #[arg(long)]
    max_tx_values: Option<String>,
    /// Comma-separated volume multipliers.
    #[arg(long)]
    volume_multipliers: Option<String>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Report output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | jsonl | table.
    #[arg(long, default_value = "table")]
    format: String,
}

fn out_writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn parse_list<T, F: Fn(&str) -> Result<T>>(text: &str, parse: F) -> Result<Vec<T>> {
    text.split(',')
        .map(|part| parse(part.trim()))
        .collect::<Result<Vec<T>>>()
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Synth(args) => synth(args),
        Command::Triggers(args) => triggers(args),
        Command::Simulate(args) => simulate(args),
        Command::Byzantine(args) => byzantine(args),
        Command::Sweep(args) => sweep(args),
    }
}

fn synth(args: SynthArgs) -> Result<()> {
    let profile = match (&args.profile, &args.profile_file) {
        (Some(name), None) => SyntheticProfile::by_name(name)
            .ok_or_else(|| anyhow!("unknown profile {name:?}; use debridge | across | mayan"))?,
        (None, Some(path)) => SyntheticProfile::load(path)?,
        _ => bail!("exactly one of --profile or --profile-file is required"),
    };
    let trace = generate_synthetic(&profile, args.duration_s, args.seed)?;
    let mut traces_out = BufWriter::new(File::create(&args.out_traces)?);
    match args.format {
        TraceFileFormat::Csv => ingest::write_traces_csv(&trace.records, &mut traces_out)?,
        TraceFileFormat::Jsonl => ingest::write_traces_jsonl(&trace.records, &mut traces_out)?,
    }
    traces_out.flush()?;
    let mut events_out = BufWriter::new(File::create(&args.out_events)?);
    ingest::write_events_csv(&trace.events, &mut events_out)?;
    events_out.flush()?;
    eprintln!(
        "wrote {} intents to {} and {} events to {}",
        trace.records.len(),
        args.out_traces.display(),
        trace.events.len(),
        args.out_events.display()
    );
    Ok(())
}

fn scope_label(scope: &TriggerScope) -> String {
    match scope {
        TriggerScope::Total => "total".into(),
        TriggerScope::PerSolver => "per-solver".into(),
        TriggerScope::Class(class) => format!("class:{}", class.label()),
    }
}

fn triggers(args: TriggersArgs) -> Result<()> {
    let (records, liquidity) = args.input.load()?;
    let scope = args.trigger.scope(None, &records)?;
    let config = TriggerConfig {
        k: args.trigger.k,
        window_mode: args.trigger.window_mode.into(),
        cooldown_s: args.cooldown_s,
        scope,
        sample_resolution_s: args.trigger.sample_resolution_s,
    };
    let interval = args.trigger.interval(&liquidity)?;
    let triggers = detect_triggers(&liquidity, &config, interval)?;
    let meta = vec![
        ("k".to_string(), config.k.to_string()),
        (
            "window_mode".to_string(),
            config.window_mode.as_str().to_string(),
        ),
        ("cooldown_s".to_string(), config.cooldown_s.to_string()),
        ("scope".to_string(), scope_label(&config.scope)),
    ];
    let mut out = out_writer(args.out.as_deref())?;
    write_schedule(&triggers, &meta, &mut out)?;
    out.flush()?;
    if let Some(plot) = &args.plot_out {
        let meta = RunMetadata {
            config_fingerprint: "plot-series".into(),
            seed: 0,
            window_mode: config.window_mode,
            trigger_scope: scope_label(&config.scope),
        };
        let mut plot_out = BufWriter::new(File::create(plot)?);
        liqsim::report::write_plot_series(
            &liquidity,
            &triggers,
            config.sample_resolution_s,
            &meta,
            &mut plot_out,
        )?;
        plot_out.flush()?;
    }
    eprintln!("{} triggers", triggers.len());
    Ok(())
}

fn build_schedule_source(
    trigger: &TriggerArgs,
    scope: TriggerScope,
    interval: (u64, u64),
) -> ScheduleSource {
    ScheduleSource::MedianDeviation {
        window_mode: trigger.window_mode.into(),
        scope,
        sample_resolution_s: trigger.sample_resolution_s,
        interval: Some(interval),
        cooldown_s: None,
    }
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let mode = match args.mode {
        ModeArg::Rational => AttackMode::Rational,
        ModeArg::Byzantine => AttackMode::Byzantine,
    };
    let config = args.route.config(mode)?;
    let (records, liquidity) = args.input.load()?;
    let scope = args.trigger.scope(Some(&config.bridge), &records)?;
    let interval = args.trigger.interval(&liquidity)?;
    let source = build_schedule_source(&args.trigger, scope.clone(), interval);
    let schedule = schedule_for(&source, &liquidity, args.trigger.k, config.attack_window_s)?;
    let cell = SweepCell {
        k: args.trigger.k,
        config: config.clone(),
    };
    let meta = RunMetadata {
        config_fingerprint: cell.fingerprint(),
        seed: args.seed,
        window_mode: args.trigger.window_mode.into(),
        trigger_scope: scope_label(&scope),
    };
    match mode {
        AttackMode::Rational => {
            let mut instances = Vec::with_capacity(schedule.len());
            for trigger in &schedule {
                instances.push(rational_attack(
                    trigger, &records, &liquidity, &config, args.seed,
                )?);
            }
            let mut out = out_writer(args.out.as_deref())?;
            match EmitFormat::parse(&args.format) {
                Some(EmitFormat::RecordStream) => {
                    liqsim::report::write_instances_jsonl(&instances, &meta, &mut out)?
                }
                _ => liqsim::report::write_instances_csv(&instances, &meta, &mut out)?,
            }
            out.flush()?;
            let report = aggregate(&meta.config_fingerprint, &instances);
            if let Some(path) = &args.aggregate_out {
                let mut agg_out = BufWriter::new(File::create(path)?);
                let format = EmitFormat::parse(&args.format).unwrap_or(EmitFormat::DelimitedText);
                emit_reports(&[(cell, report)], format, &meta, &mut agg_out)?;
                agg_out.flush()?;
            } else {
                eprintln!(
                    "{} attacks, mean net profit {}, pr[profit] {}",
                    report.n_attacks, report.mean_net_profit, report.pr_profit
                );
            }
        }
        AttackMode::Byzantine => {
            let mut impacts = Vec::with_capacity(schedule.len());
            for trigger in &schedule {
                impacts.push(byzantine_attack(trigger, &records, &liquidity, &config)?);
            }
            let mut out = out_writer(args.out.as_deref())?;
            liqsim::report::write_byzantine_csv(&impacts, &meta, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn byzantine(args: ByzantineArgs) -> Result<()> {
    let config = args.route.config(AttackMode::Byzantine)?;
    let (records, liquidity) = args.input.load()?;
    let scope = args.trigger.scope(Some(&config.bridge), &records)?;
    let interval = args.trigger.interval(&liquidity)?;

    let placement = args.placement.trim().to_ascii_lowercase();
    let source = if placement == "triggers" {
        build_schedule_source(&args.trigger, scope.clone(), interval)
    } else if let Some(n_text) = placement.strip_prefix("uniform:") {
        let n: u64 = n_text.parse().context("bad uniform placement count")?;
        if n == 0 {
            bail!("uniform placement needs at least one timestamp");
        }
        let (start, end) = interval;
        let step = ((end - start) / n).max(1);
        ScheduleSource::FixedTimestamps((0..n).map(|i| start + i * step).collect())
    } else {
        bail!("bad --placement {placement:?}; use triggers | uniform:<n>");
    };
    let schedule = schedule_for(&source, &liquidity, args.trigger.k, config.attack_window_s)?;

    let meta = RunMetadata {
        config_fingerprint: config.fingerprint(),
        seed: args.seed,
        window_mode: args.trigger.window_mode.into(),
        trigger_scope: placement.clone(),
    };
    let mut impacts = Vec::with_capacity(schedule.len());
    for trigger in &schedule {
        impacts.push(byzantine_attack(trigger, &records, &liquidity, &config)?);
    }
    let mut out = out_writer(args.out.as_deref())?;
    liqsim::report::write_byzantine_csv(&impacts, &meta, &mut out)?;
    out.flush()?;
    if let Some(path) = &args.summary_out {
        let summary = byzantine_aggregate(&impacts);
        let mut summary_out = BufWriter::new(File::create(path)?);
        liqsim::report::write_byzantine_summary(&summary, &meta, &mut summary_out)?;
        summary_out.flush()?;
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let base = args.route.config(AttackMode::Rational)?;
    let (records, liquidity) = args.input.load()?;
    let scope = args.trigger.scope(Some(&base.bridge), &records)?;
    let interval = args.trigger.interval(&liquidity)?;

    let grid = SweepGrid {
        k_values: parse_list(&args.k_values, |s| Ok(s.parse::<u32>()?))?,
        attack_windows_s: match &args.attack_windows {
            Some(list) => parse_list(list, |s| Ok(s.parse::<u64>()?))?,
            None => vec![base.attack_window_s],
        },
        solver_profit_overrides: match &args.solver_profit_pcts {
            Some(list) => parse_list(list, parse_real_or_fraction)?,
            None => vec![base.override_solver_profit_pct],
        },
        protocol_fee_overrides: match &args.protocol_fee_pcts {
            Some(list) => parse_list(list, parse_real_or_fraction)?,
            None => vec![base.override_protocol_fee_pct],
        },
        max_tx_values: match &args.max_tx_values {
            Some(list) => parse_list(list, |s| Ok(s.parse::<MoneyUsd>()?))?,
            None => vec![base.max_tx_value],
        },
        volume_multipliers: match &args.volume_multipliers {
            Some(list) => parse_list(list, |s| Ok(s.parse::<Decimal>()?))?,
            None => vec![base.volume_multiplier],
        },
        ..SweepGrid::default()
    };
    let source = build_schedule_source(&args.trigger, scope.clone(), interval);
    let results = run_sweep(&grid, &base, &records, &liquidity, &source, args.seed)?;
    let meta = RunMetadata {
        config_fingerprint: base.fingerprint(),
        seed: args.seed,
        window_mode: args.trigger.window_mode.into(),
        trigger_scope: scope_label(&scope),
    };
    let format = EmitFormat::parse(&args.format)
        .ok_or_else(|| anyhow!("bad --format {:?}; use csv | jsonl | table", args.format))?;
    let mut out = out_writer(args.out.as_deref())?;
    emit_reports(&results, format, &meta, &mut out)?;
    out.flush()?;
    Ok(())
}
