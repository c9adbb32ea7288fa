//! Aggregation of per-instance results into distributional metrics,
//! parameter sweeps, and table/file emission.
//!
//! Aggregates report mean and population standard deviation, the
//! nearest-rank 90th percentile (the right tail matters more than the mean
//! under heavy-skew outcomes), and the fraction of instances with strictly
//! positive profit. A configuration is labeled a reliable attack when at
//! least half its instances profit and the mean is positive; the threshold
//! is configurable.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{
    rational_attack, AttackConfig, AttackInstanceResult, ByzantineImpact, EngineError,
};
use crate::liquidity::{SolverLiquidity, WindowMode, DEFAULT_SAMPLE_RESOLUTION_S};
use crate::model::IntentRecord;
use crate::money::MoneyUsd;
use crate::strategy::{
    detect_triggers, AttackTrigger, StrategyError, TriggerConfig, TriggerScope,
};

/// Default probability-of-profit threshold for the reliable-attack label.
pub const DEFAULT_RELIABLE_MIN_PR: Decimal = Decimal::from_parts(5, 0, 0, false, 1); // 0.5

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("sweep grid has an empty axis: {0}")]
    EmptyAxis(&'static str),
    #[error("sweep grid has {cells} cells, over the {max} cap")]
    GridTooLarge { cells: usize, max: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad instance file at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Distributional summary of one attack configuration across instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub fingerprint: String,
    pub n_attacks: usize,
    pub mean_net_profit: MoneyUsd,
    pub std_net_profit: MoneyUsd,
    /// Nearest-rank 90th percentile of per-instance net profit.
    pub p90_net_profit: MoneyUsd,
    /// Fraction of instances with strictly positive net profit.
    pub pr_profit: Decimal,
    pub mean_n_fulfillments: Decimal,
    pub std_n_fulfillments: Decimal,
    pub mean_volume_fulfilled: MoneyUsd,
    pub std_volume_fulfilled: MoneyUsd,
    pub reliable_attack: bool,
}

fn zero_report(fingerprint: &str) -> AggregateReport {
    AggregateReport {
        fingerprint: fingerprint.to_string(),
        n_attacks: 0,
        mean_net_profit: MoneyUsd::ZERO,
        std_net_profit: MoneyUsd::ZERO,
        p90_net_profit: MoneyUsd::ZERO,
        pr_profit: Decimal::ZERO,
        mean_n_fulfillments: Decimal::ZERO,
        std_n_fulfillments: Decimal::ZERO,
        mean_volume_fulfilled: MoneyUsd::ZERO,
        std_volume_fulfilled: MoneyUsd::ZERO,
        reliable_attack: false,
    }
}

fn mean_std_money(values: &[MoneyUsd]) -> (MoneyUsd, MoneyUsd) {
    if values.is_empty() {
        return (MoneyUsd::ZERO, MoneyUsd::ZERO);
    }
    let sum: MoneyUsd = values.iter().sum();
    let mean = MoneyUsd::new(sum.amount() / Decimal::from(values.len() as u64));
    (mean, crate::liquidity::population_std(values))
}

/// Nearest-rank percentile: the value at rank `ceil(p * n)` (1-based) of the
/// ascending sort.
fn nearest_rank(values: &[MoneyUsd], percentile: f64) -> MoneyUsd {
    if values.is_empty() {
        return MoneyUsd::ZERO;
    }
    let mut sorted: Vec<MoneyUsd> = values.to_vec();
    sorted.sort();
    let rank = ((percentile * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

/// Aggregates instances under the default reliability rule
/// (`pr_profit >= 0.5 && mean > 0`).
pub fn aggregate(fingerprint: &str, instances: &[AttackInstanceResult]) -> AggregateReport {
    aggregate_with(fingerprint, instances, DEFAULT_RELIABLE_MIN_PR)
}

/// Aggregates instances; `reliable_min_pr` sets the probability-of-profit
/// threshold for the reliable-attack label. An empty instance list yields
/// the all-zero report.
pub fn aggregate_with(
    fingerprint: &str,
    instances: &[AttackInstanceResult],
    reliable_min_pr: Decimal,
) -> AggregateReport {
    if instances.is_empty() {
        return zero_report(fingerprint);
    }
    let n = instances.len();
    let nets: Vec<MoneyUsd> = instances.iter().map(|i| i.net_profit).collect();
    let volumes: Vec<MoneyUsd> = instances.iter().map(|i| i.volume_fulfilled).collect();
    let fulfillments: Vec<MoneyUsd> = instances
        .iter()
        .map(|i| MoneyUsd::new(Decimal::from(i.n_fulfillments)))
        .collect();

    let (mean_net, std_net) = mean_std_money(&nets);
    let (mean_volume, std_volume) = mean_std_money(&volumes);
    let (mean_fulfillments, std_fulfillments) = mean_std_money(&fulfillments);

    let profitable = nets.iter().filter(|v| v.is_positive()).count();
    let pr_profit =
        (Decimal::from(profitable as u64) / Decimal::from(n as u64)).round_dp(6);

    AggregateReport {
        fingerprint: fingerprint.to_string(),
        n_attacks: n,
        mean_net_profit: mean_net,
        std_net_profit: std_net,
        p90_net_profit: nearest_rank(&nets, 0.9),
        pr_profit,
        mean_n_fulfillments: mean_fulfillments.amount(),
        std_n_fulfillments: std_fulfillments.amount(),
        mean_volume_fulfilled: mean_volume,
        std_volume_fulfilled: std_volume,
        reliable_attack: pr_profit >= reliable_min_pr && mean_net.is_positive(),
    }
}

/// Median/p90 pair for one byzantine impact metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MedianP90 {
    pub median: MoneyUsd,
    pub p90: MoneyUsd,
}

fn median_p90(values: &[MoneyUsd]) -> MedianP90 {
    MedianP90 {
        median: crate::liquidity::median_of(values),
        p90: nearest_rank(values, 0.9),
    }
}

/// Distributional summary of byzantine impacts across instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ByzantineSummary {
    pub n_attacks: usize,
    pub total_cost: MedianP90,
    pub failed_value_median: MedianP90,
    pub failed_value_std: MedianP90,
    pub failed_intents: MedianP90,
    pub missed_solver_profit: MedianP90,
    pub missed_protocol_fees: MedianP90,
}

pub fn byzantine_aggregate(impacts: &[ByzantineImpact]) -> ByzantineSummary {
    let col = |f: fn(&ByzantineImpact) -> MoneyUsd| -> Vec<MoneyUsd> {
        impacts.iter().map(f).collect()
    };
    ByzantineSummary {
        n_attacks: impacts.len(),
        total_cost: median_p90(&col(|i| i.total_cost)),
        failed_value_median: median_p90(&col(|i| i.failed_value_median)),
        failed_value_std: median_p90(&col(|i| i.failed_value_std)),
        failed_intents: median_p90(
            &impacts
                .iter()
                .map(|i| MoneyUsd::new(Decimal::from(i.failed_intents)))
                .collect::<Vec<_>>(),
        ),
        missed_solver_profit: median_p90(&col(|i| i.missed_solver_profit)),
        missed_protocol_fees: median_p90(&col(|i| i.missed_protocol_fees)),
    }
}

/// Axes of a parameter sweep. Route and mode stay fixed; each cell is one
/// combination of the axis values. `None` in an override axis means "Real".
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub k_values: Vec<u32>,
    pub attack_windows_s: Vec<u64>,
    pub solver_profit_overrides: Vec<Option<Decimal>>,
    pub protocol_fee_overrides: Vec<Option<Decimal>>,
    pub max_tx_values: Vec<MoneyUsd>,
    pub volume_multipliers: Vec<Decimal>,
    pub max_cells: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            k_values: vec![1],
            attack_windows_s: vec![1000],
            solver_profit_overrides: vec![None],
            protocol_fee_overrides: vec![None],
            max_tx_values: vec![MoneyUsd::from_dollars(10_000)],
            volume_multipliers: vec![Decimal::ONE],
            max_cells: 4096,
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<(), ReportError> {
        if self.k_values.is_empty() {
            return Err(ReportError::EmptyAxis("k_values"));
        }
        if self.attack_windows_s.is_empty() {
            return Err(ReportError::EmptyAxis("attack_windows_s"));
        }
        if self.solver_profit_overrides.is_empty() {
            return Err(ReportError::EmptyAxis("solver_profit_overrides"));
        }
        if self.protocol_fee_overrides.is_empty() {
            return Err(ReportError::EmptyAxis("protocol_fee_overrides"));
        }
        if self.max_tx_values.is_empty() {
            return Err(ReportError::EmptyAxis("max_tx_values"));
        }
        if self.volume_multipliers.is_empty() {
            return Err(ReportError::EmptyAxis("volume_multipliers"));
        }
        let cells = self.cell_count();
        if cells > self.max_cells {
            return Err(ReportError::GridTooLarge {
                cells,
                max: self.max_cells,
            });
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.k_values.len()
            * self.attack_windows_s.len()
            * self.solver_profit_overrides.len()
            * self.protocol_fee_overrides.len()
            * self.max_tx_values.len()
            * self.volume_multipliers.len()
    }
}

/// One grid cell: the trigger selectivity plus the full attack config.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCell {
    pub k: u32,
    pub config: AttackConfig,
}

impl SweepCell {
    /// Fingerprint over the whole cell, k included, so rows that differ
    /// only in trigger selectivity do not collide.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_string(self).expect("cell serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Where attack timestamps come from.
#[derive(Debug, Clone)]
pub enum ScheduleSource {
    /// Detect median-deviation triggers per cell (cooldown is forced to at
    /// least the cell's attack window so windows never overlap).
    MedianDeviation {
        window_mode: WindowMode,
        scope: TriggerScope,
        sample_resolution_s: u64,
        /// Scan interval; the ledger's full coverage when absent.
        interval: Option<(u64, u64)>,
        /// Extra spacing on top of the per-cell window, when given.
        cooldown_s: Option<u64>,
    },
    /// Fixed placements, e.g. uniformly sampled historical timestamps.
    FixedTimestamps(Vec<u64>),
}

impl ScheduleSource {
    pub fn median_deviation() -> Self {
        ScheduleSource::MedianDeviation {
            window_mode: WindowMode::CausalExpanding,
            scope: TriggerScope::Total,
            sample_resolution_s: DEFAULT_SAMPLE_RESOLUTION_S,
            interval: None,
            cooldown_s: None,
        }
    }
}

/// Builds the schedule for one cell.
pub fn schedule_for(
    source: &ScheduleSource,
    liquidity: &SolverLiquidity,
    k: u32,
    attack_window_s: u64,
) -> Result<Vec<AttackTrigger>, ReportError> {
    match source {
        ScheduleSource::MedianDeviation {
            window_mode,
            scope,
            sample_resolution_s,
            interval,
            cooldown_s,
        } => {
            let span = interval
                .or(liquidity.coverage())
                .unwrap_or((0, 0));
            let config = TriggerConfig {
                k,
                window_mode: *window_mode,
                cooldown_s: cooldown_s.unwrap_or(0).max(attack_window_s),
                scope: scope.clone(),
                sample_resolution_s: *sample_resolution_s,
            };
            Ok(detect_triggers(liquidity, &config, span)?)
        }
        ScheduleSource::FixedTimestamps(times) => {
            let mut triggers = Vec::with_capacity(times.len());
            for t in times {
                triggers.push(AttackTrigger::fixed(*t, liquidity).map_err(EngineError::from)?);
            }
            Ok(triggers)
        }
    }
}

/// Runs every grid cell: per-cell schedule, rational attack instances in
/// parallel, then aggregation. Results are sorted by config fingerprint and
/// deterministic for a fixed seed.
pub fn run_sweep(
    grid: &SweepGrid,
    base: &AttackConfig,
    records: &[IntentRecord],
    liquidity: &SolverLiquidity,
    schedule: &ScheduleSource,
    global_seed: u64,
) -> Result<Vec<(SweepCell, AggregateReport)>, ReportError> {
    grid.validate()?;
    // Schedules depend only on (k, effective cooldown); cache them.
    let mut schedules: BTreeMap<(u32, u64), Vec<AttackTrigger>> = BTreeMap::new();
    let mut results = Vec::with_capacity(grid.cell_count());
    for &k in &grid.k_values {
        for &window in &grid.attack_windows_s {
            let triggers = schedules
                .entry((k, window))
                .or_insert(schedule_for(schedule, liquidity, k, window)?)
                .clone();
            for profit_override in &grid.solver_profit_overrides {
                for fee_override in &grid.protocol_fee_overrides {
                    for &max_tx in &grid.max_tx_values {
                        for &multiplier in &grid.volume_multipliers {
                            let config = AttackConfig {
                                attack_window_s: window,
                                max_tx_value: max_tx,
                                volume_multiplier: multiplier,
                                override_solver_profit_pct: *profit_override,
                                override_protocol_fee_pct: *fee_override,
                                ..base.clone()
                            };
                            let instances: Result<Vec<AttackInstanceResult>, EngineError> =
                                triggers
                                    .par_iter()
                                    .map(|trigger| {
                                        rational_attack(
                                            trigger,
                                            records,
                                            liquidity,
                                            &config,
                                            global_seed,
                                        )
                                    })
                                    .collect();
                            let instances = instances?;
                            let cell = SweepCell { k, config };
                            let report = aggregate(&cell.fingerprint(), &instances);
                            results.push((cell, report));
                        }
                    }
                }
            }
        }
    }
    results.sort_by(|a, b| a.1.fingerprint.cmp(&b.1.fingerprint));
    Ok(results)
}

/// Output formats for reports and per-instance files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    /// Comma-delimited text with `# key: value` provenance comments.
    DelimitedText,
    /// JSON lines; the first line is a `{"_meta": ...}` object.
    RecordStream,
    /// Fixed-width table mirroring the sweep-results column order.
    AlignedTable,
}

impl EmitFormat {
    pub fn parse(label: &str) -> Option<EmitFormat> {
        match label.trim().to_ascii_lowercase().as_str() {
            "csv" | "delimited" | "delimited-text" => Some(EmitFormat::DelimitedText),
            "jsonl" | "records" | "record-stream" => Some(EmitFormat::RecordStream),
            "table" | "aligned" | "aligned-table" => Some(EmitFormat::AlignedTable),
            _ => None,
        }
    }
}

/// Provenance embedded in every output header.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub config_fingerprint: String,
    pub seed: u64,
    pub window_mode: WindowMode,
    pub trigger_scope: String,
}

impl RunMetadata {
    pub fn pairs(&self) -> Vec<(String, String)> {
        vec![
            ("config".into(), self.config_fingerprint.clone()),
            ("seed".into(), self.seed.to_string()),
            ("window_mode".into(), self.window_mode.as_str().into()),
            ("trigger_scope".into(), self.trigger_scope.clone()),
        ]
    }
}

pub fn write_meta_comments<W: Write>(meta: &RunMetadata, mut out: W) -> std::io::Result<()> {
    for (key, value) in meta.pairs() {
        writeln!(out, "# {key}: {value}")?;
    }
    Ok(())
}

fn meta_json(meta: &RunMetadata) -> String {
    serde_json::json!({ "_meta": meta }).to_string()
}

fn real_or(value: &Option<Decimal>) -> String {
    match value {
        Some(v) => v.normalize().to_string(),
        None => "Real".to_string(),
    }
}

/// Emits sweep reports. Output is bit-stable for fixed inputs: rows arrive
/// sorted by fingerprint and no wall-clock data is written.
pub fn emit_reports<W: Write>(
    results: &[(SweepCell, AggregateReport)],
    format: EmitFormat,
    meta: &RunMetadata,
    mut out: W,
) -> Result<(), ReportError> {
    match format {
        EmitFormat::DelimitedText => {
            write_meta_comments(meta, &mut out)?;
            writeln!(
                out,
                "fingerprint,bridge,src,dst,k,attack_window_s,solver_profit_pct,protocol_fee_pct,\
                 max_tx_value,volume_multiplier,n_attacks,mean_net_profit,std_net_profit,\
                 p90_net_profit,pr_profit,mean_n_fulfillments,std_n_fulfillments,\
                 mean_volume_fulfilled,std_volume_fulfilled,reliable_attack"
            )?;
            for (cell, report) in results {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    report.fingerprint,
                    cell.config.bridge,
                    cell.config.src_chain,
                    cell.config.dst_chain,
                    cell.k,
                    cell.config.attack_window_s,
                    real_or(&cell.config.override_solver_profit_pct),
                    real_or(&cell.config.override_protocol_fee_pct),
                    cell.config.max_tx_value,
                    cell.config.volume_multiplier.normalize(),
                    report.n_attacks,
                    report.mean_net_profit,
                    report.std_net_profit,
                    report.p90_net_profit,
                    report.pr_profit.normalize(),
                    report.mean_n_fulfillments.normalize(),
                    report.std_n_fulfillments.normalize(),
                    report.mean_volume_fulfilled,
                    report.std_volume_fulfilled,
                    report.reliable_attack,
                )?;
            }
        }
        EmitFormat::RecordStream => {
            writeln!(out, "{}", meta_json(meta))?;
            for (cell, report) in results {
                let line = serde_json::json!({ "cell": cell, "report": report });
                writeln!(out, "{line}")?;
            }
        }
        EmitFormat::AlignedTable => {
            write_meta_comments(meta, &mut out)?;
            let header = [
                "Bridge",
                "Route",
                "k",
                "W(s)",
                "S Profit.",
                "Prot. Fee",
                "Max Tx Value",
                "Vol Mul",
                "N. Attacks",
                "N. Fulfillments",
                "Volume Fulfilled ($)",
                "Net Profit ($)",
                "Pr[Profit]",
                "Reliable?",
            ];
            let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
            for (cell, report) in results {
                let pr_pct = (report.pr_profit * Decimal::from(100)).round_dp(1);
                rows.push(vec![
                    cell.config.bridge.to_string(),
                    format!("{} -> {}", cell.config.src_chain, cell.config.dst_chain),
                    cell.k.to_string(),
                    cell.config.attack_window_s.to_string(),
                    real_or(&cell.config.override_solver_profit_pct),
                    real_or(&cell.config.override_protocol_fee_pct),
                    cell.config.max_tx_value.to_string(),
                    cell.config.volume_multiplier.normalize().to_string(),
                    report.n_attacks.to_string(),
                    format!(
                        "{} ± {}",
                        report.mean_n_fulfillments.round_dp(2).normalize(),
                        report.std_n_fulfillments.round_dp(2).normalize()
                    ),
                    format!(
                        "{} ± {}",
                        report.mean_volume_fulfilled.amount().round_dp(2).normalize(),
                        report.std_volume_fulfilled.amount().round_dp(2).normalize()
                    ),
                    format!(
                        "{} (p90: {})",
                        report.mean_net_profit.amount().round_dp(2).normalize(),
                        report.p90_net_profit.amount().round_dp(2).normalize()
                    ),
                    format!("{}%", pr_pct.normalize()),
                    if report.reliable_attack { "Yes" } else { "No" }.to_string(),
                ]);
            }
            let widths: Vec<usize> = (0..header.len())
                .map(|col| rows.iter().map(|r| r[col].len()).max().unwrap_or(0))
                .collect();
            for row in rows {
                let mut line = String::new();
                for (i, cell) in row.iter().enumerate() {
                    if i > 0 {
                        line.push_str("  ");
                    }
                    line.push_str(&format!("{:>width$}", cell, width = widths[i]));
                }
                writeln!(out, "{}", line.trim_end())?;
            }
        }
    }
    Ok(())
}

/// Writes per-instance results as delimited text. Captured intent ids are
/// semicolon-joined in the last column.
pub fn write_instances_csv<W: Write>(
    instances: &[AttackInstanceResult],
    meta: &RunMetadata,
    mut out: W,
) -> Result<(), ReportError> {
    write_meta_comments(meta, &mut out)?;
    writeln!(
        out,
        "t_s,alpha,working_capital,induction_cost,n_flood_intents,fill_cost,revenue,epsilon,\
         net_profit,n_fulfillments,volume_fulfilled,captured_intent_ids"
    )?;
    for i in instances {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            i.t_s,
            i.alpha.normalize(),
            i.working_capital,
            i.induction_cost,
            i.n_flood_intents,
            i.fill_cost,
            i.revenue,
            i.epsilon,
            i.net_profit,
            i.n_fulfillments,
            i.volume_fulfilled,
            i.captured_intent_ids.join(";"),
        )?;
    }
    Ok(())
}

/// Reads a per-instance file written by [`write_instances_csv`], so reports
/// can be re-derived from the emitted artifact.
pub fn read_instances_csv<R: std::io::Read>(
    reader: R,
) -> Result<Vec<AttackInstanceResult>, ReportError> {
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| ReportError::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let idx = |name: &str| -> Result<usize, ReportError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| ReportError::Parse {
                line: 1,
                message: format!("missing column {name}"),
            })
    };
    let cols = [
        idx("t_s")?,
        idx("alpha")?,
        idx("working_capital")?,
        idx("induction_cost")?,
        idx("n_flood_intents")?,
        idx("fill_cost")?,
        idx("revenue")?,
        idx("epsilon")?,
        idx("net_profit")?,
        idx("n_fulfillments")?,
        idx("volume_fulfilled")?,
        idx("captured_intent_ids")?,
    ];
    let mut instances = Vec::new();
    for (i, row) in csv.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| ReportError::Parse {
            line,
            message: e.to_string(),
        })?;
        let field = |j: usize| row.get(cols[j]).unwrap_or_default();
        let parse_money = |j: usize| -> Result<MoneyUsd, ReportError> {
            field(j).parse().map_err(|e| ReportError::Parse {
                line,
                message: format!("{}: {e}", headers.get(cols[j]).unwrap_or_default()),
            })
        };
        let ids = field(11);
        instances.push(AttackInstanceResult {
            t_s: field(0).parse().map_err(|e| ReportError::Parse {
                line,
                message: format!("t_s: {e}"),
            })?,
            alpha: field(1).parse().map_err(|e| ReportError::Parse {
                line,
                message: format!("alpha: {e}"),
            })?,
            working_capital: parse_money(2)?,
            induction_cost: parse_money(3)?,
            n_flood_intents: field(4).parse().map_err(|e| ReportError::Parse {
                line,
                message: format!("n_flood_intents: {e}"),
            })?,
            fill_cost: parse_money(5)?,
            revenue: parse_money(6)?,
            epsilon: parse_money(7)?,
            net_profit: parse_money(8)?,
            n_fulfillments: field(9).parse().map_err(|e| ReportError::Parse {
                line,
                message: format!("n_fulfillments: {e}"),
            })?,
            volume_fulfilled: parse_money(10)?,
            captured_intent_ids: if ids.is_empty() {
                Vec::new()
            } else {
                ids.split(';').map(|s| s.to_string()).collect()
            },
        });
    }
    Ok(instances)
}

/// Record-stream twin of [`write_instances_csv`].
pub fn write_instances_jsonl<W: Write>(
    instances: &[AttackInstanceResult],
    meta: &RunMetadata,
    mut out: W,
) -> Result<(), ReportError> {
    writeln!(out, "{}", meta_json(meta))?;
    for i in instances {
        writeln!(out, "{}", serde_json::to_string(i).expect("serializable"))?;
    }
    Ok(())
}

/// Writes byzantine impacts as delimited text.
pub fn write_byzantine_csv<W: Write>(
    impacts: &[ByzantineImpact],
    meta: &RunMetadata,
    mut out: W,
) -> Result<(), ReportError> {
    write_meta_comments(meta, &mut out)?;
    writeln!(
        out,
        "t_s,total_cost,failed_intents,failed_value_total,failed_value_median,failed_value_std,\
         missed_solver_profit,missed_protocol_fees"
    )?;
    for i in impacts {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            i.t_s,
            i.total_cost,
            i.failed_intents,
            i.failed_value_total,
            i.failed_value_median,
            i.failed_value_std,
            i.missed_solver_profit,
            i.missed_protocol_fees,
        )?;
    }
    Ok(())
}

/// Writes the median/p90 byzantine summary, one metric pair per column.
pub fn write_byzantine_summary<W: Write>(
    summary: &ByzantineSummary,
    meta: &RunMetadata,
    mut out: W,
) -> Result<(), ReportError> {
    write_meta_comments(meta, &mut out)?;
    writeln!(
        out,
        "n_attacks,total_cost_median,total_cost_p90,failed_value_median,failed_value_p90,\
         failed_value_std_median,failed_value_std_p90,failed_intents_median,failed_intents_p90,\
         missed_solver_profit_median,missed_solver_profit_p90,missed_protocol_fees_median,\
         missed_protocol_fees_p90"
    )?;
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        summary.n_attacks,
        summary.total_cost.median,
        summary.total_cost.p90,
        summary.failed_value_median.median,
        summary.failed_value_median.p90,
        summary.failed_value_std.median,
        summary.failed_value_std.p90,
        summary.failed_intents.median,
        summary.failed_intents.p90,
        summary.missed_solver_profit.median,
        summary.missed_solver_profit.p90,
        summary.missed_protocol_fees.median,
        summary.missed_protocol_fees.p90,
    )?;
    Ok(())
}

/// Emits `(t, L(t))` samples with trigger markers for external plotting of
/// liquidity-over-time views.
pub fn write_plot_series<W: Write>(
    liquidity: &SolverLiquidity,
    triggers: &[AttackTrigger],
    resolution_s: u64,
    meta: &RunMetadata,
    mut out: W,
) -> Result<(), ReportError> {
    write_meta_comments(meta, &mut out)?;
    writeln!(out, "t,liquidity,trigger")?;
    let Some((start, end)) = liquidity.coverage() else {
        return Ok(());
    };
    let curve = liquidity.merged_curve(None);
    let trigger_times: std::collections::BTreeSet<u64> = triggers.iter().map(|t| t.at).collect();
    let step = resolution_s.max(1);
    let mut t = start;
    while t <= end {
        writeln!(
            out,
            "{},{},{}",
            t,
            curve.balance_at(t),
            u8::from(trigger_times.contains(&t))
        )?;
        match t.checked_add(step) {
            Some(next) => t = next,
            None => break,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rust_decimal_macros::dec;

    fn instance(net: i64) -> AttackInstanceResult {
        AttackInstanceResult {
            t_s: 1000,
            alpha: Decimal::ONE,
            working_capital: MoneyUsd::from_dollars(1000),
            induction_cost: MoneyUsd::from_dollars(10),
            n_flood_intents: 1,
            fill_cost: MoneyUsd::ZERO,
            revenue: MoneyUsd::from_dollars(net + 10),
            epsilon: MoneyUsd::ZERO,
            net_profit: MoneyUsd::from_dollars(net),
            n_fulfillments: 2,
            volume_fulfilled: MoneyUsd::from_dollars(500),
            captured_intent_ids: vec!["a".into(), "b".into()],
        }
    }

    #[test]
    fn mean_and_pr_on_symmetric_profits() {
        let report = aggregate("f", &[instance(-1), instance(1)]);
        assert_eq!(report.mean_net_profit, MoneyUsd::ZERO);
        assert_eq!(report.pr_profit, dec!(0.5));
        assert!(!report.reliable_attack);
    }

    #[test]
    fn p90_nearest_rank_on_one_to_ten() {
        let instances: Vec<AttackInstanceResult> = (1..=10).map(instance).collect();
        let report = aggregate("f", &instances);
        assert_eq!(report.p90_net_profit, MoneyUsd::from_dollars(9));
        assert_eq!(report.pr_profit, Decimal::ONE);
        assert!(report.reliable_attack);
    }

    #[test]
    fn empty_instances_yield_zero_report() {
        let report = aggregate("f", &[]);
        assert_eq!(report.n_attacks, 0);
        assert_eq!(report.mean_net_profit, MoneyUsd::ZERO);
        assert_eq!(report.pr_profit, Decimal::ZERO);
        assert!(!report.reliable_attack);
    }

    #[test]
    fn aggregation_is_permutation_invariant() {
        let mut instances: Vec<AttackInstanceResult> =
            [5, -3, 12, 0, 7, -1].iter().map(|n| instance(*n)).collect();
        let forward = aggregate("f", &instances);
        instances.reverse();
        let backward = aggregate("f", &instances);
        assert_eq!(forward, backward);
    }

    #[test]
    fn instances_file_round_trips_through_aggregate() {
        let instances: Vec<AttackInstanceResult> = (1..=10).map(instance).collect();
        let meta = RunMetadata {
            config_fingerprint: "f".into(),
            seed: 7,
            window_mode: WindowMode::CausalExpanding,
            trigger_scope: "total".into(),
        };
        let mut buf = Vec::new();
        write_instances_csv(&instances, &meta, &mut buf).unwrap();
        let back = read_instances_csv(buf.as_slice()).unwrap();
        assert_eq!(back, instances);
        assert_eq!(aggregate("f", &back), aggregate("f", &instances));
    }

    #[test]
    fn empty_report_list_emits_header_only() {
        let meta = RunMetadata {
            config_fingerprint: "f".into(),
            seed: 7,
            window_mode: WindowMode::CausalExpanding,
            trigger_scope: "total".into(),
        };
        let mut buf = Vec::new();
        emit_reports(&[], EmitFormat::DelimitedText, &meta, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines.iter().filter(|l| !l.starts_with('#')).count() == 1);
        assert!(lines.last().unwrap().starts_with("fingerprint,"));
    }

    #[test]
    fn grid_validation() {
        let mut grid = SweepGrid::default();
        grid.k_values.clear();
        assert!(matches!(grid.validate(), Err(ReportError::EmptyAxis("k_values"))));
        let grid = SweepGrid {
            k_values: (0..100).collect(),
            attack_windows_s: (0..100).map(|i| 100 + i).collect(),
            max_cells: 512,
            ..SweepGrid::default()
        };
        assert!(matches!(grid.validate(), Err(ReportError::GridTooLarge { .. })));
    }

    #[test]
    fn one_cell_sweep_reduces_to_direct_aggregation() {
        use crate::engine::{rational_attack, AttackMode, EpsilonModel, FloodGasModel};
        use crate::ingest::{generate_synthetic, SyntheticProfile};
        use crate::model::{Bridge, ChainId};

        let profile = SyntheticProfile::debridge();
        let trace = generate_synthetic(&profile, 86_400, 5).unwrap();
        let liquidity =
            crate::liquidity::SolverLiquidity::build(&trace.events, &Default::default()).unwrap();
        let base = AttackConfig {
            src_chain: ChainId::Solana,
            dst_chain: ChainId::Ethereum,
            bridge: Bridge::Debridge,
            attack_window_s: 1000,
            max_tx_value: MoneyUsd::from_dollars(10_000),
            volume_multiplier: Decimal::ONE,
            override_solver_profit_pct: None,
            override_protocol_fee_pct: None,
            epsilon_model: EpsilonModel::Zero,
            flood_gas_model: FloodGasModel::TrailingMedian,
            mode: AttackMode::Rational,
        };
        let source = ScheduleSource::median_deviation();
        let results =
            run_sweep(&SweepGrid::default(), &base, &trace.records, &liquidity, &source, 9)
                .unwrap();
        assert_eq!(results.len(), 1);

        // Direct path: same schedule, same instances, same aggregate.
        let triggers = schedule_for(&source, &liquidity, 1, 1000).unwrap();
        let direct: Vec<AttackInstanceResult> = triggers
            .iter()
            .map(|t| rational_attack(t, &trace.records, &liquidity, &base, 9).unwrap())
            .collect();
        let cell = SweepCell {
            k: 1,
            config: base,
        };
        assert_eq!(results[0].1, aggregate(&cell.fingerprint(), &direct));

        // And a k sweep never gains attacks as k grows.
        let grid = SweepGrid {
            k_values: vec![0, 1, 2, 3],
            ..SweepGrid::default()
        };
        let results =
            run_sweep(&grid, &results[0].0.config, &trace.records, &liquidity, &source, 9)
                .unwrap();
        let mut by_k: Vec<(u32, usize)> =
            results.iter().map(|(c, r)| (c.k, r.n_attacks)).collect();
        by_k.sort_by_key(|(k, _)| *k);
        for pair in by_k.windows(2) {
            assert!(pair[1].1 <= pair[0].1, "n_attacks grew with k: {by_k:?}");
        }
    }

    #[test]
    fn plot_series_matches_curve_values() {
        use crate::model::{ChainId, EventKind, LiquidityEvent, SolverId};
        use crate::strategy::ScopeLabel;
        use std::collections::BTreeMap;

        let solver = SolverId::normalize("0xaa", ChainId::Ethereum).unwrap();
        let mut origins = BTreeMap::new();
        origins.insert(solver.clone(), MoneyUsd::from_dollars(500));
        let events = vec![
            LiquidityEvent {
                solver: solver.clone(),
                at: 0,
                delta: MoneyUsd::from_dollars(10),
                kind: EventKind::ExternalInjection,
            },
            LiquidityEvent {
                solver: solver.clone(),
                at: 120,
                delta: MoneyUsd::from_dollars(-200),
                kind: EventKind::FulfillmentOutflow,
            },
            LiquidityEvent {
                solver,
                at: 240,
                delta: MoneyUsd::from_dollars(200),
                kind: EventKind::RefundInflow,
            },
        ];
        let liquidity = crate::liquidity::SolverLiquidity::build(&events, &origins).unwrap();
        let curve = liquidity.merged_curve(None);
        let triggers = vec![crate::strategy::AttackTrigger {
            at: 120,
            liquidity_at_trigger: MoneyUsd::from_dollars(310),
            threshold: MoneyUsd::from_dollars(400),
            scope: ScopeLabel::Total,
            alpha: Decimal::ONE,
        }];
        let meta = RunMetadata {
            config_fingerprint: "plot".into(),
            seed: 0,
            window_mode: WindowMode::FullPeriod,
            trigger_scope: "total".into(),
        };
        let mut buf = Vec::new();
        write_plot_series(&liquidity, &triggers, 60, &meta, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], "t,liquidity,trigger");
        for row in &rows[1..] {
            let mut parts = row.split(',');
            let t: u64 = parts.next().unwrap().parse().unwrap();
            let liq: MoneyUsd = parts.next().unwrap().parse().unwrap();
            let marker: u8 = parts.next().unwrap().parse().unwrap();
            assert_eq!(liq, curve.balance_at(t), "plot row diverges at t={t}");
            assert_eq!(marker, u8::from(t == 120));
        }
        assert_eq!(rows.len() - 1, 5, "samples at 0,60,120,180,240");
    }

    #[test]
    fn byzantine_summary_medians() {
        let impact = |cost: i64, failed: u64| ByzantineImpact {
            t_s: 0,
            total_cost: MoneyUsd::from_dollars(cost),
            failed_intents: failed,
            failed_value_total: MoneyUsd::from_dollars(100),
            failed_value_median: MoneyUsd::from_dollars(50),
            failed_value_std: MoneyUsd::from_dollars(5),
            missed_solver_profit: MoneyUsd::from_dollars(1),
            missed_protocol_fees: MoneyUsd::from_dollars(2),
        };
        let summary = byzantine_aggregate(&[impact(100, 2), impact(300, 4), impact(200, 3)]);
        assert_eq!(summary.n_attacks, 3);
        assert_eq!(summary.total_cost.median, MoneyUsd::from_dollars(200));
        assert_eq!(summary.total_cost.p90, MoneyUsd::from_dollars(300));
        assert_eq!(summary.failed_intents.median, MoneyUsd::from_dollars(3));
    }
}
