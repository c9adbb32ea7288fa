//! File-based ingestion of intent traces, liquidity events, origin
//! balances, and daily prices, plus a calibrated synthetic trace generator.
//!
//! # Trace column mapping
//!
//! Trace files carry the upstream extract's column names. The loader maps
//! them onto [`IntentRecord`] as follows:
//!
//! | column                     | record field                               |
//! |----------------------------|--------------------------------------------|
//! | `intent_id`                | `intent_id`                                |
//! | `bridge`                   | `bridge`                                   |
//! | `src_blockchain`           | `src_chain`                                |
//! | `dst_blockchain`           | `dst_chain`                                |
//! | `dst_from_address`         | `solver` (fulfiller, on the dst chain)     |
//! | `src_timestamp`            | `created_at` (epoch seconds)               |
//! | `dst_timestamp`            | `fulfilled_at` (optional)                  |
//! | `refund_timestamp`         | `refunded_at` (optional)                   |
//! | `input_amount_usd`         | `intent_value`                             |
//! | `solver_profitability_pct` | `solver_profit_pct` (fraction: 0.01129 = 1.129%) |
//! | `percent_fee`              | `protocol_fee_pct` (fraction)              |
//! | `native_fix_fee_usd`       | `protocol_fixed_fee`                       |
//! | `adjusted_dst_fee_usd`, else `dst_fee_usd` | `fill_gas`                 |
//! | `auction_cost_usd` (when present) | `auction_cost`, else 0 (FCFS)       |
//! | `dst_symbol`               | `dst_token`                                |
//! | `same_chain_swap` (optional) | `same_chain_swap`                        |
//!
//! `percent_fee` is authoritative; when a `percent_fee_usd` column disagrees
//! with `percent_fee * input_amount_usd` by more than 1% the row is loaded
//! anyway and the disagreement counted in the load report. When
//! `input_amount_usd` is absent, rows can still be valued from
//! `input_amount` and `src_symbol` through a [`PriceTable`].
//!
//! Unmapped columns are preserved verbatim in the record's `raw` map.
//!
//! Rows that fail validation are skipped and reported, not fatal, unless
//! they exceed a configurable ratio of the file (default 5%, enforced once
//! the file has at least [`REJECT_RATIO_MIN_ROWS`] rows so small fixtures
//! with a known-bad row still load).

mod prices;
mod synthetic;

pub use prices::{usd_normalize, PriceTable};
pub use synthetic::{
    generate_synthetic, DiurnalPeak, SyntheticProfile, SyntheticTrace, SYNTHETIC_EPOCH_S,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDate};
use rust_decimal::Decimal;
use thiserror::Error;

use crate::model::{
    Bridge, ChainId, EventKind, IntentRecord, LiquidityEvent, RecordSetValidator, SolverId,
    ValidationError,
};
use crate::money::MoneyUsd;

/// Default cap on the rejected-row ratio before a load aborts.
pub const DEFAULT_MAX_REJECT_RATIO: f64 = 0.05;
/// The ratio cap only applies to files with at least this many rows.
pub const REJECT_RATIO_MIN_ROWS: usize = 20;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("file missing: {0}")]
    FileMissing(String),
    #[error("schema mismatch: missing column {0:?}")]
    SchemaMismatch(String),
    #[error("too many rejected rows: {rejected} of {total} exceeds the {ratio} cap")]
    TooManyRejections {
        rejected: usize,
        total: usize,
        ratio: f64,
    },
    #[error("duplicate price key ({symbol}, {date})")]
    DuplicatePriceKey { symbol: String, date: NaiveDate },
    #[error("non-positive price for ({symbol}, {date}): {price}")]
    NonPositivePrice {
        symbol: String,
        date: NaiveDate,
        price: Decimal,
    },
    #[error("no price for ({symbol}, {date})")]
    MissingPrice { symbol: String, date: NaiveDate },
    #[error("invalid synthetic profile: {0}")]
    InvalidProfile(String),
    #[error("row {line}: {message}")]
    Row { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

pub(crate) fn open_file(path: &Path) -> Result<File, IngestError> {
    File::open(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            IngestError::FileMissing(path.display().to_string())
        } else {
            IngestError::Io(e)
        }
    })
}

/// Physical layout of a trace file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    /// UTF-8 delimited text, first row is the header.
    DelimitedText { delimiter: u8 },
    /// One self-describing record object per line (JSON lines).
    RecordStream,
}

impl Default for TraceFormat {
    fn default() -> Self {
        TraceFormat::DelimitedText { delimiter: b',' }
    }
}

/// Loader knobs; the defaults match the documented behavior.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions<'a> {
    pub format: TraceFormat,
    /// Non-fatal rejection cap; see module docs.
    pub max_reject_ratio: Option<f64>,
    /// Price table for valuing rows that lack `input_amount_usd`.
    pub prices: Option<&'a PriceTable>,
}

/// One skipped row and why.
#[derive(Debug, Clone)]
pub struct RowRejection {
    pub line: usize,
    pub reason: String,
}

/// Outcome summary of a trace load.
#[derive(Debug, Clone, Default)]
pub struct LoadReport {
    pub total_rows: usize,
    pub loaded: usize,
    pub rejections: Vec<RowRejection>,
    /// Rows where `percent_fee_usd` disagreed with the percentage column by
    /// more than 1%.
    pub fee_disagreements: usize,
}

/// A loaded trace: records sorted by creation time (ties broken by intent
/// id) plus the load report.
#[derive(Debug, Clone)]
pub struct TraceLoad {
    pub records: Vec<IntentRecord>,
    pub report: LoadReport,
}

/// Loads a trace file per the module-level column mapping.
pub fn load_traces(path: impl AsRef<Path>, options: LoadOptions) -> Result<TraceLoad, IngestError> {
    let file = open_file(path.as_ref())?;
    load_traces_from(file, options)
}

pub fn load_traces_from<R: Read>(
    reader: R,
    options: LoadOptions,
) -> Result<TraceLoad, IngestError> {
    let rows = read_rows(reader, options.format)?;
    map_rows(rows, &options)
}

/// Columns consumed by the mapping. Everything else lands in `raw`.
const MAPPED_COLUMNS: &[&str] = &[
    "intent_id",
    "bridge",
    "src_blockchain",
    "dst_blockchain",
    "dst_from_address",
    "src_timestamp",
    "dst_timestamp",
    "refund_timestamp",
    "input_amount_usd",
    "input_amount",
    "src_symbol",
    "solver_profitability_pct",
    "percent_fee",
    "percent_fee_usd",
    "native_fix_fee_usd",
    "dst_fee_usd",
    "adjusted_dst_fee_usd",
    "auction_cost_usd",
    "dst_symbol",
    "same_chain_swap",
];

/// Columns that must be present in every trace file.
const REQUIRED_COLUMNS: &[&str] = &[
    "intent_id",
    "bridge",
    "src_blockchain",
    "dst_blockchain",
    "dst_from_address",
    "src_timestamp",
    "solver_profitability_pct",
    "percent_fee",
];

type Row = BTreeMap<String, String>;

fn read_rows<R: Read>(reader: R, format: TraceFormat) -> Result<Vec<(usize, Row)>, IngestError> {
    match format {
        TraceFormat::DelimitedText { delimiter } => {
            let mut csv = csv::ReaderBuilder::new()
                .delimiter(delimiter)
                .comment(Some(b'#'))
                .trim(csv::Trim::All)
                .flexible(true)
                .from_reader(reader);
            let headers = csv
                .headers()
                .map_err(|e| IngestError::Row {
                    line: 1,
                    message: e.to_string(),
                })?
                .clone();
            for required in REQUIRED_COLUMNS {
                if !headers.iter().any(|h| h == *required) {
                    return Err(IngestError::SchemaMismatch(required.to_string()));
                }
            }
            let mut rows = Vec::new();
            for (i, record) in csv.records().enumerate() {
                let line = i + 2;
                let record = record.map_err(|e| IngestError::Row {
                    line,
                    message: e.to_string(),
                })?;
                let mut row = Row::new();
                for (header, field) in headers.iter().zip(record.iter()) {
                    row.insert(header.to_string(), field.to_string());
                }
                rows.push((line, row));
            }
            Ok(rows)
        }
        TraceFormat::RecordStream => {
            let buf = BufReader::new(reader);
            let mut rows = Vec::new();
            for (i, line) in buf.lines().enumerate() {
                let line_no = i + 1;
                let text = line?;
                if text.trim().is_empty() || text.trim_start().starts_with('#') {
                    continue;
                }
                let value: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| IngestError::Row {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                let serde_json::Value::Object(map) = value else {
                    return Err(IngestError::Row {
                        line: line_no,
                        message: "expected one JSON object per line".into(),
                    });
                };
                if map.contains_key("_meta") {
                    continue;
                }
                let mut row = Row::new();
                for (key, value) in map {
                    let text = match value {
                        serde_json::Value::String(s) => s,
                        serde_json::Value::Null => String::new(),
                        serde_json::Value::Number(n) => n.to_string(),
                        serde_json::Value::Bool(b) => b.to_string(),
                        other => other.to_string(),
                    };
                    row.insert(key, text);
                }
                rows.push((line_no, row));
            }
            // Schema is per-record in a record stream; check the first one
            // so a wholesale mismatch fails loudly instead of rejecting
            // every row.
            if let Some((_, first)) = rows.first() {
                for required in REQUIRED_COLUMNS {
                    if !first.contains_key(*required) {
                        return Err(IngestError::SchemaMismatch(required.to_string()));
                    }
                }
            }
            Ok(rows)
        }
    }
}

fn non_empty<'a>(row: &'a Row, key: &str) -> Option<&'a str> {
    row.get(key).map(|s| s.trim()).filter(|s| !s.is_empty())
}

fn parse_decimal(row: &Row, key: &str) -> Result<Option<Decimal>, String> {
    match non_empty(row, key) {
        None => Ok(None),
        Some(text) => text
            .parse::<Decimal>()
            .map(Some)
            .map_err(|e| format!("column {key}: {e}")),
    }
}

fn parse_epoch(row: &Row, key: &str) -> Result<Option<u64>, String> {
    match non_empty(row, key) {
        None => Ok(None),
        Some(text) => text
            .parse::<u64>()
            .map(Some)
            .map_err(|e| format!("column {key}: {e}")),
    }
}

fn require<'a>(row: &'a Row, key: &str) -> Result<&'a str, String> {
    non_empty(row, key).ok_or_else(|| format!("column {key} is empty"))
}

struct MappedRow {
    record: IntentRecord,
    fee_disagreement: bool,
}

fn map_row(row: &Row, prices: Option<&PriceTable>) -> Result<MappedRow, String> {
    let intent_id = require(row, "intent_id")?.to_string();
    let bridge = Bridge::parse(require(row, "bridge")?).map_err(|e| e.to_string())?;
    let src_chain = ChainId::parse(require(row, "src_blockchain")?).map_err(|e| e.to_string())?;
    let dst_chain = ChainId::parse(require(row, "dst_blockchain")?).map_err(|e| e.to_string())?;
    let solver = SolverId::normalize(require(row, "dst_from_address")?, dst_chain.clone())
        .map_err(|e| e.to_string())?;
    let created_at =
        parse_epoch(row, "src_timestamp")?.ok_or_else(|| "column src_timestamp is empty".to_string())?;
    let fulfilled_at = parse_epoch(row, "dst_timestamp")?;
    let refunded_at = parse_epoch(row, "refund_timestamp")?;

    let intent_value = match parse_decimal(row, "input_amount_usd")? {
        Some(usd) => MoneyUsd::new(usd),
        None => {
            let prices = prices.ok_or_else(|| {
                "column input_amount_usd is empty and no price table was given".to_string()
            })?;
            let amount = parse_decimal(row, "input_amount")?
                .ok_or_else(|| "column input_amount is empty".to_string())?;
            let symbol = require(row, "src_symbol")?;
            let date = DateTime::from_timestamp(created_at as i64, 0)
                .ok_or_else(|| format!("src_timestamp {created_at} out of range"))?
                .date_naive();
            usd_normalize(amount, symbol, date, prices).map_err(|e| e.to_string())?
        }
    };

    let solver_profit_pct = parse_decimal(row, "solver_profitability_pct")?
        .ok_or_else(|| "column solver_profitability_pct is empty".to_string())?;
    let protocol_fee_pct = parse_decimal(row, "percent_fee")?
        .ok_or_else(|| "column percent_fee is empty".to_string())?;
    let protocol_fixed_fee =
        MoneyUsd::new(parse_decimal(row, "native_fix_fee_usd")?.unwrap_or(Decimal::ZERO));

    // The percentage column is authoritative; a usd column that disagrees
    // by more than 1% is worth reporting but not rejecting.
    let fee_disagreement = match parse_decimal(row, "percent_fee_usd")? {
        Some(stated) if !stated.is_zero() => {
            let recomputed = intent_value.amount() * protocol_fee_pct;
            ((recomputed - stated) / stated).abs() > Decimal::new(1, 2)
        }
        Some(stated) => !(intent_value.amount() * protocol_fee_pct).is_zero() && stated.is_zero(),
        None => false,
    };

    let fill_gas = match parse_decimal(row, "adjusted_dst_fee_usd")? {
        Some(adjusted) => MoneyUsd::new(adjusted),
        None => MoneyUsd::new(parse_decimal(row, "dst_fee_usd")?.unwrap_or(Decimal::ZERO)),
    };
    let auction_cost = MoneyUsd::new(parse_decimal(row, "auction_cost_usd")?.unwrap_or(Decimal::ZERO));
    let dst_token = non_empty(row, "dst_symbol").unwrap_or("").to_string();
    let same_chain_swap = matches!(
        non_empty(row, "same_chain_swap").map(|s| s.to_ascii_lowercase()),
        Some(ref s) if s == "true" || s == "1"
    );

    let raw: BTreeMap<String, String> = row
        .iter()
        .filter(|(key, _)| !MAPPED_COLUMNS.contains(&key.as_str()))
        .map(|(key, value)| (key.clone(), value.clone()))
        .collect();

    let record = IntentRecord {
        intent_id,
        bridge,
        src_chain,
        dst_chain,
        same_chain_swap,
        solver,
        created_at,
        fulfilled_at,
        refunded_at,
        intent_value,
        solver_profit_pct,
        protocol_fee_pct,
        protocol_fixed_fee,
        fill_gas,
        auction_cost,
        dst_token,
        raw: if raw.is_empty() { None } else { Some(raw) },
    };
    Ok(MappedRow {
        record,
        fee_disagreement,
    })
}

fn map_rows(rows: Vec<(usize, Row)>, options: &LoadOptions) -> Result<TraceLoad, IngestError> {
    let mut report = LoadReport {
        total_rows: rows.len(),
        ..LoadReport::default()
    };
    let mut validator = RecordSetValidator::new();
    let mut records = Vec::with_capacity(rows.len());
    for (line, row) in &rows {
        match map_row(row, options.prices) {
            Ok(mapped) => match validator.validate(mapped.record) {
                Ok(record) => {
                    if mapped.fee_disagreement {
                        report.fee_disagreements += 1;
                    }
                    records.push(record);
                }
                Err(e) => report.rejections.push(RowRejection {
                    line: *line,
                    reason: e.to_string(),
                }),
            },
            Err(reason) => report.rejections.push(RowRejection {
                line: *line,
                reason,
            }),
        }
    }
    report.loaded = records.len();
    if report.fee_disagreements > 0 {
        log::warn!(
            "{} rows had percent_fee_usd disagreeing with percent_fee by more than 1%; \
             the percentage column was used",
            report.fee_disagreements
        );
    }

    let ratio = options.max_reject_ratio.unwrap_or(DEFAULT_MAX_REJECT_RATIO);
    if report.total_rows >= REJECT_RATIO_MIN_ROWS {
        let rejected_ratio = report.rejections.len() as f64 / report.total_rows as f64;
        if rejected_ratio > ratio {
            return Err(IngestError::TooManyRejections {
                rejected: report.rejections.len(),
                total: report.total_rows,
                ratio,
            });
        }
    }

    records.sort_by(|a, b| (a.created_at, &a.intent_id).cmp(&(b.created_at, &b.intent_id)));
    Ok(TraceLoad { records, report })
}

/// Writes records as delimited text using the canonical column names, so
/// the output can be loaded back with [`load_traces`].
pub fn write_traces_csv<W: Write>(records: &[IntentRecord], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "intent_id,bridge,src_blockchain,dst_blockchain,dst_from_address,src_timestamp,\
         dst_timestamp,refund_timestamp,input_amount_usd,solver_profitability_pct,percent_fee,\
         percent_fee_usd,native_fix_fee_usd,adjusted_dst_fee_usd,auction_cost_usd,dst_symbol"
    )?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.intent_id,
            r.bridge,
            r.src_chain,
            r.dst_chain,
            r.solver.address,
            r.created_at,
            r.fulfilled_at.map(|t| t.to_string()).unwrap_or_default(),
            r.refunded_at.map(|t| t.to_string()).unwrap_or_default(),
            r.intent_value,
            r.solver_profit_pct.normalize(),
            r.protocol_fee_pct.normalize(),
            r.intent_value.mul_rate(r.protocol_fee_pct),
            r.protocol_fixed_fee,
            r.fill_gas,
            r.auction_cost,
            r.dst_token,
        )?;
    }
    Ok(())
}

/// Record-stream twin of [`write_traces_csv`]: one JSON object per line
/// with the same field names.
pub fn write_traces_jsonl<W: Write>(records: &[IntentRecord], mut out: W) -> std::io::Result<()> {
    for r in records {
        let mut obj = serde_json::Map::new();
        obj.insert("intent_id".into(), r.intent_id.clone().into());
        obj.insert("bridge".into(), r.bridge.as_str().into());
        obj.insert("src_blockchain".into(), r.src_chain.as_str().into());
        obj.insert("dst_blockchain".into(), r.dst_chain.as_str().into());
        obj.insert("dst_from_address".into(), r.solver.address.clone().into());
        obj.insert("src_timestamp".into(), r.created_at.into());
        if let Some(t) = r.fulfilled_at {
            obj.insert("dst_timestamp".into(), t.into());
        }
        if let Some(t) = r.refunded_at {
            obj.insert("refund_timestamp".into(), t.into());
        }
        obj.insert("input_amount_usd".into(), r.intent_value.to_string().into());
        obj.insert(
            "solver_profitability_pct".into(),
            r.solver_profit_pct.normalize().to_string().into(),
        );
        obj.insert(
            "percent_fee".into(),
            r.protocol_fee_pct.normalize().to_string().into(),
        );
        obj.insert(
            "native_fix_fee_usd".into(),
            r.protocol_fixed_fee.to_string().into(),
        );
        obj.insert("adjusted_dst_fee_usd".into(), r.fill_gas.to_string().into());
        obj.insert("auction_cost_usd".into(), r.auction_cost.to_string().into());
        obj.insert("dst_symbol".into(), r.dst_token.clone().into());
        writeln!(out, "{}", serde_json::Value::Object(obj))?;
    }
    Ok(())
}

/// Loads a liquidity event file: `solver,chain,at_epoch_s,delta_usd,kind`.
/// Events are validated strictly (these files are machine-generated).
pub fn load_events(path: impl AsRef<Path>) -> Result<Vec<LiquidityEvent>, IngestError> {
    let file = open_file(path.as_ref())?;
    load_events_from(file)
}

pub fn load_events_from<R: Read>(reader: R) -> Result<Vec<LiquidityEvent>, IngestError> {
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| IngestError::Row {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    for required in ["solver", "chain", "at_epoch_s", "delta_usd", "kind"] {
        if !headers.iter().any(|h| h == required) {
            return Err(IngestError::SchemaMismatch(required.to_string()));
        }
    }
    let idx = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (solver_i, chain_i, at_i, delta_i, kind_i) = (
        idx("solver"),
        idx("chain"),
        idx("at_epoch_s"),
        idx("delta_usd"),
        idx("kind"),
    );
    let mut events = Vec::new();
    for (i, row) in csv.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| IngestError::Row {
            line,
            message: e.to_string(),
        })?;
        let get = |j: usize| row.get(j).unwrap_or_default();
        let chain = ChainId::parse(get(chain_i)).map_err(|e| IngestError::Row {
            line,
            message: e.to_string(),
        })?;
        let solver = SolverId::normalize(get(solver_i), chain).map_err(|e| IngestError::Row {
            line,
            message: e.to_string(),
        })?;
        let at = get(at_i).parse::<u64>().map_err(|e| IngestError::Row {
            line,
            message: format!("bad at_epoch_s: {e}"),
        })?;
        let delta = get(delta_i)
            .parse::<Decimal>()
            .map(MoneyUsd::new)
            .map_err(|e| IngestError::Row {
                line,
                message: format!("bad delta_usd: {e}"),
            })?;
        let kind = EventKind::parse(get(kind_i)).map_err(|e| IngestError::Row {
            line,
            message: e.to_string(),
        })?;
        let event = LiquidityEvent {
            solver,
            at,
            delta,
            kind,
        };
        event.validate().map_err(|e| IngestError::Row {
            line,
            message: e.to_string(),
        })?;
        events.push(event);
    }
    Ok(events)
}

pub fn write_events_csv<W: Write>(events: &[LiquidityEvent], mut out: W) -> std::io::Result<()> {
    writeln!(out, "solver,chain,at_epoch_s,delta_usd,kind")?;
    for e in events {
        writeln!(
            out,
            "{},{},{},{},{}",
            e.solver.address,
            e.solver.chain,
            e.at,
            e.delta,
            e.kind.as_str()
        )?;
    }
    Ok(())
}

/// Loads an origin balance file: `solver,chain,balance_usd`.
pub fn load_origin_balances(
    path: impl AsRef<Path>,
) -> Result<BTreeMap<SolverId, MoneyUsd>, IngestError> {
    let file = open_file(path.as_ref())?;
    load_origin_balances_from(file)
}

pub fn load_origin_balances_from<R: Read>(
    reader: R,
) -> Result<BTreeMap<SolverId, MoneyUsd>, IngestError> {
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| IngestError::Row {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    for required in ["solver", "chain", "balance_usd"] {
        if !headers.iter().any(|h| h == required) {
            return Err(IngestError::SchemaMismatch(required.to_string()));
        }
    }
    let idx = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (solver_i, chain_i, balance_i) = (idx("solver"), idx("chain"), idx("balance_usd"));
    let mut origins = BTreeMap::new();
    for (i, row) in csv.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| IngestError::Row {
            line,
            message: e.to_string(),
        })?;
        let get = |j: usize| row.get(j).unwrap_or_default();
        let chain = ChainId::parse(get(chain_i)).map_err(|e| IngestError::Row {
            line,
            message: e.to_string(),
        })?;
        let solver = SolverId::normalize(get(solver_i), chain).map_err(|e| IngestError::Row {
            line,
            message: e.to_string(),
        })?;
        let balance = get(balance_i)
            .parse::<Decimal>()
            .map(MoneyUsd::new)
            .map_err(|e| IngestError::Row {
                line,
                message: format!("bad balance_usd: {e}"),
            })?;
        origins.insert(solver, balance);
    }
    Ok(origins)
}

/// Distinct solvers appearing in a record set, for quick inspection.
pub fn distinct_solvers(records: &[IntentRecord]) -> BTreeSet<SolverId> {
    records.iter().map(|r| r.solver.clone()).collect()
}
