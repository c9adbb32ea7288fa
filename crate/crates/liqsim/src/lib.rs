//! Replay-based simulation of liquidity exhaustion attacks on intent-based
//! cross-chain bridges.
//!
//! Intent-based bridges let off-chain solvers front their own capital to
//! fill users' cross-chain orders, reclaiming it only after an asynchronous
//! settlement delay. That delay makes solver liquidity a finite, drainable
//! resource: an attacker who floods the protocol with large intents can
//! temporarily exhaust it and then either fulfill the displaced legitimate
//! intents for profit or simply deny service.
//!
//! This crate reconstructs solver liquidity from intent traces and ledger
//! events, detects attack opportunities with a median-deviation trigger,
//! simulates attack economics under parameterized configurations (rational
//! profit-seeking and byzantine availability suppression, baseline and
//! class-targeted), and aggregates outcomes into distributional reports.
//!
//! # Layout
//!
//! - [`money`]: fixed-precision USD arithmetic ([`MoneyUsd`]).
//! - [`model`]: validated intent records, solver identities, ledger events.
//! - [`ingest`]: trace/price/event file loaders and the calibrated
//!   synthetic trace generator.
//! - [`liquidity`]: balance reconstruction, statistics, intent classes and
//!   effective (class-conditioned) liquidity.
//! - [`strategy`]: median-deviation and targeted trigger schedules.
//! - [`engine`]: per-instance attack economics (induction cost, capture,
//!   rational profit, byzantine impact).
//! - [`report`]: aggregation, parameter sweeps, and table emission.
//!
//! # Quick example
//!
//! ```
//! use liqsim::ingest::{generate_synthetic, SyntheticProfile};
//! use liqsim::liquidity::SolverLiquidity;
//! use liqsim::strategy::{detect_triggers, TriggerConfig};
//!
//! let profile = SyntheticProfile::debridge();
//! let trace = generate_synthetic(&profile, 24 * 3600, 42).unwrap();
//! let liquidity = SolverLiquidity::build(&trace.events, &Default::default()).unwrap();
//! let config = TriggerConfig::new(1, 1000);
//! let triggers = detect_triggers(&liquidity, &config, liquidity.coverage().unwrap()).unwrap();
//! for t in &triggers {
//!     println!("attack at {} with {} on the table", t.at, t.liquidity_at_trigger);
//! }
//! ```
//!
//! Runnable walkthroughs for each capability live in `examples/`; the
//! `liqsim` binary exposes the same flows as subcommands.

pub mod engine;
pub mod ingest;
pub mod liquidity;
pub mod model;
pub mod money;
pub mod report;
pub mod strategy;

pub use engine::{
    byzantine_attack, capture_intents, induction_cost, instance_seed, rational_attack,
    AttackConfig, AttackInstanceResult, AttackMode, ByzantineImpact, EngineError, EpsilonModel,
    FloodGasModel,
};
pub use ingest::{
    generate_synthetic, load_traces, usd_normalize, IngestError, LoadOptions, PriceTable,
    SyntheticProfile, SyntheticTrace, TraceFormat,
};
pub use liquidity::{
    infer_competing_set, stats_at, ClassCriteria, IntentClass, LiquidityError, LiquiditySeries,
    LiquidityStats, SolverLiquidity, WindowMode,
};
pub use model::{
    validate_record, Bridge, ChainId, EventKind, IntentRecord, LiquidityEvent, SolverId,
    ValidationError,
};
pub use money::MoneyUsd;
pub use report::{
    aggregate, byzantine_aggregate, emit_reports, run_sweep, AggregateReport, EmitFormat,
    ReportError, RunMetadata, ScheduleSource, SweepCell, SweepGrid,
};
pub use strategy::{
    detect_triggers, targeted_triggers, AttackTrigger, ScopeLabel, StrategyError, TriggerConfig,
    TriggerScope,
};
