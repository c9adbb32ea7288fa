//! Per-solver liquidity reconstruction and the statistics the attack
//! strategies consume.
//!
//! A solver's balance over time is a stepwise-constant curve replayed from
//! signed ledger events. Medians and standard deviations are computed over
//! balances sampled on a fixed-resolution grid, not over raw event points,
//! so bursts of events do not skew the statistics. The median is the lower
//! middle order statistic (an attained balance, never an interpolation) and
//! the standard deviation is the population form, accumulated in f64 and
//! quantized back to micro-dollars.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use rust_decimal::prelude::FromPrimitive;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Bridge, IntentRecord, LiquidityEvent, SolverId};
use crate::money::MoneyUsd;

/// Default sampling grid spacing for liquidity statistics, in seconds.
/// Events are sparse relative to the 300-1000 s attack windows, so a finer
/// grid changes nothing on stepwise series.
pub const DEFAULT_SAMPLE_RESOLUTION_S: u64 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiquidityError {
    #[error("balance of {solver} would go negative at t={at}; missing injection events?")]
    NegativeBalance { solver: SolverId, at: u64 },
    #[error("t={t} is outside the covered interval [{start}, {end}]")]
    OutOfRange { t: u64, start: u64, end: u64 },
    #[error("no covered interval: the ledger has no events")]
    EmptyCoverage,
    #[error("not enough history at t={at}: {available} samples available")]
    InsufficientHistory { at: u64, available: usize },
    #[error("intent class has an empty competing solver set")]
    EmptyCompetingSet,
    #[error("value_min must be strictly below value_max")]
    InvalidValueBounds,
}

/// Which span of history feeds the statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowMode {
    /// Only samples at or before the query time: what an online attacker
    /// can actually observe. This is the default.
    CausalExpanding,
    /// Samples over the whole series, for retrospective analysis.
    FullPeriod,
}

impl WindowMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            WindowMode::CausalExpanding => "causal-expanding",
            WindowMode::FullPeriod => "full-period",
        }
    }
}

/// A stepwise-constant balance curve: `origin` before the first point, then
/// the balance recorded at each point time until the next point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceCurve {
    origin: MoneyUsd,
    points: Vec<(u64, MoneyUsd)>,
}

impl BalanceCurve {
    pub fn flat(origin: MoneyUsd) -> Self {
        BalanceCurve {
            origin,
            points: Vec::new(),
        }
    }

    pub fn origin(&self) -> MoneyUsd {
        self.origin
    }

    pub fn points(&self) -> &[(u64, MoneyUsd)] {
        &self.points
    }

    /// Balance at time `t`: the origin before the first point, otherwise the
    /// value of the latest point at or before `t`.
    pub fn balance_at(&self, t: u64) -> MoneyUsd {
        let idx = self.points.partition_point(|(at, _)| *at <= t);
        if idx == 0 {
            self.origin
        } else {
            self.points[idx - 1].1
        }
    }

    /// Time of the last point, if any.
    pub fn end(&self) -> Option<u64> {
        self.points.last().map(|(at, _)| *at)
    }
}

/// One solver's reconstructed liquidity time series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiquiditySeries {
    pub solver: SolverId,
    pub curve: BalanceCurve,
}

/// Median/deviation summary of a balance curve at a point in time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiquidityStats {
    pub as_of: u64,
    pub median: MoneyUsd,
    pub std: MoneyUsd,
    pub n_samples: usize,
    pub window: WindowMode,
}

/// All solvers' series plus the interval the ledger covers.
#[derive(Debug, Clone)]
pub struct SolverLiquidity {
    series: BTreeMap<SolverId, LiquiditySeries>,
    /// `(first event time, last event time)`; `None` when there are no
    /// events at all (flat curves, unbounded coverage).
    coverage: Option<(u64, u64)>,
}

impl SolverLiquidity {
    /// Replays `events` into per-solver curves. Solvers without an entry in
    /// `origin_balances` start at zero. Deltas that share a timestamp are
    /// netted before the non-negativity check, since their sub-second order
    /// is not observable.
    pub fn build(
        events: &[LiquidityEvent],
        origin_balances: &BTreeMap<SolverId, MoneyUsd>,
    ) -> Result<SolverLiquidity, LiquidityError> {
        let mut per_solver: BTreeMap<SolverId, Vec<(u64, MoneyUsd)>> = BTreeMap::new();
        for (solver, origin) in origin_balances {
            if origin.is_negative() {
                return Err(LiquidityError::NegativeBalance {
                    solver: solver.clone(),
                    at: 0,
                });
            }
            per_solver.entry(solver.clone()).or_default();
        }
        let mut coverage: Option<(u64, u64)> = None;
        let mut sorted: Vec<&LiquidityEvent> = events.iter().collect();
        sorted.sort_by_key(|e| e.at);
        for event in sorted {
            coverage = Some(match coverage {
                None => (event.at, event.at),
                Some((lo, hi)) => (lo.min(event.at), hi.max(event.at)),
            });
            per_solver
                .entry(event.solver.clone())
                .or_default()
                .push((event.at, event.delta));
        }

        let mut series = BTreeMap::new();
        for (solver, deltas) in per_solver {
            let origin = origin_balances
                .get(&solver)
                .copied()
                .unwrap_or(MoneyUsd::ZERO);
            let mut points: Vec<(u64, MoneyUsd)> = Vec::with_capacity(deltas.len());
            let mut balance = origin;
            for (at, delta) in deltas {
                balance += delta;
                match points.last_mut() {
                    Some((last_at, last_balance)) if *last_at == at => *last_balance = balance,
                    _ => points.push((at, balance)),
                }
            }
            for (at, balance) in &points {
                if balance.is_negative() {
                    return Err(LiquidityError::NegativeBalance {
                        solver: solver.clone(),
                        at: *at,
                    });
                }
            }
            series.insert(
                solver.clone(),
                LiquiditySeries {
                    solver,
                    curve: BalanceCurve { origin, points },
                },
            );
        }
        Ok(SolverLiquidity { series, coverage })
    }

    pub fn coverage(&self) -> Option<(u64, u64)> {
        self.coverage
    }

    pub fn solvers(&self) -> impl Iterator<Item = &SolverId> {
        self.series.keys()
    }

    pub fn get(&self, solver: &SolverId) -> Option<&LiquiditySeries> {
        self.series.get(solver)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SolverId, &LiquiditySeries)> {
        self.series.iter()
    }

    fn check_in_range(&self, t: u64) -> Result<(), LiquidityError> {
        if let Some((start, end)) = self.coverage {
            if t < start || t > end {
                return Err(LiquidityError::OutOfRange { t, start, end });
            }
        }
        Ok(())
    }

    /// Total liquidity `L(t)`: the sum of every solver's balance at `t`.
    pub fn total_at(&self, t: u64) -> Result<MoneyUsd, LiquidityError> {
        self.check_in_range(t)?;
        Ok(self
            .series
            .values()
            .map(|s| s.curve.balance_at(t))
            .sum())
    }

    /// Effective liquidity `L_eff(c, t)`: the sum restricted to the class's
    /// competing solvers.
    pub fn effective_at(&self, class: &IntentClass, t: u64) -> Result<MoneyUsd, LiquidityError> {
        self.check_in_range(t)?;
        Ok(class
            .competing()
            .iter()
            .filter_map(|s| self.series.get(s))
            .map(|s| s.curve.balance_at(t))
            .sum())
    }

    /// One curve summing the balances of `solvers` (all solvers when
    /// `None`). The merged curve has a point wherever any member curve does.
    pub fn merged_curve(&self, solvers: Option<&BTreeSet<SolverId>>) -> BalanceCurve {
        let selected: Vec<&LiquiditySeries> = match solvers {
            Some(set) => set.iter().filter_map(|s| self.series.get(s)).collect(),
            None => self.series.values().collect(),
        };
        let origin: MoneyUsd = selected.iter().map(|s| s.curve.origin).sum();
        // Deltas relative to each curve's previous level, grouped by time.
        let mut deltas: BTreeMap<u64, MoneyUsd> = BTreeMap::new();
        for s in &selected {
            let mut prev = s.curve.origin;
            for (at, balance) in &s.curve.points {
                *deltas.entry(*at).or_insert(MoneyUsd::ZERO) += *balance - prev;
                prev = *balance;
            }
        }
        let mut points = Vec::with_capacity(deltas.len());
        let mut balance = origin;
        for (at, delta) in deltas {
            balance += delta;
            points.push((at, balance));
        }
        BalanceCurve { origin, points }
    }

    /// The grid origin for sampling: the first event time.
    pub fn grid_start(&self) -> Option<u64> {
        self.coverage.map(|(start, _)| start)
    }
}

/// Median and population standard deviation of `curve` sampled every
/// `resolution` seconds from `grid_start`.
///
/// Causal mode uses samples up to `t` (at least two of them strictly before
/// `t`); full-period mode uses the whole series regardless of `t`.
pub fn stats_at(
    curve: &BalanceCurve,
    grid_start: u64,
    t: u64,
    mode: WindowMode,
    resolution: u64,
) -> Result<LiquidityStats, LiquidityError> {
    let resolution = resolution.max(1);
    let sample_end = match mode {
        WindowMode::CausalExpanding => t,
        WindowMode::FullPeriod => curve.end().unwrap_or(grid_start).max(t),
    };
    if sample_end < grid_start {
        return Err(LiquidityError::InsufficientHistory { at: t, available: 0 });
    }
    let mut running = RunningStats::new();
    let mut before_t = 0usize;
    let mut at_time = grid_start;
    loop {
        running.push(curve.balance_at(at_time));
        if at_time < t {
            before_t += 1;
        }
        match at_time.checked_add(resolution) {
            Some(next) if next <= sample_end => at_time = next,
            _ => break,
        }
    }
    if matches!(mode, WindowMode::CausalExpanding) && before_t < 2 {
        return Err(LiquidityError::InsufficientHistory {
            at: t,
            available: before_t,
        });
    }
    Ok(LiquidityStats {
        as_of: t,
        median: running.median().expect("at least one sample"),
        std: running.std(),
        n_samples: running.len(),
        window: mode,
    })
}

/// Incremental median and population standard deviation over a growing
/// sample set. The median is exact (sorted order statistic, lower middle on
/// even counts); the deviation accumulates in f64.
#[derive(Debug, Clone, Default)]
pub(crate) struct RunningStats {
    sorted: Vec<Decimal>,
    sum: f64,
    sum_sq: f64,
}

impl RunningStats {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn push(&mut self, value: MoneyUsd) {
        let d = value.amount();
        let idx = match self.sorted.binary_search(&d) {
            Ok(i) | Err(i) => i,
        };
        self.sorted.insert(idx, d);
        let f = value.to_f64();
        self.sum += f;
        self.sum_sq += f * f;
    }

    pub(crate) fn len(&self) -> usize {
        self.sorted.len()
    }

    /// Lower-middle order statistic, so the median is an attained balance.
    pub(crate) fn median(&self) -> Option<MoneyUsd> {
        if self.sorted.is_empty() {
            None
        } else {
            Some(MoneyUsd::new(self.sorted[(self.sorted.len() - 1) / 2]))
        }
    }

    pub(crate) fn std(&self) -> MoneyUsd {
        let n = self.sorted.len();
        if n == 0 {
            return MoneyUsd::ZERO;
        }
        let mean = self.sum / n as f64;
        let variance = (self.sum_sq / n as f64 - mean * mean).max(0.0);
        MoneyUsd::new(Decimal::from_f64(variance.sqrt()).unwrap_or(Decimal::ZERO))
    }
}

/// Population standard deviation of raw money values (used for the failed
/// intent value spread and report columns).
pub(crate) fn population_std(values: &[MoneyUsd]) -> MoneyUsd {
    let mut stats = RunningStats::new();
    for v in values {
        stats.push(*v);
    }
    stats.std()
}

/// Lower-middle median of raw money values.
pub(crate) fn median_of(values: &[MoneyUsd]) -> MoneyUsd {
    if values.is_empty() {
        return MoneyUsd::ZERO;
    }
    let mut sorted: Vec<Decimal> = values.iter().map(|v| v.amount()).collect();
    sorted.sort();
    MoneyUsd::new(sorted[(sorted.len() - 1) / 2])
}

/// The intent attributes an attack can condition on: bridge, destination
/// token (`None` matches any), and a `[value_min, value_max)` band.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCriteria {
    pub bridge: Bridge,
    pub token: Option<String>,
    pub value_min: Option<MoneyUsd>,
    pub value_max: Option<MoneyUsd>,
}

impl ClassCriteria {
    pub fn new(
        bridge: Bridge,
        token: Option<&str>,
        value_min: Option<MoneyUsd>,
        value_max: Option<MoneyUsd>,
    ) -> Result<ClassCriteria, LiquidityError> {
        if let (Some(lo), Some(hi)) = (value_min, value_max) {
            if lo >= hi {
                return Err(LiquidityError::InvalidValueBounds);
            }
        }
        Ok(ClassCriteria {
            bridge,
            token: token.map(|t| t.trim().to_ascii_uppercase()),
            value_min,
            value_max,
        })
    }

    pub fn matches(&self, record: &IntentRecord) -> bool {
        if record.bridge != self.bridge {
            return false;
        }
        if let Some(token) = &self.token {
            if !record.dst_token.eq_ignore_ascii_case(token) {
                return false;
            }
        }
        if let Some(lo) = self.value_min {
            if record.intent_value < lo {
                return false;
            }
        }
        if let Some(hi) = self.value_max {
            if record.intent_value >= hi {
                return false;
            }
        }
        true
    }
}

/// An intent class together with the solvers that compete for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntentClass {
    criteria: ClassCriteria,
    competing: BTreeSet<SolverId>,
}

impl IntentClass {
    /// Rejects an empty competing set: a class nobody serves has no
    /// effective liquidity to reason about.
    pub fn new(
        criteria: ClassCriteria,
        competing: BTreeSet<SolverId>,
    ) -> Result<IntentClass, LiquidityError> {
        if competing.is_empty() {
            return Err(LiquidityError::EmptyCompetingSet);
        }
        Ok(IntentClass {
            criteria,
            competing,
        })
    }

    pub fn criteria(&self) -> &ClassCriteria {
        &self.criteria
    }

    pub fn competing(&self) -> &BTreeSet<SolverId> {
        &self.competing
    }

    /// Short label for schedule exports and report headers.
    pub fn label(&self) -> String {
        let token = self.criteria.token.as_deref().unwrap_or("*");
        let lo = self
            .criteria
            .value_min
            .map(|v| v.to_string())
            .unwrap_or_default();
        let hi = self
            .criteria
            .value_max
            .map(|v| v.to_string())
            .unwrap_or_default();
        format!("{}/{}/[{},{})", self.criteria.bridge, token, lo, hi)
    }
}

/// Solvers with at least one fulfillment matching the class criteria within
/// the given records. May be empty; the caller decides what that means.
pub fn infer_competing_set(
    records: &[IntentRecord],
    criteria: &ClassCriteria,
) -> BTreeSet<SolverId> {
    records
        .iter()
        .filter(|r| r.fulfilled_at.is_some() && criteria.matches(r))
        .map(|r| r.solver.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ChainId, EventKind};
    use proptest::prelude::*;
    use rust_decimal_macros::dec;

    fn solver(tag: &str) -> SolverId {
        SolverId::normalize(tag, ChainId::Ethereum).unwrap()
    }

    fn event(s: &SolverId, at: u64, delta: Decimal, kind: EventKind) -> LiquidityEvent {
        LiquidityEvent {
            solver: s.clone(),
            at,
            delta: MoneyUsd::new(delta),
            kind,
        }
    }

    #[test]
    fn no_events_is_flat_at_origin() {
        let s = solver("0xaa");
        let mut origins = BTreeMap::new();
        origins.insert(s.clone(), MoneyUsd::from_dollars(600_000));
        let liq = SolverLiquidity::build(&[], &origins).unwrap();
        let series = liq.get(&s).unwrap();
        assert_eq!(series.curve.balance_at(0), MoneyUsd::from_dollars(600_000));
        assert_eq!(
            series.curve.balance_at(u64::MAX),
            MoneyUsd::from_dollars(600_000)
        );
        // Mayan-scale fixture: a single flat solver is the whole total.
        assert_eq!(liq.total_at(123).unwrap(), MoneyUsd::from_dollars(600_000));
    }

    #[test]
    fn outflow_then_refund_conserves() {
        let s = solver("0xaa");
        let mut origins = BTreeMap::new();
        origins.insert(s.clone(), MoneyUsd::from_dollars(100));
        let events = vec![
            event(&s, 10, dec!(-100), EventKind::FulfillmentOutflow),
            event(&s, 20, dec!(100), EventKind::RefundInflow),
        ];
        let liq = SolverLiquidity::build(&events, &origins).unwrap();
        let curve = &liq.get(&s).unwrap().curve;
        assert_eq!(curve.balance_at(15), MoneyUsd::ZERO);
        assert_eq!(curve.balance_at(25), MoneyUsd::from_dollars(100));
    }

    #[test]
    fn negative_reconstruction_is_an_error() {
        let s = solver("0xaa");
        let origins = BTreeMap::new();
        let events = vec![event(&s, 5, dec!(-1), EventKind::FulfillmentOutflow)];
        let err = SolverLiquidity::build(&events, &origins).unwrap_err();
        assert!(matches!(err, LiquidityError::NegativeBalance { at: 5, .. }));
    }

    #[test]
    fn same_timestamp_deltas_are_netted() {
        let s = solver("0xaa");
        let mut origins = BTreeMap::new();
        origins.insert(s.clone(), MoneyUsd::from_dollars(50));
        // Net effect at t=10 is +20; the interleaving within the second is
        // not observable, so this must not trip the negativity check.
        let events = vec![
            event(&s, 10, dec!(-60), EventKind::FulfillmentOutflow),
            event(&s, 10, dec!(80), EventKind::RefundInflow),
        ];
        let liq = SolverLiquidity::build(&events, &origins).unwrap();
        assert_eq!(
            liq.get(&s).unwrap().curve.balance_at(10),
            MoneyUsd::from_dollars(70)
        );
    }

    #[test]
    fn total_is_out_of_range_before_first_event() {
        let a = solver("0xaa");
        let b = solver("0xbb");
        let mut origins = BTreeMap::new();
        origins.insert(a.clone(), MoneyUsd::from_dollars(10));
        origins.insert(b.clone(), MoneyUsd::from_dollars(20));
        let events = vec![event(&a, 100, dec!(-5), EventKind::FulfillmentOutflow)];
        let liq = SolverLiquidity::build(&events, &origins).unwrap();
        assert!(matches!(
            liq.total_at(99),
            Err(LiquidityError::OutOfRange { .. })
        ));
        assert_eq!(liq.total_at(100).unwrap(), MoneyUsd::from_dollars(25));
    }

    #[test]
    fn two_solvers_sum() {
        let a = solver("0xaa");
        let b = solver("0xbb");
        let mut origins = BTreeMap::new();
        origins.insert(a.clone(), MoneyUsd::from_dollars(10));
        origins.insert(b.clone(), MoneyUsd::from_dollars(20));
        let events = vec![event(&a, 1, dec!(1), EventKind::ExternalInjection)];
        let liq = SolverLiquidity::build(&events, &origins).unwrap();
        assert_eq!(liq.total_at(1).unwrap(), MoneyUsd::from_dollars(31));
    }

    #[test]
    fn constant_curve_stats() {
        let curve = BalanceCurve::flat(MoneyUsd::from_dollars(600_000));
        let stats = stats_at(&curve, 0, 600, WindowMode::CausalExpanding, 60).unwrap();
        assert_eq!(stats.median, MoneyUsd::from_dollars(600_000));
        assert_eq!(stats.std, MoneyUsd::ZERO);
        assert_eq!(stats.n_samples, 11);
    }

    #[test]
    fn alternating_curve_stats_use_lower_middle_median() {
        // Balance alternates 0/100 in equal 60 s slots. Sampled at 60 s the
        // sample set is half zeros and half hundreds: the lower-middle
        // median is 0 and the population deviation is exactly 50.
        let s = solver("0xaa");
        let mut origins = BTreeMap::new();
        origins.insert(s.clone(), MoneyUsd::from_dollars(100));
        let mut events = Vec::new();
        let mut at = 60;
        for i in 0..20 {
            let delta = if i % 2 == 0 { dec!(-100) } else { dec!(100) };
            let kind = if i % 2 == 0 {
                EventKind::FulfillmentOutflow
            } else {
                EventKind::RefundInflow
            };
            events.push(event(&s, at, delta, kind));
            at += 60;
        }
        let liq = SolverLiquidity::build(&events, &origins).unwrap();
        let curve = &liq.get(&s).unwrap().curve;
        let stats = stats_at(curve, 60, at - 60, WindowMode::FullPeriod, 60).unwrap();
        assert_eq!(stats.median, MoneyUsd::ZERO);
        assert_eq!(stats.std, MoneyUsd::from_dollars(50));
    }

    #[test]
    fn causal_stats_ignore_later_injections() {
        let s = solver("0xaa");
        let mut origins = BTreeMap::new();
        origins.insert(s.clone(), MoneyUsd::from_dollars(100));
        let events = vec![
            event(&s, 0, dec!(1), EventKind::ExternalInjection),
            // Huge spike far in the future.
            event(&s, 10_000, dec!(1_000_000), EventKind::ExternalInjection),
        ];
        let liq = SolverLiquidity::build(&events, &origins).unwrap();
        let curve = liq.merged_curve(None);
        let early = stats_at(&curve, 0, 600, WindowMode::CausalExpanding, 60).unwrap();
        assert_eq!(early.median, MoneyUsd::from_dollars(101));
        assert_eq!(early.std, MoneyUsd::ZERO);
    }

    #[test]
    fn insufficient_history_is_reported() {
        let curve = BalanceCurve::flat(MoneyUsd::from_dollars(10));
        let err = stats_at(&curve, 0, 60, WindowMode::CausalExpanding, 60).unwrap_err();
        assert!(matches!(err, LiquidityError::InsufficientHistory { .. }));
    }

    #[test]
    fn refining_resolution_on_aligned_grid_keeps_stats() {
        // Events every 120 s: any resolution dividing the gaps samples the
        // same stepwise levels in the same proportions.
        let s = solver("0xaa");
        let mut origins = BTreeMap::new();
        origins.insert(s.clone(), MoneyUsd::from_dollars(1_000));
        let mut events = Vec::new();
        for (i, delta) in [-200i64, 150, -300, 250, -100, 180].iter().enumerate() {
            events.push(event(
                &s,
                (i as u64 + 1) * 120,
                Decimal::from(*delta),
                if *delta < 0 {
                    EventKind::FulfillmentOutflow
                } else {
                    EventKind::ExternalInjection
                },
            ));
        }
        let liq = SolverLiquidity::build(&events, &origins).unwrap();
        let curve = &liq.get(&s).unwrap().curve;
        // End mid-span so every 120 s level is sampled exactly 120/r times.
        let coarse = stats_at(curve, 0, 839, WindowMode::CausalExpanding, 120).unwrap();
        for resolution in [60u64, 30, 10] {
            let fine = stats_at(curve, 0, 839, WindowMode::CausalExpanding, resolution).unwrap();
            assert_eq!(fine.median, coarse.median, "median moved at {resolution}s");
            let diff = (fine.std - coarse.std).abs();
            assert!(
                diff < MoneyUsd::new(dec!(0.001)),
                "std moved by {diff} at {resolution}s"
            );
        }
    }

    #[test]
    fn effective_liquidity_of_full_set_equals_total() {
        let a = solver("0xaa");
        let b = solver("0xbb");
        let origins = BTreeMap::new();
        // Fund through injections so the exact 7.5% split holds at t=0.
        let events = vec![
            event(&a, 0, dec!(75), EventKind::ExternalInjection),
            event(&b, 0, dec!(925), EventKind::ExternalInjection),
        ];
        let liq = SolverLiquidity::build(&events, &origins).unwrap();
        let criteria = ClassCriteria::new(Bridge::Mayan, Some("USDC"), None, None).unwrap();
        let all: BTreeSet<SolverId> = [a.clone(), b.clone()].into_iter().collect();
        let class = IntentClass::new(criteria.clone(), all).unwrap();
        assert_eq!(
            liq.effective_at(&class, 0).unwrap(),
            liq.total_at(0).unwrap()
        );
        // Restricting to the small solver exposes the class share.
        let only_a = IntentClass::new(criteria, [a].into_iter().collect()).unwrap();
        let eff = liq.effective_at(&only_a, 0).unwrap();
        let total = liq.total_at(0).unwrap();
        assert_eq!(eff.ratio(total).unwrap(), dec!(0.075));
    }

    #[test]
    fn empty_competing_set_rejected_at_type_level() {
        let criteria = ClassCriteria::new(Bridge::Mayan, None, None, None).unwrap();
        assert!(matches!(
            IntentClass::new(criteria, BTreeSet::new()),
            Err(LiquidityError::EmptyCompetingSet)
        ));
    }

    #[test]
    fn value_bounds_must_be_ordered() {
        assert!(matches!(
            ClassCriteria::new(
                Bridge::Mayan,
                None,
                Some(MoneyUsd::from_dollars(100)),
                Some(MoneyUsd::from_dollars(100))
            ),
            Err(LiquidityError::InvalidValueBounds)
        ));
    }

    proptest! {
        // Replayed balances agree with a brute-force fold over the raw
        // event list at every queried time.
        #[test]
        fn replay_matches_brute_force(
            deltas in prop::collection::vec((0u64..10_000, -500_000i64..500_000), 1..120),
            queries in prop::collection::vec(0u64..11_000, 10),
        ) {
            let s = solver("0xaa");
            // An origin covering the worst case keeps the balance
            // non-negative for any delta ordering.
            let origin: i64 = deltas.iter().map(|(_, d)| d.abs()).sum();
            let mut origins = BTreeMap::new();
            origins.insert(s.clone(), MoneyUsd::new(Decimal::new(origin, 2)));
            let events: Vec<LiquidityEvent> = deltas
                .iter()
                .map(|(at, cents)| {
                    let delta = MoneyUsd::new(Decimal::new(*cents, 2));
                    LiquidityEvent {
                        solver: s.clone(),
                        at: *at,
                        delta,
                        kind: if delta.is_negative() {
                            EventKind::FulfillmentOutflow
                        } else {
                            EventKind::ExternalInjection
                        },
                    }
                })
                .collect();
            let liq = SolverLiquidity::build(&events, &origins).unwrap();
            let curve = &liq.get(&s).unwrap().curve;
            for t in queries {
                let brute: MoneyUsd = origins[&s]
                    + events
                        .iter()
                        .filter(|e| e.at <= t)
                        .map(|e| e.delta)
                        .sum::<MoneyUsd>();
                prop_assert_eq!(curve.balance_at(t), brute);
            }
        }

        // Building from a union of disjoint-solver event sets matches the
        // union of the separately built series.
        #[test]
        fn reconstruction_is_linear_over_disjoint_solvers(
            deltas_a in prop::collection::vec((0u64..5_000, 1i64..100_000), 1..40),
            deltas_b in prop::collection::vec((0u64..5_000, 1i64..100_000), 1..40),
        ) {
            let a = solver("0xaa");
            let b = solver("0xbb");
            let make = |s: &SolverId, deltas: &[(u64, i64)]| -> Vec<LiquidityEvent> {
                deltas
                    .iter()
                    .map(|(at, cents)| LiquidityEvent {
                        solver: s.clone(),
                        at: *at,
                        delta: MoneyUsd::new(Decimal::new(*cents, 2)),
                        kind: EventKind::ExternalInjection,
                    })
                    .collect()
            };
            let ev_a = make(&a, &deltas_a);
            let ev_b = make(&b, &deltas_b);
            let origins = BTreeMap::new();
            let separate_a = SolverLiquidity::build(&ev_a, &origins).unwrap();
            let separate_b = SolverLiquidity::build(&ev_b, &origins).unwrap();
            let mut merged_events = ev_a.clone();
            merged_events.extend(ev_b.clone());
            let merged = SolverLiquidity::build(&merged_events, &origins).unwrap();
            prop_assert_eq!(
                merged.get(&a).unwrap().curve.points(),
                separate_a.get(&a).unwrap().curve.points()
            );
            prop_assert_eq!(
                merged.get(&b).unwrap().curve.points(),
                separate_b.get(&b).unwrap().curve.points()
            );
        }

        // Effective liquidity never exceeds total liquidity.
        #[test]
        fn effective_bounded_by_total(
            balances in prop::collection::vec(0i64..1_000_000, 2..10),
            take in 1usize..9,
        ) {
            let solvers: Vec<SolverId> = (0..balances.len())
                .map(|i| solver(&format!("0x{:02x}", i)))
                .collect();
            let mut origins = BTreeMap::new();
            for (s, b) in solvers.iter().zip(&balances) {
                origins.insert(s.clone(), MoneyUsd::from_dollars(*b));
            }
            let events = vec![LiquidityEvent {
                solver: solvers[0].clone(),
                at: 0,
                delta: MoneyUsd::new(dec!(0.01)),
                kind: EventKind::ExternalInjection,
            }];
            let liq = SolverLiquidity::build(&events, &origins).unwrap();
            let criteria = ClassCriteria::new(Bridge::Across, None, None, None).unwrap();
            let subset: BTreeSet<SolverId> =
                solvers.iter().take(take.min(solvers.len())).cloned().collect();
            let class = IntentClass::new(criteria, subset).unwrap();
            let eff = liq.effective_at(&class, 0).unwrap();
            let total = liq.total_at(0).unwrap();
            prop_assert!(eff <= total);
        }
    }

    #[test]
    fn infer_competing_set_recovers_planted_specialization() {
        use crate::model::IntentRecord;
        let small = solver("0xsmall");
        let big = solver("0xbig");
        let mk = |id: &str, s: &SolverId, value: i64| IntentRecord {
            intent_id: id.to_string(),
            bridge: Bridge::Debridge,
            src_chain: ChainId::Solana,
            dst_chain: ChainId::Ethereum,
            same_chain_swap: false,
            solver: s.clone(),
            created_at: 0,
            fulfilled_at: Some(1),
            refunded_at: None,
            intent_value: MoneyUsd::from_dollars(value),
            solver_profit_pct: dec!(0.01),
            protocol_fee_pct: dec!(0.01),
            protocol_fixed_fee: MoneyUsd::ZERO,
            fill_gas: MoneyUsd::ZERO,
            auction_cost: MoneyUsd::ZERO,
            dst_token: "USDC".into(),
            raw: None,
        };
        let records = vec![
            mk("a", &small, 40),
            mk("b", &small, 80),
            mk("c", &big, 700),
            mk("d", &big, 900),
        ];
        let low_band = ClassCriteria::new(
            Bridge::Debridge,
            Some("USDC"),
            None,
            Some(MoneyUsd::from_dollars(100)),
        )
        .unwrap();
        let set = infer_competing_set(&records, &low_band);
        assert_eq!(set.into_iter().collect::<Vec<_>>(), vec![small.clone()]);
        let high_band = ClassCriteria::new(
            Bridge::Debridge,
            Some("USDC"),
            Some(MoneyUsd::from_dollars(500)),
            None,
        )
        .unwrap();
        let set = infer_competing_set(&records, &high_band);
        assert_eq!(set.into_iter().collect::<Vec<_>>(), vec![big]);
    }
}
