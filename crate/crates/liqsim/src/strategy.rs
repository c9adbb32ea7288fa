//! Attack scheduling: when does the attacker strike?
//!
//! The baseline rule watches a liquidity curve and fires whenever the
//! balance drops strictly below `median - k * std`, where both statistics
//! are taken over the curve's sampled history. The targeted variant applies
//! the same rule to the effective liquidity of an intent class and records
//! how small a fraction of total liquidity that class represents (the
//! exhaustion parameter alpha). Consecutive triggers are spaced by a
//! cooldown so attack windows never overlap.

use std::collections::BTreeSet;
use std::io::Write;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::liquidity::{
    BalanceCurve, IntentClass, LiquidityError, RunningStats, SolverLiquidity, WindowMode,
    DEFAULT_SAMPLE_RESOLUTION_S,
};
use crate::model::SolverId;
use crate::money::MoneyUsd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("no candidate timestamp in the interval has enough history")]
    InsufficientHistory,
    #[error("none of the class's competing solvers has a liquidity series")]
    EmptyCompetingSet,
    #[error(transparent)]
    Liquidity(#[from] LiquidityError),
}

/// What the trigger watches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriggerScope {
    /// The sum of all solver balances. Attacks drain total liquidity, so
    /// this is the default.
    Total,
    /// Each solver's own curve against its own statistics; breaches from
    /// all solvers are merged into one schedule.
    PerSolver,
    /// The effective liquidity of one intent class.
    Class(IntentClass),
}

/// Configuration of the median-deviation trigger.
#[derive(Debug, Clone)]
pub struct TriggerConfig {
    /// Selectivity: higher k fires only on rarer, deeper shortages.
    pub k: u32,
    pub window_mode: WindowMode,
    /// Minimum spacing between consecutive attack starts. Set this to at
    /// least the attack window length to keep captured intents disjoint.
    pub cooldown_s: u64,
    pub scope: TriggerScope,
    pub sample_resolution_s: u64,
}

impl TriggerConfig {
    pub fn new(k: u32, cooldown_s: u64) -> Self {
        TriggerConfig {
            k,
            window_mode: WindowMode::CausalExpanding,
            cooldown_s,
            scope: TriggerScope::Total,
            sample_resolution_s: DEFAULT_SAMPLE_RESOLUTION_S,
        }
    }
}

/// Identifies which curve a trigger fired on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScopeLabel {
    Total,
    Solver(SolverId),
    Class(String),
}

impl std::fmt::Display for ScopeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScopeLabel::Total => f.write_str("total"),
            ScopeLabel::Solver(s) => write!(f, "solver:{s}"),
            ScopeLabel::Class(c) => write!(f, "class:{c}"),
        }
    }
}

/// One scheduled attack start.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackTrigger {
    /// Attack start time `t_s`, epoch seconds.
    pub at: u64,
    /// The watched curve's balance at `t_s` (effective liquidity for class
    /// scope, total otherwise).
    pub liquidity_at_trigger: MoneyUsd,
    /// `median - k * std` at `t_s`; detector-emitted triggers satisfy
    /// `liquidity_at_trigger < threshold` strictly.
    pub threshold: MoneyUsd,
    pub scope: ScopeLabel,
    /// Fraction of total liquidity the attack must drain: 1 for untargeted
    /// scopes, `L_eff / L` at `t_s` for class scope.
    pub alpha: Decimal,
}

impl AttackTrigger {
    /// A fixed placement at `t`, for simulations that sample timestamps
    /// instead of detecting dips. Not a median-deviation trigger: the
    /// threshold mirrors the observed liquidity and alpha is 1.
    pub fn fixed(t: u64, liquidity: &SolverLiquidity) -> Result<AttackTrigger, LiquidityError> {
        let total = liquidity.total_at(t)?;
        Ok(AttackTrigger {
            at: t,
            liquidity_at_trigger: total,
            threshold: total,
            scope: ScopeLabel::Total,
            alpha: Decimal::ONE,
        })
    }
}

/// A breach sample before cooldown suppression.
struct Breach {
    at: u64,
    liquidity: MoneyUsd,
    threshold: MoneyUsd,
    scope: ScopeLabel,
}

/// Scans one curve and returns every sample in `interval` where the strict
/// inequality holds. `evaluated` counts candidate samples with enough
/// history, so the caller can distinguish "no breach" from "nothing was
/// evaluable".
#[allow(clippy::too_many_arguments)]
fn scan_curve(
    curve: &BalanceCurve,
    scope: ScopeLabel,
    grid_start: u64,
    scan_end: u64,
    interval: (u64, u64),
    k: u32,
    window_mode: WindowMode,
    resolution: u64,
    evaluated: &mut usize,
) -> Vec<Breach> {
    let resolution = resolution.max(1);
    let k_dec = Decimal::from(k);
    let mut breaches = Vec::new();

    let full_stats = match window_mode {
        WindowMode::FullPeriod => {
            let mut stats = RunningStats::new();
            let mut at = grid_start;
            while at <= scan_end {
                stats.push(curve.balance_at(at));
                match at.checked_add(resolution) {
                    Some(next) => at = next,
                    None => break,
                }
            }
            if stats.len() < 2 {
                return breaches;
            }
            Some((stats.median().expect("non-empty"), stats.std()))
        }
        WindowMode::CausalExpanding => None,
    };

    let mut running = RunningStats::new();
    let mut at = grid_start;
    let mut index = 0usize;
    while at <= scan_end {
        let balance = curve.balance_at(at);
        let candidate = at >= interval.0 && at <= interval.1;
        match window_mode {
            WindowMode::CausalExpanding => {
                running.push(balance);
                // Needs two samples strictly before this one.
                if candidate && index >= 2 {
                    *evaluated += 1;
                    let median = running.median().expect("non-empty");
                    let threshold = median - running.std().mul_rate(k_dec);
                    if balance < threshold {
                        breaches.push(Breach {
                            at,
                            liquidity: balance,
                            threshold,
                            scope: scope.clone(),
                        });
                    }
                }
            }
            WindowMode::FullPeriod => {
                if candidate {
                    *evaluated += 1;
                    let (median, std) = full_stats.expect("checked above");
                    let threshold = median - std.mul_rate(k_dec);
                    if balance < threshold {
                        breaches.push(Breach {
                            at,
                            liquidity: balance,
                            threshold,
                            scope: scope.clone(),
                        });
                    }
                }
            }
        }
        index += 1;
        match at.checked_add(resolution) {
            Some(next) => at = next,
            None => break,
        }
    }
    breaches
}

/// Applies cooldown suppression to time-sorted breaches: the first breach of
/// an excursion fires, then nothing for `cooldown_s`.
fn suppress(
    breaches: Vec<Breach>,
    cooldown_s: u64,
    alpha_of: impl Fn(&Breach) -> Decimal,
) -> Vec<AttackTrigger> {
    let mut triggers = Vec::new();
    let mut next_allowed = 0u64;
    let mut first = true;
    for breach in breaches {
        if first || breach.at >= next_allowed {
            next_allowed = breach.at.saturating_add(cooldown_s.max(1));
            first = false;
            let alpha = alpha_of(&breach);
            triggers.push(AttackTrigger {
                at: breach.at,
                liquidity_at_trigger: breach.liquidity,
                threshold: breach.threshold,
                scope: breach.scope,
                alpha,
            });
        }
    }
    triggers
}

/// Detects median-deviation triggers over `interval` under the configured
/// scope. Triggers are strictly increasing in time and spaced by the
/// cooldown.
pub fn detect_triggers(
    liquidity: &SolverLiquidity,
    config: &TriggerConfig,
    interval: (u64, u64),
) -> Result<Vec<AttackTrigger>, StrategyError> {
    if let TriggerScope::Class(class) = &config.scope {
        return targeted_triggers(liquidity, class, config, interval);
    }
    let Some((grid_start, data_end)) = liquidity.coverage() else {
        return Err(StrategyError::InsufficientHistory);
    };
    let scan_end = data_end.min(interval.1);
    let mut evaluated = 0usize;
    let breaches = match &config.scope {
        TriggerScope::Total => scan_curve(
            &liquidity.merged_curve(None),
            ScopeLabel::Total,
            grid_start,
            scan_end,
            interval,
            config.k,
            config.window_mode,
            config.sample_resolution_s,
            &mut evaluated,
        ),
        TriggerScope::PerSolver => {
            let mut all: Vec<Breach> = Vec::new();
            for (solver, series) in liquidity.iter() {
                all.extend(scan_curve(
                    &series.curve,
                    ScopeLabel::Solver(solver.clone()),
                    grid_start,
                    scan_end,
                    interval,
                    config.k,
                    config.window_mode,
                    config.sample_resolution_s,
                    &mut evaluated,
                ));
            }
            // Merge chronologically; ties resolve by solver order for
            // determinism.
            all.sort_by(|a, b| (a.at, format!("{}", a.scope)).cmp(&(b.at, format!("{}", b.scope))));
            all
        }
        TriggerScope::Class(_) => unreachable!("handled above"),
    };
    if evaluated == 0 {
        return Err(StrategyError::InsufficientHistory);
    }
    Ok(suppress(breaches, config.cooldown_s, |_| Decimal::ONE))
}

/// Class-conditioned triggers: the detection rule runs on `L_eff(c, t)` and
/// each trigger carries `alpha = L_eff(c, t_s) / L(t_s)`.
pub fn targeted_triggers(
    liquidity: &SolverLiquidity,
    class: &IntentClass,
    config: &TriggerConfig,
    interval: (u64, u64),
) -> Result<Vec<AttackTrigger>, StrategyError> {
    let known: BTreeSet<SolverId> = liquidity.solvers().cloned().collect();
    if class.competing().is_disjoint(&known) {
        return Err(StrategyError::EmptyCompetingSet);
    }
    let Some((grid_start, data_end)) = liquidity.coverage() else {
        return Err(StrategyError::InsufficientHistory);
    };
    let scan_end = data_end.min(interval.1);
    let eff_curve = liquidity.merged_curve(Some(class.competing()));
    let total_curve = liquidity.merged_curve(None);
    let mut evaluated = 0usize;
    let breaches = scan_curve(
        &eff_curve,
        ScopeLabel::Class(class.label()),
        grid_start,
        scan_end,
        interval,
        config.k,
        config.window_mode,
        config.sample_resolution_s,
        &mut evaluated,
    );
    if evaluated == 0 {
        return Err(StrategyError::InsufficientHistory);
    }
    Ok(suppress(breaches, config.cooldown_s, |breach| {
        breach
            .liquidity
            .ratio(total_curve.balance_at(breach.at))
            .unwrap_or(Decimal::ONE)
    }))
}

/// Writes a schedule as delimited text: `t_s,liquidity,threshold,alpha,scope`.
/// `meta` lines are embedded as `# key: value` comments before the header.
pub fn write_schedule<W: Write>(
    triggers: &[AttackTrigger],
    meta: &[(String, String)],
    mut out: W,
) -> std::io::Result<()> {
    for (key, value) in meta {
        writeln!(out, "# {key}: {value}")?;
    }
    writeln!(out, "t_s,liquidity,threshold,alpha,scope")?;
    for t in triggers {
        writeln!(
            out,
            "{},{},{},{},{}",
            t.at,
            t.liquidity_at_trigger,
            t.threshold,
            t.alpha.normalize(),
            t.scope
        )?;
    }
    Ok(())
}
