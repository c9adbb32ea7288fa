//! Simulation of one attack instance at a trigger time.
//!
//! Rational attacks replay the historical intents inside the attack window
//! as if the attacker fulfilled them: revenue is the sum of `V_i * p_i`,
//! fill costs reuse each intent's historical gas and auction costs
//! unchanged, and the induction cost charges the protocol fee fraction on
//! the drained capital plus flooding gas. Net profit is the exact decimal
//! identity `revenue - induction - fill - epsilon`.
//!
//! Byzantine attacks measure availability harm instead: the intents that
//! would fail inside the window and the solver/protocol revenue they carry.
//! Draining cost is evaluated once with alpha = 1 and is therefore
//! independent of the window length.

use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::liquidity::{median_of, population_std, LiquidityError, SolverLiquidity};
use crate::model::{Bridge, ChainId, IntentRecord};
use crate::money::MoneyUsd;
use crate::strategy::AttackTrigger;

/// Trailing window used to estimate per-intent flooding gas and the "real"
/// protocol fee trend, in seconds.
const TRAILING_ESTIMATE_WINDOW_S: u64 = 24 * 3600;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("no intents on route {bridge} {src}->{dst} anywhere in the trace")]
    EmptyRoute {
        bridge: Bridge,
        src: ChainId,
        dst: ChainId,
    },
    #[error("invalid attack config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Liquidity(#[from] LiquidityError),
}

/// Attacker or protocol stance being simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackMode {
    Rational,
    Byzantine,
}

impl AttackMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            AttackMode::Rational => "rational",
            AttackMode::Byzantine => "byzantine",
        }
    }
}

/// Slippage/opportunity-cost term in the profit identity. Defaults to zero;
/// the knob exists because large token movements are not free.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonModel {
    #[default]
    Zero,
    Fixed(MoneyUsd),
    /// Basis points of the induced (drained) volume.
    BpsOfInducedVolume(Decimal),
}

/// Source of the per-flooding-intent gas estimate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FloodGasModel {
    /// Median historical fill gas on the route over the 24 h before the
    /// attack; falls back to the full route history when the trailing
    /// window is empty.
    #[default]
    TrailingMedian,
    FixedPerIntent(MoneyUsd),
}

/// Full parameterization of one attack simulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub src_chain: ChainId,
    pub dst_chain: ChainId,
    pub bridge: Bridge,
    /// Attack window length in seconds.
    pub attack_window_s: u64,
    /// Cap per flooding intent; determines how many intents the flooding
    /// stage needs.
    pub max_tx_value: MoneyUsd,
    /// 1 preserves historical volume; other values rescale it.
    pub volume_multiplier: Decimal,
    /// `None` means "Real": each captured intent keeps its historical
    /// margin.
    pub override_solver_profit_pct: Option<Decimal>,
    /// `None` means "Real": the trailing median fee observed on the route.
    pub override_protocol_fee_pct: Option<Decimal>,
    #[serde(default)]
    pub epsilon_model: EpsilonModel,
    #[serde(default)]
    pub flood_gas_model: FloodGasModel,
    pub mode: AttackMode,
}

impl AttackConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.attack_window_s == 0 {
            return Err(EngineError::InvalidConfig("attack_window_s must be > 0".into()));
        }
        if !self.max_tx_value.is_positive() {
            return Err(EngineError::InvalidConfig("max_tx_value must be > 0".into()));
        }
        if self.volume_multiplier <= Decimal::ZERO {
            return Err(EngineError::InvalidConfig(
                "volume_multiplier must be > 0".into(),
            ));
        }
        Ok(())
    }

    /// Short stable fingerprint of the whole configuration, used to derive
    /// per-instance seeds and to sort and label report rows.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        let mut hex = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}

/// Deterministic per-instance seed derived from the run seed, the attack
/// timestamp, and the config fingerprint, so instances can run in parallel
/// in any order.
pub fn instance_seed(global_seed: u64, t_s: u64, fingerprint: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(global_seed.to_le_bytes());
    hasher.update(t_s.to_le_bytes());
    hasher.update(fingerprint.as_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is long enough"))
}

/// Outcome of one rational attack instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackInstanceResult {
    pub t_s: u64,
    /// Exhaustion fraction used for the flooding stage.
    pub alpha: Decimal,
    /// Capital the attacker must front to drain `alpha * L(t_s)`. Refunded
    /// after settlement, so reported separately from cost.
    pub working_capital: MoneyUsd,
    pub induction_cost: MoneyUsd,
    pub n_flood_intents: u64,
    pub fill_cost: MoneyUsd,
    pub revenue: MoneyUsd,
    pub epsilon: MoneyUsd,
    pub net_profit: MoneyUsd,
    pub n_fulfillments: u64,
    pub volume_fulfilled: MoneyUsd,
    pub captured_intent_ids: Vec<String>,
}

/// Availability harm of one byzantine attack instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ByzantineImpact {
    pub t_s: u64,
    /// Cost of draining all liquidity at `t_s`; window-invariant.
    pub total_cost: MoneyUsd,
    pub failed_intents: u64,
    pub failed_value_total: MoneyUsd,
    pub failed_value_median: MoneyUsd,
    pub failed_value_std: MoneyUsd,
    pub missed_solver_profit: MoneyUsd,
    pub missed_protocol_fees: MoneyUsd,
}

/// The flooding-stage cost breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InductionCost {
    pub cost: MoneyUsd,
    pub n_flood_intents: u64,
    /// `alpha * L(t_s)`: the capital that must be fronted, not a cost.
    pub working_capital: MoneyUsd,
    pub fee_component: MoneyUsd,
    pub gas_component: MoneyUsd,
}

/// Cost of removing a fraction `alpha` of `liquidity`: the protocol fee on
/// the drained capital plus gas for `ceil(alpha * L / max_tx_value)`
/// flooding intents.
pub fn induction_cost(
    alpha: Decimal,
    liquidity: MoneyUsd,
    fee_pct: Decimal,
    flood_gas_per_intent: MoneyUsd,
    max_tx_value: MoneyUsd,
) -> InductionCost {
    let working_capital = liquidity.mul_rate(alpha);
    let fee_component = working_capital.mul_rate(fee_pct);
    let n_flood_intents = if working_capital.is_zero() {
        0
    } else {
        (working_capital.amount() / max_tx_value.amount())
            .ceil()
            .to_u64()
            .unwrap_or(u64::MAX)
    };
    let gas_component = flood_gas_per_intent.mul_rate(Decimal::from(n_flood_intents));
    InductionCost {
        cost: fee_component + gas_component,
        n_flood_intents,
        working_capital,
        fee_component,
        gas_component,
    }
}

/// Records on the configured route, preserving created_at order.
pub fn route_records<'a>(records: &'a [IntentRecord], config: &AttackConfig) -> Vec<&'a IntentRecord> {
    records
        .iter()
        .filter(|r| {
            r.bridge == config.bridge
                && r.src_chain == config.src_chain
                && r.dst_chain == config.dst_chain
        })
        .collect()
}

fn window_slice<'a, 'b>(
    route: &'b [&'a IntentRecord],
    t_s: u64,
    window_s: u64,
) -> &'b [&'a IntentRecord] {
    let start = route.partition_point(|r| r.created_at < t_s);
    let end = route.partition_point(|r| r.created_at < t_s.saturating_add(window_s));
    &route[start..end]
}

/// Lower-middle median over a set of decimals; `None` when empty.
fn median_decimal(mut values: Vec<Decimal>) -> Option<Decimal> {
    if values.is_empty() {
        return None;
    }
    values.sort();
    Some(values[(values.len() - 1) / 2])
}

/// Trailing-median estimate over the 24 h before `t_s`, falling back to the
/// route history before `t_s`, then to the whole route. The route slice is
/// assumed sorted by creation time.
fn trailing_median<F: Fn(&IntentRecord) -> Decimal>(
    route: &[&IntentRecord],
    t_s: u64,
    extract: F,
) -> Decimal {
    let from = t_s.saturating_sub(TRAILING_ESTIMATE_WINDOW_S);
    let start = route.partition_point(|r| r.created_at < from);
    let end = route.partition_point(|r| r.created_at < t_s);
    if let Some(m) = median_decimal(route[start..end].iter().map(|r| extract(r)).collect()) {
        return m;
    }
    if let Some(m) = median_decimal(route[..end].iter().map(|r| extract(r)).collect()) {
        return m;
    }
    median_decimal(route.iter().map(|r| extract(r)).collect()).unwrap_or(Decimal::ZERO)
}

/// Per-flooding-intent gas under the configured model.
pub fn resolve_flood_gas(config: &AttackConfig, route: &[&IntentRecord], t_s: u64) -> MoneyUsd {
    match config.flood_gas_model {
        FloodGasModel::FixedPerIntent(gas) => gas,
        FloodGasModel::TrailingMedian => {
            MoneyUsd::new(trailing_median(route, t_s, |r| r.fill_gas.amount()))
        }
    }
}

/// Protocol fee fraction used for the induction stage: the override when
/// set, otherwise the trailing median fee observed on the route.
pub fn resolve_protocol_fee_pct(config: &AttackConfig, route: &[&IntentRecord], t_s: u64) -> Decimal {
    config
        .override_protocol_fee_pct
        .unwrap_or_else(|| trailing_median(route, t_s, |r| r.protocol_fee_pct))
}

/// The intents the attacker captures in `[t_s, t_s + window)` after volume
/// rescaling.
///
/// The integer part of the multiplier replicates every intent that many
/// times; the fractional part keeps each intent once more with that
/// probability, decided by a deterministic stream seeded with `seed`. A
/// multiplier of exactly 1 returns the base set unchanged without consuming
/// randomness.
pub fn capture_intents(
    route: &[&IntentRecord],
    t_s: u64,
    window_s: u64,
    volume_multiplier: Decimal,
    seed: u64,
) -> Vec<IntentRecord> {
    capture_refs(route, t_s, window_s, volume_multiplier, seed)
        .into_iter()
        .cloned()
        .collect()
}

/// Reference-returning twin of [`capture_intents`]; the simulation path
/// uses it to avoid cloning records per instance.
fn capture_refs<'a>(
    route: &[&'a IntentRecord],
    t_s: u64,
    window_s: u64,
    volume_multiplier: Decimal,
    seed: u64,
) -> Vec<&'a IntentRecord> {
    use rand::Rng;
    use rand::SeedableRng;

    let base = window_slice(route, t_s, window_s);
    let whole = volume_multiplier.trunc().to_u64().unwrap_or(0);
    let fraction = volume_multiplier - volume_multiplier.trunc();
    let fraction_f64 = fraction.to_f64().unwrap_or(0.0);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut captured = Vec::with_capacity(base.len() * (whole as usize + 1));
    for record in base {
        for _ in 0..whole {
            captured.push(*record);
        }
        if fraction > Decimal::ZERO && rng.random::<f64>() < fraction_f64 {
            captured.push(*record);
        }
    }
    captured
}

/// Simulates one rational attack instance at a trigger.
///
/// `records` must be the full trace sorted by creation time; the route is
/// selected per the config. An empty window is a valid zero-capture outcome
/// (pure cost); a route with no intents anywhere in the trace is an error.
pub fn rational_attack(
    trigger: &AttackTrigger,
    records: &[IntentRecord],
    liquidity: &SolverLiquidity,
    config: &AttackConfig,
    global_seed: u64,
) -> Result<AttackInstanceResult, EngineError> {
    config.validate()?;
    let route = route_records(records, config);
    if route.is_empty() {
        return Err(EngineError::EmptyRoute {
            bridge: config.bridge.clone(),
            src: config.src_chain.clone(),
            dst: config.dst_chain.clone(),
        });
    }

    let seed = instance_seed(global_seed, trigger.at, &config.fingerprint());
    let captured = capture_refs(
        &route,
        trigger.at,
        config.attack_window_s,
        config.volume_multiplier,
        seed,
    );

    let mut revenue = MoneyUsd::ZERO;
    let mut fill_cost = MoneyUsd::ZERO;
    let mut volume = MoneyUsd::ZERO;
    let mut ids = Vec::with_capacity(captured.len());
    for intent in &captured {
        let margin = config
            .override_solver_profit_pct
            .unwrap_or(intent.solver_profit_pct);
        revenue += intent.intent_value.mul_rate(margin);
        fill_cost += intent.fill_gas + intent.auction_cost;
        volume += intent.intent_value;
        ids.push(intent.intent_id.clone());
    }

    let total_liquidity = liquidity.total_at(trigger.at)?;
    let fee_pct = resolve_protocol_fee_pct(config, &route, trigger.at);
    let flood_gas = resolve_flood_gas(config, &route, trigger.at);
    let induction = induction_cost(
        trigger.alpha,
        total_liquidity,
        fee_pct,
        flood_gas,
        config.max_tx_value,
    );

    let epsilon = match config.epsilon_model {
        EpsilonModel::Zero => MoneyUsd::ZERO,
        EpsilonModel::Fixed(e) => e,
        EpsilonModel::BpsOfInducedVolume(bps) => induction
            .working_capital
            .mul_rate(bps / Decimal::from(10_000)),
    };

    let net_profit = revenue - induction.cost - fill_cost - epsilon;
    Ok(AttackInstanceResult {
        t_s: trigger.at,
        alpha: trigger.alpha,
        working_capital: induction.working_capital,
        induction_cost: induction.cost,
        n_flood_intents: induction.n_flood_intents,
        fill_cost,
        revenue,
        epsilon,
        net_profit,
        n_fulfillments: captured.len() as u64,
        volume_fulfilled: volume,
        captured_intent_ids: ids,
    })
}

/// Simulates one byzantine availability attack at a trigger.
///
/// The failed set is the historical intents in the window, unscaled. The
/// draining cost uses alpha = 1: the full liquidity must be removed no
/// matter how long the outage lasts.
pub fn byzantine_attack(
    trigger: &AttackTrigger,
    records: &[IntentRecord],
    liquidity: &SolverLiquidity,
    config: &AttackConfig,
) -> Result<ByzantineImpact, EngineError> {
    config.validate()?;
    let route = route_records(records, config);
    let failed = window_slice(&route, trigger.at, config.attack_window_s);

    let mut failed_value_total = MoneyUsd::ZERO;
    let mut missed_solver_profit = MoneyUsd::ZERO;
    let mut missed_protocol_fees = MoneyUsd::ZERO;
    let mut values = Vec::with_capacity(failed.len());
    for intent in failed {
        failed_value_total += intent.intent_value;
        missed_solver_profit += intent.solver_revenue();
        missed_protocol_fees += intent.protocol_fee();
        values.push(intent.intent_value);
    }

    let total_liquidity = liquidity.total_at(trigger.at)?;
    let fee_pct = resolve_protocol_fee_pct(config, &route, trigger.at);
    let flood_gas = resolve_flood_gas(config, &route, trigger.at);
    let induction = induction_cost(
        Decimal::ONE,
        total_liquidity,
        fee_pct,
        flood_gas,
        config.max_tx_value,
    );

    Ok(ByzantineImpact {
        t_s: trigger.at,
        total_cost: induction.cost,
        failed_intents: failed.len() as u64,
        failed_value_total,
        failed_value_median: median_of(&values),
        failed_value_std: population_std(&values),
        missed_solver_profit,
        missed_protocol_fees,
    })
}
