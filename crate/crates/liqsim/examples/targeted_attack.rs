//! Targeted attack on one intent class: when only a subset of solvers
//! competes for small USDC transfers, draining that subset's liquidity is
//! enough — the exhaustion fraction alpha collapses and the attack cost
//! falls with it.
//!
//! ```bash
//! cargo run --release --example targeted_attack
//! ```

use std::collections::BTreeMap;

use liqsim::engine::induction_cost;
use liqsim::liquidity::{ClassCriteria, IntentClass, SolverLiquidity, WindowMode};
use liqsim::model::{Bridge, ChainId, EventKind, LiquidityEvent, SolverId};
use liqsim::money::MoneyUsd;
use liqsim::strategy::{detect_triggers, targeted_triggers, TriggerConfig};
use rust_decimal::Decimal;
use rust_decimal_macros::dec;

fn main() -> anyhow::Result<()> {
    // Five solvers: the big one never bids below $100, two went dormant,
    // leaving two small solvers actually competing for the class. The
    // competing pair holds 7.5% of the $600k total.
    let chain = ChainId::Ethereum;
    let competing = [
        (SolverId::normalize("0xcbb0cb4492afbcd9963441cc6aea50f35807ff96", chain.clone())?, 25_000),
        (SolverId::normalize("0x7c825c6e7e4e1f618ca67e4943cdb41ca00b7f6b", chain.clone())?, 20_000),
    ];
    let excluded = [
        (SolverId::normalize("0xdfd122610a14ac12d934898c02dbec1f72708116", chain.clone())?, 455_000),
        (SolverId::normalize("0x38bf020e39e5a3ef1519c1283f6cac8a6b5851ff", chain.clone())?, 60_000),
        (SolverId::normalize("0x466b037ace44c0134dcebd965a4a22aed6dea027", chain)?, 40_000),
    ];

    // Ledger: initial balances injected at t=0, then a proportional 10%
    // dip on every balance for four hours each day.
    let mut events = Vec::new();
    let all = competing.iter().chain(excluded.iter());
    for (solver, dollars) in all.clone() {
        events.push(LiquidityEvent {
            solver: solver.clone(),
            at: 0,
            delta: MoneyUsd::from_dollars(*dollars),
            kind: EventKind::ExternalInjection,
        });
    }
    for day in 0..7u64 {
        for (solver, dollars) in all.clone() {
            let dip = MoneyUsd::from_dollars(*dollars).mul_rate(dec!(0.1));
            events.push(LiquidityEvent {
                solver: solver.clone(),
                at: day * 86_400 + 14 * 3_600,
                delta: -dip,
                kind: EventKind::FulfillmentOutflow,
            });
            events.push(LiquidityEvent {
                solver: solver.clone(),
                at: day * 86_400 + 18 * 3_600,
                delta: dip,
                kind: EventKind::RefundInflow,
            });
        }
    }
    let liquidity = SolverLiquidity::build(&events, &BTreeMap::new())?;
    let coverage = (0, 7 * 86_400 - 1);

    // The class: sub-$100 USDC transfers, served only by the two small
    // solvers.
    let criteria = ClassCriteria::new(
        Bridge::Mayan,
        Some("USDC"),
        None,
        Some(MoneyUsd::from_dollars(100)),
    )?;
    let class = IntentClass::new(criteria, competing.iter().map(|(s, _)| s.clone()).collect())?;

    let mut config = TriggerConfig::new(2, 1_000);
    config.window_mode = WindowMode::FullPeriod;

    let targeted = targeted_triggers(&liquidity, &class, &config, coverage)?;
    let baseline = detect_triggers(&liquidity, &config, coverage)?;

    let fee = dec!(0.00029);
    let flood_gas = MoneyUsd::new(dec!(0.30));
    let max_tx = MoneyUsd::from_dollars(10_000);

    println!("class: {}", class.label());
    println!("targeted triggers: {}, baseline triggers: {}", targeted.len(), baseline.len());
    println!();
    println!(
        "{:>10}  {:>7}  {:>14}  {:>14}  {:>9}",
        "t_s", "alpha", "targeted cost", "baseline cost", "saved"
    );
    for trigger in targeted.iter().take(7) {
        let total = liquidity.total_at(trigger.at)?;
        let targeted_cost = induction_cost(trigger.alpha, total, fee, flood_gas, max_tx).cost;
        let baseline_cost = induction_cost(Decimal::ONE, total, fee, flood_gas, max_tx).cost;
        let saved = Decimal::ONE - targeted_cost.ratio(baseline_cost).unwrap();
        println!(
            "{:>10}  {:>7}  {:>14}  {:>14}  {:>8}%",
            trigger.at,
            trigger.alpha.round_dp(4),
            format!("${targeted_cost}"),
            format!("${baseline_cost}"),
            (saved * dec!(100)).round_dp(2)
        );
    }
    Ok(())
}
