//! Reconstruct per-solver balance curves from signed ledger events and
//! query balances, totals, and the statistics the attack trigger consumes.
//!
//! ```bash
//! cargo run --release --example ledger_replay
//! ```

use std::collections::BTreeMap;

use liqsim::liquidity::{stats_at, SolverLiquidity, WindowMode};
use liqsim::model::{ChainId, EventKind, LiquidityEvent, SolverId};
use liqsim::money::MoneyUsd;
use rust_decimal_macros::dec;

fn main() -> anyhow::Result<()> {
    let solver = SolverId::normalize("0xDfd122610A14Ac12D934898c02dBEc1f72708116", ChainId::Ethereum)?;
    let mut origins = BTreeMap::new();
    origins.insert(solver.clone(), MoneyUsd::from_dollars(600_000));

    // A fill locks capital until the refund lands; an operator tops up later.
    let events = vec![
        LiquidityEvent {
            solver: solver.clone(),
            at: 600,
            delta: MoneyUsd::new(dec!(-250000)),
            kind: EventKind::FulfillmentOutflow,
        },
        LiquidityEvent {
            solver: solver.clone(),
            at: 1_881, // refund arrives ~21 minutes later
            delta: MoneyUsd::new(dec!(250952.5)),
            kind: EventKind::RefundInflow,
        },
        LiquidityEvent {
            solver: solver.clone(),
            at: 5_000,
            delta: MoneyUsd::new(dec!(100000)),
            kind: EventKind::ExternalInjection,
        },
    ];

    let liquidity = SolverLiquidity::build(&events, &origins)?;
    let curve = &liquidity.get(&solver).unwrap().curve;

    println!("balance before the fill:  ${}", curve.balance_at(0));
    println!("balance mid-settlement:   ${}", curve.balance_at(1_000));
    println!("balance after the refund: ${}", curve.balance_at(2_000));
    println!("balance after the top-up: ${}", curve.balance_at(6_000));

    // Median and deviation over a 60-second sampling grid; causal mode only
    // sees history up to the query time.
    let stats = stats_at(curve, 600, 4_000, WindowMode::CausalExpanding, 60)?;
    println!(
        "causal stats at t=4000: median ${}, std ${} over {} samples",
        stats.median, stats.std, stats.n_samples
    );

    let stats = stats_at(curve, 600, 6_000, WindowMode::FullPeriod, 60)?;
    println!(
        "full-period stats:      median ${}, std ${} over {} samples",
        stats.median, stats.std, stats.n_samples
    );
    Ok(())
}
