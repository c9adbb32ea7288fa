//! Simulate a rational liquidity exhaustion attack: drain the solvers with
//! flooding intents at a trigger, then fulfill the displaced legitimate
//! intents and pocket the margins.
//!
//! ```bash
//! cargo run --release --example rational_attack
//! ```

use liqsim::engine::{rational_attack, AttackConfig, AttackMode, EpsilonModel, FloodGasModel};
use liqsim::ingest::{generate_synthetic, SyntheticProfile};
use liqsim::liquidity::SolverLiquidity;
use liqsim::money::MoneyUsd;
use liqsim::report::aggregate;
use liqsim::strategy::{detect_triggers, TriggerConfig};
use rust_decimal::Decimal;

fn main() -> anyhow::Result<()> {
    let profile = SyntheticProfile::debridge();
    let trace = generate_synthetic(&profile, 14 * 86_400, 7)?;
    let liquidity = SolverLiquidity::build(&trace.events, &Default::default())?;
    let coverage = liquidity.coverage().unwrap();

    let config = AttackConfig {
        src_chain: profile.src_chain.clone(),
        dst_chain: profile.dst_chain.clone(),
        bridge: profile.bridge.clone(),
        attack_window_s: 1_000,
        max_tx_value: MoneyUsd::from_dollars(10_000),
        volume_multiplier: Decimal::ONE,
        override_solver_profit_pct: None, // "Real": each intent's own margin
        override_protocol_fee_pct: None,  // "Real": trailing route median
        epsilon_model: EpsilonModel::Zero,
        flood_gas_model: FloodGasModel::TrailingMedian,
        mode: AttackMode::Rational,
    };

    let triggers = detect_triggers(&liquidity, &TriggerConfig::new(1, 1_000), coverage)?;
    let instances: Vec<_> = triggers
        .iter()
        .map(|t| rational_attack(t, &trace.records, &liquidity, &config, 7))
        .collect::<Result<_, _>>()?;

    // One instance in detail.
    if let Some(first) = instances.iter().find(|i| i.net_profit.is_positive()) {
        println!("one profitable instance at t_s={}:", first.t_s);
        println!("  liquidity to drain (working capital): ${}", first.working_capital);
        println!(
            "  induction cost: ${} across {} flooding intents",
            first.induction_cost, first.n_flood_intents
        );
        println!(
            "  captured {} intents worth ${}",
            first.n_fulfillments, first.volume_fulfilled
        );
        println!("  fill cost: ${}  revenue: ${}", first.fill_cost, first.revenue);
        println!("  net profit: ${}", first.net_profit);
        println!();
    }

    let report = aggregate("example", &instances);
    println!("across {} attack instances (k=1, W=1000s):", report.n_attacks);
    println!(
        "  mean net profit ${} +/- {}  (p90 ${})",
        report.mean_net_profit, report.std_net_profit, report.p90_net_profit
    );
    println!("  Pr[profit] = {}", report.pr_profit);
    println!("  reliable attack: {}", report.reliable_attack);
    Ok(())
}
