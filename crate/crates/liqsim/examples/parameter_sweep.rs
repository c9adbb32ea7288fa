//! Sweep attack configurations over a grid — trigger selectivity, window,
//! margin and fee overrides, volume multipliers — and print the aligned
//! results table.
//!
//! ```bash
//! cargo run --release --example parameter_sweep
//! ```

use liqsim::engine::{AttackConfig, AttackMode, EpsilonModel, FloodGasModel};
use liqsim::ingest::{generate_synthetic, SyntheticProfile};
use liqsim::liquidity::{SolverLiquidity, WindowMode};
use liqsim::money::MoneyUsd;
use liqsim::report::{emit_reports, run_sweep, EmitFormat, RunMetadata, ScheduleSource, SweepGrid};
use rust_decimal::Decimal;
use rust_decimal_macros::dec;

fn main() -> anyhow::Result<()> {
    let profile = SyntheticProfile::debridge();
    let trace = generate_synthetic(&profile, 14 * 86_400, 7)?;
    let liquidity = SolverLiquidity::build(&trace.events, &Default::default())?;

    let base = AttackConfig {
        src_chain: profile.src_chain.clone(),
        dst_chain: profile.dst_chain.clone(),
        bridge: profile.bridge.clone(),
        attack_window_s: 1_000,
        max_tx_value: MoneyUsd::from_dollars(10_000),
        volume_multiplier: Decimal::ONE,
        override_solver_profit_pct: None,
        override_protocol_fee_pct: None,
        epsilon_model: EpsilonModel::Zero,
        flood_gas_model: FloodGasModel::TrailingMedian,
        mode: AttackMode::Rational,
    };

    // "Real" margins plus the other protocols' published margins as
    // counterfactual stress tests.
    let grid = SweepGrid {
        k_values: vec![1, 2],
        attack_windows_s: vec![300, 1_000],
        solver_profit_overrides: vec![None, Some(dec!(0.00018)), Some(dec!(0.00381))],
        volume_multipliers: vec![Decimal::ONE, dec!(0.178)],
        ..SweepGrid::default()
    };

    let results = run_sweep(
        &grid,
        &base,
        &trace.records,
        &liquidity,
        &ScheduleSource::median_deviation(),
        7,
    )?;

    let meta = RunMetadata {
        config_fingerprint: base.fingerprint(),
        seed: 7,
        window_mode: WindowMode::CausalExpanding,
        trigger_scope: "total".into(),
    };
    emit_reports(&results, EmitFormat::AlignedTable, &meta, std::io::stdout().lock())?;
    Ok(())
}
