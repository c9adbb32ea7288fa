//! Generate a synthetic intent trace from a built-in protocol profile and
//! verify that the realized statistics match the calibration constants.
//!
//! ```bash
//! cargo run --release --example synthetic_trace
//! ```

use liqsim::ingest::{generate_synthetic, SyntheticProfile};
use liqsim::liquidity::SolverLiquidity;
use liqsim::model::EventKind;

fn main() -> anyhow::Result<()> {
    for profile in [
        SyntheticProfile::debridge(),
        SyntheticProfile::across(),
        SyntheticProfile::mayan(),
    ] {
        let trace = generate_synthetic(&profile, 7 * 86_400, 42)?;

        // Realized median intent value vs the calibration constant.
        let mut values: Vec<f64> = trace.records.iter().map(|r| r.intent_value.to_f64()).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median_value = values[values.len() / 2];

        let fulfilled = trace.records.iter().filter(|r| r.fulfilled_at.is_some()).count();
        let injections: usize = trace
            .events
            .iter()
            .filter(|e| e.kind == EventKind::ExternalInjection)
            .count();

        // The ledger events replay into non-negative balance curves.
        let liquidity = SolverLiquidity::build(&trace.events, &Default::default())?;
        let (start, end) = liquidity.coverage().unwrap();

        println!("{} profile over 7 days (seed 42):", profile.bridge);
        println!("  {} intents, {} fulfilled", trace.records.len(), fulfilled);
        println!(
            "  median intent value ${median_value:.3} (calibrated to ${})",
            profile.median_intent_value
        );
        println!(
            "  {} ledger events ({} injections), total liquidity at start: ${}",
            trace.events.len(),
            injections,
            liquidity.total_at(start)?
        );
        println!("  total liquidity at end: ${}", liquidity.total_at(end)?);
        println!();
    }
    Ok(())
}
