//! End-to-end checks of the binary: subcommand wiring, file formats, and
//! environment variable overrides.

use std::fs;
use std::path::Path;
use std::process::Command;

fn liqsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liqsim"))
}

fn run(cmd: &mut Command) -> String {
    let output = cmd.output().expect("binary runs");
    assert!(
        output.status.success(),
        "command failed:\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn synth_into(dir: &Path) -> (std::path::PathBuf, std::path::PathBuf) {
    let traces = dir.join("traces.csv");
    let events = dir.join("events.csv");
    run(liqsim()
        .arg("synth")
        .args(["--profile", "debridge"])
        .args(["--duration-s", "172800"])
        .args(["--seed", "7"])
        .arg("--out-traces")
        .arg(&traces)
        .arg("--out-events")
        .arg(&events));
    (traces, events)
}

#[test]
fn synth_then_triggers_then_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let (traces, events) = synth_into(dir.path());

    let schedule = dir.path().join("schedule.csv");
    run(liqsim()
        .arg("triggers")
        .arg("--traces")
        .arg(&traces)
        .arg("--liquidity-events")
        .arg(&events)
        .args(["--k", "1", "--cooldown-s", "1000"])
        .arg("--out")
        .arg(&schedule));
    let schedule_text = fs::read_to_string(&schedule).unwrap();
    assert!(schedule_text.contains("t_s,liquidity,threshold,alpha,scope"));
    assert!(schedule_text.contains("# k: 1"));

    let instances = dir.path().join("instances.csv");
    let agg = dir.path().join("agg.csv");
    run(liqsim()
        .arg("simulate")
        .arg("--traces")
        .arg(&traces)
        .arg("--liquidity-events")
        .arg(&events)
        .args(["--src-blockchain", "solana"])
        .args(["--dst-blockchain", "ethereum"])
        .args(["--bridge", "debridge"])
        .args(["--attack-window", "1000"])
        .args(["--k", "1", "--seed", "7"])
        .arg("--out")
        .arg(&instances)
        .arg("--aggregate-out")
        .arg(&agg));
    let instances_text = fs::read_to_string(&instances).unwrap();
    assert!(instances_text.contains("net_profit"));
    assert!(instances_text.contains("# seed: 7"));
    let agg_text = fs::read_to_string(&agg).unwrap();
    assert!(agg_text.contains("pr_profit"));
    assert!(agg_text.lines().filter(|l| !l.starts_with('#')).count() == 2);
}

#[test]
fn attack_window_env_var_overrides_default() {
    let dir = tempfile::tempdir().unwrap();
    let (traces, events) = synth_into(dir.path());
    let out = dir.path().join("byz.csv");
    // W=200 via the environment and three uniform placements.
    run(liqsim()
        .arg("byzantine")
        .arg("--traces")
        .arg(&traces)
        .arg("--liquidity-events")
        .arg(&events)
        .args(["--src-blockchain", "solana"])
        .args(["--dst-blockchain", "ethereum"])
        .args(["--bridge", "debridge"])
        .args(["--placement", "uniform:3"])
        .env("ATTACK_WINDOW", "200")
        .arg("--out")
        .arg(&out)
        .arg("--summary-out")
        .arg(dir.path().join("summary.csv")));
    let text = fs::read_to_string(&out).unwrap();
    // Three placements, one impact row each.
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.contains("total_cost_median"));
}

#[test]
fn sweep_emits_sorted_stable_table() {
    let dir = tempfile::tempdir().unwrap();
    let (traces, events) = synth_into(dir.path());
    let mut args = vec![
        "sweep".to_string(),
        "--traces".into(),
        traces.display().to_string(),
        "--liquidity-events".into(),
        events.display().to_string(),
        "--src-blockchain".into(),
        "solana".into(),
        "--dst-blockchain".into(),
        "ethereum".into(),
        "--bridge".into(),
        "debridge".into(),
        "--k-values".into(),
        "0,1".into(),
        "--solver-profit-pcts".into(),
        "real,0.00018".into(),
        "--seed".into(),
        "7".into(),
        "--format".into(),
        "csv".into(),
    ];
    let first = run(liqsim().args(&args));
    let second = run(liqsim().args(&args));
    assert_eq!(first, second, "sweep output must be byte-stable");
    let rows: Vec<&str> = first
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("fingerprint"))
        .collect();
    assert_eq!(rows.len(), 4, "2 k-values x 2 margin overrides");
    let mut fingerprints: Vec<&str> = rows.iter().map(|r| r.split(',').next().unwrap()).collect();
    let sorted = {
        let mut copy = fingerprints.clone();
        copy.sort();
        copy
    };
    assert_eq!(fingerprints, sorted, "rows sorted by fingerprint");
    fingerprints.dedup();
    assert_eq!(fingerprints.len(), 4);

    // Aligned-table mode renders the same cells.
    args.pop();
    args.push("table".into());
    let table = run(liqsim().args(&args));
    assert!(table.contains("Pr[Profit]"));
    assert!(table.contains("debridge"));
}

#[test]
fn jsonl_traces_round_trip_through_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let traces = dir.path().join("traces.jsonl");
    let events = dir.path().join("events.csv");
    run(liqsim()
        .arg("synth")
        .args(["--profile", "mayan"])
        .args(["--duration-s", "86400"])
        .args(["--seed", "3"])
        .args(["--format", "jsonl"])
        .arg("--out-traces")
        .arg(&traces)
        .arg("--out-events")
        .arg(&events));
    let first_line = fs::read_to_string(&traces).unwrap();
    assert!(first_line.trim_start().starts_with('{'));

    let out = dir.path().join("instances.jsonl");
    run(liqsim()
        .arg("simulate")
        .arg("--traces")
        .arg(&traces)
        .args(["--traces-format", "jsonl"])
        .arg("--liquidity-events")
        .arg(&events)
        .args(["--src-blockchain", "solana"])
        .args(["--dst-blockchain", "ethereum"])
        .args(["--bridge", "mayan"])
        .args(["--k", "0", "--seed", "3", "--format", "jsonl"])
        .arg("--out")
        .arg(&out));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().next().unwrap().contains("_meta"));
}

#[test]
fn price_table_values_token_amount_traces() {
    let dir = tempfile::tempdir().unwrap();
    let traces = dir.path().join("traces.csv");
    fs::write(
        &traces,
        "intent_id,bridge,src_blockchain,dst_blockchain,dst_from_address,src_timestamp,\
         dst_timestamp,input_amount,src_symbol,solver_profitability_pct,percent_fee,dst_symbol\n\
         a,mayan,solana,ethereum,0xAA,1748736600,1748736630,2.0,SOL,0.004,0.0003,USDC\n",
    )
    .unwrap();
    let events = dir.path().join("events.csv");
    fs::write(
        &events,
        "solver,chain,at_epoch_s,delta_usd,kind\n\
         0xAA,ethereum,1748736000,600000,external_injection\n\
         0xAA,ethereum,1748740000,0.000001,external_injection\n",
    )
    .unwrap();
    let prices = dir.path().join("prices.csv");
    fs::write(&prices, "symbol,date,price_usd\nSOL,2025-06-01,150\n").unwrap();

    let out = dir.path().join("byz.csv");
    run(liqsim()
        .arg("byzantine")
        .arg("--traces")
        .arg(&traces)
        .arg("--liquidity-events")
        .arg(&events)
        .arg("--prices")
        .arg(&prices)
        .args(["--src-blockchain", "solana"])
        .args(["--dst-blockchain", "ethereum"])
        .args(["--bridge", "mayan"])
        .args(["--placement", "uniform:1"])
        .arg("--out")
        .arg(&out));
    let text = fs::read_to_string(&out).unwrap();
    // 2.0 SOL at $150 = $300 of failed value in the window.
    let row = text.lines().last().unwrap();
    assert!(row.contains(",300,"), "expected $300 failed value in {row}");
}
