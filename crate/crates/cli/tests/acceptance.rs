//! Every acceptance criterion at its stated scale and tolerance. Runs
//! without the test harness so each PASS/FAIL line is always printed.

use std::process::Command;

use folner_cli::verify::{reproducibility_configs, run_criterion, SUITES};

/// Runs the binary twice on each built-in config and compares the CSV bytes.
fn binary_reproducibility() -> (bool, String) {
    let dir = tempfile::tempdir().unwrap();
    let mut identical = true;
    for config in reproducibility_configs() {
        let stem = config.output.stem.clone();
        let path = dir.path().join(format!("{stem}.config.json"));
        std::fs::write(&path, serde_json::to_vec(&config).unwrap()).unwrap();
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("run{run}"));
            let status = Command::new(env!("CARGO_BIN_EXE_folner"))
                .args([
                    "run",
                    "--config",
                    path.to_str().unwrap(),
                    "--out",
                    out.to_str().unwrap(),
                ])
                .output()
                .unwrap();
            assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
            outputs.push(std::fs::read(out.join(format!("{stem}.csv"))).unwrap());
        }
        identical &= outputs[0] == outputs[1];
    }
    (
        identical,
        format!("binary run twice per config, CSV byte-identical: {identical}"),
    )
}

fn main() {
    let mut failed = Vec::new();
    for i in 0..SUITES.len() {
        let outcome = run_criterion(i);
        println!("{outcome}");
        if !outcome.passed {
            failed.push(outcome.suite);
        }
    }
    let (ok, detail) = binary_reproducibility();
    println!(
        "{} [11] reproducibility (binary): {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    if !ok {
        failed.push("reproducibility (binary)");
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
