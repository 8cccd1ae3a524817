//! Runs a registered scenario and exports its report.
//!
//! Run with `cargo run --example scenario_report -- zm2 m=3 r=2`.

use qhf::catalog::{export_report, run_scenario, Format, Params, RunOptions, SCENARIOS};

fn main() -> qhf::Result<()> {
    let mut args = std::env::args().skip(1);
    let Some(name) = args.next() else {
        for s in SCENARIOS {
            println!("{:<16} {}", s.name, s.summary);
        }
        return Ok(());
    };
    let params: Params = args
        .filter_map(|kv| kv.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
        .collect();
    let report = run_scenario(&name, &params, &RunOptions::default())?;
    print!("{}", String::from_utf8_lossy(&export_report(&report, Format::TextTable)?));
    let json = export_report(&report, Format::Json)?;
    println!("JSON export: {} bytes", json.len());
    Ok(())
}
