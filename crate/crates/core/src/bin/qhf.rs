//! Command line front end: list, run and tabulate scenarios, verify group
//! tables. Exits 0 iff every check passes or is skipped, 1 when a check
//! fails, 2 on invalid input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qhf::catalog::{
    build_scenario, compare_b3_table, export_report, export_report_timed, f_basis_table, render_expansion,
    verify_group, Format, Params, Report, RunOptions, B3_LABELS, SCENARIOS,
};
use qhf::group::FiniteGroup;
use qhf::hypergroup::structure_constants;

#[derive(Parser)]
#[command(name = "qhf", version, about = "Finite quantum hypergroups from twisted group Kac algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    scenario: String,
    /// Scenario parameter, repeatable.
    #[arg(long = "param", value_name = "K=V", value_parser = parse_param)]
    params: Vec<(String, String)>,
    #[arg(long, default_value_t = qhf::DEFAULT_TOL)]
    tol: f64,
    /// Largest dim A on which complete positivity is evaluated.
    #[arg(long = "cp-limit", default_value_t = qhf::hypergroup::DEFAULT_CP_LIMIT)]
    cp_limit: usize,
    #[arg(long, default_value_t = qhf::DEFAULT_SEED)]
    seed: u64,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions { tol: self.tol, cp_limit: self.cp_limit, seed: self.seed }
    }

    fn params(&self) -> Params {
        self.params.iter().cloned().collect()
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    /// The orthonormal basis of B used internally.
    Computed,
    /// The f basis of the Q3 table, aligned and compared term by term.
    #[value(name = "paper-f")]
    FBasis,
}

#[derive(Subcommand)]
enum Command {
    /// List scenarios and their parameters.
    List,
    /// Run a scenario and print its report.
    Run {
        #[command(flatten)]
        args: RunArgs,
        /// Also write the report as JSON.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Include elapsed times (the output is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Print the structure constants of the induced coproduct.
    Table {
        #[command(flatten)]
        args: RunArgs,
        #[arg(long, value_enum, default_value = "computed")]
        basis: Basis,
    },
    /// Validate a group table and the Kac algebra axioms of C(G).
    VerifyGroup {
        path: PathBuf,
        #[arg(long, default_value_t = qhf::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected K=V, got {s:?}"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qhf: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(report: &Report, json: Option<&PathBuf>, timings: bool) -> qhf::Result<bool> {
    let export = if timings { export_report_timed } else { export_report };
    print!("{}", String::from_utf8_lossy(&export(report, Format::TextTable)?));
    if let Some(path) = json {
        std::fs::write(path, export(report, Format::Json)?)?;
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> qhf::Result<bool> {
    match cli.command {
        Command::List => {
            for s in SCENARIOS {
                let params: Vec<String> = s.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!("{:<16} {:<20} {}", s.name, params.join(" "), s.summary);
            }
            Ok(true)
        }
        Command::Run { args, json, timings } => {
            let run = build_scenario(&args.scenario, &args.params(), &args.options())?;
            emit(&run.report, json.as_ref(), timings)
        }
        Command::Table { args, basis } => {
            let run = build_scenario(&args.scenario, &args.params(), &args.options())?;
            let h = &run.hypergroup;
            match basis {
                Basis::Computed => {
                    let labels: Vec<String> = (0..h.dim()).map(|k| format!("e{k}")).collect();
                    let sc = structure_constants(h, &h.basis(), args.tol)?;
                    for k in 0..h.dim() {
                        println!("Δ̃({}) = {}", labels[k], render_expansion(&sc, k, &labels, args.tol));
                    }
                    println!("expansion residual {:.3e}", sc.residual);
                    Ok(run.report.passed())
                }
                Basis::FBasis => {
                    let cmp = compare_b3_table(h)?;
                    if let Ok((al, sc)) = f_basis_table(h) {
                        let labels: Vec<String> = B3_LABELS.iter().map(|s| s.to_string()).collect();
                        println!("alignment {}", serde_json::to_string(&al)?);
                        for k in 0..9 {
                            println!("Δ̃({}) = {}", labels[k], render_expansion(&sc, k, &labels, 1e-12));
                        }
                    }
                    println!(
                        "terms {} mismatched {} max residual {:.3e}",
                        cmp.total_terms, cmp.mismatched_terms, cmp.max_residual
                    );
                    for m in &cmp.mismatches {
                        let ratio = m.power_of_two_ratio.map_or(String::new(), |r| format!("  ratio {r}"));
                        println!(
                            "  Δ̃({}) {}: table {:?} computed {:?}{}",
                            m.k, m.term, m.table, m.computed, ratio
                        );
                    }
                    Ok(cmp.reproduced())
                }
            }
        }
        Command::VerifyGroup { path, tol, json } => {
            let text = std::fs::read_to_string(&path)?;
            let g = FiniteGroup::from_json(&text)?;
            let opts = RunOptions { tol, ..RunOptions::default() };
            emit(&verify_group(g, &opts), json.as_ref(), false)
        }
    }
}
