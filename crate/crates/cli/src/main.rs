use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use folner_cli::config::{ExperimentConfig, Plan};
use folner_cli::listing::{catalog_json, catalog_text};
use folner_cli::ops::execute;
use folner_cli::verify::run_suite;
use folner_cli::{cmd_run, CliError, RunOptions};
use folner_core::GroupId;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "folner",
    version,
    about = "Empirical measures and Wasserstein pseudometrics along Følner sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceArg {
    Wasserstein,
    MeanDistance,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(clap::Args)]
struct FolnerArgs {
    /// Group: z, zN (e.g. z2) or heisenberg.
    #[arg(long, default_value = "z")]
    group: String,
    /// Følner kind; defaults to the standard one for the group.
    #[arg(long)]
    kind: Option<String>,
    /// Interval direction for z_interval: forward or backward.
    #[arg(long)]
    direction: Option<String>,
}

#[derive(clap::Args)]
struct SystemArgs {
    /// Catalog system name.
    #[arg(long)]
    system: String,
    /// System parameters as a JSON object.
    #[arg(long, default_value = "{}")]
    params: String,
    /// Følner kind; defaults to the standard one for the system's group.
    #[arg(long = "folner-kind")]
    folner_kind: Option<String>,
    /// Interval direction for z_interval: forward or backward.
    #[arg(long)]
    direction: Option<String>,
    /// First point, as JSON.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Second point, as JSON.
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// List systems, Følner kinds, operations and verify suites.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Run an experiment config, writing CSV and JSON reports.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, overriding the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed, overriding the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Print the report to stdout as well.
        #[arg(long)]
        json: bool,
    },
    /// Run an acceptance suite ("all" for every suite).
    Verify {
        suite: String,
        #[arg(long)]
        json: bool,
    },
    /// Exact Følner defect of F_n under a generator.
    Defect {
        #[command(flatten)]
        folner: FolnerArgs,
        #[arg(long)]
        n: usize,
        /// Generator coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        generator: String,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        #[arg(long)]
        json: bool,
    },
    /// Temperedness ratios, or a greedy tempered subsequence with --extract.
    Tempered {
        #[command(flatten)]
        folner: FolnerArgs,
        #[arg(long, default_value_t = 16)]
        upto: usize,
        /// Tempering constant C ("p/q" or integer) to extract a subsequence.
        #[arg(long)]
        extract: Option<String>,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        budget_factor: usize,
        #[arg(long)]
        json: bool,
    },
    /// Wasserstein distance between mu_{x,F_n} and mu_{y,F_m}.
    Wdist {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Pseudometric trace over a list of indices.
    Trace {
        #[command(flatten)]
        system: SystemArgs,
        /// Indices, comma separated and increasing.
        #[arg(long)]
        indices: String,
        #[arg(long, value_enum, default_value = "wasserstein")]
        kind: TraceArg,
        #[arg(long)]
        json: bool,
    },
}

fn point(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| CliError::ConfigInvalid(format!("{what}: cannot parse `{p}`")))
        })
        .collect()
}

fn default_kind(group: GroupId) -> &'static str {
    match group {
        GroupId::Z => "z_interval",
        GroupId::Zd(_) => "zd_box",
        GroupId::Heisenberg => "heisenberg_box",
    }
}

fn folner_spec(group: GroupId, kind: Option<&str>, direction: Option<&str>) -> Value {
    let mut params = json!({});
    if let Some(d) = direction {
        params["direction"] = json!(d);
    }
    json!({"group": group.to_string(), "kind": kind.unwrap_or(default_kind(group)), "params": params})
}

fn parse_group(s: &str) -> Result<GroupId, CliError> {
    s.parse()
        .map_err(|e: folner_core::Error| CliError::ConfigInvalid(format!("--group: {e}")))
}

fn system_config(args: &SystemArgs, indices: Vec<usize>, operation: Value) -> Result<Value, CliError> {
    let params: Value =
        serde_json::from_str(&args.params).map_err(|e| CliError::ConfigParse(format!("--params: {e}")))?;
    let sys = folner_core::dynamics::build_system(&args.system, &params)
        .map_err(|e| CliError::ConfigInvalid(format!("--system: {e}")))?;
    Ok(json!({
        "system": {"name": args.system, "params": params},
        "folner": folner_spec(sys.group(), args.folner_kind.as_deref(), args.direction.as_deref()),
        "indices": indices,
        "operation": operation,
        "output": {"stem": "stdout"},
        "tolerance": args.tol,
    }))
}

/// Runs an in-memory config and prints its table (or result JSON).
fn print_single(doc: Value, as_json: bool) -> Result<(), CliError> {
    let plan = Plan::validate(ExperimentConfig::parse(&doc.to_string())?)?;
    let out = execute(&plan)?;
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&out.result).expect("result serializes")
        );
    } else {
        print!("{}", String::from_utf8(out.table.to_csv()?).expect("csv is utf-8"));
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Catalog { json } => {
            if json {
                println!("{}", catalog_json());
            } else {
                print!("{}", catalog_text());
            }
        }
        Command::Run {
            config,
            out,
            seed,
            json,
        } => {
            let outcome = cmd_run(&config, &RunOptions { out, seed })?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.report).expect("report serializes")
                );
            } else {
                println!("wrote {}", outcome.files.csv.display());
                println!("wrote {}", outcome.files.json.display());
                println!("wrote {}", outcome.files.timings.display());
            }
        }
        Command::Verify { suite, json } => {
            let outcomes = run_suite(&suite, |o| {
                if json {
                    println!(
                        "{}",
                        json!({"id": o.id, "suite": o.suite, "passed": o.passed, "detail": o.detail})
                    );
                } else {
                    println!("{o}");
                }
            })?;
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed > 0 {
                return Err(CliError::SuiteFailed(format!(
                    "{suite} ({failed} of {} criteria)",
                    outcomes.len()
                )));
            }
        }
        Command::Defect {
            folner,
            n,
            generator,
            side,
            json,
        } => {
            let group = parse_group(&folner.group)?;
            let g: Vec<i64> = parse_list(&generator, "--generator")?;
            let side = match side {
                SideArg::Left => "left",
                SideArg::Right => "right",
                SideArg::Both => "both",
            };
            print_single(
                json!({
                    "folner": folner_spec(group, folner.kind.as_deref(), folner.direction.as_deref()),
                    "indices": [n],
                    "operation": {"name": "folner_defect", "params": {"generators": [g], "side": side}},
                    "output": {"stem": "stdout"},
                }),
                json,
            )?;
        }
        Command::Tempered {
            folner,
            upto,
            extract,
            count,
            budget_factor,
            json,
        } => {
            let group = parse_group(&folner.group)?;
            let operation = match extract {
                Some(c) => {
                    json!({"name": "extract_tempered", "params": {"constant": c, "count": count, "budget_factor": budget_factor}})
                }
                None => json!({"name": "temperedness", "params": {"upto": upto}}),
            };
            print_single(
                json!({
                    "folner": folner_spec(group, folner.kind.as_deref(), folner.direction.as_deref()),
                    "operation": operation,
                    "output": {"stem": "stdout"},
                }),
                json,
            )?;
        }
        Command::Wdist { system, n, m, json } => {
            let op = json!({"name": "wasserstein", "params": {"x": point(&system.x), "y": point(&system.y), "n": n, "m": m}});
            print_single(system_config(&system, vec![], op)?, json)?;
        }
        Command::Trace {
            system,
            indices,
            kind,
            json,
        } => {
            let name = match kind {
                TraceArg::Wasserstein => "w_trace",
                TraceArg::MeanDistance => "d_trace",
            };
            let op = json!({"name": name, "params": {"x": point(&system.x), "y": point(&system.y)}});
            let indices = parse_list(&indices, "--indices")?;
            print_single(system_config(&system, indices, op)?, json)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
