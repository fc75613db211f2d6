use clap::{Parser, Subcommand};
use proxim_cli::suites::{run_all, run_suite, SuiteOptions, SuiteReport};
use proxim_cli::{
    query_axioms, query_close, query_dim, query_germs, query_separated,
    query_verify_certificate, CliError, QueryOutcome, Workspace,
};
use proxim_core::germs::{GermMode, Limits};
use proxim_core::spaces::AxiomBudget;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact engine for proximity spaces: closeness oracles, axiom
/// verification with constructive witnesses, cluster-trace (germ)
/// enumeration over finite subalgebras, and proximity-dimension
/// certificates.
#[derive(Parser)]
#[command(name = "proxim", version, about)]
struct Cli {
    /// Workspace file with named spaces, sets, and coverings.
    #[arg(long, global = true)]
    file: Option<PathBuf>,

    /// Seed for randomized batteries; recorded in reports.
    #[arg(long, global = true, default_value_t = 2026)]
    seed: u64,

    /// Emit machine-readable JSON for suite runs (queries always emit JSON).
    #[arg(long, global = true)]
    json: bool,

    /// Atom bound for subalgebra construction.
    #[arg(long, global = true, default_value_t = 16)]
    max_atoms: usize,

    /// Generator bound for subalgebra construction.
    #[arg(long, global = true, default_value_t = 12)]
    max_generators: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two sets are close in a space.
    Close {
        /// Space name (workspace or built-in: discreteR, metricR,
        /// standardR, aleksandroffR, stonecechR, templateSingletons).
        space: String,
        /// First set (literal or workspace name).
        a: String,
        /// Second set.
        b: String,
    },
    /// Verify the proximity axioms, with validated axiom-5 witnesses.
    Axioms {
        space: String,
        /// Randomized triples for axioms (1)-(4).
        #[arg(long, default_value_t = 2000)]
        triples: usize,
        /// Non-close pairs to witness for axiom (5).
        #[arg(long, default_value_t = 400)]
        pairs: usize,
    },
    /// Enumerate atom germs of the subalgebra the generators span.
    Germs {
        space: String,
        /// Generator sets (literals or workspace names).
        #[arg(long, num_args = 1.., required = true)]
        generators: Vec<String>,
        /// all | maximal
        #[arg(long, default_value = "all")]
        mode: String,
    },
    /// Report separatedness with its rationale.
    Separated { space: String },
    /// Brute-force proximity dimension of a finite presentation.
    Dim {
        space: String,
        #[arg(long, default_value_t = 3)]
        cap: u32,
    },
    /// Re-check a dimension certificate file; nonzero exit on violations.
    VerifyCertificate { path: PathBuf },
    /// Run a theorem-instance suite, or `all`.
    Suite { id: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let ws = match &cli.file {
        Some(path) => Workspace::load(path)?,
        None => Workspace::empty(),
    };
    let limits = Limits { max_generators: cli.max_generators, max_atoms: cli.max_atoms };
    let outcome: QueryOutcome = match &cli.command {
        Command::Close { space, a, b } => query_close(&ws, space, a, b)?,
        Command::Axioms { space, triples, pairs } => query_axioms(
            &ws,
            space,
            &AxiomBudget { triples: *triples, axiom5_pairs: *pairs },
            cli.seed,
        )?,
        Command::Germs { space, generators, mode } => {
            let mode = match mode.as_str() {
                "all" => GermMode::All,
                "maximal" => GermMode::Maximal,
                other => {
                    return Err(CliError::Input(format!(
                        "unknown germ mode `{other}`; use all or maximal"
                    )))
                }
            };
            query_germs(&ws, space, generators, mode, &limits)?
        }
        Command::Separated { space } => query_separated(&ws, space)?,
        Command::Dim { space, cap } => query_dim(&ws, space, *cap)?,
        Command::VerifyCertificate { path } => query_verify_certificate(&ws, path, &limits)?,
        Command::Suite { id } => {
            let opts = SuiteOptions { seed: cli.seed };
            let reports: Vec<SuiteReport> = if id == "all" {
                run_all(&opts)
            } else if id == "selected" {
                let selection = ws.suite_selection();
                if selection.is_empty() {
                    return Err(CliError::Input(
                        "the workspace file selects no suites".into(),
                    ));
                }
                selection
                    .iter()
                    .map(|id| run_suite(id, &opts))
                    .collect::<Result<_, _>>()?
            } else {
                vec![run_suite(id, &opts)?]
            };
            let all_passed = reports.iter().all(|r| r.passed());
            if cli.json {
                println!("{}", serde_json::to_string(&reports).expect("reports serialize"));
            } else {
                for r in &reports {
                    let (mut pass, mut fail) = (0, 0);
                    for a in &r.assertions {
                        if a.pass {
                            pass += 1;
                        } else {
                            fail += 1;
                            println!(
                                "suite {}: FAIL {}{}",
                                r.suite,
                                a.name,
                                a.counterexample
                                    .as_deref()
                                    .map(|c| format!(" [{c}]"))
                                    .unwrap_or_default()
                            );
                        }
                    }
                    println!(
                        "suite {}: {} ({} passed, {} failed, seed {}, digest {})",
                        r.suite,
                        if fail == 0 { "PASS" } else { "FAIL" },
                        pass,
                        fail,
                        r.seed,
                        r.input_digest
                    );
                }
            }
            return Ok(all_passed);
        }
    };
    println!("{}", serde_json::to_string(&outcome.payload).expect("payload serializes"));
    Ok(outcome.ok)
}
