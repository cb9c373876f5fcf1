//! `halfflat`: command-line checks for SU(3)-, SU(2)- and G₂-structures on
//! nilpotent Lie algebras.
//!
//! Exit status: 0 when every check passes, 1 when one fails, 2 on usage or
//! input errors.

mod commands;
mod report;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Inputs;
use report::Report;

const DEFAULT_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "halfflat", version, about = "Exterior calculus checks for half-flat and hypo structures")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Tolerance for floating-point checks (exact inputs are checked exactly).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Structure equations: Jacobi check and centre.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Validate an SU(3)- or SU(2)-structure given as JSON.
    Structure {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Intrinsic torsion of an SU(3)-structure.
    Torsion {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        structure: PathBuf,
    },
    /// Reduce an SU(3)-structure along a central vector.
    Reduce {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        structure: PathBuf,
        /// Comma-separated rational components, e.g. `0,0,0,1,0,0`.
        #[arg(long)]
        vector: String,
        /// Rescale the vector to unit length.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift an SU(2)-structure to the circle bundle with `dη = φ`.
    Lift {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        structure: PathBuf,
        /// Overrides the file's `phi`, e.g. `-2*23`.
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The quotient equations for a lift to be symplectic half-flat.
    CheckGcy {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        structure: PathBuf,
    },
    /// The example with `t = (1−x)⁻¹` on `R⁵`.
    Thm53 {
        #[arg(long, value_delimiter = ',', default_value = "0,1/4,1/2")]
        x: Vec<String>,
    },
    /// Half-flat evolution.
    Flow {
        #[command(subcommand)]
        op: FlowOp,
    },
    /// Curvature of the explicit G₂ metric.
    Curvature {
        #[arg(long, default_value = "1.0,1.2")]
        samples: String,
    },
    /// Ambrose–Singer span of the explicit G₂ metric.
    Holonomy {
        #[arg(long, default_value = "1.0,1.2")]
        samples: String,
    },
    /// Least-squares search for structures.
    Search(SearchArgs),
}

#[derive(Subcommand, Debug)]
enum AlgebraOp {
    Check { notation: String },
    Center { notation: String },
}

#[derive(Subcommand, Debug)]
enum FlowOp {
    /// Integrate from a given SU(3)-structure.
    Run {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = halfflat::flow::DEFAULT_STEP)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the explicit family from `u = 1` and compare.
    Explicit {
        #[arg(long, default_value_t = 0.8)]
        u_end: f64,
        #[arg(long, default_value_t = halfflat::flow::DEFAULT_STEP)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct SearchArgs {
    #[command(subcommand)]
    catalog: Option<SearchOp>,
    #[arg(long)]
    algebra: Option<String>,
    /// `shf` or `hypo_with_eq4` (default by dimension).
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, default_value_t = halfflat::search::DEFAULT_RESTARTS)]
    restarts: usize,
}

#[derive(Subcommand, Debug)]
enum SearchOp {
    /// Search every algebra of a catalog file.
    Catalog {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = halfflat::search::DEFAULT_RESTARTS)]
        restarts: usize,
    },
}

fn run(cli: &Cli, r: &mut Report, inputs: &mut Inputs) -> anyhow::Result<()> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let threshold = cli.tol.unwrap_or(halfflat::search::DEFAULT_THRESHOLD);
    match &cli.cmd {
        Cmd::Algebra { op: AlgebraOp::Check { notation } } => commands::algebra_check(r, notation),
        Cmd::Algebra { op: AlgebraOp::Center { notation } } => commands::algebra_center(r, notation),
        Cmd::Structure { structure, algebra } => commands::structure(r, inputs, structure, algebra.as_deref(), tol),
        Cmd::Torsion { algebra, structure } => commands::torsion(r, inputs, algebra, structure, tol),
        Cmd::Reduce {
            algebra,
            structure,
            vector,
            normalize,
            out,
        } => commands::reduce_cmd(r, inputs, algebra, structure, vector, *normalize, out.as_ref(), tol),
        Cmd::Lift {
            algebra,
            structure,
            phi,
            t,
            out,
        } => commands::lift_cmd(r, inputs, algebra, structure, phi.as_deref(), t.as_deref(), out.as_ref(), tol),
        Cmd::CheckGcy { algebra, structure } => commands::check_gcy(r, inputs, algebra, structure, tol),
        Cmd::Thm53 { x } => commands::thm53(r, x, tol),
        Cmd::Flow {
            op:
                FlowOp::Run {
                    algebra,
                    structure,
                    t0,
                    t_end,
                    step,
                    out,
                },
        } => commands::flow_run(r, inputs, algebra, structure, *t0, *t_end, *step, out.as_ref()),
        Cmd::Flow {
            op: FlowOp::Explicit { u_end, step, out },
        } => commands::flow_explicit(r, *u_end, *step, out.as_ref()),
        Cmd::Curvature { samples } => commands::curvature_cmd(r, samples, cli.tol.unwrap_or(1e-8)),
        Cmd::Holonomy { samples } => commands::holonomy_cmd(r, samples),
        Cmd::Search(a) => match &a.catalog {
            Some(SearchOp::Catalog { file, restarts }) => {
                commands::search_catalog(r, inputs, file, *restarts, cli.seed, threshold)
            }
            None => {
                let alg = a
                    .algebra
                    .as_deref()
                    .ok_or_else(|| anyhow::anyhow!("search needs --algebra or the catalog subcommand"))?;
                commands::search_one(r, alg, a.kind.as_deref(), a.restarts, cli.seed, threshold)
            }
        },
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut report = Report::new(argv[1..].to_vec());
    let mut inputs = Inputs::default();
    if let Err(e) = run(&cli, &mut report, &mut inputs) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    report.seal(&inputs.0);
    let text = if cli.json {
        serde_json::to_string_pretty(&report).expect("report serializes")
    } else {
        report.render_text()
    };
    // a closed pipe (`| head`) is not an error
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
