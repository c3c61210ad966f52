use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use preschwarz::functions::{
    auto_n_terms, catalog, check_membership_s, check_membership_v, extremal_s,
    extremal_s_rotated, sample_v_member,
};
use preschwarz::norm::{
    bound_report, bound_theorem1, estimate_norm, finiteness_experiment, sharpness_report,
};
use preschwarz::{AnalyticModel, Error, GridSpec, ModelDoc, StripParams};

/// Numerical reports on the hyperbolic sup-norm of pre-Schwarzian
/// derivatives over the unit disc.
#[derive(Parser)]
#[command(name = "preschwarz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form norm bound plus the superseded complex-valued bounds
    Bound(BoundArgs),
    /// Grid estimate of the hyperbolic sup-norm of a function
    Norm(NormArgs),
    /// Compare the bound against the norms of the extremal functions
    Sharpness(SharpnessArgs),
    /// Grid-based class membership check
    Membership(MembershipArgs),
    /// Boundedness experiment: circle maxima at radii approaching 1
    Finiteness(FinitenessArgs),
    /// Parameter sweep over (alpha, beta), CSV output
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Lower strip edge, 0 <= alpha < 1
    #[arg(long)]
    alpha: f64,
    /// Upper strip edge, beta > 1
    #[arg(long)]
    beta: f64,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Radius levels K; radii are 1 - 2^-k
    #[arg(long, default_value_t = 10)]
    radius_levels: usize,
    /// Angles per circle
    #[arg(long, default_value_t = 128)]
    angles: usize,
    /// Local refinement rounds
    #[arg(long, default_value_t = 3)]
    refine_rounds: usize,
    /// Refinement extent shrink factor in (0, 1)
    #[arg(long, default_value_t = 0.5)]
    refine_shrink: f64,
}

impl GridArgs {
    fn build(&self) -> Result<GridSpec, Error> {
        GridSpec::new(
            self.radius_levels,
            self.angles,
            self.refine_rounds,
            self.refine_shrink,
        )
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct NormArgs {
    /// Catalog name (identity, koebe, cayley, exp), a constructed model
    /// (extremal, extremal-rotated, v-sample), or a coefficient JSON file
    #[arg(long)]
    function: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Series length for constructed models; chosen automatically when omitted
    #[arg(long)]
    n_terms: Option<usize>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SharpnessArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct MembershipArgs {
    /// Class to test against: s (starlike strip) or v
    #[arg(long, value_enum)]
    class: MembershipClass,
    #[arg(long)]
    function: String,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    n_terms: Option<usize>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MembershipClass {
    S,
    V,
}

#[derive(Args)]
struct FinitenessArgs {
    /// Function to probe; defaults to the constructed V-class member
    #[arg(long, default_value = "v-sample")]
    function: String,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    n_terms: Option<usize>,
    /// Radius levels 1 - 2^-k, k = 1..=levels
    #[arg(long, default_value_t = 12)]
    levels: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated alpha values
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<f64>,
    /// Comma-separated beta values
    #[arg(long, value_delimiter = ',')]
    betas: Vec<f64>,
    #[arg(long)]
    n_terms: Option<usize>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

const EXIT_PARAMS: u8 = 2;
const EXIT_UNKNOWN_FUNCTION: u8 = 3;
const EXIT_EVALUATION: u8 = 4;

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Params { .. } | Error::Grid(_) => EXIT_PARAMS,
        Error::UnknownFunction(_) => EXIT_UNKNOWN_FUNCTION,
        _ => EXIT_EVALUATION,
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn emit(out: &OutputArgs, payload: &str) -> std::io::Result<()> {
    match &out.output {
        Some(path) => fs::write(path, payload),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(payload.as_bytes())
        }
    }
}

/// Resolve a `--function` argument to a model, constructing series where needed.
fn resolve_model(
    name: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
    n_terms: Option<usize>,
    target_radius: f64,
) -> Result<AnalyticModel, Error> {
    match name {
        "identity" | "koebe" | "cayley" | "exp" => catalog(name),
        "extremal" | "extremal-rotated" | "v-sample" => {
            let (alpha, beta) = match (alpha, beta) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::Params {
                        alpha: alpha.unwrap_or(f64::NAN),
                        beta: beta.unwrap_or(f64::NAN),
                    })
                }
            };
            let p = StripParams::new(alpha, beta)?;
            let n = n_terms.unwrap_or_else(|| auto_n_terms(&p, target_radius));
            match name {
                "extremal" => Ok(extremal_s(&p, n)),
                "extremal-rotated" => Ok(extremal_s_rotated(&p, n)),
                _ => sample_v_member(&p, n),
            }
        }
        path if std::path::Path::new(path).is_file() => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Construction(format!("cannot read {path}: {e}")))?;
            let doc: ModelDoc = serde_json::from_str(&text)
                .map_err(|e| Error::Construction(format!("bad coefficient file {path}: {e}")))?;
            AnalyticModel::from_doc(&doc)
        }
        other => Err(Error::UnknownFunction(other.to_string())),
    }
}

fn trace_csv(levels: &[(f64, f64)]) -> String {
    let mut s = String::from("radius,max_hyperbolic_quantity\n");
    for &(r, v) in levels {
        s.push_str(&fmt17(r));
        s.push(',');
        s.push_str(&fmt17(v));
        s.push('\n');
    }
    s
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Bound(args) => {
            let p = StripParams::new(args.params.alpha, args.params.beta)?;
            let report = bound_report(&p);
            let payload = match args.out.format {
                Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
                Format::Csv => {
                    let mut s = String::from(
                        "alpha,beta,phi,theorem1,theorem_a_re,theorem_a_im,theorem_b_re,theorem_b_im\n",
                    );
                    s.push_str(
                        &[
                            report.alpha,
                            report.beta,
                            report.phi,
                            report.theorem1,
                            report.theorem_a.0,
                            report.theorem_a.1,
                            report.theorem_b.0,
                            report.theorem_b.1,
                        ]
                        .map(fmt17)
                        .join(","),
                    );
                    s.push('\n');
                    s
                }
            };
            emit(&args.out, &payload).map_err(|e| Error::Construction(e.to_string()))
        }
        Command::Norm(args) => {
            let grid = args.grid.build()?;
            let model = resolve_model(
                &args.function,
                args.alpha,
                args.beta,
                args.n_terms,
                grid.max_radius(),
            )?;
            let est = estimate_norm(&model, &grid)?;
            let payload = match args.out.format {
                Format::Json => serde_json::to_string_pretty(&est).unwrap() + "\n",
                Format::Csv => trace_csv(&est.per_level_max),
            };
            emit(&args.out, &payload).map_err(|e| Error::Construction(e.to_string()))
        }
        Command::Sharpness(args) => {
            let p = StripParams::new(args.params.alpha, args.params.beta)?;
            let grid = args.grid.build()?;
            let report = sharpness_report(&p, &grid)?;
            let payload = serde_json::to_string_pretty(&report).unwrap() + "\n";
            emit(&args.out, &payload).map_err(|e| Error::Construction(e.to_string()))
        }
        Command::Membership(args) => {
            let p = StripParams::new(args.params.alpha, args.params.beta)?;
            let grid = args.grid.build()?;
            let model = resolve_model(
                &args.function,
                Some(args.params.alpha),
                Some(args.params.beta),
                args.n_terms,
                grid.max_radius(),
            )?;
            let report = match args.class {
                MembershipClass::S => check_membership_s(&model, &p, &grid)?,
                MembershipClass::V => check_membership_v(&model, &p, &grid)?,
            };
            let payload = serde_json::to_string_pretty(&report).unwrap() + "\n";
            emit(&args.out, &payload).map_err(|e| Error::Construction(e.to_string()))
        }
        Command::Finiteness(args) => {
            let p = StripParams::new(args.params.alpha, args.params.beta)?;
            let target = 1.0 - 0.5f64.powi(args.levels as i32);
            let model = resolve_model(
                &args.function,
                Some(args.params.alpha),
                Some(args.params.beta),
                args.n_terms,
                target,
            )?;
            // membership gate: the experiment presumes a V-class member
            let gate = GridSpec::new(7, 128, 0, 0.5)?;
            let member = check_membership_v(&model, &p, &gate)?;
            if !member.verdict {
                return Err(Error::Construction(format!(
                    "{} is not in V({},{}) (worst margin {})",
                    args.function,
                    p.alpha(),
                    p.beta(),
                    member.worst_margin
                )));
            }
            let report = finiteness_experiment(&p, &model, args.levels)?;
            let payload = match args.out.format {
                Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
                Format::Csv => trace_csv(&report.levels),
            };
            emit(&args.out, &payload).map_err(|e| Error::Construction(e.to_string()))
        }
        Command::Sweep(args) => {
            let grid = args.grid.build()?;
            let mut s = String::from("alpha,beta,phi,theorem1,norm_extremal,ratio\n");
            // alpha-major row order
            for &alpha in &args.alphas {
                for &beta in &args.betas {
                    let p = StripParams::new(alpha, beta)?;
                    let n = args
                        .n_terms
                        .unwrap_or_else(|| auto_n_terms(&p, grid.max_radius()));
                    let model = extremal_s(&p, n);
                    let bound = bound_theorem1(&p);
                    let norm = estimate_norm(&model, &grid)?.value;
                    s.push_str(
                        &[alpha, beta, p.phi(), bound, norm, norm / bound]
                            .map(fmt17)
                            .join(","),
                    );
                    s.push('\n');
                }
            }
            emit(&args.out, &s).map_err(|e| Error::Construction(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("PRESCHWARZ_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("PRESCHWARZ_THREADS must be a positive integer, got `{threads}`");
                return ExitCode::from(EXIT_PARAMS);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
