use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use sigrho::catalog::{self, Tier, BOUND_CASES};
use sigrho::numbers::parse_alpha_spec;
use sigrho::oracle::{self, Bounds, Graph, PathScript};
use sigrho::pathwidth::build_system;
use sigrho::polytope::certificate::parse_seeds;
use sigrho::polytope::{lower_bound, saturate, verify_certificate, BoundProblem, Certificate, Limits, Verdict};
use sigrho::sigma_rho::{GraphClass, Problem};
use sigrho::tree::{build_tree_system, TreeScript};
use sigrho::Error;

#[derive(Parser)]
#[command(name = "sigrho", version, about = "Counting and growth-bound certificates for (σ,ρ)-dominating sets")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// Catalog problem name, instead of --sigma/--rho/--mode.
    #[arg(long, conflicts_with_all = ["sigma", "rho", "mode"])]
    problem: Option<String>,
    /// σ, e.g. "{1}", "N", "N+", "{0,3+k}".
    #[arg(long)]
    sigma: Option<String>,
    /// ρ, same syntax as σ.
    #[arg(long)]
    rho: Option<String>,
    /// all, min, max, mim or mindom-pw2.
    #[arg(long)]
    mode: Option<String>,
    /// pw1, pw2, tree or forest.
    #[arg(long, default_value = "pw1")]
    class: String,
}

impl ProblemArgs {
    fn problem(&self) -> Result<Problem, Error> {
        if let Some(name) = &self.problem {
            return catalog::problem(name);
        }
        let (Some(s), Some(r)) = (&self.sigma, &self.rho) else {
            return Err(Error::Invalid("give --problem or both --sigma and --rho".into()));
        };
        Problem::parse(s, r, self.mode.as_deref().unwrap_or("all"))
    }

    fn class(&self) -> Result<GraphClass, Error> {
        self.class.parse()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Search for an invariant polytope at growth rate α and write a certificate.
    Bound {
        #[command(flatten)]
        p: ProblemArgs,
        /// α: "root(n, poly P in [lo,hi])", "nthroot(r, n)", "poly P in [lo,hi]" or a rational.
        #[arg(long)]
        alpha: String,
        /// Extra starting vectors, one per line, in reduced or raw coordinates.
        #[arg(long)]
        seed_file: Option<PathBuf>,
        #[arg(long, default_value_t = 5000)]
        max_x: usize,
        #[arg(long, default_value_t = 200)]
        max_rounds: usize,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Certificate path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Store a membership witness for every obligation.
        #[arg(long)]
        witnesses: bool,
    },
    /// Count solutions on a build script or an edge list.
    Count {
        #[command(flatten)]
        p: ProblemArgs,
        /// Path script (pw1, pw2) or tree script (tree, forest).
        #[arg(long, conflicts_with = "graph")]
        script: Option<PathBuf>,
        /// Edge list counted by exhaustive enumeration.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Also count the built graph by exhaustive enumeration and compare.
        #[arg(long)]
        check: bool,
    },
    /// Compare operator counts with exhaustive enumeration.
    Validate {
        #[command(flatten)]
        p: ProblemArgs,
        #[arg(long, default_value_t = 5)]
        max_steps: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        max_leaves: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Re-check a certificate from scratch.
    Verify {
        certificate: PathBuf,
    },
    /// Lower bound on the growth rate from products up to a given depth.
    Lower {
        #[command(flatten)]
        p: ProblemArgs,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Run the built-in bound cases and print a pass/fail table.
    Catalog {
        /// Only the fast cases.
        #[arg(long, conflicts_with = "long")]
        quick: bool,
        /// Include the multi-hour cases.
        #[arg(long)]
        long: bool,
        /// Only cases whose name contains this text.
        #[arg(long)]
        filter: Option<String>,
        /// Seconds per case.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Directory for the certificates produced.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Outcome {
    Ok,
    Refuted,
    Limit,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::StateSpace(..) | Error::GraphTooLarge(..) => 2,
        _ => 3,
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn limits(max_points: usize, max_rounds: usize, secs: Option<f64>) -> Result<Limits, Error> {
    let time_limit = match secs {
        Some(s) if !(s > 0.0 && s.is_finite()) => return Err(Error::Invalid(format!("bad time limit {s}"))),
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    Ok(Limits { max_points, max_rounds, time_limit })
}

fn bound(
    p: &ProblemArgs,
    alpha: &str,
    seed_file: &Option<PathBuf>,
    lim: Limits,
    out: &Option<PathBuf>,
    witnesses: bool,
) -> Result<Outcome, Error> {
    let bp = BoundProblem::new(&p.problem()?, p.class()?)?;
    let field = parse_alpha_spec(alpha)?;
    let seeds = match seed_file {
        Some(path) => parse_seeds(&field, &read(path)?)?.into_iter().map(|s| bp.project_seed(s)).collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    eprintln!("system: dim {} (raw {}), α ≈ {:.9}", bp.system.dim(), bp.raw_dim, field.approx());
    match saturate(&bp, &field.generator(), &seeds, lim)? {
        Ok((mut cert, stats)) => {
            if witnesses {
                cert.attach_witnesses()?;
            }
            write_or_print(out, &cert.to_text())?;
            eprintln!("closed: |X| = {}, {} rounds, {} images tested", cert.points.len(), stats.rounds, stats.images);
            eprintln!("result: bound {} · α^n", constant_text(&cert)?);
            Ok(Outcome::Ok)
        }
        Err(f) => {
            eprintln!("failure: {}", f.reason);
            eprintln!("rounds {}, peak |X| = {}, {} images tested", f.stats.rounds, f.stats.peak, f.stats.images);
            Ok(Outcome::Limit)
        }
    }
}

fn constant_text(cert: &Certificate) -> Result<String, Error> {
    match verify_certificate(cert)? {
        Verdict::Verified { constant, .. } if constant.is_one() => Ok("1".into()),
        Verdict::Verified { constant, .. } => Ok(format!("{constant} (≈ {:.6})", constant.to_f64())),
        Verdict::Refuted(why) => Err(Error::Invalid(format!("produced certificate does not verify: {why}"))),
    }
}

fn count(p: &ProblemArgs, script: &Option<PathBuf>, graph: &Option<PathBuf>, check: bool) -> Result<Outcome, Error> {
    let problem = p.problem()?;
    let (value, built) = match (script, graph) {
        (Some(path), _) => {
            let text = read(path)?;
            match p.class()? {
                class @ (GraphClass::Tree | GraphClass::Forest) => {
                    let s = TreeScript::parse(&text)?;
                    if class == GraphClass::Tree && s.uses_union() {
                        return Err(Error::Invalid("union in a tree script; use --class forest".into()));
                    }
                    let sys = build_tree_system(&problem, class)?;
                    (sys.evaluate_count(&s)?, oracle::build_tree_graph(&s))
                }
                GraphClass::Pathwidth(k) => {
                    let s = PathScript::parse(&text)?;
                    if s.k != k {
                        return Err(Error::Invalid(format!("script has pathwidth {}, class is pw{k}", s.k)));
                    }
                    problem.check_class(GraphClass::Pathwidth(k))?;
                    let sys = build_system(&problem, k)?;
                    let seq = s
                        .steps
                        .iter()
                        .map(|d| sys.matrix_index(d).ok_or_else(|| Error::Invalid(format!("no operator for step {d}"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    let c = sys
                        .completion_index(s.completion)
                        .ok_or_else(|| Error::Invalid(format!("bad completion mask {}", s.completion)))?;
                    (sys.evaluate_count(&seq, c), oracle::build_completed_graph(&s))
                }
            }
        }
        (None, Some(path)) => {
            let g = Graph::parse_edge_list(&read(path)?)?;
            (oracle::count_bruteforce(&g, &problem)?.into(), g)
        }
        (None, None) => return Err(Error::Invalid("give --script or --graph".into())),
    };
    println!("{value}");
    if check && script.is_some() {
        let brute = oracle::count_bruteforce(&built, &problem)?;
        if value != brute.into() {
            eprintln!("mismatch: exhaustive enumeration gives {brute}");
            return Ok(Outcome::Refuted);
        }
        eprintln!("exhaustive enumeration agrees ({} vertices)", built.order());
    }
    Ok(Outcome::Ok)
}

fn run_catalog(quick: bool, long: bool, filter: &Option<String>, secs: Option<f64>, out: &Option<PathBuf>) -> Result<Outcome, Error> {
    let lim = limits(5000, 200, secs)?;
    let wanted = |t: Tier| match t {
        Tier::Quick => true,
        Tier::Standard => !quick,
        Tier::Long => long,
    };
    let matches = |name: &str| filter.as_ref().is_none_or(|f| name.contains(f.as_str()));
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
    }
    let mut all_passed = true;
    let mut report = |o: catalog::CaseOutcome| -> Result<(), Error> {
        all_passed &= o.passed;
        println!("{} {:<70} {} [{:.1}s]", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail, o.elapsed.as_secs_f64());
        if let (Some(dir), Some(cert)) = (out, &o.certificate) {
            let file: String = o.name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
            fs::write(dir.join(format!("{file}.cert")), cert.to_text())?;
        }
        Ok(())
    };
    for case in BOUND_CASES.iter().filter(|c| wanted(c.tier) && matches(&c.name())) {
        report(catalog::run_case(case, lim)?)?;
    }
    if wanted(Tier::Standard) && matches("total-perfect-dominating tree") {
        report(catalog::run_tpd_tree()?)?;
    }
    Ok(if all_passed { Outcome::Ok } else { Outcome::Refuted })
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Bound { p, alpha, seed_file, max_x, max_rounds, time_limit, out, witnesses } => {
            bound(&p, &alpha, &seed_file, limits(max_x, max_rounds, time_limit)?, &out, witnesses)
        }
        Command::Count { p, script, graph, check } => count(&p, &script, &graph, check),
        Command::Validate { p, max_steps, samples, max_leaves, seed } => {
            let report = oracle::cross_validate(&p.problem()?, p.class()?, Bounds { max_steps, samples, max_leaves, seed })?;
            println!("{report}");
            Ok(if report.ok() { Outcome::Ok } else { Outcome::Refuted })
        }
        Command::Verify { certificate } => {
            let cert = Certificate::parse(&read(&certificate)?)?;
            match verify_certificate(&cert)? {
                Verdict::Verified { constant, obligations } => {
                    println!("verified: {obligations} obligations, |X| = {}", cert.points.len());
                    println!("bound: {} · α^n with α ≈ {:.9}", constant, cert.alpha.to_f64());
                    Ok(Outcome::Ok)
                }
                Verdict::Refuted(why) => {
                    println!("refuted: {why}");
                    Ok(Outcome::Refuted)
                }
            }
        }
        Command::Lower { p, depth } => {
            let bp = BoundProblem::new(&p.problem()?, p.class()?)?;
            let lb = lower_bound(&bp.system, depth);
            println!("{:.9}", lb.value);
            println!("witness: {}", lb.witness);
            Ok(Outcome::Ok)
        }
        Command::Catalog { quick, long, filter, time_limit, out } => run_catalog(quick, long, &filter, time_limit, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "warn,sigrho=info",
        _ => "warn,sigrho=debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).format_timestamp(None).init();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Refuted) => ExitCode::from(1),
        Ok(Outcome::Limit) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
