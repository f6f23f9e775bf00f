//! `dwmec`: command-line front end for the dynamic-weight enclosing circle.

mod input;
mod output;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dwmec::fpvd::DEFAULT_SEED;
use dwmec::{
    build_division_tree, build_fvb_with_seed, max_displacement, oracle_rigid_max, oracle_solve, CenterFunction, Error,
    FvbGraph, OracleConfig, Point, SiteSet,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use input::{read_batch, read_problem, ParseError, ProblemFile};

#[derive(Parser)]
#[command(name = "dwmec", version, about = "Minimum enclosing circle with a dynamic weight point")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Snap tolerance for duplicate sites, nodes and vertex coincidence (normalized units).
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct InputArg {
    /// Problem file: {"sites": [[x, y], ...], "p": [x, y], "C": c}; `-` reads stdin.
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Traversal,
    Descent,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum enclosing circle of the sites.
    Mec(InputArg),
    /// Farthest-point Voronoi boundary: nodes and edges.
    Fvd {
        #[command(flatten)]
        input: InputArg,
        /// Also write an SVG drawing here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Optimal center for the weight point `p`.
    Solve {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value = "traversal")]
        method: Method,
        /// Append a brute-force comparison.
        #[arg(long)]
        oracle: bool,
        /// JSON array of weight points solved against the same sites.
        #[arg(long)]
        batch: Option<PathBuf>,
    },
    /// Partition of the plane of weight points by optimal locus.
    Regions {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Largest displacement of `p` under rigid motions moving each site at most `C`.
    TreMax {
        #[command(flatten)]
        input: InputArg,
        /// Append a brute-force search over rotations and translations.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        batch: Option<PathBuf>,
    },
    /// Brute-force reference values; includes the rigid search when `C` is given.
    Oracle {
        #[command(flatten)]
        input: InputArg,
        /// Use the lighter sampling configuration.
        #[arg(long)]
        coarse: bool,
    },
}

/// A library failure tagged with the site set it concerns, so the error
/// payload can translate site indices.
#[derive(Debug)]
struct Failure {
    error: Error,
    sites: Option<SiteSet>,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for Failure {}

fn fail(error: Error, sites: Option<&SiteSet>) -> anyhow::Error {
    Failure { error, sites: sites.cloned() }.into()
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TooFewSites { .. } | Error::NonFiniteCoordinate { .. } => 2,
        Error::CollinearInput { .. } | Error::DegenerateInput(_) | Error::GeneralPositionViolation(_) => 3,
        Error::VertexCoincidence { .. } => 4,
        Error::BudgetOutOfRange { .. } => 5,
        Error::NotApplicable(_) | Error::DepthOutOfRange { .. } | Error::ZeroRotation => 1,
    }
}

struct Problem {
    file: ProblemFile,
    sites: SiteSet,
}

fn load(path: &Path, tolerance: Option<f64>) -> Result<Problem> {
    let file = read_problem(path)?;
    let sites = file.site_set(tolerance).map_err(|e| fail(e, None))?;
    Ok(Problem { file, sites })
}

fn graph(pb: &Problem) -> Result<FvbGraph> {
    build_fvb_with_seed(&pb.sites, pb.file.seed.unwrap_or(DEFAULT_SEED)).map_err(|e| fail(e, Some(&pb.sites)))
}

fn center_function(pb: &Problem) -> Result<(FvbGraph, CenterFunction)> {
    let g = graph(pb)?;
    let cf = CenterFunction::from_tree(build_division_tree(&g));
    Ok((g, cf))
}

fn write_svg(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Weight points to process: the batch file, or `p` from the problem file.
fn weight_points(pb: &Problem, batch: Option<&Path>) -> Result<Vec<Point>> {
    match batch {
        Some(b) => read_batch(b),
        None => Ok(vec![pb.file.weight_point()?]),
    }
}

/// Per-point results; a batch prints an array and keeps going past bad
/// points, reporting the first failure's exit code at the end.
fn emit(results: Vec<std::result::Result<Value, Error>>, batch: bool, sites: &SiteSet) -> Result<u8> {
    if !batch {
        let r = results.into_iter().next().expect("one weight point");
        return match r {
            Ok(v) => {
                println!("{}", output::to_string(v));
                Ok(0)
            }
            Err(e) => Err(fail(e, Some(sites))),
        };
    }
    let mut code = 0;
    let items: Vec<Value> = results
        .into_iter()
        .map(|r| match r {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                if code == 0 {
                    code = exit_code(&e);
                }
                output::error(&e, Some(sites))
            }
        })
        .collect();
    println!("{}", output::to_string(Value::Array(items)));
    Ok(code)
}

fn run(cli: Cli) -> Result<u8> {
    let tol = cli.tolerance;
    match cli.command {
        Command::Mec(i) => {
            let pb = load(&i.input, tol)?;
            println!("{}", output::to_string(output::mec(&pb.sites)));
            Ok(0)
        }
        Command::Fvd { input, svg } => {
            let pb = load(&input.input, tol)?;
            let g = graph(&pb)?;
            if let Some(path) = svg {
                let p = pb.file.p.map(|[x, y]| Point::new(x, y));
                write_svg(&path, &svg::render_fvd(&g, p))?;
            }
            println!("{}", output::to_string(output::fvd(&g)));
            Ok(0)
        }
        Command::Solve { input, method, oracle, batch } => {
            let pb = load(&input.input, tol)?;
            let (g, cf) = center_function(&pb)?;
            let points = weight_points(&pb, batch.as_deref())?;
            let cfg = OracleConfig::default();
            let results: Vec<_> = points
                .par_iter()
                .map(|&p| -> std::result::Result<Value, Error> {
                    let mut obj = match method {
                        Method::Traversal => output::solution(&cf.solve_by_traversal(p)?),
                        Method::Descent => {
                            let (s, stats) = cf.solve_by_descent_with_stats(p)?;
                            let mut obj = output::solution(&s);
                            obj.insert("levels".into(), json!(stats.levels));
                            obj.insert("depth".into(), json!(stats.depth));
                            obj
                        }
                    };
                    if batch.is_some() {
                        obj.insert("p".into(), output::point(p));
                    }
                    if oracle {
                        let o = dwmec::oracle::oracle_solve_on(&g, p, &cfg);
                        let mut block = output::oracle(&o);
                        let value = obj["value"].as_f64().expect("value is a number");
                        block["agrees"] = json!((o.best_value - value).abs() <= 1e-4);
                        obj.insert("oracle".into(), block);
                    }
                    Ok(Value::Object(obj))
                })
                .collect();
            emit(results, batch.is_some(), &pb.sites)
        }
        Command::Regions { input, svg } => {
            let pb = load(&input.input, tol)?;
            let (g, cf) = center_function(&pb)?;
            let div = cf.enumerate_regions();
            if let Some(path) = svg {
                let p = pb.file.p.map(|[x, y]| Point::new(x, y));
                write_svg(&path, &svg::render_regions(&g, &div, p))?;
            }
            println!("{}", output::to_string(output::regions(&div)));
            Ok(0)
        }
        Command::TreMax { input, oracle, batch } => {
            let pb = load(&input.input, tol)?;
            let c = pb.file.budget()?;
            let (_, cf) = center_function(&pb)?;
            let points = weight_points(&pb, batch.as_deref())?;
            let cfg = OracleConfig::default();
            let results: Vec<_> = points
                .par_iter()
                .map(|&p| -> std::result::Result<Value, Error> {
                    let d = dwmec::rigid::max_displacement_with(&cf, p, c)?;
                    let mut obj: Map<String, Value> = output::displacement(&d);
                    if batch.is_some() {
                        obj.insert("p".into(), output::point(p));
                    }
                    if oracle {
                        let o = oracle_rigid_max(&pb.sites, p, c, &cfg);
                        let mut block = output::rigid_oracle(&o);
                        block["relative_gap"] = json!((o.value - d.value).abs() / d.value);
                        obj.insert("oracle".into(), block);
                    }
                    Ok(Value::Object(obj))
                })
                .collect();
            emit(results, batch.is_some(), &pb.sites)
        }
        Command::Oracle { input, coarse } => {
            let pb = load(&input.input, tol)?;
            let p = pb.file.weight_point()?;
            let cfg = if coarse { OracleConfig::coarse() } else { OracleConfig::default() };
            let o = oracle_solve(&pb.sites, p, &cfg).map_err(|e| fail(e, Some(&pb.sites)))?;
            let mut v = output::oracle(&o);
            if let Some(c) = pb.file.c {
                // Reuse the library's budget check so both commands refuse the same inputs.
                max_displacement(&pb.sites, p, c).map_err(|e| fail(e, Some(&pb.sites)))?;
                v["rigid"] = output::rigid_oracle(&oracle_rigid_max(&pb.sites, p, c, &cfg));
            }
            println!("{}", output::to_string(v));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(f) = e.downcast_ref::<Failure>() {
                println!("{}", output::to_string(output::error(&f.error, f.sites.as_ref())));
                return ExitCode::from(exit_code(&f.error));
            }
            if e.chain().any(|c| c.is::<ParseError>()) {
                return ExitCode::from(2);
            }
            ExitCode::from(1)
        }
    }
}
