use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use polydecomp::catalogue::{catalogue_entry, catalogue_list, catalogue_verify};
use polydecomp::certificates::{analyze, replay, Method, Mode};
use polydecomp::format::{read_polytope, write_polytope};
use polydecomp::polytope::{
    construct_basic, count_rules, minkowski_sum, pentagon, prism_over, stack_pyramid, truncate_vertex, Kind,
};
use polydecomp::report::{render_json, render_text};
use polydecomp::{Error, Polytope};

/// Exact Minkowski decomposability analysis for convex polytopes.
#[derive(Parser)]
#[command(name = "polydecomp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a polytope and write it as a polytope file.
    Construct {
        #[command(subcommand)]
        kind: Construct,
        /// Output path; standard output when omitted.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Decide whether the polytope in a file is decomposable.
    Analyze {
        input: PathBuf,
        /// Skip the certificate engine.
        #[arg(long)]
        oracle_only: bool,
        #[arg(long)]
        json: bool,
        /// Print the certificate steps.
        #[arg(long)]
        trace: bool,
    },
    /// Conclusions that follow from vertex, edge and facet counts alone.
    Counts {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        v: Option<usize>,
        #[arg(long)]
        e: Option<usize>,
        #[arg(long)]
        f: Option<usize>,
    },
    /// The built-in collection of examples.
    Catalogue {
        #[command(subcommand)]
        action: Catalogue,
    },
}

#[derive(Subcommand)]
enum Construct {
    Simplex {
        #[arg(long)]
        d: usize,
    },
    /// Sum of an m-simplex and an n-simplex in complementary subspaces.
    Delta {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    Cube {
        #[arg(long)]
        d: usize,
    },
    /// n points on the moment curve in dimension d.
    Cyclic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Simplicial d-prism with one vertex cut off.
    Wedge {
        #[arg(long)]
        d: usize,
    },
    Octahedron,
    TriangularBipyramid,
    Pentagon,
    CappedPrism,
    Bd182,
    Bd198,
    /// Minkowski sum of two polytope files.
    Sum { a: PathBuf, b: PathBuf },
    /// Prism over a polytope file.
    Prism { input: PathBuf },
    /// Stack a pyramid onto a facet.
    Stack {
        input: PathBuf,
        #[arg(long)]
        facet: usize,
    },
    /// Cut off a vertex.
    Truncate {
        input: PathBuf,
        #[arg(long)]
        vertex: usize,
    },
}

#[derive(Subcommand)]
enum Catalogue {
    List,
    Verify {
        #[arg(long)]
        json: bool,
    },
    Export {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::GuardExceeded(_) => 3,
            Error::Inconsistent(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure { code: 2, message }
}

fn load(path: &Path) -> Result<Polytope, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    read_polytope(&text).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    })
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn construct(kind: Construct) -> Result<Polytope, Failure> {
    let basic = |k: Kind| construct_basic(&k).map_err(Failure::from);
    Ok(match kind {
        Construct::Simplex { d } => basic(Kind::Simplex(d))?,
        Construct::Delta { m, n } => basic(Kind::Delta(m, n))?,
        Construct::Cube { d } => basic(Kind::Cube(d))?,
        Construct::Cyclic { n, d } => basic(Kind::Cyclic { n, d })?,
        Construct::Wedge { d } => basic(Kind::Wedge(d))?,
        Construct::Octahedron => basic(Kind::Octahedron)?,
        Construct::TriangularBipyramid => basic(Kind::Bipyramid3)?,
        Construct::Pentagon => pentagon(),
        Construct::CappedPrism => basic(Kind::CappedPrism)?,
        Construct::Bd182 => basic(Kind::Bd182)?,
        Construct::Bd198 => basic(Kind::Bd198)?,
        Construct::Sum { a, b } => minkowski_sum(&load(&a)?, &load(&b)?)?,
        Construct::Prism { input } => prism_over(&load(&input)?)?,
        Construct::Stack { input, facet } => stack_pyramid(&load(&input)?, facet)?,
        Construct::Truncate { input, vertex } => truncate_vertex(&load(&input)?, vertex)?,
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct { kind, output } => {
            let p = construct(kind)?;
            emit(&write_polytope(&p), output.as_deref())
        }
        Command::Analyze {
            input,
            oracle_only,
            json,
            trace,
        } => {
            let p = load(&input)?;
            let mode = if oracle_only { Mode::OracleOnly } else { Mode::CertificatesFirst };
            let report = analyze(&p, mode)?;
            if let Some(t) = &report.trace {
                if report.method == Method::Certificate || report.method == Method::CountRule {
                    replay(t, &p).map_err(|e| Failure {
                        code: 4,
                        message: format!("emitted certificate does not replay: {e}"),
                    })?;
                }
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&render_json(&report)).expect("json"));
            } else {
                print!("{}", render_text(&report, trace));
            }
            Ok(())
        }
        Command::Counts { d, v, e, f } => {
            let rules = count_rules(d, v, e, f);
            if rules.is_empty() {
                println!("no count rule applies");
            }
            for c in rules {
                println!("{c}");
            }
            Ok(())
        }
        Command::Catalogue { action } => match action {
            Catalogue::List => {
                for e in catalogue_list() {
                    println!("{:<28} d={} {:<14} {} ({})", e.name, e.dim, e.expected_status.to_string(), e.recipe, e.origin);
                }
                Ok(())
            }
            Catalogue::Verify { json } => {
                let report = catalogue_verify();
                if json {
                    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
                } else {
                    for r in &report.results {
                        println!("{r}");
                    }
                    println!("{} entries, {} failed", report.results.len(), report.failures());
                }
                if report.all_passed() {
                    Ok(())
                } else {
                    Err(Failure {
                        code: 4,
                        message: format!("{} catalogue entries failed", report.failures()),
                    })
                }
            }
            Catalogue::Export { name, output } => {
                let entry = catalogue_entry(&name).ok_or_else(|| input_error(format!("no catalogue entry named {name:?}")))?;
                emit(&write_polytope(&entry.polytope()?), output.as_deref())
            }
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
