mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "sonc", version, about = "Circuits, subdivisions and boundary strata of sonc cones")]
#[command(group(ArgGroup::new("format").args(["json", "table", "csv"])))]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true)]
    pub table: bool,
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance for floating-point checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Table
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Circuits of a support set.
    Circuits {
        support: PathBuf,
        /// Only the edge generators of the Reznick cone.
        #[arg(long)]
        edges_only: bool,
    },
    /// Regular subdivision induced by a lifting.
    Subdivide {
        support: PathBuf,
        #[arg(long)]
        weights: PathBuf,
    },
    /// All regular subdivisions of a support with at most ten points.
    Census {
        support: PathBuf,
        /// Report the distinct sonc-complexes instead.
        #[arg(long)]
        sonc_complexes: bool,
    },
    /// Tropical complex dual to a regular subdivision.
    Tropical {
        support: PathBuf,
        #[arg(long)]
        weights: PathBuf,
    },
    /// Exact points of the discriminant chart of a regular subdivision.
    HkSample(HkArgs),
    /// Checks that an implicit equation vanishes on random chart points.
    VerifyDisc {
        /// Chart file `{"support": …, "weights": […]}`.
        chart: PathBuf,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Boundary point built from agiforms placed at tropical vertices.
    BoundarySample(BoundaryArgs),
    /// Boundary strata of univariate supports with d + 1 points.
    Strata {
        #[arg(long)]
        d: usize,
        /// Only strata meeting a_0 = a_d = 1.
        #[arg(long)]
        slice: bool,
        /// Include the closure order.
        #[arg(long)]
        poset: bool,
        /// Print the closure order as Graphviz DOT.
        #[arg(long)]
        dot: bool,
        /// Count the strata of codimension one.
        #[arg(long)]
        codim1: bool,
    },
    /// Whether 1 - 2w1 z + w1^2 z^2 + z^2 (w3^2 - 2w3 z + z^2) lies on the boundary.
    QuarticTest {
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w3: String,
    },
    /// Decides whether nonnegative and sonc sums coincide on a generic support.
    CheckEquality {
        support: PathBuf,
        /// List every sonc-complex.
        #[arg(long)]
        census: bool,
    },
    /// Evaluates an exponential sum at a positive point.
    Eval {
        sum: PathBuf,
        #[arg(long)]
        at: PathBuf,
    },
    /// Numerical minimum of an exponential sum over the positive orthant.
    Minimize {
        sum: PathBuf,
        #[arg(long, default_value_t = 41)]
        grid: usize,
    },
}

#[derive(Args, Debug)]
pub struct HkArgs {
    pub support: PathBuf,
    #[arg(long)]
    pub weights: PathBuf,
    /// Scales of the chart circuits; drawn from the seed when absent.
    #[arg(long)]
    pub t: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct BoundaryArgs {
    pub support: PathBuf,
    #[arg(long)]
    pub weights: PathBuf,
    #[arg(long)]
    pub t: Option<PathBuf>,
    /// Write a CSV grid over a two-coefficient slice through the sample.
    #[arg(long)]
    pub emit_grid: Option<PathBuf>,
    /// Coefficient indices spanning the slice, as `i,j`.
    #[arg(long, default_value = "0,1")]
    pub axes: String,
    #[arg(long, default_value_t = 1.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
    /// Implicit equation evaluated on the grid.
    #[arg(long)]
    pub poly: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            let text = report.render(cli.format());
            if let Err(e) = emit(&cli, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(commands::CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(commands::CliError::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
