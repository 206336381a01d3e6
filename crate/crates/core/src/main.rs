use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use toric_lpr::applicability::check_applicable;
use toric_lpr::atf_base::build_pi0;
use toric_lpr::catalog::catalog;
use toric_lpr::io;
use toric_lpr::mcg_homology::{find_lemma_classes, omega_eval};
use toric_lpr::orbit::{classify_level, equidistribution_stats, orbit_arcs, DEFAULT_ITERATES};
use toric_lpr::recurrence_map::{LevelCurve, RecurrenceMap};
use toric_lpr::render::{render_svg, RenderStyle};
use toric_lpr::suite::{run_suite, SuiteOptions};
use toric_lpr::{build_blowup_polygon, ConstructionParams, Error, QField};

#[derive(Parser)]
#[command(name = "toric-lpr", version, about = "Exact base-diagram computations for a non-recurrent toric symplectomorphism")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, default_value = "4")]
    a: QField,
    #[arg(long, default_value = "2")]
    b: QField,
    #[arg(long, default_value = "1/2")]
    c: QField,
    #[arg(long, default_value = "1/4")]
    eps: QField,
}

impl ParamArgs {
    fn params(&self) -> Result<ConstructionParams, Error> {
        ConstructionParams::new(self.a.clone(), self.b.clone(), self.c.clone(), self.eps.clone())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Write the diagram pi_0 as JSON.
    Build {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also rebuild and check the four-round map before writing.
        #[arg(long)]
        check: bool,
    },
    /// Run the property suite and print one line per property.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Fewer samples and iterates.
        #[arg(long)]
        quick: bool,
    },
    /// Classify the orbit on level h.
    Orbit {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        h: QField,
        #[arg(long, default_value_t = DEFAULT_ITERATES)]
        n: u64,
        /// Write the orbit rows to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: DumpFormat,
        /// Also print an arc histogram with this many bins.
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Decide applicability for a polygon file or a catalog entry.
    Classify {
        polygon: Option<PathBuf>,
        #[arg(long, conflicts_with = "polygon")]
        catalog: Option<String>,
    },
    /// List the homology classes with square -2 and vanishing c_1.
    Mcg {
        #[arg(long, default_value_t = 50)]
        bound: i64,
        #[arg(long, default_value = "4")]
        a: QField,
        #[arg(long, default_value = "2")]
        b: QField,
        #[arg(long, default_value = "1/2")]
        c: QField,
    },
    /// Render a diagram as SVG.
    Render {
        #[command(flatten)]
        params: ParamArgs,
        /// Diagram JSON to draw instead of pi_0 for the given parameters.
        #[arg(long)]
        diagram: Option<PathBuf>,
        #[arg(long = "level")]
        levels: Vec<QField>,
        #[arg(long, default_value = "100")]
        scale: QField,
        #[arg(long)]
        eigenlines: bool,
        #[arg(long)]
        no_cuts: bool,
        #[arg(long)]
        no_nodes: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Build { params, output, check } => {
            let p = params.params()?;
            let d = build_pi0(&p)?;
            if check {
                RecurrenceMap::for_params(&p)?;
            }
            emit(&(io::diagram_to_json(&d) + "\n"), output.as_ref())?;
            Ok(true)
        }
        Command::Verify { seed, quick } => {
            let mut o = SuiteOptions { seed, ..SuiteOptions::default() };
            if quick {
                o = SuiteOptions { param_sets: 2, points: 50, irrational_iterates: 1000, seed };
            }
            let results = run_suite(&o);
            for r in &results {
                println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            Ok(results.iter().all(|r| r.passed))
        }
        Command::Orbit { params, h, n, dump, format, bins } => {
            let p = params.params()?;
            let report = classify_level(&p, &h, n)?;
            print!("{}", json(&report));
            if let Some(path) = dump {
                let arcs = orbit_arcs(&p, &h, n)?;
                let text = match format {
                    DumpFormat::Csv => io::orbit_csv(&arcs),
                    DumpFormat::Json => {
                        let curve = LevelCurve::new(build_blowup_polygon(&p)?.as_polygon(), &h)?;
                        io::orbit_json(&io::orbit_rows(&curve, &arcs)) + "\n"
                    }
                };
                fs::write(path, text)?;
            }
            if let Some(bins) = bins {
                print!("{}", io::histogram_json(&equidistribution_stats(&p, &h, n, bins)?) + "\n");
            }
            Ok(true)
        }
        Command::Classify { polygon, catalog: name } => {
            let poly = match (polygon, name) {
                (Some(path), None) => io::read_polygon(&path)?,
                (None, Some(name)) => catalog(&name)?,
                _ => return Err(Error::InvalidParams("give a polygon file or --catalog NAME".into())),
            };
            print!("{}", json(&check_applicable(&poly)));
            Ok(true)
        }
        Command::Mcg { bound, a, b, c } => {
            for x in find_lemma_classes(bound)? {
                println!("({}, {}, {})  area {}", x.alpha, x.beta, x.gamma, omega_eval(x, &a, &b, &c));
            }
            Ok(true)
        }
        Command::Render { params, diagram, levels, scale, eigenlines, no_cuts, no_nodes, output } => {
            if !scale.is_positive() {
                return Err(Error::InvalidParams("scale must be positive".into()));
            }
            let d = match diagram {
                Some(path) => io::read_diagram(&path)?,
                None => build_pi0(&params.params()?)?,
            };
            let style = RenderStyle {
                scale,
                show_levels: levels,
                show_cuts: !no_cuts,
                show_nodes: !no_nodes,
                show_eigenlines: eigenlines,
                ..RenderStyle::default()
            };
            emit(&render_svg(&d, &style), output.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Verification { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
