//! Command-line driver for the plat-to-open-book pipeline.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;

use platbook::braid::{comb, BraidWord};
use platbook::kirby::render_events;
use platbook::legendrian::{negative_expansion, realize_pair, d3, FourManifoldData};
use platbook::pipeline::{run_pipeline, PipelineConfig, PipelineRun};
use platbook::plat::{purify, PlatPresentation};
use platbook::{Error, Result};

#[derive(Parser)]
#[command(name = "platbook", version, about = "Planar open books from braided plats")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Turn a plat into a pure braided plat; print it and the move log
    Purify(InputArgs),
    /// Decompose a pure braid word into standard pure generators
    Comb {
        /// Braid word as whitespace-separated signed generator indices
        word: String,
        #[arg(long)]
        strands: usize,
    },
    /// Run the unknotting compiler; print the framed diagram and event log
    Compile(PipelineArgs),
    /// Run the pipeline and print only the certificate report
    Verify(PipelineArgs),
    /// Run the pipeline and print the open book
    Openbook(PipelineArgs),
    /// Legendrian calculations
    Legendrian {
        #[command(subcommand)]
        cmd: LegendrianCmd,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Braid word whose plat closure is taken
    #[arg(long, conflicts_with = "plat", allow_hyphen_values = true)]
    closure: Option<String>,
    /// Strand count for --closure (default: inferred from the word)
    #[arg(long)]
    strands: Option<usize>,
    /// File containing a plat presentation
    #[arg(long)]
    plat: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Emit only negative twist curves (all positive monodromy downstream)
    #[arg(long)]
    positive_monodromy: bool,
    /// File of ±1 framings, one split ambient surgery unknot each
    #[arg(long)]
    ambient: Option<PathBuf>,
    /// Directory for the artifact files; stdout gets the report either way
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (only "text" is defined)
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Subcommand)]
enum LegendrianCmd {
    /// Plan stabilization moves from one (tb, rot) pair to another
    Realize {
        /// Starting pair, e.g. "0,1"
        #[arg(long)]
        from: String,
        /// Target pair, e.g. "0,3"
        #[arg(long)]
        to: String,
    },
    /// Expand a negative surgery coefficient into entries <= -2
    Expand {
        /// Rational coefficient, e.g. "-3/2"
        #[arg(allow_hyphen_values = true)]
        r: String,
    },
    /// The d3 invariant from bounding 4-manifold data
    D3 {
        #[arg(long, allow_hyphen_values = true)]
        sigma: i64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long, allow_hyphen_values = true)]
        csq: i64,
        #[arg(long, default_value_t = 0)]
        q: i64,
    },
}

fn load_plat(input: &InputArgs) -> Result<PlatPresentation> {
    match (&input.closure, &input.plat) {
        (Some(word), None) => {
            let b = BraidWord::parse(word, input.strands)?;
            Ok(PipelineConfig::from_closure(&b)?.plat)
        }
        (None, Some(path)) => PlatPresentation::parse(&fs::read_to_string(path)?),
        _ => Err(Error::Parse("give exactly one of --closure or --plat".into())),
    }
}

fn load_ambient(path: &Option<PathBuf>) -> Result<Vec<i64>> {
    let Some(path) = path else { return Ok(Vec::new()) };
    let text = fs::read_to_string(path)?;
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad ambient framing {t:?}"))))
        .collect()
}

fn run(args: &PipelineArgs) -> Result<PipelineRun> {
    if args.format != "text" {
        return Err(Error::Parse(format!("unknown format {:?}", args.format)));
    }
    let cfg = PipelineConfig {
        plat: load_plat(&args.input)?,
        positive_monodromy: args.positive_monodromy,
        ambient: load_ambient(&args.ambient)?,
    };
    let run = run_pipeline(&cfg)?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("openbook.txt"), run.book.render())?;
        fs::write(dir.join("events.txt"), render_events(&run.unknotting.events))?;
        fs::write(dir.join("diagram.txt"), run.unknotting.diagram.render())?;
        fs::write(dir.join("moves.txt"), run.moves.render())?;
        fs::write(dir.join("generators.txt"), run.generators.render())?;
        fs::write(dir.join("report.txt"), run.report())?;
    }
    Ok(run)
}

fn parse_pair(s: &str) -> Result<(i64, i64)> {
    let mut it = s.split(',').map(str::trim);
    let bad = || Error::Parse(format!("expected \"tb,rot\", got {s:?}"));
    let t = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let r = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((t, r))
}

fn rational_string(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Purify(input) => {
            let plat = load_plat(&input)?;
            let (pure, log) = purify(&plat)?;
            print!("{}", pure.render());
            print!("{}", log.render());
            Ok(true)
        }
        Cmd::Comb { word, strands } => {
            let b = BraidWord::parse(&word, Some(strands))?;
            let w = comb(&b)?;
            print!("{}", w.render());
            Ok(true)
        }
        Cmd::Compile(args) => {
            let run = run(&args)?;
            print!("{}", run.unknotting.diagram.render());
            print!("{}", render_events(&run.unknotting.events));
            print!("{}", run.report());
            Ok(run.all_pass())
        }
        Cmd::Verify(args) => {
            let run = run(&args)?;
            print!("{}", run.report());
            Ok(run.all_pass())
        }
        Cmd::Openbook(args) => {
            let run = run(&args)?;
            print!("{}", run.book.render());
            print!("{}", run.report());
            Ok(run.all_pass())
        }
        Cmd::Legendrian { cmd } => {
            match cmd {
                LegendrianCmd::Realize { from, to } => {
                    let plan = realize_pair(parse_pair(&from)?, parse_pair(&to)?)?;
                    print!("{}", plan.render());
                }
                LegendrianCmd::Expand { r } => {
                    let r = Rational64::from_str(&r)
                        .map_err(|e| Error::Parse(format!("bad coefficient {r:?}: {e}")))?;
                    let e = negative_expansion(r)?;
                    let entries: Vec<String> = e.entries.iter().map(|x| x.to_string()).collect();
                    let counts: Vec<String> =
                        e.stabilization_counts.iter().map(|x| x.to_string()).collect();
                    println!("[{}]; stabilizations [{}]", entries.join(", "), counts.join(", "));
                }
                LegendrianCmd::D3 { sigma, chi, csq, q } => {
                    let f = FourManifoldData {
                        sigma,
                        chi,
                        c_squared: csq,
                        plus_one_surgeries: q,
                    };
                    println!("{}", rational_string(d3(&f)));
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
