use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use fsdraw_core::aux_graph::{AuxGraph, Mode};
use fsdraw_core::fixtures;
use fsdraw_core::layout::LengthPolicy;
use fsdraw_core::model::{parse_drawing, DrawingDocument};
use fsdraw_core::pipeline::{compare, optimize, OptimizeOptions, PipelineError};
use fsdraw_core::render::{render_svg, ResultDocument, SvgOptions};
use fsdraw_core::solver::{SolverConfig, SolverKind};
use fsdraw_core::verify::check_drawing;
use fsdraw_core::{Drawing, FaceSymmetricDrawing, IngestConfig};

const EXIT_INPUT: u8 = 1;
const EXIT_VERIFY: u8 = 3;
const EXIT_USAGE: u8 = 64;
const PLANARITY_WARN_EDGES: usize = 3000;

#[derive(Parser)]
#[command(name = "fsdraw", version, about = "Maximize the angular resolution of face-symmetric planar drawings")]
struct Cli {
    /// Report angles in degrees in log lines (JSON stays in radians).
    #[arg(long, global = true)]
    degrees: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize a drawing and write the result document.
    Optimize(OptimizeArgs),
    /// Verify a drawing and write the check report.
    Check(IoArgs),
    /// Render a drawing (or an optimize result) as SVG.
    Render(RenderArgs),
    /// Generate a fixture drawing.
    Gen(GenArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Input document, or "-" for stdin.
    input: String,
    /// Output path (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 64)]
    max_iter: usize,
    #[arg(long, default_value = "bisect")]
    solver: SolverKind,
    /// Drop the boundary winding constraints (output may be nonplanar).
    #[arg(long = "unsafe")]
    unsafe_mode: bool,
    /// unit, preserve, or file:<path> with a JSON map of zone id to length.
    #[arg(long, default_value = "unit")]
    lengths: String,
    /// Print the constraint graph to stderr.
    #[arg(long)]
    dump_aux: bool,
    /// Also write the output drawing as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Solve in both modes and report both optima.
    #[arg(long)]
    compare: bool,
    #[arg(long)]
    color_zones: bool,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long)]
    color_zones: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    /// Shear angle in radians applied to the fixture.
    #[arg(long, global = true, allow_negative_numbers = true)]
    skew: Option<f64>,
    /// Seed for random per-zone length jitter.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Regular 2k-gon.
    Polygon {
        #[arg(long)]
        k: usize,
    },
    /// m × n unit grid.
    Grid {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// k rhombi around one vertex.
    Fan {
        #[arg(long)]
        k: usize,
    },
    /// Star tree with k rays.
    Star {
        #[arg(long)]
        k: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::new(e.exit_code() as u8, e)
    }
}

type Outcome = Result<u8, Failure>;

fn read_input(input: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let read = if input == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(input).map(|t| text = t)
    };
    read.map_err(|e| Failure::new(EXIT_INPUT, format!("cannot read {input}: {e}")))?;
    Ok(text)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let result = match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    result.map_err(|e| Failure::new(EXIT_INPUT, format!("cannot write output: {e}")))
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn angle(x: f64, degrees: bool) -> String {
    if degrees {
        format!("{:.6}°", x.to_degrees())
    } else {
        format!("{x:.9}")
    }
}

fn parse_lengths(arg: &str) -> Result<LengthPolicy, Failure> {
    match arg {
        "unit" => Ok(LengthPolicy::Unit),
        "preserve" => Ok(LengthPolicy::Preserve),
        _ => {
            let Some(path) = arg.strip_prefix("file:") else {
                return Err(Failure::new(
                    EXIT_USAGE,
                    format!("--lengths must be unit, preserve or file:<path>, got {arg:?}"),
                ));
            };
            let text = read_input(path)?;
            let map: BTreeMap<usize, f64> = serde_json::from_str(&text)
                .map_err(|e| Failure::new(EXIT_INPUT, format!("length file {path}: {e}")))?;
            Ok(LengthPolicy::Explicit(map))
        }
    }
}

fn ingest(text: &str) -> Result<FaceSymmetricDrawing, Failure> {
    let fsd = FaceSymmetricDrawing::from_json(text, &IngestConfig::default())
        .map_err(|e| Failure::new(EXIT_INPUT, format!("invalid input: {e}")))?;
    if fsd.drawing.edges.len() > PLANARITY_WARN_EDGES {
        warn!(
            "{} edges: the pairwise planarity check will be slow",
            fsd.drawing.edges.len()
        );
    }
    Ok(fsd)
}

fn cmd_optimize(args: OptimizeArgs, degrees: bool) -> Outcome {
    if !(args.tol > 0.0) {
        return Err(Failure::new(EXIT_USAGE, "--tol must be positive"));
    }
    let opts = OptimizeOptions {
        mode: if args.unsafe_mode { Mode::Unsafe } else { Mode::Safe },
        solver: args.solver,
        solver_cfg: SolverConfig {
            tol: args.tol,
            max_iter: args.max_iter,
        },
        lengths: parse_lengths(&args.lengths)?,
        ingest: IngestConfig::default(),
    };
    let fsd = ingest(&read_input(&args.io.input)?)?;
    if args.dump_aux {
        eprint!("{}", AuxGraph::from_drawing(&fsd, opts.mode).dump());
    }
    let (run, comparison) = if args.compare {
        let both = compare(&fsd, &opts)?;
        info!(
            "lambda* safe {} / unsafe {}",
            angle(both.safe.lambda_star(), degrees),
            angle(both.unsafe_.lambda_star(), degrees)
        );
        (both.get(opts.mode).clone(), Some(both))
    } else {
        (optimize(&fsd, &opts)?, None)
    };
    info!(
        "resolution {} -> {} (lambda* {})",
        angle(run.resolution_in, degrees),
        run.report.resolution.map_or("n/a".into(), |r| angle(r, degrees)),
        angle(run.lambda_star(), degrees)
    );
    let doc = ResultDocument::new(&run, &fsd.zones, comparison.as_ref());
    write_output(args.io.output.as_deref(), &with_newline(doc.to_json_pretty()))?;
    if let Some(path) = &args.svg {
        let svg = render_svg(
            &run.output,
            SvgOptions {
                color_zones: args.color_zones,
            },
        );
        fs::write(path, svg).map_err(|e| Failure::new(EXIT_INPUT, format!("cannot write svg: {e}")))?;
    }
    let code = run.exit_code() as u8;
    match code {
        0 => {}
        2 => eprintln!("certificate failed: {:?}", run.certificate.worst_edge),
        _ => {
            for (name, check) in run.report.checks() {
                if !check.passed() {
                    eprintln!("check {name} failed: {}", check.detail.as_deref().unwrap_or(""));
                }
            }
        }
    }
    Ok(code)
}

fn cmd_check(args: IoArgs, degrees: bool) -> Outcome {
    let fsd = ingest(&read_input(&args.input)?)?;
    let report = check_drawing(&fsd.drawing, &fsd.embedding, None, Mode::Safe, IngestConfig::default().eps_geom);
    if let Some(r) = report.resolution {
        info!("resolution {}", angle(r, degrees));
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_output(args.output.as_deref(), &with_newline(json))?;
    Ok(if report.passed(Mode::Safe) { 0 } else { EXIT_VERIFY })
}

/// A drawing document, or the `drawing` member of an optimize result.
fn parse_any_drawing(text: &str) -> Result<Drawing, Failure> {
    let direct = parse_drawing(text);
    if direct.is_ok() {
        return direct.map_err(|e| Failure::new(EXIT_INPUT, e));
    }
    let nested = serde_json::from_str::<serde_json::Value>(text)
        .ok()
        .and_then(|mut v| v.get_mut("drawing").map(serde_json::Value::take));
    match nested {
        Some(inner) => parse_drawing(&inner.to_string()).map_err(|e| Failure::new(EXIT_INPUT, e)),
        None => direct.map_err(|e| Failure::new(EXIT_INPUT, format!("invalid input: {e}"))),
    }
}

fn cmd_render(args: RenderArgs) -> Outcome {
    let drawing = parse_any_drawing(&read_input(&args.io.input)?)?;
    let svg = render_svg(
        &drawing,
        SvgOptions {
            color_zones: args.color_zones,
        },
    );
    write_output(args.io.output.as_deref(), &svg)?;
    Ok(0)
}

fn cmd_gen(args: GenArgs) -> Outcome {
    let usage = |e: fixtures::FixtureError| Failure::new(EXIT_USAGE, e);
    let mut drawing = match args.kind {
        GenKind::Polygon { k } => fixtures::gen_polygon(k),
        GenKind::Grid { m, n } => fixtures::gen_grid(m, n),
        GenKind::Fan { k } => fixtures::gen_fan(k),
        GenKind::Star { k } => fixtures::gen_star(k),
    }
    .map_err(usage)?;
    if let Some(seed) = args.seed {
        drawing = fixtures::jitter_lengths(&drawing, seed).map_err(usage)?;
    }
    if let Some(theta) = args.skew {
        drawing = fixtures::skew(&drawing, theta).map_err(usage)?;
    }
    let doc = DrawingDocument::from_drawing(&drawing, None);
    write_output(args.output.as_deref(), &with_newline(doc.to_json_pretty()))?;
    Ok(0)
}

fn init_logging() {
    let level = std::env::var("FSDRAW_LOG").unwrap_or_default();
    let filter = match level.as_str() {
        "debug" => log::LevelFilter::Debug,
        "info" => log::LevelFilter::Info,
        "quiet" => log::LevelFilter::Off,
        _ => log::LevelFilter::Warn,
    };
    env_logger::Builder::new()
        .filter_level(filter)
        .format_timestamp(None)
        .init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Optimize(args) => cmd_optimize(args, cli.degrees),
        Command::Check(args) => cmd_check(args, cli.degrees),
        Command::Render(args) => cmd_render(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("fsdraw: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
