//! Command-line surface for the tile self-assembly workbench.
//!
//! Exit codes: 0 success, 1 a check failed (witness emitted), 2 usage or
//! format errors.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use datam::compiler;
use datam::engine::{self, SchedulerPolicy};
use datam::format::{replay_trace, write_trace, SystemFile};
use datam::gallery;
use datam::geom::Pos;
use datam::render;
use datam::repr::{ReprMode, RepresentationFunction};
use datam::simcheck::{check_simulation, CheckInput};
use datam::window::{self, Window};
use datam::TileSystem;

#[derive(Parser)]
#[command(name = "datam", version, about = "aTAM / dupled-aTAM workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate a system under a scheduling policy.
    Run(RunArgs),
    /// Compile a compact zig-zag temperature-2 system to a temperature-1
    /// duple system with a block representation function.
    Compile(CompileArgs),
    /// Check bounded simulation equivalence between two systems.
    Verify(VerifyArgs),
    /// Emit one of the built-in constructions.
    Gallery(GalleryArgs),
    /// Analyze a recorded trace: zig-zag verdicts, window movies, pumping,
    /// row duplings.
    Analyze(AnalyzeArgs),
    /// Enumerate producible assemblies (bounded).
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Random,
    Fifo,
    Lex,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderArg {
    Svg,
    Ascii,
}

#[derive(Args)]
struct RunArgs {
    /// System file (JSON); "-" reads stdin.
    #[arg(long)]
    system: String,
    #[arg(long, value_enum, default_value = "lex")]
    policy: PolicyArg,
    /// Seed for the random policy.
    #[arg(long, default_value_t = 0)]
    seed_rng: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: usize,
    /// Write a replayable trace here.
    #[arg(long)]
    out_trace: Option<PathBuf>,
    /// Render the final assembly.
    #[arg(long, value_enum)]
    render: Option<RenderArg>,
    /// Write the render here instead of stdout.
    #[arg(long)]
    out_render: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    system: String,
    /// Compiled system file destination.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Representation function sidecar destination.
    #[arg(long)]
    repr_out: Option<PathBuf>,
    /// Zig-zag verification step bound.
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Simulator system file.
    #[arg(long)]
    sim: String,
    /// Simulated (specification) system file.
    #[arg(long)]
    spec: String,
    /// Representation function sidecar (defaults to identity at scale 1).
    #[arg(long)]
    repr: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "block")]
    mode: ModeArg,
    /// Bounds as "max_cells,max_states" for the simulator side.
    #[arg(long, default_value = "100000,100000")]
    bounds: String,
    /// Bounds for the spec side.
    #[arg(long, default_value = "10000,100000")]
    spec_bounds: String,
    /// Write the report JSON here as a witness file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Block,
    Plus,
}

#[derive(Args)]
struct GalleryArgs {
    /// Construction id: counter, staircase, square, square-zigzag, planter,
    /// shape-w, s8, flagpole.
    #[arg(long)]
    construction: String,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long, default_value_t = 0)]
    from: u64,
    #[arg(long)]
    to: Option<u64>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pads: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// System the trace was recorded against.
    #[arg(long)]
    system: String,
    /// Trace file to analyze.
    #[arg(long)]
    trace: PathBuf,
    #[command(subcommand)]
    check: AnalyzeCheck,
}

#[derive(Subcommand)]
enum AnalyzeCheck {
    /// Zig-zag and compact zig-zag verdicts for the traced system.
    Zigzag {
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: usize,
    },
    /// Extract the window movie of a closed rectangular window
    /// "x,y,width,height".
    Movies {
        #[arg(long)]
        window: String,
        /// Only the bond-forming submovie (experimental).
        #[arg(long)]
        bond_forming: bool,
    },
    /// Pump a single-tile-wide path: "x1,y1;x2,y2;..." in path order.
    Pump {
        #[arg(long)]
        path: String,
        #[arg(long, default_value_t = 3)]
        periods: usize,
    },
    /// Row dupling signature of a row.
    Duplings {
        #[arg(long)]
        row: i32,
    },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    system: String,
    #[arg(long, default_value_t = 10_000)]
    max_cells: usize,
    #[arg(long, default_value_t = 100_000)]
    max_states: usize,
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| e.to_string())?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn load_system(path: &str) -> Result<Arc<TileSystem>, String> {
    let text = read_input(path)?;
    SystemFile::from_json(&text)
        .and_then(|doc| doc.to_system())
        .map_err(|e| e.to_string())
}

fn parse_bounds(text: &str) -> Result<engine::Bounds, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("bounds must be \"cells,states\", got {text:?}"));
    }
    Ok(engine::Bounds {
        max_cells: parts[0].trim().parse().map_err(|e| format!("{e}"))?,
        max_states: parts[1].trim().parse().map_err(|e| format!("{e}"))?,
    })
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Run(a) => {
            let sys = load_system(&a.system)?;
            let policy = match a.policy {
                PolicyArg::Random => SchedulerPolicy::Random(a.seed_rng),
                PolicyArg::Fifo => SchedulerPolicy::FairFifo,
                PolicyArg::Lex => SchedulerPolicy::LexMin,
            };
            let seq = engine::run(&sys, policy, a.max_steps);
            eprintln!(
                "placed {} tiles in {} steps; terminal: {}",
                seq.result().len(),
                seq.len(),
                seq.reached_terminal
            );
            if let Some(path) = &a.out_trace {
                std::fs::write(path, write_trace(&seq))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            if let Some(kind) = a.render {
                let content = match kind {
                    RenderArg::Svg => render::render_svg(&sys, seq.result()),
                    RenderArg::Ascii => render::render_ascii(&sys, seq.result()),
                };
                write_out(&a.out_render, &content)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Compile(a) => {
            let sys = load_system(&a.system)?;
            match compiler::compile(&sys, a.max_steps) {
                Ok(out) => {
                    let doc = SystemFile::from_system(&out.dtas);
                    write_out(&a.out, &doc.to_json())?;
                    let repr_json =
                        serde_json::to_string_pretty(&out.repr).map_err(|e| e.to_string())?;
                    if let Some(p) = &a.repr_out {
                        std::fs::write(p, repr_json)
                            .map_err(|e| format!("{}: {e}", p.display()))?;
                    }
                    eprintln!(
                        "scale {} | singletons {} duples {} | source tiles {} north glues {}",
                        out.scale,
                        out.stats.singleton_count,
                        out.stats.duple_count,
                        out.stats.source_tiles,
                        out.stats.north_glues
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Cmd::Verify(a) => {
            let sim = load_system(&a.sim)?;
            let spec = load_system(&a.spec)?;
            let mut repr = match &a.repr {
                Some(p) => {
                    let text = std::fs::read_to_string(p)
                        .map_err(|e| format!("{}: {e}", p.display()))?;
                    serde_json::from_str::<RepresentationFunction>(&text)
                        .map_err(|e| e.to_string())?
                }
                None => RepresentationFunction::identity(&spec),
            };
            repr.mode = match a.mode {
                ModeArg::Block => ReprMode::Block,
                ModeArg::Plus => ReprMode::Plus,
            };
            let report = check_simulation(&CheckInput {
                sim: &sim,
                spec: &spec,
                repr: &repr,
                bounds_sim: parse_bounds(&a.bounds)?,
                bounds_spec: parse_bounds(&a.spec_bounds)?,
            })
            .map_err(|e| e.to_string())?;
            let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            match &a.out {
                Some(p) => {
                    std::fs::write(p, &json).map_err(|e| format!("{}: {e}", p.display()))?
                }
                None => println!("{json}"),
            }
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("verification failed; see report");
                Ok(ExitCode::from(1))
            }
        }
        Cmd::Gallery(a) => {
            let sys = build_gallery(&a)?;
            let doc = SystemFile::from_system(&sys);
            write_out(&a.out, &doc.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Analyze(a) => analyze(a),
        Cmd::Enumerate(a) => {
            let sys = load_system(&a.system)?;
            let set = engine::enumerate_producibles(&sys, a.max_cells, a.max_states);
            println!(
                "{}",
                serde_json::json!({
                    "states": set.assemblies.len(),
                    "terminals": set.terminal_indices.len(),
                    "truncated_cells": set.truncated_cells,
                    "truncated_states": set.truncated_states,
                })
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_gallery(a: &GalleryArgs) -> Result<Arc<TileSystem>, String> {
    let need = |o: Option<u32>, flag: &str| o.ok_or_else(|| format!("--{flag} required"));
    let sys = match a.construction.as_str() {
        "counter" => {
            let bits = need(a.bits, "bits")?;
            let to = a.to.unwrap_or((1u64 << bits) - 1);
            gallery::make_zigzag_counter(bits, a.from, to, gallery::Orientation::North)
        }
        "staircase" => gallery::make_gn_staircase(a.levels.unwrap_or(1), a.pads),
        "square" => gallery::make_square_system(need(a.n, "n")?),
        "square-zigzag" => {
            let n = need(a.n, "n")?;
            gallery::make_counter_exact_height(n, n, gallery::Orientation::North)
        }
        "planter" => gallery::make_planter_system(need(a.k, "k")?),
        "shape-w" => gallery::make_shape_w_system(need(a.k, "k")?),
        "s8" => gallery::make_s8_system(need(a.k, "k")?),
        "flagpole" => gallery::make_finger_flagpole(),
        other => return Err(format!("unknown construction {other:?}")),
    };
    sys.map_err(|e| e.to_string())
}

fn analyze(a: AnalyzeArgs) -> Result<ExitCode, String> {
    let sys = load_system(&a.system)?;
    let text =
        std::fs::read_to_string(&a.trace).map_err(|e| format!("{}: {e}", a.trace.display()))?;
    let seq = replay_trace(&sys, &text).map_err(|e| e.to_string())?;
    match a.check {
        AnalyzeCheck::Zigzag { max_steps } => {
            let rep =
                datam::zigzag::is_compact_zigzag(&sys, max_steps).map_err(|e| e.to_string())?;
            let verdict = match &rep.verdict {
                engine::Verdict::Yes => "yes".to_string(),
                engine::Verdict::No(w) => format!("no: {w:?}"),
                engine::Verdict::Unknown => "unknown".to_string(),
            };
            println!(
                "compact zig-zag: {verdict} (checked {} steps)",
                rep.steps_used
            );
            Ok(if rep.verdict.is_yes() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        AnalyzeCheck::Movies {
            window,
            bond_forming,
        } => {
            let nums: Vec<i32> = window
                .split(',')
                .map(|s| s.trim().parse().map_err(|e| format!("{e}")))
                .collect::<Result<_, String>>()?;
            if nums.len() != 4 {
                return Err("window must be \"x,y,width,height\"".into());
            }
            let w = Window::closed_rect(Pos::new(nums[0], nums[1]), nums[2], nums[3]);
            let mut movie = window::extract_movie(&seq, &w);
            if bond_forming {
                movie = movie.bond_forming();
            }
            for e in &movie.entries {
                println!(
                    "step {} pos ({},{}) glue {}:{} toward {:?}{}",
                    e.step,
                    e.pos.x,
                    e.pos.y,
                    e.glue.label,
                    e.glue.strength,
                    e.orient,
                    if e.bonded { " (bonded)" } else { "" }
                );
            }
            eprintln!("{} crossings", movie.len());
            Ok(ExitCode::SUCCESS)
        }
        AnalyzeCheck::Pump { path, periods } => {
            let cells: Vec<Pos> = path
                .split(';')
                .map(|pair| {
                    let xy: Vec<i32> = pair
                        .split(',')
                        .map(|v| v.trim().parse().map_err(|e| format!("{e}")))
                        .collect::<Result<_, String>>()?;
                    if xy.len() != 2 {
                        return Err("path cells are \"x,y\" pairs".to_string());
                    }
                    Ok(Pos::new(xy[0], xy[1]))
                })
                .collect::<Result<_, String>>()?;
            let out =
                window::pump_path(&seq, &cells, None, periods).map_err(|e| e.to_string())?;
            match &out.repeat {
                None => {
                    println!("no repetition on the path (shorter than the type count)");
                    Ok(ExitCode::from(1))
                }
                Some((tile, offset)) => {
                    println!(
                        "repeated type {tile} at offset ({},{}); {} extra periods valid; \
                         result has {} cells",
                        offset.0,
                        offset.1,
                        out.periods,
                        out.sequence.result().len()
                    );
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        AnalyzeCheck::Duplings { row } => {
            for e in window::row_dupling_signature(&seq, row) {
                println!(
                    "offset ({},{}) footprint {}x{} types {:?}",
                    e.offset.0, e.offset.1, e.width, e.height, e.types
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
