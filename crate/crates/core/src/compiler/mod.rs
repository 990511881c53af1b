//! Compilation of compact zig-zag temperature-2 systems into temperature-1
//! duple systems that simulate them at macrotile scale.
//!
//! East/west glue information travels through the glues of single-tile-wide
//! paths; north glue information becomes rail geometry (palindromic bit
//! codes built as pillars), read back by a singleton/duple probe pair whose
//! placement the rails decide by blocking: the singleton fits the one-cell
//! gap of a 0 bit, the duple fits the two-cell gap of a 1 bit, and exactly
//! one of them can ever attach.

pub mod classify;
pub mod emit;
pub mod layout;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::compiler::classify::{classify, Genre};
use crate::compiler::emit::{launch_label, Emitter};
use crate::compiler::layout::{east_probe_sites, east_rail_cells, Layout, ProbeSites};
use crate::error::{Error, Result};
use crate::geom::{Direction, Pos};
use crate::palindrome::CodeTable;
use crate::repr::{ReprMode, RepresentationFunction};
use crate::tile::{Glue, TileSystem};
use crate::zigzag::is_compact_zigzag;

/// Fixed scale constants: m = SCALE_PER_HALF_BIT · b + SCALE_OFFSET, where
/// b = ⌈log₂(|G_N|+1)⌉.
pub const SCALE_PER_HALF_BIT: u32 = 16;
pub const SCALE_OFFSET: u32 = 8;

#[derive(Clone, Debug)]
pub struct CompilationStats {
    /// Singleton count plus duple count of the compiled system.
    pub tile_complexity: usize,
    pub singleton_count: usize,
    pub duple_count: usize,
    /// Source tile-type count.
    pub source_tiles: usize,
    /// Source north-glue count (null excluded).
    pub north_glues: usize,
    /// Half code length b.
    pub half_bits: usize,
}

pub struct CompilationOutput {
    pub dtas: Arc<TileSystem>,
    pub repr: RepresentationFunction,
    pub scale: u32,
    pub stats: CompilationStats,
}

/// Compile a compact zig-zag τ=2 system, verifying the precondition within
/// `max_steps`.
pub fn compile(src: &Arc<TileSystem>, max_steps: usize) -> Result<CompilationOutput> {
    compile_opts(src, max_steps, false)
}

/// `solid` additionally fills every macrotile block completely once its
/// program finishes, so the compiled terminal domain is exactly the c-scaled
/// source shape. This costs O(scale²) extra tile types per source type.
pub fn compile_opts(
    src: &Arc<TileSystem>,
    max_steps: usize,
    solid: bool,
) -> Result<CompilationOutput> {
    if src.temperature != 2 {
        return Err(Error::UnsupportedTemperature(src.temperature));
    }
    let report = is_compact_zigzag(src, max_steps)?;
    let seq = match report.verdict {
        crate::engine::Verdict::Yes => report.sequence.expect("yes verdict carries the trace"),
        crate::engine::Verdict::No(v) => {
            return Err(Error::Precondition(format!(
                "source is not compact zig-zag: {v:?}"
            )))
        }
        crate::engine::Verdict::Unknown => {
            return Err(Error::Precondition(
                "zig-zag check exhausted its step bound".into(),
            ))
        }
    };

    let mut cls = classify(src, &seq)?;
    let codes = CodeTable::assign(&src.north_glues());

    // Service column of each genre's post-center climb, for filling in the
    // B-genre entry columns.
    let layout = Layout::new(codes.code_len());
    let service_col = |genre: Genre| -> i32 {
        match genre {
            Genre::CoopEast | Genre::Seed | Genre::DirectNorth => layout.g2(),
            Genre::CoopWest => layout.g1(),
            Genre::DirectEast => layout.a_center_east(),
            Genre::DirectWest => layout.a_center_west(),
        }
    };
    let mut entry_cols: BTreeMap<crate::tile::TileId, Vec<i32>> = BTreeMap::new();
    for info in cls.infos.values() {
        if let Some(launch) = &info.launch {
            if launch.side == Direction::North {
                if info.genre == Genre::DirectNorth {
                    return Err(Error::Precondition(format!(
                        "tile {} stacks two vertical steps; not compact",
                        src.tile(info.tile).name
                    )));
                }
                let dirc = classify::dir_code(Direction::North);
                if let Some(&succ) = cls.direct_lookup.get(&(dirc, launch.glue.clone())) {
                    let col = service_col(info.genre);
                    let e = entry_cols.entry(succ).or_default();
                    if !e.contains(&col) {
                        e.push(col);
                    }
                }
            }
        }
    }
    for (tile, cols) in entry_cols {
        cls.infos.get_mut(&tile).unwrap().north_entry_cols = cols;
    }

    let mut emitter = Emitter::new(src, &cls, &codes);
    emitter.solid = solid;
    if solid {
        emitter.emit_field_fillers()?;
    }
    if solid {
        for info in cls.infos.values() {
            if info.genre == classify::Genre::DirectNorth && info.north_entry_cols.len() > 1 {
                return Err(Error::Precondition(format!(
                    "solid mode needs a single entry column per vertical-step                      type; {} has {}",
                    src.tile(info.tile).name,
                    info.north_entry_cols.len()
                )));
            }
        }
    }
    // Bodies first (centers and launch tips), then readers (entries bind the
    // launch labels; lookup labels bind the centers).
    let mut seed_bodies: BTreeMap<crate::tile::TileId, Vec<(Pos, String)>> = BTreeMap::new();
    let infos: Vec<_> = cls.infos.values().cloned().collect();
    for info in &infos {
        let cells = emitter.emit_body(info.tile, info)?;
        if info.genre == Genre::Seed {
            seed_bodies.insert(info.tile, cells);
        }
    }
    let reader_keys: Vec<(u8, Glue)> = cls.coop_lookup.keys().cloned().collect();
    for (dirc, gw) in reader_keys {
        let dir = if dirc == classify::dir_code(Direction::East) {
            Direction::East
        } else {
            Direction::West
        };
        emitter.emit_reader(dir, &gw)?;
    }

    // Static seed: instantiate each seed cell's macro at its block.
    let m = emitter.layout.m;
    let mut seed_cells: Vec<(Pos, String)> = Vec::new();
    for (pos, tile) in src.seed() {
        let body = seed_bodies.get(tile).ok_or_else(|| {
            Error::Precondition(format!(
                "seed tile {} missing from classification",
                src.tile(*tile).name
            ))
        })?;
        let origin = Pos::new(pos.x * m, pos.y * m);
        for (rel, name) in body {
            seed_cells.push((origin + (rel.x, rel.y), name.clone()));
        }
    }

    let scale = m as u32;
    let dtas = emitter.finish(seed_cells)?;

    let markers = src
        .tiles()
        .map(|(_, t)| (format!("c:{}", t.name), t.name.clone()))
        .collect();
    let repr = RepresentationFunction {
        scale,
        mode: ReprMode::Block,
        markers,
    };
    let stats = CompilationStats {
        tile_complexity: dtas.singleton_count() + dtas.duple_count(),
        singleton_count: dtas.singleton_count(),
        duple_count: dtas.duple_count(),
        source_tiles: src.tile_count(),
        north_glues: src.north_glues().len(),
        half_bits: codes.half_bits,
    };
    debug_assert_eq!(
        scale,
        SCALE_PER_HALF_BIT * codes.half_bits as u32 + SCALE_OFFSET
    );
    Ok(CompilationOutput {
        dtas,
        repr,
        scale,
        stats,
    })
}

/// The geometry fragment one bit contributes to a rail cell, with the two
/// probe sites: an approaching reader can place its duple probe iff the bit
/// is 1 and its singleton probe iff the bit is 0.
pub struct BitGadget {
    /// Occupied rail cells, relative to the cell's anchor column.
    pub cells: Vec<(i32, i32)>,
    pub probes: ProbeSites,
}

pub fn emit_bit_gadget(bit: bool) -> BitGadget {
    let l = Layout::new(2);
    let cell = l.east_cell(0);
    let rebase = |(x, y): (i32, i32)| (x - cell.a, y);
    let sites = east_probe_sites(cell);
    BitGadget {
        cells: east_rail_cells(cell, bit).into_iter().map(rebase).collect(),
        probes: ProbeSites {
            singleton: rebase(sites.singleton),
            duple: [rebase(sites.duple[0]), rebase(sites.duple[1])],
        },
    }
}

/// Canonical launch label, re-exported for tests and tooling.
pub fn launch_glue_label(d: Direction, glue: &Glue) -> String {
    launch_label(d, glue)
}

/// Replay a compiled run and, at every placed reader anchor, verify that
/// exactly one of the two probes (singleton xor duple) is attachable.
/// Returns the number of bit reads checked.
pub fn check_probe_exclusivity(
    sys: &Arc<TileSystem>,
    seq: &crate::engine::AssemblySequence,
) -> Result<usize> {
    use crate::assembly::Placement;
    use crate::frontier::validate_placement;
    let mut checks = 0usize;
    let mut err: Option<Error> = None;
    seq.transitions().for_each(|i, _before, p, after| {
        if err.is_some() {
            return;
        }
        let Placement::Duple { duple, a_pos } = p else {
            return;
        };
        let dt = sys.duple(*duple);
        let lo_name = sys.tile(dt.a).name.clone();
        if !lo_name.starts_with("rA:") {
            return;
        }
        // rA:{dirc}:{gw}:{bits}:{variant}:lo
        let parts: Vec<&str> = lo_name.split(':').collect();
        if parts.len() != 6 || parts[5] != "lo" {
            return;
        }
        let (dirc, gw, bits) = (parts[1], parts[2], parts[3]);
        let s_name = format!("rS:{dirc}:{gw}:{bits}");
        let d_name = format!("rD:{dirc}:{gw}:{bits}:a");
        let east = dirc == "0";
        let dx = if east { 1 } else { -1 };
        let s_pos = *a_pos + (dx, 0);
        let d_a_pos = if east {
            *a_pos + (1, 1)
        } else {
            *a_pos + (-2, 1)
        };
        let s_ok = sys.tile_by_name(&s_name).is_some_and(|t| {
            validate_placement(sys, after, &Placement::Singleton { pos: s_pos, tile: t }).is_ok()
        });
        let d_ok = sys
            .duples()
            .find(|(_, dt)| sys.tile(dt.a).name == d_name)
            .is_some_and(|(id, _)| {
                validate_placement(sys, after, &Placement::Duple { duple: id, a_pos: d_a_pos })
                    .is_ok()
            });
        if bits.len() < code_len_of(sys) {
            if s_ok == d_ok {
                err = Some(Error::Precondition(format!(
                    "probe exclusivity violated at step {i} for state {lo_name}:                      singleton={s_ok} duple={d_ok}"
                )));
                return;
            }
            checks += 1;
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(checks)
}

/// Exhaustive bit-reader exclusivity check over every glue code and every
/// bit cell of a compiled system: for each reader chain glue, each code, and
/// each read position, assemble the rails plus the state's anchor duple and
/// confirm that exactly the matching probe — singleton for a 0 bit, duple
/// for a 1 bit — can attach. Returns the number of (reader, code, cell)
/// combinations checked.
pub fn probe_matrix_check(
    src: &Arc<TileSystem>,
    out: &CompilationOutput,
) -> Result<usize> {
    use crate::assembly::{Assembly, Placement};
    use crate::frontier::validate_placement;
    let sys = &out.dtas;
    let codes = CodeTable::assign(&src.north_glues());
    let code_len = codes.code_len();
    let layout = Layout::new(code_len);

    // Rail cells get an inert blocker tile: occupancy is all the probes see.
    let mut tiles: Vec<crate::tile::TileType> = sys.tiles().map(|(_, t)| t.clone()).collect();
    tiles.push(crate::tile::TileType::new("!inert"));
    let singles: Vec<String> = sys
        .singleton_ids()
        .map(|id| sys.tile(id).name.clone())
        .collect();
    let duples: Vec<(String, String, crate::geom::Axis)> = sys
        .duples()
        .map(|(_, d)| {
            (
                sys.tile(d.a).name.clone(),
                sys.tile(d.b).name.clone(),
                d.axis,
            )
        })
        .collect();
    let test_sys = TileSystem::new(
        "probe-matrix",
        tiles,
        singles,
        duples,
        vec![(Pos::new(0, 0), "!inert".into())],
        1,
    )?;
    let inert = test_sys.tile_by_name("!inert").unwrap();

    // Reader chain glues present in the compiled system, by direction code.
    let mut readers: Vec<(u8, String)> = Vec::new();
    for (_, t) in test_sys.tiles() {
        if let Some(rest) = t.name.strip_prefix("rA:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() == 5 {
                let key = (parts[0].parse::<u8>().unwrap_or(9), parts[1].to_string());
                if !readers.contains(&key) {
                    readers.push(key);
                }
            }
        }
    }
    readers.sort();

    let mut checks = 0usize;
    for (dirc, gw) in &readers {
        let east = *dirc == 0;
        for code in codes.iter() {
            for j in 0..code_len {
                let prefix: String = code.bits[..j]
                    .iter()
                    .map(|b| if *b { '1' } else { '0' })
                    .collect();
                // The state's anchor duple: any arrival variant that exists.
                let variant = ["in", "s", "z"].iter().find_map(|v| {
                    let lo = format!("rA:{dirc}:{gw}:{prefix}:{v}:lo");
                    test_sys.tile_by_name(&lo).map(|_| *v)
                });
                let Some(variant) = variant else { continue };
                let lo = test_sys
                    .tile_by_name(&format!("rA:{dirc}:{gw}:{prefix}:{variant}:lo"))
                    .unwrap();
                let hi = test_sys
                    .tile_by_name(&format!("rA:{dirc}:{gw}:{prefix}:{variant}:hi"))
                    .unwrap();
                let cell = if east {
                    layout.east_cell(j)
                } else {
                    layout.west_cell(code_len - 1 - j)
                };
                // Assemble rails for the whole code plus the anchor pair.
                let mut cells: Vec<(Pos, crate::tile::TileId)> = Vec::new();
                for i in 0..code_len {
                    let (rc, route) = if east {
                        let c = layout.east_cell(i);
                        (c, layout::east_rail_cells(c, code.bits[i]))
                    } else {
                        let c = layout.west_cell(i);
                        (c, layout::west_rail_cells(c, code.bits[i]))
                    };
                    let _ = rc;
                    for (x, y) in route {
                        cells.push((Pos::new(x, y), inert));
                    }
                }
                cells.push((Pos::new(cell.a, 1), lo));
                cells.push((Pos::new(cell.a, 2), hi));
                let asm = Assembly::from_parts(cells);

                let bit = code.bits[j];
                let s_ok = test_sys
                    .tile_by_name(&format!("rS:{dirc}:{gw}:{prefix}"))
                    .is_some_and(|t| {
                        validate_placement(
                            &test_sys,
                            &asm,
                            &Placement::Singleton {
                                pos: Pos::new(cell.p, 1),
                                tile: t,
                            },
                        )
                        .is_ok()
                    });
                let d_a = format!("rD:{dirc}:{gw}:{prefix}:a");
                let d_ok = test_sys
                    .duples()
                    .find(|(_, d)| test_sys.tile(d.a).name == d_a)
                    .is_some_and(|(id, _)| {
                        let a_pos = if east {
                            Pos::new(cell.p, 2)
                        } else {
                            Pos::new(cell.b, 2)
                        };
                        validate_placement(&test_sys, &asm, &Placement::Duple { duple: id, a_pos })
                            .is_ok()
                    });
                if s_ok == d_ok || (bit && !d_ok) || (!bit && !s_ok) {
                    return Err(Error::Precondition(format!(
                        "probe exclusivity broken: reader {dirc}:{gw} code {} cell {j}:                          singleton={s_ok} duple={d_ok} (bit={})",
                        code.code_string(),
                        bit as u8
                    )));
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

/// Infer the code length from the compiled system's block side.
fn code_len_of(sys: &TileSystem) -> usize {
    // Readers only exist in compiled systems; the reader state bits max out
    // at the code length. Derive it from the longest rA state string.
    let mut max = 0usize;
    for (_, t) in sys.tiles() {
        if let Some(rest) = t.name.strip_prefix("rA:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() >= 3 {
                max = max.max(parts[2].len());
            }
        }
    }
    max
}
