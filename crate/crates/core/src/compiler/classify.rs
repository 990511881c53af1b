//! Per-type analysis of a compact zig-zag trace: how each tile type binds
//! (its genre), which side it launches its successor from, and whether it
//! owes its north glue a geometric encoding.

use std::collections::BTreeMap;

use crate::assembly::Assembly;
use crate::engine::AssemblySequence;
use crate::error::{Error, Result};
use crate::geom::{Direction, Pos};
use crate::tile::{Glue, TileId, TileSystem};

/// How a tile type enters the assembly.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Genre {
    /// Part of the seed assembly.
    Seed,
    /// Single strength-≥τ bond on the west side (rows growing east).
    DirectEast,
    /// Single strength-≥τ bond on the east side (rows growing west).
    DirectWest,
    /// Single strength-≥τ bond below (vertical step).
    DirectNorth,
    /// Cooperative west + south bonds (rows growing east).
    CoopEast,
    /// Cooperative east + south bonds (rows growing west).
    CoopWest,
}

impl Genre {
    pub fn is_coop(self) -> bool {
        matches!(self, Genre::CoopEast | Genre::CoopWest)
    }
}

/// A type-level launch: this type's glue on `side` enables its successor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Launch {
    pub side: Direction,
    pub glue: Glue,
    /// True when the glue alone meets the temperature (the successor is a
    /// Direct genre); false for cooperative chain glues that start a reader.
    pub direct: bool,
}

#[derive(Clone, Debug)]
pub struct TypeInfo {
    pub tile: TileId,
    pub genre: Genre,
    pub launch: Option<Launch>,
    /// Set when the north glue has positive strength below τ: the macrotile
    /// must encode it as rail geometry.
    pub geometry: Option<Glue>,
    /// Entry service columns observed for DirectNorth types (the launcher's
    /// climb column), filled in by the emitter planner.
    pub north_entry_cols: Vec<i32>,
}

/// Everything the emitter needs about the source behavior.
pub struct Classification {
    pub infos: BTreeMap<TileId, TypeInfo>,
    /// (direction, chain glue) -> (south glue -> successor tile), for
    /// cooperative reads. Direction is the growth direction of the row.
    pub coop_lookup: BTreeMap<(u8, Glue), BTreeMap<Glue, TileId>>,
    /// (direction, direct glue) -> successor tile, for strength-≥τ launches.
    pub direct_lookup: BTreeMap<(u8, Glue), TileId>,
}

pub fn dir_code(d: Direction) -> u8 {
    match d {
        Direction::East => 0,
        Direction::West => 1,
        Direction::North => 2,
        Direction::South => 3,
    }
}

/// Bonds formed by a single-cell placement at `pos` against `before`.
fn bonds(sys: &TileSystem, before: &Assembly, pos: Pos, tile: TileId) -> Vec<(Direction, Glue)> {
    let mut out = Vec::new();
    for d in Direction::ALL {
        if let Some(nc) = before.get(pos.neighbor(d)) {
            let g = sys.tile(tile).glue(d);
            if g.interacts(sys.tile(nc.tile).glue(d.opposite())) {
                out.push((d, g.clone()));
            }
        }
    }
    out
}

pub fn classify(sys: &TileSystem, seq: &AssemblySequence) -> Result<Classification> {
    let tau = sys.temperature;
    let mut infos: BTreeMap<TileId, TypeInfo> = BTreeMap::new();
    for (_, id) in sys.seed() {
        add_info(&mut infos, sys, *id, Genre::Seed)?;
    }

    // Placement step index per position, for enabling-bond resolution.
    let mut placed_at: BTreeMap<Pos, usize> = sys.seed().keys().map(|p| (*p, 0)).collect();
    // (position, side) pairs recorded as launches: launcher position ->
    // launch side, to later enforce one launch per type.
    let mut launches: Vec<(Pos, Direction, bool)> = Vec::new();
    // Remember each attachment's designated enabler for safety checks.
    let mut enabler_of: BTreeMap<Pos, (Pos, Direction, bool)> = BTreeMap::new();

    let mut step_no = 0usize;
    seq.transitions().for_each(|i, before, p, _after| {
        step_no = i + 1;
        let cells = p.cells(&seq.system);
        debug_assert_eq!(cells.len(), 1, "zig-zag traces have no duples");
        for (pos, _) in &cells {
            placed_at.insert(*pos, i + 1);
        }
        let _ = before;
    });

    // Second pass with full bond analysis (transitions() recomputed; traces
    // here are short).
    let mut result: Result<()> = Ok(());
    let tau_u = tau;
    seq.transitions().for_each(|i, before, p, _after| {
        if result.is_err() {
            return;
        }
        let cells = p.cells(&seq.system);
        let (pos, tile) = cells[0];
        let bs = bonds(sys, before, pos, tile);
        let strong: Vec<&(Direction, Glue)> =
            bs.iter().filter(|(_, g)| g.strength >= tau_u).collect();
        let genre;
        let enabling: (Direction, Glue);
        if !strong.is_empty() {
            // Direct attachment: the enabling bond is the latest-placed
            // strong neighbor (the one that completed attachability).
            let pick = strong
                .iter()
                .max_by_key(|(d, _)| placed_at.get(&pos.neighbor(*d)).copied().unwrap_or(0))
                .unwrap();
            enabling = (pick.0, pick.1.clone());
            genre = match enabling.0 {
                Direction::West => Genre::DirectEast,
                Direction::East => Genre::DirectWest,
                Direction::South => Genre::DirectNorth,
                Direction::North => {
                    result = Err(Error::Precondition(format!(
                        "step {i}: downward direct attachment at {pos} is not zig-zag"
                    )));
                    return;
                }
            };
        } else {
            // Cooperative: require exactly {W,S} or {E,S}.
            let mut side_w = None;
            let mut side_s = None;
            for (d, g) in &bs {
                match d {
                    Direction::South => side_s = Some(g.clone()),
                    Direction::West | Direction::East => side_w = Some((*d, g.clone())),
                    Direction::North => {}
                }
            }
            let (Some((hd, hg)), Some(_sg)) = (side_w, side_s) else {
                result = Err(Error::Precondition(format!(
                    "step {i}: unsupported cooperative attachment pattern at {pos} \
                     (bonds {:?})",
                    bs.iter().map(|(d, g)| (*d, g.label.clone())).collect::<Vec<_>>()
                )));
                return;
            };
            enabling = (hd, hg);
            genre = if enabling.0 == Direction::West {
                Genre::CoopEast
            } else {
                Genre::CoopWest
            };
        }
        if let Err(e) = add_info(&mut infos, sys, tile, genre) {
            result = Err(e);
            return;
        }
        let launcher_pos = pos.neighbor(enabling.0);
        launches.push((launcher_pos, enabling.0.opposite(), !genre.is_coop()));
        enabler_of.insert(pos, (launcher_pos, enabling.0.opposite(), !genre.is_coop()));
    });
    result?;

    // Fold observed launches into type info.
    let terminal = seq.result();
    for (launcher_pos, side, direct) in launches {
        let Some(cell) = terminal.get(launcher_pos) else {
            continue;
        };
        let tile = cell.tile;
        let glue = sys.tile(tile).glue(side).clone();
        let launch = Launch { side, glue, direct };
        let info = infos.get_mut(&tile).expect("launcher classified");
        match &info.launch {
            None => info.launch = Some(launch),
            Some(existing) if *existing == launch => {}
            Some(existing) => {
                return Err(Error::Precondition(format!(
                    "tile type {} launches from both {:?} and {:?}; \
                     zig-zag types need a single output side",
                    sys.tile(tile).name,
                    existing.side,
                    launch.side
                )));
            }
        }
    }

    // Lookup tables.
    let mut coop_lookup: BTreeMap<(u8, Glue), BTreeMap<Glue, TileId>> = BTreeMap::new();
    let mut direct_lookup: BTreeMap<(u8, Glue), TileId> = BTreeMap::new();
    for (tile, info) in &infos {
        let t = sys.tile(*tile);
        match info.genre {
            Genre::CoopEast | Genre::CoopWest => {
                let (chain_side, dirc) = if info.genre == Genre::CoopEast {
                    (Direction::West, dir_code(Direction::East))
                } else {
                    (Direction::East, dir_code(Direction::West))
                };
                let gw = t.glue(chain_side).clone();
                let gs = t.glue(Direction::South).clone();
                let slot = coop_lookup.entry((dirc, gw)).or_default();
                if let Some(prev) = slot.insert(gs, *tile) {
                    if prev != *tile {
                        return Err(Error::Precondition(format!(
                            "ambiguous cooperative successors {} and {}",
                            sys.tile(prev).name,
                            t.name
                        )));
                    }
                }
            }
            Genre::DirectEast | Genre::DirectWest | Genre::DirectNorth => {
                let (side, dirc) = match info.genre {
                    Genre::DirectEast => (Direction::West, dir_code(Direction::East)),
                    Genre::DirectWest => (Direction::East, dir_code(Direction::West)),
                    _ => (Direction::South, dir_code(Direction::North)),
                };
                let g = t.glue(side).clone();
                if let Some(prev) = direct_lookup.insert((dirc, g), *tile) {
                    if prev != *tile {
                        return Err(Error::Precondition(format!(
                            "ambiguous direct successors {} and {}",
                            sys.tile(prev).name,
                            t.name
                        )));
                    }
                }
            }
            Genre::Seed => {}
        }
    }

    let classification = Classification {
        infos,
        coop_lookup,
        direct_lookup,
    };
    safety_checks(sys, seq, &classification, &enabler_of)?;
    Ok(classification)
}

fn add_info(
    infos: &mut BTreeMap<TileId, TypeInfo>,
    sys: &TileSystem,
    tile: TileId,
    genre: Genre,
) -> Result<()> {
    let tau = sys.temperature;
    let north = sys.tile(tile).glue(Direction::North).clone();
    let geometry = (north.strength > 0 && north.strength < tau).then_some(north);
    match infos.get(&tile) {
        None => {
            infos.insert(
                tile,
                TypeInfo {
                    tile,
                    genre,
                    launch: None,
                    geometry,
                    north_entry_cols: Vec::new(),
                },
            );
            Ok(())
        }
        Some(info) if info.genre == genre => Ok(()),
        Some(info) => Err(Error::Precondition(format!(
            "tile type {} attaches as both {:?} and {:?}",
            sys.tile(tile).name,
            info.genre,
            genre
        ))),
    }
}

/// Reader launches that stall (their target never tiles) must still read
/// honest rails: the cell below the target needs a coded (strength-1,
/// non-null) north glue, unless no successor exists for the chain glue at
/// all (then no reader is emitted).
fn safety_checks(
    sys: &TileSystem,
    seq: &AssemblySequence,
    cls: &Classification,
    _enabler_of: &BTreeMap<Pos, (Pos, Direction, bool)>,
) -> Result<()> {
    let tau = sys.temperature;
    let terminal = seq.result();
    for (pos, cell) in terminal.iter() {
        let Some(info) = cls.infos.get(&cell.tile) else {
            continue;
        };
        let Some(launch) = &info.launch else { continue };
        let target = pos.neighbor(launch.side);
        if terminal.occupied(target) {
            continue;
        }
        if launch.direct {
            // An exposed strength-≥τ glue with no successor type emits no
            // entry, so a dangling direct launch is harmless.
            continue;
        }
        let dirc = dir_code(launch.side);
        let table = cls.coop_lookup.get(&(dirc, launch.glue.clone()));
        if table.map_or(true, |t| t.is_empty()) {
            continue;
        }
        let below = target.neighbor(Direction::South);
        let ok = terminal.get(below).is_some_and(|c| {
            let g = sys.tile(c.tile).glue(Direction::North);
            g.strength > 0 && g.strength < tau
        });
        if !ok {
            return Err(Error::Precondition(format!(
                "tile {} at {pos} launches a reader toward {target}, but the cell \
                 below the target has no coded north glue; the read could not \
                 be grounded",
                sys.tile(cell.tile).name
            )));
        }
    }
    Ok(())
}
