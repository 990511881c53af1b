//! Tile types, duple types, glues, and whole tile systems.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{Axis, Direction, Pos};

/// A glue: a string label plus a nonnegative integer strength.
///
/// The null glue is the unique (empty label, strength 0) glue; strength-0
/// glues never interact.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Glue {
    pub label: String,
    pub strength: u32,
}

impl Glue {
    pub fn new(label: impl Into<String>, strength: u32) -> Self {
        Glue {
            label: label.into(),
            strength,
        }
    }

    pub fn null() -> Self {
        Glue {
            label: String::new(),
            strength: 0,
        }
    }

    pub fn is_null(&self) -> bool {
        self.label.is_empty() && self.strength == 0
    }

    /// Two glues interact iff they are equal in both label and strength and
    /// the strength is positive.
    pub fn interacts(&self, other: &Glue) -> bool {
        self.strength > 0 && self.strength == other.strength && self.label == other.label
    }
}

impl fmt::Display for Glue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_null() {
            write!(f, "·")
        } else {
            write!(f, "{}:{}", self.label, self.strength)
        }
    }
}

/// Index of a tile type within its `TileSystem`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct TileId(pub u32);

/// Index of a duple type within its `TileSystem`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct DupleId(pub u32);

/// A unit square tile type: a name and one glue per side.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TileType {
    pub name: String,
    /// Glues indexed by `Direction::index()`: N, S, E, W.
    pub glues: [Glue; 4],
}

impl TileType {
    pub fn new(name: impl Into<String>) -> Self {
        TileType {
            name: name.into(),
            glues: [Glue::null(), Glue::null(), Glue::null(), Glue::null()],
        }
    }

    pub fn with_glue(mut self, d: Direction, glue: Glue) -> Self {
        self.glues[d.index()] = glue;
        self
    }

    pub fn glue(&self, d: Direction) -> &Glue {
        &self.glues[d.index()]
    }

    pub fn strength(&self, d: Direction) -> u32 {
        self.glues[d.index()].strength
    }
}

/// A duple type: two tile types pre-joined along an axis.
///
/// The internal glue (a's side toward b, b's side toward a) must match in
/// label and strength, with strength at least the owning system's
/// temperature.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DupleType {
    pub a: TileId,
    pub b: TileId,
    pub axis: Axis,
}

/// A dupled tile assembly system (T, S, D, σ, τ).
///
/// A pure aTAM system is the special case with no duples and every tile type
/// in the singleton set. Immutable after construction; shared via `Arc`.
#[derive(Clone, Debug)]
pub struct TileSystem {
    pub name: String,
    tiles: Vec<TileType>,
    by_name: HashMap<String, TileId>,
    /// Tile ids sorted by name; `name_rank[id]` is the position of the id in
    /// that order. Used for deterministic, name-based iteration order.
    name_rank: Vec<u32>,
    singletons: Vec<bool>,
    duples: Vec<DupleType>,
    seed: BTreeMap<Pos, TileId>,
    pub temperature: u32,
    /// For each (glue label, strength, side) exposed by the assembly, the
    /// singleton tiles whose `side.opposite()` glue matches.
    singleton_candidates: HashMap<(String, u32, Direction), Vec<TileId>>,
    /// Same lookup for duples: candidates keyed by the matching side of
    /// either half; the payload records (duple, which half matched).
    duple_candidates: HashMap<(String, u32, Direction), Vec<(DupleId, DupleHalf)>>,
}

/// Identifies one half of a duple.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DupleHalf {
    A,
    B,
}

impl TileSystem {
    /// Build and validate a system. `singletons` lists the names available as
    /// singleton attachments (for a pure aTAM system, all of them).
    pub fn new(
        name: impl Into<String>,
        tiles: Vec<TileType>,
        singletons: Vec<String>,
        duples: Vec<(String, String, Axis)>,
        seed: Vec<(Pos, String)>,
        temperature: u32,
    ) -> Result<Arc<TileSystem>> {
        assert!(temperature >= 1, "temperature must be positive");
        let mut by_name = HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            if by_name.insert(t.name.clone(), TileId(i as u32)).is_some() {
                return Err(Error::DuplicateTile(t.name.clone()));
            }
        }
        let lookup = |n: &str| -> Result<TileId> {
            by_name
                .get(n)
                .copied()
                .ok_or_else(|| Error::UnknownTile(n.to_string()))
        };

        let mut singleton_flags = vec![false; tiles.len()];
        for s in &singletons {
            singleton_flags[lookup(s)?.0 as usize] = true;
        }

        let mut duple_types = Vec::new();
        for (a, b, axis) in &duples {
            let a_id = lookup(a)?;
            let b_id = lookup(b)?;
            let d = axis.toward_b();
            let ga = tiles[a_id.0 as usize].glue(d);
            let gb = tiles[b_id.0 as usize].glue(d.opposite());
            if !(ga.label == gb.label && ga.strength == gb.strength && ga.strength >= temperature)
            {
                return Err(Error::InvalidDuple {
                    a: a.clone(),
                    b: b.clone(),
                    tau: temperature,
                });
            }
            duple_types.push(DupleType {
                a: a_id,
                b: b_id,
                axis: *axis,
            });
        }

        let mut seed_map = BTreeMap::new();
        for (p, n) in &seed {
            let id = lookup(n)?;
            if seed_map.insert(*p, id).is_some() {
                return Err(Error::InvalidSeed(format!("duplicate seed cell {p}")));
            }
        }
        if seed_map.is_empty() {
            return Err(Error::InvalidSeed("seed must be non-empty".into()));
        }

        let mut ids: Vec<TileId> = (0..tiles.len() as u32).map(TileId).collect();
        ids.sort_by(|a, b| tiles[a.0 as usize].name.cmp(&tiles[b.0 as usize].name));
        let mut name_rank = vec![0u32; tiles.len()];
        for (rank, id) in ids.iter().enumerate() {
            name_rank[id.0 as usize] = rank as u32;
        }

        let mut singleton_candidates: HashMap<(String, u32, Direction), Vec<TileId>> =
            HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            if !singleton_flags[i] {
                continue;
            }
            for d in Direction::ALL {
                let g = t.glue(d);
                if g.strength > 0 {
                    // A tile whose side `d` carries g can bind an exposed
                    // glue g facing direction `d.opposite()`.
                    singleton_candidates
                        .entry((g.label.clone(), g.strength, d.opposite()))
                        .or_default()
                        .push(TileId(i as u32));
                }
            }
        }
        let mut duple_candidates: HashMap<(String, u32, Direction), Vec<(DupleId, DupleHalf)>> =
            HashMap::new();
        for (i, dt) in duple_types.iter().enumerate() {
            for (half, tile) in [(DupleHalf::A, dt.a), (DupleHalf::B, dt.b)] {
                for d in Direction::ALL {
                    // Skip the internal face of this half.
                    if d == internal_face(dt.axis, half) {
                        continue;
                    }
                    let g = tiles[tile.0 as usize].glue(d);
                    if g.strength > 0 {
                        duple_candidates
                            .entry((g.label.clone(), g.strength, d.opposite()))
                            .or_default()
                            .push((DupleId(i as u32), half));
                    }
                }
            }
        }

        let sys = TileSystem {
            name: name.into(),
            tiles,
            by_name,
            name_rank,
            singletons: singleton_flags,
            duples: duple_types,
            seed: seed_map,
            temperature,
            singleton_candidates,
            duple_candidates,
        };
        sys.validate_seed()?;
        Ok(Arc::new(sys))
    }

    fn validate_seed(&self) -> Result<()> {
        let asm = crate::assembly::Assembly::seed_of(self);
        if !asm.grid_connected() {
            return Err(Error::InvalidSeed("seed is not connected".into()));
        }
        if !crate::stability::is_tau_stable(&asm, self, self.temperature) {
            return Err(Error::InvalidSeed(format!(
                "seed is not {}-stable",
                self.temperature
            )));
        }
        Ok(())
    }

    pub fn tile(&self, id: TileId) -> &TileType {
        &self.tiles[id.0 as usize]
    }

    pub fn tile_by_name(&self, name: &str) -> Option<TileId> {
        self.by_name.get(name).copied()
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn tiles(&self) -> impl Iterator<Item = (TileId, &TileType)> {
        self.tiles
            .iter()
            .enumerate()
            .map(|(i, t)| (TileId(i as u32), t))
    }

    pub fn is_singleton(&self, id: TileId) -> bool {
        self.singletons[id.0 as usize]
    }

    pub fn singleton_ids(&self) -> impl Iterator<Item = TileId> + '_ {
        self.singletons
            .iter()
            .enumerate()
            .filter(|(_, s)| **s)
            .map(|(i, _)| TileId(i as u32))
    }

    pub fn singleton_count(&self) -> usize {
        self.singletons.iter().filter(|s| **s).count()
    }

    pub fn duple(&self, id: DupleId) -> &DupleType {
        &self.duples[id.0 as usize]
    }

    pub fn duple_count(&self) -> usize {
        self.duples.len()
    }

    pub fn duples(&self) -> impl Iterator<Item = (DupleId, &DupleType)> {
        self.duples
            .iter()
            .enumerate()
            .map(|(i, d)| (DupleId(i as u32), d))
    }

    pub fn is_pure_atam(&self) -> bool {
        self.duples.is_empty() && self.singletons.iter().all(|s| *s)
    }

    pub fn seed(&self) -> &BTreeMap<Pos, TileId> {
        &self.seed
    }

    pub fn name_rank(&self, id: TileId) -> u32 {
        self.name_rank[id.0 as usize]
    }

    pub fn singleton_candidates(
        &self,
        label: &str,
        strength: u32,
        facing: Direction,
    ) -> &[TileId] {
        self.singleton_candidates
            .get(&(label.to_string(), strength, facing))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn duple_candidates(
        &self,
        label: &str,
        strength: u32,
        facing: Direction,
    ) -> &[(DupleId, DupleHalf)] {
        self.duple_candidates
            .get(&(label.to_string(), strength, facing))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// Set of distinct north-side glues over all tile types, null excluded.
    pub fn north_glues(&self) -> Vec<Glue> {
        let mut set: Vec<Glue> = Vec::new();
        for t in &self.tiles {
            let g = t.glue(Direction::North);
            if !g.is_null() && !set.contains(g) {
                set.push(g.clone());
            }
        }
        set.sort();
        set
    }

    /// Mirror the system about the y axis: east/west glues swap, seed x
    /// coordinates negate, and east-west duples swap their halves.
    pub fn reflected(&self, name: impl Into<String>) -> Result<Arc<TileSystem>> {
        let tiles: Vec<TileType> = self
            .tiles
            .iter()
            .map(|t| {
                let mut nt = TileType::new(t.name.clone());
                nt.glues[Direction::North.index()] = t.glue(Direction::North).clone();
                nt.glues[Direction::South.index()] = t.glue(Direction::South).clone();
                nt.glues[Direction::East.index()] = t.glue(Direction::West).clone();
                nt.glues[Direction::West.index()] = t.glue(Direction::East).clone();
                nt
            })
            .collect();
        let singletons = self
            .singleton_ids()
            .map(|id| self.tile(id).name.clone())
            .collect();
        let duples = self
            .duples
            .iter()
            .map(|dt| match dt.axis {
                Axis::EastWest => (
                    self.tile(dt.b).name.clone(),
                    self.tile(dt.a).name.clone(),
                    Axis::EastWest,
                ),
                Axis::NorthSouth => (
                    self.tile(dt.a).name.clone(),
                    self.tile(dt.b).name.clone(),
                    Axis::NorthSouth,
                ),
            })
            .collect();
        let seed = self
            .seed
            .iter()
            .map(|(p, id)| (Pos::new(-p.x, p.y), self.tile(*id).name.clone()))
            .collect();
        TileSystem::new(name, tiles, singletons, duples, seed, self.temperature)
    }

    /// Rotate the whole system a quarter turn counterclockwise about the
    /// origin, `quarters` times. Glue sides, duple axes, and seed positions
    /// all rotate together, so the rotated system's behavior is the rotation
    /// of the original's.
    pub fn rotated(&self, quarters: u32, name: impl Into<String>) -> Result<Arc<TileSystem>> {
        let q = quarters % 4;
        let rot_dir = |d: Direction| {
            let mut d = d;
            for _ in 0..q {
                d = d.rotate_ccw();
            }
            d
        };
        let rot_pos = |p: Pos| {
            let mut p = p;
            for _ in 0..q {
                p = Pos::new(-p.y, p.x);
            }
            p
        };
        let tiles: Vec<TileType> = self
            .tiles
            .iter()
            .map(|t| {
                let mut nt = TileType::new(t.name.clone());
                for d in Direction::ALL {
                    nt.glues[rot_dir(d).index()] = t.glue(d).clone();
                }
                nt
            })
            .collect();
        let singletons = self
            .singleton_ids()
            .map(|id| self.tile(id).name.clone())
            .collect();
        let duples = self
            .duples
            .iter()
            .map(|dt| {
                let toward = rot_dir(dt.axis.toward_b());
                // Keep `a` as the anchor whose partner lies east or north.
                let (a, b, axis) = match toward {
                    Direction::East => (dt.a, dt.b, Axis::EastWest),
                    Direction::North => (dt.a, dt.b, Axis::NorthSouth),
                    Direction::West => (dt.b, dt.a, Axis::EastWest),
                    Direction::South => (dt.b, dt.a, Axis::NorthSouth),
                };
                (
                    self.tile(a).name.clone(),
                    self.tile(b).name.clone(),
                    axis,
                )
            })
            .collect();
        let seed = self
            .seed
            .iter()
            .map(|(p, id)| (rot_pos(*p), self.tile(*id).name.clone()))
            .collect();
        TileSystem::new(name, tiles, singletons, duples, seed, self.temperature)
    }
}

/// The face of the given half that touches the other half.
pub fn internal_face(axis: Axis, half: DupleHalf) -> Direction {
    match half {
        DupleHalf::A => axis.toward_b(),
        DupleHalf::B => axis.toward_b().opposite(),
    }
}
