//! Block representation functions: mapping macrotile content back to
//! simulated tiles, and the induced assembly map R*.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::assembly::{Assembly, Cell};
use crate::error::{Error, Result};
use crate::geom::Pos;
use crate::tile::TileSystem;

/// Region scheme for the representation function.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ReprMode {
    /// m×m blocks; fuzz allowed only laterally/vertically adjacent.
    Block,
    /// m-plus regions (a block plus its four block-neighbors); fuzz allowed
    /// to squared distance 2, diagonals included.
    Plus,
}

/// A marker-based representation function: an m-block (or m-plus) maps to the
/// simulated tile named by the unique marker tile it contains; blocks without
/// a marker map to empty. Monotone under subassembly by construction, since
/// markers are never removed and dynamics place at most one per block.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentationFunction {
    pub scale: u32,
    pub mode: ReprMode,
    /// Marker tile name -> simulated tile name.
    pub markers: BTreeMap<String, String>,
}

impl RepresentationFunction {
    /// The identity function at scale 1: every tile marks itself.
    pub fn identity(sys: &TileSystem) -> RepresentationFunction {
        let markers = sys
            .tiles()
            .map(|(_, t)| (t.name.clone(), t.name.clone()))
            .collect();
        RepresentationFunction {
            scale: 1,
            mode: ReprMode::Block,
            markers,
        }
    }

    pub fn block_of(&self, p: Pos) -> Pos {
        let m = self.scale as i32;
        Pos::new(p.x.div_euclid(m), p.y.div_euclid(m))
    }

    /// Apply R to one block's content: the simulated tile name, if any.
    /// `cells` iterates the simulator cells inside the block.
    fn lookup<'a>(
        &self,
        sim: &TileSystem,
        cells: impl Iterator<Item = &'a Cell>,
    ) -> Result<Option<String>> {
        let mut found: Option<String> = None;
        for c in cells {
            let name = &sim.tile(c.tile).name;
            if let Some(mapped) = self.markers.get(name) {
                match &found {
                    None => found = Some(mapped.clone()),
                    Some(prev) if prev == mapped => {}
                    Some(prev) => {
                        return Err(Error::Format(format!(
                            "block holds conflicting markers {prev} and {mapped}"
                        )))
                    }
                }
            }
        }
        Ok(found)
    }

    /// R*: map a simulator assembly blockwise onto the simulated tile set.
    /// Returns the simulated assembly (possibly empty) plus the list of
    /// nonempty blocks that mapped to empty (fuzz).
    pub fn map_assembly(&self, sim: &TileSystem, spec: &TileSystem, asm: &Assembly) -> Result<MappedAssembly> {
        let mut blocks: BTreeMap<Pos, Vec<&Cell>> = BTreeMap::new();
        for (p, c) in asm.iter() {
            blocks.entry(self.block_of(p)).or_default().push(c);
        }
        let mut tiles = BTreeMap::new();
        let mut fuzz = Vec::new();
        for (bp, cells) in blocks {
            match self.lookup(sim, cells.into_iter())? {
                Some(name) => {
                    let id = spec
                        .tile_by_name(&name)
                        .ok_or_else(|| Error::UnknownTile(name.clone()))?;
                    tiles.insert(bp, id);
                }
                None => fuzz.push(bp),
            }
        }
        Ok(MappedAssembly { tiles, fuzz })
    }
}

/// Result of applying R*: simulated tiles per block plus fuzz blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappedAssembly {
    pub tiles: BTreeMap<Pos, crate::tile::TileId>,
    pub fuzz: Vec<Pos>,
}

impl MappedAssembly {
    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Canonical key of the simulated configuration (fuzz excluded).
    pub fn key(&self) -> Vec<(Pos, crate::tile::TileId)> {
        self.tiles.iter().map(|(p, t)| (*p, *t)).collect()
    }

    /// Clean-mapping violations under the given mode: fuzz regions must sit
    /// within the mode's distance of a nonempty simulated cell (no diagonal
    /// fuzz for Block mode). An assembly with at most one nonempty block is
    /// always clean.
    pub fn clean_violations(&self, mode: ReprMode) -> Vec<Pos> {
        if self.tiles.is_empty() && self.fuzz.len() <= 1 {
            return Vec::new();
        }
        let limit = match mode {
            ReprMode::Block => 1,
            ReprMode::Plus => 2,
        };
        let mut bad = Vec::new();
        for f in &self.fuzz {
            let ok = self.tiles.keys().any(|t| {
                let (dx, dy) = (*t - *f);
                dx * dx + dy * dy <= limit
            });
            if !ok {
                bad.push(*f);
            }
        }
        bad
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Direction;
    use crate::tile::{Glue, TileType};

    fn tiny() -> std::sync::Arc<TileSystem> {
        let a = TileType::new("a").with_glue(Direction::East, Glue::new("g", 1));
        let b = TileType::new("b").with_glue(Direction::West, Glue::new("g", 1));
        TileSystem::new(
            "tiny",
            vec![a, b],
            vec!["a".into(), "b".into()],
            vec![],
            vec![(Pos::new(0, 0), "a".into())],
            1,
        )
        .unwrap()
    }

    #[test]
    fn identity_maps_cellwise() {
        let sys = tiny();
        let r = RepresentationFunction::identity(&sys);
        let asm = crate::engine::run(&sys, crate::engine::SchedulerPolicy::LexMin, 10);
        let mapped = r.map_assembly(&sys, &sys, asm.result()).unwrap();
        assert_eq!(mapped.tiles.len(), asm.result().len());
        assert!(mapped.fuzz.is_empty());
        assert!(mapped.clean_violations(ReprMode::Block).is_empty());
    }

    #[test]
    fn empty_assembly_maps_empty() {
        // Stray cells with no marker map to fuzz.
        let sys = tiny();
        let mut markers = BTreeMap::new();
        markers.insert("a".to_string(), "a".to_string());
        let r = RepresentationFunction {
            scale: 1,
            mode: ReprMode::Block,
            markers,
        };
        let asm = crate::engine::run(&sys, crate::engine::SchedulerPolicy::LexMin, 10);
        let mapped = r.map_assembly(&sys, &sys, asm.result()).unwrap();
        assert_eq!(mapped.tiles.len(), 1);
        assert_eq!(mapped.fuzz.len(), 1, "the unmarked b cell is fuzz");
        // The fuzz block is adjacent to the mapped block: clean.
        assert!(mapped.clean_violations(ReprMode::Block).is_empty());
    }

    #[test]
    fn diagonal_fuzz_rejected_in_block_mode() {
        let tiles = BTreeMap::from([(Pos::new(0, 0), crate::tile::TileId(0))]);
        let m = MappedAssembly {
            tiles,
            fuzz: vec![Pos::new(1, 1)],
        };
        assert_eq!(m.clean_violations(ReprMode::Block), vec![Pos::new(1, 1)]);
        // Plus mode allows squared distance 2 (diagonals).
        assert!(m.clean_violations(ReprMode::Plus).is_empty());
    }

    #[test]
    fn plus_mode_distance_bound() {
        let tiles = BTreeMap::from([(Pos::new(0, 0), crate::tile::TileId(0))]);
        let m = MappedAssembly {
            tiles,
            fuzz: vec![Pos::new(2, 0)],
        };
        // Squared distance 4 > 2: violation even in Plus mode.
        assert_eq!(m.clean_violations(ReprMode::Plus), vec![Pos::new(2, 0)]);
    }
}
