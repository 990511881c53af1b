//! Frontier computation: the set of placements (singletons and duples) that
//! can stably attach to an assembly.

use std::collections::BTreeMap;

use crate::assembly::{Assembly, Placement, PlacementKey};
use crate::error::{Error, Result};
use crate::geom::{Direction, Pos};
use crate::tile::{DupleHalf, TileSystem};

/// All frontier placements covering the empty cell `e`.
///
/// Candidates are gathered from the glues exposed by occupied neighbors of
/// `e`; any placement binding with total strength >= τ must have at least one
/// interacting edge, so this scan is exhaustive for cell `e`.
pub fn placements_covering(sys: &TileSystem, asm: &Assembly, e: Pos) -> Vec<Placement> {
    let mut out: Vec<Placement> = Vec::new();
    if asm.occupied(e) {
        return out;
    }
    let tau = sys.temperature;
    for d in Direction::ALL {
        let n = e.neighbor(d);
        let Some(ncell) = asm.get(n) else { continue };
        // The neighbor's glue facing e sits on its side d.opposite().
        let facing = d.opposite();
        let g = sys.tile(ncell.tile).glue(facing);
        if g.strength == 0 {
            continue;
        }
        for &tile in sys.singleton_candidates(&g.label, g.strength, facing) {
            let p = Placement::Singleton { pos: e, tile };
            if !out.contains(&p) && asm.binding_strength(sys, &p).map_or(false, |s| s >= tau) {
                out.push(p);
            }
        }
        for &(duple, half) in sys.duple_candidates(&g.label, g.strength, facing) {
            let dt = sys.duple(duple);
            let a_pos = match half {
                DupleHalf::A => e,
                DupleHalf::B => e + {
                    let (dx, dy) = dt.axis.toward_b().offset();
                    (-dx, -dy)
                },
            };
            let p = Placement::Duple { duple, a_pos };
            if out.contains(&p) {
                continue;
            }
            if asm.binding_strength(sys, &p).map_or(false, |s| s >= tau) {
                out.push(p);
            }
        }
    }
    out
}

/// The full frontier in deterministic order (sorted by cell, then kind, then
/// type name). Each duple placement appears exactly once regardless of which
/// of its two cells touches the assembly.
pub fn frontier(sys: &TileSystem, asm: &Assembly) -> Vec<Placement> {
    let mut map: BTreeMap<PlacementKey, Placement> = BTreeMap::new();
    for (p, _) in asm.iter() {
        for e in p.neighbors() {
            if asm.occupied(e) {
                continue;
            }
            for pl in placements_covering(sys, asm, e) {
                map.insert(pl.order_key(sys), pl);
            }
        }
    }
    map.into_values().collect()
}

/// Check that a placement is currently in the frontier without enumerating
/// the whole frontier.
pub fn validate_placement(sys: &TileSystem, asm: &Assembly, p: &Placement) -> Result<()> {
    match p {
        Placement::Singleton { tile, .. } => {
            if !sys.is_singleton(*tile) {
                return Err(Error::IllegalStep(format!(
                    "{} is not in the singleton set",
                    sys.tile(*tile).name
                )));
            }
        }
        Placement::Duple { .. } => {}
    }
    let strength = asm.binding_strength(sys, p).map_err(|e| match e {
        Error::OccupiedCell(pos) => Error::IllegalStep(format!("cell {pos} occupied")),
        other => other,
    })?;
    if strength < sys.temperature {
        return Err(Error::IllegalStep(format!(
            "binding strength {} < temperature {} for {}",
            strength,
            sys.temperature,
            p.describe(sys)
        )));
    }
    Ok(())
}

/// Incrementally maintained frontier. Attachment never invalidates an entry
/// except by occupying one of its cells, so updates only need to re-scan the
/// neighborhood of newly placed tiles.
#[derive(Clone, Debug, Default)]
pub struct FrontierSet {
    entries: BTreeMap<PlacementKey, Placement>,
}

impl FrontierSet {
    pub fn full(sys: &TileSystem, asm: &Assembly) -> Self {
        let mut s = FrontierSet::default();
        for pl in frontier(sys, asm) {
            s.entries.insert(pl.order_key(sys), pl);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Placement> {
        self.entries.values()
    }

    pub fn first(&self) -> Option<&Placement> {
        self.entries.values().next()
    }

    pub fn nth(&self, n: usize) -> Option<&Placement> {
        self.entries.values().nth(n)
    }

    pub fn contains(&self, sys: &TileSystem, p: &Placement) -> bool {
        self.entries.contains_key(&p.order_key(sys))
    }

    /// Update after `placed` was applied to `asm` (which must already contain
    /// it). Returns the placements newly added to the frontier.
    pub fn update_after(
        &mut self,
        sys: &TileSystem,
        asm: &Assembly,
        placed: &Placement,
    ) -> Vec<Placement> {
        let cells = placed.positions(sys);
        for &c in &cells {
            self.remove_covering(sys, c);
        }
        let mut added = Vec::new();
        for &c in &cells {
            for e in c.neighbors() {
                if asm.occupied(e) {
                    continue;
                }
                for pl in placements_covering(sys, asm, e) {
                    let key = pl.order_key(sys);
                    if self.entries.insert(key, pl).is_none() {
                        added.push(pl);
                    }
                }
            }
        }
        added
    }

    /// Remove every entry whose cells include `c`. An entry covering `c` has
    /// its minimum cell at `c`, one west of `c`, or one south of `c`.
    fn remove_covering(&mut self, sys: &TileSystem, c: Pos) {
        let firsts = [c, c + (-1, 0), c + (0, -1)];
        let mut doomed: Vec<PlacementKey> = Vec::new();
        for f in firsts {
            let lo = PlacementKey {
                first: f,
                second: Pos::new(i32::MIN, i32::MIN),
                kind: 0,
                rank_a: 0,
                rank_b: 0,
                axis: 0,
            };
            let hi = PlacementKey {
                first: f,
                second: Pos::new(i32::MAX, i32::MAX),
                kind: u8::MAX,
                rank_a: u32::MAX,
                rank_b: u32::MAX,
                axis: u8::MAX,
            };
            for (k, pl) in self.entries.range(lo..=hi) {
                if pl.positions(sys).contains(&c) {
                    doomed.push(*k);
                }
            }
        }
        for k in doomed {
            self.entries.remove(&k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Axis;
    use crate::tile::{Glue, TileType};

    fn tau2_seed_east() -> std::sync::Arc<TileSystem> {
        let seed = TileType::new("seed").with_glue(Direction::East, Glue::new("g", 2));
        let t = TileType::new("t").with_glue(Direction::West, Glue::new("g", 2));
        TileSystem::new(
            "m",
            vec![seed, t],
            vec!["t".into()],
            vec![],
            vec![(Pos::new(0, 0), "seed".into())],
            2,
        )
        .unwrap()
    }

    #[test]
    fn strength_two_singleton_in_frontier() {
        let sys = tau2_seed_east();
        let asm = Assembly::seed_of(&sys);
        let f = frontier(&sys, &asm);
        assert_eq!(f.len(), 1);
        assert_eq!(
            f[0],
            Placement::Singleton {
                pos: Pos::new(1, 0),
                tile: sys.tile_by_name("t").unwrap()
            }
        );
    }

    #[test]
    fn terminal_assembly_has_empty_frontier() {
        let sys = TileSystem::new(
            "inert",
            vec![TileType::new("x")],
            vec!["x".into()],
            vec![],
            vec![(Pos::new(0, 0), "x".into())],
            1,
        )
        .unwrap();
        let asm = Assembly::seed_of(&sys);
        assert!(frontier(&sys, &asm).is_empty());
    }

    #[test]
    fn duple_cannot_fit_single_cell_pocket() {
        // tau=1 pocket at (0,1): floor below, roof above, wall to the east.
        // The floor's north glue seeds a vertical duple, but the duple's
        // second cell is occupied by the roof, so only a singleton fits.
        let floor = TileType::new("floor")
            .with_glue(Direction::North, Glue::new("up", 1))
            .with_glue(Direction::East, Glue::new("w0", 1));
        let w1 = TileType::new("w1")
            .with_glue(Direction::West, Glue::new("w0", 1))
            .with_glue(Direction::North, Glue::new("w2", 1));
        let w2t = TileType::new("w2")
            .with_glue(Direction::South, Glue::new("w2", 1))
            .with_glue(Direction::North, Glue::new("w3", 1));
        let roof = TileType::new("roof").with_glue(Direction::East, Glue::new("roofw", 1));
        let w3t = TileType::new("w3")
            .with_glue(Direction::South, Glue::new("w3", 1))
            .with_glue(Direction::West, Glue::new("roofw", 1));
        let da = TileType::new("da")
            .with_glue(Direction::South, Glue::new("up", 1))
            .with_glue(Direction::North, Glue::new("pair", 1));
        let db = TileType::new("db").with_glue(Direction::South, Glue::new("pair", 1));
        let sys = TileSystem::new(
            "pocket",
            vec![floor, w1, w2t, w3t, roof, da, db],
            vec![],
            vec![("da".into(), "db".into(), Axis::NorthSouth)],
            vec![
                (Pos::new(0, 0), "floor".into()),
                (Pos::new(1, 0), "w1".into()),
                (Pos::new(1, 1), "w2".into()),
                (Pos::new(1, 2), "w3".into()),
                (Pos::new(0, 2), "roof".into()),
            ],
            1,
        )
        .unwrap();
        let asm = Assembly::seed_of(&sys);
        let f = frontier(&sys, &asm);
        // The floor's "up" glue matches the duple's lower half, but the upper
        // half's cell (0,2) is occupied by the roof: no duple in the frontier.
        assert!(f.iter().all(|p| matches!(p, Placement::Singleton { .. })));
        for p in &f {
            for pos in p.positions(&sys) {
                assert!(!asm.occupied(pos));
            }
        }
    }

    #[test]
    fn incremental_matches_full_recompute() {
        let sys = tau2_seed_east();
        let mut asm = Assembly::seed_of(&sys);
        let mut fs = FrontierSet::full(&sys, &asm);
        while let Some(p) = fs.first().copied() {
            asm.apply(&sys, &p);
            fs.update_after(&sys, &asm, &p);
            let full = FrontierSet::full(&sys, &asm);
            let a: Vec<_> = fs.iter().copied().collect();
            let b: Vec<_> = full.iter().copied().collect();
            assert_eq!(a, b);
            if asm.len() > 4 {
                break;
            }
        }
    }
}
