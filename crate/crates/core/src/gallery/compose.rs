//! Composition of component systems into larger ones: namespacing of tile
//! names and glue labels, translation, and cross-component glue wiring.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{Axis, Direction, Pos};
use crate::tile::{Glue, TileSystem, TileType};

pub struct Composer {
    name: String,
    temperature: u32,
    tiles: BTreeMap<String, TileType>,
    singletons: Vec<String>,
    duples: Vec<(String, String, Axis)>,
    seed: Vec<(Pos, String)>,
}

impl Composer {
    pub fn new(name: impl Into<String>, temperature: u32) -> Composer {
        Composer {
            name: name.into(),
            temperature,
            tiles: BTreeMap::new(),
            singletons: Vec::new(),
            duples: Vec::new(),
            seed: Vec::new(),
        }
    }

    /// Add a whole system under a name prefix, its seed translated by
    /// `offset`. Glue labels are prefixed too, so components cannot interact
    /// unless explicitly wired. The component's seed cells are only added to
    /// the composed seed when `keep_seed` is set; otherwise the caller wires
    /// an entry glue so the component grows dynamically.
    pub fn add_system(
        &mut self,
        sys: &Arc<TileSystem>,
        prefix: &str,
        offset: (i32, i32),
        keep_seed: bool,
    ) -> Result<()> {
        let ns_glue = |g: &Glue| -> Glue {
            if g.is_null() {
                Glue::null()
            } else {
                Glue::new(format!("{prefix}{}", g.label), g.strength)
            }
        };
        for (_, t) in sys.tiles() {
            let mut nt = TileType::new(format!("{prefix}{}", t.name));
            for d in Direction::ALL {
                nt.glues[d.index()] = ns_glue(t.glue(d));
            }
            if self.tiles.insert(nt.name.clone(), nt).is_some() {
                return Err(Error::DuplicateTile(format!("{prefix}{}", t.name)));
            }
        }
        for id in sys.singleton_ids() {
            self.singletons.push(format!("{prefix}{}", sys.tile(id).name));
        }
        for (_, dt) in sys.duples() {
            self.duples.push((
                format!("{prefix}{}", sys.tile(dt.a).name),
                format!("{prefix}{}", sys.tile(dt.b).name),
                dt.axis,
            ));
        }
        if keep_seed {
            for (p, id) in sys.seed() {
                self.seed
                    .push((*p + offset, format!("{prefix}{}", sys.tile(*id).name)));
            }
        }
        Ok(())
    }

    pub fn add_tile(&mut self, t: TileType, singleton: bool) -> Result<()> {
        let name = t.name.clone();
        if self.tiles.insert(name.clone(), t).is_some() {
            return Err(Error::DuplicateTile(name));
        }
        if singleton {
            self.singletons.push(name);
        }
        Ok(())
    }

    /// Overwrite one glue slot of an already-added tile, for wiring
    /// components together. Fails if the slot holds a different glue already.
    pub fn wire(&mut self, tile: &str, d: Direction, glue: Glue) -> Result<()> {
        let t = self
            .tiles
            .get_mut(tile)
            .ok_or_else(|| Error::UnknownTile(tile.to_string()))?;
        let slot = &mut t.glues[d.index()];
        if !slot.is_null() && *slot != glue {
            return Err(Error::Precondition(format!(
                "wiring conflict on {tile} {d:?}: {slot} vs {glue}"
            )));
        }
        *slot = glue;
        Ok(())
    }

    pub fn add_duple(&mut self, a: impl Into<String>, b: impl Into<String>, axis: Axis) {
        self.duples.push((a.into(), b.into(), axis));
    }

    pub fn add_seed_cell(&mut self, pos: Pos, tile: impl Into<String>) {
        self.seed.push((pos, tile.into()));
    }

    pub fn build(self) -> Result<Arc<TileSystem>> {
        TileSystem::new(
            self.name,
            self.tiles.into_values().collect(),
            self.singletons,
            self.duples,
            self.seed,
            self.temperature,
        )
    }
}
