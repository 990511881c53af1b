//! Emission of the τ=1 duple system: tile types, probe duples, and the
//! static seed assembly.
//!
//! Every emitted path tile binds its predecessor through a fresh strength-1
//! glue named after the predecessor type and direction, so programs are
//! deterministic chains. Cross-program bonds (launch tips to entries, climb
//! tops to approaches, lookup anchors to centers) use canonical labels both
//! sides derive independently.

use std::collections::{BTreeMap, BTreeSet};

use crate::compiler::classify::{dir_code, Classification, Genre, TypeInfo};
use crate::compiler::layout::{east_rail_cells, west_rail_cells, Layout, LANE};
use crate::error::{Error, Result};
use crate::geom::{Axis, Direction, Pos};
use crate::palindrome::CodeTable;
use crate::tile::{Glue, TileId, TileSystem};

pub struct Emitter<'a> {
    pub src: &'a TileSystem,
    pub cls: &'a Classification,
    pub layout: Layout,
    pub codes: &'a CodeTable,
    /// Fill every block solid after its program completes (strict
    /// self-assembly of the scaled shape, at a large tile-count cost).
    pub solid: bool,
    types: BTreeMap<String, crate::tile::TileType>,
    duples: Vec<(String, String, Axis)>,
    duple_halves: BTreeSet<String>,
    /// Static seed cells, block-relative per seed cell, assembled later.
    pub seed_cells: Vec<(Pos, String)>,
}

impl<'a> Emitter<'a> {
    pub fn new(
        src: &'a TileSystem,
        cls: &'a Classification,
        codes: &'a CodeTable,
    ) -> Emitter<'a> {
        Emitter {
            src,
            cls,
            layout: Layout::new(codes.code_len()),
            codes,
            solid: false,
            types: BTreeMap::new(),
            duples: Vec::new(),
            duple_halves: BTreeSet::new(),
            seed_cells: Vec::new(),
        }
    }

    /// Canonical universal edge label between two adjacent in-block cells.
    fn field_edge(a: Pos, b: Pos) -> String {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let o = if lo.x != hi.x { 'h' } else { 'v' };
        format!("F:{}:{}:{o}", lo.x, lo.y)
    }

    /// Universal field fillers: one type per non-reserved in-block cell,
    /// bonded only to other field cells. Programs trigger the field through
    /// their own faces; reserve fillers never touch it, so nothing
    /// type-specific can leak across blocks through the field.
    pub fn emit_field_fillers(&mut self) -> Result<()> {
        let m = self.layout.m;
        for x in 0..m {
            for y in 0..m {
                if self.layout.is_reserved(x, y) {
                    continue;
                }
                let p = Pos::new(x, y);
                let name = format!("f:{x}:{y}");
                self.ensure(&name);
                for d in Direction::ALL {
                    let q = p.neighbor(d);
                    if q.x < 0 || q.x >= m || q.y < 0 || q.y >= m {
                        continue;
                    }
                    if !self.layout.is_reserved(q.x, q.y) {
                        self.set_glue(&name, d, Glue::new(Self::field_edge(p, q), 1))?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Reserve fillers for one macro: a positional type per reserved cell the
    /// program leaves free, bonded to reserve neighbors and to the field, and
    /// triggered by the program's final tile. Nothing floods before the
    /// trigger because only the trigger and the (not yet reachable) field
    /// glues face these cells.
    fn emit_fill(
        &mut self,
        u: crate::tile::TileId,
        program_cells: &[(Pos, String)],
        final_tile: &str,
        trigger: (Pos, Pos),
    ) -> Result<()> {
        let m = self.layout.m;
        let uname = self.src.tile(u).name.clone();
        let used: BTreeSet<Pos> = program_cells
            .iter()
            .map(|(p, _)| *p)
            .filter(|p| p.x >= 0 && p.x < m && p.y >= 0 && p.y < m)
            .collect();
        for p in &used {
            if !self.layout.is_reserved(p.x, p.y) {
                return Err(Error::Precondition(format!(
                    "program cell {p} of {uname} lies in the open field"
                )));
            }
        }
        let fname = |p: Pos| format!("q:{uname}:{}:{}", p.x, p.y);
        let r_label = |a: Pos, b: Pos| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let o = if lo.x != hi.x { 'h' } else { 'v' };
            format!("Q:{uname}:{}:{}:{o}", lo.x, lo.y)
        };
        for x in 0..m {
            for y in 0..m {
                if !self.layout.is_reserved(x, y) {
                    continue;
                }
                let p = Pos::new(x, y);
                if used.contains(&p) {
                    continue;
                }
                let name = fname(p);
                self.ensure(&name);
                for d in Direction::ALL {
                    let q = p.neighbor(d);
                    if q.x < 0 || q.x >= m || q.y < 0 || q.y >= m {
                        continue;
                    }
                    if self.layout.is_reserved(q.x, q.y) && !used.contains(&q) {
                        self.set_glue(&name, d, Glue::new(r_label(p, q), 1))?;
                    }
                }
            }
        }
        // Crossing bonds: program tiles expose reserve-filler glues on their
        // free faces toward reserved non-zone cells, so the flood can pass
        // the program's walls. Zone cells (rows 0..=3) are excluded — they
        // fill only from the field above, after the read has resolved.
        for (pos, name) in program_cells {
            if pos.x < 0 || pos.x >= m || pos.y < 0 || pos.y >= m {
                continue;
            }
            for d in Direction::ALL {
                let q = pos.neighbor(d);
                if q.x < 0 || q.x >= m || q.y < 0 || q.y >= m || used.contains(&q) {
                    continue;
                }
                if self.layout.is_reserved(q.x, q.y) {
                    // Zone rows stay untouched; they fill from row 4 down
                    // after the read has resolved.
                    if q.y <= 3 {
                        continue;
                    }
                    if self.glue_is_null(name, d) {
                        let g = Glue::new(r_label(*pos, q), 1);
                        self.set_glue(name, d, g.clone())?;
                        self.set_glue(&fname(q), d.opposite(), g)?;
                    }
                } else if self.glue_is_null(name, d) {
                    let g = Glue::new(Self::field_edge(*pos, q), 1);
                    self.set_glue(name, d, g.clone())?;
                    self.set_glue(&format!("f:{}:{}", q.x, q.y), d.opposite(), g)?;
                }
            }
        }
        // Zone-row centers cap the cell beneath them (it can end up sealed
        // between the rails and the final anchors).
        if let Some((cpos, cname)) = program_cells
            .iter()
            .find(|(_, n)| n.starts_with("c:"))
            .cloned()
            .map(|(p, n)| (p, n))
        {
            let below = cpos + (0, -1);
            if cpos.y <= 3
                && below.y >= 0
                && !used.contains(&below)
                && self.glue_is_null(&cname, Direction::South)
            {
                let cap = format!("bc:{uname}");
                let label = format!("bc:{uname}>");
                self.set_glue(&cname, Direction::South, Glue::new(label.clone(), 1))?;
                self.set_glue(&cap, Direction::North, Glue::new(label, 1))?;
            }
        }
        // Trigger from the program's final tile.
        let (cpos, tpos) = trigger;
        let d = match tpos - cpos {
            (1, 0) => Direction::East,
            (-1, 0) => Direction::West,
            (0, 1) => Direction::North,
            (0, -1) => Direction::South,
            _ => {
                return Err(Error::Precondition(
                    "fill trigger must neighbor the final tile".into(),
                ))
            }
        };
        if used.contains(&tpos) {
            return Err(Error::Precondition(format!(
                "fill trigger cell {tpos} is a program cell for {uname}"
            )));
        }
        if self.glue_is_null(final_tile, d) {
            let label = format!("Ft:{uname}");
            self.set_glue(final_tile, d, Glue::new(label.clone(), 1))?;
            self.set_glue(&fname(tpos), d.opposite(), Glue::new(label, 1))?;
        }
        Ok(())
    }

    fn ensure(&mut self, name: &str) {
        if !self.types.contains_key(name) {
            self.types
                .insert(name.to_string(), crate::tile::TileType::new(name));
        }
    }

    fn glue_is_null(&self, name: &str, d: Direction) -> bool {
        self.types
            .get(name)
            .map_or(true, |t| t.glue(d).is_null())
    }

    fn set_glue(&mut self, name: &str, d: Direction, glue: Glue) -> Result<()> {
        self.ensure(name);
        let t = self.types.get_mut(name).unwrap();
        let slot = &mut t.glues[d.index()];
        if slot.is_null() {
            *slot = glue;
            Ok(())
        } else if *slot == glue {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "wiring conflict on {name} side {d:?}: {slot} vs {glue}"
            )))
        }
    }

    /// Bond `from` (at `from_pos`) to the adjacent `to` cell with a fresh
    /// strength-1 glue labeled after the source type and side.
    fn link(&mut self, from: &str, from_pos: Pos, to: &str, to_pos: Pos) -> Result<()> {
        let delta = to_pos - from_pos;
        let d = match delta {
            (1, 0) => Direction::East,
            (-1, 0) => Direction::West,
            (0, 1) => Direction::North,
            (0, -1) => Direction::South,
            _ => {
                return Err(Error::Precondition(format!(
                    "link {from}->{to} not adjacent ({from_pos} -> {to_pos})"
                )))
            }
        };
        let label = format!("{from}>{}", d.short());
        self.set_glue(from, d, Glue::new(label.clone(), 1))?;
        self.set_glue(to, d.opposite(), Glue::new(label, 1))
    }

    fn register_duple(&mut self, a: &str, b: &str, axis: Axis, internal_label: &str) -> Result<()> {
        let d = axis.toward_b();
        self.set_glue(a, d, Glue::new(internal_label, 1))?;
        self.set_glue(b, d.opposite(), Glue::new(internal_label, 1))?;
        self.duples.push((a.to_string(), b.to_string(), axis));
        self.duple_halves.insert(a.to_string());
        self.duple_halves.insert(b.to_string());
        Ok(())
    }

    /// Finish: build the compiled TileSystem plus representation markers.
    pub fn finish(self, seed: Vec<(Pos, String)>) -> Result<std::sync::Arc<TileSystem>> {
        let singletons: Vec<String> = self
            .types
            .keys()
            .filter(|n| !self.duple_halves.contains(*n))
            .cloned()
            .collect();
        let tiles: Vec<crate::tile::TileType> = self.types.into_values().collect();
        TileSystem::new(
            format!("{}@duple", self.src.name),
            tiles,
            singletons,
            self.duples,
            seed,
            1,
        )
    }
}

/// A chain of cells bound head-to-tail; asserts adjacency and per-program
/// cell uniqueness, and records positions for static instantiation.
pub struct Path<'e, 'a> {
    em: &'e mut Emitter<'a>,
    cursor: Option<(Pos, String)>,
    used: BTreeSet<Pos>,
    pub cells: Vec<(Pos, String)>,
}

impl<'e, 'a> Path<'e, 'a> {
    pub fn new(em: &'e mut Emitter<'a>) -> Self {
        Path {
            em,
            cursor: None,
            used: BTreeSet::new(),
            cells: Vec::new(),
        }
    }

    /// Place the first tile (bound externally by the caller).
    pub fn start(&mut self, pos: Pos, name: &str) -> Result<()> {
        self.em.ensure(name);
        self.record(pos, name)
    }

    /// Place the next tile, bonding it to the current cursor.
    pub fn step(&mut self, pos: Pos, name: &str) -> Result<()> {
        let (cpos, cname) = self
            .cursor
            .clone()
            .expect("step requires a cursor; call start first");
        self.em.link(&cname, cpos, name, pos)?;
        self.record(pos, name)
    }

    /// Walk one cell at a time to `target` along a straight line.
    pub fn walk(&mut self, target: Pos, namer: impl Fn(usize) -> String) -> Result<()> {
        let mut k = 0;
        loop {
            let (cpos, _) = self.cursor.clone().unwrap();
            if cpos == target {
                return Ok(());
            }
            let dx = (target.x - cpos.x).signum();
            let dy = if dx == 0 {
                (target.y - cpos.y).signum()
            } else {
                0
            };
            let next = cpos + (dx, dy);
            self.step(next, &namer(k))?;
            k += 1;
        }
    }

    /// Reposition the cursor onto an already-placed cell (forking).
    pub fn jump(&mut self, pos: Pos, name: &str) {
        self.cursor = Some((pos, name.to_string()));
    }

    fn record(&mut self, pos: Pos, name: &str) -> Result<()> {
        if !self.used.insert(pos) {
            return Err(Error::Precondition(format!(
                "program cell collision at {pos} placing {name}"
            )));
        }
        self.cells.push((pos, name.to_string()));
        self.cursor = Some((pos, name.to_string()));
        Ok(())
    }

    pub fn cursor_pos(&self) -> Pos {
        self.cursor.as_ref().unwrap().0
    }
}

fn bits_str(bits: &[bool]) -> String {
    bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

/// Canonical cross-program glue labels.
pub fn launch_label(d: Direction, glue: &Glue) -> String {
    format!("L:{}:{}:{}", d.short(), glue.label, glue.strength)
}
/// North handoffs happen at the launcher's service column, so the label must
/// carry it: entry variants for different columns would otherwise bind each
/// other's climbs.
pub fn north_launch_label(glue: &Glue, service_col: i32) -> String {
    format!("L:n:{}:{}:{}", glue.label, glue.strength, service_col)
}
fn h0_label(dirc: u8, gw: &Glue, prefix: &[bool]) -> String {
    format!("h0:{}:{}:{}", dirc, gw.label, bits_str(prefix))
}
fn h1_label(dirc: u8, gw: &Glue, prefix: &[bool]) -> String {
    format!("h1:{}:{}:{}", dirc, gw.label, bits_str(prefix))
}
fn center_name(src: &TileSystem, u: TileId) -> String {
    format!("c:{}", src.tile(u).name)
}
fn arrival_label(src: &TileSystem, u: TileId) -> String {
    format!("arr:{}", src.tile(u).name)
}

/// Trie over the code table: the set of valid prefixes at each depth.
pub fn prefixes_at(codes: &CodeTable, depth: usize) -> Vec<Vec<bool>> {
    let mut set: BTreeSet<Vec<bool>> = BTreeSet::new();
    for c in codes.iter() {
        set.insert(c.bits[..depth].to_vec());
    }
    set.into_iter().collect()
}

pub fn is_prefix(codes: &CodeTable, bits: &[bool]) -> bool {
    codes.iter().any(|c| c.bits.starts_with(bits))
}

impl<'a> Emitter<'a> {
    /// Emit the reader state machine for chain glue `gw` on rows growing in
    /// direction `dir` (East or West).
    pub fn emit_reader(&mut self, dir: Direction, gw: &Glue) -> Result<()> {
        let dirc = dir_code(dir);
        let l = self.layout;
        let east = dir == Direction::East;
        let pre = format!("r{}:{}", dirc, gw.label);

        // Entry: tip glue -> descend the edge column -> walk row 1 -> anchors.
        let (edge, step_in): (i32, i32) = if east { (0, 1) } else { (l.m - 1, -1) };
        let first_anchor = if east {
            l.east_cell(0).a
        } else {
            l.west_cell(self.layout.code_len - 1).a
        };
        let mut p = Path::new(self);
        p.start(Pos::new(edge, LANE), &format!("{pre}:in"))?;
        for (k, y) in (1..LANE).rev().enumerate() {
            p.step(Pos::new(edge, y), &format!("{pre}:d{k}"))?;
        }
        let mut k = 0;
        while p.cursor_pos().x != first_anchor - step_in {
            let next = Pos::new(p.cursor_pos().x + step_in, 1);
            p.step(next, &format!("{pre}:w{k}"))?;
            k += 1;
        }
        // Anchor pair for the empty prefix: a vertical duple placed as one
        // unit, so the probe choice is the only frontier entry afterwards.
        let walk_last = p.cells.last().unwrap().1.clone();
        drop(p);
        self.set_glue(
            &format!("{pre}:in"),
            if east { Direction::West } else { Direction::East },
            Glue::new(launch_label(dir, gw), 1),
        )?;
        let (lo, hi) = self.anchor_duple(dirc, gw, &[], "in")?;
        let bind = Glue::new(format!("{walk_last}>a"), 1);
        let walk_face = if east { Direction::East } else { Direction::West };
        self.set_glue(&walk_last, walk_face, bind.clone())?;
        self.set_glue(&lo, walk_face.opposite(), bind)?;
        let _ = hi;
        self.expose_anchor_glues(dirc, gw, &[], east)?;

        // Bit cells.
        let code_len = self.codes.code_len();
        for depth in 0..code_len {
            for prefix in prefixes_at(self.codes, depth) {
                self.emit_bit_cell(dir, gw, depth, &prefix)?;
            }
        }

        // Final lookups: centers bind the full-code anchors.
        for code in self.codes.iter().map(|c| c.bits.clone()).collect::<Vec<_>>() {
            let table = self
                .cls
                .coop_lookup
                .get(&(dirc, gw.clone()))
                .cloned()
                .unwrap_or_default();
            let Some(glue_code) = self.codes.decode(&code) else {
                continue;
            };
            if let Some(&u) = table.get(&glue_code.glue) {
                let cname = center_name(self.src, u);
                let bind_side = if east { Direction::West } else { Direction::East };
                self.set_glue(&cname, bind_side, Glue::new(h1_label(dirc, gw, &code), 1))?;
            }
        }
        Ok(())
    }

    /// The two halves of the anchor duple for a reader state; `variant`
    /// distinguishes the arrival wiring (entry walk, singleton branch, duple
    /// branch).
    fn anchor_duple(
        &mut self,
        dirc: u8,
        gw: &Glue,
        prefix: &[bool],
        variant: &str,
    ) -> Result<(String, String)> {
        let pb = bits_str(prefix);
        let lo = format!("rA:{dirc}:{}:{pb}:{variant}:lo", gw.label);
        let hi = format!("rA:{dirc}:{}:{pb}:{variant}:hi", gw.label);
        let internal = format!("rA:{dirc}:{}:{pb}:{variant}:i", gw.label);
        self.register_duple(&lo, &hi, Axis::NorthSouth, &internal)?;
        Ok((lo, hi))
    }

    fn expose_anchor_glues(&mut self, dirc: u8, gw: &Glue, prefix: &[bool], east: bool) -> Result<()> {
        // Every variant of the state's anchor exposes the same probe labels.
        let face = if east { Direction::East } else { Direction::West };
        let pb = bits_str(prefix);
        for variant in ["in", "s", "z"] {
            let lo = format!("rA:{dirc}:{}:{pb}:{variant}:lo", gw.label);
            let hi = format!("rA:{dirc}:{}:{pb}:{variant}:hi", gw.label);
            if self.types.contains_key(&lo) {
                self.set_glue(&lo, face, Glue::new(h0_label(dirc, gw, prefix), 1))?;
                self.set_glue(&hi, face, Glue::new(h1_label(dirc, gw, prefix), 1))?;
            }
        }
        Ok(())
    }

    /// One bit cell: probes and branch paths for `prefix` at `depth`.
    fn emit_bit_cell(
        &mut self,
        dir: Direction,
        gw: &Glue,
        depth: usize,
        prefix: &[bool],
    ) -> Result<()> {
        let dirc = dir_code(dir);
        let east = dir == Direction::East;
        let l = self.layout;
        let code_len = self.codes.code_len();
        let cell = if east {
            l.east_cell(depth)
        } else {
            l.west_cell(code_len - 1 - depth)
        };
        // Next anchor column (G1/G2 service column after the last cell).
        let next_a = if east {
            if depth + 1 < code_len {
                l.east_cell(depth + 1).a
            } else {
                l.g1()
            }
        } else if depth + 1 < code_len {
            l.west_cell(code_len - 1 - (depth + 1)).a
        } else {
            l.g2()
        };
        let pb = bits_str(prefix);
        let anchor_face = if east { Direction::East } else { Direction::West };

        // bit = 0: singleton probe and its climb over the blocker tower.
        let mut zero = prefix.to_vec();
        zero.push(false);
        if is_prefix(self.codes, &zero) {
            let s = format!("rS:{dirc}:{}:{pb}", gw.label);
            self.set_glue(
                &s,
                anchor_face.opposite(),
                Glue::new(h0_label(dirc, gw, prefix), 1),
            )?;
            let s6 = format!("rS:{dirc}:{}:{pb}:6", gw.label);
            let mut p = Path::new(self);
            p.start(Pos::new(cell.p, 1), &s)?;
            p.step(Pos::new(cell.p, 2), &format!("rS:{dirc}:{}:{pb}:2", gw.label))?;
            p.step(Pos::new(cell.p, 3), &format!("rS:{dirc}:{}:{pb}:3", gw.label))?;
            p.step(Pos::new(cell.b, 3), &format!("rS:{dirc}:{}:{pb}:4", gw.label))?;
            p.step(Pos::new(cell.q, 3), &format!("rS:{dirc}:{}:{pb}:5", gw.label))?;
            p.step(Pos::new(next_a, 3), &s6)?;
            drop(p);
            let (_lo, hi) = self.anchor_duple(dirc, gw, &zero, "s")?;
            let bind = Glue::new(format!("{s6}>a"), 1);
            self.set_glue(&s6, Direction::South, bind.clone())?;
            self.set_glue(&hi, Direction::North, bind)?;
            self.expose_anchor_glues(dirc, gw, &zero, east)?;
        }

        // bit = 1: the duple probe into the two-cell gap, then the spacer.
        let mut one = prefix.to_vec();
        one.push(true);
        if is_prefix(self.codes, &one) {
            let da = format!("rD:{dirc}:{}:{pb}:a", gw.label);
            let db = format!("rD:{dirc}:{}:{pb}:b", gw.label);
            // The half nearest the anchor binds it; the far half reaches the
            // blocker column. East: near half at cell.p (west member of the
            // pair); west: near half at cell.p (east member).
            let internal = format!("rD:{dirc}:{}:{pb}:i", gw.label);
            if east {
                self.set_glue(&da, Direction::West, Glue::new(h1_label(dirc, gw, prefix), 1))?;
                self.register_duple(&da, &db, Axis::EastWest, &internal)?;
            } else {
                // a-half west (at cell.b), b-half east (at cell.p).
                self.set_glue(&db, Direction::East, Glue::new(h1_label(dirc, gw, prefix), 1))?;
                self.register_duple(&da, &db, Axis::EastWest, &internal)?;
            }
            let far = format!("rZ:{dirc}:{}:{pb}", gw.label);
            let (far_cell, far_from, far_from_pos) = if east {
                (Pos::new(cell.q, 2), db.clone(), Pos::new(cell.b, 2))
            } else {
                (Pos::new(cell.q, 2), da.clone(), Pos::new(cell.b, 2))
            };
            self.link(&far_from, far_from_pos, &far, far_cell)?;
            let (_lo, hi) = self.anchor_duple(dirc, gw, &one, "z")?;
            let bind = Glue::new(format!("{far}>a"), 1);
            let zface = if east { Direction::East } else { Direction::West };
            self.set_glue(&far, zface, bind.clone())?;
            self.set_glue(&hi, zface.opposite(), bind)?;
            if self.solid {
                // The cell below the spacer tile is sealed by rails, the
                // landed duple, and the next anchor; cap it from above.
                let cap = format!("rZc:{dirc}:{}:{pb}", gw.label);
                let b2 = Glue::new(format!("{far}>s"), 1);
                self.set_glue(&far, Direction::South, b2.clone())?;
                self.set_glue(&cap, Direction::North, b2)?;
            }
            self.expose_anchor_glues(dirc, gw, &one, east)?;
        }
        Ok(())
    }

    /// Emit the macro body for source tile `u`: approach (if any), center,
    /// service climb, geometry, and launch. Returns the program cells for
    /// static instantiation (used by the seed).
    pub fn emit_body(&mut self, u: TileId, info: &TypeInfo) -> Result<Vec<(Pos, String)>> {
        let l = self.layout;
        let cname = center_name(self.src, u);
        let uname = self.src.tile(u).name.clone();
        let mut cells: Vec<(Pos, String)> = Vec::new();

        // 1. Approach and center position per genre.
        let (center_pos, service_col): (Pos, i32) = match info.genre {
            Genre::CoopEast => (Pos::new(l.g2(), 2), l.g2()),
            Genre::CoopWest => (Pos::new(l.g1(), 2), l.g1()),
            Genre::Seed => (Pos::new(l.g2(), 2), l.g2()),
            Genre::DirectEast => {
                // Walk the lane from the west edge; center sits on the lane.
                let g = self.src.tile(u).glue(Direction::West).clone();
                let mut p = Path::new(self);
                p.start(Pos::new(0, LANE), &format!("aE:{uname}:0"))?;
                let mut k = 1;
                while p.cursor_pos().x < l.a_center_east() - 1 {
                    let next = Pos::new(p.cursor_pos().x + 1, LANE);
                    p.step(next, &format!("aE:{uname}:{k}"))?;
                    k += 1;
                }
                p.step(Pos::new(l.a_center_east(), LANE), &cname)?;
                cells.extend(p.cells.clone());
                drop(p);
                self.set_glue(
                    &format!("aE:{uname}:0"),
                    Direction::West,
                    Glue::new(launch_label(Direction::East, &g), 1),
                )?;
                (Pos::new(l.a_center_east(), LANE), l.a_center_east())
            }
            Genre::DirectWest => {
                let g = self.src.tile(u).glue(Direction::East).clone();
                let mut p = Path::new(self);
                p.start(Pos::new(l.m - 1, LANE), &format!("aW:{uname}:0"))?;
                let mut k = 1;
                while p.cursor_pos().x > l.a_center_west() + 1 {
                    let next = Pos::new(p.cursor_pos().x - 1, LANE);
                    p.step(next, &format!("aW:{uname}:{k}"))?;
                    k += 1;
                }
                p.step(Pos::new(l.a_center_west(), LANE), &cname)?;
                cells.extend(p.cells.clone());
                drop(p);
                self.set_glue(
                    &format!("aW:{uname}:0"),
                    Direction::East,
                    Glue::new(launch_label(Direction::West, &g), 1),
                )?;
                (Pos::new(l.a_center_west(), LANE), l.a_center_west())
            }
            Genre::DirectNorth => {
                let g = self.src.tile(u).glue(Direction::South).clone();
                for &sc in &info.north_entry_cols {
                    let mut p = Path::new(self);
                    let first = format!("aN:{uname}:{sc}:0");
                    p.start(Pos::new(sc, 0), &first)?;
                    p.step(Pos::new(sc, 1), &format!("aN:{uname}:{sc}:1"))?;
                    let mut k = 2;
                    while p.cursor_pos().x != l.g2() {
                        let dx = (l.g2() - p.cursor_pos().x).signum();
                        let next = Pos::new(p.cursor_pos().x + dx, 1);
                        p.step(next, &format!("aN:{uname}:{sc}:{k}"))?;
                        k += 1;
                    }
                    // Expose the arrival glue upward for the shared center.
                    let last = p.cells.last().unwrap().1.clone();
                    cells.extend(p.cells.clone());
                    drop(p);
                    self.set_glue(&last, Direction::North, Glue::new(arrival_label(self.src, u), 1))?;
                    self.set_glue(&first, Direction::South, Glue::new(north_launch_label(&g, sc), 1))?;
                }
                self.set_glue(&cname, Direction::South, Glue::new(arrival_label(self.src, u), 1))?;
                cells.push((Pos::new(l.g2(), 2), cname.clone()));
                (Pos::new(l.g2(), 2), l.g2())
            }
        };
        self.ensure(&cname);
        if matches!(info.genre, Genre::CoopEast | Genre::CoopWest | Genre::Seed) {
            cells.push((center_pos, cname.clone()));
        }
        // Solid-mode trigger off the center, for programs that end there.
        let center_trigger: (Pos, Pos) = match info.genre {
            Genre::DirectNorth => (center_pos, center_pos + (1, 0)),
            _ => (center_pos, center_pos + (0, -1)),
        };

        // 2. Post-center: service climb with geometry and launch.
        let launch = info.launch.clone();
        let geometry = info.geometry.clone();
        let code_bits: Option<Vec<bool>> = match &geometry {
            Some(glue) => Some(
                self.codes
                    .for_glue(glue)
                    .ok_or_else(|| {
                        Error::Precondition(format!("no code for north glue {glue}"))
                    })?
                    .bits
                    .clone(),
            ),
            None => None,
        };
        let east_launch = launch.as_ref().map(|x| x.side) == Some(Direction::East);
        let west_launch = launch.as_ref().map(|x| x.side) == Some(Direction::West);
        let north_launch = launch.as_ref().map(|x| x.side) == Some(Direction::North);
        let solid = self.solid;

        let mut p = Path::new(self);
        p.start(center_pos, &cname)?;
        // Allow the中心 cell already counted once.
        let mut step_id = 0usize;
        let mut svc = |p: &mut Path, to: Pos| -> Result<()> {
            let name = format!("b:{uname}:{step_id}");
            step_id += 1;
            p.step(to, &name)
        };
        let top_row = l.m - 1;

        if geometry.is_none() && !north_launch {
            // Simple fork at the lane (or directly beside an on-lane center).
            if let Some(launch) = &launch {
                if center_pos.y != LANE {
                    for y in (center_pos.y + 1)..=LANE {
                        svc(&mut p, Pos::new(service_col, y))?;
                    }
                }
                let dx = if launch.side == Direction::East { 1 } else { -1 };
                let tip_x = if dx == 1 { l.m - 1 } else { 0 };
                while p.cursor_pos().x != tip_x {
                    let next = Pos::new(p.cursor_pos().x + dx, LANE);
                    svc(&mut p, next)?;
                }
                let tip = p.cells.last().unwrap().1.clone();
                let face = if dx == 1 { Direction::East } else { Direction::West };
                cells.extend(p.cells.iter().skip(1).cloned());
                drop(p);
                self.set_glue(&tip, face, Glue::new(launch_label(launch.side, &launch.glue), 1))?;
                if self.solid {
                    let tip_pos = Pos::new(tip_x, LANE);
                    self.emit_fill(u, &cells, &tip, (tip_pos, tip_pos + (0, -1)))?;
                }
                return Ok(cells);
            }
            drop(p);
            if self.solid {
                self.emit_fill(u, &cells, &cname, center_trigger)?;
            }
            return Ok(cells);
        }

        if north_launch {
            // Climb straight through the top into the neighbor above.
            for y in (center_pos.y + 1)..=top_row {
                svc(&mut p, Pos::new(service_col, y))?;
            }
            let top = p.cells.last().unwrap().1.clone();
            cells.extend(p.cells.iter().skip(1).cloned());
            drop(p);
            let g = launch.as_ref().unwrap().glue.clone();
            self.set_glue(
                &top,
                Direction::North,
                Glue::new(north_launch_label(&g, service_col), 1),
            )?;
            if self.solid {
                let top_pos = Pos::new(service_col, top_row);
                self.emit_fill(u, &cells, &top, (top_pos, top_pos + (-1, 0)))?;
            }
            return Ok(cells);
        }

        // Geometry (with optional E/W launch afterwards).
        let code_bits = code_bits.expect("geometry carries a coded glue");
        // Build flavor: west-launching macros run the serpent east-to-west so
        // the return ends at the west edge.
        let w_to_e = !west_launch;
        for y in (center_pos.y + 1)..=top_row {
            svc(&mut p, Pos::new(service_col, y))?;
        }
        let (serp_entry_x, walk_dx) = if w_to_e {
            (Layout::SERPENT_ENTRY_W, -1)
        } else {
            (l.serpent_entry_e(), 1)
        };
        while p.cursor_pos().x != serp_entry_x {
            let next = Pos::new(p.cursor_pos().x + walk_dx, top_row);
            svc(&mut p, next)?;
        }
        // Serpent in the block above (y offset m).
        serpent_into(&mut p, &code_bits, &uname, l, w_to_e)?;
        // Return descent toward the launch tip (or, in solid mode, a parked
        // end tile so the fill trigger has a home).
        if launch.is_some() || solid {
            let (edge, face) = if east_launch || launch.is_none() {
                (l.m - 1, Direction::East)
            } else {
                (0, Direction::West)
            };
            // Extend along the above row 0 to the edge column, then descend.
            while p.cursor_pos().x != edge {
                let dx = (edge - p.cursor_pos().x).signum();
                let next = Pos::new(p.cursor_pos().x + dx, l.m);
                svc(&mut p, next)?;
            }
            for y in (LANE..=(l.m - 1)).rev() {
                svc(&mut p, Pos::new(edge, y))?;
            }
            let tip = p.cells.last().unwrap().1.clone();
            cells.extend(p.cells.iter().skip(1).cloned());
            drop(p);
            if let Some(launch) = &launch {
                self.set_glue(&tip, face, Glue::new(launch_label(launch.side, &launch.glue), 1))?;
            }
            if self.solid {
                let tip_pos = Pos::new(edge, LANE);
                self.emit_fill(u, &cells, &tip, (tip_pos, tip_pos + (0, -1)))?;
            }
        } else {
            cells.extend(p.cells.iter().skip(1).cloned());
            drop(p);
        }
        Ok(cells)
    }

}

/// Serpent: lay both rails in the block above the cursor (which must sit
/// at the serpent entry column on the top row).
fn serpent_into(p: &mut Path<'_, '_>, code: &[bool], uname: &str, l: Layout, w_to_e: bool) -> Result<()> {
    {
        let m = l.m;
        let mut k = 0usize;
        let mut g = |p: &mut Path<'_, '_>, x: i32, y: i32| -> Result<()> {
            let name = format!("g:{uname}:{k}");
            k += 1;
            p.step(Pos::new(x, y + m), &name)
        };
        if w_to_e {
            // Entry cell, then east rail, gap columns, west rail, extension.
            g(p, 2, 0)?;
            for (j, bit) in code.iter().enumerate() {
                for (x, y) in east_rail_cells(l.east_cell(j), *bit) {
                    g(p, x, y)?;
                }
            }
            g(p, l.g1(), 0)?;
            g(p, l.g2(), 0)?;
            for (kk, bit) in code.iter().enumerate() {
                for (x, y) in west_rail_cells(l.west_cell(kk), *bit) {
                    g(p, x, y)?;
                }
            }
        } else {
            g(p, l.serpent_entry_e(), 0)?;
            for (kk, bit) in code.iter().enumerate().rev() {
                let cell = l.west_cell(kk);
                let mut route = west_rail_cells(cell, *bit);
                route.reverse();
                for (x, y) in route {
                    g(p, x, y)?;
                }
            }
            g(p, l.g2(), 0)?;
            g(p, l.g1(), 0)?;
            for (j, bit) in code.iter().enumerate().rev() {
                let mut route = east_rail_cells(l.east_cell(j), *bit);
                route.reverse();
                for (x, y) in route {
                    g(p, x, y)?;
                }
            }
        }
        Ok(())
    }
}
