//! Windows (edge cut-sets), window movies, sequence splicing, pumping, and
//! row duplings.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::assembly::{Assembly, Placement};
use crate::engine::AssemblySequence;
use crate::error::{Error, Result};
use crate::geom::{Direction, Pos, Shape};
use crate::tile::{Glue, TileSystem};

/// A closed rectangular window: the cut separating the cells of
/// `[origin.x, origin.x+width) × [origin.y, origin.y+height)` from the rest
/// of the grid.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RectWindow {
    pub origin: Pos,
    pub width: i32,
    pub height: i32,
}

impl RectWindow {
    pub fn contains(&self, p: Pos) -> bool {
        p.x >= self.origin.x
            && p.x < self.origin.x + self.width
            && p.y >= self.origin.y
            && p.y < self.origin.y + self.height
    }

    pub fn top(&self) -> i32 {
        self.origin.y + self.height
    }
}

/// A window: a set of edges forming a cut in the grid graph. Carries the
/// rectangle descriptor when it is a closed rectangular window.
#[derive(Clone, Debug)]
pub struct Window {
    /// Normalized edges (cell, neighbor) with cell < neighbor.
    edges: BTreeSet<(Pos, Pos)>,
    pub rect: Option<RectWindow>,
}

fn norm_edge(a: Pos, b: Pos) -> (Pos, Pos) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Window {
    pub fn from_edges<I: IntoIterator<Item = (Pos, Pos)>>(edges: I) -> Window {
        Window {
            edges: edges.into_iter().map(|(a, b)| norm_edge(a, b)).collect(),
            rect: None,
        }
    }

    pub fn closed_rect(origin: Pos, width: i32, height: i32) -> Window {
        assert!(width >= 1 && height >= 1);
        let rect = RectWindow {
            origin,
            width,
            height,
        };
        let mut edges = BTreeSet::new();
        for x in origin.x..origin.x + width {
            edges.insert(norm_edge(Pos::new(x, origin.y), Pos::new(x, origin.y - 1)));
            edges.insert(norm_edge(
                Pos::new(x, origin.y + height - 1),
                Pos::new(x, origin.y + height),
            ));
        }
        for y in origin.y..origin.y + height {
            edges.insert(norm_edge(Pos::new(origin.x, y), Pos::new(origin.x - 1, y)));
            edges.insert(norm_edge(
                Pos::new(origin.x + width - 1, y),
                Pos::new(origin.x + width, y),
            ));
        }
        Window {
            edges,
            rect: Some(rect),
        }
    }

    pub fn crosses(&self, a: Pos, b: Pos) -> bool {
        self.edges.contains(&norm_edge(a, b))
    }

    pub fn translated(&self, c: (i32, i32)) -> Window {
        Window {
            edges: self
                .edges
                .iter()
                .map(|(a, b)| (*a + c, *b + c))
                .collect(),
            rect: self.rect.map(|r| RectWindow {
                origin: r.origin + c,
                ..r
            }),
        }
    }

    /// T^h_c: resize the height keeping the top edge fixed, then translate.
    /// Requires the closed-rectangle descriptor.
    pub fn transform(&self, h: i32, c: (i32, i32)) -> Result<Window> {
        let rect = self.rect.ok_or(Error::UnsupportedWindow)?;
        if h < 1 {
            return Err(Error::UnsupportedWindow);
        }
        let origin = Pos::new(rect.origin.x, rect.top() - h);
        Ok(Window::closed_rect(origin, rect.width, h).translated(c))
    }
}

/// One glue crossing of a window. Crossings of the same placement share a
/// simultaneity group (the step index) and are listed in lexicographic order
/// of their orientation unit vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MovieEntry {
    pub pos: Pos,
    pub glue: Glue,
    pub orient: Direction,
    pub step: usize,
    /// Whether the glue actually bonded at placement time (the cell across
    /// the window held a matching glue). Used by the experimental
    /// bond-forming submovie filter.
    pub bonded: bool,
}

#[derive(Clone, Debug, Default)]
pub struct WindowMovie {
    pub entries: Vec<MovieEntry>,
}

impl WindowMovie {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Groups of simultaneous crossings, in order.
    pub fn groups(&self) -> Vec<&[MovieEntry]> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.entries.len() {
            if i == self.entries.len() || self.entries[i].step != self.entries[start].step {
                out.push(&self.entries[start..i]);
                start = i;
            }
        }
        out
    }

    /// Equality modulo translation, with step indices erased. Group
    /// boundaries must align.
    pub fn matches(&self, other: &WindowMovie, offset: (i32, i32)) -> bool {
        let a = self.groups();
        let b = other.groups();
        if a.len() != b.len() {
            return false;
        }
        a.iter().zip(b.iter()).all(|(ga, gb)| {
            ga.len() == gb.len()
                && ga.iter().zip(gb.iter()).all(|(x, y)| {
                    x.pos + offset == y.pos && x.glue == y.glue && x.orient == y.orient
                })
        })
    }

    /// Experimental: the bond-forming submovie (crossings that bound).
    pub fn bond_forming(&self) -> WindowMovie {
        WindowMovie {
            entries: self.entries.iter().filter(|e| e.bonded).cloned().collect(),
        }
    }
}

/// All glue crossings of `w` during `seq`, in placement order; each
/// placement's crossings form one simultaneity group sorted by unit vector.
pub fn extract_movie(seq: &AssemblySequence, w: &Window) -> WindowMovie {
    let sys = &seq.system;
    let mut entries = Vec::new();
    // Seed crossings count as step 0, placement steps as 1 + index.
    let seed = Assembly::seed_of(sys);
    let mut group = Vec::new();
    for (pos, cell) in seed.iter() {
        collect_crossings(sys, &seed, pos, cell.tile, w, 0, &mut group);
    }
    sort_group(&mut group);
    entries.extend(group);
    seq.transitions().for_each(|i, _before, p, after| {
        let mut group = Vec::new();
        for (pos, tile) in p.cells(sys) {
            collect_crossings(sys, after, pos, tile, w, i + 1, &mut group);
        }
        sort_group(&mut group);
        entries.extend(group);
    });
    WindowMovie { entries }
}

fn collect_crossings(
    sys: &TileSystem,
    asm: &Assembly,
    pos: Pos,
    tile: crate::tile::TileId,
    w: &Window,
    step: usize,
    out: &mut Vec<MovieEntry>,
) {
    for d in Direction::ALL {
        let np = pos.neighbor(d);
        if !w.crosses(pos, np) {
            continue;
        }
        let g = sys.tile(tile).glue(d);
        if g.strength == 0 {
            continue;
        }
        let bonded = asm
            .get(np)
            .is_some_and(|nc| g.interacts(sys.tile(nc.tile).glue(d.opposite())));
        out.push(MovieEntry {
            pos,
            glue: g.clone(),
            orient: d,
            step,
            bonded,
        });
    }
}

fn sort_group(group: &mut [MovieEntry]) {
    group.sort_by_key(|e| (e.orient.unit_vector_rank(), e.pos));
}

/// Result of a splice: the engine-validated sequence, and whether the merge
/// ran to completion or stopped at a collision/invalid step.
pub struct SpliceOutcome {
    pub sequence: AssemblySequence,
    pub complete: bool,
    /// Set when validation stopped the merge: (index in the merged list,
    /// the offending placement description).
    pub failure: Option<(usize, String)>,
}

/// Splice per the window movie machinery: keep `seq_a`'s placements outside
/// `w` (the side holding the seed) and `seq_b`'s placements inside `w'`,
/// translated back by the offset relating the two windows. Both windows must
/// be closed rectangles over the same system, with matching movies.
///
/// Every merged step is validated against the frontier; the merge stops at
/// the first invalid step, returning the partial sequence (that stop is the
/// collision case of the crash corollary, not an internal error).
pub fn splice(
    seq_a: &AssemblySequence,
    seq_b: &AssemblySequence,
    w: &Window,
    w_prime: &Window,
) -> Result<SpliceOutcome> {
    let sys: &Arc<TileSystem> = &seq_a.system;
    let ra = w.rect.ok_or(Error::UnsupportedWindow)?;
    let rb = w_prime.rect.ok_or(Error::UnsupportedWindow)?;
    if ra.width != rb.width {
        return Err(Error::UnsupportedWindow);
    }
    // Translation carrying w' onto w (top edges aligned).
    let c = (
        ra.origin.x - rb.origin.x,
        ra.top() - rb.top(),
    );
    let movie_a = extract_movie(seq_a, w);
    let movie_b = extract_movie(seq_b, w_prime);
    if !movie_b.matches(&movie_a, c) {
        return Err(Error::MovieMismatch);
    }

    // Membership: interior of the output = inside w' translated by c;
    // exterior = a's placements all of whose cells lie outside w's interior.
    let inside_b = |p: Pos| rb.contains(p);
    let inside_a = |p: Pos| ra.contains(p);

    let mut merged: Vec<Placement> = Vec::new();
    let mut occupied: BTreeSet<Pos> = Assembly::seed_of(sys).domain().collect();
    let mut push = |pl: Placement, merged: &mut Vec<Placement>, occupied: &mut BTreeSet<Pos>| {
        let cells = pl.positions(sys);
        if cells.iter().all(|c| occupied.contains(c)) {
            return; // already placed (straddling duple emitted once)
        }
        occupied.extend(cells);
        merged.push(pl);
    };

    // Movie-driven lossy merge: exterior placements from a, interior from b
    // (translated), ordered by the shared movie.
    let a_steps = &seq_a.placements;
    let b_steps = &seq_b.placements;
    let groups = movie_a.groups();
    let mut i = 0usize;
    let mut j = 0usize;
    for g in &groups {
        // Movie events at step 0 come from the seed; nothing to emit.
        let probe = g[0].pos;
        if !inside_a(probe) {
            // Exterior event: drain a's exterior steps up to and including
            // the placement that produced this crossing.
            while i < a_steps.len() {
                let pl = a_steps[i];
                i += 1;
                let cells = pl.positions(sys);
                let is_event = cells.contains(&probe);
                if cells.iter().any(|c| !inside_a(*c)) {
                    push(pl, &mut merged, &mut occupied);
                }
                if is_event {
                    break;
                }
            }
        } else {
            // Interior event: drain b's interior steps (translated) up to the
            // matching crossing (probe - c in b's frame).
            let probe_b = probe + (-c.0, -c.1);
            while j < b_steps.len() {
                let pl = b_steps[j];
                j += 1;
                let cells = pl.positions(sys);
                let is_event = cells.contains(&probe_b);
                if cells.iter().any(|p| inside_b(*p)) {
                    push(translate_placement(sys, pl, c), &mut merged, &mut occupied);
                }
                if is_event {
                    break;
                }
            }
        }
    }
    // Movie exhausted: drain the remaining exterior-of-a and interior-of-b.
    while i < a_steps.len() {
        let pl = a_steps[i];
        i += 1;
        if pl.positions(sys).iter().any(|p| !inside_a(*p)) {
            push(pl, &mut merged, &mut occupied);
        }
    }
    while j < b_steps.len() {
        let pl = b_steps[j];
        j += 1;
        if pl.positions(sys).iter().any(|p| inside_b(*p)) {
            push(translate_placement(sys, pl, c), &mut merged, &mut occupied);
        }
    }

    // Eager engine validation; stop at the first invalid step.
    let mut asm = Assembly::seed_of(sys);
    let mut valid: Vec<Placement> = Vec::new();
    let mut failure = None;
    for (k, pl) in merged.iter().enumerate() {
        match crate::frontier::validate_placement(sys, &asm, pl) {
            Ok(()) => {
                asm.apply_public(sys, pl);
                valid.push(*pl);
            }
            Err(e) => {
                failure = Some((k, format!("{}: {e}", pl.describe(sys))));
                break;
            }
        }
    }
    let complete = failure.is_none();
    let sequence = AssemblySequence::from_placements(sys.clone(), valid)?;
    Ok(SpliceOutcome {
        sequence,
        complete,
        failure,
    })
}

fn translate_placement(sys: &TileSystem, pl: Placement, c: (i32, i32)) -> Placement {
    let _ = sys;
    match pl {
        Placement::Singleton { pos, tile } => Placement::Singleton {
            pos: pos + c,
            tile,
        },
        Placement::Duple { duple, a_pos } => Placement::Duple {
            duple,
            a_pos: a_pos + c,
        },
    }
}

/// All pairs of family windows whose movies agree under the translation
/// aligning their rectangles.
pub fn find_matching_windows(
    seq: &AssemblySequence,
    family: &[Window],
) -> Vec<(usize, usize, (i32, i32))> {
    let movies: Vec<WindowMovie> = family.iter().map(|w| extract_movie(seq, w)).collect();
    let mut out = Vec::new();
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let offset = match (family[i].rect, family[j].rect) {
                (Some(ri), Some(rj)) => (rj.origin.x - ri.origin.x, rj.top() - ri.top()),
                _ => (0, 0),
            };
            if movies[i].matches(&movies[j], offset) {
                out.push((i, j, offset));
            }
        }
    }
    out
}

/// Result of a pumping attempt.
pub struct PumpOutcome {
    pub sequence: AssemblySequence,
    /// The repeated tile type and the segment offset applied per period.
    pub repeat: Option<(String, (i32, i32))>,
    /// Periods appended before validation stopped or the cap was reached.
    pub periods: usize,
    /// True if any pumped cell left the target shape.
    pub escaped: Option<bool>,
}

/// Find a repeated tile type along a single-tile-wide path and extend the
/// sequence by replaying the segment between the repetitions, translated by
/// its offset, until a step fails validation or `max_periods` is reached.
pub fn pump_path(
    seq: &AssemblySequence,
    path_cells: &[Pos],
    target: Option<&Shape>,
    max_periods: usize,
) -> Result<PumpOutcome> {
    let sys = &seq.system;
    let result = seq.result();
    // First repetition of a tile type along the path.
    let mut seen: std::collections::HashMap<crate::tile::TileId, usize> =
        std::collections::HashMap::new();
    let mut rep: Option<(usize, usize)> = None;
    for (k, p) in path_cells.iter().enumerate() {
        let Some(cell) = result.get(*p) else {
            return Err(Error::Precondition(format!("path cell {p} is empty")));
        };
        if let Some(&first) = seen.get(&cell.tile) {
            rep = Some((first, k));
            break;
        }
        seen.insert(cell.tile, k);
    }
    let Some((first, second)) = rep else {
        return Ok(PumpOutcome {
            sequence: seq.clone(),
            repeat: None,
            periods: 0,
            escaped: None,
        });
    };
    let offset = path_cells[second] - path_cells[first];
    // One period's worth of placements: those whose earliest path cell lies
    // strictly after the first occurrence and up to the second.
    let segment: BTreeSet<Pos> = path_cells[first + 1..=second].iter().copied().collect();
    let earlier: BTreeSet<Pos> = path_cells[..=first].iter().copied().collect();
    let mut seg_indices: Vec<usize> = Vec::new();
    for (i, pl) in seq.placements.iter().enumerate() {
        let cells = pl.positions(sys);
        if cells.iter().any(|c| segment.contains(c)) && !cells.iter().any(|c| earlier.contains(c))
        {
            seg_indices.push(i);
        }
    }
    let seg_placements: Vec<Placement> =
        seg_indices.iter().map(|&i| seq.placements[i]).collect();
    // Rebase on the prefix that ends with the segment: the pumped sequence
    // repeats from there, dropping the original continuation.
    let cut = seg_indices.iter().copied().max().map_or(0, |i| i + 1);
    let mut placements: Vec<Placement> = seq.placements[..cut].to_vec();
    let mut asm = Assembly::seed_of(sys);
    for pl in &placements {
        asm.apply_public(sys, pl);
    }
    let mut periods = 0usize;
    'outer: for k in 1..=max_periods {
        let shift = (offset.0 * k as i32, offset.1 * k as i32);
        for pl in &seg_placements {
            let moved = translate_placement(sys, *pl, shift);
            if crate::frontier::validate_placement(sys, &asm, &moved).is_err() {
                break 'outer;
            }
            asm.apply_public(sys, &moved);
            placements.push(moved);
        }
        periods = k;
    }
    let escaped = target.map(|t| asm.domain().any(|p| !t.contains(p)));
    let sequence = AssemblySequence::from_placements(sys.clone(), placements)?;
    Ok(PumpOutcome {
        sequence,
        repeat: Some((
            sys.tile(result.get(path_cells[first]).unwrap().tile).name.clone(),
            offset,
        )),
        periods,
        escaped,
    })
}

/// One footprint of an ordered dupling: the cells a placement contributed,
/// with its type names.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DuplingEntry {
    /// Footprint southwest corner relative to the row's leftmost occupied
    /// cell, plus width/height (1x1, 2x1 or 1x2).
    pub offset: (i32, i32),
    pub width: i32,
    pub height: i32,
    pub types: Vec<String>,
}

/// The ordered dupling of a row: footprints intersecting it, in placement
/// order, offsets normalized to the row's leftmost occupied cell.
pub fn row_dupling_signature(seq: &AssemblySequence, row: i32) -> Vec<DuplingEntry> {
    let sys = &seq.system;
    let result = seq.result();
    let base_x = result
        .domain()
        .filter(|p| p.y == row)
        .map(|p| p.x)
        .min()
        .unwrap_or(0);
    let mut out = Vec::new();
    // Seed cells intersecting the row come first.
    let seed = Assembly::seed_of(sys);
    let mut seed_cells: Vec<(Pos, crate::tile::TileId)> = seed
        .iter()
        .filter(|(p, _)| p.y == row)
        .map(|(p, c)| (p, c.tile))
        .collect();
    seed_cells.sort_by_key(|(p, _)| *p);
    for (p, t) in seed_cells {
        out.push(DuplingEntry {
            offset: (p.x - base_x, 0),
            width: 1,
            height: 1,
            types: vec![sys.tile(t).name.clone()],
        });
    }
    for pl in &seq.placements {
        let cells = pl.cells(sys);
        if !cells.iter().any(|(p, _)| p.y == row) {
            continue;
        }
        let min_x = cells.iter().map(|(p, _)| p.x).min().unwrap();
        let min_y = cells.iter().map(|(p, _)| p.y).min().unwrap();
        let max_x = cells.iter().map(|(p, _)| p.x).max().unwrap();
        let max_y = cells.iter().map(|(p, _)| p.y).max().unwrap();
        out.push(DuplingEntry {
            offset: (min_x - base_x, min_y - row),
            width: max_x - min_x + 1,
            height: max_y - min_y + 1,
            types: cells.iter().map(|(_, t)| sys.tile(*t).name.clone()).collect(),
        });
    }
    out
}
