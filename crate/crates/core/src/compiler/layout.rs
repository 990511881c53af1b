//! Macrotile block layout.
//!
//! Each simulated cell becomes an m×m block, m = 8·code_len + 8. Columns
//! (west to east): margin 0..=2, the east-read rail (one 4-column cell per
//! code bit), two shared service columns G1/G2, the west-read rail (mirrored
//! cells), margin. The layout is symmetric under x ↦ m−1−x, which maps the
//! east rail onto the west rail and G1 onto G2; west-growing rows use the
//! mirror image of every east-growing route.
//!
//! Rows: rails and reader branches stay in rows 0..=3; row 7 is the transit
//! lane for east/west handoffs between macrotiles; row 8 carries the
//! geometry-builder's return path; the columns G1/G2 (and the A-genre margin
//! columns) climb through the upper rows to reach north neighbors and the
//! north-geometry walk along row m−1.

/// One rail cell's four columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RailCell {
    /// Anchor column (reader chain holds its two anchor tiles here).
    pub a: i32,
    /// Probe column: the singleton probe targets (p, 1); short/tall pillars
    /// here encode the bit.
    pub p: i32,
    /// Blocker column: the duple's far half targets (b, 2); the bit-0 tower
    /// stands here.
    pub b: i32,
    /// Spacer column the branch paths use to rejoin the next anchor column.
    pub q: i32,
}

#[derive(Clone, Copy, Debug)]
pub struct Layout {
    /// Palindrome length (2·half_bits).
    pub code_len: usize,
    /// Block side.
    pub m: i32,
}

/// Transit lane row for east/west launches.
pub const LANE: i32 = 7;
/// Geometry-builder return row.
pub const RETURN_ROW: i32 = 8;

impl Layout {
    pub fn new(code_len: usize) -> Layout {
        let m = 8 * code_len as i32 + 8;
        // Rows 0..=8 must fit below the upper field.
        debug_assert!(m >= 12);
        Layout { code_len, m }
    }

    pub fn mirror_x(&self, x: i32) -> i32 {
        self.m - 1 - x
    }

    /// East-rail cell j (read by east-growing readers, j in reading order
    /// west→east).
    pub fn east_cell(&self, j: usize) -> RailCell {
        let base = 3 + 4 * j as i32;
        RailCell {
            a: base,
            p: base + 1,
            b: base + 2,
            q: base + 3,
        }
    }

    /// West-rail cell k. Column order within the cell is mirrored: the
    /// anchor column lies east of the probe column. `k` indexes cells west to
    /// east; the west reader visits k = code_len−1 first.
    pub fn west_cell(&self, k: usize) -> RailCell {
        let e = self.east_cell(self.code_len - 1 - k);
        RailCell {
            a: self.mirror_x(e.a),
            p: self.mirror_x(e.p),
            b: self.mirror_x(e.b),
            q: self.mirror_x(e.q),
        }
    }

    /// Service column for west-growing readers' centers and climbs.
    pub fn g1(&self) -> i32 {
        3 + 4 * self.code_len as i32
    }

    /// Service column for east-growing readers' centers and climbs.
    pub fn g2(&self) -> i32 {
        self.g1() + 1
    }

    /// Serpent entry column in the block above (west flavor).
    pub const SERPENT_ENTRY_W: i32 = 2;

    /// Serpent entry column for the east→west flavor.
    pub fn serpent_entry_e(&self) -> i32 {
        self.mirror_x(Self::SERPENT_ENTRY_W)
    }

    /// A-genre center column for east entries (one west of the east edge).
    pub fn a_center_east(&self) -> i32 {
        self.m - 2
    }

    /// A-genre center column for west entries.
    pub fn a_center_west(&self) -> i32 {
        1
    }
}

impl Layout {
    /// Cells reserved for programs, readers, rails, lanes and returns: the
    /// rail zone rows, the transit lane, the top row, and the margin/service
    /// columns. Solid-mode field fillers stay out of these; per-type reserve
    /// fillers cover whatever a given macro's program leaves free, triggered
    /// only once the program completes.
    pub fn is_reserved(&self, x: i32, y: i32) -> bool {
        matches!(y, 0..=4 | 7) || y == self.m - 1
            || matches!(x, 0..=2)
            || x == self.g1()
            || x == self.g2()
            || x >= self.m - 3
    }
}

/// Occupied cells a geometry serpent leaves in one east-rail cell, by bit.
/// Identical for both build flavors.
pub fn east_rail_cells(cell: RailCell, bit: bool) -> Vec<(i32, i32)> {
    if bit {
        vec![
            (cell.a, 0),
            (cell.p, 0),
            (cell.p, 1),
            (cell.b, 1),
            (cell.b, 0),
            (cell.q, 0),
        ]
    } else {
        vec![
            (cell.a, 0),
            (cell.p, 0),
            (cell.b, 0),
            (cell.b, 1),
            (cell.b, 2),
            (cell.q, 2),
            (cell.q, 1),
            (cell.q, 0),
        ]
    }
}

/// Same for one west-rail cell; the columns inside the cell are mirrored, so
/// the roles of p/q swap sides relative to the anchor.
pub fn west_rail_cells(cell: RailCell, bit: bool) -> Vec<(i32, i32)> {
    if bit {
        vec![
            (cell.q, 0),
            (cell.b, 0),
            (cell.b, 1),
            (cell.p, 1),
            (cell.p, 0),
            (cell.a, 0),
        ]
    } else {
        vec![
            (cell.q, 0),
            (cell.q, 1),
            (cell.q, 2),
            (cell.b, 2),
            (cell.b, 1),
            (cell.b, 0),
            (cell.p, 0),
            (cell.a, 0),
        ]
    }
}

/// The two probe sites of a rail cell, for tests and the gadget API:
/// the singleton lands at `singleton`, the duple occupies `duple` (probe half
/// first, far half second).
#[derive(Clone, Copy, Debug)]
pub struct ProbeSites {
    pub singleton: (i32, i32),
    pub duple: [(i32, i32); 2],
}

pub fn east_probe_sites(cell: RailCell) -> ProbeSites {
    ProbeSites {
        singleton: (cell.p, 1),
        duple: [(cell.p, 2), (cell.b, 2)],
    }
}

pub fn west_probe_sites(cell: RailCell) -> ProbeSites {
    ProbeSites {
        singleton: (cell.p, 1),
        duple: [(cell.p, 2), (cell.b, 2)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_symmetry() {
        let l = Layout::new(4);
        assert_eq!(l.m, 40);
        assert_eq!(l.mirror_x(l.g1()), l.g2());
        for j in 0..4 {
            let e = l.east_cell(j);
            let w = l.west_cell(4 - 1 - j);
            assert_eq!(l.mirror_x(e.a), w.a);
            assert_eq!(l.mirror_x(e.p), w.p);
            assert_eq!(l.mirror_x(e.b), w.b);
            assert_eq!(l.mirror_x(e.q), w.q);
        }
    }

    #[test]
    fn rails_fit_between_margins() {
        for len in [2usize, 4, 6, 8] {
            let l = Layout::new(len);
            let last_east = l.east_cell(len - 1);
            assert!(last_east.q < l.g1());
            let first_west = l.west_cell(0);
            assert!(first_west.q > l.g2());
            let last_west = l.west_cell(len - 1);
            assert!(last_west.a <= l.m - 3);
        }
    }

    #[test]
    fn blocking_cells_match_probe_sites() {
        let l = Layout::new(2);
        let c = l.east_cell(0);
        let sites = east_probe_sites(c);
        let zero: Vec<_> = east_rail_cells(c, false);
        let one: Vec<_> = east_rail_cells(c, true);
        // bit=1 occupies the singleton site and frees the duple cells.
        assert!(one.contains(&sites.singleton));
        assert!(!one.contains(&sites.duple[0]) && !one.contains(&sites.duple[1]));
        // bit=0 frees the singleton site and blocks the duple's far half.
        assert!(!zero.contains(&sites.singleton));
        assert!(zero.contains(&sites.duple[1]));
        assert!(!zero.contains(&sites.duple[0]));
    }
}
