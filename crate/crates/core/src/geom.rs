//! Grid geometry: positions on Z², the four cardinal directions, duple axes,
//! and shapes (finite sets of positions).

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// A lattice position. `x` grows east, `y` grows north.
///
/// Ordering is row-major from the south: `(y, x)` lexicographic. Every
/// deterministic iteration in the crate (frontier order, canonical keys,
/// renderers) leans on this.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pos {
    pub x: i32,
    pub y: i32,
}

impl Pos {
    pub const fn new(x: i32, y: i32) -> Self {
        Pos { x, y }
    }

    pub fn neighbor(self, d: Direction) -> Pos {
        self + d.offset()
    }

    pub fn neighbors(self) -> [Pos; 4] {
        Direction::ALL.map(|d| self.neighbor(d))
    }

    pub fn manhattan(self, other: Pos) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }
}

impl Ord for Pos {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Pos {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<(i32, i32)> for Pos {
    type Output = Pos;
    fn add(self, (dx, dy): (i32, i32)) -> Pos {
        Pos::new(self.x + dx, self.y + dy)
    }
}

impl Sub for Pos {
    type Output = (i32, i32);
    fn sub(self, other: Pos) -> (i32, i32) {
        (self.x - other.x, self.y - other.y)
    }
}

impl fmt::Debug for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// One of the four sides of a tile, with its unit vector in Z².
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Direction {
    North,
    South,
    East,
    West,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::South,
        Direction::East,
        Direction::West,
    ];

    pub const fn offset(self) -> (i32, i32) {
        match self {
            Direction::North => (0, 1),
            Direction::South => (0, -1),
            Direction::East => (1, 0),
            Direction::West => (-1, 0),
        }
    }

    pub const fn opposite(self) -> Direction {
        match self {
            Direction::North => Direction::South,
            Direction::South => Direction::North,
            Direction::East => Direction::West,
            Direction::West => Direction::East,
        }
    }

    /// Index into per-side arrays; fixed order N, S, E, W.
    pub const fn index(self) -> usize {
        match self {
            Direction::North => 0,
            Direction::South => 1,
            Direction::East => 2,
            Direction::West => 3,
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Direction::North => "n",
            Direction::South => "s",
            Direction::East => "e",
            Direction::West => "w",
        }
    }

    /// Lexicographic rank of the unit vector as an integer pair:
    /// (-1,0) < (0,-1) < (0,1) < (1,0).
    pub fn unit_vector_rank(self) -> u8 {
        match self {
            Direction::West => 0,
            Direction::South => 1,
            Direction::North => 2,
            Direction::East => 3,
        }
    }

    /// Rotate a quarter turn counterclockwise (E -> N -> W -> S -> E).
    pub const fn rotate_ccw(self) -> Direction {
        match self {
            Direction::East => Direction::North,
            Direction::North => Direction::West,
            Direction::West => Direction::South,
            Direction::South => Direction::East,
        }
    }
}

/// Orientation of a duple: `EastWest` puts the second tile east of the first,
/// `NorthSouth` puts it north.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Axis {
    EastWest,
    NorthSouth,
}

impl Axis {
    /// Direction from the `a` half toward the `b` half.
    pub const fn toward_b(self) -> Direction {
        match self {
            Axis::EastWest => Direction::East,
            Axis::NorthSouth => Direction::North,
        }
    }
}

/// A set of positions in Z². Equality is set equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Shape {
    cells: BTreeSet<Pos>,
}

impl Shape {
    pub fn new() -> Self {
        Shape::default()
    }

    pub fn from_cells<I: IntoIterator<Item = Pos>>(cells: I) -> Self {
        Shape {
            cells: cells.into_iter().collect(),
        }
    }

    /// Axis-aligned filled rectangle with the given southwest corner.
    pub fn rect(origin: Pos, width: u32, height: u32) -> Self {
        let mut cells = BTreeSet::new();
        for dy in 0..height as i32 {
            for dx in 0..width as i32 {
                cells.insert(origin + (dx, dy));
            }
        }
        Shape { cells }
    }

    pub fn insert(&mut self, p: Pos) {
        self.cells.insert(p);
    }

    pub fn contains(&self, p: Pos) -> bool {
        self.cells.contains(&p)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Pos> + '_ {
        self.cells.iter().copied()
    }

    /// The c-scaling: every cell (x, y) of the result satisfies
    /// (floor(x/c), floor(y/c)) ∈ self.
    pub fn scale(&self, c: u32) -> Result<Shape> {
        if c == 0 {
            return Err(Error::InvalidScale);
        }
        let c = c as i32;
        let mut cells = BTreeSet::new();
        for p in self.iter() {
            for dy in 0..c {
                for dx in 0..c {
                    cells.insert(Pos::new(p.x * c + dx, p.y * c + dy));
                }
            }
        }
        Ok(Shape { cells })
    }
}

impl FromIterator<Pos> for Shape {
    fn from_iter<I: IntoIterator<Item = Pos>>(iter: I) -> Self {
        Shape::from_cells(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_involution() {
        for d in Direction::ALL {
            assert_eq!(d.opposite().opposite(), d);
        }
        let offsets: BTreeSet<(i32, i32)> = Direction::ALL.iter().map(|d| d.offset()).collect();
        assert_eq!(offsets.len(), 4);
    }

    #[test]
    fn unit_vector_order_is_integer_pair_order() {
        let mut dirs = Direction::ALL;
        dirs.sort_by_key(|d| d.offset());
        let ranks: Vec<u8> = dirs.iter().map(|d| d.unit_vector_rank()).collect();
        assert_eq!(ranks, vec![0, 1, 2, 3]);
    }

    #[test]
    fn scale_unit_cell() {
        let unit = Shape::from_cells([Pos::new(0, 0)]);
        let scaled = unit.scale(3).unwrap();
        assert_eq!(scaled, Shape::rect(Pos::new(0, 0), 3, 3));
    }

    #[test]
    fn scale_identity() {
        let l = Shape::from_cells([Pos::new(0, 0), Pos::new(1, 0), Pos::new(0, 1)]);
        assert_eq!(l.scale(1).unwrap(), l);
    }

    #[test]
    fn scale_l_tromino() {
        // Enumerated by block expansion: each of the 3 cells becomes a 2x2 block.
        let l = Shape::from_cells([Pos::new(0, 0), Pos::new(1, 0), Pos::new(0, 1)]);
        let scaled = l.scale(2).unwrap();
        assert_eq!(scaled.len(), 12);
        for p in l.iter() {
            for dx in 0..2 {
                for dy in 0..2 {
                    assert!(scaled.contains(Pos::new(p.x * 2 + dx, p.y * 2 + dy)));
                }
            }
        }
    }

    #[test]
    fn scale_zero_rejected() {
        assert!(Shape::new().scale(0).is_err());
    }

    #[test]
    fn scale_composes() {
        let l = Shape::from_cells([Pos::new(0, 0), Pos::new(1, 0), Pos::new(2, 1)]);
        let a = l.scale(2).unwrap().scale(3).unwrap();
        let b = l.scale(6).unwrap();
        assert_eq!(a, b);
    }
}
