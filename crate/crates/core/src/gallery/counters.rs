//! Zig-zag binary counters at temperature 2.
//!
//! Layout: `bits` columns, MSB west. Row 0 writes the starting value with a
//! strength-2 chain from the single seed tile. Odd rows increment moving
//! west (carry rides the east-west glues, bit values ride the north glues),
//! even rows copy moving east. Turns happen on the end columns themselves:
//! the last tile of each row exposes a strength-2 north glue that both lifts
//! growth one row and carries the end column's bit value. The counter halts
//! when the increment of the all-ones value overflows at the MSB.
//!
//! End-column bit glues are flavored (`bl`/`bm`) so row tiles can tell the
//! turn columns apart from interior columns; interior bits share two glue
//! labels. Every tile keeps strength(N)+strength(S) < 4, so the system is
//! compact zig-zag.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{Direction, Pos};
use crate::tile::{Glue, TileSystem, TileType};

/// Which way a row of the counter grows.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    /// Rows at y=0 grow east; the counter climbs north. The default.
    North,
    /// Quarter-turn counterclockwise of `North`: the counter grows east.
    East,
    /// Half-turn: the counter climbs south.
    South,
    /// Quarter-turn clockwise: the counter grows west.
    West,
}

impl Orientation {
    fn quarter_turns(self) -> u32 {
        match self {
            Orientation::North => 0,
            Orientation::West => 1,
            Orientation::South => 2,
            Orientation::East => 3,
        }
    }
}

/// Build a τ=2 compact zig-zag counter that performs `count_to - count_from`
/// increments. Internally the value range is shifted so the final value is
/// all ones; the terminal assembly is a `bits × (2·(count_to−count_from)+2)`
/// rectangle.
pub fn make_zigzag_counter(
    bits: u32,
    count_from: u64,
    count_to: u64,
    orientation: Orientation,
) -> Result<Arc<TileSystem>> {
    if bits == 0 || bits > 16 {
        return Err(Error::Precondition(format!(
            "bits must be in 1..=16, got {bits}"
        )));
    }
    let all_ones: u64 = (1u64 << bits) - 1;
    if count_to > all_ones || count_from > count_to {
        return Err(Error::Precondition(format!(
            "need count_from <= count_to <= 2^bits - 1 = {all_ones}"
        )));
    }
    let start = count_from + (all_ones - count_to);
    let sys = if bits == 1 {
        one_bit_counter(start != 0)?
    } else {
        multi_bit_counter(bits as usize, start, false)?
    };
    if orientation == Orientation::North {
        return Ok(sys);
    }
    sys.rotated(
        orientation.quarter_turns(),
        format!("{}-{:?}", sys.name, orientation),
    )
}

fn s(label: impl Into<String>, strength: u32) -> Glue {
    Glue::new(label, strength)
}

/// bits == 1: compactness forbids two consecutive vertical steps, so the only
/// compact one-bit counter is the seed holding the all-ones value plus the
/// single wrap row that halts: two rows total.
fn one_bit_counter(_start_is_one: bool) -> Result<Arc<TileSystem>> {
    let tiles = vec![
        TileType::new("seed").with_glue(Direction::North, s("eupb1", 2)),
        // Reads 1 with implicit carry 1: overflow, no north glue.
        TileType::new("ie1").with_glue(Direction::South, s("eupb1", 2)),
    ];
    let names = tiles.iter().map(|t| t.name.clone()).collect();
    TileSystem::new(
        "zigzag-counter-1",
        tiles,
        names,
        vec![],
        vec![(Pos::new(0, 0), "seed".into())],
        2,
    )
}

fn multi_bit_counter(bits: usize, start: u64, odd_phase: bool) -> Result<Arc<TileSystem>> {
    let bit_of = |v: u64, col: usize| -> u32 {
        // col 0 = MSB ... bits-1 = LSB.
        ((v >> (bits - 1 - col)) & 1) as u32
    };
    let mut tiles: Vec<TileType> = Vec::new();

    if odd_phase {
        // Row 0 styled as an increment row's output: seed at the LSB column,
        // a strength-2 chain west, the MSB lifting straight into a copy row.
        // This shifts the row cycle by one, giving odd total heights.
        tiles.push(
            TileType::new("seedO")
                .with_glue(Direction::West, s(format!("oc{}", bits - 2), 2))
                .with_glue(
                    Direction::North,
                    s(format!("bl{}", bit_of(start, bits - 1)), 1),
                ),
        );
        for col in (1..bits - 1).rev() {
            tiles.push(
                TileType::new(format!("oinit{col}"))
                    .with_glue(Direction::East, s(format!("oc{col}"), 2))
                    .with_glue(Direction::West, s(format!("oc{}", col - 1), 2))
                    .with_glue(Direction::North, s(format!("b{}", bit_of(start, col)), 1)),
            );
        }
        tiles.push(
            TileType::new("oinitM")
                .with_glue(Direction::East, s("oc0", 2))
                .with_glue(Direction::North, s(format!("wupb{}", bit_of(start, 0)), 2)),
        );
    } else {
        // Row 0: seed at the MSB column, a strength-2 chain east, writing the
        // starting value's bits as north glues.
        tiles.push(
            TileType::new("seed")
                .with_glue(Direction::East, s("r0c1", 2))
                .with_glue(Direction::North, s(format!("bm{}", bit_of(start, 0)), 1)),
        );
        for col in 1..bits - 1 {
            tiles.push(
                TileType::new(format!("init{col}"))
                    .with_glue(Direction::West, s(format!("r0c{col}"), 2))
                    .with_glue(Direction::East, s(format!("r0c{}", col + 1), 2))
                    .with_glue(Direction::North, s(format!("b{}", bit_of(start, col)), 1)),
            );
        }
        tiles.push(
            TileType::new("initL")
                .with_glue(Direction::West, s(format!("r0c{}", bits - 1), 2))
                .with_glue(
                    Direction::North,
                    s(format!("eupb{}", bit_of(start, bits - 1)), 2),
                ),
        );
    }

    // Increment rows (westward). Entry reads the LSB via the lift glue with
    // an implicit carry of 1.
    for b in [0u32, 1] {
        let sum = 1 - b;
        let carry = b;
        tiles.push(
            TileType::new(format!("ie{b}"))
                .with_glue(Direction::South, s(format!("eupb{b}"), 2))
                .with_glue(Direction::North, s(format!("bl{sum}"), 1))
                .with_glue(Direction::West, s(format!("c{carry}"), 1)),
        );
    }
    // Interior: carry x bit. Two-column counters have no interior cells.
    if bits >= 3 {
        for c in [0u32, 1] {
                for b in [0u32, 1] {
                let sum = c ^ b;
                let carry = c & b;
                tiles.push(
                TileType::new(format!("im{c}{b}"))
                    .with_glue(Direction::East, s(format!("c{c}"), 1))
                    .with_glue(Direction::South, s(format!("b{b}"), 1))
                    .with_glue(Direction::North, s(format!("b{sum}"), 1))
                    .with_glue(Direction::West, s(format!("c{carry}"), 1)),
            );
            }
        }
    }
    // MSB: carry x bit; overflow halts the system (no north glue).
    for c in [0u32, 1] {
        for b in [0u32, 1] {
            let sum = c ^ b;
            let overflow = c == 1 && b == 1;
            let mut t = TileType::new(format!("iM{c}{b}"))
                .with_glue(Direction::East, s(format!("c{c}"), 1))
                .with_glue(Direction::South, s(format!("bm{b}"), 1));
            if !overflow {
                t = t.with_glue(Direction::North, s(format!("wupb{sum}"), 2));
            }
            tiles.push(t);
        }
    }

    // Copy rows (eastward).
    for b in [0u32, 1] {
        tiles.push(
            TileType::new(format!("ce{b}"))
                .with_glue(Direction::South, s(format!("wupb{b}"), 2))
                .with_glue(Direction::North, s(format!("bm{b}"), 1))
                .with_glue(Direction::East, s("cp", 1)),
        );
        if bits >= 3 {
            tiles.push(
                TileType::new(format!("cm{b}"))
                    .with_glue(Direction::West, s("cp", 1))
                    .with_glue(Direction::South, s(format!("b{b}"), 1))
                    .with_glue(Direction::North, s(format!("b{b}"), 1))
                    .with_glue(Direction::East, s("cp", 1)),
            );
        }
        tiles.push(
            TileType::new(format!("cl{b}"))
                .with_glue(Direction::West, s("cp", 1))
                .with_glue(Direction::South, s(format!("bl{b}"), 1))
                .with_glue(Direction::North, s(format!("eupb{b}"), 2)),
        );
    }

    let names = tiles.iter().map(|t| t.name.clone()).collect();
    let (seed_pos, seed_name) = if odd_phase {
        (Pos::new(bits as i32 - 1, 0), "seedO")
    } else {
        (Pos::new(0, 0), "seed")
    };
    TileSystem::new(
        format!("zigzag-counter-{bits}{}", if odd_phase { "-odd" } else { "" }),
        tiles,
        names,
        vec![],
        vec![(seed_pos, seed_name.into())],
        2,
    )
}

/// A counter whose terminal rectangle has exactly the given height (>= 2),
/// using the even or odd row phase as the parity requires.
pub fn make_counter_exact_height(
    bits: u32,
    height: u32,
    orientation: Orientation,
) -> Result<Arc<TileSystem>> {
    if bits < 2 || bits > 16 {
        return Err(Error::Precondition("bits must be in 2..=16".into()));
    }
    if height < 2 {
        return Err(Error::Precondition("height must be at least 2".into()));
    }
    let all_ones = (1u64 << bits) - 1;
    let (odd_phase, incr) = if height % 2 == 0 {
        (false, (height as u64 - 2) / 2)
    } else {
        (true, (height as u64 - 3) / 2)
    };
    if incr > all_ones {
        return Err(Error::Precondition(format!(
            "height {height} needs {incr} increments, more than a {bits}-bit \
             counter can perform"
        )));
    }
    let sys = multi_bit_counter(bits as usize, all_ones - incr, odd_phase)?;
    if orientation == Orientation::North {
        return Ok(sys);
    }
    sys.rotated(
        orientation.quarter_turns(),
        format!("{}-{:?}", sys.name, orientation),
    )
}

/// A two-column zig-zag "staircase" with `levels` climbing stages plus
/// `pad_north_glues` inert tile types that contribute extra north glues
/// without ever attaching (their glues match nothing).
///
/// Level i: the left base tile chains east (strength 2), the right tile
/// climbs north (strength 2), and the left top tile attaches cooperatively
/// reading the base's north glue, then lifts the next level. One level with
/// 0, 2, or 6 pads gives |G_N| of exactly 2, 4, or 8, with identical
/// dynamics, which isolates the glue-count dependence of downstream
/// measurements.
pub fn make_gn_staircase(levels: u32, pad_north_glues: u32) -> Result<Arc<TileSystem>> {
    if levels == 0 {
        return Err(Error::Precondition("levels must be positive".into()));
    }
    let mut tiles: Vec<TileType> = Vec::new();
    for k in 0..pad_north_glues {
        tiles.push(TileType::new(format!("pad{k}")).with_glue(
            Direction::North,
            s(format!("padg{k}"), 1),
        ));
    }
    for i in 0..levels {
        let base_l = if i == 0 {
            TileType::new("seed")
        } else {
            TileType::new(format!("bl{i}")).with_glue(Direction::South, s(format!("v{}", i - 1), 2))
        };
        tiles.push(
            base_l
                .with_glue(Direction::East, s(format!("h{i}"), 2))
                .with_glue(Direction::North, s(format!("c{i}"), 1)),
        );
        tiles.push(
            TileType::new(format!("br{i}"))
                .with_glue(Direction::West, s(format!("h{i}"), 2))
                .with_glue(Direction::North, s(format!("u{i}"), 2)),
        );
        tiles.push(
            TileType::new(format!("tr{i}"))
                .with_glue(Direction::South, s(format!("u{i}"), 2))
                .with_glue(Direction::West, s(format!("w{i}"), 1)),
        );
        let mut tl = TileType::new(format!("tl{i}"))
            .with_glue(Direction::East, s(format!("w{i}"), 1))
            .with_glue(Direction::South, s(format!("c{i}"), 1));
        if i + 1 < levels {
            tl = tl.with_glue(Direction::North, s(format!("v{i}"), 2));
        }
        tiles.push(tl);
    }
    let names = tiles.iter().map(|t| t.name.clone()).collect();
    TileSystem::new(
        format!("staircase-{levels}-{pad_north_glues}"),
        tiles,
        names,
        vec![],
        vec![(Pos::new(0, 0), "seed".into())],
        2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, SchedulerPolicy};
    use crate::zigzag::is_compact_zigzag;

    #[test]
    fn two_bit_counter_shape_and_verdict() {
        let sys = make_zigzag_counter(2, 0, 3, Orientation::North).unwrap();
        let rep = is_compact_zigzag(&sys, 1000).unwrap();
        assert!(rep.verdict.is_yes());
        let seq = rep.sequence.unwrap();
        assert!(seq.reached_terminal);
        // Height fixed by the row structure: 2*(to-from)+2 rows of width 2.
        let (lo, hi) = seq.result().bounding_box().unwrap();
        assert_eq!((lo, hi), (Pos::new(0, 0), Pos::new(1, 7)));
        assert_eq!(seq.result().len(), 16, "full rectangle");
    }

    #[test]
    fn one_bit_counter() {
        let sys = make_zigzag_counter(1, 0, 1, Orientation::North).unwrap();
        let rep = is_compact_zigzag(&sys, 100).unwrap();
        assert!(rep.verdict.is_yes());
        let seq = rep.sequence.unwrap();
        assert_eq!(seq.result().len(), 2, "seed row plus the halting wrap row");
    }

    #[test]
    fn bits_zero_rejected() {
        assert!(make_zigzag_counter(0, 0, 0, Orientation::North).is_err());
    }

    #[test]
    fn three_bit_counter_partial_range() {
        // 3 increments out of an 3-bit space: height 2*3+2 = 8, width 3.
        let sys = make_zigzag_counter(3, 2, 5, Orientation::North).unwrap();
        let rep = is_compact_zigzag(&sys, 1000).unwrap();
        assert!(rep.verdict.is_yes());
        let seq = rep.sequence.unwrap();
        let (lo, hi) = seq.result().bounding_box().unwrap();
        assert_eq!((lo, hi), (Pos::new(0, 0), Pos::new(2, 7)));
    }

    #[test]
    fn rotated_counter_runs_to_same_size() {
        let n = make_zigzag_counter(2, 1, 3, Orientation::North).unwrap();
        let e = make_zigzag_counter(2, 1, 3, Orientation::East).unwrap();
        let a = run(&n, SchedulerPolicy::LexMin, 1000);
        let b = run(&e, SchedulerPolicy::LexMin, 1000);
        assert!(a.reached_terminal && b.reached_terminal);
        assert_eq!(a.result().len(), b.result().len());
        let (lo_n, hi_n) = a.result().bounding_box().unwrap();
        let (lo_e, hi_e) = b.result().bounding_box().unwrap();
        assert_eq!(hi_n.x - lo_n.x, hi_e.y - lo_e.y);
        assert_eq!(hi_n.y - lo_n.y, hi_e.x - lo_e.x);
    }

    #[test]
    fn staircase_gn_counts() {
        for (pads, gn) in [(0u32, 2usize), (2, 4), (6, 8)] {
            let sys = make_gn_staircase(1, pads).unwrap();
            let rep = is_compact_zigzag(&sys, 1000).unwrap();
            assert!(rep.verdict.is_yes(), "staircase pads={pads} not zig-zag");
            assert_eq!(sys.north_glues().len(), gn, "pads={pads}");
        }
        // Multi-level staircases stay compact zig-zag.
        let sys = make_gn_staircase(3, 0).unwrap();
        assert!(is_compact_zigzag(&sys, 1000).unwrap().verdict.is_yes());
    }

    #[test]
    fn counter_north_glue_count() {
        // B=2 has no interior columns: 8 north glues. B>=3 adds b0/b1: 10.
        let g2 = make_zigzag_counter(2, 0, 3, Orientation::North)
            .unwrap()
            .north_glues()
            .len();
        let g3 = make_zigzag_counter(3, 0, 7, Orientation::North)
            .unwrap()
            .north_glues()
            .len();
        assert_eq!(g2, 8);
        assert_eq!(g3, 10);
    }
}
