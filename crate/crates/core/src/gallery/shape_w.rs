//! The temperature-1 duple gallery: planter spine, vertical towers of even
//! increasing heights, 6-spacer arms, and downward duple fingers that stall
//! exactly one cell above the planter — plus the S1..S8 line variant whose
//! sixth tile lands in that gap.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gallery::compose::Composer;
use crate::gallery::planter::{counter_height, spawn_column};
use crate::geom::{Axis, Direction, Pos};
use crate::tile::{Glue, TileSystem, TileType};

pub struct ShapeWOptions {
    pub counters: u32,
    /// Test-only hook: raise this tower's height by one, making the cell
    /// count below the arm even, so its finger crashes into the planter.
    pub odd_height_hook: Option<u32>,
    /// Also grow the S1..S8 line from each tower base.
    pub with_s8_line: bool,
}

pub fn make_shape_w_system(k_counters: u32) -> Result<Arc<TileSystem>> {
    build(ShapeWOptions {
        counters: k_counters,
        odd_height_hook: None,
        with_s8_line: false,
    })
}

pub fn make_s8_system(k_counters: u32) -> Result<Arc<TileSystem>> {
    build(ShapeWOptions {
        counters: k_counters,
        odd_height_hook: None,
        with_s8_line: true,
    })
}

pub fn build(opts: ShapeWOptions) -> Result<Arc<TileSystem>> {
    let k_counters = opts.counters;
    if k_counters == 0 {
        return Err(Error::Precondition("need at least one counter".into()));
    }
    let s = |l: &str, st: u32| Glue::new(l, st);
    let mut c = Composer::new(
        format!(
            "shape-w-{k_counters}{}",
            if opts.with_s8_line { "-s8" } else { "" }
        ),
        1,
    );

    // Planter spine along row 0: positional strength-1 chain with a cap.
    let len = spawn_column(k_counters) + 3;
    for x in 0..=len {
        let mut t = TileType::new(format!("sp{x}"));
        if x > 0 {
            t = t.with_glue(Direction::West, s(&format!("sp{x}"), 1));
        }
        if x < len {
            t = t.with_glue(Direction::East, s(&format!("sp{}", x + 1), 1));
        }
        if (1..=k_counters).any(|k| spawn_column(k) == x) {
            t = t.with_glue(Direction::North, s(&format!("tw{x}:1"), 1));
        }
        c.add_tile(t, true)?;
    }
    c.add_seed_cell(Pos::new(0, 0), "sp0");

    for k in 1..=k_counters {
        let x0 = spawn_column(k);
        let mut height = counter_height(k) as i32;
        if opts.odd_height_hook == Some(k) {
            height += 1;
        }
        // Tower: positional single-tile-wide column, rows 1..=height.
        for j in 1..=height {
            let mut t = TileType::new(format!("tw{x0}:{j}"));
            t = t.with_glue(Direction::South, s(&format!("tw{x0}:{j}"), 1));
            if j < height {
                t = t.with_glue(Direction::North, s(&format!("tw{x0}:{}", j + 1), 1));
            }
            // Topmost tile hands off west into the spacer arm.
            if j == height {
                t = t.with_glue(Direction::West, s(&format!("arm{x0}:1"), 1));
            }
            // The base exposes a west glue for the S-line.
            if j == 1 && opts.with_s8_line {
                t = t.with_glue(Direction::West, s(&format!("s{x0}:1"), 1));
            }
            c.add_tile(t, true)?;
        }
        // Six spacer tiles west of the tower top; the last exposes a south
        // glue that lets duples bind.
        for a in 1..=6 {
            let mut t = TileType::new(format!("arm{x0}:{a}"));
            t = t.with_glue(Direction::East, s(&format!("arm{x0}:{a}"), 1));
            if a < 6 {
                t = t.with_glue(Direction::West, s(&format!("arm{x0}:{}", a + 1), 1));
            } else {
                t = t.with_glue(Direction::South, s("fng", 1));
            }
            c.add_tile(t, true)?;
        }
        // S1..S8 line from the tower base, growing west through the gap row.
        if opts.with_s8_line {
            for i in 1..=8 {
                let mut t = TileType::new(format!("s{x0}:{i}"));
                t = t.with_glue(Direction::East, s(&format!("s{x0}:{i}"), 1));
                if i < 8 {
                    t = t.with_glue(Direction::West, s(&format!("s{x0}:{}", i + 1), 1));
                }
                c.add_tile(t, true)?;
            }
        }
    }

    // The finger duple: matching north and south glues, shared by all arms.
    c.add_tile(
        TileType::new("fa")
            .with_glue(Direction::North, s("fngi", 1))
            .with_glue(Direction::South, s("fng", 1)),
        false,
    )?;
    c.add_tile(
        TileType::new("fb")
            .with_glue(Direction::North, s("fng", 1))
            .with_glue(Direction::South, s("fngi", 1)),
        false,
    )?;
    c.add_duple("fa", "fb", Axis::NorthSouth);
    c.build()
}

/// Gap between a finger's lowest cell and the planter at the k-th tower.
/// Returns (finger column, lowest finger row, gap cells).
pub fn finger_gap(
    sys: &Arc<TileSystem>,
    result: &crate::assembly::Assembly,
    k: u32,
) -> Option<(i32, i32, i32)> {
    let x = spawn_column(k) - 6;
    let mut lowest: Option<i32> = None;
    for (p, cell) in result.iter() {
        let name = &sys.tile(cell.tile).name;
        if p.x == x && (name == "fa" || name == "fb") {
            lowest = Some(lowest.map_or(p.y, |l: i32| l.min(p.y)));
        }
    }
    lowest.map(|l| (x, l, l - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, SchedulerPolicy};

    #[test]
    fn fingers_stall_one_above_planter() {
        for k_counters in [1u32, 2] {
            let sys = make_shape_w_system(k_counters).unwrap();
            let seq = run(&sys, SchedulerPolicy::LexMin, 1_000_000);
            assert!(seq.reached_terminal);
            for k in 1..=k_counters {
                let (_, lowest, gap) = finger_gap(&sys, seq.result(), k).unwrap();
                assert_eq!(lowest, 2, "finger bottom sits at row 2 (counter {k})");
                assert_eq!(gap, 1, "exactly one empty cell above the planter");
            }
        }
    }

    #[test]
    fn odd_height_hook_crashes() {
        let sys = build(ShapeWOptions {
            counters: 1,
            odd_height_hook: Some(1),
            with_s8_line: false,
        })
        .unwrap();
        let seq = run(&sys, SchedulerPolicy::LexMin, 1_000_000);
        assert!(seq.reached_terminal);
        let (_, lowest, gap) = finger_gap(&sys, seq.result(), 1).unwrap();
        assert_eq!(lowest, 1, "finger reaches the row adjacent to the planter");
        assert_eq!(gap, 0, "no gap left: the parity mechanism is load-bearing");
    }

    #[test]
    fn s8_line_fills_the_gap() {
        let sys = make_s8_system(1).unwrap();
        let seq = run(&sys, SchedulerPolicy::FairFifo, 1_000_000);
        assert!(seq.reached_terminal);
        let x0 = spawn_column(1);
        // S6 occupies the gap cell (finger column, row 1).
        let gap_cell = Pos::new(x0 - 6, 1);
        let name = sys.tile(seq.result().tile_at(gap_cell).unwrap()).name.clone();
        assert_eq!(name, format!("s{x0}:6"));
        // Line length exactly 8.
        for i in 1..=8 {
            assert!(seq.result().occupied(Pos::new(x0 - i, 1)));
        }
        assert!(!seq.result().occupied(Pos::new(x0 - 9, 1)));
        // The finger still stalls with its bottom at row 2 (gap now held by S6).
        let (_, lowest, _) = finger_gap(&sys, seq.result(), 1).unwrap();
        assert_eq!(lowest, 2);
    }
}
