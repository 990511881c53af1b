//! The planter gallery: a horizontal spine seeding vertical zig-zag counters
//! of strictly increasing even heights (powers of two), each sitting on an
//! anti-diagonal '#' square, with truncation tiles capping growth after the
//! K-th counter.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gallery::compose::Composer;
use crate::gallery::counters::{make_zigzag_counter, Orientation};
use crate::geom::{Direction, Pos};
use crate::tile::{Glue, TileSystem, TileType};

/// Column of the k-th spawn site (1-based), spaced for later shape-W arms.
pub fn spawn_column(k: u32) -> i32 {
    let mut x = 9;
    for i in 1..k {
        x += (i as i32 + 2) + 10;
    }
    x
}

/// Height the k-th vertical counter reaches (even, strictly increasing,
/// powers of two).
pub fn counter_height(k: u32) -> u32 {
    1 << (k + 2)
}

pub fn make_planter_system(k_counters: u32) -> Result<Arc<TileSystem>> {
    if k_counters == 0 {
        return Err(Error::Precondition("need at least one counter".into()));
    }
    let s = |l: &str, st: u32| Glue::new(l, st);
    let mut c = Composer::new(format!("planter-{k_counters}"), 2);

    // Spine: positional strength-2 chain along row 0, capped after the last
    // spawn site.
    let len = spawn_column(k_counters) + 3;
    for x in 0..=len {
        let mut t = TileType::new(format!("sp{x}"));
        if x > 0 {
            t = t.with_glue(Direction::West, s(&format!("sp{x}"), 2));
        }
        if x < len {
            t = t.with_glue(Direction::East, s(&format!("sp{}", x + 1), 2));
        }
        // Spawn sites lift the '#' square's first column.
        if (1..=k_counters).any(|k| spawn_column(k) == x) {
            t = t.with_glue(Direction::North, s(&format!("sq{x}:0:0"), 2));
        }
        c.add_tile(t, true)?;
    }
    c.add_seed_cell(Pos::new(0, 0), "sp0");

    for k in 1..=k_counters {
        let x0 = spawn_column(k);
        let side = k as i32 + 2;
        // The '#' square: columns grown bottom-up, chained west-to-east, the
        // anti-diagonal cells named with a '#' marker.
        for i in 0..side {
            for j in 0..side {
                let hash = i + j == side - 1;
                let name = if hash {
                    format!("#sq{x0}:{i}:{j}")
                } else {
                    format!("sq{x0}:{i}:{j}")
                };
                let mut t = TileType::new(name);
                // Vertical chain within the column.
                t = t.with_glue(Direction::South, s(&format!("sq{x0}:{i}:{j}"), 2));
                if j + 1 < side {
                    t = t.with_glue(Direction::North, s(&format!("sq{x0}:{i}:{}", j + 1), 2));
                }
                // The top of each column hands off east to the next column.
                if j == side - 1 && i + 1 < side {
                    t = t.with_glue(Direction::East, s(&format!("sqh{x0}:{}", i + 1), 2));
                }
                if j == side - 1 && i > 0 {
                    t = t.with_glue(Direction::West, s(&format!("sqh{x0}:{i}"), 2));
                }
                // The square's top-west cell seeds the vertical counter.
                if j == side - 1 && i == 0 {
                    t = t.with_glue(Direction::North, s(&format!("vcseed{x0}"), 2));
                }
                c.add_tile(t, true)?;
            }
        }
        // Column bases bind the spine... only column 0 does; columns i>0 hang
        // from the square's top row, growing DOWNWARD from the handoff.
        // Rewire: column i>0 grows top-down: the vertical chain above gives
        // column cells north-in bonds; their shared label structure already
        // allows both directions, and connectivity comes from the top row.
        //
        // Vertical counter k, bits k+1, counting 0 to all-ones: height 2^(k+2).
        let vc = make_zigzag_counter(k as u32 + 1, 0, (1 << (k + 1)) - 1, Orientation::North)?;
        c.add_system(&vc, &format!("vc{k}."), (0, 0), false)?;
        c.wire(&format!("vc{k}.seed"), Direction::South, s(&format!("vcseed{x0}"), 2))?;
    }
    c.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, SchedulerPolicy};

    fn counter_extent(sys: &Arc<TileSystem>, result: &crate::assembly::Assembly, k: u32) -> (i32, i32) {
        let prefix = format!("vc{k}.");
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for (p, cell) in result.iter() {
            if sys.tile(cell.tile).name.starts_with(&prefix) {
                lo = lo.min(p.y);
                hi = hi.max(p.y);
            }
        }
        (lo, hi)
    }

    #[test]
    fn two_counters_even_increasing() {
        let sys = make_planter_system(2).unwrap();
        let seq = run(&sys, SchedulerPolicy::LexMin, 100_000);
        assert!(seq.reached_terminal);
        let mut heights = Vec::new();
        for k in 1..=2 {
            let (lo, hi) = counter_extent(&sys, seq.result(), k);
            heights.push(hi - lo + 1);
        }
        assert_eq!(heights, vec![8, 16]);
        assert!(heights.iter().all(|h| h % 2 == 0), "even heights");
        assert!(heights[0] < heights[1], "strictly increasing");
    }

    #[test]
    fn one_counter_truncates() {
        let sys = make_planter_system(1).unwrap();
        let seq = run(&sys, SchedulerPolicy::FairFifo, 100_000);
        assert!(seq.reached_terminal, "truncation caps the planter");
        // The spine ends; nothing east of the cap.
        let max_x = seq.result().domain().map(|p| p.x).max().unwrap();
        assert_eq!(max_x, spawn_column(1) + 3);
    }

    #[test]
    fn hash_antidiagonal_present() {
        let sys = make_planter_system(1).unwrap();
        let seq = run(&sys, SchedulerPolicy::LexMin, 100_000);
        let hashes = seq
            .result()
            .iter()
            .filter(|(_, c)| sys.tile(c.tile).name.starts_with('#'))
            .count();
        assert_eq!(hashes, 3, "side-3 square has 3 anti-diagonal cells");
    }
}
