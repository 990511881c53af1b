//! The N×N square at temperature 2 with O(log N) tile types: three zig-zag
//! counters around the rim, a westward return row, and constant-type filler
//! columns.
//!
//! Layout for width w = ⌈log₂N⌉ (all half-open ranges):
//!
//! - CW: columns [0,w), rows [0,N), mirrored so it halts at the northeast
//!   corner of its band and hands off eastward.
//! - a bridge column at x = w filling rows [N−w, N), handing off at its foot.
//! - CN: columns [w+1, N), rows [N−w, N), growing east, halting at its
//!   southeast corner.
//! - a bridge row at y = N−w−1 filling columns [N−w, N), handing off west.
//! - CE: columns [N−w, N), rows [0, N−w−1), growing south, halting at its
//!   southwest corner.
//! - the return row y = 0, columns [w, N−w), one self-chaining type growing
//!   west until it collides with CW.
//! - filler columns above the return row, one self-chaining type climbing
//!   until colliding with the bridge column or CN.
//!
//! Counter lengths N−w−1 have either parity, so the counters pick their row
//! phase accordingly. The sequencing (CW, CN, CE, return, fill) means every
//! collision target is complete before the colliding growth starts.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gallery::compose::Composer;
use crate::gallery::counters::{make_counter_exact_height, Orientation};
use crate::geom::{Direction, Pos};
use crate::tile::{Glue, TileSystem, TileType};

fn ceil_log2(n: u32) -> u32 {
    let mut b = 0;
    while (1u64 << b) < n as u64 {
        b += 1;
    }
    b
}

/// Run a component standalone and return (bbox lo, bbox hi, seed position).
/// The row phase moves the seed between corners, so compositions anchor on
/// measured offsets instead of assuming one.
fn measure(sys: &Arc<TileSystem>) -> (Pos, Pos, Pos) {
    let seq = crate::engine::run(sys, crate::engine::SchedulerPolicy::LexMin, 1_000_000);
    debug_assert!(seq.reached_terminal);
    let (lo, hi) = seq.result().bounding_box().unwrap();
    let seed = *sys.seed().keys().next().unwrap();
    (lo, hi, seed)
}

pub fn make_square_system(n: u32) -> Result<Arc<TileSystem>> {
    if n < 8 {
        return Err(Error::Precondition("square size must be at least 8".into()));
    }
    let w = ceil_log2(n);
    let side = n as i32;
    let wi = w as i32;
    let s = |l: &str, st: u32| Glue::new(l, st);

    // Components. CW is mirrored so its halt tile sits at the east end of its
    // top row; CN grows east (rotate once, then mirror); CE grows south
    // (rotate twice, then mirror).
    let cw = make_counter_exact_height(w, n, Orientation::North)?.reflected("cw-base")?;
    let h_side = n - w - 1;
    let cn = make_counter_exact_height(w, h_side, Orientation::North)?
        .rotated(1, "cn-rot")?
        .reflected("cn-base")?;
    let ce = make_counter_exact_height(w, h_side, Orientation::North)?
        .rotated(2, "ce-rot")?
        .reflected("ce-base")?;

    // Measure seed offsets within each transformed body.
    let (cw_lo, _, cw_seed_pos) = measure(&cw);
    let (cn_lo, cn_hi, cn_seed_pos) = measure(&cn);
    let (ce_lo, ce_hi, ce_seed_pos) = measure(&ce);
    debug_assert_eq!(cn_hi.y - cn_lo.y + 1, wi);
    debug_assert_eq!(ce_hi.x - ce_lo.x + 1, wi);
    debug_assert_eq!(cn_seed_pos.x, cn_lo.x, "CN seed on its west column");
    debug_assert_eq!(ce_seed_pos.y, ce_hi.y, "CE seed on its top row");
    // The bridge exit rows/columns must meet the seeds where they sit.
    let cn_seed_row_off = cn_seed_pos.y - cn_lo.y; // 0..w
    let ce_seed_col_off = ce_seed_pos.x - ce_lo.x; // 0..w

    let mut c = Composer::new(format!("square-{n}"), 2);
    // CW keeps its seed; translate its measured bbox onto [0,w) x [0,N).
    let cw_offset = (-cw_lo.x, -cw_lo.y);
    c.add_system(&cw, "cw.", cw_offset, true)?;
    c.add_system(&cn, "cn.", (0, 0), false)?;
    c.add_system(&ce, "ce.", (0, 0), false)?;

    // CW halt (northeast of the band) hands off east to the bridge column,
    // which exits east at CN's seed row while still filling all w rows.
    c.wire("cw.iM11", Direction::East, s("x1", 2))?;
    let exit_j_n = wi - 1 - cn_seed_row_off; // bw{j} sits at row N-1-j
    for j in 0..wi {
        let mut t = TileType::new(format!("bw{j}"));
        if j == 0 {
            t = t.with_glue(Direction::West, s("x1", 2));
        } else {
            t = t.with_glue(Direction::North, s(&format!("bwv{j}"), 2));
        }
        if j + 1 < wi {
            t = t.with_glue(Direction::South, s(&format!("bwv{}", j + 1), 2));
        }
        if j == exit_j_n {
            t = t.with_glue(Direction::East, s("x2", 2));
        }
        c.add_tile(t, true)?;
    }
    // CN grows from the bridge exit.
    let cn_seed = cn.tile(*cn.seed().values().next().unwrap()).name.clone();
    c.wire(&format!("cn.{cn_seed}"), Direction::West, s("x2", 2))?;
    // CN halt (southeast corner of the band) hands off south to the bridge
    // row, which walks west across the east band and exits south above CE's
    // seed column.
    c.wire("cn.iM11", Direction::South, s("x3", 2))?;
    let exit_j_e = wi - 1 - ce_seed_col_off; // be{j} sits at column N-1-j
    for j in 0..wi {
        let mut t = TileType::new(format!("be{j}"));
        if j == 0 {
            t = t.with_glue(Direction::North, s("x3", 2));
        } else {
            t = t.with_glue(Direction::East, s(&format!("beh{j}"), 2));
        }
        if j + 1 < wi {
            t = t.with_glue(Direction::West, s(&format!("beh{}", j + 1), 2));
        }
        if j == exit_j_e {
            t = t.with_glue(Direction::South, s("x4", 2));
        }
        c.add_tile(t, true)?;
    }
    let ce_seed = ce.tile(*ce.seed().values().next().unwrap()).name.clone();
    c.wire(&format!("ce.{ce_seed}"), Direction::North, s("x4", 2))?;
    // CE halt (southwest corner of its band) seeds the return row.
    c.wire("ce.iM11", Direction::West, s("x5", 2))?;
    c.add_tile(
        TileType::new("ret0")
            .with_glue(Direction::East, s("x5", 2))
            .with_glue(Direction::West, s("ret", 2))
            .with_glue(Direction::North, s("fill", 2)),
        true,
    )?;
    c.add_tile(
        TileType::new("ret")
            .with_glue(Direction::East, s("ret", 2))
            .with_glue(Direction::West, s("ret", 2))
            .with_glue(Direction::North, s("fill", 2)),
        true,
    )?;
    c.add_tile(
        TileType::new("fill")
            .with_glue(Direction::South, s("fill", 2))
            .with_glue(Direction::North, s("fill", 2)),
        true,
    )?;
    c.build()
}

/// A single compact zig-zag system whose terminal assembly is the n×n
/// square: an n-bit-wide counter counting n/2 down to 1, with a dedicated
/// halt row. The halt row's tiles carry no north glues and the seed row has
/// no reader, so nothing the duple compiler emits leaves the square's
/// footprint — compiled solid, its terminal domain is exactly the c-scaled
/// square.
pub fn make_square_zigzag(n: u32) -> Result<Arc<TileSystem>> {
    if n < 8 || n % 2 != 0 {
        return Err(Error::Precondition(
            "square side must be even and at least 8".into(),
        ));
    }
    let bits = n as usize;
    let v0 = (n / 2) as u64;
    let bit_of = |v: u64, col: usize| -> u32 { ((v >> (bits - 1 - col)) & 1) as u32 };
    let s1 = |l: String| Glue::new(l, 1);
    let s2 = |l: String| Glue::new(l, 2);
    let mut tiles: Vec<TileType> = Vec::new();

    // Seed row writes v0; the LSB lift is seed-flavored so the first
    // decrement row has its own entry column for the vertical handoff.
    tiles.push(
        TileType::new("dseed")
            .with_glue(Direction::East, s2("dr1".into()))
            .with_glue(Direction::North, s1(format!("bm{}", bit_of(v0, 0)))),
    );
    for c in 1..bits - 1 {
        tiles.push(
            TileType::new(format!("dinit{c}"))
                .with_glue(Direction::West, s2(format!("dr{c}")))
                .with_glue(Direction::East, s2(format!("dr{}", c + 1)))
                .with_glue(Direction::North, s1(format!("b{}", bit_of(v0, c)))),
        );
    }
    tiles.push(
        TileType::new("dinitL")
            .with_glue(Direction::West, s2(format!("dr{}", bits - 1)))
            .with_glue(
                Direction::North,
                s2(format!("es{}", bit_of(v0, bits - 1))),
            ),
    );
    // Decrement entries: seed-flavored (ide0*) and steady-state (ide*).
    for (pre, lift) in [("ide0", "es"), ("ide", "ef")] {
        for b in [0u32, 1] {
            let (out, borrow) = if b == 0 { (1, 1) } else { (0, 0) };
            tiles.push(
                TileType::new(format!("{pre}{b}"))
                    .with_glue(Direction::South, s2(format!("{lift}{b}")))
                    .with_glue(Direction::North, s1(format!("bl{out}")))
                    .with_glue(Direction::West, s1(format!("w{borrow}"))),
            );
        }
    }
    // Decrement interiors and MSB.
    for w in [0u32, 1] {
        for b in [0u32, 1] {
            let (out, borrow) = if w == 0 {
                (b, 0)
            } else if b == 0 {
                (1, 1)
            } else {
                (0, 0)
            };
            tiles.push(
                TileType::new(format!("idm{w}{b}"))
                    .with_glue(Direction::East, s1(format!("w{w}")))
                    .with_glue(Direction::South, s1(format!("b{b}")))
                    .with_glue(Direction::North, s1(format!("b{out}")))
                    .with_glue(Direction::West, s1(format!("w{borrow}"))),
            );
            tiles.push(
                TileType::new(format!("idM{w}{b}"))
                    .with_glue(Direction::East, s1(format!("w{w}")))
                    .with_glue(Direction::South, s1(format!("bm{b}")))
                    .with_glue(Direction::North, s2(format!("wup{out}"))),
            );
        }
    }
    // Copy rows accumulate the all-zero-above-LSB flag eastward; the lift
    // carries it so the halt row knows the value reached 1.
    for b in [0u32, 1] {
        tiles.push(
            TileType::new(format!("dce{b}"))
                .with_glue(Direction::South, s2(format!("wup{b}")))
                .with_glue(Direction::North, s1(format!("bm{b}")))
                .with_glue(Direction::East, s1(format!("cp{}", (b == 0) as u32))),
        );
        for z in [0u32, 1] {
            let zo = z & ((b == 0) as u32);
            tiles.push(
                TileType::new(format!("dcm{b}{z}"))
                    .with_glue(Direction::West, s1(format!("cp{z}")))
                    .with_glue(Direction::South, s1(format!("b{b}")))
                    .with_glue(Direction::North, s1(format!("b{b}")))
                    .with_glue(Direction::East, s1(format!("cp{zo}"))),
            );
            // Lift: value == 1 iff the LSB is 1 and everything above is 0.
            let halting = b == 1 && z == 1;
            tiles.push(
                TileType::new(format!("dcl{b}{z}"))
                    .with_glue(Direction::West, s1(format!("cp{z}")))
                    .with_glue(Direction::South, s1(format!("bl{b}")))
                    .with_glue(
                        Direction::North,
                        s2(if halting { "eh".into() } else { format!("ef{b}") }),
                    ),
            );
        }
    }
    // The halt row: reads the value-1 bits below, writes nothing above.
    tiles.push(
        TileType::new("hze")
            .with_glue(Direction::South, s2("eh".into()))
            .with_glue(Direction::West, s1("hz".into())),
    );
    tiles.push(
        TileType::new("hzm")
            .with_glue(Direction::East, s1("hz".into()))
            .with_glue(Direction::South, s1("b0".into()))
            .with_glue(Direction::West, s1("hz".into())),
    );
    tiles.push(
        TileType::new("hzM")
            .with_glue(Direction::East, s1("hz".into()))
            .with_glue(Direction::South, s1("bm0".into())),
    );

    let names = tiles.iter().map(|t| t.name.clone()).collect();
    TileSystem::new(
        format!("square-zigzag-{n}"),
        tiles,
        names,
        vec![],
        vec![(Pos::new(0, 0), "dseed".into())],
        2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, SchedulerPolicy};
    use crate::geom::Shape;

    #[test]
    fn square8_terminal_domain() {
        let sys = make_square_system(8).unwrap();
        let seq = run(&sys, SchedulerPolicy::LexMin, 10_000);
        assert!(seq.reached_terminal, "square must quiesce");
        let target = Shape::rect(Pos::new(0, 0), 8, 8);
        assert_eq!(seq.result().shape(), target);
    }

    #[test]
    fn square16_both_policies() {
        let sys = make_square_system(16).unwrap();
        let target = Shape::rect(Pos::new(0, 0), 16, 16);
        for policy in [SchedulerPolicy::FairFifo, SchedulerPolicy::LexMin] {
            let seq = run(&sys, policy, 100_000);
            assert!(seq.reached_terminal);
            assert_eq!(seq.result().shape(), target);
        }
    }

    #[test]
    fn square_zigzag_is_compact_and_square() {
        let sys = make_square_zigzag(8).unwrap();
        let rep = crate::zigzag::is_compact_zigzag(&sys, 100_000).unwrap();
        assert!(rep.verdict.is_yes());
        let seq = rep.sequence.unwrap();
        assert_eq!(seq.result().shape(), Shape::rect(Pos::new(0, 0), 8, 8));
    }

    #[test]
    fn too_small_rejected() {
        assert!(make_square_system(7).is_err());
    }

    #[test]
    fn tile_counts_linear_in_log() {
        let mut counts = Vec::new();
        for n in [8u32, 16, 32, 64] {
            let sys = make_square_system(n).unwrap();
            counts.push(sys.tile_count());
        }
        // Monotone in ceil(log2 N).
        assert!(counts.windows(2).all(|w| w[0] < w[1]), "{counts:?}");
        // Exactly linear: constant second difference over doubling N.
        let d1 = counts[1] - counts[0];
        let d2 = counts[2] - counts[1];
        let d3 = counts[3] - counts[2];
        assert_eq!(d1, d2);
        assert_eq!(d2, d3);
    }
}
