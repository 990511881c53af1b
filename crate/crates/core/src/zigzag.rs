//! Zig-zag recognition from bounded traces: directedness with a single
//! assembly sequence, no exposed south glues, and the compactness bound on
//! north+south glue strengths.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::assembly::{Assembly, Placement};
use crate::engine::Verdict;
use crate::error::{Error, Result};
use crate::frontier::FrontierSet;
use crate::geom::{Direction, Pos};
use crate::tile::{TileId, TileSystem};

/// Input-side record for one placement: which sides of each placed cell were
/// bound at attachment time. A duple half bound only through its partner has
/// an empty side set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttachmentRecord {
    pub step: usize,
    pub cells: Vec<CellRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellRecord {
    pub pos: Pos,
    pub tile: TileId,
    pub input_sides: BTreeSet<Direction>,
}

/// Compute input sides for every placement of a valid sequence.
pub fn analyze_trace(seq: &crate::engine::AssemblySequence) -> Vec<AttachmentRecord> {
    let sys = &seq.system;
    let mut records = Vec::with_capacity(seq.placements.len());
    seq.transitions().for_each(|i, before, p, _after| {
        let cells = p.cells(sys);
        let own: Vec<Pos> = cells.iter().map(|(p, _)| *p).collect();
        let mut recs = Vec::new();
        for (pos, tile) in cells {
            let mut sides = BTreeSet::new();
            for d in Direction::ALL {
                let np = pos.neighbor(d);
                if own.contains(&np) {
                    continue; // internal duple edge is not an input side
                }
                if let Some(nc) = before.get(np) {
                    let g = sys.tile(tile).glue(d);
                    let ng = sys.tile(nc.tile).glue(d.opposite());
                    if g.interacts(ng) {
                        sides.insert(d);
                    }
                }
            }
            recs.push(CellRecord {
                pos,
                tile,
                input_sides: sides,
            });
        }
        records.push(AttachmentRecord {
            step: i,
            cells: recs,
        });
    });
    records
}

/// Evidence produced by a failed zig-zag check.
#[derive(Clone, Debug)]
pub enum ZigzagViolation {
    /// Frontier held more than one placement at some step.
    BranchingFrontier { step: usize, size: usize },
    /// A tile exposed a positive-strength south glue over an empty cell.
    ExposedSouth { step: usize, pos: Pos },
    /// A tile type's north+south strengths reach 2τ (compactness failure).
    NotCompact { tile: String, sum: u32 },
    /// Precondition failure (duples present, or prior check failed).
    Precondition(String),
}

/// Outcome of the bounded zig-zag analysis, including the trace when one was
/// established.
pub struct ZigzagReport {
    pub verdict: Verdict<ZigzagViolation>,
    pub sequence: Option<crate::engine::AssemblySequence>,
    pub steps_used: usize,
}

/// Bounded zig-zag check for a pure aTAM system: follows the unique sequence,
/// requiring frontier size ≤ 1 throughout and no exposed south glues in any
/// producible prefix.
pub fn is_zigzag(sys: &Arc<TileSystem>, max_steps: usize) -> Result<ZigzagReport> {
    if sys.duple_count() > 0 {
        return Err(Error::Precondition(
            "zig-zag analysis requires an aTAM system (no duples)".into(),
        ));
    }
    let mut asm = Assembly::seed_of(sys);
    // Any seed tile exposing a positive south glue over an empty cell already
    // violates the definition.
    if let Some(pos) = exposed_south(sys, &asm, asm.domain().collect()) {
        return Ok(ZigzagReport {
            verdict: Verdict::No(ZigzagViolation::ExposedSouth { step: 0, pos }),
            sequence: None,
            steps_used: 0,
        });
    }
    let mut fs = FrontierSet::full(sys, &asm);
    let mut placements: Vec<Placement> = Vec::new();
    for step in 0..max_steps {
        if fs.is_empty() {
            let seq = crate::engine::AssemblySequence::from_placements(
                sys.clone(),
                placements.clone(),
            )?;
            return Ok(ZigzagReport {
                verdict: Verdict::Yes,
                sequence: Some(seq),
                steps_used: step,
            });
        }
        if fs.len() > 1 {
            return Ok(ZigzagReport {
                verdict: Verdict::No(ZigzagViolation::BranchingFrontier {
                    step,
                    size: fs.len(),
                }),
                sequence: None,
                steps_used: step,
            });
        }
        let p = *fs.first().unwrap();
        asm.apply(sys, &p);
        fs.update_after(sys, &asm, &p);
        if let Some(pos) = exposed_south(sys, &asm, p.positions(sys)) {
            return Ok(ZigzagReport {
                verdict: Verdict::No(ZigzagViolation::ExposedSouth { step, pos }),
                sequence: None,
                steps_used: step,
            });
        }
        placements.push(p);
    }
    // Bound exhausted without reaching a terminal assembly.
    Ok(ZigzagReport {
        verdict: Verdict::Unknown,
        sequence: None,
        steps_used: max_steps,
    })
}

/// Newly placed cells are the only candidates for fresh south exposure, and
/// placing a tile can only cover souths, never expose them.
fn exposed_south(sys: &TileSystem, asm: &Assembly, new_cells: Vec<Pos>) -> Option<Pos> {
    for pos in new_cells {
        let cell = asm.get(pos)?;
        let g = sys.tile(cell.tile).glue(Direction::South);
        if g.strength > 0 && !asm.occupied(pos.neighbor(Direction::South)) {
            return Some(pos);
        }
    }
    None
}

/// Compact zig-zag: zig-zag plus, for every tile type used in the trace,
/// strength(N) + strength(S) < 2τ.
pub fn is_compact_zigzag(sys: &Arc<TileSystem>, max_steps: usize) -> Result<ZigzagReport> {
    let report = is_zigzag(sys, max_steps)?;
    let Verdict::Yes = report.verdict else {
        return Ok(report);
    };
    let seq = report.sequence.as_ref().expect("yes verdict carries trace");
    let mut used: BTreeSet<TileId> = seq.system.seed().values().copied().collect();
    for p in &seq.placements {
        for (_, t) in p.cells(&seq.system) {
            used.insert(t);
        }
    }
    let bound = 2 * sys.temperature;
    for id in used {
        let t = sys.tile(id);
        let sum = t.strength(Direction::North) + t.strength(Direction::South);
        if sum >= bound {
            return Ok(ZigzagReport {
                verdict: Verdict::No(ZigzagViolation::NotCompact {
                    tile: t.name.clone(),
                    sum,
                }),
                sequence: None,
                steps_used: report.steps_used,
            });
        }
    }
    Ok(report)
}

/// Growth never descends: on a yes-verdict trace every record's input sides
/// exclude North. Exposed as a checkable property for tests.
pub fn inputs_never_north(records: &[AttachmentRecord]) -> bool {
    records.iter().all(|r| {
        r.cells
            .iter()
            .all(|c| !c.input_sides.contains(&Direction::North))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, SchedulerPolicy};
    use crate::frontier::frontier as full_frontier;
    use crate::tile::{Glue, TileType};

    /// Two-row staircase: east chain, turn up, west chain above.
    fn small_zigzag() -> Arc<TileSystem> {
        let seed = TileType::new("s").with_glue(Direction::East, Glue::new("a", 2));
        let t1 = TileType::new("t1")
            .with_glue(Direction::West, Glue::new("a", 2))
            .with_glue(Direction::North, Glue::new("up", 2));
        let t2 = TileType::new("t2")
            .with_glue(Direction::South, Glue::new("up", 2))
            .with_glue(Direction::West, Glue::new("b", 1))
            .with_glue(Direction::North, Glue::null());
        let t3 = TileType::new("t3")
            .with_glue(Direction::East, Glue::new("b", 1))
            .with_glue(Direction::South, Glue::new("c", 1));
        // t3 binds cooperatively: east to t2, south to s.
        let seed = seed.with_glue(Direction::North, Glue::new("c", 1));
        TileSystem::new(
            "zz",
            vec![seed, t1, t2, t3],
            vec!["t1".into(), "t2".into(), "t3".into()],
            vec![],
            vec![(Pos::new(0, 0), "s".into())],
            2,
        )
        .unwrap()
    }

    #[test]
    fn small_zigzag_accepted() {
        let sys = small_zigzag();
        let rep = is_compact_zigzag(&sys, 100).unwrap();
        assert!(rep.verdict.is_yes(), "expected yes");
        let seq = rep.sequence.unwrap();
        assert!(seq.reached_terminal);
        let records = analyze_trace(&seq);
        assert!(inputs_never_north(&records));
    }

    #[test]
    fn input_sides_computed() {
        let sys = small_zigzag();
        let seq = run(&sys, SchedulerPolicy::LexMin, 100);
        let records = analyze_trace(&seq);
        // First tile east of the seed binds via its west side only.
        assert_eq!(
            records[0].cells[0].input_sides,
            BTreeSet::from([Direction::West])
        );
        // The cooperative tile t3 binds east+south.
        let coop = records
            .iter()
            .find(|r| sys.tile(r.cells[0].tile).name == "t3")
            .unwrap();
        assert_eq!(
            coop.cells[0].input_sides,
            BTreeSet::from([Direction::East, Direction::South])
        );
    }

    #[test]
    fn exposed_south_rejected() {
        // A tile with an unused positive south glue placed over empty space.
        let seed = TileType::new("s").with_glue(Direction::East, Glue::new("a", 2));
        let t = TileType::new("t")
            .with_glue(Direction::West, Glue::new("a", 2))
            .with_glue(Direction::South, Glue::new("dangle", 1));
        let sys = TileSystem::new(
            "bad",
            vec![seed, t],
            vec!["t".into()],
            vec![],
            vec![(Pos::new(0, 0), "s".into())],
            2,
        )
        .unwrap();
        let rep = is_zigzag(&sys, 100).unwrap();
        assert!(matches!(
            rep.verdict,
            Verdict::No(ZigzagViolation::ExposedSouth { .. })
        ));
    }

    #[test]
    fn branching_frontier_rejected() {
        let seed = TileType::new("s")
            .with_glue(Direction::East, Glue::new("a", 2))
            .with_glue(Direction::West, Glue::new("a", 2));
        let t = TileType::new("t").with_glue(Direction::West, Glue::new("a", 2));
        let t2 = TileType::new("t2").with_glue(Direction::East, Glue::new("a", 2));
        let sys = TileSystem::new(
            "branch",
            vec![seed, t, t2],
            vec!["t".into(), "t2".into()],
            vec![],
            vec![(Pos::new(0, 0), "s".into())],
            2,
        )
        .unwrap();
        let rep = is_zigzag(&sys, 100).unwrap();
        assert!(matches!(
            rep.verdict,
            Verdict::No(ZigzagViolation::BranchingFrontier { .. })
        ));
    }

    #[test]
    fn compactness_boundary_rejected() {
        // tau=1 with north and south both strength 1: sum = 2 = 2*tau.
        let seed = TileType::new("s").with_glue(Direction::East, Glue::new("a", 1));
        let t = TileType::new("t")
            .with_glue(Direction::West, Glue::new("a", 1))
            .with_glue(Direction::North, Glue::new("n", 1))
            .with_glue(Direction::South, Glue::null());
        // Give the tile N=1 S=1 but never expose the south: bind it so its
        // south stays over the... a south glue over empty space would break
        // zig-zag first, so use N=1,S=1 on a tile whose south is covered.
        let t2 = TileType::new("t2")
            .with_glue(Direction::South, Glue::new("n", 1))
            .with_glue(Direction::North, Glue::new("n2", 1));
        let sys = TileSystem::new(
            "noncompact",
            vec![seed, t, t2],
            vec!["t".into(), "t2".into()],
            vec![],
            vec![(Pos::new(0, 0), "s".into())],
            1,
        )
        .unwrap();
        let rep = is_compact_zigzag(&sys, 100).unwrap();
        match rep.verdict {
            Verdict::No(ZigzagViolation::NotCompact { sum, .. }) => assert_eq!(sum, 2),
            other => panic!("expected NotCompact, got {:?}", verdict_name(&other)),
        }
    }

    fn verdict_name<W>(v: &Verdict<W>) -> &'static str {
        match v {
            Verdict::Yes => "yes",
            Verdict::No(_) => "no",
            Verdict::Unknown => "unknown",
        }
    }

    #[test]
    fn truncated_is_unknown() {
        let sys = small_zigzag();
        let rep = is_zigzag(&sys, 1).unwrap();
        assert!(rep.verdict.is_unknown());
    }

    #[test]
    fn duples_precondition() {
        let a = TileType::new("a").with_glue(Direction::East, Glue::new("j", 1));
        let b = TileType::new("b").with_glue(Direction::West, Glue::new("j", 1));
        let sys = TileSystem::new(
            "dtas",
            vec![a, b],
            vec![],
            vec![("a".into(), "b".into(), crate::geom::Axis::EastWest)],
            vec![(Pos::new(0, 0), "a".into())],
            1,
        )
        .unwrap();
        assert!(is_zigzag(&sys, 10).is_err());
    }

    #[test]
    fn yes_trace_has_unique_sequence_all_policies() {
        let sys = small_zigzag();
        let a = run(&sys, SchedulerPolicy::LexMin, 100);
        let b = run(&sys, SchedulerPolicy::Random(3), 100);
        assert_eq!(a.placements, b.placements, "single-sequence system");
        // And the frontier is at most 1 at every prefix.
        let mut asm = Assembly::seed_of(&sys);
        for p in &a.placements {
            assert!(full_frontier(&sys, &asm).len() <= 1);
            asm.apply(&sys, p);
        }
    }
}
