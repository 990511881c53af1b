//! Compilation end-to-end checks: compiled duple systems must reproduce
//! their compact zig-zag sources under the block representation function.

use std::collections::BTreeMap;

use datam::compiler::{check_probe_exclusivity, compile, emit_bit_gadget};
use datam::gallery::{make_gn_staircase, make_zigzag_counter, Orientation};
use datam::repr::ReprMode;
use datam::{run, SchedulerPolicy};

fn co_simulate(src: &std::sync::Arc<datam::TileSystem>) -> datam::compiler::CompilationOutput {
    let out = compile(src, 100_000).unwrap();
    assert_eq!(out.dtas.temperature, 1);
    let seq = run(&out.dtas, SchedulerPolicy::LexMin, 2_000_000);
    assert!(seq.reached_terminal, "compiled system must quiesce");
    let mapped = out.repr.map_assembly(&out.dtas, src, seq.result()).unwrap();
    let srcseq = run(src, SchedulerPolicy::LexMin, 100_000);
    assert!(srcseq.reached_terminal);
    let want: BTreeMap<_, _> = srcseq.result().iter().map(|(p, c)| (p, c.tile)).collect();
    let got: BTreeMap<_, _> = mapped.tiles.iter().map(|(p, t)| (*p, *t)).collect();
    assert_eq!(want, got, "R* of the compiled terminal equals the source terminal");
    assert!(
        mapped.clean_violations(ReprMode::Block).is_empty(),
        "fuzz must stay adjacent, no diagonals"
    );
    // The compiled chain is sequential: frontier size 1 until terminal.
    let mut asm = datam::Assembly::seed_of(&out.dtas);
    for p in seq.placements.iter().take(400) {
        assert!(datam::frontier(&out.dtas, &asm).len() <= 1);
        asm = asm.with_placement(&out.dtas, p);
    }
    // Bit reads resolve exclusively.
    let checks = check_probe_exclusivity(&out.dtas, &seq).unwrap();
    if src.north_glues().iter().any(|g| g.strength == 1) {
        assert!(checks > 0, "systems with coded glues must exercise reads");
    }
    out
}

#[test]
fn staircase_compiles_and_simulates() {
    let src = make_gn_staircase(1, 0).unwrap();
    let out = co_simulate(&src);
    assert_eq!(out.scale, 16 * out.stats.half_bits as u32 + 8);
}

#[test]
fn two_bit_counter_compiles_and_simulates() {
    let src = make_zigzag_counter(2, 0, 3, Orientation::North).unwrap();
    let out = co_simulate(&src);
    assert_eq!(out.stats.north_glues, 8);
    assert_eq!(out.scale, 72);
}

#[test]
fn three_bit_counter_compiles_and_simulates() {
    let src = make_zigzag_counter(3, 0, 7, Orientation::North).unwrap();
    co_simulate(&src);
}

#[test]
fn single_seed_system_compiles_to_seed_macro() {
    // A system whose frontier is empty: one Seed macrotile; the
    // representation function maps it back to the seed's tile.
    let t = datam::TileType::new("lone");
    let src = datam::TileSystem::new(
        "lone",
        vec![t],
        vec!["lone".into()],
        vec![],
        vec![(datam::Pos::new(0, 0), "lone".into())],
        2,
    )
    .unwrap();
    let out = compile(&src, 100).unwrap();
    let seq = run(&out.dtas, SchedulerPolicy::LexMin, 1000);
    assert!(seq.reached_terminal);
    let mapped = out.repr.map_assembly(&out.dtas, &src, seq.result()).unwrap();
    assert_eq!(mapped.tiles.len(), 1);
    assert_eq!(
        mapped.tiles.values().next().copied(),
        src.tile_by_name("lone")
    );
}

#[test]
fn non_zigzag_input_rejected() {
    // Branching frontier: two tiles attach independently.
    let seed = datam::TileType::new("s")
        .with_glue(datam::Direction::East, datam::Glue::new("a", 2))
        .with_glue(datam::Direction::West, datam::Glue::new("b", 2));
    let r = datam::TileType::new("r").with_glue(datam::Direction::West, datam::Glue::new("a", 2));
    let l = datam::TileType::new("l").with_glue(datam::Direction::East, datam::Glue::new("b", 2));
    let src = datam::TileSystem::new(
        "branchy",
        vec![seed, r, l],
        vec!["r".into(), "l".into()],
        vec![],
        vec![(datam::Pos::new(0, 0), "s".into())],
        2,
    )
    .unwrap();
    assert!(matches!(
        compile(&src, 1000),
        Err(datam::Error::Precondition(_))
    ));
}

#[test]
fn wrong_temperature_rejected() {
    let t = datam::TileType::new("x");
    let src = datam::TileSystem::new(
        "tau1",
        vec![t],
        vec!["x".into()],
        vec![],
        vec![(datam::Pos::new(0, 0), "x".into())],
        1,
    )
    .unwrap();
    assert!(matches!(
        compile(&src, 100),
        Err(datam::Error::UnsupportedTemperature(1))
    ));
}

#[test]
fn scale_tracks_north_glue_count() {
    // Same dynamics, padded glue tables: the scale grows with
    // ceil(log2(|G_N|+1)) and nothing else.
    let mut scales = Vec::new();
    for pads in [0u32, 2, 6] {
        let src = make_gn_staircase(1, pads).unwrap();
        let out = compile(&src, 100_000).unwrap();
        scales.push((out.stats.north_glues, out.stats.half_bits, out.scale));
    }
    assert_eq!(scales[0], (2, 2, 40));
    assert_eq!(scales[1], (4, 3, 56));
    assert_eq!(scales[2], (8, 4, 72));
}

#[test]
fn bit_gadget_cells_match_probe_contract() {
    // bit=1: the duple's two cells are free, the singleton site is blocked.
    let g1 = emit_bit_gadget(true);
    assert!(g1.cells.contains(&g1.probes.singleton));
    assert!(!g1.cells.contains(&g1.probes.duple[0]));
    assert!(!g1.cells.contains(&g1.probes.duple[1]));
    // bit=0: the singleton site is free, the duple's far half is blocked.
    let g0 = emit_bit_gadget(false);
    assert!(!g0.cells.contains(&g0.probes.singleton));
    assert!(g0.cells.contains(&g0.probes.duple[1]));
}
