//! The 18-type finger/flagpole system: two arms of nondeterministic lengths,
//! inward fingers, and a keystone that binds through the only cooperative
//! step (two strength-1 glues) exactly when the fingers align — then a
//! flagpole and a three-tile flag.

use std::sync::Arc;

use crate::error::Result;
use crate::geom::{Direction, Pos};
use crate::tile::{Glue, TileSystem, TileType};

pub fn make_finger_flagpole() -> Result<Arc<TileSystem>> {
    let s2 = |l: &str| Glue::new(l, 2);
    let s1 = |l: &str| Glue::new(l, 1);
    let tiles = vec![
        // 1: seed, necks grow from both vertical faces.
        TileType::new("seed")
            .with_glue(Direction::North, s2("nt"))
            .with_glue(Direction::South, s2("nb")),
        // 2-3: top neck, then the top arm start.
        TileType::new("tn")
            .with_glue(Direction::South, s2("nt"))
            .with_glue(Direction::North, s2("nt2")),
        TileType::new("ts")
            .with_glue(Direction::South, s2("nt2"))
            .with_glue(Direction::East, s2("ta")),
        // 4: top arm repeat — the common east-west glue makes lengths
        // nondeterministic (the end tile competes for every east cell).
        TileType::new("ta")
            .with_glue(Direction::West, s2("ta"))
            .with_glue(Direction::East, s2("ta")),
        // 5: top arm end turning down.
        TileType::new("te")
            .with_glue(Direction::West, s2("ta"))
            .with_glue(Direction::South, s2("td")),
        // 6: top finger tip; g11 is strength 1.
        TileType::new("tf")
            .with_glue(Direction::North, s2("td"))
            .with_glue(Direction::South, s1("g11")),
        // 7-11: bottom mirror.
        TileType::new("bn")
            .with_glue(Direction::North, s2("nb"))
            .with_glue(Direction::South, s2("nb2")),
        TileType::new("bs")
            .with_glue(Direction::North, s2("nb2"))
            .with_glue(Direction::East, s2("ba")),
        TileType::new("ba")
            .with_glue(Direction::West, s2("ba"))
            .with_glue(Direction::East, s2("ba")),
        TileType::new("be")
            .with_glue(Direction::West, s2("ba"))
            .with_glue(Direction::North, s2("bd")),
        TileType::new("bf")
            .with_glue(Direction::South, s2("bd"))
            .with_glue(Direction::North, s1("g14")),
        // 12: keystone — the single cooperative attachment.
        TileType::new("keystone")
            .with_glue(Direction::North, s1("g11"))
            .with_glue(Direction::South, s1("g14"))
            .with_glue(Direction::East, s2("kf")),
        // 13-15: flagpole.
        TileType::new("fp1")
            .with_glue(Direction::West, s2("kf"))
            .with_glue(Direction::North, s2("fp")),
        TileType::new("fp2")
            .with_glue(Direction::South, s2("fp"))
            .with_glue(Direction::North, s2("fp2")),
        TileType::new("fp3")
            .with_glue(Direction::South, s2("fp2"))
            .with_glue(Direction::East, s2("fg")),
        // 16-18: the flag.
        TileType::new("flag1")
            .with_glue(Direction::West, s2("fg"))
            .with_glue(Direction::East, s2("fg2")),
        TileType::new("flag2")
            .with_glue(Direction::West, s2("fg2"))
            .with_glue(Direction::South, s2("fg3")),
        TileType::new("flag3").with_glue(Direction::North, s2("fg3")),
    ];
    let names = tiles.iter().map(|t| t.name.clone()).collect();
    TileSystem::new(
        "finger-flagpole",
        tiles,
        names,
        vec![],
        vec![(Pos::new(0, 0), "seed".into())],
        2,
    )
}

/// Build the assembly with pinned arm lengths (number of `ta`/`ba` repeats
/// plus the end tile) and run the rest to quiescence deterministically.
pub fn pinned_arms(
    sys: &Arc<TileSystem>,
    top_len: u32,
    bottom_len: u32,
) -> crate::engine::AssemblySequence {
    use crate::assembly::Placement;
    let t = |n: &str| sys.tile_by_name(n).unwrap();
    let mut placements = Vec::new();
    // Necks and arm starts.
    placements.push(Placement::Singleton { pos: Pos::new(0, 1), tile: t("tn") });
    placements.push(Placement::Singleton { pos: Pos::new(0, 2), tile: t("ts") });
    placements.push(Placement::Singleton { pos: Pos::new(0, -1), tile: t("bn") });
    placements.push(Placement::Singleton { pos: Pos::new(0, -2), tile: t("bs") });
    for i in 1..=top_len as i32 {
        let name = if i == top_len as i32 { "te" } else { "ta" };
        placements.push(Placement::Singleton { pos: Pos::new(i, 2), tile: t(name) });
    }
    for i in 1..=bottom_len as i32 {
        let name = if i == bottom_len as i32 { "be" } else { "ba" };
        placements.push(Placement::Singleton { pos: Pos::new(i, -2), tile: t(name) });
    }
    let seq = crate::engine::AssemblySequence::from_placements(sys.clone(), placements)
        .expect("pinned arms are valid placements");
    // Continue deterministically: fingers, keystone (if aligned), flagpole,
    // flag. LexMin on the remaining frontier.
    let mut asm = seq.result().clone();
    let mut all = seq.placements.clone();
    loop {
        let f = crate::frontier::frontier(sys, &asm);
        // Don't extend the arms further; arms are pinned.
        let next = f.into_iter().find(|p| {
            !matches!(p, Placement::Singleton { tile, .. }
                if ["ta", "te", "ba", "be"].contains(&sys.tile(*tile).name.as_str()))
        });
        match next {
            Some(p) => {
                asm.apply_public(sys, &p);
                all.push(p);
            }
            None => break,
        }
    }
    crate::engine::AssemblySequence::from_placements(sys.clone(), all).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_eighteen_types() {
        let sys = make_finger_flagpole().unwrap();
        assert_eq!(sys.tile_count(), 18);
        // Exactly g11 and g14 are strength 1.
        let mut weak = std::collections::BTreeSet::new();
        for (_, t) in sys.tiles() {
            for d in crate::geom::Direction::ALL {
                let g = t.glue(d);
                if g.strength == 1 {
                    weak.insert(g.label.clone());
                }
            }
        }
        assert_eq!(
            weak.into_iter().collect::<Vec<_>>(),
            vec!["g11".to_string(), "g14".to_string()]
        );
    }

    #[test]
    fn equal_arms_place_keystone_flagpole_flag() {
        let sys = make_finger_flagpole().unwrap();
        let seq = pinned_arms(&sys, 3, 3);
        let names: std::collections::BTreeSet<String> = seq
            .result()
            .iter()
            .map(|(_, c)| sys.tile(c.tile).name.clone())
            .collect();
        for need in ["keystone", "fp1", "fp2", "fp3", "flag1", "flag2", "flag3"] {
            assert!(names.contains(need), "missing {need}");
        }
    }

    #[test]
    fn unequal_arms_stop_at_finger_tips() {
        let sys = make_finger_flagpole().unwrap();
        let seq = pinned_arms(&sys, 3, 5);
        let names: std::collections::BTreeSet<String> = seq
            .result()
            .iter()
            .map(|(_, c)| sys.tile(c.tile).name.clone())
            .collect();
        assert!(names.contains("tf") && names.contains("bf"), "tips placed");
        for absent in ["keystone", "fp1", "flag1"] {
            assert!(!names.contains(absent), "{absent} must not appear");
        }
    }

    #[test]
    fn keystone_needs_both_weak_glues() {
        use crate::assembly::Placement;
        let sys = make_finger_flagpole().unwrap();
        let seq = pinned_arms(&sys, 3, 3);
        // Find the keystone placement in the recorded sequence and check it
        // was cooperative: rebuild the assembly just before it.
        let key_idx = seq
            .placements
            .iter()
            .position(|p| matches!(p, Placement::Singleton { tile, .. }
                if sys.tile(*tile).name == "keystone"))
            .expect("keystone placed");
        let before = seq.snapshot(key_idx);
        let key = seq.placements[key_idx];
        assert!(crate::frontier::validate_placement(&sys, &before, &key).is_ok());
        // Remove either finger tip: the keystone leaves the frontier.
        for tip in ["tf", "bf"] {
            let mut partial = crate::assembly::Assembly::seed_of(&sys);
            for p in &seq.placements[..key_idx] {
                let skip = matches!(p, Placement::Singleton { tile, .. }
                    if sys.tile(*tile).name == tip);
                if !skip {
                    // Skipping a tip may orphan nothing else; all other
                    // placements stay valid.
                    if crate::frontier::validate_placement(&sys, &partial, p).is_ok() {
                        partial.apply_public(&sys, p);
                    }
                }
            }
            assert!(
                crate::frontier::validate_placement(&sys, &partial, &key).is_err(),
                "keystone must not attach without {tip}"
            );
        }
    }
}
