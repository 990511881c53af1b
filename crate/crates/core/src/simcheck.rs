//! Bounded simulation checking: equivalent productions, clean mapping, and
//! the two dynamics conditions (follows / models), each verified over the
//! bounded producible sets with witnesses for every failure.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::engine::{enumerate_producibles, Bounds, ProducibleSet};
use crate::error::Result;
use crate::geom::Pos;
use crate::repr::RepresentationFunction;
use crate::tile::{TileId, TileSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationReport {
    pub productions: Outcome,
    pub production_witnesses: Vec<String>,
    pub cleanliness_violations: Vec<String>,
    pub follows: Outcome,
    pub follows_witnesses: Vec<String>,
    pub models: Outcome,
    pub models_witnesses: Vec<String>,
    /// True when either enumeration hit its bounds: passes are then only
    /// claims about the explored prefix.
    pub truncated: bool,
    pub sim_states: usize,
    pub spec_states: usize,
}

impl SimulationReport {
    pub fn all_passed(&self) -> bool {
        self.productions == Outcome::Pass
            && self.follows == Outcome::Pass
            && self.models == Outcome::Pass
            && self.cleanliness_violations.is_empty()
    }
}

type ImageKey = Vec<(Pos, TileId)>;

struct SpecGraph {
    key_of: Vec<ImageKey>,
    index: HashMap<ImageKey, usize>,
    edges: Vec<Vec<usize>>,
    terminals: BTreeSet<usize>,
}

fn spec_graph(set: &ProducibleSet) -> SpecGraph {
    let mut key_of = Vec::new();
    let mut index = HashMap::new();
    for asm in &set.assemblies {
        let k = asm.canonical_key();
        index.entry(k.clone()).or_insert_with(|| {
            key_of.push(k.clone());
            key_of.len() - 1
        });
    }
    let mut edges = vec![Vec::new(); key_of.len()];
    for asm in &set.assemblies {
        let from = index[&asm.canonical_key()];
        for p in crate::frontier::frontier(&set.system, asm) {
            let next = asm.with_placement(&set.system, &p);
            if let Some(&to) = index.get(&next.canonical_key()) {
                if !edges[from].contains(&to) {
                    edges[from].push(to);
                }
            }
        }
    }
    let terminals = set
        .terminal_indices
        .iter()
        .map(|i| index[&set.assemblies[*i].canonical_key()])
        .collect();
    SpecGraph {
        key_of,
        index,
        edges,
        terminals,
    }
}

/// Reachability closure over image indices: for each node, which nodes are
/// reachable in zero or more steps.
fn reach_sets(edges: &[Vec<usize>]) -> Vec<BTreeSet<usize>> {
    let n = edges.len();
    let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    // Nodes ordered by... iterate to fixpoint; graphs here are small DAGs.
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            let mut add: BTreeSet<usize> = BTreeSet::new();
            add.insert(v);
            for &w in &edges[v] {
                add.insert(w);
                for &x in &sets[w] {
                    add.insert(x);
                }
            }
            if add != sets[v] {
                sets[v] = add;
                changed = true;
            }
        }
    }
    sets
}

pub struct CheckInput<'a> {
    pub sim: &'a Arc<TileSystem>,
    pub spec: &'a Arc<TileSystem>,
    pub repr: &'a RepresentationFunction,
    pub bounds_sim: Bounds,
    pub bounds_spec: Bounds,
}

/// Run all bounded checks and produce one report.
///
/// The simulator side is explored with a streaming BFS that keeps frontiers
/// incrementally and drops assemblies once expanded, so chain-like compiled
/// systems check in time and memory linear in their cell count.
pub fn check_simulation(input: &CheckInput) -> Result<SimulationReport> {
    let spec_set = enumerate_producibles(
        input.spec,
        input.bounds_spec.max_cells,
        input.bounds_spec.max_states,
    );
    let sg = spec_graph(&spec_set);

    // Streaming exploration of the sim producibles.
    let mut cleanliness = Vec::new();
    let mut production_witnesses = Vec::new();
    let mode = input.repr.mode;
    let mut images: Vec<Option<usize>> = Vec::new();
    let mut sim_edges: Vec<Vec<usize>> = Vec::new();
    let mut sim_cells: Vec<usize> = Vec::new();
    let mut sim_terminal: Vec<bool> = Vec::new();
    let mut truncated = spec_set.truncated();
    {
        use std::collections::VecDeque;
        let mut seen: HashMap<u128, usize> = HashMap::new();
        let mut queue: VecDeque<(usize, crate::assembly::Assembly, crate::frontier::FrontierSet)> =
            VecDeque::new();
        let seed = crate::assembly::Assembly::seed_of(input.sim);
        let fs = crate::frontier::FrontierSet::full(input.sim, &seed);
        let mut classify_state = |i: usize,
                                  asm: &crate::assembly::Assembly,
                                  images: &mut Vec<Option<usize>>|
         -> Result<()> {
            let mapped = input.repr.map_assembly(input.sim, input.spec, asm)?;
            for v in mapped.clean_violations(mode) {
                cleanliness.push(format!("sim state {i}: fuzz too far at block {v}"));
            }
            let key: ImageKey = mapped.tiles.iter().map(|(p, t)| (*p, *t)).collect();
            match sg.index.get(&key) {
                Some(&idx) => images.push(Some(idx)),
                None => {
                    production_witnesses.push(format!(
                        "sim state {i} maps to a non-producible image ({} tiles)",
                        key.len()
                    ));
                    images.push(None);
                }
            }
            Ok(())
        };
        seen.insert(crate::hash::config_hash(&seed.canonical_key()), 0);
        classify_state(0, &seed, &mut images)?;
        sim_edges.push(Vec::new());
        sim_cells.push(seed.len());
        sim_terminal.push(fs.is_empty());
        queue.push_back((0, seed, fs));
        while let Some((idx, asm, fs)) = queue.pop_front() {
            if fs.is_empty() {
                continue;
            }
            if asm.len() >= input.bounds_sim.max_cells {
                truncated = true;
                continue;
            }
            let placements: Vec<crate::assembly::Placement> = fs.iter().copied().collect();
            for p in placements {
                let mut next = asm.clone();
                let mut nfs = fs.clone();
                next.apply_public(input.sim, &p);
                nfs.update_after(input.sim, &next, &p);
                let h = crate::hash::config_hash(&next.canonical_key());
                let nidx = match seen.get(&h) {
                    Some(&j) => j,
                    None => {
                        if images.len() >= input.bounds_sim.max_states {
                            truncated = true;
                            continue;
                        }
                        let j = images.len();
                        seen.insert(h, j);
                        classify_state(j, &next, &mut images)?;
                        sim_edges.push(Vec::new());
                        sim_cells.push(next.len());
                        sim_terminal.push(nfs.is_empty());
                        queue.push_back((j, next, nfs));
                        j
                    }
                };
                if !sim_edges[idx].contains(&nidx) {
                    sim_edges[idx].push(nidx);
                }
            }
        }
    }

    // Productions: image set == spec set, and terminal images == spec
    // terminals.
    let image_set: BTreeSet<usize> = images.iter().flatten().copied().collect();
    for idx in 0..sg.key_of.len() {
        if !image_set.contains(&idx) {
            production_witnesses.push(format!(
                "spec producible #{idx} ({} tiles) has no sim preimage",
                sg.key_of[idx].len()
            ));
        }
    }
    let sim_terminal_images: BTreeSet<usize> = (0..images.len())
        .filter(|i| sim_terminal[*i])
        .filter_map(|i| images[i])
        .collect();
    for &t in &sg.terminals {
        if !sim_terminal_images.contains(&t) {
            production_witnesses.push(format!("spec terminal #{t} unmatched by sim terminals"));
        }
    }
    for &t in &sim_terminal_images {
        if !sg.terminals.contains(&t) {
            production_witnesses.push(format!(
                "sim terminal maps to non-terminal spec assembly #{t}"
            ));
        }
    }

    // follows: every sim step maps to a spec path.
    let spec_reach = reach_sets(&sg.edges);
    let mut follows_witnesses = Vec::new();
    for (i, outs) in sim_edges.iter().enumerate() {
        for &j in outs {
            match (images[i], images[j]) {
                (Some(a), Some(b)) => {
                    if !spec_reach[a].contains(&b) {
                        follows_witnesses.push(format!(
                            "sim step {i}->{j} maps to spec {a}->{b}, not reachable"
                        ));
                    }
                }
                _ => follows_witnesses
                    .push(format!("sim step {i}->{j} leaves the spec production set")),
            }
        }
    }

    // models: for every spec step a->b, every sim preimage of a must reach
    // some sim preimage of b. Taking the preimage set for the definition's
    // witness set makes its closure clause hold by reflexivity. Growth only
    // adds cells, so cell count is a topological order and one reverse pass
    // computes each sim state's reachable image set.
    let mut order: Vec<usize> = (0..images.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(sim_cells[i]));
    let mut reach_images: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); images.len()];
    for &v in &order {
        let mut set = BTreeSet::new();
        if let Some(img) = images[v] {
            set.insert(img);
        }
        for &w in &sim_edges[v] {
            set.extend(reach_images[w].iter().copied());
        }
        reach_images[v] = set;
    }
    let mut models_witnesses = Vec::new();
    let mut preimages: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, img) in images.iter().enumerate() {
        if let Some(a) = img {
            preimages.entry(*a).or_default().push(i);
        }
    }
    for a in 0..sg.key_of.len() {
        for &b in &sg.edges[a] {
            let Some(pre_a) = preimages.get(&a) else { continue };
            for &ap in pre_a {
                if !reach_images[ap].contains(&b) {
                    models_witnesses.push(format!(
                        "spec step {a}->{b}: sim preimage state {ap} cannot reach any preimage of {b}"
                    ));
                }
            }
        }
    }

    let outcome = |witnesses: &Vec<String>| -> Outcome {
        if !witnesses.is_empty() {
            Outcome::Fail
        } else if truncated {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        }
    };
    Ok(SimulationReport {
        productions: outcome(&production_witnesses),
        production_witnesses,
        cleanliness_violations: cleanliness,
        follows: outcome(&follows_witnesses),
        follows_witnesses,
        models: outcome(&models_witnesses),
        models_witnesses,
        truncated,
        sim_states: images.len(),
        spec_states: spec_set.assemblies.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::ReprMode;
    use crate::geom::Direction;
    use crate::tile::{Glue, TileType};

    fn chain2() -> Arc<TileSystem> {
        let a = TileType::new("a").with_glue(Direction::East, Glue::new("g", 1));
        let b = TileType::new("b").with_glue(Direction::West, Glue::new("g", 1));
        TileSystem::new(
            "chain2",
            vec![a, b],
            vec!["a".into(), "b".into()],
            vec![],
            vec![(Pos::new(0, 0), "a".into())],
            1,
        )
        .unwrap()
    }

    #[test]
    fn identity_simulation_passes() {
        let sys = chain2();
        let repr = RepresentationFunction::identity(&sys);
        let report = check_simulation(&CheckInput {
            sim: &sys,
            spec: &sys,
            repr: &repr,
            bounds_sim: Bounds::default(),
            bounds_spec: Bounds::default(),
        })
        .unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn dead_end_preimage_fails_models() {
        // spec: a -> b. sim: a' -> b' (good) or a' -> d (occupies b's cell,
        // maps to empty): the {a',d} preimage of {a} cannot reach {a,b}.
        let spec = chain2();
        let a = TileType::new("a")
            .with_glue(Direction::East, Glue::new("g", 1))
            .with_glue(Direction::North, Glue::new("x", 1));
        let b = TileType::new("b").with_glue(Direction::West, Glue::new("g", 1));
        let d = TileType::new("d").with_glue(Direction::West, Glue::new("g", 1));
        let sim = TileSystem::new(
            "simbad",
            vec![a, b, d],
            vec!["a".into(), "b".into(), "d".into()],
            vec![],
            vec![(Pos::new(0, 0), "a".into())],
            1,
        )
        .unwrap();
        let mut markers = std::collections::BTreeMap::new();
        markers.insert("a".to_string(), "a".to_string());
        markers.insert("b".to_string(), "b".to_string());
        // d is unmapped: fuzz.
        let repr = RepresentationFunction {
            scale: 1,
            mode: ReprMode::Block,
            markers,
        };
        let report = check_simulation(&CheckInput {
            sim: &sim,
            spec: &spec,
            repr: &repr,
            bounds_sim: Bounds::default(),
            bounds_spec: Bounds::default(),
        })
        .unwrap();
        assert_eq!(report.models, Outcome::Fail);
        assert!(!report.models_witnesses.is_empty());
    }

    #[test]
    fn missing_production_detected() {
        // sim lacks any preimage for {a,b}: remove b'.
        let spec = chain2();
        let a = TileType::new("a").with_glue(Direction::East, Glue::new("nope", 1));
        let sim = TileSystem::new(
            "simmissing",
            vec![a],
            vec!["a".into()],
            vec![],
            vec![(Pos::new(0, 0), "a".into())],
            1,
        )
        .unwrap();
        let mut markers = std::collections::BTreeMap::new();
        markers.insert("a".to_string(), "a".to_string());
        let repr = RepresentationFunction {
            scale: 1,
            mode: ReprMode::Block,
            markers,
        };
        let report = check_simulation(&CheckInput {
            sim: &sim,
            spec: &spec,
            repr: &repr,
            bounds_sim: Bounds::default(),
            bounds_spec: Bounds::default(),
        })
        .unwrap();
        assert_eq!(report.productions, Outcome::Fail);
    }

    #[test]
    fn truncation_is_inconclusive() {
        let sys = chain2();
        let repr = RepresentationFunction::identity(&sys);
        let tiny = Bounds {
            max_cells: 1,
            max_states: 1,
        };
        let report = check_simulation(&CheckInput {
            sim: &sys,
            spec: &sys,
            repr: &repr,
            bounds_sim: tiny,
            bounds_spec: tiny,
        })
        .unwrap();
        assert_eq!(report.productions, Outcome::Inconclusive);
    }
}
