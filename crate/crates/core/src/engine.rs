//! Execution: single steps, full runs under a scheduling policy, and bounded
//! exhaustive enumeration of producible assemblies.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::assembly::{Assembly, Placement, PlacementKey};
use crate::error::{Error, Result};
use crate::frontier::{frontier, validate_placement, FrontierSet};
use crate::geom::Shape;
use crate::rng::Rng;
use crate::tile::{TileId, TileSystem};

/// How `run` picks among frontier placements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchedulerPolicy {
    /// Uniform choice with a fixed seed; equal seeds reproduce identical runs.
    Random(u64),
    /// First-in-first-out over placement discovery times; stale entries are
    /// dropped at pop. Realizes the fair scheduling used in the proofs.
    FairFifo,
    /// Smallest (y, x, type-name) placement first. Deterministic without RNG.
    LexMin,
}

/// A recorded valid run: the seed assembly plus an ordered list of placements,
/// each of which was in the frontier when applied.
#[derive(Clone, Debug)]
pub struct AssemblySequence {
    pub system: Arc<TileSystem>,
    pub placements: Vec<Placement>,
    /// True if the run ended with an empty frontier.
    pub reached_terminal: bool,
    result: Assembly,
}

impl AssemblySequence {
    /// Build a sequence by validating and applying `placements` from the seed.
    pub fn from_placements(
        system: Arc<TileSystem>,
        placements: Vec<Placement>,
    ) -> Result<AssemblySequence> {
        let mut asm = Assembly::seed_of(&system);
        for (i, p) in placements.iter().enumerate() {
            validate_placement(&system, &asm, p).map_err(|e| Error::SpliceInvalid {
                step: i,
                detail: e.to_string(),
            })?;
            asm.apply(&system, p);
        }
        let reached_terminal = frontier(&system, &asm).is_empty();
        Ok(AssemblySequence {
            system,
            placements,
            reached_terminal,
            result: asm,
        })
    }

    pub fn result(&self) -> &Assembly {
        &self.result
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    /// Replay the first `k` placements and return the intermediate assembly.
    pub fn snapshot(&self, k: usize) -> Assembly {
        let mut asm = Assembly::seed_of(&self.system);
        for p in self.placements.iter().take(k) {
            asm.apply(&self.system, p);
        }
        asm
    }

    /// The assembly just before placement `i`, the placement, and after.
    pub fn transitions(&self) -> TransitionIter<'_> {
        TransitionIter {
            seq: self,
            next: 0,
            current: Assembly::seed_of(&self.system),
        }
    }
}

pub struct TransitionIter<'a> {
    seq: &'a AssemblySequence,
    next: usize,
    current: Assembly,
}

impl TransitionIter<'_> {
    /// Advance, handing (index, before, placement, after) to the visitor.
    pub fn for_each(mut self, mut f: impl FnMut(usize, &Assembly, &Placement, &Assembly)) {
        while self.next < self.seq.placements.len() {
            let p = &self.seq.placements[self.next];
            let before = self.current.clone();
            self.current.apply(&self.seq.system, p);
            f(self.next, &before, p, &self.current);
            self.next += 1;
        }
    }
}

/// Apply one placement, validating frontier membership. The input assembly is
/// untouched.
pub fn step(sys: &TileSystem, asm: &Assembly, p: &Placement) -> Result<Assembly> {
    validate_placement(sys, asm, p)?;
    Ok(asm.with_placement(sys, p))
}

/// Run from the seed under a policy until the frontier empties or `max_steps`
/// placements have been made.
pub fn run(sys: &Arc<TileSystem>, policy: SchedulerPolicy, max_steps: usize) -> AssemblySequence {
    let mut asm = Assembly::seed_of(sys);
    let mut fs = FrontierSet::full(sys, &asm);
    let mut placements = Vec::new();
    let mut rng = match policy {
        SchedulerPolicy::Random(seed) => Some(Rng::new(seed)),
        _ => None,
    };
    // FairFifo bookkeeping: discovery-ordered queue of frontier entries.
    let mut fifo: VecDeque<Placement> = VecDeque::new();
    let mut queued: HashSet<PlacementKey> = HashSet::new();
    if policy == SchedulerPolicy::FairFifo {
        for p in fs.iter() {
            fifo.push_back(*p);
            queued.insert(p.order_key(sys));
        }
    }

    while placements.len() < max_steps && !fs.is_empty() {
        let chosen: Placement = match policy {
            SchedulerPolicy::LexMin => *fs.first().expect("nonempty"),
            SchedulerPolicy::Random(_) => {
                let idx = rng.as_mut().unwrap().below(fs.len());
                *fs.nth(idx).expect("index in range")
            }
            SchedulerPolicy::FairFifo => {
                let mut picked = None;
                while let Some(p) = fifo.pop_front() {
                    queued.remove(&p.order_key(sys));
                    // Stale if any cell is now occupied; binding only grows.
                    if p.positions(sys).iter().all(|c| !asm.occupied(*c)) {
                        picked = Some(p);
                        break;
                    }
                }
                match picked {
                    Some(p) => p,
                    None => break,
                }
            }
        };
        asm.apply(sys, &chosen);
        placements.push(chosen);
        let added = fs.update_after(sys, &asm, &chosen);
        if policy == SchedulerPolicy::FairFifo {
            for p in added {
                let k = p.order_key(sys);
                if queued.insert(k) {
                    fifo.push_back(p);
                }
            }
        }
    }
    let reached_terminal = fs.is_empty();
    AssemblySequence {
        system: sys.clone(),
        placements,
        reached_terminal,
        result: asm,
    }
}

/// Terminal iff the frontier is empty.
pub fn is_terminal(sys: &TileSystem, asm: &Assembly) -> bool {
    frontier(sys, asm).is_empty()
}

/// Bounded set of producible assemblies, deduplicated by configuration.
#[derive(Debug)]
pub struct ProducibleSet {
    pub system: Arc<TileSystem>,
    /// Every distinct producible configuration found, in discovery order.
    pub assemblies: Vec<Assembly>,
    /// Indices of terminal assemblies (empty frontier).
    pub terminal_indices: Vec<usize>,
    /// True if the cell bound stopped expansion somewhere.
    pub truncated_cells: bool,
    /// True if the state bound stopped exploration.
    pub truncated_states: bool,
    /// For each assembly, a placement path from the seed (by parent index).
    parents: Vec<Option<(usize, Placement)>>,
}

impl ProducibleSet {
    pub fn truncated(&self) -> bool {
        self.truncated_cells || self.truncated_states
    }

    pub fn terminals(&self) -> impl Iterator<Item = &Assembly> {
        self.terminal_indices.iter().map(|i| &self.assemblies[*i])
    }

    /// Reconstruct a placement path from the seed to assembly `i`.
    pub fn path_to(&self, i: usize) -> Vec<Placement> {
        let mut path = Vec::new();
        let mut cur = i;
        while let Some((parent, p)) = self.parents[cur] {
            path.push(p);
            cur = parent;
        }
        path.reverse();
        path
    }

    pub fn contains_configuration(&self, asm: &Assembly) -> bool {
        self.assemblies.iter().any(|a| a.same_configuration(asm))
    }
}

/// Breadth-first closure of the producible set under single attachments,
/// stopping at `max_cells` per assembly or `max_states` distinct
/// configurations.
pub fn enumerate_producibles(
    sys: &Arc<TileSystem>,
    max_cells: usize,
    max_states: usize,
) -> ProducibleSet {
    assert!(max_cells > 0 && max_states > 0, "bounds must be positive");
    let seed = Assembly::seed_of(sys);
    let mut seen: HashMap<Vec<(crate::geom::Pos, TileId)>, usize> = HashMap::new();
    let mut assemblies = Vec::new();
    let mut parents = Vec::new();
    let mut terminal_indices = Vec::new();
    let mut truncated_cells = false;
    let mut truncated_states = false;

    seen.insert(seed.canonical_key(), 0);
    assemblies.push(seed);
    parents.push(None);

    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(idx) = queue.pop_front() {
        let asm = assemblies[idx].clone();
        let f = frontier(sys, &asm);
        if f.is_empty() {
            terminal_indices.push(idx);
            continue;
        }
        if asm.len() >= max_cells {
            truncated_cells = true;
            continue;
        }
        for p in f {
            let next = asm.with_placement(sys, &p);
            let key = next.canonical_key();
            if seen.contains_key(&key) {
                continue;
            }
            if assemblies.len() >= max_states {
                truncated_states = true;
                continue;
            }
            let ni = assemblies.len();
            seen.insert(key, ni);
            assemblies.push(next);
            parents.push(Some((idx, p)));
            queue.push_back(ni);
        }
    }

    ProducibleSet {
        system: sys.clone(),
        assemblies,
        terminal_indices,
        truncated_cells,
        truncated_states,
        parents,
    }
}

/// Three-valued verdict for bounded checks.
#[derive(Clone, Debug)]
pub enum Verdict<W> {
    Yes,
    No(W),
    Unknown,
}

impl<W> Verdict<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes)
    }
    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }
    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown)
    }
}

/// Bounds for exhaustive exploration.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_cells: usize,
    pub max_states: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_cells: 10_000,
            max_states: 100_000,
        }
    }
}

/// Does the system place tiles on — and only on — the target shape, with
/// every terminal assembly's domain equal to it?
pub fn strictly_self_assembles(
    sys: &Arc<TileSystem>,
    target: &Shape,
    bounds: Bounds,
) -> Verdict<Assembly> {
    let set = enumerate_producibles(sys, bounds.max_cells, bounds.max_states);
    for asm in &set.assemblies {
        if asm.domain().any(|p| !target.contains(p)) {
            return Verdict::No(asm.clone());
        }
    }
    for t in set.terminals() {
        if t.shape() != *target {
            return Verdict::No(t.clone());
        }
    }
    if set.truncated() {
        Verdict::Unknown
    } else {
        Verdict::Yes
    }
}

/// Directed iff exactly one terminal assembly exists (bounded check).
pub fn is_directed_bounded(sys: &Arc<TileSystem>, bounds: Bounds) -> Verdict<(Assembly, Assembly)> {
    let set = enumerate_producibles(sys, bounds.max_cells, bounds.max_states);
    let terminals: Vec<&Assembly> = set.terminals().collect();
    for (i, a) in terminals.iter().enumerate() {
        for b in terminals.iter().skip(i + 1) {
            if !a.same_configuration(b) {
                return Verdict::No(((*a).clone(), (*b).clone()));
            }
        }
    }
    if set.truncated() {
        Verdict::Unknown
    } else {
        Verdict::Yes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Axis, Direction, Pos};
    use crate::tile::{Glue, TileType};

    fn chain_sys(n: usize) -> Arc<TileSystem> {
        // seed, then t1..tn chained east by strength-2 glues.
        let mut tiles = vec![TileType::new("seed").with_glue(Direction::East, Glue::new("g0", 2))];
        let mut singles = Vec::new();
        for i in 1..=n {
            let t = TileType::new(format!("t{i}"))
                .with_glue(Direction::West, Glue::new(format!("g{}", i - 1), 2))
                .with_glue(
                    Direction::East,
                    if i < n {
                        Glue::new(format!("g{i}"), 2)
                    } else {
                        Glue::null()
                    },
                );
            singles.push(t.name.clone());
            tiles.push(t);
        }
        TileSystem::new(
            "chain",
            tiles,
            singles,
            vec![],
            vec![(Pos::new(0, 0), "seed".into())],
            2,
        )
        .unwrap()
    }

    #[test]
    fn zero_steps_returns_seed() {
        let sys = chain_sys(3);
        let seq = run(&sys, SchedulerPolicy::LexMin, 0);
        assert_eq!(seq.len(), 0);
        assert_eq!(seq.result().len(), 1);
        assert!(!seq.reached_terminal);
    }

    #[test]
    fn chain_runs_to_terminal_under_all_policies() {
        let sys = chain_sys(5);
        for policy in [
            SchedulerPolicy::LexMin,
            SchedulerPolicy::FairFifo,
            SchedulerPolicy::Random(1),
            SchedulerPolicy::Random(99),
        ] {
            let seq = run(&sys, policy, 100);
            assert!(seq.reached_terminal);
            assert_eq!(seq.result().len(), 6);
        }
    }

    #[test]
    fn replay_determinism() {
        let sys = chain_sys(4);
        let a = run(&sys, SchedulerPolicy::Random(12345), 100);
        let b = run(&sys, SchedulerPolicy::Random(12345), 100);
        assert_eq!(a.placements, b.placements);
    }

    #[test]
    fn illegal_step_rejected() {
        let sys = chain_sys(2);
        let asm = Assembly::seed_of(&sys);
        let bad = Placement::Singleton {
            pos: Pos::new(0, 0),
            tile: sys.tile_by_name("t1").unwrap(),
        };
        assert!(matches!(step(&sys, &asm, &bad), Err(Error::IllegalStep(_))));
        let far = Placement::Singleton {
            pos: Pos::new(5, 5),
            tile: sys.tile_by_name("t1").unwrap(),
        };
        assert!(matches!(step(&sys, &asm, &far), Err(Error::IllegalStep(_))));
    }

    #[test]
    fn duple_step_adds_two_cells() {
        let seed = TileType::new("seed").with_glue(Direction::East, Glue::new("a", 1));
        let da = TileType::new("da")
            .with_glue(Direction::West, Glue::new("a", 1))
            .with_glue(Direction::North, Glue::new("p", 1));
        let db = TileType::new("db").with_glue(Direction::South, Glue::new("p", 1));
        let sys = TileSystem::new(
            "d",
            vec![seed, da, db],
            vec![],
            vec![("da".into(), "db".into(), Axis::NorthSouth)],
            vec![(Pos::new(0, 0), "seed".into())],
            1,
        )
        .unwrap();
        let asm = Assembly::seed_of(&sys);
        let f = frontier(&sys, &asm);
        assert_eq!(f.len(), 1);
        let next = step(&sys, &asm, &f[0]).unwrap();
        assert_eq!(next.len(), 3);
        assert_eq!(asm.len(), 1, "input untouched");
    }

    #[test]
    fn enumerate_glueless_seed() {
        let sys = TileSystem::new(
            "inert",
            vec![TileType::new("x")],
            vec!["x".into()],
            vec![],
            vec![(Pos::new(0, 0), "x".into())],
            1,
        )
        .unwrap();
        let set = enumerate_producibles(&sys, 10, 10);
        assert_eq!(set.assemblies.len(), 1);
        assert_eq!(set.terminal_indices, vec![0]);
        assert!(!set.truncated());
    }

    #[test]
    fn enumerate_two_independent_sides() {
        // Seed with matching glues east and west: producibles are seed, each
        // single extension, and both: 4 configurations (hand enumeration).
        let seed = TileType::new("seed")
            .with_glue(Direction::East, Glue::new("e", 1))
            .with_glue(Direction::West, Glue::new("w", 1));
        let r = TileType::new("r").with_glue(Direction::West, Glue::new("e", 1));
        let l = TileType::new("l").with_glue(Direction::East, Glue::new("w", 1));
        let sys = TileSystem::new(
            "both",
            vec![seed, r, l],
            vec!["r".into(), "l".into()],
            vec![],
            vec![(Pos::new(0, 0), "seed".into())],
            1,
        )
        .unwrap();
        let set = enumerate_producibles(&sys, 10, 100);
        assert_eq!(set.assemblies.len(), 4);
        assert_eq!(set.terminal_indices.len(), 1);
        assert!(!set.truncated());
    }

    #[test]
    fn enumerate_truncation_flagged() {
        let sys = chain_sys(6);
        let set = enumerate_producibles(&sys, 3, 100);
        assert!(set.truncated_cells);
        let set2 = enumerate_producibles(&sys, 100, 3);
        assert!(set2.truncated_states);
    }

    #[test]
    fn directed_chain_and_policy_agreement() {
        let sys = chain_sys(4);
        assert!(is_directed_bounded(&sys, Bounds::default()).is_yes());
        let a = run(&sys, SchedulerPolicy::LexMin, 100);
        let b = run(&sys, SchedulerPolicy::FairFifo, 100);
        let c = run(&sys, SchedulerPolicy::Random(7), 100);
        assert!(a.result().same_configuration(b.result()));
        assert!(a.result().same_configuration(c.result()));
    }

    #[test]
    fn strict_self_assembly_of_chain() {
        let sys = chain_sys(3);
        let target: Shape = (0..4).map(|x| Pos::new(x, 0)).collect();
        assert!(strictly_self_assembles(&sys, &target, Bounds::default()).is_yes());
        let wrong: Shape = (0..3).map(|x| Pos::new(x, 0)).collect();
        assert!(strictly_self_assembles(&sys, &wrong, Bounds::default()).is_no());
        let tiny = Bounds {
            max_cells: 2,
            max_states: 2,
        };
        assert!(strictly_self_assembles(&sys, &target, tiny).is_unknown());
    }

    #[test]
    fn sequence_prefixes_validate() {
        let sys = chain_sys(4);
        let seq = run(&sys, SchedulerPolicy::LexMin, 100);
        // Re-validating the recorded placements must succeed.
        let rebuilt =
            AssemblySequence::from_placements(sys.clone(), seq.placements.clone()).unwrap();
        assert!(rebuilt.result().same_configuration(seq.result()));
        // Domains grow by 1 or 2 cells per step, never more.
        let mut prev = 1;
        for k in 1..=seq.len() {
            let n = seq.snapshot(k).len();
            assert!(n == prev + 1 || n == prev + 2);
            prev = n;
        }
    }
}
