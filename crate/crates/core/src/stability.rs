//! τ-stability: every cut of the binding graph must have weight ≥ τ.
//!
//! Verification-mode check. The engine itself never calls this during growth;
//! seeded attachment with binding ≥ τ preserves stability incrementally.

use std::collections::HashMap;

use crate::assembly::Assembly;
use crate::geom::Pos;
use crate::tile::TileSystem;

/// Exact global min-cut test of the binding graph against τ.
///
/// For τ ≤ 2 this reduces to connectivity plus bridge inspection (every bond
/// has strength ≥ 1, so a cut crossed by two or more bonds already weighs 2).
/// Higher temperatures fall back to Stoer–Wagner.
pub fn is_tau_stable(asm: &Assembly, sys: &TileSystem, tau: u32) -> bool {
    if asm.is_empty() {
        return false;
    }
    if asm.len() == 1 {
        return true; // no cut exists
    }
    let edges = asm.bond_edges(sys);
    let index: HashMap<Pos, usize> = asm.domain().enumerate().map(|(i, p)| (p, i)).collect();
    let n = index.len();
    let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for (a, b, w) in &edges {
        let (ia, ib) = (index[a], index[b]);
        adj[ia].push((ib, *w as u64));
        adj[ib].push((ia, *w as u64));
    }

    if !bond_connected(&adj) {
        return false; // a zero-weight cut exists
    }
    match tau {
        0 | 1 => true,
        2 => !has_weight_one_bridge(&adj, &edges, &index),
        _ => stoer_wagner_min_cut(n, &edges, &index) >= tau as u64,
    }
}

fn bond_connected(adj: &[Vec<(usize, u64)>]) -> bool {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(u, _) in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == n
}

/// A cut of weight 1 exists iff some strength-1 bond is a bridge.
fn has_weight_one_bridge(
    adj: &[Vec<(usize, u64)>],
    edges: &[(Pos, Pos, u32)],
    index: &HashMap<Pos, usize>,
) -> bool {
    let n = adj.len();
    // Iterative Tarjan bridge finding over the multigraph; parallel edges
    // cannot be bridges, which the edge-id bookkeeping handles.
    let mut edge_list: Vec<(usize, usize)> = Vec::new();
    let mut g: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (to, edge id)
    for (a, b, _) in edges {
        let (ia, ib) = (index[a], index[b]);
        let id = edge_list.len();
        edge_list.push((ia, ib));
        g[ia].push((ib, id));
        g[ib].push((ia, id));
    }
    let mut disc = vec![0usize; n];
    let mut low = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut timer = 1usize;
    let mut bridges = vec![false; edge_list.len()];

    // Explicit stack: (vertex, incoming edge id, child iterator index).
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    visited[0] = true;
    disc[0] = timer;
    low[0] = timer;
    timer += 1;
    while let Some(&mut (v, pe, ref mut ci)) = stack.last_mut() {
        if *ci < g[v].len() {
            let (u, id) = g[v][*ci];
            *ci += 1;
            if id == pe {
                continue;
            }
            if visited[u] {
                low[v] = low[v].min(disc[u]);
            } else {
                visited[u] = true;
                disc[u] = timer;
                low[u] = timer;
                timer += 1;
                stack.push((u, id, 0));
            }
        } else {
            stack.pop();
            if let Some(&mut (parent, _, _)) = stack.last_mut() {
                low[parent] = low[parent].min(low[v]);
                if low[v] > disc[parent] {
                    bridges[pe] = true;
                }
            }
        }
    }

    edges
        .iter()
        .enumerate()
        .any(|(id, (_, _, w))| *w == 1 && bridges[id])
}

/// Stoer–Wagner global min cut. Quadratic per phase; fine at verification
/// scale (assemblies up to ~10⁴ cells, τ ≥ 3 rare).
fn stoer_wagner_min_cut(n: usize, edges: &[(Pos, Pos, u32)], index: &HashMap<Pos, usize>) -> u64 {
    if n < 2 {
        return u64::MAX;
    }
    let mut w = vec![vec![0u64; n]; n];
    for (a, b, wt) in edges {
        let (ia, ib) = (index[a], index[b]);
        w[ia][ib] += *wt as u64;
        w[ib][ia] += *wt as u64;
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    while active.len() > 1 {
        let m = active.len();
        let mut weights = vec![0u64; m];
        let mut added = vec![false; m];
        let mut prev = 0usize;
        let mut last = 0usize;
        for it in 0..m {
            let mut sel = usize::MAX;
            for i in 0..m {
                if !added[i] && (sel == usize::MAX || weights[i] > weights[sel]) {
                    sel = i;
                }
            }
            added[sel] = true;
            prev = last;
            last = sel;
            if it == m - 1 {
                best = best.min(weights[sel]);
            }
            for i in 0..m {
                if !added[i] {
                    weights[i] += w[active[sel]][active[i]];
                }
            }
        }
        // Merge the last-added vertex into the one added just before it.
        let (s, t) = (active[prev], active[last]);
        for i in 0..n {
            let add = w[t][i];
            w[s][i] += add;
            w[i][s] += add;
        }
        w[s][s] = 0;
        active.remove(last);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Axis, Direction, Pos};
    use crate::tile::{Glue, TileSystem, TileType};

    #[test]
    fn single_tile_is_stable() {
        let sys = TileSystem::new(
            "one",
            vec![TileType::new("x")],
            vec![],
            vec![],
            vec![(Pos::new(0, 0), "x".into())],
            2,
        )
        .unwrap();
        let asm = Assembly::seed_of(&sys);
        assert!(is_tau_stable(&asm, &sys, 2));
    }

    #[test]
    fn weak_bond_fails_tau_two() {
        let a = TileType::new("a").with_glue(Direction::East, Glue::new("g", 1));
        let b = TileType::new("b").with_glue(Direction::West, Glue::new("g", 1));
        let sys = TileSystem::new(
            "pair",
            vec![a, b],
            vec![],
            vec![],
            vec![(Pos::new(0, 0), "a".into()), (Pos::new(1, 0), "b".into())],
            1,
        )
        .unwrap();
        let asm = Assembly::seed_of(&sys);
        assert!(is_tau_stable(&asm, &sys, 1));
        assert!(!is_tau_stable(&asm, &sys, 2));
    }

    #[test]
    fn lone_duple_with_strength_two_bond_is_stable() {
        let a = TileType::new("a").with_glue(Direction::East, Glue::new("j", 2));
        let b = TileType::new("b").with_glue(Direction::West, Glue::new("j", 2));
        let sys = TileSystem::new(
            "duple",
            vec![a, b],
            vec![],
            vec![("a".into(), "b".into(), Axis::EastWest)],
            vec![(Pos::new(0, 0), "a".into()), (Pos::new(1, 0), "b".into())],
            2,
        )
        .unwrap();
        let asm = Assembly::seed_of(&sys);
        assert!(is_tau_stable(&asm, &sys, 2));
    }

    #[test]
    fn ring_of_weak_bonds_is_two_stable() {
        // A 2x2 ring of strength-1 bonds: every cut crosses >= 2 bonds.
        let mk = |n: &str, e: Option<&str>, no: Option<&str>, w: Option<&str>, s: Option<&str>| {
            let mut t = TileType::new(n);
            if let Some(g) = e {
                t = t.with_glue(Direction::East, Glue::new(g, 1));
            }
            if let Some(g) = no {
                t = t.with_glue(Direction::North, Glue::new(g, 1));
            }
            if let Some(g) = w {
                t = t.with_glue(Direction::West, Glue::new(g, 1));
            }
            if let Some(g) = s {
                t = t.with_glue(Direction::South, Glue::new(g, 1));
            }
            t
        };
        let sw = mk("sw", Some("s"), Some("w"), None, None);
        let se = mk("se", None, Some("e"), Some("s"), None);
        let nw = mk("nw", Some("n"), None, None, Some("w"));
        let ne = mk("ne", None, None, Some("n"), Some("e"));
        let sys = TileSystem::new(
            "ring",
            vec![sw, se, nw, ne],
            vec![],
            vec![],
            vec![
                (Pos::new(0, 0), "sw".into()),
                (Pos::new(1, 0), "se".into()),
                (Pos::new(0, 1), "nw".into()),
                (Pos::new(1, 1), "ne".into()),
            ],
            2,
        )
        .unwrap();
        let asm = Assembly::seed_of(&sys);
        assert!(is_tau_stable(&asm, &sys, 2));
        // tau=3 separates single corners (each held by weight 2).
        assert!(!is_tau_stable(&asm, &sys, 3));
    }
}
