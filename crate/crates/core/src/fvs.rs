//! Exact minimum feedback vertex set, used to seed the pipeline with a set `Z`.
//!
//! Branch-and-bound with iterative deepening: reduce, bound by a greedy packing of
//! vertex-disjoint cycles, then branch over the vertices of a shortest cycle.

use std::collections::VecDeque;

use crate::graph::{MultiGraph, Vertex, VertexSet};

/// Some feedback vertex set of size at most `k`, or `None` if every one is larger.
pub fn fvs_at_most(g: &MultiGraph, k: i64) -> Option<VertexSet> {
    let found = search(g.clone(), k);
    if let Some(s) = &found {
        debug_assert!(g.without(s).map(|h| h.is_acyclic()).unwrap_or(false));
    }
    found
}

/// A minimum-cardinality feedback vertex set.
pub fn min_fvs(g: &MultiGraph) -> VertexSet {
    let mut h = g.clone();
    let mut forced = VertexSet::new();
    reduce(&mut h, &mut forced);
    let mut k = cycle_packing_bound(&h) as i64;
    loop {
        if let Some(mut s) = search(h.clone(), k) {
            s.extend(forced);
            debug_assert!(g.without(&s).map(|x| x.is_acyclic()).unwrap_or(false));
            return s;
        }
        k += 1;
    }
}

/// Number of vertex-disjoint cycles found greedily. A lower bound on any feedback vertex set.
pub fn cycle_packing_bound(g: &MultiGraph) -> usize {
    let mut h = g.clone();
    let mut count = 0;
    loop {
        let mut sink = VertexSet::new();
        let loops: Vec<Vertex> = h.vertices().filter(|&v| h.loops(v) > 0).collect();
        count += loops.len();
        for v in loops {
            h.remove_vertex(v).expect("live vertex");
        }
        reduce(&mut h, &mut sink);
        count += sink.len();
        match shortest_cycle(&h) {
            Some(c) => {
                h.remove_vertices(&c).expect("live vertices");
                count += 1;
            }
            None => return count,
        }
    }
}

fn search(mut g: MultiGraph, k: i64) -> Option<VertexSet> {
    let mut taken = VertexSet::new();
    reduce(&mut g, &mut taken);
    let k = k - taken.len() as i64;
    if k < 0 {
        return None;
    }
    let Some(cycle) = shortest_cycle(&g) else {
        return Some(taken);
    };
    if k == 0 || cycle_packing_bound(&g) as i64 > k {
        return None;
    }
    // most constrained first: high-degree vertices tend to close more cycles
    let mut order: Vec<Vertex> = cycle.into_iter().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v).unwrap_or(0)), v));
    for v in order {
        let mut h = g.clone();
        h.remove_vertex(v).expect("live vertex");
        if let Some(mut s) = search(h, k - 1) {
            s.insert(v);
            s.extend(taken);
            return Some(s);
        }
    }
    None
}

/// Exhaustive reductions: loops force their vertex, degree ≤ 1 vertices go, degree-2 vertices
/// are bypassed.
fn reduce(g: &mut MultiGraph, taken: &mut VertexSet) {
    loop {
        let mut changed = false;
        let vs: Vec<Vertex> = g.vertices().collect();
        for v in vs {
            if !g.contains(v) {
                continue;
            }
            if g.loops(v) > 0 {
                g.remove_vertex(v).expect("live vertex");
                taken.insert(v);
                changed = true;
                continue;
            }
            let deg = g.degree(v).expect("live vertex");
            if deg <= 1 {
                g.remove_vertex(v).expect("live vertex");
                changed = true;
            } else if deg == 2 {
                let ends: Vec<Vertex> = g
                    .incident(v)
                    .expect("live vertex")
                    .flat_map(|(u, m)| std::iter::repeat_n(u, m))
                    .collect();
                g.remove_vertex(v).expect("live vertex");
                // a double edge to a single neighbour becomes a loop there
                g.add_edge(ends[0], ends[1]).expect("live endpoints");
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

// (length, closing edge, BFS parents, BFS distances)
type Hit = (usize, Vertex, Vertex, Vec<Option<Vertex>>, Vec<usize>);

/// Vertex set of a shortest cycle, or `None` for a forest. Assumes no loops.
fn shortest_cycle(g: &MultiGraph) -> Option<VertexSet> {
    if let Some((u, v, _)) = g.edges().find(|&(u, v, m)| u != v && m >= 2) {
        return Some([u, v].into_iter().collect());
    }
    let n = g.id_bound();
    let mut best: Option<Hit> = None;
    for s in g.vertices() {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![None; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut hit = None;
        'bfs: while let Some(u) = queue.pop_front() {
            if let Some((len, ..)) = &best {
                if 2 * dist[u] + 1 >= *len {
                    break;
                }
            }
            for w in g.neighbors(u).expect("live vertex") {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = Some(u);
                    queue.push_back(w);
                } else if parent[u] != Some(w) {
                    hit = Some((dist[u] + dist[w] + 1, u, w));
                    break 'bfs;
                }
            }
        }
        if let Some((len, u, w)) = hit {
            if best.as_ref().is_none_or(|b| len < b.0) {
                best = Some((len, u, w, parent, dist));
            }
        }
    }
    let (_, mut u, mut w, parent, dist) = best?;
    let mut set = VertexSet::from([u, w]);
    while u != w {
        if dist[u] >= dist[w] {
            u = parent[u].expect("below the root");
            set.insert(u);
        } else {
            w = parent[w].expect("below the root");
            set.insert(w);
        }
    }
    Some(set)
}
