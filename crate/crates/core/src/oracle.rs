//! Brute-force reference answers.
//!
//! These enumerate vertex subsets by increasing size and test each candidate with a
//! self-contained edge-list union-find, so they share no code path with the solver.

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Vertex, VertexSet};
use crate::instance::DisInstance;

/// Largest number of candidate vertices the oracles will enumerate. Disjoint instances may
/// carry up to 64 vertices in total.
pub const ORACLE_LIMIT: usize = 22;

/// Dense edge-list copy of a graph: vertices `0..n`, edges with multiplicity.
struct Dense {
    ids: Vec<Vertex>,
    edges: Vec<(usize, usize, usize)>,
    adj: Vec<u64>,
}

impl Dense {
    fn new(g: &MultiGraph) -> Self {
        let ids: Vec<Vertex> = g.vertices().collect();
        let pos = |v: Vertex| ids.binary_search(&v).expect("edge endpoint is a vertex");
        let edges: Vec<(usize, usize, usize)> =
            g.edges().map(|(u, v, m)| (pos(u), pos(v), m)).collect();
        let mut adj = vec![0u64; ids.len()];
        for &(a, b, _) in &edges {
            if a != b {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
        Self { ids, edges, adj }
    }

    fn mask_of(&self, set: &VertexSet) -> u64 {
        self.ids
            .iter()
            .enumerate()
            .filter(|(_, v)| set.contains(v))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    fn set_of(&self, mask: u64) -> VertexSet {
        (0..self.ids.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.ids[i])
            .collect()
    }

    fn independent(&self, mask: u64) -> bool {
        (0..self.ids.len()).all(|i| mask >> i & 1 == 0 || self.adj[i] & mask == 0)
    }

    /// True iff deleting `mask` leaves an acyclic graph.
    fn forest_without(&self, mask: u64) -> bool {
        let mut parent: Vec<usize> = (0..self.ids.len()).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        for &(a, b, m) in &self.edges {
            if mask >> a & 1 == 1 || mask >> b & 1 == 1 {
                continue;
            }
            if a == b || m >= 2 {
                return false;
            }
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

/// Subsets of `pool` with exactly `size` bits, in increasing numeric order.
fn subsets_of_size(pool: u64, size: usize) -> impl Iterator<Item = u64> {
    let bits: Vec<u32> = (0..64).filter(|i| pool >> i & 1 == 1).collect();
    let n = bits.len();
    let mut comb: Option<u64> = (size <= n).then(|| (1u64 << size) - 1);
    std::iter::from_fn(move || {
        let c = comb?;
        if c >> n != 0 {
            return None;
        }
        // Gosper's hack
        comb = if c == 0 {
            None
        } else {
            let low = c & c.wrapping_neg();
            let ripple = c + low;
            Some((((ripple ^ c) >> 2) / low) | ripple)
        };
        Some(
            bits.iter()
                .enumerate()
                .filter(|(j, _)| c >> j & 1 == 1)
                .fold(0u64, |m, (_, &b)| m | 1 << b),
        )
    })
}

fn search(
    d: &Dense,
    pool: u64,
    k: i64,
    need_independent: bool,
) -> Option<VertexSet> {
    if k < 0 {
        return None;
    }
    let max = (k as usize).min(pool.count_ones() as usize);
    for size in 0..=max {
        for mask in subsets_of_size(pool, size) {
            if (!need_independent || d.independent(mask)) && d.forest_without(mask) {
                return Some(d.set_of(mask));
            }
        }
    }
    None
}

/// Minimum independent feedback vertex set of size at most `k`.
pub fn oracle_ifvs(g: &MultiGraph, k: i64) -> Result<Option<VertexSet>> {
    if g.vertex_count() > ORACLE_LIMIT {
        return Err(Error::Refused(format!(
            "{} vertices exceed the oracle limit of {ORACLE_LIMIT}",
            g.vertex_count()
        )));
    }
    let d = Dense::new(g);
    let pool = (1u64 << d.ids.len()) - 1;
    Ok(search(&d, pool, k, true))
}

/// Minimum feedback vertex set, without the independence requirement.
pub fn oracle_min_fvs(g: &MultiGraph) -> Result<VertexSet> {
    if g.vertex_count() > ORACLE_LIMIT {
        return Err(Error::Refused(format!(
            "{} vertices exceed the oracle limit of {ORACLE_LIMIT}",
            g.vertex_count()
        )));
    }
    let d = Dense::new(g);
    let pool = (1u64 << d.ids.len()) - 1;
    Ok(search(&d, pool, d.ids.len() as i64, false).expect("deleting everything leaves a forest"))
}

/// Minimum solution of a disjoint instance: independent, inside `F \ R`, of size at most `k`.
pub fn oracle_disjoint(inst: &DisInstance) -> Result<Option<VertexSet>> {
    let candidates: VertexSet = inst.deletable().collect();
    if candidates.len() > ORACLE_LIMIT || inst.graph().vertex_count() > 64 {
        return Err(Error::Refused(format!(
            "{} candidates / {} vertices exceed the oracle limits",
            candidates.len(),
            inst.graph().vertex_count()
        )));
    }
    let d = Dense::new(inst.graph());
    Ok(search(&d, d.mask_of(&candidates), inst.k(), true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> MultiGraph {
        let mut edges = vec![];
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        MultiGraph::from_edges(n, &edges).unwrap()
    }

    fn cycle(n: usize) -> MultiGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MultiGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn gosper_counts() {
        assert_eq!(subsets_of_size(0b1111, 2).count(), 6);
        assert_eq!(subsets_of_size(0b1010_1010, 3).count(), 4);
        assert_eq!(subsets_of_size(0b1, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(subsets_of_size(0b1, 2).count(), 0);
        assert!(subsets_of_size(0b1100, 1).all(|m| m & !0b1100 == 0));
    }

    #[test]
    fn cycle_five() {
        assert_eq!(oracle_ifvs(&cycle(5), 1).unwrap().unwrap().len(), 1);
        assert_eq!(oracle_ifvs(&cycle(5), 0).unwrap(), None);
    }

    #[test]
    fn k4_is_never_solvable() {
        for k in 0..=4 {
            assert_eq!(oracle_ifvs(&complete(4), k).unwrap(), None);
        }
    }

    #[test]
    fn two_triangles() {
        let g = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(oracle_ifvs(&g, 2).unwrap().unwrap().len(), 2);
        assert_eq!(oracle_ifvs(&g, 1).unwrap(), None);
    }

    #[test]
    fn min_fvs_of_k5() {
        assert_eq!(oracle_min_fvs(&complete(5)).unwrap().len(), 3);
    }

    #[test]
    fn guard() {
        let g = MultiGraph::with_vertices(23);
        assert!(matches!(oracle_ifvs(&g, 1), Err(Error::Refused(_))));
    }

    #[test]
    fn disjoint_examples() {
        let set = |xs: &[Vertex]| xs.iter().copied().collect::<VertexSet>();
        let g = MultiGraph::from_edges(2, &[(0, 1)]).unwrap();
        let i = DisInstance::new(g, set(&[0, 1]), VertexSet::new(), 0).unwrap();
        assert_eq!(oracle_disjoint(&i).unwrap(), Some(VertexSet::new()));

        let g = MultiGraph::from_edges(3, &[(2, 0), (2, 1)]).unwrap();
        let i = DisInstance::new(g, set(&[0, 1]), VertexSet::new(), 0).unwrap();
        assert_eq!(oracle_disjoint(&i).unwrap(), Some(VertexSet::new()));

        // protected vertex 2 closes a cycle with the W path 0-1
        let g = MultiGraph::from_edges(3, &[(0, 1), (2, 0), (2, 1)]).unwrap();
        let i = DisInstance::new(g, set(&[0, 1]), set(&[2]), 5).unwrap();
        assert_eq!(oracle_disjoint(&i).unwrap(), None);
    }

    #[test]
    fn agrees_with_disjoint_on_empty_w() {
        let g = cycle(6);
        let i = DisInstance::new_unchecked(g.clone(), VertexSet::new(), VertexSet::new(), 3);
        assert_eq!(
            oracle_ifvs(&g, 3).unwrap().map(|s| s.len()),
            oracle_disjoint(&i).unwrap().map(|s| s.len())
        );
    }
}
