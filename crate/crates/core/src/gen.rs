//! Seeded instance generators for tests, benchmarks and the `gen` command.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Vertex, VertexSet};
use crate::instance::DisInstance;
use crate::pipeline::subdivide_once;

/// Probability that a random edge is a loop.
pub const LOOP_PROBABILITY: f64 = 0.04;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `m` uniformly random edge occurrences on `n` vertices; repeats give multi-edges.
pub fn random_multigraph(n: usize, m: usize, rng: &mut impl Rng) -> Result<MultiGraph> {
    if n == 0 && m > 0 {
        return Err(Error::invalid("edges need at least one vertex"));
    }
    let mut g = MultiGraph::with_vertices(n);
    for _ in 0..m {
        let u = rng.gen_range(0..n);
        let v = if n == 1 || rng.gen_bool(LOOP_PROBABILITY) {
            u
        } else {
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            v
        };
        g.add_edge(u, v)?;
    }
    Ok(g)
}

/// A graph with an independent feedback vertex set of size `k` built in.
#[derive(Clone, Debug)]
pub struct Planted {
    pub graph: MultiGraph,
    /// The planted set; only an upper-bound witness, not necessarily optimal.
    pub witness: VertexSet,
}

/// A random forest on `n - k` vertices plus `k` pairwise non-adjacent vertices, each joined
/// to two to four forest vertices. Every cycle passes through the planted set.
pub fn planted(n: usize, k: usize, rng: &mut impl Rng) -> Result<Planted> {
    if k > n || (k > 0 && n - k < 2) {
        return Err(Error::invalid(format!("cannot plant {k} vertices in a graph on {n}")));
    }
    let forest = n - k;
    let mut label: Vec<Vertex> = (0..n).collect();
    label.shuffle(rng);
    let mut g = MultiGraph::with_vertices(n);
    for i in 1..forest {
        if rng.gen_bool(0.85) {
            g.add_edge(label[i], label[rng.gen_range(0..i)])?;
        }
    }
    let mut witness = VertexSet::new();
    for i in forest..n {
        let want = rng.gen_range(2..=4).min(forest);
        let mut ends: Vec<usize> = (0..forest).collect();
        ends.shuffle(rng);
        for &j in &ends[..want] {
            g.add_edge(label[i], label[j])?;
        }
        witness.insert(label[i]);
    }
    Ok(Planted { graph: g, witness })
}

/// `subdivide_once` applied to a random multigraph.
pub fn subdivided(n: usize, m: usize, rng: &mut impl Rng) -> Result<MultiGraph> {
    Ok(subdivide_once(&random_multigraph(n, m, rng)?))
}

/// A disjoint instance in which every forest vertex is nice or a tent, with `pairs` forest
/// vertices and budget `pairs`.
pub fn base_case(pairs: usize, rng: &mut impl Rng) -> Result<DisInstance> {
    let trees = pairs / 2 + 3;
    let mut g = MultiGraph::new();
    let mut w = VertexSet::new();
    let mut members: Vec<Vec<Vertex>> = vec![];
    for _ in 0..trees {
        let size = rng.gen_range(1..=3);
        let mut tree = vec![];
        for i in 0..size {
            let v = g.add_vertex();
            if i > 0 {
                let p = tree[rng.gen_range(0..i)];
                g.add_edge(v, p)?;
            }
            tree.push(v);
            w.insert(v);
        }
        members.push(tree);
    }
    let mut ids: Vec<usize> = (0..trees).collect();
    for _ in 0..pairs {
        let v = g.add_vertex();
        let arms = if rng.gen_bool(0.5) { 2 } else { 3 };
        ids.shuffle(rng);
        for &t in &ids[..arms] {
            let tree = &members[t];
            g.add_edge(v, tree[rng.gen_range(0..tree.len())])?;
        }
    }
    DisInstance::new(g, w, VertexSet::new(), pairs as i64)
}

/// Names accepted by [`gadget`].
pub const GADGETS: [&str; 2] = ["promote", "observation"];

/// Hand-built scenarios.
///
/// `promote`: a vertex of R (4) with two P-nice neighbours (5, 7) and a P-tent neighbour (6).
/// The lowest applicable rule moves it into W.
///
/// `observation`: a reduced instance whose pivot (4) is a P-tent that is not P-nice and has a
/// P-tent neighbour (5) with two P-nice neighbours. Both branches on 4 drop the measure.
pub fn gadget(name: &str) -> Result<DisInstance> {
    let (edges, r): (&[(Vertex, Vertex)], &[Vertex]) = match name {
        "promote" => (
            &[
                (4, 5),
                (5, 0),
                (4, 6),
                (6, 1),
                (6, 2),
                (4, 7),
                (7, 3),
                (8, 0),
                (8, 1),
                (9, 2),
                (9, 3),
            ],
            &[4],
        ),
        "observation" => (
            &[
                (6, 0),
                (7, 1),
                (5, 6),
                (5, 7),
                (4, 5),
                (4, 8),
                (8, 2),
                (4, 3),
                (9, 0),
                (9, 1),
                (10, 2),
                (10, 3),
            ],
            &[],
        ),
        other => return Err(Error::invalid(format!("unknown gadget {other:?}"))),
    };
    let n = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0) + 1;
    let g = MultiGraph::from_edges(n, edges)?;
    DisInstance::new(g, (0..4).collect(), r.iter().copied().collect(), 3)
}

/// Shape of a random disjoint instance.
#[derive(Clone, Copy, Debug)]
pub struct DisParams {
    pub forest: usize,
    pub w: usize,
    /// Range of the number of edges from each forest vertex into W.
    pub min_w_edges: usize,
    pub max_w_edges: usize,
    /// Probability that a forest vertex is attached to an earlier one, in F and in W.
    pub f_attach: f64,
    pub w_attach: f64,
    pub r_probability: f64,
    /// Fixed budget; random in `0..=forest/2 + 1` when `None`.
    pub k: Option<i64>,
}

impl Default for DisParams {
    fn default() -> Self {
        Self {
            forest: 10,
            w: 6,
            min_w_edges: 0,
            max_w_edges: 3,
            f_attach: 0.7,
            w_attach: 0.7,
            r_probability: 0.2,
            k: None,
        }
    }
}

/// A random valid disjoint instance: forests on F and on W, random edges between them, a
/// random R and a random budget. Vertex ids are shuffled so F and W interleave.
pub fn random_disjoint(p: DisParams, rng: &mut impl Rng) -> Result<DisInstance> {
    if p.w == 0 && p.max_w_edges > 0 && p.forest > 0 {
        return Err(Error::invalid("edges into W need a non-empty W"));
    }
    if p.min_w_edges > p.max_w_edges {
        return Err(Error::invalid("min_w_edges exceeds max_w_edges"));
    }
    let n = p.forest + p.w;
    let mut label: Vec<Vertex> = (0..n).collect();
    label.shuffle(rng);
    let (fl, wl) = label.split_at(p.forest);
    let mut g = MultiGraph::with_vertices(n);
    for (part, attach) in [(fl, p.f_attach), (wl, p.w_attach)] {
        for i in 1..part.len() {
            if rng.gen_bool(attach) {
                g.add_edge(part[i], part[rng.gen_range(0..i)])?;
            }
        }
    }
    let mut r = VertexSet::new();
    for &v in fl {
        if p.w > 0 {
            for _ in 0..rng.gen_range(p.min_w_edges..=p.max_w_edges) {
                g.add_edge(v, wl[rng.gen_range(0..p.w)])?;
            }
        }
        if rng.gen_bool(p.r_probability) {
            r.insert(v);
        }
    }
    let k = p.k.unwrap_or_else(|| rng.gen_range(0..=p.forest as i64 / 2 + 1));
    DisInstance::new(g, wl.iter().copied().collect(), r, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_ifvs;
    use crate::reductions::{lowest_applicable, Rule};

    #[test]
    fn seeds_are_deterministic() {
        let a = random_multigraph(10, 20, &mut rng(5)).unwrap();
        let b = random_multigraph(10, 20, &mut rng(5)).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
        let a = random_disjoint(DisParams::default(), &mut rng(9)).unwrap();
        let b = random_disjoint(DisParams::default(), &mut rng(9)).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn planted_witness_is_a_solution() {
        let p = planted(20, 3, &mut rng(1)).unwrap();
        assert!(crate::instance::check_solution(&p.graph, &p.witness, 3));
        assert!(oracle_ifvs(&p.graph, 3).unwrap().is_some());
        for seed in 0..50 {
            let p = planted(30, 6, &mut rng(seed)).unwrap();
            assert_eq!(p.witness.len(), 6);
            assert!(crate::instance::check_solution(&p.graph, &p.witness, 6));
        }
    }

    #[test]
    fn subdivided_k5() {
        let mut k5 = MultiGraph::with_vertices(5);
        for a in 0..5 {
            for b in a + 1..5 {
                k5.add_edge(a, b).unwrap();
            }
        }
        let s = subdivide_once(&k5);
        assert_eq!(s.vertex_count(), 15);
        assert_eq!(oracle_ifvs(&s, 5).unwrap().unwrap().len(), 3);
    }

    #[test]
    fn base_case_classes() {
        for seed in 0..100 {
            let inst = base_case(5, &mut rng(seed)).unwrap();
            assert_eq!(inst.f().len(), 5);
            assert!(inst.f().iter().all(|&v| inst.is_nice(v) || inst.is_tent(v)));
        }
    }

    #[test]
    fn gadgets_are_valid() {
        let promote = gadget("promote").unwrap();
        assert_eq!(lowest_applicable(&promote).unwrap(), Some(Rule::PromoteR));
        let obs = gadget("observation").unwrap();
        assert_eq!(lowest_applicable(&obs).unwrap(), None);
        assert!(obs.is_ptent(4) && !obs.is_pnice(4) && obs.is_ptent(5));
        assert!(gadget("nope").is_err());
    }

    #[test]
    fn random_disjoint_is_valid() {
        for seed in 0..200 {
            let inst = random_disjoint(DisParams::default(), &mut rng(seed)).unwrap();
            assert!(inst.validate().is_ok());
        }
    }
}
