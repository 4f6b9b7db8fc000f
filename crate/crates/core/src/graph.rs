//! Undirected multigraph with loops and stable vertex ids.
//!
//! Edge multiplicities are stored exactly. A loop at `v` is stored as
//! `adj[v][v] = count` and contributes `2 * count` to the degree of `v`.
//! Vertex ids are handed out sequentially and never reused after deletion.

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiGraph {
    adj: Vec<Option<BTreeMap<Vertex, usize>>>,
    live: usize,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with vertices `0..n` and no edges.
    pub fn with_vertices(n: usize) -> Self {
        Self {
            adj: vec![Some(BTreeMap::new()); n],
            live: n,
        }
    }

    /// Builds a graph on `0..n` from an edge list; repeated pairs raise the multiplicity.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Some(BTreeMap::new()));
        self.live += 1;
        self.adj.len() - 1
    }

    /// One past the largest id ever allocated.
    pub fn id_bound(&self) -> usize {
        self.adj.len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        matches!(self.adj.get(v), Some(Some(_)))
    }

    pub fn vertex_count(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj
            .iter()
            .enumerate()
            .filter_map(|(v, a)| a.as_ref().map(|_| v))
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    fn row(&self, v: Vertex) -> Result<&BTreeMap<Vertex, usize>> {
        self.adj
            .get(v)
            .and_then(Option::as_ref)
            .ok_or(Error::UnknownVertex(v))
    }

    fn row_mut(&mut self, v: Vertex) -> Result<&mut BTreeMap<Vertex, usize>> {
        self.adj
            .get_mut(v)
            .and_then(Option::as_mut)
            .ok_or(Error::UnknownVertex(v))
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.add_edge_with_multiplicity(u, v, 1)
    }

    pub fn add_edge_with_multiplicity(&mut self, u: Vertex, v: Vertex, mult: usize) -> Result<()> {
        self.row(u)?;
        self.row(v)?;
        if mult == 0 {
            return Ok(());
        }
        *self.row_mut(u)?.entry(v).or_insert(0) += mult;
        if u != v {
            *self.row_mut(v)?.entry(u).or_insert(0) += mult;
        }
        Ok(())
    }

    /// Removes one occurrence of the edge `uv`. Returns false if no such edge exists.
    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        self.row(v)?;
        let row = self.row_mut(u)?;
        match row.get_mut(&v) {
            None => return Ok(false),
            Some(m) if *m > 1 => *m -= 1,
            Some(_) => {
                row.remove(&v);
            }
        }
        if u != v {
            let other = self.row_mut(v)?;
            match other.get_mut(&u) {
                Some(m) if *m > 1 => *m -= 1,
                _ => {
                    other.remove(&u);
                }
            }
        }
        Ok(true)
    }

    /// Removes `v` together with all incident edges.
    pub fn remove_vertex(&mut self, v: Vertex) -> Result<()> {
        let row = self
            .adj
            .get_mut(v)
            .and_then(Option::take)
            .ok_or(Error::UnknownVertex(v))?;
        for u in row.keys() {
            if *u != v {
                if let Some(Some(r)) = self.adj.get_mut(*u) {
                    r.remove(&v);
                }
            }
        }
        self.live -= 1;
        Ok(())
    }

    pub fn remove_vertices<'a>(&mut self, vs: impl IntoIterator<Item = &'a Vertex>) -> Result<()> {
        for &v in vs {
            self.remove_vertex(v)?;
        }
        Ok(())
    }

    /// Copy of the graph with `set` removed.
    pub fn without(&self, set: &VertexSet) -> Result<Self> {
        let mut g = self.clone();
        g.remove_vertices(set)?;
        Ok(g)
    }

    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        self.row(u)
            .ok()
            .and_then(|r| r.get(&v).copied())
            .unwrap_or(0)
    }

    pub fn loops(&self, v: Vertex) -> usize {
        self.multiplicity(v, v)
    }

    /// Neighbors of `v` other than `v` itself, each once, with multiplicity.
    pub fn incident(&self, v: Vertex) -> Result<impl Iterator<Item = (Vertex, usize)> + '_> {
        Ok(self
            .row(v)?
            .iter()
            .filter(move |(u, _)| **u != v)
            .map(|(u, m)| (*u, *m)))
    }

    /// The neighborhood N(v): distinct neighbors, excluding `v`.
    pub fn neighbors(&self, v: Vertex) -> Result<impl Iterator<Item = Vertex> + '_> {
        Ok(self.incident(v)?.map(|(u, _)| u))
    }

    pub fn neighbor_set(&self, v: Vertex) -> Result<VertexSet> {
        Ok(self.neighbors(v)?.collect())
    }

    /// deg(v) = sum of multiplicities, loops counted twice.
    pub fn degree(&self, v: Vertex) -> Result<usize> {
        Ok(self
            .row(v)?
            .iter()
            .map(|(u, m)| if *u == v { 2 * m } else { *m })
            .sum())
    }

    /// Total multiplicity of edges from `v` into `x`. A loop at `v ∈ x` counts twice.
    pub fn deg_in(&self, v: Vertex, x: &VertexSet) -> Result<usize> {
        Ok(self
            .row(v)?
            .iter()
            .filter(|(u, _)| x.contains(u))
            .map(|(u, m)| if *u == v { 2 * m } else { *m })
            .sum())
    }

    /// Number of edges counted with multiplicity (a loop counts once).
    pub fn edge_count(&self) -> usize {
        self.edges().map(|(_, _, m)| m).sum()
    }

    /// Every edge once as `(u, v, multiplicity)` with `u <= v`, in id order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, row)| {
            row.iter()
                .flat_map(move |r| r.range(u..).map(move |(v, m)| (u, *v, *m)))
        })
    }

    /// Connected components of `g[x]`, ordered by smallest member.
    pub fn components(&self, x: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for &s in x {
            if !self.contains(s) || !seen.insert(s) {
                continue;
            }
            let mut comp = VertexSet::from([s]);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u).into_iter().flatten() {
                    if x.contains(&w) && seen.insert(w) {
                        comp.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Map from each vertex of `x` to the index of its component in `components(x)`.
    pub fn component_labels(&self, x: &VertexSet) -> BTreeMap<Vertex, usize> {
        self.components(x)
            .into_iter()
            .enumerate()
            .flat_map(|(i, c)| c.into_iter().map(move |v| (v, i)))
            .collect()
    }

    /// True iff `g[x]` is acyclic. Loops and multi-edges inside `x` are cycles.
    pub fn is_forest(&self, x: &VertexSet) -> bool {
        let index: BTreeMap<Vertex, usize> = x.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut dsu = DisjointSets::new(index.len());
        for (&u, &iu) in &index {
            let Ok(row) = self.row(u) else { continue };
            for (v, m) in row.range(u..) {
                let Some(&iv) = index.get(v) else { continue };
                if *v == u || *m >= 2 || !dsu.union(iu, iv) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_forest(&self.vertex_set())
    }

    /// Contracts each part into a single node. Edges leaving a part are kept with their
    /// multiplicity; edges inside a part (loops included) are dropped. Vertices not covered
    /// by any part stay as their own node and keep their loops.
    ///
    /// Contracted ids: part `i` becomes node `i`, uncovered vertices follow in id order.
    pub fn contract_components(
        &self,
        parts: &[VertexSet],
    ) -> Result<(MultiGraph, BTreeMap<Vertex, Vertex>)> {
        let mut map = BTreeMap::new();
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::invalid(format!("part {i} is empty")));
            }
            for &v in part {
                if !self.contains(v) {
                    return Err(Error::UnknownVertex(v));
                }
                if map.insert(v, i).is_some() {
                    return Err(Error::invalid(format!("vertex {v} lies in two parts")));
                }
            }
            if self.components(part).len() != 1 {
                return Err(Error::invalid(format!("part {i} is not connected")));
            }
        }
        let mut next = parts.len();
        for v in self.vertices() {
            map.entry(v).or_insert_with(|| {
                next += 1;
                next - 1
            });
        }
        let mut h = MultiGraph::with_vertices(next);
        for (u, v, m) in self.edges() {
            let (cu, cv) = (map[&u], map[&v]);
            if cu == cv && cu < parts.len() {
                continue;
            }
            h.add_edge_with_multiplicity(cu, cv, m)?;
        }
        Ok((h, map))
    }
}
