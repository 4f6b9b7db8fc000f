//! Disjoint instances `(G, W, R, k)`: find an independent feedback vertex set of size at
//! most `k` that avoids both the undeletable feedback set `W` and the undeletable forest
//! vertices `R`.
//!
//! `F = V \ W` always induces a forest. Vertex classes are defined relative to `W` and `R`:
//!
//! * nice: `v ∈ F \ R`, `deg_W(v) = 2`, no neighbor in `F`;
//! * tent: `v ∈ F \ R`, `deg_W(v) = 3`, no neighbor in `F`;
//! * P-nice: `v ∈ F \ R`, `deg(v) = 2` and exactly one incident edge ends in `W`;
//! * P-tent: `v ∈ F \ R`, `Gdeg_W(v) = 2` and `deg(v) = 3`,
//!
//! where `Ndeg(v)` counts P-nice neighbors, `Gdeg_W(v) = Ndeg(v) + deg_W(v)` and `Tdeg(v)`
//! counts P-tent neighbors. The measure is `μ = k + ρ − (η + τ)` with `ρ` the number of
//! components of `G[W]`, `η` the number of nice vertices and `τ` the number of tents.

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Vertex, VertexSet};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisInstance {
    g: MultiGraph,
    w: VertexSet,
    r: VertexSet,
    f: VertexSet,
    k: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VertexKind {
    Nice,
    Tent,
    PNice,
    PTent,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexClass {
    pub kind: VertexKind,
    pub deg_w: usize,
    pub ndeg: usize,
    pub gdeg: usize,
    pub tdeg: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Measure {
    pub k: i64,
    pub rho: i64,
    pub eta: i64,
    pub tau: i64,
    pub mu: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnknownVertex(Vertex),
    WROverlap(Vertex),
    FNotForest,
    WNotForest,
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::UnknownVertex(_) => "unknown-vertex",
            Violation::WROverlap(_) => "W-R-overlap",
            Violation::FNotForest => "F-not-forest",
            Violation::WNotForest => "W-not-forest",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationReport(pub Vec<Violation>);

impl ViolationReport {
    pub fn contains(&self, name: &str) -> bool {
        self.0.iter().any(|v| v.name() == name)
    }
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .0
            .iter()
            .map(|v| match v {
                Violation::UnknownVertex(x) | Violation::WROverlap(x) => {
                    format!("{}({x})", v.name())
                }
                _ => v.name().to_string(),
            })
            .collect();
        write!(f, "{}", names.join(", "))
    }
}

impl DisInstance {
    /// Builds an instance without checking invariants; see [`DisInstance::new`].
    pub fn new_unchecked(g: MultiGraph, w: VertexSet, r: VertexSet, k: i64) -> Self {
        let f = g.vertices().filter(|v| !w.contains(v)).collect();
        Self { g, w, r, f, k }
    }

    /// Builds an instance and validates it.
    pub fn new(g: MultiGraph, w: VertexSet, r: VertexSet, k: i64) -> Result<Self> {
        let inst = Self::new_unchecked(g, w, r, k);
        inst.validate()
            .map_err(|rep| Error::invalid(format!("malformed disjoint instance: {rep}")))?;
        Ok(inst)
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.g
    }

    pub fn w(&self) -> &VertexSet {
        &self.w
    }

    pub fn r(&self) -> &VertexSet {
        &self.r
    }

    /// `F = V \ W`.
    pub fn f(&self) -> &VertexSet {
        &self.f
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// Candidate solution vertices `F \ R`.
    pub fn deletable(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.f.iter().copied().filter(|v| !self.r.contains(v))
    }

    pub fn in_w(&self, v: Vertex) -> bool {
        self.w.contains(&v)
    }

    pub fn in_r(&self, v: Vertex) -> bool {
        self.r.contains(&v)
    }

    pub fn in_f(&self, v: Vertex) -> bool {
        self.f.contains(&v)
    }

    pub fn into_parts(self) -> (MultiGraph, VertexSet, VertexSet, i64) {
        (self.g, self.w, self.r, self.k)
    }

    // --- mutation, used by the reduction rules and the branching step ---

    pub(crate) fn set_k(&mut self, k: i64) {
        self.k = k;
    }

    pub(crate) fn delete_vertex(&mut self, v: Vertex) -> Result<()> {
        self.g.remove_vertex(v)?;
        self.w.remove(&v);
        self.r.remove(&v);
        self.f.remove(&v);
        Ok(())
    }

    pub(crate) fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.g.add_edge(u, v)
    }

    pub(crate) fn move_to_w(&mut self, v: Vertex) {
        self.r.remove(&v);
        self.f.remove(&v);
        self.w.insert(v);
    }

    pub(crate) fn add_to_r(&mut self, v: Vertex) {
        debug_assert!(self.f.contains(&v));
        self.r.insert(v);
    }

    // --- degree notions ---

    pub fn degree(&self, v: Vertex) -> usize {
        self.g.degree(v).unwrap_or(0)
    }

    pub fn deg_w(&self, v: Vertex) -> usize {
        self.g.deg_in(v, &self.w).unwrap_or(0)
    }

    /// Neighbors of `v` that lie in `F`.
    pub fn f_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.g
            .neighbors(v)
            .into_iter()
            .flatten()
            .filter(|u| self.f.contains(u))
    }

    pub fn is_nice(&self, v: Vertex) -> bool {
        self.is_isolated_in_f_with_deg_w(v, 2)
    }

    pub fn is_tent(&self, v: Vertex) -> bool {
        self.is_isolated_in_f_with_deg_w(v, 3)
    }

    fn is_isolated_in_f_with_deg_w(&self, v: Vertex, want: usize) -> bool {
        self.in_f(v)
            && !self.in_r(v)
            && self.deg_w(v) == want
            && self.f_neighbors(v).next().is_none()
    }

    pub fn is_pnice(&self, v: Vertex) -> bool {
        self.in_f(v) && !self.in_r(v) && self.degree(v) == 2 && self.deg_w(v) == 1
    }

    pub fn ndeg(&self, v: Vertex) -> usize {
        self.f_neighbors(v).filter(|&u| self.is_pnice(u)).count()
    }

    pub fn gdeg(&self, v: Vertex) -> usize {
        self.ndeg(v) + self.deg_w(v)
    }

    pub fn is_ptent(&self, v: Vertex) -> bool {
        self.in_f(v) && !self.in_r(v) && self.degree(v) == 3 && self.gdeg(v) == 2
    }

    pub fn tdeg(&self, v: Vertex) -> usize {
        self.f_neighbors(v).filter(|&u| self.is_ptent(u)).count()
    }

    pub fn classify(&self, v: Vertex) -> Result<VertexClass> {
        if !self.g.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        if self.in_w(v) {
            return Err(Error::invalid(format!("vertex {v} lies in W")));
        }
        let deg_w = self.deg_w(v);
        let ndeg = self.ndeg(v);
        let gdeg = deg_w + ndeg;
        let tdeg = self.tdeg(v);
        let kind = if self.is_nice(v) {
            VertexKind::Nice
        } else if self.is_tent(v) {
            VertexKind::Tent
        } else if self.is_pnice(v) {
            VertexKind::PNice
        } else if self.is_ptent(v) {
            VertexKind::PTent
        } else {
            VertexKind::Plain
        };
        Ok(VertexClass {
            kind,
            deg_w,
            ndeg,
            gdeg,
            tdeg,
        })
    }

    pub fn nice_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.f.iter().copied().filter(|&v| self.is_nice(v))
    }

    pub fn tents(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.f.iter().copied().filter(|&v| self.is_tent(v))
    }

    pub fn measure(&self) -> Measure {
        let rho = self.g.components(&self.w).len() as i64;
        let eta = self.nice_vertices().count() as i64;
        let tau = self.tents().count() as i64;
        Measure {
            k: self.k,
            rho,
            eta,
            tau,
            mu: self.k + rho - (eta + tau),
        }
    }

    pub fn validate(&self) -> std::result::Result<(), ViolationReport> {
        let mut out = Vec::new();
        for &v in self.w.iter().chain(self.r.iter()) {
            if !self.g.contains(v) {
                out.push(Violation::UnknownVertex(v));
            }
        }
        for &v in self.w.intersection(&self.r) {
            out.push(Violation::WROverlap(v));
        }
        if !self.g.is_forest(&self.f) {
            out.push(Violation::FNotForest);
        }
        if !self.g.is_forest(&self.w) {
            out.push(Violation::WNotForest);
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(ViolationReport(out))
        }
    }

    /// True iff `x` is a feasible answer: inside `F \ R`, within budget, independent, and
    /// breaking every cycle.
    pub fn is_solution(&self, x: &VertexSet) -> bool {
        x.iter().all(|&v| self.in_f(v) && !self.in_r(v)) && check_solution(&self.g, x, self.k)
    }
}

/// True iff `|s| <= k`, `s` is independent in `g` and `g \ s` is a forest.
/// A loop at a member of `s` does not break independence.
pub fn check_solution(g: &MultiGraph, s: &VertexSet, k: i64) -> bool {
    if s.len() as i64 > k || s.iter().any(|&v| !g.contains(v)) {
        return false;
    }
    let independent = s
        .iter()
        .all(|&v| g.neighbors(v).is_ok_and(|mut it| it.all(|u| !s.contains(&u))));
    let rest: VertexSet = g.vertices().filter(|v| !s.contains(v)).collect();
    independent && g.is_forest(&rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[Vertex]) -> VertexSet {
        xs.iter().copied().collect()
    }

    /// W = {0, 1, 2} (three isolated components); F vertices from 3 upward.
    fn base(edges: &[(Vertex, Vertex)], n: usize, r: &[Vertex], k: i64) -> DisInstance {
        let g = MultiGraph::from_edges(n, edges).unwrap();
        DisInstance::new(g, set(&[0, 1, 2]), set(r), k).unwrap()
    }

    #[test]
    fn classify_nice() {
        let inst = base(&[(3, 0), (3, 1)], 4, &[], 1);
        assert_eq!(inst.classify(3).unwrap().kind, VertexKind::Nice);
        // in R the same vertex is plain
        let inst = base(&[(3, 0), (3, 1)], 4, &[3], 1);
        assert_eq!(inst.classify(3).unwrap().kind, VertexKind::Plain);
    }

    #[test]
    fn classify_tent_and_w_error() {
        let inst = base(&[(3, 0), (3, 1), (3, 2)], 4, &[], 1);
        let c = inst.classify(3).unwrap();
        assert_eq!(c.kind, VertexKind::Tent);
        assert_eq!((c.deg_w, c.gdeg), (3, 3));
        assert!(inst.classify(0).is_err());
        assert!(inst.classify(42).is_err());
    }

    #[test]
    fn classify_pnice_and_ptent() {
        // F is the path 3-4-5-6-7; 3 and 7 are P-nice, 4 and 6 are P-tents, 5 is plain.
        let edges = [(3, 0), (3, 4), (4, 1), (4, 5), (5, 2), (5, 6), (6, 0), (6, 7), (7, 1)];
        let inst = base(&edges, 8, &[], 2);
        assert_eq!(inst.classify(3).unwrap().kind, VertexKind::PNice);
        let c4 = inst.classify(4).unwrap();
        assert_eq!((c4.deg_w, c4.ndeg, c4.gdeg), (1, 1, 2));
        assert_eq!(inst.degree(4), 3);
        assert_eq!(c4.kind, VertexKind::PTent);
        let c5 = inst.classify(5).unwrap();
        assert_eq!((c5.kind, c5.tdeg), (VertexKind::Plain, 2));
        assert_eq!(inst.classify(7).unwrap().kind, VertexKind::PNice);
    }

    #[test]
    fn measure_formula() {
        // 3 W components, one nice vertex, k = 2
        let inst = base(&[(3, 0), (3, 1)], 4, &[], 2);
        let m = inst.measure();
        assert_eq!((m.k, m.rho, m.eta, m.tau, m.mu), (2, 3, 1, 0, 4));

        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let inst = DisInstance::new(g, VertexSet::new(), VertexSet::new(), 5).unwrap();
        assert_eq!(inst.measure().mu, 5);

        // one W component {0,1,2} path, nice 3 and tent 4: 0 + 1 - 2 = -1
        let g = MultiGraph::from_edges(
            5,
            &[(0, 1), (1, 2), (3, 0), (3, 2), (4, 0), (4, 1), (4, 2)],
        )
        .unwrap();
        let inst = DisInstance::new(g, set(&[0, 1, 2]), VertexSet::new(), 0).unwrap();
        let m = inst.measure();
        assert_eq!((m.rho, m.eta, m.tau, m.mu), (1, 1, 1, -1));
    }

    #[test]
    fn validate_reports() {
        let tri = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = DisInstance::new_unchecked(tri.clone(), VertexSet::new(), VertexSet::new(), 1);
        assert!(inst.validate().unwrap_err().contains("F-not-forest"));
        let inst = DisInstance::new_unchecked(tri.clone(), set(&[0, 1, 2]), VertexSet::new(), 1);
        assert!(inst.validate().unwrap_err().contains("W-not-forest"));
        let inst = DisInstance::new_unchecked(tri.clone(), set(&[0]), VertexSet::new(), 1);
        assert!(inst.validate().is_ok());
        let inst = DisInstance::new_unchecked(tri, set(&[0]), set(&[0]), 1);
        assert!(inst.validate().unwrap_err().contains("W-R-overlap"));
    }

    #[test]
    fn check_solution_examples() {
        let k3 = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        for v in 0..3 {
            assert!(check_solution(&k3, &set(&[v]), 1));
            assert!(!check_solution(&k3, &set(&[v]), 0));
        }
        let tree = MultiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(check_solution(&tree, &VertexSet::new(), 0));
        // loop at a deleted vertex is fine
        let looped = MultiGraph::from_edges(2, &[(0, 0), (0, 1)]).unwrap();
        assert!(check_solution(&looped, &set(&[0]), 1));
        assert!(!check_solution(&looped, &set(&[1]), 1));
    }

    #[test]
    fn k4_has_no_independent_fvs() {
        let mut edges = vec![];
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, b));
            }
        }
        let k4 = MultiGraph::from_edges(4, &edges).unwrap();
        for mask in 0u32..16 {
            let s: VertexSet = (0..4).filter(|v| mask >> v & 1 == 1).collect();
            assert!(!check_solution(&k4, &s, 4), "subset {s:?}");
        }
    }
}
