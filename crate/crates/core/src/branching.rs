//! Branch-and-reduce engine for disjoint instances.
//!
//! Each search node reduces its instance to a fixpoint, then picks a pivot `v ∈ F` that is
//! neither nice, a tent, nor P-nice, preferring
//!
//! * case A: `Gdeg_W(v) >= 3`, then
//! * case B: `Gdeg_W(v) >= 1` and `Tdeg(v) >= 1`, then
//! * case C: `Tdeg(v) >= 2`,
//!
//! and branches on taking `v` (delete it, protect `N(v) ∩ F`, `k -= 1`) versus moving `v`
//! into `W`. Either way the measure drops by one in one child and by two in the other, once
//! the child is itself reduced. Without a pivot every forest vertex is nice or a tent and the
//! matroid parity base case finishes the node.

use crate::bounds::leaf_bound;
use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet};
use crate::instance::DisInstance;
use crate::parity::solve_base;
use crate::reductions::{self, reduce_to_fixpoint_with, Rule};
use serde::Serialize;
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PivotCase {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PivotChoice {
    pub vertex: Vertex,
    pub case: PivotCase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchLabel {
    Delete,
    ToW,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NodeKind {
    Internal { pivot: Vertex, case: PivotCase },
    BaseCase { deleted: usize },
    Reject { rule: Rule },
}

/// One node of the search tree. `mu` is the measure after the node's reduction fixpoint,
/// or at the moment a rejecting rule fired.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceNode {
    pub mu: i64,
    #[serde(flatten)]
    pub kind: NodeKind,
    pub children: Vec<TraceChild>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceChild {
    pub label: BranchLabel,
    pub node: TraceNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchTrace {
    pub root: TraceNode,
}

/// An internal node whose children do not realize the (1, 2) branching vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorViolation {
    pub pivot: Vertex,
    pub case: PivotCase,
    pub mu: i64,
    pub drops: [Option<i64>; 2],
}

impl TraceNode {
    pub fn is_reject(&self) -> bool {
        matches!(self.kind, NodeKind::Reject { .. })
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a TraceNode)) {
        f(self);
        for c in &self.children {
            c.node.walk(f);
        }
    }
}

/// `true` iff the child drops satisfy (1, 2). A rejected child (`None`) is closed by a
/// reduction rule and satisfies any requirement.
pub fn satisfies_vector(drops: [Option<i64>; 2]) -> bool {
    let need = |d: Option<i64>, n: i64| d.is_none_or(|d| d >= n);
    (need(drops[0], 1) && need(drops[1], 2)) || (need(drops[0], 2) && need(drops[1], 1))
}

impl BranchTrace {
    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.root.walk(&mut |_| n += 1);
        n
    }

    pub fn leaves(&self) -> usize {
        let mut n = 0;
        self.root.walk(&mut |node| n += usize::from(node.children.is_empty()));
        n
    }

    /// Leaves with non-negative measure; these are the ones the Fibonacci recurrence counts.
    pub fn live_leaves(&self) -> usize {
        let mut n = 0;
        self.root
            .walk(&mut |node| n += usize::from(node.children.is_empty() && node.mu >= 0));
        n
    }

    pub fn internal_nodes(&self) -> usize {
        self.node_count() - self.leaves()
    }

    pub fn vector_violations(&self) -> Vec<VectorViolation> {
        let mut out = Vec::new();
        self.root.walk(&mut |node| {
            if let NodeKind::Internal { pivot, case } = node.kind {
                let drops = child_drops(node);
                if !satisfies_vector(drops) {
                    out.push(VectorViolation {
                        pivot,
                        case,
                        mu: node.mu,
                        drops,
                    });
                }
            }
        });
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serialization cannot fail")
    }
}

fn child_drops(node: &TraceNode) -> [Option<i64>; 2] {
    let mut drops = [None, None];
    for (slot, c) in drops.iter_mut().zip(&node.children) {
        *slot = (!c.node.is_reject()).then_some(node.mu - c.node.mu);
    }
    drops
}

pub fn select_pivot(inst: &DisInstance) -> Option<PivotChoice> {
    debug_assert_eq!(reductions::lowest_applicable(inst).ok(), Some(None));
    let mut best: Option<PivotChoice> = None;
    for &v in inst.f() {
        if inst.is_nice(v) || inst.is_tent(v) || inst.is_pnice(v) {
            continue;
        }
        let gdeg = inst.gdeg(v);
        let tdeg = inst.tdeg(v);
        let case = if gdeg >= 3 {
            PivotCase::A
        } else if gdeg >= 1 && tdeg >= 1 {
            PivotCase::B
        } else if tdeg >= 2 {
            PivotCase::C
        } else {
            continue;
        };
        if case == PivotCase::A {
            return Some(PivotChoice { vertex: v, case });
        }
        if best.is_none_or(|b| case < b.case) {
            best = Some(PivotChoice { vertex: v, case });
        }
    }
    best
}

fn check_pivot(inst: &DisInstance, v: Vertex) -> Result<()> {
    if !inst.in_f(v) || inst.in_r(v) {
        return Err(Error::internal(format!("pivot {v} is not in F \\ R")));
    }
    if inst.is_nice(v) || inst.is_tent(v) || inst.is_pnice(v) {
        return Err(Error::internal(format!("pivot {v} is nice, a tent or P-nice")));
    }
    Ok(())
}

/// Branch that takes `v` into the solution. The caller records `v`.
pub fn branch_delete(inst: &DisInstance, v: Vertex) -> Result<DisInstance> {
    check_pivot(inst, v)?;
    let mut next = inst.clone();
    reductions::take_into_solution(&mut next, v)?;
    Ok(next)
}

/// Branch that makes `v` undeletable by moving it into `W`.
pub fn branch_to_w(inst: &DisInstance, v: Vertex) -> Result<DisInstance> {
    check_pivot(inst, v)?;
    let mut next = inst.clone();
    next.move_to_w(v);
    let mut w = next.w().clone();
    w.insert(v);
    if !next.graph().is_forest(&w) {
        return Err(Error::internal(format!("moving {v} into W closes a cycle in W")));
    }
    Ok(next)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineConfig {
    pub record_trace: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EngineStats {
    pub nodes: usize,
    pub internal: usize,
    pub leaves: usize,
    pub live_leaves: usize,
    pub base_cases: usize,
    pub rejects: usize,
    pub mu0: i64,
    pub max_depth: usize,
    pub vector_violations: usize,
    pub reduction_firings: usize,
}

impl EngineStats {
    pub fn leaf_bound(&self) -> u128 {
        leaf_bound(self.mu0)
    }

    pub fn absorb(&mut self, other: &EngineStats) {
        self.nodes += other.nodes;
        self.internal += other.internal;
        self.leaves += other.leaves;
        self.live_leaves += other.live_leaves;
        self.base_cases += other.base_cases;
        self.rejects += other.rejects;
        self.mu0 = self.mu0.max(other.mu0);
        self.max_depth = self.max_depth.max(other.max_depth);
        self.vector_violations += other.vector_violations;
        self.reduction_firings += other.reduction_firings;
    }
}

#[derive(Clone, Debug)]
pub struct DisjointOutcome {
    /// A minimum solution of size at most `k`, if one exists.
    pub solution: Option<VertexSet>,
    pub stats: EngineStats,
    pub trace: Option<BranchTrace>,
}

struct NodeOut {
    solution: Option<VertexSet>,
    mu: i64,
    rejected: bool,
    trace: Option<TraceNode>,
}

struct Engine {
    config: EngineConfig,
    stats: EngineStats,
}

/// Smaller solution wins, ties go to the lexicographically smaller set.
fn better(a: Option<VertexSet>, b: Option<VertexSet>) -> Option<VertexSet> {
    match (a, b) {
        (Some(a), Some(b)) => match a.len().cmp(&b.len()).then_with(|| a.cmp(&b)) {
            Ordering::Greater => Some(b),
            _ => Some(a),
        },
        (a, None) => a,
        (None, b) => b,
    }
}

impl Engine {
    fn node(&mut self, inst: DisInstance, depth: usize) -> Result<NodeOut> {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let fp = reduce_to_fixpoint_with(inst, false)?;
        self.stats.reduction_firings += fp.firings;
        let red = match fp.outcome {
            Err(rej) => {
                if depth == 0 {
                    self.stats.mu0 = rej.mu;
                }
                self.stats.leaves += 1;
                self.stats.rejects += 1;
                self.stats.live_leaves += usize::from(rej.mu >= 0);
                return Ok(NodeOut {
                    solution: None,
                    mu: rej.mu,
                    rejected: true,
                    trace: self.config.record_trace.then(|| TraceNode {
                        mu: rej.mu,
                        kind: NodeKind::Reject { rule: rej.rule },
                        children: vec![],
                    }),
                });
            }
            Ok(red) => red,
        };
        let mu = red.measure().mu;
        if depth == 0 {
            self.stats.mu0 = mu;
        } else if depth as i64 > self.stats.mu0 + 1 {
            return Err(Error::internal(format!(
                "search depth {depth} exceeds root measure {} + 1",
                self.stats.mu0
            )));
        }
        let forced = fp.forced;
        let with_forced = |s: Option<VertexSet>| {
            s.map(|mut s| {
                s.extend(forced.iter().copied());
                s
            })
        };

        let Some(pivot) = select_pivot(&red) else {
            if let Some(v) = red.f().iter().find(|&&v| !red.is_nice(v) && !red.is_tent(v)) {
                return Err(Error::internal(format!(
                    "no pivot, but forest vertex {v} is neither nice nor a tent"
                )));
            }
            let base = solve_base(&red)?;
            self.stats.leaves += 1;
            self.stats.live_leaves += 1;
            self.stats.base_cases += 1;
            let deleted = red.f().len() - base.parity.kept.len();
            return Ok(NodeOut {
                solution: with_forced(base.solution),
                mu,
                rejected: false,
                trace: self.config.record_trace.then(|| TraceNode {
                    mu,
                    kind: NodeKind::BaseCase { deleted },
                    children: vec![],
                }),
            });
        };

        self.stats.internal += 1;
        let v = pivot.vertex;
        let taken = self.node(branch_delete(&red, v)?, depth + 1)?;
        let kept = self.node(branch_to_w(&red, v)?, depth + 1)?;
        let drops = [
            (!taken.rejected).then_some(mu - taken.mu),
            (!kept.rejected).then_some(mu - kept.mu),
        ];
        if !satisfies_vector(drops) {
            self.stats.vector_violations += 1;
        }
        let from_taken = taken.solution.map(|mut s| {
            s.insert(v);
            s
        });
        let solution = with_forced(better(from_taken, kept.solution));
        let trace = match (taken.trace, kept.trace) {
            (Some(a), Some(b)) => Some(TraceNode {
                mu,
                kind: NodeKind::Internal {
                    pivot: v,
                    case: pivot.case,
                },
                children: vec![
                    TraceChild {
                        label: BranchLabel::Delete,
                        node: a,
                    },
                    TraceChild {
                        label: BranchLabel::ToW,
                        node: b,
                    },
                ],
            }),
            _ => None,
        };
        Ok(NodeOut {
            solution,
            mu,
            rejected: false,
            trace,
        })
    }
}

pub fn solve_disjoint(inst: &DisInstance) -> Result<DisjointOutcome> {
    solve_disjoint_with(inst, EngineConfig::default())
}

/// Minimum solution of a disjoint instance, or `None` if every solution exceeds `k`.
pub fn solve_disjoint_with(inst: &DisInstance, config: EngineConfig) -> Result<DisjointOutcome> {
    inst.validate()
        .map_err(|rep| Error::invalid(format!("malformed disjoint instance: {rep}")))?;
    let mut engine = Engine {
        config,
        stats: EngineStats::default(),
    };
    let out = engine.node(inst.clone(), 0)?;
    if let Some(x) = &out.solution {
        if !inst.is_solution(x) {
            return Err(Error::internal(format!("engine returned an infeasible set {x:?}")));
        }
    }
    Ok(DisjointOutcome {
        solution: out.solution,
        stats: engine.stats,
        trace: out.trace.map(|root| BranchTrace { root }),
    })
}
