//! Reduction rules for disjoint instances, applied lowest-number-first until none fires.
//!
//! | rule | trigger | effect |
//! |------|---------|--------|
//! | 1 | `deg(v) <= 1` | delete `v` |
//! | 2 | adjacent `u, v ∈ F`, both degree 2, neither nice | bypass one of them |
//! | 3 | `k < 0` or `μ < 0` | reject |
//! | 4 | `v ∈ R` with two edges into one component of `G[W]` | reject |
//! | 5 | `v ∈ F \ R` with two edges into one component of `G[W]` | take `v`, `N(v) ∩ F` into `R`, `k -= 1` |
//! | 6 | `v ∈ R` with `Gdeg_W(v) >= 1` or `Tdeg(v) >= 1` | move `v` from `R` to `W` |
//! | 7 | `v ∈ F \ R` whose neighbors in `F \ R` all have degree 2 (at least one) | put them into `R` |
//!
//! Within a rule the site with the lowest vertex id is rewritten; for rule 2 the pair with
//! the lexicographically smallest sorted ids.

use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet};
use crate::instance::DisInstance;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Rule {
    DropLowDegree = 1,
    BypassDegreeTwo = 2,
    Budget = 3,
    RejectRCycle = 4,
    ForceDoubleEdge = 5,
    PromoteR = 6,
    ProtectDegreeTwo = 7,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::DropLowDegree,
        Rule::BypassDegreeTwo,
        Rule::Budget,
        Rule::RejectRCycle,
        Rule::ForceDoubleEdge,
        Rule::PromoteR,
        Rule::ProtectDegreeTwo,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Rule> {
        Rule::ALL.get(usize::from(id).checked_sub(1)?).copied()
    }
}

impl From<Rule> for u8 {
    fn from(r: Rule) -> u8 {
        r.id()
    }
}

impl TryFrom<u8> for Rule {
    type Error = String;
    fn try_from(id: u8) -> std::result::Result<Self, String> {
        Rule::from_id(id).ok_or_else(|| format!("no reduction rule {id}"))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RR{}", self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleResult {
    Reduced(DisInstance),
    RejectNo,
    Unchanged,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub result: RuleResult,
    pub forced_into_solution: VertexSet,
    pub rule: Rule,
    pub touched: VertexSet,
}

/// One rule firing as recorded in a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub rule: Rule,
    pub pivot: Option<Vertex>,
    pub mu_before: i64,
    pub mu_after: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace(pub Vec<TraceEntry>);

impl ReductionTrace {
    /// One JSON object per line: `{"rule":..,"pivot":..,"mu_before":..,"mu_after":..}`.
    pub fn write_json_lines<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.0 {
            serde_json::to_writer(&mut out, e)?;
            writeln!(out)?;
        }
        Ok(())
    }
}

/// State of the instance at the moment a rejecting rule fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub rule: Rule,
    pub k: i64,
    pub mu: i64,
}

#[derive(Clone, Debug)]
pub struct Fixpoint {
    pub outcome: std::result::Result<DisInstance, Rejection>,
    /// Vertices taken into the solution by rule 5, in firing order.
    pub forced: VertexSet,
    pub trace: ReductionTrace,
    pub firings: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Firing {
    Unchanged,
    Rejected(Option<Vertex>),
    Applied {
        pivot: Vertex,
        forced: Option<Vertex>,
        touched: VertexSet,
    },
}

/// Component index of every vertex in `G[W]`.
fn w_labels(inst: &DisInstance) -> BTreeMap<Vertex, usize> {
    inst.graph().component_labels(inst.w())
}

/// True iff `v` has two incident edges (with multiplicity) ending in one component of `G[W]`.
fn doubles_into_w(inst: &DisInstance, labels: &BTreeMap<Vertex, usize>, v: Vertex) -> bool {
    let mut hits: BTreeMap<usize, usize> = BTreeMap::new();
    for (u, m) in inst.graph().incident(v).into_iter().flatten() {
        if let Some(&c) = labels.get(&u) {
            let e = hits.entry(c).or_insert(0);
            *e += m;
            if *e >= 2 {
                return true;
            }
        }
    }
    false
}

/// The other neighbor of a degree-2 vertex `v` whose edge to `not` is simple.
fn other_neighbor(inst: &DisInstance, v: Vertex, not: Vertex) -> Result<Vertex> {
    inst.graph()
        .neighbors(v)?
        .find(|&u| u != not)
        .ok_or_else(|| Error::internal(format!("degree-2 vertex {v} has no second neighbor")))
}

fn rr1(inst: &mut DisInstance) -> Result<Firing> {
    let site = inst.graph().vertices().find(|&v| inst.degree(v) <= 1);
    let Some(v) = site else {
        return Ok(Firing::Unchanged);
    };
    let touched = inst.graph().neighbor_set(v)?;
    inst.delete_vertex(v)?;
    Ok(Firing::Applied {
        pivot: v,
        forced: None,
        touched,
    })
}

fn rr2_site(inst: &DisInstance) -> Option<(Vertex, Vertex)> {
    for &u in inst.f() {
        if inst.degree(u) != 2 || inst.is_nice(u) {
            continue;
        }
        for v in inst.f_neighbors(u) {
            if v > u && inst.degree(v) == 2 && !inst.is_nice(v) {
                return Some((u, v));
            }
        }
    }
    None
}

fn rr2(inst: &mut DisInstance) -> Result<Firing> {
    let Some((u, v)) = rr2_site(inst) else {
        return Ok(Firing::Unchanged);
    };
    // `gone` is removed and its far neighbor is reconnected to `kept`.
    let (gone, kept) = match (inst.in_r(u), inst.in_r(v)) {
        (false, true) => (v, u),
        (true, false) => (u, v),
        _ => (u, v),
    };
    let far = other_neighbor(inst, gone, kept)?;
    if inst.in_f(far) && inst.graph().multiplicity(kept, far) > 0 {
        return Err(Error::internal(format!(
            "bypassing {gone} duplicates the forest edge {kept}-{far}"
        )));
    }
    inst.delete_vertex(gone)?;
    inst.add_edge(kept, far)?;
    Ok(Firing::Applied {
        pivot: gone,
        forced: None,
        touched: VertexSet::from([kept, far]),
    })
}

fn rr3(inst: &DisInstance) -> Firing {
    if inst.k() < 0 || inst.measure().mu < 0 {
        Firing::Rejected(None)
    } else {
        Firing::Unchanged
    }
}

fn rr4(inst: &DisInstance) -> Firing {
    let labels = w_labels(inst);
    match inst.r().iter().find(|&&v| doubles_into_w(inst, &labels, v)) {
        Some(&v) => Firing::Rejected(Some(v)),
        None => Firing::Unchanged,
    }
}

/// Takes `v` into the solution: delete it, protect its forest neighbors, spend one unit.
pub(crate) fn take_into_solution(inst: &mut DisInstance, v: Vertex) -> Result<VertexSet> {
    let protect: VertexSet = inst.f_neighbors(v).collect();
    inst.delete_vertex(v)?;
    for &u in &protect {
        inst.add_to_r(u);
    }
    inst.set_k(inst.k() - 1);
    Ok(protect)
}

fn rr5(inst: &mut DisInstance) -> Result<Firing> {
    let labels = w_labels(inst);
    let site = inst.deletable().find(|&v| doubles_into_w(inst, &labels, v));
    let Some(v) = site else {
        return Ok(Firing::Unchanged);
    };
    let touched = take_into_solution(inst, v)?;
    Ok(Firing::Applied {
        pivot: v,
        forced: Some(v),
        touched,
    })
}

fn rr6(inst: &mut DisInstance) -> Result<Firing> {
    let site = inst
        .r()
        .iter()
        .copied()
        .find(|&v| inst.gdeg(v) >= 1 || inst.tdeg(v) >= 1);
    let Some(v) = site else {
        return Ok(Firing::Unchanged);
    };
    inst.move_to_w(v);
    Ok(Firing::Applied {
        pivot: v,
        forced: None,
        touched: VertexSet::from([v]),
    })
}

fn rr7(inst: &mut DisInstance) -> Result<Firing> {
    let mut found = None;
    for v in inst.deletable() {
        let open: VertexSet = inst.f_neighbors(v).filter(|&u| !inst.in_r(u)).collect();
        if !open.is_empty() && open.iter().all(|&u| inst.degree(u) == 2) {
            found = Some((v, open));
            break;
        }
    }
    let Some((v, open)) = found else {
        return Ok(Firing::Unchanged);
    };
    for &u in &open {
        inst.add_to_r(u);
    }
    Ok(Firing::Applied {
        pivot: v,
        forced: None,
        touched: open,
    })
}

pub(crate) fn fire(inst: &mut DisInstance, rule: Rule) -> Result<Firing> {
    match rule {
        Rule::DropLowDegree => rr1(inst),
        Rule::BypassDegreeTwo => rr2(inst),
        Rule::Budget => Ok(rr3(inst)),
        Rule::RejectRCycle => Ok(rr4(inst)),
        Rule::ForceDoubleEdge => rr5(inst),
        Rule::PromoteR => rr6(inst),
        Rule::ProtectDegreeTwo => rr7(inst),
    }
}

/// Lowest-numbered rule that would change or reject `inst`, if any.
pub fn lowest_applicable(inst: &DisInstance) -> Result<Option<Rule>> {
    for rule in Rule::ALL {
        let mut probe = inst.clone();
        if fire(&mut probe, rule)? != Firing::Unchanged {
            return Ok(Some(rule));
        }
    }
    Ok(None)
}

/// Applies a single rule once, at its lowest-id site.
///
/// Callers are expected to have exhausted all lower-numbered rules; debug builds check this.
pub fn apply_rule(inst: &DisInstance, rule: Rule) -> Result<ReductionOutcome> {
    #[cfg(debug_assertions)]
    if let Some(lower) = lowest_applicable(inst)? {
        if lower < rule {
            return Err(Error::internal(format!(
                "{rule} applied while {lower} is still applicable"
            )));
        }
    }
    let mut next = inst.clone();
    let firing = fire(&mut next, rule)?;
    let (result, forced, touched) = match firing {
        Firing::Unchanged => (RuleResult::Unchanged, VertexSet::new(), VertexSet::new()),
        Firing::Rejected(pivot) => (
            RuleResult::RejectNo,
            VertexSet::new(),
            pivot.into_iter().collect(),
        ),
        Firing::Applied {
            pivot,
            forced,
            mut touched,
        } => {
            touched.insert(pivot);
            (
                RuleResult::Reduced(next),
                forced.into_iter().collect(),
                touched,
            )
        }
    };
    Ok(ReductionOutcome {
        result,
        forced_into_solution: forced,
        rule,
        touched,
    })
}

/// Applies the lowest applicable rule once, in place.
pub(crate) fn step(inst: &mut DisInstance) -> Result<Option<(Rule, Firing)>> {
    for rule in Rule::ALL {
        let firing = fire(inst, rule)?;
        if firing != Firing::Unchanged {
            return Ok(Some((rule, firing)));
        }
    }
    Ok(None)
}

/// Reduces to a fixpoint without recording a per-firing trace.
pub fn reduce_to_fixpoint(inst: &DisInstance) -> Result<Fixpoint> {
    reduce_to_fixpoint_with(inst.clone(), false)
}

/// Applies rules lowest-number-first until none is applicable or one rejects.
///
/// The budget of the returned instance already accounts for rule-5 deletions, which are
/// collected in `forced`. With `record` set, every firing is logged with the measure before
/// and after it.
pub fn reduce_to_fixpoint_with(mut inst: DisInstance, record: bool) -> Result<Fixpoint> {
    let mut forced = VertexSet::new();
    let mut trace = ReductionTrace::default();
    // Every firing lowers (|V|, |F|, |F \ R|) lexicographically.
    let n = inst.graph().vertex_count() as u64 + 1;
    let limit = n.saturating_mul(n).saturating_mul(n).saturating_add(16);
    let mut firings = 0usize;
    loop {
        let mu_before = if record { inst.measure().mu } else { 0 };
        let Some((rule, firing)) = step(&mut inst)? else {
            break;
        };
        firings += 1;
        if firings as u64 > limit {
            return Err(Error::internal("reduction rules failed to terminate"));
        }
        match firing {
            Firing::Unchanged => unreachable!(),
            Firing::Rejected(pivot) => {
                let mu = inst.measure().mu;
                if record {
                    trace.0.push(TraceEntry {
                        rule,
                        pivot,
                        mu_before,
                        mu_after: mu,
                    });
                }
                return Ok(Fixpoint {
                    outcome: Err(Rejection {
                        rule,
                        k: inst.k(),
                        mu,
                    }),
                    forced,
                    trace,
                    firings,
                });
            }
            Firing::Applied {
                pivot,
                forced: f,
                ..
            } => {
                forced.extend(f);
                if record {
                    trace.0.push(TraceEntry {
                        rule,
                        pivot: Some(pivot),
                        mu_before,
                        mu_after: inst.measure().mu,
                    });
                }
            }
        }
        #[cfg(debug_assertions)]
        if let Err(rep) = inst.validate() {
            return Err(Error::internal(format!("{rule} broke the instance: {rep}")));
        }
    }
    Ok(Fixpoint {
        outcome: Ok(inst),
        forced,
        trace,
        firings,
    })
}
