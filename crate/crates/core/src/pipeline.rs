//! Top-level solve: find a feedback vertex set `Z`, guess the solution's part inside `Z`, and
//! solve the disjoint instance left by each guess.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::leaf_bound;
use crate::branching::{solve_disjoint_with, BranchTrace, EngineConfig, EngineStats};
use crate::error::{Error, Result};
use crate::fvs::fvs_at_most;
use crate::graph::{MultiGraph, Vertex, VertexSet};
use crate::instance::{check_solution, DisInstance};

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Scan every guess and return a minimum solution instead of stopping at the first one.
    pub minimize: bool,
    /// Use this feedback vertex set instead of computing one.
    pub external_z: Option<VertexSet>,
    /// Worker threads for guesses; 0 and 1 both mean sequential.
    pub threads: usize,
    pub record_trace: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Yes,
    No,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PipelineStats {
    pub loops_forced: usize,
    pub fvs_size: usize,
    pub guesses_tried: usize,
    pub guesses_skipped: usize,
    pub branch_nodes: usize,
    pub leaves: usize,
    pub live_leaves: usize,
    pub base_cases: usize,
    /// Largest root measure over all guesses.
    pub max_mu: i64,
    /// Sum over guesses of the per-instance leaf bound.
    pub fib_bound: u128,
    pub vector_violations: usize,
}

/// What one guess `Z′` produced.
#[derive(Clone, Debug)]
pub struct GuessReport {
    pub z_prime: VertexSet,
    pub stats: EngineStats,
    /// Size of the disjoint solution, if any.
    pub found: Option<usize>,
    pub trace: Option<BranchTrace>,
}

#[derive(Clone, Debug)]
pub struct IfvsResult {
    pub status: Status,
    pub solution: Option<VertexSet>,
    pub stats: PipelineStats,
    pub guesses: Vec<GuessReport>,
}

impl IfvsResult {
    fn no(stats: PipelineStats, guesses: Vec<GuessReport>) -> Self {
        Self { status: Status::No, solution: None, stats, guesses }
    }
}

/// Decide whether `g` has an independent feedback vertex set of size at most `k`.
pub fn solve_ifvs(g: &MultiGraph, k: i64, opts: &SolveOptions) -> Result<IfvsResult> {
    if k < 0 {
        return Err(Error::invalid(format!("budget {k} is negative")));
    }
    let mut stats = PipelineStats::default();

    // loops: their vertices are in every solution, so none of their neighbours can be
    let looped: VertexSet = g.vertices().filter(|&v| g.loops(v) > 0).collect();
    let mut forbidden = VertexSet::new();
    for &v in &looped {
        forbidden.extend(g.neighbors(v)?.filter(|u| *u != v));
    }
    stats.loops_forced = looped.len();
    if !forbidden.is_disjoint(&looped) || looped.len() as i64 > k {
        return Ok(IfvsResult::no(stats, vec![]));
    }
    let h = g.without(&looped)?;
    let budget = k - looped.len() as i64;

    let z = match &opts.external_z {
        Some(z) => {
            if let Some(&v) = z.iter().find(|&&v| !g.contains(v)) {
                return Err(Error::UnknownVertex(v));
            }
            let z: VertexSet = z.difference(&looped).copied().collect();
            if !h.without(&z)?.is_acyclic() {
                return Err(Error::invalid("supplied set is not a feedback vertex set"));
            }
            z
        }
        None => match fvs_at_most(&h, budget) {
            Some(z) => z,
            None => return Ok(IfvsResult::no(stats, vec![])),
        },
    };
    stats.fvs_size = z.len();

    let guesses: Vec<VertexSet> = subsets_by_size(&z, budget as usize)
        .filter(|zp| {
            let ok = zp.is_disjoint(&forbidden)
                && zp.iter().all(|&v| h.incident(v).is_ok_and(|mut it| it.all(|(u, _)| !zp.contains(&u))))
                && h.is_forest(&z.difference(zp).copied().collect());
            if !ok {
                stats.guesses_skipped += 1;
            }
            ok
        })
        .collect();

    let run = |zp: &VertexSet| run_guess(&h, &z, zp, &forbidden, budget, opts.record_trace);
    let mut reports: Vec<(GuessReport, Option<VertexSet>)> = vec![];
    let threads = opts.threads.max(1);
    if threads == 1 {
        for zp in &guesses {
            let out = run(zp)?;
            let hit = out.1.is_some();
            reports.push(out);
            if hit && !opts.minimize {
                break;
            }
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::internal(format!("thread pool: {e}")))?;
        // chunks keep the set of evaluated guesses independent of scheduling
        for chunk in guesses.chunks(threads) {
            let outs: Vec<_> = pool.install(|| chunk.par_iter().map(run).collect::<Result<Vec<_>>>())?;
            let hit = outs.iter().any(|o| o.1.is_some());
            reports.extend(outs);
            if hit && !opts.minimize {
                break;
            }
        }
    }

    let mut best: Option<VertexSet> = None;
    for (_, sol) in &reports {
        if let Some(s) = sol {
            let replace = match &best {
                None => true,
                Some(b) => opts.minimize && cmp_solutions(s, b) == Ordering::Less,
            };
            if replace {
                best = Some(s.clone());
            }
        }
    }

    let mut guess_reports = Vec::with_capacity(reports.len());
    for (rep, _) in reports {
        let s = &rep.stats;
        stats.guesses_tried += 1;
        stats.branch_nodes += s.nodes;
        stats.leaves += s.leaves;
        stats.live_leaves += s.live_leaves;
        stats.base_cases += s.base_cases;
        stats.max_mu = stats.max_mu.max(s.mu0);
        stats.fib_bound = stats.fib_bound.saturating_add(leaf_bound(s.mu0));
        stats.vector_violations += s.vector_violations;
        guess_reports.push(rep);
    }

    let Some(mut solution) = best else {
        return Ok(IfvsResult::no(stats, guess_reports));
    };
    solution.extend(looped);
    if !check_solution(g, &solution, k) {
        return Err(Error::internal(format!("pipeline produced an invalid solution {solution:?}")));
    }
    Ok(IfvsResult { status: Status::Yes, solution: Some(solution), stats, guesses: guess_reports })
}

/// Minimum independent feedback vertex set, or `None` if none exists.
pub fn min_ifvs(g: &MultiGraph) -> Result<Option<VertexSet>> {
    let opts = SolveOptions { minimize: true, ..Default::default() };
    Ok(solve_ifvs(g, g.vertex_count() as i64, &opts)?.solution)
}

fn cmp_solutions(a: &VertexSet, b: &VertexSet) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn run_guess(
    h: &MultiGraph,
    z: &VertexSet,
    zp: &VertexSet,
    forbidden: &VertexSet,
    budget: i64,
    record_trace: bool,
) -> Result<(GuessReport, Option<VertexSet>)> {
    let g = h.without(zp)?;
    let w: VertexSet = z.difference(zp).copied().collect();
    let mut r = VertexSet::new();
    for &v in zp {
        r.extend(h.neighbors(v)?);
    }
    r.extend(forbidden.iter().copied());
    let r: VertexSet = r.into_iter().filter(|v| g.contains(*v) && !w.contains(v)).collect();
    let inst = DisInstance::new(g, w, r, budget - zp.len() as i64)?;
    let out = solve_disjoint_with(&inst, EngineConfig { record_trace })?;
    let union = out.solution.as_ref().map(|x| x.union(zp).copied().collect::<VertexSet>());
    let report = GuessReport {
        z_prime: zp.clone(),
        stats: out.stats,
        found: out.solution.as_ref().map(|x| x.len()),
        trace: out.trace,
    };
    Ok((report, union))
}

/// Subsets of `z` with at most `max` elements: by size, then lexicographically.
pub fn subsets_by_size(z: &VertexSet, max: usize) -> impl Iterator<Item = VertexSet> + '_ {
    let items: Vec<Vertex> = z.iter().copied().collect();
    let n = items.len();
    (0..=max.min(n)).flat_map(move |size| {
        let items = items.clone();
        let mut idx: Option<Vec<usize>> = Some((0..size).collect());
        std::iter::from_fn(move || {
            let cur = idx.take()?;
            let out: VertexSet = cur.iter().map(|&i| items[i]).collect();
            // advance to the next combination
            let mut next = cur;
            let mut i = size;
            while i > 0 {
                i -= 1;
                if next[i] < n - size + i {
                    next[i] += 1;
                    for j in i + 1..size {
                        next[j] = next[j - 1] + 1;
                    }
                    idx = Some(next);
                    break;
                }
            }
            Some(out)
        })
    })
}

/// Replace every edge occurrence `uv` by a path `u x v` through a fresh vertex `x`. A loop at
/// `v` becomes a triangle through two fresh vertices, so the result is simple.
pub fn subdivide_once(g: &MultiGraph) -> MultiGraph {
    let mut out = MultiGraph::with_vertices(g.id_bound());
    for v in 0..g.id_bound() {
        if !g.contains(v) {
            out.remove_vertex(v).expect("fresh vertex");
        }
    }
    let edges: Vec<_> = g.edges().collect();
    for (u, v, m) in edges {
        for _ in 0..m {
            let x = out.add_vertex();
            out.add_edge(u, x).expect("live endpoints");
            if u == v {
                let y = out.add_vertex();
                out.add_edge(x, y).expect("live endpoints");
                out.add_edge(y, v).expect("live endpoints");
            } else {
                out.add_edge(x, v).expect("live endpoints");
            }
        }
    }
    out
}
