//! Exact solver for Independent Feedback Vertex Set.
//!
//! The pipeline obtains a feedback vertex set `Z`, guesses the part of the solution inside
//! `Z`, and hands each guess to a branch-and-reduce engine for the disjoint variant. The
//! engine's running time is driven by the measure `μ = k + ρ − (η + τ)`; every branching step
//! has branching vector (1, 2), and instances where every forest vertex is nice or a tent are
//! solved in polynomial time through graphic matroid parity.

pub mod bounds;
pub mod branching;
mod dsu;
pub mod error;
pub mod fvs;
pub mod gen;
pub mod graph;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod parity;
pub mod pipeline;
pub mod reductions;

pub use error::{Error, Result};
pub use graph::{MultiGraph, Vertex, VertexSet};
pub use bounds::ifvs_bound_base;
pub use branching::{solve_disjoint, BranchTrace, DisjointOutcome, EngineStats};
pub use fvs::{fvs_at_most, min_fvs};
pub use instance::{check_solution, DisInstance, Measure, VertexClass, VertexKind};
pub use pipeline::{min_ifvs, solve_ifvs, subdivide_once, IfvsResult, PipelineStats, SolveOptions, Status};
pub use reductions::{reduce_to_fixpoint, Rule};
