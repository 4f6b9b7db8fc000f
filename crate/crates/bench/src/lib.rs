//! Instance families shared by the criterion benches.

use ifvs_core::gen::{self, DisParams};
use ifvs_core::{DisInstance, MultiGraph};

/// Planted graphs on `n` vertices, one per budget in `ks`, seeded by the budget.
pub fn planted_family(n: usize, ks: impl IntoIterator<Item = usize>) -> Vec<(usize, MultiGraph)> {
    ks.into_iter()
        .map(|k| {
            let p = gen::planted(n, k, &mut gen::rng(k as u64)).expect("feasible parameters");
            (k, p.graph)
        })
        .collect()
}

/// Disjoint instances with a connected forest part; these reach the branching step.
pub fn branching_instances(count: u64) -> Vec<DisInstance> {
    (0..count)
        .map(|seed| {
            let params = DisParams {
                forest: 14,
                w: 12,
                min_w_edges: 1,
                max_w_edges: 1,
                f_attach: 1.0,
                w_attach: 0.3,
                r_probability: 0.0,
                k: Some(14),
            };
            gen::random_disjoint(params, &mut gen::rng(seed)).expect("valid parameters")
        })
        .collect()
}

pub fn base_cases(pairs: usize, count: u64) -> Vec<DisInstance> {
    (0..count)
        .map(|seed| gen::base_case(pairs, &mut gen::rng(seed)).expect("valid parameters"))
        .collect()
}
