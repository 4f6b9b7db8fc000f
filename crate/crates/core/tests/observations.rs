use ifvs_core::branching::{branch_delete, branch_to_w, select_pivot, PivotCase};
use ifvs_core::gen::gadget;
use ifvs_core::oracle::oracle_disjoint;
use ifvs_core::reductions::{apply_rule, lowest_applicable, RuleResult};
use ifvs_core::{reduce_to_fixpoint, solve_disjoint, DisInstance, Rule, VertexKind};

fn fixpoint_mu(inst: &DisInstance) -> i64 {
    reduce_to_fixpoint(inst).unwrap().outcome.expect("not rejected").measure().mu
}

#[test]
fn promote_makes_neighbours_nice() {
    let inst = gadget("promote").unwrap();
    let before = inst.measure();
    assert_eq!((before.rho, before.eta, before.tau), (4, 2, 0));
    assert_eq!(inst.classify(5).unwrap().kind, VertexKind::PNice);
    assert_eq!(inst.classify(6).unwrap().kind, VertexKind::PTent);

    let out = apply_rule(&inst, Rule::PromoteR).unwrap();
    let RuleResult::Reduced(next) = out.result else { panic!("rule did not apply") };
    assert!(next.in_w(4));
    assert!(next.is_nice(5) && next.is_nice(7) && next.is_tent(6));
    let after = next.measure();
    assert_eq!((after.rho, after.eta, after.tau), (5, 4, 1));
    assert_eq!(before.mu - after.mu, 2);
    assert!(out.forced_into_solution.is_empty());
    assert_eq!(
        oracle_disjoint(&inst).unwrap().map(|s| s.len()),
        oracle_disjoint(&next).unwrap().map(|s| s.len())
    );
}

#[test]
fn observation_gadget_is_case_b() {
    let inst = gadget("observation").unwrap();
    assert_eq!(lowest_applicable(&inst).unwrap(), None);
    let p = select_pivot(&inst).unwrap();
    assert_eq!((p.vertex, p.case), (4, PivotCase::B));
    let c = inst.classify(4).unwrap();
    assert_eq!((c.deg_w, c.ndeg, c.gdeg, c.tdeg), (1, 1, 2, 1));
}

#[test]
fn deleting_next_to_a_ptent_drops_the_measure() {
    let inst = gadget("observation").unwrap();
    let mu = inst.measure().mu;
    let child = branch_delete(&inst, 4).unwrap();
    assert_eq!(child.k(), inst.k() - 1);
    // beyond the budget decrement
    assert!(child.measure().mu - fixpoint_mu(&child) >= 1);
    assert!(mu - fixpoint_mu(&child) >= 2);
}

#[test]
fn moving_next_to_a_ptent_drops_the_measure() {
    let inst = gadget("observation").unwrap();
    let mu = inst.measure().mu;
    let child = branch_to_w(&inst, 4).unwrap();
    assert!(child.measure().mu - fixpoint_mu(&child) >= 1);
    assert!(mu - fixpoint_mu(&child) >= 1);
}

#[test]
fn gadgets_solve_like_the_oracle() {
    for name in ifvs_core::gen::GADGETS {
        let inst = gadget(name).unwrap();
        let got = solve_disjoint(&inst).unwrap().solution.map(|s| s.len());
        assert_eq!(got, oracle_disjoint(&inst).unwrap().map(|s| s.len()), "{name}");
    }
}
