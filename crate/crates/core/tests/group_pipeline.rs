use paradecomp::config::{generate_equations, prefix_condition, Subsystem};
use paradecomp::decomp::build_plan_verified;
use paradecomp::gordan::{gordan_alternative, GordanOutcome};
use paradecomp::grouporacle::{
    generate_configurations, parse_generators, FreeGroupOracle, GroupOracle, Instance,
    TableGroupOracle,
};
use paradecomp::normality::search_normality;
use paradecomp::Error;

fn free_instance() -> (FreeGroupOracle, Vec<<FreeGroupOracle as GroupOracle>::Elem>) {
    let g = FreeGroupOracle::first_letter(2).unwrap();
    let gens = parse_generators(&g, "a b").unwrap();
    (g, gens)
}

#[test]
fn free_group_configurations_yield_a_verified_plan() {
    let (g, gens) = free_instance();
    let found = generate_configurations(&g, &gens, 4).unwrap();
    assert!(found.stable);
    assert_eq!(found.set.len(), 11);

    let eqs = generate_equations(&found.set);
    let GordanOutcome::Certificate(m) = gordan_alternative(&eqs.matrix()) else {
        panic!("free group system unexpectedly solvable");
    };
    let sub = Subsystem::from_certificate(&eqs, &m).unwrap();
    let cert = search_normality(sub.pair()).expect("normal order");
    assert!(prefix_condition(&sub, &cert.pi).unwrap());

    let inst = Instance::new(&g, gens, found.set).unwrap();
    let (plan, report) = build_plan_verified(&sub, &cert.pi, &inst, 6).unwrap();
    assert!(report.passed(), "{report}");
    assert!(report.checks.iter().all(|c| c.points_checked > 0));
    assert_eq!(plan.leaves.len() as u64, plan.path_count);
}

#[test]
fn instance_with_wrong_configuration_count_is_rejected() {
    let (g, gens) = free_instance();
    let found = generate_configurations(&g, &gens, 4).unwrap();
    let eqs = generate_equations(&found.set);
    let GordanOutcome::Certificate(m) = gordan_alternative(&eqs.matrix()) else {
        unreachable!()
    };
    let sub = Subsystem::from_certificate(&eqs, &m).unwrap();
    let pi = search_normality(sub.pair()).unwrap().pi;

    let small = generate_configurations(&g, &gens, 1).unwrap();
    assert!(small.set.len() < found.set.len());
    let inst = Instance::new(&g, gens, small.set).unwrap();
    assert!(matches!(
        build_plan_verified(&sub, &pi, &inst, 6),
        Err(Error::Dimension(_))
    ));
}

/// Cyclic group of order 6 split into two blocks: amenable, so the
/// configuration equations have a nonnegative solution.
#[test]
fn finite_cyclic_group_has_a_solution() {
    let n = 6;
    let table: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
    let blocks = (0..n).map(|x| if x % 2 == 0 { 1 } else { 2 }).collect();
    let g = TableGroupOracle::new(table, blocks).unwrap();
    let gens = parse_generators(&g, "1").unwrap();
    let found = generate_configurations(&g, &gens, 6).unwrap();
    assert!(found.stable);
    let eqs = generate_equations(&found.set);
    let outcome = gordan_alternative(&eqs.matrix());
    assert!(outcome.is_solution());
    assert!(outcome.verify(&eqs.matrix()));
}

#[test]
fn non_associative_table_is_rejected() {
    let table = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]];
    assert!(TableGroupOracle::new(table, vec![1, 1, 2]).is_err());
}
