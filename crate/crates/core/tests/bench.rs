use gcmeta::bench::{bomb, qbf, sc, Action, BombInstance, BombVariant, QbfInstance, ScInstance};
use gcmeta::suite::sc_instance;
use gcmeta::verify::solve_meta;
use gcmeta::{integrate, Budget, TransformOptions};

// Witness and strategic-set counts computed by the truth-table and subset
// oracles; frozen so that generator drift shows up.
#[test]
fn pinned_oracle_counts() {
    for (n, seed, want) in [(2, 0, 0), (2, 1, 1), (3, 2, 2), (4, 0, 5), (4, 2, 7)] {
        let q = qbf::gen_qbf(n, n, 3 * n, 3.min(2 * n), seed).unwrap();
        assert_eq!(qbf::eval_qbf(&q).unwrap().len(), want, "QBF-{n} seed {seed}");
    }
    for (n, seed, want) in [(4, 0, 2), (5, 0, 3), (7, 0, 3), (8, 0, 3), (8, 1, 1)] {
        let inst = sc_instance(n, seed).unwrap();
        assert_eq!(sc::strategic_oracle(&inst).unwrap().len(), want, "SC-{n} seed {seed}");
    }
}

#[test]
fn generators_are_pure() {
    assert_eq!(qbf::gen_qbf(3, 3, 9, 3, 11).unwrap(), qbf::gen_qbf(3, 3, 9, 3, 11).unwrap());
    assert_ne!(qbf::gen_qbf(3, 3, 9, 3, 11).unwrap(), qbf::gen_qbf(3, 3, 9, 3, 12).unwrap());
    assert_eq!(sc::gen_sc(6, 6, 3, 5).unwrap(), sc::gen_sc(6, 6, 3, 5).unwrap());
}

#[test]
fn worked_qbf_witnesses() {
    let q = QbfInstance::worked_example();
    let sets = solve_meta(&integrate(&qbf::encode_qbf(&q), &TransformOptions::ALL).unwrap(), Budget::default()).unwrap();
    let got = qbf::witnesses_integrated(&q, &sets);
    let shown: Vec<String> = got.iter().map(|a| format!("{a:?}")).collect();
    assert_eq!(shown, [r#"{"x0": false, "x1": false}"#, r#"{"x0": false, "x1": true}"#]);
}

#[test]
fn worked_sc_instance() {
    let inst = ScInstance::worked_example();
    let want = sc::strategic_oracle(&inst).unwrap();
    assert_eq!(want.len(), 2);
    assert!(want.iter().all(|s| s.contains("barilla")));
}

#[test]
fn single_package_plan() {
    let inst = BombInstance::worked_example();
    assert_eq!(bomb::conformant_plans(&inst).unwrap().into_iter().collect::<Vec<_>>(), vec![vec![Action::Dunk(0), Action::Flush]]);
}

#[test]
fn clogging_needs_longer_horizons() {
    let count = |v, k, h| bomb::conformant_plans(&BombInstance::new(v, k, h).unwrap()).unwrap().len();
    assert_eq!(count(BombVariant::Btc, 1, 1), 1);
    assert_eq!(count(BombVariant::Btc, 2, 2), 0);
    assert_eq!(count(BombVariant::Btc, 2, 3), 2);
    assert!(count(BombVariant::Btuc, 2, 3) <= count(BombVariant::Btc, 2, 3));
}

#[test]
fn out_of_range_instances_are_rejected() {
    assert!(qbf::gen_qbf(2, 2, 3, 0, 0).is_err());
    assert!(qbf::gen_qbf(1, 1, 3, 3, 0).is_err());
    assert!(BombInstance::new(BombVariant::Btc, bomb::PACKAGE_CAP + 1, 2).is_err());
}
