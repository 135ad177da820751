use super::*;
use crate::plcore::sup_lift_distance;
use crate::rational::q;
use proptest::prelude::*;

fn identity_state(p: Rational) -> ConstructionState {
    ConstructionState {
        beta: Rational::zero(),
        map: PLLift::identity(),
        stages: Vec::new(),
        points: vec![p],
        monotone_max: true,
    }
}

fn plan(n: u32, k: u32, eta: Rational) -> StagePlan {
    let blocks = (n + k - 1) as i64;
    StagePlan {
        n,
        k,
        alpha: Rational::zero(),
        big_n: 1,
        eta,
        delta: q(1, 4),
        gamma: q(1, blocks),
        epsilon: q(n as i64 - 1, blocks),
        s: Rational::from_integer(13),
        iota: q(1, 130),
        policy: PlanPolicy::Relaxed,
    }
}

/// A cheap stage: large `η` so the sup-distance check passes at `(7, 2)`.
fn small_stage() -> ConstructionState {
    let st = ConstructionState::initial(&Rational::zero());
    let pl = plan(7, 2, Rational::from_integer(10));
    let (alpha, p) = choose_alpha(&st, &pl).unwrap();
    build_stage(&st, &pl, &alpha, &p, Budget::default()).unwrap()
}

#[test]
fn base_point_has_running_maximum() {
    let s = ConstructionState::initial(&Rational::zero());
    assert!(s.monotone_max);
    assert!(monotone_max_at(&s.map, &q(3, 10)));
    assert!(!monotone_max_at(&s.map, &q(1, 20)));
}

#[test]
fn vertex_floor_matches_slopes() {
    assert_eq!(slope_saturating(7), 239);
    assert_eq!(exact_vertex_floor(7, 2).to_string(), (8 * 239).to_string());
    assert_eq!(slope_saturating(200), u128::MAX);
}

#[test]
fn strict_plan_is_infeasible() {
    let st = ConstructionState::initial(&Rational::zero());
    match plan_stage(&st, &q(1, 4), &q(1, 4), PlanPolicy::Strict, Budget::default()) {
        Err(Error::Infeasible(msg)) => assert!(msg.contains("n >= 131"), "{msg}"),
        other => panic!("expected infeasibility, got {other:?}"),
    }
}

#[test]
fn relaxed_plan_regression() {
    let st = ConstructionState::initial(&Rational::zero());
    let p = plan_stage(&st, &q(1, 4), &q(1, 4), PlanPolicy::Relaxed, Budget::default()).unwrap();
    assert_eq!((p.n, p.k, p.big_n), (7, 308, 5));
    assert!(&p.epsilon * &p.s < p.eta);
    assert!(p.gamma < p.iota && p.gamma < &p.epsilon / 4);
    assert_eq!(p.n % 2, 1);
    assert_eq!(p.k % 2, 0);
    // One fewer pair of blocks breaks ε < η/s.
    assert!(q(6, 312) * Rational::from_integer(13) >= q(1, 4));
}

#[test]
fn lattice_point_needs_no_shift() {
    let st = ConstructionState::initial(&Rational::zero());
    let (alpha, p1) = choose_alpha(&st, &plan(7, 308, q(1, 4))).unwrap();
    assert_eq!(alpha, Rational::zero());
    assert_eq!(p1, q(-4 * 239 + 204, 239 * 314));
}

#[test]
fn midway_point_attains_the_bound() {
    let pl = plan(7, 308, q(1, 4));
    // M_j = (j + 4)/314, so p = (j + 4 + 1/2)/314 sits midway.
    let st = identity_state(q(2 * 10 + 9, 628));
    let (alpha, p_next) = choose_alpha(&st, &pl).unwrap();
    assert_eq!(alpha.abs(), &pl.gamma / 2);
    let lam = lambda(&LambdaParams::new(7, 308, Rational::zero()).unwrap()).unwrap().conjugate_rotation(&alpha);
    assert_eq!(lam.eval(&p_next), *st.p());
}

#[test]
fn missing_running_maximum_is_an_error() {
    let mut st = ConstructionState::initial(&Rational::zero());
    st.points = vec![q(1, 20)];
    st.monotone_max = false;
    assert!(matches!(choose_alpha(&st, &plan(7, 2, q(1, 1))), Err(Error::MonotoneMaxAbsent(_))));
}

#[test]
fn small_stage_passes_all_checks() {
    let st = small_stage();
    let rec = &st.stages[0];
    assert!(rec.checks.measure_preserving && rec.checks.half_turn_symmetric);
    assert!(rec.checks.admissible_n.is_some());
    let m = st.map.map_metrics();
    assert_eq!(m.min_abs_slope, Rational::from_integer(13 * 239));
    assert_eq!(m.max_abs_slope, Rational::from_integer(13 * 239));
    assert_eq!(sup_lift_distance(&st.map, &f_beta(&Rational::zero())).unwrap(), rec.checks.sup_distance);
    let lam = lambda(&rec.plan.params()).unwrap();
    assert_eq!(lam.eval(&st.points[1]), st.points[0]);
    assert!((&st.points[1] - &st.points[0]).abs() <= q(7, 8));
}

#[test]
fn failed_check_aborts_the_stage() {
    let st = ConstructionState::initial(&Rational::zero());
    let pl = plan(7, 2, q(1, 4));
    let (alpha, p) = choose_alpha(&st, &pl).unwrap();
    assert!(matches!(build_stage(&st, &pl, &alpha, &p, Budget::default()), Err(Error::Verification(_))));
}

#[test]
fn budget_overrun_is_reported() {
    let st = ConstructionState::initial(&Rational::zero());
    let pl = plan(7, 2, Rational::from_integer(10));
    let (alpha, p) = choose_alpha(&st, &pl).unwrap();
    let tiny = Budget { vertices: 1000, iterations: 64 };
    assert!(matches!(build_stage(&st, &pl, &alpha, &p, tiny), Err(Error::VertexBudgetExceeded { .. })));
}

#[test]
fn running_maximum_survives_the_stage() {
    let st = small_stage();
    let p = st.p().clone();
    let top = st.map.eval(&p);
    for v in st.map.extended_vertices(&(&p - 3), &p) {
        if v.0 < p {
            assert!(v.1 < top);
        }
    }
    for i in 1..200 {
        let x = &p - &q(i * i, 997);
        assert!(st.map.eval(&x) < top);
    }
}

#[test]
fn calibrated_rotations() {
    let st = small_stage();
    let p = st.p().clone();
    let fixed = st.map_at(&beta_for_rotation(&st, RotationTarget::Fixed));
    assert_eq!(fixed.eval(&p), p);
    let half = st.map_at(&beta_for_rotation(&st, RotationTarget::Half));
    let once = half.eval(&p);
    assert_eq!(&once - &p, Rational::half());
    assert_eq!(half.eval(&once), &p + 1);
}

#[test]
fn parameter_shift_is_an_isometry() {
    let st = small_stage();
    for (a, b) in [(q(0, 1), q(1, 7)), (q(-2, 9), q(1, 3)), (q(1, 1000), q(0, 1))] {
        let d = sup_lift_distance(&st.map_at(&a), &st.map_at(&b)).unwrap();
        assert_eq!(d, (&a - &b).abs());
    }
}

#[test]
fn small_stage_crookedness_full_certificate() {
    // G itself (N = 1) fits the budget, so the certificate is complete.
    let st = small_stage();
    let mut pl = st.stages[0].plan.clone();
    pl.big_n = 1;
    pl.delta = Rational::from_integer(1);
    let c = certify_stage_crookedness(&st, &pl, Budget::default(), SampleConfig::default()).unwrap();
    assert!(c.report.complete && c.report.verdict && c.windows.is_empty());
}

#[test]
fn rotation_is_not_crooked_as_a_stage() {
    let st = identity_state(Rational::zero());
    let mut st = st;
    st.map = PLLift::rotation(&q(1, 3));
    let mut pl = plan(7, 2, q(1, 1));
    pl.delta = q(1, 5);
    let c = certify_stage_crookedness(&st, &pl, Budget::default(), SampleConfig::default()).unwrap();
    assert!(!c.report.verdict);
}

#[test]
fn sampled_certificate_when_iterate_is_large() {
    let st = small_stage();
    let mut pl = st.stages[0].plan.clone();
    pl.big_n = 3;
    pl.delta = q(1, 4);
    let budget = Budget { vertices: 100_000, iterations: 64 };
    let sample = SampleConfig { windows: 2, pairs_per_window: 4, window_vertices: 20_000, seed: 3 };
    let c = certify_stage_crookedness(&st, &pl, budget, sample).unwrap();
    assert!(!c.report.complete);
    assert_eq!(c.report.method, CrookMethod::Sampled);
    assert_eq!(c.windows.len(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alignment_is_exact(num in -5000i64..5000, k in 1u32..40) {
        let k = 2 * k;
        let pl = plan(7, k, q(1, 1));
        let st = identity_state(q(num, 4099));
        let (alpha, p_next) = choose_alpha(&st, &pl).unwrap();
        prop_assert!(&alpha.abs() * 2 <= pl.gamma);
        let lam = lambda(&LambdaParams::new(7, k, Rational::zero()).unwrap()).unwrap().conjugate_rotation(&alpha);
        prop_assert_eq!(lam.eval(&p_next), st.p().clone());
        prop_assert!((&p_next - st.p()).abs() <= q(7, pl.blocks()));
        for i in 1..50 {
            let x = &p_next - &q(i, 97 * pl.blocks());
            prop_assert!(&lam.eval(&x) < st.p());
        }
    }
}
