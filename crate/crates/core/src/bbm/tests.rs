use super::*;
use crate::generators::f_beta;
use crate::rational::q;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The base map at `β = 0` with `p = 0`, which has the running-maximum property.
fn base_cfg(beta: Rational) -> UnwrapConfig {
    let lift = Shared::new(f_beta(&Rational::zero()));
    let k = UnwrapConfig::default_k(&lift, &Rational::zero(), &[q(-1, 2), q(1, 2)]).unwrap();
    UnwrapConfig::new(lift, Rational::zero(), beta, Rational::zero(), k).unwrap()
}

fn fixed_beta() -> Rational {
    // p - G̃_0(p) with p = 0 and G̃_0(0) = 1/2.
    q(-1, 2)
}

#[test]
fn smash_branches() {
    let k = 3.0;
    assert_eq!(smash(&AnnulusPoint::new(0.25, 1.0), k), AnnulusPoint::new(0.25, 0.0));
    assert_eq!(smash(&AnnulusPoint::new(0.25, k + 2.5), k).t, 0.5 * (k + 3.0));
    assert_eq!(smash(&AnnulusPoint::new(0.25, -k - 3.0), k).t, -(k + 3.0));
}

#[test]
fn middle_circle_rule() {
    let cfg = base_cfg(q(1, 7));
    for i in 0..50 {
        let x = i as f64 / 50.0 + 0.003;
        let g = cfg.circle_eval(x);
        let img = unwrap_eval(&cfg, &AnnulusPoint::new(x, 0.0)).unwrap();
        assert!((img.t - (g - x)).abs() < 1e-12);
        let dx = (img.x - g.rem_euclid(1.0)).abs();
        assert!(dx.min(1.0 - dx) < 1e-12);
    }
}

#[test]
fn vertical_rule_reaches_height_k() {
    let cfg = base_cfg(q(1, 9));
    let d = cfg.displacement().to_f64();
    let img = unwrap_eval(&cfg, &AnnulusPoint::new(0.0, cfg.k() - d)).unwrap();
    assert!((img.t - cfg.k()).abs() < 1e-12);
    let g = cfg.circle_eval(0.0).rem_euclid(1.0);
    assert!((img.x - g).abs() < 1e-12);
}

#[test]
fn outer_strips() {
    let cfg = base_cfg(q(1, 5));
    let d = cfg.displacement().to_f64();
    let hi = unwrap_eval(&cfg, &AnnulusPoint::new(0.3, cfg.k() + 1.5)).unwrap();
    assert!((hi.x - (0.3 + d).rem_euclid(1.0)).abs() < 1e-12 && hi.t == cfg.k() + 1.5);
    let lo = unwrap_eval(&cfg, &AnnulusPoint::new(0.3, -cfg.k() - 1.5)).unwrap();
    assert_eq!(lo, AnnulusPoint::new(0.3, -cfg.k() - 1.5));
}

#[test]
fn contraction_and_restriction() {
    let cfg = base_cfg(q(1, 3));
    let h = cfg.k() + 3.0;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5000 {
        let pt = AnnulusPoint::new(rng.gen::<f64>(), rng.gen_range(-h..h));
        if pt.t == 0.0 {
            continue;
        }
        assert!(h_eval(&cfg, &pt).unwrap().t.abs() < pt.t.abs());
        let x = rng.gen::<f64>();
        let img = h_eval(&cfg, &AnnulusPoint::new(x, 0.0)).unwrap();
        let dx = (img.x - cfg.circle_eval(x).rem_euclid(1.0)).abs();
        assert!(img.t == 0.0 && dx.min(1.0 - dx) < 1e-12);
    }
}

#[test]
fn clouds_collapse() {
    let cfg = base_cfg(q(1, 4));
    let mut cloud = PointCloud::grid(40, 31, cfg.k());
    cloud.points.retain(|p| p.t.abs() <= cfg.k() + 2.0);
    let mut last = cloud.max_abs_t();
    for _ in 0..3 {
        cloud = attract(&cfg, &cloud, 1, 1e-9).unwrap();
        assert!(cloud.max_abs_t() <= last);
        last = cloud.max_abs_t();
    }
    assert_eq!(last, 0.0);
    // (K+3)(t-K-2) <= K+2 once t <= K+2+(K+2)/(K+3).
    let t = cfg.k() + 2.0 + 0.9 * (cfg.k() + 2.0) / (cfg.k() + 3.0);
    let outer = PointCloud { points: vec![AnnulusPoint::new(0.4, t)], generation: 0 };
    assert_eq!(attract(&cfg, &outer, 2, 1e-9).unwrap().max_abs_t(), 0.0);
    let rim = PointCloud { points: vec![AnnulusPoint::new(0.4, cfg.k() + 3.0)], generation: 0 };
    assert_eq!(attract(&cfg, &rim, 5, 1e-9).unwrap().max_abs_t(), cfg.k() + 3.0);
}

#[test]
fn middle_circle_cloud_follows_the_circle_map() {
    let cfg = base_cfg(q(2, 9));
    let seed = PointCloud::circle(64);
    let img = attract(&cfg, &seed, 1, 0.0).unwrap();
    assert!(img.points.iter().all(|p| p.t == 0.0));
    let mut expected: Vec<f64> = seed.points.iter().map(|p| cfg.circle_eval(p.x).rem_euclid(1.0)).collect();
    expected.sort_by(f64::total_cmp);
    let mut got: Vec<f64> = img.points.iter().map(|p| p.x).collect();
    got.sort_by(f64::total_cmp);
    for (a, b) in got.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn hausdorff_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cloud = |n: usize, spread: f64| PointCloud {
        points: (0..n).map(|_| AnnulusPoint::new(rng.gen::<f64>(), rng.gen_range(-spread..spread))).collect(),
        generation: 0,
    };
    for (na, nb, sa, sb) in [(1000, 1000, 1.0, 1.0), (300, 700, 0.01, 4.0), (1, 1, 1.0, 1.0), (50, 1000, 5.0, 0.0001)] {
        let (a, b) = (cloud(na, sa), cloud(nb, sb));
        assert!((hausdorff(&a, &b) - hausdorff_brute(&a, &b)).abs() < 1e-15);
    }
    let a = cloud(100, 1.0);
    assert_eq!(hausdorff(&a, &a), 0.0);
}

#[test]
fn hausdorff_of_singletons_is_the_point_distance() {
    let a = PointCloud { points: vec![AnnulusPoint::new(0.95, 0.0)], generation: 0 };
    let b = PointCloud { points: vec![AnnulusPoint::new(0.05, 0.02)], generation: 0 };
    assert!((hausdorff(&a, &b) - 0.1).abs() < 1e-15);
}

#[test]
fn rotation_proxies() {
    let fixed = base_cfg(fixed_beta());
    let half = base_cfg(Rational::zero());
    assert_eq!(boundary_rotation(&fixed), Rational::zero());
    assert_eq!(boundary_rotation(&half), Rational::half());
    assert_eq!(accessible_orbit(&fixed, 10).period, Some(1));
    let o = accessible_orbit(&half, 10);
    assert_eq!(o.period, Some(2));
    assert_eq!(o.orbit, vec![Rational::zero(), Rational::half()]);
    let b = q(1, 7);
    let generic = base_cfg(b.clone());
    assert_eq!((&boundary_rotation(&generic) - &boundary_rotation(&half)).fract(), b);
}

#[test]
fn generic_orbit_reports_prefix() {
    let cfg = base_cfg(q(1, 1000));
    let o = accessible_orbit(&cfg, 5);
    if o.period.is_none() {
        assert_eq!(o.orbit.len(), 6);
    }
}

#[test]
fn radial_lines_are_equivariant() {
    let fixed = base_cfg(fixed_beta());
    let half = base_cfg(Rational::zero());
    for cfg in [&fixed, &half] {
        assert!(radial_deviation(cfg, &Rational::zero(), 100).unwrap() < 1e-12);
        assert!(radial_deviation(cfg, &Rational::half(), 100).unwrap() < 1e-12);
    }
}

#[test]
fn degenerate_configurations_are_rejected() {
    let lift = Shared::new(f_beta(&Rational::zero()));
    assert!(UnwrapConfig::new(lift.clone(), Rational::zero(), Rational::zero(), Rational::zero(), 0.1).is_err());
    // p = 1/20 lacks the running maximum, so some line has its anchors out of order.
    let cfg = UnwrapConfig::new(lift, Rational::zero(), Rational::zero(), q(1, 20), 3.0).unwrap();
    let bad = (0..400).any(|i| unwrap_eval(&cfg, &AnnulusPoint::new(i as f64 / 400.0, 0.5)).is_err());
    assert!(bad);
}
