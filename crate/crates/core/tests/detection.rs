mod common;

use approx::assert_relative_eq;
use cipc_core::detection::*;
use cipc_core::mc::{simulate_detection, Hypothesis, McConfig};
use cipc_core::model::{Scheme, SchemeConfig};
use cipc_core::specfun::ei;
use common::*;

#[test]
fn grid_argmin_is_the_knee() {
    let mut rng = rng(11);
    for truncated in [false, true] {
        for _ in 0..10 {
            let (cfg, sys, g) = random_point(&mut rng, truncated);
            let ctx = DetectorContext::new(g, &cfg, &sys).unwrap();
            let n = 10_000;
            let top = 2.0 * ctx.nu;
            let step = top / (n - 1) as f64;
            let (best, _) = (0..n)
                .map(|i| i as f64 * step)
                .map(|t| (t, total_error(t, &ctx, &cfg, &sys).unwrap()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!((best - ctx.nu).abs() <= step, "argmin {best}, knee {}", ctx.nu);
            assert_eq!(false_alarm(ctx.nu, &ctx, &cfg, &sys), 0.0);
        }
    }
}

/// The minimum error written out with `Ei` directly, independently of the
/// scaled evaluation used by the library.
fn truncated_minimum_via_ei(g: f64, cfg: &SchemeConfig, p_a_max: f64) -> f64 {
    let c = cfg.q / p_a_max;
    let u2 = c * (1.0 + cfg.p_b_max * g / cfg.q);
    let integral = cfg.q * c.exp() * (ei(-u2).unwrap() - ei(-c).unwrap());
    1.0 - integral / (cfg.p_b_max * g)
}

#[test]
fn truncated_minimum_consistency() {
    let sys = unit_system();
    for (q, pa, g) in [(1.0, 1.0, 1.0), (0.3, 2.0, 0.5), (4.0, 10.0, 2.0), (1.0, 0.2, 3.0)] {
        let cfg = SchemeConfig { q, ..unit_config(Scheme::Truncated { p_a_max: pa }) };
        let ctx = DetectorContext::new(g, &cfg, &sys).unwrap();
        let direct = truncated_minimum_via_ei(g, &cfg, pa);
        let star = xi_star(g, &cfg, &sys).unwrap();
        let at_knee = miss_detection(ctx.nu, &ctx, &cfg, &sys).unwrap();
        assert_relative_eq!(star, direct, max_relative = 1e-12);
        assert_relative_eq!(star, at_knee, max_relative = 1e-12);
    }
}

#[test]
fn truncated_converges_to_conventional() {
    let sys = unit_system();
    let conv = conventional_unit();
    let g = 1.0;
    let ctx = DetectorContext::new(g, &conv, &sys).unwrap();
    let taus = [1.2, 1.5, 1.9, 2.0, 2.5, 3.5];
    let mut previous_gap = f64::INFINITY;
    for k in 0..=6 {
        let pa = 10f64.powi(k);
        let tr = conv.with_scheme(Scheme::Truncated { p_a_max: pa });
        let gap = taus
            .iter()
            .map(|&t| {
                (miss_detection(t, &ctx, &tr, &sys).unwrap() - miss_detection(t, &ctx, &conv, &sys).unwrap()).abs()
            })
            .fold(0.0, f64::max);
        assert!(gap <= previous_gap + 1e-15);
        previous_gap = gap;
    }
    assert!(previous_gap < 1e-4, "gap at 1e6: {previous_gap}");
}

#[test]
fn conventional_minimum_decreases_in_q() {
    let sys = unit_system();
    let mut prev = 1.0;
    for i in 0..30 {
        let q = 1e-3 * 1.6f64.powi(i);
        let v = xi_star(1.0, &conventional_unit().with_q(q), &sys).unwrap();
        assert!(v < prev);
        prev = v;
    }
}

#[test]
fn closed_forms_match_simulation() {
    let mut rng = rng(5);
    let mc = McConfig::new(2024, 1_000_000);
    for (k, truncated) in [false, true, false, true].into_iter().enumerate() {
        let (cfg, sys, g) = random_point(&mut rng, truncated);
        let ctx = DetectorContext::new(g, &cfg, &sys).unwrap();
        for (j, frac) in [0.3, 1.0, 1.4].into_iter().enumerate() {
            let tau = sys.sigma2_w + frac * (ctx.nu - sys.sigma2_w);
            let stream = (10 * k + j) as u64;
            let a = simulate_detection(tau, Hypothesis::H0, g, &cfg, &sys, &mc.with_stream(2 * stream)).unwrap();
            let b = simulate_detection(tau, Hypothesis::H1, g, &cfg, &sys, &mc.with_stream(2 * stream + 1)).unwrap();
            let za = a.z_score(false_alarm(tau, &ctx, &cfg, &sys));
            let zb = b.z_score(miss_detection(tau, &ctx, &cfg, &sys).unwrap());
            assert!(za.abs() <= 4.0 && zb.abs() <= 4.0, "{cfg:?} tau {tau}: z = {za}, {zb}");
        }
    }
}

#[test]
fn unit_parameter_simulations() {
    let sys = unit_system();
    let mc = McConfig::new(9, 2_000_000);
    let conv = conventional_unit();
    let b = simulate_detection(2.0, Hypothesis::H1, 1.0, &conv, &sys, &mc).unwrap();
    assert!(b.z_score(1.0 - std::f64::consts::LN_2).abs() < 3.0);
    let a = simulate_detection(1.5, Hypothesis::H0, 1.0, &conv, &sys, &mc.with_stream(1)).unwrap();
    assert!(a.z_score(0.5).abs() < 3.0);
    let tr = truncated_unit();
    let ctx = DetectorContext::new(1.0, &tr, &sys).unwrap();
    let b = simulate_detection(1.5, Hypothesis::H1, 1.0, &tr, &sys, &mc.with_stream(2)).unwrap();
    assert!(b.z_score(miss_detection(1.5, &ctx, &tr, &sys).unwrap()).abs() < 3.0);
}
