#![allow(dead_code)]

use cipc_core::model::{Scheme, SchemeConfig, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn unit_system() -> SystemParams {
    SystemParams::default()
}

pub fn unit_config(scheme: Scheme) -> SchemeConfig {
    SchemeConfig { scheme, q: 1.0, p_b_max: 1.0, rate: 0.5, epsilon: 0.1 }
}

pub fn truncated_unit() -> SchemeConfig {
    unit_config(Scheme::Truncated { p_a_max: 1.0 })
}

pub fn conventional_unit() -> SchemeConfig {
    unit_config(Scheme::Conventional)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi / lo).ln()).exp()
}

/// A random but well-conditioned parameter set for the given scheme family.
pub fn random_point(rng: &mut ChaCha8Rng, truncated: bool) -> (SchemeConfig, SystemParams, f64) {
    let lambda_ab = log_uniform(rng, 0.3, 3.0);
    let sys = SystemParams {
        lambda_ab,
        lambda_aw: log_uniform(rng, 0.3, 3.0),
        lambda_bw: log_uniform(rng, 0.3, 3.0),
        lambda_bb: log_uniform(rng, 0.3, 3.0),
        lambda_ba: lambda_ab,
        sigma2_b: log_uniform(rng, 0.1, 2.0),
        sigma2_w: log_uniform(rng, 0.1, 2.0),
        phi: rng.random_range(0.05..1.0),
    };
    let q = log_uniform(rng, 0.2, 5.0);
    let scheme =
        if truncated { Scheme::Truncated { p_a_max: log_uniform(rng, 0.3, 30.0) } } else { Scheme::Conventional };
    let capacity = (q / sys.sigma2_b).ln_1p() / std::f64::consts::LN_2;
    let cfg = SchemeConfig {
        scheme,
        q,
        p_b_max: log_uniform(rng, 0.2, 5.0),
        rate: capacity * rng.random_range(0.2..0.9),
        epsilon: 0.1,
    };
    let g_bw = log_uniform(rng, 0.2, 3.0);
    (cfg, sys, g_bw)
}
