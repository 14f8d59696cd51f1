//! Link reliability from Alice to Bob under residual self-interference.

use crate::error::{CipcError, Result};
use crate::model::{max_decodable_rate, ChannelDraw, SchemeConfig, SystemParams};
use crate::specfun::e1_scaled;

/// Instantaneous SINR at Bob. Channel inversion makes it independent of `g_ab`.
pub fn sinr_at_bob(draw: &ChannelDraw, cfg: &SchemeConfig, sys: &SystemParams) -> f64 {
    cfg.q / (sys.phi * draw.p_b * draw.g_bb + sys.sigma2_b)
}

/// The quantities that determine the outage probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageInputs {
    pub q: f64,
    pub rate: f64,
    pub sigma2_b: f64,
    pub phi: f64,
    pub lambda_bb: f64,
    pub p_b_max: f64,
    /// Normalized SINR margin; infinite when there is no self-interference.
    pub eta: f64,
}

impl OutageInputs {
    pub fn new(cfg: &SchemeConfig, sys: &SystemParams) -> Self {
        Self {
            q: cfg.q,
            rate: cfg.rate,
            sigma2_b: sys.sigma2_b,
            phi: sys.phi,
            lambda_bb: sys.lambda_bb,
            p_b_max: cfg.p_b_max,
            eta: eta(cfg.q, cfg.rate, cfg.p_b_max, sys),
        }
    }
}

/// `(Q - (2^R - 1)σ_b²) / ((2^R - 1)·λ_bb·φ·P_b^max)`.
///
/// Negative when the rate is not decodable, `+∞` when `φ = 0`.
pub fn eta(q: f64, rate: f64, p_b_max: f64, sys: &SystemParams) -> f64 {
    let threshold = rate.exp2() - 1.0;
    let margin = q - threshold * sys.sigma2_b;
    if sys.phi == 0.0 {
        return if margin > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    margin / (threshold * sys.lambda_bb * sys.phi * p_b_max)
}

/// `δ(η) = e^{-η} + η·Ei(-η)` for `η >= 0`.
pub fn outage_from_eta(eta: f64) -> Result<f64> {
    if eta.is_nan() || eta < 0.0 {
        return Err(CipcError::Domain(format!("outage needs eta >= 0, got {eta}")));
    }
    if eta == 0.0 {
        return Ok(1.0);
    }
    if eta.is_infinite() {
        return Ok(0.0);
    }
    // e^{-η}·(1 - η·e^η·E1(η)); the bracket is in (0, 1) for every η > 0.
    let bracket = 1.0 - eta * e1_scaled(eta)?;
    Ok(((-eta).exp() * bracket).clamp(0.0, 1.0))
}

/// Outage probability `P[log2(1 + γ_b) <= R]`.
///
/// Fails with a domain error when `R >= log2(1 + Q/σ_b²)`.
pub fn outage_probability(cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    let cap = max_decodable_rate(cfg.q, sys);
    if !(cfg.rate < cap) {
        return Err(CipcError::Domain(format!("rate {} is not below the decodable limit {cap}", cfg.rate)));
    }
    if sys.phi == 0.0 {
        return Ok(0.0);
    }
    outage_from_eta(eta(cfg.q, cfg.rate, cfg.p_b_max, sys))
}

/// Like [`outage_probability`], but a non-decodable rate means certain
/// outage instead of an error. Used inside the optimizers.
pub fn outage_probability_saturating(cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    if cfg.rate >= max_decodable_rate(cfg.q, sys) {
        return Ok(1.0);
    }
    outage_probability(cfg, sys)
}
