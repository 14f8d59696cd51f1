//! Willie's radiometer: false alarm, miss detection and their sum as a
//! function of the threshold, plus the minimum over thresholds.
//!
//! Under H1 the received power exceeds the H0 power by `X = Q·g_aw/g_ab`.
//! Everything below is written in terms of the survival integral
//! `∫ P[X > x] dx`, which has an elementary form for the conventional scheme
//! and an exponential-integral form for the truncated one.

use crate::error::{CipcError, Result};
use crate::model::{Scheme, SchemeConfig, SystemParams};
use crate::specfun::{e1_scaled, gauss_legendre_8};

/// Willie's knowledge for one block: his own channel gain from Bob and the
/// resulting threshold knee `ν = P_b^max·g_bw + σ_w²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorContext {
    pub g_bw: f64,
    pub nu: f64,
}

impl DetectorContext {
    pub fn new(g_bw: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<Self> {
        if !(g_bw > 0.0 && g_bw.is_finite()) {
            return Err(CipcError::InvalidParameter(format!("g_bw must be positive, got {g_bw}")));
        }
        Ok(Self { g_bw, nu: cfg.p_b_max * g_bw + sys.sigma2_w })
    }

    /// Width of the H0 received-power support, `P_b^max·g_bw`.
    fn spread(&self, sys: &SystemParams) -> f64 {
        self.nu - sys.sigma2_w
    }
}

/// `P[T > τ | H0]`. The same for both schemes, since H0 does not depend on
/// the truncation condition.
pub fn false_alarm(tau: f64, ctx: &DetectorContext, cfg: &SchemeConfig, sys: &SystemParams) -> f64 {
    if tau < sys.sigma2_w {
        1.0
    } else if tau <= ctx.nu {
        // Written as the distance to ν so that α(ν) is exactly zero.
        (ctx.nu - tau) / (cfg.p_b_max * ctx.g_bw)
    } else {
        0.0
    }
}

/// `P[T <= τ | H1]` for the truncated scheme.
pub fn miss_detection_truncated(
    tau: f64,
    ctx: &DetectorContext,
    cfg: &SchemeConfig,
    sys: &SystemParams,
) -> Result<f64> {
    let p_a_max = truncated_power(cfg)?;
    let tail = TruncatedTail::new(cfg.q, p_a_max, sys);
    miss_detection_with(tau, ctx, sys, |a, b| tail.integral(a, b))
}

/// `P[T <= τ | H1]` for the conventional scheme.
pub fn miss_detection_conventional(
    tau: f64,
    ctx: &DetectorContext,
    cfg: &SchemeConfig,
    sys: &SystemParams,
) -> Result<f64> {
    let scale = conventional_scale(cfg.q, sys);
    let spread = ctx.spread(sys);
    let s = tau - sys.sigma2_w;
    if s < 0.0 {
        return Ok(0.0);
    }
    if tau <= ctx.nu {
        // (s - scale·ln(1 + s/scale)) / spread, with y - ln(1+y) expanded for small y
        let y = s / scale;
        return Ok((scale * y_minus_ln1p(y) / spread).clamp(0.0, 1.0));
    }
    let lower = tau - ctx.nu;
    let survived = scale * (spread / (scale + lower)).ln_1p();
    Ok((1.0 - survived / spread).clamp(0.0, 1.0))
}

/// Dispatches on the configured scheme.
pub fn miss_detection(tau: f64, ctx: &DetectorContext, cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    match cfg.scheme {
        Scheme::Truncated { .. } => miss_detection_truncated(tau, ctx, cfg, sys),
        Scheme::Conventional => miss_detection_conventional(tau, ctx, cfg, sys),
    }
}

/// `α(τ) + β(τ)`.
pub fn total_error(tau: f64, ctx: &DetectorContext, cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    Ok(false_alarm(tau, ctx, cfg, sys) + miss_detection(tau, ctx, cfg, sys)?)
}

/// The threshold minimizing the total error. Equal to ν for both schemes.
pub fn optimal_threshold(ctx: &DetectorContext) -> f64 {
    ctx.nu
}

/// Minimum total error `ξ*(g_bw, Q)`.
pub fn xi_star(g_bw: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    if !(g_bw > 0.0 && g_bw.is_finite()) {
        return Err(CipcError::InvalidParameter(format!("g_bw must be positive, got {g_bw}")));
    }
    let spread = cfg.p_b_max * g_bw;
    match cfg.scheme {
        Scheme::Truncated { p_a_max } => {
            let tail = TruncatedTail::new(cfg.q, p_a_max, sys);
            Ok((1.0 - tail.integral(0.0, spread)? / spread).clamp(0.0, 1.0))
        }
        Scheme::Conventional => Ok(xi_star_conventional_ratio(spread / conventional_scale(cfg.q, sys))),
    }
}

/// `1 - ln(1+x)/x`, the conventional minimum error as a function of
/// `x = P_b^max·λ_ab·g_bw / (Q·λ_aw)`.
pub fn xi_star_conventional_ratio(x: f64) -> f64 {
    if x < 1e-3 {
        // x/2 - x²/3 + x³/4 - x⁴/5 + x⁵/6
        x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x * (0.2 - x / 6.0))))
    } else {
        1.0 - x.ln_1p() / x
    }
}

/// α, β and ξ sampled over a list of thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionCurve {
    pub taus: Vec<f64>,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub xis: Vec<f64>,
    pub tau_star: f64,
    pub xi_star: f64,
}

impl DetectionCurve {
    pub fn evaluate(taus: &[f64], ctx: &DetectorContext, cfg: &SchemeConfig, sys: &SystemParams) -> Result<Self> {
        let mut alphas = Vec::with_capacity(taus.len());
        let mut betas = Vec::with_capacity(taus.len());
        let mut xis = Vec::with_capacity(taus.len());
        for &tau in taus {
            let a = false_alarm(tau, ctx, cfg, sys);
            let b = miss_detection(tau, ctx, cfg, sys)?;
            alphas.push(a);
            betas.push(b);
            xis.push(a + b);
        }
        Ok(Self {
            taus: taus.to_vec(),
            alphas,
            betas,
            xis,
            tau_star: optimal_threshold(ctx),
            xi_star: xi_star(ctx.g_bw, cfg, sys)?,
        })
    }
}

/// `Q·λ_aw/λ_ab`, the scale of the excess power `X` in the conventional scheme.
fn conventional_scale(q: f64, sys: &SystemParams) -> f64 {
    q * sys.lambda_aw / sys.lambda_ab
}

fn truncated_power(cfg: &SchemeConfig) -> Result<f64> {
    cfg.scheme
        .p_a_max()
        .ok_or_else(|| CipcError::InvalidParameter("truncated analytics called with a conventional config".into()))
}

/// Shared three-branch structure of β once the survival integral is known.
fn miss_detection_with(
    tau: f64,
    ctx: &DetectorContext,
    sys: &SystemParams,
    survival: impl Fn(f64, f64) -> Result<f64>,
) -> Result<f64> {
    let spread = ctx.spread(sys);
    let s = tau - sys.sigma2_w;
    if s < 0.0 {
        return Ok(0.0);
    }
    let beta = if tau <= ctx.nu { (s - survival(0.0, s)?) / spread } else { 1.0 - survival(tau - ctx.nu, s)? / spread };
    Ok(beta.clamp(0.0, 1.0))
}

/// `y - ln(1+y)` without cancellation for small `y`.
fn y_minus_ln1p(y: f64) -> f64 {
    if y < 1e-3 {
        // y²/2 - y³/3 + y⁴/4 - y⁵/5
        y * y * (0.5 - y * (1.0 / 3.0 - y * (0.25 - y / 5.0)))
    } else {
        y - y.ln_1p()
    }
}

/// Survival function of the excess power under the truncated scheme:
/// `P[X > x | C] = e^{-k x} / (1 + m x)` with `k = 1/(P_a^max·λ_aw)` and
/// `m = λ_ab/(Q·λ_aw)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TruncatedTail {
    k: f64,
    m: f64,
    /// `Q/(P_a^max·λ_ab)`, the exponential-integral argument at `x = 0`.
    c: f64,
}

impl TruncatedTail {
    pub(crate) fn new(q: f64, p_a_max: f64, sys: &SystemParams) -> Self {
        Self {
            k: 1.0 / (p_a_max * sys.lambda_aw),
            m: sys.lambda_ab / (q * sys.lambda_aw),
            c: q / (p_a_max * sys.lambda_ab),
        }
    }

    fn survival(&self, x: f64) -> f64 {
        (-self.k * x).exp() / (1.0 + self.m * x)
    }

    /// `∫_{x1}^{x2} P[X > x] dx` for `0 <= x1 <= x2`. Short intervals use a
    /// fixed Gauss rule where the exponential-integral difference would
    /// cancel.
    pub(crate) fn integral(&self, x1: f64, x2: f64) -> Result<f64> {
        if x2 <= x1 {
            return Ok(0.0);
        }
        let u1 = self.c * (1.0 + self.m * x1);
        let du = self.c * self.m * (x2 - x1);
        if du <= 0.05 * u1.min(1.0) {
            Ok(gauss_legendre_8(|x| self.survival(x), x1, x2))
        } else {
            self.exponential_integral_form(x1, x2)
        }
    }

    /// `(1/m)·e^c·[Ei(-u2) - Ei(-u1)]` with `u = c(1 + m x)`, evaluated
    /// through `e^u E1(u)` so that a large `c` does not overflow.
    pub(crate) fn exponential_integral_form(&self, x1: f64, x2: f64) -> Result<f64> {
        let u1 = self.c * (1.0 + self.m * x1);
        let u2 = self.c * (1.0 + self.m * x2);
        if u1.abs() < 1e-300 {
            return Err(CipcError::Domain(format!("exponential integral argument {u1:e} is at the singularity")));
        }
        let lo = (self.c - u1).exp() * e1_scaled(u1)?;
        let hi = (self.c - u2).exp() * e1_scaled(u2)?;
        Ok((lo - hi) / self.m)
    }
}
