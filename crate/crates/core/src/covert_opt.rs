//! Covertness-constrained throughput.
//!
//! The warden's minimum error averaged over his channel, `ξ̄(Q)`, decides
//! which received-power targets are covert. Among those, the optimizers
//! pick the `Q` (and optionally the rate) that maximizes the effective
//! covert throughput `R·(1 - δ)·P_C`.

use rayon::prelude::*;

use crate::detection::{xi_star, xi_star_conventional_ratio};
use crate::error::{CipcError, Result};
use crate::model::{condition_c_probability, max_decodable_rate, priors, Scheme, SchemeConfig, SystemParams};
use crate::outage::{eta, outage_probability, outage_probability_saturating};
use crate::specfun::{
    ei, harmonic_exponential_series, hyper3f3_unit_params, try_integrate_semi_infinite, QuadratureSpec, EULER_GAMMA,
};

/// Tolerances for the expectation over the warden's channel.
const XI_BAR_QUADRATURE: QuadratureSpec = QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 2000 };

/// Largest `1/φ(Q)` for which the series closed form is trusted. The terms
/// grow like `e^a` and cancel, so the relative error is roughly
/// `1e-16·e^a`: about 5e-9 at this limit and 2e-5 at `a = 20`.
pub const CLOSED_FORM_LIMIT: f64 = 12.0;

/// Slack below which a design point still counts as covert.
pub const SLACK_TOLERANCE: f64 = 1e-9;

/// Initial half-width, in decades, of the bracket for the conventional root.
const ROOT_BRACKET_DECADES: f64 = 6.0;
const ROOT_WIDENINGS: usize = 5;
const ROOT_TARGET_TOL: f64 = 1e-12;

/// Minimum number of scan points for the truncated optimizer, and the
/// density used when the bracket spans more than a few decades.
const SCAN_POINTS: usize = 200;
const SCAN_POINTS_PER_DECADE: f64 = 40.0;

/// Relative precision of golden-section refinements.
const GOLDEN_REL_TOL: f64 = 1e-6;

/// Outcome flag for one optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EctStatus {
    Ok,
    /// The fixed rate is not decodable at the optimal `Q`; throughput is zero.
    Undecodable,
}

impl EctStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            EctStatus::Ok => "ok",
            EctStatus::Undecodable => "undecodable",
        }
    }
}

/// The optimal operating point for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EctResult {
    pub q_star: f64,
    pub r_used: f64,
    /// Set when the rate was optimized.
    pub r_star: Option<f64>,
    pub ect: f64,
    pub xi_bar_at_q_star: f64,
    /// `min{π0,π1}·ξ̄ - (min{π0,π1} - ε)`; non-negative when covert.
    pub constraint_slack: f64,
    /// Large-jamming-power limit of the throughput (conventional only).
    pub asymptotic_bound: Option<f64>,
    pub status: EctStatus,
}

/// `φ(Q) = P_b^max·λ_ab·λ_bw / (Q·λ_aw)`. The conventional detection
/// quantities depend on the powers only through this ratio.
pub fn scale_ratio(q: f64, cfg: &SchemeConfig, sys: &SystemParams) -> f64 {
    cfg.p_b_max * sys.lambda_ab * sys.lambda_bw / (q * sys.lambda_aw)
}

/// Expected minimum detection error for the conventional scheme.
pub fn xi_bar_conventional(q: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    check_q(q)?;
    let ratio = scale_ratio(q, cfg, sys);
    // E over g_bw = λ_bw·y with y ~ Exp(1)
    let v = try_integrate_semi_infinite(
        |y| Ok((-y).exp() * xi_star_conventional_ratio(ratio * y)),
        0.0,
        &XI_BAR_QUADRATURE,
    )?;
    Ok(v.clamp(0.0, 1.0))
}

/// Series closed form of [`xi_bar_conventional`].
///
/// With `a = 1/φ(Q)`, `ξ̄ = 1 - a·J(a)` where
/// `J(a) = ∫_0^∞ e^{-y} ln(1 + y/a)/y dy
///       = π²/4 - γ²/2 - γ ln a - ½ ln²a + (γ + ln a)·Ei(a)
///         - a·₃F₃(1,1,1; 2,2,2; a) - Σ_{k≥1} H_k a^k/(k·k!)`.
///
/// Returns `None` when `a` exceeds [`CLOSED_FORM_LIMIT`].
pub fn xi_bar_conventional_closed_form(q: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<Option<f64>> {
    check_q(q)?;
    let a = 1.0 / scale_ratio(q, cfg, sys);
    if !(a <= CLOSED_FORM_LIMIT) {
        return Ok(None);
    }
    let g = EULER_GAMMA;
    let ln_a = a.ln();
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let j = pi2 / 4.0 - 0.5 * g * g - g * ln_a - 0.5 * ln_a * ln_a + (g + ln_a) * ei(a)?
        - a * hyper3f3_unit_params(a)?
        - harmonic_exponential_series(a)?;
    Ok(Some(1.0 - a * j))
}

/// Expected minimum detection error for the truncated scheme.
pub fn xi_bar_truncated(q: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    check_q(q)?;
    if cfg.scheme.p_a_max().is_none() {
        return Err(CipcError::InvalidParameter("truncated analytics need p_a_max".into()));
    }
    let cfg = cfg.with_q(q);
    let v = try_integrate_semi_infinite(
        |y| {
            if y == 0.0 {
                return Ok(0.0);
            }
            Ok((-y).exp() * xi_star(sys.lambda_bw * y, &cfg, sys)?)
        },
        0.0,
        &XI_BAR_QUADRATURE,
    )?;
    Ok(v.clamp(0.0, 1.0))
}

/// Dispatches on the configured scheme.
pub fn xi_bar(q: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    match cfg.scheme {
        Scheme::Truncated { .. } => xi_bar_truncated(q, cfg, sys),
        Scheme::Conventional => xi_bar_conventional(q, cfg, sys),
    }
}

/// Slack of the covertness constraint `min{π0,π1}·ξ̄(Q) >= min{π0,π1} - ε`
/// given an already computed `ξ̄(Q)`.
pub fn covertness_slack_from(xi_bar: f64, q: f64, cfg: &SchemeConfig, sys: &SystemParams) -> f64 {
    let p = priors(&cfg.with_q(q), sys).min();
    p * xi_bar - (p - cfg.epsilon)
}

/// Slack of the covertness constraint at `q`.
pub fn covertness_slack(q: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    Ok(covertness_slack_from(xi_bar(q, cfg, sys)?, q, cfg, sys))
}

/// The received-power target `Q_ε` at which the conventional scheme meets
/// the covertness constraint with equality, `ξ̄(Q_ε) = 1 - 2ε`.
pub fn solve_q_epsilon(cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    if cfg.scheme != Scheme::Conventional {
        return Err(CipcError::InvalidParameter("Q_epsilon is defined for the conventional scheme".into()));
    }
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 0.5) {
        return Err(CipcError::InvalidParameter(format!(
            "epsilon must lie in (0, 1/2) to solve for Q, got {}",
            cfg.epsilon
        )));
    }
    let target = 1.0 - 2.0 * cfg.epsilon;
    let f = |q: f64| xi_bar_conventional(q, cfg, sys).map(|v| v - target);

    let center = cfg.p_b_max * sys.lambda_ab * sys.lambda_bw / sys.lambda_aw;
    let mut lo = center * 10f64.powf(-ROOT_BRACKET_DECADES);
    let mut hi = center * 10f64.powf(ROOT_BRACKET_DECADES);
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    let mut widenings = 0;
    // ξ̄ decreases in Q, so the target is straddled when f(lo) > 0 > f(hi).
    while !(f_lo >= 0.0 && f_hi <= 0.0) {
        if widenings == ROOT_WIDENINGS {
            return Err(CipcError::BracketNotFound { lo, hi });
        }
        if f_lo < 0.0 {
            lo /= 10.0;
            f_lo = f(lo)?;
        }
        if f_hi > 0.0 {
            hi *= 10.0;
            f_hi = f(hi)?;
        }
        widenings += 1;
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        let f_mid = f(mid)?;
        if f_mid.abs() <= ROOT_TARGET_TOL || hi / lo - 1.0 <= 4.0 * f64::EPSILON {
            return Ok(mid);
        }
        if f_mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Effective covert throughput `R·(1 - δ)·P_C` at `(q, rate)`.
///
/// Fails with a domain error when the rate is not decodable.
pub fn ect(q: f64, rate: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    let point = cfg.with_q(q).with_rate(rate);
    let delta = outage_probability(&point, sys)?;
    Ok(rate * (1.0 - delta) * condition_c_probability(&point, sys))
}

/// Same as [`ect`] but zero when the rate is not decodable.
fn ect_saturating(q: f64, rate: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    let point = cfg.with_q(q).with_rate(rate);
    let delta = outage_probability_saturating(&point, sys)?;
    Ok(rate * (1.0 - delta) * condition_c_probability(&point, sys))
}

/// `R·(1 - e^{-η} - η·Ei(-η))` evaluated directly through `Ei`, for the
/// conventional scheme at `(q, rate)`.
pub fn max_ect_closed_form(q: f64, rate: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    if !(rate < max_decodable_rate(q, sys)) {
        return Err(CipcError::Domain(format!("rate {rate} is not decodable at q = {q}")));
    }
    let e = eta(q, rate, cfg.p_b_max, sys);
    Ok(rate * throughput_fraction(e)?)
}

/// `1 - e^{-η} - η·Ei(-η)`, with the limits at 0 and ∞.
fn throughput_fraction(eta: f64) -> Result<f64> {
    if eta.is_infinite() {
        return Ok(1.0);
    }
    if eta <= 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 - (-eta).exp() - eta * ei(-eta)?)
}

/// The throughput limit of the conventional scheme as `P_b^max → ∞`, given
/// the rate and `θ_ε = P_b^max/Q_ε` (which does not depend on `P_b^max`).
pub fn asymptotic_bound_from_theta(rate: f64, theta: f64, sys: &SystemParams) -> Result<f64> {
    if sys.phi == 0.0 {
        return Ok(rate);
    }
    let eta_inf = 1.0 / ((rate.exp2() - 1.0) * sys.lambda_bb * sys.phi * theta);
    Ok(rate * throughput_fraction(eta_inf)?)
}

/// Large-jamming-power throughput limit of the conventional scheme at the
/// configured rate.
pub fn asymptotic_ect_bound(cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    if sys.phi == 0.0 {
        return Ok(cfg.rate);
    }
    let q = solve_q_epsilon(cfg, sys)?;
    asymptotic_bound_from_theta(cfg.rate, cfg.p_b_max / q, sys)
}

/// Open rate interval searched by the rate optimizer at `q`.
fn rate_interval(q: f64, sys: &SystemParams) -> (f64, f64) {
    let hi = max_decodable_rate(q, sys) - 1e-9;
    let lo = 1e-3 * hi.min(1.0);
    (lo, hi)
}

/// Best rate at `q` and the throughput it achieves. `(0, 0)` when `q` is too
/// small to support any rate.
fn best_rate(q: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<(f64, f64)> {
    let (lo, hi) = rate_interval(q, sys);
    if !(hi > lo) {
        return Ok((0.0, 0.0));
    }
    let (r, v) = golden_max(|r| ect_saturating(q, r, cfg, sys), lo, hi, 1e-10 * hi, false)?;
    // The objective can increase all the way to the decodability edge when
    // there is no self-interference.
    let v_hi = ect_saturating(q, hi, cfg, sys)?;
    Ok(if v_hi > v { (hi, v_hi) } else { (r, v) })
}

/// Maximizes the throughput of the conventional scheme: `Q* = Q_ε`, then
/// either the configured rate or the best rate at `Q*`.
pub fn optimize_conventional(cfg: &SchemeConfig, sys: &SystemParams, optimize_rate: bool) -> Result<EctResult> {
    sys.validate()?;
    let q = solve_q_epsilon(cfg, sys)?;
    let xi = xi_bar_conventional(q, cfg, sys)?;
    let slack = covertness_slack_from(xi, q, cfg, sys);
    let (rate, value, r_star) = if optimize_rate {
        let (r, v) = best_rate(q, cfg, sys)?;
        (r, v, Some(r))
    } else {
        (cfg.rate, ect_saturating(q, cfg.rate, cfg, sys)?, None)
    };
    let status = if rate > 0.0 && rate < max_decodable_rate(q, sys) { EctStatus::Ok } else { EctStatus::Undecodable };
    let bound = if rate > 0.0 { Some(asymptotic_bound_from_theta(rate, cfg.p_b_max / q, sys)?) } else { None };
    Ok(EctResult {
        q_star: q,
        r_used: rate,
        r_star,
        ect: value,
        xi_bar_at_q_star: xi,
        constraint_slack: slack,
        asymptotic_bound: bound,
        status,
    })
}

/// One evaluated point of the truncated scan.
#[derive(Debug, Clone, Copy)]
struct ScanPoint {
    q: f64,
    feasible: bool,
    value: f64,
}

/// Maximizes the throughput of the truncated scheme over `Q` (and the rate,
/// when asked) subject to the covertness constraint.
///
/// The throughput is not monotone in `Q` and the feasible set can be a union
/// of intervals, so a log-spaced scan locates the candidates and a
/// golden-section search refines the best point of every feasible run.
pub fn optimize_truncated(cfg: &SchemeConfig, sys: &SystemParams, optimize_rate: bool) -> Result<EctResult> {
    sys.validate()?;
    let p_a_max = cfg
        .scheme
        .p_a_max()
        .ok_or_else(|| CipcError::InvalidParameter("optimize_truncated needs a truncated config".into()))?;
    if !(0.0..=1.0).contains(&cfg.epsilon) {
        return Err(CipcError::InvalidParameter(format!("epsilon out of range: {}", cfg.epsilon)));
    }

    let objective = |q: f64| -> Result<f64> {
        if optimize_rate {
            Ok(best_rate(q, cfg, sys)?.1)
        } else {
            ect_saturating(q, cfg.rate, cfg, sys)
        }
    };
    let feasible = |q: f64| -> Result<bool> { Ok(truncated_slack(q, cfg, sys)? >= 0.0) };

    let natural = cfg.p_b_max * sys.lambda_ab * sys.lambda_bw / sys.lambda_aw;
    let q_lo = 1e-6 * natural.min(sys.lambda_ab * p_a_max);
    let q_hi = 50.0 * sys.lambda_ab * p_a_max;
    let decades = (q_hi / q_lo).log10();
    let n = SCAN_POINTS.max((SCAN_POINTS_PER_DECADE * decades).ceil() as usize);
    let grid: Vec<f64> = (0..n).map(|i| q_lo * (q_hi / q_lo).powf(i as f64 / (n - 1) as f64)).collect();

    let scan: Vec<ScanPoint> = grid
        .par_iter()
        .map(|&q| -> Result<ScanPoint> {
            let ok = feasible(q)?;
            let value = if ok { objective(q)? } else { 0.0 };
            Ok(ScanPoint { q, feasible: ok, value })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best: Option<ScanPoint> = None;
    let mut i = 0;
    while i < scan.len() {
        if !scan[i].feasible {
            i += 1;
            continue;
        }
        let start = i;
        while i < scan.len() && scan[i].feasible {
            i += 1;
        }
        let run = &scan[start..i];
        let k =
            start + run.iter().enumerate().max_by(|a, b| a.1.value.total_cmp(&b.1.value)).map(|(j, _)| j).unwrap_or(0);
        let candidate = refine_in_run(&scan, k, start, i - 1, &objective, &feasible)?;
        if best.is_none_or(|b| candidate.value > b.value) {
            best = Some(candidate);
        }
    }
    let best = best.ok_or(CipcError::EmptyFeasibleSet)?;

    let q = best.q;
    let xi = xi_bar_truncated(q, cfg, sys)?;
    let slack = covertness_slack_from(xi, q, cfg, sys);
    let (rate, value, r_star) = if optimize_rate {
        let (r, v) = best_rate(q, cfg, sys)?;
        (r, v, Some(r))
    } else {
        (cfg.rate, ect_saturating(q, cfg.rate, cfg, sys)?, None)
    };
    let status = if rate > 0.0 && rate < max_decodable_rate(q, sys) { EctStatus::Ok } else { EctStatus::Undecodable };
    Ok(EctResult {
        q_star: q,
        r_used: rate,
        r_star,
        ect: value,
        xi_bar_at_q_star: xi,
        constraint_slack: slack,
        asymptotic_bound: None,
        status,
    })
}

/// Dispatches on the configured scheme.
pub fn optimize(cfg: &SchemeConfig, sys: &SystemParams, optimize_rate: bool) -> Result<EctResult> {
    match cfg.scheme {
        Scheme::Truncated { .. } => optimize_truncated(cfg, sys, optimize_rate),
        Scheme::Conventional => optimize_conventional(cfg, sys, optimize_rate),
    }
}

/// Constraint slack for the truncated scheme. When `π1 <= ε` the constraint
/// holds for any `ξ̄ >= 0`, so the quadrature is skipped.
fn truncated_slack(q: f64, cfg: &SchemeConfig, sys: &SystemParams) -> Result<f64> {
    let p = priors(&cfg.with_q(q), sys).min();
    if p <= cfg.epsilon {
        return Ok(cfg.epsilon - p);
    }
    Ok(covertness_slack_from(xi_bar_truncated(q, cfg, sys)?, q, cfg, sys))
}

/// Refines the best scan point `k` of the feasible run `[first, last]`.
/// Neighbours outside the run bound the search at the feasibility edge.
fn refine_in_run(
    scan: &[ScanPoint],
    k: usize,
    first: usize,
    last: usize,
    objective: &(impl Fn(f64) -> Result<f64> + Sync),
    feasible: &(impl Fn(f64) -> Result<bool> + Sync),
) -> Result<ScanPoint> {
    let here = scan[k];
    let left = if k > first {
        scan[k - 1].q
    } else if k > 0 {
        feasibility_edge(scan[k - 1].q, here.q, feasible)?
    } else {
        here.q
    };
    let right = if k < last {
        scan[k + 1].q
    } else if k + 1 < scan.len() {
        feasibility_edge(scan[k + 1].q, here.q, feasible)?
    } else {
        here.q
    };
    if !(right > left) {
        return Ok(here);
    }
    let (log_q, value) = golden_max(
        |lq| {
            let q = lq.exp();
            if feasible(q)? {
                objective(q)
            } else {
                Ok(f64::NEG_INFINITY)
            }
        },
        left.ln(),
        right.ln(),
        GOLDEN_REL_TOL,
        true,
    )?;
    // Golden search may stop on a neighbour that is just outside the
    // feasible set; the edges themselves are feasible by construction.
    let mut out = here;
    for q in [log_q.exp(), left, right] {
        if feasible(q)? {
            let v = if q == log_q.exp() { value } else { objective(q)? };
            if v > out.value {
                out = ScanPoint { q, feasible: true, value: v };
            }
        }
    }
    Ok(out)
}

/// Bisects (in log space) between an infeasible `bad` and a feasible `good`
/// point and returns the feasible side of the edge.
fn feasibility_edge(mut bad: f64, mut good: f64, feasible: &impl Fn(f64) -> Result<bool>) -> Result<f64> {
    for _ in 0..60 {
        if (good / bad).ln().abs() <= 1e-12 {
            break;
        }
        let mid = (bad * good).sqrt();
        if feasible(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Golden-section maximization of `f` on `[a, b]`. With `log_space` set the
/// tolerance is absolute in the (already logarithmic) argument.
fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64, log_space: bool) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        let width = b - a;
        let scale = if log_space { 1.0 } else { a.abs().max(b.abs()) };
        if width <= tol * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(CipcError::InvalidParameter(format!("q must be positive and finite, got {q}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn conventional(epsilon: f64) -> SchemeConfig {
        SchemeConfig { scheme: Scheme::Conventional, q: 1.0, p_b_max: 1.0, rate: 0.5, epsilon }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let cfg = conventional(0.1);
        let sys = SystemParams::default();
        for i in 0..10 {
            let q = 0.01 * 1000f64.powf(i as f64 / 9.0);
            let quad = xi_bar_conventional(q, &cfg, &sys).unwrap();
            let closed = xi_bar_conventional_closed_form(q, &cfg, &sys).unwrap().unwrap();
            assert_relative_eq!(quad, closed, max_relative = 1e-7);
        }
    }

    #[test]
    fn closed_form_declines_outside_safe_range() {
        let cfg = conventional(0.1);
        let sys = SystemParams::default();
        assert!(xi_bar_conventional_closed_form(100.0, &cfg, &sys).unwrap().is_none());
    }

    /// At `φ = 1`, `ξ̄ = 1 - ∫ e^{-y} ln(1+y)/y dy`; reference value from a
    /// 30-digit quadrature.
    #[test]
    fn unit_ratio_value() {
        let cfg = conventional(0.1);
        let sys = SystemParams::default();
        let v = xi_bar_conventional(1.0, &cfg, &sys).unwrap();
        assert_relative_eq!(v, 0.254_804_043_613_903_3, epsilon = 1e-10);
    }

    #[test]
    fn xi_bar_limits() {
        let cfg = conventional(0.1);
        let sys = SystemParams::default();
        assert!(xi_bar_conventional(1e9, &cfg, &sys).unwrap() < 1e-8);
        // 1 - ξ̄ ≈ a·ln²(1/a)/2 for a = 1/φ → 0
        let v = xi_bar_conventional(1e-9, &cfg, &sys).unwrap();
        assert_relative_eq!(v, 0.999_999_794_600_930_2, epsilon = 1e-10);
    }

    #[test]
    fn proof_machinery_signs() {
        // g(x) = e^x/x is decreasing on x < 0.
        let g = |x: f64| x.exp() / x;
        for (k1, k2) in [(2.0, 1.0), (0.5, 0.1), (30.0, 29.0)] {
            assert!(g(-k1) > g(-k2));
        }
        // u(θ) = (1+z)ln(1+z) - z >= 0, z ∝ θ, with u(0+) = 0.
        let u = |z: f64| (1.0 + z) * z.ln_1p() - z;
        assert!(u(1e-12).abs() < 1e-20);
        for i in 0..50 {
            let z = 1e-6 * 1.5f64.powi(i);
            assert!(u(z) >= 0.0);
        }
    }

    #[test]
    fn solver_hits_target() {
        let cfg = conventional(0.1);
        let sys = SystemParams::default();
        let q = solve_q_epsilon(&cfg, &sys).unwrap();
        let v = xi_bar_conventional(q, &cfg, &sys).unwrap();
        assert!((v - 0.8).abs() < 1e-8, "{v}");
    }

    #[test]
    fn solver_rejects_bad_epsilon() {
        let sys = SystemParams::default();
        assert!(solve_q_epsilon(&conventional(0.0), &sys).is_err());
        assert!(solve_q_epsilon(&conventional(0.5), &sys).is_err());
    }

    #[test]
    fn ect_examples() {
        let sys = SystemParams::default();
        let cfg = conventional(0.1);
        assert_eq!(ect(1.0, 0.5, &cfg, &sys).unwrap(), 0.5);
        let tr = cfg.with_scheme(Scheme::Truncated { p_a_max: 1.0 });
        assert_relative_eq!(ect(1.0, 0.5, &tr, &sys).unwrap(), 0.5 * (-1.0f64).exp(), max_relative = 1e-15);
        let sys1 = sys.with_phi(1.0);
        let v = ect(2.0, 1.0, &cfg, &sys1).unwrap();
        assert_relative_eq!(v, 1.0 - 0.148_495_506_775_922, epsilon = 1e-12);
        assert!(ect(1.0, 1.0, &cfg, &sys).is_err());
    }

    #[test]
    fn asymptotic_bound_without_self_interference() {
        let cfg = conventional(0.1).with_rate(1.0);
        assert_eq!(asymptotic_ect_bound(&cfg, &SystemParams::default()).unwrap(), 1.0);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| Ok(-(x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-10, false).unwrap();
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v <= 0.0);
    }
}
