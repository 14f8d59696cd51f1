//! Monte Carlo oracle for the per-slot experiment.
//!
//! Draws are split into fixed-size chunks. Each chunk owns a ChaCha8 stream
//! whose key is a hash of `(seed, stream_id, chunk index)`, chunks run in
//! parallel, and their partial sums are combined in chunk order. Estimates
//! are therefore bit-identical for any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::detection::{xi_star, DetectorContext};
use crate::error::{CipcError, Result};
use crate::model::{max_decodable_rate, Scheme, SchemeConfig, SystemParams};

/// Draws per chunk.
pub const CHUNK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub seed: u64,
    pub n_draws: u64,
    pub stream_id: u64,
}

impl McConfig {
    pub fn new(seed: u64, n_draws: u64) -> Self {
        Self { seed, n_draws, stream_id: 0 }
    }

    pub fn with_stream(mut self, stream_id: u64) -> Self {
        self.stream_id = stream_id;
        self
    }

    pub fn with_draws(mut self, n_draws: u64) -> Self {
        self.n_draws = n_draws;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_draws == 0 {
            return Err(CipcError::InvalidParameter("n_draws must be at least 1".into()));
        }
        Ok(())
    }

    fn chunk_rng(&self, chunk: u64) -> ChaCha8Rng {
        let mut state = self.seed;
        let mut key = [0u8; 32];
        let mix = [self.stream_id, chunk, 0x6a09_e667_f3bc_c908, 0xbb67_ae85_84ca_a73b];
        for (i, word) in mix.iter().enumerate() {
            state = splitmix64(state ^ word);
            key[8 * i..8 * i + 8].copy_from_slice(&state.to_le_bytes());
        }
        ChaCha8Rng::from_seed(key)
    }
}

/// Point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
}

impl McEstimate {
    fn bernoulli(hits: u64, n: u64) -> Self {
        let mean = hits as f64 / n as f64;
        Self { mean, std_error: (mean * (1.0 - mean) / n as f64).sqrt(), n }
    }

    fn from_moments(sum: f64, sum_sq: f64, n: u64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = if n > 1 { ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
        Self { mean, std_error: (var / nf).sqrt(), n }
    }

    /// `(self - value) / std_error`, with the standard error floored at `1/n`
    /// so that exact agreement with a zero-variance estimate is not a failure.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value) / self.std_error.max(1.0 / self.n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// No transmission.
    H0,
    /// Covert transmission.
    H1,
}

/// How [`simulate_xi_bar`] evaluates the minimum error for each warden
/// channel draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiBarMode {
    /// Closed-form minimum error per draw.
    Hybrid,
    /// Empirical error at the optimal threshold from `inner` nested draws.
    Nested { inner: u64 },
}

/// `Exp` with the given mean.
pub fn sample_exponential<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
    let e: f64 = Exp1.sample(rng);
    mean * e
}

/// `g_ab` given the truncation condition `g_ab >= Q/P_a^max`. By
/// memorylessness this is the threshold plus a fresh exponential.
pub fn sample_conditioned_gain<R: Rng + ?Sized>(rng: &mut R, mean: f64, threshold: f64) -> f64 {
    threshold + sample_exponential(rng, mean)
}

/// Gain from Alice to Bob when she transmits.
fn sample_g_ab<R: Rng + ?Sized>(rng: &mut R, cfg: &SchemeConfig, sys: &SystemParams) -> f64 {
    match cfg.scheme {
        Scheme::Truncated { p_a_max } => sample_conditioned_gain(rng, sys.lambda_ab, cfg.q / p_a_max),
        Scheme::Conventional => sample_exponential(rng, sys.lambda_ab),
    }
}

/// Received power at Willie for one slot.
fn sample_statistic<R: Rng + ?Sized>(
    rng: &mut R,
    hypothesis: Hypothesis,
    g_bw: f64,
    cfg: &SchemeConfig,
    sys: &SystemParams,
) -> f64 {
    let p_b = cfg.p_b_max * rng.random::<f64>();
    let base = p_b * g_bw + sys.sigma2_w;
    match hypothesis {
        Hypothesis::H0 => base,
        Hypothesis::H1 => {
            let g_aw = sample_exponential(rng, sys.lambda_aw);
            let g_ab = sample_g_ab(rng, cfg, sys);
            cfg.q * g_aw / g_ab + base
        }
    }
}

/// Number of draws in chunk `c`.
fn chunk_len(mc: &McConfig, c: u64) -> u64 {
    CHUNK_SIZE.min(mc.n_draws - c * CHUNK_SIZE)
}

fn n_chunks(mc: &McConfig) -> u64 {
    mc.n_draws.div_ceil(CHUNK_SIZE)
}

/// Counts draws for which `event` holds.
fn count_hits<F>(mc: &McConfig, event: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    mc.validate()?;
    let counts: Vec<u64> = (0..n_chunks(mc))
        .into_par_iter()
        .map(|c| {
            let mut rng = mc.chunk_rng(c);
            (0..chunk_len(mc, c)).filter(|_| event(&mut rng)).count() as u64
        })
        .collect();
    Ok(McEstimate::bernoulli(counts.iter().sum(), mc.n_draws))
}

/// Averages a per-draw value.
fn average<F>(mc: &McConfig, value: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    mc.validate()?;
    let parts: Vec<(f64, f64)> = (0..n_chunks(mc))
        .into_par_iter()
        .map(|c| {
            let mut rng = mc.chunk_rng(c);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..chunk_len(mc, c) {
                let v = value(&mut rng)?;
                sum += v;
                sum_sq += v * v;
            }
            Ok((sum, sum_sq))
        })
        .collect::<Result<_>>()?;
    let (sum, sum_sq) = parts.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    Ok(McEstimate::from_moments(sum, sum_sq, mc.n_draws))
}

/// Under H0 estimates the false-alarm rate `P[T > τ]`; under H1 the miss
/// detection rate `P[T <= τ]`.
pub fn simulate_detection(
    tau: f64,
    hypothesis: Hypothesis,
    g_bw: f64,
    cfg: &SchemeConfig,
    sys: &SystemParams,
    mc: &McConfig,
) -> Result<McEstimate> {
    if !(g_bw > 0.0) {
        return Err(CipcError::InvalidParameter(format!("g_bw must be positive, got {g_bw}")));
    }
    count_hits(mc, |rng| {
        let t = sample_statistic(rng, hypothesis, g_bw, cfg, sys);
        match hypothesis {
            Hypothesis::H0 => t > tau,
            Hypothesis::H1 => t <= tau,
        }
    })
}

/// Estimates `P[log2(1 + γ_b) <= R]`.
pub fn simulate_outage(cfg: &SchemeConfig, sys: &SystemParams, mc: &McConfig) -> Result<McEstimate> {
    if !(cfg.rate < max_decodable_rate(cfg.q, sys)) {
        return Err(CipcError::Domain(format!("rate {} is not decodable", cfg.rate)));
    }
    let threshold = cfg.rate.exp2() - 1.0;
    count_hits(mc, |rng| {
        let p_b = cfg.p_b_max * rng.random::<f64>();
        let g_bb = sample_exponential(rng, sys.lambda_bb);
        let sinr = cfg.q / (sys.phi * p_b * g_bb + sys.sigma2_b);
        // Equality counts as outage.
        sinr <= threshold
    })
}

/// Estimates the probability that the truncation condition holds, from
/// unconditioned draws of `g_ab`.
pub fn simulate_condition_c(cfg: &SchemeConfig, sys: &SystemParams, mc: &McConfig) -> Result<McEstimate> {
    let threshold = match cfg.scheme {
        Scheme::Truncated { p_a_max } => cfg.q / p_a_max,
        Scheme::Conventional => 0.0,
    };
    count_hits(mc, |rng| sample_exponential(rng, sys.lambda_ab) >= threshold)
}

/// Estimates the expected minimum detection error over the warden's channel.
pub fn simulate_xi_bar(
    q: f64,
    cfg: &SchemeConfig,
    sys: &SystemParams,
    mc: &McConfig,
    mode: XiBarMode,
) -> Result<McEstimate> {
    let cfg = cfg.with_q(q);
    match mode {
        XiBarMode::Hybrid => average(mc, |rng| {
            let g_bw = sample_exponential(rng, sys.lambda_bw);
            if g_bw == 0.0 {
                return Ok(0.0);
            }
            xi_star(g_bw, &cfg, sys)
        }),
        XiBarMode::Nested { inner } => {
            if inner == 0 {
                return Err(CipcError::InvalidParameter("inner draws must be at least 1".into()));
            }
            average(mc, |rng| {
                let g_bw = sample_exponential(rng, sys.lambda_bw);
                if g_bw == 0.0 {
                    return Ok(0.0);
                }
                let nu = DetectorContext::new(g_bw, &cfg, sys)?.nu;
                let mut false_alarms = 0u64;
                let mut misses = 0u64;
                for _ in 0..inner {
                    if sample_statistic(rng, Hypothesis::H0, g_bw, &cfg, sys) > nu {
                        false_alarms += 1;
                    }
                    if sample_statistic(rng, Hypothesis::H1, g_bw, &cfg, sys) <= nu {
                        misses += 1;
                    }
                }
                Ok((false_alarms + misses) as f64 / inner as f64)
            })
        }
    }
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
