//! Environment, design point, and per-slot channel realizations.
//!
//! Everything is stored in linear units. Decibels only appear at the
//! configuration boundary through [`db_to_linear`].

use crate::error::{CipcError, Result};

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Static environment: mean channel power gains, noise powers, and the
/// self-interference coefficient of the full-duplex receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub lambda_ab: f64,
    pub lambda_aw: f64,
    pub lambda_bw: f64,
    pub lambda_bb: f64,
    /// Receiver-to-transmitter link; equal to `lambda_ab` by reciprocity.
    pub lambda_ba: f64,
    pub sigma2_b: f64,
    pub sigma2_w: f64,
    pub phi: f64,
}

impl Default for SystemParams {
    /// Unit mean gains, unit noise powers, full self-interference cancellation.
    fn default() -> Self {
        Self {
            lambda_ab: 1.0,
            lambda_aw: 1.0,
            lambda_bw: 1.0,
            lambda_bb: 1.0,
            lambda_ba: 1.0,
            sigma2_b: 1.0,
            sigma2_w: 1.0,
            phi: 0.0,
        }
    }
}

impl SystemParams {
    /// Sets `lambda_ab` and keeps `lambda_ba` equal to it.
    pub fn with_lambda_ab(mut self, lambda_ab: f64) -> Self {
        self.lambda_ab = lambda_ab;
        self.lambda_ba = lambda_ab;
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn with_noise(mut self, sigma2_b: f64, sigma2_w: f64) -> Self {
        self.sigma2_b = sigma2_b;
        self.sigma2_w = sigma2_w;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let gains = [
            ("lambda_ab", self.lambda_ab),
            ("lambda_aw", self.lambda_aw),
            ("lambda_bw", self.lambda_bw),
            ("lambda_bb", self.lambda_bb),
            ("lambda_ba", self.lambda_ba),
            ("sigma2_b", self.sigma2_b),
            ("sigma2_w", self.sigma2_w),
        ];
        for (name, v) in gains {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.phi) {
            return Err(invalid(format!("phi must lie in [0, 1], got {}", self.phi)));
        }
        if self.lambda_ba != self.lambda_ab {
            return Err(invalid(format!(
                "channel reciprocity requires lambda_ba == lambda_ab ({} != {})",
                self.lambda_ba, self.lambda_ab
            )));
        }
        Ok(())
    }
}

/// Power-control scheme at the transmitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Transmit only when `|h_ab|^2 >= Q / p_a_max`.
    Truncated { p_a_max: f64 },
    /// Always invert the channel; no power limit.
    Conventional,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Truncated { .. } => "truncated",
            Scheme::Conventional => "conventional",
        }
    }

    pub fn p_a_max(&self) -> Option<f64> {
        match *self {
            Scheme::Truncated { p_a_max } => Some(p_a_max),
            Scheme::Conventional => None,
        }
    }
}

/// One design point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    /// Received signal power target `Q` (W).
    pub q: f64,
    /// Upper end of the uniform artificial-noise power distribution (W).
    pub p_b_max: f64,
    /// Target rate (bits per channel use).
    pub rate: f64,
    /// Covertness parameter.
    pub epsilon: f64,
}

impl SchemeConfig {
    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn with_rate(mut self, rate: f64) -> Self {
        self.rate = rate;
        self
    }

    pub fn with_p_b_max(mut self, p_b_max: f64) -> Self {
        self.p_b_max = p_b_max;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    /// Range checks on every field, without the decodability guard.
    pub fn check_ranges(&self) -> Result<()> {
        let positive = [("q", self.q), ("p_b_max", self.p_b_max), ("rate", self.rate)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(invalid(format!("epsilon must lie in [0, 1], got {}", self.epsilon)));
        }
        if let Scheme::Truncated { p_a_max } = self.scheme {
            if !(p_a_max > 0.0) {
                return Err(invalid(format!("p_a_max must be positive, got {p_a_max}")));
            }
        }
        Ok(())
    }

    /// `R < log2(1 + Q / σ_b²)`; otherwise every slot is in outage.
    pub fn check_decodable(&self, sys: &SystemParams) -> Result<()> {
        let capacity = max_decodable_rate(self.q, sys);
        if self.rate < capacity {
            Ok(())
        } else {
            Err(invalid(format!(
                "rate {} is not decodable: must be below log2(1 + q/sigma2_b) = {capacity}",
                self.rate
            )))
        }
    }

    pub fn validate(&self, sys: &SystemParams) -> Result<()> {
        sys.validate()?;
        self.check_ranges()?;
        self.check_decodable(sys)
    }
}

/// `log2(1 + Q / σ_b²)`, the interference-free capacity at Bob.
pub fn max_decodable_rate(q: f64, sys: &SystemParams) -> f64 {
    (q / sys.sigma2_b).ln_1p() / std::f64::consts::LN_2
}

/// Instantaneous power gains `|h_j|^2` and the artificial-noise power of one slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    pub g_ab: f64,
    pub g_aw: f64,
    pub g_bw: f64,
    pub g_bb: f64,
    pub p_b: f64,
}

impl ChannelDraw {
    /// Transmit power implied by channel inversion, `Q / g_ab`.
    pub fn alice_power(&self, q: f64) -> f64 {
        q / self.g_ab
    }
}

/// Prior probabilities of the two hypotheses at the warden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Priors {
    /// No covert transmission.
    pub pi0: f64,
    /// Covert transmission.
    pub pi1: f64,
}

impl Priors {
    pub fn min(&self) -> f64 {
        self.pi0.min(self.pi1)
    }
}

/// Probability that the truncation condition `|h_ab|^2 >= Q / p_a_max` holds.
/// Always 1 for the conventional scheme.
pub fn condition_c_probability(cfg: &SchemeConfig, sys: &SystemParams) -> f64 {
    match cfg.scheme {
        Scheme::Truncated { p_a_max } => (-cfg.q / (sys.lambda_ab * p_a_max)).exp(),
        Scheme::Conventional => 1.0,
    }
}

/// Transmission happens with probability 1/2 whenever it is allowed.
pub fn priors(cfg: &SchemeConfig, sys: &SystemParams) -> Priors {
    match cfg.scheme {
        Scheme::Conventional => Priors { pi0: 0.5, pi1: 0.5 },
        Scheme::Truncated { .. } => {
            let pi1 = 0.5 * condition_c_probability(cfg, sys);
            Priors { pi0: 1.0 - pi1, pi1 }
        }
    }
}

fn invalid(msg: String) -> CipcError {
    CipcError::InvalidParameter(msg)
}
