//! Closed forms against the Monte Carlo oracle at one configuration.

use std::fmt;

use crate::config::Config;
use crate::covert_opt::xi_bar;
use crate::detection::{false_alarm, miss_detection, xi_star, DetectorContext};
use crate::error::Result;
use crate::mc::{simulate_detection, simulate_outage, simulate_xi_bar, Hypothesis, McConfig, McEstimate, XiBarMode};
use crate::outage::outage_probability;
use crate::sweep::format_number;

/// A check passes when the analytic value is within this many standard
/// errors of the simulation.
pub const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub draws: u64,
    pub seed: u64,
    pub g_bw: f64,
    /// Multiplies `λ_bb` on the analytic side only, to demonstrate that the
    /// outage check is sensitive to it.
    pub corrupt_lambda_bb: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { draws: 1_000_000, seed: 42, g_bw: 1.0, corrupt_lambda_bb: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub analytic: f64,
    pub estimate: McEstimate,
}

impl Check {
    pub fn z(&self) -> f64 {
        self.estimate.z_score(self.analytic)
    }

    pub fn passed(&self) -> bool {
        self.z().abs() <= Z_LIMIT
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<22} analytic={:<16} mc={:<16} stderr={:<16} z={:<10} {}",
                c.name,
                format_number(c.analytic),
                format_number(c.estimate.mean),
                format_number(c.estimate.std_error),
                format!("{:+.3}", c.z()),
                if c.passed() { "PASS" } else { "FAIL" }
            )?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        if failed == 0 {
            writeln!(f, "verify: all {} checks passed", self.checks.len())
        } else {
            writeln!(f, "verify: {failed} of {} checks failed", self.checks.len())
        }
    }
}

/// Runs every check. Each simulation uses its own stream of the seed.
pub fn run(config: &Config, opts: &VerifyOptions) -> Result<VerifyReport> {
    let cfg = &config.scheme;
    let sys = &config.system;
    let mut analytic_sys = *sys;
    if let Some(k) = opts.corrupt_lambda_bb {
        analytic_sys.lambda_bb *= k;
    }
    let mc = McConfig::new(opts.seed, opts.draws);
    let ctx = DetectorContext::new(opts.g_bw, cfg, sys)?;
    let tau_mid = 0.5 * (sys.sigma2_w + ctx.nu);
    let nu = ctx.nu;

    let mut checks = Vec::new();
    let alpha_mc = simulate_detection(tau_mid, Hypothesis::H0, opts.g_bw, cfg, sys, &mc.with_stream(1))?;
    checks.push(Check {
        name: format!("alpha(tau={})", format_number(tau_mid)),
        analytic: false_alarm(tau_mid, &ctx, cfg, sys),
        estimate: alpha_mc,
    });
    let beta_mc = simulate_detection(tau_mid, Hypothesis::H1, opts.g_bw, cfg, sys, &mc.with_stream(2))?;
    checks.push(Check {
        name: format!("beta(tau={})", format_number(tau_mid)),
        analytic: miss_detection(tau_mid, &ctx, cfg, sys)?,
        estimate: beta_mc,
    });

    // ξ* = α(ν) + β(ν); the H0 part is identically zero at ν.
    let a_nu = simulate_detection(nu, Hypothesis::H0, opts.g_bw, cfg, sys, &mc.with_stream(3))?;
    let b_nu = simulate_detection(nu, Hypothesis::H1, opts.g_bw, cfg, sys, &mc.with_stream(4))?;
    checks.push(Check {
        name: "xi_star".into(),
        analytic: xi_star(opts.g_bw, cfg, sys)?,
        estimate: McEstimate {
            mean: a_nu.mean + b_nu.mean,
            std_error: (a_nu.std_error.powi(2) + b_nu.std_error.powi(2)).sqrt(),
            n: b_nu.n,
        },
    });

    checks.push(Check {
        name: "outage".into(),
        analytic: outage_probability(cfg, &analytic_sys)?,
        estimate: simulate_outage(cfg, sys, &mc.with_stream(5))?,
    });

    checks.push(Check {
        name: "xi_bar".into(),
        analytic: xi_bar(cfg.q, cfg, sys)?,
        estimate: simulate_xi_bar(cfg.q, cfg, sys, &mc.with_stream(6), XiBarMode::Hybrid)?,
    });

    Ok(VerifyReport { checks })
}
