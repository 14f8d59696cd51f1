//! Built-in presets that regenerate the reference figure datasets.
//!
//! Captions fix most parameters. The rest are preset choices: a rate of 1
//! where the rate is not optimized, and the sweep ranges and resolutions
//! listed on each preset.

use std::str::FromStr;

use crate::config::{Config, Spacing, SweepSpec, SweepVariable};
use crate::error::{CipcError, Result};
use crate::model::{db_to_linear, Scheme, SchemeConfig, SystemParams};
use crate::sweep::{detection_rows, ect_rows, write_detection_csv, write_ect_csv, EctRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Conventional scheme: α, β, ξ against the threshold.
    Fig3,
    /// Truncated scheme: α, β, ξ against the threshold.
    Fig4,
    /// Conventional throughput against jamming power for three φ.
    Fig5,
    /// Both schemes against jamming power, optimized over Q and R.
    Fig6,
    /// Both schemes against Alice's power limit for three ε.
    Fig7,
}

impl FromStr for Figure {
    type Err = CipcError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fig3" => Figure::Fig3,
            "fig4" => Figure::Fig4,
            "fig5" => Figure::Fig5,
            "fig6" => Figure::Fig6,
            "fig7" => Figure::Fig7,
            other => return Err(CipcError::InvalidParameter(format!("unknown figure `{other}`"))),
        })
    }
}

/// Threshold grid for the detection figures: 0 to 4 W in 0.01 W steps.
pub const DETECTION_TAU_POINTS: usize = 401;
pub const DETECTION_TAU_MAX: f64 = 4.0;

pub const FIG5_PHIS: [f64; 3] = [0.1, 0.5, 1.0];
pub const FIG5_EPSILON: f64 = 0.1;
pub const FIG5_RATE: f64 = 1.0;
/// 0 to 60 dB in 2.5 dB steps.
pub const FIG5_SWEEP: (f64, f64, usize) = (0.0, 60.0, 25);

pub const FIG6_PHI: f64 = 0.1;
pub const FIG6_EPSILON: f64 = 0.01;
pub const FIG6_P_A_MAX_DB: f64 = 10.0;
/// -10 to 40 dB in 5 dB steps.
pub const FIG6_SWEEP: (f64, f64, usize) = (-10.0, 40.0, 11);

pub const FIG7_P_B_MAX_DB: f64 = 20.0;
pub const FIG7_SIGMA2_B_DB: f64 = -10.0;
pub const FIG7_PHI: f64 = 0.1;
pub const FIG7_EPSILONS: [f64; 3] = [0.01, 0.05, 0.1];
/// 0 to 40 dB in 5 dB steps.
pub const FIG7_SWEEP: (f64, f64, usize) = (0.0, 40.0, 9);

/// Unit-parameter design point used by the detection figures.
pub fn detection_config(scheme: Scheme) -> Config {
    Config {
        scheme: SchemeConfig { scheme, q: 1.0, p_b_max: 1.0, rate: 0.5, epsilon: 0.1 },
        system: SystemParams::default(),
    }
}

fn throughput_config(scheme: Scheme, p_b_max_db: f64, epsilon: f64, sigma2_b_db: f64, phi: f64) -> Config {
    Config {
        scheme: SchemeConfig { scheme, q: 1.0, p_b_max: db_to_linear(p_b_max_db), rate: FIG5_RATE, epsilon },
        system: SystemParams::default().with_phi(phi).with_noise(db_to_linear(sigma2_b_db), 1.0),
    }
}

fn sweep(variable: SweepVariable, range: (f64, f64, usize)) -> SweepSpec {
    SweepSpec { variable, start: range.0, stop: range.1, points: range.2, spacing: Spacing::Linear }
}

pub fn fig5_rows() -> Result<Vec<EctRow>> {
    let mut rows = Vec::new();
    for phi in FIG5_PHIS {
        let config = throughput_config(Scheme::Conventional, 0.0, FIG5_EPSILON, 0.0, phi);
        let label = format!("phi={phi}");
        rows.extend(ect_rows(&config, &sweep(SweepVariable::PBMaxDb, FIG5_SWEEP), false, Some(&label))?);
    }
    Ok(rows)
}

pub fn fig6_rows() -> Result<Vec<EctRow>> {
    let truncated = Scheme::Truncated { p_a_max: db_to_linear(FIG6_P_A_MAX_DB) };
    let spec = sweep(SweepVariable::PBMaxDb, FIG6_SWEEP);
    let mut rows = Vec::new();
    for (scheme, label) in [(truncated, "truncated"), (Scheme::Conventional, "conventional")] {
        let config = throughput_config(scheme, 0.0, FIG6_EPSILON, 0.0, FIG6_PHI);
        rows.extend(ect_rows(&config, &spec, true, Some(label))?);
    }
    Ok(rows)
}

pub fn fig7_rows() -> Result<Vec<EctRow>> {
    let spec = sweep(SweepVariable::PAMaxDb, FIG7_SWEEP);
    let mut rows = Vec::new();
    for eps in FIG7_EPSILONS {
        for (scheme, name) in
            [(Scheme::Truncated { p_a_max: 1.0 }, "truncated"), (Scheme::Conventional, "conventional")]
        {
            let config = throughput_config(scheme, FIG7_P_B_MAX_DB, eps, FIG7_SIGMA2_B_DB, FIG7_PHI);
            let label = format!("{name} eps={eps}");
            rows.extend(ect_rows(&config, &spec, true, Some(&label))?);
        }
    }
    Ok(rows)
}

/// The CSV dataset of one figure.
pub fn render(figure: Figure) -> Result<String> {
    let mut out: Vec<u8> = Vec::new();
    let io = |e: std::io::Error| -> CipcError { unreachable!("writing to memory failed: {e}") };
    match figure {
        Figure::Fig3 | Figure::Fig4 => {
            let scheme = if figure == Figure::Fig3 { Scheme::Conventional } else { Scheme::Truncated { p_a_max: 1.0 } };
            let taus = SweepSpec {
                variable: SweepVariable::Tau,
                start: 0.0,
                stop: DETECTION_TAU_MAX,
                points: DETECTION_TAU_POINTS,
                spacing: Spacing::Linear,
            }
            .values();
            let rows = detection_rows(&detection_config(scheme), 1.0, &taus, None)?;
            write_detection_csv(&mut out, &rows).map_err(io)?
        }
        Figure::Fig5 => write_ect_csv(&mut out, &fig5_rows()?, true).map_err(io)?,
        Figure::Fig6 => write_ect_csv(&mut out, &fig6_rows()?, true).map_err(io)?,
        Figure::Fig7 => write_ect_csv(&mut out, &fig7_rows()?, true).map_err(io)?,
    }
    Ok(String::from_utf8(out).expect("CSV output is ASCII"))
}
