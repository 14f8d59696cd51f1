//! Parameter sweeps and their CSV rendering.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::config::{Config, SweepSpec, SweepVariable};
use crate::covert_opt::{optimize, EctResult};
use crate::detection::{false_alarm, miss_detection, DetectorContext};
use crate::error::{CipcError, Result};
use crate::mc::{simulate_detection, Hypothesis, McConfig, McEstimate};

pub const DETECTION_HEADER: &str = "tau,alpha,beta,xi,alpha_mc,beta_mc,xi_mc,mc_stderr";
pub const ECT_HEADER: &str = "x_db,q_star,r_star,ect,xi_bar,bound,flag";

/// Formats like C's `%.12g`: twelve significant digits, trailing zeros
/// removed, exponent notation outside `[1e-4, 1e12)`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    const DIGITS: i32 = 12;
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One threshold of a detection curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionRow {
    pub tau: f64,
    pub alpha: f64,
    pub beta: f64,
    pub mc: Option<(McEstimate, McEstimate)>,
}

/// Analytic (and optionally simulated) error rates over a threshold sweep.
/// Each threshold uses its own pair of random streams.
pub fn detection_rows(config: &Config, g_bw: f64, taus: &[f64], mc: Option<&McConfig>) -> Result<Vec<DetectionRow>> {
    let cfg = &config.scheme;
    let sys = &config.system;
    let ctx = DetectorContext::new(g_bw, cfg, sys)?;
    taus.par_iter()
        .enumerate()
        .map(|(i, &tau)| {
            let alpha = false_alarm(tau, &ctx, cfg, sys);
            let beta = miss_detection(tau, &ctx, cfg, sys)?;
            let mc = match mc {
                Some(m) => {
                    let stream = 2 * i as u64;
                    let a = simulate_detection(tau, Hypothesis::H0, g_bw, cfg, sys, &m.with_stream(stream))?;
                    let b = simulate_detection(tau, Hypothesis::H1, g_bw, cfg, sys, &m.with_stream(stream + 1))?;
                    Some((a, b))
                }
                None => None,
            };
            Ok(DetectionRow { tau, alpha, beta, mc })
        })
        .collect()
}

pub fn write_detection_csv(out: &mut dyn Write, rows: &[DetectionRow]) -> io::Result<()> {
    writeln!(out, "{DETECTION_HEADER}")?;
    for r in rows {
        let f = format_number;
        let mc = match r.mc {
            Some((a, b)) => {
                let se = (a.std_error * a.std_error + b.std_error * b.std_error).sqrt();
                format!("{},{},{},{}", f(a.mean), f(b.mean), f(a.mean + b.mean), f(se))
            }
            None => ",,,".into(),
        };
        writeln!(out, "{},{},{},{},{}", f(r.tau), f(r.alpha), f(r.beta), f(r.alpha + r.beta), mc)?;
    }
    Ok(())
}

/// One point of a throughput sweep. `result` is `None` when no covert
/// operating point exists.
#[derive(Debug, Clone, PartialEq)]
pub struct EctRow {
    pub series: Option<String>,
    pub x: f64,
    pub result: Option<EctResult>,
}

impl EctRow {
    pub fn ect(&self) -> f64 {
        self.result.map_or(0.0, |r| r.ect)
    }

    pub fn flag(&self) -> &'static str {
        match &self.result {
            Some(r) => r.status.as_str(),
            None => "infeasible",
        }
    }
}

/// Optimizes every point of a sweep over a configuration value.
pub fn ect_rows(config: &Config, sweep: &SweepSpec, optimize_rate: bool, series: Option<&str>) -> Result<Vec<EctRow>> {
    match sweep.variable {
        // The threshold belongs to the warden and `q` is what the optimizer
        // chooses, so neither is a free input here.
        SweepVariable::Tau | SweepVariable::Q => {
            return Err(CipcError::InvalidParameter(format!(
                "a throughput sweep cannot range over {}",
                sweep.variable.name()
            )))
        }
        SweepVariable::PBMaxDb | SweepVariable::PAMaxDb | SweepVariable::Epsilon => {}
    }
    sweep
        .values()
        .par_iter()
        .map(|&x| {
            let point = sweep.variable.apply(config, x)?;
            point.system.validate()?;
            point.scheme.check_ranges()?;
            let result = match optimize(&point.scheme, &point.system, optimize_rate) {
                Ok(r) => Some(r),
                Err(CipcError::EmptyFeasibleSet) => None,
                Err(e) => return Err(e),
            };
            Ok(EctRow { series: series.map(str::to_owned), x, result })
        })
        .collect()
}

pub fn write_ect_csv(out: &mut dyn Write, rows: &[EctRow], with_series: bool) -> io::Result<()> {
    if with_series {
        write!(out, "series,")?;
    }
    writeln!(out, "{ECT_HEADER}")?;
    let f = format_number;
    for row in rows {
        if with_series {
            write!(out, "{},", row.series.as_deref().unwrap_or(""))?;
        }
        match &row.result {
            Some(r) => writeln!(
                out,
                "{},{},{},{},{},{},{}",
                f(row.x),
                f(r.q_star),
                f(r.r_star.unwrap_or(r.r_used)),
                f(r.ect),
                f(r.xi_bar_at_q_star),
                r.asymptotic_bound.map(f).unwrap_or_default(),
                row.flag()
            )?,
            None => writeln!(out, "{},,,0,,,{}", f(row.x), row.flag())?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percent_g_formatting() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-2.5), "-2.5");
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(123456.789), "123456.789");
        assert_eq!(format_number(1e-5), "1e-05");
        assert_eq!(format_number(0.0001), "0.0001");
        assert_eq!(format_number(1e12), "1e+12");
        assert_eq!(format_number(999999999999.0), "999999999999");
        assert_eq!(format_number(2.0f64.sqrt() * 1e-7), "1.41421356237e-07");
        assert_eq!(format_number(f64::NAN), "nan");
    }
}
