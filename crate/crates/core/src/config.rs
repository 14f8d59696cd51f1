//! `key = value` configuration files and sweep specifications.
//!
//! Powers are given in dB, the received-power target `q` and the channel
//! means in linear units. Lines starting with `#` (or the part of a line
//! after `#`) are ignored.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{CipcError, Result};
use crate::model::{db_to_linear, Scheme, SchemeConfig, SystemParams};

/// Every accepted key, in canonical order.
pub const KEYS: [&str; 13] = [
    "scheme",
    "q",
    "p_a_max_db",
    "p_b_max_db",
    "rate",
    "epsilon",
    "sigma2_b_db",
    "sigma2_w_db",
    "phi",
    "lambda_ab",
    "lambda_aw",
    "lambda_bw",
    "lambda_bb",
];

/// A validated design point together with its environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub scheme: SchemeConfig,
    pub system: SystemParams,
}

impl Config {
    /// Full validation, including the decodability guard.
    pub fn validate(&self) -> Result<()> {
        self.scheme.validate(&self.system)
    }
}

impl FromStr for Config {
    type Err = CipcError;

    fn from_str(text: &str) -> Result<Self> {
        let mut values: HashMap<&str, &str> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| bad(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            if !KEYS.contains(&key) {
                return Err(bad(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if values.insert(key, value).is_some() {
                return Err(bad(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
        }

        let number = |key: &str| -> Result<Option<f64>> {
            values
                .get(key)
                .map(|v| v.parse::<f64>().map_err(|_| bad(format!("`{key}`: `{v}` is not a number"))))
                .transpose()
        };
        let required =
            |key: &str| -> Result<f64> { number(key)?.ok_or_else(|| bad(format!("missing required key `{key}`"))) };

        let scheme = match values.get("scheme").copied() {
            Some("truncated") => Scheme::Truncated { p_a_max: db_to_linear(required("p_a_max_db")?) },
            Some("conventional") => {
                if values.contains_key("p_a_max_db") {
                    return Err(bad("`p_a_max_db` only applies to the truncated scheme".into()));
                }
                Scheme::Conventional
            }
            Some(other) => return Err(bad(format!("`scheme` must be `truncated` or `conventional`, got `{other}`"))),
            None => return Err(bad("missing required key `scheme`".into())),
        };

        let lambda_ab = number("lambda_ab")?.unwrap_or(1.0);
        let system = SystemParams {
            lambda_ab,
            lambda_aw: number("lambda_aw")?.unwrap_or(1.0),
            lambda_bw: number("lambda_bw")?.unwrap_or(1.0),
            lambda_bb: number("lambda_bb")?.unwrap_or(1.0),
            lambda_ba: lambda_ab,
            sigma2_b: db_to_linear(number("sigma2_b_db")?.unwrap_or(0.0)),
            sigma2_w: db_to_linear(number("sigma2_w_db")?.unwrap_or(0.0)),
            phi: required("phi")?,
        };
        let config = Config {
            scheme: SchemeConfig {
                scheme,
                q: required("q")?,
                p_b_max: db_to_linear(required("p_b_max_db")?),
                rate: required("rate")?,
                epsilon: required("epsilon")?,
            },
            system,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Variables that a sweep can range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Tau,
    Q,
    PBMaxDb,
    PAMaxDb,
    Epsilon,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::Tau => "tau",
            SweepVariable::Q => "q",
            SweepVariable::PBMaxDb => "p_b_max_db",
            SweepVariable::PAMaxDb => "p_a_max_db",
            SweepVariable::Epsilon => "epsilon",
        }
    }

    /// Applies one sweep value to a configuration.
    pub fn apply(&self, config: &Config, value: f64) -> Result<Config> {
        let mut out = *config;
        match self {
            SweepVariable::Tau => return Err(bad("tau is a detector threshold, not a configuration value".into())),
            SweepVariable::Q => out.scheme.q = value,
            SweepVariable::PBMaxDb => out.scheme.p_b_max = db_to_linear(value),
            SweepVariable::PAMaxDb => match out.scheme.scheme {
                Scheme::Truncated { .. } => out.scheme.scheme = Scheme::Truncated { p_a_max: db_to_linear(value) },
                Scheme::Conventional => {
                    // The conventional scheme has no power limit; the sweep
                    // leaves it unchanged.
                }
            },
            SweepVariable::Epsilon => out.scheme.epsilon = value,
        }
        Ok(out)
    }
}

impl FromStr for SweepVariable {
    type Err = CipcError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "tau" => SweepVariable::Tau,
            "q" => SweepVariable::Q,
            "p_b_max_db" => SweepVariable::PBMaxDb,
            "p_a_max_db" => SweepVariable::PAMaxDb,
            "epsilon" => SweepVariable::Epsilon,
            other => return Err(bad(format!("unknown sweep variable `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `VAR:START:STOP:POINTS:SPACING`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, start: f64, stop: f64, points: usize, spacing: Spacing) -> Result<Self> {
        let spec = Self { variable, start, stop, points, spacing };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(bad(format!("a sweep needs at least 2 points, got {}", self.points)));
        }
        if !(self.start < self.stop) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(bad(format!("sweep start {} must be below stop {}", self.start, self.stop)));
        }
        if self.spacing == Spacing::Log && !(self.start > 0.0) {
            return Err(bad("log spacing needs a positive start".into()));
        }
        Ok(())
    }

    /// The sweep values. The end points are reproduced exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == self.points - 1 {
                    return self.stop;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => self.start * (self.stop / self.start).powf(t),
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = CipcError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 5 {
            return Err(bad(format!("sweep `{s}` must look like VAR:START:STOP:POINTS:SPACING")));
        }
        let num = |v: &str| v.parse::<f64>().map_err(|_| bad(format!("sweep: `{v}` is not a number")));
        let spacing = match parts[4] {
            "linear" | "lin" => Spacing::Linear,
            "log" => Spacing::Log,
            other => return Err(bad(format!("sweep spacing must be `linear` or `log`, got `{other}`"))),
        };
        let points =
            parts[3].parse::<usize>().map_err(|_| bad(format!("sweep: `{}` is not a point count", parts[3])))?;
        SweepSpec::new(parts[0].parse()?, num(parts[1])?, num(parts[2])?, points, spacing)
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spacing = match self.spacing {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        };
        write!(f, "{}:{}:{}:{}:{}", self.variable.name(), self.start, self.stop, self.points, spacing)
    }
}

fn bad(msg: String) -> CipcError {
    CipcError::InvalidParameter(msg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRUNCATED: &str = "\
# unit parameters
scheme = truncated
q = 1
p_a_max_db = 0
p_b_max_db = 0   # jammer
rate = 0.5
epsilon = 0.1
phi = 0.1
";

    #[test]
    fn parses_with_defaults() {
        let c: Config = TRUNCATED.parse().unwrap();
        assert_eq!(c.scheme.scheme, Scheme::Truncated { p_a_max: 1.0 });
        assert_eq!(c.scheme.p_b_max, 1.0);
        assert_eq!(c.system.sigma2_b, 1.0);
        assert_eq!(c.system.lambda_bw, 1.0);
        assert_eq!(c.system.lambda_ba, c.system.lambda_ab);
        assert_eq!(c.system.phi, 0.1);
    }

    #[test]
    fn rejects_unknown_duplicate_and_missing_keys() {
        assert!(format!("{TRUNCATED}colour = red\n").parse::<Config>().is_err());
        assert!(format!("{TRUNCATED}q = 2\n").parse::<Config>().is_err());
        assert!(TRUNCATED.replace("p_a_max_db = 0\n", "").parse::<Config>().is_err());
        assert!(TRUNCATED.replace("scheme = truncated", "scheme = conventional").parse::<Config>().is_err());
        assert!(TRUNCATED.replace("rate = 0.5", "rate = 1.5").parse::<Config>().is_err());
        assert!(TRUNCATED.replace("q = 1", "q = one").parse::<Config>().is_err());
    }

    #[test]
    fn sweep_round_trip() {
        let s: SweepSpec = "p_b_max_db:-10:40:11:linear".parse().unwrap();
        let v = s.values();
        assert_eq!(v.len(), 11);
        assert_eq!(v[0], -10.0);
        assert_eq!(v[10], 40.0);
        assert!((v[1] - -5.0).abs() < 1e-12);
        let t: SweepSpec = s.to_string().parse().unwrap();
        assert_eq!(s, t);

        let l: SweepSpec = "q:0.01:100:5:log".parse().unwrap();
        assert!((l.values()[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_validation() {
        assert!("tau:0:1:1:linear".parse::<SweepSpec>().is_err());
        assert!("tau:1:0:5:linear".parse::<SweepSpec>().is_err());
        assert!("q:0:1:5:log".parse::<SweepSpec>().is_err());
        assert!("rate:0:1:5:linear".parse::<SweepSpec>().is_err());
        assert!("tau:0:1:5".parse::<SweepSpec>().is_err());
    }
}
