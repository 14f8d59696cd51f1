//! Series that appear in the closed form of the expected minimum detection
//! error for the conventional scheme.

use crate::error::{CipcError, Result};

/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 10_000;

/// Relative size below which a term counts as negligible.
const TERM_RATIO: f64 = 1e-16;

/// Consecutive negligible terms required before stopping.
const QUIET_TERMS: usize = 3;

/// `₃F₃([1,1,1]; [2,2,2]; z) = Σ_{k≥0} z^k / ((k+1)^3 k!)` for `z > 0`.
pub fn hyper3f3_unit_params(z: f64) -> Result<f64> {
    check_argument(z, "3F3")?;
    // t_{k+1} / t_k = z (k+1)^2 / (k+2)^3
    sum_positive_series(1.0, |k, term| {
        let k1 = k as f64 + 1.0;
        let k2 = k1 + 1.0;
        term * z * k1 * k1 / (k2 * k2 * k2)
    })
}

/// `Σ_{k≥1} H_k z^k / (k·k!)` where `H_k` is the k-th harmonic number.
pub fn harmonic_exponential_series(z: f64) -> Result<f64> {
    check_argument(z, "harmonic series")?;
    let mut sum = 0.0;
    let mut power = 1.0; // z^k / k!
    let mut harmonic = 0.0;
    let mut quiet = 0;
    for k in 1..=MAX_SERIES_TERMS {
        let kf = k as f64;
        power *= z / kf;
        harmonic += 1.0 / kf;
        let term = harmonic * power / kf;
        sum += term;
        if !sum.is_finite() {
            return Err(CipcError::Overflow(format!("harmonic series at z = {z}")));
        }
        if term <= TERM_RATIO * sum {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(CipcError::NonConvergence { terms: MAX_SERIES_TERMS })
}

fn check_argument(z: f64, what: &str) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(CipcError::Domain(format!("{what} requires z > 0, got {z}")))
    }
}

/// Sums a series of positive terms given the first term and the
/// term-to-term update `next(k, t_k) -> t_{k+1}`.
fn sum_positive_series(first: f64, next: impl Fn(usize, f64) -> f64) -> Result<f64> {
    let mut term = first;
    let mut sum = first;
    let mut quiet = 0;
    for k in 0..MAX_SERIES_TERMS {
        term = next(k, term);
        sum += term;
        if !sum.is_finite() {
            return Err(CipcError::Overflow("hypergeometric series".into()));
        }
        if term <= TERM_RATIO * sum {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(CipcError::NonConvergence { terms: MAX_SERIES_TERMS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_argument_tends_to_one() {
        assert!((hyper3f3_unit_params(1e-12).unwrap() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn rejects_non_positive_arguments() {
        assert!(hyper3f3_unit_params(0.0).is_err());
        assert!(hyper3f3_unit_params(-1.0).is_err());
        assert!(harmonic_exponential_series(f64::INFINITY).is_err());
    }

    #[test]
    fn partial_sums_increase() {
        let z = 3.0;
        let mut term = 1.0;
        let mut prev = 1.0;
        for k in 0..60 {
            let k1 = k as f64 + 1.0;
            term *= z * k1 * k1 / ((k1 + 1.0).powi(3));
            let next = prev + term;
            assert!(next >= prev);
            prev = next;
        }
        assert_relative_eq!(prev, hyper3f3_unit_params(z).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn harmonic_series_first_terms() {
        // z = 0.01: H1 z + H2 z^2/4 + H3 z^3/18 ...
        let z: f64 = 0.01;
        let approx = z + 1.5 * z * z / 4.0 + (11.0 / 6.0) * z.powi(3) / 18.0 + (25.0 / 12.0) * z.powi(4) / 96.0;
        assert_relative_eq!(harmonic_exponential_series(z).unwrap(), approx, max_relative = 1e-9);
    }

    #[test]
    fn huge_argument_overflows_or_fails_cleanly() {
        assert!(hyper3f3_unit_params(1e6).is_err());
    }
}
