//! Exponential integrals for real arguments.
//!
//! `Ei(x) = -∫_{-x}^{∞} e^{-t}/t dt`. Negative arguments go through
//! `E1(z) = -Ei(-z)`: a power series for `z <= 1` and a continued fraction
//! beyond. Positive arguments use the power series up to
//! [`SERIES_LIMIT`] and the asymptotic expansion above it.

use crate::error::{CipcError, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Largest positive argument handled by the power series.
pub const SERIES_LIMIT: f64 = 40.0;

/// Switch point between the `E1` series and the continued fraction.
pub const E1_SERIES_LIMIT: f64 = 1.0;

/// The unique positive zero of `Ei`.
const EI_ROOT: f64 = 0.372_507_410_781_366_634_46;

const MAX_TERMS: usize = 500;

/// Exponential integral `Ei(x)` for real `x != 0`.
pub fn ei(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(CipcError::Domain("Ei(NaN)".into()));
    }
    if x == 0.0 {
        return Err(CipcError::Domain("Ei has a logarithmic singularity at 0".into()));
    }
    let value = if x < 0.0 {
        let z = -x;
        -(-z).exp() * e1_scaled(z)?
    } else if x <= SERIES_LIMIT {
        if (0.2..0.6).contains(&x) {
            ei_near_root(x)
        } else {
            ei_series(x)
        }
    } else {
        ei_asymptotic(x)
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CipcError::Overflow(format!("Ei({x})")))
    }
}

/// `e^z E1(z)` for `z > 0`.
///
/// The scaling keeps the result O(1/z) for large `z`, so differences like
/// `e^c [E1(c) - E1(u)]` stay representable when `c` is large.
pub fn e1_scaled(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(CipcError::Domain(format!("E1 requires a finite positive argument, got {z}")));
    }
    if z <= E1_SERIES_LIMIT {
        Ok(z.exp() * e1_series(z))
    } else {
        e1_continued_fraction(z)
    }
}

/// `E1(z)` for `z > 0`.
pub fn e1(z: f64) -> Result<f64> {
    Ok((-z).exp() * e1_scaled(z)?)
}

/// `E1(z) = -γ - ln z - Σ_{k≥1} (-z)^k / (k·k!)`.
pub(crate) fn e1_series(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0; // (-z)^k / k!
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        power *= -z / kf;
        let term = power / kf;
        sum += term;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

/// Modified Lentz evaluation of the `E1` continued fraction, returning
/// `e^z E1(z)`.
pub(crate) fn e1_continued_fraction(z: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() <= f64::EPSILON {
            return Ok(h);
        }
    }
    Err(CipcError::NonConvergence { terms: MAX_TERMS })
}

/// `Ei(x) = γ + ln x + Σ_{k≥1} x^k / (k·k!)`, all terms positive for `x > 0`.
pub(crate) fn ei_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        power *= x / kf;
        let term = power / kf;
        sum += term;
        if term <= f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    EULER_GAMMA + x.ln() + sum
}

/// Series rearranged around the positive zero `x0` of `Ei`:
/// `Ei(x) = ln(x/x0) + Σ (x^k - x0^k)/(k·k!)`.
/// Avoids the cancellation between `γ + ln x` and the sum near `x0`.
fn ei_near_root(x: f64) -> f64 {
    let h = x - EI_ROOT;
    let mut sum = 0.0;
    let mut diff = 0.0; // x^k - x0^k
    let mut root_pow = 1.0; // x0^k
    let mut fact = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        diff = x * diff + root_pow * h;
        root_pow *= EI_ROOT;
        fact *= kf;
        let term = diff / (kf * fact);
        sum += term;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
    }
    (h / EI_ROOT).ln_1p() + sum
}

/// `Ei(x) ~ e^x/x Σ k!/x^k`, truncated at the smallest term.
pub(crate) fn ei_asymptotic(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 1..MAX_TERMS {
        let next = term * k as f64 / x;
        if next > term || next <= f64::EPSILON * 0.25 * sum {
            break;
        }
        term = next;
        sum += term;
    }
    (x - x.ln()).exp() * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_is_a_domain_error() {
        assert!(matches!(ei(0.0), Err(CipcError::Domain(_))));
        assert!(matches!(ei(f64::NAN), Err(CipcError::Domain(_))));
    }

    #[test]
    fn overflow_is_signalled() {
        assert!(matches!(ei(720.0), Err(CipcError::Overflow(_))));
        assert!(ei(700.0).unwrap().is_finite());
    }

    #[test]
    fn negative_arguments_give_negative_values() {
        for x in [-10.0, -1.0, -0.01] {
            assert!(ei(x).unwrap() < 0.0, "Ei({x})");
        }
    }

    #[test]
    fn e1_branches_agree_at_switch() {
        let z = E1_SERIES_LIMIT;
        let series = z.exp() * e1_series(z);
        let cf = e1_continued_fraction(z).unwrap();
        assert_relative_eq!(series, cf, max_relative = 1e-13);
    }

    #[test]
    fn positive_branches_agree_at_switch() {
        let series = ei_series(SERIES_LIMIT);
        let asym = ei_asymptotic(SERIES_LIMIT);
        assert_relative_eq!(series, asym, max_relative = 1e-10);
    }

    #[test]
    fn near_root_matches_plain_series_away_from_zero() {
        for x in [0.21, 0.3, 0.45, 0.59] {
            assert_relative_eq!(ei_near_root(x), ei_series(x), max_relative = 1e-12);
        }
        assert!(ei(EI_ROOT).unwrap().abs() < 1e-15);
    }

    #[test]
    fn scaled_e1_stays_finite_for_large_arguments() {
        // e^z E1(z) ~ Σ (-1)^k k!/z^(k+1)
        let z: f64 = 1000.0;
        let expected = 1.0 / z - 1.0 / (z * z) + 2.0 / z.powi(3) - 6.0 / z.powi(4) + 24.0 / z.powi(5);
        assert_relative_eq!(e1_scaled(z).unwrap(), expected, max_relative = 1e-12);
    }
}
