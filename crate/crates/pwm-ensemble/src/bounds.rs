//! Closed-form upper bounds on the ensemble's mistake probability.
//!
//! Two base bounds feed everything else: one in terms of the best static
//! aggregation rule (`bound_b1`), one in terms of the best local classifier
//! (`bound_b2`). Their minimum, capped at 1, is `bound_b`. The remaining
//! calculators extend that combined bound to delayed labels, missing labels,
//! and asynchronous learners. All of them double as oracles for the
//! simulation property tests: an implementation run that exceeds its bound
//! is a bug in one or the other.

use crate::error::{Error, Result};

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) || !v.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "{name} must lie in [0, 1], got {v}"
        )));
    }
    Ok(())
}

fn check_counts(k: usize, n: u64) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidArgument("learner count must be >= 1".into()));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    Ok(())
}

/// Bound in terms of the best static weight vector:
/// `2 K p_opt + K (K + 1) / N`.
pub fn bound_b1(k: usize, n: u64, p_opt: f64) -> Result<f64> {
    check_counts(k, n)?;
    check_unit("p_opt", p_opt)?;
    let kf = k as f64;
    Ok(2.0 * kf * p_opt + kf * (kf + 1.0) / n as f64)
}

/// Bound in terms of the best local classifier:
/// `2 p_star + (K+1)/(2 N v*) + sqrt(((K+1)/(2 N v*))^2 + 2 (K+1) p_star / (N v*))`.
pub fn bound_b2(k: usize, n: u64, p_star: f64, v_star: usize) -> Result<f64> {
    check_counts(k, n)?;
    check_unit("p_star", p_star)?;
    if v_star < 1 || v_star > k {
        return Err(Error::InvalidArgument(format!(
            "v_star must lie in 1..=K, got {v_star}"
        )));
    }
    let half_term = (k as f64 + 1.0) / (2.0 * n as f64 * v_star as f64);
    let cross = 2.0 * (k as f64 + 1.0) * p_star / (n as f64 * v_star as f64);
    Ok(2.0 * p_star + half_term + (half_term * half_term + cross).sqrt())
}

/// Combined bound: the smaller of the two base bounds, capped at 1.
pub fn bound_b(k: usize, n: u64, p_opt: f64, p_star: f64, v_star: usize) -> Result<f64> {
    let b1 = bound_b1(k, n, p_opt)?;
    let b2 = bound_b2(k, n, p_star, v_star)?;
    Ok(b1.min(b2).min(1.0))
}

/// Which of the two base bounds is active inside [`bound_b`]. Useful for
/// locating the cusp in bound-versus-parameter sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActiveBound {
    B1,
    B2,
    Cap,
}

pub fn active_bound(k: usize, n: u64, p_opt: f64, p_star: f64, v_star: usize) -> Result<ActiveBound> {
    let b1 = bound_b1(k, n, p_opt)?;
    let b2 = bound_b2(k, n, p_star, v_star)?;
    if b1.min(b2) > 1.0 {
        Ok(ActiveBound::Cap)
    } else if b1 <= b2 {
        Ok(ActiveBound::B1)
    } else {
        Ok(ActiveBound::B2)
    }
}

/// Extension for labels delayed by at most `max_delays[i]` slots per learner:
/// adds `sum(max_delays) / (N K)` on top of the base bound.
pub fn bound_delayed(base: f64, max_delays: &[u64], n: u64, k: usize) -> Result<f64> {
    check_counts(k, n)?;
    if max_delays.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: max_delays.len(),
        });
    }
    let total: u64 = max_delays.iter().sum();
    Ok(base + total as f64 / (n as f64 * k as f64))
}

/// Confidence term `sqrt(ln(1/epsilon) / (2 z))` of the missing-label bound.
pub fn lambda_term(epsilon: f64, z: u64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if z == 0 {
        return Err(Error::InvalidArgument(
            "confidence term undefined for zero observed errors".into(),
        ));
    }
    Ok(((1.0 / epsilon).ln() / (2.0 * z as f64)).sqrt())
}

/// Extension for labels observed only with probability `mu`:
/// `base / (mu - lambda(epsilon, observed_errors))`, valid with probability
/// at least `1 - epsilon` and only when the denominator is positive.
pub fn bound_missing(base: f64, mu: f64, epsilon: f64, observed_errors: u64) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "mu must lie in (0, 1], got {mu}"
        )));
    }
    let lambda = lambda_term(epsilon, observed_errors)?;
    if lambda >= mu {
        return Err(Error::NotApplicable(format!(
            "confidence term {lambda:.4} >= label probability {mu:.4}; \
             not enough observed errors for this confidence level"
        )));
    }
    Ok(base / (mu - lambda))
}

/// Extension for asynchronous learners: adds the synchronization index
/// `alpha` to the base bound, capped at 1.
pub fn bound_async(base: f64, alpha: f64) -> Result<f64> {
    check_unit("alpha", alpha)?;
    Ok((base + alpha).min(1.0))
}
