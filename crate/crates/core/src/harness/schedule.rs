//! Parameter choices as functions of `(k, δ)` and the reference bound curve.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs and derived parameters of one stability run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleParams {
    pub k: f64,
    pub delta: f64,
    pub s: f64,
    pub n: usize,
    /// A priori bound `M`.
    pub m: f64,
    /// Enclosing radius `R`.
    pub r: f64,
    pub c0: f64,
    pub a: f64,
    pub tau: f64,
    pub rho: f64,
    pub alpha: f64,
}

/// `α = (n − 1)s / ((2s + n − 1)(n + 2))`.
pub fn alpha(n: usize, s: f64) -> f64 {
    let n = n as f64;
    (n - 1.0) * s / ((2.0 * s + n - 1.0) * (n + 2.0))
}

/// `a = C₀√M k + log(1/δ)/(5R)`, raised to `max{C₀√M, 1, k}` if needed;
/// `τ² = (k² + a²)^{−(n−1)/(2s+n−1)}`, `ρ = (k² + a²)^α`.
pub fn parameter_schedule(k: f64, delta: f64, s: f64, n: usize, m: f64, r: f64, c0: f64) -> Result<ScheduleParams> {
    let bad = |msg: String| Err(Error::ParameterRange(msg));
    if !(k >= 1.0) {
        return bad(format!("k = {k} must be at least 1"));
    }
    if !(delta > 0.0 && delta < (-1f64).exp()) {
        return bad(format!("δ = {delta} must lie in (0, 1/e)"));
    }
    if !(s > 0.0 && s < 0.5) {
        return bad(format!("s = {s} must lie in (0, 1/2)"));
    }
    if n < 3 {
        return bad(format!("n = {n} must be at least 3"));
    }
    if !(m >= 1.0) || !(r >= 1.0) {
        return bad(format!("M = {m} and R = {r} must be at least 1"));
    }
    if !(c0 > 0.0) {
        return bad(format!("C₀ = {c0} must be positive"));
    }
    let floor = (c0 * m.sqrt()).max(1.0).max(k);
    let a = (c0 * m.sqrt() * k + (1.0 / delta).ln() / (5.0 * r)).max(floor);
    let big = k * k + a * a;
    let nf = n as f64;
    let tau = big.powf(-(nf - 1.0) / (2.0 * s + nf - 1.0)).sqrt();
    let al = alpha(n, s);
    let rho = big.powf(al);
    Ok(ScheduleParams { k, delta, s, n, m, r, c0, a, tau, rho, alpha: al })
}

/// `e^{Ck} δ^{1/2} + C/(k + log(1/δ))^{2α}`.
pub fn bound_value(k: f64, delta: f64, alpha: f64, c: f64) -> f64 {
    (c * k).exp() * delta.sqrt() + c / (k + (1.0 / delta).ln()).powf(2.0 * alpha)
}

/// The `L^∞` bound obtained from an `H^{−1}` value by interpolation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationBound {
    /// `(s − n/2)/(2(s + 1))`.
    pub exponent: f64,
    /// `ε = (s − n/2)/2`.
    pub epsilon: f64,
    /// `ε/(1 + s)`.
    pub theta: f64,
    /// `C (2M)^{(1−ε+s)/(1+s)} ‖q₁ − q₂‖_{H^{−1}}^{ε/(1+s)}`.
    pub linf: f64,
}

/// `(s − n/2)/(2(s + 1))`.
pub fn interpolation_exponent(n: usize, s: f64) -> Result<f64> {
    let half = n as f64 / 2.0;
    if s <= half {
        return Err(Error::ParameterRange(format!("s = {s} must exceed n/2 = {half}")));
    }
    Ok((s - half) / (2.0 * (s + 1.0)))
}

/// Assembles the bound from a measured `H^{−1}` value and the a priori `M`.
pub fn interpolation_bound(n: usize, s: f64, hminus1: f64, m: f64, c: f64) -> Result<InterpolationBound> {
    let exponent = interpolation_exponent(n, s)?;
    let epsilon = (s - n as f64 / 2.0) / 2.0;
    let theta = epsilon / (1.0 + s);
    let linf = if hminus1 == 0.0 {
        0.0
    } else {
        c * (2.0 * m).powf((1.0 - epsilon + s) / (1.0 + s)) * hminus1.powf(theta)
    };
    Ok(InterpolationBound { exponent, epsilon, theta, linf })
}
