//! Closed-form probe configurations.
//!
//! Each probe is a norm tuple at which one of the characterizing conditions
//! becomes an equality or a contradiction, so evaluating the inequality there
//! decides the corresponding clause exactly.

use crate::characterize::{CoefficientTuple, Exponent, Regime};
use crate::spaces::NormTuple;

/// `xᵢ = μᵢ^{1/(p−1)} x`, rescaled onto the simplex: `sᵢ = μᵢ^{1/(p−1)}/M`,
/// `t = 1` with `M = Σ μⱼ^{1/(p−1)}`. The gap there is `M^{1−p} − 1`, and
/// this is the minimizer of `Σ sᵢ^p/μᵢ` over the simplex.
///
/// Defined for `p > 1` and all `μᵢ > 0`.
pub fn collinear(p: Exponent, mu: &CoefficientTuple) -> Option<NormTuple> {
    if p.regime() != Regime::AboveOne || mu.values().iter().any(|m| *m <= 0.0) {
        return None;
    }
    let power = p.holder_power();
    let weights: Vec<f64> = mu.values().iter().map(|m| m.powf(power)).collect();
    let total: f64 = weights.iter().sum();
    if !(total.is_finite() && total > 0.0) {
        return None;
    }
    let s = weights.iter().map(|w| w / total).collect();
    Some(NormTuple::unchecked(s, 1.0))
}

/// A single nonzero summand `xᵢ`, all others zero.
pub fn basis(n: usize, i: usize) -> NormTuple {
    let mut s = vec![0.0; n];
    s[i] = 1.0;
    NormTuple::unchecked(s, 1.0)
}

/// `xᵢ = u`, `xⱼ = −u`, all others zero, so the sum vanishes.
pub fn cancellation(n: usize, i: usize, j: usize) -> NormTuple {
    let mut s = vec![0.0; n];
    s[i] = 1.0;
    s[j] = 1.0;
    NormTuple::unchecked(s, 0.0)
}

/// Minimizer of the reverse inequality's right-hand side for a single
/// positive coefficient `μⱼ` (`p > 1`): `sⱼ = 1`,
/// `sᵢ = |μᵢ|^{1/(p−1)}/(1 + B)` for `i ≠ j` and `t = 1/(1 + B)` with
/// `B = Σᵢ≠ⱼ |μᵢ|^{1/(p−1)}`. All other summands point against `xⱼ`.
///
/// The reverse-inequality gap there is `(1 + B)^{1−p} − 1/μⱼ`, negative
/// exactly when `μⱼ^{1/(p−1)} < 1 + B`.
pub fn lagrange(p: Exponent, mu: &CoefficientTuple) -> Option<NormTuple> {
    if p.regime() != Regime::AboveOne {
        return None;
    }
    let j = mu.sole_positive()?;
    let power = p.holder_power();
    let weights: Vec<f64> = mu.values().iter().map(|m| m.abs().powf(power)).collect();
    let b: f64 = weights
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .map(|(_, w)| w)
        .sum();
    let scale = 1.0 / (1.0 + b);
    let s = weights
        .iter()
        .enumerate()
        .map(|(i, w)| if i == j { 1.0 } else { w * scale })
        .collect();
    Some(NormTuple::unchecked(s, scale))
}
