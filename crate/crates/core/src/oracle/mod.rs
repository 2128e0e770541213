//! Numerical verification and falsification.
//!
//! Everything here works on concrete configurations: a [`NormTuple`] of
//! norms (the inequality only sees norms) or, once a violation is found,
//! actual vectors in an ℓ^q space packaged as a [`Witness`].

mod crosscheck;
pub mod probes;
mod search;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::characterize::{CoefficientTuple, Exponent, SetId};
use crate::error::{Error, Result};
use crate::spaces::{lq_norm, norm, realize_tuple, NormTuple, SpaceDescriptor, Vector};

pub use crosscheck::{
    crosscheck, draw_f_coefficients, draw_g_coefficients, CrosscheckParams, CrosscheckReport,
    SetSummary, TrialRecord,
};
pub use search::{falsify, falsify_f, falsify_g, random_verify, FalsifyOutcome, VerifyReport};

/// Relative threshold below which a negative gap counts as a violation.
pub const VIOLATION_REL_TOL: f64 = 1e-12;

/// Which inequality a gap refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// `‖Σxᵢ‖^p ≤ Σ‖xᵢ‖^p/μᵢ`; gap = right − left.
    F,
    /// `‖Σxᵢ‖^p ≥ Σ‖xᵢ‖^p/μᵢ`; gap = left − right.
    G,
}

impl Direction {
    pub fn set_id(self) -> SetId {
        match self {
            Direction::F => SetId::F,
            Direction::G => SetId::G,
        }
    }
}

impl TryFrom<SetId> for Direction {
    type Error = Error;

    fn try_from(set: SetId) -> Result<Self> {
        match set {
            SetId::F => Ok(Direction::F),
            SetId::G => Ok(Direction::G),
            SetId::H => Err(Error::InvalidArgument(
                "falsification is defined for F and G only".into(),
            )),
        }
    }
}

/// Generator that produced a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Probe {
    Collinear,
    Basis,
    Cancellation,
    Lagrange,
    Random,
    Grid,
}

impl Probe {
    pub fn tag(self) -> &'static str {
        match self {
            Probe::Collinear => "collinear",
            Probe::Basis => "basis",
            Probe::Cancellation => "cancellation",
            Probe::Lagrange => "lagrange",
            Probe::Random => "random",
            Probe::Grid => "grid",
        }
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Search budget and sandbox for the falsifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Maximum number of configurations evaluated.
    pub budget: usize,
    pub seed: u64,
    pub space: SpaceDescriptor,
    /// Zoom in twice around the best grid cell.
    pub refine: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: 10_000,
            seed: 0,
            space: SpaceDescriptor::default(),
            refine: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidConfig("budget must be >= 1".into()));
        }
        if self.space.dim() < 2 {
            return Err(Error::InvalidConfig(
                "witness spaces need dimension >= 2".into(),
            ));
        }
        Ok(())
    }
}

/// Both sides of the inequality for a norm tuple: `(t^p, Σ sᵢ^p/μᵢ)`.
pub(crate) fn sides(p: Exponent, mu: &CoefficientTuple, nt: &NormTuple) -> (f64, f64) {
    let pv = p.value();
    let lhs = nt.t.powf(pv);
    let rhs =
        nt.s.iter()
            .zip(mu.values())
            .map(|(s, m)| s.powf(pv) / m)
            .sum();
    (lhs, rhs)
}

fn oriented(direction: Direction, lhs: f64, rhs: f64) -> f64 {
    match direction {
        Direction::F => rhs - lhs,
        Direction::G => lhs - rhs,
    }
}

pub(crate) fn violation_threshold(lhs: f64, rhs: f64) -> f64 {
    -VIOLATION_REL_TOL * 1f64.max(lhs.abs()).max(rhs.abs())
}

/// `Σ sᵢ^p/μᵢ − t^p`.
pub fn gap_f(p: Exponent, mu: &CoefficientTuple, nt: &NormTuple) -> f64 {
    let (lhs, rhs) = sides(p, mu, nt);
    rhs - lhs
}

/// `t^p − Σ sᵢ^p/μᵢ`.
pub fn gap_g(p: Exponent, mu: &CoefficientTuple, nt: &NormTuple) -> f64 {
    let (lhs, rhs) = sides(p, mu, nt);
    lhs - rhs
}

pub fn gap(direction: Direction, p: Exponent, mu: &CoefficientTuple, nt: &NormTuple) -> f64 {
    let (lhs, rhs) = sides(p, mu, nt);
    oriented(direction, lhs, rhs)
}

/// Concrete vectors together with both sides of the inequality they
/// evaluate to. A negative gap certifies a violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub space: SpaceDescriptor,
    pub probe: Probe,
    pub vectors: Vec<Vector>,
    pub norms: Vec<f64>,
    pub sum_norm: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

impl Witness {
    /// Evaluates the inequality on explicit vectors.
    pub fn from_vectors(
        space: SpaceDescriptor,
        probe: Probe,
        direction: Direction,
        p: Exponent,
        mu: &CoefficientTuple,
        vectors: Vec<Vector>,
    ) -> Result<Self> {
        if vectors.len() != mu.len() {
            return Err(Error::InvalidArgument(format!(
                "{} vectors for {} coefficients",
                vectors.len(),
                mu.len()
            )));
        }
        let norms = vectors
            .iter()
            .map(|v| norm(&space, v))
            .collect::<Result<Vec<_>>>()?;
        let sum_norm = norm(&space, &Vector::sum(space.dim(), &vectors))?;
        let nt = NormTuple::unchecked(norms.clone(), sum_norm);
        let (lhs, rhs) = sides(p, mu, &nt);
        Ok(Self {
            space,
            probe,
            vectors,
            norms,
            sum_norm,
            lhs,
            rhs,
            gap: oriented(direction, lhs, rhs),
        })
    }

    /// Realizes a norm tuple in `space` and evaluates it.
    pub fn realize(
        space: SpaceDescriptor,
        probe: Probe,
        direction: Direction,
        p: Exponent,
        mu: &CoefficientTuple,
        nt: &NormTuple,
    ) -> Result<Self> {
        let vectors = realize_tuple(&space, nt)?;
        Self::from_vectors(space, probe, direction, p, mu, vectors)
    }

    /// Whether the gap is below the float-noise threshold.
    pub fn is_violation(&self) -> bool {
        self.gap < violation_threshold(self.lhs, self.rhs)
    }

    /// Largest relative discrepancy between the stored sides and a fresh
    /// evaluation of the stored vectors.
    pub fn integrity_error(&self, p: Exponent, mu: &CoefficientTuple) -> Result<f64> {
        let fresh = Self::from_vectors(
            self.space,
            self.probe,
            Direction::F,
            p,
            mu,
            self.vectors.clone(),
        )?;
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
        Ok(rel(fresh.lhs, self.lhs).max(rel(fresh.rhs, self.rhs)))
    }

    /// Multi-line human-readable rendering.
    pub fn describe(&self) -> String {
        let mut out = format!("witness in {} (probe: {})\n", self.space, self.probe);
        for (i, (v, n)) in self.vectors.iter().zip(&self.norms).enumerate() {
            let coords: Vec<String> = v.coords().iter().map(|c| c.to_string()).collect();
            out.push_str(&format!(
                "  x{} = [{}]  ‖x{}‖ = {}\n",
                i + 1,
                coords.join(", "),
                i + 1,
                n
            ));
        }
        out.push_str(&format!("  ‖Σx‖ = {}\n", self.sum_norm));
        out.push_str(&format!(
            "  lhs = {}  rhs = {}  gap = {}",
            self.lhs, self.rhs, self.gap
        ));
        out
    }
}

/// Residual of the two-vector Euler–Lagrange identity
///
/// ```text
/// ‖x‖²/μ + ‖y‖²/ν − ‖ax + by‖²/λ  =  ‖νbx − μay‖²/(λμν),   λ = μa² + νb²
/// ```
///
/// returned as left minus right. It vanishes in inner-product spaces and
/// generally not elsewhere.
#[allow(clippy::too_many_arguments)]
pub fn euler_lagrange_residual(
    space: &SpaceDescriptor,
    x: &Vector,
    y: &Vector,
    a: f64,
    b: f64,
    mu: f64,
    nu: f64,
) -> Result<f64> {
    if mu == 0.0 || nu == 0.0 {
        return Err(Error::InvalidArgument("mu and nu must be nonzero".into()));
    }
    let lambda = mu * a * a + nu * b * b;
    if lambda == 0.0 {
        return Err(Error::InvalidArgument(
            "lambda = mu a^2 + nu b^2 must be nonzero".into(),
        ));
    }
    let nx = norm(space, x)?;
    let ny = norm(space, y)?;
    let combo: Vec<f64> = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(xi, yi)| a * xi + b * yi)
        .collect();
    let cross: Vec<f64> = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(xi, yi)| nu * b * xi - mu * a * yi)
        .collect();
    let q = space.q();
    let lhs = nx * nx / mu + ny * ny / nu - lq_norm(q, &combo).powi(2) / lambda;
    let rhs = lq_norm(q, &cross).powi(2) / (lambda * mu * nu);
    Ok(lhs - rhs)
}
