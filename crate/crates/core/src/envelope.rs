//! The envelope surface `h_p` and the half-space intersections `D_p(Ω)`.
//!
//! For `p > 1` each simplex point `s` defines the hyperplane
//! `L_p(s) = {a : Σ aᵢ sᵢ^p = 1}`. The envelope of this family is the graph
//! of
//!
//! ```text
//! h_p(a₁, …, aₙ₋₁) = (1 − Σ aᵢ^{1/(1−p)})^{1−p},
//! ```
//!
//! touched by `L_p(s)` at `aᵢ = sᵢ^{1−p}`, and its epigraph is the
//! intersection of the half-spaces `Σ aᵢ sᵢ^p ≥ 1`. For `0 < p ≤ 1` the same
//! intersection is the box `aᵢ ≥ 1`.

use rayon::prelude::*;

use crate::characterize::{Exponent, Regime};
use crate::error::{Error, Result};
use crate::format::sig_digits;

/// Points closer than this to the edge of the `h_p` domain are rejected.
const DOMAIN_MARGIN: f64 = 1e-12;
const SIMPLEX_SUM_TOL: f64 = 1e-9;

fn require_above_one(p: Exponent) -> Result<()> {
    match p.regime() {
        Regime::AboveOne => Ok(()),
        Regime::UpToOne => Err(Error::RequiresPAboveOne(p.value())),
    }
}

/// A point `(a₁, …, aₙ)` of coefficient space.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopePoint {
    pub a: Vec<f64>,
}

impl EnvelopePoint {
    pub fn head(&self) -> &[f64] {
        &self.a[..self.a.len() - 1]
    }

    pub fn last(&self) -> f64 {
        self.a[self.a.len() - 1]
    }
}

/// A point of the standard simplex `S = {s ≥ 0, Σ sᵢ = 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    s: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(s: Vec<f64>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidSimplexPoint("no coordinates".into()));
        }
        if let Some(x) = s.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidSimplexPoint(format!(
                "coordinates must be finite and nonnegative (got {x})"
            )));
        }
        let sum: f64 = s.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_SUM_TOL {
            return Err(Error::InvalidSimplexPoint(format!(
                "coordinates sum to {sum}, not 1"
            )));
        }
        Ok(Self { s })
    }

    pub fn coords(&self) -> &[f64] {
        &self.s
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn is_interior(&self) -> bool {
        self.s.iter().all(|x| *x > 0.0)
    }
}

/// Finite stand-in for a set `Ω ⊆ {s ≥ 0, Σ sᵢ ≥ 1}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OmegaSampleSet {
    samples: Vec<Vec<f64>>,
}

impl OmegaSampleSet {
    pub fn new(samples: Vec<Vec<f64>>) -> Result<Self> {
        let mut set = Self::default();
        for s in samples {
            set.push(s)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, sample: Vec<f64>) -> Result<()> {
        if let Some(first) = self.samples.first() {
            if first.len() != sample.len() {
                return Err(Error::InvalidSample(format!(
                    "sample has {} coordinates, expected {}",
                    sample.len(),
                    first.len()
                )));
            }
        }
        if sample.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidSample(
                "coordinates must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = sample.iter().sum();
        if sum < 1.0 - SIMPLEX_SUM_TOL {
            return Err(Error::InvalidSample(format!(
                "coordinates sum to {sum} < 1"
            )));
        }
        self.samples.push(sample);
        Ok(())
    }

    /// Uniform barycentric grid of `S` with `grid` steps per axis, shifted
    /// inward by half a step so no coordinate is zero:
    /// `sᵢ = (kᵢ + ½)/(grid + n/2)` over all `k ≥ 0` with `Σkᵢ = grid`.
    pub fn simplex_grid(n: usize, grid: usize) -> Self {
        let denom = grid as f64 + 0.5 * n as f64;
        let samples = compositions(grid, n, 0)
            .into_iter()
            .map(|k| k.iter().map(|&ki| (ki as f64 + 0.5) / denom).collect())
            .collect();
        Self { samples }
    }

    /// The standard basis `e₁, …, eₙ`.
    pub fn basis(n: usize) -> Self {
        let samples = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect();
        Self { samples }
    }

    pub fn extend(&mut self, other: OmegaSampleSet) -> Result<()> {
        for s in other.samples {
            self.push(s)?;
        }
        Ok(())
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// All `k ∈ ℕⁿ` with `Σkᵢ = total` and every `kᵢ ≥ min_part`, in
/// lexicographic order.
pub(crate) fn compositions(total: usize, n: usize, min_part: usize) -> Vec<Vec<usize>> {
    fn rec(
        remaining: usize,
        slots: usize,
        min_part: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if slots == 1 {
            if remaining >= min_part {
                prefix.push(remaining);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let reserve = min_part * (slots - 1);
        if remaining < reserve + min_part {
            return;
        }
        for k in min_part..=remaining - reserve {
            prefix.push(k);
            rec(remaining - k, slots - 1, min_part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(total, n, min_part, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// `h_p(a₁, …, aₙ₋₁) = (1 − Σ aᵢ^{1/(1−p)})^{1−p}`.
pub fn h_p(p: Exponent, a_head: &[f64]) -> Result<f64> {
    require_above_one(p)?;
    if let Some(x) = a_head.iter().find(|x| !x.is_finite() || **x <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "h_p arguments must be positive and finite (got {x})"
        )));
    }
    let power = -p.holder_power();
    let sum: f64 = a_head.iter().map(|a| a.powf(power)).sum();
    if sum >= 1.0 - DOMAIN_MARGIN {
        return Err(Error::EnvelopeDomain(sum));
    }
    Ok((1.0 - sum).powf(1.0 - p.value()))
}

/// The point where the hyperplane of the interior simplex point `s` touches
/// the envelope: `aᵢ = sᵢ^{1−p}` for every `i`.
pub fn envelope_point(p: Exponent, s: &SimplexPoint) -> Result<EnvelopePoint> {
    require_above_one(p)?;
    if !s.is_interior() {
        return Err(Error::InvalidSimplexPoint(
            "tangency needs every coordinate positive".into(),
        ));
    }
    let e = 1.0 - p.value();
    Ok(EnvelopePoint {
        a: s.coords().iter().map(|x| x.powf(e)).collect(),
    })
}

/// `F(a; s) = Σᵢ₍ᵢ<ₙ₎ aᵢsᵢ^p + aₙ(1 − Σᵢ₍ᵢ<ₙ₎ sᵢ)^p − 1` and its partial
/// derivatives in `s₁, …, sₙ₋₁`. Both vanish exactly on the envelope.
pub fn envelope_residual(
    p: Exponent,
    a: &EnvelopePoint,
    s: &SimplexPoint,
) -> Result<(f64, Vec<f64>)> {
    require_above_one(p)?;
    if a.a.len() != s.len() {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates, simplex point has {}",
            a.a.len(),
            s.len()
        )));
    }
    if !s.is_interior() {
        return Err(Error::InvalidSimplexPoint(
            "residual needs an interior simplex point".into(),
        ));
    }
    let pv = p.value();
    let n = s.len();
    let head = &s.coords()[..n - 1];
    let rest = 1.0 - head.iter().sum::<f64>();
    let an = a.last();
    let value = head
        .iter()
        .zip(a.head())
        .map(|(si, ai)| ai * si.powf(pv))
        .sum::<f64>()
        + an * rest.powf(pv)
        - 1.0;
    let tail_slope = pv * an * rest.powf(pv - 1.0);
    let grad = head
        .iter()
        .zip(a.head())
        .map(|(si, ai)| pv * ai * si.powf(pv - 1.0) - tail_slope)
        .collect();
    Ok((value, grad))
}

/// Result of testing `a ∈ D_p(Ω)` on a finite sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct DpResult {
    pub member: bool,
    /// Sample minimizing `Σ aᵢ sᵢ^p`.
    pub worst_sample: Vec<f64>,
    pub worst_value: f64,
}

/// Tests `Σ aᵢ sᵢ^p ≥ 1 − tol` for every sample in `omega`.
pub fn in_dp(p: Exponent, a: &[f64], omega: &OmegaSampleSet, tol: f64) -> Result<DpResult> {
    if omega.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    if a.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidArgument(
            "D_p coordinates must be finite and nonnegative".into(),
        ));
    }
    if omega.samples[0].len() != a.len() {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates, samples have {}",
            a.len(),
            omega.samples[0].len()
        )));
    }
    let pv = p.value();
    let eval = |s: &Vec<f64>| -> f64 {
        s.iter()
            .zip(a)
            .map(|(si, ai)| if *si == 0.0 { 0.0 } else { ai * si.powf(pv) })
            .sum()
    };
    // first minimizer by index, independent of thread scheduling
    let (idx, worst) = omega
        .samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| (i, eval(s)))
        .reduce(
            || (usize::MAX, f64::INFINITY),
            |x, y| {
                if y.1 < x.1 || (y.1 == x.1 && y.0 < x.0) {
                    y
                } else {
                    x
                }
            },
        );
    Ok(DpResult {
        member: worst >= 1.0 - tol,
        worst_sample: omega.samples[idx].clone(),
        worst_value: worst,
    })
}

/// One row of the sampled envelope: `(a₁, …, aₙ₋₁)` and `h_p` there.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeRow {
    pub a_head: Vec<f64>,
    pub h: f64,
}

/// Samples the envelope over the interior simplex points with denominator
/// `2(grid − 1)`, in lexicographic order of `s`.
pub fn sample_envelope(p: Exponent, n: usize, grid: usize) -> Result<Vec<EnvelopeRow>> {
    require_above_one(p)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be >= 2 (got {n})")));
    }
    if grid < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid must be >= 2 (got {grid})"
        )));
    }
    let denom = 2 * (grid - 1);
    compositions(denom, n, 1)
        .into_par_iter()
        .map(|k| {
            let s = SimplexPoint::new(k.iter().map(|&ki| ki as f64 / denom as f64).collect())?;
            let point = envelope_point(p, &s)?;
            let a_head = point.head().to_vec();
            let h = h_p(p, &a_head)?;
            Ok(EnvelopeRow { a_head, h })
        })
        .collect()
}

/// Renders rows as CSV: header `a1,…,a{n−1},h_p`, 12 significant digits,
/// LF line endings.
pub fn envelope_csv(rows: &[EnvelopeRow], n: usize) -> String {
    let mut out = String::new();
    for i in 1..n {
        out.push_str(&format!("a{i},"));
    }
    out.push_str("h_p\n");
    for row in rows {
        for a in &row.a_head {
            out.push_str(&sig_digits(*a, 12));
            out.push(',');
        }
        out.push_str(&sig_digits(row.h, 12));
        out.push('\n');
    }
    out
}
