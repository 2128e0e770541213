//! Finite-dimensional ℓ^q spaces.
//!
//! Besides the norm itself this module answers the converse question the
//! oracle needs: given target norms `s₁, …, sₙ` and a target `t` for the
//! norm of the sum, produce vectors that realize them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute stopping tolerance of the rotation-angle bisection.
const ANGLE_TOL: f64 = 1e-10;
const ANGLE_MAX_ITER: usize = 200;

/// Relative slack accepted on the triangle-feasibility constraints.
const FEASIBILITY_SLACK: f64 = 1e-12;

/// `ℓ^q` on `ℝ^dim`, `q ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceDescriptor {
    q: f64,
    dim: usize,
}

impl SpaceDescriptor {
    pub fn new(q: f64, dim: usize) -> Result<Self> {
        if q.is_nan() || q < 1.0 {
            return Err(Error::InvalidSpace(format!(
                "q must be >= 1 or inf (got {q})"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be >= 1".into()));
        }
        Ok(Self { q, dim })
    }

    pub fn euclidean(dim: usize) -> Result<Self> {
        Self::new(2.0, dim)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_max_norm(&self) -> bool {
        self.q.is_infinite()
    }
}

impl Default for SpaceDescriptor {
    fn default() -> Self {
        Self { q: 2.0, dim: 2 }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_infinite() {
            write!(f, "lq:inf:{}", self.dim)
        } else {
            write!(f, "lq:{}:{}", self.q, self.dim)
        }
    }
}

impl FromStr for SpaceDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpace(format!("expected lq:<q>:<dim>, got {s:?}"));
        let mut parts = s.split(':');
        let (Some("lq"), Some(q), Some(dim), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let q = match q {
            "inf" => f64::INFINITY,
            other => other.parse::<f64>().map_err(|_| bad())?,
        };
        let dim = dim.parse::<usize>().map_err(|_| bad())?;
        Self::new(q, dim)
    }
}

impl Serialize for SpaceDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SpaceDescriptor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Dense real vector with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// The `i`-th unit coordinate vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.iter().map(|x| c * x).collect())
    }

    /// Coordinate-wise sum. Panics on dimension mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Sum of a non-empty list of equal-dimension vectors.
    pub fn sum<'a>(dim: usize, vs: impl IntoIterator<Item = &'a Vector>) -> Self {
        let mut acc = vec![0.0; dim];
        for v in vs {
            assert_eq!(v.dim(), dim, "vector dimension mismatch");
            for (a, x) in acc.iter_mut().zip(&v.0) {
                *a += x;
            }
        }
        Self(acc)
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

/// The ℓ^q norm of `v`.
pub fn norm(space: &SpaceDescriptor, v: &Vector) -> Result<f64> {
    if v.dim() != space.dim {
        return Err(Error::DimensionMismatch {
            expected: space.dim,
            found: v.dim(),
        });
    }
    if let Some(i) = v.0.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(lq_norm(space.q, &v.0))
}

pub(crate) fn lq_norm(q: f64, xs: &[f64]) -> f64 {
    let max = xs.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if q.is_infinite() || max == 0.0 {
        return max;
    }
    if q == 1.0 {
        return xs.iter().map(|x| x.abs()).sum();
    }
    // scale by the largest entry so the q-th powers cannot overflow
    let acc: f64 = if q == 2.0 {
        xs.iter().map(|x| (x / max) * (x / max)).sum()
    } else {
        xs.iter().map(|x| (x.abs() / max).powf(q)).sum()
    };
    if q == 2.0 {
        max * acc.sqrt()
    } else {
        max * acc.powf(1.0 / q)
    }
}

/// Norms of the summands together with the norm of their sum.
///
/// Any tuple produced by real vectors satisfies
/// `max(0, 2·max sᵢ − Σsᵢ) ≤ t ≤ Σsᵢ`; conversely every such tuple is
/// realizable in `ℓ^q` of dimension at least two (see [`realize_tuple`]).
#[derive(Debug, Clone, PartialEq)]
pub struct NormTuple {
    pub s: Vec<f64>,
    pub t: f64,
}

impl NormTuple {
    /// Builds a tuple, rejecting negative or non-finite entries and
    /// violations of the triangle-feasibility constraints.
    pub fn new(s: Vec<f64>, t: f64) -> Result<Self> {
        let nt = Self { s, t };
        nt.check_feasible()?;
        Ok(nt)
    }

    /// Builds a tuple without checking feasibility.
    pub fn unchecked(s: Vec<f64>, t: f64) -> Self {
        Self { s, t }
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            s: self.s.iter().map(|x| c * x).collect(),
            t: c * self.t,
        }
    }

    pub fn check_feasible(&self) -> Result<()> {
        if let Some(x) = self.s.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InfeasibleTuple(format!(
                "norms must be finite and nonnegative (got {x})"
            )));
        }
        if !self.t.is_finite() || self.t < 0.0 {
            return Err(Error::InfeasibleTuple(format!(
                "sum norm must be finite and nonnegative (got {})",
                self.t
            )));
        }
        let (lo, hi) = t_bounds(&self.s);
        let slack = FEASIBILITY_SLACK * hi.max(1.0);
        if self.t > hi + slack || self.t < lo - slack {
            return Err(Error::InfeasibleTuple(format!(
                "t = {} outside [{lo}, {hi}]",
                self.t
            )));
        }
        Ok(())
    }
}

fn t_bounds(s: &[f64]) -> (f64, f64) {
    let total: f64 = s.iter().sum();
    let max = s.iter().fold(0.0_f64, |m, &x| m.max(x));
    ((2.0 * max - total).max(0.0), total)
}

/// The closed interval of achievable `‖Σxᵢ‖` given `‖xᵢ‖ = sᵢ`.
pub fn feasible_t_range(s: &[f64]) -> Result<(f64, f64)> {
    if let Some(x) = s.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InfeasibleTuple(format!(
            "norms must be finite and nonnegative (got {x})"
        )));
    }
    if s.iter().all(|&x| x == 0.0) {
        return Err(Error::AllZero);
    }
    Ok(t_bounds(s))
}

/// Unit vector in the first coordinate plane at angle `theta ∈ [0, π]`,
/// normalized in ℓ^q. The endpoints are exactly `±e₁`.
fn plane_direction(q: f64, theta: f64) -> [f64; 2] {
    if theta <= 0.0 {
        return [1.0, 0.0];
    }
    if theta >= std::f64::consts::PI {
        return [-1.0, 0.0];
    }
    let (sin, cos) = theta.sin_cos();
    let r = lq_norm(q, &[cos, sin]);
    [cos / r, sin / r]
}

/// Angle `θ ∈ [0, π]` with `‖a·e₁ + b·u(θ)‖ ≈ c`, where `u(θ)` is
/// [`plane_direction`]. The norm is `a + b` at `θ = 0` and `|a − b|` at
/// `θ = π`; targets outside that range snap to the nearer endpoint.
fn solve_angle(q: f64, a: f64, b: f64, c: f64) -> f64 {
    let value = |theta: f64| {
        let u = plane_direction(q, theta);
        lq_norm(q, &[a + b * u[0], b * u[1]])
    };
    if c >= a + b {
        return 0.0;
    }
    if c <= (a - b).abs() {
        return std::f64::consts::PI;
    }
    let (mut lo, mut hi) = (0.0_f64, std::f64::consts::PI);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..ANGLE_MAX_ITER {
        mid = 0.5 * (lo + hi);
        let g = value(mid) - c;
        if g.abs() <= ANGLE_TOL || mid <= lo || mid >= hi {
            break;
        }
        if g > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mid
}

/// Constructs `x₁, …, xₙ` in `space` with `‖xᵢ‖ = sᵢ` and `‖Σxᵢ‖ = t`.
///
/// The summands together with `−Σxᵢ` form a closed polygon whose side
/// lengths are `(s₁, …, sₙ, t)`. The sides are split into three runs of
/// consecutive sides, each of total length at most half the perimeter, so
/// the three run lengths satisfy the triangle inequality. Each run is laid
/// out collinearly: the first along `e₁`, the second along a direction in the
/// first coordinate plane whose angle is found by bisection, the third
/// closing the triangle.
pub fn realize_tuple(space: &SpaceDescriptor, nt: &NormTuple) -> Result<Vec<Vector>> {
    if space.dim < 2 {
        return Err(Error::InvalidSpace(
            "realizing norm tuples requires dimension >= 2".into(),
        ));
    }
    nt.check_feasible()?;
    let n = nt.s.len();
    let (lo, hi) = t_bounds(&nt.s);
    let t = nt.t.clamp(lo, hi);

    let mut sides: Vec<f64> = nt.s.clone();
    sides.push(t);
    let half = 0.5 * sides.iter().sum::<f64>();

    // run index per side: 0, then a single side in run 1, the rest in run 2
    let mut run = vec![2u8; sides.len()];
    let mut lengths = [0.0_f64; 3];
    let mut i = 0;
    while i < sides.len() && lengths[0] + sides[i] <= half {
        lengths[0] += sides[i];
        run[i] = 0;
        i += 1;
    }
    if i < sides.len() {
        lengths[1] = sides[i];
        run[i] = 1;
        i += 1;
    }
    lengths[2] = sides[i..].iter().sum();

    let q = space.q;
    let theta = solve_angle(q, lengths[0], lengths[1], lengths[2]);
    let first = [1.0, 0.0];
    let second = plane_direction(q, theta);
    let partial = [
        lengths[0] * first[0] + lengths[1] * second[0],
        lengths[0] * first[1] + lengths[1] * second[1],
    ];
    let r = lq_norm(q, &partial);
    let third = if r > 0.0 {
        [-partial[0] / r, -partial[1] / r]
    } else {
        [-1.0, 0.0]
    };
    let directions = [first, second, third];

    Ok((0..n)
        .map(|k| {
            let d = directions[run[k] as usize];
            let mut coords = vec![0.0; space.dim];
            coords[0] = nt.s[k] * d[0];
            coords[1] = nt.s[k] * d[1];
            Vector(coords)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sp(q: f64, dim: usize) -> SpaceDescriptor {
        SpaceDescriptor::new(q, dim).unwrap()
    }

    fn v(xs: &[f64]) -> Vector {
        Vector::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&sp(2.0, 2), &v(&[3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(norm(&sp(1.0, 2), &v(&[1.0, -1.0])).unwrap(), 2.0);
        assert_eq!(
            norm(&sp(f64::INFINITY, 3), &v(&[1.0, -3.0, 2.0])).unwrap(),
            3.0
        );
        let n3 = norm(&sp(3.0, 2), &v(&[1.0, 2.0])).unwrap();
        assert!((n3 - 9f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn norm_errors() {
        assert_eq!(
            norm(&sp(2.0, 3), &v(&[1.0, 2.0])),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        );
        assert_eq!(Vector::new(vec![1.0, f64::NAN]), Err(Error::NonFinite(1)));
        assert!(SpaceDescriptor::new(0.5, 2).is_err());
        assert!(SpaceDescriptor::new(2.0, 0).is_err());
    }

    #[test]
    fn descriptor_syntax() {
        assert_eq!("lq:2:3".parse::<SpaceDescriptor>().unwrap(), sp(2.0, 3));
        assert_eq!(
            "lq:inf:2".parse::<SpaceDescriptor>().unwrap(),
            sp(f64::INFINITY, 2)
        );
        assert_eq!(sp(2.0, 2).to_string(), "lq:2:2");
        assert_eq!(sp(1.5, 4).to_string(), "lq:1.5:4");
        assert_eq!(sp(f64::INFINITY, 2).to_string(), "lq:inf:2");
        for bad in ["lq:0.5:2", "lp:2:2", "lq:2", "lq:2:2:2", "lq:x:2", "lq:2:0"] {
            assert!(bad.parse::<SpaceDescriptor>().is_err(), "{bad}");
        }
    }

    /// Brute force over sign patterns of the first n−1 vectors on the first
    /// axis and a fine sweep of the last vector's angle in ℝ².
    fn brute_force_t_extremes(s: &[f64]) -> (f64, f64, Vec<f64>) {
        let n = s.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut seen = Vec::new();
        for signs in 0..(1u32 << (n - 1)) {
            let base: f64 = (0..n - 1)
                .map(|i| if signs >> i & 1 == 1 { -s[i] } else { s[i] })
                .sum();
            for k in 0..=2000 {
                let th = std::f64::consts::PI * k as f64 / 2000.0;
                let x = base + s[n - 1] * th.cos();
                let y = s[n - 1] * th.sin();
                let t = (x * x + y * y).sqrt();
                lo = lo.min(t);
                hi = hi.max(t);
                seen.push(t);
            }
        }
        (lo, hi, seen)
    }

    #[test]
    fn feasible_range_examples() {
        let (bf_lo, bf_hi, seen) = brute_force_t_extremes(&[3.0, 1.0, 1.0]);
        assert!((bf_lo - 1.0).abs() < 1e-9 && (bf_hi - 5.0).abs() < 1e-9);
        // interior values are attained too
        for target in [1.5, 2.0, 3.7, 4.9] {
            assert!(seen.iter().any(|t| (t - target).abs() < 1e-2), "{target}");
        }
        assert_eq!(feasible_t_range(&[3.0, 1.0, 1.0]).unwrap(), (1.0, 5.0));
        assert_eq!(feasible_t_range(&[1.0, 1.0]).unwrap(), (0.0, 2.0));
        assert_eq!(feasible_t_range(&[5.0]).unwrap(), (5.0, 5.0));
        assert_eq!(feasible_t_range(&[0.0, 0.0]), Err(Error::AllZero));
        assert!(feasible_t_range(&[1.0, -1.0]).is_err());
    }

    #[test]
    fn realize_aligned_and_cancelling_pairs() {
        let s = sp(2.0, 2);
        let xs = realize_tuple(&s, &NormTuple::new(vec![1.0, 1.0], 2.0).unwrap()).unwrap();
        assert_eq!(xs, vec![v(&[1.0, 0.0]), v(&[1.0, 0.0])]);
        let xs = realize_tuple(&s, &NormTuple::new(vec![1.0, 1.0], 0.0).unwrap()).unwrap();
        assert_eq!(xs, vec![v(&[1.0, 0.0]), v(&[-1.0, 0.0])]);
    }

    fn check_realization(space: &SpaceDescriptor, nt: &NormTuple) {
        let xs = realize_tuple(space, nt).unwrap();
        assert_eq!(xs.len(), nt.s.len());
        for (x, &si) in xs.iter().zip(&nt.s) {
            let got = norm(space, x).unwrap();
            assert!(
                (got - si).abs() <= 1e-9 * si.max(1.0),
                "{space}: ‖x‖ = {got}, want {si} ({nt:?})"
            );
        }
        let total = norm(space, &Vector::sum(space.dim(), &xs)).unwrap();
        assert!(
            (total - nt.t).abs() <= 1e-9 * nt.t.max(1.0),
            "{space}: ‖Σx‖ = {total}, want {} ({nt:?})",
            nt.t
        );
    }

    #[test]
    fn realize_by_bisection() {
        let space = sp(2.0, 2);
        for t in [1.0, 1.5, 2.5, 4.0, 5.0] {
            check_realization(&space, &NormTuple::new(vec![3.0, 1.0, 1.0], t).unwrap());
        }
        // a closed triangle that no single rotation of one vector can reach
        check_realization(&space, &NormTuple::new(vec![1.0, 1.0, 1.0], 0.0).unwrap());
    }

    #[test]
    fn realize_rejects_bad_input() {
        let nt = NormTuple::unchecked(vec![3.0, 1.0, 1.0], 0.5);
        assert!(matches!(
            realize_tuple(&sp(2.0, 2), &nt),
            Err(Error::InfeasibleTuple(_))
        ));
        let nt = NormTuple::new(vec![1.0, 1.0], 1.0).unwrap();
        assert!(matches!(
            realize_tuple(&sp(2.0, 1), &nt),
            Err(Error::InvalidSpace(_))
        ));
    }

    #[test]
    fn realize_random_feasible_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [1.0, 2.0, f64::INFINITY] {
            for dim in [2, 3] {
                let space = sp(q, dim);
                for _ in 0..1000 {
                    let n = rng.random_range(1..=6);
                    let s: Vec<f64> = (0..n)
                        .map(|_| {
                            if rng.random_bool(0.1) {
                                0.0
                            } else {
                                rng.random_range(0.0..10.0)
                            }
                        })
                        .collect();
                    let Ok((lo, hi)) = feasible_t_range(&s) else {
                        continue;
                    };
                    let t = match rng.random_range(0..5) {
                        0 => lo,
                        1 => hi,
                        _ => rng.random_range(lo..=hi),
                    };
                    check_realization(&space, &NormTuple::new(s, t).unwrap());
                }
            }
        }
    }

    #[test]
    fn single_rotation_is_monotone_in_angle() {
        for q in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
            for (a, b) in [(1.0, 1.0), (3.0, 1.0), (0.5, 2.0)] {
                let mut prev = f64::INFINITY;
                for k in 0..=1000 {
                    let th = std::f64::consts::PI * k as f64 / 1000.0;
                    let u = plane_direction(q, th);
                    let val = lq_norm(q, &[a + b * u[0], b * u[1]]);
                    assert!(val <= prev + 1e-12, "q={q} a={a} b={b} θ={th}");
                    prev = val;
                }
            }
        }
    }
}
