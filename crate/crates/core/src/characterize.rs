//! Closed-form membership tests for the coefficient sets.
//!
//! For an exponent `p > 0` and nonzero reals `μ₁, …, μₙ`:
//!
//! * `F(p)`: `‖Σxᵢ‖^p ≤ Σ ‖xᵢ‖^p/μᵢ` for all vectors,
//! * `G(p)`: the reverse inequality for all vectors,
//! * `H(p)`: `‖Σxᵢ‖^p ≤ |Σ ‖xᵢ‖^p/μᵢ|` for all vectors.
//!
//! Membership depends on the regime of `p` (above one, or in `(0, 1]`), on
//! the number `k` of negative coefficients, and on one scalar threshold
//! condition. Each [`Verdict`] reports which clause applied and a signed
//! margin measuring how far the binding condition is from its threshold.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default relative tolerance on margins.
pub const DEFAULT_TOL: f64 = 1e-12;

const P_MAX: f64 = 1e6;
const P_ABOVE_ONE_GAP: f64 = 1e-9;

/// Margin reported by clauses decided by signs alone: no scalar threshold
/// binds, and the tuple is excluded.
const SIGN_EXCLUDED_MARGIN: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `p > 1`
    AboveOne,
    /// `0 < p ≤ 1`
    UpToOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent {
    p: f64,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= P_MAX) || (p > 1.0 && p - 1.0 < P_ABOVE_ONE_GAP) {
            return Err(Error::ExponentOutOfRange(p));
        }
        Ok(Self { p })
    }

    pub fn value(&self) -> f64 {
        self.p
    }

    pub fn regime(&self) -> Regime {
        if self.p > 1.0 {
            Regime::AboveOne
        } else {
            Regime::UpToOne
        }
    }

    /// `1/(p − 1)`, the exponent of the Hölder-type thresholds. Only
    /// meaningful when `p > 1`.
    pub fn holder_power(&self) -> f64 {
        1.0 / (self.p - 1.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

/// Nonzero coefficients `μ₁, …, μₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTuple(Vec<f64>);

impl CoefficientTuple {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        if mu.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFiniteCoefficient);
        }
        if mu.contains(&0.0) {
            return Err(Error::ZeroCoefficient);
        }
        Ok(Self(mu))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|m| -m).collect())
    }

    /// Index of the only positive entry, when exactly one exists.
    pub fn sole_positive(&self) -> Option<usize> {
        let mut pos = self.0.iter().enumerate().filter(|(_, m)| **m > 0.0);
        match (pos.next(), pos.next()) {
            (Some((j, _)), None) => Some(j),
            _ => None,
        }
    }
}

/// Number of negative coefficients.
pub fn count_negatives(mu: &CoefficientTuple) -> usize {
    mu.0.iter().filter(|m| **m < 0.0).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SetId {
    F,
    G,
    H,
}

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetId::F => "F",
            SetId::G => "G",
            SetId::H => "H",
        })
    }
}

impl std::str::FromStr for SetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" | "f" => Ok(SetId::F),
            "G" | "g" => Ok(SetId::G),
            "H" | "h" => Ok(SetId::H),
            other => Err(Error::InvalidArgument(format!(
                "set must be F, G or H (got {other:?})"
            ))),
        }
    }
}

/// The characterization clause a verdict rests on. Serialized as the
/// citation tag used in the verdict JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Clause {
    /// `p > 1`, all positive: `Σ μᵢ^{1/(p−1)} ≤ 1`.
    #[serde(rename = "Thm2.4(i)")]
    FHolderBound,
    /// `p > 1`, some negative entry: excluded.
    #[serde(rename = "Thm2.4(ii)")]
    FNegativeAboveOne,
    /// `p ≤ 1`, all positive: `μᵢ ≤ 1`.
    #[serde(rename = "Thm2.5(i)")]
    FUnitBox,
    /// `p ≤ 1`, some negative entry: excluded.
    #[serde(rename = "Thm2.5(ii)")]
    FNegativeUpToOne,
    /// `p > 1`, two or more positive entries: excluded.
    #[serde(rename = "Thm2.6(i)")]
    GTwoPositiveAboveOne,
    /// `p > 1`, exactly one positive `μⱼ`: `μⱼ^{1/(p−1)} ≥ 1 + Σ|μᵢ|^{1/(p−1)}`.
    #[serde(rename = "Thm2.6(ii)")]
    GSolePositiveAboveOne,
    /// `p > 1`, all negative: always a member.
    #[serde(rename = "Thm2.6(iii)")]
    GAllNegativeAboveOne,
    /// `p ≤ 1`, two or more positive entries: excluded.
    #[serde(rename = "Thm2.7(i)")]
    GTwoPositiveUpToOne,
    /// `p ≤ 1`, exactly one positive `μⱼ`: `μⱼ ≥ max{1, |μᵢ|}`.
    #[serde(rename = "Thm2.7(ii)")]
    GSolePositiveUpToOne,
    /// `p ≤ 1`, all negative: always a member.
    #[serde(rename = "Thm2.7(iii)")]
    GAllNegativeUpToOne,
    /// `p > 1`: one common sign and `Σ|μᵢ|^{1/(p−1)} ≤ 1`.
    #[serde(rename = "Cor2.8(i)")]
    HSameSignAboveOne,
    /// `p ≤ 1`: `(0, 1]ⁿ ∪ [−1, 0)ⁿ`.
    #[serde(rename = "Cor2.8(ii)")]
    HSameSignUpToOne,
}

impl Clause {
    /// Compact tag, e.g. `Thm2.4(i)`.
    pub fn tag(&self) -> &'static str {
        match self {
            Clause::FHolderBound => "Thm2.4(i)",
            Clause::FNegativeAboveOne => "Thm2.4(ii)",
            Clause::FUnitBox => "Thm2.5(i)",
            Clause::FNegativeUpToOne => "Thm2.5(ii)",
            Clause::GTwoPositiveAboveOne => "Thm2.6(i)",
            Clause::GSolePositiveAboveOne => "Thm2.6(ii)",
            Clause::GAllNegativeAboveOne => "Thm2.6(iii)",
            Clause::GTwoPositiveUpToOne => "Thm2.7(i)",
            Clause::GSolePositiveUpToOne => "Thm2.7(ii)",
            Clause::GAllNegativeUpToOne => "Thm2.7(iii)",
            Clause::HSameSignAboveOne => "Cor2.8(i)",
            Clause::HSameSignUpToOne => "Cor2.8(ii)",
        }
    }

    /// Tag with a space after the kind, e.g. `Thm 2.4(i)`.
    pub fn display_tag(&self) -> String {
        let tag = self.tag();
        format!("{} {}", &tag[..3], &tag[3..])
    }
}

/// Outcome of a membership decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    #[serde(rename = "set")]
    pub set_id: SetId,
    pub p: f64,
    pub mu: Vec<f64>,
    pub n: usize,
    pub k_negative: usize,
    pub member: bool,
    pub boundary: bool,
    pub clause: Clause,
    /// Signed distance of the binding condition from its threshold,
    /// positive inside. `+∞` when no condition binds.
    #[serde(with = "margin_serde")]
    pub margin: f64,
}

mod margin_serde {
    use super::*;

    const POS_INF: &str = "+inf";

    pub fn serialize<S: Serializer>(m: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if *m == f64::INFINITY {
            s.serialize_str(POS_INF)
        } else {
            s.serialize_f64(*m)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) if t == POS_INF => Ok(f64::INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!(
                "margin must be a number or {POS_INF:?}, got {t:?}"
            ))),
        }
    }
}

impl Verdict {
    fn new(
        set_id: SetId,
        p: Exponent,
        mu: &CoefficientTuple,
        clause: Clause,
        margin: f64,
        scale: f64,
        tol: f64,
    ) -> Self {
        let band = tol * scale.max(1.0);
        Self {
            set_id,
            p: p.value(),
            mu: mu.values().to_vec(),
            n: mu.len(),
            k_negative: count_negatives(mu),
            member: margin >= -band,
            boundary: margin.is_finite() && margin.abs() <= band,
            clause,
            margin,
        }
    }

    /// One-line human-readable explanation naming the clause and the
    /// quantities it compares.
    pub fn describe(&self) -> String {
        let status = if self.member {
            "member"
        } else {
            "not a member"
        };
        let head = format!(
            "{status} of {}({}) by {}",
            self.set_id,
            self.p,
            self.clause.display_tag()
        );
        let power = if self.p > 1.0 {
            1.0 / (self.p - 1.0)
        } else {
            1.0
        };
        let abs_sum = |skip: Option<usize>| -> f64 {
            self.mu
                .iter()
                .enumerate()
                .filter(|(i, _)| Some(*i) != skip)
                .map(|(_, m)| m.abs().powf(power))
                .sum()
        };
        let cmp = |ok: bool, lt: &'static str, gt: &'static str| if ok { lt } else { gt };
        let detail = match self.clause {
            Clause::FHolderBound | Clause::HSameSignAboveOne
                if self.mu.iter().all(|m| *m > 0.0) || self.mu.iter().all(|m| *m < 0.0) =>
            {
                format!(
                    "Σ |μ|^(1/(p−1)) = {:.6} {} 1",
                    abs_sum(None),
                    cmp(self.member, "≤", ">")
                )
            }
            Clause::FUnitBox | Clause::HSameSignUpToOne
                if self.mu.iter().all(|m| *m > 0.0) || self.mu.iter().all(|m| *m < 0.0) =>
            {
                let max = self.mu.iter().fold(0.0_f64, |a, m| a.max(m.abs()));
                format!("max |μ| = {:.6} {} 1", max, cmp(self.member, "≤", ">"))
            }
            Clause::HSameSignAboveOne | Clause::HSameSignUpToOne => {
                "μ has entries of both signs".to_string()
            }
            Clause::FNegativeAboveOne | Clause::FNegativeUpToOne => {
                format!(
                    "{} negative entr{}",
                    self.k_negative,
                    plural(self.k_negative)
                )
            }
            Clause::GTwoPositiveAboveOne | Clause::GTwoPositiveUpToOne => format!(
                "{} positive entries (at most one allowed)",
                self.n - self.k_negative
            ),
            Clause::GAllNegativeAboveOne | Clause::GAllNegativeUpToOne => {
                "all entries negative, the right-hand side is never positive".to_string()
            }
            Clause::GSolePositiveAboveOne => {
                let j = self.sole_positive_index();
                format!(
                    "μ_{}^(1/(p−1)) = {:.6} {} 1 + Σ_(i≠{}) |μᵢ|^(1/(p−1)) = {:.6}",
                    j + 1,
                    self.mu[j].powf(power),
                    cmp(self.member, "≥", "<"),
                    j + 1,
                    1.0 + abs_sum(Some(j))
                )
            }
            Clause::GSolePositiveUpToOne => {
                let j = self.sole_positive_index();
                let bound = self
                    .mu
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != j)
                    .fold(1.0_f64, |a, (_, m)| a.max(m.abs()));
                format!(
                    "μ_{} = {:.6} {} max{{1, |μᵢ|}} = {:.6}",
                    j + 1,
                    self.mu[j],
                    cmp(self.member, "≥", "<"),
                    bound
                )
            }
            Clause::FHolderBound | Clause::FUnitBox => unreachable!("guarded above"),
        };
        format!("{head}: {detail}")
    }

    fn sole_positive_index(&self) -> usize {
        self.mu.iter().position(|m| *m > 0.0).unwrap_or(0)
    }
}

fn plural(k: usize) -> &'static str {
    if k == 1 {
        "y"
    } else {
        "ies"
    }
}

fn holder_sum(p: Exponent, values: impl Iterator<Item = f64>) -> f64 {
    let power = p.holder_power();
    values.map(|m| m.abs().powf(power)).sum()
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "tol must be finite and >= 0 (got {tol})"
        )))
    }
}

/// Membership of `mu` in `F(p)`.
pub fn decide_f(p: Exponent, mu: &CoefficientTuple, tol: f64) -> Result<Verdict> {
    check_tol(tol)?;
    let any_negative = count_negatives(mu) > 0;
    let v = match (p.regime(), any_negative) {
        (Regime::AboveOne, true) => Verdict::new(
            SetId::F,
            p,
            mu,
            Clause::FNegativeAboveOne,
            SIGN_EXCLUDED_MARGIN,
            1.0,
            tol,
        ),
        (Regime::UpToOne, true) => Verdict::new(
            SetId::F,
            p,
            mu,
            Clause::FNegativeUpToOne,
            SIGN_EXCLUDED_MARGIN,
            1.0,
            tol,
        ),
        (Regime::AboveOne, false) => {
            let sum = holder_sum(p, mu.values().iter().copied());
            Verdict::new(SetId::F, p, mu, Clause::FHolderBound, 1.0 - sum, sum, tol)
        }
        (Regime::UpToOne, false) => {
            let max = mu.values().iter().fold(0.0_f64, |a, &m| a.max(m));
            Verdict::new(SetId::F, p, mu, Clause::FUnitBox, 1.0 - max, max, tol)
        }
    };
    Ok(v)
}

/// Membership of `mu` in `G(p)`.
pub fn decide_g(p: Exponent, mu: &CoefficientTuple, tol: f64) -> Result<Verdict> {
    check_tol(tol)?;
    let n = mu.len();
    let k = count_negatives(mu);
    let above = p.regime() == Regime::AboveOne;
    let v = if k == n {
        let clause = if above {
            Clause::GAllNegativeAboveOne
        } else {
            Clause::GAllNegativeUpToOne
        };
        Verdict::new(SetId::G, p, mu, clause, f64::INFINITY, 1.0, tol)
    } else if let Some(j) = mu.sole_positive() {
        let mj = mu.values()[j];
        let others = mu
            .values()
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != j)
            .map(|(_, m)| *m);
        if above {
            let lhs = mj.powf(p.holder_power());
            let rhs = 1.0 + holder_sum(p, others);
            Verdict::new(
                SetId::G,
                p,
                mu,
                Clause::GSolePositiveAboveOne,
                lhs - rhs,
                lhs.max(rhs),
                tol,
            )
        } else {
            let bound = others.fold(1.0_f64, |a, m| a.max(m.abs()));
            Verdict::new(
                SetId::G,
                p,
                mu,
                Clause::GSolePositiveUpToOne,
                mj - bound,
                mj.max(bound),
                tol,
            )
        }
    } else {
        let clause = if above {
            Clause::GTwoPositiveAboveOne
        } else {
            Clause::GTwoPositiveUpToOne
        };
        Verdict::new(SetId::G, p, mu, clause, SIGN_EXCLUDED_MARGIN, 1.0, tol)
    };
    Ok(v)
}

/// Membership of `mu` in `H(p)`: one common sign, and `|μ|` in `F(p)`.
pub fn decide_h(p: Exponent, mu: &CoefficientTuple, tol: f64) -> Result<Verdict> {
    check_tol(tol)?;
    let same_sign = mu.values().iter().all(|m| *m > 0.0) || mu.values().iter().all(|m| *m < 0.0);
    let (clause, margin, scale) = match p.regime() {
        Regime::AboveOne => {
            let sum = holder_sum(p, mu.values().iter().copied());
            (Clause::HSameSignAboveOne, 1.0 - sum, sum)
        }
        Regime::UpToOne => {
            let max = mu.values().iter().fold(0.0_f64, |a, m| a.max(m.abs()));
            (Clause::HSameSignUpToOne, 1.0 - max, max)
        }
    };
    let (margin, scale) = if same_sign {
        (margin, scale)
    } else {
        (SIGN_EXCLUDED_MARGIN, 1.0)
    };
    Ok(Verdict::new(SetId::H, p, mu, clause, margin, scale, tol))
}

/// Dispatches to [`decide_f`], [`decide_g`] or [`decide_h`].
pub fn decide(set: SetId, p: Exponent, mu: &CoefficientTuple, tol: f64) -> Result<Verdict> {
    match set {
        SetId::F => decide_f(p, mu, tol),
        SetId::G => decide_g(p, mu, tol),
        SetId::H => decide_h(p, mu, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    fn mu(xs: &[f64]) -> CoefficientTuple {
        CoefficientTuple::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn exponent_validation() {
        assert_eq!(ex(2.0).regime(), Regime::AboveOne);
        assert_eq!(ex(1.0).regime(), Regime::UpToOne);
        assert_eq!(ex(0.3).regime(), Regime::UpToOne);
        for bad in [0.0, -1.0, 1.0 + 1e-12, 2e6, f64::NAN, f64::INFINITY] {
            assert!(Exponent::new(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn coefficient_validation() {
        assert_eq!(CoefficientTuple::new(vec![]), Err(Error::EmptyCoefficients));
        assert_eq!(
            CoefficientTuple::new(vec![1.0, 0.0, 1.0]),
            Err(Error::ZeroCoefficient)
        );
        assert_eq!(
            CoefficientTuple::new(vec![f64::NAN]),
            Err(Error::NonFiniteCoefficient)
        );
    }

    #[test]
    fn negatives_are_counted() {
        assert_eq!(count_negatives(&mu(&[0.5, 0.5])), 0);
        assert_eq!(count_negatives(&mu(&[2.0, -1.0])), 1);
        assert_eq!(count_negatives(&mu(&[-1.0, -1.0, -1.0])), 3);
    }

    #[test]
    fn f_examples() {
        let v = decide_f(ex(2.0), &mu(&[0.5, 0.5]), DEFAULT_TOL).unwrap();
        assert!(v.member && v.boundary);
        assert_eq!(v.margin, 0.0);
        assert_eq!(v.clause, Clause::FHolderBound);

        let v = decide_f(ex(2.0), &mu(&[0.6, 0.6]), DEFAULT_TOL).unwrap();
        assert!(!v.member && !v.boundary);
        assert!((v.margin + 0.2).abs() < 1e-15);

        let v = decide_f(ex(0.5), &mu(&[1.0, 1.0, 1.0]), DEFAULT_TOL).unwrap();
        assert!(v.member && v.boundary);
        assert_eq!(v.clause, Clause::FUnitBox);

        let v = decide_f(ex(2.0), &mu(&[2.0, -1.0]), DEFAULT_TOL).unwrap();
        assert!(!v.member);
        assert_eq!(v.clause, Clause::FNegativeAboveOne);
        let v = decide_f(ex(0.4), &mu(&[0.5, -1.0]), DEFAULT_TOL).unwrap();
        assert_eq!(v.clause, Clause::FNegativeUpToOne);
        assert!(!v.member);
    }

    #[test]
    fn g_examples() {
        let v = decide_g(ex(2.0), &mu(&[2.0, -1.0]), DEFAULT_TOL).unwrap();
        assert!(v.member && v.boundary);
        assert_eq!(v.margin, 0.0);
        assert_eq!(v.clause, Clause::GSolePositiveAboveOne);

        let v = decide_g(ex(2.0), &mu(&[1.5, -1.0]), DEFAULT_TOL).unwrap();
        assert!(!v.member);
        assert!((v.margin + 0.5).abs() < 1e-15);

        let v = decide_g(ex(2.0), &mu(&[-1.0, -1.0]), DEFAULT_TOL).unwrap();
        assert!(v.member && !v.boundary);
        assert_eq!(v.margin, f64::INFINITY);
        assert_eq!(v.clause, Clause::GAllNegativeAboveOne);

        let v = decide_g(ex(2.0), &mu(&[1.0, 1.0]), DEFAULT_TOL).unwrap();
        assert!(!v.member);
        assert_eq!(v.clause, Clause::GTwoPositiveAboveOne);

        let v = decide_g(ex(0.5), &mu(&[3.0, -2.0]), DEFAULT_TOL).unwrap();
        assert!(v.member);
        assert_eq!(v.clause, Clause::GSolePositiveUpToOne);
        assert_eq!(v.margin, 1.0);

        // single coefficient: ‖x‖^p ≥ ‖x‖^p/μ iff μ ≥ 1
        assert!(decide_g(ex(3.0), &mu(&[1.5]), DEFAULT_TOL).unwrap().member);
        assert!(!decide_g(ex(3.0), &mu(&[0.5]), DEFAULT_TOL).unwrap().member);
    }

    #[test]
    fn h_examples() {
        assert!(
            decide_h(ex(2.0), &mu(&[0.5, 0.5]), DEFAULT_TOL)
                .unwrap()
                .member
        );
        assert!(
            decide_h(ex(2.0), &mu(&[-0.5, -0.5]), DEFAULT_TOL)
                .unwrap()
                .member
        );
        let v = decide_h(ex(0.5), &mu(&[1.0, -1.0]), DEFAULT_TOL).unwrap();
        assert!(!v.member);
        assert_eq!(v.clause, Clause::HSameSignUpToOne);
        assert!(
            decide_h(ex(0.5), &mu(&[-1.0, -0.2]), DEFAULT_TOL)
                .unwrap()
                .member
        );
        assert!(
            !decide_h(ex(0.5), &mu(&[-1.1, -0.2]), DEFAULT_TOL)
                .unwrap()
                .member
        );
    }

    #[test]
    fn tolerance_is_relative_and_inclusive() {
        let v = decide_f(ex(0.5), &mu(&[1.0 + 5e-13]), DEFAULT_TOL).unwrap();
        assert!(v.member && v.boundary);
        let v = decide_f(ex(0.5), &mu(&[1.0 + 5e-12]), DEFAULT_TOL).unwrap();
        assert!(!v.member);
        assert!(decide_f(ex(2.0), &mu(&[0.5]), -1.0).is_err());
    }

    #[test]
    fn verdict_json_matches_schema() {
        let v = decide_f(ex(2.0), &mu(&[0.5, 0.5]), DEFAULT_TOL).unwrap();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"set":"F","p":2.0,"mu":[0.5,0.5],"n":2,"k_negative":0,"member":true,"boundary":true,"clause":"Thm2.4(i)","margin":0.0}"#
        );
        let v = decide_g(ex(2.0), &mu(&[-1.0, -1.0]), DEFAULT_TOL).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert!(json.contains(r#""margin":"+inf""#), "{json}");
        assert_eq!(serde_json::from_str::<Verdict>(&json).unwrap(), v);
    }

    #[test]
    fn descriptions_name_clause() {
        let v = decide_f(ex(2.0), &mu(&[0.5, 0.5]), DEFAULT_TOL).unwrap();
        assert_eq!(
            v.describe(),
            "member of F(2) by Thm 2.4(i): Σ |μ|^(1/(p−1)) = 1.000000 ≤ 1"
        );
        let v = decide_g(ex(2.0), &mu(&[1.5, -1.0]), DEFAULT_TOL).unwrap();
        assert!(v
            .describe()
            .starts_with("not a member of G(2) by Thm 2.6(ii)"));
    }

    fn exponent_strategy() -> impl Strategy<Value = f64> {
        prop_oneof![0.05f64..=1.0, 1.01f64..8.0]
    }

    fn mu_strategy() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(prop_oneof![0.01f64..3.0, -3.0f64..-0.01], 1..=6)
    }

    proptest! {
        #[test]
        fn decomposition_consistency(p in exponent_strategy(), m in mu_strategy()) {
            let (p, m) = (ex(p), mu(&m));
            let k = count_negatives(&m);
            if decide_f(p, &m, DEFAULT_TOL).unwrap().member {
                prop_assert_eq!(k, 0);
            }
            if decide_g(p, &m, DEFAULT_TOL).unwrap().member {
                prop_assert!(k + 1 >= m.len());
            }
        }

        #[test]
        fn h_is_union_of_f_and_reverse(p in exponent_strategy(), m in mu_strategy()) {
            let (p, m) = (ex(p), mu(&m));
            let neg = m.negated();
            let h = decide_h(p, &m, DEFAULT_TOL).unwrap();
            prop_assume!(!h.boundary);
            let f = decide_f(p, &m, DEFAULT_TOL).unwrap().member;
            let f_neg = decide_f(p, &neg, DEFAULT_TOL).unwrap().member;
            let g = decide_g(p, &m, DEFAULT_TOL).unwrap().member;
            let g_neg = decide_g(p, &neg, DEFAULT_TOL).unwrap().member;
            prop_assert_eq!(h.member, (f && g_neg) || (f_neg && g));
        }

        #[test]
        fn shrinking_a_positive_entry_keeps_f_membership(
            p in 1.01f64..8.0,
            m in proptest::collection::vec(0.001f64..1.0, 1..=6),
            idx in 0usize..6,
            factor in 0.01f64..1.0,
        ) {
            let p = ex(p);
            let v = decide_f(p, &mu(&m), DEFAULT_TOL).unwrap();
            prop_assume!(v.member);
            let mut smaller = m.clone();
            let i = idx % m.len();
            smaller[i] *= factor;
            prop_assert!(decide_f(p, &mu(&smaller), DEFAULT_TOL).unwrap().member);
        }

        #[test]
        fn membership_matches_margin_sign(p in exponent_strategy(), m in mu_strategy()) {
            let (p, m) = (ex(p), mu(&m));
            for set in [SetId::F, SetId::G, SetId::H] {
                let v = decide(set, p, &m, 0.0).unwrap();
                prop_assert_eq!(v.member, v.margin >= 0.0);
            }
        }

        #[test]
        fn verdict_json_round_trips(p in exponent_strategy(), m in mu_strategy()) {
            let (p, m) = (ex(p), mu(&m));
            for set in [SetId::F, SetId::G, SetId::H] {
                let v = decide(set, p, &m, DEFAULT_TOL).unwrap();
                let back: Verdict = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
                prop_assert_eq!(back, v);
            }
        }
    }

    /// Two-summand specialization: for n = 2 and p ≥ 1 the characterization
    /// reduces to the familiar conditions `μ^{1/(p−1)} + ν^{1/(p−1)} ≤ 1`
    /// (both positive) and, for the reverse, one positive coefficient
    /// dominating the other.
    #[test]
    fn two_summand_specialization() {
        // ‖x + y‖² ≤ ‖x‖²/μ + ‖y‖²/ν  ⇔  μ + ν ≤ 1 for positive μ, ν
        for (a, b, member) in [(0.3, 0.7, true), (0.3, 0.71, false), (0.9, 0.05, true)] {
            assert_eq!(
                decide_f(ex(2.0), &mu(&[a, b]), DEFAULT_TOL).unwrap().member,
                member
            );
        }
        // reverse at p = 2: μ > 0 > ν with μ ≥ 1 + |ν|
        for (a, b, member) in [(3.0, -2.0, true), (2.9, -2.0, false), (1.0, -1e-3, false)] {
            assert_eq!(
                decide_g(ex(2.0), &mu(&[a, b]), DEFAULT_TOL).unwrap().member,
                member
            );
        }
        // p = 1: classical triangle inequality region
        assert!(
            decide_f(ex(1.0), &mu(&[1.0, 1.0]), DEFAULT_TOL)
                .unwrap()
                .member
        );
        assert!(
            decide_g(ex(1.0), &mu(&[1.0, -1.0]), DEFAULT_TOL)
                .unwrap()
                .member
        );
    }
}
