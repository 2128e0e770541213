//! Agreement harness between the closed-form verdicts and the falsifiers.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::search::{falsify, random_verify};
use super::{Direction, SearchConfig};
use crate::characterize::{decide, CoefficientTuple, Exponent, Regime, SetId, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, substream};

/// Verdicts closer than this to their threshold are not drawn.
pub const BOUNDARY_BAND: f64 = 1e-3;
/// Lower bound on the Monte-Carlo gap accepted for members.
pub const MEMBER_GAP_FLOOR: f64 = -1e-9;

const MAX_REDRAWS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckParams {
    pub trials: usize,
    pub seed: u64,
    pub p_range: (f64, f64),
    pub n_range: (usize, usize),
    /// Falsifier budget and random-verification sample count per check.
    pub search: SearchConfig,
}

impl Default for CrosscheckParams {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            p_range: (1.1, 4.0),
            n_range: (2, 5),
            search: SearchConfig::default(),
        }
    }
}

impl CrosscheckParams {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.p_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidConfig(format!("bad p range [{lo}, {hi}]")));
        }
        Exponent::new(lo)?;
        Exponent::new(hi)?;
        let (a, b) = self.n_range;
        if a == 0 || a > b {
            return Err(Error::InvalidConfig(format!("bad n range [{a}, {b}]")));
        }
        self.search.validate()
    }
}

/// One decided-and-probed coefficient tuple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub set: SetId,
    pub p: f64,
    pub mu: Vec<f64>,
    pub member: bool,
    pub margin: f64,
    pub witness_probe: Option<String>,
    pub falsify_min_gap: f64,
    pub verify_min_gap: Option<f64>,
    pub agree: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SetSummary {
    pub checks: usize,
    pub members: usize,
    pub non_members: usize,
    pub agreements: usize,
    pub disagreements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub trials: usize,
    pub seed: u64,
    pub p_range: (f64, f64),
    pub n_range: (usize, usize),
    pub per_set: BTreeMap<SetId, SetSummary>,
    pub agreements: usize,
    pub disagreements: usize,
    /// Witnesses found, by the probe that produced them.
    pub probe_hits: BTreeMap<String, usize>,
    pub failures: Vec<TrialRecord>,
}

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "crosscheck: {} trials, seed {}, p in [{}, {}], n in [{}, {}]",
            self.trials, self.seed, self.p_range.0, self.p_range.1, self.n_range.0, self.n_range.1
        )?;
        for (set, s) in &self.per_set {
            writeln!(
                f,
                "  {set}: {} checks, {} members, {} non-members, {} agreements, {} disagreements",
                s.checks, s.members, s.non_members, s.agreements, s.disagreements
            )?;
        }
        let hits: Vec<String> = self
            .probe_hits
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        writeln!(
            f,
            "  witness probes: {}",
            if hits.is_empty() {
                "none".into()
            } else {
                hits.join(" ")
            }
        )?;
        for r in &self.failures {
            writeln!(
                f,
                "  DISAGREE trial {} {}: p={} mu={:?} member={} margin={} witness={:?} falsify_min_gap={} verify_min_gap={:?}",
                r.trial, r.set, r.p, r.mu, r.member, r.margin, r.witness_probe, r.falsify_min_gap, r.verify_min_gap
            )?;
        }
        write!(
            f,
            "agreements: {}, disagreements: {}",
            self.agreements, self.disagreements
        )
    }
}

/// Random coefficients aimed at the `F` boundary: usually all positive with
/// the binding quantity spread on both sides of its threshold, occasionally
/// with a negative entry.
pub fn draw_f_coefficients(rng: &mut ChaCha8Rng, p: Exponent, n: usize) -> Vec<f64> {
    let mut mu: Vec<f64> = match p.regime() {
        Regime::AboveOne => {
            // μᵢ^{1/(p−1)} = target·wᵢ with Σwᵢ = 1
            let target = rng.random_range(0.3..1.7);
            let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = w.iter().sum();
            w.iter()
                .map(|wi| (target * wi / total).powf(p.value() - 1.0))
                .collect()
        }
        Regime::UpToOne => {
            let mut mu: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
            if rng.random_bool(0.5) {
                let i = rng.random_range(0..n);
                mu[i] = rng.random_range(1.0..2.0);
            }
            mu
        }
    };
    if rng.random_bool(0.15) {
        let i = rng.random_range(0..n);
        mu[i] = -mu[i];
    }
    mu
}

/// Random coefficients with `negatives` negative entries, aimed at the `G`
/// boundary when exactly one entry is positive.
pub fn draw_g_coefficients(
    rng: &mut ChaCha8Rng,
    p: Exponent,
    n: usize,
    negatives: usize,
) -> Vec<f64> {
    let negatives = negatives.min(n);
    let mut mu = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let (neg_idx, pos_idx) = order.split_at(negatives);
    for &i in neg_idx {
        mu[i] = -rng.random_range(0.05..2.0);
    }
    if let [j] = pos_idx {
        let j = *j;
        let others = neg_idx.iter().map(|&i| mu[i]);
        mu[j] = match p.regime() {
            Regime::AboveOne => {
                let power = 1.0 / (p.value() - 1.0);
                let bound: f64 = 1.0 + others.map(|m: f64| m.abs().powf(power)).sum::<f64>();
                (bound * rng.random_range(0.5..1.5)).powf(p.value() - 1.0)
            }
            Regime::UpToOne => {
                let bound = others.fold(1.0_f64, |a, m| a.max(m.abs()));
                bound * rng.random_range(0.5..1.5)
            }
        };
    } else {
        for &i in pos_idx {
            mu[i] = rng.random_range(0.05..3.0);
        }
    }
    mu
}

fn draw_off_boundary(
    rng: &mut ChaCha8Rng,
    set: SetId,
    p: Exponent,
    n: usize,
) -> Result<CoefficientTuple> {
    for _ in 0..MAX_REDRAWS {
        let raw = match set {
            SetId::G => {
                // favour the single-positive pattern, where a threshold binds
                let k = match rng.random_range(0..5) {
                    0 => n,
                    1 if n >= 2 => rng.random_range(0..=n - 2),
                    _ => n - 1,
                };
                draw_g_coefficients(rng, p, n, k)
            }
            _ => draw_f_coefficients(rng, p, n),
        };
        let Ok(mu) = CoefficientTuple::new(raw) else {
            continue;
        };
        let v = decide(set, p, &mu, DEFAULT_TOL)?;
        if v.margin.abs() > BOUNDARY_BAND {
            return Ok(mu);
        }
    }
    Err(Error::InvalidConfig(
        "could not draw coefficients off the boundary".into(),
    ))
}

fn check_one(
    trial: usize,
    set: SetId,
    p: Exponent,
    mu: &CoefficientTuple,
    cfg: &SearchConfig,
) -> Result<TrialRecord> {
    let direction = Direction::try_from(set)?;
    let verdict = decide(set, p, mu, DEFAULT_TOL)?;
    let outcome = falsify(direction, p, mu, cfg)?;
    let verify_min_gap = if verdict.member {
        Some(random_verify(p, mu, direction, cfg)?.min_gap)
    } else {
        None
    };
    let agree = if verdict.member {
        !outcome.found() && verify_min_gap.is_some_and(|g| g >= MEMBER_GAP_FLOOR)
    } else {
        outcome.found()
    };
    Ok(TrialRecord {
        trial,
        set,
        p: p.value(),
        mu: mu.values().to_vec(),
        member: verdict.member,
        margin: verdict.margin,
        witness_probe: outcome.witness.as_ref().map(|w| w.probe.tag().to_string()),
        falsify_min_gap: outcome.min_gap,
        verify_min_gap,
        agree,
    })
}

fn run_trial(params: &CrosscheckParams, trial: usize) -> Result<Vec<TrialRecord>> {
    let mut rng = substream(params.seed, trial as u64);
    let p = loop {
        let (lo, hi) = params.p_range;
        let raw = if lo == hi {
            lo
        } else {
            rng.random_range(lo..=hi)
        };
        if let Ok(p) = Exponent::new(raw) {
            break p;
        }
    };
    let n = rng.random_range(params.n_range.0..=params.n_range.1);
    let cfg = SearchConfig {
        seed: derive_seed(params.seed, trial as u64),
        ..params.search.clone()
    };
    [SetId::F, SetId::G]
        .into_iter()
        .map(|set| {
            let mu = draw_off_boundary(&mut rng, set, p, n)?;
            check_one(trial, set, p, &mu, &cfg)
        })
        .collect()
}

/// Draws `trials` exponents and coefficient tuples off the decision
/// boundary and checks, for both `F` and `G`, that members survive the
/// falsifier and random verification while non-members yield a witness.
pub fn crosscheck(params: &CrosscheckParams) -> Result<CrosscheckReport> {
    params.validate()?;
    let records: Vec<TrialRecord> = (0..params.trials)
        .into_par_iter()
        .map(|t| run_trial(params, t))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut per_set: BTreeMap<SetId, SetSummary> = BTreeMap::new();
    let mut probe_hits: BTreeMap<String, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    for r in &records {
        let s = per_set.entry(r.set).or_default();
        s.checks += 1;
        if r.member {
            s.members += 1;
        } else {
            s.non_members += 1;
        }
        if r.agree {
            s.agreements += 1;
        } else {
            s.disagreements += 1;
            failures.push(r.clone());
        }
        if let Some(probe) = &r.witness_probe {
            *probe_hits.entry(probe.clone()).or_default() += 1;
        }
    }
    let agreements = per_set.values().map(|s| s.agreements).sum();
    let disagreements = per_set.values().map(|s| s.disagreements).sum();
    Ok(CrosscheckReport {
        trials: params.trials,
        seed: params.seed,
        p_range: params.p_range,
        n_range: params.n_range,
        per_set,
        agreements,
        disagreements,
        probe_hits,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64, p_range: (f64, f64)) -> CrosscheckParams {
        CrosscheckParams {
            trials: 40,
            seed,
            p_range,
            n_range: (1, 4),
            search: SearchConfig {
                budget: 2000,
                ..SearchConfig::default()
            },
        }
    }

    #[test]
    fn zero_trials_is_empty() {
        let r = crosscheck(&CrosscheckParams {
            trials: 0,
            ..CrosscheckParams::default()
        })
        .unwrap();
        assert_eq!(r.agreements + r.disagreements, 0);
        assert!(r.per_set.is_empty() && r.failures.is_empty());
    }

    #[test]
    fn small_runs_agree_in_both_regimes() {
        for range in [(1.1, 4.0), (0.2, 1.0)] {
            let r = crosscheck(&small(42, range)).unwrap();
            assert_eq!(r.disagreements, 0, "{r}");
            assert_eq!(r.agreements, 80);
        }
    }

    #[test]
    fn report_is_deterministic() {
        let a = crosscheck(&small(7, (0.5, 3.0))).unwrap();
        let b = crosscheck(&small(7, (0.5, 3.0))).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_ranges_are_rejected() {
        for p in [
            CrosscheckParams {
                p_range: (3.0, 2.0),
                ..Default::default()
            },
            CrosscheckParams {
                n_range: (0, 2),
                ..Default::default()
            },
        ] {
            assert!(crosscheck(&p).is_err());
        }
    }

    #[test]
    fn coefficient_draws_have_requested_signs() {
        let mut rng = substream(1, 1);
        let p = Exponent::new(2.5).unwrap();
        for k in 0..=4 {
            let mu = draw_g_coefficients(&mut rng, p, 4, k);
            assert_eq!(mu.iter().filter(|m| **m < 0.0).count(), k);
        }
    }
}
