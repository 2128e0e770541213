use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::probes;
use super::{sides, violation_threshold, Direction, Probe, SearchConfig, Witness};
use crate::characterize::{CoefficientTuple, Exponent, Regime};
use crate::envelope::compositions;
use crate::error::Result;
use crate::rng::substream;
use crate::spaces::{lq_norm, NormTuple};

const CHUNK: usize = 256;
const SEARCH_STREAM: u64 = 1 << 20;
const VERIFY_STREAM: u64 = 1 << 40;
const ZOOM: f64 = 10.0;
const MAX_HALF_WIDTH: usize = 10;

/// Result of a falsification attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct FalsifyOutcome {
    /// A realized, re-verified counterexample, if one was found.
    pub witness: Option<Witness>,
    /// Smallest gap among all evaluated norm tuples.
    pub min_gap: f64,
    pub min_gap_probe: Probe,
    pub evaluations: usize,
}

impl FalsifyOutcome {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

struct Tracker<'a> {
    direction: Direction,
    p: Exponent,
    mu: &'a CoefficientTuple,
    cfg: &'a SearchConfig,
    min_gap: f64,
    min_probe: Probe,
    evaluations: usize,
}

impl<'a> Tracker<'a> {
    fn new(
        direction: Direction,
        p: Exponent,
        mu: &'a CoefficientTuple,
        cfg: &'a SearchConfig,
    ) -> Self {
        Self {
            direction,
            p,
            mu,
            cfg,
            min_gap: f64::INFINITY,
            min_probe: Probe::Random,
            evaluations: 0,
        }
    }

    fn remaining(&self) -> usize {
        self.cfg.budget.saturating_sub(self.evaluations)
    }

    fn record(&mut self, probe: Probe, gap: f64) {
        if gap < self.min_gap {
            self.min_gap = gap;
            self.min_probe = probe;
        }
    }

    /// Evaluates one tuple; realizes and re-checks it when it violates.
    fn attempt(&mut self, probe: Probe, nt: &NormTuple) -> Result<Option<Witness>> {
        if self.remaining() == 0 {
            return Ok(None);
        }
        self.evaluations += 1;
        let (lhs, rhs) = sides(self.p, self.mu, nt);
        let gap = oriented(self.direction, lhs, rhs);
        self.record(probe, gap);
        self.realize_if_violating(probe, nt, lhs, rhs, gap)
    }

    fn realize_if_violating(
        &self,
        probe: Probe,
        nt: &NormTuple,
        lhs: f64,
        rhs: f64,
        gap: f64,
    ) -> Result<Option<Witness>> {
        if gap >= violation_threshold(lhs, rhs) {
            return Ok(None);
        }
        let w = Witness::realize(self.cfg.space, probe, self.direction, self.p, self.mu, nt)?;
        Ok(w.is_violation().then_some(w))
    }

    fn finish(self, witness: Option<Witness>) -> FalsifyOutcome {
        FalsifyOutcome {
            witness,
            min_gap: self.min_gap,
            min_gap_probe: self.min_probe,
            evaluations: self.evaluations,
        }
    }
}

fn oriented(direction: Direction, lhs: f64, rhs: f64) -> f64 {
    match direction {
        Direction::F => rhs - lhs,
        Direction::G => lhs - rhs,
    }
}

/// Searches for vectors violating `‖Σxᵢ‖^p ≤ Σ‖xᵢ‖^p/μᵢ`.
///
/// Probes, in order: a summand with negative coefficient on its own; the
/// collinear Hölder-equality configuration (`p > 1`); every single summand;
/// then random and grid search (with optional refinement) over aligned
/// configurations with norms on the simplex.
pub fn falsify_f(p: Exponent, mu: &CoefficientTuple, cfg: &SearchConfig) -> Result<FalsifyOutcome> {
    cfg.validate()?;
    let n = mu.len();
    let mut tr = Tracker::new(Direction::F, p, mu, cfg);

    for (i, _) in mu.values().iter().enumerate().filter(|(_, m)| **m < 0.0) {
        if let Some(w) = tr.attempt(Probe::Basis, &probes::basis(n, i))? {
            return Ok(tr.finish(Some(w)));
        }
    }
    if let Some(nt) = probes::collinear(p, mu) {
        if let Some(w) = tr.attempt(Probe::Collinear, &nt)? {
            return Ok(tr.finish(Some(w)));
        }
    }
    for i in 0..n {
        if let Some(w) = tr.attempt(Probe::Basis, &probes::basis(n, i))? {
            return Ok(tr.finish(Some(w)));
        }
    }
    let w = simplex_search(&mut tr, |s| s.iter().sum())?;
    Ok(tr.finish(w))
}

/// Searches for vectors violating `‖Σxᵢ‖^p ≥ Σ‖xᵢ‖^p/μᵢ`.
///
/// Probes, in order: two cancelling summands with positive coefficients;
/// for a single positive coefficient the Lagrange configuration (`p > 1`) or
/// the lone summand and the pairwise cancellations (`p ≤ 1`); then random
/// and grid search over simplex norms with the smallest feasible `‖Σxᵢ‖`.
pub fn falsify_g(p: Exponent, mu: &CoefficientTuple, cfg: &SearchConfig) -> Result<FalsifyOutcome> {
    cfg.validate()?;
    let n = mu.len();
    let mut tr = Tracker::new(Direction::G, p, mu, cfg);
    let positives: Vec<usize> = (0..n).filter(|&i| mu.values()[i] > 0.0).collect();

    if let [i, j, ..] = positives[..] {
        if let Some(w) = tr.attempt(Probe::Cancellation, &probes::cancellation(n, i, j))? {
            return Ok(tr.finish(Some(w)));
        }
    }
    if let Some(j) = mu.sole_positive() {
        match p.regime() {
            Regime::AboveOne => {
                if let Some(nt) = probes::lagrange(p, mu) {
                    if let Some(w) = tr.attempt(Probe::Lagrange, &nt)? {
                        return Ok(tr.finish(Some(w)));
                    }
                }
            }
            Regime::UpToOne => {
                if let Some(w) = tr.attempt(Probe::Basis, &probes::basis(n, j))? {
                    return Ok(tr.finish(Some(w)));
                }
                for i in (0..n).filter(|&i| i != j) {
                    if let Some(w) =
                        tr.attempt(Probe::Cancellation, &probes::cancellation(n, j, i))?
                    {
                        return Ok(tr.finish(Some(w)));
                    }
                }
            }
        }
    }
    let w = simplex_search(&mut tr, |s| {
        let total: f64 = s.iter().sum();
        let max = s.iter().fold(0.0_f64, |m, &x| m.max(x));
        (2.0 * max - total).max(0.0)
    })?;
    Ok(tr.finish(w))
}

pub fn falsify(
    direction: Direction,
    p: Exponent,
    mu: &CoefficientTuple,
    cfg: &SearchConfig,
) -> Result<FalsifyOutcome> {
    match direction {
        Direction::F => falsify_f(p, mu, cfg),
        Direction::G => falsify_g(p, mu, cfg),
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gap: f64,
    order: usize,
}

impl Candidate {
    const NONE: Candidate = Candidate {
        gap: f64::INFINITY,
        order: usize::MAX,
    };

    fn better(self, other: Candidate) -> Candidate {
        if other.gap < self.gap || (other.gap == self.gap && other.order < self.order) {
            other
        } else {
            self
        }
    }
}

fn random_simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut s: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    if n > 1 && rng.random_range(0..3) == 0 {
        // land on a face: keep a random nonempty subset
        let keep = rng.random_range(0..n);
        for (i, x) in s.iter_mut().enumerate() {
            if i != keep && rng.random_bool(0.5) {
                *x = 0.0;
            }
        }
    }
    let total: f64 = s.iter().sum();
    if total > 0.0 {
        s.iter_mut().for_each(|x| *x /= total);
    } else {
        s[0] = 1.0;
    }
    s
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Random, grid and refined-grid search over norm tuples whose summand
/// norms lie on the simplex, with `t = t_of(s)`.
fn simplex_search(
    tr: &mut Tracker<'_>,
    t_of: impl Fn(&[f64]) -> f64 + Sync,
) -> Result<Option<Witness>> {
    let remaining = tr.remaining();
    if remaining == 0 {
        return Ok(None);
    }
    let n = tr.mu.len();
    let (p, mu, direction) = (tr.p, tr.mu, tr.direction);
    let eval = |s: Vec<f64>| -> (f64, NormTuple) {
        let t = t_of(&s);
        let nt = NormTuple::unchecked(s, t);
        let (lhs, rhs) = sides(p, mu, &nt);
        (oriented(direction, lhs, rhs), nt)
    };

    let random_n = remaining / 2;
    let (grid_n, refine_n) = if tr.cfg.refine && n > 1 {
        (remaining / 4, remaining - random_n - remaining / 4)
    } else {
        (remaining - random_n, 0)
    };

    // random phase: fixed-size chunks, one substream each
    let seed = tr.cfg.seed;
    let chunks = random_n.div_ceil(CHUNK);
    let best_random = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, SEARCH_STREAM + c as u64);
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(random_n);
            (lo..hi).fold(Candidate::NONE, |best, i| {
                let (gap, _) = eval(random_simplex_point(&mut rng, n));
                best.better(Candidate { gap, order: i })
            })
        })
        .reduce(|| Candidate::NONE, Candidate::better);
    tr.evaluations += random_n;
    tr.record(Probe::Random, best_random.gap);

    // grid phase
    let grid_n = grid_n.max(1);
    let mut resolution = 1;
    while n > 1 && binomial(resolution + n, n - 1) <= grid_n {
        resolution += 1;
    }
    let points = compositions(resolution, n, 0);
    let points: Vec<Vec<f64>> = points
        .into_iter()
        .take(grid_n)
        .map(|k| k.iter().map(|&ki| ki as f64 / resolution as f64).collect())
        .collect();
    let grid_count = points.len();
    let mut best_grid = points
        .par_iter()
        .enumerate()
        .map(|(i, s)| Candidate {
            gap: eval(s.clone()).0,
            order: i,
        })
        .reduce(|| Candidate::NONE, Candidate::better);
    tr.evaluations += grid_count;
    let mut best_grid_point = points[best_grid.order.min(grid_count - 1)].clone();

    // refinement: zoom twice around the best grid point
    if refine_n > 0 {
        let mut spacing = 1.0 / resolution as f64;
        let per_round = refine_n / 2;
        let mut half_width = 0;
        while half_width < MAX_HALF_WIDTH && (2 * half_width + 3).pow((n - 1) as u32) <= per_round {
            half_width += 1;
        }
        if half_width > 0 {
            for _ in 0..2 {
                spacing /= ZOOM;
                let local = local_grid(&best_grid_point, spacing, half_width);
                let offset = tr.evaluations;
                let best_local = local
                    .par_iter()
                    .enumerate()
                    .map(|(i, s)| Candidate {
                        gap: eval(s.clone()).0,
                        order: offset + i,
                    })
                    .reduce(|| Candidate::NONE, Candidate::better);
                tr.evaluations += local.len();
                if best_local.gap < best_grid.gap {
                    best_grid_point = local[best_local.order - offset].clone();
                    best_grid = Candidate {
                        gap: best_local.gap,
                        order: best_grid.order,
                    };
                }
            }
        }
    }
    tr.record(Probe::Grid, best_grid.gap);

    // realize the best candidate, preferring the grid on ties
    let (probe, s) = if best_random.gap < best_grid.gap {
        let c = best_random.order / CHUNK;
        let mut rng = substream(seed, SEARCH_STREAM + c as u64);
        let mut s = Vec::new();
        for _ in (c * CHUNK)..=best_random.order {
            s = random_simplex_point(&mut rng, n);
        }
        (Probe::Random, s)
    } else {
        (Probe::Grid, best_grid_point)
    };
    if s.is_empty() {
        return Ok(None);
    }
    let (gap, nt) = eval(s);
    let (lhs, rhs) = sides(p, mu, &nt);
    tr.realize_if_violating(probe, &nt, lhs, rhs, gap)
}

/// Simplex points `center + spacing·k` over integer offsets `k` in the first
/// `n − 1` coordinates with `|kᵢ| ≤ half_width`; the last coordinate closes
/// the sum. Points leaving the simplex are dropped.
fn local_grid(center: &[f64], spacing: f64, half_width: usize) -> Vec<Vec<f64>> {
    let n = center.len();
    let side = 2 * half_width + 1;
    let total = side.pow((n - 1) as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let mut s = Vec::with_capacity(n);
        let mut head = 0.0;
        let mut inside = true;
        for &ci in &center[..n - 1] {
            let k = (c % side) as f64 - half_width as f64;
            c /= side;
            let x = ci + k * spacing;
            if x < 0.0 {
                inside = false;
                break;
            }
            head += x;
            s.push(x);
        }
        if !inside || head > 1.0 {
            continue;
        }
        s.push(1.0 - head);
        out.push(s);
    }
    out
}

/// Minimum gap over random vector configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub min_gap: f64,
    pub samples: usize,
}

/// Evaluates `cfg.budget` random vector tuples in `cfg.space`, cycling
/// through independent, aligned and pairwise-cancelling draws, and returns
/// the smallest gap seen. This is Monte-Carlo evidence only.
pub fn random_verify(
    p: Exponent,
    mu: &CoefficientTuple,
    direction: Direction,
    cfg: &SearchConfig,
) -> Result<VerifyReport> {
    cfg.validate()?;
    let n = mu.len();
    let dim = cfg.space.dim();
    let q = cfg.space.q();
    let pv = p.value();
    let samples = cfg.budget;
    let chunks = samples.div_ceil(CHUNK);

    let min_gap = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(cfg.seed, VERIFY_STREAM + c as u64);
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(samples);
            let mut xs = vec![vec![0.0; dim]; n];
            let mut sum = vec![0.0; dim];
            let mut best = f64::INFINITY;
            for i in lo..hi {
                draw_configuration(&mut rng, i % 3, &mut xs);
                sum.iter_mut().for_each(|x| *x = 0.0);
                let mut rhs = 0.0;
                for (x, m) in xs.iter().zip(mu.values()) {
                    for (a, b) in sum.iter_mut().zip(x) {
                        *a += b;
                    }
                    rhs += lq_norm(q, x).powf(pv) / m;
                }
                let lhs = lq_norm(q, &sum).powf(pv);
                best = best.min(oriented(direction, lhs, rhs));
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);

    Ok(VerifyReport { min_gap, samples })
}

fn fill_uniform(rng: &mut ChaCha8Rng, v: &mut [f64]) {
    v.iter_mut().for_each(|x| *x = rng.random_range(-1.0..=1.0));
}

fn draw_configuration(rng: &mut ChaCha8Rng, mode: usize, xs: &mut [Vec<f64>]) {
    let n = xs.len();
    match mode {
        // aligned: nonnegative multiples of one shared direction
        1 => {
            let dim = xs[0].len();
            let mut d = vec![0.0; dim];
            fill_uniform(rng, &mut d);
            for x in xs.iter_mut() {
                let c = if rng.random_bool(0.3) {
                    0.0
                } else {
                    rng.random::<f64>()
                };
                x.iter_mut().zip(&d).for_each(|(xi, di)| *xi = c * di);
            }
        }
        // cancelling: one exactly opposite pair, the rest small or zero
        2 if n >= 2 => {
            let i = rng.random_range(0..n);
            let j = (i + rng.random_range(1..n)) % n;
            for (k, x) in xs.iter_mut().enumerate() {
                if k == i || k == j {
                    continue;
                }
                if rng.random_bool(0.5) {
                    x.iter_mut().for_each(|xi| *xi = 0.0);
                } else {
                    let eps: f64 = rng.random();
                    fill_uniform(rng, x);
                    x.iter_mut().for_each(|xi| *xi *= eps);
                }
            }
            fill_uniform(rng, &mut xs[i]);
            let v = xs[i].clone();
            xs[j].iter_mut().zip(&v).for_each(|(xj, vi)| *xj = -vi);
        }
        _ => xs.iter_mut().for_each(|x| fill_uniform(rng, x)),
    }
}
