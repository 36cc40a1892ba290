//! Serial pruning, the minimal-inliers gap solver, the parallel pruned
//! interleaver, gap bounds, convergence diagnostics and pruned spread.

mod io;

pub use io::{addresses_from_le_bytes, addresses_to_csv, addresses_to_le_bytes};

use crate::error::{Error, Result};
use crate::inliers::InlierCounter;
use crate::perm::{PermSize, Permutation};
use crate::sums::t_envelope;
use rayon::prelude::*;
use serde::Serialize;

/// A mother permutation of power-of-two length, a pruning length `β` and a
/// domain size `α ≤ β`.
#[derive(Debug, Clone)]
pub struct PruneRequest {
    pub perm: Permutation,
    pub alpha: u64,
    pub beta: u64,
}

impl PruneRequest {
    pub fn new(perm: Permutation, alpha: u64, beta: u64) -> Result<Self> {
        if perm.size().is_none() {
            return Err(Error::InvalidSize(format!("mother length {} is not a power of two", perm.len())));
        }
        if beta == 0 || beta > perm.len() {
            return Err(Error::InvalidArgument(format!("β = {beta} outside 1..={}", perm.len())));
        }
        if alpha > beta {
            return Err(Error::NoSolution(format!("α = {alpha} exceeds β = {beta}")));
        }
        Ok(PruneRequest { perm, alpha, beta })
    }

    /// Prune to length: `α = β`.
    pub fn to_length(perm: Permutation, beta: u64) -> Result<Self> {
        Self::new(perm, beta, beta)
    }

    pub fn k(&self) -> u64 {
        self.perm.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerialOutput {
    pub addresses: Vec<u64>,
    /// Gap in effect when the last address was emitted.
    pub final_gap: u64,
    /// Permutation evaluations performed.
    pub evaluations: u64,
}

/// Serial pruned interleaving over `w1..=w2`.
///
/// `gap` is the number of outliers skipped before `w1`; any value between
/// the minimal gap of `w1` and the gap in effect at `w1` is accepted, since
/// the scan skips forward past outliers.
pub fn spbri(perm: &Permutation, w1: u64, w2: u64, beta: u64, gap: u64) -> Result<SerialOutput> {
    let k = perm.len();
    if w1 > w2 || w2 >= beta || beta > k {
        return Err(Error::InvalidArgument(format!(
            "need w1 ≤ w2 < β ≤ k, got w1={w1}, w2={w2}, β={beta}, k={k}"
        )));
    }
    let mut out = Vec::with_capacity((w2 - w1 + 1) as usize);
    let mut d = gap;
    let mut evaluations = 0;
    for w in w1..=w2 {
        loop {
            let i = w + d;
            if i >= k {
                return Err(Error::Verification(format!("gap {gap} at w={w1} is inconsistent: ran past k")));
            }
            evaluations += 1;
            let y = perm.eval(i);
            if y < beta {
                out.push(y);
                break;
            }
            d += 1;
        }
    }
    Ok(SerialOutput { addresses: out, final_gap: d, evaluations })
}

/// Fixed-point iterates of the minimal-inliers solver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapTrace {
    pub k: u64,
    pub alpha: u64,
    pub beta: u64,
    /// `Δ(1), Δ(2), …`; the starting value `Δ(0) = 0` is not stored.
    pub iterates: Vec<u64>,
    pub converged: bool,
    pub final_gap: u64,
    /// Counter operations spent on this solve.
    pub ops: u64,
}

impl GapTrace {
    /// The iteration at which the fixed point is first reached.
    pub fn fixed_point_at(&self) -> usize {
        self.iterates.iter().position(|&d| d == self.final_gap).map_or(0, |i| i + 1)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Smallest `Δ` with exactly `α` inliers among the first `α + Δ` indices.
pub fn minimal_inliers(counter: &dyn InlierCounter, alpha: u64, beta: u64) -> Result<GapTrace> {
    let k = counter.len();
    if beta > k {
        return Err(Error::InvalidArgument(format!("β = {beta} exceeds k = {k}")));
    }
    if alpha > beta {
        return Err(Error::NoSolution(format!("α = {alpha} exceeds β = {beta}")));
    }
    let before = counter.ops();
    let mut d = 0u64;
    let mut iterates = Vec::new();
    loop {
        let x = alpha + d;
        if x > k {
            return Err(Error::Verification(format!("gap iterate {d} ran past k = {k}")));
        }
        let next = counter.outliers(x, beta)?;
        if next < d {
            return Err(Error::Verification(format!("gap iterates decreased: {d} → {next}")));
        }
        iterates.push(next);
        if next == d {
            break;
        }
        d = next;
    }
    let end = alpha + d;
    if counter.inliers(end, beta)? != alpha {
        return Err(Error::Verification(format!("fixed point {d} does not hold {alpha} inliers")));
    }
    if alpha > 0 && end < k && counter.inliers(end - 1, beta)? != alpha - 1 {
        return Err(Error::Verification(format!("fixed point {d} is not minimal")));
    }
    Ok(GapTrace { k, alpha, beta, iterates, converged: true, final_gap: d, ops: counter.ops() - before })
}

/// One window of the parallel interleaver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub start: u64,
    pub len: u64,
    pub seed_gap: u64,
    pub final_gap: u64,
    pub seed_ops: u64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelOutput {
    pub addresses: Vec<u64>,
    pub windows: Vec<WindowReport>,
}

impl ParallelOutput {
    /// Longest seed-plus-fill among the windows.
    pub fn critical_path_ops(&self) -> u64 {
        self.windows.iter().map(|w| w.seed_ops + w.evaluations).max().unwrap_or(0)
    }

    /// Work spent on gap seeds, summed over windows.
    pub fn seed_ops(&self) -> u64 {
        self.windows.iter().map(|w| w.seed_ops).sum()
    }
}

/// Window boundaries: `p` windows of `⌊β/p⌋` plus a remainder window.
pub fn windows(p: u64, beta: u64) -> Result<Vec<(u64, u64)>> {
    if p == 0 {
        return Err(Error::InvalidArgument("parallelism must be at least 1".into()));
    }
    if p > beta {
        return Err(Error::InvalidArgument(format!("parallelism {p} exceeds β = {beta}")));
    }
    let q = beta / p;
    let mut w: Vec<_> = (0..p).map(|i| (i * q, q)).collect();
    if !beta.is_multiple_of(p) {
        w.push((p * q, beta % p));
    }
    Ok(w)
}

/// Parallel pruned interleaving of `0..β` with `p` windows.
///
/// Each window start is seeded by the gap solver, then filled serially;
/// both phases run on the rayon pool and the result is deterministic.
pub fn ppbri(perm: &Permutation, p: u64, beta: u64, counter: &dyn InlierCounter) -> Result<ParallelOutput> {
    if beta > perm.len() {
        return Err(Error::InvalidArgument(format!("β = {beta} exceeds k = {}", perm.len())));
    }
    let bounds = windows(p, beta)?;
    let seeds: Vec<GapTrace> =
        bounds.par_iter().map(|&(start, _)| minimal_inliers(counter, start, beta)).collect::<Result<_>>()?;
    let fills: Vec<SerialOutput> = bounds
        .par_iter()
        .zip(seeds.par_iter())
        .map(|(&(start, len), seed)| spbri(perm, start, start + len - 1, beta, seed.final_gap))
        .collect::<Result<_>>()?;
    let mut addresses = Vec::with_capacity(beta as usize);
    let mut reports = Vec::with_capacity(bounds.len());
    for ((&(start, len), seed), fill) in bounds.iter().zip(&seeds).zip(fills) {
        addresses.extend_from_slice(&fill.addresses);
        reports.push(WindowReport {
            start,
            len,
            seed_gap: seed.final_gap,
            final_gap: fill.final_gap,
            seed_ops: seed.ops,
            evaluations: fill.evaluations,
        });
    }
    Ok(ParallelOutput { addresses, windows: reports })
}

/// Fixed-point bounds on the bit-reversal pruning gap for a given `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBounds {
    pub k: u64,
    pub alpha: u64,
    /// Per-iteration additive constants of the lower and upper recursions.
    pub w_lower: f64,
    pub w_upper: f64,
}

impl GapBounds {
    pub fn lower(&self, beta: u64) -> f64 {
        self.at(beta, self.w_lower)
    }

    pub fn upper(&self, beta: u64) -> f64 {
        self.at(beta, self.w_upper)
    }

    fn at(&self, beta: u64, w: f64) -> f64 {
        let s = self.k as f64 / beta as f64;
        self.alpha as f64 * (s - 1.0) + w * s
    }

    pub fn contains(&self, beta: u64, gap: u64) -> bool {
        let g = gap as f64;
        let eps = 1e-9 * (1.0 + g);
        self.lower(beta) - eps <= g && g <= self.upper(beta) + eps
    }
}

/// Gap bounds for the bit reversal of length `k ≥ 4`.
pub fn gap_bounds(k: u64, alpha: u64) -> Result<GapBounds> {
    PermSize::from_len(k)?;
    let (t_min, t_max) = t_envelope(k)?;
    let kf = k as f64;
    Ok(GapBounds {
        k,
        alpha,
        w_lower: -(t_max as f64) / (4.0 * kf) - 0.75,
        w_upper: -(t_min as f64) / (4.0 * kf) + 0.25,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    /// Predicted contraction `1 − β/k`.
    pub mu: f64,
    /// Measured `|Δ(t+1) − Δ*| / |Δ(t) − Δ*|`, skipping terms with an error below 2.
    pub rates: Vec<f64>,
    pub mean_rate: f64,
    pub max_deviation: f64,
}

/// Compares a trace's contraction with `1 − β/k`.
pub fn convergence_check(trace: &GapTrace) -> Result<ConvergenceReport> {
    let mu = 1.0 - trace.beta as f64 / trace.k as f64;
    let mut path = vec![0u64];
    path.extend_from_slice(&trace.iterates);
    if trace.final_gap == 0 {
        return Ok(ConvergenceReport { mu, rates: vec![0.0], mean_rate: 0.0, max_deviation: mu });
    }
    if path.len() < 3 {
        return Err(Error::InvalidArgument(format!("trace of {} iterates is too short", trace.iterates.len())));
    }
    let errs: Vec<u64> = path.iter().map(|&d| trace.final_gap - d).collect();
    let rates: Vec<f64> =
        errs.windows(2).filter(|e| e[0] >= 2 && e[1] >= 2).map(|e| e[1] as f64 / e[0] as f64).collect();
    if rates.is_empty() {
        return Ok(ConvergenceReport { mu, rates, mean_rate: f64::NAN, max_deviation: 0.0 });
    }
    let mean_rate = rates.iter().sum::<f64>() / rates.len() as f64;
    let max_deviation = rates.iter().map(|r| (r - mu).abs()).fold(0.0, f64::max);
    Ok(ConvergenceReport { mu, rates, mean_rate, max_deviation })
}

/// Iteration budget `⌈log k / log(1/μ)⌉` used to sanity-check solver traces.
pub fn iteration_budget(k: u64, beta: u64) -> u64 {
    let mu = 1.0 - beta as f64 / k as f64;
    if mu <= 0.0 {
        return 0;
    }
    ((k as f64).ln() / (1.0 / mu).ln()).ceil() as u64
}

/// Largest length for which pruned spread is enumerated.
pub const MAX_SPREAD_LEN: u64 = 1 << 16;

/// `min |y(i) − y(j)| + |i − j|` over all pairs of a sequence.
pub fn sequence_spread(y: &[u64]) -> Option<u64> {
    let mut best = u64::MAX;
    for i in 0..y.len() {
        let mut d = 1;
        while i + d < y.len() && (d as u64) < best {
            best = best.min(y[i].abs_diff(y[i + d]) + d as u64);
            d += 1;
        }
    }
    (best != u64::MAX).then_some(best)
}

/// Minimum spread of the permutation pruned to length `β`.
pub fn pruned_spread(perm: &Permutation, beta: u64) -> Result<u64> {
    if perm.len() > MAX_SPREAD_LEN {
        return Err(Error::TooLarge(format!("spread of length {}", perm.len())));
    }
    if beta < 2 {
        return Err(Error::InvalidArgument("spread needs β ≥ 2".into()));
    }
    let y = spbri(perm, 0, beta - 1, beta, 0)?.addresses;
    Ok(sequence_spread(&y).expect("β ≥ 2"))
}

/// Lower bound on the spread after pruning `g` of `k` positions, given the
/// mother's minimum spread and sandwich constant `γ`.
pub fn spread_lower_bound(s_min: u64, gamma: f64, g: u64, k: u64) -> Result<u64> {
    let x = gamma + g as f64 / k as f64;
    if gamma.is_nan() || gamma <= 0.0 || x >= 1.0 {
        return Err(Error::InvalidArgument(format!("need γ > 0 and γ + g/k < 1, got {x}")));
    }
    let t = -(1.0 - x).ln() / (1.0 + x).ln();
    Ok((s_min as f64 / (1.0 + x).powf(t)).floor() as u64)
}
