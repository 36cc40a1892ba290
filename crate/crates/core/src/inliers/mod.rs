//! Counting `(α, β)`-inliers: indices `j < α` whose image is `< β`.

mod backend;

pub use backend::{fast_inliers, FastCounter, InlierCounter, ScanCounter};

use crate::arith::{divides, floor_div, Exact, Rational};
use crate::error::{Error, Result};
use crate::perm::{brp, PermSize, Permutation};
use crate::sums::{floor_prod_sum, t_raw, w_rec};

/// Linear scans refuse to touch more indices than this.
pub const MAX_SCAN: u64 = 1 << 26;

/// Inlier sets are only materialized up to this length.
pub const MAX_SET_LEN: u64 = 1 << 16;

fn check_bounds(k: u64, alpha: u64, beta: u64) -> Result<()> {
    if alpha > k || beta > k {
        return Err(Error::InvalidArgument(format!(
            "bounds (α={alpha}, β={beta}) exceed length {k}"
        )));
    }
    Ok(())
}

/// Counts inliers by scanning `j = 0..α`.
pub fn inl_brute(perm: &Permutation, alpha: u64, beta: u64) -> Result<u64> {
    check_bounds(perm.len(), alpha, beta)?;
    if alpha > MAX_SCAN {
        return Err(Error::TooLarge(format!("scan of {alpha} indices")));
    }
    Ok((0..alpha).filter(|&j| perm.eval(j) < beta).count() as u64)
}

/// `α − #INL`, by scanning.
pub fn oul_count(perm: &Permutation, alpha: u64, beta: u64) -> Result<u64> {
    Ok(alpha - inl_brute(perm, alpha, beta)?)
}

/// The inlier indices themselves, for short permutations.
pub fn inlier_set(perm: &Permutation, alpha: u64, beta: u64) -> Result<Vec<u64>> {
    check_bounds(perm.len(), alpha, beta)?;
    if perm.len() > MAX_SET_LEN {
        return Err(Error::TooLarge(format!("inlier set of a length-{} permutation", perm.len())));
    }
    Ok((0..alpha).filter(|&j| perm.eval(j) < beta).collect())
}

/// `4·K_INL` for the bit reversal on `n` bits.
fn k_inl4(n: u32, alpha: u64, beta: u64) -> i128 {
    let mask = (1u64 << n) - 1;
    let (a, b) = (alpha & mask, beta & mask);
    if a == 0 || b == 0 {
        return 0;
    }
    let (pa, pb) = (brp(n, a), brp(n, b));
    if pa == b {
        2
    } else {
        match (pa > b, pb > a) {
            (true, true) => 3,
            (false, false) => -1,
            _ => 1,
        }
    }
}

/// Correction constant of the bit-reversal inlier formula.
pub fn k_inl(k: u64, alpha: u64, beta: u64) -> Result<Rational> {
    let n = PermSize::from_len(k)?.n();
    check_bounds(k, alpha, beta)?;
    Ok(Rational::new(k_inl4(n, alpha, beta), 4))
}

pub(crate) fn inl_brp_counted(n: u32, alpha: u64, beta: u64, ops: &mut u64) -> Result<u64> {
    let k = 1u128 << n;
    if alpha == 0 || beta == 0 {
        return Ok(0);
    }
    *ops += 2;
    let t = t_raw(n, alpha as i128, beta as i128, ops);
    // αβ/k split into quotient and remainder keeps everything inside i128
    let prod = alpha as u128 * beta as u128;
    let (q, r) = ((prod / k) as i128, (prod % k) as i128);
    let kk = k as i128;
    let num = 4 * r + t + kk * k_inl4(n, alpha, beta);
    if num % (4 * kk) != 0 {
        return Err(Error::Verification(format!(
            "inlier numerator {num} not divisible by 4k at n={n}, α={alpha}, β={beta}"
        )));
    }
    let v = q + num / (4 * kk);
    u64::try_from(v).map_err(|_| Error::Verification(format!("negative inlier count {v}")))
}

/// Bit-reversal inliers in `O(log k)` exact integer steps.
pub fn inl_brp(k: u64, alpha: u64, beta: u64) -> Result<u64> {
    let n = PermSize::from_len(k)?.n();
    check_bounds(k, alpha, beta)?;
    inl_brp_counted(n, alpha, beta, &mut 0)
}

/// Circular-shift inliers `j ↦ j + c mod k`, for any `0 ≤ α, β ≤ k`.
pub fn inl_circular(k: u64, c: u64, alpha: u64, beta: u64) -> Result<u64> {
    if c >= k {
        return Err(Error::InvalidArgument(format!("shift {c} ≥ k = {k}")));
    }
    check_bounds(k, alpha, beta)?;
    let (k, c, a, b) = (k as i128, c as i128, alpha as i128, beta as i128);
    Ok((floor_prod_sum(k, a, b - c)? - floor_prod_sum(k, a, -c)?) as u64)
}

/// A rectangle `[α1, α2) × [β1, β2)` of index/image pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedQuery {
    pub alpha1: u64,
    pub alpha2: u64,
    pub beta1: u64,
    pub beta2: u64,
}

impl BoundedQuery {
    pub fn new(k: u64, alpha1: u64, alpha2: u64, beta1: u64, beta2: u64) -> Result<Self> {
        if alpha1 >= alpha2 || beta1 >= beta2 || alpha2 > k || beta2 > k {
            return Err(Error::InvalidArgument(format!(
                "bounded region [{alpha1},{alpha2})×[{beta1},{beta2}) invalid for length {k}"
            )));
        }
        Ok(BoundedQuery { alpha1, alpha2, beta1, beta2 })
    }
}

/// Inliers inside a rectangle, by inclusion–exclusion on four counts.
pub fn inl_bounded(counter: &dyn InlierCounter, q: BoundedQuery) -> Result<u64> {
    let c = |a, b| counter.inliers(a, b);
    Ok((c(q.alpha2, q.beta2)? - c(q.alpha2, q.beta1)?) - (c(q.alpha1, q.beta2)? - c(q.alpha1, q.beta1)?))
}

/// Fraction of all `k` indices that fall inside the rectangle.
pub fn prob_bounded(counter: &dyn InlierCounter, q: BoundedQuery) -> Result<Rational> {
    Ok(Rational::new(inl_bounded(counter, q)? as i128, counter.len() as i128))
}

/// Successive inliers: `#{j : π(j) < α, π(j+1 mod k) < β}`, by scanning.
pub fn sinl_brute(perm: &Permutation, alpha: u64, beta: u64) -> Result<u64> {
    let k = perm.len();
    check_bounds(k, alpha, beta)?;
    if k > MAX_SCAN {
        return Err(Error::TooLarge(format!("successive scan of length {k}")));
    }
    Ok((0..k).filter(|&j| perm.eval(j) < alpha && perm.eval((j + 1) % k) < beta).count() as u64)
}

fn k_sinl4(n: u32, alpha: u64, beta: u64) -> i128 {
    let k = 1i128 << n;
    let p = |x: i128| brp(n, x.rem_euclid(k) as u64) as i128;
    let (a, b) = (alpha as i128, beta as i128);
    let ap = p(p(a) + 1);
    let bp = p(p(b) - 1);
    2 * floor_div(bp - a, k) - divides(bp - a, k) + divides(a + 1, k) + 2 * floor_div(ap - b, k)
        - 2 * floor_div(k / 2 - b, k)
        + divides(k / 2 - b, k)
}

/// Correction constant of the successive-inlier formula.
pub fn k_sinl(k: u64, alpha: u64, beta: u64) -> Result<Rational> {
    let n = PermSize::from_len(k)?.n();
    check_bounds(k, alpha, beta)?;
    Ok(Rational::new(k_sinl4(n, alpha, beta), 4))
}

/// Successive bit-reversal inliers in `O(log k)` exact steps.
pub fn sinl_brp(k: u64, alpha: u64, beta: u64) -> Result<u64> {
    let n = PermSize::from_len(k)?.n();
    check_bounds(k, alpha, beta)?;
    if alpha == 0 || beta == 0 || (2 * alpha <= k && 2 * beta <= k) {
        return Ok(0);
    }
    if alpha == k {
        return Ok(beta);
    }
    if beta == k {
        return Ok(alpha);
    }
    let k4 = k_sinl4(n, alpha, beta);
    if !(-4..=1).contains(&k4) {
        return Err(Error::Verification(format!("successive-inlier constant {k4}/4 out of range")));
    }
    let w = w_rec(k, alpha as i128, beta as i128)?.value;
    let kk = Exact::from(k);
    let num = 4 * kk * (alpha as i128 * beta as i128) + 4 * w + kk * kk * k4;
    let v = num.div_exact((4 * kk * kk).get("successive inliers")?, "successive inliers")?;
    u64::try_from(v).map_err(|_| Error::Verification(format!("negative successive count {v}")))
}

/// Checks `Σ ⌊(j−α)/k⌋⌊(π(j+1)−β)/k⌋ = #INL_{α+1,β} − 1` by scanning the left side.
pub fn inl_successor_identity_check(k: u64, alpha: u64, beta: u64) -> Result<bool> {
    let n = PermSize::from_len(k)?.n();
    if alpha == 0 || beta == 0 || alpha >= k || beta > k {
        return Err(Error::InvalidArgument("need 0 < α < k and 0 < β ≤ k".into()));
    }
    if k > MAX_SCAN {
        return Err(Error::TooLarge(format!("scan of length {k}")));
    }
    let (ki, a, b) = (k as i128, alpha as i128, beta as i128);
    let lhs: i128 = (0..ki)
        .map(|j| floor_div(j - a, ki) * floor_div(brp(n, ((j + 1) % ki) as u64) as i128 - b, ki))
        .sum();
    Ok(lhs == inl_brp(k, alpha + 1, beta)? as i128 - 1)
}

/// Component counts of a block interleaver query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block2dCount {
    pub total: u64,
    /// Full rows times full columns.
    pub grid: u64,
    /// Inliers of the column permutation in the partial row.
    pub column_part: u64,
    /// Inliers of the row permutation in the partial column.
    pub row_part: u64,
    pub corner: bool,
}

pub(crate) fn block2d_parts(
    s1: &Permutation,
    s2: &Permutation,
    alpha: u64,
    beta: u64,
    count: &mut dyn FnMut(&Permutation, u64, u64) -> Result<u64>,
) -> Result<Block2dCount> {
    let (k1, k2) = (s1.len(), s2.len());
    check_bounds(k1 * k2, alpha, beta)?;
    let (a1, a2) = (alpha / k2, alpha % k2);
    let (b1, b2) = (beta / k1, beta % k1);
    let grid = a1 * b1;
    let column_part = count(s2, a2, b1.min(k2))?;
    let row_part = count(s1, a1.min(k1), b2)?;
    let corner = a2 > 0 && b2 > 0 && a1 < k1 && b1 < k2 && s1.eval(a1) < b2 && s2.inverse(b1) < a2;
    Ok(Block2dCount { total: grid + column_part + row_part + corner as u64, grid, column_part, row_part, corner })
}

/// Inliers of the block interleaver built from `s1` (rows) and `s2` (columns).
pub fn inl_block2d(s1: &Permutation, s2: &Permutation, alpha: u64, beta: u64) -> Result<Block2dCount> {
    block2d_parts(s1, s2, alpha, beta, &mut |p, a, b| fast_inliers(p, a, b, &mut 0))
}

/// `⌊(x − 1)/m⌋ + 1` clamped at zero: how many of `x` slots fall in one stream.
fn stream_share(x: u64, offset: u64, m: u64) -> u64 {
    if x <= offset {
        0
    } else {
        (x - offset - 1) / m + 1
    }
}

pub(crate) fn mstream_sum(
    streams: &[Permutation],
    order: &[usize],
    alpha: u64,
    beta: u64,
    count: &mut dyn FnMut(&Permutation, u64, u64) -> Result<u64>,
) -> Result<u64> {
    let m = streams.len() as u64;
    let mut total = 0;
    for (j, &w) in order.iter().enumerate() {
        total += count(&streams[w], stream_share(alpha, j as u64, m), stream_share(beta, w as u64, m))?;
    }
    Ok(total)
}

/// Inliers of the `m`-stream interleaver with stream order `order`.
pub fn inl_mstream(streams: &[Permutation], order: &[usize], alpha: u64, beta: u64) -> Result<u64> {
    let m = streams.len() as u64;
    let len = streams.first().map(|s| s.len() * m).unwrap_or(0);
    check_bounds(len, alpha, beta)?;
    mstream_sum(streams, order, alpha, beta, &mut |p, a, b| fast_inliers(p, a, b, &mut 0))
}

/// Two-stream special case with natural order, via ceilings and floors.
pub fn inl_two_stream(s0: &Permutation, s1: &Permutation, alpha: u64, beta: u64) -> Result<u64> {
    let mut ops = 0;
    Ok(fast_inliers(s0, alpha.div_ceil(2), beta.div_ceil(2), &mut ops)?
        + fast_inliers(s1, alpha / 2, beta / 2, &mut ops)?)
}

/// Worst-case deviations `(c₁, c₂)` with `αβ/k − c₁ ≤ #INL ≤ αβ/k + c₂`,
/// measured over every `(α, β)` for the bit reversal of length `k`.
pub fn sandwich_constants(k: u64) -> Result<(Rational, Rational)> {
    let n = PermSize::from_len(k)?.n();
    if k > 1 << 11 {
        return Err(Error::TooLarge(format!("exhaustive sandwich scan at k = {k}")));
    }
    let kk = k as i128;
    let (mut below, mut above) = (0i128, 0i128);
    for a in 0..=k {
        for b in 0..=k {
            let dev = kk * inl_brp_counted(n, a, b, &mut 0)? as i128 - (a * b) as i128;
            below = below.max(-dev);
            above = above.max(dev);
        }
    }
    Ok((Rational::new(below, kk), Rational::new(above, kk)))
}

/// Shape-aware dispatch for callers that only hold a permutation.
pub fn inliers(perm: &Permutation, alpha: u64, beta: u64) -> Result<u64> {
    check_bounds(perm.len(), alpha, beta)?;
    fast_inliers(perm, alpha, beta, &mut 0)
}
