//! Permutation statistics: closed forms for the bit reversal and
//! enumeration for anything else.

mod report;

pub use report::{StatPair, StatValue, StatsReport};

use crate::arith::{half_root, Exact, Rational};
use crate::error::{Error, Result};
use crate::perm::{PermSize, Permutation, Shape, MAX_ENUMERATION_LEN};
use crate::sums::c_rec;

/// Pairwise inversion counting refuses lengths above this.
pub const MAX_PAIR_SCAN: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescentStats {
    /// Descents with the wrap-around pair `(k−1, 0)` included.
    pub cyclic_descents: u64,
    pub cyclic_major: u128,
    /// Descents at positions `0..=k−2` only.
    pub linear_descents: u64,
    pub linear_major: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPointStats {
    pub count: u64,
    pub sum: i128,
    pub sum_sq: i128,
}

/// Excedances are positions with `π(j) > j`; the descedance sums add up
/// `π(j)` and `π(j)²` over those same positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExcedanceStats {
    pub count: u64,
    pub sum: i128,
    pub sum_sq: i128,
    pub descedance_sum: i128,
    pub descedance_sum_sq: i128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SerialCorrelation {
    pub variance: Rational,
    pub covariance: Rational,
    pub theta: Rational,
}

fn size_of(k: u64) -> Result<PermSize> {
    PermSize::from_len(k)
}

pub fn descent_stats(k: u64) -> Result<DescentStats> {
    size_of(k)?;
    let kk = k as u128;
    Ok(DescentStats {
        cyclic_descents: k / 2,
        cyclic_major: kk * kk / 4,
        linear_descents: k / 2 - 1,
        linear_major: kk * kk / 4 - (kk - 1),
    })
}

pub fn fixed_point_stats(k: u64) -> Result<FixedPointStats> {
    let n = size_of(k)?.n();
    let kk = Exact::from(k);
    let nn = n as i128;
    let r = half_root(n);
    let (sum, sum_sq) = if n % 2 == 0 {
        (
            ((kk - 1) * r).div_exact(2, "F1")?,
            (16 * kk * kk * r + 6 * kk * r * (nn - 4) + 8 * r).div_exact(48, "F2")?,
        )
    } else {
        (
            ((kk - 1) * r).get("F1")?,
            (32 * kk * kk * r + 12 * kk * (nn - 5) * r + 16 * r).div_exact(48, "F2")?,
        )
    };
    Ok(FixedPointStats { count: 1u64 << n.div_ceil(2), sum, sum_sq })
}

pub fn excedance_stats(k: u64) -> Result<ExcedanceStats> {
    let n = size_of(k)?.n();
    let kk = Exact::from(k);
    let nn = n as i128;
    let r = half_root(n);
    let (e1, d1, e2, d2) = if n % 2 == 0 {
        (
            8 * kk * kk - 8 * kk - 12 * r * (kk - 1) + 3 * kk * nn,
            16 * kk * kk - 16 * kk - 12 * r * (kk - 1) - 3 * kk * nn,
            4 * kk * kk * kk - 8 * kk * kk * r + kk * kk * (3 * nn - 4) - 3 * kk * r * (nn - 4)
                - 3 * kk * nn
                - 4 * r,
            12 * kk * kk * kk - 8 * kk * kk * r - kk * kk * (3 * nn + 20) - 3 * kk * r * (nn - 4)
                + kk * (3 * nn + 8)
                - 4 * r,
        )
    } else {
        (
            8 * kk * kk - 4 * kk - 24 * (kk - 1) * r + 3 * kk * (nn - 1),
            16 * kk * kk - 20 * kk - 24 * (kk - 1) * r - 3 * kk * (nn - 1),
            4 * kk * kk * kk - 16 * kk * kk * r + 3 * kk * kk * (nn - 1) - 6 * kk * (nn - 5) * r
                - kk * (3 * nn + 1)
                - 8 * r,
            12 * kk * kk * kk - 16 * kk * kk * r - 3 * kk * kk * (nn + 7) - 6 * kk * (nn - 5) * r
                + 3 * kk * (nn + 3)
                - 8 * r,
        )
    };
    Ok(ExcedanceStats {
        count: (k - (1u64 << n.div_ceil(2))) / 2,
        sum: e1.div_exact(48, "E1")?,
        sum_sq: e2.div_exact(48, "E2")?,
        descedance_sum: d1.div_exact(48, "descedance sum")?,
        descedance_sum_sq: d2.div_exact(48, "descedance square sum")?,
    })
}

/// `−Σ ⌊(j − π(j))/k⌋`, which counts excedances.
pub fn excedance_floor_sum(perm: &Permutation) -> Result<i128> {
    enumerable(perm)?;
    let k = perm.len() as i128;
    Ok(-(0..perm.len())
        .map(|j| (j as i128 - perm.eval(j) as i128).div_euclid(k))
        .sum::<i128>())
}

pub fn inversions_brp(k: u64) -> Result<u128> {
    let n = size_of(k)?.n() as u128;
    let kk = k as u128;
    Ok(kk * kk / 4 - (n + 1) * kk / 4)
}

pub fn inversions_circular(k: u64, c: u64) -> Result<u128> {
    if c >= k {
        return Err(Error::InvalidArgument(format!("shift {c} ≥ k = {k}")));
    }
    Ok(c as u128 * (k - c) as u128)
}

fn enumerable(perm: &Permutation) -> Result<()> {
    if perm.len() > MAX_ENUMERATION_LEN {
        return Err(Error::TooLarge(format!("enumeration over length {}", perm.len())));
    }
    Ok(())
}

/// Inversions: closed forms for bit reversal and circular shifts,
/// a Fenwick-tree count otherwise.
pub fn inversions(perm: &Permutation) -> Result<u128> {
    match perm.shape() {
        Shape::BitReversal { .. } => inversions_brp(perm.len()),
        Shape::Circular { shift } => inversions_circular(perm.len(), shift),
        _ => inversions_enumerate(perm),
    }
}

/// `O(k log k)` inversion count for any permutation.
pub fn inversions_enumerate(perm: &Permutation) -> Result<u128> {
    enumerable(perm)?;
    let k = perm.len() as usize;
    let mut tree = vec![0u32; k + 1];
    let mut inv = 0u128;
    for (seen, j) in (0..perm.len()).enumerate() {
        let y = perm.eval(j) as usize;
        // count earlier values ≤ y
        let mut i = y + 1;
        let mut below = 0u64;
        while i > 0 {
            below += tree[i] as u64;
            i &= i - 1;
        }
        inv += (seen as u64 - below) as u128;
        let mut i = y + 1;
        while i <= k {
            tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }
    Ok(inv)
}

/// Inversions by checking every pair.
pub fn inversions_by_pairs(perm: &Permutation) -> Result<u128> {
    if perm.len() > MAX_PAIR_SCAN {
        return Err(Error::TooLarge(format!("pair scan over length {}", perm.len())));
    }
    let img = perm.image()?;
    let mut inv = 0u128;
    for i in 0..img.len() {
        for j in i + 1..img.len() {
            inv += (img[i] > img[j]) as u128;
        }
    }
    Ok(inv)
}

pub fn descent_stats_enumerate(perm: &Permutation) -> Result<DescentStats> {
    enumerable(perm)?;
    let k = perm.len();
    let mut s = DescentStats { cyclic_descents: 0, cyclic_major: 0, linear_descents: 0, linear_major: 0 };
    for i in 0..k {
        if perm.eval(i) > perm.eval((i + 1) % k) {
            s.cyclic_descents += 1;
            s.cyclic_major += i as u128;
            if i + 1 < k {
                s.linear_descents += 1;
                s.linear_major += i as u128;
            }
        }
    }
    Ok(s)
}

pub fn fixed_point_stats_enumerate(perm: &Permutation) -> Result<FixedPointStats> {
    enumerable(perm)?;
    let mut s = FixedPointStats { count: 0, sum: 0, sum_sq: 0 };
    for j in (0..perm.len()).filter(|&j| perm.eval(j) == j) {
        s.count += 1;
        s.sum += j as i128;
        s.sum_sq += (j as i128) * (j as i128);
    }
    Ok(s)
}

pub fn excedance_stats_enumerate(perm: &Permutation) -> Result<ExcedanceStats> {
    enumerable(perm)?;
    let mut s = ExcedanceStats { count: 0, sum: 0, sum_sq: 0, descedance_sum: 0, descedance_sum_sq: 0 };
    for j in 0..perm.len() {
        let y = perm.eval(j);
        if y > j {
            let (j, y) = (j as i128, y as i128);
            s.count += 1;
            s.sum += j;
            s.sum_sq += j * j;
            s.descedance_sum += y;
            s.descedance_sum_sq += y * y;
        }
    }
    Ok(s)
}

/// Smallest `|π(i) − π(j)| + |i − j|` over pairs closer than `α`.
pub fn spread_min(perm: &Permutation, alpha: u64) -> Result<u64> {
    if alpha < 2 {
        return Err(Error::InvalidArgument("spread needs α ≥ 2".into()));
    }
    if let Shape::BitReversal { .. } = perm.shape() {
        let k = perm.len();
        if k >= 8 {
            return Ok(match alpha {
                2 => k / 4 + 1,
                3 => k / 8 + 2,
                _ => (k / 8 + 2).min(6),
            });
        }
    }
    spread_min_enumerate(perm, alpha)
}

pub fn spread_min_enumerate(perm: &Permutation, alpha: u64) -> Result<u64> {
    enumerable(perm)?;
    let k = perm.len();
    if alpha < 2 || k < 2 {
        return Err(Error::InvalidArgument("spread needs α ≥ 2 and k ≥ 2".into()));
    }
    let mut best = u64::MAX;
    for i in 0..k {
        let yi = perm.eval(i);
        for d in 1..alpha.min(k - i) {
            best = best.min(yi.abs_diff(perm.eval(i + d)) + d);
        }
    }
    Ok(best)
}

/// Variance, lag-`p` covariance and serial correlation of the bit reversal
/// viewed as a sequence of uniform draws.
pub fn serial_correlation(k: u64, p: u64) -> Result<SerialCorrelation> {
    size_of(k)?;
    if p == 0 || p >= k {
        return Err(Error::InvalidArgument(format!("lag {p} must satisfy 1 ≤ p < k")));
    }
    if k > 1 << 40 {
        return Err(Error::Overflow("serial correlation"));
    }
    let kk = k as i128;
    let u = 1i128 << (p.trailing_zeros() + 1);
    let c = c_rec(k, p)?.value;
    // cov = C/k + 1/4 + (k/2)(1 − 3/u)
    let covariance = Rational::new(c, kk) + Rational::new(1, 4) + Rational::new(kk * (u - 3), 2 * u);
    let variance = Rational::new(kk * kk - 1, 12);
    Ok(SerialCorrelation { variance, covariance, theta: covariance / variance })
}

/// The lag-`p` serial correlation is exactly 1 at `p = 0`.
pub fn theta_zero() -> Rational {
    Rational::from_integer(1)
}

/// Covariance of `π(j)` and `π(j + p mod k)` by direct summation.
pub fn covariance_enumerate(perm: &Permutation, p: u64) -> Result<Rational> {
    enumerable(perm)?;
    let k = perm.len();
    let m = k as i128 - 1;
    let s: i128 = (0..k)
        .map(|j| (2 * perm.eval(j) as i128 - m) * (2 * perm.eval((j + p) % k) as i128 - m))
        .sum();
    Ok(Rational::new(s, 4 * k as i128))
}

pub fn variance_enumerate(perm: &Permutation) -> Result<Rational> {
    covariance_enumerate(perm, 0)
}

#[cfg(test)]
mod tests;
