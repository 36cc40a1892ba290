//! Interchangeable inlier counters with operation accounting.

use super::{block2d_parts, inl_brp_counted, inl_circular, mstream_sum, MAX_SCAN};
use crate::error::{Error, Result};
use crate::perm::{Permutation, Shape};
use std::sync::atomic::{AtomicU64, Ordering};

/// Something that can count `(α, β)`-inliers of a fixed permutation.
///
/// Counters are shared across threads, so operation tallies are atomic.
pub trait InlierCounter: Sync {
    fn len(&self) -> u64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn inliers(&self, alpha: u64, beta: u64) -> Result<u64>;

    fn outliers(&self, alpha: u64, beta: u64) -> Result<u64> {
        Ok(alpha - self.inliers(alpha, beta)?)
    }

    /// Permutation evaluations plus recursion steps spent so far.
    fn ops(&self) -> u64;
}

/// Counts by scanning every index below `α`.
#[derive(Debug)]
pub struct ScanCounter<'a> {
    perm: &'a Permutation,
    ops: AtomicU64,
}

impl<'a> ScanCounter<'a> {
    pub fn new(perm: &'a Permutation) -> Self {
        ScanCounter { perm, ops: AtomicU64::new(0) }
    }
}

impl InlierCounter for ScanCounter<'_> {
    fn len(&self) -> u64 {
        self.perm.len()
    }

    fn inliers(&self, alpha: u64, beta: u64) -> Result<u64> {
        let mut ops = 0;
        let r = scan(self.perm, alpha, beta, &mut ops);
        self.ops.fetch_add(ops, Ordering::Relaxed);
        r
    }

    fn ops(&self) -> u64 {
        self.ops.load(Ordering::Relaxed)
    }
}

/// Uses the fastest known rule for the permutation's shape: the logarithmic
/// recursion for bit reversals, closed forms for circular shifts, composition
/// for block and stream interleavers, and scans for everything else.
#[derive(Debug)]
pub struct FastCounter<'a> {
    perm: &'a Permutation,
    ops: AtomicU64,
}

impl<'a> FastCounter<'a> {
    pub fn new(perm: &'a Permutation) -> Self {
        FastCounter { perm, ops: AtomicU64::new(0) }
    }
}

impl InlierCounter for FastCounter<'_> {
    fn len(&self) -> u64 {
        self.perm.len()
    }

    fn inliers(&self, alpha: u64, beta: u64) -> Result<u64> {
        let k = self.perm.len();
        if alpha > k || beta > k {
            return Err(Error::InvalidArgument(format!("bounds ({alpha}, {beta}) exceed {k}")));
        }
        let mut ops = 0;
        let r = fast_inliers(self.perm, alpha, beta, &mut ops);
        self.ops.fetch_add(ops, Ordering::Relaxed);
        r
    }

    fn ops(&self) -> u64 {
        self.ops.load(Ordering::Relaxed)
    }
}

fn scan(perm: &Permutation, alpha: u64, beta: u64, ops: &mut u64) -> Result<u64> {
    if alpha > MAX_SCAN {
        return Err(Error::TooLarge(format!("scan of {alpha} indices")));
    }
    *ops += alpha;
    Ok((0..alpha).filter(|&j| perm.eval(j) < beta).count() as u64)
}

/// Shape dispatch behind [`FastCounter`]; adds the work done to `ops`.
pub fn fast_inliers(perm: &Permutation, alpha: u64, beta: u64, ops: &mut u64) -> Result<u64> {
    if alpha == 0 || beta == 0 {
        return Ok(0);
    }
    let k = perm.len();
    match perm.shape() {
        Shape::BitReversal { n } => inl_brp_counted(n, alpha, beta, ops),
        Shape::Circular { shift } => {
            *ops += 1;
            inl_circular(k, shift, alpha, beta)
        }
        Shape::Flip(inner) => Ok(alpha - fast_inliers(inner, alpha, k - beta, ops)?),
        Shape::Block2d { s1, s2 } => {
            *ops += 2;
            let r = block2d_parts(s1, s2, alpha, beta, &mut |p, a, b| fast_inliers(p, a, b, ops))?;
            Ok(r.total)
        }
        Shape::MStream { streams, order } => {
            mstream_sum(streams, order, alpha, beta, &mut |p, a, b| fast_inliers(p, a, b, ops))
        }
        Shape::Lcs { .. } | Shape::Qpp { .. } | Shape::Table => scan(perm, alpha, beta, ops),
    }
}
