//! Counting inliers of the bit reversal in logarithmic time, next to a scan.

use prunedperm::inliers::{inl_brp, inl_brute, inl_circular, inlier_set, k_inl, sandwich_constants};
use prunedperm::sums::t_rec;
use prunedperm::Permutation;
use std::time::Instant;

fn main() -> prunedperm::Result<()> {
    let k = 1u64 << 32;
    let (alpha, beta) = ((1 << 16) - 1, (1 << 16) + 1);
    let start = Instant::now();
    let count = inl_brp(k, alpha, beta)?;
    println!("k = 2^32, α = {alpha}, β = {beta}: {count} inliers in {:?}", start.elapsed());
    println!("  T = {}, K = {}", t_rec(k, alpha as i128, beta as i128)?.value, k_inl(k, alpha, beta)?);

    let p = Permutation::brp(10)?;
    for (a, b) in [(100, 700), (513, 257), (1000, 1000)] {
        println!("k = 1024, ({a}, {b}): fast {} scan {}", inl_brp(1024, a, b)?, inl_brute(&p, a, b)?);
    }

    let small = Permutation::brp(4)?;
    println!("inliers of π_4 for (10, 9): {:?}", inlier_set(&small, 10, 9)?);
    println!("circular k=32, c=7, (15, 19): {}", inl_circular(32, 7, 15, 19)?);

    let (c1, c2) = sandwich_constants(256)?;
    println!("k = 256: αβ/k − {c1} ≤ INL ≤ αβ/k + {c2}");
    Ok(())
}
