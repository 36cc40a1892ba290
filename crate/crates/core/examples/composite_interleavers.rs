//! Inlier counts of block and multi-stream interleavers from their parts.

use prunedperm::inliers::{inl_block2d, inl_brute, inl_mstream, inl_two_stream};
use prunedperm::{parse_descriptor, Permutation};

fn main() -> prunedperm::Result<()> {
    let (s1, s2) = (Permutation::brp(20)?, Permutation::brp(12)?);
    let (alpha, beta) = ((1 << 18) - 99, (1u64 << 31) + (1 << 19) + 133);
    let r = inl_block2d(&s1, &s2, alpha, beta)?;
    println!(
        "block 2^20 × 2^12: {} = grid {} + columns {} + rows {} (corner {})",
        r.total, r.grid, r.column_part, r.row_part, r.corner
    );

    let block = parse_descriptor("block2d:s1=[lcs:k=64,h=21],s2=[qpp:k=32,h=15,b=2]")?;
    println!("{block}: ({}, {}) → {}", 1500, 1000, prunedperm::inliers::inliers(&block, 1500, 1000)?);
    println!("  by scan: {}", inl_brute(&block, 1500, 1000)?);

    let streams = vec![Permutation::lcs(512, 127)?, Permutation::brp(9)?];
    let two = Permutation::mstream(streams.clone(), vec![0, 1])?;
    for (a, b) in [(300, 700), (1023, 1)] {
        println!(
            "two streams ({a}, {b}): composed {} paired {} scan {}",
            inl_mstream(&streams, &[0, 1], a, b)?,
            inl_two_stream(&streams[0], &streams[1], a, b)?,
            inl_brute(&two, a, b)?
        );
    }
    Ok(())
}
