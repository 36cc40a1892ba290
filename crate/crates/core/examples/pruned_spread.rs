//! Minimum spread of a pruned quadratic permutation against its lower bound.

use prunedperm::pruning::{pruned_spread, spread_lower_bound};
use prunedperm::Permutation;

fn main() -> prunedperm::Result<()> {
    let k = 2048;
    let q = Permutation::qpp(k, 63, 128)?;
    let s_min = pruned_spread(&q, k)?;
    println!("{q}: minimum spread {s_min}");
    println!("  g  bound  actual");
    for g in [0, 10, 20, 40, 64, 96, 128] {
        let bound = spread_lower_bound(s_min, 0.076, g, k)?;
        println!("{g:>3} {bound:>6} {:>7}", pruned_spread(&q, k - g)?);
    }
    Ok(())
}
