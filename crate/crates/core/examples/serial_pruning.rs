//! Serial pruning and the minimal-inliers gap solver with its convergence.

use prunedperm::pruning::{convergence_check, minimal_inliers, spbri};
use prunedperm::{FastCounter, Permutation};

fn main() -> prunedperm::Result<()> {
    let p = Permutation::brp(5)?;
    let out = spbri(&p, 0, 21, 22, 0)?;
    println!("π_5 pruned to 22: {:?}", out.addresses);
    println!("  final gap {}, {} evaluations", out.final_gap, out.evaluations);

    let big = Permutation::brp(32)?;
    let counter = FastCounter::new(&big);
    let trace = minimal_inliers(&counter, 1 << 12, (1 << 31) + 10)?;
    println!("\nk = 2^32, α = 2^12, β = 2^31 + 10");
    println!("  iterates {:?}", trace.iterates);
    println!("  gap {} reached at t = {} using {} counter ops", trace.final_gap, trace.fixed_point_at(), trace.ops);

    let p = Permutation::brp(9)?;
    let c = FastCounter::new(&p);
    let r = convergence_check(&minimal_inliers(&c, 200, 300)?)?;
    println!("\nk = 512, α = 200, β = 300: rates {:.3?}", r.rates);
    println!("  mean {:.3} vs predicted {:.3}", r.mean_rate, r.mu);
    Ok(())
}
