//! Pruning gap against its analytic bounds as `β` varies, as CSV.

use prunedperm::pruning::{gap_bounds, minimal_inliers};
use prunedperm::{FastCounter, Permutation};

fn main() -> prunedperm::Result<()> {
    let (n, alpha) = (9, 200);
    let p = Permutation::brp(n)?;
    let c = FastCounter::new(&p);
    let bounds = gap_bounds(p.len(), alpha)?;
    println!("beta,lower,gap,upper,iterations");
    for beta in (alpha..=p.len()).step_by(8) {
        let t = minimal_inliers(&c, alpha, beta)?;
        println!(
            "{beta},{:.2},{},{:.2},{}",
            bounds.lower(beta),
            t.final_gap,
            bounds.upper(beta),
            t.iterates.len()
        );
    }
    Ok(())
}
