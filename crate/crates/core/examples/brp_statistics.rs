//! Closed-form statistics of the bit reversal beside enumerated values.

use prunedperm::arith::ratio_to_f64;
use prunedperm::stats::{serial_correlation, StatsReport};
use prunedperm::Permutation;

fn main() -> prunedperm::Result<()> {
    let report = StatsReport::build(&Permutation::brp(6)?, 1)?;
    println!("{:<22} {:>14} {:>14}", "statistic", "closed form", "enumerated");
    for (name, pair) in report.rows() {
        let cell = |v: Option<prunedperm::stats::StatValue>| v.map_or("-".to_string(), |x| x.to_string());
        println!("{name:<22} {:>14} {:>14}", cell(pair.closed_form), cell(pair.enumerated));
    }

    println!("\nlag-1 serial correlation approaches −5/7:");
    for n in [4, 8, 12, 16, 20, 30] {
        let s = serial_correlation(1 << n, 1)?;
        println!("  k = 2^{n:<2} θ = {:.8}", ratio_to_f64(&s.theta));
    }
    Ok(())
}
