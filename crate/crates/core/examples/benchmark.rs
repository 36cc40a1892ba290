//! Operation counts of serial and parallel pruning for every interleaver family.

use prunedperm::bench::{run, to_csv, BenchConfig, Family};

fn main() -> prunedperm::Result<()> {
    let cfg = BenchConfig {
        families: Family::ALL.to_vec(),
        sizes: vec![12, 16],
        parallelism: vec![16],
        ..BenchConfig::default()
    };
    print!("{}", to_csv(&run(&cfg)?));
    Ok(())
}
