//! Parallel pruned interleaving: gap-seeded windows, filled independently.

use prunedperm::pruning::{ppbri, spbri};
use prunedperm::{FastCounter, Permutation};

fn main() -> prunedperm::Result<()> {
    let p = Permutation::brp(5)?;
    let out = ppbri(&p, 8, 22, &FastCounter::new(&p))?;
    println!("start len seed  addresses");
    let mut at = 0;
    for w in &out.windows {
        let chunk = &out.addresses[at..at + w.len as usize];
        println!("{:>5} {:>3} {:>4}  {:?}", w.start, w.len, w.seed_gap, chunk);
        at += w.len as usize;
    }

    let p = Permutation::brp(20)?;
    let k = p.len();
    let beta = 3 * k / 4;
    let serial = spbri(&p, 0, beta - 1, beta, 0)?;
    for windows in [4, 64, 1024] {
        let par = ppbri(&p, windows, beta, &FastCounter::new(&p))?;
        assert_eq!(par.addresses, serial.addresses);
        println!(
            "k = 2^20, p = {windows:>4}: critical path {:>7} ops vs serial {} ({:.0}×)",
            par.critical_path_ops(),
            serial.evaluations,
            serial.evaluations as f64 / par.critical_path_ops() as f64
        );
    }
    Ok(())
}
