//! Saw-tooth sum recursions checked against their term-by-term definitions.

use prunedperm::arith::Rational;
use prunedperm::sums::{c_rec, j_rec, q_closed, r_closed, s_rec, sum_oracle, t_envelope, t_extremes, t_rec, SumKind};

fn main() -> prunedperm::Result<()> {
    let k = 1024u64;
    let scale = Rational::from_integer(4 * k as i128);
    for (b, c) in [(3, 5), (-7, 200), (511, 513)] {
        let s = s_rec(k, b, c)?.to_ratio() * scale;
        let t = t_rec(k, b, c)?.to_ratio() * scale;
        let so = sum_oracle(SumKind::S { b, c }, k)?;
        let to = sum_oracle(SumKind::T { b, c }, k)?;
        println!("shifts ({b:>4}, {c:>4}): S = {s} (direct {so}), T = {t} (direct {to})");
    }
    println!("C(64, 1) = {}", c_rec(64, 1)?.value);
    println!("R(1024) = {}", r_closed(k)?.to_ratio());
    println!("Q(1024) = {}", q_closed(k)?.to_ratio());
    println!("Σ j³·π(j) over k = 256: {}", j_rec(256, 3)?);

    println!("\n   k    T min   T max  envelope");
    for n in 2..=10 {
        let k = 1u64 << n;
        let (lo, hi) = t_extremes(k)?;
        let (elo, ehi) = t_envelope(k)?;
        println!("{k:>5} {lo:>7} {hi:>7}  [{elo}, {ehi}]");
    }
    Ok(())
}
