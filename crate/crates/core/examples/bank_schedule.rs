//! Contention-free bank schedule for a pruned bit reversal over 8 banks.

use prunedperm::banking::{contention_check, gap_table, schedule_pruned, Action, BankLayout, BankMode, WritePacking};
use prunedperm::{FastCounter, Permutation};

fn main() -> prunedperm::Result<()> {
    let p = Permutation::brp(5)?;
    let layout = BankLayout::new(4, 8, BankMode::Lsb)?;
    let beta = 22;
    println!("contention: {:?}", contention_check(&p, &layout)?);
    let counter = FastCounter::new(&p);

    println!("\ngap table (row per read bank):");
    for (t, row) in gap_table(&p, beta, &layout, &counter)?.rows.iter().enumerate() {
        println!("  bank {t}: {row:?}");
    }

    let s = schedule_pruned(&p, beta, &layout, WritePacking::Dense, &counter)?;
    println!("\nread steps (· marks a stall):");
    for j in 0..layout.window {
        let cells: Vec<String> = s
            .accesses
            .iter()
            .filter(|a| a.step == j && a.action != Action::Write)
            .map(|a| if a.action == Action::Stall { "  ·".into() } else { format!("{:>3}", a.permuted) })
            .collect();
        println!("  step {j}: {}", cells.join(""));
    }
    println!(
        "\nwrite steps {}, stalls {} {:?}, lockstep read steps {}, per-bank read steps {}",
        s.write_steps,
        s.total_stalls(),
        s.stalls,
        s.lockstep_read_steps,
        s.per_bank_read_steps
    );
    Ok(())
}
