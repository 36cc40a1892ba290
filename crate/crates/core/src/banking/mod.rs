//! Parallel memory banks for a pruned permutation stage: bank addressing,
//! contention checks, per-window gap tables and a step simulator.

use crate::error::{Error, Result};
use crate::inliers::InlierCounter;
use crate::perm::{brp, PermSize, Permutation};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BankMode {
    /// Bank from the high bits: `⌊i/W⌋`.
    Msb,
    /// Bank from the low bits: `i mod M`.
    Lsb,
}

impl std::str::FromStr for BankMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "msb" => Ok(BankMode::Msb),
            "lsb" => Ok(BankMode::Lsb),
            _ => Err(Error::InvalidArgument(format!("unknown bank mode {s:?}"))),
        }
    }
}

/// `M` banks of `W` words each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BankLayout {
    pub window: u64,
    pub banks: u64,
    pub mode: BankMode,
}

impl BankLayout {
    pub fn new(window: u64, banks: u64, mode: BankMode) -> Result<Self> {
        if !window.is_power_of_two() || !banks.is_power_of_two() {
            return Err(Error::InvalidSize(format!("W = {window} and M = {banks} must be powers of two")));
        }
        window
            .checked_mul(banks)
            .ok_or_else(|| Error::InvalidSize("W·M overflows".into()))?;
        Ok(BankLayout { window, banks, mode })
    }

    pub fn len(&self) -> u64 {
        self.window * self.banks
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn fits(&self, perm: &Permutation) -> Result<()> {
        if perm.len() != self.len() {
            return Err(Error::InvalidSize(format!(
                "W·M = {} does not match permutation length {}",
                self.len(),
                perm.len()
            )));
        }
        Ok(())
    }
}

pub fn bank_of(i: u64, layout: &BankLayout) -> u64 {
    debug_assert!(i < layout.len());
    match layout.mode {
        BankMode::Msb => i / layout.window,
        BankMode::Lsb => i % layout.banks,
    }
}

/// Two windows whose images at offset `j` land in the same bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub offset: u64,
    pub window_a: u64,
    pub window_b: u64,
    pub bank: u64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "offset j={} in windows t={} and v={} both hit bank {}",
            self.offset, self.window_a, self.window_b, self.bank
        )
    }
}

/// `None` when every offset's `M` images hit distinct banks.
pub fn contention_check(perm: &Permutation, layout: &BankLayout) -> Result<Option<Violation>> {
    layout.fits(perm)?;
    let mut owner = vec![u64::MAX; layout.banks as usize];
    for j in 0..layout.window {
        owner.fill(u64::MAX);
        for t in 0..layout.banks {
            let b = bank_of(perm.eval(j + t * layout.window), layout);
            let prev = owner[b as usize];
            if prev != u64::MAX {
                return Ok(Some(Violation { offset: j, window_a: prev, window_b: t, bank: b }));
            }
            owner[b as usize] = t;
        }
    }
    Ok(None)
}

/// A contention-free permutation drawn at random for the given layout.
pub fn random_contention_free(layout: &BankLayout, seed: u64) -> Result<Permutation> {
    let (w, m) = (layout.window, layout.banks);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<u64>> = (0..m)
        .map(|_| {
            let mut r: Vec<u64> = (0..w).collect();
            r.shuffle(&mut rng);
            r
        })
        .collect();
    let mut map = vec![0; layout.len() as usize];
    let mut cols: Vec<u64> = (0..m).collect();
    for j in 0..w {
        cols.shuffle(&mut rng);
        for t in 0..m {
            let bank = cols[t as usize];
            let slot = rows[bank as usize][j as usize];
            map[(j + t * w) as usize] = match layout.mode {
                BankMode::Lsb => slot * m + bank,
                BankMode::Msb => bank * w + slot,
            };
        }
    }
    Permutation::table(map)
}

/// `Δ(j, t)`: outliers among mother positions `0..=j + tW`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapTable {
    pub window: u64,
    pub banks: u64,
    /// Row `t` holds `Δ(0, t), …, Δ(W−1, t)`.
    pub rows: Vec<Vec<u64>>,
}

impl GapTable {
    pub fn get(&self, j: u64, t: u64) -> u64 {
        self.rows[t as usize][j as usize]
    }
}

/// Builds the table: row starts come from the counter, rows follow the
/// increment-on-outlier recurrence, and each row's end is checked against
/// the next row's start.
pub fn gap_table(perm: &Permutation, beta: u64, layout: &BankLayout, counter: &dyn InlierCounter) -> Result<GapTable> {
    layout.fits(perm)?;
    if beta == 0 || beta > perm.len() {
        return Err(Error::InvalidArgument(format!("β = {beta} outside 1..={}", perm.len())));
    }
    let w = layout.window;
    let mut rows = Vec::with_capacity(layout.banks as usize);
    for t in 0..layout.banks {
        let start = counter.outliers(t * w + 1, beta)?;
        let mut row = Vec::with_capacity(w as usize);
        row.push(start);
        for j in 1..w {
            let prev = row[j as usize - 1];
            row.push(prev + (perm.eval(j + t * w) >= beta) as u64);
        }
        if t > 0 {
            let prev_end: u64 = *rows.last().and_then(|r: &Vec<u64>| r.last()).expect("non-empty row");
            if prev_end + (perm.eval(t * w) >= beta) as u64 != start {
                return Err(Error::Verification(format!("gap table row {t} does not chain from row {}", t - 1)));
            }
        }
        rows.push(row);
    }
    let total: u64 = *rows.last().and_then(|r| r.last()).expect("non-empty table");
    if total != perm.len() - beta {
        return Err(Error::Verification(format!("gap table ends at {total}, expected {}", perm.len() - beta)));
    }
    Ok(GapTable { window: w, banks: layout.banks, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Read,
    Write,
    Stall,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Read => "read",
            Action::Write => "write",
            Action::Stall => "stall",
        })
    }
}

/// One bank access.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Access {
    pub step: u64,
    pub bank: u64,
    pub action: Action,
    /// Index in the pruned sequence for reads and writes, mother index for stalls.
    pub linear: u64,
    pub permuted: u64,
}

/// How pruned data lands in the write banks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WritePacking {
    /// `β` values packed densely, `M` per step.
    Dense,
    /// Written in the read step, with filler left in pruned slots.
    Filler,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub layout: BankLayout,
    pub beta: u64,
    pub packing: WritePacking,
    pub accesses: Vec<Access>,
    /// Stalls per read bank.
    pub stalls: Vec<u64>,
    /// Read steps with all banks advancing together.
    pub lockstep_read_steps: u64,
    /// Read steps if each bank only spends steps on its inliers.
    pub per_bank_read_steps: u64,
    pub write_steps: u64,
}

impl Schedule {
    pub fn total_stalls(&self) -> u64 {
        self.stalls.iter().sum()
    }

    /// Permuted addresses written, in write order.
    pub fn written(&self) -> Vec<u64> {
        self.accesses.iter().filter(|a| a.action == Action::Write).map(|a| a.permuted).collect()
    }

    /// Versioned CSV trace, one access per row.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("# prunedperm-csv v1\nstep,bank,action,linear,permuted\n");
        for a in &self.accesses {
            s.push_str(&format!("{},{},{},{},{}\n", a.step, a.bank, a.action, a.linear, a.permuted));
        }
        s
    }
}

/// Simulates the pruned permutation stage.
///
/// Read bank `t` walks its window with a counter `j = 0..W`; a pruned slot
/// stalls that bank for the step while the others proceed. Writes of one
/// step must hit distinct banks, otherwise the run fails with
/// [`Error::Contention`].
pub fn schedule_pruned(
    perm: &Permutation,
    beta: u64,
    layout: &BankLayout,
    packing: WritePacking,
    counter: &dyn InlierCounter,
) -> Result<Schedule> {
    if let Some(v) = contention_check(perm, layout)? {
        return Err(Error::Contention { step: v.offset, bank_a: v.window_a, bank_b: v.window_b, target: v.bank });
    }
    let table = gap_table(perm, beta, layout, counter)?;
    let (w, m) = (layout.window, layout.banks);
    let mut accesses = Vec::new();
    let mut stalls = vec![0u64; m as usize];
    let mut pending = Vec::with_capacity(beta as usize);
    let mut busy = vec![0u64; m as usize];
    let mut used = vec![(u64::MAX, 0u64); m as usize];
    for j in 0..w {
        for t in 0..m {
            let i = j + t * w;
            let y = perm.eval(i);
            if y >= beta {
                stalls[t as usize] += 1;
                accesses.push(Access { step: j, bank: t, action: Action::Stall, linear: i, permuted: y });
                continue;
            }
            busy[t as usize] += 1;
            let linear = i - table.get(j, t);
            accesses.push(Access { step: j, bank: t, action: Action::Read, linear, permuted: y });
            let target = bank_of(y, layout);
            let (last_step, last_bank) = used[target as usize];
            if last_step == j {
                return Err(Error::Contention { step: j, bank_a: last_bank, bank_b: t, target });
            }
            used[target as usize] = (j, t);
            match packing {
                WritePacking::Filler => {
                    accesses.push(Access { step: j, bank: target, action: Action::Write, linear, permuted: y })
                }
                WritePacking::Dense => pending.push((y, linear)),
            }
        }
    }
    let write_steps = match packing {
        WritePacking::Filler => w,
        WritePacking::Dense => {
            pending.sort_unstable();
            for (y, linear) in &pending {
                accesses.push(Access { step: w + y / m, bank: y % m, action: Action::Write, linear: *linear, permuted: *y });
            }
            beta.div_ceil(m)
        }
    };
    Ok(Schedule {
        layout: *layout,
        beta,
        packing,
        accesses,
        stalls,
        lockstep_read_steps: w,
        per_bank_read_steps: busy.into_iter().max().unwrap_or(0),
        write_steps,
    })
}

/// Checks `π(j + tW) = M·π_w(j) + π_m(t)` for the bit reversal.
pub fn brp_window_identity(n: u32, m: u32) -> Result<bool> {
    let size = PermSize::new(n)?;
    if m >= n {
        return Err(Error::InvalidArgument(format!("bank bits {m} must be below {n}")));
    }
    let w = n - m;
    let (win, banks) = (1u64 << w, 1u64 << m);
    let ok = (0..size.k()).all(|i| {
        let (j, t) = (i % win, i / win);
        brp(n, i) == banks * brp(w, j) + brp(m, t)
    });
    Ok(ok)
}

#[cfg(test)]
mod tests;
