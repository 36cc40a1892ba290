//! Serial-versus-parallel pruning benchmarks over the standard 1D, 2D block
//! and 2-stream interleaver families.

use crate::error::{Error, Result};
use crate::inliers::{FastCounter, InlierCounter};
use crate::perm::Permutation;
use crate::pruning::{minimal_inliers, ppbri, spbri};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    Brev1D,
    Lcs1D,
    BrevBrev2D,
    BrevBrevrev2D,
    LcsBrev2D,
    LcsQpp2D,
    BrevBrev2S,
    LcsBrev2S,
    LcsLcs2S,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Brev1D,
        Family::Lcs1D,
        Family::BrevBrev2D,
        Family::BrevBrevrev2D,
        Family::LcsBrev2D,
        Family::LcsQpp2D,
        Family::BrevBrev2S,
        Family::LcsBrev2S,
        Family::LcsLcs2S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Brev1D => "brev1D",
            Family::Lcs1D => "lcs1D",
            Family::BrevBrev2D => "brev-brev2D",
            Family::BrevBrevrev2D => "brev-brevrev2D",
            Family::LcsBrev2D => "lcs-brev2D",
            Family::LcsQpp2D => "lcs-qpp2D",
            Family::BrevBrev2S => "brev-brev2S",
            Family::LcsBrev2S => "lcs-brev2S",
            Family::LcsLcs2S => "lcs-lcs2S",
        }
    }

    /// Smallest total bit count the family can be built with.
    pub fn min_bits(self) -> u32 {
        match self {
            Family::Brev1D | Family::Lcs1D => 2,
            Family::BrevBrev2D | Family::BrevBrevrev2D => 2,
            Family::LcsBrev2D => 8,
            Family::LcsQpp2D => 7,
            Family::BrevBrev2S | Family::LcsBrev2S | Family::LcsLcs2S => 4,
        }
    }

    /// Builds the length-`2^n` member; randomized choices draw from `rng`.
    pub fn build(self, n: u32, rng: &mut impl Rng) -> Result<Permutation> {
        if n < self.min_bits() || n > 40 {
            return Err(Error::InvalidSize(format!("{} needs {} ≤ n ≤ 40, got {n}", self.name(), self.min_bits())));
        }
        let k = 1u64 << n;
        let brp = Permutation::brp;
        let odd_below_half = |rng: &mut dyn rand::RngCore, k1: u64| 2 * rng.gen_range(0..(k1 / 4).max(1)) + 1;
        match self {
            Family::Brev1D => brp(n),
            Family::Lcs1D => Permutation::lcs(k, k / 2 - 1),
            Family::BrevBrev2D => {
                let n2 = n.div_ceil(2);
                Permutation::block2d(brp(n - n2)?, brp(n2)?)
            }
            Family::BrevBrevrev2D => {
                let n2 = n / 2;
                Permutation::block2d(brp(n - n2)?, Permutation::flip(brp(n2)?))
            }
            Family::LcsBrev2D => {
                let k1 = 1u64 << (n - 6);
                Permutation::block2d(Permutation::lcs(k1, odd_below_half(rng, k1))?, brp(6)?)
            }
            Family::LcsQpp2D => {
                let k1 = 1u64 << (n - 5);
                Permutation::block2d(Permutation::lcs(k1, odd_below_half(rng, k1))?, Permutation::qpp(32, 15, 2)?)
            }
            Family::BrevBrev2S => {
                Permutation::mstream(vec![brp(n - 1)?, Permutation::flip(brp(n - 1)?)], vec![0, 1])
            }
            Family::LcsBrev2S => Permutation::mstream(vec![Permutation::lcs(k / 2, k / 4 - 1)?, brp(n - 1)?], vec![0, 1]),
            Family::LcsLcs2S => Permutation::mstream(
                vec![Permutation::lcs(k / 2, k / 4 - 1)?, Permutation::lcs(k / 2, k / 4 + 1)?],
                vec![0, 1],
            ),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown interleaver family {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub families: Vec<Family>,
    pub sizes: Vec<u32>,
    pub parallelism: Vec<u64>,
    pub trials: u32,
    pub seed: u64,
    /// Pruning length as a fraction `num/den` of `k`.
    pub beta_fraction: (u64, u64),
    /// Record wall-clock times; off keeps output byte-for-byte reproducible.
    pub timing: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            families: vec![Family::Brev1D],
            sizes: (10..=16).collect(),
            parallelism: vec![8],
            trials: 1,
            seed: 0,
            beta_fraction: (3, 4),
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: Family,
    pub n: u32,
    pub p: u64,
    pub trial: u32,
    pub k: u64,
    pub beta: u64,
    /// Evaluations of the serial scan over the whole pruned output.
    pub serial_ops: u64,
    /// Longest per-window seed plus fill.
    pub parallel_ops: u64,
    /// Evaluations the serial scan spends reaching the final gap.
    pub gap_serial_ops: u64,
    /// Counter operations the gap solver spends on the same gap.
    pub gap_solver_ops: u64,
    pub verified: bool,
    pub wall_serial_us: Option<u64>,
    pub wall_parallel_us: Option<u64>,
}

impl BenchRow {
    pub fn speedup(&self) -> f64 {
        self.serial_ops as f64 / self.parallel_ops.max(1) as f64
    }

    /// Solver work as a fraction of the serial scan's.
    pub fn gap_ratio(&self) -> f64 {
        self.gap_solver_ops as f64 / self.gap_serial_ops.max(1) as f64
    }
}

fn point_seed(seed: u64, family: Family, n: u32, trial: u32) -> u64 {
    seed ^ ((family as u64) << 56) ^ ((n as u64) << 40) ^ trial as u64
}

/// Runs one benchmark point.
pub fn run_point(family: Family, n: u32, p: u64, trial: u32, cfg: &BenchConfig) -> Result<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed(cfg.seed, family, n, trial));
    let perm = family.build(n, &mut rng)?;
    let k = perm.len();
    let (num, den) = cfg.beta_fraction;
    let beta = ((k as u128 * num as u128) / den as u128) as u64;
    if beta == 0 || beta > k {
        return Err(Error::InvalidArgument(format!("pruning fraction {num}/{den} gives β = {beta}")));
    }
    let t0 = Instant::now();
    let serial = spbri(&perm, 0, beta - 1, beta, 0)?;
    let wall_serial = t0.elapsed();
    let counter = FastCounter::new(&perm);
    let t1 = Instant::now();
    let parallel = ppbri(&perm, p, beta, &counter)?;
    let wall_parallel = t1.elapsed();
    let verified = parallel.addresses == serial.addresses;
    let gap_counter = FastCounter::new(&perm);
    let gap = minimal_inliers(&gap_counter, beta, beta)?;
    let gap_serial_ops = serial.evaluations;
    let verified = verified && gap.final_gap == serial.final_gap;
    let timed = cfg.timing && verified;
    Ok(BenchRow {
        family,
        n,
        p,
        trial,
        k,
        beta,
        serial_ops: serial.evaluations,
        parallel_ops: parallel.critical_path_ops(),
        gap_serial_ops,
        gap_solver_ops: gap_counter.ops(),
        verified,
        wall_serial_us: timed.then_some(wall_serial.as_micros() as u64),
        wall_parallel_us: timed.then_some(wall_parallel.as_micros() as u64),
    })
}

/// Runs every point of the configuration, in canonical order.
pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.parallelism.contains(&0) {
        return Err(Error::InvalidArgument("parallelism must be at least 1".into()));
    }
    let mut points = Vec::new();
    for &f in &cfg.families {
        for &n in &cfg.sizes {
            for &p in &cfg.parallelism {
                for t in 0..cfg.trials {
                    points.push((f, n, p, t));
                }
            }
        }
    }
    points.sort_unstable();
    points.dedup();
    let run_one = |&(f, n, p, t): &(Family, u32, u64, u32)| run_point(f, n, p, t, cfg);
    if cfg.timing {
        points.iter().map(run_one).collect()
    } else {
        points.par_iter().map(run_one).collect()
    }
}

pub const BENCH_CSV_HEADER: &str = "# prunedperm-csv v1\nfamily,n,p,trial,k,beta,serial_ops,parallel_ops,speedup,\
gap_serial_ops,gap_solver_ops,gap_ratio,wall_serial_us,wall_parallel_us,verified\n";

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(BENCH_CSV_HEADER);
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{:.3},{},{},{:.3e},{},{},{}\n",
            r.family,
            r.n,
            r.p,
            r.trial,
            r.k,
            r.beta,
            r.serial_ops,
            r.parallel_ops,
            r.speedup(),
            r.gap_serial_ops,
            r.gap_solver_ops,
            r.gap_ratio(),
            opt(r.wall_serial_us),
            opt(r.wall_parallel_us),
            r.verified
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inliers::{fast_inliers, inl_brute};
    use crate::perm::{validate_perm, Shape};

    #[test]
    fn families_build_valid_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for f in Family::ALL {
            for n in f.min_bits()..=12 {
                let p = f.build(n, &mut rng).unwrap();
                assert_eq!(p.len(), 1 << n);
                assert!(validate_perm(&p).unwrap(), "{f} n={n}");
            }
            assert!(f.build(f.min_bits() - 1, &mut rng).is_err());
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("brev3D".parse::<Family>().is_err());
    }

    #[test]
    fn family_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = Family::LcsQpp2D.build(10, &mut rng).unwrap();
        match p.shape() {
            Shape::Block2d { s1, s2 } => {
                assert_eq!((s1.len(), s2.len()), (32, 32));
                assert_eq!(s2.eval(3), (15 * 3 + 2 * 9) % 32);
            }
            _ => panic!("expected a block interleaver"),
        }
        let s = Family::LcsLcs2S.build(10, &mut rng).unwrap();
        assert!(matches!(s.shape(), Shape::MStream { .. }));
    }

    #[test]
    fn fast_counts_match_scans_for_every_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for f in Family::ALL {
            let p = f.build(f.min_bits().max(9), &mut rng).unwrap();
            let k = p.len();
            for _ in 0..200 {
                let (a, b) = (rng.gen_range(0..=k), rng.gen_range(0..=k));
                assert_eq!(fast_inliers(&p, a, b, &mut 0).unwrap(), inl_brute(&p, a, b).unwrap(), "{f}");
            }
        }
    }

    #[test]
    fn rows_verify_and_are_deterministic() {
        let cfg = BenchConfig {
            families: Family::ALL.to_vec(),
            sizes: vec![10, 12],
            parallelism: vec![4, 16],
            trials: 2,
            seed: 9,
            ..BenchConfig::default()
        };
        let rows = run(&cfg).unwrap();
        assert_eq!(rows.len(), 9 * 2 * 2 * 2);
        assert!(rows.iter().all(|r| r.verified && r.wall_serial_us.is_none()));
        assert_eq!(to_csv(&rows), to_csv(&run(&cfg).unwrap()));
        let names: Vec<_> = rows.iter().map(|r| (r.family, r.n, r.p, r.trial)).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn zero_trials_gives_header_only() {
        let cfg = BenchConfig { trials: 0, ..BenchConfig::default() };
        assert_eq!(to_csv(&run(&cfg).unwrap()), BENCH_CSV_HEADER);
        let bad = BenchConfig { parallelism: vec![0], ..BenchConfig::default() };
        assert!(run(&bad).is_err());
    }

    #[test]
    fn gap_ratio_shrinks_with_size() {
        let cfg = BenchConfig::default();
        let small = run_point(Family::Brev1D, 10, 8, 0, &cfg).unwrap();
        let large = run_point(Family::Brev1D, 18, 8, 0, &cfg).unwrap();
        assert!(large.gap_ratio() < small.gap_ratio());
        assert!(large.speedup() > 1.0);
    }
}
