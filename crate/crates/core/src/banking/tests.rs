use super::*;
use crate::inliers::FastCounter;
use crate::pruning::ppbri;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn layout(w: u64, m: u64, mode: BankMode) -> BankLayout {
    BankLayout::new(w, m, mode).unwrap()
}

#[test]
fn bank_addresses() {
    assert_eq!(bank_of(13, &layout(4, 8, BankMode::Msb)), 3);
    assert_eq!(bank_of(13, &layout(4, 8, BankMode::Lsb)), 5);
    assert!(BankLayout::new(3, 8, BankMode::Lsb).is_err());
    assert_eq!("lsb".parse::<BankMode>().unwrap(), BankMode::Lsb);
    assert!("mid".parse::<BankMode>().is_err());
}

#[test]
fn brp_is_contention_free_in_lsb_mode() {
    for n in 1..=14 {
        let p = Permutation::brp(n).unwrap();
        for m in 0..n {
            let l = layout(1 << (n - m), 1 << m, BankMode::Lsb);
            assert_eq!(contention_check(&p, &l).unwrap(), None, "n={n} m={m}");
        }
    }
}

#[test]
fn brp_window_identity_holds() {
    for n in 1..=16 {
        for m in 0..n {
            assert!(brp_window_identity(n, m).unwrap(), "n={n} m={m}");
        }
    }
    assert!(brp_window_identity(4, 4).is_err());
}

#[test]
fn identity_and_random_tables() {
    let id = Permutation::table((0..32).collect()).unwrap();
    assert_eq!(contention_check(&id, &layout(4, 8, BankMode::Msb)).unwrap(), None);
    let violations = (0..50)
        .filter(|&s| {
            let p = Permutation::random(16, s).unwrap();
            contention_check(&p, &layout(4, 4, BankMode::Lsb)).unwrap().is_some()
        })
        .count();
    assert!(violations > 40);
}

#[test]
fn random_cf_generator() {
    for seed in 0..20 {
        for mode in [BankMode::Lsb, BankMode::Msb] {
            let l = layout(8, 4, mode);
            let p = random_contention_free(&l, seed).unwrap();
            assert_eq!(contention_check(&p, &l).unwrap(), None);
        }
    }
}

#[test]
fn gap_table_window_4() {
    let p = Permutation::brp(5).unwrap();
    let l = layout(4, 8, BankMode::Lsb);
    let t = gap_table(&p, 22, &l, &FastCounter::new(&p)).unwrap();
    let expected: Vec<Vec<u64>> = vec![
        vec![0, 0, 0, 1],
        vec![1, 1, 1, 2],
        vec![2, 2, 2, 3],
        vec![3, 4, 4, 5],
        vec![5, 5, 5, 6],
        vec![6, 6, 6, 7],
        vec![7, 7, 7, 8],
        vec![8, 9, 9, 10],
    ];
    assert_eq!(t.rows, expected);
    let full = gap_table(&p, 32, &l, &FastCounter::new(&p)).unwrap();
    assert!(full.rows.iter().flatten().all(|&d| d == 0));
}

#[test]
fn schedule_window_4() {
    let p = Permutation::brp(5).unwrap();
    let l = layout(4, 8, BankMode::Lsb);
    let s = schedule_pruned(&p, 22, &l, WritePacking::Dense, &FastCounter::new(&p)).unwrap();
    assert_eq!(s.write_steps, 3);
    assert_eq!(s.total_stalls(), 10);
    assert_eq!(s.lockstep_read_steps, 4);
    assert_eq!(s.per_bank_read_steps, 3);
    let mut w = s.written();
    w.sort_unstable();
    assert_eq!(w, (0..22).collect::<Vec<_>>());
    let csv = s.to_csv();
    assert!(csv.starts_with("# prunedperm-csv v1\nstep,bank,action,linear,permuted\n0,0,read,0,0\n"));
    assert!(csv.contains(",stall,"));
    let f = schedule_pruned(&p, 22, &l, WritePacking::Filler, &FastCounter::new(&p)).unwrap();
    assert_eq!(f.write_steps, 4);
    let full = schedule_pruned(&p, 32, &l, WritePacking::Dense, &FastCounter::new(&p)).unwrap();
    assert_eq!((full.total_stalls(), full.write_steps), (0, 4));
}

#[test]
fn non_cf_mother_is_rejected() {
    let l = layout(4, 4, BankMode::Lsb);
    let p = (0..)
        .map(|s| Permutation::random(16, s).unwrap())
        .find(|p| contention_check(p, &l).unwrap().is_some())
        .unwrap();
    let c = FastCounter::new(&p);
    assert!(matches!(schedule_pruned(&p, 12, &l, WritePacking::Dense, &c), Err(Error::Contention { .. })));
}

#[test]
fn schedules_match_parallel_output() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..60 {
        let n = rng.gen_range(2..=14);
        let m = rng.gen_range(1..n);
        let p = Permutation::brp(n).unwrap();
        let k = p.len();
        let beta = rng.gen_range(1..=k);
        let l = layout(1 << (n - m), 1 << m, BankMode::Lsb);
        let c = FastCounter::new(&p);
        let s = schedule_pruned(&p, beta, &l, WritePacking::Dense, &c).unwrap();
        assert_eq!(s.total_stalls(), k - beta);
        let mut got = s.written();
        let mut want = ppbri(&p, 1, beta, &c).unwrap().addresses;
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want);
        let reads: Vec<u64> = s.accesses.iter().filter(|a| a.action == Action::Read).map(|a| a.linear).collect();
        let mut sorted = reads.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..beta).collect::<Vec<_>>());
    }
}

#[test]
fn serial_pruning_map_is_contention_free() {
    let p = Permutation::brp(8).unwrap();
    let l = layout(32, 8, BankMode::Msb);
    for beta in [129, 200, 255, 256] {
        let positions: Vec<u64> = (0..256).filter(|&i| p.eval(i) < beta).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        for j in 0..32 {
            let banks: Vec<u64> =
                (0..8).filter_map(|t| positions.get((j + t * 32) as usize)).map(|&i| bank_of(i, &l)).collect();
            let mut uniq = banks.clone();
            uniq.dedup();
            assert_eq!(uniq.len(), banks.len(), "β={beta} j={j}");
        }
    }
}
