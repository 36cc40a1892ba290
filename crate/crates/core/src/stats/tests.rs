use super::*;

fn brp(n: u32) -> Permutation {
    Permutation::brp(n).unwrap()
}

#[test]
fn descent_examples() {
    let d = descent_stats(4).unwrap();
    assert_eq!((d.cyclic_descents, d.cyclic_major), (2, 4));
    assert_eq!((d.linear_descents, d.linear_major), (1, 1));
    assert_eq!(descent_stats_enumerate(&brp(2)).unwrap(), d);
    let worked = Permutation::table(vec![3, 1, 7, 2, 5, 8, 6, 4, 0, 9]).unwrap();
    let w = descent_stats_enumerate(&worked).unwrap();
    assert_eq!((w.linear_descents, w.linear_major), (5, 20));
}

#[test]
fn no_double_descents() {
    for n in 1..=10 {
        let p = brp(n);
        let k = p.len();
        for j in 0..k {
            let (a, b, c) = (p.eval(j), p.eval((j + 1) % k), p.eval((j + 2) % k));
            assert!(!(a > b && b > c), "n={n} j={j}");
        }
    }
}

#[test]
fn fixed_point_examples() {
    let f = fixed_point_stats(4).unwrap();
    assert_eq!((f.count, f.sum, f.sum_sq), (2, 3, 9));
    assert_eq!(fixed_point_stats(16).unwrap().count, 4);
}

#[test]
fn excedance_examples() {
    let e = excedance_stats(4).unwrap();
    assert_eq!((e.count, e.sum), (1, 1));
    assert_eq!(excedance_stats(16).unwrap().count, 6);
}

#[test]
fn closed_forms_match_enumeration() {
    for n in 1..=12 {
        let p = brp(n);
        let k = p.len();
        let d = descent_stats(k).unwrap();
        let de = descent_stats_enumerate(&p).unwrap();
        assert_eq!(d, de, "n={n}");
        assert_eq!(d.cyclic_descents, d.linear_descents + 1);
        assert_eq!(d.cyclic_major, d.linear_major + (k as u128 - 1));
        assert_eq!(fixed_point_stats(k).unwrap(), fixed_point_stats_enumerate(&p).unwrap(), "n={n}");
        let e = excedance_stats(k).unwrap();
        assert_eq!(e, excedance_stats_enumerate(&p).unwrap(), "n={n}");
        let f = fixed_point_stats(k).unwrap();
        assert_eq!(f.count + 2 * e.count, k);
        assert_eq!(excedance_floor_sum(&p).unwrap(), e.count as i128);
        let kk = k as i128;
        // descedance positions are the images of excedance positions
        assert_eq!(e.descedance_sum + e.sum + f.sum, kk * (kk - 1) / 2);
        assert_eq!(e.descedance_sum_sq + e.sum_sq + f.sum_sq, (kk - 1) * kk * (2 * kk - 1) / 6);
        assert_eq!(inversions_brp(k).unwrap(), inversions_enumerate(&p).unwrap());
    }
}

#[test]
fn inversion_examples() {
    assert_eq!(inversions_brp(4).unwrap(), 1);
    assert_eq!(inversions_by_pairs(&brp(2)).unwrap(), 1);
    assert_eq!(inversions_brp(16).unwrap(), 44);
    assert_eq!(inversions_circular(8, 5).unwrap(), 15);
    let worked = Permutation::table(vec![3, 1, 7, 2, 5, 8, 6, 4, 0, 9]).unwrap();
    assert_eq!(inversions(&worked).unwrap(), 18);
    assert_eq!(inversions_by_pairs(&worked).unwrap(), 18);
    for seed in 0..20 {
        let p = Permutation::random(200, seed).unwrap();
        assert_eq!(inversions_enumerate(&p).unwrap(), inversions_by_pairs(&p).unwrap());
    }
}

#[test]
fn spread_examples() {
    assert_eq!(spread_min(&brp(3), 2).unwrap(), 3);
    assert_eq!(spread_min(&brp(6), 4).unwrap(), 6);
    let worked = Permutation::table(vec![3, 1, 7, 2, 5, 8, 6, 4, 0, 9]).unwrap();
    assert_eq!(spread_min(&worked, 2).unwrap(), 3);
    for n in 3..=12 {
        for alpha in 2..=8 {
            let p = brp(n);
            assert_eq!(spread_min(&p, alpha).unwrap(), spread_min_enumerate(&p, alpha).unwrap(), "n={n} α={alpha}");
        }
    }
}

#[test]
fn correlation_examples() {
    let s = serial_correlation(4, 1).unwrap();
    assert_eq!(s.theta, Rational::new(-4, 5));
    assert_eq!(s.variance, Rational::new(15, 12));
    let big = serial_correlation(1 << 20, 1).unwrap();
    let theta = crate::arith::ratio_to_f64(&big.theta);
    assert!((theta + 5.0 / 7.0).abs() < 1e-3);
    assert!(serial_correlation(8, 0).is_err());
    assert_eq!(theta_zero(), Rational::from_integer(1));
    for n in 1..=8 {
        let p = brp(n);
        let k = p.len();
        assert_eq!(variance_enumerate(&p).unwrap(), Rational::new((k * k - 1) as i128, 12));
        for lag in 1..k {
            let s = serial_correlation(k, lag).unwrap();
            assert_eq!(s.covariance, covariance_enumerate(&p, lag).unwrap(), "n={n} p={lag}");
            assert!(s.theta >= Rational::from_integer(-1) && s.theta <= Rational::from_integer(1));
        }
    }
}

#[test]
fn report_matches_cli_example() {
    let r = StatsReport::build(&brp(4), 1).unwrap();
    assert!(r.mismatches().is_empty(), "{:?}", r.mismatches());
    assert_eq!(r.num_descents.closed_form, Some(StatValue::Int(8)));
    assert_eq!(r.major_index.closed_form, Some(StatValue::Int(64)));
    assert_eq!(r.num_fixed_points.closed_form, Some(StatValue::Int(4)));
    assert_eq!(r.num_excedances.closed_form, Some(StatValue::Int(6)));
    assert_eq!(r.num_inversions.closed_form, Some(StatValue::Int(44)));
    let csv = r.to_csv();
    assert!(csv.starts_with("# prunedperm-csv v1\n"));
    assert!(csv.contains("16,num_inversions,44,44\n"));
    let json: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(json["num_inversions"]["closed_form"], 44);
    assert_eq!(json["theta"]["closed_form"]["exact"], "-49/68");
}

#[test]
fn report_for_other_permutations_enumerates() {
    let p = Permutation::circular(32, 7).unwrap();
    let r = StatsReport::build(&p, 3).unwrap();
    assert_eq!(r.num_inversions.closed_form, Some(StatValue::Int(7 * 25)));
    assert!(r.mismatches().is_empty());
    assert!(r.major_index.closed_form.is_none());
    assert!(r.major_index.enumerated.is_some());
}
