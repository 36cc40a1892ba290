//! Exact saw-tooth and floor sums over the bit-reversal permutation.
//!
//! Recursions return a [`ScaledSum`]: the integer value of the sum multiplied
//! by its natural scale (`4k` for R, S, T; `k²` for C, V, W). Callers descale
//! with [`ScaledSum::descale`], which refuses to round.

mod oracle;

pub use oracle::{sum_oracle, SumKind, ORACLE_MAX_LEN};

use crate::arith::{divides, floor_div, half_root, saw2, Exact, Rational};
use crate::error::{Error, Result};
use crate::perm::brp;
use num_traits::{CheckedAdd, CheckedMul};
use serde::Serialize;

/// An exact sum stored as `value / scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScaledSum {
    pub value: i128,
    pub scale: i128,
}

impl ScaledSum {
    pub fn new(value: i128, scale: i128) -> Self {
        ScaledSum { value, scale }
    }

    pub fn to_ratio(self) -> Rational {
        Rational::new(self.value, self.scale)
    }

    /// `value / scale`, failing unless the division is exact.
    pub fn descale(self) -> Result<i128> {
        Exact::new(self.value).div_exact(self.scale, "descale")
    }
}

/// Bit count of `k`, accepting `k = 1`.
pub(crate) fn bits(k: u64) -> Result<u32> {
    if k == 0 || !k.is_power_of_two() {
        return Err(Error::InvalidSize(format!("{k} is not a power of two")));
    }
    Ok(k.trailing_zeros())
}

/// `2·den·((num/den))`.
pub fn saw(num: i128, den: i128) -> Result<i128> {
    if den <= 0 {
        return Err(Error::InvalidArgument(format!("saw denominator {den} must be positive")));
    }
    Ok(saw2(num, den))
}

/// `Σ_{j<k} ⌊(j−p)/k⌋·⌊(j−q)/k⌋` in closed form, for any integers `p`, `q`.
pub fn floor_prod_sum(k: i128, p: i128, q: i128) -> Result<i128> {
    if k < 1 {
        return Err(Error::InvalidArgument("floor_prod_sum needs k ≥ 1".into()));
    }
    let (pf, pm) = (floor_div(p, k), p.rem_euclid(k));
    let (qf, qm) = (floor_div(q, k), q.rem_euclid(k));
    (Exact::new(pm.min(qm)) + Exact::new(pf) * qf * k + Exact::new(pf) * qm + Exact::new(qf) * pm)
        .get("floor_prod_sum")
}

/// `Σ_{j<k} j^m·π(j)` in closed form for `m ∈ {0, 1, 2}`.
pub fn j_closed(k: u64, m: u32) -> Result<i128> {
    let n = bits(k)? as i128;
    let k = Exact::from(k);
    match m {
        0 => (k * (k - 1)).div_exact(2, "J_0"),
        1 => (2 * k * k * k + (n - 4) * k * k + 2 * k).div_exact(8, "J_1"),
        2 => (8 * k * k * k * k - (20 - 6 * n) * k * k * k + 2 * (8 - 3 * n) * k * k - 4 * k)
            .div_exact(48, "J_2"),
        _ => Err(Error::InvalidArgument(format!("no closed form for m = {m}; use j_rec"))),
    }
}

fn checked<T>(v: Option<T>) -> Result<T> {
    v.ok_or(Error::Overflow("J recursion"))
}

fn binomial(n: u32, r: u32) -> i128 {
    (0..r).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Bernoulli numbers `B_0..=B_m` with `B_1 = +1/2`.
fn bernoulli(m: u32) -> Vec<Rational> {
    let mut b = vec![Rational::from_integer(0); m as usize + 1];
    b[0] = Rational::from_integer(1);
    for i in 1..=m {
        let mut acc = Rational::from_integer(0);
        for j in 0..i {
            acc += b[j as usize] * binomial(i + 1, j);
        }
        b[i as usize] = -acc / (i as i128 + 1);
    }
    if m >= 1 {
        b[1] = Rational::new(1, 2);
    }
    b
}

/// `Σ_{j=1}^{N} j^p` by Faulhaber's formula.
fn power_sum(nn: i128, p: u32, bern: &[Rational]) -> Result<i128> {
    let mut acc = Rational::from_integer(0);
    for s in 0..=p {
        let pow = checked(checked_pow(nn, p + 1 - s))?;
        let term = checked(
            bern[s as usize]
                .checked_mul(&Rational::from_integer(binomial(p + 1, s)))
                .and_then(|t| t.checked_mul(&Rational::from_integer(pow))),
        )?;
        acc = checked(acc.checked_add(&term))?;
    }
    let r = acc / (p as i128 + 1);
    if !r.is_integer() {
        return Err(Error::Verification(format!("power sum Σ j^{p} is not integral")));
    }
    Ok(r.to_integer())
}

fn checked_pow(base: i128, e: u32) -> Option<i128> {
    (0..e).try_fold(1i128, |acc, _| acc.checked_mul(base))
}

/// Largest supported exponent for [`j_rec`].
pub const J_REC_MAX_M: u32 = 8;

/// `Σ_{j<k} j^m·π(j)` by the doubling recursion, for `m ≤ 8`.
pub fn j_rec(k: u64, m: u32) -> Result<i128> {
    if m > J_REC_MAX_M {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds {J_REC_MAX_M}")));
    }
    let n = bits(k)?;
    let bern = bernoulli(m);
    // level[q] = J_q at the current length
    let mut level = vec![0i128; m as usize + 1];
    for lvl in 1..=n {
        let h = 1i128 << (lvl - 1);
        let mut next = vec![0i128; m as usize + 1];
        for q in 0..=m {
            let mut tot = Exact::new(2) * level[q as usize] + checked(checked_pow(h, q))?;
            for r in 0..=q {
                let inner = Exact::new(2) * level[(q - r) as usize] + power_sum(h - 1, q - r, &bern)?;
                tot = tot + Exact::new(binomial(q, r)) * checked(checked_pow(h, r))? * inner;
            }
            next[q as usize] = tot.get("J recursion")?;
        }
        level = next;
    }
    Ok(level[m as usize])
}

/// `4k·Σ ((j/k))((π(j)/k)) = nk/2 − k + 1`.
pub fn r_closed(k: u64) -> Result<ScaledSum> {
    let n = bits(k)? as i128;
    let kk = k as i128;
    Ok(ScaledSum::new(n * kk / 2 - kk + 1, 4 * kk))
}

/// `U(k) = k(n−2)/8 + 1/4`, returned with scale 8.
pub fn u_closed(k: u64) -> Result<ScaledSum> {
    let n = bits(k)? as i128;
    if n == 0 {
        return Err(Error::InvalidSize("U needs k ≥ 2".into()));
    }
    Ok(ScaledSum::new(k as i128 * (n - 2) + 2, 8))
}

/// `Σ_{j<k} ((j²/k))`, returned with scale 2.
pub fn q_closed(k: u64) -> Result<ScaledSum> {
    let n = bits(k)?;
    if n == 0 {
        return Ok(ScaledSum::new(0, 2));
    }
    let r = half_root(n);
    let v = if n % 2 == 0 { 3 - 2 * r } else { 3 - 3 * r };
    Ok(ScaledSum::new(v, 2))
}

/// `Σ_{j<k} ⌊j²/k⌋` in closed form.
pub fn floor_square_sum(k: u64) -> Result<i128> {
    let n = bits(k)?;
    if n == 0 {
        return Ok(0);
    }
    let r = half_root(n);
    let kk = Exact::from(k);
    let root_term = if n % 2 == 0 { 9 * r } else { 12 * r };
    (2 * kk * kk - 6 * kk + root_term - 8).div_exact(6, "floor square sum")
}

/// `4·Σ_{j<k/2} (((j−b)/k))` in closed form.
pub fn half_saw_sum(k: u64, b: i128) -> Result<i128> {
    let n = bits(k)?;
    if n == 0 {
        return Err(Error::InvalidSize("half residue sums need k ≥ 2".into()));
    }
    let kk = k as i128;
    let bm = b.rem_euclid(kk);
    Ok(if bm < kk / 2 { 2 * bm - kk / 2 + 1 } else { -2 * bm + 3 * kk / 2 - 1 })
}

/// Correction constant of the S recursion.
pub fn k_s(k: u64, b: i128) -> Result<i128> {
    Ok(-half_saw_sum(k, b)?)
}

fn s_raw(n: u32, b: i128, c: i128) -> i128 {
    if n == 0 {
        return 0;
    }
    let k = 1i128 << n;
    let (b, c) = (b.rem_euclid(k), c.rem_euclid(k));
    let ks = if b < k / 2 { -2 * b + k / 2 - 1 } else { 2 * b - 3 * k / 2 + 1 };
    if c % 2 == 1 {
        let cs = brp(n - 1, ((c - 1) / 2) as u64) as i128;
        2 * s_raw(n - 1, b, (c - 1) / 2) + saw2(cs - b, k) + ks
    } else {
        let cs = brp(n - 1, (c / 2) as u64) as i128;
        2 * s_raw(n - 1, b, c / 2) - saw2(2 * (cs - b) + k, 2 * k) / 2 + ks
    }
}

/// `4k·Σ (((j−b)/k))(((π(j)−c)/k))`.
pub fn s_rec(k: u64, b: i128, c: i128) -> Result<ScaledSum> {
    let n = bits(k)?;
    Ok(ScaledSum::new(s_raw(n, b, c), 4 * k as i128))
}

/// T in scaled form; counts one step per recursion level.
pub(crate) fn t_raw(n: u32, b: i128, c: i128, steps: &mut u64) -> i128 {
    let k = 1i128 << n;
    let (b, c) = (b.rem_euclid(k), c.rem_euclid(k));
    if b == 0 || c == 0 || n <= 1 {
        return 0;
    }
    *steps += 1;
    if c % 2 == 1 {
        let cs = brp(n - 1, ((c - 1) / 2) as u64) as i128;
        let bracket = 2 * floor_div(cs - b, k) - 2 * floor_div(2 * b, k) - divides(cs - b, k)
            + divides(cs, k)
            + divides(2 * b, k);
        2 * t_raw(n - 1, b, (c - 1) / 2, steps) - 4 * b - k * bracket
    } else {
        let cs = brp(n - 1, (c / 2) as u64) as i128;
        let x = 2 * (cs - b) + k;
        let y = 2 * b + k;
        let bracket = 2 * floor_div(x, 2 * k) + 2 * floor_div(y, 2 * k)
            - divides(x, 2 * k)
            - divides(y, 2 * k);
        2 * t_raw(n - 1, b, c / 2, steps) + k * bracket
    }
}

/// `4k·Σ [(((j−b)/k)) − ((j/k))]·[(((π(j)−c)/k)) − ((π(j)/k))]`.
pub fn t_rec(k: u64, b: i128, c: i128) -> Result<ScaledSum> {
    let n = bits(k)?;
    Ok(ScaledSum::new(t_raw(n, b, c, &mut 0), 4 * k as i128))
}

/// Exhaustive `(min, max)` of T over all shifts.
pub fn t_extremes(k: u64) -> Result<(i128, i128)> {
    let n = bits(k)?;
    if k > 1 << 12 {
        return Err(Error::TooLarge(format!("exhaustive T scan at k = {k}")));
    }
    let mut lo = i128::MAX;
    let mut hi = i128::MIN;
    for b in 0..k as i128 {
        for c in 0..k as i128 {
            let t = t_raw(n, b, c, &mut 0);
            lo = lo.min(t);
            hi = hi.max(t);
        }
    }
    Ok((lo, hi))
}

/// Closed-form envelope `(lower, upper)` for T over all shifts (`n ≥ 2`).
pub fn t_envelope(k: u64) -> Result<(i128, i128)> {
    let n = bits(k)?;
    if n < 2 {
        return Err(Error::InvalidSize("T envelope needs k ≥ 4".into()));
    }
    let kk = Exact::from(k);
    let r = half_root(n);
    let lower = if n % 2 == 0 { -3 * kk - 4 + 8 * r } else { -3 * kk - 4 + 12 * r };
    let sign = if n % 2 == 0 { -16 } else { 16 };
    let upper = ((12 * n as i128 - 11) * kk + sign).floor_div(9);
    Ok((lower.get("T envelope")?, upper.get("T envelope")?))
}

/// `k²·Σ ((π(j)/k))((π(j+p)/k))`.
pub fn c_rec(k: u64, p: u64) -> Result<ScaledSum> {
    let n = bits(k)?;
    if p >= k {
        return Err(Error::InvalidArgument(format!("shift {p} ≥ k = {k}")));
    }
    let kk = Exact::from(k);
    let scale = (kk * kk).get("C scale")?;
    let value = if p == 0 {
        (kk * (kk - 1) * (kk - 2)).div_exact(12, "C(k,0)")?
    } else if 2 * p == k {
        (kk * (kk - 2) * (kk - 4)).div_exact(12, "C(k,k/2)")?
    } else {
        let v = p.trailing_zeros();
        let u = Exact::new(1i128 << v);
        let mut acc = Exact::new(0);
        let mut kp = k;
        let mut pp = p;
        for j in 0..(n - v - 1) {
            acc = acc + Exact::new(8).pow(j) * pp.max(kp - pp) as i128;
            kp /= 2;
            pp %= kp;
        }
        let tail = (kk * kk * ((2 * kk - 12) * u * u + 18 * u - 5 * kk)).div_exact(
            (Exact::new(24) * u * u).get("C tail")?,
            "C tail",
        )?;
        (acc + tail).get("C")?
    };
    Ok(ScaledSum::new(value, scale))
}

/// The BRP on `n−1` bits applied modulo `k/2`.
fn half_brp(n: u32, x: i128) -> i128 {
    let h = 1i128 << (n - 1);
    brp(n - 1, x.rem_euclid(h) as u64) as i128
}

fn v_raw(n: u32, a: i128, b: i128) -> Result<Exact> {
    if n <= 1 {
        return Ok(Exact::new(0));
    }
    let k = 1i128 << n;
    let (a, b) = (a.rem_euclid(k), b.rem_euclid(k));
    let (ea, eb) = (a & 1, b & 1);
    let (a1, b1) = (a - ea, b - eb);
    let pa = 2 * half_brp(n, half_brp(n, a1 / 2) + 1);
    let pb = 2 * half_brp(n, half_brp(n, b1 / 2) - 1);
    let a2 = if ea == 0 { pa - b1 } else { -pa + b1 };
    let b2 = if eb == 0 { pb - a1 } else { -pb + a1 };
    let e = (ea == eb) as i128;
    let kk = Exact::new(k);
    let lhs = saw2(a + 1, k) - saw2(a + 2, k);
    let rhs = saw2(b, k) - saw2(b - 1, k);
    let inner = v_raw(n - 1, a1 / 2, b1 / 2)?;
    let four_v = 32 * inner + Exact::new(lhs) * rhs - kk * saw2(a2, k) - kk * saw2(b2, k)
        + (kk * kk * divides(b2, k) - 2 * kk) * e;
    Ok(Exact::new(four_v.div_exact(4, "V")?))
}

/// `k²·Σ (((π(j)−a)/k))(((π(j+1)−b)/k))` with `j+1` taken mod `k`.
pub fn v_rec(k: u64, a: i128, b: i128) -> Result<ScaledSum> {
    let n = bits(k)?;
    let kk = Exact::from(k);
    Ok(ScaledSum::new(v_raw(n, a, b)?.get("V")?, (kk * kk).get("V scale")?))
}

fn w_raw(n: u32, a: i128, b: i128) -> Result<Exact> {
    if n <= 1 {
        return Ok(Exact::new(0));
    }
    let k = 1i128 << n;
    let (a, b) = (a.rem_euclid(k), b.rem_euclid(k));
    let (ea, eb) = (a & 1, b & 1);
    let (a1, b1) = (a - ea, b - eb);
    let a2 = 2 * half_brp(n, half_brp(n, a1 / 2) + 1);
    let b2 = 2 * half_brp(n, half_brp(n, b1 / 2) - 1);
    let e = (ea == eb) as i128;
    let kk = Exact::new(k);
    let inner = w_raw(n - 1, a1 / 2, b1 / 2)?;
    let deltas = -(1 - eb) * divides(k / 2 - b1, k) + e * divides(a2 - b1, k)
        - divides(a1 + 2, k) * (divides(b1, k) - 1 - ea);
    let four_w = 32 * inner
        + (2 * eb - 1) * kk * (saw2(b2 - a1, k) - saw2(b2, k))
        + (2 * ea - 1) * kk * (saw2(a2 - b1, k) - saw2(a2, k))
        + kk * saw2(k / 2 - b1, k)
        + kk * kk * deltas
        - 2 * a1 * kk
        - 4 * ea * eb * kk;
    Ok(Exact::new(four_w.div_exact(4, "W")?))
}

/// `k²·Σ [(((π(j)−a)/k)) − ((π(j)/k))]·[(((π(j+1)−b)/k)) − ((π(j+1)/k))]`.
pub fn w_rec(k: u64, a: i128, b: i128) -> Result<ScaledSum> {
    let n = bits(k)?;
    let kk = Exact::from(k);
    Ok(ScaledSum::new(w_raw(n, a, b)?.get("W")?, (kk * kk).get("W scale")?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saw_examples() {
        assert_eq!(saw(0, 4).unwrap(), 0);
        assert_eq!(saw(1, 2).unwrap(), 0);
        assert_eq!(saw(-1, 4).unwrap(), 2);
        assert!(saw(1, 0).is_err());
    }

    #[test]
    fn floor_identity_for_negatives() {
        for m in -50i128..50 {
            for d in 1i128..9 {
                assert_eq!(floor_div(-m, d), -floor_div(m - 1, d) - 1);
            }
        }
    }

    #[test]
    fn floor_prod_examples() {
        assert_eq!(floor_prod_sum(8, 0, 0).unwrap(), 0);
        assert_eq!(floor_prod_sum(8, 3, 5).unwrap(), 3);
        for k in 1..12i128 {
            for p in -20..20 {
                for q in -20..20 {
                    let direct: i128 =
                        (0..k).map(|j| floor_div(j - p, k) * floor_div(j - q, k)).sum();
                    assert_eq!(floor_prod_sum(k, p, q).unwrap(), direct);
                }
            }
        }
    }

    #[test]
    fn j_examples() {
        assert_eq!(j_closed(8, 0).unwrap(), 28);
        assert_eq!(j_closed(4, 1).unwrap(), 13);
        assert_eq!(j_rec(1, 3).unwrap(), 0);
        for n in 0..=20 {
            let k = 1u64 << n;
            for m in 0..=2 {
                assert_eq!(j_rec(k, m).unwrap(), j_closed(k, m).unwrap(), "n={n} m={m}");
            }
        }
        assert!(j_rec(8, 9).is_err());
    }

    #[test]
    fn r_u_examples() {
        assert_eq!(r_closed(1).unwrap().value, 0);
        assert_eq!(r_closed(4).unwrap().value, 1);
        assert_eq!(r_closed(1024).unwrap().value, 4097);
        assert_eq!(u_closed(4).unwrap(), ScaledSum::new(2, 8));
        assert_eq!(u_closed(8).unwrap().to_ratio(), Rational::new(5, 4));
    }

    #[test]
    fn k_s_example() {
        assert_eq!(k_s(8, 2).unwrap(), -1);
    }

    #[test]
    fn t_examples() {
        assert_eq!(t_rec(64, 0, 5).unwrap().value, 0);
        assert_eq!(t_rec(4, 1, 1).unwrap().value, 0);
        let t = t_rec(1 << 32, (1 << 16) - 1, (1 << 16) + 1).unwrap();
        assert_eq!(t.value, 4294967300);
        assert_eq!(t.value, (1i128 << 32) + 4);
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_rec(8, 0).unwrap().value, 28);
        assert_eq!(c_rec(8, 4).unwrap().value, 16);
        assert_eq!(c_rec(64, 1).unwrap().value, -14601);
        assert!(c_rec(8, 8).is_err());
    }

    #[test]
    fn w_example_at_large_k() {
        let k = 1u64 << 32;
        let w = w_rec(k, (1 << 16) - 1, (1 << 16) + 1).unwrap();
        let kk = k as i128;
        assert_eq!(w.value, kk - kk * kk);
    }

    #[test]
    fn small_base_cases_vanish() {
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(v_rec(2, a, b).unwrap().value, 0);
                assert_eq!(w_rec(2, a, b).unwrap().value, 0);
            }
        }
        assert_eq!(w_rec(16, 0, 5).unwrap().value, 0);
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(c_rec(1 << 62, 1), Err(Error::Overflow(_))));
    }

    #[test]
    fn envelope_matches_small_extremes() {
        assert_eq!(t_extremes(4).unwrap(), (0, 4));
        assert_eq!(t_envelope(4).unwrap(), (0, 4));
        assert_eq!(t_extremes(8).unwrap(), (-4, 24));
        assert_eq!(t_envelope(8).unwrap(), (-4, 24));
    }
}
