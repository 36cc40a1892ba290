//! Permutation families and their evaluation.

mod descriptor;

pub use descriptor::parse_descriptor;

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;

/// Enumeration-based helpers refuse permutations longer than this.
pub const MAX_ENUMERATION_LEN: u64 = 1 << 24;

/// Tables (including QPP) are limited to this length.
pub const MAX_TABLE_LEN: u64 = 1 << 24;

/// A power-of-two length `k = 2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PermSize {
    n: u32,
}

impl PermSize {
    pub fn new(n: u32) -> Result<Self> {
        if !(1..=63).contains(&n) {
            return Err(Error::InvalidSize(format!("bit count {n} outside 1..=63")));
        }
        Ok(PermSize { n })
    }

    pub fn from_len(k: u64) -> Result<Self> {
        if k < 2 || !k.is_power_of_two() {
            return Err(Error::InvalidSize(format!("{k} is not a power of two ≥ 2")));
        }
        PermSize::new(k.trailing_zeros())
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn k(self) -> u64 {
        1u64 << self.n
    }
}

/// Bit reversal of the low `n` bits of `j`, without range checks.
#[inline]
pub fn brp(n: u32, j: u64) -> u64 {
    if n == 0 {
        0
    } else {
        j.reverse_bits() >> (64 - n)
    }
}

fn check_index(j: u64, k: u64) -> Result<()> {
    if j >= k {
        Err(Error::InvalidArgument(format!("index {j} out of range for length {k}")))
    } else {
        Ok(())
    }
}

pub fn eval_brp(n: u32, j: u64) -> Result<u64> {
    let size = PermSize::new(n)?;
    check_index(j, size.k())?;
    Ok(brp(n, j))
}

/// Bit reversal built from the `n−1` bit reversal: `2π(j)` for the lower
/// half, `2π(j)+1` for the upper half.
pub fn eval_split_brp(n: u32, j: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidSize("split evaluation needs n ≥ 2".into()));
    }
    let k = PermSize::new(n)?.k();
    check_index(j, k)?;
    let half = k / 2;
    Ok(if j < half {
        2 * brp(n - 1, j)
    } else {
        2 * brp(n - 1, j - half) + 1
    })
}

pub fn eval_circular(k: u64, c: u64, j: u64) -> Result<u64> {
    check_index(c, k)?;
    check_index(j, k)?;
    Ok(((j as u128 + c as u128) % k as u128) as u64)
}

pub fn eval_lcs(k: u64, h: u64, j: u64) -> Result<u64> {
    PermSize::from_len(k)?;
    if h.is_multiple_of(2) {
        return Err(Error::NotAPermutation(format!("even multiplier {h}")));
    }
    check_index(j, k)?;
    Ok(((h as u128 * j as u128) % k as u128) as u64)
}

/// Inverse of an odd `h` modulo `2^64`.
fn odd_inverse(h: u64) -> u64 {
    let mut x = h;
    for _ in 0..6 {
        x = x.wrapping_mul(2u64.wrapping_sub(h.wrapping_mul(x)));
    }
    x
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Table {
    map: Arc<Vec<u64>>,
    inverse: Arc<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Brp { n: u32 },
    Circular { shift: u64 },
    Lcs { mult: u64, inv: u64 },
    Qpp { lin: u64, quad: u64, table: Table },
    Flip(Box<Permutation>),
    Block2d { s1: Box<Permutation>, s2: Box<Permutation> },
    MStream { streams: Vec<Permutation>, order: Vec<usize>, order_inv: Vec<usize> },
    Table(Table),
}

/// An immutable bijection on `[0, len)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    len: u64,
    kind: Kind,
}

/// Borrowed view of how a permutation is built, for dispatching fast paths.
#[derive(Debug, Clone, Copy)]
pub enum Shape<'a> {
    BitReversal { n: u32 },
    Circular { shift: u64 },
    Lcs { mult: u64 },
    Qpp { lin: u64, quad: u64 },
    Flip(&'a Permutation),
    Block2d { s1: &'a Permutation, s2: &'a Permutation },
    MStream { streams: &'a [Permutation], order: &'a [usize] },
    Table,
}

impl Permutation {
    pub fn brp(n: u32) -> Result<Self> {
        let size = PermSize::new(n)?;
        Ok(Permutation { len: size.k(), kind: Kind::Brp { n } })
    }

    pub fn circular(k: u64, c: u64) -> Result<Self> {
        PermSize::from_len(k)?;
        check_index(c, k)?;
        Ok(Permutation { len: k, kind: Kind::Circular { shift: c } })
    }

    pub fn lcs(k: u64, h: u64) -> Result<Self> {
        PermSize::from_len(k)?;
        if h.is_multiple_of(2) {
            return Err(Error::NotAPermutation(format!(
                "lcs multiplier {h} is even and cannot permute a power-of-two length"
            )));
        }
        let mult = h % k;
        let inv = odd_inverse(mult) & (k - 1);
        Ok(Permutation { len: k, kind: Kind::Lcs { mult, inv } })
    }

    /// `j ↦ (h·j + b·j²) mod k`, stored as a table.
    pub fn qpp(k: u64, h: u64, b: u64) -> Result<Self> {
        PermSize::from_len(k)?;
        if k > 1 << 16 {
            return Err(Error::TooLarge(format!("qpp tables are limited to 2^16 entries, got {k}")));
        }
        let map: Vec<u64> = (0..k)
            .map(|j| {
                let j = j as u128;
                ((h as u128 * j + b as u128 * j * j) % k as u128) as u64
            })
            .collect();
        let table = Table::build(map).map_err(|_| {
            Error::NotAPermutation(format!("qpp h={h}, b={b} is not a bijection on [{k}]"))
        })?;
        Ok(Permutation { len: k, kind: Kind::Qpp { lin: h, quad: b, table } })
    }

    /// `j ↦ k − 1 − inner(j)`.
    pub fn flip(inner: Permutation) -> Self {
        Permutation { len: inner.len, kind: Kind::Flip(Box::new(inner)) }
    }

    /// Row-column block interleaver: `x ↦ s2(x mod k2)·k1 + s1(⌊x/k2⌋)`,
    /// where `k1 = |s1|` and `k2 = |s2|`.
    pub fn block2d(s1: Permutation, s2: Permutation) -> Result<Self> {
        let len = s1
            .len
            .checked_mul(s2.len)
            .ok_or(Error::Overflow("block2d length"))?;
        Ok(Permutation { len, kind: Kind::Block2d { s1: Box::new(s1), s2: Box::new(s2) } })
    }

    /// `m`-stream interleaver: `mx + j ↦ m·s_{ω(j)}(x) + ω(j)`.
    pub fn mstream(streams: Vec<Permutation>, order: Vec<usize>) -> Result<Self> {
        let m = streams.len();
        if m == 0 {
            return Err(Error::InvalidArgument("mstream needs at least one stream".into()));
        }
        if order.len() != m {
            return Err(Error::InvalidArgument(format!(
                "stream order has {} entries for {m} streams",
                order.len()
            )));
        }
        let mut order_inv = vec![usize::MAX; m];
        for (j, &w) in order.iter().enumerate() {
            if w >= m || order_inv[w] != usize::MAX {
                return Err(Error::NotAPermutation(format!("stream order {order:?}")));
            }
            order_inv[w] = j;
        }
        let sub = streams[0].len;
        if streams.iter().any(|s| s.len != sub) {
            return Err(Error::InvalidSize("mstream components differ in length".into()));
        }
        let len = sub.checked_mul(m as u64).ok_or(Error::Overflow("mstream length"))?;
        Ok(Permutation { len, kind: Kind::MStream { streams, order, order_inv } })
    }

    /// Explicit image table; any length ≥ 1 is accepted.
    pub fn table(map: Vec<u64>) -> Result<Self> {
        let len = map.len() as u64;
        if len == 0 {
            return Err(Error::InvalidSize("empty table".into()));
        }
        if len > MAX_TABLE_LEN {
            return Err(Error::TooLarge(format!("table of length {len}")));
        }
        Ok(Permutation { len, kind: Kind::Table(Table::build(map)?) })
    }

    /// Uniformly random table permutation from a seeded generator.
    pub fn random(k: u64, seed: u64) -> Result<Self> {
        if k == 0 || k > MAX_TABLE_LEN {
            return Err(Error::InvalidSize(format!("random table of length {k}")));
        }
        let mut map: Vec<u64> = (0..k).collect();
        map.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Permutation::table(map)
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `Some` when the length is a power of two.
    pub fn size(&self) -> Option<PermSize> {
        PermSize::from_len(self.len).ok()
    }

    pub fn shape(&self) -> Shape<'_> {
        match &self.kind {
            Kind::Brp { n } => Shape::BitReversal { n: *n },
            Kind::Circular { shift } => Shape::Circular { shift: *shift },
            Kind::Lcs { mult, .. } => Shape::Lcs { mult: *mult },
            Kind::Qpp { lin, quad, .. } => Shape::Qpp { lin: *lin, quad: *quad },
            Kind::Flip(inner) => Shape::Flip(inner),
            Kind::Block2d { s1, s2 } => Shape::Block2d { s1, s2 },
            Kind::MStream { streams, order, .. } => Shape::MStream { streams, order },
            Kind::Table(_) => Shape::Table,
        }
    }

    /// Image of `j`. Panics if `j ≥ len`.
    #[inline]
    pub fn eval(&self, j: u64) -> u64 {
        assert!(j < self.len, "index {j} out of range for length {}", self.len);
        self.eval_unchecked(j)
    }

    pub fn try_eval(&self, j: u64) -> Result<u64> {
        check_index(j, self.len)?;
        Ok(self.eval_unchecked(j))
    }

    fn eval_unchecked(&self, j: u64) -> u64 {
        let k = self.len;
        match &self.kind {
            Kind::Brp { n } => brp(*n, j),
            Kind::Circular { shift } => (j + shift) & (k - 1),
            Kind::Lcs { mult, .. } => mult.wrapping_mul(j) & (k - 1),
            Kind::Qpp { table, .. } | Kind::Table(table) => table.map[j as usize],
            Kind::Flip(inner) => k - 1 - inner.eval_unchecked(j),
            Kind::Block2d { s1, s2 } => {
                let k2 = s2.len;
                s2.eval_unchecked(j % k2) * s1.len + s1.eval_unchecked(j / k2)
            }
            Kind::MStream { streams, order, .. } => {
                let m = streams.len() as u64;
                let w = order[(j % m) as usize];
                m * streams[w].eval_unchecked(j / m) + w as u64
            }
        }
    }

    /// Preimage of `y`. Panics if `y ≥ len`.
    pub fn inverse(&self, y: u64) -> u64 {
        assert!(y < self.len, "image {y} out of range for length {}", self.len);
        self.inverse_unchecked(y)
    }

    fn inverse_unchecked(&self, y: u64) -> u64 {
        let k = self.len;
        match &self.kind {
            Kind::Brp { n } => brp(*n, y),
            Kind::Circular { shift } => (y + k - shift) & (k - 1),
            Kind::Lcs { inv, .. } => inv.wrapping_mul(y) & (k - 1),
            Kind::Qpp { table, .. } | Kind::Table(table) => table.inverse[y as usize],
            Kind::Flip(inner) => inner.inverse_unchecked(k - 1 - y),
            Kind::Block2d { s1, s2 } => {
                let k1 = s1.len;
                let x2 = s2.inverse_unchecked(y / k1);
                let x1 = s1.inverse_unchecked(y % k1);
                x1 * s2.len + x2
            }
            Kind::MStream { streams, order_inv, .. } => {
                let m = streams.len() as u64;
                let w = (y % m) as usize;
                let x = streams[w].inverse_unchecked(y / m);
                m * x + order_inv[w] as u64
            }
        }
    }

    /// Full image `[π(0), …, π(len−1)]`.
    pub fn image(&self) -> Result<Vec<u64>> {
        if self.len > MAX_ENUMERATION_LEN {
            return Err(Error::TooLarge(format!("image of length {}", self.len)));
        }
        Ok((0..self.len).map(|j| self.eval_unchecked(j)).collect())
    }
}

impl Table {
    fn build(map: Vec<u64>) -> Result<Self> {
        let len = map.len();
        let mut inverse = vec![u64::MAX; len];
        for (j, &y) in map.iter().enumerate() {
            if y as usize >= len || inverse[y as usize] != u64::MAX {
                return Err(Error::NotAPermutation(format!(
                    "value {y} at position {j} is out of range or repeated"
                )));
            }
            inverse[y as usize] = j as u64;
        }
        Ok(Table { map: Arc::new(map), inverse: Arc::new(inverse) })
    }
}

/// True iff `p` is a bijection on `[0, len)`, checked by enumeration.
pub fn validate_perm(p: &Permutation) -> Result<bool> {
    if p.len > MAX_ENUMERATION_LEN {
        return Err(Error::TooLarge(format!("validation of length {}", p.len)));
    }
    let mut seen = vec![false; p.len as usize];
    for j in 0..p.len {
        let y = p.eval_unchecked(j);
        if y >= p.len || seen[y as usize] {
            return Ok(false);
        }
        seen[y as usize] = true;
    }
    Ok(true)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Brp { n } => write!(f, "brp:n={n}"),
            Kind::Circular { shift } => write!(f, "circ:k={},c={shift}", self.len),
            Kind::Lcs { mult, .. } => write!(f, "lcs:k={},h={mult}", self.len),
            Kind::Qpp { lin, quad, .. } => write!(f, "qpp:k={},h={lin},b={quad}", self.len),
            Kind::Flip(inner) => write!(f, "flip:{inner}"),
            Kind::Block2d { s1, s2 } => write!(f, "block2d:s1=[{s1}],s2=[{s2}]"),
            Kind::MStream { streams, order, .. } => {
                write!(f, "mstream:")?;
                for (i, s) in streams.iter().enumerate() {
                    write!(f, "s{i}=[{s}],")?;
                }
                let w: Vec<String> = order.iter().map(|w| w.to_string()).collect();
                write!(f, "w={}", w.join("."))
            }
            Kind::Table(t) => {
                let v: Vec<String> = t.map.iter().map(|y| y.to_string()).collect();
                write!(f, "table:v={}", v.join("."))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The worked permutation on ten elements used throughout the tests.
    pub(crate) fn worked_example() -> Permutation {
        Permutation::table(vec![3, 1, 7, 2, 5, 8, 6, 4, 0, 9]).unwrap()
    }

    fn naive_reverse(n: u32, j: u64) -> u64 {
        let mut r = 0;
        for i in 0..n {
            r = (r << 1) | ((j >> i) & 1);
        }
        r
    }

    #[test]
    fn brp_small_cases() {
        assert_eq!(eval_brp(2, 0).unwrap(), 0);
        assert_eq!(eval_brp(4, 3).unwrap(), 12);
        let img: Vec<u64> = (0..8).map(|j| eval_brp(3, j).unwrap()).collect();
        assert_eq!(img, vec![0, 4, 2, 6, 1, 5, 3, 7]);
        assert!(eval_brp(3, 8).is_err());
    }

    #[test]
    fn brp_is_involution_and_split_agrees() {
        for n in 1..=12 {
            for j in 0..1u64 << n {
                let y = eval_brp(n, j).unwrap();
                assert_eq!(y, naive_reverse(n, j));
                assert_eq!(eval_brp(n, y).unwrap(), j);
                if n >= 2 {
                    assert_eq!(eval_split_brp(n, j).unwrap(), y);
                }
            }
        }
        assert_eq!(eval_split_brp(3, 1).unwrap(), 4);
        assert_eq!(eval_split_brp(2, 3).unwrap(), 3);
    }

    #[test]
    fn circular_lcs_flip() {
        assert_eq!(eval_circular(32, 7, 0).unwrap(), 7);
        assert_eq!(eval_circular(8, 5, 6).unwrap(), 3);
        assert_eq!(eval_circular(32, 0, 19).unwrap(), 19);
        assert_eq!(eval_lcs(8, 3, 3).unwrap(), 1);
        assert!(Permutation::lcs(8, 2).is_err());
        let f = Permutation::flip(Permutation::brp(3).unwrap());
        assert_eq!(f.eval(1), 3);
        assert!(validate_perm(&Permutation::lcs(8, 3).unwrap()).unwrap());
    }

    #[test]
    fn block2d_identity_components() {
        let id4 = Permutation::circular(4, 0).unwrap();
        let id8 = Permutation::circular(8, 0).unwrap();
        let p = Permutation::block2d(id4, id8).unwrap();
        assert_eq!(p.eval(13), 21);
        assert!(validate_perm(&p).unwrap());
    }

    #[test]
    fn mstream_matches_two_stream_rule() {
        let s = Permutation::brp(2).unwrap();
        let p = Permutation::mstream(vec![s.clone(), s.clone()], vec![0, 1]).unwrap();
        assert_eq!(p.eval(2), 2 * brp(2, 1));
        assert_eq!(p.eval(3), 2 * s.eval(1) + 1);
        assert!(validate_perm(&p).unwrap());
    }

    #[test]
    fn inverses_round_trip() {
        let perms = vec![
            Permutation::brp(5).unwrap(),
            Permutation::circular(32, 9).unwrap(),
            Permutation::lcs(32, 13).unwrap(),
            Permutation::qpp(64, 7, 16).unwrap(),
            Permutation::flip(Permutation::lcs(32, 5).unwrap()),
            Permutation::block2d(Permutation::brp(3).unwrap(), Permutation::lcs(4, 3).unwrap())
                .unwrap(),
            Permutation::mstream(
                vec![
                    Permutation::brp(3).unwrap(),
                    Permutation::circular(8, 3).unwrap(),
                    Permutation::random(8, 1).unwrap(),
                    Permutation::lcs(8, 5).unwrap(),
                ],
                vec![2, 0, 3, 1],
            )
            .unwrap(),
            worked_example(),
        ];
        for p in perms {
            assert!(validate_perm(&p).unwrap(), "{p}");
            for j in 0..p.len() {
                assert_eq!(p.inverse(p.eval(j)), j, "{p}");
            }
        }
    }

    #[test]
    fn non_bijective_tables_rejected() {
        assert!(Permutation::table(vec![0, 0, 1]).is_err());
        assert!(Permutation::table(vec![0, 3]).is_err());
        assert!(Permutation::qpp(16, 2, 1).is_err());
        assert!(Permutation::mstream(vec![Permutation::brp(2).unwrap()], vec![1]).is_err());
    }

    #[test]
    fn size_checks() {
        assert!(PermSize::new(0).is_err());
        assert!(PermSize::new(64).is_err());
        assert_eq!(PermSize::new(63).unwrap().k(), 1 << 63);
        assert!(PermSize::from_len(12).is_err());
        assert_eq!(worked_example().size(), None);
    }
}
