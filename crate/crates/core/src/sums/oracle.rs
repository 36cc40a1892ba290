//! Definitional sums evaluated term by term.

use crate::arith::{saw2, Rational};
use crate::error::{Error, Result};
use crate::perm::brp;

use super::bits;

/// Oracles refuse lengths above this.
pub const ORACLE_MAX_LEN: u64 = 1 << 14;

/// Which definitional sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumKind {
    /// `4k·Σ ((j/k))((π(j)/k))`
    R,
    /// `4k·Σ (((j−b)/k))(((π(j)−c)/k))`
    S { b: i128, c: i128 },
    /// `4k·Σ [(((j−b)/k))−((j/k))][(((π(j)−c)/k))−((π(j)/k))]`
    T { b: i128, c: i128 },
    /// `Σ_b Σ_j [(((j−b)/k))−((j/k))][(((π(j)−π(b))/k))−((π(j)/k))]`
    U,
    /// `k²·Σ ((π(j)/k))((π(j+p)/k))`
    C { p: u64 },
    /// `k²·Σ (((π(j)−a)/k))(((π(j+1)−b)/k))`
    V { a: i128, b: i128 },
    /// `k²·Σ [(((π(j)−a)/k))−((π(j)/k))][(((π(j+1)−b)/k))−((π(j+1)/k))]`
    W { a: i128, b: i128 },
    /// `Σ j^m·π(j)`
    J { m: u32 },
}

/// Evaluates `kind` by direct summation, at the same scale the recursions use.
pub fn sum_oracle(kind: SumKind, k: u64) -> Result<Rational> {
    let n = bits(k)?;
    if k > ORACLE_MAX_LEN {
        return Err(Error::TooLarge(format!("oracle length {k} exceeds {ORACLE_MAX_LEN}")));
    }
    let kk = k as i128;
    let pi = |j: i128| brp(n, j.rem_euclid(kk) as u64) as i128;
    let s = |x: i128| saw2(x, kk);
    // products of two scaled saws carry a factor 4k²
    let total: i128 = match kind {
        SumKind::R => return Ok(Rational::new((0..kk).map(|j| s(j) * s(pi(j))).sum(), kk)),
        SumKind::S { b, c } => {
            return Ok(Rational::new((0..kk).map(|j| s(j - b) * s(pi(j) - c)).sum(), kk))
        }
        SumKind::T { b, c } => {
            let v = (0..kk).map(|j| (s(j - b) - s(j)) * (s(pi(j) - c) - s(pi(j)))).sum();
            return Ok(Rational::new(v, kk));
        }
        SumKind::U => {
            let mut acc = 0i128;
            for b in 0..kk {
                let pb = pi(b);
                for j in 0..kk {
                    let pj = pi(j);
                    acc += (s(j - b) - s(j)) * (s(pj - pb) - s(pj));
                }
            }
            return Ok(Rational::new(acc, 4 * kk * kk));
        }
        SumKind::C { p } => (0..kk).map(|j| s(pi(j)) * s(pi(j + p as i128))).sum(),
        SumKind::V { a, b } => (0..kk).map(|j| s(pi(j) - a) * s(pi(j + 1) - b)).sum(),
        SumKind::W { a, b } => (0..kk)
            .map(|j| (s(pi(j) - a) - s(pi(j))) * (s(pi(j + 1) - b) - s(pi(j + 1))))
            .sum(),
        SumKind::J { m } => {
            let mut acc = 0i128;
            for j in 0..kk {
                let term = (0..m)
                    .try_fold(pi(j), |t, _| t.checked_mul(j))
                    .ok_or(Error::Overflow("J oracle"))?;
                acc = acc.checked_add(term).ok_or(Error::Overflow("J oracle"))?;
            }
            return Ok(Rational::from_integer(acc));
        }
    };
    Ok(Rational::new(total, 4))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        assert_eq!(sum_oracle(SumKind::R, 4).unwrap(), Rational::from_integer(1));
        assert_eq!(sum_oracle(SumKind::T { b: 1, c: 2 }, 4).unwrap(), Rational::from_integer(0));
        assert_eq!(sum_oracle(SumKind::C { p: 0 }, 8).unwrap(), Rational::from_integer(28));
        assert_eq!(sum_oracle(SumKind::J { m: 1 }, 4).unwrap(), Rational::from_integer(13));
        assert!(sum_oracle(SumKind::R, 1 << 15).is_err());
    }
}
