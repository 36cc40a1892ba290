//! Checked exact integer arithmetic.
//!
//! [`Exact`] wraps an `i128` and poisons itself on overflow, so long closed
//! forms can be written with ordinary operators and checked once at the end.

use crate::error::{Error, Result};
use num_rational::Ratio;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exact(Option<i128>);

impl Exact {
    pub fn new(v: i128) -> Self {
        Exact(Some(v))
    }

    pub fn get(self, ctx: &'static str) -> Result<i128> {
        self.0.ok_or(Error::Overflow(ctx))
    }

    /// Division that must leave no remainder.
    pub fn div_exact(self, d: i128, ctx: &'static str) -> Result<i128> {
        let v = self.get(ctx)?;
        if v % d != 0 {
            return Err(Error::Verification(format!(
                "{ctx}: {v} is not divisible by {d}"
            )));
        }
        Ok(v / d)
    }

    pub fn pow(self, e: u32) -> Self {
        (0..e).fold(Exact::new(1), |acc, _| acc * self)
    }

    pub fn floor_div(self, d: i128) -> Self {
        Exact(self.0.map(|v| v.div_euclid(d)))
    }
}

impl From<i128> for Exact {
    fn from(v: i128) -> Self {
        Exact::new(v)
    }
}

impl From<u64> for Exact {
    fn from(v: u64) -> Self {
        Exact::new(v as i128)
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, o: Exact) -> Exact {
        Exact(self.0.zip(o.0).and_then(|(a, b)| a.checked_add(b)))
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, o: Exact) -> Exact {
        Exact(self.0.zip(o.0).and_then(|(a, b)| a.checked_sub(b)))
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, o: Exact) -> Exact {
        Exact(self.0.zip(o.0).and_then(|(a, b)| a.checked_mul(b)))
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact(self.0.and_then(|a| a.checked_neg()))
    }
}

macro_rules! mixed_ops {
    ($($op:ident $f:ident),*) => {$(
        impl $op<i128> for Exact {
            type Output = Exact;
            fn $f(self, o: i128) -> Exact { self.$f(Exact::new(o)) }
        }
        impl $op<Exact> for i128 {
            type Output = Exact;
            fn $f(self, o: Exact) -> Exact { Exact::new(self).$f(o) }
        }
    )*};
}
mixed_ops!(Add add, Sub sub, Mul mul);

/// ⌊a/b⌋ for b > 0.
pub fn floor_div(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

/// 1 when `b` divides `a`, else 0.
pub fn divides(a: i128, b: i128) -> i128 {
    (a.rem_euclid(b) == 0) as i128
}

/// `2b·((a/b))`: the sawtooth of a/b scaled to an integer.
pub fn saw2(a: i128, b: i128) -> i128 {
    let r = a.rem_euclid(b);
    if r == 0 {
        0
    } else {
        2 * r - b
    }
}

/// Checked `2^e` as `i128`.
pub fn pow2(e: u32) -> Result<i128> {
    if e >= 127 {
        Err(Error::Overflow("power of two"))
    } else {
        Ok(1i128 << e)
    }
}

/// `√k` for even `n`, `√(k/2)` for odd `n`.
pub fn half_root(n: u32) -> i128 {
    1i128 << (n / 2)
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Checked construction of a reduced rational.
pub fn ratio(num: Exact, den: Exact, ctx: &'static str) -> Result<Rational> {
    let n = num.get(ctx)?;
    let d = den.get(ctx)?;
    if d == 0 {
        return Err(Error::InvalidArgument(format!("{ctx}: zero denominator")));
    }
    Ok(Rational::new(n, d))
}
