//! A serializable side-by-side report of closed forms and enumerations.

use super::*;
use serde::ser::{Serialize, SerializeMap, Serializer};
use std::fmt;

/// Closed-form enumeration is only attempted up to this length for bit reversals.
pub const REPORT_ENUMERATION_LEN: u64 = 1 << 12;

/// Non-bit-reversal permutations are enumerated up to this length.
pub const REPORT_GENERIC_LEN: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatValue {
    Int(i128),
    Frac(Rational),
}

impl fmt::Display for StatValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatValue::Int(v) => write!(f, "{v}"),
            StatValue::Frac(r) if r.is_integer() => write!(f, "{}", r.numer()),
            StatValue::Frac(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Serialize for StatValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            StatValue::Int(v) => s.serialize_i128(*v),
            StatValue::Frac(r) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("exact", &self.to_string())?;
                m.serialize_entry("approx", &crate::arith::ratio_to_f64(r))?;
                m.end()
            }
        }
    }
}

impl From<u64> for StatValue {
    fn from(v: u64) -> Self {
        StatValue::Int(v as i128)
    }
}

impl From<u128> for StatValue {
    fn from(v: u128) -> Self {
        StatValue::Int(v as i128)
    }
}

impl From<i128> for StatValue {
    fn from(v: i128) -> Self {
        StatValue::Int(v)
    }
}

impl From<Rational> for StatValue {
    fn from(v: Rational) -> Self {
        StatValue::Frac(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct StatPair {
    pub closed_form: Option<StatValue>,
    pub enumerated: Option<StatValue>,
}

impl StatPair {
    /// False only when both columns are present and differ.
    pub fn agrees(&self) -> bool {
        match (self.closed_form, self.enumerated) {
            (Some(a), Some(b)) => to_ratio(a) == to_ratio(b),
            _ => true,
        }
    }
}

fn to_ratio(v: StatValue) -> Rational {
    match v {
        StatValue::Int(i) => Rational::from_integer(i),
        StatValue::Frac(r) => r,
    }
}

/// Every statistic for one permutation, with closed-form and enumerated values.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StatsReport {
    pub permutation: String,
    pub k: u64,
    pub lag: u64,
    pub num_descents: StatPair,
    pub num_ascents: StatPair,
    pub major_index: StatPair,
    pub linear_num_descents: StatPair,
    pub linear_major_index: StatPair,
    pub num_fixed_points: StatPair,
    pub sum_fixed_points: StatPair,
    pub sum_sq_fixed_points: StatPair,
    pub num_excedances: StatPair,
    pub sum_excedances: StatPair,
    pub sum_sq_excedances: StatPair,
    pub sum_descedances: StatPair,
    pub sum_sq_descedances: StatPair,
    pub num_inversions: StatPair,
    pub min_spread_2: StatPair,
    pub min_spread_3: StatPair,
    pub min_spread_4: StatPair,
    pub variance: StatPair,
    pub covariance: StatPair,
    pub theta: StatPair,
}

fn closed<T: Into<StatValue>>(v: T) -> StatPair {
    StatPair { closed_form: Some(v.into()), enumerated: None }
}

impl StatsReport {
    /// Builds the report for `perm` at correlation lag `lag`.
    pub fn build(perm: &Permutation, lag: u64) -> Result<Self> {
        let k = perm.len();
        if lag >= k {
            return Err(Error::InvalidArgument(format!("lag {lag} ≥ k = {k}")));
        }
        let mut r = StatsReport {
            permutation: perm.to_string(),
            k,
            lag,
            num_descents: StatPair::default(),
            num_ascents: StatPair::default(),
            major_index: StatPair::default(),
            linear_num_descents: StatPair::default(),
            linear_major_index: StatPair::default(),
            num_fixed_points: StatPair::default(),
            sum_fixed_points: StatPair::default(),
            sum_sq_fixed_points: StatPair::default(),
            num_excedances: StatPair::default(),
            sum_excedances: StatPair::default(),
            sum_sq_excedances: StatPair::default(),
            sum_descedances: StatPair::default(),
            sum_sq_descedances: StatPair::default(),
            num_inversions: StatPair::default(),
            min_spread_2: StatPair::default(),
            min_spread_3: StatPair::default(),
            min_spread_4: StatPair::default(),
            variance: StatPair::default(),
            covariance: StatPair::default(),
            theta: StatPair::default(),
        };
        let is_brp = matches!(perm.shape(), Shape::BitReversal { .. });
        if is_brp {
            r.fill_closed(lag)?;
        } else if let Shape::Circular { shift } = perm.shape() {
            r.num_inversions = closed(inversions_circular(k, shift)?);
        }
        let limit = if is_brp { REPORT_ENUMERATION_LEN } else { REPORT_GENERIC_LEN };
        if k <= limit {
            r.fill_enumerated(perm, lag)?;
        }
        Ok(r)
    }

    fn fill_closed(&mut self, lag: u64) -> Result<()> {
        let k = self.k;
        let d = descent_stats(k)?;
        self.num_descents = closed(d.cyclic_descents);
        self.num_ascents = closed(k - d.cyclic_descents);
        self.major_index = closed(d.cyclic_major);
        self.linear_num_descents = closed(d.linear_descents);
        self.linear_major_index = closed(d.linear_major);
        let f = fixed_point_stats(k)?;
        self.num_fixed_points = closed(f.count);
        self.sum_fixed_points = closed(f.sum);
        self.sum_sq_fixed_points = closed(f.sum_sq);
        let e = excedance_stats(k)?;
        self.num_excedances = closed(e.count);
        self.sum_excedances = closed(e.sum);
        self.sum_sq_excedances = closed(e.sum_sq);
        self.sum_descedances = closed(e.descedance_sum);
        self.sum_sq_descedances = closed(e.descedance_sum_sq);
        self.num_inversions = closed(inversions_brp(k)?);
        if k >= 8 {
            let p = Permutation::brp(PermSize::from_len(k)?.n())?;
            self.min_spread_2 = closed(spread_min(&p, 2)?);
            self.min_spread_3 = closed(spread_min(&p, 3)?);
            self.min_spread_4 = closed(spread_min(&p, 4)?);
        }
        self.variance = closed(Rational::new((k as i128) * (k as i128) - 1, 12));
        if lag > 0 {
            let s = serial_correlation(k, lag)?;
            self.covariance = closed(s.covariance);
            self.theta = closed(s.theta);
        }
        Ok(())
    }

    fn fill_enumerated(&mut self, perm: &Permutation, lag: u64) -> Result<()> {
        let k = perm.len();
        let d = descent_stats_enumerate(perm)?;
        self.num_descents.enumerated = Some(d.cyclic_descents.into());
        self.num_ascents.enumerated = Some((k - d.cyclic_descents).into());
        self.major_index.enumerated = Some(d.cyclic_major.into());
        self.linear_num_descents.enumerated = Some(d.linear_descents.into());
        self.linear_major_index.enumerated = Some(d.linear_major.into());
        let f = fixed_point_stats_enumerate(perm)?;
        self.num_fixed_points.enumerated = Some(f.count.into());
        self.sum_fixed_points.enumerated = Some(f.sum.into());
        self.sum_sq_fixed_points.enumerated = Some(f.sum_sq.into());
        let e = excedance_stats_enumerate(perm)?;
        self.num_excedances.enumerated = Some(e.count.into());
        self.sum_excedances.enumerated = Some(e.sum.into());
        self.sum_sq_excedances.enumerated = Some(e.sum_sq.into());
        self.sum_descedances.enumerated = Some(e.descedance_sum.into());
        self.sum_sq_descedances.enumerated = Some(e.descedance_sum_sq.into());
        self.num_inversions.enumerated = Some(inversions_enumerate(perm)?.into());
        if k >= 2 {
            self.min_spread_2.enumerated = Some(spread_min_enumerate(perm, 2)?.into());
            self.min_spread_3.enumerated = Some(spread_min_enumerate(perm, 3)?.into());
            self.min_spread_4.enumerated = Some(spread_min_enumerate(perm, 4)?.into());
        }
        let var = variance_enumerate(perm)?;
        self.variance.enumerated = Some(var.into());
        if lag > 0 {
            let cov = covariance_enumerate(perm, lag)?;
            self.covariance.enumerated = Some(cov.into());
            if var != Rational::from_integer(0) {
                self.theta.enumerated = Some((cov / var).into());
            }
        }
        Ok(())
    }

    /// `(name, pair)` for every statistic, in a fixed order.
    pub fn rows(&self) -> Vec<(&'static str, &StatPair)> {
        vec![
            ("num_descents", &self.num_descents),
            ("num_ascents", &self.num_ascents),
            ("major_index", &self.major_index),
            ("linear_num_descents", &self.linear_num_descents),
            ("linear_major_index", &self.linear_major_index),
            ("num_fixed_points", &self.num_fixed_points),
            ("sum_fixed_points", &self.sum_fixed_points),
            ("sum_sq_fixed_points", &self.sum_sq_fixed_points),
            ("num_excedances", &self.num_excedances),
            ("sum_excedances", &self.sum_excedances),
            ("sum_sq_excedances", &self.sum_sq_excedances),
            ("sum_descedances", &self.sum_descedances),
            ("sum_sq_descedances", &self.sum_sq_descedances),
            ("num_inversions", &self.num_inversions),
            ("min_spread_2", &self.min_spread_2),
            ("min_spread_3", &self.min_spread_3),
            ("min_spread_4", &self.min_spread_4),
            ("variance", &self.variance),
            ("covariance", &self.covariance),
            ("theta", &self.theta),
        ]
    }

    /// Names of statistics whose two columns disagree.
    pub fn mismatches(&self) -> Vec<&'static str> {
        self.rows().into_iter().filter(|(_, p)| !p.agrees()).map(|(n, _)| n).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    /// Versioned CSV, one row per statistic.
    pub fn to_csv(&self) -> String {
        let cell = |v: &Option<StatValue>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("# prunedperm-csv v1\nk,statistic,closed_form,enumerated\n");
        for (name, pair) in self.rows() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.k,
                name,
                cell(&pair.closed_form),
                cell(&pair.enumerated)
            ));
        }
        out
    }
}
