//! Exact non-negative costs.
//!
//! Costs are rationals. Files carry them as decimal strings (`"1"`, `"0.25"`)
//! or as `"p/q"` fractions; both are parsed without rounding. Solvers that
//! need fast arithmetic convert a family of costs to integers over a common
//! denominator with [`CostScale`].

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A non-negative exact rational cost.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cost(BigRational);

impl Cost {
    pub fn zero() -> Self {
        Cost(BigRational::zero())
    }

    pub fn one() -> Self {
        Cost(BigRational::one())
    }

    pub fn from_integer(v: u64) -> Self {
        Cost(BigRational::from_integer(BigInt::from(v)))
    }

    /// Builds `numer / denom`. Fails on a zero denominator or a negative value.
    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidCost("zero denominator".into()));
        }
        Self::from_rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_rational(value: BigRational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::InvalidCost(format!("negative cost {value}")));
        }
        Ok(Cost(value))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Nearest `f64`; only for display and timing heuristics.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Renders as a terminating decimal when possible, otherwise as `p/q`.
    pub fn to_decimal_string(&self) -> String {
        let numer = self.0.numer();
        let denom = self.0.denom();
        if denom.is_one() {
            return numer.to_string();
        }
        let mut d = denom.clone();
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        let (mut twos, mut fives) = (0u32, 0u32);
        while d.is_even() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        if !d.is_one() {
            return format!("{numer}/{denom}");
        }
        let digits = twos.max(fives);
        let scaled = numer * num_traits::pow(BigInt::from(10), digits as usize) / denom;
        let mut s = scaled.to_string();
        let digits = digits as usize;
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        let (int_part, frac_part) = s.split_at(s.len() - digits);
        format!("{int_part}.{frac_part}")
    }
}

fn parse_unsigned_decimal(s: &str) -> Option<BigRational> {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Some(BigRational::new(numer, denom))
}

impl FromStr for Cost {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Self> {
        let s = raw.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let value = if let Some((n, d)) = body.split_once('/') {
            let n = parse_unsigned_decimal(n);
            let d = parse_unsigned_decimal(d);
            match (n, d) {
                (Some(n), Some(d)) if !d.is_zero() => n / d,
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidCost(format!("zero denominator in cost \"{raw}\"")))
                }
                _ => return Err(Error::InvalidCost(format!("malformed cost \"{raw}\""))),
            }
        } else {
            parse_unsigned_decimal(body)
                .ok_or_else(|| Error::InvalidCost(format!("malformed cost \"{raw}\"")))?
        };
        if negative && !value.is_zero() {
            return Err(Error::InvalidCost(format!("negative cost \"{raw}\"")));
        }
        Ok(Cost(value))
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl fmt::Debug for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cost({})", self.to_decimal_string())
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Cost> for Cost {
    type Output = Cost;
    fn add(self, rhs: &'a Cost) -> Cost {
        Cost(self.0 + &rhs.0)
    }
}

impl<'a> Add<&'a Cost> for &'a Cost {
    type Output = Cost;
    fn add(self, rhs: &'a Cost) -> Cost {
        Cost(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Cost> for Cost {
    fn add_assign(&mut self, rhs: &Cost) {
        self.0 += &rhs.0;
    }
}

impl Mul<u64> for &Cost {
    type Output = Cost;
    fn mul(self, rhs: u64) -> Cost {
        Cost(&self.0 * BigRational::from_integer(BigInt::from(rhs)))
    }
}

impl Mul<&Cost> for &Cost {
    type Output = Cost;
    fn mul(self, rhs: &Cost) -> Cost {
        Cost(&self.0 * &rhs.0)
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::zero(), |acc, c| acc + c)
    }
}

impl<'a> Sum<&'a Cost> for Cost {
    fn sum<I: Iterator<Item = &'a Cost>>(iter: I) -> Cost {
        iter.fold(Cost::zero(), |acc, c| acc + c)
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact integer image of a family of costs over their common denominator.
///
/// Every scaled weight and the sum of all weights fit in `i64`, so solvers may
/// add up to `2^63` such sums in `i128` without overflow.
#[derive(Debug, Clone)]
pub struct CostScale {
    denom: BigInt,
}

impl CostScale {
    pub fn new<'a, I: IntoIterator<Item = &'a Cost>>(costs: I) -> Result<(Self, Vec<i128>)> {
        let costs: Vec<&Cost> = costs.into_iter().collect();
        let mut denom = BigInt::one();
        for c in &costs {
            denom = denom.lcm(c.0.denom());
        }
        let mut total = BigInt::zero();
        let mut weights = Vec::with_capacity(costs.len());
        for c in &costs {
            let w = c.0.numer() * (&denom / c.0.denom());
            total += &w;
            weights.push(w.to_i64().ok_or(Error::CostOverflow)? as i128);
        }
        if total.to_i64().is_none() || denom.sign() != Sign::Plus {
            return Err(Error::CostOverflow);
        }
        Ok((CostScale { denom }, weights))
    }

    pub fn to_cost(&self, weight: i128) -> Cost {
        assert!(weight >= 0, "scaled cost must be non-negative");
        Cost(BigRational::new(BigInt::from(weight), self.denom.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Cost {
        s.parse().unwrap()
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(c("1"), Cost::one());
        assert_eq!(c("0.5"), Cost::from_ratio(1, 2).unwrap());
        assert_eq!(c(".25"), Cost::from_ratio(1, 4).unwrap());
        assert_eq!(c("3/6"), Cost::from_ratio(1, 2).unwrap());
        assert_eq!(c("1.5/2"), Cost::from_ratio(3, 4).unwrap());
        assert_eq!(c("-0"), Cost::zero());
    }

    #[test]
    fn rejects_negative_and_malformed() {
        let err = "-1".parse::<Cost>().unwrap_err().to_string();
        assert!(err.contains("negative cost"), "{err}");
        assert!("abc".parse::<Cost>().is_err());
        assert!("1/0".parse::<Cost>().is_err());
        assert!("".parse::<Cost>().is_err());
        assert!("1e3".parse::<Cost>().is_err());
    }

    #[test]
    fn renders_terminating_and_repeating() {
        assert_eq!(c("0.50").to_string(), "0.5");
        assert_eq!(c("10").to_string(), "10");
        assert_eq!(c("0.04").to_string(), "0.04");
        assert_eq!(c("1/3").to_string(), "1/3");
        assert_eq!(c("7/8").to_string(), "0.875");
        assert_eq!(c("12.125").to_string(), "12.125");
    }

    #[test]
    fn scale_is_exact() {
        let costs = vec![c("0.5"), c("1/3"), c("2")];
        let (scale, w) = CostScale::new(&costs).unwrap();
        assert_eq!(w, vec![3, 2, 12]);
        assert_eq!(scale.to_cost(5), c("5/6"));
    }

    proptest::proptest! {
        #[test]
        fn render_parse_roundtrip(n in 0u64..1_000_000, d in 1u64..5000) {
            let cost = Cost::from_ratio(n as i64, d as i64).unwrap();
            let back: Cost = cost.to_string().parse().unwrap();
            proptest::prop_assert_eq!(back, cost);
        }
    }
}
