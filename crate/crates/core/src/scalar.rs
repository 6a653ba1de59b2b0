//! Scalar abstraction shared by every exact computation in the crate.
//!
//! Areas, Morse values, energies and actions are all elements of an ordered
//! field. The default instantiation is [`Rational`](crate::Rational); the
//! arbitrary precision [`BigRational`](num_rational::BigRational) and the
//! IEEE floats are also supported, the latter only for exploratory use since
//! monotonicity and spectral comparisons are decided by exact equality.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromStr + Send + Sync + 'static
{
    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Largest integer not exceeding `self`.
    fn floor_int(&self) -> i64;

    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    /// Parses either the native `Display` form or a `p/q` fraction.
    fn parse_scalar(s: &str) -> Option<Self> {
        if let Ok(v) = s.trim().parse::<Self>() {
            return Some(v);
        }
        let (p, q) = s.trim().split_once('/')?;
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        (q != 0).then(|| Self::from_ratio(p, q))
    }
}

impl Scalar for Ratio<i64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn floor_int(&self) -> i64 {
        self.floor().to_integer()
    }

    const EXACT: bool = true;
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }

    fn floor_int(&self) -> i64 {
        use num_traits::ToPrimitive;
        self.floor().to_integer().to_i64().expect("floor out of i64 range")
    }

    const EXACT: bool = true;
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }

    const EXACT: bool = false;
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }

    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }

    const EXACT: bool = false;
}

/// `max` for partially ordered scalars; NaN-free inputs assumed.
pub fn max_of<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn parses_fractions() {
        assert_eq!(Rational::parse_scalar("1/10"), Some(Rational::new(1, 10)));
        assert_eq!(Rational::parse_scalar(" 3 "), Some(Rational::from_int(3)));
        assert_eq!(f64::parse_scalar("1/4"), Some(0.25));
        assert_eq!(Rational::parse_scalar("1/0"), None);
    }

    #[test]
    fn floors() {
        assert_eq!(Rational::new(-1, 3).floor_int(), -1);
        assert_eq!(Rational::new(7, 2).floor_int(), 3);
        assert_eq!(BigRational::from_ratio(-7, 2).floor_int(), -4);
        assert_eq!(2.5f64.floor_int(), 2);
    }
}
