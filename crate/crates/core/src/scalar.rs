//! Exact scalar types.
//!
//! Every value in the engine is an element of an exact ordered field. The
//! production type is [`BigRational`]; fixed-width rationals are accepted
//! where inputs are known to stay small.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};

/// An exact ordered field: the values of characteristic functions,
/// allocations and linear-system coefficients.
///
/// Floating-point types are deliberately not implementors: comparisons such
/// as `x(S) >= v(S)` and tests for a zero pivot must be decided exactly.
pub trait Scalar:
    Num + Signed + Clone + Ord + Debug + Display + FromStr + Send + Sync + Sum + 'static
{
    fn from_i64(v: i64) -> Self;

    /// `n / d`; panics if `d == 0`.
    fn ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }

    /// Nearest `f64`, for display only.
    fn approx_f64(&self) -> f64;
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }

    fn approx_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

macro_rules! impl_fixed_ratio {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            fn from_i64(v: i64) -> Self {
                Ratio::from_integer(<$int>::from(v))
            }

            fn approx_f64(&self) -> f64 {
                *self.numer() as f64 / *self.denom() as f64
            }
        }
    };
}

impl_fixed_ratio!(i64);
impl_fixed_ratio!(i128);

/// Factorial as a scalar.
pub(crate) fn factorial<T: Scalar>(n: usize) -> T {
    (1..=n as i64).fold(T::one(), |acc, k| acc * T::from_i64(k))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` with surrounding whitespace tolerated.
pub fn parse_scalar<T: Scalar>(text: &str) -> Option<T> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n = T::from_str(n.trim()).ok()?;
        let d = T::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(n / d)
    } else {
        T::from_str(text).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Q = BigRational;

    #[test]
    fn integer_and_unit_fraction_parse_equal() {
        assert_eq!(parse_scalar::<Q>("5"), parse_scalar::<Q>("5/1"));
        assert_eq!(parse_scalar::<Q>("10/6"), Some(Q::ratio(5, 3)));
        assert_eq!(parse_scalar::<Q>(" -3/4 "), Some(Q::ratio(-3, 4)));
        assert_eq!(parse_scalar::<Q>("1/0"), None);
        assert_eq!(parse_scalar::<Q>(""), None);
        assert_eq!(parse_scalar::<Q>("abc"), None);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial::<Q>(0), Q::from_i64(1));
        assert_eq!(factorial::<Q>(5), Q::from_i64(120));
        assert_eq!(factorial::<Ratio<i64>>(10), Ratio::from_integer(3_628_800));
    }

    proptest! {
        #[test]
        fn sums_stay_normalized(a in -1000i64..1000, b in 1i64..500, c in -1000i64..1000, d in 1i64..500) {
            let x = Q::ratio(a, b);
            let y = Q::ratio(c, d);
            let s = x.clone() + y.clone();
            // lowest terms, positive denominator
            let g = num_integer::Integer::gcd(s.numer(), s.denom());
            prop_assert!(s.denom() > &BigInt::from(0));
            prop_assert_eq!(g.clone(), if s.numer() == &BigInt::from(0) { s.denom().clone() } else { BigInt::from(1) });
            // exact: cross-multiplied identity holds
            prop_assert_eq!(s.clone() * Q::from_i64(b * d), Q::from_i64(a * d + c * b));
            prop_assert_eq!(s - y, x);
        }

        #[test]
        fn display_parse_round_trip(a in -10_000i64..10_000, b in 1i64..1000) {
            let x = Q::ratio(a, b);
            prop_assert_eq!(parse_scalar::<Q>(&x.to_string()), Some(x));
        }
    }
}
