//! Fixed-precision real numbers backed by `astro-float`.
//!
//! Every spectral computation runs at [`PRECISION_BITS`] bits (about 115
//! significant decimal digits), which leaves ample headroom over the 18
//! decimals reported for the craps spectrum.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Working precision in bits.
pub const PRECISION_BITS: usize = 384;

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BITS: usize = Word::BITS as usize;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("astro-float constant cache"));
}

/// A real number carried at [`PRECISION_BITS`] of precision.
#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn zero() -> Self {
        Real(BigFloat::from_i32(0, PRECISION_BITS))
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Real(BigFloat::from_i64(v, PRECISION_BITS))
    }

    /// Exact conversion of an integer, rounded once to working precision.
    pub fn from_bigint(v: &BigInt) -> Self {
        let mut f = Self::from_bigint_exact(v);
        f.set_precision(PRECISION_BITS, RM)
            .expect("valid working precision");
        Real(f)
    }

    pub fn from_rational(v: &BigRational) -> Self {
        let num = Self::from_bigint_exact(v.numer());
        let den = Self::from_bigint_exact(v.denom());
        Real(num.div(&den, PRECISION_BITS, RM))
    }

    // Keeps every bit of the integer so that the single rounding happens in
    // the division.
    fn from_bigint_exact(v: &BigInt) -> BigFloat {
        if v.is_zero() {
            return BigFloat::from_i32(0, PRECISION_BITS);
        }
        let sign = if v.is_negative() {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let words = v.magnitude().to_u64_digits();
        BigFloat::from_words(&words, sign, (words.len() * WORD_BITS) as i32)
    }

    /// The exact binary value of `self` as a rational.
    pub fn to_rational(&self) -> BigRational {
        let Some((words, _, sign, exponent, _)) = self.0.as_raw_parts() else {
            panic!("non-finite real has no rational value");
        };
        if self.0.is_zero() {
            return BigRational::zero();
        }
        let mantissa = BigInt::from(BigUint::from_slice(
            &words
                .iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<Vec<_>>(),
        ));
        let shift = exponent as i64 - (words.len() * WORD_BITS) as i64;
        let mantissa = if sign == Sign::Neg {
            -mantissa
        } else {
            mantissa
        };
        if shift >= 0 {
            BigRational::from_integer(mantissa << shift as usize)
        } else {
            BigRational::new(mantissa, BigInt::one() << (-shift) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.sqrt(PRECISION_BITS, RM))
    }

    pub fn cos(&self) -> Self {
        CONSTS.with(|cc| Real(self.0.cos(PRECISION_BITS, RM, &mut cc.borrow_mut())))
    }

    pub fn acos(&self) -> Self {
        CONSTS.with(|cc| Real(self.0.acos(PRECISION_BITS, RM, &mut cc.borrow_mut())))
    }

    pub fn powi(&self, n: usize) -> Self {
        if n == 0 {
            return Self::one();
        }
        Real(self.0.powi(n, PRECISION_BITS, RM))
    }

    pub fn abs(&self) -> Self {
        Real(self.0.abs())
    }

    /// `10^-k` at working precision.
    pub fn pow10_neg(k: u32) -> Self {
        Real::one() / Real::from_i64(10).powi(k as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.0.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl From<i64> for Real {
    fn from(v: i64) -> Self {
        Real::from_i64(v)
    }
}

impl From<&BigRational> for Real {
    fn from(v: &BigRational) -> Self {
        Real::from_rational(v)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                Real(self.0.$method(&rhs.0, PRECISION_BITS, RM))
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0.clone())
    }
}

impl std::iter::Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        f.write_str(&crate::decimal::format_significant(
            &self.to_rational(),
            digits,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip_is_exact_for_dyadics() {
        let q = BigRational::new(BigInt::from(-12345), BigInt::from(1024));
        assert_eq!(Real::from_rational(&q).to_rational(), q);
    }

    #[test]
    fn large_integers_convert_with_one_rounding() {
        let big = BigInt::from(36).pow(153);
        let r = Real::from_bigint(&big);
        let back = r.to_rational();
        let rel = ((back - BigRational::from_integer(big.clone()))
            / BigRational::from_integer(big))
        .abs();
        assert!(rel < BigRational::new(BigInt::one(), BigInt::one() << 380));
    }

    #[test]
    fn one_third_is_accurate_to_working_precision() {
        let third = Real::from_rational(&BigRational::new(1.into(), 3.into()));
        let err = (third * Real::from_i64(3) - Real::one()).abs();
        assert!(err < Real::pow10_neg(110));
    }

    #[test]
    fn trig_round_trip() {
        let x = Real::from_rational(&BigRational::new((-7).into(), 10.into()));
        let back = x.acos().cos();
        assert!((back - x).abs() < Real::pow10_neg(100));
    }

    #[test]
    fn ordering_and_signs() {
        let a = Real::from_i64(-2);
        let b = Real::from_i64(3);
        assert!(a < b);
        assert!(a.is_negative() && b.is_positive());
        assert!(!Real::zero().is_positive() && !Real::zero().is_negative());
        assert_eq!(Real::from_i64(2).powi(10), Real::from_i64(1024));
        assert_eq!(Real::from_i64(9).sqrt(), Real::from_i64(3));
    }
}
