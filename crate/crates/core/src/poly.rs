//! Univariate polynomials in `z` with exact coefficients.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Signed>(v: &T) -> Sign {
        if v.is_zero() {
            Sign::Zero
        } else if v.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// True when both are nonzero and differ.
    pub fn opposes(self, other: Sign) -> bool {
        matches!(
            (self, other),
            (Sign::Negative, Sign::Positive) | (Sign::Positive, Sign::Negative)
        )
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        })
    }
}

/// Rational-coefficient polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        RatPoly { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        RatPoly::new(vec![c])
    }

    /// `c - z`
    pub fn shifted_neg_z(c: BigRational) -> Self {
        RatPoly::new(vec![c, -BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        RatPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + c)
    }

    /// Clears denominators and content; leading coefficient made positive.
    pub fn to_primitive_integer(&self) -> IntPoly {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let mut ints: Vec<BigInt> = if content.is_zero() {
            ints
        } else {
            ints.into_iter().map(|c| c / &content).collect()
        };
        if ints.last().is_some_and(|c| c.is_negative()) {
            ints.iter_mut().for_each(|c| *c = -c.clone());
        }
        IntPoly::new(ints)
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        RatPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &rhs.scale(&-BigRational::one())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

/// Integer-coefficient polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    /// From coefficients listed highest degree first, the way they are usually printed.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().rev().map(|&c| BigInt::from(c)).collect())
    }

    /// Coefficients, lowest degree first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn descending(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty")
    }

    pub fn eval_rational(&self, z: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * z + BigRational::from_integer(c.clone())
            })
    }

    pub fn sign_at(&self, z: &BigRational) -> Sign {
        Sign::of(&self.eval_rational(z))
    }

    pub fn eval_real(&self, z: &Real) -> Real {
        self.coeffs
            .iter()
            .rev()
            .fold(Real::zero(), |acc, c| acc * z + Real::from_bigint(c))
    }

    /// Value of the polynomial divided by its leading coefficient.
    pub fn eval_monic_real(&self, z: &Real) -> Real {
        self.eval_real(z) / Real::from_bigint(self.leading())
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() == 1 {
            return IntPoly::new(vec![BigInt::zero()]);
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(first && deg == 0) {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_mag = deg == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match deg {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{deg}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn primitive_integer_form() {
        // (1/2 - z)(1/3 - z) = z^2 - 5/6 z + 1/6  ->  6z^2 - 5z + 1
        let p = &RatPoly::shifted_neg_z(q(1, 2)) * &RatPoly::shifted_neg_z(q(1, 3));
        assert_eq!(
            p.to_primitive_integer(),
            IntPoly::from_descending(&[6, -5, 1])
        );
    }

    #[test]
    fn display_matches_conventional_form() {
        let p = IntPoly::from_descending(&[23328, -58320, 51534, -18321, 1975]);
        assert_eq!(
            p.to_string(),
            "23328z^4 - 58320z^3 + 51534z^2 - 18321z + 1975"
        );
        assert_eq!(
            IntPoly::from_descending(&[-1, 0, 1]).to_string(),
            "-z^2 + 1"
        );
    }

    #[test]
    fn evaluation_and_derivative() {
        let p = IntPoly::from_descending(&[6, -5, 1]);
        assert_eq!(p.eval_rational(&q(1, 2)), q(0, 1));
        assert_eq!(p.sign_at(&q(0, 1)), Sign::Positive);
        assert_eq!(p.sign_at(&q(2, 5)), Sign::Negative);
        assert_eq!(p.derivative(), IntPoly::from_descending(&[12, -5]));
        let r = p.eval_real(&Real::from_rational(&q(1, 3)));
        assert!(r.abs() < Real::pow10_neg(100));
    }
}
