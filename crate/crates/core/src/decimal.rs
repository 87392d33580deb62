//! Decimal rendering of exact rationals with round-half-even.
//!
//! Values with `|x| < 1e-4` or `|x| >= 1e7` are written in scientific
//! notation (`1.78882426e-10`); everything else is written positionally.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A value rounded to a fixed number of significant digits:
/// `sign * 0.d1d2..dk * 10^(exponent + 1)`, i.e. `d1.d2..dk * 10^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rounded {
    pub negative: bool,
    pub digits: String,
    pub exponent: i64,
}

fn pow10(k: u64) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

fn scale_pow10(x: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        x * BigRational::from_integer(pow10(k as u64))
    } else {
        x / BigRational::from_integer(pow10((-k) as u64))
    }
}

/// Integer nearest to `x`, ties to even.
pub fn round_half_even(x: &BigRational) -> BigInt {
    let floor = x.floor().to_integer();
    let frac = x - BigRational::from_integer(floor.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    match frac.cmp(&half) {
        std::cmp::Ordering::Less => floor,
        std::cmp::Ordering::Greater => floor + 1,
        std::cmp::Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    }
}

/// Largest `k` with `10^k <= x`, for `x > 0`.
fn decimal_exponent(x: &BigRational) -> i64 {
    let num_digits = x.numer().to_string().len() as i64;
    let den_digits = x.denom().to_string().len() as i64;
    let mut k = num_digits - den_digits;
    while scale_pow10(x, -k) >= BigRational::from_integer(BigInt::from(10)) {
        k += 1;
    }
    while scale_pow10(x, -k) < BigRational::one() {
        k -= 1;
    }
    k
}

/// Rounds `x` to `sig` significant digits (`sig >= 1`).
pub fn round_significant(x: &BigRational, sig: usize) -> Rounded {
    let sig = sig.max(1);
    if x.is_zero() {
        return Rounded {
            negative: false,
            digits: "0".repeat(sig),
            exponent: 0,
        };
    }
    let magnitude = x.abs();
    let mut exponent = decimal_exponent(&magnitude);
    let mut n = round_half_even(&scale_pow10(&magnitude, sig as i64 - 1 - exponent));
    if n == pow10(sig as u64) {
        n /= 10;
        exponent += 1;
    }
    Rounded {
        negative: x.is_negative(),
        digits: n.to_string(),
        exponent,
    }
}

/// Scientific notation with `sig` significant digits, e.g. `5.59e9`.
pub fn format_scientific(x: &BigRational, sig: usize) -> String {
    let r = round_significant(x, sig);
    let mut out = String::new();
    if r.negative {
        out.push('-');
    }
    out.push_str(&r.digits[..1]);
    if r.digits.len() > 1 {
        out.push('.');
        out.push_str(&r.digits[1..]);
    }
    out.push_str(&format!("e{}", r.exponent));
    out
}

/// Positional notation with exactly `decimals` digits after the point.
pub fn format_fixed(x: &BigRational, decimals: usize) -> String {
    let n = round_half_even(&scale_pow10(x, decimals as i64));
    let negative = n.is_negative();
    let digits = n.abs().to_string();
    let digits = if digits.len() <= decimals {
        format!("{}{}", "0".repeat(decimals + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int, frac) = digits.split_at(digits.len() - decimals);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(int);
    if decimals > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// `sig` significant digits, scientific outside `[1e-4, 1e7)`.
pub fn format_significant(x: &BigRational, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let r = round_significant(x, sig);
    if r.exponent < -4 || r.exponent >= 7 {
        return format_scientific(x, sig);
    }
    let decimals = (sig as i64 - 1 - r.exponent).max(0) as usize;
    format_fixed(x, decimals)
}
