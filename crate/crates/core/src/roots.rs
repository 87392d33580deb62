//! Certified real-root isolation for integer polynomials.
//!
//! The caller supplies bracket points. Each consecutive pair must carry a
//! strict sign change of the polynomial, evaluated exactly. Bisection on
//! exact rationals narrows every bracket below [`BISECTION_WIDTH_EXP`], then
//! Newton steps at working precision finish the job. A root is accepted only
//! if the monic residual is below `10^-`[`RESIDUAL_EXP`] and it still lies
//! inside its final exact bracket.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::poly::{IntPoly, Sign};
use crate::real::{Real, PRECISION_BITS};

/// Exact bisection stops once brackets are narrower than `10^-20`.
pub const BISECTION_WIDTH_EXP: u32 = 20;
/// Certified roots satisfy `|p(x) / lead(p)| < 10^-40`.
pub const RESIDUAL_EXP: u32 = 40;
/// Roots closer than `10^-20` are treated as a multiple root.
pub const MIN_GAP_EXP: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("polynomial has degree {degree} but {intervals} brackets were given")]
    DegreeMismatch { degree: usize, intervals: usize },
    #[error("no sign change on bracket {index} ({lo}, {hi}): signs {lo_sign} / {hi_sign}")]
    NoSignChange {
        index: usize,
        lo: BigRational,
        hi: BigRational,
        lo_sign: Sign,
        hi_sign: Sign,
    },
    #[error("root {index} failed certification: residual {residual:e}")]
    NotCertified { index: usize, residual: f64 },
    #[error("roots {index} and {} are closer than 1e-{MIN_GAP_EXP} (gap {gap:e})", index + 1)]
    MultipleRoot { index: usize, gap: f64 },
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Narrows `(lo, hi)` by exact bisection until `hi - lo < width`.
fn bisect(
    poly: &IntPoly,
    mut lo: BigRational,
    mut hi: BigRational,
    lo_sign: Sign,
    width: &BigRational,
) -> (BigRational, BigRational) {
    while &(&hi - &lo) >= width {
        let mid = (&lo + &hi) * half();
        match poly.sign_at(&mid) {
            Sign::Zero => return (mid.clone(), mid),
            s if s == lo_sign => lo = mid,
            _ => hi = mid,
        }
    }
    (lo, hi)
}

/// Returns the roots, one per bracket interval, in descending order.
///
/// `brackets` must be strictly ascending and have `degree + 1` entries.
pub fn isolate_roots(poly: &IntPoly, brackets: &[BigRational]) -> Result<Vec<Real>, RootError> {
    let intervals = brackets.len().saturating_sub(1);
    if intervals != poly.degree() {
        return Err(RootError::DegreeMismatch {
            degree: poly.degree(),
            intervals,
        });
    }
    let width = BigRational::new(
        BigInt::one(),
        num_traits::pow(BigInt::from(10), BISECTION_WIDTH_EXP as usize),
    );
    // Newton stops once the step is below ~2^-(PRECISION_BITS - 16).
    let newton_eps = Real::one() / Real::from_i64(2).powi(PRECISION_BITS - 16);
    let tolerance = Real::pow10_neg(RESIDUAL_EXP);
    let deriv = poly.derivative();

    let mut roots = Vec::with_capacity(intervals);
    for (index, pair) in brackets.windows(2).enumerate() {
        let (lo, hi) = (&pair[0], &pair[1]);
        let (lo_sign, hi_sign) = (poly.sign_at(lo), poly.sign_at(hi));
        if !lo_sign.opposes(hi_sign) {
            return Err(RootError::NoSignChange {
                index,
                lo: lo.clone(),
                hi: hi.clone(),
                lo_sign,
                hi_sign,
            });
        }
        let (mut lo, mut hi) = bisect(poly, lo.clone(), hi.clone(), lo_sign, &width);
        let mut x = Real::from_rational(&((&lo + &hi) * half()));
        if lo != hi {
            for _ in 0..64 {
                let step = poly.eval_real(&x) / deriv.eval_real(&x);
                if !step.is_finite() {
                    break;
                }
                x = &x - &step;
                if step.abs() < newton_eps {
                    break;
                }
            }
            let exact = x.to_rational();
            if exact < lo || exact > hi {
                // Newton wandered; finish by bisection to full precision.
                let fine = BigRational::new(BigInt::one(), BigInt::one() << (PRECISION_BITS - 8));
                (lo, hi) = bisect(poly, lo, hi, lo_sign, &fine);
                x = Real::from_rational(&((&lo + &hi) * half()));
            }
        }
        let residual = poly.eval_monic_real(&x).abs();
        if residual >= tolerance {
            return Err(RootError::NotCertified {
                index,
                residual: residual.to_f64(),
            });
        }
        roots.push(x);
    }
    roots.reverse();

    let min_gap = Real::pow10_neg(MIN_GAP_EXP);
    for (index, w) in roots.windows(2).enumerate() {
        let gap = &w[0] - &w[1];
        if gap < min_gap {
            return Err(RootError::MultipleRoot {
                index,
                gap: gap.to_f64(),
            });
        }
    }
    Ok(roots)
}
