//! Spectral representation of the tail as a mixture of geometric tails,
//! `t(n) = Σ_i c_i e_i^(n-1)`, where the `e_i` are the eigenvalues of the
//! transient matrix `Q`.
//!
//! Eigenvalues come either from the trigonometric form of the quartic's
//! roots (standard craps only) or from certified root isolation of the
//! characteristic polynomial, bracketed by the diagonal of `Q`. Mixture
//! coefficients are fitted to the exact tails `t(1..=m)` through a
//! Vandermonde system; for standard craps they are cross-checked against
//! the explicit coefficient formula.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::analysis::interlacing_brackets;
use crate::exact::{tail_table_matrix, ExactError};
use crate::game::{compile_chain, ChainSpec, PointGameSpec};
use crate::matrix::SquareMatrix;
use crate::poly::{IntPoly, RatPoly};
use crate::real::Real;
use crate::roots::{isolate_roots, RootError, MIN_GAP_EXP, RESIDUAL_EXP};

/// Cross-checks between two high-precision routes must agree to `10^-40`.
pub const AGREEMENT_EXP: u32 = 40;
/// Eigenvector residual tolerance, `10^-30`.
pub const EIGENVECTOR_RESIDUAL_EXP: u32 = 30;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("transient matrix is not arrowhead-structured; no interlacing brackets")]
    NotArrowhead,
    #[error("spectrum has {got} eigenvalues, chain has {expected} transient states")]
    SizeMismatch { got: usize, expected: usize },
    #[error("eigenvalues {index} and {} are too close for a stable fit (gap {gap:e})", index + 1)]
    IllConditioned { index: usize, gap: f64 },
    #[error("{what}: routes disagree by {diff:e}")]
    Disagreement { what: &'static str, diff: f64 },
    #[error("the radical form gives a nonpositive alpha")]
    NonPositiveAlpha,
    #[error("this operation is specific to standard craps")]
    NotStandardCraps,
    #[error("eigenvector residual {residual:e} exceeds 1e-{EIGENVECTOR_RESIDUAL_EXP}")]
    EigenvectorResidual { residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    RadicalClosedForm,
    NumericRoots,
}

impl fmt::Display for SpectrumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectrumMethod::RadicalClosedForm => "radical closed form",
            SpectrumMethod::NumericRoots => "numeric roots",
        })
    }
}

/// Eigenvalues of `Q`, descending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Real>,
    pub method: SpectrumMethod,
    /// `det(Q - zI)` scaled to coprime integers, leading coefficient positive.
    pub charpoly: IntPoly,
}

#[derive(Debug, Clone)]
pub struct MixtureTerm {
    pub coefficient: Real,
    pub rate: Real,
}

/// `t(n) = Σ c_i e_i^(n-1)`, terms sorted by rate descending.
#[derive(Debug, Clone)]
pub struct GeometricMixture {
    pub terms: Vec<MixtureTerm>,
}

impl GeometricMixture {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> &MixtureTerm {
        &self.terms[0]
    }

    /// `Σ c_i`, equal to `t(1) = 1`.
    pub fn coefficient_sum(&self) -> Real {
        self.terms.iter().map(|t| t.coefficient.clone()).sum()
    }

    /// `Σ c_i e_i`, equal to `t(2)`.
    pub fn weighted_sum(&self) -> Real {
        self.terms.iter().map(|t| &t.coefficient * &t.rate).sum()
    }

    /// Leading coefficient positive and every other coefficient negative.
    pub fn has_single_positive_leading(&self) -> bool {
        self.terms
            .first()
            .is_some_and(|t| t.coefficient.is_positive())
            && self.terms[1..].iter().all(|t| t.coefficient.is_negative())
    }
}

/// Characteristic polynomial of the chain's transient block.
pub fn characteristic_polynomial(game: &ChainSpec) -> IntPoly {
    charpoly_of(game.q())
}

/// `det(M - zI)` in primitive integer form. Arrowhead matrices use the
/// row-reduction formula; anything else falls back to Faddeev–LeVerrier.
pub fn charpoly_of(m: &SquareMatrix) -> IntPoly {
    if m.dim() > 0 && m.is_arrowhead() {
        arrowhead_determinant(m).to_primitive_integer()
    } else {
        faddeev_leverrier(m).to_primitive_integer()
    }
}

/// Subtracting `M[0][i] / (M[i][i] - z)` times row `i` from the first row
/// leaves an upper-triangular matrix, so
/// `det(M - zI) = (a - z) Π (d_i - z) - Σ_i b_i c_i Π_{j≠i} (d_j - z)`.
pub fn arrowhead_determinant(m: &SquareMatrix) -> RatPoly {
    let n = m.dim();
    let factors: Vec<RatPoly> = (1..n)
        .map(|i| RatPoly::shifted_neg_z(m[(i, i)].clone()))
        .collect();
    let product_except = |skip: Option<usize>| {
        factors
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .fold(RatPoly::constant(BigRational::one()), |acc, (_, f)| {
                &acc * f
            })
    };
    let mut det = &RatPoly::shifted_neg_z(m[(0, 0)].clone()) * &product_except(None);
    for i in 1..n {
        let coupling = &m[(0, i)] * &m[(i, 0)];
        if coupling.is_zero() {
            continue;
        }
        det = &det - &product_except(Some(i - 1)).scale(&coupling);
    }
    det
}

/// `det(zI - M)` by the Faddeev–LeVerrier recurrence.
pub fn faddeev_leverrier(m: &SquareMatrix) -> RatPoly {
    let n = m.dim();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk = SquareMatrix::zeros(n);
    for k in 1..=n {
        let mut next = m * &mk;
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = m * &mk;
        let trace: BigRational = am.diagonal().into_iter().sum();
        coeffs[n - k] = -trace / BigRational::from_integer((k as i64).into());
    }
    RatPoly::new(coeffs)
}

/// Eigenvalues of `Q` by certified root isolation.
pub fn eigenvalues_numeric(game: &ChainSpec) -> Result<Spectrum, SpectralError> {
    let charpoly = characteristic_polynomial(game);
    let diag = interlacing_brackets(game.q()).ok_or(SpectralError::NotArrowhead)?;
    let mut brackets = Vec::with_capacity(diag.len() + 2);
    brackets.push(BigRational::zero());
    brackets.extend(diag.into_iter().rev());
    brackets.push(BigRational::one());
    let eigenvalues = isolate_roots(&charpoly, &brackets)?;
    Ok(Spectrum {
        eigenvalues,
        method: SpectrumMethod::NumericRoots,
        charpoly,
    })
}

/// `α = 2√9829 cos[(1/3) arccos(-710369 / (9829√9829))]`, the real value of
/// `ζ^(1/3) + 9829 / ζ^(1/3)` for `ζ = -710369 + 18i√1373296647`.
pub fn craps_alpha() -> Real {
    let s = Real::from_i64(9829).sqrt();
    let arg = Real::from_i64(-710_369) / (Real::from_i64(9829) * &s);
    Real::from_i64(2) * &s * (arg.acos() / Real::from_i64(3)).cos()
}

/// Root `e(u, v)` of the craps quartic, `u, v ∈ {+1, -1}`.
pub fn craps_root(alpha: &Real, u: i64, v: i64) -> Real {
    let three = Real::from_i64(3);
    let first = ((Real::from_i64(349) + alpha) / &three).sqrt();
    let inner = (Real::from_i64(698) - alpha) / &three
        - Real::from_i64(2136 * u) * (&three / (Real::from_i64(349) + alpha)).sqrt();
    Real::from_i64(5) / Real::from_i64(8)
        + Real::from_i64(u) * first / Real::from_i64(72)
        + Real::from_i64(v) * inner.sqrt() / Real::from_i64(72)
}

/// The four craps eigenvalues from their radical expressions, checked
/// against certified numeric roots.
pub fn eigenvalues_radical() -> Result<Spectrum, SpectralError> {
    let alpha = craps_alpha();
    if !alpha.is_positive() {
        return Err(SpectralError::NonPositiveAlpha);
    }
    let eigenvalues: Vec<Real> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        .into_iter()
        .map(|(u, v)| craps_root(&alpha, u, v))
        .collect();

    let numeric = eigenvalues_numeric(&compile_chain(&PointGameSpec::craps()))?;
    let tol = Real::pow10_neg(AGREEMENT_EXP);
    let residual_tol = Real::pow10_neg(RESIDUAL_EXP);
    for (radical, root) in eigenvalues.iter().zip(&numeric.eigenvalues) {
        let diff = (radical - root).abs();
        if diff >= tol {
            return Err(SpectralError::Disagreement {
                what: "radical vs numeric eigenvalues",
                diff: diff.to_f64(),
            });
        }
        let residual = numeric.charpoly.eval_monic_real(radical).abs();
        if residual >= residual_tol {
            return Err(SpectralError::Disagreement {
                what: "radical root residual",
                diff: residual.to_f64(),
            });
        }
    }
    Ok(Spectrum {
        eigenvalues,
        method: SpectrumMethod::RadicalClosedForm,
        charpoly: numeric.charpoly,
    })
}

/// `f(w,x,y,z) = (36w - 25)[4835 - 5580(x+y+z) + 6480(xy+xz+yz) - 7776xyz]
///               / [38880 (w-x)(w-y)(w-z)]`
fn craps_coefficient(w: &Real, x: &Real, y: &Real, z: &Real) -> Real {
    let r = |v: i64| Real::from_i64(v);
    let s1 = x + y + z;
    let s2 = x * y + x * z + y * z;
    let s3 = x * y * z;
    let bracket = r(4835) - r(5580) * s1 + r(6480) * s2 - r(7776) * s3;
    let numerator = (r(36) * w - r(25)) * bracket;
    let denominator = r(38880) * (w - x) * (w - y) * (w - z);
    numerator / denominator
}

/// Craps mixture coefficients from the explicit formula, with the
/// eigenvalue arguments rotated cyclically.
pub fn craps_coefficients_closed_form(e: &[Real]) -> Result<Vec<Real>, SpectralError> {
    if e.len() != 4 {
        return Err(SpectralError::SizeMismatch {
            got: e.len(),
            expected: 4,
        });
    }
    Ok((0..4)
        .map(|i| craps_coefficient(&e[i], &e[(i + 1) % 4], &e[(i + 2) % 4], &e[(i + 3) % 4]))
        .collect())
}

fn solve_dense(mut a: Vec<Vec<Real>>, mut b: Vec<Real>) -> Vec<Real> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("nonempty");
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = &a[row][col] / &a[col][col];
            for k in col..n {
                let v = &f * &a[col][k];
                a[row][k] = &a[row][k] - v;
            }
            let v = &f * &b[col];
            b[row] = &b[row] - v;
        }
    }
    let mut x = vec![Real::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row].clone();
        for k in row + 1..n {
            s = s - &a[row][k] * &x[k];
        }
        x[row] = s / &a[row][row];
    }
    x
}

/// Fits `c_i` from `Σ_i c_i e_i^(k-1) = t(k)`, `k = 1..=m`, using exact tails.
pub fn mixture_coefficients(
    game: &ChainSpec,
    spectrum: &Spectrum,
) -> Result<GeometricMixture, SpectralError> {
    let m = spectrum.eigenvalues.len();
    if m != game.transient_count() {
        return Err(SpectralError::SizeMismatch {
            got: m,
            expected: game.transient_count(),
        });
    }
    let min_gap = Real::pow10_neg(MIN_GAP_EXP);
    for (index, w) in spectrum.eigenvalues.windows(2).enumerate() {
        let gap = &w[0] - &w[1];
        if gap < min_gap {
            return Err(SpectralError::IllConditioned {
                index,
                gap: gap.to_f64(),
            });
        }
    }
    let tails = tail_table_matrix(game, m);
    let vandermonde: Vec<Vec<Real>> = (0..m)
        .map(|k| spectrum.eigenvalues.iter().map(|e| e.powi(k)).collect())
        .collect();
    let rhs: Vec<Real> = tails.values().iter().map(Real::from_rational).collect();
    let coefficients = solve_dense(vandermonde, rhs);

    if game.is_standard_craps() {
        let explicit = craps_coefficients_closed_form(&spectrum.eigenvalues)?;
        let diff = coefficients
            .iter()
            .zip(&explicit)
            .map(|(a, b)| (a - b).abs())
            .fold(Real::zero(), Real::max);
        if diff >= Real::pow10_neg(AGREEMENT_EXP) {
            return Err(SpectralError::Disagreement {
                what: "Vandermonde vs explicit craps coefficients",
                diff: diff.to_f64(),
            });
        }
    }

    Ok(GeometricMixture {
        terms: coefficients
            .into_iter()
            .zip(spectrum.eigenvalues.iter().cloned())
            .map(|(coefficient, rate)| MixtureTerm { coefficient, rate })
            .collect(),
    })
}

/// Right eigenvector of the craps `P` for `eigenvalue`: the all-ones vector
/// for the unit eigenvalue, otherwise `r(36e)` with
///
/// ```text
/// r(x) = ( -5 + x/5,
///          -175 + (581/15)x - (21/10)x² + (1/30)x³,
///          275/2 - (1199/40)x + (8/5)x² - (1/40)x³,
///          1,
///          0 )
/// ```
///
/// The residual `max |P r - e r|` must be below `10^-30`.
pub fn eigenvector(game: &ChainSpec, eigenvalue: &Real) -> Result<Vec<Real>, SpectralError> {
    if !game.is_standard_craps() {
        return Err(SpectralError::NotStandardCraps);
    }
    let n = game.p().dim();
    let v = if *eigenvalue == Real::one() {
        vec![Real::one(); n]
    } else {
        let q = |a: i64, b: i64| Real::from_rational(&BigRational::new(a.into(), b.into()));
        let x = Real::from_i64(36) * eigenvalue;
        let x2 = &x * &x;
        let x3 = &x2 * &x;
        vec![
            q(-5, 1) + q(1, 5) * &x,
            q(-175, 1) + q(581, 15) * &x - q(21, 10) * &x2 + q(1, 30) * &x3,
            q(275, 2) - q(1199, 40) * &x + q(8, 5) * &x2 - q(1, 40) * &x3,
            Real::one(),
            Real::zero(),
        ]
    };
    let residual = eigen_residual(game.p(), eigenvalue, &v);
    if residual >= Real::pow10_neg(EIGENVECTOR_RESIDUAL_EXP) {
        return Err(SpectralError::EigenvectorResidual {
            residual: residual.to_f64(),
        });
    }
    Ok(v)
}

/// `max_i |(M v)_i - λ v_i|`.
pub fn eigen_residual(m: &SquareMatrix, lambda: &Real, v: &[Real]) -> Real {
    m.rows()
        .zip(v)
        .map(|(row, vi)| {
            let mv: Real = row
                .iter()
                .zip(v)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, x)| Real::from_rational(a) * x)
                .sum();
            (mv - lambda * vi).abs()
        })
        .fold(Real::zero(), Real::max)
}

/// `Σ c_i e_i^(n-1)`.
pub fn tail_closed_form(mixture: &GeometricMixture, n: usize) -> Real {
    assert!(n >= 1, "hand lengths start at 1");
    mixture
        .terms
        .iter()
        .map(|t| &t.coefficient * t.rate.powi(n - 1))
        .sum()
}

#[derive(Debug, Clone)]
pub struct LeadingTermBound {
    /// `c_1 e_1^(n-1)`
    pub bound: Real,
    /// `c_1 e_1^(n-1) / t(n)`
    pub ratio: Real,
}

/// The leading mixture term at `n` and its ratio to the exact tail.
pub fn leading_term_bound(
    mixture: &GeometricMixture,
    n: usize,
    exact_tail: &BigRational,
) -> LeadingTermBound {
    assert!(n >= 1, "hand lengths start at 1");
    let lead = mixture.leading();
    let bound = &lead.coefficient * lead.rate.powi(n - 1);
    let ratio = &bound / Real::from_rational(exact_tail);
    LeadingTermBound { bound, ratio }
}

/// First `n` (within the table) at which the leading-term ratio drops below
/// `1 + 10^-m`.
pub fn first_ratio_below(
    mixture: &GeometricMixture,
    tails: &[BigRational],
    m: u32,
) -> Option<usize> {
    let threshold = Real::one() + Real::pow10_neg(m);
    tails
        .iter()
        .enumerate()
        .map(|(i, t)| (i + 1, leading_term_bound(mixture, i + 1, t).ratio))
        .find(|(_, ratio)| *ratio < threshold)
        .map(|(n, _)| n)
}
