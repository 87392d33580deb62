//! Exact tail probabilities `t(n) = P(L >= n)` of the hand length.
//!
//! Two independent routes are provided. The renewal recursion conditions on
//! the come-out roll and works on any arrowhead chain:
//!
//! ```text
//! t(1) = 1
//! t(n) = a t(n-1) + Σ_g b_g r_g^(n-2) + Σ_g b_g c_g Σ_{l=2}^{n-1} r_g^(l-2) t(n-l)
//! ```
//!
//! where `a = Q[co][co]`, and for point state `g`: `b_g = Q[co][g]` (entry
//! mass), `c_g = Q[g][co]` (make probability), `r_g = Q[g][g]` (stay
//! probability). The matrix route sums the first row of `Q^(n-1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::game::ChainSpec;
use crate::matrix::SquareMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("the recursion needs an arrowhead transient matrix")]
    NotArrowhead,
    #[error("the hand never ends with positive probability; mean length is infinite")]
    InfiniteMean,
}

/// `t(1..=max_n)` for one chain.
#[derive(Debug, Clone)]
pub struct TailTable<'a> {
    game: &'a ChainSpec,
    values: Vec<BigRational>,
}

impl<'a> TailTable<'a> {
    pub fn game(&self) -> &'a ChainSpec {
        self.game
    }

    pub fn max_n(&self) -> usize {
        self.values.len()
    }

    /// `t(n)` for `1 <= n <= max_n`.
    pub fn get(&self, n: usize) -> &BigRational {
        assert!(n >= 1, "hand lengths start at 1");
        &self.values[n - 1]
    }

    /// `(n, t(n))` pairs in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.values.iter().enumerate().map(|(i, t)| (i + 1, t))
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<BigRational> {
        self.values
    }
}

struct ScaledArrowhead {
    denom: BigInt,
    stay: BigInt,
    // (entry mass, make probability, stay probability), all scaled by denom
    groups: Vec<(BigInt, BigInt, BigInt)>,
}

fn scaled_arrowhead(q: &SquareMatrix) -> Result<ScaledArrowhead, ExactError> {
    if !q.is_arrowhead() {
        return Err(ExactError::NotArrowhead);
    }
    let denom = q
        .rows()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scale = |x: &BigRational| (x * BigRational::from_integer(denom.clone())).to_integer();
    let groups = (1..q.dim())
        .map(|g| (scale(&q[(0, g)]), scale(&q[(g, 0)]), scale(&q[(g, g)])))
        .collect();
    Ok(ScaledArrowhead {
        stay: scale(&q[(0, 0)]),
        denom,
        groups,
    })
}

/// `t(1..=max_n)` by the renewal recursion.
///
/// Runs on integers `T(n) = D^(n-1) t(n)`, `D` the common denominator of
/// `Q`. The inner sum over `l` is carried forward by Horner's rule,
/// `S_g(n+1) = T(n-1) + r_g S_g(n)`, so the whole table costs `O(max_n)`
/// big-integer operations per point group.
pub fn tail_table_recursion(game: &ChainSpec, max_n: usize) -> Result<TailTable<'_>, ExactError> {
    let arrow = scaled_arrowhead(game.q())?;
    let k = arrow.groups.len();
    let mut scaled: Vec<BigInt> = Vec::with_capacity(max_n);
    // r_g^(n-2) and S_g(n) for the n about to be computed.
    let mut stay_pow: Vec<BigInt> = vec![BigInt::one(); k];
    let mut inner: Vec<BigInt> = vec![BigInt::zero(); k];
    for n in 1..=max_n {
        if n == 1 {
            scaled.push(BigInt::one());
            continue;
        }
        if n >= 3 {
            for (g, (_, _, r)) in arrow.groups.iter().enumerate() {
                stay_pow[g] *= r;
                inner[g] = &scaled[n - 3] + r * &inner[g];
            }
        }
        let mut t = &arrow.stay * &scaled[n - 2];
        for (g, (b, c, _)) in arrow.groups.iter().enumerate() {
            t += b * &stay_pow[g];
            t += b * c * &inner[g];
        }
        scaled.push(t);
    }
    let mut denom_pow = BigInt::one();
    let values = scaled
        .into_iter()
        .map(|t| {
            let v = BigRational::new(t, denom_pow.clone());
            denom_pow *= &arrow.denom;
            v
        })
        .collect();
    Ok(TailTable { game, values })
}

/// `t(n)` by the renewal recursion.
pub fn tail_recursion(game: &ChainSpec, n: usize) -> Result<BigRational, ExactError> {
    assert!(n >= 1, "hand lengths start at 1");
    Ok(tail_table_recursion(game, n)?.values.pop().expect("n >= 1"))
}

/// `t(n) = Σ_j (Q^(n-1))[co][j]`, by repeated squaring.
pub fn tail_matrix_power(game: &ChainSpec, n: usize) -> BigRational {
    assert!(n >= 1, "hand lengths start at 1");
    game.q().pow((n - 1) as u64).row_sum(0)
}

/// `t(1..=max_n)` by iterating the first row of `Q^(n-1)`.
pub fn tail_table_matrix(game: &ChainSpec, max_n: usize) -> TailTable<'_> {
    let q = game.q();
    let mut row = vec![BigRational::zero(); q.dim()];
    if let Some(first) = row.first_mut() {
        *first = BigRational::one();
    }
    let mut values = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        values.push(row.iter().sum());
        if n < max_n {
            row = q.left_mul(&row);
        }
    }
    TailTable { game, values }
}

/// `P(L = n) = t(n) - t(n+1)`.
pub fn pmf(game: &ChainSpec, n: usize) -> BigRational {
    let table = tail_table_matrix(game, n + 1);
    table.get(n) - table.get(n + 1)
}

/// `E[L] = Σ_{n>=1} t(n)`, the first row sum of `(I - Q)^-1`.
pub fn mean_length(game: &ChainSpec) -> Result<BigRational, ExactError> {
    let q = game.q();
    let n = q.dim();
    let mut system = SquareMatrix::identity(n);
    // Row form x (I - Q) = e_1, solved as (I - Q)ᵀ xᵀ = e_1.
    for i in 0..n {
        for j in 0..n {
            system[(j, i)] -= &q[(i, j)];
        }
    }
    let mut rhs = vec![BigRational::zero(); n];
    rhs[0] = BigRational::one();
    let x = system.solve(&rhs).ok_or(ExactError::InfiniteMean)?;
    Ok(x.into_iter().sum())
}
