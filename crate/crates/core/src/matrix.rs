//! Dense square matrices over exact rationals.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    /// Builds a matrix from rows; `None` if the rows are ragged or not square.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(SquareMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigRational]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn row_sum(&self, i: usize) -> BigRational {
        self.row(i).iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// `(M + Mᵀ) / 2`.
    pub fn symmetric_part(&self) -> Self {
        let half = BigRational::new(1.into(), 2.into());
        let mut a = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                a[(i, j)] = (&self[(i, j)] + &self[(j, i)]) * &half;
            }
        }
        a
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// The leading `k × k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        let mut m = Self::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn diagonal(&self) -> Vec<BigRational> {
        (0..self.n).map(|i| self[(i, i)].clone()).collect()
    }

    /// Nonzero entries only on the diagonal, the first row and the first column.
    pub fn is_arrowhead(&self) -> bool {
        (1..self.n).all(|i| (1..self.n).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.n)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| x * &self[(i, j)])
                    .sum()
            })
            .collect()
    }

    /// Solves `M x = b` by Gaussian elimination; `None` if `M` is singular.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        let n = self.n;
        let mut a = self.clone();
        let mut x: Vec<BigRational> = b.to_vec();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                x.swap(pivot, col);
            }
            let p = a[(col, col)].clone();
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] / &p;
                for j in col..n {
                    let v = &f * &a[(col, j)];
                    a[(r, j)] -= v;
                }
                let v = &f * &x[col];
                x[r] -= v;
            }
        }
        for col in (0..n).rev() {
            let mut s = x[col].clone();
            for j in col + 1..n {
                s -= &a[(col, j)] * &x[j];
            }
            x[col] = s / &a[(col, col)];
        }
        Some(x)
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for r in self.rows() {
            l.entry(&r.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        }
        l.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> SquareMatrix {
        SquareMatrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| BigRational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn power_matches_repeated_product() {
        let a = m(&[&[1, 1], &[1, 0]]);
        let p = a.pow(10);
        assert_eq!(p[(0, 1)], BigRational::from_integer(55.into()));
        let mut slow = SquareMatrix::identity(2);
        for _ in 0..10 {
            slow = &slow * &a;
        }
        assert_eq!(p, slow);
        assert_eq!(a.pow(0), SquareMatrix::identity(2));
    }

    #[test]
    fn solve_with_pivoting() {
        let a = m(&[&[0, 2], &[3, 1]]);
        let x = a
            .solve(&[
                BigRational::from_integer(4.into()),
                BigRational::from_integer(5.into()),
            ])
            .unwrap();
        assert_eq!(
            x,
            vec![
                BigRational::from_integer(1.into()),
                BigRational::from_integer(2.into())
            ]
        );
        assert!(m(&[&[1, 2], &[2, 4]])
            .solve(&[BigRational::one(), BigRational::one()])
            .is_none());
    }

    #[test]
    fn arrowhead_detection() {
        assert!(m(&[&[1, 2, 3], &[4, 5, 0], &[6, 0, 7]]).is_arrowhead());
        assert!(!m(&[&[1, 2, 3], &[4, 5, 1], &[6, 0, 7]]).is_arrowhead());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(SquareMatrix::from_rows(vec![vec![BigRational::one()], vec![]]).is_none());
    }
}
