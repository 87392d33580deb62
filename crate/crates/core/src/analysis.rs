//! Structural checks on the transient matrix `Q`: arrowhead shape,
//! interlacing of its eigenvalues with the point-state diagonal, and
//! positive definiteness through the symmetric part `A = (Q + Qᵀ)/2`.
//!
//! For an arrowhead matrix with first row `(a, b_1..b_k)`, first column
//! `(a, c_1..c_k)` and diagonal `d_1 > .. > d_k`, the characteristic
//! polynomial at `z = d_i` reduces to `-b_i c_i Π_{j≠i} (d_j - d_i)`, so it
//! alternates in sign across the `d_i` whenever every `b_i c_i > 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::game::ChainSpec;
use crate::matrix::SquareMatrix;
use crate::poly::Sign;
use crate::real::Real;
use crate::roots::isolate_roots;
use crate::spectral::{charpoly_of, Spectrum};

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct StructureReport {
    pub is_arrowhead: bool,
    /// Diagonal entries other than the (1,1) entry, descending.
    pub diagonal_brackets: Vec<BigRational>,
    /// Signs of the characteristic polynomial at `upper, d_1, .., d_k, lower`.
    pub sign_sequence: Vec<Sign>,
    pub symmetric_part_eigenvalues: Vec<Real>,
    pub verdicts: Vec<Verdict>,
}

impl StructureReport {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }
}

/// The non-(1,1) diagonal entries of an arrowhead matrix, descending.
pub fn interlacing_brackets(m: &SquareMatrix) -> Option<Vec<BigRational>> {
    if !m.is_arrowhead() {
        return None;
    }
    let mut d: Vec<BigRational> = m.diagonal().into_iter().skip(1).collect();
    d.sort_by(|a, b| b.cmp(a));
    Some(d)
}

fn strictly_alternates(signs: &[Sign]) -> bool {
    signs.windows(2).all(|w| w[0].opposes(w[1]))
}

fn sign_string(signs: &[Sign]) -> String {
    signs
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Checks the sign alternation of `det(Q - zI)` at `1, d_1, .., d_k, 0` and
/// that each eigenvalue of `spectrum` sits strictly inside its bracket.
pub fn verify_interlacing(game: &ChainSpec, spectrum: &Spectrum) -> StructureReport {
    let q = game.q();
    let charpoly = charpoly_of(q);
    let is_arrowhead = q.is_arrowhead();
    let diagonal_brackets = interlacing_brackets(q).unwrap_or_default();

    let mut points = vec![BigRational::one()];
    points.extend(diagonal_brackets.iter().cloned());
    points.push(BigRational::zero());
    let sign_sequence: Vec<Sign> = points.iter().map(|z| charpoly.sign_at(z)).collect();

    let mut report = StructureReport {
        is_arrowhead,
        diagonal_brackets,
        sign_sequence,
        symmetric_part_eigenvalues: Vec::new(),
        verdicts: Vec::new(),
    };
    report.push(
        "arrowhead",
        is_arrowhead,
        if is_arrowhead {
            "nonzero only on diagonal, first row, first column"
        } else {
            "entries off the arrowhead pattern"
        },
    );
    let alternates = strictly_alternates(&report.sign_sequence);
    report.push(
        "sign alternation",
        alternates,
        format!(
            "signs at 1, diagonal, 0: {}",
            sign_string(&report.sign_sequence)
        ),
    );

    let eig = &spectrum.eigenvalues;
    if eig.len() + 1 != points.len() {
        report.push(
            "eigenvalues in brackets",
            false,
            format!(
                "{} eigenvalues for {} brackets",
                eig.len(),
                points.len() - 1
            ),
        );
        return report;
    }
    let mut failures = Vec::new();
    for (i, e) in eig.iter().enumerate() {
        let hi = Real::from_rational(&points[i]);
        let lo = Real::from_rational(&points[i + 1]);
        if !(*e < hi && *e > lo) {
            failures.push(format!(
                "e{} not in ({}, {})",
                i + 1,
                points[i + 1],
                points[i]
            ));
        }
    }
    let bracket_chain = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if i == 0 {
                p.to_string()
            } else {
                format!("e{} > {}", i, p)
            }
        })
        .collect::<Vec<_>>()
        .join(" > ");
    report.push(
        "eigenvalues in brackets",
        failures.is_empty(),
        if failures.is_empty() {
            bracket_chain
        } else {
            failures.join("; ")
        },
    );
    report
}

/// Row-wise Gershgorin bound on the spectral radius of a symmetric matrix.
fn gershgorin_radius(m: &SquareMatrix) -> BigRational {
    m.rows()
        .map(|r| r.iter().map(Signed::abs).sum::<BigRational>())
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Forms `A = (Q + Qᵀ)/2` exactly and checks that all its eigenvalues are
/// positive and interlace its diagonal (excluding the (1,1) entry).
pub fn verify_positive_definite(game: &ChainSpec) -> StructureReport {
    let a = game.q().symmetric_part();
    let charpoly = charpoly_of(&a);
    let is_arrowhead = a.is_arrowhead();
    let diagonal_brackets = interlacing_brackets(&a).unwrap_or_default();
    let radius = gershgorin_radius(&a) + BigRational::one();

    let mut report = StructureReport {
        is_arrowhead,
        diagonal_brackets: diagonal_brackets.clone(),
        sign_sequence: Vec::new(),
        symmetric_part_eigenvalues: Vec::new(),
        verdicts: Vec::new(),
    };
    report.push(
        "symmetric part exact",
        a.is_symmetric(),
        "A = (Q + Qᵀ)/2 equals its transpose",
    );

    // Brackets: -R, then the diagonal ascending, then R.
    let mut brackets = vec![-radius.clone()];
    brackets.extend(diagonal_brackets.iter().rev().cloned());
    brackets.push(radius.clone());
    report.sign_sequence = brackets.iter().rev().map(|z| charpoly.sign_at(z)).collect();

    match isolate_roots(&charpoly, &brackets) {
        Ok(eigs) => {
            let positive = eigs.iter().all(Real::is_positive);
            let smallest = eigs.last().map(|e| format!("{e:.12}")).unwrap_or_default();
            report.symmetric_part_eigenvalues = eigs;
            report.push(
                "symmetric part interlaces diagonal",
                true,
                format!(
                    "{} eigenvalues, one per bracket",
                    report.symmetric_part_eigenvalues.len()
                ),
            );
            report.push(
                "positive definite",
                positive,
                format!("smallest eigenvalue of A = {smallest}"),
            );
        }
        Err(e) => {
            report.push("symmetric part interlaces diagonal", false, e.to_string());
            report.push("positive definite", false, "eigenvalues not certified");
        }
    }
    report
}

/// `xᵀ M x`, exactly.
pub fn quadratic_form(m: &SquareMatrix, x: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, xi) in x.iter().enumerate() {
        for (j, xj) in x.iter().enumerate() {
            acc += xi * &m[(i, j)] * xj;
        }
    }
    acc
}

/// Small deterministic integers for spot checks, not for statistics.
pub fn spot_check_vector(seed: u64, len: usize) -> Vec<BigRational> {
    let mut state = seed;
    (0..len)
        .map(|_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let v = ((state >> 33) % 201) as i64 - 100;
            BigRational::new(
                BigInt::from(v),
                BigInt::from(1 + ((state >> 20) % 7) as i64),
            )
        })
        .collect()
}
