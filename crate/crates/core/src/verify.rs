//! The full cross-method check suite for one game, as run by `verify`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::analysis::{verify_interlacing, verify_positive_definite};
use crate::exact::{mean_length, tail_table_matrix, tail_table_recursion};
use crate::game::{compile_chain, compile_chain_with, ChainSpec, PointGameSpec, StateMerging};
use crate::poly::IntPoly;
use crate::real::Real;
use crate::spectral::{
    characteristic_polynomial, craps_coefficients_closed_form, eigen_residual, eigenvalues_numeric,
    eigenvalues_radical, eigenvector, faddeev_leverrier, first_ratio_below, leading_term_bound,
    mixture_coefficients, tail_closed_form, GeometricMixture, SpectralError, Spectrum,
};

/// Recursion and matrix power must agree exactly up to this `n`.
pub const EQUIVALENCE_MAX_N: usize = 300;
/// Merged and per-point chains must agree exactly up to this `n`.
pub const MERGE_MAX_N: usize = 100;
/// Closed form checked against exact tails up to this `n`.
pub const CLOSED_FORM_MAX_N: usize = 500;
/// Relative error allowed between closed form and exact tails.
pub const CLOSED_FORM_REL_EXP: u32 = 12;
/// `Σ c_i` and `Σ c_i e_i` must be within `10^-30` of 1.
pub const IDENTITY_EXP: u32 = 30;
/// Strict leading-term bound and ratio monotonicity checked up to this `n`.
pub const BOUND_MAX_N: usize = 300;
/// `(m, n)`: for craps, `c_1 e_1^(n-1) / t(n) < 1 + 10^-m` once `n` reaches this.
pub const CRAPS_RATIO_THRESHOLDS: [(u32, usize); 4] = [(3, 19), (6, 59), (9, 104), (12, 150)];

pub fn craps_quartic() -> IntPoly {
    IntPoly::from_descending(&[23328, -58320, 51534, -18321, 1975])
}

pub fn crapless_sextic() -> IntPoly {
    IntPoly::from_descending(&[
        15116544, -59206464, 93137040, -73915740, 30008394, -5305446, 172975,
    ])
}

/// Chain, spectrum and mixture for one game.
#[derive(Debug, Clone)]
pub struct GameAnalysis {
    pub spec: PointGameSpec,
    pub chain: ChainSpec,
    pub spectrum: Spectrum,
    /// Only for standard craps.
    pub radical: Option<Spectrum>,
    pub mixture: GeometricMixture,
}

impl GameAnalysis {
    pub fn new(spec: PointGameSpec) -> Result<Self, SpectralError> {
        let chain = compile_chain(&spec);
        let spectrum = eigenvalues_numeric(&chain)?;
        let radical = if spec.is_standard_craps() {
            Some(eigenvalues_radical()?)
        } else {
            None
        };
        let mixture = mixture_coefficients(&chain, &spectrum)?;
        Ok(GameAnalysis {
            spec,
            chain,
            spectrum,
            radical,
            mixture,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        });
    }

    fn info(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Info,
            detail: detail.into(),
        });
    }
}

fn sci(x: &Real) -> String {
    format!("{x:.3}")
}

fn first_exact_mismatch(a: &[BigRational], b: &[BigRational]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y).map(|i| i + 1)
}

/// Runs every structural and cross-method check for `spec`.
pub fn run_checks(spec: &PointGameSpec) -> VerifyReport {
    let mut report = VerifyReport::default();
    let builtin = spec.is_standard_craps() || spec.is_crapless();
    let chain = compile_chain(spec);

    let rows_ok = (0..chain.p().dim()).all(|i| chain.p().row_sum(i).is_one());
    report.check(
        "transition rows sum to 1",
        rows_ok,
        format!("{} states", chain.states().len()),
    );

    let max_n = CLOSED_FORM_MAX_N.max(EQUIVALENCE_MAX_N);
    let matrix_table = tail_table_matrix(&chain, max_n);
    let tails = matrix_table.values();
    match tail_table_recursion(&chain, EQUIVALENCE_MAX_N) {
        Ok(rec) => {
            let mismatch = first_exact_mismatch(rec.values(), &tails[..EQUIVALENCE_MAX_N]);
            report.check(
                format!("recursion = matrix power (n=1..{EQUIVALENCE_MAX_N})"),
                mismatch.is_none(),
                match mismatch {
                    None => "identical rationals".to_string(),
                    Some(n) => format!("first mismatch at n = {n}"),
                },
            );
        }
        Err(e) => report.check("recursion = matrix power", false, e.to_string()),
    }

    let split = compile_chain_with(spec, StateMerging::PerPoint);
    let split_table = tail_table_matrix(&split, MERGE_MAX_N);
    let mismatch = first_exact_mismatch(split_table.values(), &tails[..MERGE_MAX_N]);
    report.check(
        format!("state merge lossless (n=1..{MERGE_MAX_N})"),
        mismatch.is_none(),
        format!(
            "{} merged vs {} per-point transient states{}",
            chain.transient_count(),
            split.transient_count(),
            mismatch
                .map(|n| format!(", mismatch at n = {n}"))
                .unwrap_or_default()
        ),
    );

    let charpoly = characteristic_polynomial(&chain);
    let leverrier = faddeev_leverrier(chain.q()).to_primitive_integer();
    report.check(
        "characteristic polynomial (row reduction = Faddeev-LeVerrier)",
        charpoly == leverrier,
        charpoly.to_string(),
    );
    if spec.is_standard_craps() {
        report.check(
            "craps quartic",
            charpoly == craps_quartic(),
            craps_quartic().to_string(),
        );
    } else if spec.is_crapless() {
        report.check(
            "crapless sextic",
            charpoly == crapless_sextic(),
            crapless_sextic().to_string(),
        );
    }

    let analysis = match GameAnalysis::new(spec.clone()) {
        Ok(a) => a,
        Err(e) => {
            report.check("spectrum", false, e.to_string());
            return report;
        }
    };
    report.check(
        "eigenvalues certified",
        true,
        format!(
            "{} roots in (0,1): {}",
            analysis.spectrum.eigenvalues.len(),
            analysis
                .spectrum
                .eigenvalues
                .iter()
                .map(|e| format!("{e:.12}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    if let Some(radical) = &analysis.radical {
        let diff = radical
            .eigenvalues
            .iter()
            .zip(&analysis.spectrum.eigenvalues)
            .map(|(a, b)| (a - b).abs())
            .fold(Real::zero(), Real::max);
        report.check(
            "radical = numeric eigenvalues",
            diff < Real::pow10_neg(18),
            format!("max difference {}", sci(&diff)),
        );
    }

    let interlacing = verify_interlacing(&chain, &analysis.spectrum);
    for v in &interlacing.verdicts {
        report.check(format!("Q {}", v.name), v.passed, v.detail.clone());
    }
    let pd = verify_positive_definite(&chain);
    for v in &pd.verdicts {
        report.check(format!("A {}", v.name), v.passed, v.detail.clone());
    }

    match mean_length(&chain) {
        Ok(mean) => {
            let partial: BigRational = tails.iter().sum();
            let lead = analysis.mixture.leading();
            let remainder =
                &lead.coefficient * lead.rate.powi(tails.len()) / (Real::one() - &lead.rate);
            let mean_r = Real::from_rational(&mean);
            let partial_r = Real::from_rational(&partial);
            let ok = mean > partial && mean_r <= &partial_r + &remainder;
            report.check(
                "mean length = sum of tails",
                ok,
                format!(
                    "E[L] = {mean} = {:.12}; partial sum to n={} leaves {}",
                    mean_r,
                    tails.len(),
                    sci(&(mean_r.clone() - partial_r))
                ),
            );
        }
        Err(e) => report.check("mean length = sum of tails", false, e.to_string()),
    }

    let mix = &analysis.mixture;
    let tol = Real::pow10_neg(IDENTITY_EXP);
    let s0 = (mix.coefficient_sum() - Real::one()).abs();
    let s1 = (mix.weighted_sum() - Real::one()).abs();
    report.check("sum c_i = 1", s0 < tol, format!("|sum - 1| = {}", sci(&s0)));
    report.check(
        "sum c_i e_i = 1",
        s1 < tol,
        format!("|sum - 1| = {}", sci(&s1)),
    );
    let signs = mix
        .terms
        .iter()
        .map(|t| {
            if t.coefficient.is_positive() {
                "+"
            } else {
                "-"
            }
        })
        .collect::<String>();
    if builtin {
        report.check(
            "sign pattern c1 > 0, others < 0",
            mix.has_single_positive_leading(),
            format!("{} terms, signs {signs}", mix.len()),
        );
    } else {
        report.info(
            "sign pattern",
            format!("{} terms, signs {signs}", mix.len()),
        );
    }
    if spec.is_crapless() {
        report.check(
            "six-term mixture",
            mix.len() == 6,
            format!("{} terms", mix.len()),
        );
    }

    if spec.is_standard_craps() {
        match craps_coefficients_closed_form(&analysis.spectrum.eigenvalues) {
            Ok(explicit) => {
                let diff = explicit
                    .iter()
                    .zip(&mix.terms)
                    .map(|(a, t)| (a - &t.coefficient).abs())
                    .fold(Real::zero(), Real::max);
                report.check(
                    "explicit coefficient formula",
                    diff < Real::pow10_neg(30),
                    format!("max difference {}", sci(&diff)),
                );
            }
            Err(e) => report.check("explicit coefficient formula", false, e.to_string()),
        }
        let mut worst = Real::zero();
        let mut ok = true;
        for e in analysis
            .spectrum
            .eigenvalues
            .iter()
            .chain([Real::one()].iter())
        {
            match eigenvector(&chain, e) {
                Ok(v) => worst = worst.max(eigen_residual(chain.p(), e, &v)),
                Err(_) => ok = false,
            }
        }
        report.check(
            "eigenvectors r(36e) and (1,..,1)",
            ok,
            format!("max residual {}", sci(&worst)),
        );
    }

    let rel_tol = Real::pow10_neg(CLOSED_FORM_REL_EXP);
    let mut worst_rel = Real::zero();
    let mut worst_n = 1;
    for (i, t) in tails[..CLOSED_FORM_MAX_N].iter().enumerate() {
        let exact = Real::from_rational(t);
        let rel = ((tail_closed_form(mix, i + 1) - &exact) / &exact).abs();
        if rel > worst_rel {
            worst_rel = rel;
            worst_n = i + 1;
        }
    }
    report.check(
        format!("closed form vs exact (n=1..{CLOSED_FORM_MAX_N})"),
        worst_rel < rel_tol,
        format!("max relative error {} at n = {worst_n}", sci(&worst_rel)),
    );

    let mut bound_violation = None;
    let mut monotone_violation = None;
    let mut prev: Option<Real> = None;
    for (i, t) in tails[..BOUND_MAX_N].iter().enumerate() {
        let n = i + 1;
        let b = leading_term_bound(mix, n, t);
        if bound_violation.is_none() && !(b.bound > Real::from_rational(t)) {
            bound_violation = Some(n);
        }
        if let Some(p) = &prev {
            if monotone_violation.is_none() && !(b.ratio < *p) {
                monotone_violation = Some(n);
            }
        }
        prev = Some(b.ratio);
    }
    report.check(
        format!("strict bound t(n) < c1 e1^(n-1) (n=1..{BOUND_MAX_N})"),
        bound_violation.is_none(),
        bound_violation.map_or("holds".into(), |n| format!("fails at n = {n}")),
    );
    report.check(
        format!("ratio c1 e1^(n-1)/t(n) strictly decreasing (n=1..{BOUND_MAX_N})"),
        monotone_violation.is_none(),
        monotone_violation.map_or("holds".into(), |n| format!("fails at n = {n}")),
    );

    for m in [3u32, 6, 9, 12] {
        let first = first_ratio_below(mix, tails, m);
        let first_text = first.map_or(format!("not reached by n = {}", tails.len()), |n| {
            format!("first below at n = {n}")
        });
        let claimed = CRAPS_RATIO_THRESHOLDS
            .iter()
            .find(|(mm, _)| *mm == m)
            .map(|(_, n)| *n)
            .filter(|_| spec.is_standard_craps());
        match claimed {
            Some(n0) => {
                let threshold = Real::one() + Real::pow10_neg(m);
                let holds = tails[n0 - 1..BOUND_MAX_N].iter().enumerate().all(|(i, t)| {
                    let r = leading_term_bound(mix, n0 + i, t).ratio;
                    r > Real::one() && r < threshold
                });
                report.check(
                    format!("ratio in (1, 1+1e-{m}) for n >= {n0}"),
                    holds,
                    first_text,
                );
            }
            None => report.info(format!("ratio below 1+1e-{m}"), first_text),
        }
    }

    let t_abs_ok = tails
        .iter()
        .all(|t| t.is_positive() && *t <= BigRational::one());
    report.check("0 < t(n) <= 1", t_abs_ok, format!("n = 1..{}", tails.len()));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn craps_passes_everything() {
        let report = run_checks(&PointGameSpec::craps());
        for c in &report.checks {
            assert_ne!(c.status, Status::Fail, "{}: {}", c.name, c.detail);
        }
        assert!(report.get("craps quartic").is_some());
        assert!(report.get("ratio in (1, 1+1e-3) for n >= 19").is_some());
    }

    #[test]
    fn degenerate_game_fails_cleanly() {
        let spec = PointGameSpec::new([2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12], [], []).unwrap();
        let report = run_checks(&spec);
        assert!(!report.passed());
        assert_eq!(report.get("spectrum").unwrap().status, Status::Fail);
    }
}
