use std::io::Write;

use hand_length::analysis::{interlacing_brackets, verify_interlacing, verify_positive_definite};
use hand_length::decimal::{format_fixed, format_significant};
use hand_length::exact::{mean_length, tail_table_recursion};
use hand_length::game::GameFile;
use hand_length::montecarlo::estimate_tail;
use hand_length::spectral::{leading_term_bound, tail_closed_form};
use hand_length::verify::{run_checks, GameAnalysis, Status};
use hand_length::{BigRational, PointGameSpec, Real};
use serde::{Deserialize, Serialize};

use crate::output::{write_csv, write_json, write_table};
use crate::{CliError, Format};

/// Digits used for the "one chance in ..." column.
const ONE_IN_DIGITS: usize = 3;

fn analyze(game: &PointGameSpec) -> Result<GameAnalysis, CliError> {
    GameAnalysis::new(game.clone())
        .map_err(|e| CliError::Verification(format!("spectral analysis failed: {e}")))
}

fn sig(x: &BigRational, digits: usize) -> String {
    format_significant(x, digits)
}

fn real_sig(x: &Real, digits: usize) -> String {
    format_significant(&x.to_rational(), digits)
}

fn real_fixed(x: &Real, decimals: usize) -> String {
    format_fixed(&x.to_rational(), decimals)
}

/// Dice probabilities read best over 36.
fn over_36(x: &BigRational) -> String {
    let d = x.denom();
    let thirty_six = hand_length::BigInt::from(36);
    if (&thirty_six % d) == 0.into() {
        format!("{}/36", x.numer() * (&thirty_six / d))
    } else {
        x.to_string()
    }
}

fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Usage(format!("{command} does not support --format {format:?}").to_lowercase())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: usize,
    pub t_exact: String,
    pub t_closed_form: String,
    pub leading_bound: String,
    pub ratio: String,
    pub one_in: String,
}

#[derive(Serialize)]
struct TailReport<'a> {
    game: &'static str,
    rules: GameFile,
    digits: usize,
    rows: &'a [ReportRow],
}

#[derive(Serialize)]
struct PlotRow<'a> {
    n: usize,
    t: &'a str,
}

pub fn tail<W: Write>(
    out: &mut W,
    game: &PointGameSpec,
    n_max: usize,
    digits: usize,
    format: Format,
) -> Result<(), CliError> {
    let analysis = analyze(game)?;
    let table = tail_table_recursion(&analysis.chain, n_max)
        .map_err(|e| CliError::Verification(e.to_string()))?;
    let one = BigRational::from_integer(1.into());
    let rows: Vec<ReportRow> = table
        .iter()
        .map(|(n, t)| {
            let bound = leading_term_bound(&analysis.mixture, n, t);
            ReportRow {
                n,
                t_exact: sig(t, digits),
                t_closed_form: real_sig(&tail_closed_form(&analysis.mixture, n), digits),
                leading_bound: real_sig(&bound.bound, digits),
                ratio: real_sig(&bound.ratio, digits),
                one_in: sig(&(&one / t), ONE_IN_DIGITS),
            }
        })
        .collect();
    if let Some(bad) = rows.iter().find(|r| r.t_exact != r.t_closed_form) {
        return Err(CliError::Verification(format!(
            "closed form disagrees with exact tail at n = {}: {} vs {}",
            bad.n, bad.t_closed_form, bad.t_exact
        )));
    }
    match format {
        Format::Text => {
            writeln!(out, "# {} game: {game}", game.name())?;
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.t_exact.clone(),
                        r.t_closed_form.clone(),
                        r.leading_bound.clone(),
                        r.ratio.clone(),
                        r.one_in.clone(),
                    ]
                })
                .collect();
            write_table(
                out,
                &[
                    "n",
                    "t_exact",
                    "t_closed_form",
                    "leading_bound",
                    "ratio",
                    "one_in",
                ],
                &cells,
            )?;
        }
        Format::Csv => write_csv(out, &rows)?,
        Format::Json => write_json(
            out,
            &TailReport {
                game: game.name(),
                rules: game.to_file(),
                digits,
                rows: &rows,
            },
        )?,
        Format::Plot => {
            writeln!(
                out,
                "# P(L >= n) for {} game; plot t on a log scale",
                game.name()
            )?;
            let plot: Vec<PlotRow> = rows
                .iter()
                .map(|r| PlotRow {
                    n: r.n,
                    t: &r.t_exact,
                })
                .collect();
            write_csv(out, &plot)?;
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct VerdictOut {
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Debug, Serialize)]
struct EigenReport {
    game: &'static str,
    rules: GameFile,
    charpoly: String,
    charpoly_coefficients: Vec<String>,
    method: String,
    eigenvalues: Vec<String>,
    radical_eigenvalues: Option<Vec<String>>,
    note: Option<String>,
    coefficients: Vec<String>,
    brackets: Vec<String>,
    sign_sequence: String,
    symmetric_part_eigenvalues: Vec<String>,
    structure: Vec<VerdictOut>,
}

#[derive(Serialize)]
struct EigenRow<'a> {
    i: usize,
    eigenvalue: &'a str,
    coefficient: &'a str,
}

pub fn eigen<W: Write>(
    out: &mut W,
    game: &PointGameSpec,
    digits: usize,
    format: Format,
) -> Result<(), CliError> {
    let analysis = analyze(game)?;
    let chain = &analysis.chain;
    let fixed_all = |xs: &[Real]| xs.iter().map(|x| real_fixed(x, digits)).collect::<Vec<_>>();
    let interlacing = verify_interlacing(chain, &analysis.spectrum);
    let pd = verify_positive_definite(chain);
    let structure = interlacing
        .verdicts
        .iter()
        .map(|v| VerdictOut {
            name: format!("Q {}", v.name),
            passed: v.passed,
            detail: v.detail.clone(),
        })
        .chain(pd.verdicts.iter().map(|v| VerdictOut {
            name: format!("A {}", v.name),
            passed: v.passed,
            detail: v.detail.clone(),
        }))
        .collect::<Vec<_>>();
    let report = EigenReport {
        game: game.name(),
        rules: game.to_file(),
        charpoly: analysis.spectrum.charpoly.to_string(),
        charpoly_coefficients: analysis
            .spectrum
            .charpoly
            .descending()
            .iter()
            .map(ToString::to_string)
            .collect(),
        method: analysis.spectrum.method.to_string(),
        eigenvalues: fixed_all(&analysis.spectrum.eigenvalues),
        radical_eigenvalues: analysis.radical.as_ref().map(|r| fixed_all(&r.eigenvalues)),
        note: analysis
            .radical
            .is_none()
            .then(|| "no radical form attempted; eigenvalues from certified numeric roots".into()),
        coefficients: analysis
            .mixture
            .terms
            .iter()
            .map(|t| real_fixed(&t.coefficient, digits))
            .collect(),
        brackets: interlacing_brackets(chain.q())
            .unwrap_or_default()
            .iter()
            .map(over_36)
            .collect(),
        sign_sequence: interlacing
            .sign_sequence
            .iter()
            .map(|s| match s {
                hand_length::poly::Sign::Positive => '+',
                hand_length::poly::Sign::Negative => '-',
                hand_length::poly::Sign::Zero => '0',
            })
            .collect(),
        symmetric_part_eigenvalues: fixed_all(&pd.symmetric_part_eigenvalues),
        structure,
    };
    match format {
        Format::Text => write_eigen_text(out, game, &report)?,
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let rows: Vec<EigenRow> = report
                .eigenvalues
                .iter()
                .zip(&report.coefficients)
                .enumerate()
                .map(|(i, (e, c))| EigenRow {
                    i: i + 1,
                    eigenvalue: e,
                    coefficient: c,
                })
                .collect();
            write_csv(out, &rows)?;
        }
        Format::Plot => return Err(unsupported("eigen", format)),
    }
    Ok(())
}

fn write_eigen_text<W: Write>(
    out: &mut W,
    game: &PointGameSpec,
    r: &EigenReport,
) -> Result<(), CliError> {
    writeln!(out, "game: {} ({game})", r.game)?;
    writeln!(out, "characteristic polynomial: {} = 0", r.charpoly)?;
    writeln!(out, "eigenvalues ({}):", r.method)?;
    for (i, e) in r.eigenvalues.iter().enumerate() {
        writeln!(out, "  e{} = {e}", i + 1)?;
    }
    match (&r.radical_eigenvalues, &r.note) {
        (Some(radical), _) => {
            writeln!(out, "eigenvalues (radical closed form):")?;
            for (i, e) in radical.iter().enumerate() {
                writeln!(out, "  e{} = {e}", i + 1)?;
            }
        }
        (None, Some(note)) => writeln!(out, "note: {note}")?,
        (None, None) => {}
    }
    writeln!(out, "coefficients:")?;
    for (i, c) in r.coefficients.iter().enumerate() {
        writeln!(out, "  c{} = {c}", i + 1)?;
    }
    writeln!(out, "interlacing brackets: {}", r.brackets.join(", "))?;
    writeln!(out, "sign sequence: {}", r.sign_sequence)?;
    writeln!(out, "symmetric part eigenvalues:")?;
    for (i, e) in r.symmetric_part_eigenvalues.iter().enumerate() {
        writeln!(out, "  a{} = {e}", i + 1)?;
    }
    writeln!(out, "structure:")?;
    for v in &r.structure {
        let tag = if v.passed { "PASS" } else { "FAIL" };
        writeln!(out, "  [{tag}] {}: {}", v.name, v.detail)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRow {
    pub n: usize,
    pub hands_at_least: u64,
    pub empirical: f64,
    pub std_error: f64,
    pub exact: String,
    pub z: f64,
}

#[derive(Serialize)]
struct SimulationReport<'a> {
    game: &'static str,
    rules: GameFile,
    trials: u64,
    seed: u64,
    mean_length: f64,
    mean_std_error: f64,
    exact_mean_length: String,
    max_length_observed: usize,
    length_counts: &'a [u64],
    rows: &'a [SimulationRow],
}

pub fn simulate<W: Write>(
    out: &mut W,
    game: &PointGameSpec,
    trials: u64,
    seed: u64,
    n_max: usize,
    format: Format,
) -> Result<(), CliError> {
    let chain = hand_length::compile_chain(game);
    let exact =
        tail_table_recursion(&chain, n_max).map_err(|e| CliError::Verification(e.to_string()))?;
    let exact_mean = mean_length(&chain).map_err(|e| CliError::Verification(e.to_string()))?;
    let result = estimate_tail(game, trials, seed);
    let rows: Vec<SimulationRow> = exact
        .iter()
        .map(|(n, t)| {
            let t_f = Real::from_rational(t).to_f64();
            SimulationRow {
                n,
                hands_at_least: result.hands_at_least(n),
                empirical: result.tail(n),
                std_error: (t_f * (1.0 - t_f) / trials as f64).sqrt(),
                exact: sig(t, 9),
                z: result.z_score(n, t_f),
            }
        })
        .collect();
    let exact_mean_text = sig(&exact_mean, 9);
    match format {
        Format::Text => {
            writeln!(out, "game: {} ({game})", game.name())?;
            writeln!(out, "trials: {trials}, seed: {seed}")?;
            writeln!(
                out,
                "mean length: {:.6} +/- {:.6} (exact {exact_mean_text} = {exact_mean})",
                result.mean_length, result.mean_std_error
            )?;
            writeln!(out, "longest hand: {}", result.max_length_observed)?;
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.hands_at_least.to_string(),
                        format!("{:.9}", r.empirical),
                        r.exact.clone(),
                        format!("{:.3e}", r.std_error),
                        format!("{:.3}", r.z),
                    ]
                })
                .collect();
            write_table(
                out,
                &["n", "hands>=n", "empirical", "exact", "std_error", "z"],
                &cells,
            )?;
        }
        Format::Csv => write_csv(out, &rows)?,
        Format::Json => write_json(
            out,
            &SimulationReport {
                game: game.name(),
                rules: game.to_file(),
                trials,
                seed,
                mean_length: result.mean_length,
                mean_std_error: result.mean_std_error,
                exact_mean_length: exact_mean_text,
                max_length_observed: result.max_length_observed,
                length_counts: &result.length_counts,
                rows: &rows,
            },
        )?,
        Format::Plot => return Err(unsupported("simulate", format)),
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckRow<'a> {
    name: &'a str,
    status: Status,
    detail: &'a str,
}

pub fn verify<W: Write>(out: &mut W, game: &PointGameSpec, format: Format) -> Result<(), CliError> {
    let report = run_checks(game);
    match format {
        Format::Text => {
            writeln!(out, "game: {} ({game})", game.name())?;
            for c in &report.checks {
                writeln!(out, "[{}] {}: {}", c.status, c.name, c.detail)?;
            }
            let failed = report
                .checks
                .iter()
                .filter(|c| c.status == Status::Fail)
                .count();
            writeln!(out, "{} checks, {failed} failed", report.checks.len())?;
        }
        Format::Csv => {
            let rows: Vec<CheckRow> = report
                .checks
                .iter()
                .map(|c| CheckRow {
                    name: &c.name,
                    status: c.status,
                    detail: &c.detail,
                })
                .collect();
            write_csv(out, &rows)?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                game: &'static str,
                passed: bool,
                checks: &'a [hand_length::verify::Check],
            }
            write_json(
                out,
                &Out {
                    game: game.name(),
                    passed: report.passed(),
                    checks: &report.checks,
                },
            )?;
        }
        Format::Plot => return Err(unsupported("verify", format)),
    }
    out.flush()?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verification("one or more checks failed".into()))
    }
}
