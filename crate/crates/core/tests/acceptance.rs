//! Acceptance criteria. Prints one line per criterion and exits nonzero if
//! any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hand_length::analysis::{interlacing_brackets, verify_interlacing, verify_positive_definite};
use hand_length::decimal::{format_fixed, format_scientific};
use hand_length::exact::{
    mean_length, tail_matrix_power, tail_recursion, tail_table_matrix, tail_table_recursion,
};
use hand_length::game::{compile_chain, compile_chain_with, PointGameSpec, StateMerging};
use hand_length::montecarlo::estimate_tail;
use hand_length::real::PRECISION_BITS;
use hand_length::spectral::{
    characteristic_polynomial, craps_coefficients_closed_form, eigenvalues_numeric,
    eigenvalues_radical, first_ratio_below, leading_term_bound, mixture_coefficients,
    tail_closed_form,
};
use hand_length::verify::{crapless_sextic, craps_quartic};
use hand_length::{BigRational, Real};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

/// Collects sub-checks so a criterion reports every failure, not only the first.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn finish(self) -> Outcome {
        if self.failures.is_empty() {
            Outcome::new(true, self.notes.join("; "))
        } else {
            let mut parts = self.failures;
            parts.extend(self.notes);
            Outcome::new(false, parts.join("; "))
        }
    }
}

fn custom_games() -> Vec<PointGameSpec> {
    vec![
        PointGameSpec::new([7, 11, 5, 6, 8, 9], [2, 3, 12], [4, 10]).unwrap(),
        PointGameSpec::new([7, 11], [2, 3, 4, 10, 12], [5, 6, 8, 9]).unwrap(),
        PointGameSpec::new([7, 3, 5, 9, 11], [], [2, 4, 6, 8, 10, 12]).unwrap(),
    ]
}

fn label(game: &PointGameSpec) -> String {
    match game.name() {
        "custom" => format!("points {:?}", game.points()),
        name => name.to_string(),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn sci(x: &BigRational, sig: usize) -> String {
    format_scientific(x, sig)
}

fn rel_err(approx: &Real, exact: &BigRational) -> Real {
    let e = Real::from_rational(exact);
    ((approx - &e) / &e).abs()
}

fn c1_t154_craps() -> Outcome {
    let mut c = Checks::default();
    let chain = compile_chain(&PointGameSpec::craps());
    let (rec, t_rec) = timed(|| tail_recursion(&chain, 154).unwrap());
    let (mat, t_mat) = timed(|| tail_matrix_power(&chain, 154));
    let (closed, t_closed) = timed(|| {
        let spectrum = eigenvalues_numeric(&chain).unwrap();
        let mix = mixture_coefficients(&chain, &spectrum).unwrap();
        tail_closed_form(&mix, 154)
    });
    let want = "1.78882426e-10";
    for (label, v) in [
        ("recursion", sci(&rec, 9)),
        ("matrix power", sci(&mat, 9)),
        ("closed form", sci(&closed.to_rational(), 9)),
    ] {
        c.expect(v == want, format!("{label} gives {v}, want {want}"));
    }
    c.expect(rec == mat, "recursion and matrix power differ");
    let one_in = sci(&(BigRational::from_integer(1.into()) / &rec), 3);
    c.expect(one_in == "5.59e9", format!("one in {one_in}, want 5.59e9"));
    c.expect(
        t_rec < Duration::from_secs(1),
        format!("recursion took {t_rec:?}"),
    );
    c.expect(
        t_closed < Duration::from_secs(1),
        format!("closed form took {t_closed:?}"),
    );
    c.expect(
        t_mat < Duration::from_secs(10),
        format!("matrix power took {t_mat:?}"),
    );
    c.note(format!(
        "t(154) = {want} by all three methods, one in {one_in}; \
         recursion {t_rec:.2?}, closed form {t_closed:.2?}, matrix power {t_mat:.2?}"
    ));
    c.finish()
}

fn c2_t154_crapless() -> Outcome {
    let mut c = Checks::default();
    let t0 = tail_recursion(&compile_chain(&PointGameSpec::crapless()), 154).unwrap();
    let t = tail_recursion(&compile_chain(&PointGameSpec::craps()), 154).unwrap();
    let v = sci(&t0, 9);
    c.expect(v == "2.96360068e-11", format!("t0(154) = {v}"));
    let ratio = Real::from_rational(&(&t0 / &t));
    let sixth = Real::one() / Real::from_i64(6);
    let dev = ((&ratio - &sixth) / &sixth).abs();
    c.expect(
        dev < Real::from_i64(5) / Real::from_i64(100),
        "ratio not within 5% of 1/6",
    );
    c.note(format!(
        "t0(154) = {v}, t0/t = {}",
        format_fixed(&ratio.to_rational(), 5)
    ));
    c.finish()
}

const TABLE_EIGENVALUES: [&str; 4] = [
    "0.862473751659322030",
    "0.741708271459795977",
    "0.709206775794379015",
    "0.186611201086502979",
];

const TABLE_COEFFICIENTS: [&str; 4] = [
    "1.211844812464518572",
    "-0.006375542263784777",
    "-0.004042671248651503",
    "-0.201426598952082292",
];

fn c3_eighteen_decimals() -> Outcome {
    let mut c = Checks::default();
    // 50 decimal digits need at least 167 bits.
    c.expect(PRECISION_BITS >= 167, format!("only {PRECISION_BITS} bits"));
    let chain = compile_chain(&PointGameSpec::craps());
    let radical = eigenvalues_radical().unwrap();
    let numeric = eigenvalues_numeric(&chain).unwrap();
    let vandermonde = mixture_coefficients(&chain, &numeric).unwrap();
    let explicit = craps_coefficients_closed_form(&radical.eigenvalues).unwrap();
    for i in 0..4 {
        for (label, e) in [
            ("radical", &radical.eigenvalues[i]),
            ("numeric", &numeric.eigenvalues[i]),
        ] {
            let got = format_fixed(&e.to_rational(), 18);
            c.expect(
                got == TABLE_EIGENVALUES[i],
                format!("{label} e{} = {got}", i + 1),
            );
        }
        for (label, x) in [
            ("explicit", &explicit[i]),
            ("vandermonde", &vandermonde.terms[i].coefficient),
        ] {
            let got = format_fixed(&x.to_rational(), 18);
            c.expect(
                got == TABLE_COEFFICIENTS[i],
                format!("{label} c{} = {got}", i + 1),
            );
        }
    }
    c.note(format!(
        "e1..e4 and c1..c4 match to 18 decimals by two routes each at {PRECISION_BITS} bits"
    ));
    c.finish()
}

fn c4_charpolys() -> Outcome {
    let mut c = Checks::default();
    let quartic = characteristic_polynomial(&compile_chain(&PointGameSpec::craps()));
    let sextic = characteristic_polynomial(&compile_chain(&PointGameSpec::crapless()));
    c.expect(quartic == craps_quartic(), format!("craps: {quartic}"));
    c.expect(sextic == crapless_sextic(), format!("crapless: {sextic}"));
    c.note(format!("{quartic}; {sextic}"));
    c.finish()
}

fn c5_exact_equivalence() -> Outcome {
    let mut c = Checks::default();
    let mut games = vec![PointGameSpec::craps(), PointGameSpec::crapless()];
    games.extend(custom_games());
    for game in &games {
        let chain = compile_chain(game);
        let rec = tail_table_recursion(&chain, 300).unwrap();
        let mat = tail_table_matrix(&chain, 300);
        let bad = rec
            .values()
            .iter()
            .zip(mat.values())
            .position(|(a, b)| a != b);
        c.expect(
            bad.is_none(),
            format!(
                "{}: first mismatch at n = {}",
                label(game),
                bad.map_or(0, |i| i + 1)
            ),
        );
    }
    c.note(format!("{} games identical for n = 1..300", games.len()));
    c.finish()
}

fn c6_closed_form_accuracy() -> Outcome {
    let mut c = Checks::default();
    let tol = Real::pow10_neg(12);
    for game in &[PointGameSpec::craps(), PointGameSpec::crapless()] {
        let chain = compile_chain(game);
        let mix = mixture_coefficients(&chain, &eigenvalues_numeric(&chain).unwrap()).unwrap();
        let tails = tail_table_recursion(&chain, 500).unwrap();
        let worst = tails
            .iter()
            .map(|(n, t)| rel_err(&tail_closed_form(&mix, n), t))
            .fold(Real::zero(), Real::max);
        c.expect(
            worst < tol,
            format!("{}: max relative error {worst:.3}", label(game)),
        );
        c.note(format!("{} max relative error {worst:.3}", label(game)));
    }
    c.finish()
}

fn c7_identities() -> Outcome {
    let mut c = Checks::default();
    let tol = Real::pow10_neg(30);
    for game in &[PointGameSpec::craps(), PointGameSpec::crapless()] {
        let chain = compile_chain(game);
        let mix = mixture_coefficients(&chain, &eigenvalues_numeric(&chain).unwrap()).unwrap();
        let s0 = (mix.coefficient_sum() - Real::one()).abs();
        let s1 = (mix.weighted_sum() - Real::one()).abs();
        c.expect(s0 < tol, format!("{}: |sum c - 1| = {s0:.3}", label(game)));
        c.expect(
            s1 < tol,
            format!("{}: |sum c e - 1| = {s1:.3}", label(game)),
        );
        c.expect(
            mix.has_single_positive_leading(),
            format!("{}: sign pattern", label(game)),
        );
        c.note(format!(
            "{} {} terms, residuals {s0:.2} / {s1:.2}",
            label(game),
            mix.len()
        ));
    }
    c.finish()
}

const RATIO_THRESHOLDS: [(u32, usize); 4] = [(3, 19), (6, 59), (9, 104), (12, 150)];

fn c8_bound_and_thresholds() -> Outcome {
    let mut c = Checks::default();
    let chain = compile_chain(&PointGameSpec::craps());
    let mix = mixture_coefficients(&chain, &eigenvalues_numeric(&chain).unwrap()).unwrap();
    let tails = tail_table_recursion(&chain, 300).unwrap();
    let violation = tails
        .iter()
        .find(|(n, t)| leading_term_bound(&mix, *n, t).ratio <= Real::one());
    c.expect(
        violation.is_none(),
        format!("bound fails at n = {}", violation.map_or(0, |v| v.0)),
    );
    let mut firsts = Vec::new();
    for (m, want) in RATIO_THRESHOLDS {
        let got = first_ratio_below(&mix, tails.values(), m);
        c.expect(
            got == Some(want),
            format!(
                "ratio < 1+1e-{m} first at n = {}, want {want}",
                got.map_or("none".into(), |n| n.to_string())
            ),
        );
        firsts.push(format!("m={m}: n={}", got.unwrap_or(0)));
    }
    c.note(format!(
        "t(n) < c1 e1^(n-1) for n = 1..300; first crossings {}",
        firsts.join(", ")
    ));
    c.finish()
}

fn c9_structure() -> Outcome {
    let mut c = Checks::default();
    let craps = compile_chain(&PointGameSpec::craps());
    let expected: Vec<BigRational> = [27, 26, 25]
        .iter()
        .map(|&k| BigRational::new(k.into(), 36.into()))
        .collect();
    c.expect(
        interlacing_brackets(craps.q()).as_ref() == Some(&expected),
        "craps brackets are not 27/36, 26/36, 25/36",
    );
    for game in &[PointGameSpec::craps(), PointGameSpec::crapless()] {
        let chain = compile_chain(game);
        let spectrum = eigenvalues_numeric(&chain).unwrap();
        let interlacing = verify_interlacing(&chain, &spectrum);
        for v in interlacing.verdicts.iter().filter(|v| !v.passed) {
            c.expect(
                false,
                format!("{} interlacing: {} ({})", label(game), v.name, v.detail),
            );
        }
        let e = &spectrum.eigenvalues;
        let mut chain_ok = Real::one() > e[0] && e[e.len() - 1].is_positive();
        for (k, d) in interlacing.diagonal_brackets.iter().enumerate() {
            let d = Real::from_rational(d);
            chain_ok &= e[k] > d && d > e[k + 1];
        }
        c.expect(
            chain_ok,
            format!("{}: eigenvalues do not interlace the diagonal", label(game)),
        );
        let pd = verify_positive_definite(&chain);
        for v in pd.verdicts.iter().filter(|v| !v.passed) {
            c.expect(
                false,
                format!("{} symmetric part: {} ({})", label(game), v.name, v.detail),
            );
        }
        let all_positive = pd.symmetric_part_eigenvalues.iter().all(Real::is_positive);
        c.expect(
            all_positive,
            format!("{}: symmetric part not positive definite", label(game)),
        );
        let smallest = pd
            .symmetric_part_eigenvalues
            .last()
            .map(|x| format!("{x:.4}"));
        c.note(format!(
            "{} interlaces, smallest symmetric-part eigenvalue {}",
            label(game),
            smallest.unwrap_or_default()
        ));
    }
    c.finish()
}

fn c10_monte_carlo() -> Outcome {
    let mut c = Checks::default();
    let game = PointGameSpec::craps();
    let chain = compile_chain(&game);
    let trials = 10_000_000;
    let seed = 20090523;
    let (run, elapsed) = timed(|| estimate_tail(&game, trials, seed));
    c.expect(
        elapsed < Duration::from_secs(60),
        format!("{trials} trials took {elapsed:?}"),
    );
    let exact = tail_table_recursion(&chain, 30).unwrap();
    let mut worst: f64 = 0.0;
    for (n, t) in exact.iter() {
        let z = run.z_score(n, Real::from_rational(t).to_f64());
        worst = worst.max(z.abs());
        c.expect(z.abs() <= 4.0, format!("n = {n}: z = {z:.2}"));
    }
    let mean = Real::from_rational(&mean_length(&chain).unwrap()).to_f64();
    let zm = (run.mean_length - mean) / run.mean_std_error;
    c.expect(zm.abs() <= 4.0, format!("mean length z = {zm:.2}"));
    let again = estimate_tail(&game, trials, seed);
    c.expect(again == run, "same seed produced different output");
    c.note(format!(
        "{trials} hands in {elapsed:.2?}, max |z| over n <= 30 is {worst:.2}, mean z {zm:.2}, rerun identical"
    ));
    c.finish()
}

fn c11_merge_lossless() -> Outcome {
    let mut c = Checks::default();
    let mut games = vec![PointGameSpec::craps(), PointGameSpec::crapless()];
    games.extend(custom_games());
    for game in &games {
        let merged = compile_chain(game);
        let split = compile_chain_with(game, StateMerging::PerPoint);
        let a = tail_table_matrix(&merged, 100);
        let b = tail_table_matrix(&split, 100);
        c.expect(
            a.values() == b.values(),
            format!("{}: merged and per-point tails differ", label(game)),
        );
        c.note(format!(
            "{} {} -> {} states",
            label(game),
            split.transient_count(),
            merged.transient_count()
        ));
    }
    c.finish()
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 11] = [
    ("C1", "craps t(154) by three methods", c1_t154_craps),
    ("C2", "crapless t0(154)", c2_t154_crapless),
    (
        "C3",
        "craps eigenvalues and coefficients to 18 decimals",
        c3_eighteen_decimals,
    ),
    ("C4", "integer characteristic polynomials", c4_charpolys),
    (
        "C5",
        "recursion equals matrix power, n = 1..300",
        c5_exact_equivalence,
    ),
    (
        "C6",
        "closed form relative error < 1e-12, n = 1..500",
        c6_closed_form_accuracy,
    ),
    ("C7", "mixture identities and sign pattern", c7_identities),
    (
        "C8",
        "leading-term bound and ratio thresholds",
        c8_bound_and_thresholds,
    ),
    (
        "C9",
        "interlacing and positive symmetric part",
        c9_structure,
    ),
    (
        "C10",
        "Monte Carlo agreement and reproducibility",
        c10_monte_carlo,
    ),
    (
        "C11",
        "state merging is lossless, n = 1..100",
        c11_merge_lossless,
    ),
];

fn main() -> ExitCode {
    let mut failed = 0;
    for (id, title, run) in CRITERIA {
        let out = run();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {id} {title}: {}", out.detail);
        failed += usize::from(!out.passed);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        CRITERIA.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
