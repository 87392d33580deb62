//! Exact engines checked against a rule-level enumeration and against
//! values computed offline (Python `fractions` + `mpmath`, brute-force
//! matrix powers over unmerged per-point chains).

use std::collections::BTreeMap;

use hand_length::decimal::{format_fixed, format_scientific};
use hand_length::exact::{
    mean_length, pmf, tail_matrix_power, tail_recursion, tail_table_matrix, tail_table_recursion,
};
use hand_length::game::{compile_chain, standard_dice, Outcome, PointGameSpec};
use hand_length::spectral::{
    eigenvalues_numeric, leading_term_bound, mixture_coefficients, tail_closed_form,
};
use hand_length::{BigRational, Real};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `P(L >= n)` by pushing the distribution of "current point" through
/// `n - 1` rolls using only the game rules.
fn enumerate_tail(game: &PointGameSpec, n: usize) -> BigRational {
    let dice = standard_dice();
    let mut alive: BTreeMap<Option<Outcome>, BigRational> = BTreeMap::new();
    alive.insert(None, q(1, 1));
    for _ in 1..n {
        let mut next: BTreeMap<Option<Outcome>, BigRational> = BTreeMap::new();
        for (point, mass) in &alive {
            for (roll, p) in dice.iter() {
                let state = match point {
                    None if game.points().contains(&roll) => Some(roll),
                    None => None,
                    Some(_) if roll == 7 => continue,
                    Some(pt) if *pt == roll => None,
                    Some(pt) => Some(*pt),
                };
                *next.entry(state).or_insert_with(|| q(0, 1)) += mass * p;
            }
        }
        alive = next;
    }
    alive.into_values().sum()
}

fn custom_games() -> Vec<PointGameSpec> {
    vec![
        PointGameSpec::new([7, 11, 5, 6, 8, 9], [2, 3, 12], [4, 10]).unwrap(),
        PointGameSpec::new([7, 11], [2, 3, 4, 10, 12], [5, 6, 8, 9]).unwrap(),
        PointGameSpec::new([7, 3, 5, 9, 11], [], [2, 4, 6, 8, 10, 12]).unwrap(),
    ]
}

#[test]
fn enumeration_matches_both_exact_routes() {
    let mut games = vec![PointGameSpec::craps(), PointGameSpec::crapless()];
    games.extend(custom_games());
    for game in &games {
        let chain = compile_chain(game);
        let rec = tail_table_recursion(&chain, 9).unwrap();
        for n in 1..=9 {
            let brute = enumerate_tail(game, n);
            assert_eq!(rec.get(n), &brute, "{game} recursion n={n}");
            assert_eq!(tail_matrix_power(&chain, n), brute, "{game} matrix n={n}");
        }
    }
}

#[test]
fn early_craps_tails() {
    let chain = compile_chain(&PointGameSpec::craps());
    let expected = [
        q(1, 1),
        q(1, 1),
        q(8, 9),
        q(1501, 1944),
        q(973, 1458),
        q(1451513, 2519424),
        q(1252685, 2519424),
    ];
    for (i, want) in expected.iter().enumerate() {
        assert_eq!(&tail_recursion(&chain, i + 1).unwrap(), want);
    }
}

#[test]
fn headline_tails() {
    let craps = compile_chain(&PointGameSpec::craps());
    let t = tail_recursion(&craps, 154).unwrap();
    assert_eq!(format_scientific(&t, 15), "1.78882426152234e-10");
    let crapless = compile_chain(&PointGameSpec::crapless());
    let t0 = tail_matrix_power(&crapless, 154);
    assert_eq!(format_scientific(&t0, 15), "2.96360067846694e-11");
    // one chance in 5.59 billion / 33.7 billion
    assert_eq!(format_scientific(&(q(1, 1) / &t), 3), "5.59e9");
    assert_eq!(format_scientific(&(q(1, 1) / &t0), 3), "3.37e10");
}

#[test]
fn mean_lengths() {
    let expected = [
        (PointGameSpec::craps(), q(1671, 196)),
        (PointGameSpec::crapless(), q(57678, 7303)),
    ];
    for (game, want) in &expected {
        assert_eq!(&mean_length(&compile_chain(game)).unwrap(), want);
    }
    let customs = [q(15, 1), q(447, 47), q(1983, 215)];
    for (game, want) in custom_games().iter().zip(customs) {
        assert_eq!(mean_length(&compile_chain(game)).unwrap(), want);
    }
    // Crapless hands are shorter on average.
    assert!(expected[1].1 < expected[0].1);
}

#[test]
fn mean_length_equals_tail_series() {
    for game in [PointGameSpec::craps(), PointGameSpec::crapless()] {
        let chain = compile_chain(&game);
        let mean = Real::from_rational(&mean_length(&chain).unwrap());
        let tails = tail_table_matrix(&chain, 400);
        let partial: BigRational = tails.values().iter().sum();
        let mix = mixture_coefficients(&chain, &eigenvalues_numeric(&chain).unwrap()).unwrap();
        let lead = mix.leading();
        // Σ_{n>400} t(n) < Σ_{n>400} c1 e1^(n-1) = c1 e1^400 / (1 - e1)
        let remainder = &lead.coefficient * lead.rate.powi(400) / (Real::one() - &lead.rate);
        let partial = Real::from_rational(&partial);
        assert!(mean > partial);
        assert!(mean <= &partial + &remainder);
    }
}

#[test]
fn pmf_telescopes() {
    let chain = compile_chain(&PointGameSpec::craps());
    let total: BigRational = (1..=80).map(|n| pmf(&chain, n)).sum();
    let t81 = tail_matrix_power(&chain, 81);
    assert_eq!(total + t81, q(1, 1));
    assert!((1..=80).all(|n| pmf(&chain, n) >= q(0, 1)));
}

#[test]
fn crapless_spectrum_and_mixture() {
    let chain = compile_chain(&PointGameSpec::crapless());
    let spectrum = eigenvalues_numeric(&chain).unwrap();
    let eig = [
        "0.8523281173752887542669068",
        "0.8026903823833096930911914",
        "0.7715690233868785173766819",
        "0.7403538632331556056413371",
        "0.7083931824749659316099268",
        "0.04133209781306816468062265",
    ];
    for (e, want) in spectrum.eigenvalues.iter().zip(eig) {
        let decimals = want.len() - 2;
        assert_eq!(format_fixed(&e.to_rational(), decimals), want);
    }
    let mix = mixture_coefficients(&chain, &spectrum).unwrap();
    let coeffs = [
        "1.227376609420398489287177",
        "-0.02577236497422444450819687",
        "-0.01291440500382554091961366",
        "-0.007214879335522823714600916",
        "-0.003948222936746750291726544",
        "-0.1775267371700789298530394",
    ];
    for (t, want) in mix.terms.iter().zip(coeffs) {
        let decimals = want.trim_start_matches('-').len() - 2;
        assert_eq!(format_fixed(&t.coefficient.to_rational(), decimals), want);
    }
    assert!(mix.has_single_positive_leading());
    let t154 = tail_closed_form(&mix, 154);
    assert_eq!(format_scientific(&t154.to_rational(), 9), "2.96360068e-11");
}

#[test]
fn custom_game_spectrum() {
    // points {5,6,8,9}: cubic -1944z^3 + ... in oracle sign convention.
    let chain = compile_chain(&custom_games()[1]);
    let spectrum = eigenvalues_numeric(&chain).unwrap();
    assert_eq!(
        spectrum.charpoly,
        hand_length::poly::IntPoly::from_descending(&[1944, -3726, 2229, -400])
    );
    let mix = mixture_coefficients(&chain, &spectrum).unwrap();
    assert_eq!(
        format_fixed(&mix.terms[0].coefficient.to_rational(), 20),
        "1.23234232275984965628"
    );
    assert_eq!(
        format_fixed(&mix.terms[2].rate.to_rational(), 20),
        "0.33081758078922133486"
    );
}

#[test]
fn crapless_ratio_crossings() {
    let chain = compile_chain(&PointGameSpec::crapless());
    let mix = mixture_coefficients(&chain, &eigenvalues_numeric(&chain).unwrap()).unwrap();
    let tails = tail_table_matrix(&chain, 450);
    let firsts: Vec<_> = [3, 6, 9, 12]
        .iter()
        .map(|&m| hand_length::spectral::first_ratio_below(&mix, tails.values(), m))
        .collect();
    assert_eq!(firsts, vec![Some(53), Some(167), Some(282), Some(398)]);
    let b = leading_term_bound(&mix, 1, tails.get(1));
    assert!(b.ratio > Real::one());
}
