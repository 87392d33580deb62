//! Direct simulation of shooter hands.
//!
//! Hands are played from the game rules (come-out, point, seven-out), never
//! from the compiled chain, so the estimates are independent of the exact
//! engines they are compared against.
//!
//! Reproducibility: the generator is Xoshiro256++ seeded through SplitMix64
//! from the user seed. Trials are split over [`STREAMS`] fixed streams;
//! stream `i` is the base generator advanced by `i` calls to `jump()`
//! (2^128 steps each). Each 64-bit output `x` becomes one roll of two dice
//! via `k = (x * 36) >> 64`, `die1 = k / 6 + 1`, `die2 = k % 6 + 1`. Stream
//! histograms are merged by addition, so results do not depend on thread
//! count or scheduling.

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::game::{Outcome, PointGameSpec, SEVEN};

pub const STREAMS: u64 = 64;

#[derive(Clone, Copy, PartialEq, Eq)]
enum ComeOut {
    Decision,
    Point,
}

/// Per-outcome come-out classification, precomputed from the rules.
#[derive(Clone)]
pub struct HandRules {
    come_out: [ComeOut; 13],
}

impl HandRules {
    pub fn new(game: &PointGameSpec) -> Self {
        let mut come_out = [ComeOut::Decision; 13];
        for &p in game.points() {
            come_out[p as usize] = ComeOut::Point;
        }
        HandRules { come_out }
    }

    /// Plays one hand and returns its length, counting the seven-out roll.
    pub fn play<F: FnMut() -> Outcome>(&self, roll: &mut F) -> u64 {
        let mut rolls = 0u64;
        let mut point: Option<Outcome> = None;
        loop {
            let total = roll();
            rolls += 1;
            match point {
                None => {
                    if self.come_out[total as usize] == ComeOut::Point {
                        point = Some(total);
                    }
                }
                Some(p) => {
                    if total == SEVEN {
                        return rolls;
                    }
                    if total == p {
                        point = None;
                    }
                }
            }
        }
    }
}

/// Plays one hand with rolls drawn from `roll`.
///
/// The game must have at least one point; otherwise a hand never ends.
pub fn simulate_hand<F: FnMut() -> Outcome>(game: &PointGameSpec, roll: &mut F) -> u64 {
    HandRules::new(game).play(roll)
}

/// Two fair dice driven by Xoshiro256++.
pub struct Dice {
    rng: Xoshiro256PlusPlus,
}

impl Dice {
    pub fn new(rng: Xoshiro256PlusPlus) -> Self {
        Dice { rng }
    }

    pub fn seeded(seed: u64) -> Self {
        Dice::new(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    #[inline]
    pub fn roll(&mut self) -> Outcome {
        let k = ((self.rng.next_u64() as u128 * 36) >> 64) as u8;
        k / 6 + k % 6 + 2
    }
}

fn stream_generators(seed: u64, streams: u64) -> Vec<Xoshiro256PlusPlus> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut out = Vec::with_capacity(streams as usize);
    for _ in 0..streams {
        out.push(rng.clone());
        rng.jump();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate {
    pub n: usize,
    /// Fraction of hands with length `>= n`.
    pub estimate: f64,
    /// Binomial standard error of `estimate`.
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub trials: u64,
    pub seed: u64,
    /// `length_counts[l]` hands had length exactly `l`.
    pub length_counts: Vec<u64>,
    /// Entries for `n = 1..=max_length_observed`.
    pub tail_estimates: Vec<TailEstimate>,
    pub max_length_observed: usize,
    pub mean_length: f64,
    pub mean_std_error: f64,
}

impl SimulationResult {
    fn from_counts(trials: u64, seed: u64, length_counts: Vec<u64>) -> Self {
        let max_length_observed = length_counts.iter().rposition(|&c| c > 0).unwrap_or(0);
        let total = trials as f64;
        let mut at_least = trials;
        let mut tail_estimates = Vec::with_capacity(max_length_observed);
        for n in 1..=max_length_observed {
            let p = at_least as f64 / total;
            tail_estimates.push(TailEstimate {
                n,
                estimate: p,
                std_error: (p * (1.0 - p) / total).sqrt(),
            });
            at_least -= length_counts[n];
        }
        let (sum, sum_sq) =
            length_counts
                .iter()
                .enumerate()
                .fold((0.0f64, 0.0f64), |(s, s2), (l, &c)| {
                    let (l, c) = (l as f64, c as f64);
                    (s + l * c, s2 + l * l * c)
                });
        let mean_length = sum / total;
        let variance = if trials > 1 {
            (sum_sq - total * mean_length * mean_length) / (total - 1.0)
        } else {
            0.0
        };
        SimulationResult {
            trials,
            seed,
            length_counts,
            tail_estimates,
            max_length_observed,
            mean_length,
            mean_std_error: (variance.max(0.0) / total).sqrt(),
        }
    }

    /// Empirical `P(L >= n)`; zero beyond the longest observed hand.
    pub fn tail(&self, n: usize) -> f64 {
        assert!(n >= 1, "hand lengths start at 1");
        self.tail_estimates.get(n - 1).map_or(0.0, |e| e.estimate)
    }

    /// Number of hands of length at least `n`.
    pub fn hands_at_least(&self, n: usize) -> u64 {
        self.length_counts.iter().skip(n).sum()
    }

    /// `(p̂ - t) / sqrt(t(1 - t)/N)`, the binomial z-score under the exact
    /// tail `t`. When `t` is 0 or 1 the estimate must match exactly: the
    /// score is 0 if it does and infinite otherwise.
    pub fn z_score(&self, n: usize, exact: f64) -> f64 {
        let p = self.tail(n);
        let se = (exact * (1.0 - exact) / self.trials as f64).sqrt();
        if se == 0.0 {
            if p == exact {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (p - exact) / se
        }
    }
}

/// Simulates `trials` hands from `seed`.
pub fn estimate_tail(game: &PointGameSpec, trials: u64, seed: u64) -> SimulationResult {
    assert!(trials >= 1, "at least one trial is required");
    assert!(
        !game.points().is_empty(),
        "a game without points never ends a hand"
    );
    let rules = HandRules::new(game);
    let per_stream = trials / STREAMS;
    let remainder = trials % STREAMS;
    let counts = stream_generators(seed, STREAMS)
        .into_par_iter()
        .enumerate()
        .map(|(i, rng)| {
            let n = per_stream + u64::from((i as u64) < remainder);
            let mut dice = Dice::new(rng);
            let mut roll = || dice.roll();
            let mut hist: Vec<u64> = Vec::new();
            for _ in 0..n {
                let len = rules.play(&mut roll) as usize;
                if len >= hist.len() {
                    hist.resize(len + 1, 0);
                }
                hist[len] += 1;
            }
            hist
        })
        .reduce(Vec::new, |mut a, b| {
            if b.len() > a.len() {
                a.resize(b.len(), 0);
            }
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        });
    SimulationResult::from_counts(trials, seed, counts)
}
