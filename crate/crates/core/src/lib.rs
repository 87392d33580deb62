//! Distribution of the length of a shooter's hand at craps and related
//! point games.
//!
//! The tail `t(n) = P(L >= n)` is computed three ways:
//!
//! * exactly, by a renewal recursion over the come-out roll ([`exact`]);
//! * exactly, from powers of the transient block `Q` of an absorbing
//!   Markov chain ([`exact`]);
//! * in closed form, as a signed mixture of geometric tails
//!   `Σ c_i e_i^(n-1)` over the eigenvalues of `Q` ([`spectral`]).
//!
//! [`analysis`] certifies the structure behind the closed form
//! (interlacing eigenvalues, a positive definite symmetric part) and
//! [`montecarlo`] provides an independent simulation of hands.
//!
//! ```
//! use hand_length::game::{compile_chain, PointGameSpec};
//! use hand_length::exact::tail_recursion;
//! use hand_length::BigRational;
//!
//! let chain = compile_chain(&PointGameSpec::craps());
//! let t3 = tail_recursion(&chain, 3).unwrap();
//! assert_eq!(t3, BigRational::new(8.into(), 9.into()));
//! ```

pub mod analysis;
pub mod decimal;
pub mod exact;
pub mod game;
pub mod matrix;
pub mod montecarlo;
pub mod poly;
pub mod real;
pub mod roots;
pub mod spectral;
pub mod verify;

pub use game::{compile_chain, ChainSpec, PointGameSpec};
pub use real::Real;
pub use spectral::{GeometricMixture, Spectrum};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
