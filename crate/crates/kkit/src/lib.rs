//! Exact-arithmetic toolkit for multivariate Krawtchouk polynomials and
//! brute-force harmonic analysis on the residue ring `Z/p^l`.
//!
//! The crate is organized around five layers:
//!
//! * [`numeric`] — exact rationals, exact prime-power cyclotomic integers,
//!   and a tolerance-bearing high-precision complex type.
//! * [`kraw`] — 1-variate and `l`-variate Krawtchouk polynomials plus the
//!   combinatorial helpers (Pochhammer, multinomials, index enumeration).
//! * [`ring`] — the ring `R = Z/p^l` with valuation, its additive character
//!   group with dual valuation, the unit-group filtration and unit characters.
//! * [`lab`] — function tables on `R^N`, the zonal spherical function oracle,
//!   the relatively invariant `phi` bases, translation coefficients, and the
//!   subrepresentation decomposition checks.
//! * [`addition`] — exact verification of the addition theorem and the
//!   inner-product formula over exhaustive parameter sweeps.

pub mod addition;
pub mod cli;
pub mod kraw;
pub mod lab;
pub mod numeric;
pub mod ring;

pub use numeric::{ComplexHP, CycloNumber, Rational};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} must be prime, got {1}")]
    NotPrime(&'static str, u64),
    #[error("level must be >= 1, got {0}")]
    BadLevel(i64),
    #[error("value is not rational; coefficient support {0:?}")]
    NotRational(Vec<Rational>),
    #[error("cyclotomic field mismatch: (p={0}, l={1}) vs (p={2}, l={3})")]
    FieldMismatch(u64, u32, u64, u32),
    #[error("pochhammer index must be nonnegative, got {0}")]
    NegativePochhammer(i64),
    #[error("kraw1 requires 0 <= n <= N, got n={0}, N={1}")]
    DegreeOutOfRange(i64, i64),
    #[error("kraw1 requires p != 0")]
    ZeroParameter,
    #[error("parameter p_{0} = 0 with n_{0} > 0")]
    ZeroParameterAt(usize),
    #[error("multi-index has |n| = {0} > N = {1}")]
    IndexOverflow(i64, i64),
    #[error("multi-index length {0} does not match l = {1}")]
    LengthMismatch(usize, usize),
    #[error("table size {0} exceeds the guard {1} (set KKIT_MAX_TABLE to override)")]
    TableTooLarge(u128, u128),
    #[error("dual valuations differ: {0:?} vs {1:?}")]
    ValuationMismatch(crate::ring::Level, crate::ring::Level),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
