//! Exact and high-precision scalar types.

mod cyclo;
mod hp;

pub use cyclo::{root_of_unity, CycloNumber};
pub use hp::{ComplexHP, DEFAULT_PRECISION_BITS};

/// Arbitrary-precision exact rational, always reduced with positive denominator.
pub type Rational = num_rational::BigRational;

use num_bigint::BigInt;

/// `n` as an exact rational.
pub fn rat_i(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Nonnegative integer power with exact arithmetic; `0^0 = 1`.
pub fn rat_pow(base: &Rational, exp: u64) -> Rational {
    use num_traits::One;
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Deterministic trial-division primality test for the tiny moduli used here.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
