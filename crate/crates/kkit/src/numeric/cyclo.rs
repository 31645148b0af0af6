//! Exact arithmetic in `Z[zeta]` for `zeta` a primitive `p^l`-th root of unity.
//!
//! Elements are kept in the canonical basis `{zeta^j : 0 <= j < phi(p^l)}`.
//! The minimal polynomial of `zeta` is the `p^l`-th cyclotomic polynomial
//! `Phi(x) = sum_{k=0}^{p-1} x^{k p^(l-1)}`, which has only `p` terms, so an
//! overflowing exponent is eliminated by a single sparse substitution
//! `zeta^((p-1)p^(l-1) + j) = -sum_{k=0}^{p-2} zeta^(k p^(l-1) + j)`.

use num_traits::{One, Zero};

use super::{is_prime, ComplexHP, Rational};
use crate::{Error, Result};

/// An exact element of `Q(zeta_{p^l})` in the canonical power basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloNumber {
    p: u64,
    ell: u32,
    /// Coefficient `j` multiplies `zeta^j`; length `phi(p^l) = p^(l-1)(p-1)`.
    coeffs: Vec<Rational>,
}

fn check_field(p: u64, ell: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime("p", p));
    }
    if ell < 1 {
        return Err(Error::BadLevel(ell as i64));
    }
    Ok(())
}

impl CycloNumber {
    pub fn phi(p: u64, ell: u32) -> usize {
        (p.pow(ell - 1) * (p - 1)) as usize
    }

    pub fn modulus(p: u64, ell: u32) -> usize {
        p.pow(ell) as usize
    }

    pub fn zero(p: u64, ell: u32) -> Self {
        CycloNumber {
            p,
            ell,
            coeffs: vec![Rational::zero(); Self::phi(p, ell)],
        }
    }

    pub fn one(p: u64, ell: u32) -> Self {
        Self::from_rational(p, ell, Rational::one())
    }

    pub fn from_rational(p: u64, ell: u32, q: Rational) -> Self {
        let mut z = Self::zero(p, ell);
        z.coeffs[0] = q;
        z
    }

    /// Builds an element from dense coefficients over exponents `0..p^l`,
    /// reducing the overflowing exponents into the canonical basis.
    pub fn from_dense(p: u64, ell: u32, mut dense: Vec<Rational>) -> Self {
        let m = Self::modulus(p, ell);
        let phi = Self::phi(p, ell);
        let step = p.pow(ell - 1) as usize;
        assert_eq!(dense.len(), m);
        for e in phi..m {
            if dense[e].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut dense[e], Rational::zero());
            let j = e - phi;
            for k in 0..(p - 1) as usize {
                dense[k * step + j] -= &c;
            }
        }
        dense.truncate(phi);
        CycloNumber { p, ell, coeffs: dense }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    fn assert_same_field(&self, o: &Self) {
        assert!(
            self.p == o.p && self.ell == o.ell,
            "cyclotomic field mismatch: (p={}, l={}) vs (p={}, l={})",
            self.p,
            self.ell,
            o.p,
            o.ell
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.assert_same_field(o);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycloNumber { p: self.p, ell: self.ell, coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.assert_same_field(o);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CycloNumber { p: self.p, ell: self.ell, coeffs }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        CycloNumber { p: self.p, ell: self.ell, coeffs }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * q).collect();
        CycloNumber { p: self.p, ell: self.ell, coeffs }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.assert_same_field(o);
        let m = Self::modulus(self.p, self.ell);
        let mut dense = vec![Rational::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                dense[(i + j) % m] += a * b;
            }
        }
        Self::from_dense(self.p, self.ell, dense)
    }

    /// Complex conjugation `zeta^k -> zeta^(-k)`; an involution fixing rationals.
    pub fn conj(&self) -> Self {
        let m = Self::modulus(self.p, self.ell);
        let mut dense = vec![Rational::zero(); m];
        for (j, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                dense[(m - j) % m] += a;
            }
        }
        Self::from_dense(self.p, self.ell, dense)
    }

    /// Extracts the rational value. Since the canonical basis is a Q-basis,
    /// rationality is exactly coefficient support `{0}`.
    pub fn to_rational(&self) -> Result<Rational> {
        if self.coeffs[1..].iter().all(Rational::is_zero) {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotRational(self.coeffs.clone()))
        }
    }

    /// Numerical evaluation at the chosen precision.
    pub fn eval_hp(&self, prec: usize) -> ComplexHP {
        let m = Self::modulus(self.p, self.ell) as u64;
        let mut acc = ComplexHP::zero(prec);
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let root = ComplexHP::root_of_unity(j as i64, m, prec);
            acc = acc.add(&root.scale(a));
        }
        acc
    }
}

/// Canonical form of `zeta^(k mod p^l)` for `zeta` the primitive `p^l`-th root
/// of unity. Rejects non-prime `p` and `l < 1`.
pub fn root_of_unity(p: u64, ell: u32, k: i64) -> Result<CycloNumber> {
    check_field(p, ell)?;
    let m = CycloNumber::modulus(p, ell);
    let e = k.rem_euclid(m as i64) as usize;
    let mut dense = vec![Rational::zero(); m];
    dense[e] = Rational::one();
    Ok(CycloNumber::from_dense(p, ell, dense))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, rat_i};
    use proptest::prelude::*;

    #[test]
    fn small_roots() {
        // p^l = 2: zeta = -1.
        let z = root_of_unity(2, 1, 1).unwrap();
        assert_eq!(z.to_rational().unwrap(), rat_i(-1));
        // Identity case.
        let z = root_of_unity(3, 1, 0).unwrap();
        assert_eq!(z.to_rational().unwrap(), rat_i(1));
        // i^2 = -1 under canonical reduction.
        let i = root_of_unity(2, 2, 1).unwrap();
        assert_eq!(i.mul(&i), root_of_unity(2, 2, 2).unwrap());
        assert_eq!(i.mul(&i).to_rational().unwrap(), rat_i(-1));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(root_of_unity(4, 1, 0).is_err());
        assert!(root_of_unity(1, 1, 0).is_err());
        assert!(root_of_unity(3, 0, 0).is_err());
    }

    #[test]
    fn full_character_sum_vanishes() {
        for (p, ell) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 2)] {
            let m = CycloNumber::modulus(p, ell) as i64;
            let mut acc = CycloNumber::zero(p, ell);
            for k in 0..m {
                acc = acc.add(&root_of_unity(p, ell, k).unwrap());
            }
            assert_eq!(acc.to_rational().unwrap(), rat_i(0), "p={p} l={ell}");
        }
    }

    #[test]
    fn subgroup_coset_sums_vanish() {
        // Sum over a full coset of a nontrivial subgroup of p^l-th roots.
        for (p, ell, d) in [(2u64, 3u32, 2i64), (2, 3, 4), (3, 2, 3), (5, 2, 5)] {
            let m = CycloNumber::modulus(p, ell) as i64;
            assert_eq!(m % d, 0);
            for shift in 0..(m / d) {
                let mut acc = CycloNumber::zero(p, ell);
                for k in 0..d {
                    acc = acc.add(&root_of_unity(p, ell, shift + k * (m / d)).unwrap());
                }
                assert!(acc.is_zero(), "p={p} l={ell} d={d} shift={shift}");
            }
        }
    }

    #[test]
    fn nonrational_detected() {
        let z = root_of_unity(3, 1, 1).unwrap();
        assert!(matches!(z.to_rational(), Err(crate::Error::NotRational(_))));
    }

    #[test]
    fn conjugation() {
        let one = CycloNumber::one(3, 2);
        assert_eq!(one.conj(), one);
        // p^l = 4: conj(i) = -i.
        let i = root_of_unity(2, 2, 1).unwrap();
        assert_eq!(i.conj(), i.neg());
        assert_eq!(i.conj().conj(), i);
    }

    #[test]
    fn powers_return_to_one() {
        for (p, ell) in [(2u64, 2u32), (3, 1), (3, 2), (5, 1)] {
            let m = CycloNumber::modulus(p, ell) as i64;
            for k in 0..m {
                let z = root_of_unity(p, ell, k).unwrap();
                let mut acc = CycloNumber::one(p, ell);
                for _ in 0..m {
                    acc = acc.mul(&z);
                }
                assert_eq!(acc, CycloNumber::one(p, ell));
            }
        }
    }

    #[test]
    fn hp_evaluation_matches_exact() {
        // zeta^a * zeta^b evaluated numerically vs reduced exactly.
        let prec = 256;
        let tol = 1e-60;
        for (p, ell) in [(2u64, 3u32), (3, 2), (5, 1)] {
            let m = CycloNumber::modulus(p, ell) as i64;
            for a in 0..m {
                let za = root_of_unity(p, ell, a).unwrap();
                let zb = root_of_unity(p, ell, (a * 3 + 1) % m).unwrap();
                let exact = za.mul(&zb).eval_hp(prec);
                let numeric = za.eval_hp(prec).mul(&zb.eval_hp(prec));
                assert!(exact.approx_eq(&numeric, tol));
            }
        }
    }

    fn arb_cyclo(p: u64, ell: u32) -> impl Strategy<Value = CycloNumber> {
        let m = CycloNumber::modulus(p, ell) as i64;
        proptest::collection::vec((-4i64..5, 0..m), 1..5).prop_map(move |terms| {
            let mut acc = CycloNumber::zero(p, ell);
            for (c, k) in terms {
                acc = acc.add(&root_of_unity(p, ell, k).unwrap().scale(&rat_i(c)));
            }
            acc
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_cyclo(3, 2), b in arb_cyclo(3, 2), c in arb_cyclo(3, 2)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        }

        #[test]
        fn norm_is_nonnegative(a in arb_cyclo(2, 3)) {
            let n = a.mul(&a.conj());
            if let Ok(q) = n.to_rational() {
                prop_assert!(q >= rat(0, 1));
            }
        }
    }
}
