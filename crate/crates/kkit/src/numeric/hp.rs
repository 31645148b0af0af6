//! High-precision complex arithmetic with explicit tolerances.
//!
//! Values that leave the exact cyclotomic field (unit-group character values
//! and everything built from them) are carried here. Arithmetic error is
//! bounded by the working precision; comparisons are only meaningful against
//! an explicit tolerance.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_traits::Signed;

use super::Rational;

/// Default working precision for [`ComplexHP`].
pub const DEFAULT_PRECISION_BITS: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

fn bigint_to_float(n: &num_bigint::BigInt, prec: usize) -> BigFloat {
    let bits = n.abs().bits() as usize;
    let p = prec.max(bits + 2);
    let hex = n.to_str_radix(16);
    with_consts(|cc| BigFloat::parse(&hex, Radix::Hex, p, RM, cc))
}

pub(crate) fn rat_to_float(q: &Rational, prec: usize) -> BigFloat {
    let num = bigint_to_float(q.numer(), prec);
    let den = bigint_to_float(q.denom(), prec);
    num.div(&den, prec, RM)
}

fn float_le(a: &BigFloat, b: &BigFloat) -> bool {
    matches!(a.cmp(b), Some(c) if c <= 0)
}

/// A complex number at a configurable precision (in bits).
#[derive(Clone, Debug)]
pub struct ComplexHP {
    re: BigFloat,
    im: BigFloat,
    prec: usize,
}

impl ComplexHP {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        ComplexHP { re, im, prec }
    }

    pub fn zero(prec: usize) -> Self {
        ComplexHP::new(BigFloat::from_i64(0, prec), BigFloat::from_i64(0, prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        ComplexHP::new(BigFloat::from_i64(1, prec), BigFloat::from_i64(0, prec), prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        ComplexHP::new(BigFloat::from_i64(n, prec), BigFloat::from_i64(0, prec), prec)
    }

    pub fn from_rational(q: &Rational, prec: usize) -> Self {
        ComplexHP::new(rat_to_float(q, prec), BigFloat::from_i64(0, prec), prec)
    }

    pub fn precision_bits(&self) -> usize {
        self.prec
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    /// `exp(2*pi*i*num/den)`.
    pub fn root_of_unity(num: i64, den: u64, prec: usize) -> Self {
        assert!(den > 0);
        let k = num.rem_euclid(den as i64);
        let angle = with_consts(|cc| {
            let pi = cc.pi(prec + 16, RM);
            let two_pi = pi.mul(&BigFloat::from_i64(2, prec + 16), prec + 16, RM);
            two_pi
                .mul(&BigFloat::from_i64(k, prec + 16), prec + 16, RM)
                .div(&BigFloat::from_u64(den, prec + 16), prec + 16, RM)
        });
        let re = with_consts(|cc| angle.cos(prec, RM, cc));
        let im = with_consts(|cc| angle.sin(prec, RM, cc));
        ComplexHP::new(re, im, prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        ComplexHP::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM), p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        ComplexHP::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM), p)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        let re = self
            .re
            .mul(&o.re, p, RM)
            .sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self
            .re
            .mul(&o.im, p, RM)
            .add(&self.im.mul(&o.re, p, RM), p, RM);
        ComplexHP::new(re, im, p)
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        let d = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let re = self
            .re
            .mul(&o.re, p, RM)
            .add(&self.im.mul(&o.im, p, RM), p, RM)
            .div(&d, p, RM);
        let im = self
            .im
            .mul(&o.re, p, RM)
            .sub(&self.re.mul(&o.im, p, RM), p, RM)
            .div(&d, p, RM);
        ComplexHP::new(re, im, p)
    }

    pub fn neg(&self) -> Self {
        ComplexHP::new(self.re.neg(), self.im.neg(), self.prec)
    }

    pub fn conj(&self) -> Self {
        ComplexHP::new(self.re.clone(), self.im.neg(), self.prec)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.mul(&ComplexHP::from_rational(q, self.prec))
    }

    /// `|z|^2` as a real value.
    pub fn norm_sqr(&self) -> Self {
        let p = self.prec;
        let n = self
            .re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM);
        ComplexHP::new(n, BigFloat::from_i64(0, p), p)
    }

    /// `|z|` as a real value.
    pub fn abs(&self) -> Self {
        let n = self.norm_sqr();
        ComplexHP::new(n.re.sqrt(self.prec, RM), BigFloat::from_i64(0, self.prec), self.prec)
    }

    /// Square root of a nonnegative real value (the imaginary part is ignored).
    pub fn sqrt_re(&self) -> Self {
        ComplexHP::new(self.re.sqrt(self.prec, RM), BigFloat::from_i64(0, self.prec), self.prec)
    }

    pub fn pow_u(&self, e: u64) -> Self {
        let mut acc = ComplexHP::one(self.prec);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `|self - other| <= tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).is_zero_within(tol)
    }

    /// `|self| <= tol`.
    pub fn is_zero_within(&self, tol: f64) -> bool {
        let p = self.prec;
        float_le(&self.abs().re, &BigFloat::from_f64(tol, p))
    }

    /// Decimal rendering, mainly for reports.
    pub fn to_string_dec(&self) -> String {
        let re = with_consts(|cc| self.re.format(Radix::Dec, RM, cc)).unwrap_or_default();
        if self.im.is_zero() {
            re
        } else {
            let im = with_consts(|cc| self.im.format(Radix::Dec, RM, cc)).unwrap_or_default();
            format!("{re} + {im}i")
        }
    }

    /// Lossy f64 view of `|self|`, for summaries only.
    pub fn abs_f64(&self) -> f64 {
        let s = with_consts(|cc| self.abs().re.format(Radix::Dec, RM, cc)).unwrap_or_default();
        s.parse::<f64>().unwrap_or(f64::NAN)
    }
}
