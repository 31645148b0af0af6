//! Dense complex-valued function tables on `R^N`.

use crate::numeric::{ComplexHP, Rational};
use crate::ring::RingSpec;
use crate::Result;

use super::{decode_point, encode_point, guarded_table_size};

/// A function `R^N -> C` stored densely (index = base-`p^l` digits of the
/// coordinate vector, low coordinate first).
#[derive(Clone, Debug)]
pub struct FnTable {
    pub spec: RingSpec,
    pub n_coords: usize,
    pub prec: usize,
    pub values: Vec<ComplexHP>,
}

impl FnTable {
    pub fn constant(spec: RingSpec, n_coords: usize, value: ComplexHP, prec: usize) -> Result<Self> {
        let size = guarded_table_size(spec.order(), n_coords)?;
        Ok(FnTable { spec, n_coords, prec, values: vec![value; size] })
    }

    pub fn one(spec: RingSpec, n_coords: usize, prec: usize) -> Result<Self> {
        Self::constant(spec, n_coords, ComplexHP::one(prec), prec)
    }

    pub fn from_fn(
        spec: RingSpec,
        n_coords: usize,
        prec: usize,
        f: impl Fn(&[u64]) -> ComplexHP,
    ) -> Result<Self> {
        let size = guarded_table_size(spec.order(), n_coords)?;
        let m = spec.order();
        let values = (0..size).map(|i| f(&decode_point(i, m, n_coords))).collect();
        Ok(FnTable { spec, n_coords, prec, values })
    }

    /// Builds the exact rational table as a complex one.
    pub fn from_rationals(
        spec: RingSpec,
        n_coords: usize,
        prec: usize,
        values: &[Rational],
    ) -> Self {
        FnTable {
            spec,
            n_coords,
            prec,
            values: values.iter().map(|v| ComplexHP::from_rational(v, prec)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, coords: &[u64]) -> &ComplexHP {
        &self.values[encode_point(coords, self.spec.order())]
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.len(), o.len());
        let values = self.values.iter().zip(&o.values).map(|(a, b)| a.add(b)).collect();
        FnTable { spec: self.spec, n_coords: self.n_coords, prec: self.prec, values }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.len(), o.len());
        let values = self.values.iter().zip(&o.values).map(|(a, b)| a.sub(b)).collect();
        FnTable { spec: self.spec, n_coords: self.n_coords, prec: self.prec, values }
    }

    pub fn scale(&self, c: &ComplexHP) -> Self {
        let values = self.values.iter().map(|v| v.mul(c)).collect();
        FnTable { spec: self.spec, n_coords: self.n_coords, prec: self.prec, values }
    }

    pub fn zero_like(&self) -> Self {
        FnTable {
            spec: self.spec,
            n_coords: self.n_coords,
            prec: self.prec,
            values: vec![ComplexHP::zero(self.prec); self.len()],
        }
    }

    /// `L^2` inner product `(1/|R^N|) sum_a f(a) conj(g(a))`.
    pub fn inner(&self, o: &Self) -> ComplexHP {
        assert_eq!(self.len(), o.len());
        let mut acc = ComplexHP::zero(self.prec);
        for (a, b) in self.values.iter().zip(&o.values) {
            acc = acc.add(&a.mul(&b.conj()));
        }
        acc.scale(&crate::numeric::rat(1, self.len() as i64))
    }

    pub fn norm_sqr(&self) -> ComplexHP {
        self.inner(self)
    }

    /// Tensor product of per-coordinate factors (each a table over `R`).
    pub fn tensor(spec: RingSpec, factors: &[&FnTable], prec: usize) -> Result<Self> {
        let n_coords = factors.len();
        let m = spec.order();
        FnTable::from_fn(spec, n_coords, prec, |coords| {
            let mut acc = ComplexHP::one(prec);
            for (k, f) in factors.iter().enumerate() {
                debug_assert_eq!(f.n_coords, 1);
                acc = acc.mul(&f.values[(coords[k] % m) as usize]);
            }
            acc
        })
    }

    /// The translate `a -> f(b + a)`.
    pub fn translate(&self, b: &[u64]) -> Self {
        let m = self.spec.order();
        let values = (0..self.len())
            .map(|i| {
                let a = decode_point(i, m, self.n_coords);
                let shifted: Vec<u64> =
                    (0..self.n_coords).map(|k| (b[k] + a[k]) % m).collect();
                self.values[encode_point(&shifted, m)].clone()
            })
            .collect();
        FnTable { spec: self.spec, n_coords: self.n_coords, prec: self.prec, values }
    }

    /// The action of `g` in the wreath product: `(g . f)(a) = f(g^{-1}(a))`.
    pub fn group_act(&self, g: &super::GroupElem) -> Self {
        let m = self.spec.order();
        let values = (0..self.len())
            .map(|i| {
                let a = decode_point(i, m, self.n_coords);
                let pre = g.apply_inverse(self.spec, &a);
                self.values[encode_point(&pre, m)].clone()
            })
            .collect();
        FnTable { spec: self.spec, n_coords: self.n_coords, prec: self.prec, values }
    }

    /// Largest pointwise modulus of `self - o`.
    pub fn max_diff(&self, o: &Self) -> f64 {
        self.values
            .iter()
            .zip(&o.values)
            .map(|(a, b)| a.sub(b).abs_f64())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs_f64()).fold(0.0, f64::max)
    }
}
