//! Brute-force harmonic analysis on `A = R^N` under the wreath product
//! `G = (o^x)^N x| S_N`: orbits, the zonal spherical function oracle, the
//! relatively invariant `phi` bases, translation coefficients, and the
//! subrepresentation decomposition checks.

use num_traits::Zero;

use crate::kraw::MultiIndex;
use crate::numeric::{CycloNumber, Rational};
use crate::ring::{Level, RingSpec};
use crate::{Error, Result};

mod decomp;
mod phi;
mod table;

pub use decomp::{
    component_projection, compositions, enumerate_basis, symmetrize, verify_component_formula,
    verify_component_formula_t, ComponentReport, CompositionTuple, FactorId,
};
pub use phi::{epsilon_properties_check, EpsilonReport, GammaTable, HarmonicContext};
pub use table::FnTable;

/// Default dense-table size guard; override with `KKIT_MAX_TABLE`.
pub const MAX_TABLE: u128 = 1 << 20;

/// Checks `m^n_coords` against the size guard and returns it as usize.
pub fn guarded_table_size(m: u64, n_coords: usize) -> Result<usize> {
    let size = (m as u128).checked_pow(n_coords as u32).ok_or(Error::TableTooLarge(u128::MAX, MAX_TABLE))?;
    let limit = std::env::var("KKIT_MAX_TABLE")
        .ok()
        .and_then(|s| s.parse::<u128>().ok())
        .unwrap_or(MAX_TABLE);
    if size > limit {
        return Err(Error::TableTooLarge(size, limit));
    }
    Ok(size as usize)
}

/// Decodes a flat index into base-`m` coordinates (`n` digits, low first).
pub fn decode_point(idx: usize, m: u64, n: usize) -> Vec<u64> {
    let mut coords = Vec::with_capacity(n);
    let mut rest = idx as u64;
    for _ in 0..n {
        coords.push(rest % m);
        rest /= m;
    }
    coords
}

/// Inverse of [`decode_point`].
pub fn encode_point(coords: &[u64], m: u64) -> usize {
    let mut idx = 0u64;
    for &c in coords.iter().rev() {
        idx = idx * m + (c % m);
    }
    idx as usize
}

/// The orbit index of a point: `x_r = #{k | v(a_k) = r}`; coordinates with
/// `v = inf`, i.e. zeros, are the unconstrained remainder.
pub fn orbit_index(spec: RingSpec, coords: &[u64]) -> MultiIndex {
    let ell = spec.ell() as usize;
    let mut x = vec![0i64; ell];
    for &a in coords {
        if let Level::Fin(r) = spec.valuation(a) {
            x[r as usize] += 1;
        }
    }
    MultiIndex::new(x, coords.len() as i64).expect("counts are bounded by N")
}

/// The dual orbit index of a character tuple (given by the `b` indices of
/// `chi_b`): `n_r = #{k | v^hat(chi_{b_k}) = r}`.
pub fn char_orbit_index(spec: RingSpec, b_coords: &[u64]) -> MultiIndex {
    let ell = spec.ell() as usize;
    let mut n = vec![0i64; ell];
    for &b in b_coords {
        if b % spec.order() != 0 {
            // v^hat(chi_b) = l - 1 - v(b) for b != 0.
            let v = spec.valuation(b).fin().expect("nonzero");
            n[(spec.ell() - 1 - v) as usize] += 1;
        }
    }
    MultiIndex::new(n, b_coords.len() as i64).expect("counts are bounded by N")
}

/// The canonical orbit representative: `x_0` ones, then `x_1` copies of `pi`,
/// ..., padded with zeros (the `pi^u` layout).
pub fn orbit_rep(spec: RingSpec, n_coords: usize, x: &[i64]) -> Vec<u64> {
    let mut coords = Vec::with_capacity(n_coords);
    for (r, &xr) in x.iter().enumerate() {
        for _ in 0..xr {
            coords.push(spec.pow_mod(spec.p(), r as u64));
        }
    }
    coords.resize(n_coords, 0);
    coords
}

/// The point `pi^u` with the canonical block layout.
pub fn pi_u(spec: RingSpec, n_coords: usize, u: &[i64]) -> Vec<u64> {
    orbit_rep(spec, n_coords, u)
}

/// Exact values of every zonal spherical function `omega_n` on `R^N` at every
/// orbit, computed by brute force over the character orbits `P(n)`.
///
/// `value(n, x) = (1/|P(n)|) sum_{chi in P(n)} chi(a)` for the canonical
/// representative `a` of `O(x)`; the sum lands in `Z[zeta]` and collapses to
/// a rational by invariance.
pub struct ZonalTable {
    pub spec: RingSpec,
    pub n_coords: usize,
    /// Shared degree/orbit index set `X(l, N)` in lexicographic order.
    pub indices: Vec<MultiIndex>,
    /// `values[n][x]`, both in `indices` order.
    pub values: Vec<Vec<Rational>>,
}

impl ZonalTable {
    pub fn new(spec: RingSpec, n_coords: usize) -> Result<Self> {
        let size = guarded_table_size(spec.order(), n_coords)?;
        let ell = spec.ell() as usize;
        let m = spec.order();
        let indices = crate::kraw::enumerate_x(ell, n_coords as i64);
        let index_pos = |mi: &MultiIndex| indices.binary_search(mi).expect("in X(l,N)");
        let reps: Vec<Vec<u64>> = indices
            .iter()
            .map(|x| orbit_rep(spec, n_coords, x.parts()))
            .collect();
        // counts[n][x][e]: how many chi-tuples in P(n) hit exponent e at the
        // representative of O(x).
        let mut counts = vec![vec![vec![0u64; m as usize]; indices.len()]; indices.len()];
        let mut orbit_sizes = vec![0u64; indices.len()];
        for b_flat in 0..size {
            let b = decode_point(b_flat, m, n_coords);
            let n_idx = index_pos(&char_orbit_index(spec, &b));
            orbit_sizes[n_idx] += 1;
            for (x_idx, a) in reps.iter().enumerate() {
                let mut e = 0u64;
                for k in 0..n_coords {
                    e = (e + b[k] * a[k]) % m;
                }
                counts[n_idx][x_idx][e as usize] += 1;
            }
        }
        let mut values = Vec::with_capacity(indices.len());
        for n_idx in 0..indices.len() {
            let mut row = Vec::with_capacity(indices.len());
            for x_idx in 0..indices.len() {
                let coeffs: Vec<Rational> = counts[n_idx][x_idx]
                    .iter()
                    .map(|&c| crate::numeric::rat_i(c as i64))
                    .collect();
                let total = CycloNumber::from_dense(spec.p(), spec.ell(), coeffs);
                let val = total.to_rational()? / crate::numeric::rat_i(orbit_sizes[n_idx] as i64);
                row.push(val);
            }
            values.push(row);
        }
        Ok(ZonalTable { spec, n_coords, indices, values })
    }

    pub fn index_of(&self, mi: &MultiIndex) -> usize {
        self.indices.binary_search(mi).expect("index in X(l,N)")
    }

    pub fn value(&self, n: &MultiIndex, x: &MultiIndex) -> &Rational {
        &self.values[self.index_of(n)][self.index_of(x)]
    }

    /// `dim V_n = |P(n)|` by direct count (recomputed from the table shape).
    pub fn dim_vn_direct(&self, n: &MultiIndex) -> u64 {
        let m = self.spec.order();
        let size = (m as u128).pow(self.n_coords as u32) as usize;
        (0..size)
            .filter(|&b_flat| char_orbit_index(self.spec, &decode_point(b_flat, m, self.n_coords)) == *n)
            .count() as u64
    }

    /// The full exact table of `omega_n` as a function on `R^N`.
    pub fn omega_table(&self, n: &MultiIndex) -> Vec<Rational> {
        let m = self.spec.order();
        let size = (m as u128).pow(self.n_coords as u32) as usize;
        let row = &self.values[self.index_of(n)];
        (0..size)
            .map(|a_flat| {
                let a = decode_point(a_flat, m, self.n_coords);
                row[self.index_of(&orbit_index(self.spec, &a))].clone()
            })
            .collect()
    }
}

/// Single-value convenience wrapper over [`ZonalTable`].
pub fn zonal_oracle(spec: RingSpec, n_coords: usize, n: &[i64], x: &[i64]) -> Result<Rational> {
    let table = ZonalTable::new(spec, n_coords)?;
    let n = MultiIndex::new(n.to_vec(), n_coords as i64)?;
    let x = MultiIndex::new(x.to_vec(), n_coords as i64)?;
    Ok(table.value(&n, &x).clone())
}

/// An element `(c, sigma)` of the wreath product, acting on points by
/// `g(a)_k = c_k a_{sigma^{-1}(k)}`.
#[derive(Clone, Debug)]
pub struct GroupElem {
    pub units: Vec<u64>,
    /// `perm[k] = sigma(k)` (0-based).
    pub perm: Vec<usize>,
}

impl GroupElem {
    pub fn identity(n_coords: usize) -> Self {
        GroupElem { units: vec![1; n_coords], perm: (0..n_coords).collect() }
    }

    pub fn apply(&self, spec: RingSpec, a: &[u64]) -> Vec<u64> {
        let m = spec.order();
        let mut inv_perm = vec![0usize; self.perm.len()];
        for (k, &s) in self.perm.iter().enumerate() {
            inv_perm[s] = k;
        }
        (0..a.len())
            .map(|k| self.units[k] % m * a[inv_perm[k]] % m)
            .collect()
    }

    /// `g^{-1}(a)_k = c_{sigma(k)}^{-1} a_{sigma(k)}`.
    pub fn apply_inverse(&self, spec: RingSpec, a: &[u64]) -> Vec<u64> {
        let m = spec.order();
        (0..a.len())
            .map(|k| {
                let s = self.perm[k];
                spec.unit_inverse(self.units[s]) * a[s] % m
            })
            .collect()
    }
}

/// Outcome of one translation-identity case, kept exact.
#[derive(Clone, Debug)]
pub struct TranslationReport {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl TranslationReport {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Verifies `omega_n(g(a) - b) = dim V_n <g . omega_n(a + .), omega_n(b + .)>`
/// with both sides computed independently and exactly: the left via the zonal
/// oracle at the orbit of `g(a) - b`, the right via the full rational inner
/// product on `R^N`.
pub fn verify_translation_identity(
    zonal: &ZonalTable,
    n: &MultiIndex,
    a: &[u64],
    b: &[u64],
    g: &GroupElem,
) -> Result<TranslationReport> {
    let spec = zonal.spec;
    let m = spec.order();
    let n_coords = zonal.n_coords;
    if a.len() != n_coords || b.len() != n_coords || g.units.len() != n_coords {
        return Err(Error::LengthMismatch(a.len(), n_coords));
    }
    let ga = g.apply(spec, a);
    let diff: Vec<u64> = (0..n_coords).map(|k| (ga[k] + m - b[k] % m) % m).collect();
    let lhs = zonal.value(n, &orbit_index(spec, &diff)).clone();

    let omega = zonal.omega_table(n);
    let size = omega.len();
    let translate = |shift: &[u64], x_flat: usize| -> usize {
        let x = decode_point(x_flat, m, n_coords);
        let shifted: Vec<u64> = (0..n_coords).map(|k| (shift[k] + x[k]) % m).collect();
        encode_point(&shifted, m)
    };
    // <g . f1, f2> with f1 = omega(a + .), f2 = omega(b + .); all values are
    // rational and real, so conjugation is a no-op.
    let mut acc = Rational::zero();
    for x_flat in 0..size {
        let x = decode_point(x_flat, m, n_coords);
        let gx = g.apply_inverse(spec, &x);
        let f1 = &omega[translate(a, encode_point(&gx, m))];
        let f2 = &omega[translate(b, x_flat)];
        acc += f1 * f2;
    }
    acc /= crate::numeric::rat_i(size as i64);
    let dim = crate::kraw::dim_vn(spec.q() as i64, n_coords as i64, n.parts());
    let rhs = acc * dim;
    Ok(TranslationReport { lhs, rhs })
}
