//! The relatively invariant basis `phi_r^(i)` of `C[R]` and the translation
//! coefficients `gamma_{r,s}^(i)`.

use crate::numeric::{rat, ComplexHP};
use crate::ring::{all_unit_characters, Level, RingSpec, UnitChar, UnitGroup};
use crate::{Error, Result};

use super::table::FnTable;

/// Per-ring caches: unit group, its full character list in nested order, the
/// normalized `phi` bases, and the gamma table. Built once, then read-only.
pub struct HarmonicContext {
    pub spec: RingSpec,
    pub group: UnitGroup,
    /// All characters of the unit group in nested order: for every `u` the
    /// first `I_u` entries are exactly those trivial on `o^x_u`.
    pub chars: Vec<UnitChar>,
    /// `phi[r][i-1]` for `0 <= r <= l-1`, `1 <= i <= I_r`; unit `L^2` norm.
    pub phi: Vec<Vec<FnTable>>,
    pub gamma: GammaTable,
    pub prec: usize,
}

/// Translation coefficients `gamma_{r,s}^(i)`, stored for all
/// `0 <= s <= r <= l-1` and `1 <= i <= I_r` (out-of-window entries are kept
/// so support can be checked rather than assumed).
pub struct GammaTable {
    pub spec: RingSpec,
    /// `entries[r][s][i-1]`.
    pub entries: Vec<Vec<Vec<ComplexHP>>>,
    /// Largest pointwise residual of the reconstruction
    /// `phi_r^(1)(pi^s + .) = sum_i gamma_{r,s}^(i) phi_r^(i)`.
    pub reconstruction_residual: f64,
}

impl GammaTable {
    pub fn value(&self, r: u32, s: u32, i: usize) -> &ComplexHP {
        &self.entries[r as usize][s as usize][i - 1]
    }

    /// The support window of `i` for given `r >= s`: `(I_{r-s-1}, I_{r-s}]`
    /// with `I_{-1} := 1`, per the expansion of `phi_r^(1)(pi^s + .)`.
    pub fn window(spec: RingSpec, r: u32, s: u32) -> (u64, u64) {
        let d = r - s;
        let lo = if d == 0 { 1 } else { spec.i_r(Level::Fin(d - 1)) };
        (lo, spec.i_r(Level::Fin(d)))
    }
}

impl HarmonicContext {
    pub fn new(spec: RingSpec, prec: usize) -> Result<Self> {
        let group = UnitGroup::new(spec);
        let chars = all_unit_characters(&group, prec);
        let mut phi = Vec::new();
        for r in 0..spec.ell() {
            phi.push(phi_basis_for(spec, &group, &chars, r, prec)?);
        }
        let gamma = gamma_table_from_phi(spec, &group, &chars, &phi, prec)?;
        Ok(HarmonicContext { spec, group, chars, phi, gamma, prec })
    }

    pub fn phi(&self, r: u32, i: usize) -> &FnTable {
        &self.phi[r as usize][i - 1]
    }

    pub fn i_r(&self, r: u32) -> u64 {
        self.spec.i_r(Level::Fin(r))
    }
}

/// Builds the orthonormal `phi_r^(i)` (for `i = 1..I_r`) by isotypic
/// projection of a fixed `chi in R^hat_r` against the unit characters:
/// `(P f)(a) = (1/|o^x|) sum_c conj(xi(c)) f(c^{-1} a)`, then normalization.
fn phi_basis_for(
    spec: RingSpec,
    group: &UnitGroup,
    chars: &[UnitChar],
    r: u32,
    prec: usize,
) -> Result<Vec<FnTable>> {
    let m = spec.order();
    let i_r = spec.i_r(Level::Fin(r)) as usize;
    // Fixed base character chi_b with dual valuation r: b = p^(l-1-r).
    let b = spec.pow_mod(spec.p(), (spec.ell() - 1 - r) as u64);
    let chi: Vec<ComplexHP> = (0..m)
        .map(|a| ComplexHP::root_of_unity((b * a % m) as i64, m, prec))
        .collect();
    let inverses: Vec<u64> = group.units.iter().map(|&c| spec.unit_inverse(c)).collect();
    let mut out = Vec::with_capacity(i_r);
    for xi in chars.iter().take(i_r) {
        let mut values = Vec::with_capacity(m as usize);
        for a in 0..m {
            let mut acc = ComplexHP::zero(prec);
            for (c_idx, &c_inv) in inverses.iter().enumerate() {
                let term = xi.values[c_idx].conj().mul(&chi[(c_inv * a % m) as usize]);
                acc = acc.add(&term);
            }
            values.push(acc.scale(&rat(1, group.len() as i64)));
        }
        let raw = FnTable { spec, n_coords: 1, prec, values };
        let norm_sq = raw.norm_sqr();
        if norm_sq.abs_f64() < 1e-30 {
            return Err(Error::Domain(format!(
                "isotypic projection vanished at r={r} (wrong multiplicity)"
            )));
        }
        let inv_norm = ComplexHP::one(prec).div(&norm_sq.sqrt_re());
        out.push(raw.scale(&inv_norm));
    }
    Ok(out)
}

fn gamma_table_from_phi(
    spec: RingSpec,
    group: &UnitGroup,
    chars: &[UnitChar],
    phi: &[Vec<FnTable>],
    prec: usize,
) -> Result<GammaTable> {
    let ell = spec.ell();
    let mut entries = Vec::with_capacity(ell as usize);
    let mut residual = 0.0f64;
    for r in 0..ell {
        let i_r = spec.i_r(Level::Fin(r)) as usize;
        let sqrt_ir = ComplexHP::from_i64(i_r as i64, prec).sqrt_re();
        let minus_one = spec.order() - 1;
        let mut per_r = Vec::with_capacity(ell as usize);
        for s in 0..ell {
            if s > r {
                per_r.push(Vec::new());
                continue;
            }
            let pi_s = spec.pow_mod(spec.p(), s as u64);
            let mut row = Vec::with_capacity(i_r);
            for i in 1..=i_r {
                // gamma_{r,s}^(i) = (1/sqrt(I_r)) conj(xi^(i)(-1)) conj(phi_r^(i)(pi^s)).
                let xi_m1 = chars[i - 1].value(group, minus_one).conj();
                let val = xi_m1
                    .mul(&phi[r as usize][i - 1].values[pi_s as usize].conj())
                    .div(&sqrt_ir);
                row.push(val);
            }
            // Validate the expansion phi_r^(1)(pi^s + .) = sum_i gamma phi_r^(i).
            let translated = phi[r as usize][0].translate(&[pi_s]);
            let mut recon = translated.zero_like();
            for i in 1..=i_r {
                recon = recon.add(&phi[r as usize][i - 1].scale(&row[i - 1]));
            }
            residual = residual.max(recon.max_diff(&translated));
            per_r.push(row);
        }
        entries.push(per_r);
    }
    let table = GammaTable { spec, entries, reconstruction_residual: residual };
    if residual > 1e-25 {
        return Err(Error::Domain(format!(
            "gamma reconstruction residual {residual:.3e} exceeds tolerance"
        )));
    }
    Ok(table)
}

/// Clause-by-clause check of the expansion coefficients of `phi_r^(i)` over
/// `R^hat_r`: (1) unit total mass, (2) constancy on `o^x_u`-orbits when
/// `i <= I_u`, (3) vanishing orbit sums when `i > I_u`.
#[derive(Clone, Debug)]
pub struct EpsilonReport {
    pub failures: Vec<String>,
}

impl EpsilonReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn epsilon_properties_check(
    ctx: &HarmonicContext,
    r: u32,
    i: usize,
    u: Level,
    tol: f64,
) -> Result<EpsilonReport> {
    let spec = ctx.spec;
    if i < 1 || i as u64 > spec.i_r(Level::Fin(r)) {
        return Err(Error::Domain(format!("i = {i} out of range at r = {r}")));
    }
    let phi = ctx.phi(r, i);
    let rhat: Vec<crate::ring::AddChar> = crate::ring::orbit_rhat(spec, Level::Fin(r));
    let m = spec.order();
    // eps_chi = <phi, chi> (the chi are an orthonormal family).
    let chi_table = |chi: &crate::ring::AddChar| -> FnTable {
        FnTable {
            spec,
            n_coords: 1,
            prec: ctx.prec,
            values: (0..m)
                .map(|a| ComplexHP::root_of_unity(chi.exponent(a) as i64, m, ctx.prec))
                .collect(),
        }
    };
    let eps: Vec<ComplexHP> = rhat.iter().map(|chi| phi.inner(&chi_table(chi))).collect();
    let mut failures = Vec::new();
    // (1) total mass.
    let mut total_hp = ComplexHP::zero(ctx.prec);
    for e in &eps {
        total_hp = total_hp.add(&e.norm_sqr());
    }
    let total = total_hp.abs_f64();
    if total_hp.sub(&ComplexHP::one(ctx.prec)).abs_f64() > tol {
        failures.push(format!("clause 1: total mass {total} != 1"));
    }
    // Partition R^hat_r into o^x_u-orbits.
    let mut orbit_of = vec![usize::MAX; rhat.len()];
    let mut n_orbits = 0usize;
    for a in 0..rhat.len() {
        if orbit_of[a] != usize::MAX {
            continue;
        }
        for b in a..rhat.len() {
            if orbit_of[b] == usize::MAX
                && crate::ring::char_orbit_equiv(&rhat[a], &rhat[b], u)?
            {
                orbit_of[b] = n_orbits;
            }
        }
        n_orbits += 1;
    }
    let i_u = match u {
        Level::MinusInf => 1u64,
        Level::Fin(u) => spec.i_r(Level::Fin(u)),
        Level::Inf => unreachable!("u <= r < l"),
    };
    for orbit in 0..n_orbits {
        let members: Vec<usize> =
            (0..rhat.len()).filter(|&k| orbit_of[k] == orbit).collect();
        if (i as u64) <= i_u {
            // (2) constancy within the orbit.
            for &k in &members[1..] {
                if !eps[k].approx_eq(&eps[members[0]], tol) {
                    failures.push(format!(
                        "clause 2: eps varies on orbit {orbit} (chi_{} vs chi_{})",
                        rhat[members[0]].index(),
                        rhat[k].index()
                    ));
                }
            }
        } else {
            // (3) vanishing orbit sum.
            let mut sum = ComplexHP::zero(ctx.prec);
            for &k in &members {
                sum = sum.add(&eps[k]);
            }
            if !sum.is_zero_within(tol) {
                failures.push(format!(
                    "clause 3: orbit {orbit} sum has modulus {:.3e}",
                    sum.abs_f64()
                ));
            }
        }
    }
    Ok(EpsilonReport { failures })
}
