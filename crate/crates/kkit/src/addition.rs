//! Exact verification of the addition theorem for multivariate Krawtchouk
//! polynomials, its consistency with the group-theoretic zonal oracle, and a
//! numerically checked inner-product formula for translated components.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::kraw::{
    binomial, enumerate_x, kraw_multi_scaled0, kraw_multi_uniform, multinomial, prefix_sum,
    suffix_sum,
    MultiIndex,
};
use crate::lab::{
    component_projection, compositions, enumerate_basis, orbit_index, pi_u, zonal_oracle,
    CompositionTuple, FnTable, GroupElem, HarmonicContext, ZonalTable,
};
use crate::numeric::{rat_i, rat_pow, ComplexHP, Rational};
use crate::ring::{Level, RingSpec};
use crate::{Error, Result};

/// One instance of the addition theorem: degrees `n`, split point `t`, orbit
/// parameter `u` with `t <= u_0`, and action profile `y` on the first `t`
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditionInstance {
    pub q: i64,
    pub ell: usize,
    pub n_cap: i64,
    pub n: Vec<i64>,
    pub t: i64,
    pub u: Vec<i64>,
    pub y: Vec<i64>,
}

impl AdditionInstance {
    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(Error::Domain(format!("q = {} must be >= 2", self.q)));
        }
        if self.ell == 0 || self.n_cap < 0 {
            return Err(Error::Domain("need l >= 1 and N >= 0".into()));
        }
        let check_x = |v: &[i64], cap: i64, name: &str| -> Result<()> {
            if v.len() != self.ell {
                return Err(Error::LengthMismatch(v.len(), self.ell));
            }
            if v.iter().any(|&e| e < 0) || v.iter().sum::<i64>() > cap {
                return Err(Error::Domain(format!("{name} = {v:?} not in X({}, {cap})", self.ell)));
            }
            Ok(())
        };
        check_x(&self.n, self.n_cap, "n")?;
        check_x(&self.u, self.n_cap, "u")?;
        if self.t < 0 || self.t > self.n_cap {
            return Err(Error::Domain(format!("t = {} out of 0..=N", self.t)));
        }
        check_x(&self.y, self.t, "y")?;
        if self.t > self.u[0] {
            return Err(Error::Domain(format!("t = {} exceeds u_0 = {}", self.t, self.u[0])));
        }
        Ok(())
    }
}

/// Left side: `K_n(u + y - t*e_0; (q-1)/q; N)`, exact.
pub fn theorem_lhs(inst: &AdditionInstance) -> Result<Rational> {
    inst.validate()?;
    let mut x: Vec<i64> = inst.u.iter().zip(&inst.y).map(|(a, b)| a + b).collect();
    x[0] -= inst.t;
    if x.iter().any(|&e| e < 0) || x.iter().sum::<i64>() > inst.n_cap {
        return Err(Error::Domain(format!("u + y - t*e_0 = {x:?} leaves X")));
    }
    let p = rat_i(inst.q - 1) / rat_i(inst.q);
    kraw_multi_uniform(&inst.n, &x, &p, inst.n_cap)
}

/// Right side: the double sum over `alpha` in `X(l, N)` and `z >= 0`, exact.
///
/// The summand couples the power `((q(q-2)/(q-1)^2))^(n_0 - alpha_0)` with a
/// Krawtchouk factor whose first parameter is `(q-2)/(q-1)`; at `q = 2` both
/// pieces degenerate but their product does not, because the `(q-2)` powers
/// cancel against the `(q-2)^(-k)` denominators of that factor. The two are
/// therefore evaluated merged (see [`kraw_multi_scaled0`]), which keeps every
/// term finite and exact for all `q >= 2`.
pub fn theorem_rhs(inst: &AdditionInstance) -> Result<Rational> {
    inst.validate()?;
    let q = inst.q;
    let ell = inst.ell;
    let p_uniform = rat_i(q - 1) / rat_i(q);
    // The (q-2)-free part of (q(q-2)/(q-1)^2)^(n_0 - alpha_0); the (q-2)
    // powers are folded into the scaled Krawtchouk factor below.
    let base_rest = rat_i(q) / rat_pow(&rat_i(q - 1), 2);
    let inv_sq = Rational::one() / rat_pow(&rat_i(q - 1), 2);

    let mut u_shift = inst.u.clone();
    u_shift[0] -= inst.t;

    let mut acc = Rational::zero();
    for alpha in enumerate_x(ell, inst.n_cap) {
        let a = alpha.parts();
        if a[0] > inst.n[0] {
            continue; // the mixed multinomial below vanishes for every z
        }
        let n_minus_a: Vec<i64> = inst.n.iter().zip(a).map(|(n, a)| n - a).collect();
        for z in 0..=inst.t {
            let mut mixed_parts = n_minus_a.clone();
            mixed_parts.push(z);
            let m1 = multinomial(inst.t, &mixed_parts);
            if m1.is_zero() {
                continue;
            }
            let mut a_shift = a.to_vec();
            a_shift[0] -= z;
            let m2 = multinomial(inst.n_cap - inst.t, &a_shift);
            if m2.is_zero() {
                continue;
            }
            let e = inst.n[0] - a[0];
            // Support soundness of the zero-extension convention.
            debug_assert!(inst.n.iter().zip(a).all(|(n, a)| a <= n));
            debug_assert!(n_minus_a.iter().sum::<i64>() + z <= inst.t);
            let scalar = rat_pow(&base_rest, e as u64) * rat_pow(&inv_sq, z as u64) * m1 * m2;
            let k_u = kraw_multi_uniform(&a_shift, &u_shift, &p_uniform, inst.n_cap - inst.t)?;
            // (q-2)^(n_0 - alpha_0) * K_{n-alpha}(y; ((q-2)/(q-1), p, ...); t).
            let k_y = kraw_multi_scaled0(
                &n_minus_a,
                &inst.y,
                &rat_i(q - 2),
                &rat_i(q - 1),
                &p_uniform,
                inst.t,
            )?;
            acc += scalar * k_u * k_y;
        }
    }
    Ok(acc / multinomial(inst.n_cap, &inst.n))
}

/// A failed instance with both evaluated sides.
#[derive(Clone, Debug)]
pub struct AdditionFailure {
    pub instance: AdditionInstance,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Outcome of an exhaustive theorem sweep.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub total: u64,
    pub predicted: u64,
    pub failures: Vec<AdditionFailure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.total == self.predicted
    }
}

/// All admissible instances for one `(q, l, N)` triple, in a deterministic
/// (lexicographic) order.
pub fn enumerate_instances(q: i64, ell: usize, n_cap: i64) -> Vec<AdditionInstance> {
    let mut out = Vec::new();
    let xs: Vec<MultiIndex> = enumerate_x(ell, n_cap);
    for n in &xs {
        for t in 0..=n_cap {
            for u in &xs {
                if u.parts()[0] < t {
                    continue;
                }
                for y in enumerate_x(ell, t) {
                    out.push(AdditionInstance {
                        q,
                        ell,
                        n_cap,
                        n: n.parts().to_vec(),
                        t,
                        u: u.parts().to_vec(),
                        y: y.parts().to_vec(),
                    });
                }
            }
        }
    }
    out
}

/// The combinatorial instance count for one `(q, l, N)` triple, computed
/// without materializing instances; sweeps must report exactly this total.
pub fn predicted_instance_count(ell: usize, n_cap: i64) -> u64 {
    let count_x = |cap: i64| -> u64 {
        // |X(l, cap)| = C(cap + l, l)
        let b = binomial(cap + ell as i64, ell as i64);
        b.to_integer().try_into().unwrap()
    };
    let n_count = count_x(n_cap);
    let mut total = 0u64;
    for t in 0..=n_cap {
        let u_count: u64 = enumerate_x(ell, n_cap)
            .iter()
            .filter(|u| u.parts()[0] >= t)
            .count() as u64;
        total += n_count * u_count * count_x(t);
    }
    total
}

/// Exhaustive exact verification of the theorem over the given `(q, l, N)`
/// triples; instances are evaluated in parallel and failures are reported in
/// instance order regardless of worker count.
pub fn theorem_verify(triples: &[(i64, usize, i64)]) -> Result<SweepReport> {
    let mut instances = Vec::new();
    let mut predicted = 0u64;
    for &(q, ell, n_cap) in triples {
        instances.extend(enumerate_instances(q, ell, n_cap));
        predicted += predicted_instance_count(ell, n_cap);
    }
    let total = instances.len() as u64;
    let results: Vec<Option<AdditionFailure>> = instances
        .into_par_iter()
        .map(|inst| {
            let lhs = theorem_lhs(&inst)?;
            let rhs = theorem_rhs(&inst)?;
            Ok(if lhs == rhs {
                None
            } else {
                Some(AdditionFailure { instance: inst, lhs, rhs })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { total, predicted, failures: results.into_iter().flatten().collect() })
}

/// Builds a unit vector `c` of length `t` realizing the action profile `y`:
/// exactly `y_r` entries have `v(c_k - 1) = r`, the rest are `1`.
///
/// `y_0 > 0` requires `p > 2` (for `p = 2` every unit is `1 mod 2`); `None`
/// is returned for unrealizable profiles.
pub fn units_for_profile(spec: RingSpec, t: i64, y: &[i64]) -> Option<Vec<u64>> {
    let mut c = Vec::with_capacity(t as usize);
    for (r, &count) in y.iter().enumerate() {
        let rep = if r == 0 {
            if spec.p() == 2 {
                if count > 0 {
                    return None;
                }
                1
            } else {
                2 // v(2 - 1) = 0 and 2 is a unit for p > 2
            }
        } else {
            spec.reduce(1 + spec.p().pow(r as u32) as i64)
        };
        for _ in 0..count {
            c.push(rep);
        }
    }
    if c.len() > t as usize {
        return None;
    }
    while c.len() < t as usize {
        c.push(1);
    }
    Some(c)
}

/// Cross-checks the theorem's left side against the group-theoretic zonal
/// oracle: for every realizable profile `y`, the point `c * 1^t - pi^u` lies
/// in the orbit `(u_0 - t + y_0, u_1 + y_1, ...)` and the oracle value there
/// equals `theorem_lhs`.
pub fn consistency_with_oracle(spec: RingSpec, n_coords: usize) -> Result<Vec<String>> {
    let ell = spec.ell() as usize;
    let n_cap = n_coords as i64;
    let q = spec.p() as i64;
    let mut failures = Vec::new();
    for inst in enumerate_instances(q, ell, n_cap) {
        let Some(c) = units_for_profile(spec, inst.t, &inst.y) else {
            continue;
        };
        // c * 1^t - pi^u in R^N.
        let base = pi_u(spec, n_coords, &inst.u);
        let mut point = vec![0u64; n_coords];
        for k in 0..n_coords {
            let ck = if (k as i64) < inst.t { c[k] } else { 0 };
            point[k] = spec.reduce(ck as i64 - base[k] as i64);
        }
        let orbit = orbit_index(spec, &point);
        let mut expected: Vec<i64> = inst.u.iter().zip(&inst.y).map(|(a, b)| a + b).collect();
        expected[0] -= inst.t;
        if orbit.parts() != expected.as_slice() {
            failures.push(format!(
                "orbit mismatch at {inst:?}: got {:?}, expected {expected:?}",
                orbit.parts()
            ));
            continue;
        }
        let oracle = zonal_oracle(spec, n_coords, &inst.n, orbit.parts())?;
        let lhs = theorem_lhs(&inst)?;
        if oracle != lhs {
            failures.push(format!("value mismatch at {inst:?}: oracle {oracle}, lhs {lhs}"));
        }
    }
    Ok(failures)
}

/// Per-composition outcome of the inner-product formula check.
#[derive(Clone, Debug)]
pub struct InnerProductReport {
    pub per_alpha: Vec<(CompositionTuple, f64)>,
    pub max_discrepancy: f64,
}

impl InnerProductReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_discrepancy <= tol
    }
}

/// The sum over disjoint subsets `A_r^(i)` of `{1..t}` with `|A_r^(i)| =
/// alpha_r^(i)` of the product of `xi^(i)(c_k)` over `k in A_r^(i)`.
fn disjoint_subset_sum(
    ctx: &HarmonicContext,
    factors: &[(usize, i64)], // (character index i, multiplicity)
    c: &[u64],
    used: &mut Vec<bool>,
    pos: usize,
) -> ComplexHP {
    if pos == factors.len() {
        return ComplexHP::one(ctx.prec);
    }
    let (chi_i, count) = factors[pos];
    // Choose `count` unused positions for this factor, in increasing order.
    fn choose(
        ctx: &HarmonicContext,
        factors: &[(usize, i64)],
        c: &[u64],
        used: &mut Vec<bool>,
        pos: usize,
        chi_i: usize,
        remaining: i64,
        start: usize,
    ) -> ComplexHP {
        if remaining == 0 {
            return disjoint_subset_sum(ctx, factors, c, used, pos + 1);
        }
        let mut acc = ComplexHP::zero(ctx.prec);
        for k in start..c.len() {
            if used[k] {
                continue;
            }
            used[k] = true;
            let sub = choose(ctx, factors, c, used, pos, chi_i, remaining - 1, k + 1);
            used[k] = false;
            let value = ctx.chars[chi_i - 1].value(&ctx.group, c[k]);
            acc = acc.add(&sub.mul(value));
        }
        acc
    }
    choose(ctx, factors, c, used, pos, chi_i, count, 0)
}

/// Checks the closed inner-product formula for
/// `< c . V_{n,alpha}(omega_n(1^t + .)), V_{n,alpha}(omega_n(pi^u + .)) >`
/// against the direct lab computation, for every admissible `alpha`.
pub fn inner_product_formula_check(
    ctx: &HarmonicContext,
    zonal: &ZonalTable,
    n: &MultiIndex,
    t: i64,
    u: &[i64],
    c: &[u64],
) -> Result<InnerProductReport> {
    let spec = ctx.spec;
    let ell = spec.ell() as usize;
    let n_coords = zonal.n_coords;
    if t < 0 || t > u[0] {
        return Err(Error::Domain(format!("need 0 <= t <= u_0, got t = {t}, u = {u:?}")));
    }
    if c.len() != n_coords {
        return Err(Error::LengthMismatch(c.len(), n_coords));
    }
    let omega = FnTable::from_rationals(spec, n_coords, ctx.prec, &zonal.omega_table(n));
    let mut ones = vec![0i64; ell];
    ones[0] = t;
    let f_t = omega.translate(&pi_u(spec, n_coords, &ones));
    let f_u = omega.translate(&pi_u(spec, n_coords, u));
    let g = GroupElem { units: c.to_vec(), perm: (0..n_coords).collect() };

    // 1 / (binom(N, n)^2 * Q^2) with Q^2 = prod I_r^(n_r), exact.
    let mut line1_rat = Rational::one()
        / rat_pow(&multinomial(n_coords as i64, n.parts()), 2);
    for (r, &nr) in n.parts().iter().enumerate() {
        line1_rat /= rat_pow(&rat_i(spec.i_r(Level::Fin(r as u32)) as i64), nr as u64);
    }

    let a1_of = |alpha: &CompositionTuple| alpha.alpha1();
    let mut per_alpha = Vec::new();
    let mut max_d = 0.0f64;
    for alpha in compositions(ctx, n.parts()) {
        let admissible = (1..ell as u32)
            .all(|r| (2..=spec.i_r(Level::Fin(r - 1)) as usize).all(|i| alpha.part(r, i) == 0));
        if !admissible {
            continue;
        }
        let basis = enumerate_basis(ctx, n_coords, &alpha)?;
        let v_t = component_projection(&f_t, &basis).group_act(&g);
        let v_u = component_projection(&f_u, &basis);
        let direct = v_t.inner(&v_u);

        // Line 1: |gamma_{r,0}^(i)|^(2 alpha_r^(i)) over the windowed factors.
        let mut formula = ComplexHP::from_rational(&line1_rat, ctx.prec);
        let mut windowed: Vec<(usize, i64)> = Vec::new();
        for r in 0..ell as u32 {
            let lo = if r == 0 { 1 } else { spec.i_r(Level::Fin(r - 1)) };
            for i in (lo + 1)..=ctx.i_r(r) {
                let count = alpha.part(r, i as usize);
                if count > 0 {
                    formula = formula
                        .mul(&ctx.gamma.value(r, 0, i as usize).norm_sqr().pow_u(count as u64));
                    windowed.push((i as usize, count));
                }
            }
        }
        // Line 2: the disjoint-subset character sum over {1..t}.
        let mut used = vec![false; t as usize];
        let line2 = disjoint_subset_sum(ctx, &windowed, &c[..t as usize], &mut used, 0);
        formula = formula.mul(&line2);

        let a1 = a1_of(&alpha);
        let a1_total: i64 = a1.iter().sum();
        // Line 3: one binomial-gamma sum per level s >= 1.
        for s in 1..ell {
            let gamma = ctx.gamma.value(s as u32, s as u32, 1);
            let cap = n_coords as i64 - prefix_sum(u, s as i64) - suffix_sum(&a1, s as i64 + 1);
            let mut sum = ComplexHP::zero(ctx.prec);
            for k in 0..=a1[s] {
                let coeff = binomial(u[s], k) * binomial(cap, a1[s] - k);
                if coeff.is_zero() {
                    continue;
                }
                sum = sum.add(&gamma.pow_u(k as u64).scale(&coeff));
            }
            formula = formula.mul(&sum);
        }
        // Line 4: the double sum at level 0.
        let gamma0 = ctx.gamma.value(0, 0, 1);
        let n_total: i64 = n.parts().iter().sum();
        let cap0 = n_coords as i64 - u[0] - suffix_sum(&a1, 1);
        let mut sum = ComplexHP::zero(ctx.prec);
        for z in 0..=a1[0] {
            for k in 0..=(a1[0] - z) {
                let coeff = binomial(t - n_total + a1_total, z)
                    * binomial(u[0] - t, k)
                    * binomial(cap0, a1[0] - z - k);
                if coeff.is_zero() {
                    continue;
                }
                sum = sum.add(&gamma0.pow_u((2 * z + k) as u64).scale(&coeff));
            }
        }
        formula = formula.mul(&sum);

        let d = direct.sub(&formula).abs_f64();
        max_d = max_d.max(d);
        per_alpha.push((alpha, d));
    }
    Ok(InnerProductReport { per_alpha, max_discrepancy: max_d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inst(q: i64, ell: usize, n_cap: i64, n: &[i64], t: i64, u: &[i64], y: &[i64]) -> AdditionInstance {
        AdditionInstance {
            q,
            ell,
            n_cap,
            n: n.to_vec(),
            t,
            u: u.to_vec(),
            y: y.to_vec(),
        }
    }

    #[test]
    fn lhs_pinned_values() {
        // n = 0 gives 1.
        let i = inst(3, 2, 3, &[0, 0], 1, &[2, 0], &[1, 0]);
        assert_eq!(theorem_lhs(&i).unwrap(), Rational::one());
        // K_1(1; 1/2; 2) = 1 - x/(Np) = 0.
        let i = inst(2, 1, 2, &[1], 1, &[2], &[0]);
        assert_eq!(theorem_lhs(&i).unwrap(), Rational::zero());
    }

    #[test]
    fn rhs_degenerations() {
        // t = 0 forces y = 0; RHS collapses to the LHS Krawtchouk itself.
        for q in [2i64, 3, 5] {
            let i = inst(q, 2, 3, &[1, 1], 0, &[2, 1], &[0, 0]);
            assert_eq!(theorem_rhs(&i).unwrap(), theorem_lhs(&i).unwrap());
        }
        // n = 0: both sides are 1.
        let i = inst(4, 2, 2, &[0, 0], 1, &[1, 1], &[1, 0]);
        assert_eq!(theorem_rhs(&i).unwrap(), Rational::one());
        assert_eq!(theorem_lhs(&i).unwrap(), Rational::one());
    }

    #[test]
    fn q_one_rejected() {
        let i = inst(1, 1, 2, &[1], 0, &[1], &[]);
        assert!(theorem_lhs(&i).is_err());
    }

    #[test]
    fn sweep_small() {
        let report = theorem_verify(&[(2, 1, 3), (3, 1, 3), (2, 2, 2), (3, 2, 2)]).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures.first());
        assert_eq!(report.total, report.predicted);
    }

    #[test]
    fn units_profiles() {
        let spec = RingSpec::new(3, 2).unwrap();
        let c = units_for_profile(spec, 3, &[1, 1]).unwrap();
        assert_eq!(c, vec![2, 4, 1]);
        // p = 2 cannot realize y_0 > 0.
        let spec2 = RingSpec::new(2, 2).unwrap();
        assert!(units_for_profile(spec2, 1, &[1, 0]).is_none());
        assert_eq!(units_for_profile(spec2, 1, &[0, 1]).unwrap(), vec![3]);
    }

    #[test]
    fn oracle_consistency() {
        for &(p, ell, n_coords) in &[(2u64, 2u32, 2usize), (3, 2, 2), (2, 3, 2)] {
            let spec = RingSpec::new(p, ell).unwrap();
            let failures = consistency_with_oracle(spec, n_coords).unwrap();
            assert!(failures.is_empty(), "{:?}", failures.first());
        }
    }

    #[test]
    fn inner_product_small() {
        let spec = RingSpec::new(2, 2).unwrap();
        let ctx = HarmonicContext::new(spec, 192).unwrap();
        let zonal = ZonalTable::new(spec, 3).unwrap();
        let n = MultiIndex::new(vec![1, 1], 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let units = spec.units();
        for t in [0i64, 1] {
            for _ in 0..5 {
                let c: Vec<u64> = (0..3).map(|_| units[rng.gen_range(0..units.len())]).collect();
                let report = inner_product_formula_check(&ctx, &zonal, &n, t, &[1, 1], &c).unwrap();
                assert!(
                    report.passed(1e-20),
                    "t={t} c={c:?}: max {}",
                    report.max_discrepancy
                );
            }
        }
    }
}
