//! The `V_{n,alpha}` decomposition of the spherical representation, the
//! symmetrized tensor bases, component projections, and the closed-form
//! component formula for translated zonal spherical functions.

use crate::kraw::{multinomial, MultiIndex};
use crate::numeric::{rat_i, rat_pow, ComplexHP, Rational};
use crate::ring::Level;
use crate::{Error, Result};

use super::phi::{GammaTable, HarmonicContext};
use super::table::FnTable;
use super::{pi_u, ZonalTable};

/// One tensor slot: the constant 1 or some `phi_r^(i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorId {
    One,
    Phi { r: u32, i: usize },
}

/// An element of `A(n)`: per level `r`, a composition `(alpha_r^(i))_i` of
/// `n_r` into `I_r` parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CompositionTuple {
    pub alpha: Vec<Vec<i64>>,
}

impl CompositionTuple {
    pub fn part(&self, r: u32, i: usize) -> i64 {
        self.alpha[r as usize][i - 1]
    }

    /// The vector `alpha^(1) = (alpha_r^(1))_r`.
    pub fn alpha1(&self) -> Vec<i64> {
        self.alpha.iter().map(|row| row[0]).collect()
    }

    /// The factor multiset (without the padding 1 slots).
    pub fn factors(&self) -> Vec<(FactorId, i64)> {
        let mut out = Vec::new();
        for (r, row) in self.alpha.iter().enumerate() {
            for (i0, &count) in row.iter().enumerate() {
                if count > 0 {
                    out.push((FactorId::Phi { r: r as u32, i: i0 + 1 }, count));
                }
            }
        }
        out
    }

    pub fn total(&self) -> i64 {
        self.alpha.iter().flatten().sum()
    }

    pub fn dim(&self, n_coords: i64, n: &[i64]) -> Rational {
        let mut acc = multinomial(n_coords, n);
        for (r, row) in self.alpha.iter().enumerate() {
            acc *= multinomial(n[r], row);
        }
        acc
    }
}

fn compositions_of(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for head in 0..=total {
        for mut tail in compositions_of(total - head, parts - 1) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// All of `A(n)` in lexicographic order.
pub fn compositions(ctx: &HarmonicContext, n: &[i64]) -> Vec<CompositionTuple> {
    let mut out = vec![CompositionTuple { alpha: vec![] }];
    for (r, &nr) in n.iter().enumerate() {
        let i_r = ctx.i_r(r as u32) as usize;
        let rows = compositions_of(nr, i_r);
        let mut next = Vec::with_capacity(out.len() * rows.len());
        for base in &out {
            for row in &rows {
                let mut alpha = base.alpha.clone();
                alpha.push(row.clone());
                next.push(CompositionTuple { alpha });
            }
        }
        out = next;
    }
    out
}

/// All distinct arrangements of a factor multiset into `n` slots (remaining
/// slots are `One`); these are the summands of the symmetrization and, for a
/// composition's multiset, exactly the basis `B(alpha)`.
fn arrangements(counts: &[(FactorId, i64)], n: usize) -> Vec<Vec<FactorId>> {
    let used: i64 = counts.iter().map(|&(_, c)| c).sum();
    assert!(used <= n as i64, "more factors than tensor slots");
    let mut counts: Vec<(FactorId, i64)> = counts.to_vec();
    counts.push((FactorId::One, n as i64 - used));
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn rec(
        counts: &mut Vec<(FactorId, i64)>,
        current: &mut Vec<FactorId>,
        n: usize,
        out: &mut Vec<Vec<FactorId>>,
    ) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for k in 0..counts.len() {
            if counts[k].1 > 0 {
                counts[k].1 -= 1;
                current.push(counts[k].0);
                rec(counts, current, n, out);
                current.pop();
                counts[k].1 += 1;
            }
        }
    }
    rec(&mut counts, &mut current, n, &mut out);
    out
}

fn factor_table<'a>(ctx: &'a HarmonicContext, one: &'a FnTable, f: FactorId) -> &'a FnTable {
    match f {
        FactorId::One => one,
        FactorId::Phi { r, i } => ctx.phi(r, i),
    }
}

/// The orthonormal basis `B(alpha)` as tables on `R^N`.
pub fn enumerate_basis(
    ctx: &HarmonicContext,
    n_coords: usize,
    alpha: &CompositionTuple,
) -> Result<Vec<FnTable>> {
    let one = FnTable::one(ctx.spec, 1, ctx.prec)?;
    arrangements(&alpha.factors(), n_coords)
        .into_iter()
        .map(|arr| {
            let factors: Vec<&FnTable> =
                arr.iter().map(|&f| factor_table(ctx, &one, f)).collect();
            FnTable::tensor(ctx.spec, &factors, ctx.prec)
        })
        .collect()
}

/// The symmetrization `[ tensor f_k ]_{S_n}`: the sum of the tensor over the
/// distinct arrangements of the factor multiset (cosets of the stabilizer).
pub fn symmetrize(
    ctx: &HarmonicContext,
    counts: &[(FactorId, i64)],
    n_coords: usize,
) -> Result<FnTable> {
    let one = FnTable::one(ctx.spec, 1, ctx.prec)?;
    let mut acc: Option<FnTable> = None;
    for arr in arrangements(counts, n_coords) {
        let factors: Vec<&FnTable> = arr.iter().map(|&f| factor_table(ctx, &one, f)).collect();
        let t = FnTable::tensor(ctx.spec, &factors, ctx.prec)?;
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t),
        });
    }
    acc.ok_or_else(|| Error::Domain("empty symmetrization".into()))
}

/// Orthogonal projection onto the span of an orthonormal family.
pub fn component_projection(f: &FnTable, basis: &[FnTable]) -> FnTable {
    let mut acc = f.zero_like();
    for b in basis {
        acc = acc.add(&b.scale(&f.inner(b)));
    }
    acc
}

/// Per-composition outcome of a component-formula verification.
#[derive(Clone, Debug)]
pub struct ComponentReport {
    /// `(alpha, max pointwise discrepancy)` per composition.
    pub per_alpha: Vec<(CompositionTuple, f64)>,
    pub max_discrepancy: f64,
}

impl ComponentReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_discrepancy <= tol
    }
}

/// `Q = prod_r sqrt(I_r)^(n_r)` as a high-precision real.
fn q_factor(ctx: &HarmonicContext, n: &[i64]) -> ComplexHP {
    let mut q_sq = Rational::from_integer(1.into());
    for (r, &nr) in n.iter().enumerate() {
        q_sq *= rat_pow(&rat_i(ctx.i_r(r as u32) as i64), nr as u64);
    }
    ComplexHP::from_rational(&q_sq, ctx.prec).sqrt_re()
}

/// The unique window index `s` with `I_{r-s-1} < i <= I_{r-s}` (so that
/// `gamma_{r,s}^(i)` can be nonzero), for `i >= 2`; `I_{-1} := 1`.
fn window_s(ctx: &HarmonicContext, r: u32, i: usize) -> u32 {
    debug_assert!(i >= 2);
    for d in 0..=r {
        let (lo, hi) = GammaTable::window(ctx.spec, r, r - d);
        if (i as u64) > lo && (i as u64) <= hi {
            return r - d;
        }
    }
    unreachable!("i <= I_r always lands in a window")
}

/// Enumerates `W(alpha, u)`: tuples `w = (w_{r,s})_{r <= s}` of nonnegative
/// integers subject to the three admissibility conditions.
fn enumerate_w(
    ctx: &HarmonicContext,
    alpha: &CompositionTuple,
    u: &[i64],
    n_coords: i64,
) -> Vec<Vec<Vec<i64>>> {
    let ell = ctx.spec.ell() as usize;
    let a1 = alpha.alpha1();
    // cond (ii) right side per s.
    let mut cap_s = vec![0i64; ell];
    for s in 0..ell {
        let mut win_sum = 0i64;
        for r in s..ell {
            let d = (r - s) as u32;
            let lo = if d == 0 { 1 } else { ctx.spec.i_r(Level::Fin(d - 1)) };
            let hi = ctx.spec.i_r(Level::Fin(d));
            for i in (lo + 1)..=hi {
                win_sum += alpha.part(r as u32, i as usize);
            }
        }
        cap_s[s] = u[s] - win_sum;
    }
    let pairs: Vec<(usize, usize)> = (0..ell)
        .flat_map(|r| (r..ell).map(move |s| (r, s)))
        .collect();
    let mut out = Vec::new();
    let mut w = vec![vec![0i64; ell]; ell]; // w[r][s], r <= s
    fn rec(
        pairs: &[(usize, usize)],
        k: usize,
        w: &mut Vec<Vec<i64>>,
        a1: &[i64],
        cap_s: &[i64],
        u_total: i64,
        a1_total: i64,
        n_coords: i64,
        out: &mut Vec<Vec<Vec<i64>>>,
    ) {
        if k == pairs.len() {
            // (i) and (ii) were enforced incrementally; check (iii).
            let total: i64 = w.iter().flatten().sum();
            if u_total + a1_total - n_coords <= total {
                out.push(w.clone());
            }
            return;
        }
        let (r, s) = pairs[k];
        let row_used: i64 = w[r].iter().sum();
        let col_used: i64 = (0..=s).map(|rr| w[rr][s]).sum();
        let max_v = (a1[r] - row_used).min(cap_s[s] - col_used);
        for v in 0..=max_v.max(-1) {
            w[r][s] = v;
            rec(pairs, k + 1, w, a1, cap_s, u_total, a1_total, n_coords, out);
        }
        w[r][s] = 0;
    }
    let u_total: i64 = u.iter().sum();
    let a1_total: i64 = a1.iter().sum();
    rec(&pairs, 0, &mut w, &a1, &cap_s, u_total, a1_total, n_coords, &mut out);
    out
}

/// Joins per-block tables (block `s` over `R^(u_s)`, then the tail block over
/// `R^(N-|u|)`) into a single table on `R^N` by slicing coordinates.
fn join_blocks(
    ctx: &HarmonicContext,
    n_coords: usize,
    blocks: &[(FnTable, usize)],
) -> Result<FnTable> {
    let m = ctx.spec.order();
    FnTable::from_fn(ctx.spec, n_coords, ctx.prec, |coords| {
        let mut acc = ComplexHP::one(ctx.prec);
        let mut offset = 0usize;
        for (table, size) in blocks {
            if *size == 0 {
                continue;
            }
            let idx = super::encode_point(&coords[offset..offset + size], m);
            acc = acc.mul(&table.values[idx]);
            offset += size;
        }
        acc
    })
}

/// Verifies the closed-form expression for `V_{n,alpha}(omega_n(pi^u + .))`
/// against the direct translation-then-projection computation, for every
/// `alpha in A(n)`.
pub fn verify_component_formula(
    ctx: &HarmonicContext,
    zonal: &ZonalTable,
    n: &MultiIndex,
    u: &MultiIndex,
) -> Result<ComponentReport> {
    let spec = ctx.spec;
    let ell = spec.ell() as usize;
    let n_coords = zonal.n_coords;
    let omega = FnTable::from_rationals(spec, n_coords, ctx.prec, &zonal.omega_table(n));
    let shifted = omega.translate(&pi_u(spec, n_coords, u.parts()));
    let binom_q = ComplexHP::from_rational(&multinomial(n_coords as i64, n.parts()), ctx.prec)
        .mul(&q_factor(ctx, n.parts()));
    let prefactor = ComplexHP::one(ctx.prec).div(&binom_q);
    let u_total: i64 = u.parts().iter().sum();
    let tail_size = (n_coords as i64 - u_total) as usize;

    let mut per_alpha = Vec::new();
    let mut max_d = 0.0f64;
    for alpha in compositions(ctx, n.parts()) {
        let basis = enumerate_basis(ctx, n_coords, &alpha)?;
        let direct = component_projection(&shifted, &basis);

        // Closed form: gamma prefactor over the (r, i >= 2) slots.
        let mut gamma_pref = prefactor.clone();
        for r in 0..ell as u32 {
            for i in 2..=ctx.i_r(r) as usize {
                let count = alpha.part(r, i);
                if count > 0 {
                    let s = window_s(ctx, r, i);
                    gamma_pref = gamma_pref.mul(&ctx.gamma.value(r, s, i).pow_u(count as u64));
                }
            }
        }
        let mut closed = shifted.zero_like();
        for w in enumerate_w(ctx, &alpha, u.parts(), n_coords as i64) {
            let mut scalar = gamma_pref.clone();
            for (r, row) in w.iter().enumerate() {
                if row[r] > 0 {
                    scalar =
                        scalar.mul(&ctx.gamma.value(r as u32, r as u32, 1).pow_u(row[r] as u64));
                }
            }
            // Blocks s = 0..l-1 of sizes u_s, then the tail of size N - |u|.
            let mut blocks: Vec<(FnTable, usize)> = Vec::with_capacity(ell + 1);
            for s in 0..ell {
                let mut counts: Vec<(FactorId, i64)> = Vec::new();
                for r in 0..=s {
                    if w[r][s] > 0 {
                        counts.push((FactorId::Phi { r: r as u32, i: 1 }, w[r][s]));
                    }
                }
                for r in s..ell {
                    let d = (r - s) as u32;
                    let lo = if d == 0 { 1 } else { spec.i_r(Level::Fin(d - 1)) };
                    let hi = spec.i_r(Level::Fin(d));
                    for i in (lo + 1)..=hi {
                        let c = alpha.part(r as u32, i as usize);
                        if c > 0 {
                            counts.push((FactorId::Phi { r: r as u32, i: i as usize }, c));
                        }
                    }
                }
                let size = u.get(s) as usize;
                if size == 0 {
                    blocks.push((FnTable::one(spec, 1, ctx.prec)?, 0));
                } else {
                    blocks.push((symmetrize(ctx, &counts, size)?, size));
                }
            }
            let mut counts: Vec<(FactorId, i64)> = Vec::new();
            for r in 0..ell {
                let rest = alpha.part(r as u32, 1) - w[r][r..].iter().sum::<i64>();
                if rest > 0 {
                    counts.push((FactorId::Phi { r: r as u32, i: 1 }, rest));
                }
            }
            if tail_size == 0 {
                blocks.push((FnTable::one(spec, 1, ctx.prec)?, 0));
            } else {
                blocks.push((symmetrize(ctx, &counts, tail_size)?, tail_size));
            }
            let term = join_blocks(ctx, n_coords, &blocks)?;
            closed = closed.add(&term.scale(&scalar));
        }
        let d = direct.max_diff(&closed);
        max_d = max_d.max(d);
        per_alpha.push((alpha, d));
    }
    Ok(ComponentReport { per_alpha, max_discrepancy: max_d })
}

/// Verifies the `1^t`-translated specialization: the admissible compositions
/// are those with `alpha_r^(i) = 0` for `1 <= r`, `2 <= i <= I_{r-1}`, and
/// the closed form collapses to a single `z`-sum; non-admissible compositions
/// must project to zero.
pub fn verify_component_formula_t(
    ctx: &HarmonicContext,
    zonal: &ZonalTable,
    n: &MultiIndex,
    t: i64,
) -> Result<ComponentReport> {
    let spec = ctx.spec;
    let ell = spec.ell() as usize;
    let n_coords = zonal.n_coords;
    if t < 0 || t > n_coords as i64 {
        return Err(Error::Domain(format!("t = {t} out of 0..=N")));
    }
    let mut u = vec![0i64; ell];
    u[0] = t;
    let omega = FnTable::from_rationals(spec, n_coords, ctx.prec, &zonal.omega_table(n));
    let shifted = omega.translate(&pi_u(spec, n_coords, &u));
    let binom_q = ComplexHP::from_rational(&multinomial(n_coords as i64, n.parts()), ctx.prec)
        .mul(&q_factor(ctx, n.parts()));
    let prefactor = ComplexHP::one(ctx.prec).div(&binom_q);
    let n_total: i64 = n.parts().iter().sum();
    let tail_size = (n_coords as i64 - t) as usize;

    let mut per_alpha = Vec::new();
    let mut max_d = 0.0f64;
    for alpha in compositions(ctx, n.parts()) {
        let basis = enumerate_basis(ctx, n_coords, &alpha)?;
        let direct = component_projection(&shifted, &basis);
        // Admissibility: alpha_r^(i) = 0 for 1 <= r and 2 <= i <= I_{r-1}.
        let admissible = (1..ell as u32).all(|r| {
            (2..=spec.i_r(Level::Fin(r - 1)) as usize).all(|i| alpha.part(r, i) == 0)
        });
        if !admissible {
            let d = direct.max_abs();
            max_d = max_d.max(d);
            per_alpha.push((alpha, d));
            continue;
        }
        let mut gamma_pref = prefactor.clone();
        for r in 0..ell as u32 {
            let lo = if r == 0 { 1 } else { spec.i_r(Level::Fin(r - 1)) };
            for i in (lo + 1)..=ctx.i_r(r) {
                let count = alpha.part(r, i as usize);
                if count > 0 {
                    gamma_pref = gamma_pref.mul(&ctx.gamma.value(r, 0, i as usize).pow_u(count as u64));
                }
            }
        }
        let a1 = alpha.alpha1();
        let a1_total: i64 = a1.iter().sum();
        let z_lo = (t + a1_total - n_coords as i64).max(0);
        let z_hi = t + a1_total - n_total;
        // Count the windowed factors that always occupy the first block; a
        // value of z is admissible only if both blocks stay within capacity.
        let mut windowed_total = 0i64;
        for r in 0..ell as u32 {
            let lo = if r == 0 { 1 } else { spec.i_r(Level::Fin(r - 1)) };
            for i in (lo + 1)..=ctx.i_r(r) {
                windowed_total += alpha.part(r, i as usize);
            }
        }
        let mut closed = shifted.zero_like();
        let mut z = z_lo;
        while z <= z_hi {
            if z > a1[0] || z + windowed_total > t {
                z += 1;
                continue;
            }
            let scalar = gamma_pref.mul(&ctx.gamma.value(0, 0, 1).pow_u(z as u64));
            // S_t block: z copies of phi_0^(1) plus the windowed phi_r^(i).
            let mut counts: Vec<(FactorId, i64)> = Vec::new();
            if z > 0 {
                counts.push((FactorId::Phi { r: 0, i: 1 }, z));
            }
            for r in 0..ell as u32 {
                let lo = if r == 0 { 1 } else { spec.i_r(Level::Fin(r - 1)) };
                for i in (lo + 1)..=ctx.i_r(r) {
                    let c = alpha.part(r, i as usize);
                    if c > 0 {
                        counts.push((FactorId::Phi { r, i: i as usize }, c));
                    }
                }
            }
            let head = if t == 0 {
                (FnTable::one(spec, 1, ctx.prec)?, 0usize)
            } else {
                (symmetrize(ctx, &counts, t as usize)?, t as usize)
            };
            // S_{N-t} block: alpha_0^(1) - z copies of phi_0^(1), and all
            // alpha_r^(1) for r >= 1.
            let mut tail_counts: Vec<(FactorId, i64)> = Vec::new();
            if a1[0] - z > 0 {
                tail_counts.push((FactorId::Phi { r: 0, i: 1 }, a1[0] - z));
            }
            for r in 1..ell {
                if a1[r] > 0 {
                    tail_counts.push((FactorId::Phi { r: r as u32, i: 1 }, a1[r]));
                }
            }
            let tail = if tail_size == 0 {
                (FnTable::one(spec, 1, ctx.prec)?, 0usize)
            } else {
                (symmetrize(ctx, &tail_counts, tail_size)?, tail_size)
            };
            let term = join_blocks(ctx, n_coords, &[head, tail])?;
            closed = closed.add(&term.scale(&scalar));
            z += 1;
        }
        let d = direct.max_diff(&closed);
        max_d = max_d.max(d);
        per_alpha.push((alpha, d));
    }
    Ok(ComponentReport { per_alpha, max_discrepancy: max_d })
}
