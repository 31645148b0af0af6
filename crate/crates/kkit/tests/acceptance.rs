//! Acceptance gate: one test per criterion, each printing a single
//! `ACCEPTANCE <k>: PASS` / `FAIL` line (visible with `--nocapture`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kkit::addition::{inner_product_formula_check, theorem_verify};
use kkit::kraw::{dim_vn, enumerate_x, kraw_multi_uniform, orthogonality_check, MultiIndex};
use kkit::lab::{
    compositions, epsilon_properties_check, orbit_index, verify_component_formula,
    verify_component_formula_t, verify_translation_identity, GroupElem, HarmonicContext,
    ZonalTable,
};
use kkit::numeric::{rat, rat_i};
use kkit::ring::{char_orbit_equiv, orbit_rhat, AddChar, Level, RingSpec};

fn gate(k: u32, ok: bool, detail: &str) {
    println!("ACCEPTANCE {k}: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {k} failed: {detail}");
}

/// 1. The zonal spherical oracle equals the l-variate Krawtchouk closed form
/// exactly on every orbit pair, for p in {2,3}, l in {1,2,3}, N in {1..4}
/// with p^(lN) <= 3^8.
#[test]
fn acceptance_1_zonal_equals_krawtchouk() {
    let mut detail = String::new();
    let mut ok = true;
    'all: for p in [2u64, 3] {
        for ell in [1u32, 2, 3] {
            for n_cap in 1i64..=4 {
                if (p as u128).pow(ell * n_cap as u32) > 6561 {
                    continue;
                }
                let spec = RingSpec::new(p, ell).unwrap();
                let zonal = ZonalTable::new(spec, n_cap as usize).unwrap();
                let param = rat(p as i64 - 1, p as i64);
                for n in &zonal.indices {
                    for x in &zonal.indices {
                        let rhs =
                            kraw_multi_uniform(n.parts(), x.parts(), &param, n_cap).unwrap();
                        if *zonal.value(n, x) != rhs {
                            ok = false;
                            detail = format!(
                                "p={p} l={ell} N={n_cap} n={:?} x={:?}",
                                n.parts(),
                                x.parts()
                            );
                            break 'all;
                        }
                    }
                }
            }
        }
    }
    gate(1, ok, &detail);
}

/// 2. The addition theorem holds with exact equality, exhaustively over all
/// admissible (n, t, u, y): q in {2,3,4,5,7,8,9} at l = 1, N <= 5, and
/// q in {2,3} at l in {2,3}, N <= 4.
#[test]
fn acceptance_2_addition_theorem() {
    let mut triples = Vec::new();
    for q in [2i64, 3, 4, 5, 7, 8, 9] {
        for n_cap in 1..=5 {
            triples.push((q, 1usize, n_cap));
        }
    }
    for q in [2i64, 3] {
        for ell in [2usize, 3] {
            for n_cap in 1..=4 {
                triples.push((q, ell, n_cap));
            }
        }
    }
    let report = theorem_verify(&triples).unwrap();
    let detail = format!(
        "instances={} predicted={} first failure: {:?}",
        report.total,
        report.predicted,
        report.failures.first()
    );
    gate(2, report.passed(), &detail);
}

/// 3. Translation coefficients: the pinned diagonal value -1/(q-1), the
/// modulus law |gamma|^2 = 1/(q^(r-s-1) (q-1)^2) on the support window, and
/// vanishing outside it, within 1e-30 at 256-bit precision for p in {2,3,5},
/// l <= 3.
#[test]
fn acceptance_3_gamma_values_and_support() {
    let tol = 1e-30;
    let mut ok = true;
    let mut detail = String::new();
    'all: for p in [2u64, 3, 5] {
        for ell in [1u32, 2, 3] {
            let spec = RingSpec::new(p, ell).unwrap();
            let ctx = HarmonicContext::new(spec, 256).unwrap();
            let q = spec.q() as i64;
            for r in 0..ell {
                for s in 0..=r {
                    let (w_lo, w_hi) = kkit::lab::GammaTable::window(spec, r, s);
                    for i in 1..=spec.i_r(Level::Fin(r)) {
                        let g = ctx.gamma.value(r, s, i as usize);
                        let d = if r == s && i == 1 {
                            let pinned = kkit::ComplexHP::from_rational(
                                &(rat_i(-1) / rat_i(q - 1)),
                                256,
                            );
                            g.sub(&pinned).abs_f64()
                        } else if i > w_lo && i <= w_hi {
                            let expected = rat_i(q)
                                / (kkit::numeric::rat_pow(&rat_i(q), (r - s) as u64)
                                    * kkit::numeric::rat_pow(&rat_i(q - 1), 2));
                            g.norm_sqr()
                                .sub(&kkit::ComplexHP::from_rational(&expected, 256))
                                .abs_f64()
                        } else {
                            g.abs_f64()
                        };
                        if d > tol {
                            ok = false;
                            detail = format!("p={p} l={ell} r={r} s={s} i={i}: {d:e}");
                            break 'all;
                        }
                    }
                }
            }
        }
    }
    gate(3, ok, &detail);
}

/// 4. Dimension bookkeeping: the closed form for dim V_n equals the direct
/// orbit count, and the composition dimensions sum back to it, exactly, for
/// p in {2,3}, l <= 2, N <= 3, all n.
#[test]
fn acceptance_4_dimension_bookkeeping() {
    let mut ok = true;
    let mut detail = String::new();
    'all: for p in [2u64, 3] {
        for ell in [1u32, 2] {
            let spec = RingSpec::new(p, ell).unwrap();
            let ctx = HarmonicContext::new(spec, 192).unwrap();
            for n_cap in 1i64..=3 {
                let zonal = ZonalTable::new(spec, n_cap as usize).unwrap();
                for n in &zonal.indices {
                    let closed = dim_vn(p as i64, n_cap, n.parts());
                    if closed != rat_i(zonal.dim_vn_direct(n) as i64) {
                        ok = false;
                        detail = format!("dim p={p} l={ell} N={n_cap} n={:?}", n.parts());
                        break 'all;
                    }
                    let total: kkit::Rational = compositions(&ctx, n.parts())
                        .iter()
                        .map(|a| a.dim(n_cap, n.parts()))
                        .sum();
                    if total != closed {
                        ok = false;
                        detail = format!("sum p={p} l={ell} N={n_cap} n={:?}", n.parts());
                        break 'all;
                    }
                }
            }
        }
    }
    gate(4, ok, &detail);
}

/// 5. The closed component formula and its 1^t specialization agree with the
/// direct projection within 1e-20 for (p=2, l=2, N=3), all n, u in
/// {(1,0), (1,1), (2,0)} and t in {0..3}.
#[test]
fn acceptance_5_component_formula() {
    let spec = RingSpec::new(2, 2).unwrap();
    let ctx = HarmonicContext::new(spec, 192).unwrap();
    let zonal = ZonalTable::new(spec, 3).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    'all: for n in &zonal.indices {
        for u_parts in [[1i64, 0], [1, 1], [2, 0]] {
            let u = MultiIndex::new(u_parts.to_vec(), 3).unwrap();
            let report = verify_component_formula(&ctx, &zonal, n, &u).unwrap();
            if !report.passed(1e-20) {
                ok = false;
                detail = format!(
                    "n={:?} u={u_parts:?}: {:e}",
                    n.parts(),
                    report.max_discrepancy
                );
                break 'all;
            }
        }
        for t in 0..=3 {
            let report = verify_component_formula_t(&ctx, &zonal, n, t).unwrap();
            if !report.passed(1e-20) {
                ok = false;
                detail = format!("n={:?} t={t}: {:e}", n.parts(), report.max_discrepancy);
                break 'all;
            }
        }
    }
    gate(5, ok, &detail);
}

/// 6. The translation identity holds (exactly, well within 1e-25) on 100
/// random (a, b, g) cases per (p=2, l <= 2, N <= 2, all n).
#[test]
fn acceptance_6_translation_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ok = true;
    let mut detail = String::new();
    'all: for ell in [1u32, 2] {
        for n_coords in [1usize, 2] {
            let spec = RingSpec::new(2, ell).unwrap();
            let zonal = ZonalTable::new(spec, n_coords).unwrap();
            let units = spec.units();
            let m = spec.order();
            for n in &zonal.indices {
                for _ in 0..100 {
                    let a: Vec<u64> = (0..n_coords).map(|_| rng.gen_range(0..m)).collect();
                    let b: Vec<u64> = (0..n_coords).map(|_| rng.gen_range(0..m)).collect();
                    let mut perm: Vec<usize> = (0..n_coords).collect();
                    for k in (1..n_coords).rev() {
                        perm.swap(k, rng.gen_range(0..=k));
                    }
                    let g = GroupElem {
                        units: (0..n_coords)
                            .map(|_| units[rng.gen_range(0..units.len())])
                            .collect(),
                        perm,
                    };
                    let rep = verify_translation_identity(&zonal, n, &a, &b, &g).unwrap();
                    if !rep.passed() {
                        ok = false;
                        detail = format!("l={ell} N={n_coords} n={:?} a={a:?} b={b:?}", n.parts());
                        break 'all;
                    }
                }
            }
        }
    }
    gate(6, ok, &detail);
}

/// 7. The closed inner-product formula matches the direct lab computation
/// within 1e-20 on (p=2, l=2, N=3, n=(1,1)), t in {0,1}, u=(1,1), 20 random
/// unit vectors c.
#[test]
fn acceptance_7_inner_product_formula() {
    let spec = RingSpec::new(2, 2).unwrap();
    let ctx = HarmonicContext::new(spec, 192).unwrap();
    let zonal = ZonalTable::new(spec, 3).unwrap();
    let n = MultiIndex::new(vec![1, 1], 3).unwrap();
    let units = spec.units();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut ok = true;
    let mut detail = String::new();
    'all: for t in [0i64, 1] {
        for _ in 0..20 {
            let c: Vec<u64> = (0..3).map(|_| units[rng.gen_range(0..units.len())]).collect();
            let report = inner_product_formula_check(&ctx, &zonal, &n, t, &[1, 1], &c).unwrap();
            if !report.passed(1e-20) {
                ok = false;
                detail = format!("t={t} c={c:?}: {:e}", report.max_discrepancy);
                break 'all;
            }
        }
    }
    gate(7, ok, &detail);
}

/// 8. Property suites: the expansion-coefficient clauses of the phi bases,
/// the three-way character orbit-equivalence, the unit-scaling orbit map on
/// the character group, phi-basis orthonormality, representative
/// independence of the zonal oracle, and exact orthogonality.
#[test]
fn acceptance_8_property_suites() {
    let mut ok = true;
    let mut detail = String::new();

    // Expansion-coefficient clauses for every (r, i, u).
    'eps: for (p, ell) in [(2u64, 2u32), (3, 2), (2, 3)] {
        let spec = RingSpec::new(p, ell).unwrap();
        let ctx = HarmonicContext::new(spec, 192).unwrap();
        for r in 0..ell {
            for i in 1..=spec.i_r(Level::Fin(r)) as usize {
                let mut levels = vec![Level::MinusInf];
                levels.extend((0..=r).map(Level::Fin));
                for u in levels {
                    let rep = epsilon_properties_check(&ctx, r, i, u, 1e-25).unwrap();
                    if !rep.passed() {
                        ok = false;
                        detail = format!("epsilon p={p} l={ell} r={r} i={i} u={u:?}");
                        break 'eps;
                    }
                }
            }
        }
    }

    // Three-way orbit equivalence: the criterion agrees with brute-force
    // membership in the unit-subgroup scaling orbit.
    if ok {
        'orbit: for (p, ell) in [(2u64, 3u32), (3, 2)] {
            let spec = RingSpec::new(p, ell).unwrap();
            for r in 0..ell {
                let chars = orbit_rhat(spec, Level::Fin(r));
                for u in (0..=r).map(Level::Fin) {
                    let subgroup = spec.unit_subgroup(u);
                    for a in &chars {
                        for b in &chars {
                            let brute =
                                subgroup.iter().any(|&c| a.scaled(c).index() == b.index());
                            let crit = char_orbit_equiv(a, b, u).unwrap();
                            if brute != crit {
                                ok = false;
                                detail = format!(
                                    "orbit p={p} l={ell} r={r} u={u:?} a={} b={}",
                                    a.index(),
                                    b.index()
                                );
                                break 'orbit;
                            }
                        }
                    }
                }
            }
        }
    }

    // Unit scaling maps the character indexed by b across its valuation
    // orbit: chi_b has dual level l-1-v(b), and the r-orbit of the character
    // group has size I_r.
    if ok {
        for (p, ell) in [(2u64, 2u32), (3, 2), (2, 3)] {
            let spec = RingSpec::new(p, ell).unwrap();
            for r in 0..ell {
                let orbit = orbit_rhat(spec, Level::Fin(r));
                if orbit.len() as u64 != spec.i_r(Level::Fin(r)) {
                    ok = false;
                    detail = format!("rhat orbit size p={p} l={ell} r={r}");
                }
                for chi in &orbit {
                    if chi.dual_valuation() != Level::Fin(r) {
                        ok = false;
                        detail = format!("dual valuation p={p} l={ell} r={r}");
                    }
                }
                // Correspondence with point orbits through b -> chi_b.
                for b in spec.orbit_rr(Level::Fin(ell - 1 - r)) {
                    let chi = AddChar::new(spec, b as i64);
                    if chi.dual_valuation() != Level::Fin(r) {
                        ok = false;
                        detail = format!("orbit map p={p} l={ell} r={r} b={b}");
                    }
                }
            }
        }
    }

    // phi-basis orthonormality.
    if ok {
        'phi: for (p, ell) in [(2u64, 2u32), (3, 2), (2, 3)] {
            let spec = RingSpec::new(p, ell).unwrap();
            let ctx = HarmonicContext::new(spec, 192).unwrap();
            for r in 0..ell {
                for i in 1..=spec.i_r(Level::Fin(r)) as usize {
                    for r2 in 0..ell {
                        for i2 in 1..=spec.i_r(Level::Fin(r2)) as usize {
                            let ip = ctx.phi(r, i).inner(ctx.phi(r2, i2));
                            let expected = if (r, i) == (r2, i2) { 1.0 } else { 0.0 };
                            let one = kkit::ComplexHP::from_i64(expected as i64, 192);
                            if ip.sub(&one).abs_f64() > 1e-25 {
                                ok = false;
                                detail = format!("phi p={p} l={ell} ({r},{i}) vs ({r2},{i2})");
                                break 'phi;
                            }
                        }
                    }
                }
            }
        }
    }

    // Representative independence of the zonal oracle: every point of R^N
    // yields the tabulated orbit value (all points at N <= 2, random at 3).
    if ok {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        'rep: for (p, ell) in [(2u64, 2u32), (3, 1)] {
            let spec = RingSpec::new(p, ell).unwrap();
            for n_coords in 1usize..=3 {
                let zonal = ZonalTable::new(spec, n_coords).unwrap();
                let m = spec.order();
                let size = (m as usize).pow(n_coords as u32);
                let points: Vec<usize> = if n_coords <= 2 {
                    (0..size).collect()
                } else {
                    (0..40).map(|_| rng.gen_range(0..size)).collect()
                };
                for flat in points {
                    let coords = kkit::lab::decode_point(flat, m, n_coords);
                    let x = orbit_index(spec, &coords);
                    // Rebuild the oracle value from a fresh table restricted
                    // to this representative's orbit index.
                    for n in &zonal.indices {
                        let via_orbit = zonal.value(n, &x);
                        let direct = kkit::lab::zonal_oracle(spec, n_coords, n.parts(), x.parts())
                            .unwrap();
                        if *via_orbit != direct {
                            ok = false;
                            detail = format!("rep p={p} l={ell} N={n_coords} point={coords:?}");
                            break 'rep;
                        }
                    }
                }
            }
        }
    }

    // Exact orthogonality under the orbit-size weight.
    if ok {
        for (ell, n_cap, q) in [(1usize, 3i64, 2i64), (2, 2, 3), (2, 3, 2)] {
            let failures = orthogonality_check(ell, n_cap, q).unwrap();
            if !failures.is_empty() {
                ok = false;
                detail = format!("orthogonality l={ell} N={n_cap} q={q}");
            }
        }
    }

    // Every X(l, N) enumeration has the predicted cardinality.
    if ok {
        for ell in 1usize..=3 {
            for n_cap in 0i64..=4 {
                let expect = kkit::kraw::binomial(n_cap + ell as i64, ell as i64);
                if rat_i(enumerate_x(ell, n_cap).len() as i64) != expect {
                    ok = false;
                    detail = format!("enumerate_x l={ell} N={n_cap}");
                }
            }
        }
    }

    gate(8, ok, &detail);
}
