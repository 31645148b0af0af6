//! The ring `R = Z/p^l` with valuation, its additive character group with
//! dual valuation, the unit-group filtration `o^x_r`, and unit characters.

use std::collections::HashMap;

use crate::numeric::{root_of_unity, ComplexHP, CycloNumber};
use crate::{Error, Result};

/// Valuation levels, covering both `v` (with `Inf` at 0) and the dual
/// valuation (with `MinusInf` at the trivial character).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    MinusInf,
    Fin(u32),
    Inf,
}

impl Level {
    pub fn fin(self) -> Option<u32> {
        match self {
            Level::Fin(r) => Some(r),
            _ => None,
        }
    }
}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.key().cmp(&other.key()))
    }
}

impl Ord for Level {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl Level {
    fn key(self) -> i64 {
        match self {
            Level::MinusInf => i64::MIN,
            Level::Fin(r) => r as i64,
            Level::Inf => i64::MAX,
        }
    }
}

/// The residue ring `Z/p^l` for a prime `p` (the `q = p` case of `o/p^l`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    p: u64,
    ell: u32,
}

impl RingSpec {
    pub fn new(p: u64, ell: u32) -> Result<Self> {
        if !crate::numeric::is_prime(p) {
            return Err(Error::NotPrime("p", p));
        }
        if ell < 1 {
            return Err(Error::BadLevel(ell as i64));
        }
        Ok(RingSpec { p, ell })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Residue field order; prime case only, so `q = p`.
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.ell)
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.order() as i64) as u64
    }

    /// Largest `r < l` with `p^r | a`, or `Inf` for 0.
    pub fn valuation(&self, a: u64) -> Level {
        let a = a % self.order();
        if a == 0 {
            return Level::Inf;
        }
        let mut r = 0;
        let mut a = a;
        while a % self.p == 0 {
            a /= self.p;
            r += 1;
        }
        Level::Fin(r)
    }

    /// The orbit `R_r = {a | v(a) = r}` (with `R_inf = {0}`).
    pub fn orbit_rr(&self, r: Level) -> Vec<u64> {
        (0..self.order()).filter(|&a| self.valuation(a) == r).collect()
    }

    /// All units of the ring.
    pub fn units(&self) -> Vec<u64> {
        (1..self.order()).filter(|&a| a % self.p != 0).collect()
    }

    /// The filtration subgroup `o^x_r = {1 + a p^(r+1)}`; the full unit group
    /// at `r = -inf`, the trivial group for `r >= l - 1`.
    pub fn unit_subgroup(&self, r: Level) -> Vec<u64> {
        match r {
            Level::MinusInf => self.units(),
            Level::Inf => vec![1],
            Level::Fin(r) => {
                let m = self.order();
                let step = self.p.pow((r + 1).min(self.ell));
                let mut out: Vec<u64> = (0..m / step).map(|a| (1 + a * step) % m).collect();
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }

    /// `I_r = |R^hat_r|`: 1 at `-inf`, `q^r (q-1)` for finite `r`.
    pub fn i_r(&self, r: Level) -> u64 {
        match r {
            Level::MinusInf => 1,
            Level::Inf => panic!("I_r is not defined at +inf"),
            Level::Fin(r) => self.p.pow(r) * (self.p - 1),
        }
    }

    pub fn pow_mod(&self, mut base: u64, mut exp: u64) -> u64 {
        let m = self.order();
        let mut acc = 1u64;
        base %= m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc
    }

    pub fn unit_order(&self, a: u64) -> u64 {
        let m = self.order();
        assert!(a % self.p != 0);
        let mut x = a % m;
        let mut ord = 1;
        while x != 1 {
            x = x * (a % m) % m;
            ord += 1;
        }
        ord
    }

    pub fn unit_inverse(&self, a: u64) -> u64 {
        self.pow_mod(a, self.unit_order(a) - 1)
    }
}

/// The additive character `chi_b(a) = zeta^(b a)` for `zeta` the fixed
/// primitive `p^l`-th root of unity; `b = 1` realizes the pinned `theta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AddChar {
    spec: RingSpec,
    b: u64,
}

impl AddChar {
    pub fn new(spec: RingSpec, b: i64) -> Self {
        AddChar { spec, b: spec.reduce(b) }
    }

    pub fn index(&self) -> u64 {
        self.b
    }

    pub fn is_trivial(&self) -> bool {
        self.b == 0
    }

    /// Exponent of `zeta` at `a`, i.e. `b a mod p^l`.
    pub fn exponent(&self, a: u64) -> u64 {
        self.b * (a % self.spec.order()) % self.spec.order()
    }

    pub fn eval(&self, a: u64) -> CycloNumber {
        root_of_unity(self.spec.p(), self.spec.ell(), self.exponent(a) as i64)
            .expect("spec is validated")
    }

    /// Dual valuation by direct scan: `max{v(a) | chi(a) != 1}`, `-inf` for
    /// the trivial character. Equals `l - 1 - v(b)`.
    pub fn dual_valuation(&self) -> Level {
        let mut best = Level::MinusInf;
        for a in 0..self.spec.order() {
            if self.exponent(a) != 0 {
                let v = self.spec.valuation(a);
                if v != Level::Inf && v > best {
                    best = v;
                }
            }
        }
        best
    }

    pub fn mul(&self, o: &AddChar) -> AddChar {
        assert_eq!(self.spec, o.spec);
        AddChar::new(self.spec, (self.b + o.b) as i64)
    }

    pub fn inverse(&self) -> AddChar {
        AddChar::new(self.spec, -(self.b as i64))
    }

    /// The scaled character `chi(c . )`.
    pub fn scaled(&self, c: u64) -> AddChar {
        AddChar::new(self.spec, (self.b * (c % self.spec.order())) as i64)
    }
}

/// The orbit `R^hat_r` of additive characters with dual valuation `r`.
pub fn orbit_rhat(spec: RingSpec, r: Level) -> Vec<AddChar> {
    (0..spec.order())
        .map(|b| AddChar::new(spec, b as i64))
        .filter(|c| c.dual_valuation() == r)
        .collect()
}

/// Decides whether `chi, chi2` (of equal dual valuation `r`) lie in the same
/// `o^x_u`-orbit, via criterion (iii): `chi chi2^(-1)` has dual valuation
/// `<= s - 1` for `s = r - u`.
pub fn char_orbit_equiv(chi: &AddChar, chi2: &AddChar, u: Level) -> Result<bool> {
    let r = chi.dual_valuation();
    if r != chi2.dual_valuation() {
        return Err(Error::ValuationMismatch(r, chi2.dual_valuation()));
    }
    match u {
        Level::MinusInf => Ok(true),
        Level::Inf => Ok(chi == chi2),
        Level::Fin(u) => {
            let r = r
                .fin()
                .ok_or_else(|| Error::Domain("trivial characters have no finite orbit level".into()))?;
            if u > r {
                return Err(Error::Domain(format!("u = {u} exceeds r = {r}")));
            }
            let s = r - u;
            let diff = chi.mul(&chi2.inverse());
            let dv = diff.dual_valuation();
            Ok(if s == 0 {
                dv == Level::MinusInf
            } else {
                dv <= Level::Fin(s - 1)
            })
        }
    }
}

/// The unit group `(Z/p^l)^x` with a computed cyclic decomposition and
/// discrete logarithms, used to build its character table.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    pub spec: RingSpec,
    pub units: Vec<u64>,
    pos: HashMap<u64, usize>,
    /// Independent generators with their orders; the group is their direct product.
    pub gens: Vec<(u64, u64)>,
    /// Exponent tuple of each unit (aligned with `units`) over `gens`.
    pub dlog: Vec<Vec<u64>>,
    /// lcm of the generator orders.
    pub exponent_lcm: u64,
}

impl UnitGroup {
    pub fn new(spec: RingSpec) -> Self {
        let units = spec.units();
        let m = spec.order();
        // Brute-force generator search: repeatedly adjoin an element of
        // maximal order in the quotient by the span so far, corrected so the
        // span stays a direct product. Group order <= p^(l-1)(p-1) here.
        let mut span: Vec<u64> = vec![1];
        let mut gens: Vec<(u64, u64)> = Vec::new();
        while span.len() < units.len() {
            let quotient_order = |g: u64| -> u64 {
                let mut x = g;
                let mut k = 1;
                while !span.contains(&x) {
                    x = x * g % m;
                    k += 1;
                }
                k
            };
            let mut candidates: Vec<(u64, u64)> = units
                .iter()
                .map(|&g| (quotient_order(g), g))
                .filter(|&(k, _)| k > 1)
                .collect();
            candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut adjoined = false;
            for &(k, g) in &candidates {
                let gk = spec.pow_mod(g, k);
                // Correct g by a k-th root of g^k inside the current span.
                if let Some(&h) = span.iter().find(|&&h| spec.pow_mod(h, k) == gk) {
                    let g2 = g * spec.unit_inverse(h) % m;
                    debug_assert_eq!(spec.unit_order(g2), k);
                    let mut new_span = Vec::with_capacity(span.len() * k as usize);
                    for &s in &span {
                        let mut x = s;
                        for _ in 0..k {
                            new_span.push(x);
                            x = x * g2 % m;
                        }
                    }
                    new_span.sort_unstable();
                    new_span.dedup();
                    assert_eq!(new_span.len(), span.len() * k as usize);
                    span = new_span;
                    gens.push((g2, k));
                    adjoined = true;
                    break;
                }
            }
            assert!(adjoined, "no adjoinable generator found");
        }
        // Discrete logarithms by full enumeration of exponent tuples.
        let mut table: HashMap<u64, Vec<u64>> = HashMap::new();
        let mut tuples = vec![vec![]];
        for &(g, d) in &gens {
            let mut next = Vec::new();
            for t in &tuples {
                for e in 0..d {
                    let mut t2 = t.clone();
                    t2.push(e);
                    next.push(t2);
                }
            }
            tuples = next;
            let _ = g;
        }
        for t in tuples {
            let mut x = 1u64;
            for (j, &(g, _)) in gens.iter().enumerate() {
                x = x * spec.pow_mod(g, t[j]) % m;
            }
            table.entry(x).or_insert(t);
        }
        let pos: HashMap<u64, usize> = units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let dlog: Vec<Vec<u64>> = units.iter().map(|u| table[u].clone()).collect();
        let exponent_lcm = gens
            .iter()
            .map(|&(_, d)| d)
            .fold(1u64, num_integer::lcm);
        UnitGroup { spec, units, pos, gens, dlog, exponent_lcm }
    }

    pub fn index_of(&self, unit: u64) -> usize {
        self.pos[&(unit % self.spec.order())]
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }
}

/// A 1-dimensional character of the unit group, trivial on `o^x_level`.
#[derive(Clone, Debug)]
pub struct UnitChar {
    /// Exponent of the character against each generator of the unit group.
    pub exps: Vec<u64>,
    /// Minimal `u` with the character trivial on `o^x_u`; `MinusInf` for the
    /// trivial character.
    pub level: Level,
    /// Exact rotation numerators at each unit (aligned with `UnitGroup::units`),
    /// over the common denominator `UnitGroup::exponent_lcm`.
    pub rot: Vec<u64>,
    /// Numerical values at each unit.
    pub values: Vec<ComplexHP>,
}

impl UnitChar {
    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn value(&self, group: &UnitGroup, unit: u64) -> &ComplexHP {
        &self.values[group.index_of(unit)]
    }

    /// Exact rotation `(num, den)` with value `exp(2 pi i num/den)`.
    pub fn rotation(&self, group: &UnitGroup, unit: u64) -> (u64, u64) {
        (self.rot[group.index_of(unit)], group.exponent_lcm)
    }
}

fn char_rotations(group: &UnitGroup, exps: &[u64]) -> Vec<u64> {
    let l = group.exponent_lcm;
    group
        .dlog
        .iter()
        .map(|t| {
            let mut acc = 0u64;
            for (j, &(_, d)) in group.gens.iter().enumerate() {
                acc = (acc + t[j] * exps[j] % d * (l / d)) % l;
            }
            acc
        })
        .collect()
}

fn char_level(group: &UnitGroup, rot: &[u64]) -> Level {
    if rot.iter().all(|&x| x == 0) {
        return Level::MinusInf;
    }
    let spec = group.spec;
    for u in 0..spec.ell() {
        let trivial = spec
            .unit_subgroup(Level::Fin(u))
            .iter()
            .all(|&s| rot[group.index_of(s)] == 0);
        if trivial {
            return Level::Fin(u);
        }
    }
    unreachable!("every character is trivial on the trivial subgroup o^x_(l-1)")
}

/// All characters of the unit group, sorted by (level, exponent tuple) so
/// that for every `u` the first `I_u` entries are exactly those trivial on
/// `o^x_u`. The first entry is the trivial character.
pub fn all_unit_characters(group: &UnitGroup, prec: usize) -> Vec<UnitChar> {
    let mut exp_tuples = vec![vec![]];
    for &(_, d) in &group.gens {
        let mut next = Vec::new();
        for t in &exp_tuples {
            for e in 0..d {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        exp_tuples = next;
    }
    let mut root_cache: HashMap<u64, ComplexHP> = HashMap::new();
    let l = group.exponent_lcm;
    let mut chars: Vec<UnitChar> = exp_tuples
        .into_iter()
        .map(|exps| {
            let rot = char_rotations(group, &exps);
            let level = char_level(group, &rot);
            let values = rot
                .iter()
                .map(|&k| {
                    root_cache
                        .entry(k)
                        .or_insert_with(|| ComplexHP::root_of_unity(k as i64, l, prec))
                        .clone()
                })
                .collect();
            UnitChar { exps, level, rot, values }
        })
        .collect();
    chars.sort_by(|a, b| a.level.cmp(&b.level).then(a.rot.cmp(&b.rot)));
    chars
}

/// The `I_r` characters of the unit group trivial on `o^x_r`, trivial
/// character first, in the nested order of [`all_unit_characters`].
pub fn unit_characters(group: &UnitGroup, r: Level, prec: usize) -> Vec<UnitChar> {
    match r {
        Level::Inf => panic!("unit characters are indexed by r in {{-inf, 0..l-1}}"),
        Level::MinusInf => all_unit_characters(group, prec)
            .into_iter()
            .take(1)
            .collect(),
        Level::Fin(r) => {
            let out: Vec<UnitChar> = all_unit_characters(group, prec)
                .into_iter()
                .filter(|c| c.level <= Level::Fin(r))
                .collect();
            assert_eq!(out.len() as u64, group.spec.i_r(Level::Fin(r)));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: u64, ell: u32) -> RingSpec {
        RingSpec::new(p, ell).unwrap()
    }

    #[test]
    fn valuations() {
        let s = spec(2, 3);
        assert_eq!(s.valuation(0), Level::Inf);
        assert_eq!(s.valuation(4), Level::Fin(2));
        assert_eq!(s.valuation(6), Level::Fin(1));
        assert_eq!(s.valuation(5), Level::Fin(0));
    }

    #[test]
    fn dual_valuations() {
        let s = spec(3, 2);
        assert_eq!(AddChar::new(s, 0).dual_valuation(), Level::MinusInf);
        assert_eq!(AddChar::new(s, 1).dual_valuation(), Level::Fin(1));
        assert_eq!(AddChar::new(s, 3).dual_valuation(), Level::Fin(0));
        // v^hat(chi_b) = l - 1 - v(b) for every b != 0.
        for (p, ell) in [(2u64, 3u32), (3, 2), (5, 2)] {
            let s = spec(p, ell);
            for b in 1..s.order() {
                let expect = Level::Fin(s.ell() - 1 - s.valuation(b).fin().unwrap());
                assert_eq!(AddChar::new(s, b as i64).dual_valuation(), expect);
            }
        }
    }

    #[test]
    fn orbit_sizes() {
        for (p, ell) in [(2u64, 2u32), (2, 3), (3, 2), (5, 2)] {
            let s = spec(p, ell);
            let mut total = 1; // R_inf = {0}
            for r in 0..ell {
                let rr = s.orbit_rr(Level::Fin(r));
                assert_eq!(rr.len() as u64, p.pow(ell - r - 1) * (p - 1));
                total += rr.len() as u64;
                let rhat = orbit_rhat(s, Level::Fin(r));
                assert_eq!(rhat.len() as u64, s.i_r(Level::Fin(r)));
            }
            assert_eq!(total, s.order());
            assert_eq!(orbit_rhat(s, Level::MinusInf).len(), 1);
            // Character-side partition: sum_r I_r + 1 = p^l.
            let hat_total: u64 = (0..ell).map(|r| s.i_r(Level::Fin(r))).sum::<u64>() + 1;
            assert_eq!(hat_total, s.order());
        }
        let s = spec(2, 2);
        assert_eq!(s.orbit_rr(Level::Fin(0)).len(), 2);
        assert_eq!(s.orbit_rr(Level::Inf), vec![0]);
    }

    #[test]
    fn isomorphism_maps_orbits() {
        // b -> chi_b is bijective and maps R_r onto R^hat_(l-1-r).
        for (p, ell) in [(2u64, 2u32), (2, 3), (3, 2), (3, 3), (5, 2)] {
            let s = spec(p, ell);
            for r in 0..ell {
                let image: Vec<AddChar> = s
                    .orbit_rr(Level::Fin(r))
                    .iter()
                    .map(|&b| AddChar::new(s, b as i64))
                    .collect();
                let target = orbit_rhat(s, Level::Fin(ell - r - 1));
                assert_eq!(image.len(), target.len());
                for chi in &image {
                    assert!(target.contains(chi));
                }
            }
        }
    }

    #[test]
    fn unit_subgroups() {
        let s = spec(3, 2);
        assert_eq!(s.unit_subgroup(Level::Fin(0)), vec![1, 4, 7]);
        assert_eq!(s.unit_subgroup(Level::MinusInf).len(), 6);
        assert_eq!(s.unit_subgroup(Level::Fin(5)), vec![1]);
        // Index [o^x : o^x_r] = I_r.
        for (p, ell) in [(2u64, 3u32), (3, 2), (5, 3)] {
            let s = spec(p, ell);
            let all = s.units().len() as u64;
            for r in 0..ell {
                let idx = all / s.unit_subgroup(Level::Fin(r)).len() as u64;
                assert_eq!(idx, s.i_r(Level::Fin(r)));
            }
        }
    }

    #[test]
    fn stabilizer_property() {
        // For chi in R^hat_r and unit c: chi(c .) = chi iff c in o^x_r.
        for (p, ell) in [(2u64, 3u32), (3, 2), (5, 2)] {
            let s = spec(p, ell);
            for r in 0..ell {
                let sub = s.unit_subgroup(Level::Fin(r));
                for chi in orbit_rhat(s, Level::Fin(r)) {
                    for &c in &s.units() {
                        let fixed = chi.scaled(c) == chi;
                        assert_eq!(fixed, sub.contains(&c), "p={p} l={ell} r={r} c={c}");
                    }
                }
            }
        }
    }

    #[test]
    fn unit_group_decomposition() {
        for (p, ell) in [(2u64, 1u32), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (5, 3)] {
            let g = UnitGroup::new(spec(p, ell));
            let order: u64 = g.gens.iter().map(|&(_, d)| d).product();
            assert_eq!(order as usize, g.len());
            // dlog is a bijection.
            let mut seen: Vec<&Vec<u64>> = g.dlog.iter().collect();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), g.len());
        }
    }

    #[test]
    fn unit_character_counts_and_nesting() {
        for (p, ell) in [(2u64, 2u32), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3)] {
            let s = spec(p, ell);
            let g = UnitGroup::new(s);
            assert_eq!(unit_characters(&g, Level::MinusInf, 96).len(), 1);
            for r in 0..ell {
                let chars = unit_characters(&g, Level::Fin(r), 96);
                assert_eq!(chars.len() as u64, s.i_r(Level::Fin(r)));
                assert!(chars[0].is_trivial());
                // Pairwise distinct and trivial on o^x_r (exact rotations).
                let sub = s.unit_subgroup(Level::Fin(r));
                for (i, c) in chars.iter().enumerate() {
                    for &u in &sub {
                        assert_eq!(c.rot[g.index_of(u)], 0);
                    }
                    for c2 in &chars[i + 1..] {
                        assert_ne!(c.rot, c2.rot);
                    }
                }
                // Nesting: the first I_u entries are those trivial on o^x_u.
                for u in 0..r {
                    let cut = s.i_r(Level::Fin(u)) as usize;
                    for (i, c) in chars.iter().enumerate() {
                        let trivial_on_u = s
                            .unit_subgroup(Level::Fin(u))
                            .iter()
                            .all(|&x| c.rot[g.index_of(x)] == 0);
                        assert_eq!(trivial_on_u, i < cut);
                    }
                }
            }
        }
    }

    #[test]
    fn unit_characters_multiplicative() {
        let s = spec(3, 2);
        let g = UnitGroup::new(s);
        let chars = unit_characters(&g, Level::Fin(1), 160);
        let l = g.exponent_lcm;
        for c in &chars {
            for &u in &g.units {
                for &v in &g.units {
                    let uv = u * v % s.order();
                    let sum = (c.rot[g.index_of(u)] + c.rot[g.index_of(v)]) % l;
                    assert_eq!(sum, c.rot[g.index_of(uv)]);
                }
                // |value| = 1 numerically.
                assert!(c.value(&g, u).abs().approx_eq(&ComplexHP::one(160), 1e-40));
            }
        }
        // p = 3, l = 1: exactly the 2 characters of (Z/3)^x.
        let g1 = UnitGroup::new(spec(3, 1));
        assert_eq!(unit_characters(&g1, Level::Fin(0), 96).len(), 2);
    }

    #[test]
    fn orbit_equivalence_criteria_agree() {
        // The implemented dual-valuation criterion agrees with direct
        // orbit membership and with equality on R|_s, exhaustively.
        for (p, ell) in [(2u64, 2u32), (2, 3), (3, 2), (3, 3)] {
            let s = spec(p, ell);
            for r in 0..ell {
                let orbit = orbit_rhat(s, Level::Fin(r));
                for u in 0..=r {
                    let sub = s.unit_subgroup(Level::Fin(u));
                    let big_s = r - u;
                    for a in &orbit {
                        for b in &orbit {
                            let by_iii = char_orbit_equiv(a, b, Level::Fin(u)).unwrap();
                            let by_i = sub.iter().any(|&c| a.scaled(c) == *b);
                            let by_ii = (0..s.order())
                                .filter(|&x| s.valuation(x) >= Level::Fin(big_s))
                                .all(|x| a.exponent(x) == b.exponent(x));
                            assert_eq!(by_iii, by_i, "p={p} l={ell} r={r} u={u}");
                            assert_eq!(by_iii, by_ii, "p={p} l={ell} r={r} u={u}");
                        }
                    }
                }
                // u = -inf: a single full orbit.
                for a in &orbit {
                    for b in &orbit {
                        assert!(char_orbit_equiv(a, b, Level::MinusInf).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_equivalence_example() {
        // p=2, l=2: chi_1 vs chi_3 under o^x_1 (u = 1 = r).
        let s = spec(2, 2);
        let c1 = AddChar::new(s, 1);
        let c3 = AddChar::new(s, 3);
        assert!(!char_orbit_equiv(&c1, &c3, Level::Fin(1)).unwrap());
        assert!(char_orbit_equiv(&c1, &c1, Level::Fin(1)).unwrap());
        assert!(char_orbit_equiv(&c1, &c3, Level::Fin(0)).unwrap());
        let c2 = AddChar::new(s, 2);
        assert!(char_orbit_equiv(&c1, &c2, Level::Fin(0)).is_err());
    }

    #[test]
    fn restriction_correspondence() {
        // R^hat|^s has size p^(s+1) and restricts bijectively to the
        // character group of Z/p^(s+1).
        for (p, ell) in [(2u64, 3u32), (3, 2), (5, 2)] {
            let s = spec(p, ell);
            for lev in 0..ell {
                let mut set: Vec<AddChar> = orbit_rhat(s, Level::MinusInf);
                for r in 0..=lev {
                    set.extend(orbit_rhat(s, Level::Fin(r)));
                }
                assert_eq!(set.len() as u64, p.pow(lev + 1));
                let modulus = p.pow(lev + 1);
                // Well-defined on Z/p^(s+1) and pairwise distinct there.
                let mut tables: Vec<Vec<u64>> = Vec::new();
                for chi in &set {
                    for a in 0..s.order() {
                        assert_eq!(chi.exponent(a), chi.exponent((a + modulus) % s.order()));
                    }
                    tables.push((0..modulus).map(|a| chi.exponent(a)).collect());
                }
                tables.sort();
                tables.dedup();
                assert_eq!(tables.len() as u64, modulus);
            }
        }
    }
}
