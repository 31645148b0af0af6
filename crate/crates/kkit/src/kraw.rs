//! Exact evaluation of 1-variate and `l`-variate Krawtchouk polynomials and
//! the combinatorial coefficients around them.

use num_traits::{One, Zero};

use crate::numeric::{rat_i, rat_pow, Rational};
use crate::{Error, Result};

/// An `l`-tuple of nonnegative integers with `|parts| <= cap`, i.e. a member
/// of the parameter set `X(l, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    parts: Vec<i64>,
    cap: i64,
}

impl MultiIndex {
    pub fn new(parts: Vec<i64>, cap: i64) -> Result<Self> {
        if parts.iter().any(|&v| v < 0) || parts.iter().sum::<i64>() > cap {
            return Err(Error::Domain(format!(
                "{parts:?} is not in X({}, {cap})",
                parts.len()
            )));
        }
        Ok(MultiIndex { parts, cap })
    }

    pub fn zero(ell: usize, cap: i64) -> Self {
        MultiIndex { parts: vec![0; ell], cap }
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub fn ell(&self) -> usize {
        self.parts.len()
    }

    pub fn total(&self) -> i64 {
        self.parts.iter().sum()
    }

    pub fn get(&self, r: usize) -> i64 {
        self.parts[r]
    }
}

/// `z|^k`: the prefix sum over indices `s <= k`; empty sums are 0.
pub fn prefix_sum(z: &[i64], k: i64) -> i64 {
    z.iter()
        .enumerate()
        .filter(|(s, _)| (*s as i64) <= k)
        .map(|(_, v)| v)
        .sum()
}

/// `z|_k`: the suffix sum over indices `s >= k`; empty sums are 0.
pub fn suffix_sum(z: &[i64], k: i64) -> i64 {
    z.iter()
        .enumerate()
        .filter(|(s, _)| (*s as i64) >= k)
        .map(|(_, v)| v)
        .sum()
}

/// Pochhammer symbol `(a)_k = a (a+1) ... (a+k-1)`, `(a)_0 = 1`.
pub fn pochhammer(a: &Rational, k: i64) -> Result<Rational> {
    if k < 0 {
        return Err(Error::NegativePochhammer(k));
    }
    let mut acc = Rational::one();
    for s in 0..k {
        acc *= a + rat_i(s);
    }
    Ok(acc)
}

fn factorial(n: i64) -> Rational {
    pochhammer(&rat_i(1), n).expect("nonnegative")
}

/// Multinomial coefficient `N! / ((N - |n|)! * prod n_r!)` with the
/// zero-extension convention: 0 when any part is negative or `|n| > N`.
pub fn multinomial(n_total: i64, parts: &[i64]) -> Rational {
    let s: i64 = parts.iter().sum();
    if n_total < 0 || parts.iter().any(|&v| v < 0) || s > n_total {
        return Rational::zero();
    }
    let mut acc = factorial(n_total) / factorial(n_total - s);
    for &v in parts {
        acc /= factorial(v);
    }
    acc
}

/// Binomial coefficient with the same zero-extension convention.
pub fn binomial(n: i64, k: i64) -> Rational {
    multinomial(n, &[k])
}

/// The 1-variate Krawtchouk polynomial
/// `K_n(x; p; N) = sum_k (-n)_k (-x)_k / ((-N)_k k! p^k)`, exact.
///
/// `x` is treated as a rational (the series is a polynomial in `x`), not only
/// an integer orbit count.
pub fn kraw1(n: i64, x: &Rational, p: &Rational, n_cap: i64) -> Result<Rational> {
    if n < 0 || n > n_cap {
        return Err(Error::DegreeOutOfRange(n, n_cap));
    }
    if p.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let mut acc = Rational::zero();
    // Term ratio form keeps every factor exact.
    let mut term = Rational::one();
    for k in 0..=n {
        if k > 0 {
            // (-n)_k / (-n)_{k-1} etc., all nonzero for k <= n <= N.
            term *= rat_i(-n + k - 1) * (-x + rat_i(k - 1));
            term /= rat_i(-n_cap + k - 1) * rat_i(k) * p;
        }
        acc += &term;
        if term.is_zero() {
            break; // (-x)_k stays zero once a factor vanished
        }
    }
    Ok(acc)
}

/// The merged factor `(-N_r)_{n} * K_n(x; p; N_r)`, written as the single sum
/// `sum_k (-n)_k (-x)_k / (k! p^k) * (-N_r + k)_{n-k}`.
///
/// This form is a polynomial in `N_r`, so it stays well-defined when
/// `n > N_r` (where the quotient form of the product in the `l`-variate
/// definition degenerates). `p = 0` is only rejected when a division by `p`
/// actually occurs, i.e. when `n >= 1`.
fn kraw_factor(n: i64, x: i64, p: &Rational, nr: i64) -> Result<Rational> {
    debug_assert!(n >= 0);
    if n >= 1 && p.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let mut acc = Rational::zero();
    for k in 0..=n {
        let mut term = pochhammer(&rat_i(-n), k)? * pochhammer(&rat_i(-x), k)?;
        if term.is_zero() {
            continue;
        }
        term /= factorial(k) * rat_pow(p, k as u64);
        term *= pochhammer(&rat_i(-nr + k), n - k)?;
        acc += term;
    }
    Ok(acc)
}

/// The `l`-variate Krawtchouk polynomial
/// `K_n(x; p; N) = 1/(-N)_{|n|} * prod_r (-N_r)_{n_r} K_{n_r}(x_r; p_r; N_r)`
/// with the cascading sizes `N_r = N - x|^{r-1} - n|_{r+1}`, exact.
///
/// Each factor is evaluated in the merged polynomial form (see
/// [`kraw_factor`]), which agrees with the quotient form whenever
/// `n_r <= N_r` and extends it otherwise; the extension is what the zonal
/// spherical oracle matches on every orbit pair.
pub fn kraw_multi(n: &[i64], x: &[i64], pvec: &[Rational], n_cap: i64) -> Result<Rational> {
    let ell = n.len();
    if x.len() != ell {
        return Err(Error::LengthMismatch(x.len(), ell));
    }
    if pvec.len() != ell {
        return Err(Error::LengthMismatch(pvec.len(), ell));
    }
    let total: i64 = n.iter().sum();
    if total > n_cap {
        return Err(Error::IndexOverflow(total, n_cap));
    }
    if n.iter().any(|&v| v < 0) {
        return Err(Error::Domain(format!("negative degree in {n:?}")));
    }
    let mut acc = Rational::one();
    for r in 0..ell {
        let nr = n_cap - prefix_sum(x, r as i64 - 1) - suffix_sum(n, r as i64 + 1);
        let f = kraw_factor(n[r], x[r], &pvec[r], nr).map_err(|e| match e {
            Error::ZeroParameter => Error::ZeroParameterAt(r),
            other => other,
        })?;
        acc *= f;
    }
    Ok(acc / pochhammer(&rat_i(-n_cap), total)?)
}

/// `num^(n_0) * K_n(x; (num/den, p, ..., p); N)`, exact.
///
/// Unlike [`kraw_multi`], this stays well-defined at `num = 0`: the scale
/// factor `num^(n_0)` clears every `num^(-k)` denominator coming from the
/// first coordinate's parameter, leaving a polynomial in `num` (with the
/// convention `0^0 = 1`, only the `k = n_0` term survives at `num = 0`).
pub fn kraw_multi_scaled0(
    n: &[i64],
    x: &[i64],
    num: &Rational,
    den: &Rational,
    p: &Rational,
    n_cap: i64,
) -> Result<Rational> {
    let ell = n.len();
    if x.len() != ell {
        return Err(Error::LengthMismatch(x.len(), ell));
    }
    if den.is_zero() {
        return Err(Error::ZeroParameterAt(0));
    }
    let total: i64 = n.iter().sum();
    if total > n_cap {
        return Err(Error::IndexOverflow(total, n_cap));
    }
    if n.iter().any(|&v| v < 0) {
        return Err(Error::Domain(format!("negative degree in {n:?}")));
    }
    // First coordinate in the merged-and-scaled form:
    // sum_k (-n0)_k (-x0)_k / k! * num^(n0-k) * den^k * (-N0+k)_{n0-k}.
    let n0 = n[0];
    let nr0 = n_cap - suffix_sum(n, 1);
    let mut factor0 = Rational::zero();
    for k in 0..=n0 {
        let mut term = pochhammer(&rat_i(-n0), k)? * pochhammer(&rat_i(-x[0]), k)?;
        if term.is_zero() {
            continue;
        }
        term /= factorial(k);
        term *= rat_pow(num, (n0 - k) as u64) * rat_pow(den, k as u64);
        term *= pochhammer(&rat_i(-nr0 + k), n0 - k)?;
        factor0 += term;
    }
    let mut acc = factor0;
    for r in 1..ell {
        let nr = n_cap - prefix_sum(x, r as i64 - 1) - suffix_sum(n, r as i64 + 1);
        let f = kraw_factor(n[r], x[r], p, nr).map_err(|e| match e {
            Error::ZeroParameter => Error::ZeroParameterAt(r),
            other => other,
        })?;
        acc *= f;
    }
    Ok(acc / pochhammer(&rat_i(-n_cap), total)?)
}

/// Uniform-parameter shorthand `K_n(x; p; N)` with `p_r = p` for all `r`.
pub fn kraw_multi_uniform(n: &[i64], x: &[i64], p: &Rational, n_cap: i64) -> Result<Rational> {
    kraw_multi(n, x, &vec![p.clone(); n.len()], n_cap)
}

/// All of `X(l, N)` in lexicographic order; the count is `C(N + l, l)`.
pub fn enumerate_x(ell: usize, n_cap: i64) -> Vec<MultiIndex> {
    assert!(ell >= 1 && n_cap >= 0);
    let mut out = Vec::new();
    let mut parts = vec![0i64; ell];
    loop {
        out.push(MultiIndex { parts: parts.clone(), cap: n_cap });
        // Next tuple in lexicographic order with sum <= n_cap.
        let mut pos = ell;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            parts[pos] += 1;
            for v in &mut parts[pos + 1..] {
                *v = 0;
            }
            if parts.iter().sum::<i64>() <= n_cap {
                break;
            }
            parts[pos] = 0;
        }
    }
}

/// `dim V_n = multinomial(N, n) * q^(sum_r r n_r) * (q-1)^|n|`.
pub fn dim_vn(q: i64, n_cap: i64, n: &[i64]) -> Rational {
    let mut acc = multinomial(n_cap, n);
    for (r, &nr) in n.iter().enumerate() {
        acc *= rat_pow(&rat_i(q), (r as i64 * nr) as u64);
        acc *= rat_pow(&rat_i(q - 1), nr as u64);
    }
    acc
}

/// Orbit size `|O(x)| = multinomial(N, x) * prod_r (q^(l-1-r) (q-1))^(x_r)`.
pub fn orbit_size(q: i64, ell: usize, n_cap: i64, x: &[i64]) -> Rational {
    let mut acc = multinomial(n_cap, x);
    for (r, &xr) in x.iter().enumerate() {
        let cell = rat_i(q).pow((ell as i32 - 1 - r as i32) as i32) * rat_i(q - 1);
        acc *= rat_pow(&cell, xr as u64);
    }
    acc
}

/// One failing pair of the orthogonality check.
#[derive(Clone, Debug)]
pub struct OrthFailure {
    pub n: MultiIndex,
    pub m: MultiIndex,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Verifies, exactly, the orthogonality relation
/// `sum_x |O(x)| K_n(x) K_m(x) = delta_{nm} q^(lN) / dim V_n`
/// with the uniform parameter `p_r = (q-1)/q`.
pub fn orthogonality_check(ell: usize, n_cap: i64, q: i64) -> Result<Vec<OrthFailure>> {
    if q < 2 {
        return Err(Error::Domain(format!("q must be >= 2, got {q}")));
    }
    let p = Rational::new((q - 1).into(), q.into());
    let xs = enumerate_x(ell, n_cap);
    let mut failures = Vec::new();
    // Cache the polynomial values over the grid once per degree index.
    let mut values: Vec<Vec<Rational>> = Vec::with_capacity(xs.len());
    for n in &xs {
        let row: Result<Vec<_>> = xs
            .iter()
            .map(|x| kraw_multi_uniform(n.parts(), x.parts(), &p, n_cap))
            .collect();
        values.push(row?);
    }
    let weights: Vec<Rational> = xs
        .iter()
        .map(|x| orbit_size(q, ell, n_cap, x.parts()))
        .collect();
    let q_pow = rat_pow(&rat_i(q), (ell as i64 * n_cap) as u64);
    for (i, n) in xs.iter().enumerate() {
        for (j, m) in xs.iter().enumerate() {
            let mut lhs = Rational::zero();
            for k in 0..xs.len() {
                lhs += &weights[k] * &values[i][k] * &values[j][k];
            }
            let rhs = if i == j {
                &q_pow / dim_vn(q, n_cap, n.parts())
            } else {
                Rational::zero()
            };
            if lhs != rhs {
                failures.push(OrthFailure { n: n.clone(), m: m.clone(), lhs, rhs });
            }
        }
    }
    Ok(failures)
}
