//! Binary duadic codes of length `p^n` for primes `p ≡ 7 (mod 8)`, the
//! factorization of `x^{p^n} - 1` into cyclotomic factors, polynomial orders
//! and the parameters of quantum synchronizable codes built from them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::exec::Exec;
use crate::field::make_field;
use crate::gf2::{self, BitPoly, Gf2Error, Gf2Ext};
use crate::linear_code::{Distance, LinearCode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DuadicError {
    #[error("p = {0} is not supported")]
    Unsupported(u64),
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("p = {0} is not congruent to -1 mod 8")]
    NotMinusOneMod8(u64),
    #[error("exponent must be at least 1")]
    InvalidExponent,
    #[error("level {m} out of range 1..={n}")]
    InvalidLevel { m: u32, n: u32 },
    #[error("p^n is too large")]
    TooLarge,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("x^{0} is not congruent to 1 modulo the polynomial")]
    NotAMultiple(u64),
    #[error("no order found within {0} steps")]
    OrderNotFound(u64),
    #[error("generator polynomials are not nested: need g | h | x^n - 1")]
    NotNested,
    #[error("<h> does not contain its Euclidean dual")]
    NotDualContaining,
    #[error("2k1 - n = {0} is negative")]
    NegativeDimension(i64),
    #[error("invalid multiplicities: {}", .0.join("; "))]
    InvalidMultiplicities(Vec<String>),
    #[error("-S_n0 differs from S_n1")]
    NotComplementSplitting,
    #[error("internal consistency check failed: {0}")]
    ConstructionInconsistency(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Smallest `g ≥ 2` that is a primitive root mod `p` with
/// `g^{p-1} ≢ 1 (mod p^2)`, hence primitive modulo every power of `p`.
pub fn primitive_root_mod_prime_power(p: u64, n: u32) -> Result<u64, DuadicError> {
    if p == 2 {
        return Err(DuadicError::Unsupported(p));
    }
    if !arith::is_prime(p) {
        return Err(DuadicError::NotPrime(p));
    }
    if n == 0 {
        return Err(DuadicError::InvalidExponent);
    }
    let p2 = p.checked_mul(p).ok_or(DuadicError::TooLarge)?;
    let pn = p.checked_pow(n).ok_or(DuadicError::TooLarge)?;
    let phi = pn / p * (p - 1);
    let g = (2..p)
        .find(|&g| {
            arith::multiplicative_order(g, p) == Some(p - 1) && arith::pow_mod(g, p - 1, p2) != 1
        })
        .ok_or_else(|| DuadicError::ConstructionInconsistency(format!("no primitive root mod {p}")))?;
    if arith::multiplicative_order(g, pn) != Some(phi) {
        return Err(DuadicError::ConstructionInconsistency(format!(
            "{g} is not primitive mod {pn}"
        )));
    }
    Ok(g)
}

/// `S_{m0} = <g_m^2>` and `S_{m1} = g_m S_{m0}` inside `Z_{p^m}^*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitLevel {
    pub m: u32,
    pub modulus: u64,
    pub g_m: u64,
    pub s0: Vec<u64>,
    pub s1: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuadicSplitting {
    pub p: u64,
    pub n: u32,
    pub g: u64,
    pub levels: Vec<SplitLevel>,
}

impl DuadicSplitting {
    pub fn level(&self, m: u32) -> Result<&SplitLevel, DuadicError> {
        if m == 0 || m > self.n {
            return Err(DuadicError::InvalidLevel { m, n: self.n });
        }
        Ok(&self.levels[m as usize - 1])
    }

    pub fn pn(&self) -> u64 {
        self.p.pow(self.n)
    }
}

pub fn duadic_splitting(p: u64, n: u32) -> Result<DuadicSplitting, DuadicError> {
    let g = primitive_root_mod_prime_power(p, n)?;
    if p % 8 != 7 {
        return Err(DuadicError::NotMinusOneMod8(p));
    }
    let mut levels = Vec::with_capacity(n as usize);
    for m in 1..=n {
        let modulus = p.pow(m);
        let g_m = g % modulus;
        let g2 = arith::mul_mod(g_m, g_m, modulus);
        let mut s0 = Vec::new();
        let mut x = 1;
        loop {
            s0.push(x);
            x = arith::mul_mod(x, g2, modulus);
            if x == 1 {
                break;
            }
        }
        let mut s1: Vec<u64> = s0.iter().map(|&y| arith::mul_mod(y, g_m, modulus)).collect();
        s0.sort_unstable();
        s1.sort_unstable();
        let half = (modulus / p * (p - 1) / 2) as usize;
        let units = s0.iter().chain(&s1).filter(|&&y| arith::gcd(y, modulus) == 1).count();
        let disjoint = s0.iter().collect::<BTreeSet<_>>().is_disjoint(&s1.iter().collect());
        if s0.len() != half || s1.len() != half || units != 2 * half || !disjoint {
            return Err(DuadicError::ConstructionInconsistency(format!("bad splitting at level {m}")));
        }
        if s0.binary_search(&(2 % modulus)).is_err() {
            return Err(DuadicError::ConstructionInconsistency(format!("2 not in S_{m}0")));
        }
        levels.push(SplitLevel { m, modulus, g_m, s0, s1 });
    }
    Ok(DuadicSplitting { p, n, g, levels })
}

/// Minimal polynomial of `ω_m^i` over `F_2` for a 2-cyclotomic coset `C`
/// modulo `p^m`. Level 0 is the factor `x - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryCyclotomicFactor {
    pub level: u32,
    /// `0` or `1` for the half of the splitting containing the coset;
    /// `None` at level 0.
    pub half: Option<u8>,
    /// 1-based position among the factors of the same level and half,
    /// ordered by smallest coset element.
    pub index: usize,
    /// The coset modulo `p^level`, ascending.
    pub coset: Vec<u64>,
    pub poly: BitPoly,
    pub degree: usize,
}

/// The splitting together with a field `GF(2^T)`, `T = ord_{p^n}(2)`, an
/// element `ω` of order `p^n` and all cyclotomic factors of `x^{p^n} - 1`.
#[derive(Debug, Clone)]
pub struct DuadicTower {
    pub splitting: DuadicSplitting,
    pub field: Gf2Ext,
    pub omega: BitPoly,
    pub factors: Vec<BinaryCyclotomicFactor>,
}

pub fn cosets_of_two(modulus: u64) -> Vec<Vec<u64>> {
    let mut seen = vec![false; modulus as usize];
    let mut out = Vec::new();
    for a in 0..modulus {
        if seen[a as usize] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = a;
        while !seen[x as usize] {
            seen[x as usize] = true;
            c.push(x);
            x = arith::mul_mod(x, 2, modulus);
        }
        c.sort_unstable();
        out.push(c);
    }
    out
}

impl DuadicTower {
    pub fn new(p: u64, n: u32, exec: Exec) -> Result<Self, DuadicError> {
        let splitting = duadic_splitting(p, n)?;
        let pn = splitting.pn();
        let t = arith::multiplicative_order(2, pn).expect("p odd");
        let field = Gf2Ext::new(u32::try_from(t).map_err(|_| DuadicError::TooLarge)?)?;
        let omega = field.prime_power_root_of_unity(p, n)?;

        // (level, half, coset mod p^level)
        let mut jobs: Vec<(u32, Option<u8>, Vec<u64>)> = vec![(0, None, vec![0])];
        for lvl in &splitting.levels {
            for c in cosets_of_two(lvl.modulus) {
                if arith::gcd(c[0], lvl.modulus) != 1 {
                    continue;
                }
                let half = if lvl.s0.binary_search(&c[0]).is_ok() { 0 } else { 1 };
                jobs.push((lvl.m, Some(half), c));
            }
        }
        let polys = exec.map(jobs.len(), |i| {
            let (level, _, coset) = &jobs[i];
            let scale = p.pow(n - level);
            let roots: Vec<BitPoly> = coset
                .iter()
                .map(|&j| field.pow_u64(&omega, (j * scale) % pn))
                .collect();
            gf2::binary_root_product(&field, &roots)
        });
        let mut factors = Vec::with_capacity(jobs.len());
        let mut counters = std::collections::BTreeMap::new();
        for ((level, half, coset), poly) in jobs.into_iter().zip(polys) {
            let poly = poly.ok_or_else(|| {
                DuadicError::ConstructionInconsistency(format!("factor for coset {coset:?} is not binary"))
            })?;
            let index = counters.entry((level, half)).or_insert(0usize);
            *index += 1;
            factors.push(BinaryCyclotomicFactor {
                level,
                half,
                index: *index,
                degree: coset.len(),
                coset,
                poly,
            });
        }
        Ok(Self { splitting, field, omega, factors })
    }

    pub fn p(&self) -> u64 {
        self.splitting.p
    }

    pub fn n(&self) -> u32 {
        self.splitting.n
    }

    pub fn pn(&self) -> u64 {
        self.splitting.pn()
    }

    /// `t_m = ord_{p^m}(2)`.
    pub fn t(&self, m: u32) -> u64 {
        arith::multiplicative_order(2, self.p().pow(m)).expect("p odd")
    }

    /// Factors of `d_{m,which}`, ordered by smallest coset element.
    pub fn level_factors(&self, m: u32, which: u8) -> Vec<&BinaryCyclotomicFactor> {
        self.factors
            .iter()
            .filter(|f| f.level == m && f.half == Some(which))
            .collect()
    }

    /// `d_{m,which}` as the product of its cyclotomic factors.
    pub fn generator(&self, m: u32, which: u8) -> Result<BitPoly, DuadicError> {
        self.splitting.level(m)?;
        Ok(self
            .level_factors(m, which)
            .iter()
            .fold(BitPoly::one(), |acc, f| acc.mul(&f.poly)))
    }

    /// `d_{m,which} = prod_{i in S_{m,which}} (x - ω_m^i)` computed root by
    /// root in `GF(2^T)`, with `ω_m = ω^{p^{n-m}}`.
    pub fn generator_direct(&self, m: u32, which: u8) -> Result<BitPoly, DuadicError> {
        let lvl = self.splitting.level(m)?;
        let set = if which == 0 { &lvl.s0 } else { &lvl.s1 };
        let omega_m = self.field.pow_u64(&self.omega, self.p().pow(self.n() - m));
        let roots: Vec<BitPoly> = set.iter().map(|&i| self.field.pow_u64(&omega_m, i)).collect();
        gf2::binary_root_product(&self.field, &roots).ok_or_else(|| {
            DuadicError::ConstructionInconsistency(format!("d_{m}{which} is not binary"))
        })
    }

    /// `(x - 1) prod_m d_{m0} prod_m d_{m1}`.
    pub fn factorization_product(&self) -> BitPoly {
        self.factors.iter().fold(BitPoly::one(), |acc, f| acc.mul(&f.poly))
    }

    /// Multiplicative order of a root `ω_m^j` of the given factor.
    pub fn factor_root_order(&self, f: &BinaryCyclotomicFactor) -> u64 {
        let modulus = self.p().pow(f.level);
        modulus / arith::gcd(f.coset[0], modulus)
    }

    /// Product of the first `u[m-1]` factors of `d_{m0}` over all levels.
    pub fn prefix_product(&self, u: &[usize]) -> Result<BitPoly, DuadicError> {
        if u.len() != self.n() as usize {
            return Err(DuadicError::InvalidMultiplicities(vec![format!(
                "expected {} multiplicities, got {}",
                self.n(),
                u.len()
            )]));
        }
        let mut acc = BitPoly::one();
        for (m, &count) in (1..=self.n()).zip(u) {
            let fs = self.level_factors(m, 0);
            if count > fs.len() {
                return Err(DuadicError::InvalidMultiplicities(vec![format!(
                    "level {m} has only {} factors, asked for {count}",
                    fs.len()
                )]));
            }
            for f in &fs[..count] {
                acc = acc.mul(&f.poly);
            }
        }
        Ok(acc)
    }
}

pub fn binary_cyclotomic_factors(p: u64, n: u32, exec: Exec) -> Result<Vec<BinaryCyclotomicFactor>, DuadicError> {
    Ok(DuadicTower::new(p, n, exec)?.factors)
}

/// `d_{m,which}`, computed from roots and checked against the product of
/// cyclotomic factors.
pub fn duadic_generator(p: u64, n: u32, m: u32, which: u8, exec: Exec) -> Result<BitPoly, DuadicError> {
    let tower = DuadicTower::new(p, n, exec)?;
    let direct = tower.generator_direct(m, which)?;
    if direct != tower.generator(m, which)? {
        return Err(DuadicError::ConstructionInconsistency(format!(
            "d_{m}{which} differs from the product of its factors"
        )));
    }
    Ok(direct)
}

/// Smallest `N` dividing `multiple` with `x^N ≡ 1 (mod f)`.
pub fn poly_order(f: &BitPoly, multiple: u64) -> Result<u64, DuadicError> {
    if !f.coeff(0) {
        return Err(DuadicError::ZeroConstantTerm);
    }
    let one = BitPoly::one().rem(f)?;
    let x = BitPoly::x();
    let is_one = |e: u64| -> Result<bool, DuadicError> { Ok(x.pow_mod_u64(e, f)? == one) };
    if multiple == 0 || !is_one(multiple)? {
        return Err(DuadicError::NotAMultiple(multiple));
    }
    let mut order = multiple;
    for (r, _) in arith::factorize(multiple) {
        while order.is_multiple_of(r) && is_one(order / r)? {
            order /= r;
        }
    }
    Ok(order)
}

/// `ord(f)` by iterating `x^a mod f` for at most `limit` steps.
pub fn poly_order_search(f: &BitPoly, limit: u64) -> Result<u64, DuadicError> {
    if !f.coeff(0) {
        return Err(DuadicError::ZeroConstantTerm);
    }
    let one = BitPoly::one().rem(f)?;
    let x = BitPoly::x().rem(f)?;
    let mut y = x.clone();
    for a in 1..=limit {
        if y == one {
            return Ok(a);
        }
        y = y.mul(&x).rem(f)?;
    }
    Err(DuadicError::OrderNotFound(limit))
}

/// `lcm` of the orders of pairwise coprime factors.
pub fn poly_order_lcm(factors: &[&BitPoly], multiple: u64) -> Result<u64, DuadicError> {
    factors
        .iter()
        .try_fold(1u64, |acc, f| Ok(arith::lcm(acc, poly_order(f, multiple)?)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DistanceBound {
    Exact(u64),
    AtLeast(u64),
    Unevaluated,
}

impl DistanceBound {
    /// `⌊(d - 1)/2⌋` correctable errors, when a distance is known.
    pub fn correctable(self) -> Option<u64> {
        match self {
            DistanceBound::Exact(d) | DistanceBound::AtLeast(d) => Some(d.saturating_sub(1) / 2),
            DistanceBound::Unevaluated => None,
        }
    }
}

/// `(a_l, a_r)-[[n + a_l + a_r, 2k1 - n]]_2` for all `a_l + a_r < tolerance_cap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyncParams {
    pub n_base: u64,
    pub k1: u64,
    pub k2: u64,
    pub k: u64,
    /// `ord(h/g)`.
    pub tolerance_cap: u64,
    pub f_degree: usize,
    pub d1: DistanceBound,
    pub d2: DistanceBound,
    /// Correctable phase errors `⌊(d1 - 1)/2⌋`.
    pub phase_bound: Option<u64>,
    /// Correctable bit errors `⌊(d2 - 1)/2⌋`.
    pub bit_bound: Option<u64>,
}

impl SyncParams {
    pub fn admits(&self, a_l: u64, a_r: u64) -> bool {
        a_l + a_r < self.tolerance_cap
    }

    pub fn n_total(&self, a_l: u64, a_r: u64) -> u64 {
        self.n_base + a_l + a_r
    }
}

/// Binary cyclic code generated by `g`: rows `x^i g` for `i < n - deg g`.
pub fn cyclic_code(n: usize, g: &BitPoly) -> LinearCode {
    let f2 = make_field(2, 1).unwrap();
    let d = g.degree().unwrap_or(n);
    let coeffs = g.coeffs();
    let rows = (0..n.saturating_sub(d))
        .map(|i| {
            let mut r = vec![0u32; n];
            for (j, &c) in coeffs.iter().enumerate() {
                r[i + j] = c as u32;
            }
            r
        })
        .collect();
    LinearCode::from_raw_rows(&f2, n, rows)
}

/// `<h>^⊥ ⊆ <h>` for `h | x^n - 1`: `h` divides the reciprocal of
/// `(x^n - 1)/h`.
pub fn dual_containing_by_poly(n: usize, h: &BitPoly) -> Result<bool, DuadicError> {
    let (check, r) = BitPoly::x_pow_minus_one(n).div_rem(h)?;
    if !r.is_zero() {
        return Err(DuadicError::NotNested);
    }
    Ok(h.divides(&check.reciprocal()))
}

fn code_distance(code: &LinearCode, budget: u64, exec: Exec) -> DistanceBound {
    if code.k() == 0 {
        return DistanceBound::Unevaluated;
    }
    let fits = code.k() < 64 && (1u64 << code.k()) - 1 <= budget;
    if !fits {
        return DistanceBound::Unevaluated;
    }
    match code.min_distance(budget, exec) {
        Ok(Distance::Exact { d }) => DistanceBound::Exact(d as u64),
        _ => DistanceBound::Unevaluated,
    }
}

/// Parameters for `C = <h>` (dual-containing) inside `D = <g>`, with
/// `f = h/g`. Distances are exact when `2^k - 1 ≤ budget`.
pub fn sync_params_general(
    n_len: usize,
    g: &BitPoly,
    h: &BitPoly,
    budget: u64,
    exec: Exec,
) -> Result<SyncParams, DuadicError> {
    let xn = BitPoly::x_pow_minus_one(n_len);
    if g.is_zero() || !g.divides(h) || !h.divides(&xn) {
        return Err(DuadicError::NotNested);
    }
    let (f, _) = h.div_rem(g)?;
    let c = cyclic_code(n_len, h);
    let by_matrix = c.is_euclidean_dual_containing();
    let by_poly = dual_containing_by_poly(n_len, h)?;
    if by_matrix != by_poly {
        return Err(DuadicError::ConstructionInconsistency(
            "matrix and polynomial dual-containment checks disagree".into(),
        ));
    }
    if !by_matrix {
        return Err(DuadicError::NotDualContaining);
    }
    let k1 = (n_len - h.degree().unwrap()) as u64;
    let k2 = (n_len - g.degree().unwrap()) as u64;
    if c.k() as u64 != k1 {
        return Err(DuadicError::ConstructionInconsistency(format!("rank {} != {k1}", c.k())));
    }
    let k = 2 * k1 as i64 - n_len as i64;
    if k < 0 {
        return Err(DuadicError::NegativeDimension(k));
    }
    let tolerance_cap = poly_order(&f, n_len as u64)?;
    let d1 = code_distance(&c, budget, exec);
    let d2 = code_distance(&cyclic_code(n_len, g), budget, exec);
    Ok(SyncParams {
        n_base: n_len as u64,
        k1,
        k2,
        k: k as u64,
        tolerance_cap,
        f_degree: f.degree().unwrap(),
        d1,
        d2,
        phase_bound: d1.correctable(),
        bit_bound: d2.correctable(),
    })
}

/// Violated conditions among `1 ≤ u_n ≤ N_n`, `0 ≤ u_l ≤ N_l`,
/// `sum_{l<n} u_l ≥ 1`, `v_n < u_n`, `v_l ≤ u_l`, `sum v_l ≥ 1`, where
/// `N_m = p^{m-1}(p-1)/(2 t_m)`.
pub fn multiplicity_violations(tower: &DuadicTower, u: &[usize], v: &[usize]) -> Vec<String> {
    let n = tower.n() as usize;
    let mut out = Vec::new();
    if u.len() != n || v.len() != n {
        out.push(format!("u and v must have {n} entries"));
        return out;
    }
    for m in 1..=n {
        let cap = tower.level_factors(m as u32, 0).len();
        if u[m - 1] > cap {
            out.push(format!("u_{m} = {} exceeds {cap}", u[m - 1]));
        }
        if m == n && u[m - 1] < 1 {
            out.push(format!("u_{m} must be at least 1"));
        }
        if m == n && v[m - 1] >= u[m - 1] {
            out.push(format!("v_{m} = {} must be below u_{m} = {}", v[m - 1], u[m - 1]));
        }
        if m < n && v[m - 1] > u[m - 1] {
            out.push(format!("v_{m} = {} exceeds u_{m} = {}", v[m - 1], u[m - 1]));
        }
    }
    if u[..n - 1].iter().sum::<usize>() < 1 {
        out.push(format!("sum of u_l over l < {n} must be at least 1"));
    }
    if v.iter().sum::<usize>() < 1 {
        out.push("sum of v_l must be at least 1".into());
    }
    out
}

/// Parameters for `h = f_1 = prod_m prod_{j ≤ u_m} h_{mj}` and
/// `g = f_2` (prefix `v`), without enforcing the multiplicity constraints.
/// Returns the parameters and any violated constraints.
pub fn sync_from_multiplicities(
    tower: &DuadicTower,
    u: &[usize],
    v: &[usize],
    budget: u64,
    exec: Exec,
) -> Result<(SyncParams, Vec<String>), DuadicError> {
    let violations = multiplicity_violations(tower, u, v);
    let f1 = tower.prefix_product(u)?;
    let f2 = tower.prefix_product(v)?;
    let params = sync_params_general(tower.pn() as usize, &f2, &f1, budget, exec)?;
    let formula = tower.pn() as i64
        - 2 * (1..=tower.n()).zip(u).map(|(m, &c)| c as i64 * tower.t(m) as i64).sum::<i64>();
    if formula != params.k as i64 {
        return Err(DuadicError::ConstructionInconsistency(format!(
            "k = {} but p^n - 2 sum u_i t_i = {formula}",
            params.k
        )));
    }
    Ok((params, violations))
}

/// As [`sync_from_multiplicities`], rejecting multiplicities that violate
/// any constraint.
pub fn sync_family(
    tower: &DuadicTower,
    u: &[usize],
    v: &[usize],
    budget: u64,
    exec: Exec,
) -> Result<SyncParams, DuadicError> {
    let violations = multiplicity_violations(tower, u, v);
    if !violations.is_empty() {
        return Err(DuadicError::InvalidMultiplicities(violations));
    }
    Ok(sync_from_multiplicities(tower, u, v, budget, exec)?.0)
}

/// Smallest `d` with `d^2 - d + 1 ≥ p^n`, after checking `-S_{n0} = S_{n1}`.
pub fn duadic_distance_bound(p: u64, n: u32) -> Result<u64, DuadicError> {
    let s = duadic_splitting(p, n)?;
    let top = s.level(n)?;
    let mut neg: Vec<u64> = top.s0.iter().map(|&x| top.modulus - x).collect();
    neg.sort_unstable();
    if neg != top.s1 {
        return Err(DuadicError::NotComplementSplitting);
    }
    let pn = s.pn();
    Ok((1u64..).find(|&d| d * d - d + 1 >= pn).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear_code::DEFAULT_BUDGET;

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root_mod_prime_power(31, 2), Ok(3));
        assert_eq!(primitive_root_mod_prime_power(7, 1), Ok(3));
        assert_eq!(primitive_root_mod_prime_power(7, 2), Ok(3));
        assert_eq!(primitive_root_mod_prime_power(2, 3), Err(DuadicError::Unsupported(2)));
        assert_eq!(primitive_root_mod_prime_power(9, 1), Err(DuadicError::NotPrime(9)));
    }

    #[test]
    fn splittings() {
        let s = duadic_splitting(7, 1).unwrap();
        assert_eq!(s.levels[0].s0, vec![1, 2, 4]);
        assert_eq!(s.levels[0].s1, vec![3, 5, 6]);
        let s = duadic_splitting(31, 2).unwrap();
        assert_eq!(s.level(2).unwrap().s0.len(), 465);
        assert_eq!(s.level(1).unwrap().s0.len(), 15);
        assert_eq!(duadic_splitting(5, 1), Err(DuadicError::NotMinusOneMod8(5)));
        assert!(matches!(s.level(3), Err(DuadicError::InvalidLevel { .. })));
    }

    #[test]
    fn factors_7_1() {
        let t = DuadicTower::new(7, 1, Exec::Sequential).unwrap();
        let polys: BTreeSet<u64> = t.factors.iter().map(|f| f.poly.words()[0]).collect();
        assert_eq!(polys, BTreeSet::from([0b11, 0b1011, 0b1101]));
        assert_eq!(t.factorization_product(), BitPoly::x_pow_minus_one(7));
        let d10 = duadic_generator(7, 1, 1, 0, Exec::Sequential).unwrap();
        assert_eq!(d10, t.level_factors(1, 0)[0].poly);
        assert_eq!(poly_order(&d10, 7), Ok(7));
        assert_eq!(poly_order_search(&d10, 100), Ok(7));
        assert_eq!(poly_order(&BitPoly::from_u64(0b11), 7), Ok(1));
        assert_eq!(poly_order(&BitPoly::from_u64(0b110), 7), Err(DuadicError::ZeroConstantTerm));
    }

    #[test]
    fn factors_7_2() {
        let t = DuadicTower::new(7, 2, Exec::default()).unwrap();
        let top: Vec<_> = t.factors.iter().filter(|f| f.level == 2).collect();
        assert_eq!(top.len(), 2);
        assert!(top.iter().all(|f| f.degree == 21 && f.poly.degree() == Some(21)));
        assert!(t.factors.iter().all(|f| f.poly.is_irreducible()));
        assert_eq!(t.factorization_product(), BitPoly::x_pow_minus_one(49));
        let d20 = t.generator(2, 0).unwrap();
        assert_eq!(d20, t.generator_direct(2, 0).unwrap());
        assert_eq!(poly_order(&d20, 49), Ok(49));
    }

    #[test]
    fn distance_bounds() {
        assert_eq!(duadic_distance_bound(7, 1), Ok(3));
        assert_eq!(duadic_distance_bound(7, 2), Ok(8));
        assert_eq!(duadic_distance_bound(31, 2), Ok(32));
    }

    #[test]
    fn sync_7_1() {
        let t = DuadicTower::new(7, 1, Exec::Sequential).unwrap();
        let h = t.generator(1, 0).unwrap();
        let s = sync_params_general(7, &BitPoly::one(), &h, DEFAULT_BUDGET, Exec::Sequential).unwrap();
        assert_eq!((s.k1, s.k, s.tolerance_cap), (4, 1, 7));
        assert_eq!(s.d1, DistanceBound::Exact(3));
        assert_eq!(s.d2, DistanceBound::Exact(1));
        assert_eq!((s.phase_bound, s.bit_bound), (Some(1), Some(0)));
        assert!(s.admits(3, 3) && !s.admits(4, 3));

        let same = sync_params_general(7, &h, &h, DEFAULT_BUDGET, Exec::Sequential).unwrap();
        assert_eq!(same.tolerance_cap, 1);
        assert!(same.admits(0, 0) && !same.admits(1, 0));

        let other = t.generator(1, 1).unwrap();
        assert_eq!(
            sync_params_general(7, &other, &h, DEFAULT_BUDGET, Exec::Sequential).unwrap_err(),
            DuadicError::NotNested
        );
        // <x - 1> is the even-weight code, not dual-containing.
        assert_eq!(
            sync_params_general(7, &BitPoly::one(), &BitPoly::from_u64(0b11), DEFAULT_BUDGET, Exec::Sequential)
                .unwrap_err(),
            DuadicError::NotDualContaining
        );
    }

    #[test]
    fn multiplicity_checks() {
        let t = DuadicTower::new(7, 2, Exec::Sequential).unwrap();
        assert!(multiplicity_violations(&t, &[1, 1], &[1, 0]).is_empty());
        assert_eq!(multiplicity_violations(&t, &[0, 1], &[0, 0]).len(), 2);
        assert!(matches!(
            sync_family(&t, &[0, 1], &[0, 0], 0, Exec::Sequential),
            Err(DuadicError::InvalidMultiplicities(_))
        ));
        let s = sync_family(&t, &[1, 1], &[1, 0], 0, Exec::Sequential).unwrap();
        assert_eq!(s.k, 49 - 2 * (3 + 21));
        assert_eq!(s.tolerance_cap, 49);
        assert_eq!(s.d1, DistanceBound::Unevaluated);
    }
}
