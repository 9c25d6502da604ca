//! Quantum code parameters: the Hermitian construction, propagation rules
//! and the closed-form parameters of the evaluation-code family.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::cyclotomic::{self, SelectionS};
use crate::exec::Exec;
use crate::poly_code::{self, PolyCodeError, TowerContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error("2k - n = {0} is negative")]
    NegativeDimension(i64),
    #[error("selection does not give a Hermitian dual-containing code")]
    NotDualContaining,
    #[error("{rule:?} cannot be applied to [[{n},{k},{d}]]")]
    InvalidPropagation { rule: Rule, n: u64, k: u64, d: u64 },
    #[error("q = {0} is not an even power of a prime")]
    NotASquare(u64),
    #[error("invalid parameters [[{n},{k},{d}]]")]
    InvalidParams { n: u64, k: u64, d: u64 },
    #[error("formula and matrix disagree: {0}")]
    CrossCheck(String),
    #[error(transparent)]
    PolyCode(#[from] PolyCodeError),
}

impl From<cyclotomic::CyclotomicError> for QuantumError {
    fn from(e: cyclotomic::CyclotomicError) -> Self {
        QuantumError::PolyCode(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Subcode,
    Lengthen,
    Puncture,
    DistanceDrop,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Provenance {
    Context { q: u64, m: u64 },
    Cutoff { c: u64 },
    Hermitian { n: u64, k: u64, d: u64, q: u64 },
    Propagate { rule: Rule, steps: u32 },
}

/// `[[n, k, ≥d]]` over an alphabet of size `base`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumParams {
    pub base: u64,
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub provenance: Vec<Provenance>,
}

impl QuantumParams {
    pub fn new(base: u64, n: u64, k: u64, d: u64) -> Result<Self, QuantumError> {
        if n == 0 || d == 0 || k > n {
            return Err(QuantumError::InvalidParams { n, k, d });
        }
        Ok(Self { base, n, k, d, provenance: Vec::new() })
    }

    pub fn triple(&self) -> (u64, u64, u64) {
        (self.n, self.k, self.d)
    }

    pub fn cutoff(&self) -> Option<u64> {
        self.provenance.iter().find_map(|p| match p {
            Provenance::Cutoff { c } => Some(*c),
            _ => None,
        })
    }
}

impl fmt::Display for QuantumParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},>={}]]_{}", self.n, self.k, self.d, self.base)
    }
}

/// A Hermitian dual-containing `[n, k, d]` code over `F_q`, `q = l^2`, gives
/// `[[n, 2k - n, ≥d]]_l`. Dual containment is the caller's responsibility.
pub fn hermitian_construction(n: u64, k: u64, d: u64, q: u64) -> Result<QuantumParams, QuantumError> {
    let l = cyclotomic::hermitian_root(q).ok_or(QuantumError::NotASquare(q))?;
    let qk = 2 * k as i64 - n as i64;
    if qk < 0 {
        return Err(QuantumError::NegativeDimension(qk));
    }
    let mut qp = QuantumParams::new(l, n, qk as u64, d)?;
    qp.provenance.push(Provenance::Hermitian { n, k, d, q });
    Ok(qp)
}

/// Parameters from the closed-form formulas
/// `n = (m - g)/p`, `k = (2|S| - m + g)/p`, `d ≥ ⌈(m + 1 - c)/p⌉`,
/// with `g = gcd(m, q^s - 1)`.
pub fn main_theorem_params(ctx: &TowerContext, sel: &SelectionS) -> Result<QuantumParams, QuantumError> {
    let l = cyclotomic::hermitian_root(ctx.q).ok_or(QuantumError::NotASquare(ctx.q))?;
    if !cyclotomic::hermitian_condition(&ctx.family, sel, l)? {
        return Err(QuantumError::NotDualContaining);
    }
    let c = sel.c().ok_or(PolyCodeError::EmptySelection)?;
    let p = ctx.p as i64;
    let num = 2 * sel.len() as i64 - ctx.m as i64 + ctx.g as i64;
    debug_assert_eq!(num.rem_euclid(p), 0);
    if num < 0 {
        return Err(QuantumError::NegativeDimension(num / p));
    }
    let n = (ctx.m - ctx.g) / ctx.p;
    let d = (ctx.m + 1 - c).div_ceil(ctx.p);
    let mut qp = QuantumParams::new(l, n, (num / p) as u64, d)?;
    qp.provenance.push(Provenance::Context { q: ctx.q, m: ctx.m });
    qp.provenance.push(Provenance::Cutoff { c });
    Ok(qp)
}

/// Build `C(S)`, check Hermitian dual containment on the generator matrix
/// and compare `hermitian_construction(n, rank, bound)` with the formulas.
pub fn cross_check(ctx: &TowerContext, sel: &SelectionS, exec: Exec) -> Result<QuantumParams, QuantumError> {
    let formula = main_theorem_params(ctx, sel)?;
    let code = poly_code::build_code(ctx, sel, exec)?;
    if !code.is_hermitian_dual_containing().map_err(PolyCodeError::from)? {
        return Err(QuantumError::CrossCheck(format!(
            "C(S) with max(S) = {:?} is not Hermitian dual-containing",
            sel.c()
        )));
    }
    let bound = poly_code::distance_bound(ctx, sel)?;
    let matrix = hermitian_construction(code.n() as u64, code.k() as u64, bound, ctx.q)?;
    if matrix.triple() != formula.triple() || matrix.base != formula.base {
        return Err(QuantumError::CrossCheck(format!("matrix {matrix} vs formula {formula}")));
    }
    Ok(formula)
}

/// Apply `rule` `steps` times.
pub fn propagate(qp: &QuantumParams, rule: Rule, steps: u32) -> Result<QuantumParams, QuantumError> {
    let mut out = qp.clone();
    for _ in 0..steps {
        let bad = QuantumError::InvalidPropagation { rule, n: out.n, k: out.k, d: out.d };
        match rule {
            Rule::Subcode => out.k = out.k.checked_sub(1).ok_or(bad)?,
            Rule::Lengthen => out.n += 1,
            Rule::Puncture => {
                if out.n < 2 || out.d < 2 || out.k > out.n - 1 {
                    return Err(bad);
                }
                out.n -= 1;
                out.d -= 1;
            }
            Rule::DistanceDrop => {
                if out.d < 2 {
                    return Err(bad);
                }
                out.d -= 1;
            }
        }
    }
    out.provenance.push(Provenance::Propagate { rule, steps });
    Ok(out)
}

/// Every cutoff `c ∈ A`, ascending, whose selection satisfies the Hermitian
/// condition with `k ≥ 0`.
pub fn table_search(q: u64, m: u64, exec: Exec) -> Result<Vec<QuantumParams>, QuantumError> {
    let ctx = poly_code::make_context(q, m)?;
    search_context(&ctx, exec)
}

pub fn search_context(ctx: &TowerContext, exec: Exec) -> Result<Vec<QuantumParams>, QuantumError> {
    let reps = &ctx.family.reps;
    let results = exec.map(reps.len(), |i| -> Result<Option<QuantumParams>, QuantumError> {
        let sel = ctx.selection_from_cutoff(reps[i])?;
        match main_theorem_params(ctx, &sel) {
            Ok(qp) => Ok(Some(qp)),
            Err(QuantumError::NotDualContaining | QuantumError::NegativeDimension(_)) => Ok(None),
            Err(e) => Err(e),
        }
    });
    let mut rows: Vec<QuantumParams> = results.into_iter().filter_map(Result::transpose).collect::<Result<_, _>>()?;
    rows.sort_by_key(|r| r.cutoff());
    Ok(rows)
}

/// Rows that are best for their distance bound: `d ≥ 2` and maximal `k`
/// among rows with the same bound (smallest cutoff on ties).
pub fn pareto_rows(rows: &[QuantumParams]) -> Vec<QuantumParams> {
    let mut best: BTreeMap<u64, &QuantumParams> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.d >= 2) {
        let e = best.entry(r.d).or_insert(r);
        if r.k > e.k || (r.k == e.k && r.cutoff() < e.cutoff()) {
            *e = r;
        }
    }
    let mut out: Vec<QuantumParams> = best.into_values().cloned().collect();
    out.sort_by_key(|r| r.cutoff());
    out
}

/// `gcd(m, q^s - 1)` and `n` from the formula, independent of a context.
pub fn formula_length(q: u64, m: u64) -> Option<u64> {
    let (p, _) = arith::prime_power(q)?;
    let t = arith::multiplicative_order(q, m)?;
    let qs = q.checked_pow((t / p) as u32)?;
    Some((m - arith::gcd(m, qs - 1)) / p)
}
