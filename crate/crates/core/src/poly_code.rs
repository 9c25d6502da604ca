//! Evaluation codes `C(S)` built from trace-like polynomials
//! `e_{a,k}(x) = sum_j γ^{q^{j+k}} x^{q^j a}` over `F_{q^t}`, evaluated at
//! representatives of the non-`F_{q^s}` `m`-th roots of unity.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::cyclotomic::{self, CosetFamily, CyclotomicError, SelectionS};
use crate::exec::Exec;
use crate::field::{self, FieldElement, FieldError, FieldSpec, SubfieldEmbedding};
use crate::linear_code::{CodeError, LinearCode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyCodeError {
    #[error("{0} is not a prime power")]
    InvalidBase(u64),
    #[error("ord_{m}({q}) = {t} is not a positive power of the characteristic")]
    UnsupportedOrder { q: u64, m: u64, t: u64 },
    #[error("{0} is not in the representative set A")]
    InvalidRepresentative(u64),
    #[error("index {k} out of range 0..{s}")]
    InvalidIndex { k: u32, s: u32 },
    #[error("selection is empty")]
    EmptySelection,
    #[error("selection belongs to q = {q}, m = {m}")]
    SelectionMismatch { q: u64, m: u64 },
    #[error("q = {0} is not a perfect square")]
    NotASquare(u64),
    #[error("internal consistency check failed: {0}")]
    ConstructionInconsistency(String),
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// The `(q, m)` setting: `t = ord_m(q) = p^b`, `s = t/p`, the ambient
/// field `F_{q^t}`, an element `ω` of order `m` and a normal element `γ`
/// of `F_{q^s}/F_q`.
#[derive(Clone)]
pub struct TowerContext {
    pub q: u64,
    pub p: u64,
    /// `q = p^a`.
    pub a: u32,
    pub m: u64,
    pub t: u64,
    pub s: u64,
    pub b: u32,
    /// `gcd(m, q^s - 1)`.
    pub g: u64,
    pub n: usize,
    pub ambient: FieldSpec,
    /// `F_q` as a standalone field; codes live here.
    pub base: FieldSpec,
    pub omega: FieldElement,
    pub gamma: FieldElement,
    pub family: CosetFamily,
    embedding: SubfieldEmbedding,
    omega_powers: Vec<u32>,
    /// Exponents `e_i` with `β_i = ω^{e_i}`.
    point_exponents: Vec<u64>,
}

impl std::fmt::Debug for TowerContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TowerContext")
            .field("q", &self.q)
            .field("m", &self.m)
            .field("t", &self.t)
            .field("s", &self.s)
            .field("n", &self.n)
            .finish()
    }
}

pub fn make_context(q: u64, m: u64) -> Result<TowerContext, PolyCodeError> {
    TowerContext::new(q, m)
}

impl TowerContext {
    pub fn new(q: u64, m: u64) -> Result<Self, PolyCodeError> {
        let (p, a) = arith::prime_power(q).ok_or(PolyCodeError::InvalidBase(q))?;
        let t = cyclotomic::ord_mod(q, m)?;
        let b = match arith::log_exact(p, t) {
            Some(b) if b >= 1 => b,
            _ => return Err(PolyCodeError::UnsupportedOrder { q, m, t }),
        };
        let s = t / p;
        let ambient = FieldSpec::new(p, a * t as u32)?;
        let base = FieldSpec::new(p, a)?;
        let embedding = SubfieldEmbedding::new(&ambient, &base)?;
        let omega = ambient
            .root_of_unity(m)
            .expect("m divides q^t - 1 since ord_m(q) = t");
        let gamma = field::find_normal_element(q, s as u32, &ambient)?;
        let qs = q.checked_pow(s as u32).ok_or(PolyCodeError::InvalidBase(q))?;
        let g = arith::gcd(m, qs - 1);
        let n = ((m - g) / p) as usize;
        let family = CosetFamily::new(q, m)?;
        let omega_powers: Vec<u32> = (0..m).map(|e| ambient.pow_raw(omega.value(), e)).collect();

        // Orbits of Z_m \ (m/g)Z under multiplication by q^s.
        let step = m / g;
        let qs_mod = qs % m;
        let mut seen = vec![false; m as usize];
        let mut point_exponents = Vec::with_capacity(n);
        for e in 0..m {
            if e % step == 0 || seen[e as usize] {
                continue;
            }
            let mut x = e;
            loop {
                seen[x as usize] = true;
                x = arith::mul_mod(x, qs_mod, m);
                if x == e {
                    break;
                }
            }
            point_exponents.push(e);
        }
        if point_exponents.len() != n {
            return Err(PolyCodeError::ConstructionInconsistency(format!(
                "{} evaluation points, expected {n}",
                point_exponents.len()
            )));
        }
        Ok(Self {
            q,
            p,
            a,
            m,
            t,
            s,
            b,
            g,
            n,
            ambient,
            base,
            omega,
            gamma,
            family,
            embedding,
            omega_powers,
            point_exponents,
        })
    }

    /// Exponents `e_i` of the evaluation points `β_i = ω^{e_i}`, ascending.
    pub fn point_exponents(&self) -> &[u64] {
        &self.point_exponents
    }

    pub fn embedding(&self) -> &SubfieldEmbedding {
        &self.embedding
    }

    /// `q`-power Frobenius exponent over `F_p`.
    fn q_frob(&self, x: u32, times: u64) -> u32 {
        let j = (self.a as u64 * times) % self.ambient.degree() as u64;
        self.ambient.frobenius_raw(x, j as u32)
    }

    pub fn selection_from_cutoff(&self, c: u64) -> Result<SelectionS, PolyCodeError> {
        Ok(cyclotomic::selection_from_cutoff(&self.family, c)?)
    }

    fn check_selection(&self, sel: &SelectionS) -> Result<(), PolyCodeError> {
        if sel.q != self.q || sel.m != self.m {
            return Err(PolyCodeError::SelectionMismatch { q: sel.q, m: sel.m });
        }
        Ok(())
    }
}

/// The evaluation points `β_1, ..., β_n`.
pub fn evaluation_points(ctx: &TowerContext) -> Vec<FieldElement> {
    ctx.point_exponents
        .iter()
        .map(|&e| ctx.ambient.wrap(ctx.omega_powers[e as usize]))
        .collect()
}

/// `e_{a,k}` as `(coefficient, exponent mod m)` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPolynomial {
    pub a: u64,
    pub k: u32,
    pub terms: Vec<(FieldElement, u64)>,
}

impl EvalPolynomial {
    pub fn degree(&self) -> u64 {
        self.terms.iter().map(|&(_, e)| e).max().unwrap_or(0)
    }

    pub fn eval(&self, field: &FieldSpec, x: FieldElement) -> FieldElement {
        self.terms.iter().fold(field.zero(), |acc, &(c, e)| {
            field.add(acc, field.mul(c, field.pow(x, e)))
        })
    }
}

pub fn build_eval_poly(ctx: &TowerContext, a: u64, k: u32) -> Result<EvalPolynomial, PolyCodeError> {
    if !ctx.family.is_rep(a) {
        return Err(PolyCodeError::InvalidRepresentative(a));
    }
    if k as u64 >= ctx.s {
        return Err(PolyCodeError::InvalidIndex { k, s: ctx.s as u32 });
    }
    let mut exponent = a;
    let terms: Vec<(FieldElement, u64)> = (0..ctx.t)
        .map(|j| {
            let coeff = ctx.ambient.wrap(ctx.q_frob(ctx.gamma.value(), j + k as u64));
            let term = (coeff, exponent);
            exponent = arith::mul_mod(exponent, ctx.q, ctx.m);
            term
        })
        .collect();
    let poly = EvalPolynomial { a, k, terms };
    if poly.degree() != a {
        return Err(PolyCodeError::ConstructionInconsistency(format!(
            "e_({a},{k}) has reduced degree {} instead of {a}",
            poly.degree()
        )));
    }
    Ok(poly)
}

/// Values `e_{a,k}(β_i)` in the ambient field, via the table of `ω` powers.
fn evaluate_at_points(ctx: &TowerContext, poly: &EvalPolynomial) -> Vec<u32> {
    let f = &ctx.ambient;
    ctx.point_exponents
        .iter()
        .map(|&e| {
            poly.terms.iter().fold(0, |acc, &(c, exp)| {
                let x = ctx.omega_powers[arith::mul_mod(e, exp, ctx.m) as usize];
                f.add_raw(acc, f.mul_raw(c.value(), x))
            })
        })
        .collect()
}

/// Generator rows `(e_{a,k}(β_1), ..., e_{a,k}(β_n))` over `F_q`, ascending
/// in `(a, k)`. Every value is checked to be fixed by `x ↦ x^q`.
pub fn evaluation_matrix(
    ctx: &TowerContext,
    sel: &SelectionS,
    exec: Exec,
) -> Result<Vec<Vec<u32>>, PolyCodeError> {
    ctx.check_selection(sel)?;
    let pairs: Vec<(u64, u32)> = sel
        .reps
        .iter()
        .flat_map(|&a| (0..ctx.s as u32).map(move |k| (a, k)))
        .collect();
    let rows = exec.map(pairs.len(), |i| -> Result<Vec<u32>, PolyCodeError> {
        let (a, k) = pairs[i];
        let poly = build_eval_poly(ctx, a, k)?;
        evaluate_at_points(ctx, &poly)
            .into_iter()
            .map(|y| {
                if ctx.q_frob(y, 1) != y {
                    return Err(PolyCodeError::ConstructionInconsistency(format!(
                        "e_({a},{k}) takes a value outside F_q"
                    )));
                }
                ctx.embedding.restrict_raw(y).ok_or_else(|| {
                    PolyCodeError::ConstructionInconsistency("value not in embedded F_q".into())
                })
            })
            .collect()
    });
    rows.into_iter().collect()
}

/// `C(S)` over `F_q`, checked to have dimension `|S|/p`.
pub fn build_code(ctx: &TowerContext, sel: &SelectionS, exec: Exec) -> Result<LinearCode, PolyCodeError> {
    let rows = evaluation_matrix(ctx, sel, exec)?;
    let code = LinearCode::from_raw_rows(&ctx.base, ctx.n, rows);
    let expected = sel.len() / ctx.p as usize;
    if code.k() != expected {
        return Err(PolyCodeError::ConstructionInconsistency(format!(
            "rank {} but |S|/p = {expected}",
            code.k()
        )));
    }
    Ok(code)
}

/// `⌈(m + 1 - c)/p⌉` with `c = max(S)`.
pub fn distance_bound(ctx: &TowerContext, sel: &SelectionS) -> Result<u64, PolyCodeError> {
    ctx.check_selection(sel)?;
    let c = sel.c().ok_or(PolyCodeError::EmptySelection)?;
    Ok((ctx.m + 1 - c).div_ceil(ctx.p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DualMode {
    Euclidean,
    Hermitian,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub q: u64,
    pub m: u64,
    pub mode: DualMode,
    pub cutoff: Option<u64>,
    pub n: usize,
    pub dim_code: usize,
    pub dim_dual: usize,
    /// The predicted dual's set `R`.
    pub r_set: Vec<u64>,
    pub dim_predicted: usize,
    pub row_spaces_equal: bool,
    pub gram_zero: bool,
    pub pass: bool,
}

/// The set `R` with `C(S)^⊥ = C(R)` in the given mode.
pub fn dual_selection(
    ctx: &TowerContext,
    sel: &SelectionS,
    mode: DualMode,
) -> Result<SelectionS, PolyCodeError> {
    ctx.check_selection(sel)?;
    let scaled = match mode {
        DualMode::Euclidean => sel.members.clone(),
        DualMode::Hermitian => {
            let l = cyclotomic::hermitian_root(ctx.q).ok_or(PolyCodeError::NotASquare(ctx.q))?;
            cyclotomic::scale_set(&sel.members, l, ctx.m)?
        }
    };
    let excluded: BTreeSet<u64> = cyclotomic::negate_set(&scaled, ctx.m).into_iter().collect();
    let reps: Vec<u64> = ctx
        .family
        .reps
        .iter()
        .copied()
        .filter(|a| !excluded.contains(a))
        .collect();
    Ok(SelectionS::from_reps(&ctx.family, &reps)?)
}

/// Compare the matrix-level dual of `C(S)` with the predicted `C(R)`.
pub fn verify_duality(
    ctx: &TowerContext,
    sel: &SelectionS,
    mode: DualMode,
    exec: Exec,
) -> Result<DualityReport, PolyCodeError> {
    let r = dual_selection(ctx, sel, mode)?;
    let code = build_code(ctx, sel, exec)?;
    let predicted = build_code(ctx, &r, exec)?;
    let (dual, hermitian) = match mode {
        DualMode::Euclidean => (code.euclidean_dual(), false),
        DualMode::Hermitian => (code.hermitian_dual()?, true),
    };
    let row_spaces_equal = dual == predicted;
    let gram_zero = predicted.gram_is_zero(&code, hermitian)?;
    Ok(DualityReport {
        q: ctx.q,
        m: ctx.m,
        mode,
        cutoff: sel.c(),
        n: ctx.n,
        dim_code: code.k(),
        dim_dual: dual.k(),
        r_set: r.members.clone(),
        dim_predicted: predicted.k(),
        row_spaces_equal,
        gram_zero,
        pass: row_spaces_equal && gram_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear_code::{Distance, DEFAULT_BUDGET};

    #[test]
    fn contexts() {
        let c = make_context(4, 15).unwrap();
        assert_eq!((c.t, c.s, c.n), (2, 1, 6));
        assert_eq!(c.gamma, c.ambient.one());
        let c = make_context(4, 255).unwrap();
        assert_eq!((c.t, c.s, c.n), (4, 2, 120));
        assert!(c.ambient.in_subfield(c.gamma, 16).unwrap());
        let c = make_context(9, 104).unwrap();
        assert_eq!((c.t, c.s, c.n), (3, 1, 32));
        assert_eq!(c.ambient.element_order(c.omega).unwrap(), 104);
    }

    #[test]
    fn context_errors() {
        assert_eq!(make_context(6, 35).unwrap_err(), PolyCodeError::InvalidBase(6));
        // ord_7(2) = 3 is not a power of 2.
        assert_eq!(
            make_context(2, 7).unwrap_err(),
            PolyCodeError::UnsupportedOrder { q: 2, m: 7, t: 3 }
        );
        assert!(matches!(
            make_context(4, 6).unwrap_err(),
            PolyCodeError::Cyclotomic(CyclotomicError::NotCoprime { .. })
        ));
    }

    #[test]
    fn points_4_15() {
        let c = make_context(4, 15).unwrap();
        // Oracle: orbits of x -> 4x on Z_15 minus multiples of 5.
        let mut seen = BTreeSet::new();
        let mut mins = Vec::new();
        for e in 1..15u64 {
            if e % 5 == 0 || seen.contains(&e) {
                continue;
            }
            let orbit = [e, e * 4 % 15];
            seen.extend(orbit);
            mins.push(*orbit.iter().min().unwrap());
        }
        assert_eq!(c.point_exponents(), mins.as_slice());
        assert_eq!(c.point_exponents(), &[1, 2, 3, 6, 7, 11]);
        for b in evaluation_points(&c) {
            assert!(!c.ambient.in_subfield(b, 4).unwrap());
        }
    }

    #[test]
    fn lemma_properties() {
        for (q, m) in [(4u64, 15u64), (4, 255), (9, 104)] {
            let ctx = make_context(q, m).unwrap();
            let f = &ctx.ambient;
            let qs = q.pow(ctx.s as u32);
            let sub_units: Vec<FieldElement> = (0..m)
                .map(|e| f.pow(ctx.omega, e))
                .filter(|&u| f.in_subfield(u, qs).unwrap())
                .collect();
            for &a in &ctx.family.reps {
                for k in 0..ctx.s as u32 {
                    let e = build_eval_poly(&ctx, a, k).unwrap();
                    assert_eq!(e.degree(), a);
                    assert_eq!(e.terms.len() as u64, ctx.t);
                    for &(c, _) in &e.terms {
                        assert!(f.in_subfield(c, qs).unwrap());
                    }
                    assert!(e.eval(f, f.zero()).is_zero());
                    for &u in &sub_units {
                        assert!(e.eval(f, u).is_zero());
                    }
                    for j in 0..m {
                        let v = e.eval(f, f.pow(ctx.omega, j));
                        assert!(f.in_subfield(v, q).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn s_equals_one_has_unit_coefficients() {
        let ctx = make_context(16, 85).unwrap();
        let e = build_eval_poly(&ctx, ctx.family.reps[0], 0).unwrap();
        assert!(e.terms.iter().all(|&(c, _)| c == ctx.ambient.one()));
        assert_eq!(
            build_eval_poly(&ctx, 0, 0).unwrap_err(),
            PolyCodeError::InvalidRepresentative(0)
        );
        assert_eq!(
            build_eval_poly(&ctx, ctx.family.reps[0], 1).unwrap_err(),
            PolyCodeError::InvalidIndex { k: 1, s: 1 }
        );
    }

    #[test]
    fn code_4_15_cutoff_9() {
        let ctx = make_context(4, 15).unwrap();
        let sel = ctx.selection_from_cutoff(9).unwrap();
        let code = build_code(&ctx, &sel, Exec::Sequential).unwrap();
        assert_eq!((code.n(), code.k()), (6, 3));
        assert_eq!(distance_bound(&ctx, &sel).unwrap(), 4);
        let d = code.min_distance(DEFAULT_BUDGET, Exec::Sequential).unwrap();
        let Distance::Exact { d } = d else { panic!() };
        assert!(d >= 4);
        assert!(code.is_hermitian_dual_containing().unwrap());
    }

    #[test]
    fn empty_selection() {
        let ctx = make_context(4, 15).unwrap();
        let sel = ctx.family.selection(&[]).unwrap();
        assert_eq!(build_code(&ctx, &sel, Exec::Sequential).unwrap().k(), 0);
        assert_eq!(distance_bound(&ctx, &sel).unwrap_err(), PolyCodeError::EmptySelection);
    }

    #[test]
    fn full_matrix_has_rank_n() {
        for (q, m) in [(4u64, 15u64), (4, 255), (9, 104), (16, 85)] {
            let ctx = make_context(q, m).unwrap();
            let all = ctx.family.selection(&ctx.family.reps.clone()).unwrap();
            let code = build_code(&ctx, &all, Exec::default()).unwrap();
            assert_eq!(code.k(), ctx.n);
            assert_eq!(ctx.family.reps.len() as u64 * ctx.s, ctx.n as u64);
        }
    }

    #[test]
    fn duality_4_15() {
        let ctx = make_context(4, 15).unwrap();
        let sel = ctx.selection_from_cutoff(9).unwrap();
        for mode in [DualMode::Euclidean, DualMode::Hermitian] {
            let r = verify_duality(&ctx, &sel, mode, Exec::Sequential).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.dim_code + r.dim_dual, 6);
        }
        let all = ctx.family.selection(&ctx.family.reps.clone()).unwrap();
        for mode in [DualMode::Euclidean, DualMode::Hermitian] {
            let r = verify_duality(&ctx, &all, mode, Exec::Sequential).unwrap();
            assert!(r.pass);
            assert!(r.r_set.is_empty());
            assert_eq!(r.dim_dual, 0);
        }
    }

    #[test]
    fn hermitian_on_non_square_fails() {
        let ctx = make_context(8, 63).unwrap_or_else(|e| panic!("{e}"));
        let sel = ctx.family.selection(&[]).unwrap();
        assert_eq!(
            verify_duality(&ctx, &sel, DualMode::Hermitian, Exec::Sequential).unwrap_err(),
            PolyCodeError::NotASquare(8)
        );
    }
}
