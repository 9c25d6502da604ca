//! Linear codes over `F_q`: generator matrices in canonical RREF, Euclidean
//! and Hermitian duals, containment, cyclic codes from generator
//! polynomials, and minimum-distance enumeration and sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::exec::Exec;
use crate::field::{FieldElement, FieldError, FieldSpec, SubfieldEmbedding};
use crate::matrix;

/// Default cap on the number of projective codewords enumerated.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

const SAMPLE_CHUNK: u64 = 1024;
const FALLBACK_SAMPLES: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("rows have inconsistent lengths")]
    ShapeError,
    #[error("codes or elements come from different fields")]
    FieldMismatch,
    #[error("field of order {0} is not a perfect square")]
    NotASquare(u32),
    #[error("code has dimension 0")]
    EmptyCode,
    #[error("generator polynomial does not divide x^n - 1")]
    NotADivisor,
    #[error("generator polynomial is not monic")]
    NotMonic,
    #[error("length {n} is not coprime to the field size {q}")]
    RepeatedRoots { n: usize, q: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A linear `[n, k]` code, stored as its reduced row-echelon generator.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: FieldSpec,
    n: usize,
    gen: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl std::fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}] code over {:?}", self.n, self.k(), self.field)
    }
}

/// Result of [`LinearCode::min_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distance {
    Exact { d: usize },
    BudgetExceeded { upper_bound: usize },
}

impl LinearCode {
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<FieldElement>]) -> Result<Self, CodeError> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(CodeError::ShapeError);
        }
        if rows.iter().flatten().any(|&x| !field.contains(x)) {
            return Err(CodeError::FieldMismatch);
        }
        let raw = rows
            .iter()
            .map(|r| r.iter().map(|x| x.value()).collect())
            .collect();
        Ok(Self::from_raw_rows(field, n, raw))
    }

    /// Rows as raw encodings; every entry must be `< field.order()`.
    pub fn from_raw_rows(field: &FieldSpec, n: usize, rows: Vec<Vec<u32>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == n));
        let (gen, pivots) = matrix::rref(field, rows);
        Self {
            field: field.clone(),
            n,
            gen,
            pivots,
        }
    }

    pub fn zero(field: &FieldSpec, n: usize) -> Self {
        Self::from_raw_rows(field, n, Vec::new())
    }

    pub fn full(field: &FieldSpec, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
            .collect();
        Self::from_raw_rows(field, n, rows)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.gen.len()
    }

    pub fn generator_raw(&self) -> &[Vec<u32>] {
        &self.gen
    }

    pub fn generator(&self) -> Vec<Vec<FieldElement>> {
        self.gen
            .iter()
            .map(|r| r.iter().map(|&v| self.field.wrap(v)).collect())
            .collect()
    }

    pub fn euclidean_dual(&self) -> LinearCode {
        let mut is_pivot = vec![false; self.n];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let rows = (0..self.n)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u32; self.n];
                v[f] = 1;
                for (row, &pc) in self.gen.iter().zip(&self.pivots) {
                    v[pc] = self.field.neg_raw(row[f]);
                }
                v
            })
            .collect();
        Self::from_raw_rows(&self.field, self.n, rows)
    }

    /// `sqrt(q)` when the field size is a perfect square.
    fn conjugation_exponent(&self) -> Result<u32, CodeError> {
        let d = self.field.degree();
        if !d.is_multiple_of(2) {
            return Err(CodeError::NotASquare(self.field.order()));
        }
        Ok(d / 2)
    }

    /// Entries raised to the `sqrt(q)`-th power.
    pub fn conjugate(&self) -> Result<LinearCode, CodeError> {
        let j = self.conjugation_exponent()?;
        let rows = self
            .gen
            .iter()
            .map(|r| r.iter().map(|&x| self.field.frobenius_raw(x, j)).collect())
            .collect();
        Ok(Self::from_raw_rows(&self.field, self.n, rows))
    }

    pub fn hermitian_dual(&self) -> Result<LinearCode, CodeError> {
        Ok(self.conjugate()?.euclidean_dual())
    }

    fn compatible(&self, other: &LinearCode) -> Result<(), CodeError> {
        if self.field != other.field {
            return Err(CodeError::FieldMismatch);
        }
        if self.n != other.n {
            return Err(CodeError::ShapeError);
        }
        Ok(())
    }

    /// `self ⊆ other`.
    pub fn is_subcode(&self, other: &LinearCode) -> Result<bool, CodeError> {
        self.compatible(other)?;
        Ok(self.gen.iter().all(|row| {
            matrix::reduce(&other.field, &other.gen, &other.pivots, row)
                .iter()
                .all(|&x| x == 0)
        }))
    }

    pub fn contains_word(&self, word: &[u32]) -> bool {
        word.len() == self.n
            && matrix::reduce(&self.field, &self.gen, &self.pivots, word)
                .iter()
                .all(|&x| x == 0)
    }

    /// Generator rows of `self` against those of `other`: all Euclidean
    /// inner products vanish, or with `hermitian` all `sum a_i b_i^{sqrt q}`.
    pub fn gram_is_zero(&self, other: &LinearCode, hermitian: bool) -> Result<bool, CodeError> {
        self.compatible(other)?;
        let j = if hermitian {
            Some(self.conjugation_exponent()?)
        } else {
            None
        };
        let f = &self.field;
        Ok(self.gen.iter().all(|a| {
            other.gen.iter().all(|b| {
                a.iter().zip(b).fold(0, |acc, (&x, &y)| {
                    let y = j.map_or(y, |j| f.frobenius_raw(y, j));
                    f.add_raw(acc, f.mul_raw(x, y))
                }) == 0
            })
        }))
    }

    pub fn is_euclidean_dual_containing(&self) -> bool {
        self.euclidean_dual().is_subcode(self).unwrap()
    }

    pub fn is_hermitian_dual_containing(&self) -> Result<bool, CodeError> {
        Ok(self.hermitian_dual()?.is_subcode(self).unwrap())
    }

    /// Codeword `sum msg[i] * gen[i]`.
    pub fn encode(&self, msg: &[FieldElement]) -> Result<Vec<FieldElement>, CodeError> {
        if msg.len() != self.k() {
            return Err(CodeError::ShapeError);
        }
        if msg.iter().any(|&x| !self.field.contains(x)) {
            return Err(CodeError::FieldMismatch);
        }
        let f = &self.field;
        let mut word = vec![0u32; self.n];
        for (c, row) in msg.iter().zip(&self.gen) {
            for (w, &g) in word.iter_mut().zip(row) {
                *w = f.add_raw(*w, f.mul_raw(c.value(), g));
            }
        }
        Ok(word.into_iter().map(|v| f.wrap(v)).collect())
    }

    fn weight_kernel(&self) -> WeightKernel<'_> {
        WeightKernel::new(self)
    }

    /// Exact minimum distance if the `(q^k - 1)/(q - 1)` projective
    /// codewords fit in `budget`, otherwise a sampled upper bound.
    pub fn min_distance(&self, budget: u64, exec: Exec) -> Result<Distance, CodeError> {
        if self.k() == 0 {
            return Err(CodeError::EmptyCode);
        }
        match projective_count(self.field.order() as u64, self.k() as u32) {
            Some(count) if count <= budget => {
                let d = self.weight_kernel().enumerate_min(exec);
                Ok(Distance::Exact { d })
            }
            _ => {
                let row_min = self
                    .gen
                    .iter()
                    .map(|r| r.iter().filter(|&&x| x != 0).count())
                    .min()
                    .unwrap();
                let sampled = self.sample_weights(budget.min(FALLBACK_SAMPLES), 0, exec)?;
                Ok(Distance::BudgetExceeded {
                    upper_bound: row_min.min(sampled),
                })
            }
        }
    }

    /// Minimum weight over `trials` seeded random nonzero codewords.
    pub fn sample_weights(&self, trials: u64, seed: u64, exec: Exec) -> Result<usize, CodeError> {
        if self.k() == 0 {
            return Err(CodeError::EmptyCode);
        }
        let kernel = self.weight_kernel();
        let chunks = trials.div_ceil(SAMPLE_CHUNK) as usize;
        Ok(exec
            .min(chunks, |c| {
                let start = c as u64 * SAMPLE_CHUNK;
                let count = SAMPLE_CHUNK.min(trials - start);
                kernel.sample_chunk(seed, c as u64, count)
            })
            .unwrap_or(self.n))
    }

    /// Weight of every codeword, one scalar class at a time. Intended for
    /// tiny codes in tests.
    pub fn projective_weights(&self) -> Vec<usize> {
        let kernel = self.weight_kernel();
        let mut out = Vec::new();
        for lead in 0..self.k() {
            kernel.walk(&self.gen[lead], lead + 1, &mut |w| out.push(w));
        }
        out
    }
}

fn projective_count(q: u64, k: u32) -> Option<u64> {
    let total = (q as u128).checked_pow(k)?;
    u64::try_from((total - 1) / (q as u128 - 1)).ok()
}

/// Precomputed `c * gen[i]` for every row and scalar.
struct WeightKernel<'a> {
    code: &'a LinearCode,
    q: usize,
    scaled: Vec<Vec<u32>>,
}

impl<'a> WeightKernel<'a> {
    fn new(code: &'a LinearCode) -> Self {
        let f = &code.field;
        let q = f.order() as usize;
        let scaled = code
            .gen
            .iter()
            .flat_map(|row| {
                (0..q as u32).map(move |c| row.iter().map(|&x| f.mul_raw(c, x)).collect())
            })
            .collect();
        Self { code, q, scaled }
    }

    #[inline]
    fn scaled(&self, row: usize, c: usize) -> &[u32] {
        &self.scaled[row * self.q + c]
    }

    #[inline]
    fn add_into(&self, acc: &mut [u32], v: &[u32]) {
        let f = &self.code.field;
        if f.p() == 2 {
            for (a, &b) in acc.iter_mut().zip(v) {
                *a ^= b;
            }
        } else {
            for (a, &b) in acc.iter_mut().zip(v) {
                *a = f.add_raw(*a, b);
            }
        }
    }

    /// Depth-first walk over `base + sum_{j >= from} c_j gen[j]`.
    fn walk(&self, base: &[u32], from: usize, visit: &mut dyn FnMut(usize)) {
        let k = self.code.k();
        if from == k {
            visit(base.iter().filter(|&&x| x != 0).count());
            return;
        }
        let mut acc = base.to_vec();
        for c in 0..self.q {
            if c > 0 {
                acc.copy_from_slice(base);
                self.add_into(&mut acc, self.scaled(from, c));
            }
            self.walk(&acc, from + 1, visit);
        }
    }

    fn enumerate_min(&self, exec: Exec) -> usize {
        let k = self.code.k();
        // Work items: a leading row plus a fixed prefix of up to `split`
        // further coefficients.
        let mut tasks: Vec<(usize, Vec<usize>)> = Vec::new();
        for lead in 0..k {
            let rest = k - lead - 1;
            let split = rest.min(3);
            let count = self.q.pow(split as u32);
            for idx in 0..count {
                let mut prefix = Vec::with_capacity(split);
                let mut x = idx;
                for _ in 0..split {
                    prefix.push(x % self.q);
                    x /= self.q;
                }
                tasks.push((lead, prefix));
            }
        }
        exec.min(tasks.len(), |i| {
            let (lead, prefix) = &tasks[i];
            let mut base = self.code.gen[*lead].clone();
            for (j, &c) in prefix.iter().enumerate() {
                if c > 0 {
                    self.add_into(&mut base, self.scaled(lead + 1 + j, c));
                }
            }
            let mut best = usize::MAX;
            self.walk(&base, lead + 1 + prefix.len(), &mut |w| best = best.min(w));
            best
        })
        .unwrap()
    }

    fn sample_chunk(&self, seed: u64, stream: u64, count: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let k = self.code.k();
        let mut msg = vec![0usize; k];
        let mut word = vec![0u32; self.code.n];
        let mut best = usize::MAX;
        for _ in 0..count {
            loop {
                for m in msg.iter_mut() {
                    *m = rng.gen_range(0..self.q);
                }
                if msg.iter().any(|&c| c != 0) {
                    break;
                }
            }
            word.fill(0);
            for (row, &c) in msg.iter().enumerate() {
                if c != 0 {
                    self.add_into(&mut word, self.scaled(row, c));
                }
            }
            best = best.min(word.iter().filter(|&&x| x != 0).count());
        }
        best
    }
}

/// JSON form of a generator matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeJson {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub rows: Vec<Vec<u32>>,
}

impl From<&LinearCode> for CodeJson {
    fn from(c: &LinearCode) -> Self {
        CodeJson {
            field: c.field.clone(),
            n: c.n,
            k: c.k(),
            rows: c.gen.clone(),
        }
    }
}

impl TryFrom<CodeJson> for LinearCode {
    type Error = CodeError;

    fn try_from(j: CodeJson) -> Result<Self, CodeError> {
        if j.rows.iter().any(|r| r.len() != j.n) {
            return Err(CodeError::ShapeError);
        }
        if j.rows.iter().flatten().any(|&x| x >= j.field.order()) {
            return Err(CodeError::FieldMismatch);
        }
        Ok(LinearCode::from_raw_rows(&j.field, j.n, j.rows))
    }
}

/// Polynomials over a [`FieldSpec`] on raw encodings, constant term first.
pub(crate) mod fpoly {
    use crate::field::FieldSpec;

    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// Remainder of `a` divided by `b` (nonzero).
    pub fn rem(f: &FieldSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
        let b = trim(b.to_vec());
        let db = b.len() - 1;
        let lead_inv = f.inv_raw(b[db]);
        let mut r = trim(a.to_vec());
        while r.len() > db {
            let top = r.len() - 1;
            let c = f.mul_raw(r[top], lead_inv);
            let shift = top - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = f.sub_raw(r[shift + i], f.mul_raw(c, bi));
            }
            r = trim(r);
        }
        r
    }

    pub fn eval(f: &FieldSpec, a: &[u32], x: u32) -> u32 {
        a.iter()
            .rev()
            .fold(0, |acc, &c| f.add_raw(f.mul_raw(acc, x), c))
    }
}

/// A cyclic code `<g(x)>` of length `n`.
#[derive(Debug, Clone)]
pub struct CyclicCode {
    pub genpoly: Vec<FieldElement>,
    pub defining_set: Vec<u64>,
    code: LinearCode,
}

impl CyclicCode {
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn n(&self) -> usize {
        self.code.n
    }

    pub fn dim(&self) -> usize {
        self.code.k()
    }
}

/// `x^n - 1` over `field`, raw.
fn x_n_minus_one(field: &FieldSpec, n: usize) -> Vec<u32> {
    let mut v = vec![0u32; n + 1];
    v[0] = field.neg_raw(1);
    v[n] = 1;
    v
}

pub fn cyclic_from_genpoly(
    field: &FieldSpec,
    n: usize,
    genpoly: &[FieldElement],
) -> Result<CyclicCode, CodeError> {
    let q = field.order();
    if n == 0 || arith::gcd(n as u64, q as u64) != 1 {
        return Err(CodeError::RepeatedRoots { n, q });
    }
    if genpoly.iter().any(|&x| !field.contains(x)) {
        return Err(CodeError::FieldMismatch);
    }
    let g = fpoly::trim(genpoly.iter().map(|x| x.value()).collect());
    if g.last() != Some(&1) {
        return Err(CodeError::NotMonic);
    }
    if !fpoly::rem(field, &x_n_minus_one(field, n), &g).is_empty() {
        return Err(CodeError::NotADivisor);
    }
    let deg = g.len() - 1;
    let rows = (0..n - deg)
        .map(|i| {
            let mut r = vec![0u32; n];
            r[i..i + g.len()].copy_from_slice(&g);
            r
        })
        .collect();
    let code = LinearCode::from_raw_rows(field, n, rows);

    let t = arith::multiplicative_order(q as u64, n as u64).unwrap() as u32;
    let ambient = FieldSpec::new(field.p() as u64, field.degree() * t)?;
    let emb = SubfieldEmbedding::new(&ambient, field)?;
    let alpha = ambient
        .root_of_unity(n as u64)
        .expect("n divides q^t - 1")
        .value();
    let lifted: Vec<u32> = g.iter().map(|&c| emb.embed_raw(c)).collect();
    let defining_set = (0..n as u64)
        .filter(|&i| fpoly::eval(&ambient, &lifted, ambient.pow_raw(alpha, i)) == 0)
        .collect();
    Ok(CyclicCode {
        genpoly: g.iter().map(|&v| field.wrap(v)).collect(),
        defining_set,
        code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn f2() -> FieldSpec {
        make_field(2, 1).unwrap()
    }

    fn elems(f: &FieldSpec, v: &[u32]) -> Vec<FieldElement> {
        v.iter().map(|&x| f.element(x as u64).unwrap()).collect()
    }

    #[test]
    fn from_rows_basics() {
        let f = make_field(3, 1).unwrap();
        let zero = LinearCode::from_rows(&f, &[elems(&f, &[0, 0, 0])]).unwrap();
        assert_eq!(zero.k(), 0);
        let id = LinearCode::full(&f, 4);
        assert_eq!(id.k(), 4);
        let rows = vec![elems(&f, &[1, 2, 0]), elems(&f, &[0, 1, 1])];
        let mut dup = rows.clone();
        dup.push(elems(&f, &[2, 1, 0]));
        assert_eq!(LinearCode::from_rows(&f, &dup).unwrap().k(), 2);
        let ragged = vec![elems(&f, &[1, 2]), elems(&f, &[1])];
        assert_eq!(LinearCode::from_rows(&f, &ragged).unwrap_err(), CodeError::ShapeError);
    }

    #[test]
    fn duals() {
        let f = make_field(2, 2).unwrap();
        let full = LinearCode::full(&f, 5);
        assert_eq!(full.euclidean_dual().k(), 0);
        assert_eq!(LinearCode::zero(&f, 5).hermitian_dual().unwrap().k(), 5);
        let c = LinearCode::from_rows(&f, &[elems(&f, &[1, 2, 3, 0, 1]), elems(&f, &[0, 1, 1, 2, 3])])
            .unwrap();
        let d = c.euclidean_dual();
        assert_eq!(d.k(), 3);
        assert!(c.gram_is_zero(&d, false).unwrap());
        assert_eq!(d.euclidean_dual(), c);
        let h = c.hermitian_dual().unwrap();
        assert!(c.gram_is_zero(&h, true).unwrap());
        assert_eq!(h.hermitian_dual().unwrap(), c);
        assert_eq!(
            LinearCode::full(&make_field(2, 3).unwrap(), 2).hermitian_dual().unwrap_err(),
            CodeError::NotASquare(8)
        );
    }

    #[test]
    fn subcodes() {
        let f = f2();
        let zero = LinearCode::zero(&f, 4);
        let c = LinearCode::from_rows(&f, &[elems(&f, &[1, 1, 0, 0])]).unwrap();
        assert!(zero.is_subcode(&c).unwrap());
        assert!(c.is_subcode(&c).unwrap());
        assert!(!LinearCode::full(&f, 4).is_subcode(&c).unwrap());
        let other = LinearCode::zero(&f, 5);
        assert_eq!(c.is_subcode(&other).unwrap_err(), CodeError::ShapeError);
        let f3 = LinearCode::zero(&make_field(3, 1).unwrap(), 4);
        assert_eq!(c.is_subcode(&f3).unwrap_err(), CodeError::FieldMismatch);
    }

    #[test]
    fn hamming_7_4() {
        let f = f2();
        let g = elems(&f, &[1, 1, 0, 1]); // 1 + x + x^3
        let c = cyclic_from_genpoly(&f, 7, &g).unwrap();
        assert_eq!(c.dim(), 4);
        assert_eq!(c.defining_set.len(), 3);
        // Either {1,2,4} or {3,5,6} depending on the chosen root of unity.
        assert!(c.defining_set == vec![1, 2, 4] || c.defining_set == vec![3, 5, 6]);
        let d = c.code().min_distance(DEFAULT_BUDGET, Exec::Sequential).unwrap();
        assert_eq!(d, Distance::Exact { d: 3 });
    }

    #[test]
    fn cyclic_edge_cases() {
        let f = f2();
        let one = cyclic_from_genpoly(&f, 5, &elems(&f, &[1])).unwrap();
        assert_eq!(one.dim(), 5);
        assert!(one.defining_set.is_empty());
        let all = cyclic_from_genpoly(&f, 5, &elems(&f, &[1, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(all.dim(), 0);
        assert_eq!(all.defining_set, vec![0, 1, 2, 3, 4]);
        assert_eq!(
            cyclic_from_genpoly(&f, 7, &elems(&f, &[1, 0, 1])).unwrap_err(),
            CodeError::NotADivisor
        );
        assert_eq!(
            cyclic_from_genpoly(&f, 6, &elems(&f, &[1, 1])).unwrap_err(),
            CodeError::RepeatedRoots { n: 6, q: 2 }
        );
    }

    #[test]
    fn repetition_distance() {
        let f = make_field(3, 1).unwrap();
        let c = LinearCode::from_rows(&f, &[elems(&f, &[1; 9])]).unwrap();
        assert_eq!(c.min_distance(10, Exec::Sequential).unwrap(), Distance::Exact { d: 9 });
        assert_eq!(
            LinearCode::zero(&f, 3).min_distance(10, Exec::Sequential).unwrap_err(),
            CodeError::EmptyCode
        );
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let f = make_field(3, 1).unwrap();
        let rows = vec![
            elems(&f, &[1, 0, 0, 0, 1, 2, 1]),
            elems(&f, &[0, 1, 0, 0, 2, 2, 0]),
            elems(&f, &[0, 0, 1, 0, 1, 1, 1]),
            elems(&f, &[0, 0, 0, 1, 0, 2, 2]),
        ];
        let c = LinearCode::from_rows(&f, &rows).unwrap();
        let mut brute = usize::MAX;
        for m in 1..81u32 {
            let msg: Vec<FieldElement> = (0..4).map(|i| f.element(((m / 3u32.pow(i)) % 3) as u64).unwrap()).collect();
            let w = c.encode(&msg).unwrap().iter().filter(|x| !x.is_zero()).count();
            brute = brute.min(w);
        }
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(c.min_distance(1000, exec).unwrap(), Distance::Exact { d: brute });
        }
        assert_eq!(c.projective_weights().len(), 40);
    }

    #[test]
    fn budget_exceeded_reports_upper_bound() {
        let f = f2();
        let c = LinearCode::full(&f, 30);
        match c.min_distance(1000, Exec::Sequential).unwrap() {
            Distance::BudgetExceeded { upper_bound } => assert_eq!(upper_bound, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let f = make_field(2, 2).unwrap();
        let rows = vec![elems(&f, &[1, 2, 3, 0, 1, 1]), elems(&f, &[0, 1, 1, 2, 3, 2])];
        let c = LinearCode::from_rows(&f, &rows).unwrap();
        let a = c.sample_weights(5000, 7, Exec::Sequential).unwrap();
        let b = c.sample_weights(5000, 7, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let Distance::Exact { d } = c.min_distance(1000, Exec::Sequential).unwrap() else {
            panic!()
        };
        assert_eq!(a, d);
        let w1 = LinearCode::from_rows(&f, &[elems(&f, &[0, 0, 1, 0])]).unwrap();
        assert_eq!(w1.sample_weights(10, 0, Exec::Sequential).unwrap(), 1);
    }

    #[test]
    fn json_roundtrip() {
        let f = make_field(3, 2).unwrap();
        let c = LinearCode::from_rows(&f, &[elems(&f, &[1, 5, 8]), elems(&f, &[0, 1, 4])]).unwrap();
        let j = serde_json::to_string(&CodeJson::from(&c)).unwrap();
        let back: CodeJson = serde_json::from_str(&j).unwrap();
        assert_eq!(LinearCode::try_from(back).unwrap(), c);
    }
}
