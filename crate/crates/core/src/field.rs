//! Exact arithmetic in `F_{p^d}`.
//!
//! A field is `F_p[x]/(f)` for the first monic primitive `f` of degree `d`
//! in a fixed enumeration order. Elements are stored by their integer
//! encoding `sum coeffs[i] * p^i`, which is also the I/O encoding. Fields of
//! order at most [`TABLE_LIMIT`] carry precomputed addition and
//! multiplication tables built from the polynomial kernel.
//!
//! Towers `F_q ⊂ F_{q^s} ⊂ F_{q^t}` are all realized inside one ambient
//! field and picked out by the fixed-point condition `x^{p^j} = x`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith;
use crate::matrix;

/// Largest field order for which operation tables are precomputed.
pub const TABLE_LIMIT: u64 = 1024;

/// Largest supported field order (encodings must fit in `u32`).
pub const MAX_ORDER: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    InvalidModulus(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("field of order {p}^{d} is too large")]
    FieldTooLarge { p: u64, d: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("{0} is not a valid subfield size for this field")]
    InvalidSubfield(u64),
    #[error("zero has no multiplicative order")]
    ZeroHasNoOrder,
    #[error("encoding {value} is out of range for a field of order {order}")]
    OutOfRange { value: u64, order: u64 },
    #[error("defining polynomial {0:?} does not match the canonical choice")]
    NonCanonical(Vec<u32>),
    #[error("wrong number of operands for {0:?}")]
    Arity(ArithOp),
}

/// An element of some `F_{p^d}`, tagged with its field's `(p, d)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    p: u32,
    d: u32,
    value: u32,
}

impl FieldElement {
    /// Integer encoding `sum coeffs[i] * p^i`.
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}^{}({})", self.p, self.d, self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow(u64),
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

struct Inner {
    p: u32,
    d: u32,
    order: u32,
    defining_poly: Vec<u32>,
    primitive: u32,
    /// Distinct primes dividing `order - 1`.
    group_primes: Vec<u64>,
    tables: Option<Tables>,
}

/// A finite field `F_{p^d}` with its canonical defining polynomial.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.d == other.0.d
                && self.0.defining_poly == other.0.defining_poly)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.d)
    }
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), FieldSpec>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), FieldSpec>>> = OnceLock::new();
    REG.get_or_init(Default::default)
}

/// Returns the canonical `F_{p^d}`.
pub fn make_field(p: u64, d: u32) -> Result<FieldSpec, FieldError> {
    FieldSpec::new(p, d)
}

impl FieldSpec {
    pub fn new(p: u64, d: u32) -> Result<Self, FieldError> {
        if !arith::is_prime(p) {
            return Err(FieldError::InvalidModulus(p));
        }
        if d == 0 {
            return Err(FieldError::InvalidDegree);
        }
        let order = match arith::checked_pow(p, d) {
            Some(o) if o <= MAX_ORDER => o,
            _ => return Err(FieldError::FieldTooLarge { p, d }),
        };
        let key = (p as u32, d);
        if let Some(f) = registry().lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let spec = Self::build(p as u32, d, order as u32);
        registry().lock().unwrap().insert(key, spec.clone());
        Ok(spec)
    }

    fn build(p: u32, d: u32, order: u32) -> Self {
        let group_primes = arith::prime_divisors(order as u64 - 1);
        let (defining_poly, primitive) = if d == 1 {
            let g = (1..p.max(2))
                .find(|&g| {
                    group_primes
                        .iter()
                        .all(|&l| arith::pow_mod(g as u64, (p as u64 - 1) / l, p as u64) != 1)
                })
                .unwrap_or(1);
            (vec![0, 1], g)
        } else {
            (search_primitive_poly(p, d, &group_primes), p)
        };
        let mut inner = Inner {
            p,
            d,
            order,
            defining_poly,
            primitive,
            group_primes,
            tables: None,
        };
        if order as u64 <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        FieldSpec(Arc::new(inner))
    }

    /// Characteristic.
    pub fn p(&self) -> u32 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.0.d
    }

    /// Number of elements, `p^d`.
    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Monic defining polynomial, constant term first.
    pub fn defining_poly(&self) -> &[u32] {
        &self.0.defining_poly
    }

    pub fn has_tables(&self) -> bool {
        self.0.tables.is_some()
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// The canonical primitive element: the residue of `x` for `d >= 2`,
    /// the least primitive root mod `p` otherwise.
    pub fn primitive_element(&self) -> FieldElement {
        self.wrap(self.0.primitive)
    }

    pub fn element(&self, value: u64) -> Result<FieldElement, FieldError> {
        if value >= self.0.order as u64 {
            return Err(FieldError::OutOfRange {
                value,
                order: self.0.order as u64,
            });
        }
        Ok(self.wrap(value as u32))
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.0.d as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(FieldError::OutOfRange {
                value: coeffs.len() as u64,
                order: self.0.order as u64,
            });
        }
        Ok(self.wrap(self.encode(coeffs)))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        self.check(x);
        self.decode(x.value)
    }

    /// Every element in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.order).map(|v| self.wrap(v))
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.p == self.0.p && x.d == self.0.d && x.value < self.0.order
    }

    pub(crate) fn wrap(&self, value: u32) -> FieldElement {
        FieldElement {
            p: self.0.p,
            d: self.0.d,
            value,
        }
    }

    fn ensure(&self, x: FieldElement) -> Result<(), FieldError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn check(&self, x: FieldElement) {
        assert!(self.contains(x), "{x:?} is not an element of {self:?}");
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.wrap(self.add_raw(a.value, b.value))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.wrap(self.sub_raw(a.value, b.value))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        self.wrap(self.neg_raw(a.value))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.wrap(self.mul_raw(a.value, b.value))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.ensure(a)?;
        if a.value == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.wrap(self.inv_raw(a.value)))
    }

    pub fn pow(&self, a: FieldElement, exp: u64) -> FieldElement {
        self.check(a);
        self.wrap(self.pow_raw(a.value, exp))
    }

    /// Checked arithmetic over operands that may come from anywhere.
    pub fn arith(&self, op: ArithOp, operands: &[FieldElement]) -> Result<FieldElement, FieldError> {
        if operands.iter().any(|&x| !self.contains(x)) {
            return Err(FieldError::FieldMismatch);
        }
        match (op, operands) {
            (ArithOp::Add, &[a, b]) => Ok(self.add(a, b)),
            (ArithOp::Sub, &[a, b]) => Ok(self.sub(a, b)),
            (ArithOp::Mul, &[a, b]) => Ok(self.mul(a, b)),
            (ArithOp::Inv, &[a]) => self.inv(a),
            (ArithOp::Pow(e), &[a]) => Ok(self.pow(a, e)),
            _ => Err(FieldError::Arity(op)),
        }
    }

    /// `x^{q0}` for `q0` a power of `p`.
    pub fn frobenius(&self, x: FieldElement, q0: u64) -> Result<FieldElement, FieldError> {
        self.ensure(x)?;
        let j = arith::log_exact(self.0.p as u64, q0).ok_or(FieldError::InvalidSubfield(q0))?;
        Ok(self.wrap(self.frobenius_raw(x.value, j)))
    }

    /// Multiplicative order, found by peeling prime factors of `p^d - 1`.
    pub fn element_order(&self, x: FieldElement) -> Result<u64, FieldError> {
        self.ensure(x)?;
        if x.value == 0 {
            return Err(FieldError::ZeroHasNoOrder);
        }
        Ok(self.order_raw(x.value))
    }

    /// True iff `x^{q0} = x`, i.e. `x` lies in the subfield of size `q0`.
    pub fn in_subfield(&self, x: FieldElement, q0: u64) -> Result<bool, FieldError> {
        self.ensure(x)?;
        let j = self.subfield_degree(q0)?;
        Ok(self.frobenius_raw(x.value, j) == x.value)
    }

    /// Degree `j` over `F_p` of the subfield of size `q0 = p^j`; `j` must divide `d`.
    pub fn subfield_degree(&self, q0: u64) -> Result<u32, FieldError> {
        match arith::log_exact(self.0.p as u64, q0) {
            Some(j) if j >= 1 && self.0.d.is_multiple_of(j) => Ok(j),
            _ => Err(FieldError::InvalidSubfield(q0)),
        }
    }

    /// Canonical primitive element of the subfield of size `q0`:
    /// `g^{(p^d - 1)/(q0 - 1)}`.
    pub fn subfield_generator(&self, q0: u64) -> Result<FieldElement, FieldError> {
        self.subfield_degree(q0)?;
        let e = (self.0.order as u64 - 1) / (q0 - 1);
        Ok(self.wrap(self.pow_raw(self.0.primitive, e)))
    }

    /// An element of order exactly `m`, `g^{(p^d - 1)/m}`.
    pub fn root_of_unity(&self, m: u64) -> Option<FieldElement> {
        let n = self.0.order as u64 - 1;
        (m >= 1 && n.is_multiple_of(m)).then(|| self.wrap(self.pow_raw(self.0.primitive, n / m)))
    }

    /// Evaluate a polynomial (coefficients constant first) at `x`.
    pub fn eval_poly(&self, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
        let mut acc = 0;
        for &c in coeffs.iter().rev() {
            self.check(c);
            acc = self.add_raw(self.mul_raw(acc, x.value), c.value);
        }
        self.wrap(acc)
    }

    // Raw kernel. Callers guarantee values are in range.

    #[inline]
    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.0.p == 2 {
            return a ^ b;
        }
        match &self.0.tables {
            Some(t) => t.add[(a * self.0.order + b) as usize],
            None => self.kernel_add(a, b, false),
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        if self.0.p == 2 {
            return a ^ b;
        }
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        if self.0.p == 2 || a == 0 {
            return a;
        }
        self.kernel_add(0, a, true)
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        match &self.0.tables {
            Some(t) => t.mul[(a * self.0.order + b) as usize],
            None => self.kernel_mul(a, b),
        }
    }

    pub(crate) fn inv_raw(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        match &self.0.tables {
            Some(t) => t.inv[a as usize],
            None => self.pow_raw(a, self.0.order as u64 - 2),
        }
    }

    pub(crate) fn pow_raw(&self, a: u32, mut exp: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `a^{p^j}`.
    pub(crate) fn frobenius_raw(&self, a: u32, j: u32) -> u32 {
        let mut x = a;
        for _ in 0..(j % self.0.d) {
            x = self.pow_raw(x, self.0.p as u64);
        }
        x
    }

    pub(crate) fn order_raw(&self, a: u32) -> u64 {
        let mut order = self.0.order as u64 - 1;
        for &l in &self.0.group_primes {
            while order.is_multiple_of(l) && self.pow_raw(a, order / l) == 1 {
                order /= l;
            }
        }
        order
    }

    fn decode(&self, mut v: u32) -> Vec<u32> {
        let p = self.0.p;
        (0..self.0.d)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.0.p + c)
    }

    fn kernel_add(&self, a: u32, b: u32, negate_b: bool) -> u32 {
        let p = self.0.p;
        let (ca, cb) = (self.decode(a), self.decode(b));
        let sum: Vec<u32> = ca
            .iter()
            .zip(&cb)
            .map(|(&x, &y)| if negate_b { (x + p - y) % p } else { (x + y) % p })
            .collect();
        self.encode(&sum)
    }

    fn kernel_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p as u64;
        if self.0.d == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let (ca, cb) = (self.decode(a), self.decode(b));
        let prod = fp_poly::mul(&ca, &cb, p as u32);
        self.encode(&fp_poly::rem_monic(&prod, &self.0.defining_poly, p as u32))
    }
}

fn build_tables(inner: &Inner) -> Tables {
    // Temporary spec without tables so the kernel is used.
    let bare = FieldSpec(Arc::new(Inner {
        p: inner.p,
        d: inner.d,
        order: inner.order,
        defining_poly: inner.defining_poly.clone(),
        primitive: inner.primitive,
        group_primes: inner.group_primes.clone(),
        tables: None,
    }));
    let q = inner.order;
    let mut add = vec![0; (q * q) as usize];
    let mut mul = vec![0; (q * q) as usize];
    for a in 0..q {
        for b in a..q {
            let s = bare.kernel_add(a, b, false);
            let m = bare.kernel_mul(a, b);
            add[(a * q + b) as usize] = s;
            add[(b * q + a) as usize] = s;
            mul[(a * q + b) as usize] = m;
            mul[(b * q + a) as usize] = m;
        }
    }
    let mut inv = vec![0; q as usize];
    for a in 1..q {
        if inv[a as usize] == 0 {
            let b = (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap();
            inv[a as usize] = b;
            inv[b as usize] = a;
        }
    }
    Tables { add, mul, inv }
}

/// First monic primitive polynomial of degree `d` over `F_p`, enumerating
/// coefficient tuples `(c_0, ..., c_{d-1})` lexicographically with the
/// constant term most significant.
fn search_primitive_poly(p: u32, d: u32, group_primes: &[u64]) -> Vec<u32> {
    let d = d as usize;
    let mut coeffs = vec![0u32; d];
    coeffs[0] = 1;
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if fp_poly::is_irreducible(&f, p) && fp_poly::is_primitive(&f, p, group_primes) {
            return f;
        }
        // Increment, treating c_{d-1} as the least significant digit.
        let mut i = d - 1;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            assert!(i > 0, "no primitive polynomial found");
            i -= 1;
        }
    }
}

/// Polynomials over `F_p` as coefficient vectors, constant term first.
pub(crate) mod fp_poly {
    use crate::arith;

    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p64 = p as u64;
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
            }
        }
        out.into_iter().map(|c| c as u32).collect()
    }

    /// Remainder modulo a monic `f`, padded to `deg f` coefficients.
    pub fn rem_monic(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let d = f.len() - 1;
        let mut r: Vec<u32> = a.to_vec();
        if r.len() < d {
            r.resize(d, 0);
            return r;
        }
        for i in (d..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            for j in 0..d {
                let sub = (c as u64 * f[j] as u64 % p as u64) as u32;
                r[i - d + j] = (r[i - d + j] + p - sub) % p;
            }
            r[i] = 0;
        }
        r.truncate(d);
        r
    }

    fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        rem_monic(&mul(a, b, p), f, p)
    }

    pub fn powmod(base: &[u32], mut exp: u64, f: &[u32], p: u32) -> Vec<u32> {
        let d = f.len() - 1;
        let mut acc = vec![0u32; d];
        acc[0] = 1;
        let mut b = rem_monic(base, f, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(&acc, &b, f, p);
            }
            b = mulmod(&b, &b, f, p);
            exp >>= 1;
        }
        acc
    }

    fn inv_mod_p(a: u32, p: u32) -> u32 {
        arith::pow_mod(a as u64, p as u64 - 2, p as u64) as u32
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let lead_inv = inv_mod_p(*b.last().unwrap(), p);
            let monic: Vec<u32> = b
                .iter()
                .map(|&c| (c as u64 * lead_inv as u64 % p as u64) as u32)
                .collect();
            let r = trim(rem_monic(&a, &monic, p));
            a = monic;
            b = r;
        }
        a
    }

    /// Rabin's test: `x^{p^d} = x (mod f)` and `gcd(x^{p^{d/r}} - x, f) = 1`
    /// for every prime `r | d`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let d = f.len() - 1;
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let x = {
            let mut v = vec![0u32; d];
            v[1] = 1;
            v
        };
        // frob[i] = x^{p^i} mod f
        let mut frob = vec![x.clone()];
        for i in 1..=d {
            let next = powmod(&frob[i - 1], p as u64, f, p);
            frob.push(next);
        }
        if frob[d] != x {
            return false;
        }
        for r in arith::prime_divisors(d as u64) {
            let mut h = frob[d / r as usize].clone();
            h[1] = (h[1] + p - 1) % p;
            if gcd(&h, f, p).len() != 1 {
                return false;
            }
        }
        true
    }

    /// True iff the residue of `x` has order exactly `p^d - 1` modulo `f`.
    pub fn is_primitive(f: &[u32], p: u32, group_primes: &[u64]) -> bool {
        let d = f.len() - 1;
        let n = (p as u64).pow(d as u32) - 1;
        let mut x = vec![0u32; d.max(2)];
        x[1] = 1;
        let one = {
            let mut v = vec![0u32; d];
            v[0] = 1;
            v
        };
        if powmod(&x, n, f, p) != one {
            return false;
        }
        group_primes.iter().all(|&l| powmod(&x, n / l, f, p) != one)
    }
}

/// Embedding of a standalone subfield `F_{p^j}` into an ambient `F_{p^d}`,
/// `x ↦ r` for the first power of the ambient subfield generator that is a
/// root of the subfield's defining polynomial.
#[derive(Clone)]
pub struct SubfieldEmbedding {
    ambient: FieldSpec,
    sub: FieldSpec,
    image: Vec<u32>,
    preimage: HashMap<u32, u32>,
}

impl SubfieldEmbedding {
    pub fn new(ambient: &FieldSpec, sub: &FieldSpec) -> Result<Self, FieldError> {
        if ambient.p() != sub.p() || !ambient.degree().is_multiple_of(sub.degree()) {
            return Err(FieldError::InvalidSubfield(sub.order() as u64));
        }
        let q0 = sub.order() as u64;
        let image: Vec<u32> = if sub.degree() == 1 {
            (0..sub.order()).collect()
        } else {
            let h = ambient.subfield_generator(q0)?.value;
            let f: Vec<FieldElement> = sub
                .defining_poly()
                .iter()
                .map(|&c| ambient.wrap(c))
                .collect();
            let root = (1..q0)
                .map(|i| ambient.pow_raw(h, i))
                .find(|&y| ambient.eval_poly(&f, ambient.wrap(y)).is_zero())
                .expect("subfield defining polynomial has a root in the ambient field");
            let powers: Vec<u32> = (0..sub.degree())
                .map(|i| ambient.pow_raw(root, i as u64))
                .collect();
            (0..sub.order())
                .map(|v| {
                    sub.decode(v)
                        .iter()
                        .zip(&powers)
                        .fold(0, |acc, (&c, &rp)| ambient.add_raw(acc, ambient.mul_raw(c, rp)))
                })
                .collect()
        };
        let preimage = image.iter().enumerate().map(|(i, &a)| (a, i as u32)).collect();
        Ok(Self {
            ambient: ambient.clone(),
            sub: sub.clone(),
            image,
            preimage,
        })
    }

    pub fn ambient(&self) -> &FieldSpec {
        &self.ambient
    }

    pub fn sub(&self) -> &FieldSpec {
        &self.sub
    }

    pub fn embed(&self, x: FieldElement) -> FieldElement {
        self.sub.check(x);
        self.ambient.wrap(self.image[x.value as usize])
    }

    /// Inverse of [`embed`](Self::embed); `None` if `y` is outside the subfield.
    pub fn restrict(&self, y: FieldElement) -> Option<FieldElement> {
        self.ambient.check(y);
        self.restrict_raw(y.value).map(|v| self.sub.wrap(v))
    }

    pub(crate) fn embed_raw(&self, v: u32) -> u32 {
        self.image[v as usize]
    }

    pub(crate) fn restrict_raw(&self, v: u32) -> Option<u32> {
        self.preimage.get(&v).copied()
    }
}

/// Coordinates of elements of `F_{q^s}` (inside an ambient field) with
/// respect to the `F_q`-basis `1, β, ..., β^{s-1}`, `β` the canonical
/// primitive element of `F_{q^s}`.
pub struct RelativeBasis {
    base: SubfieldEmbedding,
    s: u32,
    /// Ambient coefficient vectors of `r^u β^i`, indexed `i * a + u`.
    columns: Vec<Vec<u32>>,
}

impl RelativeBasis {
    pub fn new(ambient: &FieldSpec, q: u64, s: u32) -> Result<Self, FieldError> {
        let a = ambient.subfield_degree(q)?;
        let qs = arith::checked_pow(q, s).ok_or(FieldError::InvalidSubfield(q))?;
        ambient.subfield_degree(qs)?;
        let sub = FieldSpec::new(ambient.p() as u64, a)?;
        let base = SubfieldEmbedding::new(ambient, &sub)?;
        let beta = ambient.subfield_generator(qs)?.value;
        let r = if a == 1 { 1 } else { base.embed_raw(ambient.p()) };
        let mut columns = Vec::new();
        for i in 0..s {
            let bi = ambient.pow_raw(beta, i as u64);
            for u in 0..a {
                let v = ambient.mul_raw(ambient.pow_raw(r, u as u64), bi);
                columns.push(ambient.decode(v));
            }
        }
        Ok(Self { base, s, columns })
    }

    pub fn base_field(&self) -> &FieldSpec {
        self.base.sub()
    }

    /// `F_q` coordinates of `y`, or `None` when `y` is not in `F_{q^s}`.
    pub fn coordinates(&self, y: FieldElement) -> Option<Vec<FieldElement>> {
        let ambient = self.base.ambient();
        let p = ambient.p();
        let target = ambient.coeffs(y);
        let sol = matrix::solve_mod_p(&self.columns, &target, p)?;
        let a = self.base.sub().degree() as usize;
        let sub = self.base.sub();
        Some(
            (0..self.s as usize)
                .map(|i| sub.from_coeffs(&sol[i * a..(i + 1) * a]).unwrap())
                .collect(),
        )
    }
}

/// A normal element of `F_{q^s}/F_q` inside `ambient`: the first power
/// `β^0, β^1, ...` of the canonical primitive element of `F_{q^s}` whose
/// conjugates `γ, γ^q, ..., γ^{q^{s-1}}` have full rank over `F_q`.
pub fn find_normal_element(q: u64, s: u32, ambient: &FieldSpec) -> Result<FieldElement, FieldError> {
    if s == 1 {
        ambient.subfield_degree(q)?;
        return Ok(ambient.one());
    }
    let basis = RelativeBasis::new(ambient, q, s)?;
    let qs = q.pow(s);
    let beta = ambient.subfield_generator(qs)?;
    for i in 0..qs - 1 {
        let gamma = ambient.pow(beta, i);
        if is_normal(&basis, gamma, q, s) {
            return Ok(gamma);
        }
    }
    unreachable!("normal bases always exist")
}

/// Rank test for `γ, γ^q, ..., γ^{q^{s-1}}` over `F_q`.
pub fn is_normal(basis: &RelativeBasis, gamma: FieldElement, q: u64, s: u32) -> bool {
    let ambient = basis.base.ambient();
    let j = ambient.subfield_degree(q).unwrap();
    let mut rows = Vec::with_capacity(s as usize);
    let mut x = gamma.value;
    for _ in 0..s {
        match basis.coordinates(ambient.wrap(x)) {
            Some(c) => rows.push(c.iter().map(|e| e.value()).collect::<Vec<u32>>()),
            None => return false,
        }
        x = ambient.frobenius_raw(x, j);
    }
    matrix::rank(basis.base_field(), rows) == s as usize
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    p: u32,
    d: u32,
    defining_poly: Vec<u32>,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FieldSpecRepr {
            p: self.0.p,
            d: self.0.d,
            defining_poly: self.0.defining_poly.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FieldSpecRepr::deserialize(deserializer)?;
        let spec = FieldSpec::new(repr.p as u64, repr.d).map_err(serde::de::Error::custom)?;
        if spec.defining_poly() != repr.defining_poly.as_slice() {
            return Err(serde::de::Error::custom(FieldError::NonCanonical(repr.defining_poly)));
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_is_x2_x_1() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.defining_poly(), &[1, 1, 1]);
        let g = f.primitive_element();
        assert_eq!(f.mul(f.mul(g, g), g), f.one());
        for a in f.elements() {
            assert!(f.add(a, a).is_zero());
        }
    }

    #[test]
    fn gf4_unique_candidate_by_enumeration() {
        // Oracle: all monic quadratics over F_2, irreducible and primitive.
        let mut found = Vec::new();
        for c0 in 0..2u32 {
            for c1 in 0..2u32 {
                // Roots in F_2 make it reducible.
                let has_root = (0..2u32).any(|x| (c0 + c1 * x + x * x) % 2 == 0);
                if !has_root {
                    found.push(vec![c0, c1, 1]);
                }
            }
        }
        assert_eq!(found, vec![vec![1, 1, 1]]);
        assert_eq!(make_field(2, 2).unwrap().defining_poly(), found[0].as_slice());
    }

    #[test]
    fn prime_fields_use_identity_representation() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(f.defining_poly(), &[0, 1]);
        assert_eq!(f.order(), 2);
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.primitive_element().value(), 3);
        assert_eq!(f7.element_order(f7.primitive_element()).unwrap(), 6);
        assert_eq!(f7.mul(f7.element(3).unwrap(), f7.element(5).unwrap()).value(), 1);
    }

    #[test]
    fn gf256_primitive() {
        let f = make_field(2, 8).unwrap();
        let g = f.primitive_element();
        assert_eq!(f.element_order(g).unwrap(), 255);
        // Order by exponentiation, independently of the peeling routine.
        let mut x = g;
        let mut n = 1;
        while x != f.one() {
            x = f.mul(x, g);
            n += 1;
        }
        assert_eq!(n, 255);
    }

    #[test]
    fn errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), FieldError::InvalidModulus(4));
        assert_eq!(make_field(2, 0).unwrap_err(), FieldError::InvalidDegree);
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.inv(f.zero()).unwrap_err(), FieldError::DivisionByZero);
        assert_eq!(f.element_order(f.zero()).unwrap_err(), FieldError::ZeroHasNoOrder);
        assert_eq!(
            f.frobenius(f.one(), 4).unwrap_err(),
            FieldError::InvalidSubfield(4)
        );
        let g = make_field(2, 2).unwrap();
        assert_eq!(
            f.arith(ArithOp::Add, &[f.one(), g.one()]).unwrap_err(),
            FieldError::FieldMismatch
        );
        let f16 = make_field(2, 4).unwrap();
        assert_eq!(
            f16.in_subfield(f16.one(), 8).unwrap_err(),
            FieldError::InvalidSubfield(8)
        );
        assert_eq!(f16.in_subfield(g.one(), 4).unwrap_err(), FieldError::FieldMismatch);
    }

    #[test]
    fn tables_agree_with_kernel() {
        for (p, d) in [(2, 4), (3, 2), (3, 6), (2, 8)] {
            let f = make_field(p, d).unwrap();
            assert!(f.has_tables());
            for a in (0..f.order()).step_by(7) {
                for b in (0..f.order()).step_by(5) {
                    assert_eq!(f.mul_raw(a, b), f.kernel_mul(a, b));
                    assert_eq!(f.add_raw(a, b), f.kernel_add(a, b, false));
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = make_field(2, 16).unwrap();
        assert!(!f.has_tables());
        let g = f.primitive_element();
        assert_eq!(f.element_order(g).unwrap(), 65535);
        let x = f.pow(g, 1234);
        assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
    }

    #[test]
    fn frobenius_and_subfields() {
        let f = make_field(2, 4).unwrap();
        for x in f.elements() {
            assert_eq!(f.frobenius(x, 16).unwrap(), x);
            let y = f.frobenius(x, 4).unwrap();
            assert_eq!(f.frobenius(y, 4).unwrap(), x);
        }
        let count = f.elements().filter(|&x| f.in_subfield(x, 4).unwrap()).count();
        assert_eq!(count, 4);
        assert!(f.in_subfield(f.zero(), 4).unwrap());
        assert_eq!(f.frobenius(f.zero(), 2).unwrap(), f.zero());
    }

    #[test]
    fn roots_of_unity() {
        let f = make_field(2, 8).unwrap();
        for m in [3u64, 5, 15, 17, 51, 85, 255] {
            let w = f.root_of_unity(m).unwrap();
            assert_eq!(f.pow(w, m), f.one());
            for l in arith::prime_divisors(m) {
                assert_ne!(f.pow(w, m / l), f.one());
            }
            assert_eq!(f.element_order(w).unwrap(), m);
        }
        assert!(f.root_of_unity(7).is_none());
    }

    #[test]
    fn element_coding() {
        let f = make_field(3, 3).unwrap();
        let x = f.from_coeffs(&[2, 0, 1]).unwrap();
        assert_eq!(x.value(), 2 + 9);
        assert_eq!(f.coeffs(x), vec![2, 0, 1]);
        assert!(f.element(27).is_err());
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let amb = make_field(2, 8).unwrap();
        let sub = make_field(2, 4).unwrap();
        let e = SubfieldEmbedding::new(&amb, &sub).unwrap();
        for a in sub.elements() {
            for b in sub.elements() {
                assert_eq!(e.embed(sub.add(a, b)), amb.add(e.embed(a), e.embed(b)));
                assert_eq!(e.embed(sub.mul(a, b)), amb.mul(e.embed(a), e.embed(b)));
            }
            assert!(amb.in_subfield(e.embed(a), 16).unwrap());
            assert_eq!(e.restrict(e.embed(a)), Some(a));
        }
        let ternary = SubfieldEmbedding::new(&make_field(3, 6).unwrap(), &make_field(3, 2).unwrap());
        assert!(ternary.is_ok());
        assert!(SubfieldEmbedding::new(&amb, &make_field(2, 3).unwrap()).is_err());
    }

    #[test]
    fn normal_elements() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(find_normal_element(4, 1, &f4).unwrap(), f4.one());
        // Over F_2 in F_4 the primitive element g has conjugates g, g^2 = g + 1.
        let g = find_normal_element(2, 2, &f4).unwrap();
        assert_eq!(g, f4.primitive_element());
        let oracle: Vec<FieldElement> = f4
            .elements()
            .filter(|&x| !x.is_zero() && !f4.add(x, f4.pow(x, 2)).is_zero())
            .collect();
        assert!(oracle.contains(&g));

        let amb = make_field(2, 8).unwrap();
        let gamma = find_normal_element(4, 2, &amb).unwrap();
        assert!(amb.in_subfield(gamma, 16).unwrap());
        let conj = amb.pow(gamma, 4);
        assert!(!amb.add(gamma, conj).is_zero());
        let basis = RelativeBasis::new(&amb, 4, 2).unwrap();
        assert!(is_normal(&basis, gamma, 4, 2));
        assert_eq!(find_normal_element(4, 2, &amb).unwrap(), gamma);
    }

    #[test]
    fn relative_coordinates_reconstruct() {
        let amb = make_field(2, 8).unwrap();
        let basis = RelativeBasis::new(&amb, 4, 2).unwrap();
        let emb = SubfieldEmbedding::new(&amb, basis.base_field()).unwrap();
        let beta = amb.subfield_generator(16).unwrap();
        let mut count = 0;
        for y in amb.elements() {
            match basis.coordinates(y) {
                Some(c) => {
                    let back = amb.add(emb.embed(c[0]), amb.mul(emb.embed(c[1]), beta));
                    assert_eq!(back, y);
                    count += 1;
                }
                None => assert!(!amb.in_subfield(y, 16).unwrap()),
            }
        }
        assert_eq!(count, 16);
    }

    #[test]
    fn serde_roundtrip() {
        let f = make_field(3, 2).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.starts_with(r#"{"p":3,"d":2,"defining_poly":["#));
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"p":2,"d":2,"defining_poly":[1,0,1]}"#;
        assert!(serde_json::from_str::<FieldSpec>(bad).is_err());
    }
}
