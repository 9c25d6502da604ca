//! Binary polynomials packed into `u64` words (bit `i` is the coefficient of
//! `x^i`) and extension fields `GF(2^T)` of arbitrary degree built on them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("invalid hex polynomial {0:?}")]
    InvalidHex(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("extension degree must be positive")]
    InvalidDegree,
    #[error("no element of order {0} in GF(2^{1})")]
    NoRootOfUnity(u64, u32),
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitPoly {
    words: Vec<u64>,
}

impl BitPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn x() -> Self {
        Self::monomial(1)
    }

    pub fn monomial(k: usize) -> Self {
        let mut p = Self { words: vec![0; k / 64 + 1] };
        p.words[k / 64] = 1 << (k % 64);
        p
    }

    /// Polynomial whose coefficient vector is the binary expansion of `v`.
    pub fn from_u64(v: u64) -> Self {
        Self::from_words(vec![v])
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Self { words };
        p.normalize();
        p
    }

    /// Coefficients `c_0, c_1, ...` (each taken mod 2).
    pub fn from_coeffs<T: Into<u64> + Copy>(coeffs: &[T]) -> Self {
        let mut p = Self { words: vec![0; coeffs.len() / 64 + 1] };
        for (i, &c) in coeffs.iter().enumerate() {
            if c.into() & 1 == 1 {
                p.words[i / 64] |= 1 << (i % 64);
            }
        }
        p.normalize();
        p
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut p = Self::monomial(n);
        p.words[0] ^= 1;
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn coeffs(&self) -> Vec<u8> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|i| u8::from(self.coeff(i))).collect(),
        }
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, &s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Self::from_words(words)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u64; self.words.len() + other.words.len()];
        for (i, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                xor_shifted(&mut out, &other.words, i * 64 + b);
            }
        }
        Self::from_words(out)
    }

    pub fn square(&self) -> Self {
        let mut out = vec![0u64; 2 * self.words.len()];
        for (i, &w) in self.words.iter().enumerate() {
            out[2 * i] = spread(w as u32);
            out[2 * i + 1] = spread((w >> 32) as u32);
        }
        Self::from_words(out)
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), Gf2Error> {
        let dd = divisor.degree().ok_or(Gf2Error::DivisionByZero)?;
        let mut r = self.words.clone();
        let Some(da) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if da < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![0u64; (da - dd) / 64 + 1];
        for i in (dd..=da).rev() {
            if (r[i / 64] >> (i % 64)) & 1 == 1 {
                xor_shifted(&mut r, &divisor.words, i - dd);
                q[(i - dd) / 64] |= 1 << ((i - dd) % 64);
            }
        }
        Ok((Self::from_words(q), Self::from_words(r)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self, Gf2Error> {
        Ok(self.div_rem(divisor)?.1)
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).is_ok_and(|r| r.is_zero())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a
    }

    /// `x^e mod f`.
    pub fn x_pow_mod(e: &BigUint, f: &Self) -> Result<Self, Gf2Error> {
        Self::x().pow_mod(e, f)
    }

    pub fn pow_mod(&self, e: &BigUint, f: &Self) -> Result<Self, Gf2Error> {
        let mut acc = Self::one().rem(f)?;
        let base = self.rem(f)?;
        for i in (0..e.bits()).rev() {
            acc = acc.square().rem(f)?;
            if e.bit(i) {
                acc = acc.mul(&base).rem(f)?;
            }
        }
        Ok(acc)
    }

    pub fn pow_mod_u64(&self, e: u64, f: &Self) -> Result<Self, Gf2Error> {
        self.pow_mod(&BigUint::from(e), f)
    }

    /// `x^{deg} f(1/x)`.
    pub fn reciprocal(&self) -> Self {
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        Self::from_coeffs(&(0..=d).rev().map(|i| u8::from(self.coeff(i))).collect::<Vec<_>>())
    }

    /// Rabin's test.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        let x = Self::x();
        let frob = |k: usize| -> Self {
            let mut y = x.clone();
            for _ in 0..k {
                y = y.square().rem(self).unwrap();
            }
            y
        };
        if frob(d) != x.rem(self).unwrap() {
            return false;
        }
        arith::prime_divisors(d as u64)
            .into_iter()
            .all(|r| frob(d / r as usize).add(&x).gcd(self).is_one())
    }

    /// Lowercase hex of the integer `sum c_i 2^i`, most significant digit first.
    pub fn to_hex(&self) -> String {
        let Some((last, rest)) = self.words.split_last() else {
            return "0".into();
        };
        let mut s = format!("{last:x}");
        for w in rest.iter().rev() {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    pub fn from_hex(s: &str) -> Result<Self, Gf2Error> {
        let t = s.trim();
        let t = t.strip_prefix("0x").unwrap_or(t);
        if t.is_empty() || !t.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(Gf2Error::InvalidHex(s.to_string()));
        }
        let bytes = t.as_bytes();
        let mut words = Vec::with_capacity(bytes.len() / 16 + 1);
        for chunk in bytes.rchunks(16) {
            let c = std::str::from_utf8(chunk).unwrap();
            words.push(u64::from_str_radix(c, 16).map_err(|_| Gf2Error::InvalidHex(s.to_string()))?);
        }
        Ok(Self::from_words(words))
    }
}

fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    for (i, &s) in src.iter().enumerate() {
        dst[i + ws] ^= s << bs;
        if bs != 0 && s >> (64 - bs) != 0 {
            dst[i + ws + 1] ^= s >> (64 - bs);
        }
    }
}

/// Interleave zeros between the bits of `v`.
fn spread(v: u32) -> u64 {
    let mut x = v as u64;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    (x | (x << 1)) & 0x5555_5555_5555_5555
}

impl fmt::Debug for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitPoly(0x{})", self.to_hex())
    }
}

impl fmt::Display for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let terms: Vec<String> = (0..=d)
            .rev()
            .filter(|&i| self.coeff(i))
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl PartialOrd for BitPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BitPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl Serialize for BitPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for BitPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitPoly::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// `GF(2^T) = F_2[x]/(f)` for the first irreducible `f = x^T + ...` in
/// increasing integer order of its low part. `f` need not be primitive.
#[derive(Debug, Clone)]
pub struct Gf2Ext {
    t: u32,
    modulus: BitPoly,
}

impl Gf2Ext {
    pub fn new(t: u32) -> Result<Self, Gf2Error> {
        if t == 0 {
            return Err(Gf2Error::InvalidDegree);
        }
        let top = BitPoly::monomial(t as usize);
        let modulus = (0u64..)
            .map(|low| {
                let low = if t == 1 { low } else { 2 * low + 1 };
                top.add(&BitPoly::from_u64(low))
            })
            .find(BitPoly::is_irreducible)
            .expect("irreducible polynomials exist in every degree");
        Ok(Self { t, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.t
    }

    pub fn modulus(&self) -> &BitPoly {
        &self.modulus
    }

    pub fn mul(&self, a: &BitPoly, b: &BitPoly) -> BitPoly {
        a.mul(b).rem(&self.modulus).unwrap()
    }

    pub fn pow(&self, a: &BitPoly, e: &BigUint) -> BitPoly {
        a.pow_mod(e, &self.modulus).unwrap()
    }

    pub fn pow_u64(&self, a: &BitPoly, e: u64) -> BitPoly {
        self.pow(a, &BigUint::from(e))
    }

    /// `2^T - 1`.
    pub fn group_order(&self) -> BigUint {
        (BigUint::from(1u32) << self.t as usize) - 1u32
    }

    /// An element of multiplicative order exactly `r^e`, where `r` is prime
    /// and `r^e` divides `2^T - 1`: the first `z^{(2^T-1)/r^e}` (over
    /// `z = x, x + 1, x^2, ...`) that is not a `r^{e-1}`-th root of unity.
    pub fn prime_power_root_of_unity(&self, r: u64, e: u32) -> Result<BitPoly, Gf2Error> {
        let order = r.pow(e);
        let total = self.group_order();
        let big = BigUint::from(order);
        if &total % &big != BigUint::from(0u32) {
            return Err(Gf2Error::NoRootOfUnity(order, self.t));
        }
        let cof = total / big;
        let sub = r.pow(e - 1);
        (2u64..)
            .take(1 << 16)
            .map(|z| self.pow(&BitPoly::from_u64(z).rem(&self.modulus).unwrap(), &cof))
            .find(|w| !w.is_zero() && !self.pow_u64(w, sub).is_one())
            .ok_or(Gf2Error::NoRootOfUnity(order, self.t))
    }
}

/// Multiply `poly` (coefficients in `GF(2^T)`, constant term first) by
/// `(x - root)`.
pub fn mul_linear(field: &Gf2Ext, poly: &mut Vec<BitPoly>, root: &BitPoly) {
    poly.push(BitPoly::zero());
    for i in (0..poly.len()).rev() {
        let lower = if i > 0 { poly[i - 1].clone() } else { BitPoly::zero() };
        let scaled = field.mul(&poly[i], root);
        poly[i] = lower.add(&scaled);
    }
}

/// `prod (x - r)` with coefficients in `GF(2^T)`; `None` if some
/// coefficient is outside `F_2`.
pub fn binary_root_product(field: &Gf2Ext, roots: &[BitPoly]) -> Option<BitPoly> {
    let mut poly = vec![BitPoly::one()];
    for r in roots {
        mul_linear(field, &mut poly, r);
    }
    let mut coeffs = Vec::with_capacity(poly.len());
    for c in &poly {
        if c.is_zero() {
            coeffs.push(0u8);
        } else if c.is_one() {
            coeffs.push(1);
        } else {
            return None;
        }
    }
    Some(BitPoly::from_coeffs(&coeffs))
}
