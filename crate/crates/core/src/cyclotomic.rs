//! `q`-cyclotomic cosets modulo `m` and selections built from them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclotomicError {
    #[error("{a} and {m} are not coprime")]
    NotCoprime { a: u64, m: u64 },
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("{0} is not the maximum of a full-size coset")]
    InvalidCutoff(u64),
    #[error("{0} is not a coset representative with a full-size coset")]
    InvalidRepresentative(u64),
    #[error("{q} is not the square of a prime power with root {pe}")]
    NotASquare { q: u64, pe: u64 },
}

/// Smallest `t >= 1` with `q^t = 1 (mod m)`.
pub fn ord_mod(q: u64, m: u64) -> Result<u64, CyclotomicError> {
    if m < 2 {
        return Err(CyclotomicError::InvalidModulus(m));
    }
    arith::multiplicative_order(q, m).ok_or(CyclotomicError::NotCoprime { a: q, m })
}

/// The partition of `Z_m` into `q`-cyclotomic cosets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetFamily {
    pub q: u64,
    pub m: u64,
    pub t: u64,
    /// Sorted cosets, ordered by their maximum element.
    pub cosets: Vec<Vec<u64>>,
    /// Maxima of the cosets of size `t`, ascending.
    #[serde(rename = "A")]
    pub reps: Vec<u64>,
    #[serde(skip_serializing)]
    coset_index: Vec<usize>,
}

pub fn coset_family(q: u64, m: u64) -> Result<CosetFamily, CyclotomicError> {
    CosetFamily::new(q, m)
}

impl CosetFamily {
    pub fn new(q: u64, m: u64) -> Result<Self, CyclotomicError> {
        let t = ord_mod(q, m)?;
        let mut seen = vec![false; m as usize];
        let mut cosets = Vec::new();
        for a in 0..m {
            if seen[a as usize] {
                continue;
            }
            let mut coset = Vec::new();
            let mut x = a;
            loop {
                seen[x as usize] = true;
                coset.push(x);
                x = arith::mul_mod(x, q, m);
                if x == a {
                    break;
                }
            }
            coset.sort_unstable();
            cosets.push(coset);
        }
        cosets.sort_by_key(|c| *c.last().unwrap());
        let mut coset_index = vec![0; m as usize];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                coset_index[x as usize] = i;
            }
        }
        let reps = cosets
            .iter()
            .filter(|c| c.len() as u64 == t)
            .map(|c| *c.last().unwrap())
            .collect();
        Ok(Self {
            q,
            m,
            t,
            cosets,
            reps,
            coset_index,
        })
    }

    /// The coset containing `a`.
    pub fn coset_of(&self, a: u64) -> &[u64] {
        &self.cosets[self.coset_index[(a % self.m) as usize]]
    }

    pub fn is_rep(&self, a: u64) -> bool {
        self.reps.binary_search(&a).is_ok()
    }

    /// Union of all full-size cosets.
    pub fn full_union(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .reps
            .iter()
            .flat_map(|&a| self.coset_of(a).iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// True iff `set` is a union of cosets.
    pub fn is_union_of_cosets(&self, set: &[u64]) -> bool {
        let s: BTreeSet<u64> = set.iter().copied().collect();
        s.iter()
            .all(|&x| self.coset_of(x).iter().all(|y| s.contains(y)))
    }

    pub fn selection(&self, reps: &[u64]) -> Result<SelectionS, CyclotomicError> {
        SelectionS::from_reps(self, reps)
    }

    pub fn selection_from_cutoff(&self, c: u64) -> Result<SelectionS, CyclotomicError> {
        selection_from_cutoff(self, c)
    }
}

/// A union `S` of full-size cosets, given by their representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionS {
    pub q: u64,
    pub m: u64,
    pub t: u64,
    pub reps: Vec<u64>,
    pub members: Vec<u64>,
}

impl SelectionS {
    pub fn from_reps(family: &CosetFamily, reps: &[u64]) -> Result<Self, CyclotomicError> {
        let mut reps = reps.to_vec();
        reps.sort_unstable();
        reps.dedup();
        if let Some(&bad) = reps.iter().find(|&&a| !family.is_rep(a)) {
            return Err(CyclotomicError::InvalidRepresentative(bad));
        }
        let mut members: Vec<u64> = reps
            .iter()
            .flat_map(|&a| family.coset_of(a).iter().copied())
            .collect();
        members.sort_unstable();
        Ok(Self {
            q: family.q,
            m: family.m,
            t: family.t,
            reps,
            members,
        })
    }

    /// `max(S)`, `None` for the empty selection.
    pub fn c(&self) -> Option<u64> {
        self.members.last().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// All full cosets whose maximum is at most `c`.
pub fn selection_from_cutoff(family: &CosetFamily, c: u64) -> Result<SelectionS, CyclotomicError> {
    if !family.is_rep(c) {
        return Err(CyclotomicError::InvalidCutoff(c));
    }
    let reps: Vec<u64> = family.reps.iter().copied().filter(|&a| a <= c).collect();
    SelectionS::from_reps(family, &reps)
}

/// `{m - i mod m : i in set}`, sorted.
pub fn negate_set(set: &[u64], m: u64) -> Vec<u64> {
    let mut out: Vec<u64> = set.iter().map(|&i| (m - i % m) % m).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `{l * i mod m : i in set}`, sorted.
pub fn scale_set(set: &[u64], l: u64, m: u64) -> Result<Vec<u64>, CyclotomicError> {
    if arith::gcd(l % m, m) != 1 {
        return Err(CyclotomicError::NotCoprime { a: l, m });
    }
    let mut out: Vec<u64> = set.iter().map(|&i| arith::mul_mod(i, l, m)).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Whether `S ∪ -(pe·S)` covers the union of all full cosets, where
/// `q = pe^2`.
pub fn hermitian_condition(
    family: &CosetFamily,
    selection: &SelectionS,
    pe: u64,
) -> Result<bool, CyclotomicError> {
    let q = family.q;
    let square_ok = pe.checked_mul(pe) == Some(q) && arith::prime_power(pe).is_some();
    if !square_ok {
        return Err(CyclotomicError::NotASquare { q, pe });
    }
    let m = family.m;
    let twisted = negate_set(&scale_set(&selection.members, pe, m)?, m);
    let cover: BTreeSet<u64> = selection.members.iter().chain(&twisted).copied().collect();
    Ok(family.full_union().iter().all(|x| cover.contains(x)))
}

/// `p^e` with `q = p^{2e}`, if `q` has that form.
pub fn hermitian_root(q: u64) -> Option<u64> {
    let (p, a) = arith::prime_power(q)?;
    (a % 2 == 0).then(|| p.pow(a / 2))
}
