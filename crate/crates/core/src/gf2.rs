//! Sparse polynomials over GF(2) and incremental row reduction.
//!
//! Ledrappier's system is the closed subgroup of `GF(2)^{ℤ²}` cut out by
//! `x(n,m) + x(n+1,m) + x(n,m+1) = 0`. A linear functional `Σ c_s x(s)` vanishes
//! on it iff the Laurent polynomial `Σ c_s u^{s₁} v^{s₂}` lies in the ideal
//! generated by `1 + u + v`. Substituting `u = t`, `v = 1 + t` identifies the
//! quotient ring with a localization of `GF(2)[t]`, so after clearing negative
//! exponents with a monomial (a unit) membership is the vanishing of a
//! polynomial in `t`. Coordinate `(a, b)` therefore maps to `t^a (1+t)^b`, which
//! by Lucas' theorem has one term per submask of `b`. Keeping the polynomials
//! sparse lets shifts like `2^64` stay cheap.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Largest number of terms a single `t^a (1+t)^b` may expand to.
pub const MAX_TERMS_LOG2: u32 = 20;

/// A GF(2) polynomial stored as its exponents in strictly decreasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly(Vec<u128>);

impl SparsePoly {
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn one() -> Self {
        Self(vec![0])
    }

    pub fn monomial(e: u128) -> Self {
        Self(vec![e])
    }

    /// Builds a polynomial from arbitrary exponents; repeated exponents cancel.
    pub fn from_exponents(exps: impl IntoIterator<Item = u128>) -> Self {
        let mut v: Vec<u128> = exps.into_iter().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        let mut out: Vec<u128> = Vec::with_capacity(v.len());
        for e in v {
            if out.last() == Some(&e) {
                out.pop();
            } else {
                out.push(e);
            }
        }
        Self(out)
    }

    /// `t^shift · (1 + t)^power`.
    pub fn shifted_binomial(shift: u128, power: u128) -> Result<Self> {
        let bits = power.count_ones();
        if bits > MAX_TERMS_LOG2 {
            return Err(Error::Guard {
                guard: "Lucas expansion terms (log2)",
                requested: bits as u128,
                limit: MAX_TERMS_LOG2 as u128,
            });
        }
        if shift.checked_add(power).is_none() {
            return Err(Error::Guard {
                guard: "GF(2) exponent",
                requested: u128::MAX,
                limit: u128::MAX,
            });
        }
        let mut terms = Vec::with_capacity(1 << bits);
        // Submasks of `power`, visited in decreasing order.
        let mut s = power;
        loop {
            terms.push(shift + s);
            if s == 0 {
                break;
            }
            s = (s - 1) & power;
        }
        Ok(Self(terms))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn leading(&self) -> Option<u128> {
        self.0.first().copied()
    }

    pub fn terms(&self) -> &[u128] {
        &self.0
    }

    pub fn add_assign(&mut self, other: &SparsePoly) {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        self.0 = out;
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        Self::from_exponents(
            self.0
                .iter()
                .flat_map(|&a| other.0.iter().map(move |&b| a + b)),
        )
    }
}

impl std::ops::Add for &SparsePoly {
    type Output = SparsePoly;

    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

/// What happened when a row was inserted into an [`Echelon`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Insertion {
    /// The row was independent of the rows so far and raised the rank.
    Independent,
    /// The row reduced to zero and its augmented bit agreed.
    Dependent,
    /// The row reduced to zero but its augmented bit did not: the system
    /// `row · x = bit` has no solution.
    Inconsistent,
}

/// Row echelon form over GF(2), keyed by leading exponent, with one
/// augmented bit per row.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<u128, (SparsePoly, bool)>,
    consistent: bool,
}

impl Echelon {
    pub fn new() -> Self {
        Self {
            pivots: BTreeMap::new(),
            consistent: true,
        }
    }

    pub fn insert(&mut self, mut row: SparsePoly, mut bit: bool) -> Insertion {
        while let Some(lead) = row.leading() {
            match self.pivots.get(&lead) {
                Some((p, b)) => {
                    row.add_assign(p);
                    bit ^= *b;
                }
                None => {
                    self.pivots.insert(lead, (row, bit));
                    return Insertion::Independent;
                }
            }
        }
        if bit {
            self.consistent = false;
            Insertion::Inconsistent
        } else {
            Insertion::Dependent
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas_expansion_matches_repeated_multiplication() {
        let one_plus_t = SparsePoly::from_exponents([0, 1]);
        let mut acc = SparsePoly::one();
        for b in 0..40u128 {
            let direct = SparsePoly::shifted_binomial(3, b).unwrap();
            assert_eq!(direct, SparsePoly::monomial(3).mul(&acc), "power {b}");
            acc = acc.mul(&one_plus_t);
        }
    }

    #[test]
    fn frobenius_identity_up_to_2_pow_32() {
        for n in 0..=32u32 {
            let big = 1u128 << n;
            let mut f = SparsePoly::one();
            f.add_assign(&SparsePoly::monomial(big));
            f.add_assign(&SparsePoly::shifted_binomial(0, big).unwrap());
            assert!(f.is_zero(), "1 + t^N + (1+t)^N != 0 for N = 2^{n}");
        }
    }

    #[test]
    fn echelon_rank_and_consistency() {
        let mut e = Echelon::new();
        let a = SparsePoly::from_exponents([0]);
        let b = SparsePoly::from_exponents([1]);
        let c = SparsePoly::from_exponents([0, 1]);
        assert_eq!(e.insert(a, false), Insertion::Independent);
        assert_eq!(e.insert(b, true), Insertion::Independent);
        assert_eq!(e.insert(c.clone(), true), Insertion::Dependent);
        assert_eq!(e.rank(), 2);
        assert!(e.is_consistent());
        assert_eq!(e.insert(c, false), Insertion::Inconsistent);
        assert!(!e.is_consistent());
    }

    #[test]
    fn expansion_guard() {
        assert!(SparsePoly::shifted_binomial(0, (1u128 << 21) - 1).is_err());
        assert!(SparsePoly::shifted_binomial(u128::MAX, 1).is_err());
    }
}
