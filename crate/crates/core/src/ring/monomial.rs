use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::Rational;

/// Exponent vector over a presentation's generators, in declaration order.
///
/// Odd generators only ever carry exponent 0 or 1 in a normal form. The derived ordering is
/// lexicographic from the first generator; bases are listed in *descending* order of it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(Vec<u32>);

/// Sparse coefficient map, the raw payload of an element.
pub type Terms = BTreeMap<Monomial, Rational>;

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn generator(ngens: usize, index: usize, power: u32) -> Self {
        let mut e = vec![0; ngens];
        e[index] = power;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Weighted degree `sum w_i e_i`.
    pub fn weighted(&self, weights: &[u32]) -> u32 {
        self.0.iter().zip(weights).map(|(e, w)| e * w).sum()
    }

    /// Pads (or keeps) the exponent vector to `ngens` entries.
    pub fn padded(&self, ngens: usize) -> Monomial {
        let mut e = self.0.clone();
        e.resize(ngens, 0);
        Monomial(e)
    }

    pub(crate) fn with_exponent(&self, index: usize, value: u32) -> Monomial {
        let mut e = self.0.clone();
        e[index] = value;
        Monomial(e)
    }

    /// Graded-commutative product. Returns `None` when an odd generator would appear
    /// squared, otherwise the product monomial and whether the reordering sign is negative.
    pub fn mul_signed(&self, other: &Monomial, odd: &[bool]) -> Option<(Monomial, bool)> {
        debug_assert_eq!(self.0.len(), other.0.len());
        let mut negative = false;
        // Number of odd generators of `self` with index greater than the current one.
        let mut odd_after: u32 = self
            .0
            .iter()
            .zip(odd)
            .filter(|(e, o)| **o && **e > 0)
            .count() as u32;
        let mut out = Vec::with_capacity(self.0.len());
        for (i, (&a, &b)) in self.0.iter().zip(&other.0).enumerate() {
            if odd[i] {
                if a > 0 {
                    odd_after -= 1;
                }
                if a + b > 1 {
                    return None;
                }
                // Moving other's generator i left past self's odd generators beyond i.
                if b > 0 && odd_after % 2 == 1 {
                    negative = !negative;
                }
            }
            out.push(a + b);
        }
        Some((Monomial(out), negative))
    }
}
