use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use super::monomial::{Monomial, Terms};
use crate::linalg::Rational;

/// Sparse rational combination of monomials of one presentation.
///
/// Elements produced by [`GradedRing`](super::GradedRing) arithmetic are in normal form.
/// Linear operations (`+`, `-`, scaling) preserve normal form and need no ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub(crate) ring: u64,
    pub(crate) terms: Terms,
}

impl Element {
    pub(crate) fn from_terms(ring: u64, mut terms: Terms) -> Self {
        terms.retain(|_, c| !c.is_zero());
        Element { ring, terms }
    }

    pub fn ring_id(&self) -> u64 {
        self.ring
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Element {
        if c.is_zero() {
            return Element::from_terms(self.ring, Terms::new());
        }
        Element {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Element {
        Element {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn combine(&self, other: &Element, negate: bool) -> Element {
        assert_eq!(
            self.ring, other.ring,
            "adding elements of different presentations"
        );
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_insert_with(Rational::zero);
            if negate {
                *e -= c;
            } else {
                *e += c;
            }
        }
        Element::from_terms(self.ring, terms)
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.combine(rhs, false)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        self.combine(&rhs, false)
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.combine(rhs, true)
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        self.combine(&rhs, true)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}
