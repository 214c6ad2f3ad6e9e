use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::exactlin::Scalar;

use super::word::BasisWord;

/// Finitely supported linear combination of basis words. Zero coefficients are
/// never stored, so equality is equality of supports and coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    terms: BTreeMap<BasisWord, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(word: BasisWord, coeff: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(word, coeff);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisWord, Scalar)>) -> Self {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of basis words in the support.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&BasisWord, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisWord> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &BasisWord) -> Option<&Scalar> {
        self.terms.get(w)
    }

    /// Largest word of the support under the basis order.
    pub fn leading(&self) -> Option<(&BasisWord, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, w: BasisWord, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &AlgebraElement) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            self.add_term(w.clone(), c * v);
        }
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), c * v)).collect(),
        }
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, v) in &rhs.terms {
            out.add_term(w.clone(), v.clone());
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, v) in &rhs.terms {
            out.add_term(w.clone(), -v);
        }
        out
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), -v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;

    #[test]
    fn cancellation_removes_terms() {
        let f = Field::default();
        let t = BasisWord::Exponents(vec![1]);
        let a = AlgebraElement::monomial(t.clone(), f.from_i64(3));
        let b = AlgebraElement::monomial(t, f.from_i64(3));
        assert!((&a - &b).is_zero());
        assert_eq!(AlgebraElement::monomial(BasisWord::Unit(0, 0), f.zero()), AlgebraElement::zero());
    }
}
