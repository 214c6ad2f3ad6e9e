//! Infinite-dimensional algebras presented by a canonical basis and an
//! effective multiplication of basis words.
//!
//! Supported kinds: the group algebra of `Z^d`, the group algebra of a free
//! group, the free associative algebra, and the translation algebra of a
//! finite graph window (matrix units `E[x, y]` of bounded propagation).

mod element;
mod parse;
mod spec;
mod word;

use std::sync::Arc;

pub use element::AlgebraElement;
pub use spec::{AlgebraSpec, FieldSpec};
pub use word::{inverse_word, is_reduced, reduce_concat, BasisWord};

use crate::error::{Error, Result};
use crate::exactlin::{Field, Scalar};
use crate::graphlab::WindowGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CarrierKind {
    /// Group algebra `k[Z^rank]`.
    Abelian { rank: usize },
    /// Group algebra of the free group `F_rank`.
    FreeGroup { rank: usize },
    /// Free associative algebra `k<x_1, ..., x_rank>`.
    FreeAlgebra { rank: usize },
    Translation(TranslationWindow),
}

/// Translation algebra realized on a finite window.
///
/// `bound` is the declared propagation of user-supplied basis words. Products
/// are not capped: `E[x,y] E[y,z]` may reach up to twice the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationWindow {
    graph: WindowGraph,
    bound: usize,
    dist: Vec<Vec<usize>>,
}

impl TranslationWindow {
    pub fn graph(&self) -> &WindowGraph {
        &self.graph
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.dist[x][y]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Carrier {
    field: Field,
    kind: CarrierKind,
}

impl Carrier {
    pub fn abelian(rank: usize, field: Field) -> Arc<Carrier> {
        Arc::new(Carrier {
            field,
            kind: CarrierKind::Abelian { rank },
        })
    }

    pub fn free_group(rank: usize, field: Field) -> Arc<Carrier> {
        Arc::new(Carrier {
            field,
            kind: CarrierKind::FreeGroup { rank },
        })
    }

    pub fn free_algebra(rank: usize, field: Field) -> Arc<Carrier> {
        Arc::new(Carrier {
            field,
            kind: CarrierKind::FreeAlgebra { rank },
        })
    }

    pub fn translation(graph: WindowGraph, bound: usize, field: Field) -> Arc<Carrier> {
        let dist = graph.all_distances();
        Arc::new(Carrier {
            field,
            kind: CarrierKind::Translation(TranslationWindow { graph, bound, dist }),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> &CarrierKind {
        &self.kind
    }

    pub fn window(&self) -> Option<&TranslationWindow> {
        match &self.kind {
            CarrierKind::Translation(w) => Some(w),
            _ => None,
        }
    }

    pub fn scalar(&self, v: i64) -> Scalar {
        self.field.from_i64(v)
    }

    /// Structural validity: right kind, right rank, reduced, vertices in range.
    fn check_shape(&self, w: &BasisWord) -> Result<()> {
        let ok = match (&self.kind, w) {
            (CarrierKind::Abelian { rank }, BasisWord::Exponents(e)) => e.len() == *rank,
            (CarrierKind::FreeGroup { rank }, BasisWord::Reduced(l)) => {
                l.iter().all(|&x| x != 0 && x.unsigned_abs() as usize <= *rank) && is_reduced(l)
            }
            (CarrierKind::FreeAlgebra { rank }, BasisWord::Monomial(l)) => {
                l.iter().all(|&x| (x as usize) < *rank)
            }
            (CarrierKind::Translation(t), BasisWord::Unit(x, y)) => *x < t.graph.len() && *y < t.graph.len(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidWord(self.format_word(w)))
        }
    }

    /// Full validity of a user-supplied word, including the propagation bound
    /// of translation algebras.
    pub fn check_word(&self, w: &BasisWord) -> Result<()> {
        self.check_shape(w)?;
        if let (CarrierKind::Translation(t), BasisWord::Unit(x, y)) = (&self.kind, w) {
            if t.distance(*x, *y) > t.bound {
                return Err(Error::InvalidWord(format!(
                    "E[{x},{y}] has propagation {} > {}",
                    t.distance(*x, *y),
                    t.bound
                )));
            }
        }
        Ok(())
    }

    pub fn check_element(&self, a: &AlgebraElement) -> Result<()> {
        for (w, c) in a.terms() {
            self.check_shape(w)?;
            if c.field() != self.field {
                return Err(Error::MixedCarriers);
            }
        }
        Ok(())
    }

    /// Product of basis words; `None` is the zero element.
    fn word_product(&self, u: &BasisWord, v: &BasisWord) -> Option<BasisWord> {
        match (u, v) {
            (BasisWord::Exponents(a), BasisWord::Exponents(b)) => {
                Some(BasisWord::Exponents(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            (BasisWord::Reduced(a), BasisWord::Reduced(b)) => Some(BasisWord::Reduced(reduce_concat(a, b))),
            (BasisWord::Monomial(a), BasisWord::Monomial(b)) => {
                Some(BasisWord::Monomial(a.iter().chain(b).copied().collect()))
            }
            (BasisWord::Unit(x, y), BasisWord::Unit(z, w)) => (y == z).then_some(BasisWord::Unit(*x, *w)),
            _ => unreachable!("shape checked"),
        }
    }

    pub fn mul_basis(&self, u: &BasisWord, v: &BasisWord) -> Result<AlgebraElement> {
        self.check_shape(u)?;
        self.check_shape(v)?;
        Ok(match self.word_product(u, v) {
            Some(w) => AlgebraElement::monomial(w, self.field.one()),
            None => AlgebraElement::zero(),
        })
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        let mut out = AlgebraElement::zero();
        for (u, x) in a.terms() {
            for (v, y) in b.terms() {
                if let Some(w) = self.word_product(u, v) {
                    out.add_term(w, x * y);
                }
            }
        }
        Ok(out)
    }

    /// Product of matrices over the algebra; both must be rectangular.
    pub fn mat_mul(&self, x: &[Vec<AlgebraElement>], y: &[Vec<AlgebraElement>]) -> Result<Vec<Vec<AlgebraElement>>> {
        let (rx, cx) = matrix_shape(x)?;
        let (ry, cy) = matrix_shape(y)?;
        if cx != ry {
            return Err(Error::Shape(format!("{rx}x{cx} times {ry}x{cy}")));
        }
        let mut out = vec![vec![AlgebraElement::zero(); cy]; rx];
        for (i, row) in x.iter().enumerate() {
            for (j, cell) in out[i].iter_mut().enumerate() {
                for (k, a) in row.iter().enumerate() {
                    *cell = &*cell + &self.mul(a, &y[k][j])?;
                }
            }
        }
        Ok(out)
    }

    /// `n x n` identity matrix over the algebra.
    pub fn identity_matrix(&self, n: usize) -> Vec<Vec<AlgebraElement>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { self.one() } else { AlgebraElement::zero() }).collect())
            .collect()
    }

    pub fn one(&self) -> AlgebraElement {
        let one = self.field.one();
        match &self.kind {
            CarrierKind::Abelian { rank } => AlgebraElement::monomial(BasisWord::Exponents(vec![0; *rank]), one),
            CarrierKind::FreeGroup { .. } => AlgebraElement::monomial(BasisWord::Reduced(vec![]), one),
            CarrierKind::FreeAlgebra { .. } => AlgebraElement::monomial(BasisWord::Monomial(vec![]), one),
            CarrierKind::Translation(t) => {
                AlgebraElement::from_terms((0..t.graph.len()).map(|x| (BasisWord::Unit(x, x), one.clone())))
            }
        }
    }

    pub fn word(&self, w: BasisWord) -> Result<AlgebraElement> {
        self.check_word(&w)?;
        Ok(AlgebraElement::monomial(w, self.field.one()))
    }

    /// Largest graph distance across the support of a translation-algebra
    /// element; `None` for the other kinds.
    pub fn propagation(&self, a: &AlgebraElement) -> Option<usize> {
        let t = self.window()?;
        Some(
            a.support()
                .map(|w| match w {
                    BasisWord::Unit(x, y) => t.distance(*x, *y),
                    _ => 0,
                })
                .max()
                .unwrap_or(0),
        )
    }

    pub fn generator_names(&self) -> Vec<String> {
        let named = |rank: usize, short: &[&str], prefix: &str| -> Vec<String> {
            if rank <= short.len() {
                short[..rank].iter().map(|s| s.to_string()).collect()
            } else {
                (1..=rank).map(|i| format!("{prefix}{i}")).collect()
            }
        };
        match &self.kind {
            CarrierKind::Abelian { rank: 1 } => vec!["t".into()],
            CarrierKind::Abelian { rank } => named(*rank, &["x", "y", "z"], "t"),
            CarrierKind::FreeGroup { rank } => named(*rank, &["a", "b", "c", "d"], "g"),
            CarrierKind::FreeAlgebra { rank } => named(*rank, &["x", "y", "z"], "x"),
            CarrierKind::Translation(_) => vec![],
        }
    }
}

/// `(rows, cols)` of a non-empty rectangular matrix.
pub fn matrix_shape<T>(m: &[Vec<T>]) -> Result<(usize, usize)> {
    let cols = m.first().map_or(0, Vec::len);
    if cols == 0 || m.iter().any(|r| r.len() != cols) {
        return Err(Error::Shape("matrix must be non-empty and rectangular".into()));
    }
    Ok((m.len(), cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphlab::{gen_graph, GeneratorSpec};

    fn f() -> Field {
        Field::default()
    }

    #[test]
    fn mul_basis_examples() {
        let z = Carrier::abelian(1, f());
        let p = z.mul_basis(&BasisWord::Exponents(vec![2]), &BasisWord::Exponents(vec![-3])).unwrap();
        assert_eq!(p, z.word(BasisWord::Exponents(vec![-1])).unwrap());

        let f2 = Carrier::free_group(2, f());
        let p = f2.mul_basis(&BasisWord::Reduced(vec![1, 2]), &BasisWord::Reduced(vec![-2, 1])).unwrap();
        assert_eq!(p, f2.word(BasisWord::Reduced(vec![1, 1])).unwrap());

        let g = gen_graph(&GeneratorSpec::Path { n: 4 }).unwrap();
        let t = Carrier::translation(g, 3, f());
        let p = t.mul_basis(&BasisWord::Unit(1, 2), &BasisWord::Unit(2, 3)).unwrap();
        assert_eq!(p, t.word(BasisWord::Unit(1, 3)).unwrap());
        assert!(t.mul_basis(&BasisWord::Unit(1, 2), &BasisWord::Unit(3, 3)).unwrap().is_zero());
    }

    #[test]
    fn invalid_words_are_rejected() {
        let z = Carrier::abelian(1, f());
        assert!(z.mul_basis(&BasisWord::Exponents(vec![1, 1]), &BasisWord::Exponents(vec![0])).is_err());
        assert!(z.mul_basis(&BasisWord::Reduced(vec![1]), &BasisWord::Exponents(vec![0])).is_err());
        let f2 = Carrier::free_group(2, f());
        assert!(f2.word(BasisWord::Reduced(vec![1, -1])).is_err());
        assert!(f2.word(BasisWord::Reduced(vec![3])).is_err());
        let g = gen_graph(&GeneratorSpec::Path { n: 4 }).unwrap();
        let t = Carrier::translation(g, 1, f());
        assert!(t.word(BasisWord::Unit(0, 9)).is_err());
        assert!(t.word(BasisWord::Unit(0, 2)).is_err(), "beyond propagation bound");
        // products may exceed the declared bound
        let e01 = t.word(BasisWord::Unit(0, 1)).unwrap();
        let e12 = t.word(BasisWord::Unit(1, 2)).unwrap();
        let p = t.mul(&e01, &e12).unwrap();
        assert_eq!(t.propagation(&p), Some(2));
    }

    #[test]
    fn mixed_carriers_rejected() {
        let z = Carrier::abelian(1, f());
        let fa = Carrier::free_algebra(2, f());
        assert_eq!(z.mul(&z.one(), &fa.one()), Err(Error::InvalidWord("1".into())));
        let zq = Carrier::abelian(1, Field::Rational);
        assert_eq!(z.mul(&z.one(), &zq.one()), Err(Error::MixedCarriers));
    }

    #[test]
    fn units() {
        let z = Carrier::abelian(1, f());
        assert_eq!(z.one(), z.word(BasisWord::Exponents(vec![0])).unwrap());
        let g = gen_graph(&GeneratorSpec::Path { n: 3 }).unwrap();
        let t = Carrier::translation(g, 1, f());
        assert_eq!(t.one().len(), 3);
        assert_eq!(t.one(), t.parse_element("E[0,0] + E[1,1] + E[2,2]").unwrap());
    }
}
