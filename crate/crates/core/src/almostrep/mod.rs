//! ε-almost representations: a unital linear map `psi: L -> End(V)` from a
//! finite-dimensional subspace `L` (containing 1) of an algebra, together with
//! a subspace `V_eps` of `V` (the core) on which `psi(a) psi(b) v = psi(ab) v`
//! for every certified product `a b` of `L`. The defect is the exact ratio
//! `(dim V - dim V_eps) / dim V`.
//!
//! Multiplicativity is certified over the [`MultTable`] of `L`: all ordered
//! pairs of echelon basis elements whose product lies in `L`. Each such pair
//! is one instance of the defining condition; the full nonlinear set of pairs
//! `(a, b)` with `a, b, ab` in `L` is not enumerated.

mod build;
mod io;
mod ops;
mod verify;

pub use build::{build_from_folner, folner_build, mult_table, FolnerRepBuild};
pub use ops::{amplify, apply_coords, apply_matrix, tensor};
pub use verify::{verify, VerificationReport};

use crate::carrier::AlgebraElement;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat, Scalar};
use crate::folner::FinSubspace;
use crate::Ratio;

/// One certified product: `basis[left] * basis[right] = sum_k coeffs[k] basis[k]`.
/// A zero product has an all-zero coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub left: usize,
    pub right: usize,
    pub coeffs: Vec<Scalar>,
}

impl TableEntry {
    pub fn is_zero_product(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultTable {
    pub entries: Vec<TableEntry>,
}

impl MultTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, left: usize, right: usize) -> Option<&TableEntry> {
        self.entries.iter().find(|e| e.left == left && e.right == right)
    }
}

#[derive(Clone, Debug)]
pub struct AlmostRep {
    field: Field,
    labels: Vec<String>,
    unit: Vec<Scalar>,
    table: MultTable,
    images: Vec<Mat>,
    core: Mat,
    defect: Ratio,
    source: Option<FinSubspace>,
}

impl AlmostRep {
    /// Assembles a representation from raw parts. `labels`, `unit` and
    /// `images` are indexed by the basis of `L`; `core` holds independent
    /// columns in `V`.
    pub fn from_parts(
        field: Field,
        labels: Vec<String>,
        unit: Vec<Scalar>,
        table: MultTable,
        images: Vec<Mat>,
        core: Mat,
        source: Option<FinSubspace>,
    ) -> Result<AlmostRep> {
        let dim_l = labels.len();
        if dim_l == 0 || unit.len() != dim_l || images.len() != dim_l {
            return Err(Error::DimensionMismatch(format!(
                "{dim_l} labels, {} unit coordinates, {} images",
                unit.len(),
                images.len()
            )));
        }
        let v_dim = images[0].rows();
        if v_dim == 0 {
            return Err(Error::ZeroDimensional);
        }
        if images.iter().any(|m| m.rows() != v_dim || m.cols() != v_dim || m.field() != field) {
            return Err(Error::DimensionMismatch("images must be square of a common size".into()));
        }
        if core.rows() != v_dim || core.field() != field {
            return Err(Error::DimensionMismatch("core lives in a different space".into()));
        }
        if core.rank() != core.cols() {
            return Err(Error::DimensionMismatch("core columns are dependent".into()));
        }
        for e in &table.entries {
            if e.left >= dim_l || e.right >= dim_l || e.coeffs.len() != dim_l {
                return Err(Error::DimensionMismatch(format!(
                    "table entry ({}, {}) out of range",
                    e.left, e.right
                )));
            }
        }
        if let Some(s) = &source {
            if s.dim() != dim_l {
                return Err(Error::DimensionMismatch("source subspace dimension".into()));
            }
        }
        let defect = Ratio::new((v_dim - core.cols()) as i64, v_dim as i64);
        Ok(AlmostRep {
            field,
            labels,
            unit,
            table,
            images,
            core,
            defect,
            source,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn v_dim(&self) -> usize {
        self.images[0].rows()
    }

    pub fn dim_l(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Coordinates of 1 in the basis of `L`.
    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn table(&self) -> &MultTable {
        &self.table
    }

    pub fn images(&self) -> &[Mat] {
        &self.images
    }

    pub fn core(&self) -> &Mat {
        &self.core
    }

    pub fn core_dim(&self) -> usize {
        self.core.cols()
    }

    pub fn defect(&self) -> Ratio {
        self.defect
    }

    /// The subspace `L` of the carrier, when the representation was built
    /// from one (amplified and tensored representations have none).
    pub fn source(&self) -> Option<&FinSubspace> {
        self.source.as_ref()
    }

    /// `psi` applied to the element with coordinates `coords`.
    pub fn image_of_coords(&self, coords: &[Scalar]) -> Mat {
        assert_eq!(coords.len(), self.dim_l(), "coordinate vector length");
        let mut out = Mat::zeros(self.field, self.v_dim(), self.v_dim());
        for (c, m) in coords.iter().zip(&self.images) {
            out.add_scaled(c, m);
        }
        out
    }

    pub fn image_of(&self, a: &AlgebraElement) -> Result<Mat> {
        let l = self
            .source
            .as_ref()
            .ok_or_else(|| Error::NotInSubspace("representation has no source subspace".into()))?;
        Ok(self.image_of_coords(&l.coords(a)?))
    }

    pub fn unit_image(&self) -> Mat {
        self.image_of_coords(&self.unit)
    }

    /// Same representation with one image replaced. Used to exercise the
    /// verifier; the stored core is kept as is.
    pub fn with_image(&self, i: usize, m: Mat) -> Result<AlmostRep> {
        let mut images = self.images.clone();
        *images
            .get_mut(i)
            .ok_or_else(|| Error::DimensionMismatch(format!("no basis element {i}")))? = m;
        AlmostRep::from_parts(
            self.field,
            self.labels.clone(),
            self.unit.clone(),
            self.table.clone(),
            images,
            self.core.clone(),
            self.source.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::Carrier;
    use crate::folner::{span, ExhaustionKind, ExhaustionSpec};

    fn kz(n: usize) -> AlmostRep {
        let c = Carrier::abelian(1, Field::default());
        let gens: Vec<_> = ["1", "t", "t^-1"].iter().map(|s| c.parse_element(s).unwrap()).collect();
        let l = span(&c, &gens).unwrap();
        let q = ExhaustionSpec::new(ExhaustionKind::Ball).subspace(&c, n).unwrap();
        build_from_folner(&l, &q).unwrap()
    }

    fn trivial() -> AlmostRep {
        let c = Carrier::abelian(1, Field::default());
        let l = span(&c, &[c.one()]).unwrap();
        let q = ExhaustionSpec::new(ExhaustionKind::Ball).subspace(&c, 0).unwrap();
        build_from_folner(&l, &q).unwrap()
    }

    #[test]
    fn kz_ball_five() {
        let rep = kz(5);
        assert_eq!((rep.v_dim(), rep.core_dim()), (11, 9));
        assert_eq!(rep.defect(), Ratio::new(2, 11));
        // Q's echelon basis is t^-5, t^5, t^-4, t^4, ..., 1 (shortlex
        // descending): the core is spanned by all but the first two.
        let mut want = Mat::zeros(rep.field(), 11, 9);
        for j in 0..9 {
            want.set(j + 2, j, rep.field().one());
        }
        assert!(rep.core().span_eq(&want));
        let rv = verify(&rep);
        assert!(rv.passed());
        assert_eq!(rv.max_core_dim(), 9);
        assert!(rv.max_core.span_contains(rep.core()));
        let b = folner_build(rep.source().unwrap(), &ExhaustionSpec::new(ExhaustionKind::Ball).subspace(rep.source().unwrap().carrier(), 5).unwrap()).unwrap();
        assert!(rep.defect() <= b.defect_bound());
    }

    #[test]
    fn defect_closed_form() {
        for n in 1..=8 {
            assert_eq!(kz(n).defect(), Ratio::new(2, 2 * n as i64 + 1));
        }
    }

    #[test]
    fn unit_only_is_exact() {
        let c = Carrier::abelian(1, Field::default());
        let l = span(&c, &[c.one()]).unwrap();
        let q = ExhaustionSpec::new(ExhaustionKind::Ball).subspace(&c, 3).unwrap();
        let rep = build_from_folner(&l, &q).unwrap();
        assert_eq!(rep.defect(), Ratio::from_integer(0));
        let rv = verify(&rep);
        assert_eq!(rv.max_core_dim(), 7);
        assert_eq!(rv.max_core_defect, Ratio::from_integer(0));
    }

    #[test]
    fn corruption_is_detected() {
        let rep = kz(5);
        let t_idx = rep.labels().iter().position(|s| s == "t").unwrap();
        let mut m = rep.images()[t_idx].clone();
        // column of 1 (the last basis element) lies in the core
        let f = rep.field();
        m.set(0, 10, &m.get(0, 10).clone() + &f.one());
        let bad = rep.with_image(t_idx, m).unwrap();
        assert!(!verify(&bad).passed());
        let one_idx = rep.labels().iter().position(|s| s == "1").unwrap();
        let bad = rep.with_image(one_idx, Mat::zeros(f, 11, 11)).unwrap();
        assert!(!verify(&bad).unit_ok);
    }

    #[test]
    fn amplification() {
        let rep = kz(5);
        for n in 1..=3 {
            let a = amplify(&rep, n).unwrap();
            assert_eq!(a.v_dim(), 11 * n);
            assert_eq!(a.core_dim(), 9 * n);
            assert_eq!(a.defect(), rep.defect());
            let rv = verify(&a);
            assert!(rv.passed(), "n = {n}");
            assert!(rv.max_core_dim() >= 9 * n);
        }
        assert_eq!(amplify(&rep, 0).unwrap_err(), Error::ZeroFactor);
        assert_eq!(amplify(&trivial(), 2).unwrap().defect(), Ratio::from_integer(0));
    }

    #[test]
    fn tensor_products() {
        let rep = kz(5);
        let t = tensor(&rep, &rep).unwrap();
        assert_eq!((t.v_dim(), t.core_dim()), (121, 81));
        assert_eq!(t.defect(), Ratio::new(40, 121));
        assert!(verify(&t).passed());
        let with_trivial = tensor(&rep, &trivial()).unwrap();
        assert_eq!(with_trivial.defect(), rep.defect());
        assert!(verify(&with_trivial).passed());
        let c = Carrier::abelian(1, Field::Rational);
        let l = span(&c, &[c.one()]).unwrap();
        let q = span(&c, &[c.one()]).unwrap();
        let rat = build_from_folner(&l, &q).unwrap();
        assert!(matches!(tensor(&rep, &rat), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn matrices_over_l() {
        let rep = kz(5);
        let c = rep.source().unwrap().carrier().clone();
        let e = |s: &str| c.parse_element(s).unwrap();
        let id = apply_matrix(&rep, &[vec![e("1"), AlgebraElement::zero()], vec![AlgebraElement::zero(), e("1")]]).unwrap();
        assert!(id.is_identity());
        let t = apply_matrix(&rep, &[vec![e("t")]]).unwrap();
        assert_eq!(t, rep.image_of(&e("t")).unwrap());
        // [t; 1] [t^-1, 1] agrees with the entrywise products on core vectors
        let col = apply_matrix(&rep, &[vec![e("t")], vec![e("1")]]).unwrap();
        let row = apply_matrix(&rep, &[vec![e("t^-1"), e("1")]]).unwrap();
        let prod = apply_matrix(&rep, &[vec![e("1"), e("t")], vec![e("t^-1"), e("1")]]).unwrap();
        let core2 = crate::exactlin::kron(&Mat::identity(rep.field(), 2), rep.core());
        assert_eq!(&(&col * &row) * &core2, &prod * &core2);
        assert!(apply_matrix(&rep, &[vec![e("t^2")]]).is_err());
    }
}
