use crate::error::{Error, Result};
use crate::exactlin::{intersect, Mat};
use crate::folner::{product_space, same_carrier, FinSubspace};
use crate::Ratio;

use super::{AlmostRep, MultTable, TableEntry};

/// All ordered basis pairs `(i, j)` of `L` with `b_i b_j` in `L`.
pub fn mult_table(l: &FinSubspace) -> Result<MultTable> {
    let c = l.carrier();
    let mut entries = Vec::new();
    for (i, x) in l.basis().iter().enumerate() {
        for (j, y) in l.basis().iter().enumerate() {
            let xy = c.mul(x, y)?;
            if l.contains(&xy) {
                entries.push(TableEntry {
                    left: i,
                    right: j,
                    coeffs: l.lead_coefficients(&xy),
                });
            }
        }
    }
    Ok(MultTable { entries })
}

/// Intermediate objects of the Følner construction.
///
/// `V = Q` with its echelon basis. The ambient space is `LQ`; all ambient
/// matrices are written in the echelon basis of `LQ`. The complement of `Q`
/// is the span of the basis words that are not leading words of `Q`, so the
/// projection `P` reads off coefficients at `Q`'s leading words.
#[derive(Clone, Debug)]
pub struct FolnerRepBuild {
    pub l: FinSubspace,
    pub q: FinSubspace,
    pub ambient: FinSubspace,
    /// `dim LQ x dim Q`: inclusion of `Q` into `LQ`.
    pub embedding: Mat,
    /// `dim Q x dim LQ`: projection coordinates.
    pub coordinates: Mat,
    /// `dim LQ x dim LQ`: `P = embedding * coordinates`.
    pub projection: Mat,
    /// Left multiplication `m_x: Q -> LQ`, one per basis element of `L`.
    pub mult_ops: Vec<Mat>,
}

impl FolnerRepBuild {
    /// `m_x - P m_x`, whose kernel is `{v in Q : x v in Q}`.
    pub fn defect_op(&self, i: usize) -> Mat {
        &self.mult_ops[i] - &(&self.projection * &self.mult_ops[i])
    }

    /// `psi(x_i) = P m_x` in the basis of `Q`.
    pub fn image(&self, i: usize) -> Mat {
        &self.coordinates * &self.mult_ops[i]
    }

    /// `sum_x rank(m_x - P m_x) / dim Q`, an upper bound on the defect.
    pub fn defect_bound(&self) -> Ratio {
        let total: usize = (0..self.mult_ops.len()).map(|i| self.defect_op(i).rank()).sum();
        Ratio::new(total as i64, self.q.dim() as i64)
    }
}

pub fn folner_build(l: &FinSubspace, q: &FinSubspace) -> Result<FolnerRepBuild> {
    if !same_carrier(l.carrier(), q.carrier()) {
        return Err(Error::MixedCarriers);
    }
    if q.dim() == 0 {
        return Err(Error::ZeroDimensional);
    }
    if !l.contains_one() {
        return Err(Error::MissingUnit);
    }
    let c = l.carrier();
    let field = c.field();
    let ambient = product_space(l, q)?;
    let dq = q.dim();
    let da = ambient.dim();

    let embedding = Mat::from_columns(
        field,
        da,
        &q.basis().iter().map(|v| ambient.coords(v)).collect::<Result<Vec<_>>>()?,
    )?;
    let coordinates = Mat::from_columns(
        field,
        dq,
        &ambient.basis().iter().map(|a| q.lead_coefficients(a)).collect::<Vec<_>>(),
    )?;
    let projection = &embedding * &coordinates;
    let mult_ops = l
        .basis()
        .iter()
        .map(|x| {
            let cols = q
                .basis()
                .iter()
                .map(|v| ambient.coords(&c.mul(x, v)?))
                .collect::<Result<Vec<_>>>()?;
            Mat::from_columns(field, da, &cols)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FolnerRepBuild {
        l: l.clone(),
        q: q.clone(),
        ambient,
        embedding,
        coordinates,
        projection,
        mult_ops,
    })
}

/// `psi(a) v = P(a v)` on `V = Q`, with core `∩_x Ker(m_x - P m_x)`.
pub fn build_from_folner(l: &FinSubspace, q: &FinSubspace) -> Result<AlmostRep> {
    let b = folner_build(l, q)?;
    let kernels: Vec<Mat> = (0..l.dim()).map(|i| b.defect_op(i).kernel_basis()).collect();
    let core = intersect(&kernels)?;
    let images = (0..l.dim()).map(|i| b.image(i)).collect();
    let unit = l.coords(&l.carrier().one())?;
    AlmostRep::from_parts(
        l.carrier().field(),
        l.labels(),
        unit,
        mult_table(l)?,
        images,
        core,
        Some(l.clone()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::Carrier;
    use crate::exactlin::Field;
    use crate::folner::{span, ExhaustionKind, ExhaustionSpec};

    fn kz_l() -> FinSubspace {
        let c = Carrier::abelian(1, Field::default());
        let gens: Vec<_> = ["1", "t", "t^-1"].iter().map(|s| c.parse_element(s).unwrap()).collect();
        span(&c, &gens).unwrap()
    }

    #[test]
    fn kz_mult_table() {
        let l = kz_l();
        let t = mult_table(&l).unwrap();
        assert_eq!(t.len(), 7);
        // basis order: t^-1, t, 1
        assert_eq!(l.labels(), vec!["t^-1", "t", "1"]);
        assert!(t.get(1, 1).is_none(), "t*t is outside L");
        assert!(t.get(0, 0).is_none());
        assert_eq!(t.get(0, 1).unwrap().coeffs, l.coords(&l.carrier().one()).unwrap());
    }

    #[test]
    fn unit_only_table() {
        let c = Carrier::abelian(1, Field::default());
        let l = span(&c, &[c.one()]).unwrap();
        assert_eq!(mult_table(&l).unwrap().len(), 1);
    }

    #[test]
    fn free_algebra_table() {
        let c = Carrier::free_algebra(2, Field::default());
        let l = span(&c, &[c.one(), c.parse_element("x").unwrap()]).unwrap();
        let t = mult_table(&l).unwrap();
        // (1,1), (1,x), (x,1); x*x is outside L
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn projection_is_idempotent() {
        let l = kz_l();
        let q = ExhaustionSpec::new(ExhaustionKind::Ball).subspace(l.carrier(), 4).unwrap();
        let b = folner_build(&l, &q).unwrap();
        assert_eq!(&b.projection * &b.projection, b.projection);
        assert_eq!(&b.projection * &b.embedding, b.embedding);
        assert!((&b.coordinates * &b.embedding).is_identity());
    }

    #[test]
    fn build_errors() {
        let l = kz_l();
        let c = l.carrier();
        let empty = span(c, &[]).unwrap();
        assert_eq!(build_from_folner(&l, &empty).unwrap_err(), Error::ZeroDimensional);
        let other = Carrier::abelian(2, Field::default());
        let q2 = span(&other, &[other.one()]).unwrap();
        assert_eq!(build_from_folner(&l, &q2).unwrap_err(), Error::MixedCarriers);
    }
}
