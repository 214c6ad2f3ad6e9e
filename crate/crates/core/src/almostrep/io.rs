use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::carrier::{Carrier, FieldSpec};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat, Scalar};
use crate::folner::span;
use crate::{parse_ratio, ratio_string};

use super::{AlmostRep, MultTable, TableEntry};

/// GF(p) scalars serialize as residues, rationals as `"num/den"` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Int(i64),
    Text(String),
}

impl ScalarRepr {
    fn of(s: &Scalar) -> ScalarRepr {
        match s {
            Scalar::Mod { value, .. } => ScalarRepr::Int(*value as i64),
            Scalar::Rat(_) => ScalarRepr::Text(s.to_exact_string()),
        }
    }

    fn to_scalar(&self, f: Field) -> Result<Scalar> {
        match self {
            ScalarRepr::Int(v) => Ok(f.from_i64(*v)),
            ScalarRepr::Text(t) => f.parse_scalar(t),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct EntryRepr {
    left: usize,
    right: usize,
    coeffs: Vec<ScalarRepr>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepFile {
    field: FieldSpec,
    labels: Vec<String>,
    unit: Vec<ScalarRepr>,
    v_dim: usize,
    /// Row-major images, one per basis element of `L`.
    images: Vec<Vec<Vec<ScalarRepr>>>,
    /// Core basis vectors.
    core: Vec<Vec<ScalarRepr>>,
    defect: String,
    table: Vec<EntryRepr>,
}

fn vec_repr(v: &[Scalar]) -> Vec<ScalarRepr> {
    v.iter().map(ScalarRepr::of).collect()
}

fn vec_from(v: &[ScalarRepr], f: Field) -> Result<Vec<Scalar>> {
    v.iter().map(|s| s.to_scalar(f)).collect()
}

impl AlmostRep {
    pub fn to_json(&self) -> serde_json::Value {
        let file = RepFile {
            field: self.field().into(),
            labels: self.labels().to_vec(),
            unit: vec_repr(self.unit()),
            v_dim: self.v_dim(),
            images: self
                .images()
                .iter()
                .map(|m| (0..m.rows()).map(|i| vec_repr(m.row(i))).collect())
                .collect(),
            core: self.core().columns().iter().map(|c| vec_repr(c)).collect(),
            defect: ratio_string(&self.defect()),
            table: self
                .table()
                .entries
                .iter()
                .map(|e| EntryRepr {
                    left: e.left,
                    right: e.right,
                    coeffs: vec_repr(&e.coeffs),
                })
                .collect(),
        };
        serde_json::to_value(file).expect("representation serializes")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<AlmostRep> {
        let file: RepFile =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("representation: {e}")))?;
        let f = file.field.to_field()?;
        let n = file.v_dim;
        let images = file
            .images
            .iter()
            .map(|rows| {
                if rows.len() != n {
                    return Err(Error::DimensionMismatch(format!("image with {} rows, v_dim {n}", rows.len())));
                }
                Mat::from_rows(f, rows.iter().map(|r| vec_from(r, f)).collect::<Result<_>>()?)
            })
            .collect::<Result<Vec<_>>>()?;
        let core_cols = file.core.iter().map(|c| vec_from(c, f)).collect::<Result<Vec<_>>>()?;
        let core = Mat::from_columns(f, n, &core_cols)?;
        let table = MultTable {
            entries: file
                .table
                .iter()
                .map(|e| {
                    Ok(TableEntry {
                        left: e.left,
                        right: e.right,
                        coeffs: vec_from(&e.coeffs, f)?,
                    })
                })
                .collect::<Result<_>>()?,
        };
        let rep = AlmostRep::from_parts(f, file.labels, vec_from(&file.unit, f)?, table, images, core, None)?;
        let stated = parse_ratio(&file.defect)?;
        if stated != rep.defect() {
            return Err(Error::Parse(format!(
                "stated defect {} disagrees with core ({})",
                file.defect,
                ratio_string(&rep.defect())
            )));
        }
        Ok(rep)
    }

    pub fn from_json(text: &str) -> Result<AlmostRep> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("representation: {e}")))?;
        AlmostRep::from_json_value(&v)
    }

    /// Re-attaches `L` by parsing the labels in `c`. The labels must be the
    /// echelon basis of their span, in order.
    pub fn attach_source(&self, c: &Arc<Carrier>) -> Result<AlmostRep> {
        if c.field() != self.field() {
            return Err(Error::FieldMismatch(c.field().to_string(), self.field().to_string()));
        }
        let elems = self
            .labels()
            .iter()
            .map(|s| c.parse_element(s))
            .collect::<Result<Vec<_>>>()?;
        let l = span(c, &elems)?;
        if l.basis() != elems.as_slice() {
            return Err(Error::Parse("labels are not an echelon basis in this algebra".into()));
        }
        let mut out = self.clone();
        out.source = Some(l);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::almostrep::build_from_folner;
    use crate::folner::{ExhaustionKind, ExhaustionSpec};

    fn rep(field: Field) -> (Arc<Carrier>, AlmostRep) {
        let c = Carrier::abelian(1, field);
        let gens: Vec<_> = ["1", "t", "t^-1"].iter().map(|s| c.parse_element(s).unwrap()).collect();
        let l = span(&c, &gens).unwrap();
        let q = ExhaustionSpec::new(ExhaustionKind::Ball).subspace(&c, 3).unwrap();
        (c.clone(), build_from_folner(&l, &q).unwrap())
    }

    #[test]
    fn json_round_trip() {
        for f in [Field::default(), Field::Rational] {
            let (c, r) = rep(f);
            let back = AlmostRep::from_json(&r.to_json().to_string()).unwrap();
            assert_eq!(back.images(), r.images());
            assert_eq!(back.core(), r.core());
            assert_eq!(back.table(), r.table());
            assert_eq!(back.defect(), r.defect());
            assert!(back.source().is_none());
            let att = back.attach_source(&c).unwrap();
            assert_eq!(att.source(), r.source());
        }
    }

    #[test]
    fn inconsistent_defect_rejected() {
        let (_, r) = rep(Field::default());
        let mut v = r.to_json();
        v["defect"] = serde_json::json!("0/1");
        assert!(AlmostRep::from_json_value(&v).is_err());
    }
}
