use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::graphlab::GraphSource;

use super::Carrier;

/// JSON field descriptor: `{"type":"gfp","p":32003}` or `{"type":"rational"}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldSpec {
    Gfp { p: u64 },
    Rational,
}

impl FieldSpec {
    pub fn to_field(self) -> Result<Field> {
        match self {
            FieldSpec::Gfp { p } => Field::gfp(p),
            FieldSpec::Rational => Ok(Field::Rational),
        }
    }
}

impl From<Field> for FieldSpec {
    fn from(f: Field) -> Self {
        match f {
            Field::Prime(p) => FieldSpec::Gfp { p },
            Field::Rational => FieldSpec::Rational,
        }
    }
}

/// Algebra spec file.
///
/// ```json
/// {"carrier": "group", "group": "Z^d", "d": 2}
/// {"carrier": "group", "group": "free", "rank": 2}
/// {"carrier": "free", "rank": 2, "field": {"type": "rational"}}
/// {"carrier": "translation", "graph": {"type": "tree", "degree": 3, "radius": 5}, "bound": 1}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub carrier: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSource>,
    /// Propagation bound of a translation algebra (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
}

impl AlgebraSpec {
    pub fn from_json(text: &str) -> Result<AlgebraSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra spec: {e}")))
    }

    /// Builds the carrier; `field_override` wins over the descriptor's field.
    pub fn build(&self, field_override: Option<Field>) -> Result<Arc<Carrier>> {
        let field = match (field_override, self.field) {
            (Some(f), _) => f,
            (None, Some(s)) => s.to_field()?,
            (None, None) => Field::default(),
        };
        let need = |v: Option<usize>, what: &str| v.ok_or_else(|| Error::Parse(format!("algebra spec needs {what:?}")));
        match self.carrier.as_str() {
            "group" => {
                let group = self.group.as_deref().unwrap_or("Z^d");
                if group == "free" {
                    return Ok(Carrier::free_group(need(self.rank, "rank")?, field));
                }
                let d = match group.strip_prefix("Z^") {
                    Some("d") => need(self.d.or(self.rank), "d")?,
                    Some(n) => n
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad group {group:?}")))?,
                    None => return Err(Error::Parse(format!("unknown group {group:?}"))),
                };
                if d == 0 {
                    return Err(Error::Parse("Z^d needs d >= 1".into()));
                }
                Ok(Carrier::abelian(d, field))
            }
            "free" => Ok(Carrier::free_algebra(need(self.rank, "rank")?, field)),
            "translation" => {
                let g = self
                    .graph
                    .as_ref()
                    .ok_or_else(|| Error::Parse("translation algebra needs \"graph\"".into()))?
                    .load()?;
                Ok(Carrier::translation(g, self.bound.unwrap_or(1), field))
            }
            other => Err(Error::Parse(format!("unknown carrier {other:?}"))),
        }
    }
}
