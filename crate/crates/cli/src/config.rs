use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use almostfin::almostrep::{build_from_folner, AlmostRep};
use almostfin::carrier::{AlgebraElement, AlgebraSpec, Carrier, CarrierKind};
use almostfin::exactlin::Field;
use almostfin::folner::{span, ExhaustionKind, ExhaustionSpec, FinSubspace};
use almostfin::graphlab::{GraphSource, WindowGraph};
use almostfin::{Error, Result};

/// A value given inline or as a path to a JSON file (relative to the config).
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum InlineOrPath<T> {
    Path(String),
    Inline(T),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

/// Run configuration; every key is optional and command-specific.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub algebra: Option<InlineOrPath<AlgebraSpec>>,
    /// Basis literals of `L`.
    #[serde(rename = "L")]
    pub l: Option<Vec<String>>,
    /// folner-scan: literals of `B`. audit-rank: the `n x m` matrix `B`.
    #[serde(rename = "B")]
    pub b: Option<Value>,
    /// audit-rank: the `m x n` matrix `A`.
    #[serde(rename = "A")]
    pub a_matrix: Option<Vec<Vec<String>>>,
    /// Explicit `Q` literals; otherwise `Q` is the `n`-th exhaustion subspace.
    #[serde(rename = "Q")]
    pub q: Option<Vec<String>>,
    pub exhaustion: Option<ExhaustionSpec>,
    /// Exhaustion index for single builds.
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    /// amplify: matrix size.
    pub factor: Option<usize>,
    pub rep: Option<InlineOrPath<Value>>,
    pub rep_b: Option<InlineOrPath<Value>>,
    /// Writes the built representation to this path.
    pub save_rep: Option<String>,
    pub graph: Option<GraphSource>,
    #[serde(rename = "K")]
    pub k: Option<OneOrMany>,
    /// Writes the paradoxical pair to this path.
    pub save_pair: Option<String>,
    /// audit-rank: `[m, n]` for randomized trials.
    pub shape: Option<[usize; 2]>,
    pub trials: Option<usize>,
    /// commutator-check: explicit integer matrices.
    #[serde(rename = "T")]
    pub t: Option<Vec<Vec<i64>>>,
    #[serde(rename = "S")]
    pub s: Option<Vec<Vec<i64>>>,
    /// commutator-check: `T = psi(elements[0])`, `S = psi(elements[1])`.
    pub elements: Option<[String; 2]>,
    /// commutator-check: inclusive size range of randomized trials.
    pub sizes: Option<[usize; 2]>,
    /// rr-estimate: the element `p`.
    pub p: Option<String>,
    /// rr-estimate: multiplier `a` for the ideal-property check.
    pub a: Option<String>,
    pub field: Option<String>,
}

/// Configuration plus command-line overrides, with paths resolved against
/// the directory of the config file.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub cfg: Config,
    pub base: PathBuf,
    pub field: Option<Field>,
    pub n_max: Option<usize>,
    pub k: Option<usize>,
    pub seed: u64,
}

pub fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        serde_json::from_value(read_json(path)?).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))
    }
}

impl Resolved {
    pub fn path(&self, p: &str) -> PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    fn inline<T: serde::de::DeserializeOwned + Clone>(&self, v: &InlineOrPath<T>) -> Result<T> {
        match v {
            InlineOrPath::Inline(t) => Ok(t.clone()),
            InlineOrPath::Path(p) => {
                serde_json::from_value(read_json(&self.path(p))?).map_err(|e| Error::Parse(format!("{p}: {e}")))
            }
        }
    }

    pub fn field(&self) -> Result<Option<Field>> {
        match (self.field, &self.cfg.field) {
            (Some(f), _) => Ok(Some(f)),
            (None, Some(s)) => Ok(Some(s.parse()?)),
            (None, None) => Ok(None),
        }
    }

    pub fn algebra_spec(&self) -> Result<AlgebraSpec> {
        let spec = self.cfg.algebra.as_ref().ok_or_else(|| usage("config needs \"algebra\""))?;
        let mut spec = self.inline(spec)?;
        if let Some(GraphSource::File(p)) = &spec.graph {
            spec.graph = Some(GraphSource::File(self.path(p).to_string_lossy().into_owned()));
        }
        Ok(spec)
    }

    pub fn carrier(&self) -> Result<Arc<Carrier>> {
        self.algebra_spec()?.build(self.field()?)
    }

    pub fn graph(&self) -> Result<WindowGraph> {
        match &self.cfg.graph {
            Some(GraphSource::File(p)) => WindowGraph::from_file(self.path(p)),
            Some(g) => g.load(),
            None => Err(usage("config needs \"graph\"")),
        }
    }

    pub fn ks(&self) -> Vec<usize> {
        match (self.k, &self.cfg.k) {
            (Some(k), _) => vec![k],
            (None, Some(OneOrMany::One(k))) => vec![*k],
            (None, Some(OneOrMany::Many(ks))) => ks.clone(),
            (None, None) => vec![1],
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max.or(self.cfg.n_max).unwrap_or(10)
    }

    pub fn index(&self) -> usize {
        self.cfg.n.unwrap_or(5)
    }

    pub fn exhaustion(&self, c: &Carrier) -> ExhaustionSpec {
        self.cfg.exhaustion.clone().unwrap_or_else(|| {
            ExhaustionSpec::new(match c.kind() {
                CarrierKind::FreeAlgebra { .. } => ExhaustionKind::Length,
                _ => ExhaustionKind::Ball,
            })
        })
    }

    pub fn elements(&self, c: &Carrier, lits: &[String]) -> Result<Vec<AlgebraElement>> {
        lits.iter().map(|s| c.parse_element(s)).collect()
    }

    /// `L` from the config, or `1` plus the generators (and their inverses
    /// in groups).
    pub fn l(&self, c: &Arc<Carrier>) -> Result<FinSubspace> {
        let lits = match &self.cfg.l {
            Some(l) => l.clone(),
            None => default_l(c)?,
        };
        let gens = self.elements(c, &lits)?;
        let l = span(c, &gens)?;
        if !l.contains_one() {
            return Err(usage("L must contain 1"));
        }
        Ok(l)
    }

    pub fn q(&self, c: &Arc<Carrier>, n: usize) -> Result<FinSubspace> {
        match &self.cfg.q {
            Some(q) => span(c, &self.elements(c, q)?),
            None => self.exhaustion(c).subspace(c, n),
        }
    }

    /// The representation named by `key` (`rep` or `rep_b`), or the Følner
    /// build of the config's algebra.
    pub fn rep(&self, which: Option<&InlineOrPath<Value>>) -> Result<AlmostRep> {
        match which {
            Some(v) => {
                let rep = AlmostRep::from_json_value(&self.inline(v)?)?;
                match &self.cfg.algebra {
                    Some(_) => rep.attach_source(&self.carrier()?),
                    None => Ok(rep),
                }
            }
            None => {
                let c = self.carrier()?;
                let l = self.l(&c)?;
                let q = self.q(&c, self.index())?;
                if q.dim() == 0 {
                    return Err(usage("Q is zero-dimensional"));
                }
                build_from_folner(&l, &q)
            }
        }
    }
}

fn default_l(c: &Carrier) -> Result<Vec<String>> {
    let names = c.generator_names();
    let mut out = vec!["1".to_string()];
    match c.kind() {
        CarrierKind::Abelian { .. } | CarrierKind::FreeGroup { .. } => {
            for g in names {
                out.push(g.clone());
                out.push(format!("{g}^-1"));
            }
        }
        CarrierKind::FreeAlgebra { .. } => out.extend(names),
        CarrierKind::Translation(_) => return Err(usage("translation algebras need an explicit \"L\"")),
    }
    Ok(out)
}
