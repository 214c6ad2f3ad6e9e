//! Finite-dimensional subspaces of a carrier, product spaces `BQ`, Følner
//! ratios `(dim BQ - dim Q) / dim Q` and scans over canonical exhaustions.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::carrier::{reduce_concat, AlgebraElement, BasisWord, Carrier, CarrierKind};
use crate::error::{Error, Result};
use crate::exactlin::Scalar;
use crate::graphlab::Layout;
use crate::Ratio;

/// A finite-dimensional subspace in reduced echelon form.
///
/// Basis elements are monic at their leading (largest) word, listed with
/// strictly decreasing leading words, and no basis element mentions another
/// one's leading word. The coordinate of `v` on basis element `i` is therefore
/// just the coefficient of `v` at leading word `i`.
#[derive(Clone, Debug)]
pub struct FinSubspace {
    carrier: Arc<Carrier>,
    basis: Vec<AlgebraElement>,
    leads: BTreeMap<BasisWord, usize>,
    contains_one: bool,
}

fn reduce_rows(rows: &BTreeMap<BasisWord, AlgebraElement>, v: &AlgebraElement) -> AlgebraElement {
    let mut r = v.clone();
    for (w, c) in v.terms() {
        if let Some(b) = rows.get(w) {
            r.add_scaled(&-c, b);
        }
    }
    r
}

fn insert_row(rows: &mut BTreeMap<BasisWord, AlgebraElement>, v: &AlgebraElement) -> bool {
    let r = reduce_rows(rows, v);
    let Some((lead, c)) = r.leading() else {
        return false;
    };
    let lead = lead.clone();
    let r = r.scale(&c.inv().expect("nonzero leading coefficient"));
    for b in rows.values_mut() {
        if let Some(x) = b.coeff(&lead).cloned() {
            b.add_scaled(&-x, &r);
        }
    }
    rows.insert(lead, r);
    true
}

pub(crate) fn same_carrier(a: &Arc<Carrier>, b: &Arc<Carrier>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FinSubspace {
    fn from_rows(carrier: Arc<Carrier>, rows: BTreeMap<BasisWord, AlgebraElement>) -> FinSubspace {
        let basis: Vec<AlgebraElement> = rows.into_values().rev().collect();
        let leads = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.leading().expect("nonzero").0.clone(), i))
            .collect();
        let mut s = FinSubspace {
            carrier,
            basis,
            leads,
            contains_one: false,
        };
        s.contains_one = s.reduce(&s.carrier.one()).is_zero();
        s
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[AlgebraElement] {
        &self.basis
    }

    pub fn contains_one(&self) -> bool {
        self.contains_one
    }

    pub fn leading_words(&self) -> impl Iterator<Item = &BasisWord> {
        self.basis.iter().map(|b| b.leading().expect("nonzero").0)
    }

    /// Remainder of `v` after reduction; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &AlgebraElement) -> AlgebraElement {
        let mut r = v.clone();
        for (w, c) in v.terms() {
            if let Some(&i) = self.leads.get(w) {
                r.add_scaled(&-c, &self.basis[i]);
            }
        }
        r
    }

    pub fn contains(&self, v: &AlgebraElement) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates in the echelon basis.
    pub fn coords(&self, v: &AlgebraElement) -> Result<Vec<Scalar>> {
        if !self.contains(v) {
            return Err(Error::NotInSubspace(self.carrier.format_element(v)));
        }
        Ok(self.lead_coefficients(v))
    }

    /// Coefficients of `v` at the leading words, i.e. the coordinates of the
    /// projection of `v` onto this subspace along the span of all non-leading
    /// basis words.
    pub fn lead_coefficients(&self, v: &AlgebraElement) -> Vec<Scalar> {
        let zero = self.carrier.field().zero();
        self.leading_words()
            .map(|w| v.coeff(w).cloned().unwrap_or_else(|| zero.clone()))
            .collect()
    }

    /// Element with the given coordinates.
    pub fn combine(&self, coords: &[Scalar]) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (c, b) in coords.iter().zip(&self.basis) {
            out.add_scaled(c, b);
        }
        out
    }

    pub fn is_subspace_of(&self, other: &FinSubspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// Literal of each basis element.
    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|b| self.carrier.format_element(b)).collect()
    }
}

impl PartialEq for FinSubspace {
    fn eq(&self, other: &Self) -> bool {
        same_carrier(&self.carrier, &other.carrier) && self.basis == other.basis
    }
}

pub fn span(c: &Arc<Carrier>, gens: &[AlgebraElement]) -> Result<FinSubspace> {
    let mut rows = BTreeMap::new();
    for g in gens {
        c.check_element(g)?;
        insert_row(&mut rows, g);
    }
    Ok(FinSubspace::from_rows(c.clone(), rows))
}

/// Span of all products `b q` with `b`, `q` running over the two bases.
pub fn product_space(b: &FinSubspace, q: &FinSubspace) -> Result<FinSubspace> {
    if !same_carrier(&b.carrier, &q.carrier) {
        return Err(Error::MixedCarriers);
    }
    let c = &b.carrier;
    let mut rows = BTreeMap::new();
    for x in &b.basis {
        for y in &q.basis {
            insert_row(&mut rows, &c.mul(x, y)?);
        }
    }
    Ok(FinSubspace::from_rows(c.clone(), rows))
}

#[derive(Clone, Debug)]
pub struct FolnerCertificate {
    pub b: FinSubspace,
    pub q: FinSubspace,
    pub dim_bq: usize,
    pub dim_q: usize,
    pub ratio: Ratio,
    /// Set when the exhaustion set of a translation algebra reaches the
    /// window margin, so `BQ` may be truncated by the window.
    pub boundary_effect: bool,
}

pub fn folner_ratio(b: &FinSubspace, q: &FinSubspace) -> Result<FolnerCertificate> {
    if q.dim() == 0 {
        return Err(Error::ZeroDimensional);
    }
    if !b.contains_one() {
        return Err(Error::MissingUnit);
    }
    let bq = product_space(b, q)?;
    debug_assert!(q.is_subspace_of(&bq));
    Ok(FolnerCertificate {
        b: b.clone(),
        q: q.clone(),
        dim_bq: bq.dim(),
        dim_q: q.dim(),
        ratio: Ratio::new((bq.dim() - q.dim()) as i64, q.dim() as i64),
        boundary_effect: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExhaustionKind {
    /// Word-metric balls (groups) or BFS balls (translation algebras).
    Ball,
    /// Coordinate boxes (`Z^d`, grid windows).
    Box,
    /// Length filtration of a free algebra.
    Length,
}

/// Canonical exhaustion: `{"type": "ball"|"box"|"length", "center": word}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustionSpec {
    #[serde(rename = "type")]
    pub kind: ExhaustionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<String>,
}

impl ExhaustionSpec {
    pub fn new(kind: ExhaustionKind) -> Self {
        ExhaustionSpec { kind, center: None }
    }

    fn unsupported(&self, c: &Carrier) -> Error {
        let what = match c.kind() {
            CarrierKind::Abelian { .. } => "Z^d",
            CarrierKind::FreeGroup { .. } => "free group",
            CarrierKind::FreeAlgebra { .. } => "free algebra",
            CarrierKind::Translation(_) => "translation algebra",
        };
        Error::UnsupportedExhaustion(format!("{:?} on {what}", self.kind))
    }

    fn center_word(&self, c: &Carrier) -> Result<Option<BasisWord>> {
        let Some(s) = &self.center else {
            return Ok(None);
        };
        let e = c.parse_element(s)?;
        let word = match e.terms().next() {
            Some((w, k)) if e.len() == 1 && k.is_one() => Ok(Some(w.clone())),
            _ => Err(Error::Parse(format!("center {s:?} must be a single basis word"))),
        };
        word
    }

    /// Vertex set `F_n` for translation algebras, with the column vertex used
    /// to embed `k[F_n]` as `span{E[x, column] : x in F_n}`.
    pub fn vertex_set(&self, c: &Carrier, n: usize) -> Result<(Vec<usize>, usize)> {
        let t = c.window().ok_or_else(|| self.unsupported(c))?;
        let g = t.graph();
        let (x0, col) = match self.center_word(c)? {
            Some(BasisWord::Unit(x, y)) => (x, y),
            Some(_) => unreachable!("translation words are matrix units"),
            None => (g.center(), g.center()),
        };
        let set = match self.kind {
            ExhaustionKind::Ball => {
                let d = g.distances_from(x0);
                (0..g.len()).filter(|&v| d[v] <= n).collect()
            }
            ExhaustionKind::Box => {
                let Layout::Grid { side } = g.layout() else {
                    return Err(Error::UnsupportedExhaustion("box on a non-grid window".into()));
                };
                let (r0, c0) = (x0 / side, x0 % side);
                let lo = |z: usize| z as i64 - (n as i64 - 1) / 2;
                let (rl, cl) = (lo(r0), lo(c0));
                if n == 0 || rl < 0 || cl < 0 || rl + n as i64 > side as i64 || cl + n as i64 > side as i64 {
                    return Err(Error::Graph(format!("box of side {n} does not fit the window")));
                }
                let mut v = Vec::new();
                for r in rl as usize..rl as usize + n {
                    for cc in cl as usize..cl as usize + n {
                        v.push(r * side + cc);
                    }
                }
                v
            }
            ExhaustionKind::Length => return Err(self.unsupported(c)),
        };
        Ok((set, col))
    }

    /// The `n`-th subspace `Q_n` of the exhaustion.
    pub fn subspace(&self, c: &Arc<Carrier>, n: usize) -> Result<FinSubspace> {
        let one = c.field().one();
        let words: Vec<BasisWord> = match (c.kind(), self.kind) {
            (CarrierKind::Abelian { rank }, ExhaustionKind::Ball | ExhaustionKind::Box) => {
                let shift = match self.center_word(c)? {
                    Some(BasisWord::Exponents(e)) => e,
                    _ => vec![0; *rank],
                };
                let pts = if self.kind == ExhaustionKind::Ball {
                    lattice_ball(*rank, n as i64)
                } else {
                    let lo = -((n as i64 - 1).max(0) / 2);
                    lattice_box(*rank, lo, n as i64)
                };
                pts.into_iter()
                    .map(|p| BasisWord::Exponents(p.iter().zip(&shift).map(|(a, b)| a + b).collect()))
                    .collect()
            }
            (CarrierKind::FreeGroup { rank }, ExhaustionKind::Ball) => {
                let shift = match self.center_word(c)? {
                    Some(BasisWord::Reduced(w)) => w,
                    _ => vec![],
                };
                free_group_ball(*rank, n)
                    .into_iter()
                    .map(|w| BasisWord::Reduced(reduce_concat(&w, &shift)))
                    .collect()
            }
            (CarrierKind::FreeAlgebra { rank }, ExhaustionKind::Length) => {
                let shift = match self.center_word(c)? {
                    Some(BasisWord::Monomial(w)) => w,
                    _ => vec![],
                };
                monomials_up_to(*rank, n)
                    .into_iter()
                    .map(|mut w| {
                        w.extend(&shift);
                        BasisWord::Monomial(w)
                    })
                    .collect()
            }
            (CarrierKind::Translation(_), ExhaustionKind::Ball | ExhaustionKind::Box) => {
                let (set, col) = self.vertex_set(c, n)?;
                set.into_iter().map(|x| BasisWord::Unit(x, col)).collect()
            }
            _ => return Err(self.unsupported(c)),
        };
        let gens: Vec<AlgebraElement> = words
            .into_iter()
            .map(|w| AlgebraElement::monomial(w, one.clone()))
            .collect();
        span(c, &gens)
    }
}

fn lattice_ball(d: usize, r: i64) -> Vec<Vec<i64>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for x in -r..=r {
        for mut rest in lattice_ball(d - 1, r - x.abs()) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn lattice_box(d: usize, lo: i64, n: i64) -> Vec<Vec<i64>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for x in lo..lo + n {
        for mut rest in lattice_box(d - 1, lo, n) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn free_group_ball(rank: usize, r: usize) -> Vec<Vec<i32>> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|g| [g, -g]).collect();
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &layer {
            for &x in &letters {
                if w.last() == Some(&-x) {
                    continue;
                }
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn monomials_up_to(rank: usize, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for x in 0..rank as u32 {
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Certificates for `Q_1, ..., Q_{n_max}` of the exhaustion.
pub fn folner_scan(
    c: &Arc<Carrier>,
    b: &FinSubspace,
    exhaustion: &ExhaustionSpec,
    n_max: usize,
) -> Result<Vec<FolnerCertificate>> {
    if !same_carrier(c, b.carrier()) {
        return Err(Error::MixedCarriers);
    }
    let margin = b
        .basis()
        .iter()
        .filter_map(|x| c.propagation(x))
        .max()
        .unwrap_or(0);
    (1..=n_max)
        .map(|n| {
            let q = exhaustion.subspace(c, n)?;
            let mut cert = folner_ratio(b, &q)?;
            if let Some(t) = c.window() {
                let (set, _) = exhaustion.vertex_set(c, n)?;
                let interior = t.graph().interior(margin);
                cert.boundary_effect = set.iter().any(|v| interior.binary_search(v).is_err());
            }
            Ok(cert)
        })
        .collect()
}
