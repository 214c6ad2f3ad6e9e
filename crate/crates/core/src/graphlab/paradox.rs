use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::json;

use crate::carrier::{AlgebraElement, BasisWord, Carrier};
use crate::error::{Error, Result};
use crate::exactlin::Field;

use super::{ball, max_bipartite_matching, SparseIntMat, WindowGraph};

/// Two injective maps `phi1, phi2` from a domain `D` of window vertices, with
/// disjoint images `V1 = phi1(D)`, `V2 = phi2(D)` and displacement at most
/// `k`. On an infinite non-amenable graph `D = V1 ⊔ V2 = V`; on a window, `D`
/// is the set of interior vertices whose two copies were both matched.
#[derive(Clone, Debug)]
pub struct ParadoxicalPair {
    graph: WindowGraph,
    k: usize,
    phi1: BTreeMap<usize, usize>,
    phi2: BTreeMap<usize, usize>,
    /// Unmatched copies `(vertex, copy)`, copy 1 or 2.
    unmatched: Vec<(usize, u8)>,
}

impl ParadoxicalPair {
    /// A pair from explicit maps. The maps must share their domain.
    pub fn from_maps(
        graph: WindowGraph,
        k: usize,
        phi1: BTreeMap<usize, usize>,
        phi2: BTreeMap<usize, usize>,
    ) -> Result<ParadoxicalPair> {
        if !phi1.keys().eq(phi2.keys()) {
            return Err(Error::Graph("phi1 and phi2 must have the same domain".into()));
        }
        if let Some(&v) = phi1.iter().chain(&phi2).flat_map(|(a, b)| [a, b]).find(|&&v| v >= graph.len()) {
            return Err(Error::VertexOutOfRange(v));
        }
        Ok(ParadoxicalPair {
            graph,
            k,
            phi1,
            phi2,
            unmatched: Vec::new(),
        })
    }

    pub fn graph(&self) -> &WindowGraph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn domain(&self) -> Vec<usize> {
        self.phi1.keys().copied().collect()
    }

    pub fn phi1(&self) -> &BTreeMap<usize, usize> {
        &self.phi1
    }

    pub fn phi2(&self) -> &BTreeMap<usize, usize> {
        &self.phi2
    }

    pub fn v1(&self) -> BTreeSet<usize> {
        self.phi1.values().copied().collect()
    }

    pub fn v2(&self) -> BTreeSet<usize> {
        self.phi2.values().copied().collect()
    }

    /// Number of unmatched interior copies.
    pub fn deficiency(&self) -> usize {
        self.unmatched.len()
    }

    pub fn unmatched(&self) -> &[(usize, u8)] {
        &self.unmatched
    }

    /// Every unmatched copy belongs to a vertex in the two outermost shells.
    pub fn deficiency_in_outer_shells(&self) -> bool {
        let r = self.graph.radius();
        self.unmatched.iter().all(|&(v, _)| self.graph.shell(v) + 1 >= r)
    }

    /// `d(y, phi_i(y)) <= k` for every `y` in the domain.
    pub fn displacement_ok(&self) -> bool {
        self.phi1
            .iter()
            .chain(&self.phi2)
            .all(|(&y, &x)| ball(&self.graph, &[y], self.k).is_ok_and(|b| b.binary_search(&x).is_ok()))
    }

    fn partial_map_matrix(&self, phi: &BTreeMap<usize, usize>) -> SparseIntMat {
        let n = self.graph.len();
        let mut m = SparseIntMat::zeros(n, n);
        for (&y, &x) in phi {
            m.add_to(x, y, 1);
        }
        m
    }

    /// `A(x, y) = 1` iff `x = phi1(y)`.
    pub fn a(&self) -> SparseIntMat {
        self.partial_map_matrix(&self.phi1)
    }

    /// `B(x, y) = 1` iff `x = phi2(y)`.
    pub fn b(&self) -> SparseIntMat {
        self.partial_map_matrix(&self.phi2)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pairs = |m: &SparseIntMat| m.nonzeros().map(|((i, j), _)| [i, j]).collect::<Vec<_>>();
        json!({
            "K": self.k,
            "domain": self.domain(),
            "V1": self.v1(),
            "V2": self.v2(),
            "phi1": self.phi1.iter().map(|(&y, &x)| [y, x]).collect::<Vec<_>>(),
            "phi2": self.phi2.iter().map(|(&y, &x)| [y, x]).collect::<Vec<_>>(),
            "deficiency": self.deficiency(),
            "unmatched": self.unmatched.iter().map(|&(v, c)| json!([v, c])).collect::<Vec<_>>(),
            "A": pairs(&self.a()),
            "B": pairs(&self.b()),
        })
    }
}

/// Maximum matching of two tagged copies of `interior(k)` into the window,
/// along edges of displacement at most `k`. Vertices closer to the center
/// come first on both sides.
pub fn paradoxical_pair(g: &WindowGraph, k: usize) -> Result<ParadoxicalPair> {
    if g.is_empty() {
        return Err(Error::Graph("graph is empty".into()));
    }
    if k == 0 {
        return Err(Error::Graph("displacement bound must be at least 1".into()));
    }
    let by_center = |v: &usize| (g.shell(*v), *v);
    let mut interior = g.interior(k);
    interior.sort_by_key(by_center);
    let mut rank = vec![0usize; g.len()];
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by_key(by_center);
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut adj = Vec::with_capacity(2 * interior.len());
    for &v in &interior {
        let mut nb: Vec<usize> = ball(g, &[v], k)?.into_iter().map(|x| rank[x]).collect();
        nb.sort_unstable();
        adj.push(nb.clone());
        adj.push(nb);
    }
    let m = max_bipartite_matching(g.len(), &adj);
    let mut phi1 = BTreeMap::new();
    let mut phi2 = BTreeMap::new();
    let mut unmatched = Vec::new();
    for (i, &v) in interior.iter().enumerate() {
        match (m[2 * i], m[2 * i + 1]) {
            (Some(a), Some(b)) => {
                phi1.insert(v, order[a]);
                phi2.insert(v, order[b]);
            }
            (a, b) => {
                if a.is_none() {
                    unmatched.push((v, 1));
                }
                if b.is_none() {
                    unmatched.push((v, 2));
                }
            }
        }
    }
    Ok(ParadoxicalPair {
        graph: g.clone(),
        k,
        phi1,
        phi2,
        unmatched,
    })
}

/// Entries where an identity fails, as `(row, col)`.
pub type Violations = Vec<(usize, usize)>;

#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    /// `AᵀA = I` on `D x D`.
    pub ata: Violations,
    /// `BᵀB = I` on `D x D`.
    pub btb: Violations,
    /// `AᵀB = 0` on `D x D`.
    pub atb: Violations,
    /// `AAᵀ + BBᵀ = I` on `R x R`, `R = V1 ∪ V2`.
    pub aat_bbt: Violations,
    /// The transposed reading `AAᵀ = I`, `BBᵀ = I`, `AᵀA + BᵀB = I`, checked
    /// on `R x R` and `D x D` respectively. It fails for any non-empty pair.
    pub transposed_reading_ok: bool,
    pub displacement_ok: bool,
    pub empty: bool,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.ata.is_empty() && self.btb.is_empty() && self.atb.is_empty() && self.aat_bbt.is_empty() && self.displacement_ok
    }
}

/// Compares `m` restricted to `idx x idx` with `diag` times the identity.
fn violations(m: &SparseIntMat, idx: &BTreeSet<usize>, diag: i64) -> Violations {
    let mut out: Violations = m
        .nonzeros()
        .filter(|((i, j), v)| idx.contains(i) && idx.contains(j) && *v != if i == j { diag } else { 0 })
        .map(|(ij, _)| ij)
        .collect();
    if diag != 0 {
        out.extend(idx.iter().filter(|&&i| m.get(i, i) == 0).map(|&i| (i, i)));
    }
    out.sort_unstable();
    out
}

pub fn verify_pair(p: &ParadoxicalPair) -> IdentityReport {
    let d: BTreeSet<usize> = p.phi1.keys().copied().collect();
    let r: BTreeSet<usize> = p.v1().union(&p.v2()).copied().collect();
    let (a, b) = (p.a(), p.b());
    let (at, bt) = (a.transpose(), b.transpose());
    let aat = &a * &at;
    let bbt = &b * &bt;
    let ata = &at * &a;
    let btb = &bt * &b;
    let transposed_reading_ok = violations(&aat, &r, 1).is_empty()
        && violations(&bbt, &r, 1).is_empty()
        && violations(&(&ata + &btb), &d, 1).is_empty();
    IdentityReport {
        ata: violations(&ata, &d, 1),
        btb: violations(&btb, &d, 1),
        atb: violations(&(&at * &b), &d, 0),
        aat_bbt: violations(&(&aat + &bbt), &r, 1),
        transposed_reading_ok,
        displacement_ok: p.displacement_ok(),
        empty: d.is_empty(),
    }
}

/// `U = [Aᵀ; Bᵀ]` and `W = [A, B]` over the translation algebra of the
/// window, with `W U = 1` and `U W = 1_2` on the matched region.
#[derive(Clone, Debug)]
pub struct NonIbnCertificate {
    pub carrier: Arc<Carrier>,
    /// 2 x 1.
    pub u: Vec<Vec<AlgebraElement>>,
    /// 1 x 2.
    pub w: Vec<Vec<AlgebraElement>>,
    /// `W U`, a 1 x 1 matrix.
    pub wu: Vec<Vec<AlgebraElement>>,
    /// `U W`, a 2 x 2 matrix.
    pub uw: Vec<Vec<AlgebraElement>>,
    /// `W U` is the identity on `R = V1 ⊔ V2`.
    pub wu_ok: bool,
    /// `U W` is the identity on `D ⊕ D`.
    pub uw_ok: bool,
}

fn diagonal_units(c: &Carrier, vs: &BTreeSet<usize>) -> AlgebraElement {
    AlgebraElement::from_terms(vs.iter().map(|&v| (BasisWord::Unit(v, v), c.field().one())))
}

pub fn non_ibn_witness(p: &ParadoxicalPair, field: Field) -> Result<NonIbnCertificate> {
    if p.deficiency() > 0 {
        return Err(Error::NoParadoxicalPair { deficiency: p.deficiency() });
    }
    if p.phi1.is_empty() {
        return Err(Error::NoParadoxicalPair { deficiency: 0 });
    }
    let report = verify_pair(p);
    if !report.passed() {
        return Err(Error::IdentityFailure(format!("{report:?}")));
    }
    let c = Carrier::translation(p.graph.clone(), p.k, field);
    let one = field.one();
    let elem = |phi: &BTreeMap<usize, usize>, transpose: bool| {
        AlgebraElement::from_terms(phi.iter().map(|(&y, &x)| {
            let w = if transpose { BasisWord::Unit(y, x) } else { BasisWord::Unit(x, y) };
            (w, one.clone())
        }))
    };
    let (a, b) = (elem(&p.phi1, false), elem(&p.phi2, false));
    let (at, bt) = (elem(&p.phi1, true), elem(&p.phi2, true));
    for e in [&a, &b, &at, &bt] {
        c.check_element(e)?;
    }
    let u = vec![vec![at], vec![bt]];
    let w = vec![vec![a, b]];
    let wu = c.mat_mul(&w, &u)?;
    let uw = c.mat_mul(&u, &w)?;
    let d: BTreeSet<usize> = p.phi1.keys().copied().collect();
    let r: BTreeSet<usize> = p.v1().union(&p.v2()).copied().collect();
    let id_d = diagonal_units(&c, &d);
    let wu_ok = wu[0][0] == diagonal_units(&c, &r);
    let uw_ok = uw[0][0] == id_d && uw[1][1] == id_d && uw[0][1].is_zero() && uw[1][0].is_zero();
    if !(wu_ok && uw_ok) {
        return Err(Error::IdentityFailure("non-IBN products are not identities".into()));
    }
    Ok(NonIbnCertificate {
        carrier: c,
        u,
        w,
        wu,
        uw,
        wu_ok,
        uw_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphlab::{gen_graph, GeneratorSpec};

    fn tree5() -> WindowGraph {
        gen_graph(&GeneratorSpec::Tree { degree: 3, radius: 5 }).unwrap()
    }

    #[test]
    fn tree_doubles() {
        let g = tree5();
        let p = paradoxical_pair(&g, 1).unwrap();
        assert_eq!(p.deficiency(), 0);
        assert!(p.deficiency_in_outer_shells());
        assert_eq!(p.domain().len(), g.interior(1).len());
        assert!(p.v1().is_disjoint(&p.v2()));
        let rep = verify_pair(&p);
        assert!(rep.passed(), "{rep:?}");
        assert!(!rep.transposed_reading_ok);
        assert!(!rep.empty);
        let cert = non_ibn_witness(&p, Field::default()).unwrap();
        assert!(cert.wu_ok && cert.uw_ok);
    }

    #[test]
    fn cycle_fails_to_double() {
        let g = gen_graph(&GeneratorSpec::Cycle { n: 20 }).unwrap();
        let p = paradoxical_pair(&g, 2).unwrap();
        assert_eq!(p.deficiency(), 20);
        assert!(non_ibn_witness(&p, Field::default()).is_err());
    }

    #[test]
    fn degenerate_windows() {
        let one = gen_graph(&GeneratorSpec::Path { n: 1 }).unwrap();
        assert_eq!(paradoxical_pair(&one, 1).unwrap().deficiency(), 1);
        let two = gen_graph(&GeneratorSpec::Path { n: 2 }).unwrap();
        let p = paradoxical_pair(&two, 1).unwrap();
        assert!(non_ibn_witness(&p, Field::default()).is_err());
        assert!(paradoxical_pair(&two, 0).is_err());
    }

    #[test]
    fn overlapping_maps_fail() {
        let g = tree5();
        let phi: BTreeMap<usize, usize> = g.interior(1).into_iter().map(|v| (v, v)).collect();
        let p = ParadoxicalPair::from_maps(g, 1, phi.clone(), phi).unwrap();
        let rep = verify_pair(&p);
        assert!(rep.ata.is_empty() && rep.btb.is_empty());
        assert!(!rep.aat_bbt.is_empty());
        assert!(!rep.atb.is_empty());
    }

    #[test]
    fn empty_pair_is_vacuous() {
        let g = tree5();
        let p = ParadoxicalPair::from_maps(g, 1, BTreeMap::new(), BTreeMap::new()).unwrap();
        let rep = verify_pair(&p);
        assert!(rep.passed() && rep.empty);
    }
}
