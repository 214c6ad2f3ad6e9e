//! Finite-dimensional shadows of the rank condition, stable finiteness and
//! the commutator-rank lemma.

use std::sync::Arc;

use crate::almostrep::{apply_matrix, AlmostRep};
use crate::carrier::{matrix_shape, AlgebraElement, Carrier};
use crate::error::{Error, Result};
use crate::exactlin::{fixed_subspace, Mat};
use crate::folner::{span, FinSubspace};
use crate::Ratio;

/// Matrix with entries in an algebra, as rows.
pub type AlgMatrix = Vec<Vec<AlgebraElement>>;

fn check_composable(a: &[Vec<AlgebraElement>], b: &[Vec<AlgebraElement>]) -> Result<(usize, usize)> {
    let (m, n) = matrix_shape(a)?;
    let (bn, bm) = matrix_shape(b)?;
    if (bn, bm) != (n, m) {
        return Err(Error::Shape(format!("A is {m}x{n} but B is {bn}x{bm}")));
    }
    Ok((m, n))
}

/// `span({1} ∪ entries(A) ∪ entries(B) ∪ {x y : x in A, y in B})`, the
/// smallest space on which an almost representation sees every product in `AB`.
pub fn witness_subspace(c: &Arc<Carrier>, a: &[Vec<AlgebraElement>], b: &[Vec<AlgebraElement>]) -> Result<FinSubspace> {
    check_composable(a, b)?;
    let mut gens = vec![c.one()];
    gens.extend(a.iter().flatten().cloned());
    gens.extend(b.iter().flatten().cloned());
    for x in a.iter().flatten() {
        for y in b.iter().flatten() {
            gens.push(c.mul(x, y)?);
        }
    }
    span(c, &gens)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankAudit {
    pub m: usize,
    pub n: usize,
    pub v_dim: usize,
    pub core_dim: usize,
    /// `m * core_dim`.
    pub lhs: usize,
    /// `n * v_dim`.
    pub rhs: usize,
    /// `lhs > rhs`: no exact `AB = I_m` with `m > n` survives this core.
    pub contradiction: bool,
    /// `rank(psi(A) psi(B))`, when matrices were applied.
    pub rank_product: Option<usize>,
    /// `rank(psi(A) psi(B)) <= n * v_dim`.
    pub rank_ok: Option<bool>,
    /// Dimension of the fixed subspace of `psi(A) psi(B)`.
    pub fixed_dim: Option<usize>,
    /// `AB = I_m` holds in the algebra.
    pub ab_is_identity: Option<bool>,
    /// When `AB = I_m`: `fixed_dim >= m * core_dim`.
    pub fixed_bound_ok: Option<bool>,
}

impl RankAudit {
    /// The counting inequality alone.
    pub fn counting(m: usize, n: usize, v_dim: usize, core_dim: usize) -> Result<RankAudit> {
        if n == 0 || m <= n {
            return Err(Error::Shape(format!("need m > n >= 1, got m = {m}, n = {n}")));
        }
        if core_dim > v_dim {
            return Err(Error::DimensionMismatch(format!("core {core_dim} exceeds V {v_dim}")));
        }
        Ok(RankAudit {
            m,
            n,
            v_dim,
            core_dim,
            lhs: m * core_dim,
            rhs: n * v_dim,
            contradiction: m * core_dim > n * v_dim,
            rank_product: None,
            rank_ok: None,
            fixed_dim: None,
            ab_is_identity: None,
            fixed_bound_ok: None,
        })
    }

    /// `rank_ok` and, when applicable, `fixed_bound_ok` hold.
    pub fn passed(&self) -> bool {
        self.rank_ok != Some(false) && self.fixed_bound_ok != Some(false)
    }
}

/// Applies the representation to `A` (`m x n`) and `B` (`n x m`) over `L`.
/// `psi(A) psi(B)` factors through `V^n`, so its rank is at most `n dim V`;
/// if `AB = I_m`, it fixes `(V_eps)^m` pointwise on the core, which is
/// impossible once `m dim V_eps > n dim V`.
pub fn rank_condition_audit(rep: &AlmostRep, a: &[Vec<AlgebraElement>], b: &[Vec<AlgebraElement>]) -> Result<RankAudit> {
    let (m, n) = check_composable(a, b)?;
    let mut audit = RankAudit::counting(m, n, rep.v_dim(), rep.core_dim())?;
    let pa = apply_matrix(rep, a)?;
    let pb = apply_matrix(rep, b)?;
    let prod = &pa * &pb;
    let rank = prod.rank();
    let fixed = fixed_subspace(&prod)?.cols();
    let c = rep.source().expect("apply_matrix succeeded, so the source is known").carrier();
    let ab_is_identity = c.mat_mul(a, b)? == c.identity_matrix(m);
    audit.rank_product = Some(rank);
    audit.rank_ok = Some(rank <= audit.rhs);
    audit.fixed_dim = Some(fixed);
    audit.ab_is_identity = Some(ab_is_identity);
    audit.fixed_bound_ok = ab_is_identity.then_some(fixed >= audit.lhs);
    Ok(audit)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableReport {
    pub size: usize,
    pub ab_identity: bool,
    pub ba_identity: bool,
    pub commutator_rank: usize,
    /// `AB = I` implies `BA = I`.
    pub implication_ok: bool,
}

/// Square matrices over a field are stably finite: checks `AB = I => BA = I`.
pub fn finite_stable_check(a: &Mat, b: &Mat) -> Result<StableReport> {
    for m in [a, b] {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
    }
    if a.rows() != b.rows() || a.field() != b.field() {
        return Err(Error::DimensionMismatch(format!("{}x{} and {}x{}", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    let ab = a * b;
    let ba = b * a;
    let ab_identity = ab.is_identity();
    let ba_identity = ba.is_identity();
    Ok(StableReport {
        size: a.rows(),
        ab_identity,
        ba_identity,
        commutator_rank: (&ab - &ba).rank(),
        implication_ok: !ab_identity || ba_identity,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorReport {
    pub l: usize,
    /// Dimension of `V = {v : TSv = v}`.
    pub v_dim: usize,
    /// `l - dim V`.
    pub epsilon_l: usize,
    pub rank_ts_minus_st: usize,
    /// `2 (l - dim V)`.
    pub bound: usize,
    pub pass: bool,
}

/// If `TS` fixes a subspace `V` of codimension `e`, then `rank(TS - ST) <= 2e`.
pub fn commutator_bound_check(t: &Mat, s: &Mat) -> Result<CommutatorReport> {
    for m in [t, s] {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
    }
    if t.rows() != s.rows() || t.field() != s.field() {
        return Err(Error::DimensionMismatch(format!("T is {0}x{0}, S is {1}x{1}", t.rows(), s.rows())));
    }
    let ts = t * s;
    let st = s * t;
    let l = t.rows();
    let v_dim = fixed_subspace(&ts)?.cols();
    let rank = (&ts - &st).rank();
    let bound = 2 * (l - v_dim);
    Ok(CommutatorReport {
        l,
        v_dim,
        epsilon_l: l - v_dim,
        rank_ts_minus_st: rank,
        bound,
        pass: rank <= bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBoundReport {
    pub rank_p: usize,
    pub rank_ap: usize,
    pub v_dim: usize,
    pub eps: Ratio,
    /// `rank_p + eps * v_dim`.
    pub bound: Ratio,
    pub pass: bool,
}

/// `rank psi(ap) <= rank psi(p) + eps dim V`: off the core, `psi(ap)` and
/// `psi(a) psi(p)` may differ on at most `eps dim V` dimensions.
pub fn rr_ideal_bound(rank_p: usize, v_dim: usize, eps: Ratio, rank_ap: usize) -> IdealBoundReport {
    let bound = Ratio::from_integer(rank_p as i64) + eps * Ratio::from_integer(v_dim as i64);
    IdealBoundReport {
        rank_p,
        rank_ap,
        v_dim,
        eps,
        bound,
        pass: Ratio::from_integer(rank_ap as i64) <= bound,
    }
}

/// `(delta / 2 + eps) dim V`: the rank a product `ap` may reach when
/// `rank psi(p) < (delta / 2) dim V` on an `eps`-almost representation.
pub fn ideal_rank_threshold(delta: Ratio, eps: Ratio, v_dim: usize) -> Ratio {
    (delta / 2 + eps) * Ratio::from_integer(v_dim as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::almostrep::build_from_folner;
    use crate::exactlin::Field;
    use crate::folner::{ExhaustionKind, ExhaustionSpec};

    fn lit(c: &Carrier, rows: &[&[&str]]) -> AlgMatrix {
        rows.iter()
            .map(|r| r.iter().map(|s| c.parse_element(s).unwrap()).collect())
            .collect()
    }

    fn kz_rep() -> AlmostRep {
        let c = Carrier::abelian(1, Field::default());
        let l = span(&c, &[c.one(), c.parse_element("t").unwrap(), c.parse_element("t^-1").unwrap()]).unwrap();
        let q = ExhaustionSpec::new(ExhaustionKind::Ball).subspace(&c, 5).unwrap();
        build_from_folner(&l, &q).unwrap()
    }

    #[test]
    fn witness_subspace_examples() {
        let z = Carrier::abelian(1, Field::default());
        let w = witness_subspace(&z, &lit(&z, &[&["t"]]), &lit(&z, &[&["t^-1"]])).unwrap();
        assert_eq!(w.dim(), 3);
        assert_eq!(witness_subspace(&z, &lit(&z, &[&["1"]]), &lit(&z, &[&["1"]])).unwrap().dim(), 1);
        let fa = Carrier::free_algebra(2, Field::default());
        assert_eq!(witness_subspace(&fa, &lit(&fa, &[&["x"]]), &lit(&fa, &[&["y"]])).unwrap().dim(), 4);
        assert!(witness_subspace(&z, &lit(&z, &[&["t", "1"]]), &lit(&z, &[&["t", "1"]])).is_err());
    }

    #[test]
    fn counting_examples() {
        let a = RankAudit::counting(2, 1, 100, 95).unwrap();
        assert_eq!((a.lhs, a.rhs, a.contradiction), (190, 100, true));
        let a = RankAudit::counting(3, 2, 10, 6).unwrap();
        assert_eq!((a.lhs, a.rhs, a.contradiction), (18, 20, false));
        assert!(RankAudit::counting(1, 1, 10, 6).is_err());
    }

    #[test]
    fn kz_audit() {
        let rep = kz_rep();
        let c = rep.source().unwrap().carrier().clone();
        let audit = rank_condition_audit(&rep, &lit(&c, &[&["t"], &["1"]]), &lit(&c, &[&["t^-1", "1"]])).unwrap();
        assert!(audit.contradiction);
        assert_eq!((audit.lhs, audit.rhs), (18, 11));
        assert!(audit.rank_ok.unwrap());
        assert_eq!(audit.ab_is_identity, Some(false));
        assert!(audit.passed());
        let outside = lit(&c, &[&["t^2"], &["1"]]);
        assert!(rank_condition_audit(&rep, &outside, &lit(&c, &[&["1", "1"]])).is_err());
    }

    #[test]
    fn stable_examples() {
        let f2 = Field::Prime(2);
        let a = Mat::from_i64_rows(f2, &[vec![1, 1], vec![0, 1]]).unwrap();
        let r = finite_stable_check(&a, &a).unwrap();
        assert!(r.ab_identity && r.ba_identity && r.implication_ok);
        let i = Mat::identity(Field::default(), 3);
        assert!(finite_stable_check(&i, &i).unwrap().ab_identity);
        let rect = Mat::zeros(Field::default(), 2, 3);
        assert!(finite_stable_check(&rect, &rect).is_err());
    }

    #[test]
    fn kz_commutator_is_tight() {
        let rep = kz_rep();
        let t = rep.image_of(&rep.source().unwrap().carrier().parse_element("t").unwrap()).unwrap();
        let s = rep.image_of(&rep.source().unwrap().carrier().parse_element("t^-1").unwrap()).unwrap();
        let r = commutator_bound_check(&t, &s).unwrap();
        assert_eq!((r.l, r.v_dim, r.bound, r.rank_ts_minus_st), (11, 10, 2, 2));
        assert!(r.pass);
    }

    #[test]
    fn ideal_bound_examples() {
        assert!(rr_ideal_bound(0, 10, Ratio::from_integer(0), 0).pass);
        assert!(!rr_ideal_bound(0, 10, Ratio::from_integer(0), 1).pass);
        let r = rr_ideal_bound(10, 11, Ratio::new(2, 11), 11);
        assert_eq!(r.bound, Ratio::from_integer(12));
        assert!(r.pass);
        assert!(!rr_ideal_bound(10, 11, Ratio::new(2, 11), 13).pass);
        assert_eq!(ideal_rank_threshold(Ratio::new(1, 2), Ratio::new(1, 10), 20), Ratio::from_integer(7));
    }
}
