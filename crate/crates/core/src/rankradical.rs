//! Rank ratios `rank psi_n(p) / dim V_n` of an element along the Følner
//! almost representations of an exhaustion. A series bounded away from 0 is
//! evidence that `p` lies outside the rank radical; nothing here decides
//! membership.

use std::sync::Arc;

use crate::almostrep::build_from_folner;
use crate::carrier::{AlgebraElement, Carrier};
use crate::error::{Error, Result};
use crate::folner::{same_carrier, ExhaustionSpec, FinSubspace};
use crate::pathology::{rr_ideal_bound, IdealBoundReport};
use crate::Ratio;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankRecord {
    pub n: usize,
    pub v_dim: usize,
    pub rank: usize,
    pub ratio: Ratio,
    pub defect: Ratio,
}

#[derive(Clone, Debug)]
pub struct RankRatioSeries {
    pub p: AlgebraElement,
    pub exhaustion: ExhaustionSpec,
    pub records: Vec<RankRecord>,
}

impl RankRatioSeries {
    pub fn min_ratio(&self) -> Option<Ratio> {
        self.records.iter().map(|r| r.ratio).min()
    }

    /// First index whose ratio is below `delta`.
    pub fn first_below(&self, delta: Ratio) -> Option<usize> {
        self.records.iter().find(|r| r.ratio < delta).map(|r| r.n)
    }

    /// Whether the ratio has dropped below `delta` at some index `<= n`.
    pub fn below_by(&self, delta: Ratio, n: usize) -> bool {
        self.first_below(delta).is_some_and(|m| m <= n)
    }
}

/// For `n = 1..=n_max`, builds the Følner representation of `L` on the
/// `n`-th exhaustion subspace and records the rank ratio of `psi_n(p)`.
pub fn rr_estimate(
    c: &Arc<Carrier>,
    p: &AlgebraElement,
    l: &FinSubspace,
    exhaustion: &ExhaustionSpec,
    n_max: usize,
) -> Result<RankRatioSeries> {
    if !same_carrier(c, l.carrier()) {
        return Err(Error::MixedCarriers);
    }
    c.check_element(p)?;
    l.coords(p)?;
    let mut records = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let q = exhaustion.subspace(c, n)?;
        let rep = build_from_folner(l, &q)?;
        let rank = rep.image_of(p)?.rank();
        records.push(RankRecord {
            n,
            v_dim: rep.v_dim(),
            rank,
            ratio: Ratio::new(rank as i64, rep.v_dim() as i64),
            defect: rep.defect(),
        });
    }
    Ok(RankRatioSeries {
        p: p.clone(),
        exhaustion: exhaustion.clone(),
        records,
    })
}

#[derive(Clone, Debug)]
pub struct MonotonicityReport {
    pub checks: Vec<(usize, IdealBoundReport)>,
    /// `series_ap.p == a * series_p.p`.
    pub product_ok: bool,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.product_ok && self.checks.iter().all(|(_, r)| r.pass)
    }

    pub fn failing_indices(&self) -> Vec<usize> {
        self.checks.iter().filter(|(_, r)| !r.pass).map(|(n, _)| *n).collect()
    }
}

/// Per index: `rank psi(ap) <= rank psi(p) + defect * dim V`, using the
/// defect of the representation that evaluated `ap`.
pub fn rr_monotonicity_report(
    c: &Carrier,
    series_p: &RankRatioSeries,
    series_ap: &RankRatioSeries,
    a: &AlgebraElement,
) -> Result<MonotonicityReport> {
    if series_p.exhaustion != series_ap.exhaustion {
        return Err(Error::SeriesMismatch("series use different exhaustions".into()));
    }
    let idx = |s: &RankRatioSeries| s.records.iter().map(|r| (r.n, r.v_dim)).collect::<Vec<_>>();
    if idx(series_p) != idx(series_ap) {
        return Err(Error::SeriesMismatch("series cover different indices".into()));
    }
    let product_ok = c.mul(a, &series_p.p)? == series_ap.p;
    let checks = series_p
        .records
        .iter()
        .zip(&series_ap.records)
        .map(|(rp, rap)| (rp.n, rr_ideal_bound(rp.rank, rp.v_dim, rap.defect, rap.rank)))
        .collect();
    Ok(MonotonicityReport { checks, product_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;
    use crate::folner::{span, ExhaustionKind};

    fn setup() -> (Arc<Carrier>, FinSubspace, ExhaustionSpec) {
        let c = Carrier::abelian(1, Field::default());
        let l = span(&c, &[c.one(), c.parse_element("t").unwrap(), c.parse_element("t^-1").unwrap()]).unwrap();
        (c, l, ExhaustionSpec::new(ExhaustionKind::Ball))
    }

    #[test]
    fn trivial_elements() {
        let (c, l, e) = setup();
        let one = rr_estimate(&c, &c.one(), &l, &e, 4).unwrap();
        assert!(one.records.iter().all(|r| r.ratio == Ratio::from_integer(1)));
        let zero = rr_estimate(&c, &AlgebraElement::zero(), &l, &e, 4).unwrap();
        assert!(zero.records.iter().all(|r| r.ratio == Ratio::from_integer(0)));
        assert_eq!(zero.first_below(Ratio::new(1, 2)), Some(1));
        assert_eq!(one.first_below(Ratio::new(1, 2)), None);
    }

    #[test]
    fn shift_minus_one_has_full_rank() {
        let (c, l, e) = setup();
        let s = rr_estimate(&c, &c.parse_element("t - 1").unwrap(), &l, &e, 5).unwrap();
        let r = &s.records[4];
        assert_eq!((r.v_dim, r.rank, r.ratio), (11, 11, Ratio::from_integer(1)));
        assert!(rr_estimate(&c, &c.parse_element("t^2").unwrap(), &l, &e, 2).is_err());
    }

    #[test]
    fn ideal_property_along_series() {
        let (c, l, e) = setup();
        let t = c.parse_element("t").unwrap();
        let a = c.parse_element("t^-1").unwrap();
        let sp = rr_estimate(&c, &t, &l, &e, 10).unwrap();
        let sap = rr_estimate(&c, &c.one(), &l, &e, 10).unwrap();
        let rep = rr_monotonicity_report(&c, &sp, &sap, &a).unwrap();
        assert!(rep.passed());
        let mut bad = sap.clone();
        bad.records[3].rank += 3;
        let rep = rr_monotonicity_report(&c, &sp, &bad, &a).unwrap();
        assert_eq!(rep.failing_indices(), vec![4]);
        let boxes = rr_estimate(&c, &c.one(), &l, &ExhaustionSpec::new(ExhaustionKind::Box), 10).unwrap();
        assert!(rr_monotonicity_report(&c, &sp, &boxes, &a).is_err());
    }
}
