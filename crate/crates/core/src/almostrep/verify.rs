use crate::exactlin::Mat;
use crate::Ratio;

use super::AlmostRep;

#[derive(Clone, Debug)]
pub struct VerificationReport {
    /// `psi(1)` is the identity of `V`.
    pub unit_ok: bool,
    /// Table pairs `(left, right)` whose defining identity fails on the stored core.
    pub failing_pairs: Vec<(usize, usize)>,
    /// Largest subspace on which every tabulated identity holds.
    pub max_core: Mat,
    pub max_core_defect: Ratio,
    pub stored_core_dim: usize,
    pub stored_defect: Ratio,
    pub table_size: usize,
}

impl VerificationReport {
    pub fn max_core_dim(&self) -> usize {
        self.max_core.cols()
    }

    pub fn passed(&self) -> bool {
        self.unit_ok && self.failing_pairs.is_empty()
    }
}

/// Recomputes every tabulated identity `psi(b_i) psi(b_j) = psi(b_i b_j)` on
/// the stored core, and the maximal core as the common kernel of the
/// differences.
pub fn verify(rep: &AlmostRep) -> VerificationReport {
    let n = rep.v_dim();
    let mut k = Mat::identity(rep.field(), n);
    let mut failing_pairs = Vec::new();
    for e in &rep.table().entries {
        let d = &(&rep.images()[e.left] * &rep.images()[e.right]) - &rep.image_of_coords(&e.coeffs);
        if !(&d * rep.core()).is_zero() {
            failing_pairs.push((e.left, e.right));
        }
        if k.cols() > 0 {
            let dk = &d * &k;
            if !dk.is_zero() {
                k = &k * &dk.kernel_basis();
            }
        }
    }
    let max_core_defect = Ratio::new((n - k.cols()) as i64, n as i64);
    VerificationReport {
        unit_ok: rep.unit_image().is_identity(),
        failing_pairs,
        max_core: k,
        max_core_defect,
        stored_core_dim: rep.core_dim(),
        stored_defect: rep.defect(),
        table_size: rep.table().len(),
    }
}
