use std::collections::HashMap;

use crate::carrier::{matrix_shape, AlgebraElement};
use crate::error::{Error, Result};
use crate::exactlin::{kron, Field, Mat, Scalar};

use super::{AlmostRep, MultTable, TableEntry};

fn entry_map(t: &MultTable) -> HashMap<(usize, usize), &TableEntry> {
    t.entries.iter().map(|e| ((e.left, e.right), e)).collect()
}

fn matrix_unit(field: Field, n: usize, r: usize, c: usize) -> Mat {
    let mut m = Mat::zeros(field, n, n);
    m.set(r, c, field.one());
    m
}

/// The amplification `id_n ⊗ psi` on `M_n(L) -> End(k^n ⊗ V)`.
///
/// The basis of `M_n(L)` is `E_rc ⊗ b_k`, indexed `(r * n + c) * dim L + k`.
/// Its table holds every pair `(E_rc ⊗ b_i, E_c'd ⊗ b_j)` with either
/// `c != c'` (a zero product) or `(i, j)` in the base table. The core is
/// `k^n ⊗ V_eps`, so the defect is unchanged.
pub fn amplify(rep: &AlmostRep, n: usize) -> Result<AlmostRep> {
    if n == 0 {
        return Err(Error::ZeroFactor);
    }
    let field = rep.field();
    let dl = rep.dim_l();
    let idx = |r: usize, c: usize, k: usize| (r * n + c) * dl + k;
    let mut labels = Vec::with_capacity(n * n * dl);
    let mut images = Vec::with_capacity(n * n * dl);
    let mut unit = Vec::with_capacity(n * n * dl);
    for r in 0..n {
        for c in 0..n {
            let e = matrix_unit(field, n, r, c);
            for k in 0..dl {
                labels.push(format!("E{r}{c}*({})", rep.labels()[k]));
                images.push(kron(&e, &rep.images()[k]));
                unit.push(if r == c { rep.unit()[k].clone() } else { field.zero() });
            }
        }
    }
    let base = entry_map(rep.table());
    let size = n * n * dl;
    let mut entries = Vec::new();
    for left in 0..size {
        let (r, c, i) = (left / dl / n, (left / dl) % n, left % dl);
        for right in 0..size {
            let (c2, d, j) = (right / dl / n, (right / dl) % n, right % dl);
            let mut coeffs = vec![field.zero(); size];
            if c == c2 {
                let Some(e) = base.get(&(i, j)) else { continue };
                for (k, g) in e.coeffs.iter().enumerate() {
                    coeffs[idx(r, d, k)] = g.clone();
                }
            }
            entries.push(TableEntry { left, right, coeffs });
        }
    }
    AlmostRep::from_parts(
        field,
        labels,
        unit,
        MultTable { entries },
        images,
        kron(&Mat::identity(field, n), rep.core()),
        None,
    )
}

/// The tensor product `psi ⊗ phi: L1 ⊗ L2 -> End(V ⊗ W)`, with core
/// `V_eps ⊗ W_delta`. A pair of elementary tensors is tabulated when both
/// factor pairs are tabulated, or when either factor pair is a zero product.
pub fn tensor(a: &AlmostRep, b: &AlmostRep) -> Result<AlmostRep> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    let field = a.field();
    let (da, db) = (a.dim_l(), b.dim_l());
    let mut labels = Vec::with_capacity(da * db);
    let mut images = Vec::with_capacity(da * db);
    let mut unit = Vec::with_capacity(da * db);
    for i in 0..da {
        for j in 0..db {
            labels.push(format!("({}) ⊗ ({})", a.labels()[i], b.labels()[j]));
            images.push(kron(&a.images()[i], &b.images()[j]));
            unit.push(&a.unit()[i] * &b.unit()[j]);
        }
    }
    let ta = entry_map(a.table());
    let tb = entry_map(b.table());
    let size = da * db;
    let mut entries = Vec::new();
    for left in 0..size {
        let (i, j) = (left / db, left % db);
        for right in 0..size {
            let (k, l) = (right / db, right % db);
            let ea = ta.get(&(i, k));
            let eb = tb.get(&(j, l));
            let coeffs = match (ea, eb) {
                (Some(x), Some(y)) => x
                    .coeffs
                    .iter()
                    .flat_map(|p| y.coeffs.iter().map(move |q| p * q))
                    .collect(),
                (Some(x), _) if x.is_zero_product() => vec![field.zero(); size],
                (_, Some(y)) if y.is_zero_product() => vec![field.zero(); size],
                _ => continue,
            };
            entries.push(TableEntry { left, right, coeffs });
        }
    }
    AlmostRep::from_parts(
        field,
        labels,
        unit,
        MultTable { entries },
        images,
        kron(a.core(), b.core()),
        None,
    )
}

/// Applies `psi` entrywise to a matrix over `L`, giving a block matrix over
/// the field.
pub fn apply_matrix(rep: &AlmostRep, m: &[Vec<AlgebraElement>]) -> Result<Mat> {
    matrix_shape(m)?;
    let blocks = m
        .iter()
        .map(|row| row.iter().map(|a| rep.image_of(a)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Mat::from_blocks(rep.field(), &blocks)
}

/// Applies `psi` entrywise to a matrix given by coordinate vectors.
pub fn apply_coords(rep: &AlmostRep, m: &[Vec<Vec<Scalar>>]) -> Result<Mat> {
    matrix_shape(m)?;
    if m.iter().flatten().any(|v| v.len() != rep.dim_l()) {
        return Err(Error::DimensionMismatch("coordinate vector length".into()));
    }
    let blocks: Vec<Vec<Mat>> = m
        .iter()
        .map(|row| row.iter().map(|v| rep.image_of_coords(v)).collect())
        .collect();
    Mat::from_blocks(rep.field(), &blocks)
}
