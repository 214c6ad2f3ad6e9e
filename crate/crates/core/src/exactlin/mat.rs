use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

use super::scalar::{Field, Scalar};

/// Dense row-major matrix over an exact field.
///
/// Shapes with zero rows or zero columns are allowed; a `d x 0` matrix is the
/// basis of the zero subspace of `k^d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with the pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                assert_eq!(v.field(), field, "entry field differs from matrix field");
                data.push(v);
            }
        }
        Mat {
            rows,
            cols,
            field,
            data,
        }
    }

    /// Builds a matrix from integer rows. All rows must have equal length.
    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Result<Mat> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Mat::from_fn(field, rows.len(), cols, |i, j| {
            field.from_i64(rows[i][j])
        }))
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Mat> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        if data.iter().any(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), "entry".into()));
        }
        Ok(Mat {
            rows: n,
            cols,
            field,
            data,
        })
    }

    /// Builds a `dim x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, dim: usize, columns: &[Vec<Scalar>]) -> Result<Mat> {
        if columns.iter().any(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch("column length".into()));
        }
        Ok(Mat::from_fn(field, dim, columns.len(), |i, j| {
            columns[j][i].clone()
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.field, self.rows, idx.len(), |i, j| {
            self.get(i, idx[j]).clone()
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.field, idx.len(), self.cols, |i, j| {
            self.get(idx[i], j).clone()
        })
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `self += s * other`, shapes must agree.
    pub fn add_scaled(&mut self, s: &Scalar, other: &Mat) {
        self.assert_same_shape(other);
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = &*a + &(s * b);
            }
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Mat::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            field: self.field,
            data,
        }
    }

    /// Assembles a block matrix from a grid of equally shaped blocks.
    pub fn from_blocks(field: Field, blocks: &[Vec<Mat>]) -> Result<Mat> {
        let br = blocks.len();
        let bc = blocks.first().map_or(0, Vec::len);
        if blocks.iter().any(|r| r.len() != bc) {
            return Err(Error::DimensionMismatch("ragged block rows".into()));
        }
        let (h, w) = match blocks.first().and_then(|r| r.first()) {
            Some(b) => (b.rows, b.cols),
            None => return Ok(Mat::zeros(field, 0, 0)),
        };
        if blocks.iter().flatten().any(|b| b.rows != h || b.cols != w) {
            return Err(Error::DimensionMismatch("block shapes differ".into()));
        }
        Ok(Mat::from_fn(field, br * h, bc * w, |i, j| {
            blocks[i / h][j / w].get(i % h, j % w).clone()
        }))
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // leftmost-pivot rule: first nonzero entry at or below row r
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let p = m.get(r, j);
                    if p.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&factor * p);
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns form a basis of the null space, one per free column.
    pub fn kernel_basis(&self) -> Mat {
        let Rref { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.field, self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k.set(f, idx, self.field.one());
            for (row, &pc) in pivots.iter().enumerate() {
                let v = -reduced.get(row, f);
                k.set(pc, idx, v);
            }
        }
        k
    }

    /// A basis of the column space, taken from the pivot columns.
    pub fn column_basis(&self) -> Mat {
        self.select_columns(&self.rref().pivots)
    }

    /// True when every column of `other` lies in the column span of `self`.
    pub fn span_contains(&self, other: &Mat) -> bool {
        assert_eq!(self.rows, other.rows, "ambient dimension mismatch");
        self.hstack(other).rank() == self.rank()
    }

    /// Column span equality by double inclusion.
    pub fn span_eq(&self, other: &Mat) -> bool {
        self.span_contains(other) && other.span_contains(self)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let Rref { reduced, pivots } = self.hstack(&Mat::identity(self.field, n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(reduced.select_columns(&idx))
    }

    /// Entrywise image of a rational matrix in GF(p).
    pub fn reduce_mod(&self, p: u64) -> Result<Mat> {
        let field = Field::gfp(p)?;
        let data = self
            .data
            .iter()
            .map(|s| s.reduce_mod(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            field,
            data,
        })
    }

    fn assert_same_shape(&self, other: &Mat) {
        assert!(
            self.rows == other.rows && self.cols == other.cols && self.field == other.field,
            "shape/field mismatch: {}x{} {} vs {}x{} {}",
            self.rows,
            self.cols,
            self.field,
            other.rows,
            other.cols,
            other.field
        );
    }
}

pub fn rank(m: &Mat) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &Mat) -> Mat {
    m.kernel_basis()
}

/// Basis of the intersection of the column spans of `spaces`.
pub fn intersect(spaces: &[Mat]) -> Result<Mat> {
    let (first, rest) = spaces.split_first().ok_or(Error::EmptyFamily)?;
    let d = first.rows();
    if let Some(bad) = rest.iter().find(|s| s.rows() != d) {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {d} and {}",
            bad.rows()
        )));
    }
    let mut acc = first.column_basis();
    for w in rest {
        if acc.cols() == 0 {
            break;
        }
        let w = w.column_basis();
        // (x, y) in ker [U | -W]  <=>  Ux = Wy
        let joint = acc.hstack(&-&w);
        let k = joint.kernel_basis();
        let top: Vec<usize> = (0..acc.cols()).collect();
        acc = (&acc * &k.select_rows(&top)).column_basis();
    }
    Ok(acc)
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.field(), b.field(), "kron field mismatch");
    Mat::from_fn(a.field(), a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        let x = a.get(i / b.rows(), j / b.cols());
        if x.is_zero() {
            a.field().zero()
        } else {
            x * b.get(i % b.rows(), j % b.cols())
        }
    })
}

/// Basis of `{v : m v = v}`.
pub fn fixed_subspace(m: &Mat) -> Result<Mat> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok((m - &Mat::identity(m.field(), m.rows())).kernel_basis())
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        assert_eq!(self.field, rhs.field, "matrix product field mismatch");
        let mut out = Mat::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.assert_same_shape(rhs);
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.assert_same_shape(rhs);
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_i64_rows(q(), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Coordinate subspace of k^d on the given axis indices.
    fn coord_space(d: usize, axes: impl IntoIterator<Item = usize>) -> Mat {
        let cols: Vec<Vec<Scalar>> = axes
            .into_iter()
            .map(|a| (0..d).map(|i| q().from_i64((i == a) as i64)).collect())
            .collect();
        Mat::from_columns(q(), d, &cols).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Mat::identity(q(), 5)), 5);
        assert_eq!(rank(&Mat::zeros(q(), 3, 4)), 0);
        let gf2 = Mat::from_i64_rows(Field::Prime(2), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(gf2.rank(), 1);
        assert_eq!(Mat::zeros(q(), 0, 3).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&Mat::identity(q(), 4)).cols(), 0);
        let k = kernel_basis(&Mat::zeros(q(), 3, 3));
        assert_eq!((k.cols(), k.rank()), (3, 3));
        let k = kernel_basis(&m(&[&[1, 0], &[0, 0]]));
        assert_eq!(k, m(&[&[0], &[1]]));
    }

    #[test]
    fn intersect_examples() {
        let a = coord_space(4, [0, 1]);
        assert!(intersect(&[a.clone(), a.clone()]).unwrap().span_eq(&a));
        let x = coord_space(2, [0]);
        let y = m(&[&[1], &[1]]);
        assert_eq!(intersect(&[x, y]).unwrap().cols(), 0);
        // index i <-> exponent i - 5
        let lo = coord_space(11, (-5i32..=4).map(|e| (e + 5) as usize));
        let hi = coord_space(11, (-4i32..=5).map(|e| (e + 5) as usize));
        assert_eq!(intersect(&[lo, hi]).unwrap().cols(), 9);
        assert_eq!(intersect(&[]), Err(Error::EmptyFamily));
        assert!(intersect(&[coord_space(2, [0]), coord_space(3, [0])]).is_err());
    }

    #[test]
    fn kron_examples() {
        assert_eq!(
            kron(&Mat::identity(q(), 2), &Mat::identity(q(), 3)),
            Mat::identity(q(), 6)
        );
        let a = m(&[&[1, 2], &[3, 4]]);
        assert!(kron(&a, &Mat::zeros(q(), 2, 3)).is_zero());
        let r1 = m(&[&[1, 2], &[2, 4]]);
        let r2 = m(&[&[1, 1], &[0, 1]]);
        let k = kron(&r1, &r2);
        assert_eq!((k.rows(), k.cols(), k.rank()), (4, 4, 2));
    }

    #[test]
    fn fixed_subspace_examples() {
        assert_eq!(fixed_subspace(&Mat::identity(q(), 3)).unwrap().cols(), 3);
        assert_eq!(fixed_subspace(&Mat::zeros(q(), 3, 3)).unwrap().cols(), 0);
        assert_eq!(fixed_subspace(&m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]])).unwrap().cols(), 2);
        assert_eq!(
            fixed_subspace(&Mat::zeros(q(), 2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn block_assembly() {
        let i = Mat::identity(q(), 2);
        let z = Mat::zeros(q(), 2, 2);
        let b = Mat::from_blocks(q(), &[vec![i.clone(), z.clone()], vec![z, i]]).unwrap();
        assert!(b.is_identity());
    }
}
