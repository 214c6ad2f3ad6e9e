use std::collections::BTreeMap;
use std::ops::{Add, Mul};

/// Sparse integer matrix with an explicit shape; zero entries are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseIntMat {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), i64>,
}

impl SparseIntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMat {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of shape");
        let e = self.entries.entry((i, j)).or_insert(0);
        *e += v;
        if *e == 0 {
            self.entries.remove(&(i, j));
        }
    }

    /// Nonzero entries in row-major order.
    pub fn nonzeros(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn transpose(&self) -> Self {
        SparseIntMat {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), &v)| ((j, i), v)).collect(),
        }
    }
}

impl Mul for &SparseIntMat {
    type Output = SparseIntMat;

    fn mul(self, rhs: &SparseIntMat) -> SparseIntMat {
        assert_eq!(self.cols, rhs.rows, "sparse product shape");
        let mut by_row: Vec<Vec<(usize, i64)>> = vec![Vec::new(); rhs.rows];
        for (&(k, j), &v) in &rhs.entries {
            by_row[k].push((j, v));
        }
        let mut out = SparseIntMat::zeros(self.rows, rhs.cols);
        for (&(i, k), &a) in &self.entries {
            for &(j, b) in &by_row[k] {
                out.add_to(i, j, a * b);
            }
        }
        out
    }
}

impl Add for &SparseIntMat {
    type Output = SparseIntMat;

    fn add(self, rhs: &SparseIntMat) -> SparseIntMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "sparse sum shape");
        let mut out = self.clone();
        for (&(i, j), &v) in &rhs.entries {
            out.add_to(i, j, v);
        }
        out
    }
}
