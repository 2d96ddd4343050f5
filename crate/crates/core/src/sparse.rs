//! Compressed-row complex matrices over a Fock basis.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::C64;

/// Matrix–vector product interface shared by sparse and composite operators.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    /// `y = A x`.
    fn apply(&self, x: &[C64], y: &mut [C64]);
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
    pub hermitian: bool,
}

impl SparseOperator {
    pub fn zeros(dim: usize) -> Self {
        SparseOperator {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
            hermitian: true,
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            if let (Some(&lr), Some(&lc)) = (rows.last(), cols.last()) {
                if lr == r && lc == c {
                    *vals.last_mut().unwrap() += v;
                    continue;
                }
            }
            rows.push(r);
            cols.push(c);
            vals.push(v);
        }
        let mut keep_rows = Vec::with_capacity(rows.len());
        let mut keep_cols = Vec::with_capacity(rows.len());
        let mut keep_vals = Vec::with_capacity(rows.len());
        for ((r, c), v) in rows.into_iter().zip(cols).zip(vals) {
            if v != C64::new(0.0, 0.0) {
                keep_rows.push(r);
                keep_cols.push(c);
                keep_vals.push(v);
            }
        }
        for &r in &keep_rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseOperator {
            dim,
            row_ptr,
            cols: keep_cols,
            vals: keep_vals,
            hermitian: false,
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let t = values.iter().enumerate().map(|(i, &v)| (i, i, C64::from(v))).collect();
        let mut op = Self::from_triplets(values.len(), t);
        op.hermitian = true;
        op
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.row(r).find(|&(cc, _)| cc == c).map(|(_, v)| v).unwrap_or_default()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &SparseOperator, b: f64) -> SparseOperator {
        assert_eq!(self.dim, other.dim);
        let t = self
            .triplets()
            .map(|(r, c, v)| (r, c, v * a))
            .chain(other.triplets().map(|(r, c, v)| (r, c, v * b)))
            .collect();
        let mut op = Self::from_triplets(self.dim, t);
        op.hermitian = self.hermitian && other.hermitian;
        op
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn max_hermitian_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (r, c, v) in self.triplets() {
            worst = worst.max((v - self.get(c, r).conj()).norm());
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.vals.iter().map(|v| v.norm_sqr()).sum())
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }

    pub fn apply_vec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::default(); self.dim];
        self.apply(x, &mut y);
        y
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &SparseOperator) -> SparseOperator {
        let n = self.dim;
        let t = self
            .triplets()
            .chain(other.triplets().map(|(r, c, v)| (r + n, c + n, v)))
            .collect();
        let mut op = Self::from_triplets(n + other.dim, t);
        op.hermitian = self.hermitian && other.hermitian;
        op
    }

    /// Coordinate text: a `#` header with the dimension, entry count and
    /// `meta`, then one `row col re im` line per stored entry, zero-based.
    pub fn to_coordinate_text(&self, meta: &str) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "# dim {} nnz {} hermitian {} meta {}", self.dim, self.nnz(), self.hermitian, meta);
        for (r, c, v) in self.triplets() {
            let _ = writeln!(out, "{r} {c} {:e} {:e}", v.re, v.im);
        }
        out
    }

    /// Inverse of [`SparseOperator::to_coordinate_text`]; returns the
    /// operator and the header's `meta` field.
    pub fn from_coordinate_text(text: &str) -> Option<(SparseOperator, String)> {
        let mut lines = text.lines();
        let head: Vec<&str> = lines.next()?.split_whitespace().collect();
        if head.len() < 9 || head[0] != "#" || head[1] != "dim" || head[3] != "nnz" || head[5] != "hermitian" || head[7] != "meta" {
            return None;
        }
        let dim: usize = head[2].parse().ok()?;
        let nnz: usize = head[4].parse().ok()?;
        let hermitian: bool = head[6].parse().ok()?;
        let mut t = Vec::with_capacity(nnz);
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return None;
            }
            let (r, c): (usize, usize) = (f[0].parse().ok()?, f[1].parse().ok()?);
            if r >= dim || c >= dim {
                return None;
            }
            t.push((r, c, C64::new(f[2].parse().ok()?, f[3].parse().ok()?)));
        }
        if t.len() != nnz {
            return None;
        }
        let mut op = Self::from_triplets(dim, t);
        op.hermitian = hermitian;
        Some((op, head[8..].join(" ")))
    }
}

impl LinearOperator for SparseOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        for (r, out) in y.iter_mut().enumerate().take(self.dim) {
            let mut acc = C64::default();
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *out = acc;
        }
    }
}

/// Euclidean norm of a complex vector.
pub fn norm(x: &[C64]) -> f64 {
    libm::sqrt(x.iter().map(|v| v.norm_sqr()).sum())
}

/// `Σ conj(a_i) b_i`.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_text_round_trip() {
        let i = C64::new(0.5, -0.25);
        let mut op = SparseOperator::from_triplets(3, alloc::vec![(0, 2, i), (2, 0, i.conj()), (1, 1, C64::from(3.0))]);
        op.hermitian = true;
        let text = op.to_coordinate_text("abc");
        assert!(text.starts_with("# dim 3 nnz 3 hermitian true meta abc\n"));
        let (back, meta) = SparseOperator::from_coordinate_text(&text).unwrap();
        assert_eq!(back, op);
        assert_eq!(meta, "abc");
        assert!(SparseOperator::from_coordinate_text("# dim 1\n").is_none());
    }

    #[test]
    fn triplets_merge_and_hermitian_check() {
        let i = C64::new(0.0, 1.0);
        let op = SparseOperator::from_triplets(
            2,
            alloc::vec![(0, 1, i), (1, 0, -i), (0, 0, C64::from(1.0)), (0, 0, C64::from(1.0))],
        );
        assert_eq!(op.nnz(), 3);
        assert_eq!(op.get(0, 0), C64::from(2.0));
        assert_eq!(op.max_hermitian_deviation(), 0.0);
        let y = op.apply_vec(&[C64::from(1.0), C64::from(1.0)]);
        assert_eq!(y[0], C64::new(2.0, 1.0));
    }

    #[test]
    fn direct_sum_doubles_spectrum() {
        let a = SparseOperator::diagonal(&[0.0, 1.0]);
        let d = a.direct_sum(&a);
        assert_eq!(d.diag(), alloc::vec![0.0, 1.0, 0.0, 1.0]);
    }
}
