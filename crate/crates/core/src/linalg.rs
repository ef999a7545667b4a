//! Symmetric banded matrices with an in-place Cholesky factorization.

use crate::error::DynamicsError;

/// Symmetric matrix stored as its lower band: entry `(row, col)` with
/// `row - bw <= col <= row` lives at `data[row * (bw + 1) + (col + bw - row)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymmetric {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedSymmetric {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self {
            n,
            bw: bandwidth,
            data: vec![0.0; n * (bandwidth + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn slot(&self, row: usize, col: usize) -> usize {
        debug_assert!(col <= row && row - col <= self.bw);
        row * (self.bw + 1) + (col + self.bw - row)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let (row, col) = if col > row { (col, row) } else { (row, col) };
        if row - col > self.bw {
            0.0
        } else {
            self.data[self.slot(row, col)]
        }
    }

    /// Adds to the symmetric pair `(row, col)`/`(col, row)`. Only call once per
    /// unordered pair.
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        let (row, col) = if col > row { (col, row) } else { (row, col) };
        assert!(row - col <= self.bw, "entry ({row}, {col}) outside band {}", self.bw);
        let s = self.slot(row, col);
        self.data[s] += value;
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        y.iter_mut().for_each(|v| *v = 0.0);
        for row in 0..self.n {
            let lo = row.saturating_sub(self.bw);
            let mut acc = 0.0;
            for col in lo..row {
                let a = self.data[self.slot(row, col)];
                acc += a * x[col];
                y[col] += a * x[row];
            }
            acc += self.data[self.slot(row, row)] * x[row];
            y[row] += acc;
        }
    }

    /// Cholesky factorization `A = L Lᵀ`, keeping the band.
    pub fn cholesky(&self) -> Result<BandedCholesky, DynamicsError> {
        let mut l = self.clone();
        let bw = self.bw;
        for j in 0..self.n {
            let lo = j.saturating_sub(bw);
            let mut diag = l.data[l.slot(j, j)];
            for k in lo..j {
                let v = l.data[l.slot(j, k)];
                diag -= v * v;
            }
            if !(diag > 0.0) {
                return Err(DynamicsError::NotPositiveDefinite { row: j, pivot: diag });
            }
            let diag = diag.sqrt();
            let s = l.slot(j, j);
            l.data[s] = diag;
            for i in (j + 1)..(j + 1 + bw).min(self.n) {
                let lo_i = i.saturating_sub(bw).max(lo);
                let mut v = l.data[l.slot(i, j)];
                for k in lo_i..j {
                    v -= l.data[l.slot(i, k)] * l.data[l.slot(j, k)];
                }
                let s = l.slot(i, j);
                l.data[s] = v / diag;
            }
        }
        Ok(BandedCholesky { factor: l })
    }
}

#[derive(Debug, Clone)]
pub struct BandedCholesky {
    factor: BandedSymmetric,
}

impl BandedCholesky {
    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let l = &self.factor;
        let n = l.n;
        let bw = l.bw;
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut v = x[i];
            for k in lo..i {
                v -= l.data[l.slot(i, k)] * x[k];
            }
            x[i] = v / l.data[l.slot(i, i)];
        }
        for i in (0..n).rev() {
            let mut v = x[i];
            for k in (i + 1)..(i + 1 + bw).min(n) {
                v -= l.data[l.slot(k, i)] * x[k];
            }
            x[i] = v / l.data[l.slot(i, i)];
        }
    }
}
