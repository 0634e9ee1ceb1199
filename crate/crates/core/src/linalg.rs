//! Sparse storage and a banded LU factorization for the pressure system.

use crate::error::{Error, Result};

/// Compressed sparse row matrix.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from per-row `(column, value)` lists; duplicate columns are summed.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let start = cols.len();
            for (c, v) in row {
                debug_assert!(c < n);
                if cols.len() > start && *cols.last().unwrap() == c {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        CsrMatrix {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.cols[a..b].iter().copied().zip(self.vals[a..b].iter().copied())
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|r| self.row(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Max distance of a stored entry from the diagonal, below and above.
    pub fn bandwidths(&self) -> (usize, usize) {
        let mut kl = 0;
        let mut ku = 0;
        for r in 0..self.n {
            for (c, _) in self.row(r) {
                if c < r {
                    kl = kl.max(r - c);
                } else {
                    ku = ku.max(c - r);
                }
            }
        }
        (kl, ku)
    }
}

/// LU factors of a banded matrix, computed without pivoting.
///
/// Suitable for the diagonally dominant pressure matrices; a vanishing pivot
/// is reported as a singular system.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandedLu {
    pub fn factor(matrix: &CsrMatrix) -> Result<Self> {
        let n = matrix.dim();
        let (kl, ku) = matrix.bandwidths();
        let width = kl + ku + 1;
        let mut data = vec![0.0; n * width];
        for r in 0..n {
            for (c, v) in matrix.row(r) {
                data[r * width + c + kl - r] = v;
            }
        }
        let scale = matrix.norm_inf();
        for k in 0..n {
            let pivot = data[k * width + kl];
            if !(pivot.abs() > 1e-14 * scale) {
                return Err(Error::SolverSingular(format!(
                    "zero pivot at unknown {k} (|pivot| = {:.3e})",
                    pivot.abs()
                )));
            }
            let jmax = (k + ku).min(n - 1);
            for i in k + 1..=(k + kl).min(n - 1) {
                let ik = i * width + k + kl - i;
                let l = data[ik] / pivot;
                data[ik] = l;
                if l == 0.0 {
                    continue;
                }
                let (upper, lower) = data.split_at_mut(i * width);
                let krow = &upper[k * width..];
                let irow = &mut lower[..width];
                for j in k + 1..=jmax {
                    irow[j + kl - i] -= l * krow[j + kl - k];
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            ku,
            width,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let (n, kl, ku, w) = (self.n, self.kl, self.ku, self.width);
        let mut x = b.to_vec();
        for i in 0..n {
            let row = &self.data[i * w..(i + 1) * w];
            let mut s = x[i];
            for j in i.saturating_sub(kl)..i {
                s -= row[j + kl - i] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = &self.data[i * w..(i + 1) * w];
            let mut s = x[i];
            for j in i + 1..=(i + ku).min(n - 1) {
                s -= row[j + kl - i] * x[j];
            }
            x[i] = s / row[kl];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(n: usize) -> CsrMatrix {
        CsrMatrix::from_rows(
            (0..n)
                .map(|i| {
                    let mut r = vec![(i, 4.0)];
                    if i > 0 {
                        r.push((i - 1, -1.0));
                    }
                    if i + 1 < n {
                        r.push((i + 1, -2.0));
                    }
                    r
                })
                .collect(),
        )
    }

    #[test]
    fn solves_tridiagonal() {
        let a = tridiag(50);
        let x_true: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let b = a.matvec(&x_true);
        let x = BandedLu::factor(&a).unwrap().solve(&b);
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-13);
        }
    }

    #[test]
    fn solves_wide_band_against_dense_reference() {
        // Diagonally dominant matrix with entries at offsets 0, +-1, +-7.
        let n = 40;
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![(i, 10.0 + i as f64 * 0.01)];
                for (off, v) in [(1isize, -1.5), (-1, -2.0), (7, -0.7), (-7, -1.1)] {
                    let c = i as isize + off;
                    if (0..n as isize).contains(&c) {
                        r.push((c as usize, v));
                    }
                }
                r
            })
            .collect();
        let a = CsrMatrix::from_rows(rows);
        assert_eq!(a.bandwidths(), (7, 7));
        let b: Vec<f64> = (0..n).map(|i| 1.0 + (i % 3) as f64).collect();
        let x = BandedLu::factor(&a).unwrap().solve(&b);

        let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
        for r in 0..n {
            for (c, v) in a.row(r) {
                dense[(r, c)] = v;
            }
        }
        let x_ref = dense.lu().solve(&nalgebra::DVector::from_vec(b)).unwrap();
        for i in 0..n {
            assert!((x[i] - x_ref[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_pivot_is_singular() {
        let a = CsrMatrix::from_rows(vec![vec![(0, 1.0), (1, 1.0)], vec![(0, 1.0), (1, 1.0)]]);
        assert!(matches!(BandedLu::factor(&a), Err(Error::SolverSingular(_))));
    }

    #[test]
    fn duplicates_are_summed() {
        let a = CsrMatrix::from_rows(vec![vec![(0, 1.0), (0, 2.0)]]);
        assert_eq!(a.matvec(&[1.0]), vec![3.0]);
    }
}
