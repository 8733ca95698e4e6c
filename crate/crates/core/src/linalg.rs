//! Dense matrices and Gaussian elimination over a [`Scalar`] field.

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a.clone() * b.clone();
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    /// Rank by row reduction. Floating types use a small absolute tolerance.
    pub fn rank(&self) -> usize {
        row_reduce_rank(self.rows, self.cols, self.data.clone())
    }
}

fn negligible<T: Scalar>(x: &T) -> bool {
    if T::is_exact() {
        x.is_zero()
    } else {
        x.to_f64().is_none_or(|v| v.abs() < 1e-9)
    }
}

/// Rank of a row-major `rows x cols` array, consuming it.
pub fn row_reduce_rank<T: Scalar>(rows: usize, cols: usize, mut data: Vec<T>) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = if T::is_exact() {
            (rank..rows).find(|&r| !data[r * cols + c].is_zero())
        } else {
            (rank..rows)
                .filter(|&r| !negligible(&data[r * cols + c]))
                .max_by(|&a, &b| {
                    let (x, y) = (data[a * cols + c].abs(), data[b * cols + c].abs());
                    x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal)
                })
        };
        let Some(p) = pivot else { continue };
        if p != rank {
            for j in 0..cols {
                data.swap(p * cols + j, rank * cols + j);
            }
        }
        let inv = T::one() / data[rank * cols + c].clone();
        for j in c..cols {
            data[rank * cols + j] = data[rank * cols + j].clone() * inv.clone();
        }
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let factor = data[r * cols + c].clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = data[r * cols + j].clone() - factor.clone() * data[rank * cols + j].clone();
                data[r * cols + j] = v;
            }
        }
        rank += 1;
    }
    rank
}
