//! Dense matrices over an exact scalar ring.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::Dimension(format!(
                "row {} has {} entries, expected {c}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Build from small integer literals; panics if the row lengths disagree.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let converted = rows
            .iter()
            .map(|row| row.iter().map(|&v| lit(v)).collect())
            .collect();
        Self::from_rows(converted).expect("ragged literal matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * rhs.get(k, j).clone();
                }
            }
        }
        Ok(out)
    }

    /// `self^n` for a square matrix; `n = 0` gives the identity.
    pub fn pow(&self, n: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "power of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn sum(&self) -> T {
        self.data.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// Block diagonal matrix `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Self::from_fn(r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                T::zero()
            }
        })
    }

    /// Positions (row-major order) where `self` and `other` differ.
    pub fn differences(&self, other: &Self) -> Vec<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return vec![];
        }
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j) != other.get(i, j))
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Fraction-free (Bareiss) elimination. Returns the rank and, for square
    /// input, the determinant. Every division it performs is exact, so it is
    /// valid over both integer rings and fields.
    fn bareiss(&self) -> (usize, T) {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut prev = T::one();
        let mut sign_negative = false;
        let mut rank = 0;
        let mut col = 0;
        while rank < rows && col < cols {
            let Some(p) = (rank..rows).find(|&i| !m.get(i, col).is_zero()) else {
                col += 1;
                continue;
            };
            if p != rank {
                m.swap_rows(p, rank);
                sign_negative = !sign_negative;
            }
            let pivot = m.get(rank, col).clone();
            for i in rank + 1..rows {
                let factor = m.get(i, col).clone();
                for j in col + 1..cols {
                    let v = (pivot.clone() * m.get(i, j).clone()
                        - factor.clone() * m.get(rank, j).clone())
                        / prev.clone();
                    m.set(i, j, v);
                }
                m.set(i, col, T::zero());
            }
            prev = pivot;
            rank += 1;
            col += 1;
        }
        let det = if rows == cols && rank == rows {
            if sign_negative {
                -prev
            } else {
                prev
            }
        } else {
            T::zero()
        };
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.bareiss().0
    }

    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Ok(T::one());
        }
        Ok(self.bareiss().1)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// True when every off-diagonal entry vanishes.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }
}

impl<T: Scalar + PartialOrd> Matrix<T> {
    /// First negative entry, if any.
    pub fn first_negative(&self) -> Option<(usize, usize)> {
        let zero = T::zero();
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| *self.get(i, j) < zero)
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: Self) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix dimensions do not compose")
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
