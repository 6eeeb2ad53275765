//! Smith normal form over a Euclidean domain, with transformation matrices.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::EuclideanScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    /// Nonzero diagonal entries `d₁ | d₂ | …`, all positive.
    pub factors: Vec<T>,
    /// `u · m · v = diagonal`.
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub diagonal: Matrix<T>,
}

impl<T: EuclideanScalar> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

/// `row[dst] += k · row[src]`.
fn add_row<T: EuclideanScalar>(m: &mut Matrix<T>, dst: usize, src: usize, k: &T) {
    for j in 0..m.cols() {
        let v = m.get(dst, j).clone() + k.clone() * m.get(src, j).clone();
        m.set(dst, j, v);
    }
}

/// `col[dst] += k · col[src]`.
fn add_col<T: EuclideanScalar>(m: &mut Matrix<T>, dst: usize, src: usize, k: &T) {
    for i in 0..m.rows() {
        let x = m.get(i, dst).clone() + k.clone() * m.get(i, src).clone();
        m.set(i, dst, x);
    }
}

fn negate_row<T: EuclideanScalar>(m: &mut Matrix<T>, i: usize) {
    for j in 0..m.cols() {
        let x = -m.get(i, j).clone();
        m.set(i, j, x);
    }
}

/// Smallest nonzero entry by absolute value in the block `[t.., t..]`.
fn min_pivot<T: EuclideanScalar>(m: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < m.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Compute the Smith normal form of `m`. The defining identities
/// (`u·m·v = diagonal`, unimodular `u` and `v`, divisibility chain) are
/// checked before returning.
pub fn smith_normal_form<T: EuclideanScalar>(m: &Matrix<T>) -> Result<SmithForm<T>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let pivot = d.get(t, t).clone();
            // reduce the pivot column and row; a nonzero remainder is a
            // smaller pivot candidate
            let mut smaller = None;
            for i in t + 1..rows {
                let q = d.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    add_row(&mut d, i, t, &-q.clone());
                    add_row(&mut u, i, t, &-q);
                }
                if !d.get(i, t).is_zero() {
                    smaller.get_or_insert((i, t));
                }
            }
            for j in t + 1..cols {
                let q = d.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    add_col(&mut d, j, t, &-q.clone());
                    add_col(&mut v, j, t, &-q);
                }
                if !d.get(t, j).is_zero() {
                    smaller.get_or_insert((t, j));
                }
            }
            if smaller.is_some() {
                let (pi, pj) = min_pivot(&d, t).expect("nonzero entries remain");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // row and column are clear; the pivot must divide the rest
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d.get(i, j).is_multiple_of(&pivot));
            match bad {
                Some((i, _)) => {
                    add_row(&mut d, t, i, &T::one());
                    add_row(&mut u, t, i, &T::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    let factors: Vec<T> = (0..t).map(|i| d.get(i, i).clone()).collect();
    let form = SmithForm {
        factors,
        u,
        v,
        diagonal: d,
    };
    check(m, &form)?;
    Ok(form)
}

fn check<T: EuclideanScalar>(m: &Matrix<T>, form: &SmithForm<T>) -> Result<()> {
    let fail = |what: &str| Err(Error::Internal(format!("Smith form: {what}")));
    if &(&form.u * m) * &form.v != form.diagonal {
        return fail("u·m·v differs from the diagonal");
    }
    if !form.diagonal.is_diagonal() {
        return fail("result is not diagonal");
    }
    for w in [&form.u, &form.v] {
        if !w.determinant()?.abs().is_one() {
            return fail("transformation is not unimodular");
        }
    }
    if form.factors.iter().any(|f| !f.is_positive()) {
        return fail("non-positive invariant factor");
    }
    if form.factors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
        return fail("divisibility chain broken");
    }
    let n = form.factors.len();
    if (n..form.diagonal.rows().min(form.diagonal.cols())).any(|i| !form.diagonal.get(i, i).is_zero()) {
        return fail("nonzero entry after the last factor");
    }
    Ok(())
}
