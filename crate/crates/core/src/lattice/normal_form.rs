//! Smith and Hermite normal forms with tracked unimodular transforms.

use super::matrix::Matrix;
use crate::scalar::IntegerScalar;

/// Result of a Smith normal form computation: `u * a * v == d`.
#[derive(Clone, Debug)]
pub struct SmithForm<T> {
    pub u: Matrix<T>,
    /// Inverse of `u`, kept alongside so callers can lift from Smith coordinates.
    pub u_inv: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    pub rank: usize,
}

impl<T: IntegerScalar> SmithForm<T> {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<T> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct RowTracker<T> {
    left: Matrix<T>,
    left_inv: Matrix<T>,
}

impl<T: IntegerScalar> RowTracker<T> {
    fn new(n: usize) -> Self {
        RowTracker { left: Matrix::identity(n), left_inv: Matrix::identity(n) }
    }

    fn add(&mut self, a: &mut Matrix<T>, dst: usize, src: usize, k: &T) {
        a.add_row_multiple(dst, src, k);
        self.left.add_row_multiple(dst, src, k);
        self.left_inv.add_col_multiple(src, dst, &(-k.clone()));
    }

    fn swap(&mut self, a: &mut Matrix<T>, i: usize, j: usize) {
        a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }

    fn negate(&mut self, a: &mut Matrix<T>, i: usize) {
        a.negate_row(i);
        self.left.negate_row(i);
        self.left_inv.negate_col(i);
    }
}

fn min_abs_nonzero<T: IntegerScalar>(
    a: &Matrix<T>,
    cells: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), T)> = None;
    for (i, j) in cells {
        let v = a[(i, j)].abs();
        if v.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some(((i, j), v));
        }
    }
    best.map(|(c, _)| c)
}

/// Computes `u * a * v = d` with `u`, `v` unimodular and `d` diagonal with
/// nonnegative entries forming a divisibility chain.
pub fn smith_normal_form<T: IntegerScalar>(a: &Matrix<T>) -> SmithForm<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut rows = RowTracker::new(m);
    let mut v = Matrix::identity(n);
    let mut t = 0;

    while t < m.min(n) {
        let cells = (t..m).flat_map(|i| (t..n).map(move |j| (i, j)));
        let Some((pi, pj)) = min_abs_nonzero(&d, cells) else {
            break;
        };
        rows.swap(&mut d, t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let p = d[(t, t)].clone();
            for i in t + 1..m {
                if !d[(i, t)].is_zero() {
                    let q = d[(i, t)].div_floor(&p);
                    rows.add(&mut d, i, t, &(-q));
                }
            }
            for j in t + 1..n {
                if !d[(t, j)].is_zero() {
                    let q = d[(t, j)].div_floor(&p);
                    d.add_col_multiple(j, t, &(-q.clone()));
                    v.add_col_multiple(j, t, &(-q));
                }
            }
            let line = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
            let (bi, bj) = min_abs_nonzero(&d, line).expect("pivot is nonzero");
            if (bi, bj) != (t, t) {
                // A remainder smaller than the pivot survived; promote it.
                if bj == t {
                    rows.swap(&mut d, t, bi);
                } else {
                    d.swap_cols(t, bj);
                    v.swap_cols(t, bj);
                }
                continue;
            }
            let clean = (t + 1..m).all(|i| d[(i, t)].is_zero()) && (t + 1..n).all(|j| d[(t, j)].is_zero());
            if !clean {
                continue;
            }
            let p = d[(t, t)].clone();
            let offender =
                (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| !d[(i, j)].is_multiple_of(&p));
            match offender {
                Some((i, _)) => rows.add(&mut d, t, i, &T::one()),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            rows.negate(&mut d, t);
        }
        t += 1;
    }

    SmithForm { u: rows.left, u_inv: rows.left_inv, d, v, rank: t }
}

/// Row-style Hermite normal form: `t * a == h`, `t` unimodular, `h` in
/// row echelon form with positive pivots and entries above each pivot
/// reduced into `[0, pivot)`. Zero rows sit at the bottom.
#[derive(Clone, Debug)]
pub struct HermiteForm<T> {
    pub h: Matrix<T>,
    pub t: Matrix<T>,
    pub t_inv: Matrix<T>,
    pub rank: usize,
}

pub fn hermite_normal_form<T: IntegerScalar>(a: &Matrix<T>) -> HermiteForm<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut rows = RowTracker::new(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        while let Some((pi, _)) = min_abs_nonzero(&h, (r..m).map(|i| (i, c))) {
            rows.swap(&mut h, r, pi);
            let p = h[(r, c)].clone();
            let mut done = true;
            for i in r + 1..m {
                if !h[(i, c)].is_zero() {
                    let q = h[(i, c)].div_floor(&p);
                    rows.add(&mut h, i, r, &(-q));
                    if !h[(i, c)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            rows.negate(&mut h, r);
        }
        let p = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&p);
            if !q.is_zero() {
                rows.add(&mut h, i, r, &(-q));
            }
        }
        r += 1;
    }
    HermiteForm { h, t: rows.left, t_inv: rows.left_inv, rank: r }
}

/// Canonical basis (nonzero Hermite rows) of the lattice spanned by the rows of `a`.
pub fn row_lattice_basis<T: IntegerScalar>(a: &Matrix<T>) -> Matrix<T> {
    let hf = hermite_normal_form(a);
    let keep: Vec<usize> = (0..hf.rank).collect();
    hf.h.select_rows(&keep)
}

/// True when the rows of `a` and of `b` span the same sublattice.
pub fn same_row_lattice<T: IntegerScalar>(a: &Matrix<T>, b: &Matrix<T>) -> bool {
    a.cols() == b.cols() && row_lattice_basis(a) == row_lattice_basis(b)
}

pub fn rank<T: IntegerScalar>(a: &Matrix<T>) -> usize {
    hermite_normal_form(a).rank
}

/// Saturated basis of `{x : a x = 0}`, in Hermite form with rows sorted
/// lexicographically.
pub fn kernel_basis<T: IntegerScalar>(a: &Matrix<T>) -> Vec<Vec<T>> {
    let snf = smith_normal_form(a);
    let n = a.cols();
    if snf.rank == n {
        return Vec::new();
    }
    let basis: Vec<Vec<T>> = (snf.rank..n).map(|j| snf.v.column(j)).collect();
    let mut rows = row_lattice_basis(&Matrix::from_rows(n, basis)).to_rows();
    rows.sort();
    rows
}

/// Inverse of a unimodular matrix. Panics if `a` is not unimodular.
pub fn unimodular_inverse<T: IntegerScalar>(a: &Matrix<T>) -> Matrix<T> {
    let hf = hermite_normal_form(a);
    assert!(hf.rank == a.rows() && (0..a.rows()).all(|i| hf.h[(i, i)].is_one()), "matrix is not unimodular");
    // For unimodular input the Hermite form is the identity, so t is the inverse.
    hf.t
}
