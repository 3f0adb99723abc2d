//! Dense matrices over a [`Gf`] and exact Gaussian elimination.
//!
//! Pivoting is always leftmost nonzero column, first available row, so
//! reduced forms are a pure function of the input.

use rayon::prelude::*;

use crate::field::{Elem, Gf};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    /// An empty matrix with `cols` columns.
    pub fn empty(cols: usize) -> Self {
        Self::zeros(0, cols)
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Elem>>, cols: usize) -> Self {
        let mut m = Self::empty(cols);
        for r in rows {
            m.push_row(&r);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> {
        // chunks_exact panics on a zero chunk size
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn push_row(&mut self, row: &[Elem]) {
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// The first `k` rows.
    pub fn prefix(&self, k: usize) -> Matrix {
        Matrix { rows: k, cols: self.cols, data: self.data[..k * self.cols].to_vec() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row echelon form.
    pub fn rref(&self, f: &Gf) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            f.scale_in_place(m.row_mut(r), inv);
            let pivot_row = m.row(r).to_vec();
            let cols = m.cols;
            m.data.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
                if i != r && row[c] != 0 {
                    let factor = f.neg(row[c]);
                    f.axpy(row, factor, &pivot_row);
                }
            });
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self, f: &Gf) -> usize {
        let mut e = Echelon::new(self.cols);
        self.rows().filter(|r| e.insert(f, r)).count()
    }

    /// Basis of `{v : M v = 0}`, one row per free column of the reduced form.
    pub fn nullspace(&self, f: &Gf) -> Matrix {
        let Rref { matrix: r, pivots } = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Matrix::empty(self.cols);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            out.push_row(&v);
        }
        out
    }

    /// Whether every row of `other` lies in the row space of `self`.
    pub fn row_space_contains(&self, f: &Gf, other: &Matrix) -> bool {
        let mut e = Echelon::new(self.cols);
        for r in self.rows() {
            e.insert(f, r);
        }
        other.rows().all(|r| e.reduce(f, r).iter().all(|&x| x == 0))
    }

    /// Largest `p` such that the first `p` rows are pairwise orthogonal
    /// (each row also orthogonal to itself).
    pub fn orthogonal_prefix(&self, f: &Gf) -> usize {
        let ok: Vec<bool> = (0..self.rows)
            .into_par_iter()
            .map(|i| (0..=i).all(|j| f.dot(self.row(i), self.row(j)) == 0))
            .collect();
        ok.iter().position(|&b| !b).unwrap_or(self.rows)
    }

    /// Whether every row of `self` is orthogonal to every row of `other`.
    pub fn orthogonal_to(&self, f: &Gf, other: &Matrix) -> bool {
        (0..self.rows)
            .into_par_iter()
            .all(|i| other.rows().all(|r| f.dot(self.row(i), r) == 0))
    }
}

#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Incrementally built semi-reduced basis: row `i` has a unit at `pivots[i]`
/// and zeros at the pivots of all earlier rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Self { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` modulo the span.
    pub fn reduce(&self, f: &Gf, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p] != 0 {
                let c = f.neg(v[p]);
                f.axpy(&mut v, c, row);
            }
        }
        v
    }

    /// Adds `v` if it is independent of the span; returns whether it was.
    pub fn insert(&mut self, f: &Gf, v: &[Elem]) -> bool {
        let mut r = self.reduce(f, v);
        let Some(p) = r.iter().position(|&x| x != 0) else { return false };
        let inv = f.inv(r[p]).expect("nonzero");
        f.scale_in_place(&mut r, inv);
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn rref_and_nullspace_small() {
        let f = build_field(3, 1, None).unwrap();
        // rows (1 2 0), (2 1 0) are dependent over GF(3)
        let m = Matrix::from_rows(vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]], 3);
        let r = m.rref(&f);
        assert_eq!(r.pivots, vec![0, 2]);
        assert_eq!(m.rank(&f), 2);
        let ns = m.nullspace(&f);
        assert_eq!(ns.nrows(), 1);
        assert_eq!(ns.row(0), &[1, 1, 0]);
        assert!(m.orthogonal_to(&f, &ns));
    }

    #[test]
    fn containment_and_orthogonal_prefix() {
        let f = build_field(2, 2, None).unwrap();
        let a = Matrix::from_rows(vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]], 4);
        let b = Matrix::from_rows(vec![vec![1, 1, 1, 1]], 4);
        assert!(a.row_space_contains(&f, &b));
        assert!(!b.row_space_contains(&f, &a));
        assert_eq!(a.orthogonal_prefix(&f), 2);
        let c = Matrix::from_rows(vec![vec![1, 1, 0, 0], vec![1, 0, 0, 0]], 4);
        assert_eq!(c.orthogonal_prefix(&f), 1);
        assert_eq!(Matrix::empty(4).orthogonal_prefix(&f), 0);
    }

    #[test]
    fn empty_matrix_nullspace_is_identity() {
        let f = build_field(2, 1, None).unwrap();
        let ns = Matrix::empty(3).nullspace(&f);
        assert_eq!(ns.nrows(), 3);
        assert_eq!(ns.rank(&f), 3);
    }
}
