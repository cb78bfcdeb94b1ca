//! Dense matrices over a [`FieldSpec`], row-vector convention (x ↦ xA).

use crate::error::{Error, Result};
use crate::ff::{FieldElt, FieldSpec};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElt>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElt::ZERO; rows * cols],
        }
    }

    pub fn identity(k: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = k.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
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

    pub fn row(&self, i: usize) -> &[FieldElt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, k: &FieldSpec, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = k.mul(a, other[(l, j)]);
                    out[(i, j)] = k.add(out[(i, j)], t);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply(&self, k: &FieldSpec, x: &[FieldElt]) -> Vec<FieldElt> {
        let mut out = vec![FieldElt::ZERO; self.cols];
        for (l, &a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = k.add(*o, k.mul(a, self[(l, j)]));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Entrywise a ↦ a^(p^e).
    pub fn frobenius(&self, k: &FieldSpec, e: i64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| k.frobenius(a, e)).collect(),
        }
    }

    /// Entrywise conjugation a ↦ a^q.
    pub fn conj(&self, k: &FieldSpec) -> Matrix {
        self.frobenius(k, k.f() as i64)
    }

    pub fn map(&self, f: impl Fn(FieldElt) -> FieldElt) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }

    pub fn is_identity(&self, k: &FieldSpec) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self[(i, j)] == if i == j { k.one() } else { k.zero() })
            })
    }

    pub fn entries(&self) -> &[FieldElt] {
        &self.data
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self, k: &FieldSpec) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = k.inv(m[(r, c)]).expect("pivot nonzero");
            for j in 0..m.cols {
                m[(r, j)] = k.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let factor = m[(i, c)];
                    for j in 0..m.cols {
                        let t = k.mul(factor, m[(r, j)]);
                        m[(i, j)] = k.sub(m[(i, j)], t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, k: &FieldSpec) -> usize {
        self.rref(k).1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn inverse(&self, k: &FieldSpec) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = k.one();
        }
        let (r, pivots) = aug.rref(k);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)];
            }
        }
        Some(inv)
    }

    pub fn det(&self, k: &FieldSpec) -> FieldElt {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = k.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return k.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = k.neg(det);
            }
            let pivot = m[(c, c)];
            det = k.mul(det, pivot);
            let inv = k.inv(pivot).expect("nonzero");
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let factor = k.mul(m[(i, c)], inv);
                    for j in c..n {
                        let t = k.mul(factor, m[(c, j)]);
                        m[(i, j)] = k.sub(m[(i, j)], t);
                    }
                }
            }
        }
        det
    }

    /// Basis (as rows) of {x : x·selfᵀ = 0}, i.e. vectors orthogonal to every row
    /// under the plain dot product.
    pub fn right_kernel(&self, k: &FieldSpec) -> Vec<Vec<FieldElt>> {
        let (r, pivots) = self.rref(k);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fcol| {
                let mut x = vec![k.zero(); self.cols];
                x[fcol] = k.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    x[pc] = k.neg(r[(i, fcol)]);
                }
                x
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElt;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElt {
        &mut self.data[i * self.cols + j]
    }
}
