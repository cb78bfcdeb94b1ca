//! Matrix generators for linear, symplectic and block-embedded groups.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElt, FieldSpec};
use crate::linalg::Matrix;

/// An F_p-basis of the subfield of `k` of degree `sub_degree` over F_p.
pub(crate) fn prime_basis(k: &FieldSpec, sub_degree: usize) -> Vec<FieldElt> {
    let p = k.p() as u64;
    let full = k.q2() as u64 - 1;
    let sub = p.pow(sub_degree as u32) - 1;
    let omega = k.pow(k.primitive_element(), full / sub);
    (0..sub_degree as u64).map(|i| k.pow(omega, i)).collect()
}

fn elementary(k: &FieldSpec, n: usize, i: usize, j: usize, t: FieldElt) -> Matrix {
    let mut rows = Matrix::identity(k, n).row_vecs();
    rows[i][j] = k.add(rows[i][j], t);
    Matrix::from_rows(rows).expect("square")
}

/// Elementary transvections I + tE_ij generating SL_n over the field spanned by `scalars`.
pub(crate) fn sl_generators(k: &FieldSpec, n: usize, scalars: &[FieldElt]) -> Vec<Matrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for &t in scalars {
                    out.push(elementary(k, n, i, j, t));
                }
            }
        }
    }
    out
}

/// Alternating form J in the basis e₁,f₁,e₂,f₂,…: J(e_i,f_i) = 1 = −J(f_i,e_i).
pub(crate) fn symplectic_form(k: &FieldSpec, x: &[FieldElt], y: &[FieldElt]) -> FieldElt {
    let mut acc = k.zero();
    for i in (0..x.len()).step_by(2) {
        acc = k.add(acc, k.mul(x[i], y[i + 1]));
        acc = k.sub(acc, k.mul(x[i + 1], y[i]));
    }
    acc
}

/// Symplectic transvection x ↦ x + c·J(x,a)·a.
pub(crate) fn symplectic_transvection(k: &FieldSpec, a: &[FieldElt], c: FieldElt) -> Matrix {
    let n = a.len();
    let id = Matrix::identity(k, n).row_vecs();
    let rows = id
        .into_iter()
        .map(|r| {
            let s = k.mul(c, symplectic_form(k, &r, a));
            r.iter()
                .zip(a)
                .map(|(&x, &y)| k.add(x, k.mul(s, y)))
                .collect()
        })
        .collect();
    Matrix::from_rows(rows).expect("square")
}

/// Symplectic transvections generating Sp_n (n even) over the field spanned by `scalars`.
pub(crate) fn sp_generators(k: &FieldSpec, n: usize, scalars: &[FieldElt]) -> Vec<Matrix> {
    let unit = |i: usize| {
        let mut v = vec![k.zero(); n];
        v[i] = k.one();
        v
    };
    let mut dirs = Vec::new();
    for i in 0..n {
        dirs.push(unit(i));
        for j in i + 1..n {
            let mut v = unit(i);
            v[j] = k.one();
            dirs.push(v);
        }
    }
    let mut out = Vec::new();
    for a in &dirs {
        for &c in scalars {
            out.push(symplectic_transvection(k, a, c));
        }
    }
    out
}

/// Regards K^a as F^{ab} through the power basis 1, θ, …, θ^{b−1} of K over F.
pub(crate) struct Blowup {
    small: Field,
    big: Field,
    b: usize,
    /// rank in K -> coordinates over F
    coords: HashMap<FieldElt, Vec<FieldElt>>,
}

impl Blowup {
    pub(crate) fn new(small: &Field, b: usize) -> Result<Self> {
        if b == 0 {
            return Err(Error::usage("extension degree must be positive"));
        }
        let big: Field = if b == 1 {
            small.clone()
        } else {
            FieldSpec::new(small.p(), small.f() * b as u32)?
        };
        let emb = if b == 1 {
            small.elements().collect()
        } else {
            big.embedding_from(small)?
        };
        let theta = if b == 1 { big.one() } else { big.generator() };
        let powers: Vec<FieldElt> = (0..b as u64).map(|i| big.pow(theta, i)).collect();
        let mut coords = HashMap::new();
        let q2 = small.q2() as usize;
        for idx in 0..q2.pow(b as u32) {
            let mut c = Vec::with_capacity(b);
            let mut r = idx;
            for _ in 0..b {
                c.push(FieldElt((r % q2) as u16));
                r /= q2;
            }
            let val = c.iter().zip(&powers).fold(big.zero(), |acc, (ci, pw)| {
                big.add(acc, big.mul(emb[ci.rank()], *pw))
            });
            coords.insert(val, c);
        }
        if coords.len() != big.q2() as usize {
            return Err(Error::Construction(
                "power basis does not span the extension".into(),
            ));
        }
        Ok(Blowup {
            small: small.clone(),
            big,
            b,
            coords,
        })
    }

    pub(crate) fn big(&self) -> &Field {
        &self.big
    }

    /// b×b matrix of multiplication by x on K over F.
    fn mult_matrix(&self, x: FieldElt) -> Vec<Vec<FieldElt>> {
        let theta = if self.b == 1 {
            self.big.one()
        } else {
            self.big.generator()
        };
        (0..self.b as u64)
            .map(|i| self.coords[&self.big.mul(self.big.pow(theta, i), x)].clone())
            .collect()
    }

    /// The (ab)×(ab) matrix over F of an a×a matrix over K.
    pub(crate) fn blow(&self, x: &Matrix) -> Matrix {
        let a = x.rows();
        let b = self.b;
        let mut rows = vec![vec![self.small.zero(); a * b]; a * b];
        for r in 0..a {
            for s in 0..a {
                let m = self.mult_matrix(x[(r, s)]);
                for i in 0..b {
                    for j in 0..b {
                        rows[r * b + i][s * b + j] = m[i][j];
                    }
                }
            }
        }
        Matrix::from_rows(rows).expect("square")
    }
}

/// Embeds A ∈ GL_m acting on U = ⟨e_i⟩ into GL_{2m}, acting on W = ⟨f_i⟩ by the
/// conjugate-inverse-transpose so that β(e_i, f_j) is preserved.
pub(crate) fn levi_embed(k: &FieldSpec, a: &Matrix) -> Result<Matrix> {
    let m = a.rows();
    let ainv = a.inverse(k).ok_or(Error::NotInvertible { index: 0 })?;
    let b = ainv.transpose().conj(k);
    let mut rows = vec![vec![k.zero(); 2 * m]; 2 * m];
    for i in 0..m {
        for j in 0..m {
            rows[2 * i][2 * j] = a[(i, j)];
            rows[2 * i + 1][2 * j + 1] = b[(i, j)];
        }
    }
    Matrix::from_rows(rows)
}

/// Unipotent map fixing U pointwise with f_j ↦ f_j + Σ_i B_ji e_i.
pub(crate) fn radical_element(k: &FieldSpec, bmat: &[Vec<FieldElt>]) -> Matrix {
    let m = bmat.len();
    let mut rows = Matrix::identity(k, 2 * m).row_vecs();
    for j in 0..m {
        for i in 0..m {
            rows[2 * j + 1][2 * i] = bmat[j][i];
        }
    }
    Matrix::from_rows(rows).expect("square")
}
