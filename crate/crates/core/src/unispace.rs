//! The Hermitian space V of dimension n over GF(q²), its form β and the distinguished
//! vectors and subspaces built from the standard basis e₁, f₁, …, e_m, f_m.
//!
//! Coordinates are ordered e₁, f₁, e₂, f₂, …; for odd n a final anchor vector d with
//! β(d, d) = 1 is appended. The form is linear in its first argument and
//! conjugate-linear in the second.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElt, FieldSpec};
use crate::linalg::Matrix;

/// Largest supported dimension (vectors pack into a 128-bit key).
pub const MAX_DIM: usize = 16;

/// Default bound on q^(2n), the number of vectors enumerated when building domains.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(pub Vec<FieldElt>);

impl Vector {
    pub fn zero(n: usize) -> Self {
        Vector(vec![FieldElt::ZERO; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Packs the coordinates into a single integer key.
    pub fn key(&self) -> u128 {
        self.0
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, x)| acc | ((x.0 as u128) << (8 * i)))
    }

    pub fn from_key(key: u128, n: usize) -> Self {
        Vector(
            (0..n)
                .map(|i| FieldElt(((key >> (8 * i)) & 0xff) as u16))
                .collect(),
        )
    }

    pub fn add(&self, k: &FieldSpec, other: &Vector) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| k.add(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, k: &FieldSpec, c: FieldElt) -> Vector {
        Vector(self.0.iter().map(|&a| k.mul(c, a)).collect())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A subspace stored as its reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vector>,
}

impl Subspace {
    pub fn span(k: &FieldSpec, n: usize, vectors: &[Vector]) -> Result<Self> {
        for v in vectors {
            if v.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        if vectors.is_empty() {
            return Ok(Subspace {
                n,
                rows: Vec::new(),
            });
        }
        let m = Matrix::from_rows(vectors.iter().map(|v| v.0.clone()).collect())?;
        let (r, pivots) = m.rref(k);
        let rows = (0..pivots.len())
            .map(|i| Vector(r.row(i).to_vec()))
            .collect();
        Ok(Subspace { n, rows })
    }

    pub fn whole(k: &FieldSpec, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut v = Vector::zero(n);
                v.0[i] = k.one();
                v
            })
            .collect();
        Subspace { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn contains(&self, k: &FieldSpec, x: &Vector) -> bool {
        let mut all = self.rows.clone();
        all.push(x.clone());
        Subspace::span(k, self.n, &all).is_ok_and(|s| s.dim() == self.dim())
    }

    /// Canonical key: concatenated echelon rows.
    pub fn key(&self) -> Vec<u128> {
        self.rows.iter().map(Vector::key).collect()
    }
}

/// Named objects of the even-dimensional space.
#[derive(Clone, Debug)]
pub struct StandardObjects {
    /// ⟨e₁, …, e_m⟩
    pub u_space: Subspace,
    /// ⟨e₂, …, e_m⟩
    pub u1_space: Subspace,
    /// ⟨f₁, …, f_m⟩
    pub w_space: Subspace,
    /// e₁ + λf₁
    pub v: Vector,
    /// μe₁ + ζf₁
    pub u: Vector,
    /// μe₁ + ζ^q f₁
    pub w: Vector,
}

/// Unitary space with a hyperbolic standard basis.
pub struct UnitarySpace {
    n: usize,
    field: Field,
    gram: Matrix,
    lambda: FieldElt,
}

pub type Space = Arc<UnitarySpace>;

impl fmt::Debug for UnitarySpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U_{}({})", self.n, self.field.q())
    }
}

impl UnitarySpace {
    pub fn new(field: Field, n: usize) -> Result<Space> {
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::usage(format!("dimension {n} outside 2..={MAX_DIM}")));
        }
        let mut gram = Matrix::zeros(n, n);
        for i in 0..n / 2 {
            gram[(2 * i, 2 * i + 1)] = field.one();
            gram[(2 * i + 1, 2 * i)] = field.one();
        }
        if n % 2 == 1 {
            gram[(n - 1, n - 1)] = field.one();
        }
        let lambda = field.solve_lambda();
        Ok(Arc::new(UnitarySpace {
            n,
            field,
            gram,
            lambda,
        }))
    }

    /// Convenience constructor for the space of dimension n over GF(q²).
    pub fn with_q(n: usize, q: u32) -> Result<Space> {
        let (p, f) =
            prime_power(q).ok_or_else(|| Error::usage(format!("{q} is not a prime power")))?;
        Self::new(FieldSpec::new(p, f)?, n)
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.n / 2
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }
    pub fn lambda(&self) -> FieldElt {
        self.lambda
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Coordinate index of e_i (1-based i).
    pub fn e_index(&self, i: usize) -> usize {
        2 * (i - 1)
    }
    /// Coordinate index of f_i (1-based i).
    pub fn f_index(&self, i: usize) -> usize {
        2 * (i - 1) + 1
    }

    pub fn basis_vector(&self, idx: usize) -> Vector {
        let mut v = Vector::zero(self.n);
        v.0[idx] = self.field.one();
        v
    }
    pub fn e(&self, i: usize) -> Vector {
        self.basis_vector(self.e_index(i))
    }
    pub fn f(&self, i: usize) -> Vector {
        self.basis_vector(self.f_index(i))
    }

    pub fn vector(&self, coords: Vec<FieldElt>) -> Result<Vector> {
        if coords.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: coords.len(),
            });
        }
        for &c in &coords {
            self.field.check(c)?;
        }
        Ok(Vector(coords))
    }

    /// β(x, y), linear in x and conjugate-linear in y.
    pub fn form_eval(&self, x: &Vector, y: &Vector) -> Result<FieldElt> {
        for z in [x, y] {
            if z.len() != self.n {
                return Err(Error::Dimension {
                    expected: self.n,
                    found: z.len(),
                });
            }
        }
        Ok(self.form_unchecked(&x.0, &y.0))
    }

    #[inline]
    pub(crate) fn form_unchecked(&self, x: &[FieldElt], y: &[FieldElt]) -> FieldElt {
        let k = &*self.field;
        let mut acc = k.zero();
        for i in 0..self.n / 2 {
            let (a, b) = (2 * i, 2 * i + 1);
            acc = k.add(acc, k.mul(x[a], k.conj(y[b])));
            acc = k.add(acc, k.mul(x[b], k.conj(y[a])));
        }
        if self.n % 2 == 1 {
            let d = self.n - 1;
            acc = k.add(acc, k.mul(x[d], k.conj(y[d])));
        }
        acc
    }

    /// β(x, x).
    pub fn norm(&self, x: &Vector) -> FieldElt {
        self.form_unchecked(&x.0, &x.0)
    }

    pub fn perp(&self, s: &Subspace) -> Subspace {
        let k = &*self.field;
        if s.dim() == 0 {
            return Subspace::whole(k, self.n);
        }
        // y ⟂ x  ⟺  Σ conj((xG)_j) y_j = 0
        let rows: Vec<Vec<FieldElt>> = s
            .rows()
            .iter()
            .map(|x| {
                let xg = self.gram.apply(k, &x.0);
                xg.into_iter().map(|c| k.conj(c)).collect()
            })
            .collect();
        let m = Matrix::from_rows(rows).expect("uniform rows");
        let ker: Vec<Vector> = m.right_kernel(k).into_iter().map(Vector).collect();
        Subspace::span(k, self.n, &ker).expect("dimensions match")
    }

    pub fn intersect(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut rows: Vec<Vector> = self.perp(a).rows().to_vec();
        rows.extend(self.perp(b).rows().iter().cloned());
        let sum = Subspace::span(&self.field, self.n, &rows).expect("dimensions match");
        self.perp(&sum)
    }

    pub fn span(&self, vectors: &[Vector]) -> Result<Subspace> {
        Subspace::span(&self.field, self.n, vectors)
    }

    pub fn is_totally_isotropic(&self, s: &Subspace) -> bool {
        s.rows().iter().all(|x| {
            s.rows()
                .iter()
                .all(|y| self.form_unchecked(&x.0, &y.0).is_zero())
        })
    }

    /// Number of vectors of norm 1: q^(n−1)(q^n − (−1)^n).
    pub fn norm_one_count(&self) -> u128 {
        let q = self.q() as i128;
        let n = self.n as u32;
        let sign = if n.is_multiple_of(2) { 1 } else { -1 };
        (q.pow(n - 1) * (q.pow(n) - sign)) as u128
    }

    /// All vectors x with β(x, x) = 1, in lexicographic order of coordinate ranks.
    pub fn norm_one_domain(&self, budget: u128) -> Result<Vec<Vector>> {
        let k = &*self.field;
        let q2 = k.q2() as u128;
        let total = q2.checked_pow(self.n as u32).unwrap_or(u128::MAX);
        if total > budget {
            return Err(Error::capacity("vector enumeration q^(2n)", total, budget));
        }
        // per-coordinate norms and pairwise products are tabulated once
        let q2u = k.q2() as usize;
        let one = k.one();
        let mut pair = vec![FieldElt::ZERO; q2u * q2u];
        for a in k.elements() {
            for b in k.elements() {
                pair[a.rank() * q2u + b.rank()] = k.trace(k.mul(a, k.conj(b)));
            }
        }
        let mut out = Vec::new();
        let mut coords = vec![FieldElt::ZERO; self.n];
        let n = self.n;
        for idx in 0..total as u64 {
            let mut x = idx;
            for c in coords.iter_mut().rev() {
                *c = FieldElt((x % q2 as u64) as u16);
                x /= q2 as u64;
            }
            let mut acc = FieldElt::ZERO;
            for i in 0..n / 2 {
                acc = k.add(
                    acc,
                    pair[coords[2 * i].rank() * q2u + coords[2 * i + 1].rank()],
                );
            }
            if n % 2 == 1 {
                acc = k.add(acc, k.norm(coords[n - 1]));
            }
            if acc == one {
                out.push(Vector(coords.clone()));
            }
        }
        Ok(out)
    }

    pub fn standard_objects(&self) -> Result<StandardObjects> {
        if self.n % 2 == 1 {
            return Err(Error::usage("standard objects need even dimension"));
        }
        let k = &*self.field;
        let m = self.m();
        let u_space = self.span(&(1..=m).map(|i| self.e(i)).collect::<Vec<_>>())?;
        let u1_space = self.span(&(2..=m).map(|i| self.e(i)).collect::<Vec<_>>())?;
        let w_space = self.span(&(1..=m).map(|i| self.f(i)).collect::<Vec<_>>())?;
        let mu = k.solve_mu();
        let zeta = k.pick_zeta();
        Ok(StandardObjects {
            u_space,
            u1_space,
            w_space,
            v: self.v(),
            u: self.two_point(mu, zeta),
            w: self.two_point(mu, k.conj(zeta)),
        })
    }

    /// v = e₁ + λf₁.
    pub fn v(&self) -> Vector {
        self.two_point(self.field.one(), self.lambda)
    }

    /// u = μe₁ + ζf₁ (nonsingular, used for the symplectic pair).
    pub fn u(&self) -> Vector {
        let k = &*self.field;
        self.two_point(k.solve_mu(), k.pick_zeta())
    }

    fn two_point(&self, a: FieldElt, b: FieldElt) -> Vector {
        let mut x = Vector::zero(self.n);
        x.0[0] = a;
        x.0[1] = b;
        x
    }
}

/// Decomposes q = p^f.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    let mut f = 0;
    while r.is_multiple_of(p) {
        r /= p;
        f += 1;
    }
    (r == 1).then_some((p, f))
}
