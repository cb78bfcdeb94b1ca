use crate::error::{Error, Result};
use crate::ff::{FieldElt, FieldSpec};
use crate::linalg::Matrix;
use crate::unispace::{UnitarySpace, Vector};

/// An element of ΓL(V): x ↦ σ_e(x)·mat, where σ_e raises every coordinate to the
/// power p^e.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SemilinearMap {
    mat: Matrix,
    frob: u32,
}

impl SemilinearMap {
    pub fn new(k: &FieldSpec, mat: Matrix, frob: i64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::usage("semilinear map needs a square matrix"));
        }
        if mat.inverse(k).is_none() {
            return Err(Error::NotInvertible { index: 0 });
        }
        Ok(SemilinearMap {
            mat,
            frob: frob.rem_euclid(k.degree() as i64) as u32,
        })
    }

    pub fn linear(k: &FieldSpec, mat: Matrix) -> Result<Self> {
        Self::new(k, mat, 0)
    }

    pub(crate) fn from_parts_unchecked(mat: Matrix, frob: u32) -> Self {
        SemilinearMap { mat, frob }
    }

    pub fn identity(k: &FieldSpec, n: usize) -> Self {
        SemilinearMap {
            mat: Matrix::identity(k, n),
            frob: 0,
        }
    }

    /// The coordinatewise p-th power map.
    pub fn frobenius_map(k: &FieldSpec, n: usize) -> Self {
        SemilinearMap {
            mat: Matrix::identity(k, n),
            frob: 1 % k.degree() as u32,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn frob(&self) -> u32 {
        self.frob
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn is_linear(&self) -> bool {
        self.frob == 0
    }

    /// `self` followed by `other`: (A,e)∘(B,d) = (σ_d(A)·B, e+d).
    pub fn then(&self, k: &FieldSpec, other: &SemilinearMap) -> SemilinearMap {
        let a = self.mat.frobenius(k, other.frob as i64);
        SemilinearMap {
            mat: a.mul(k, &other.mat),
            frob: (self.frob + other.frob) % k.degree() as u32,
        }
    }

    pub fn inverse(&self, k: &FieldSpec) -> SemilinearMap {
        let inv = self.mat.inverse(k).expect("invariant: invertible");
        SemilinearMap {
            mat: inv.frobenius(k, -(self.frob as i64)),
            frob: (k.degree() as u32 - self.frob) % k.degree() as u32,
        }
    }

    pub fn pow(&self, k: &FieldSpec, e: u32) -> SemilinearMap {
        (0..e).fold(SemilinearMap::identity(k, self.dim()), |acc, _| {
            acc.then(k, self)
        })
    }

    pub fn is_identity(&self, k: &FieldSpec) -> bool {
        self.frob == 0 && self.mat.is_identity(k)
    }

    pub fn act_coords(&self, k: &FieldSpec, x: &[FieldElt]) -> Vec<FieldElt> {
        if self.frob == 0 {
            self.mat.apply(k, x)
        } else {
            let sx: Vec<FieldElt> = x
                .iter()
                .map(|&c| k.frobenius(c, self.frob as i64))
                .collect();
            self.mat.apply(k, &sx)
        }
    }

    pub fn act(&self, k: &FieldSpec, x: &Vector) -> Result<Vector> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(Vector(self.act_coords(k, &x.0)))
    }

    pub fn det(&self, k: &FieldSpec) -> FieldElt {
        self.mat.det(k)
    }

    /// β(xg, yg) = β(x, y)^(p^e) on all basis pairs, i.e. g ∈ ΓU(V).
    pub fn preserves_form(&self, sp: &UnitarySpace) -> bool {
        let k = &**sp.field();
        let n = sp.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let x = sp.basis_vector(i);
                let y = sp.basis_vector(j);
                let gx = self.act_coords(k, &x.0);
                let gy = self.act_coords(k, &y.0);
                let lhs = sp.form_unchecked(&gx, &gy);
                let rhs = k.frobenius(sp.form_unchecked(&x.0, &y.0), self.frob as i64);
                lhs == rhs
            })
        })
    }

    /// Image of a subspace, in canonical form.
    pub fn act_subspace(
        &self,
        sp: &UnitarySpace,
        s: &crate::unispace::Subspace,
    ) -> crate::unispace::Subspace {
        let k = &**sp.field();
        let rows: Vec<Vector> = s
            .rows()
            .iter()
            .map(|r| Vector(self.act_coords(k, &r.0)))
            .collect();
        sp.span(&rows).expect("dimension preserved")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unispace::UnitarySpace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_invertible(k: &FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        loop {
            let rows = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| FieldElt(rng.gen_range(0..k.q2() as u16)))
                        .collect()
                })
                .collect();
            let m = Matrix::from_rows(rows).unwrap();
            if m.inverse(k).is_some() {
                return m;
            }
        }
    }

    #[test]
    fn composition_matches_action() {
        let sp = UnitarySpace::with_q(3, 4).unwrap();
        let k = sp.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = SemilinearMap::new(&k, random_invertible(&k, 3, &mut rng), rng.gen_range(0..4))
                .unwrap();
            let h = SemilinearMap::new(&k, random_invertible(&k, 3, &mut rng), rng.gen_range(0..4))
                .unwrap();
            let x = Vector((0..3).map(|_| FieldElt(rng.gen_range(0..16))).collect());
            let gh = g.then(&k, &h);
            assert_eq!(
                gh.act(&k, &x).unwrap(),
                h.act(&k, &g.act(&k, &x).unwrap()).unwrap()
            );
            assert!(g.then(&k, &g.inverse(&k)).is_identity(&k));
            assert!(g.inverse(&k).then(&k, &g).is_identity(&k));
        }
    }

    #[test]
    fn frobenius_on_v() {
        let sp = UnitarySpace::with_q(4, 2).unwrap();
        let k = sp.field().clone();
        let phi = SemilinearMap::frobenius_map(&k, 4);
        let img = phi.act(&k, &sp.v()).unwrap();
        let lam2 = k.mul(sp.lambda(), sp.lambda());
        assert_eq!(img, sp.e(1).add(&k, &sp.f(1).scale(&k, lam2)));
        assert_eq!(lam2, k.conj(sp.lambda()));
        assert!(phi.pow(&k, 2).is_identity(&k));
        assert!(phi.preserves_form(&sp));
    }

    #[test]
    fn singular_rejected() {
        let k = FieldSpec::new(2, 1).unwrap();
        assert!(SemilinearMap::linear(&k, Matrix::zeros(2, 2)).is_err());
    }
}
