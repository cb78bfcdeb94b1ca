//! G₂ as the automorphism group of the split octonions (Zorn vector matrices), and its
//! 6-dimensional symplectic representation in characteristic 2.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ff::{FieldElt, FieldSpec};
use crate::linalg::Matrix;

/// Coordinates (a, u₁, u₂, u₃, v₁, v₂, v₃, b) of [[a, u], [v, b]].
pub(crate) type Octonion = [FieldElt; 8];

fn dot(k: &FieldSpec, u: &[FieldElt], v: &[FieldElt]) -> FieldElt {
    u.iter()
        .zip(v)
        .fold(k.zero(), |acc, (&x, &y)| k.add(acc, k.mul(x, y)))
}

fn cross(k: &FieldSpec, u: &[FieldElt], v: &[FieldElt]) -> [FieldElt; 3] {
    let c = |i: usize, j: usize| k.sub(k.mul(u[i], v[j]), k.mul(u[j], v[i]));
    [c(1, 2), c(2, 0), c(0, 1)]
}

pub(crate) fn mul(k: &FieldSpec, x: &Octonion, y: &Octonion) -> Octonion {
    let (a, u, v, b) = (x[0], &x[1..4], &x[4..7], x[7]);
    let (a2, u2, v2, b2) = (y[0], &y[1..4], &y[4..7], y[7]);
    let vv = cross(k, v, v2);
    let uu = cross(k, u, u2);
    let mut out = [k.zero(); 8];
    out[0] = k.add(k.mul(a, a2), dot(k, u, v2));
    for i in 0..3 {
        out[1 + i] = k.sub(k.add(k.mul(a, u2[i]), k.mul(b2, u[i])), vv[i]);
        out[4 + i] = k.add(k.add(k.mul(a2, v[i]), k.mul(b, v2[i])), uu[i]);
    }
    out[7] = k.add(k.mul(b, b2), dot(k, v, u2));
    out
}

pub(crate) fn norm(k: &FieldSpec, x: &Octonion) -> FieldElt {
    k.sub(k.mul(x[0], x[7]), dot(k, &x[1..4], &x[4..7]))
}

pub(crate) fn trace(k: &FieldSpec, x: &Octonion) -> FieldElt {
    k.add(x[0], x[7])
}

/// Polar form of the norm.
pub(crate) fn polar(k: &FieldSpec, x: &Octonion, y: &Octonion) -> FieldElt {
    let s: Octonion = std::array::from_fn(|i| k.add(x[i], y[i]));
    k.sub(k.sub(norm(k, &s), norm(k, x)), norm(k, y))
}

pub(crate) fn one(k: &FieldSpec) -> Octonion {
    let mut x = [k.zero(); 8];
    x[0] = k.one();
    x[7] = k.one();
    x
}

fn unit(k: &FieldSpec, i: usize) -> Octonion {
    let mut x = [k.zero(); 8];
    x[i] = k.one();
    x
}

/// Doubling basis 1, x₀, x₂, x₀x₂, x₃, x₀x₃, x₂x₃, (x₀x₂)x₃ of a triple.
fn triple_basis(k: &FieldSpec, t: &[Octonion; 3]) -> Matrix {
    let [x0, x2, x3] = t;
    let x02 = mul(k, x0, x2);
    let rows = [
        one(k),
        *x0,
        *x2,
        x02,
        *x3,
        mul(k, x0, x3),
        mul(k, x2, x3),
        mul(k, &x02, x3),
    ];
    Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("8x8")
}

/// Reference triple: an idempotent of trace 1, then unit-norm directions orthogonal to
/// the subalgebras generated so far.
fn reference_triple(k: &FieldSpec) -> [Octonion; 3] {
    let x0 = unit(k, 0);
    let mut x2 = [k.zero(); 8];
    x2[1] = k.one();
    x2[4] = k.neg(k.one());
    let mut x3 = [k.zero(); 8];
    x3[2] = k.one();
    x3[5] = k.neg(k.one());
    [x0, x2, x3]
}

fn random_octonion(rng: &mut impl Rng, scalars: &[FieldElt]) -> Octonion {
    std::array::from_fn(|_| *scalars.choose(rng).expect("nonempty"))
}

/// A uniformly random automorphism, given as the 8×8 matrix x ↦ x·M.
pub(crate) fn random_automorphism(
    k: &FieldSpec,
    scalars: &[FieldElt],
    rng: &mut impl Rng,
) -> Result<Matrix> {
    let refs = reference_triple(k);
    let rb = triple_basis(k, &refs);
    let rinv = rb
        .inverse(k)
        .ok_or_else(|| Error::Construction("reference triple is not a basis".into()))?;
    let o1 = one(k);
    for _ in 0..10_000 {
        let y0 = loop {
            let y = random_octonion(rng, scalars);
            if trace(k, &y) == k.one() && norm(k, &y) == norm(k, &refs[0]) {
                break y;
            }
        };
        let y2 = loop {
            let y = random_octonion(rng, scalars);
            if polar(k, &y, &o1).is_zero()
                && polar(k, &y, &y0).is_zero()
                && norm(k, &y) == norm(k, &refs[1])
            {
                break y;
            }
        };
        let y02 = mul(k, &y0, &y2);
        let y3 = loop {
            let y = random_octonion(rng, scalars);
            let ok = [o1, y0, y2, y02].iter().all(|z| polar(k, &y, z).is_zero());
            if ok && norm(k, &y) == norm(k, &refs[2]) {
                break y;
            }
        };
        let tb = triple_basis(k, &[y0, y2, y3]);
        if tb.rank(k) < 8 {
            continue;
        }
        let m = rinv.mul(k, &tb);
        if is_automorphism(k, &m) {
            return Ok(m);
        }
    }
    Err(Error::Construction("no octonion automorphism found".into()))
}

pub(crate) fn is_automorphism(k: &FieldSpec, m: &Matrix) -> bool {
    let img = |x: &Octonion| -> Octonion {
        let y = m.apply(k, x);
        std::array::from_fn(|i| y[i])
    };
    (0..8).all(|i| {
        (0..8).all(|j| {
            let (x, y) = (unit(k, i), unit(k, j));
            img(&mul(k, &x, &y)) == mul(k, &img(&x), &img(&y))
        })
    })
}

/// Action on 1^⊥/⟨1⟩ (characteristic 2) in the hyperbolic basis u₁,v₁,u₂,v₂,u₃,v₃.
pub(crate) fn symplectic_six(k: &FieldSpec, m: &Matrix) -> Result<Matrix> {
    if k.p() != 2 {
        return Err(Error::usage(
            "the 6-dimensional G2 module needs characteristic 2",
        ));
    }
    let order = [1usize, 4, 2, 5, 3, 6];
    let rows = order
        .iter()
        .map(|&r| order.iter().map(|&c| m[(r, c)]).collect())
        .collect();
    Matrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn composition_algebra() {
        for (p, f) in [(2, 1), (3, 1)] {
            let k = FieldSpec::new(p, f).unwrap();
            let all: Vec<FieldElt> = k.elements().collect();
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let o = one(&k);
            for _ in 0..200 {
                let x = random_octonion(&mut rng, &all);
                let y = random_octonion(&mut rng, &all);
                assert_eq!(
                    norm(&k, &mul(&k, &x, &y)),
                    k.mul(norm(&k, &x), norm(&k, &y))
                );
                assert_eq!(mul(&k, &x, &o), x);
                assert_eq!(mul(&k, &o, &x), x);
                // alternative: x(xy) = (xx)y
                assert_eq!(mul(&k, &x, &mul(&k, &x, &y)), mul(&k, &mul(&k, &x, &x), &y));
            }
        }
    }

    #[test]
    fn automorphisms_preserve_structure() {
        let k = FieldSpec::new(2, 1).unwrap();
        let sub = k.subfield_elements();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_automorphism(&k, &sub, &mut rng).unwrap();
        assert!(is_automorphism(&k, &m));
        let s = symplectic_six(&k, &m).unwrap();
        assert!(s.entries().iter().all(|&x| k.in_subfield(x)));
        assert!(s.inverse(&k).is_some());
    }
}
