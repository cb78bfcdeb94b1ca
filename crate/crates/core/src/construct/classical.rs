//! Explicit semilinear generators for SU(V) and its subgroups in the standard basis.

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{FieldElt, FieldSpec};
use crate::grp::SemilinearMap;
use crate::linalg::Matrix;
use crate::unispace::{UnitarySpace, Vector};

use super::g2;
use super::matgen::{self, Blowup};
use super::orders::{order_g2, order_sl, order_sp};

/// Subgroups of T = SL_m(q²) obtained from a group over GF(q^{2b}).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtKind {
    Sl,
    Sp,
    G2,
}

/// Outer (non-SU) elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OuterKind {
    /// Swaps e_i and f_i.
    Gamma,
    /// Coordinatewise p-th power.
    Phi,
    /// ρ = φ.
    RhoPhi,
    /// ρ = φγ^{2/f}.
    RhoPhiGamma,
}

/// F_p-basis of the F_p-span of `elems`.
fn prime_span_basis(k: &FieldSpec, elems: &[FieldElt]) -> Vec<FieldElt> {
    let mut span: HashSet<FieldElt> = HashSet::from([k.zero()]);
    let mut basis = Vec::new();
    for &x in elems {
        if span.contains(&x) {
            continue;
        }
        basis.push(x);
        let mut next = HashSet::new();
        for &s in &span {
            for c in 0..k.p() {
                next.insert(k.add(s, k.mul(k.from_int(c as i64), x)));
            }
        }
        span = next;
    }
    basis
}

/// F_p-basis of {c : c + c^q = 0}.
fn trace_zero_basis(k: &FieldSpec) -> Vec<FieldElt> {
    let tz: Vec<FieldElt> = k
        .elements()
        .filter(|&c| !c.is_zero() && k.add(c, k.conj(c)).is_zero())
        .collect();
    prime_span_basis(k, &tz)
}

fn require_even(sp: &UnitarySpace) -> Result<usize> {
    if sp.dim() % 2 == 1 {
        return Err(Error::usage("construction needs even dimension n = 2m"));
    }
    Ok(sp.m())
}

fn check_isometries(sp: &UnitarySpace, gens: &[SemilinearMap], det_one: bool) -> Result<()> {
    let k = sp.field();
    for (i, g) in gens.iter().enumerate() {
        if !g.preserves_form(sp) {
            return Err(Error::Construction(format!(
                "generator {i} does not preserve the form"
            )));
        }
        if det_one && g.det(k) != k.one() {
            return Err(Error::Construction(format!(
                "generator {i} has determinant ≠ 1"
            )));
        }
    }
    Ok(())
}

fn linear_all(k: &FieldSpec, mats: Vec<Matrix>) -> Result<Vec<SemilinearMap>> {
    mats.into_iter()
        .map(|m| SemilinearMap::linear(k, m))
        .collect()
}

/// Unitary transvection x ↦ x + c·β(x,a)·a for isotropic a and c + c^q = 0.
fn unitary_transvection(sp: &UnitarySpace, a: &Vector, c: FieldElt) -> Matrix {
    let k = &**sp.field();
    let rows = (0..sp.dim())
        .map(|r| {
            let x = sp.basis_vector(r);
            let s = k.mul(c, sp.form_unchecked(&x.0, &a.0));
            x.add(k, &a.scale(k, s)).0
        })
        .collect();
    Matrix::from_rows(rows).expect("square")
}

/// Generators of SU(V): unitary transvections plus one torus element.
pub fn su_generators(sp: &UnitarySpace) -> Result<Vec<SemilinearMap>> {
    let k = &**sp.field();
    let n = sp.dim();
    let m = sp.m();
    let full = prime_span_basis(k, &k.elements().collect::<Vec<_>>());
    let mut dirs: Vec<Vector> = Vec::new();
    for i in 1..=m {
        dirs.push(sp.e(i));
        dirs.push(sp.f(i));
        for j in 1..=m {
            if i != j {
                for &t in &full {
                    dirs.push(sp.e(i).add(k, &sp.e(j).scale(k, t)));
                    dirs.push(sp.e(i).add(k, &sp.f(j).scale(k, t)));
                }
            }
        }
        if n % 2 == 1 {
            let d = sp.basis_vector(n - 1);
            let a = sp
                .e(i)
                .add(k, &sp.f(i).scale(k, k.neg(sp.lambda())))
                .add(k, &d);
            dirs.push(a);
        }
    }
    let cs = trace_zero_basis(k);
    let mut mats = Vec::new();
    for a in &dirs {
        debug_assert!(sp.norm(a).is_zero());
        for &c in &cs {
            mats.push(unitary_transvection(sp, a, c));
        }
    }
    // torus element
    let delta = k.primitive_element();
    let q = k.q() as u64;
    let order = k.q2() as u64 - 1;
    let dpow = |e: i64| k.pow(delta, e.rem_euclid(order as i64) as u64);
    let mut diag = vec![k.one(); n];
    diag[0] = delta;
    diag[1] = dpow(-(q as i64));
    if m >= 2 {
        diag[2] = dpow(-1);
        diag[3] = dpow(q as i64);
    } else {
        diag[n - 1] = dpow(q as i64 - 1);
    }
    let mut t = Matrix::identity(k, n);
    for (i, &d) in diag.iter().enumerate() {
        t[(i, i)] = d;
    }
    mats.push(t);
    let gens = linear_all(k, mats)?;
    check_isometries(sp, &gens, true)?;
    Ok(gens)
}

/// Generators of R, the kernel of SU(V)_U on U: f_j ↦ f_j + Σ B_ji e_i, B skew-Hermitian.
pub fn radical_generators(sp: &UnitarySpace) -> Result<Vec<SemilinearMap>> {
    let m = require_even(sp)?;
    let k = &**sp.field();
    let full = prime_span_basis(k, &k.elements().collect::<Vec<_>>());
    let tz = trace_zero_basis(k);
    let zero = vec![vec![k.zero(); m]; m];
    let mut mats = Vec::new();
    for j in 0..m {
        for &c in &tz {
            let mut b = zero.clone();
            b[j][j] = c;
            mats.push(matgen::radical_element(k, &b));
        }
        for l in j + 1..m {
            for &t in &full {
                let mut b = zero.clone();
                b[j][l] = t;
                b[l][j] = k.neg(k.conj(t));
                mats.push(matgen::radical_element(k, &b));
            }
        }
    }
    let gens = linear_all(k, mats)?;
    check_isometries(sp, &gens, true)?;
    Ok(gens)
}

/// Every element of R (q^{m²} of them), for element-level checks.
pub fn radical_elements(sp: &UnitarySpace, limit: u128) -> Result<Vec<SemilinearMap>> {
    let m = require_even(sp)?;
    let k = &**sp.field();
    let count = (k.q() as u128).pow((m * m) as u32);
    if count > limit {
        return Err(Error::capacity("radical enumeration", count, limit));
    }
    let tz: Vec<FieldElt> = k
        .elements()
        .filter(|&c| k.add(c, k.conj(c)).is_zero())
        .collect();
    let all: Vec<FieldElt> = k.elements().collect();
    let mut positions: Vec<(usize, usize)> = Vec::new();
    for j in 0..m {
        for l in j..m {
            positions.push((j, l));
        }
    }
    let mut out = Vec::with_capacity(count as usize);
    let radices: Vec<usize> = positions
        .iter()
        .map(|&(j, l)| if j == l { tz.len() } else { all.len() })
        .collect();
    let mut digits = vec![0usize; positions.len()];
    loop {
        let mut b = vec![vec![k.zero(); m]; m];
        for (idx, &(j, l)) in positions.iter().enumerate() {
            if j == l {
                b[j][j] = tz[digits[idx]];
            } else {
                let t = all[digits[idx]];
                b[j][l] = t;
                b[l][j] = k.neg(k.conj(t));
            }
        }
        out.push(SemilinearMap::linear(k, matgen::radical_element(k, &b))?);
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(out);
            }
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Embeds m×m matrices acting on U into SU(V) via the β-forced action on W.
fn levi_maps(sp: &UnitarySpace, mats: Vec<Matrix>) -> Result<Vec<SemilinearMap>> {
    let k = &**sp.field();
    let embedded = mats
        .iter()
        .map(|a| matgen::levi_embed(k, a))
        .collect::<Result<Vec<_>>>()?;
    let gens = linear_all(k, embedded)?;
    check_isometries(sp, &gens, true)?;
    Ok(gens)
}

/// Generators of T = SL_m(q²) stabilizing U and W.
pub fn levi_generators(sp: &UnitarySpace) -> Result<Vec<SemilinearMap>> {
    let m = require_even(sp)?;
    let k = &**sp.field();
    let basis = matgen::prime_basis(k, k.degree());
    levi_maps(sp, matgen::sl_generators(k, m, &basis))
}

/// Generators of SL_a, Sp_a or G₂ over GF(q^{2b}) inside T, with the closed-form order.
pub fn ext_generators(
    sp: &UnitarySpace,
    kind: ExtKind,
    a: usize,
    b: usize,
    g2_count: usize,
    seed: u64,
) -> Result<(Vec<SemilinearMap>, BigUint)> {
    let m = require_even(sp)?;
    if a * b != m {
        return Err(Error::usage(format!(
            "need m = ab, got m = {m}, a = {a}, b = {b}"
        )));
    }
    let k = sp.field();
    let bl = Blowup::new(k, b)?;
    let big = bl.big().clone();
    let big_q = big.q2();
    let basis = matgen::prime_basis(&big, big.degree());
    let (small_mats, order) = match kind {
        ExtKind::Sl => (
            matgen::sl_generators(&big, a, &basis),
            order_sl(a as u32, big_q),
        ),
        ExtKind::Sp => {
            if a % 2 == 1 {
                return Err(Error::usage("Sp_a needs a even"));
            }
            (
                matgen::sp_generators(&big, a, &basis),
                order_sp(a as u32, big_q),
            )
        }
        ExtKind::G2 => {
            if a != 6 || k.p() != 2 {
                return Err(Error::usage("G2 needs a = 6 and q even"));
            }
            let all: Vec<FieldElt> = big.elements().collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mats = (0..g2_count)
                .map(|_| {
                    g2::random_automorphism(&big, &all, &mut rng)
                        .and_then(|m| g2::symplectic_six(&big, &m))
                })
                .collect::<Result<Vec<_>>>()?;
            (mats, order_g2(big_q))
        }
    };
    let blown = small_mats.iter().map(|x| bl.blow(x)).collect();
    Ok((levi_maps(sp, blown)?, order))
}

/// Conjugates a matrix written in the basis μe₁, f₁, …, μe_m, f_m to standard coordinates.
fn from_symplectic_basis(k: &FieldSpec, mu: FieldElt, s: &Matrix) -> Result<Matrix> {
    let n = s.rows();
    let d: Vec<FieldElt> = (0..n)
        .map(|i| if i % 2 == 0 { mu } else { k.one() })
        .collect();
    let mut rows = s.row_vecs();
    for (i, row) in rows.iter_mut().enumerate() {
        let di = k.inv(d[i])?;
        for (j, x) in row.iter_mut().enumerate() {
            *x = k.mul(k.mul(di, *x), d[j]);
        }
    }
    Matrix::from_rows(rows)
}

/// Sp_{2m}(q) as the stabilizer of the GF(q)-span of μe₁, f₁, …, μe_m, f_m and its
/// alternating form β/μ.
pub fn sp2m_generators(sp: &UnitarySpace) -> Result<Vec<SemilinearMap>> {
    let m = require_even(sp)?;
    let k = &**sp.field();
    let basis = matgen::prime_basis(k, k.f() as usize);
    let mu = k.solve_mu();
    let mats = matgen::sp_generators(k, 2 * m, &basis)
        .iter()
        .map(|s| from_symplectic_basis(k, mu, s))
        .collect::<Result<Vec<_>>>()?;
    let gens = linear_all(k, mats)?;
    check_isometries(sp, &gens, true)?;
    Ok(gens)
}

/// `count` random elements of G₂(q) < Sp₆(q) < SU₆(q), q even.
pub fn g2_generators(sp: &UnitarySpace, count: usize, seed: u64) -> Result<Vec<SemilinearMap>> {
    let k = &**sp.field();
    if k.p() != 2 {
        return Err(Error::usage("G2 construction needs q even"));
    }
    if sp.dim() != 6 {
        return Err(Error::usage("G2 acts on a 6-dimensional space"));
    }
    let sub = k.subfield_elements();
    let mu = k.solve_mu();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mats = Vec::with_capacity(count);
    for _ in 0..count {
        let m = g2::random_automorphism(k, &sub, &mut rng)?;
        mats.push(from_symplectic_basis(k, mu, &g2::symplectic_six(k, &m)?)?);
    }
    let gens = linear_all(k, mats)?;
    check_isometries(sp, &gens, true)?;
    Ok(gens)
}

/// γ, φ and the composites ρ.
pub fn outer_element(sp: &UnitarySpace, kind: OuterKind) -> Result<SemilinearMap> {
    let k = &**sp.field();
    let n = sp.dim();
    let gamma = || {
        let mut mat = Matrix::zeros(n, n);
        for i in 0..n / 2 {
            mat[(2 * i, 2 * i + 1)] = k.one();
            mat[(2 * i + 1, 2 * i)] = k.one();
        }
        if n % 2 == 1 {
            mat[(n - 1, n - 1)] = k.one();
        }
        SemilinearMap::linear(k, mat)
    };
    let phi = SemilinearMap::frobenius_map(k, n);
    match kind {
        OuterKind::Gamma => gamma(),
        OuterKind::Phi | OuterKind::RhoPhi => Ok(phi),
        OuterKind::RhoPhiGamma => match k.f() {
            1 => Ok(phi.then(k, &gamma()?.pow(k, 2))),
            2 => Ok(phi.then(k, &gamma()?)),
            f => Err(Error::usage(format!("φγ^(2/f) is undefined for f = {f}"))),
        },
    }
}
