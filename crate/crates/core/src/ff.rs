//! Exact arithmetic in GF(p^{2f}), viewed as the quadratic extension GF(q²) of GF(q), q = p^f.
//!
//! Elements are stored as their rank in the lexicographic enumeration of coefficient
//! vectors (low degree first, constant coefficient most significant), so iterating
//! `0..q2` visits the field in the canonical order used by every "first solution" search.
//! All arithmetic goes through lookup tables built once per [`FieldSpec`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field size accepted by [`FieldSpec::new`].
pub const MAX_FIELD_SIZE: u32 = 256;

/// Fixed table of moduli, coefficients low-degree-first, keyed by (p, 2f).
const MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 2, &[1, 0, 1]),
];

/// Looks up the modulus for GF(p^degree) in the fixed table.
pub fn table_modulus(p: u32, degree: u32) -> Option<&'static [u32]> {
    MODULI
        .iter()
        .find(|(mp, md, _)| *mp == p && *md == degree)
        .map(|(_, _, m)| *m)
}

/// An element of a [`FieldSpec`], identified by its enumeration rank.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElt(pub(crate) u16);

impl FieldElt {
    pub const ZERO: FieldElt = FieldElt(0);

    /// Rank of the element in the canonical enumeration.
    pub fn rank(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The field GF(p^{2f}) together with its conjugation x ↦ x^q.
pub struct FieldSpec {
    p: u32,
    f: u32,
    degree: usize,
    modulus: Vec<u32>,
    q: u32,
    q2: u32,
    one: FieldElt,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// frob[e][x] = x^(p^e) for e in 0..degree.
    frob: Vec<Vec<u16>>,
}

pub type Field = Arc<FieldSpec>;

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) [q = {}]", self.p, self.degree, self.q)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..p)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Remainder of `a` modulo monic `b` over GF(p); both low-degree-first.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                let t = (r[shift + i] + p * p - (lead * c) % p) % p;
                r[shift + i] = t;
            }
        }
        r.pop();
    }
    r
}

/// Trial-division irreducibility test for a monic polynomial over GF(p).
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    if deg == 0 || modulus[deg] % p != 1 {
        return false;
    }
    for d in 1..=deg / 2 {
        // every monic polynomial of degree d
        let count = (p as usize).pow(d as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                divisor.push((c % p as usize) as u32);
                c /= p as usize;
            }
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// GF(q²) for q = p^f, using the fixed modulus table.
    pub fn new(p: u32, f: u32) -> Result<Field> {
        let degree = 2 * f;
        let modulus = table_modulus(p, degree).ok_or_else(|| {
            Error::usage(format!(
                "no modulus for GF({p}^{degree}) in the fixed table"
            ))
        })?;
        Self::with_modulus(p, f, modulus)
    }

    /// GF(p^{2f}) with an explicit monic modulus of degree 2f (low-degree-first).
    pub fn with_modulus(p: u32, f: u32, modulus: &[u32]) -> Result<Field> {
        if !is_prime(p) || f == 0 {
            return Err(Error::usage(format!(
                "invalid characteristic/degree ({p}, {f})"
            )));
        }
        let degree = 2 * f as usize;
        if modulus.len() != degree + 1 {
            return Err(Error::usage("modulus degree must be 2f"));
        }
        let q2 = (p as u64).pow(degree as u32);
        if q2 > MAX_FIELD_SIZE as u64 {
            return Err(Error::capacity(
                "field size q²",
                q2 as u128,
                MAX_FIELD_SIZE as u128,
            ));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::usage(format!(
                "modulus {modulus:?} is reducible over GF({p})"
            )));
        }
        let q2 = q2 as u32;
        let q = p.pow(f);
        let n = q2 as usize;

        let to_coeffs = |idx: usize| -> Vec<u32> {
            let mut c = vec![0u32; degree];
            let mut x = idx;
            for i in (0..degree).rev() {
                c[i] = (x % p as usize) as u32;
                x /= p as usize;
            }
            c
        };
        let to_index = |c: &[u32]| -> usize {
            c.iter()
                .fold(0usize, |acc, &d| acc * p as usize + d as usize)
        };

        let coeffs: Vec<Vec<u32>> = (0..n).map(to_coeffs).collect();
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let s: Vec<u32> = (0..degree)
                    .map(|i| (coeffs[a][i] + coeffs[b][i]) % p)
                    .collect();
                add[a * n + b] = to_index(&s) as u16;
                let mut prod = vec![0u32; 2 * degree - 1];
                for i in 0..degree {
                    for j in 0..degree {
                        prod[i + j] = (prod[i + j] + coeffs[a][i] * coeffs[b][j]) % p;
                    }
                }
                let mut r = poly_rem(&prod, modulus, p);
                r.resize(degree, 0);
                mul[a * n + b] = to_index(&r) as u16;
            }
        }
        let mut one_c = vec![0u32; degree];
        one_c[0] = 1;
        let one = to_index(&one_c) as u16;

        let mut neg = vec![0u16; n];
        let mut inv = vec![0u16; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b as u16;
                }
                if mul[a * n + b] == one {
                    inv[a] = b as u16;
                }
            }
        }
        let mut frob = Vec::with_capacity(degree);
        let mut cur: Vec<u16> = (0..n as u16).collect();
        for _ in 0..degree {
            frob.push(cur.clone());
            // raise every entry to the p-th power once more
            cur = cur
                .iter()
                .map(|&x| {
                    let mut acc = one;
                    for _ in 0..p {
                        acc = mul[acc as usize * n + x as usize];
                    }
                    acc
                })
                .collect();
        }

        Ok(Arc::new(FieldSpec {
            p,
            f,
            degree,
            modulus: modulus.to_vec(),
            q,
            q2,
            one: FieldElt(one),
            add,
            mul,
            neg,
            inv,
            frob,
        }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn f(&self) -> u32 {
        self.f
    }
    /// Degree 2f of the field over its prime field.
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn q2(&self) -> u32 {
        self.q2
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElt {
        FieldElt::ZERO
    }
    pub fn one(&self) -> FieldElt {
        self.one
    }

    /// All elements in canonical enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElt> {
        (0..self.q2 as u16).map(FieldElt)
    }

    /// Validates that `x` belongs to this field.
    pub fn check(&self, x: FieldElt) -> Result<FieldElt> {
        if (x.0 as u32) < self.q2 {
            Ok(x)
        } else {
            Err(Error::usage(format!(
                "element {x:?} does not belong to {self:?}"
            )))
        }
    }

    /// Element from low-degree-first coefficients (reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElt> {
        if coeffs.len() > self.degree {
            return Err(Error::usage(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.degree
            )));
        }
        let mut idx = 0usize;
        for i in 0..self.degree {
            let c = coeffs.get(i).copied().unwrap_or(0) % self.p;
            idx = idx * self.p as usize + c as usize;
        }
        Ok(FieldElt(idx as u16))
    }

    pub fn coeffs(&self, x: FieldElt) -> Vec<u32> {
        let mut c = vec![0u32; self.degree];
        let mut v = x.0 as usize;
        for i in (0..self.degree).rev() {
            c[i] = (v % self.p as usize) as u32;
            v /= self.p as usize;
        }
        c
    }

    /// Integer `k` reduced into the prime field.
    pub fn from_int(&self, k: i64) -> FieldElt {
        let r = k.rem_euclid(self.p as i64) as u32;
        self.from_coeffs(&[r])
            .expect("single coefficient always fits")
    }

    /// The generator x of GF(p)[x]/(modulus).
    pub fn generator(&self) -> FieldElt {
        self.from_coeffs(&[0, 1]).expect("degree >= 2")
    }

    #[inline]
    pub fn add(&self, a: FieldElt, b: FieldElt) -> FieldElt {
        FieldElt(self.add[a.0 as usize * self.q2 as usize + b.0 as usize])
    }
    #[inline]
    pub fn sub(&self, a: FieldElt, b: FieldElt) -> FieldElt {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn neg(&self, a: FieldElt) -> FieldElt {
        FieldElt(self.neg[a.0 as usize])
    }
    #[inline]
    pub fn mul(&self, a: FieldElt, b: FieldElt) -> FieldElt {
        FieldElt(self.mul[a.0 as usize * self.q2 as usize + b.0 as usize])
    }

    pub fn inv(&self, a: FieldElt) -> Result<FieldElt> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(FieldElt(self.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FieldElt, b: FieldElt) -> Result<FieldElt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElt, mut e: u64) -> FieldElt {
        let mut base = a;
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// a^(p^e); the exponent is taken modulo the degree.
    #[inline]
    pub fn frobenius(&self, a: FieldElt, e: i64) -> FieldElt {
        let e = e.rem_euclid(self.degree as i64) as usize;
        FieldElt(self.frob[e][a.0 as usize])
    }

    /// The involution x ↦ x^q.
    #[inline]
    pub fn conj(&self, a: FieldElt) -> FieldElt {
        self.frobenius(a, self.f as i64)
    }

    /// x + x^q, an element of GF(q).
    pub fn trace(&self, a: FieldElt) -> FieldElt {
        self.add(a, self.conj(a))
    }

    /// x^(q+1), an element of GF(q).
    pub fn norm(&self, a: FieldElt) -> FieldElt {
        self.mul(a, self.conj(a))
    }

    pub fn in_subfield(&self, a: FieldElt) -> bool {
        self.conj(a) == a
    }

    /// Elements of GF(q) in enumeration order.
    pub fn subfield_elements(&self) -> Vec<FieldElt> {
        self.elements().filter(|&x| self.in_subfield(x)).collect()
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElt) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut x = a;
        let mut k = 1u64;
        while x != self.one {
            x = self.mul(x, a);
            k += 1;
        }
        Ok(k)
    }

    /// First element (in enumeration order) of multiplicative order q² − 1.
    pub fn primitive_element(&self) -> FieldElt {
        self.elements()
            .skip(1)
            .find(|&x| self.order(x).ok() == Some(self.q2 as u64 - 1))
            .expect("finite fields have primitive elements")
    }

    /// λ with λ + λ^q = 1, first in enumeration order.
    pub fn solve_lambda(&self) -> FieldElt {
        let one = self.one;
        self.elements()
            .find(|&x| self.trace(x) == one)
            .expect("trace of GF(q²)/GF(q) is surjective")
    }

    /// μ with μ^(q−1) = −1, first in enumeration order.
    pub fn solve_mu(&self) -> FieldElt {
        let target = self.neg(self.one);
        self.elements()
            .skip(1)
            .find(|&x| self.pow(x, self.q as u64 - 1) == target)
            .expect("x^(q-1) = -1 is solvable in GF(q²)")
    }

    /// ζ ∈ GF(q²) \ GF(q), first in enumeration order.
    pub fn pick_zeta(&self) -> FieldElt {
        self.elements()
            .find(|&x| !self.in_subfield(x))
            .expect("proper extension")
    }

    /// Map from `small` into `self` sending the generator of `small` to the first root
    /// of its modulus in `self`. Returns the images indexed by rank in `small`.
    pub fn embedding_from(&self, small: &FieldSpec) -> Result<Vec<FieldElt>> {
        if small.p != self.p || !self.degree.is_multiple_of(small.degree) {
            return Err(Error::usage(format!(
                "{small:?} does not embed in {self:?}"
            )));
        }
        let eval = |x: FieldElt, coeffs: &[u32]| -> FieldElt {
            coeffs.iter().rev().fold(FieldElt::ZERO, |acc, &c| {
                self.add(self.mul(acc, x), self.from_int(c as i64))
            })
        };
        let root = self
            .elements()
            .find(|&x| eval(x, &small.modulus).is_zero())
            .ok_or_else(|| Error::usage("modulus has no root in the larger field"))?;
        Ok(small
            .elements()
            .map(|y| eval(root, &small.coeffs(y)))
            .collect())
    }

    /// Serializes an element as its coefficient list, e.g. `[1,1]`.
    pub fn format(&self, x: FieldElt) -> String {
        let c = self.coeffs(x);
        let body: Vec<String> = c.iter().map(|d| d.to_string()).collect();
        format!("[{}]", body.join(","))
    }

    /// Parses the coefficient-list serialization produced by [`FieldSpec::format`].
    pub fn parse(&self, s: &str) -> Result<FieldElt> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::usage(format!("field element {t:?} is not a bracketed list")))?;
        let mut coeffs = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let v: u32 = part
                .parse()
                .map_err(|_| Error::usage(format!("bad coefficient {part:?}")))?;
            if v >= self.p {
                return Err(Error::usage(format!(
                    "coefficient {v} not reduced mod {}",
                    self.p
                )));
            }
            coeffs.push(v);
        }
        self.from_coeffs(&coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, f: u32) -> Field {
        FieldSpec::new(p, f).unwrap()
    }

    #[test]
    fn table_moduli_are_irreducible() {
        for (p, d, m) in MODULI {
            assert!(is_irreducible(m, *p), "GF({p}^{d})");
        }
        assert!(!is_irreducible(&[1, 0, 1], 2)); // x²+1 = (x+1)²
    }

    #[test]
    fn gf4_omega_squared() {
        let k = gf(2, 1);
        let w = k.generator();
        assert_eq!(k.mul(w, w), k.add(w, k.one()));
        assert_eq!(k.conj(w), k.mul(w, w));
        assert_eq!(k.frobenius(w, 1), k.mul(w, w));
    }

    #[test]
    fn gf9_i_squared_is_minus_one() {
        let k = gf(3, 1);
        let i = k.generator();
        assert_eq!(k.mul(i, i), k.from_int(2));
        assert_eq!(k.conj(i), k.neg(i));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let k = gf(2, 2);
        assert!(matches!(k.inv(k.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn foreign_element_rejected() {
        let k = gf(2, 1);
        assert!(k.check(FieldElt(200)).is_err());
        assert!(k.check(FieldElt(3)).is_ok());
    }

    #[test]
    fn desk_bound_enforced() {
        assert!(matches!(FieldSpec::new(5, 2), Err(Error::Capacity { .. })));
        assert!(FieldSpec::new(11, 1).is_err());
    }

    #[test]
    fn gf16_frobenius_squared_is_conjugation() {
        let k = gf(2, 2);
        for x in k.elements() {
            assert_eq!(k.frobenius(x, 2), k.conj(x));
            assert_eq!(k.frobenius(x, 4), x);
        }
    }

    #[test]
    fn subfield_has_q_elements() {
        for (p, f) in [(2, 1), (2, 2), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let k = gf(p, f);
            assert_eq!(k.subfield_elements().len() as u32, k.q());
            for x in k.elements() {
                assert!(k.in_subfield(k.trace(x)));
                assert!(k.in_subfield(k.norm(x)));
            }
        }
    }

    #[test]
    fn constants() {
        let k = gf(2, 1);
        assert_eq!(k.solve_lambda(), k.generator());
        assert_eq!(k.solve_mu(), k.one());
        assert_eq!(k.pick_zeta(), k.generator());

        let k = gf(3, 1);
        assert_eq!(k.solve_mu(), k.generator());
        assert_eq!(k.pick_zeta(), k.generator());
        let l = k.solve_lambda();
        assert_eq!(k.trace(l), k.one());

        for (p, f) in [(2, 1), (2, 2), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let k = gf(p, f);
            let l = k.solve_lambda();
            assert_eq!(k.trace(l), k.one());
            if p == 2 {
                assert!(!k.in_subfield(l));
            }
            let mu = k.solve_mu();
            assert_eq!(k.pow(mu, k.q() as u64 - 1), k.neg(k.one()));
            assert!(!k.in_subfield(k.pick_zeta()));
        }
    }

    #[test]
    fn serialization_round_trip() {
        let k = gf(2, 1);
        let w1 = k.add(k.generator(), k.one());
        assert_eq!(k.format(w1), "[1,1]");
        assert_eq!(k.parse("[1,1]").unwrap(), w1);
        assert_eq!(k.parse("[0]").unwrap(), k.zero());
        assert!(k.parse("[2,0]").is_err());
        assert!(k.parse("1,0").is_err());
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = gf(2, 1);
        let big = gf(2, 2);
        let emb = big.embedding_from(&small).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(
                    emb[small.mul(a, b).rank()],
                    big.mul(emb[a.rank()], emb[b.rank()])
                );
                assert_eq!(
                    emb[small.add(a, b).rank()],
                    big.add(emb[a.rank()], emb[b.rank()])
                );
            }
        }
    }
}
