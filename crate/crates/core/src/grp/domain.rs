use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::FieldElt;
use crate::linalg::Matrix;
use crate::unispace::{Space, Vector, DEFAULT_ENUMERATION_BUDGET};

use super::perm::Perm;
use super::semilinear::SemilinearMap;

/// How a domain was produced; part of the chain-cache key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainKind {
    /// All vectors of norm 1.
    NormOne,
    /// All nonzero vectors.
    NonZero,
    /// Closure of seed vectors under a generator set.
    Orbit,
}

/// A finite set of vectors on which groups act by permutations.
pub struct Domain {
    space: Space,
    kind: DomainKind,
    points: Vec<Vector>,
    index: HashMap<u128, u32>,
    /// Indices of n linearly independent points.
    frame: Vec<u32>,
    frame_inv: Matrix,
    /// Preferred leading base points (v, e₁, f₁ when present).
    preferred_base: Vec<u32>,
}

pub type DomainRef = Arc<Domain>;

impl std::fmt::Debug for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Domain({:?}, {:?}, {} points)",
            self.space,
            self.kind,
            self.points.len()
        )
    }
}

impl Domain {
    pub fn from_points(space: Space, kind: DomainKind, points: Vec<Vector>) -> Result<DomainRef> {
        let k = space.field().clone();
        let n = space.dim();
        let index: HashMap<u128, u32> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.key(), i as u32))
            .collect();
        if index.len() != points.len() {
            return Err(Error::usage("domain points must be distinct"));
        }
        // greedy independent frame
        let mut frame = Vec::new();
        let mut rows: Vec<Vec<FieldElt>> = Vec::new();
        for (i, p) in points.iter().enumerate() {
            let mut trial = rows.clone();
            trial.push(p.0.clone());
            if Matrix::from_rows(trial.clone())?.rank(&k) == trial.len() {
                rows = trial;
                frame.push(i as u32);
                if frame.len() == n {
                    break;
                }
            }
        }
        if frame.len() < n {
            return Err(Error::Construction(format!(
                "domain of {} points does not span the {n}-dimensional space",
                points.len()
            )));
        }
        let frame_inv = Matrix::from_rows(rows)?
            .inverse(&k)
            .expect("independent frame");
        let mut preferred_base = Vec::new();
        if n.is_multiple_of(2) {
            for x in [space.v(), space.e(1), space.f(1)] {
                if let Some(&i) = index.get(&x.key()) {
                    preferred_base.push(i);
                }
            }
        }
        Ok(Arc::new(Domain {
            space,
            kind,
            points,
            index,
            frame,
            frame_inv,
            preferred_base,
        }))
    }

    /// The norm-1 vectors of the space.
    pub fn norm_one(space: &Space, budget: u128) -> Result<DomainRef> {
        let count = space.norm_one_count();
        if count > budget {
            return Err(Error::capacity("norm-1 domain size", count, budget));
        }
        let pts = space.norm_one_domain(DEFAULT_ENUMERATION_BUDGET.max(budget))?;
        Self::from_points(space.clone(), DomainKind::NormOne, pts)
    }

    /// All nonzero vectors.
    pub fn nonzero(space: &Space, budget: u128) -> Result<DomainRef> {
        let k = space.field();
        let total = (k.q2() as u128).pow(space.dim() as u32) - 1;
        if total > budget {
            return Err(Error::capacity("nonzero-vector domain size", total, budget));
        }
        let q2 = k.q2() as u128;
        let n = space.dim();
        let pts = (1..=total)
            .map(|mut idx| {
                let mut c = vec![FieldElt::ZERO; n];
                for slot in c.iter_mut().rev() {
                    *slot = FieldElt((idx % q2) as u16);
                    idx /= q2;
                }
                Vector(c)
            })
            .collect();
        Self::from_points(space.clone(), DomainKind::NonZero, pts)
    }

    /// Closure of `seeds` under `gens` (and their inverses, implicitly, by finiteness).
    pub fn orbit_closure(
        space: &Space,
        gens: &[SemilinearMap],
        seeds: &[Vector],
        budget: u128,
    ) -> Result<DomainRef> {
        let k = space.field().clone();
        let mut points: Vec<Vector> = Vec::new();
        let mut seen = HashSet::new();
        for s in seeds {
            if seen.insert(s.key()) {
                points.push(s.clone());
            }
        }
        let mut head = 0;
        while head < points.len() {
            let x = points[head].clone();
            head += 1;
            for g in gens {
                let y = Vector(g.act_coords(&k, &x.0));
                if seen.insert(y.key()) {
                    points.push(y);
                    if points.len() as u128 > budget {
                        return Err(Error::capacity(
                            "orbit-closure domain size",
                            points.len() as u128,
                            budget,
                        ));
                    }
                }
            }
        }
        Self::from_points(space.clone(), DomainKind::Orbit, points)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }
    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn points(&self) -> &[Vector] {
        &self.points
    }
    pub fn point(&self, i: u32) -> &Vector {
        &self.points[i as usize]
    }
    pub fn index_of(&self, x: &Vector) -> Option<u32> {
        self.index.get(&x.key()).copied()
    }
    pub fn preferred_base(&self) -> &[u32] {
        &self.preferred_base
    }

    /// Permutation induced by `g`; fails if `g` does not preserve the domain.
    pub fn perm_of(&self, g: &SemilinearMap) -> Result<Perm> {
        let k = self.space.field();
        if g.dim() != self.space.dim() {
            return Err(Error::Dimension {
                expected: self.space.dim(),
                found: g.dim(),
            });
        }
        let mut images = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let y = Vector(g.act_coords(k, &p.0));
            match self.index.get(&y.key()) {
                Some(&i) => images.push(i),
                None => {
                    return Err(Error::Construction(format!(
                        "generator does not preserve the domain: {p:?} maps to {y:?}"
                    )))
                }
            }
        }
        Ok(Perm::from_images_unchecked(images))
    }

    /// The semilinear map inducing `perm`, if any (unique when the action is faithful).
    pub fn lift(&self, perm: &Perm) -> Option<SemilinearMap> {
        let k = self.space.field();
        let images: Vec<Vec<FieldElt>> = self
            .frame
            .iter()
            .map(|&i| self.points[perm.apply(i) as usize].0.clone())
            .collect();
        let y = Matrix::from_rows(images).ok()?;
        for e in 0..k.degree() as i64 {
            // σ_e(X)·A = Y  ⇒  A = σ_e(X)⁻¹·Y = σ_e(X⁻¹)·Y
            let a = self.frame_inv.frobenius(k, e).mul(k, &y);
            if a.inverse(k).is_none() {
                continue;
            }
            let g = SemilinearMap::from_parts_unchecked(a, e as u32);
            let ok = self.points.iter().enumerate().all(|(i, p)| {
                let img = g.act_coords(k, &p.0);
                self.index.get(&Vector(img).key()) == Some(&perm.apply(i as u32))
            });
            if ok {
                return Some(g);
            }
        }
        None
    }

    /// Whether only the identity of ΓL(V) fixes every point (restricted to linear maps
    /// when `semilinear` is false).
    pub fn is_faithful(&self, semilinear: bool) -> bool {
        let k = self.space.field();
        let max_e = if semilinear { k.degree() } else { 1 };
        let images: Vec<Vec<FieldElt>> = self
            .frame
            .iter()
            .map(|&i| self.points[i as usize].0.clone())
            .collect();
        let y = Matrix::from_rows(images).expect("frame rows");
        for e in 0..max_e as i64 {
            let a = self.frame_inv.frobenius(k, e).mul(k, &y);
            let g = SemilinearMap::from_parts_unchecked(a, e as u32);
            if g.is_identity(k) {
                continue;
            }
            let fixes_all = self.points.iter().all(|p| g.act_coords(k, &p.0) == p.0);
            if fixes_all {
                return false;
            }
        }
        true
    }
}
