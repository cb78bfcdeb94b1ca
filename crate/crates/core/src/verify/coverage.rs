//! Membership in a product set H·G_v, and coverage of the unipotent radical.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grp::{GroupHandle, Perm, SemilinearMap};
use crate::unispace::Vector;

/// Largest radical enumerated element by element.
pub const COVERAGE_LIMIT: usize = 4096;

/// Decides g ∈ H·G_v by testing v^(g⁻¹) ∈ v^H.
pub struct ProductMembership {
    v: Vector,
    orbit: HashSet<u128>,
    k: crate::ff::Field,
}

impl ProductMembership {
    pub fn new(h: &GroupHandle, v: &Vector) -> Self {
        let k = h.domain().space().field().clone();
        let gens = h.semilinear_generators();
        let mut orbit = HashSet::from([v.key()]);
        let mut queue = vec![v.clone()];
        while let Some(x) = queue.pop() {
            for g in &gens {
                let y = Vector(g.act_coords(&k, &x.0));
                if orbit.insert(y.key()) {
                    queue.push(y);
                }
            }
        }
        ProductMembership {
            v: v.clone(),
            orbit,
            k,
        }
    }

    pub fn orbit_len(&self) -> usize {
        self.orbit.len()
    }

    pub fn contains(&self, g: &SemilinearMap) -> bool {
        let y = g.inverse(&self.k).act_coords(&self.k, &self.v.0);
        self.orbit.contains(&Vector(y).key())
    }
}

/// g ∈ H·G_v.
pub fn hk_member(g: &SemilinearMap, h: &GroupHandle, v: &Vector) -> bool {
    ProductMembership::new(h, v).contains(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct RCoverageReport {
    #[serde(with = "super::decimal")]
    pub order_r: BigUint,
    pub tested: usize,
    pub covered: usize,
    /// Uncovered elements of R (as permutation images), truncated.
    pub failures: Vec<String>,
}

impl RCoverageReport {
    pub fn is_covered(&self) -> bool {
        BigUint::from(self.covered) == self.order_r
    }
}

/// Tests every r ∈ R for membership in H·G_v.
pub fn check_r_coverage(h: &GroupHandle, v: &Vector, r: &GroupHandle) -> Result<RCoverageReport> {
    let order_r = r.order();
    let elements = r.elements(COVERAGE_LIMIT).ok_or_else(|| {
        Error::capacity(
            "radical order",
            order_r.to_string().parse().unwrap_or(u128::MAX),
            COVERAGE_LIMIT as u128,
        )
    })?;
    let pm = ProductMembership::new(h, v);
    let domain = r.domain();
    let vi = domain.index_of(v);
    let mut covered = 0;
    let mut failures = Vec::new();
    for p in &elements {
        let ok = match vi {
            Some(i) => {
                let y = p.inverse().apply(i);
                pm.orbit.contains(&domain.point(y).key())
            }
            None => pm.contains(&domain.lift(p).expect("faithful domain")),
        };
        if ok {
            covered += 1;
        } else if failures.len() < 8 {
            failures.push(format!("{p:?}"));
        }
    }
    Ok(RCoverageReport {
        order_r,
        tested: elements.len(),
        covered,
        failures,
    })
}

/// Exhaustive product set {hk} as permutation image lists; for oracle checks.
pub fn product_set(h: &GroupHandle, k: &GroupHandle, limit: usize) -> Option<HashSet<Vec<u32>>> {
    let he = h.elements(limit)?;
    let ke = k.elements(limit)?;
    if he.len().saturating_mul(ke.len()) > limit {
        return None;
    }
    let mut out = HashSet::with_capacity(he.len() * ke.len());
    for a in &he {
        for b in &ke {
            out.insert(a.then(b).images().to_vec());
        }
    }
    Some(out)
}

/// Every subgroup of an abelian group of order ≤ `limit`, as element lists.
pub fn abelian_subgroups(r: &GroupHandle, limit: usize) -> Result<Vec<Vec<Perm>>> {
    let elements = r.elements(limit).ok_or_else(|| {
        Error::capacity(
            "abelian group order",
            r.order().try_into().unwrap_or(u128::MAX),
            limit as u128,
        )
    })?;
    let gens = r.perm_generators();
    if gens
        .iter()
        .any(|a| gens.iter().any(|b| a.then(b) != b.then(a)))
    {
        return Err(Error::usage(format!("{} is not abelian", r.label())));
    }
    let identity = Perm::identity(r.domain().len());
    let key = |set: &[Perm]| {
        let mut k: Vec<Vec<u32>> = set.iter().map(|p| p.images().to_vec()).collect();
        k.sort();
        k
    };
    let mut seen = HashSet::new();
    let mut out = vec![vec![identity]];
    seen.insert(key(&out[0]));
    let mut next = 0;
    while next < out.len() {
        let current = out[next].clone();
        next += 1;
        for x in &elements {
            if current.contains(x) {
                continue;
            }
            // ⟨X, x⟩ = ∪ X·x^i in an abelian group.
            let mut span = current.clone();
            let mut power = x.clone();
            while !current.contains(&power) {
                span.extend(current.iter().map(|c| c.then(&power)));
                power = power.then(x);
            }
            if seen.insert(key(&span)) {
                out.push(span);
            }
        }
    }
    out.sort_by_key(|s| s.len());
    Ok(out)
}

/// One subgroup P ≤ R tried as the unipotent part of H = ⟨P, S⟩.
#[derive(Clone, Debug, Serialize)]
pub struct CoverageCase {
    pub order_p: usize,
    pub s_invariant: bool,
    /// R ⊆ H·G_v.
    pub covered: bool,
    /// G = H·G_v.
    pub certified: bool,
}

impl CoverageCase {
    pub fn biconditional_holds(&self) -> bool {
        self.covered == self.certified
    }
}

/// Runs coverage and certification for H = ⟨P, S⟩ over every subgroup P of R.
pub fn coverage_cases(
    g: &GroupHandle,
    s: &GroupHandle,
    r: &GroupHandle,
    v: &Vector,
) -> Result<Vec<CoverageCase>> {
    let mut out = Vec::new();
    for p in abelian_subgroups(r, COVERAGE_LIMIT)? {
        let s_invariant = s.perm_generators().iter().all(|x| {
            let xi = x.inverse();
            p.iter().all(|a| p.contains(&xi.then(a).then(x)))
        });
        let mut gens = p.clone();
        gens.extend(s.perm_generators().iter().cloned());
        let mut h =
            GroupHandle::from_perms(format!("<P{}, {}>", p.len(), s.label()), g.domain(), gens)?;
        if s_invariant {
            h = h.with_order_bound(s.order() * BigUint::from(p.len()));
        }
        let covered = check_r_coverage(&h, v, r)?.is_covered();
        let (cert, _) = super::certify_vector_stabilizer(h.label(), Default::default(), g, &h, v)?;
        out.push(CoverageCase {
            order_p: p.len(),
            s_invariant,
            covered,
            certified: cert.verdict == super::Verdict::Certified,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::Builder;

    #[test]
    fn subgroups_of_the_radical() {
        let b = Builder::new(4, 2).unwrap();
        let r = b.build_radical_r().unwrap();
        let subs = abelian_subgroups(&r, COVERAGE_LIMIT).unwrap();
        // Subspaces of GF(2)^4: 1 + 15 + 35 + 15 + 1.
        let count = |k| subs.iter().filter(|s| s.len() == k).count();
        assert_eq!([1, 2, 4, 8, 16].map(count), [1, 15, 35, 15, 1]);
    }

    #[test]
    fn non_abelian_input_is_rejected() {
        let b = Builder::new(4, 2).unwrap();
        assert!(abelian_subgroups(&b.build_levi_t().unwrap(), COVERAGE_LIMIT).is_err());
    }

    #[test]
    fn membership_of_factors() {
        let b = Builder::new(4, 2).unwrap();
        let v = b.space().v();
        let g = b.build_su().unwrap();
        let t = b.build_levi_t().unwrap();
        let k = g.vector_stabilizer(&v).unwrap();
        for x in t.semilinear_generators().iter().chain(&k.semilinear_generators()) {
            assert!(hk_member(x, &t, &v));
        }
    }

    #[test]
    fn full_radical_is_covered() {
        let b = Builder::new(4, 2).unwrap();
        let r = b.build_radical_r().unwrap();
        let t = b.build_levi_t().unwrap();
        let h = b.assemble("R:T", &[&r, &t]).unwrap().handle;
        let rep = check_r_coverage(&h, &b.space().v(), &r).unwrap();
        assert!(rep.is_covered() && rep.failures.is_empty());
        let rep_t = check_r_coverage(&t, &b.space().v(), &r).unwrap();
        assert!(!rep_t.is_covered() && !rep_t.failures.is_empty());
    }
}
