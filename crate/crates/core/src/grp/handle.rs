use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::unispace::{Subspace, Vector};

use super::chain::StabChain;
use super::domain::DomainRef;
use super::perm::Perm;
use super::semilinear::SemilinearMap;

/// Exact, arbitrary-precision group order.
pub type BigCount = BigUint;

pub const DEFAULT_SEED: u64 = 0x5eed0f5c41e;

/// Bound on the number of subspaces enumerated by [`GroupHandle::subspace_stabilizer`].
pub const SUBSPACE_ORBIT_BUDGET: usize = 200_000;

/// A group of semilinear maps together with its permutation image on a vector domain
/// and a lazily built stabilizer chain.
#[derive(Clone)]
pub struct GroupHandle {
    label: String,
    domain: DomainRef,
    gens: Vec<Perm>,
    semilinear: Vec<SemilinearMap>,
    chain: Arc<OnceLock<Arc<StabChain>>>,
    seed: u64,
    order_bound: Option<BigCount>,
}

impl std::fmt::Debug for GroupHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GroupHandle({}, {} gens on {:?})",
            self.label,
            self.gens.len(),
            self.domain
        )
    }
}

impl GroupHandle {
    pub fn from_semilinear(
        label: impl Into<String>,
        domain: &DomainRef,
        gens: Vec<SemilinearMap>,
    ) -> Result<Self> {
        let perms = gens
            .iter()
            .map(|g| domain.perm_of(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupHandle {
            label: label.into(),
            domain: domain.clone(),
            gens: perms,
            semilinear: gens,
            chain: Arc::new(OnceLock::new()),
            seed: DEFAULT_SEED,
            order_bound: None,
        })
    }

    pub fn from_perms(
        label: impl Into<String>,
        domain: &DomainRef,
        gens: Vec<Perm>,
    ) -> Result<Self> {
        for g in &gens {
            if g.degree() != domain.len() {
                return Err(Error::Dimension {
                    expected: domain.len(),
                    found: g.degree(),
                });
            }
        }
        Ok(GroupHandle {
            label: label.into(),
            domain: domain.clone(),
            gens,
            semilinear: Vec::new(),
            chain: Arc::new(OnceLock::new()),
            seed: DEFAULT_SEED,
            order_bound: None,
        })
    }

    fn from_chain(label: impl Into<String>, domain: &DomainRef, chain: StabChain) -> Self {
        let gens = chain.strong_generators().to_vec();
        let lock = OnceLock::new();
        let _ = lock.set(Arc::new(chain));
        GroupHandle {
            label: label.into(),
            domain: domain.clone(),
            gens,
            semilinear: Vec::new(),
            chain: Arc::new(lock),
            seed: DEFAULT_SEED,
            order_bound: None,
        }
    }

    pub fn trivial(label: impl Into<String>, domain: &DomainRef) -> Self {
        GroupHandle::from_perms(label, domain, Vec::new()).expect("no generators")
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        if self.chain.get().is_none() {
            self.chain = Arc::new(OnceLock::new());
        }
        self
    }

    /// Declares an upper bound on |⟨gens⟩| (for instance the order of a classical group
    /// known to contain every generator). Chain construction stops once it is reached.
    pub fn with_order_bound(mut self, bound: BigCount) -> Self {
        self.order_bound = Some(bound);
        if self.chain.get().is_none() {
            self.chain = Arc::new(OnceLock::new());
        }
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn domain(&self) -> &DomainRef {
        &self.domain
    }
    pub fn perm_generators(&self) -> &[Perm] {
        &self.gens
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Generators as semilinear maps (lifted from the permutation image if needed).
    pub fn semilinear_generators(&self) -> Vec<SemilinearMap> {
        if !self.semilinear.is_empty() || self.gens.is_empty() {
            return self.semilinear.clone();
        }
        self.gens
            .iter()
            .map(|p| self.domain.lift(p).expect("domain action is faithful"))
            .collect()
    }

    /// Installs a chain computed elsewhere (for instance from a cache).
    pub(crate) fn install_chain(&self, chain: StabChain) {
        let _ = self.chain.set(Arc::new(chain));
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| {
            Arc::new(StabChain::build(
                &self.gens,
                self.domain.len(),
                self.domain.preferred_base(),
                self.order_bound.as_ref(),
                self.seed,
            ))
        })
    }

    pub fn order(&self) -> BigCount {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.iter().all(Perm::is_identity)
    }

    pub fn perm_of(&self, g: &SemilinearMap) -> Result<Perm> {
        self.domain.perm_of(g)
    }

    pub fn contains_perm(&self, g: &Perm) -> bool {
        self.chain().contains(g)
    }

    /// Membership of a semilinear map; it must preserve the domain.
    pub fn membership(&self, g: &SemilinearMap) -> Result<bool> {
        Ok(self.contains_perm(&self.domain.perm_of(g)?))
    }

    /// Every generator of `self` lies in `other` (same domain).
    pub fn is_subgroup_of(&self, other: &GroupHandle) -> bool {
        Arc::ptr_eq(&self.domain, &other.domain) && self.gens.iter().all(|g| other.contains_perm(g))
    }

    fn point_index(&self, x: &Vector) -> Result<u32> {
        self.domain
            .index_of(x)
            .ok_or_else(|| Error::usage(format!("vector {x:?} is not in the domain")))
    }

    pub fn orbit_of_point(&self, start: u32) -> Vec<u32> {
        let mut seen = vec![false; self.domain.len()];
        let mut orbit = vec![start];
        seen[start as usize] = true;
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for g in &self.gens {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                }
            }
        }
        orbit
    }

    pub fn orbit(&self, x: &Vector) -> Result<Vec<Vector>> {
        let i = self.point_index(x)?;
        Ok(self
            .orbit_of_point(i)
            .into_iter()
            .map(|j| self.domain.point(j).clone())
            .collect())
    }

    /// Chain whose first base point is `point`.
    fn chain_based_at(&self, point: u32) -> StabChain {
        let current = self.chain();
        if current.base().first() == Some(&point) {
            return current.clone();
        }
        let order = current.order();
        StabChain::build(
            current.strong_generators(),
            self.domain.len(),
            &[point],
            Some(&order),
            self.seed ^ point as u64,
        )
    }

    pub fn stabilizer_of_point(&self, point: u32) -> GroupHandle {
        let chain = self.chain_based_at(point).tail();
        GroupHandle::from_chain(format!("{}_{{{point}}}", self.label), &self.domain, chain)
            .with_seed(self.seed)
    }

    /// Point stabilizer G_x.
    pub fn stabilizer(&self, x: &Vector) -> Result<GroupHandle> {
        let i = self.point_index(x)?;
        Ok(self.stabilizer_of_point(i))
    }

    /// Setwise stabilizer of a subspace.
    pub fn subspace_stabilizer(&self, s: &Subspace) -> Result<GroupHandle> {
        let sp = self.domain.space().clone();
        self.stabilize_object(
            s.clone(),
            |g, x| g.act_subspace(&sp, x),
            Subspace::key,
            format!("{}_U", self.label),
        )
    }

    /// Stabilizer of any vector, also one outside the domain.
    pub fn vector_stabilizer(&self, x: &Vector) -> Result<GroupHandle> {
        if self.domain.index_of(x).is_some() {
            return self.stabilizer(x);
        }
        let k = self.domain.space().field().clone();
        self.stabilize_object(
            x.clone(),
            |g, y| Vector(g.act_coords(&k, &y.0)),
            Vector::key,
            format!("{}_x", self.label),
        )
    }

    /// Stabilizer of `start`, computed as a point stabilizer in the action on the
    /// disjoint union of the domain and the orbit of `start`.
    fn stabilize_object<T: Clone, K: std::hash::Hash + Eq>(
        &self,
        start: T,
        act: impl Fn(&SemilinearMap, &T) -> T,
        key: impl Fn(&T) -> K,
        label: String,
    ) -> Result<GroupHandle> {
        let maps = self.semilinear_generators();
        let mut orbit: Vec<T> = vec![start.clone()];
        let mut index: HashMap<K, u32> = HashMap::new();
        index.insert(key(&start), 0);
        let mut head = 0;
        while head < orbit.len() {
            let cur = orbit[head].clone();
            head += 1;
            for g in &maps {
                let img = act(g, &cur);
                let kk = key(&img);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(kk) {
                    e.insert(orbit.len() as u32);
                    orbit.push(img);
                    if orbit.len() > SUBSPACE_ORBIT_BUDGET {
                        return Err(Error::capacity(
                            "orbit for stabilizer",
                            orbit.len() as u128,
                            SUBSPACE_ORBIT_BUDGET as u128,
                        ));
                    }
                }
            }
        }
        let n = self.domain.len();
        let extended: Vec<Perm> = maps
            .iter()
            .zip(&self.gens)
            .map(|(g, p)| {
                let mut images = p.images().to_vec();
                for obj in &orbit {
                    images.push(n as u32 + index[&key(&act(g, obj))]);
                }
                Perm::from_images_unchecked(images)
            })
            .collect();
        let order = self.order();
        let chain = StabChain::build(
            &extended,
            n + orbit.len(),
            &[n as u32],
            Some(&order),
            self.seed,
        )
        .tail();
        let gens: Vec<Perm> = chain
            .strong_generators()
            .iter()
            .map(|g| g.restrict(n))
            .collect();
        let stab_order = chain.order();
        let h = GroupHandle::from_perms(label, &self.domain, gens)?.with_seed(self.seed);
        let c = StabChain::build(
            h.perm_generators(),
            n,
            self.domain.preferred_base(),
            Some(&stab_order),
            self.seed,
        );
        h.install_chain(c);
        Ok(h)
    }

    /// H ∩ K by backtrack search; fails with a capacity error beyond `budget` nodes.
    pub fn intersection(&self, other: &GroupHandle, budget: u64) -> Result<GroupHandle> {
        if !Arc::ptr_eq(&self.domain, &other.domain) {
            return Err(Error::usage("handles act on different domains"));
        }
        let (small, large) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        let hc = small.chain();
        let kc = StabChain::build(
            large.chain().strong_generators(),
            self.domain.len(),
            &hc.base(),
            Some(&large.order()),
            self.seed,
        );
        let (gens, order) = super::backtrack::intersect(hc, &kc, budget)?;
        let h = GroupHandle::from_perms(
            format!("{} & {}", self.label, other.label),
            &self.domain,
            gens,
        )?
        .with_seed(self.seed);
        let chain = StabChain::build(
            h.perm_generators(),
            self.domain.len(),
            self.domain.preferred_base(),
            Some(&order),
            self.seed,
        );
        h.install_chain(chain);
        Ok(h)
    }

    pub fn conjugate(&self, x: &Perm) -> GroupHandle {
        let gens = self.gens.iter().map(|g| g.conjugate_by(x)).collect();
        let h = GroupHandle::from_perms(format!("{}^x", self.label), &self.domain, gens)
            .expect("same degree")
            .with_seed(self.seed);
        if let Some(c) = self.chain.get() {
            let order = c.order();
            let chain = StabChain::build(
                h.perm_generators(),
                self.domain.len(),
                self.domain.preferred_base(),
                Some(&order),
                self.seed,
            );
            h.install_chain(chain);
        }
        h
    }

    /// Subgroup generated by both handles' generators.
    pub fn join(&self, other: &GroupHandle) -> Result<GroupHandle> {
        if !Arc::ptr_eq(&self.domain, &other.domain) {
            return Err(Error::usage("handles act on different domains"));
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        let mut maps = Vec::new();
        if !self.semilinear.is_empty() && !other.semilinear.is_empty() {
            maps = self.semilinear.clone();
            maps.extend(other.semilinear.iter().cloned());
        }
        Ok(GroupHandle {
            label: format!("<{}, {}>", self.label, other.label),
            domain: self.domain.clone(),
            gens,
            semilinear: maps,
            chain: Arc::new(OnceLock::new()),
            seed: self.seed,
            order_bound: None,
        })
    }

    /// Normal closure in `self` of the subgroup generated by `seeds`.
    pub fn normal_closure(&self, seeds: &[Perm]) -> GroupHandle {
        let n = self.domain.len();
        let mut ngens: Vec<Perm> = Vec::new();
        let mut chain = StabChain::trivial(n, self.domain.preferred_base());
        let push = |g: Perm, ngens: &mut Vec<Perm>, chain: &mut StabChain| {
            if !g.is_identity() && !chain.contains(&g) {
                ngens.push(g);
                *chain = StabChain::build(ngens, n, self.domain.preferred_base(), None, self.seed);
            }
        };
        for s in seeds {
            push(s.clone(), &mut ngens, &mut chain);
        }
        let mut i = 0;
        while i < ngens.len() {
            for g in &self.gens {
                let c = ngens[i].conjugate_by(g);
                push(c, &mut ngens, &mut chain);
            }
            i += 1;
        }
        let h = GroupHandle::from_perms(format!("ncl({})", self.label), &self.domain, ngens)
            .expect("same degree")
            .with_seed(self.seed);
        h.install_chain(chain);
        h
    }

    pub fn derived_subgroup(&self) -> GroupHandle {
        let mut comms = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                comms.push(a.commutator(b));
            }
        }
        self.normal_closure(&comms)
            .with_label(format!("{}'", self.label))
    }

    /// Derived series G ≥ G' ≥ G'' ≥ … until it stabilizes; returns every term.
    pub fn derived_series(&self) -> Vec<GroupHandle> {
        let mut series = vec![self.clone()];
        loop {
            let cur = series.last().expect("nonempty");
            let next = cur.derived_subgroup();
            if next.order() == cur.order() {
                break;
            }
            let trivial = next.order().is_one();
            series.push(next);
            if trivial {
                break;
            }
        }
        series
    }

    /// The perfect residual G^(∞).
    pub fn derived_core(&self) -> GroupHandle {
        let series = self.derived_series();
        let last = series.last().expect("nonempty").clone();
        last.with_label(format!("{}^(inf)", self.label))
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> Perm {
        self.chain().random_element(rng)
    }

    /// All elements, if the order is at most `limit`.
    pub fn elements(&self, limit: usize) -> Option<Vec<Perm>> {
        self.chain().elements(limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::Builder;
    use crate::grp::DEFAULT_SEARCH_BUDGET;
    use rand::SeedableRng;

    fn big(x: u64) -> BigCount {
        BigCount::from(x)
    }

    #[test]
    fn orbits_and_stabilizers() {
        let b = Builder::new(4, 2).unwrap();
        let g = b.build_su().unwrap();
        let v = b.space().v();
        assert_eq!(g.orbit(&v).unwrap().len(), 120);
        assert_eq!(g.stabilizer(&v).unwrap().order(), big(216));
        // e1 is isotropic, outside the domain: 135 nonzero isotropic vectors.
        let e1 = b.space().e(1);
        assert_eq!(g.vector_stabilizer(&e1).unwrap().order(), big(25920 / 135));
        assert!(g.stabilizer(&e1).is_err());
    }

    #[test]
    fn subgroups_and_membership() {
        let b = Builder::new(4, 2).unwrap();
        let g = b.build_su().unwrap();
        let t = b.build_levi_t().unwrap();
        let sp = b.build_sp2m_in_su().unwrap();
        assert!(t.is_subgroup_of(&g) && !g.is_subgroup_of(&t));
        let phi = b.build_outer(crate::construct::OuterKind::Phi).unwrap();
        assert!(!g.membership(&phi).unwrap());
        assert!(sp.membership(&sp.semilinear_generators()[0]).unwrap());
        let tr = GroupHandle::trivial("1", g.domain());
        assert!(tr.is_trivial() && tr.is_subgroup_of(&t));
        assert_eq!(tr.elements(10).unwrap().len(), 1);
        assert!(g.elements(100).is_none());
    }

    #[test]
    fn intersections_and_conjugates() {
        let b = Builder::new(4, 2).unwrap();
        let g = b.build_su().unwrap();
        let t = b.build_levi_t().unwrap();
        let r = b.build_radical_r().unwrap();
        let sp = b.build_sp2m_in_su().unwrap();
        assert_eq!(t.intersection(&r, DEFAULT_SEARCH_BUDGET).unwrap().order(), big(1));
        let x = g.random_element(&mut rand_chacha::ChaCha8Rng::seed_from_u64(5));
        let spx = sp.conjugate(&x);
        assert_eq!(spx.order(), big(720));
        let both = sp.intersection(&spx, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(both.is_subgroup_of(&sp) && both.is_subgroup_of(&spx));
        assert_eq!(t.join(&r).unwrap().order(), big(960));
    }

    #[test]
    fn derived_series() {
        let b = Builder::new(4, 2).unwrap();
        let sp = b.build_sp2m_in_su().unwrap();
        let orders: Vec<_> = sp.derived_series().iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![big(720), big(360)]);
        assert_eq!(sp.derived_core().order(), big(360));
        let r = b.build_radical_r().unwrap();
        assert!(r.derived_subgroup().is_trivial());
        let t = b.build_levi_t().unwrap();
        let nc = b.build_su().unwrap().normal_closure(&t.perm_generators()[..1]);
        assert_eq!(nc.order(), big(25920));
    }
}
