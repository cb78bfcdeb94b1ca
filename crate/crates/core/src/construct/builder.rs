//! Handles for the constructed groups, sharing one unitary space and domain.

use std::path::PathBuf;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::grp::{Domain, DomainRef, GroupHandle, SemilinearMap, DEFAULT_SEED};
use crate::unispace::{Space, Subspace, UnitarySpace, Vector};

use super::classical::{self, ExtKind, OuterKind};
use super::orders::{order_g2, order_sl, order_sp, order_su};

/// Default bound on the number of points of a permutation domain.
pub const DEFAULT_DOMAIN_BUDGET: u128 = 20_000;

const G2_MAX_GENERATORS: usize = 8;

/// What to build; parameters (n, q, m) come from the builder's space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecipeKind {
    Su,
    RadicalR,
    LeviT,
    ExtSl {
        a: usize,
        b: usize,
    },
    ExtSp {
        a: usize,
        b: usize,
    },
    ExtG2 {
        b: usize,
    },
    Sp2m,
    G2InSp6,
    /// The cyclic group generated by an outer element.
    Outer(OuterKind),
    PointStab {
        of: Box<RecipeKind>,
        point: Vector,
    },
    SubspaceStab {
        of: Box<RecipeKind>,
        subspace: Subspace,
    },
    Imported(PathBuf),
}

#[derive(Clone, Debug)]
pub struct SubgroupRecipe {
    pub kind: RecipeKind,
    pub label: Option<String>,
}

impl SubgroupRecipe {
    pub fn new(kind: RecipeKind) -> Self {
        SubgroupRecipe { kind, label: None }
    }
}

/// Result of [`Builder::assemble`].
#[derive(Clone, Debug)]
pub struct Assembled {
    pub handle: GroupHandle,
    /// Product of the pieces' orders, the order of a split extension of them.
    pub claimed_order: BigUint,
    pub order: BigUint,
}

impl Assembled {
    pub fn split_order_matches(&self) -> bool {
        self.claimed_order == self.order
    }
}

/// Builds subgroups of ΓU(V) acting on one shared domain.
#[derive(Clone, Debug)]
pub struct Builder {
    space: Space,
    domain: DomainRef,
    seed: u64,
}

impl Builder {
    /// Space of dimension n over GF(q²) acting on its norm-1 vectors.
    pub fn new(n: usize, q: u32) -> Result<Self> {
        Self::with_budget(n, q, DEFAULT_DOMAIN_BUDGET)
    }

    pub fn with_budget(n: usize, q: u32, budget: u128) -> Result<Self> {
        if n < 3 {
            return Err(Error::usage("unitary groups need n ≥ 3"));
        }
        Self::for_space(UnitarySpace::with_q(n, q)?, budget)
    }

    /// Uses the norm-1 vectors, or all nonzero vectors if the former are not a faithful
    /// domain for ΓU(V).
    pub fn for_space(space: Space, budget: u128) -> Result<Self> {
        let domain = Domain::norm_one(&space, budget)?;
        let domain = if domain.is_faithful(true) {
            domain
        } else {
            Domain::nonzero(&space, budget)?
        };
        Ok(Builder {
            space,
            domain,
            seed: DEFAULT_SEED,
        })
    }

    pub fn on_domain(domain: DomainRef) -> Self {
        Builder {
            space: domain.space().clone(),
            domain,
            seed: DEFAULT_SEED,
        }
    }

    /// Smallest domain containing the basis vectors and closed under `gens`; for
    /// subgroups whose natural-space domain exceeds the budget.
    pub fn standalone(space: Space, gens: &[SemilinearMap], budget: u128) -> Result<Self> {
        let seeds: Vec<Vector> = (0..space.dim()).map(|i| space.basis_vector(i)).collect();
        let mut domain = Domain::orbit_closure(&space, gens, &seeds, budget)?;
        if gens.iter().any(|g| !g.is_linear()) && !domain.is_faithful(true) {
            let mut more = seeds.clone();
            more.push(space.v());
            domain = Domain::orbit_closure(&space, gens, &more, budget)?;
        }
        Ok(Builder::on_domain(domain))
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn space(&self) -> &Space {
        &self.space
    }
    pub fn domain(&self) -> &DomainRef {
        &self.domain
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn q(&self) -> u32 {
        self.space.q()
    }

    /// Handle with an order bound; fails unless the computed order equals it.
    pub fn handle_with_order(
        &self,
        label: &str,
        gens: Vec<SemilinearMap>,
        expected: BigUint,
    ) -> Result<GroupHandle> {
        let h = GroupHandle::from_semilinear(label, &self.domain, gens)?
            .with_seed(self.seed)
            .with_order_bound(expected.clone());
        let computed = h.order();
        if computed != expected {
            return Err(Error::OrderMismatch {
                expected: expected.to_string(),
                computed: computed.to_string(),
            });
        }
        Ok(h)
    }

    pub fn handle(&self, label: &str, gens: Vec<SemilinearMap>) -> Result<GroupHandle> {
        Ok(GroupHandle::from_semilinear(label, &self.domain, gens)?.with_seed(self.seed))
    }

    pub fn build_su(&self) -> Result<GroupHandle> {
        let n = self.space.dim();
        if n == 3 && self.q() == 2 {
            return Err(Error::usage("(n, q) = (3, 2) is excluded"));
        }
        let gens = classical::su_generators(&self.space)?;
        self.handle_with_order(
            &format!("SU{}({})", n, self.q()),
            gens,
            order_su(n as u32, self.q()),
        )
    }

    pub fn build_radical_r(&self) -> Result<GroupHandle> {
        let m = self.space.m() as u32;
        let gens = classical::radical_generators(&self.space)?;
        self.handle_with_order("R", gens, BigUint::from(self.q()).pow(m * m))
    }

    pub fn build_levi_t(&self) -> Result<GroupHandle> {
        let m = self.space.m() as u32;
        let gens = classical::levi_generators(&self.space)?;
        self.handle_with_order("T", gens, order_sl(m, self.q() * self.q()))
    }

    pub fn build_ext_subgroup(&self, kind: ExtKind, a: usize, b: usize) -> Result<GroupHandle> {
        let label = match kind {
            ExtKind::Sl => format!("SL{a}({})", self.q().pow(2 * b as u32)),
            ExtKind::Sp => format!("Sp{a}({})", self.q().pow(2 * b as u32)),
            ExtKind::G2 => format!("G2({})", self.q().pow(2 * b as u32)),
        };
        if kind != ExtKind::G2 {
            let (gens, order) = classical::ext_generators(&self.space, kind, a, b, 0, self.seed)?;
            return self.handle_with_order(&label, gens, order);
        }
        let mut last = None;
        for count in 2..=G2_MAX_GENERATORS {
            let (gens, order) =
                classical::ext_generators(&self.space, kind, a, b, count, self.seed)?;
            match self.handle_with_order(&label, gens, order) {
                Ok(h) => return Ok(h),
                Err(e @ Error::OrderMismatch { .. }) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }

    pub fn build_sp2m_in_su(&self) -> Result<GroupHandle> {
        let gens = classical::sp2m_generators(&self.space)?;
        let n = self.space.dim() as u32;
        self.handle_with_order(&format!("Sp{n}({})", self.q()), gens, order_sp(n, self.q()))
    }

    /// G₂(q) < Sp₆(q) < SU₆(q), q even.
    pub fn build_g2(&self) -> Result<GroupHandle> {
        let mut last = None;
        for count in 2..=G2_MAX_GENERATORS {
            let gens = classical::g2_generators(&self.space, count, self.seed)?;
            match self.handle_with_order(&format!("G2({})", self.q()), gens, order_g2(self.q())) {
                Ok(h) => return Ok(h),
                Err(e @ Error::OrderMismatch { .. }) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }

    pub fn build_outer(&self, kind: OuterKind) -> Result<SemilinearMap> {
        classical::outer_element(&self.space, kind)
    }

    pub fn cyclic(&self, label: &str, g: SemilinearMap) -> Result<GroupHandle> {
        self.handle(label, vec![g])
    }

    /// The group generated by all pieces, with the split-extension order check.
    pub fn assemble(&self, label: &str, pieces: &[&GroupHandle]) -> Result<Assembled> {
        let mut gens = Vec::new();
        let mut claimed = BigUint::one();
        for p in pieces {
            if !std::sync::Arc::ptr_eq(p.domain(), &self.domain) {
                return Err(Error::usage(format!(
                    "piece {} lives on a different domain",
                    p.label()
                )));
            }
            gens.extend(p.semilinear_generators());
            claimed *= p.order();
        }
        let mut handle = self.handle(label, gens)?;
        if normalizes_in_turn(pieces) {
            handle = handle.with_order_bound(claimed.clone());
        }
        let order = handle.order();
        Ok(Assembled {
            handle,
            claimed_order: claimed,
            order,
        })
    }

    pub fn build(&self, recipe: &SubgroupRecipe) -> Result<GroupHandle> {
        let h = self.build_kind(&recipe.kind)?;
        Ok(match &recipe.label {
            Some(l) => h.with_label(l.clone()),
            None => h,
        })
    }

    fn build_kind(&self, kind: &RecipeKind) -> Result<GroupHandle> {
        match kind {
            RecipeKind::Su => self.build_su(),
            RecipeKind::RadicalR => self.build_radical_r(),
            RecipeKind::LeviT => self.build_levi_t(),
            RecipeKind::ExtSl { a, b } => self.build_ext_subgroup(ExtKind::Sl, *a, *b),
            RecipeKind::ExtSp { a, b } => self.build_ext_subgroup(ExtKind::Sp, *a, *b),
            RecipeKind::ExtG2 { b } => self.build_ext_subgroup(ExtKind::G2, 6, *b),
            RecipeKind::Sp2m => self.build_sp2m_in_su(),
            RecipeKind::G2InSp6 => self.build_g2(),
            RecipeKind::Outer(o) => self.cyclic(&format!("<{o:?}>"), self.build_outer(*o)?),
            RecipeKind::PointStab { of, point } => self.build_kind(of)?.stabilizer(point),
            RecipeKind::SubspaceStab { of, subspace } => {
                self.build_kind(of)?.subspace_stabilizer(subspace)
            }
            RecipeKind::Imported(path) => super::import::import_generators(self, path),
        }
    }
}

/// Whether every piece normalizes the group generated by the pieces before it,
/// which makes the product of their orders an upper bound for the join.
fn normalizes_in_turn(pieces: &[&GroupHandle]) -> bool {
    let Some(first) = pieces.first() else {
        return true;
    };
    let mut acc = (*first).clone();
    for p in &pieces[1..] {
        let ok = p.perm_generators().iter().all(|x| {
            let xi = x.inverse();
            acc.perm_generators()
                .iter()
                .all(|a| acc.contains_perm(&xi.then(a).then(x)))
        });
        if !ok {
            return false;
        }
        let bound = acc.order() * p.order();
        acc = match acc.join(p) {
            Ok(j) => j.with_order_bound(bound),
            Err(_) => return false,
        };
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_excluded_spaces() {
        assert!(matches!(Builder::new(2, 3), Err(Error::Usage(_))));
        let b = Builder::with_budget(3, 2, 1000).unwrap();
        assert!(matches!(b.build_su(), Err(Error::Usage(_))));
    }

    #[test]
    fn order_mismatch_is_reported() {
        let b = Builder::new(4, 2).unwrap();
        let gens = classical::levi_generators(b.space()).unwrap();
        assert!(matches!(
            b.handle_with_order("T", gens, BigUint::from(61u32)),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn assemble_uses_normalizing_pieces() {
        let b = Builder::new(4, 2).unwrap();
        let r = b.build_radical_r().unwrap();
        let t = b.build_levi_t().unwrap();
        let sp = b.build_sp2m_in_su().unwrap();
        let rt = b.assemble("R:T", &[&r, &t]).unwrap();
        assert!(rt.split_order_matches());
        assert!(normalizes_in_turn(&[&r, &t]));
        // T does not normalize Sp4(2), and <Sp4(2), T> is all of SU4(2).
        assert!(!normalizes_in_turn(&[&sp, &t]));
        let joined = b.assemble("<Sp, T>", &[&sp, &t]).unwrap();
        assert_eq!(joined.order, BigUint::from(25920u32));
        assert!(!joined.split_order_matches());
    }

    #[test]
    fn recipes() {
        let b = Builder::new(4, 2).unwrap();
        let stab = SubgroupRecipe {
            kind: RecipeKind::PointStab {
                of: Box::new(RecipeKind::Su),
                point: b.space().v(),
            },
            label: Some("K".into()),
        };
        let k = b.build(&stab).unwrap();
        assert_eq!((k.label(), k.order()), ("K", BigUint::from(216u32)));
        let gamma = b.build(&SubgroupRecipe::new(RecipeKind::Outer(OuterKind::Gamma))).unwrap();
        assert_eq!(gamma.order(), BigUint::from(2u32));
        let u = b.space().span(&[b.space().e(1), b.space().e(2)]).unwrap();
        let p = b
            .build(&SubgroupRecipe::new(RecipeKind::SubspaceStab {
                of: Box::new(RecipeKind::Su),
                subspace: u,
            }))
            .unwrap();
        // 27 totally isotropic lines, so |P| = 25920/27 = |R:T|.
        assert_eq!(p.order(), BigUint::from(960u32));
    }

    #[test]
    fn standalone_domain_for_a_subgroup() {
        let space = UnitarySpace::with_q(4, 2).unwrap();
        let gens = classical::sp2m_generators(&space).unwrap();
        let b = Builder::standalone(space, &gens, 1000).unwrap();
        assert!(b.domain().len() <= 120);
        assert_eq!(b.handle("Sp", gens).unwrap().order(), BigUint::from(720u32));
    }
}
