//! Stabilizer chains (base and strong generating set) for permutation groups.
//!
//! Construction runs a randomized Schreier–Sims phase driven by product replacement,
//! then either stops on reaching a known group order or completes the chain with a
//! deterministic pass that sifts every Schreier generator. The resulting chain is
//! always exact.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::perm::Perm;

const NONE: u32 = u32::MAX;
/// Memory allowed for explicitly stored inverse coset representatives, per chain.
const EXPLICIT_BUDGET_BYTES: usize = 192 << 20;
/// Consecutive trivially-sifting random elements before the deterministic pass.
const PATIENCE: usize = 24;

#[derive(Clone)]
struct Level {
    base: u32,
    /// Indices of strong generators fixing all earlier base points.
    gens: Vec<usize>,
    orbit: Vec<u32>,
    /// point -> slot in `orbit`, or NONE.
    slot: Vec<u32>,
    /// slot -> strong generator index of the tree edge into this point.
    via: Vec<u32>,
    /// slot -> parent point in the Schreier tree.
    parent: Vec<u32>,
    /// slot -> inverse coset representative, when memory allows.
    inv_reps: Option<Vec<Perm>>,
}

impl Level {
    fn trivial(base: u32, degree: usize) -> Self {
        let mut slot = vec![NONE; degree];
        slot[base as usize] = 0;
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            slot,
            via: vec![NONE],
            parent: vec![NONE],
            inv_reps: None,
        }
    }

    #[inline]
    fn contains(&self, x: u32) -> bool {
        self.slot[x as usize] != NONE
    }
}

#[derive(Clone)]
pub struct StabChain {
    degree: usize,
    gens: Vec<Perm>,
    gens_inv: Vec<Perm>,
    levels: Vec<Level>,
}

/// Product-replacement random element generator.
pub struct RandomElements {
    state: Vec<Perm>,
    acc: Perm,
    rng: ChaCha8Rng,
}

impl RandomElements {
    pub fn new(gens: &[Perm], degree: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state: Vec<Perm> = if gens.is_empty() {
            vec![Perm::identity(degree)]
        } else {
            gens.to_vec()
        };
        while state.len() < 10 {
            let i = state.len() % gens.len().max(1);
            state.push(state[i].clone());
        }
        let mut r = RandomElements {
            state,
            acc: Perm::identity(degree),
            rng: ChaCha8Rng::seed_from_u64(rng.gen()),
        };
        for _ in 0..60 {
            r.next_element();
        }
        r
    }

    pub fn next_element(&mut self) -> Perm {
        let n = self.state.len();
        let i = self.rng.gen_range(0..n);
        let mut j = self.rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let other = if self.rng.gen_bool(0.5) {
            self.state[j].clone()
        } else {
            self.state[j].inverse()
        };
        if self.rng.gen_bool(0.5) {
            self.state[i].then_assign(&other);
        } else {
            self.state[i] = other.then(&self.state[i]);
        }
        self.acc.then_assign(&self.state[i]);
        self.acc.clone()
    }
}

impl StabChain {
    /// Chain of the trivial group with the given base prefix.
    pub fn trivial(degree: usize, base_prefix: &[u32]) -> Self {
        let mut levels = Vec::new();
        for &b in base_prefix {
            if levels.iter().all(|l: &Level| l.base != b) {
                levels.push(Level::trivial(b, degree));
            }
        }
        StabChain {
            degree,
            gens: Vec::new(),
            gens_inv: Vec::new(),
            levels,
        }
    }

    /// Exact chain for ⟨gens⟩. When `known_order` is supplied it must be the true
    /// order; construction then stops as soon as the chain reaches it.
    pub fn build(
        gens: &[Perm],
        degree: usize,
        base_prefix: &[u32],
        known_order: Option<&BigUint>,
        seed: u64,
    ) -> Self {
        let mut chain = StabChain::trivial(degree, base_prefix);
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        for g in &gens {
            chain.sift_and_add(g);
        }
        if gens.is_empty() {
            return chain;
        }
        let reached = |c: &StabChain| known_order.is_some_and(|t| c.order() == *t);
        if reached(&chain) {
            return chain;
        }
        let mut random = RandomElements::new(&gens, degree, seed);
        let mut streak = 0;
        let mut draws = 0usize;
        loop {
            let r = random.next_element();
            draws += 1;
            if chain.sift_and_add(&r) {
                streak = 0;
                if reached(&chain) {
                    return chain;
                }
            } else {
                streak += 1;
            }
            let patience = if known_order.is_some() {
                4 * PATIENCE
            } else {
                PATIENCE
            };
            if streak >= patience || draws > 50_000 {
                break;
            }
        }
        chain.complete(&gens);
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Basic orbit at `level` (the orbit of the base point under the level's group).
    pub fn basic_orbit(&self, level: usize) -> &[u32] {
        &self.levels[level].orbit
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Generators of the level-`i` group (pointwise stabilizer of the first i base points).
    pub fn level_generators(&self, i: usize) -> Vec<Perm> {
        if i >= self.levels.len() {
            return Vec::new();
        }
        self.levels[i]
            .gens
            .iter()
            .map(|&g| self.gens[g].clone())
            .collect()
    }

    /// Multiplies `h` on the right by the inverse representative of `x` at `level`.
    fn strip(&self, h: &mut Perm, level: usize, x: u32) {
        let lvl = &self.levels[level];
        let s = lvl.slot[x as usize] as usize;
        if let Some(reps) = &lvl.inv_reps {
            h.then_assign(&reps[s]);
            return;
        }
        let mut cur = s;
        while lvl.via[cur] != NONE {
            h.then_assign(&self.gens_inv[lvl.via[cur] as usize]);
            cur = lvl.slot[lvl.parent[cur] as usize] as usize;
        }
    }

    /// Applies the inverse representative of `x` at `level` to each point of `pts`.
    /// Returns false if `x` is not in the basic orbit.
    pub(crate) fn strip_points(&self, level: usize, x: u32, pts: &mut [u32]) -> bool {
        let lvl = &self.levels[level];
        if !lvl.contains(x) {
            return false;
        }
        let s = lvl.slot[x as usize] as usize;
        if let Some(reps) = &lvl.inv_reps {
            for p in pts.iter_mut() {
                *p = reps[s].apply(*p);
            }
            return true;
        }
        let mut cur = s;
        while lvl.via[cur] != NONE {
            let g = &self.gens_inv[lvl.via[cur] as usize];
            for p in pts.iter_mut() {
                *p = g.apply(*p);
            }
            cur = lvl.slot[lvl.parent[cur] as usize] as usize;
        }
        true
    }

    /// Base point of `level`.
    pub fn base_point(&self, level: usize) -> u32 {
        self.levels[level].base
    }

    /// Coset representative u_x with base^u_x = x at `level`.
    pub fn representative(&self, level: usize, x: u32) -> Perm {
        let lvl = &self.levels[level];
        let s = lvl.slot[x as usize] as usize;
        if let Some(reps) = &lvl.inv_reps {
            return reps[s].inverse();
        }
        let mut path = Vec::new();
        let mut cur = s;
        while lvl.via[cur] != NONE {
            path.push(lvl.via[cur] as usize);
            cur = lvl.slot[lvl.parent[cur] as usize] as usize;
        }
        let mut u = Perm::identity(self.degree);
        for &g in path.iter().rev() {
            u.then_assign(&self.gens[g]);
        }
        u
    }

    /// Sifts `g` from `start`; returns the residue and the level where sifting stopped
    /// (`depth()` if it passed every level).
    pub fn sift_from(&self, g: &Perm, start: usize) -> (Perm, usize) {
        let mut h = g.clone();
        for i in start..self.levels.len() {
            let x = h.apply(self.levels[i].base);
            if !self.levels[i].contains(x) {
                return (h, i);
            }
            self.strip(&mut h, i, x);
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.sift_from(g, 0);
        j == self.levels.len() && h.is_identity()
    }

    /// Sifts `g`; if it is not a member, adds its residue as a strong generator.
    fn sift_and_add(&mut self, g: &Perm) -> bool {
        let (h, j) = self.sift_from(g, 0);
        if j == self.levels.len() && h.is_identity() {
            return false;
        }
        self.add_strong(h, j);
        true
    }

    fn add_strong(&mut self, h: Perm, level: usize) {
        let idx = self.gens.len();
        self.gens_inv.push(h.inverse());
        if level == self.levels.len() {
            let b = h.first_moved().expect("nontrivial residue");
            self.levels.push(Level::trivial(b, self.degree));
        }
        self.gens.push(h);
        for i in 0..=level {
            self.levels[i].gens.push(idx);
        }
        for i in (0..=level).rev() {
            self.rebuild_level(i);
        }
    }

    fn explicit_bytes_excluding(&self, level: usize) -> usize {
        self.levels
            .iter()
            .enumerate()
            .filter(|(i, l)| *i != level && l.inv_reps.is_some())
            .map(|(_, l)| l.orbit.len() * self.degree * 4)
            .sum()
    }

    fn rebuild_level(&mut self, i: usize) {
        let degree = self.degree;
        let base = self.levels[i].base;
        let gen_ids = self.levels[i].gens.clone();
        let mut slot = vec![NONE; degree];
        let mut orbit = vec![base];
        let mut via = vec![NONE];
        let mut parent = vec![NONE];
        slot[base as usize] = 0;
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for &g in &gen_ids {
                let y = self.gens[g].apply(x);
                if slot[y as usize] == NONE {
                    slot[y as usize] = orbit.len() as u32;
                    orbit.push(y);
                    via.push(g as u32);
                    parent.push(x);
                }
            }
        }
        let want = orbit.len() * degree * 4;
        let inv_reps = if orbit.len() > 1
            && self.explicit_bytes_excluding(i) + want <= EXPLICIT_BUDGET_BYTES
        {
            let mut reps: Vec<Perm> = Vec::with_capacity(orbit.len());
            reps.push(Perm::identity(degree));
            for s in 1..orbit.len() {
                // u_y = u_parent · g  ⇒  u_y⁻¹ = g⁻¹ · u_parent⁻¹
                let p = slot[parent[s] as usize] as usize;
                let r = self.gens_inv[via[s] as usize].then(&reps[p]);
                reps.push(r);
            }
            Some(reps)
        } else {
            None
        };
        let lvl = &mut self.levels[i];
        lvl.orbit = orbit;
        lvl.slot = slot;
        lvl.via = via;
        lvl.parent = parent;
        lvl.inv_reps = inv_reps;
    }

    /// Deterministic completion: every Schreier generator must sift to the identity
    /// through the deeper levels. `top_gens` generates the whole group and is used at
    /// level 0 when it is the smaller generating set.
    fn complete(&mut self, top_gens: &[Perm]) {
        let mut i = self.levels.len();
        'outer: while i > 0 {
            i -= 1;
            let use_top = i == 0 && top_gens.len() < self.levels[0].gens.len();
            let xs: Vec<(Option<usize>, Perm)> = if use_top {
                top_gens.iter().map(|g| (None, g.clone())).collect()
            } else {
                self.levels[i]
                    .gens
                    .iter()
                    .map(|&g| (Some(g), self.gens[g].clone()))
                    .collect()
            };
            let orbit = self.levels[i].orbit.clone();
            for &x in orbit.iter() {
                let ux = self.representative(i, x);
                for (gid, s) in &xs {
                    let y = s.apply(x);
                    if let Some(gid) = gid {
                        let lvl = &self.levels[i];
                        let ys = lvl.slot[y as usize] as usize;
                        if lvl.via[ys] == *gid as u32 && lvl.parent[ys] == x {
                            continue; // tree edge: Schreier generator is trivial
                        }
                    }
                    let h = ux.then(s);
                    let (res, j) = self.sift_from(&h, i);
                    if j < self.levels.len() || !res.is_identity() {
                        self.add_strong(res, j);
                        i = j + 1;
                        continue 'outer;
                    }
                }
            }
        }
    }

    /// Chain of the stabilizer of the first base point (the level-1 group).
    pub fn tail(&self) -> StabChain {
        if self.levels.len() <= 1 {
            return StabChain::trivial(self.degree, &[]);
        }
        let keep: Vec<usize> = self.levels[1].gens.clone();
        let remap = |g: usize| keep.iter().position(|&k| k == g);
        let gens = keep.iter().map(|&g| self.gens[g].clone()).collect();
        let gens_inv = keep.iter().map(|&g| self.gens_inv[g].clone()).collect();
        let levels = self.levels[1..]
            .iter()
            .map(|l| {
                let mut l = l.clone();
                l.gens = l.gens.iter().filter_map(|&g| remap(g)).collect();
                l.via = l
                    .via
                    .iter()
                    .map(|&v| {
                        if v == NONE {
                            NONE
                        } else {
                            remap(v as usize).expect("deeper edges use deeper gens") as u32
                        }
                    })
                    .collect();
                l
            })
            .collect();
        StabChain {
            degree: self.degree,
            gens,
            gens_inv,
            levels,
        }
    }

    /// Uniformly random element, using the chain's transversals.
    pub fn random_element(&self, rng: &mut impl Rng) -> Perm {
        let mut g = Perm::identity(self.degree);
        for i in (0..self.levels.len()).rev() {
            let orbit = &self.levels[i].orbit;
            let x = orbit[rng.gen_range(0..orbit.len())];
            g.then_assign(&self.representative(i, x));
        }
        g
    }

    /// Every element of the group, when its order is at most `limit`.
    pub fn elements(&self, limit: usize) -> Option<Vec<Perm>> {
        let order: usize = self
            .levels
            .iter()
            .try_fold(1usize, |acc, l| acc.checked_mul(l.orbit.len()))?;
        if order > limit {
            return None;
        }
        let mut out = vec![Perm::identity(self.degree)];
        for i in (0..self.levels.len()).rev() {
            let reps: Vec<Perm> = self.levels[i]
                .orbit
                .iter()
                .map(|&x| self.representative(i, x))
                .collect();
            let mut next = Vec::with_capacity(out.len() * reps.len());
            for g in &out {
                for r in &reps {
                    next.push(g.then(r));
                }
            }
            out = next;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Perm {
        Perm::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect()).unwrap()
    }

    fn transposition(n: usize, a: u32, b: u32) -> Perm {
        let mut im: Vec<u32> = (0..n as u32).collect();
        im.swap(a as usize, b as usize);
        Perm::from_images(im).unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 2..9usize {
            let gens = vec![cycle(n), transposition(n, 0, 1)];
            let c = StabChain::build(&gens, n, &[], None, 1);
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(c.order(), BigUint::from(fact));
            assert!(c.contains(&transposition(n, 2 % n as u32, (n - 1) as u32)));
        }
    }

    #[test]
    fn alternating_excludes_odd() {
        let n = 7;
        // 3-cycles (0 1 k) generate A_n
        let gens: Vec<Perm> = (2..n as u32)
            .map(|k| {
                let mut im: Vec<u32> = (0..n as u32).collect();
                im[0] = 1;
                im[1] = k;
                im[k as usize] = 0;
                Perm::from_images(im).unwrap()
            })
            .collect();
        let c = StabChain::build(&gens, n, &[3], None, 5);
        assert_eq!(c.order(), BigUint::from(2520u32));
        assert_eq!(c.base()[0], 3);
        assert!(!c.contains(&transposition(n, 0, 1)));
        let tail = c.tail();
        assert_eq!(tail.order(), BigUint::from(360u32));
        for g in tail.strong_generators() {
            assert_eq!(g.apply(3), 3);
        }
    }

    #[test]
    fn known_order_short_circuit_and_enumeration() {
        let gens = vec![cycle(5), transposition(5, 0, 1)];
        let c = StabChain::build(&gens, 5, &[4, 2], Some(&BigUint::from(120u32)), 9);
        assert_eq!(c.order(), BigUint::from(120u32));
        let all = c.elements(1000).unwrap();
        assert_eq!(all.len(), 120);
        let set: std::collections::HashSet<_> = all.into_iter().collect();
        assert_eq!(set.len(), 120);
    }

    #[test]
    fn trivial_group() {
        let c = StabChain::build(&[], 4, &[], None, 0);
        assert_eq!(c.order(), BigUint::one());
        assert!(c.contains(&Perm::identity(4)));
        assert!(!c.contains(&cycle(4)));
    }
}
