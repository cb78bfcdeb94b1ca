//! Subgroup intersection by backtrack search over a base of the first group.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

use super::chain::StabChain;
use super::perm::Perm;

/// Default bound on visited search nodes.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

struct Search<'a> {
    h: &'a StabChain,
    k: &'a StabChain,
    base: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Images of b_0..=b_i under `t` admit an element of K with the same images.
    fn k_prefix_ok(&self, t: &Perm, i: usize) -> bool {
        let mut pts: Vec<u32> = self.base[..=i].iter().map(|&b| t.apply(b)).collect();
        for l in 0..=i {
            let x = pts[l];
            if !self.k.strip_points(l, x, &mut pts) {
                return false;
            }
        }
        true
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::capacity(
                "intersection search nodes",
                self.nodes as u128,
                self.budget as u128,
            ));
        }
        Ok(())
    }

    /// Finds g = u_{d-1}…u_i · t in H ∩ K, if one exists.
    fn extend(&mut self, i: usize, t: &Perm) -> Result<Option<Perm>> {
        self.tick()?;
        if i == self.base.len() {
            return Ok(self.k.contains(t).then(|| t.clone()));
        }
        let h = self.h;
        for &y in h.basic_orbit(i) {
            let cand = h.representative(i, y).then(t);
            if !self.k_prefix_ok(&cand, i) {
                continue;
            }
            if let Some(g) = self.extend(i + 1, &cand)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

fn orbit_under(point: u32, gens: &[&Perm], degree: usize) -> Vec<u32> {
    let mut seen = vec![false; degree];
    seen[point as usize] = true;
    let mut orbit = vec![point];
    let mut head = 0;
    while head < orbit.len() {
        let x = orbit[head];
        head += 1;
        for g in gens {
            let y = g.apply(x);
            if !seen[y as usize] {
                seen[y as usize] = true;
                orbit.push(y);
            }
        }
    }
    orbit
}

/// Strong generators of H ∩ K relative to H's base, together with |H ∩ K|.
///
/// `k` must be a chain whose base starts with the base of `h`.
pub(crate) fn intersect(h: &StabChain, k: &StabChain, budget: u64) -> Result<(Vec<Perm>, BigUint)> {
    let base = h.base();
    let degree = h.degree();
    if k.base().len() < base.len() || k.base()[..base.len()] != base[..] {
        return Err(Error::Construction(
            "second chain does not extend the first base".into(),
        ));
    }
    let mut search = Search {
        h,
        k,
        base: base.clone(),
        nodes: 0,
        budget,
    };
    let mut found: Vec<(usize, Perm)> = Vec::new();
    let mut order = BigUint::one();
    for j in (0..base.len()).rev() {
        let level_gens = |found: &Vec<(usize, Perm)>| -> Vec<Perm> {
            found
                .iter()
                .filter(|(l, _)| *l >= j)
                .map(|(_, g)| g.clone())
                .collect()
        };
        let gens = level_gens(&found);
        let mut orbit = orbit_under(base[j], &gens.iter().collect::<Vec<_>>(), degree);
        let candidates: Vec<u32> = h.basic_orbit(j).to_vec();
        for x in candidates {
            if orbit.contains(&x) {
                continue;
            }
            search.tick()?;
            let u = h.representative(j, x);
            if !search.k_prefix_ok(&u, j) {
                continue;
            }
            if let Some(g) = search.extend(j + 1, &u)? {
                found.push((j, g));
                let gens = level_gens(&found);
                orbit = orbit_under(base[j], &gens.iter().collect::<Vec<_>>(), degree);
            }
        }
        order *= BigUint::from(orbit.len());
    }
    Ok((found.into_iter().map(|(_, g)| g).collect(), order))
}
