//! Isomorphism-invariant data used to compare a computed group with a named structure.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grp::{GroupHandle, StabChain};

/// Largest order for which a fingerprint is computed.
pub const FINGERPRINT_ORDER_LIMIT: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    #[serde(with = "super::decimal")]
    pub order: BigUint,
    /// Orders of G', G'', … until the series stabilizes.
    #[serde(with = "super::decimal_vec")]
    pub derived_orders: Vec<BigUint>,
    /// Abelian invariants (cyclic factor orders) of each G^(i)/G^(i+1).
    pub abelian_invariants: Vec<Vec<u64>>,
    pub perfect: bool,
}

impl Fingerprint {
    /// Order and perfectness agree with a named perfect group of the given order.
    pub fn consistent_with_perfect(&self, order: u64) -> bool {
        self.perfect && self.order == BigUint::from(order)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Abelian invariants of the abelian quotient ⟨upper⟩/⟨lower⟩ (lower normal in upper).
fn quotient_invariants(upper: &GroupHandle, lower: &GroupHandle) -> Result<Vec<u64>> {
    let index = (upper.order() / lower.order()).to_u64().ok_or_else(|| {
        Error::capacity(
            "abelian quotient",
            u128::MAX,
            FINGERPRINT_ORDER_LIMIT as u128,
        )
    })?;
    let degree = upper.domain().len();
    let base = upper.domain().preferred_base().to_vec();
    let lower_gens = lower.perm_generators().to_vec();
    // |A^(p^k)| for the p-power subgroups of A = upper/lower
    let power_index = |e: u64| -> u64 {
        let mut gens = lower_gens.clone();
        gens.extend(upper.perm_generators().iter().map(|g| g.pow(e)));
        let c = StabChain::build(&gens, degree, &base, None, upper.seed());
        (c.order() / lower.order()).to_u64().expect("fits")
    };
    let mut invariants = Vec::new();
    for p in prime_factors(index) {
        let mut sizes = vec![index];
        let mut e = 1u64;
        loop {
            e *= p;
            let s = power_index(e);
            sizes.push(s);
            if s == sizes[sizes.len() - 2] {
                break;
            }
        }
        // r_k = log_p(|A^{p^k}| / |A^{p^{k+1}}|) = number of cyclic p-factors of order ≥ p^{k+1}
        let r: Vec<u32> = sizes
            .windows(2)
            .map(|w| {
                let mut ratio = w[0] / w[1];
                let mut c = 0;
                while ratio > 1 {
                    ratio /= p;
                    c += 1;
                }
                c
            })
            .collect();
        for k in 0..r.len() {
            let next = r.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(r[k] - next) {
                invariants.push(p.pow(k as u32 + 1));
            }
        }
    }
    invariants.sort_unstable();
    Ok(invariants)
}

pub fn fingerprint(g: &GroupHandle) -> Result<Fingerprint> {
    let order = g.order();
    if order > BigUint::from(FINGERPRINT_ORDER_LIMIT) {
        return Err(Error::capacity(
            "fingerprint group order",
            order.to_u128().unwrap_or(u128::MAX),
            FINGERPRINT_ORDER_LIMIT as u128,
        ));
    }
    let series = g.derived_series();
    let mut derived_orders = Vec::new();
    let mut abelian_invariants = Vec::new();
    for w in series.windows(2) {
        derived_orders.push(w[1].order());
        abelian_invariants.push(quotient_invariants(&w[0], &w[1])?);
    }
    let perfect = !order.is_one() && derived_orders.is_empty();
    Ok(Fingerprint {
        order,
        derived_orders,
        abelian_invariants,
        perfect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::Builder;

    #[test]
    fn trivial_group() {
        let b = Builder::new(4, 2).unwrap();
        let fp = fingerprint(&GroupHandle::trivial("1", b.domain())).unwrap();
        assert_eq!(fp.order, BigUint::one());
        assert!(fp.derived_orders.is_empty() && fp.abelian_invariants.is_empty());
    }

    #[test]
    fn sp4_2_is_s6() {
        // Sp4(2) ≅ S6: derived subgroup A6 of index 2, then perfect.
        let b = Builder::new(4, 2).unwrap();
        let fp = fingerprint(&b.build_sp2m_in_su().unwrap()).unwrap();
        assert_eq!(fp.order, BigUint::from(720u32));
        assert_eq!(fp.derived_orders, vec![BigUint::from(360u32)]);
        assert_eq!(fp.abelian_invariants, vec![vec![2]]);
        assert!(!fp.perfect);
        assert!(!fp.consistent_with_perfect(720));
    }

    #[test]
    fn prime_factors_of_small_numbers() {
        assert_eq!(prime_factors(720), vec![2, 3, 5]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(97), vec![97]);
    }
}
