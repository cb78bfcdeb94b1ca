//! General identities for factorizations, checked on concrete groups.

use num_bigint::BigUint;

use crate::error::Result;
use crate::grp::{GroupHandle, Perm, DEFAULT_SEARCH_BUDGET};

use super::certificate::{certify_product, Params, Verdict};

/// For certified G = HK: G = H^x K^y and |H^x ∩ K^y| = |H ∩ K|.
/// Returns the intersection order after conjugation, or None if G = H^x K^y fails.
pub fn property_conjugation(
    g: &GroupHandle,
    h: &GroupHandle,
    k: &GroupHandle,
    x: &Perm,
    y: &Perm,
) -> Result<Option<BigUint>> {
    let hx = h.conjugate(x);
    let ky = k.conjugate(y);
    let cert = certify_product("conjugated", Params::default(), g, &hx, &ky)?;
    Ok((cert.verdict == Verdict::Certified).then(|| cert.order_h_cap_k.expect("computed")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupProductOutcome {
    /// Preconditions fail: G ≠ HK, or HL or KL is not a subgroup.
    NotApplicable(String),
    /// |HL ∩ KL| compared with |(H ∩ KL)(K ∩ HL)|.
    Checked {
        holds: bool,
        lhs: BigUint,
        rhs: BigUint,
    },
}

/// |HL ∩ KL| = |H ∩ KL|·|K ∩ HL| / |H ∩ K|. The product (H ∩ KL)(K ∩ HL) always lies in
/// HL ∩ KL, so equal orders give the set identity.
pub fn property_subgroup_product(
    g: &GroupHandle,
    h: &GroupHandle,
    k: &GroupHandle,
    l: &GroupHandle,
) -> Result<SubgroupProductOutcome> {
    let cert = certify_product("precondition", Params::default(), g, h, k)?;
    if cert.verdict != Verdict::Certified {
        return Ok(SubgroupProductOutcome::NotApplicable("G ≠ HK".into()));
    }
    let is_product_subgroup = |a: &GroupHandle| -> Result<Option<GroupHandle>> {
        let joined = a.join(l)?;
        let cap = a.intersection(l, DEFAULT_SEARCH_BUDGET)?;
        let product = a.order() * l.order() / cap.order();
        Ok((joined.order() == product).then_some(joined))
    };
    let Some(hl) = is_product_subgroup(h)? else {
        return Ok(SubgroupProductOutcome::NotApplicable(
            "HL is not a subgroup".into(),
        ));
    };
    let Some(kl) = is_product_subgroup(k)? else {
        return Ok(SubgroupProductOutcome::NotApplicable(
            "KL is not a subgroup".into(),
        ));
    };
    let lhs = hl.intersection(&kl, DEFAULT_SEARCH_BUDGET)?.order();
    let h_kl = h.intersection(&kl, DEFAULT_SEARCH_BUDGET)?.order();
    let k_hl = k.intersection(&hl, DEFAULT_SEARCH_BUDGET)?.order();
    let h_k = cert.order_h_cap_k.expect("certified");
    let rhs = h_kl * k_hl / h_k;
    Ok(SubgroupProductOutcome::Checked {
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}
