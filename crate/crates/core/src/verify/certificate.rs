//! Exact certification of G = HK through |H|·|K| = |G|·|H ∩ K|.

use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grp::{GroupHandle, DEFAULT_SEARCH_BUDGET};
use crate::unispace::Vector;

use super::fingerprint::{fingerprint, Fingerprint, FINGERPRINT_ORDER_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "certified",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// How |H ∩ K| was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// K = G_x and H ∩ K = H_x.
    Stabilizer,
    /// Backtrack search.
    Backtrack,
    /// Orbit-based membership in the product set.
    OrbitMembership,
    /// Nothing computed.
    None,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorizationCertificate {
    pub label: String,
    pub params: Params,
    #[serde(rename = "orderG", with = "super::decimal_opt")]
    pub order_g: Option<BigUint>,
    #[serde(rename = "orderH", with = "super::decimal_opt")]
    pub order_h: Option<BigUint>,
    #[serde(rename = "orderK", with = "super::decimal_opt")]
    pub order_k: Option<BigUint>,
    #[serde(rename = "orderHcapK", with = "super::decimal_opt")]
    pub order_h_cap_k: Option<BigUint>,
    #[serde(rename = "intersectionFingerprint")]
    pub fingerprint: Option<Fingerprint>,
    pub method: Method,
    pub verdict: Verdict,
    /// Set for entries whose verdict is known in advance (negative controls).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Wall-clock milliseconds; left out of reports to keep them reproducible.
    #[serde(skip)]
    pub timing_ms: u128,
}

impl FactorizationCertificate {
    pub fn inconclusive(
        label: impl Into<String>,
        params: Params,
        reason: impl Into<String>,
    ) -> Self {
        FactorizationCertificate {
            label: label.into(),
            params,
            order_g: None,
            order_h: None,
            order_k: None,
            order_h_cap_k: None,
            fingerprint: None,
            method: Method::None,
            verdict: Verdict::Inconclusive,
            expected: None,
            notes: vec![reason.into()],
            timing_ms: 0,
        }
    }

    /// The exact identity |H|·|K| = |G|·|H ∩ K|, when all four orders are known.
    pub fn identity_holds(&self) -> Option<bool> {
        match (
            &self.order_g,
            &self.order_h,
            &self.order_k,
            &self.order_h_cap_k,
        ) {
            (Some(g), Some(h), Some(k), Some(i)) => Some(h * k == g * i),
            _ => None,
        }
    }

    /// Verdict matches the expected one (certified when nothing is expected).
    pub fn as_expected(&self) -> bool {
        self.verdict == self.expected.unwrap_or(Verdict::Certified)
    }

    pub fn with_expected(mut self, v: Verdict) -> Self {
        self.expected = Some(v);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

fn check_subgroup(g: &GroupHandle, x: &GroupHandle) -> Result<()> {
    if !x.is_subgroup_of(g) {
        return Err(Error::usage(format!(
            "{} is not a subgroup of {}",
            x.label(),
            g.label()
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn finish(
    label: &str,
    params: Params,
    g: &GroupHandle,
    h: &GroupHandle,
    k: &GroupHandle,
    cap: &GroupHandle,
    method: Method,
    start: Instant,
) -> FactorizationCertificate {
    let (og, oh, ok, oi) = (g.order(), h.order(), k.order(), cap.order());
    let verdict = if &oh * &ok == &og * &oi {
        Verdict::Certified
    } else {
        Verdict::Refuted
    };
    let fp = if oi <= BigUint::from(FINGERPRINT_ORDER_LIMIT) {
        fingerprint(cap).ok()
    } else {
        None
    };
    FactorizationCertificate {
        label: label.to_string(),
        params,
        order_g: Some(og),
        order_h: Some(oh),
        order_k: Some(ok),
        order_h_cap_k: Some(oi),
        fingerprint: fp,
        method,
        verdict,
        expected: None,
        notes: Vec::new(),
        timing_ms: start.elapsed().as_millis(),
    }
}

/// A point x with K = G_x, if one exists among K's fixed points.
fn point_stabilized(g: &GroupHandle, k: &GroupHandle) -> Option<u32> {
    let n = g.domain().len();
    let index = g.order() / k.order();
    let fixed = (0..n as u32).filter(|&x| k.perm_generators().iter().all(|p| p.apply(x) == x));
    fixed
        .take(16)
        .find(|&x| BigUint::from(g.orbit_of_point(x).len()) == index)
}

/// Certifies or refutes G = HK. H and K must be subgroups of G on the same domain.
pub fn certify_product(
    label: &str,
    params: Params,
    g: &GroupHandle,
    h: &GroupHandle,
    k: &GroupHandle,
) -> Result<FactorizationCertificate> {
    let start = Instant::now();
    check_subgroup(g, h)?;
    check_subgroup(g, k)?;
    if let Some(x) = point_stabilized(g, k) {
        let cap = h.stabilizer_of_point(x);
        return Ok(finish(
            label,
            params,
            g,
            h,
            k,
            &cap,
            Method::Stabilizer,
            start,
        ));
    }
    if let Some(x) = point_stabilized(g, h) {
        let cap = k.stabilizer_of_point(x);
        return Ok(finish(
            label,
            params,
            g,
            h,
            k,
            &cap,
            Method::Stabilizer,
            start,
        ));
    }
    match h.intersection(k, DEFAULT_SEARCH_BUDGET) {
        Ok(cap) => Ok(finish(
            label,
            params,
            g,
            h,
            k,
            &cap,
            Method::Backtrack,
            start,
        )),
        Err(Error::Capacity {
            what,
            actual,
            bound,
        }) => Ok(FactorizationCertificate::inconclusive(
            label,
            params,
            format!("capacity exceeded: {what} ({actual} > {bound})"),
        )),
        Err(e) => Err(e),
    }
}

/// Certifies G = H·G_x, computing G_x and H ∩ G_x = H_x directly. Returns G_x too.
pub fn certify_vector_stabilizer(
    label: &str,
    params: Params,
    g: &GroupHandle,
    h: &GroupHandle,
    x: &Vector,
) -> Result<(FactorizationCertificate, GroupHandle)> {
    let start = Instant::now();
    check_subgroup(g, h)?;
    let k = g.vector_stabilizer(x)?;
    let cap = h.vector_stabilizer(x)?;
    Ok((
        finish(label, params, g, h, &k, &cap, Method::Stabilizer, start),
        k,
    ))
}
