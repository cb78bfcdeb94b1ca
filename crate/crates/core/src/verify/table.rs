//! Building and certifying the factor pairs row by row.

use std::path::PathBuf;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::construct::{
    import_generators, order_sl, order_sp, order_su, Builder, ExtKind, OuterKind,
    DEFAULT_DOMAIN_BUDGET,
};
use crate::error::{Error, Result};
use crate::grp::{GroupHandle, DEFAULT_SEED};
use crate::unispace::UnitarySpace;

use super::certificate::{
    certify_product, certify_vector_stabilizer, FactorizationCertificate, Params, Verdict,
};

pub const ROW_COUNT: usize = 18;

const QUOTIENT_NOTE: &str = "decided in SU; the verdict transfers to the quotient modulo scalars";

/// Which factor H to use where a row lists several.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowVariant {
    /// SL-type factor (rows 1, 4–6).
    Sl,
    /// Sp-type factor (rows 2, 4–6).
    Sp,
    /// ρ = φ (rows 5, 6).
    RhoPhi,
    /// ρ = φγ^{2/f} (rows 5, 6).
    RhoPhiGamma,
    /// The derived subgroup of G₂(q) as H (row 8 negative control).
    Derived,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowParams {
    #[serde(default)]
    pub m: Option<usize>,
    pub q: u32,
    #[serde(default)]
    pub a: Option<usize>,
    #[serde(default)]
    pub b: Option<usize>,
    /// Restrict to these variants; all applicable ones when empty.
    #[serde(default)]
    pub variants: Vec<RowVariant>,
    #[serde(default)]
    pub import_h: Option<PathBuf>,
    #[serde(default)]
    pub import_k: Option<PathBuf>,
    #[serde(default = "default_budget")]
    pub budget_domain: u128,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub force: bool,
}

fn default_budget() -> u128 {
    DEFAULT_DOMAIN_BUDGET
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl RowParams {
    pub fn new(q: u32, m: Option<usize>) -> Self {
        RowParams {
            m,
            q,
            a: None,
            b: None,
            variants: Vec::new(),
            import_h: None,
            import_k: None,
            budget_domain: DEFAULT_DOMAIN_BUDGET,
            seed: DEFAULT_SEED,
            force: false,
        }
    }

    pub fn with_ab(mut self, a: usize, b: usize) -> Self {
        self.a = Some(a);
        self.b = Some(b);
        self
    }

    fn wants(&self, v: RowVariant) -> bool {
        self.variants.is_empty() || self.variants.contains(&v)
    }
}

/// Feasibility of a row at given parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum RowSupport {
    Supported {
        n: usize,
        q: u32,
        domain: u128,
    },
    ImportRequired {
        n: usize,
        q: u32,
        domain: u128,
    },
    TooLarge {
        n: usize,
        q: u32,
        domain: u128,
        budget: u128,
    },
    Invalid {
        reason: String,
    },
}

fn norm_one_count(n: usize, q: u32) -> u128 {
    let q = q as u128;
    let qn = q.pow(n as u32);
    let t = if n.is_multiple_of(2) { qn - 1 } else { qn + 1 };
    q.pow(n as u32 - 1) * t
}

/// Natural dimension and field of the row at the given parameters.
fn row_space(row: usize, p: &RowParams) -> std::result::Result<(usize, u32), String> {
    let need_m = || p.m.ok_or_else(|| format!("row {row} needs m"));
    let q = p.q;
    let qs = match crate::unispace::prime_power(q) {
        Some(x) => x,
        None => return Err(format!("{q} is not a prime power")),
    };
    let (n, q) = match row {
        1 | 2 | 7 => (2 * need_m()?, q),
        3 => {
            let m = need_m()?;
            if m % 6 != 0 || qs.0 != 2 {
                return Err("row 3 needs m = 6b and q even".into());
            }
            (2 * m, q)
        }
        4 | 5 => {
            if q != 2 {
                return Err(format!("row {row} needs q = 2"));
            }
            (2 * need_m()?, q)
        }
        6 => {
            if q != 4 {
                return Err("row 6 needs q = 4".into());
            }
            (2 * need_m()?, q)
        }
        8 => {
            if qs.0 != 2 {
                return Err("row 8 needs q even".into());
            }
            (6, q)
        }
        9..=12 => (4, 3),
        13 => (4, 5),
        14 => (6, 2),
        15 => (9, 2),
        16 | 17 => (12, 2),
        18 => (12, 4),
        _ => return Err(format!("row {row} outside 1..={ROW_COUNT}")),
    };
    if let (Some(m), Some(a), Some(b)) = (p.m, p.a, p.b) {
        let fits = match row {
            1 => a * b == m,
            2 => a * b == m && a % 2 == 0,
            3 => a == 6 && 6 * b == m,
            _ => true,
        };
        if !fits {
            return Err(format!(
                "inconsistent (a, b, m) = ({a}, {b}, {m}) for row {row}"
            ));
        }
    } else if p.a.is_some() != p.b.is_some() {
        return Err("a and b must be given together".into());
    } else if row == 2 && p.m.is_some_and(|m| m % 2 == 1) {
        return Err("row 2 needs m = ab with a even".into());
    }
    if n < 3 || (n == 3 && q == 2) {
        return Err(format!("(n, q) = ({n}, {q}) is excluded"));
    }
    Ok((n, q))
}

pub fn row_support(row: usize, p: &RowParams) -> RowSupport {
    let (n, q) = match row_space(row, p) {
        Ok(x) => x,
        Err(reason) => return RowSupport::Invalid { reason },
    };
    let domain = norm_one_count(n, q);
    let imported = (9..=15).contains(&row);
    if imported && (p.import_h.is_none() || p.import_k.is_none()) {
        return RowSupport::ImportRequired { n, q, domain };
    }
    if domain > p.budget_domain && !p.force {
        return RowSupport::TooLarge {
            n,
            q,
            domain,
            budget: p.budget_domain,
        };
    }
    RowSupport::Supported { n, q, domain }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn pow(q: u32, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

struct RowContext {
    row: usize,
    builder: Builder,
    params: Params,
}

impl RowContext {
    fn label(&self, what: &str) -> String {
        format!(
            "row {} {} (n={}, q={})",
            self.row, what, self.params.n, self.params.q
        )
    }

    /// Certifies G = H·G_x and compares |H ∩ K| with the stated structure's order.
    fn certify(
        &self,
        what: &str,
        g: &GroupHandle,
        h: &GroupHandle,
        x: &crate::unispace::Vector,
        expected_cap: Option<BigUint>,
    ) -> Result<FactorizationCertificate> {
        let (mut cert, _) =
            certify_vector_stabilizer(&self.label(what), self.params.clone(), g, h, x)?;
        cert = cert.with_note(QUOTIENT_NOTE);
        if let (Some(e), Some(c)) = (expected_cap, cert.order_h_cap_k.clone()) {
            cert = cert.with_note(if e == c {
                format!("|H ∩ K| = {c} matches the stated structure")
            } else {
                format!("|H ∩ K| = {c} differs from the stated structure's order {e}")
            });
        }
        Ok(cert)
    }
}

/// Builds G, H, K for the row and certifies every applicable factor pair.
pub fn run_table_row(row: usize, p: &RowParams) -> Result<Vec<FactorizationCertificate>> {
    let support = row_support(row, p);
    let (n, q) = match &support {
        RowSupport::Supported { n, q, .. } => (*n, *q),
        RowSupport::ImportRequired { n, q, .. } => {
            let params = Params {
                n: *n,
                q: *q,
                ..Params::default()
            };
            return Ok(vec![FactorizationCertificate::inconclusive(
                format!("row {row} (n={n}, q={q})"),
                params,
                "external data needed: import generator files for H and K",
            )]);
        }
        RowSupport::TooLarge { domain, budget, .. } => {
            return Err(Error::capacity(
                format!("row {row} domain"),
                *domain,
                *budget,
            ))
        }
        RowSupport::Invalid { reason } => return Err(Error::usage(reason.clone())),
    };
    let budget = if p.force {
        p.budget_domain.max(norm_one_count(n, q))
    } else {
        p.budget_domain
    };
    let space = UnitarySpace::with_q(n, q)?;
    let builder = Builder::for_space(space, budget)?.with_seed(p.seed);
    let params = Params {
        n,
        q,
        m: (n % 2 == 0).then_some(n / 2),
        a: p.a,
        b: p.b,
    };
    let ctx = RowContext {
        row,
        builder,
        params,
    };
    match row {
        1..=3 => radical_rows(&ctx, p),
        4 => gamma_row(&ctx, p),
        5 | 6 => phi_rows(&ctx, p),
        7 => symplectic_row(&ctx),
        8 => g2_row(&ctx, p),
        9..=15 => imported_row(&ctx, p),
        _ => Err(Error::capacity(
            format!("row {row} domain"),
            norm_one_count(n, q),
            budget,
        )),
    }
}

/// Factorizations m = ab with a ≥ 2; SL₁ is trivial.
fn ab_pairs(m: usize, p: &RowParams, even_a: bool) -> Vec<(usize, usize)> {
    match (p.a, p.b) {
        (Some(a), Some(b)) => vec![(a, b)],
        _ => (1..=m)
            .filter(|b| m.is_multiple_of(*b))
            .map(|b| (m / b, b))
            .filter(|(a, _)| *a >= 2 && (!even_a || a % 2 == 0))
            .collect(),
    }
}

fn radical_rows(ctx: &RowContext, p: &RowParams) -> Result<Vec<FactorizationCertificate>> {
    let b = &ctx.builder;
    let sp = b.space().clone();
    let (m, q) = (sp.m(), sp.q());
    let g = b.build_su()?;
    let r = b.build_radical_r()?;
    let v = sp.v();
    let mut out = Vec::new();
    let pairs: Vec<(ExtKind, usize, usize)> = match ctx.row {
        1 => ab_pairs(m, p, false)
            .into_iter()
            .map(|(a, bb)| (ExtKind::Sl, a, bb))
            .collect(),
        2 => ab_pairs(m, p, true)
            .into_iter()
            .map(|(a, bb)| (ExtKind::Sp, a, bb))
            .collect(),
        _ => vec![(ExtKind::G2, 6, m / 6)],
    };
    for (kind, a, bb) in pairs {
        let s = b.build_ext_subgroup(kind, a, bb)?;
        let h = b.assemble("R:S", &[&r, &s])?.handle;
        let qb = q.pow(2 * bb as u32);
        let base = pow(q, (m - 1) * (m - 1)) * pow(q, 2 * m - 2 * bb);
        let expected = match kind {
            ExtKind::Sl => base * order_sl(a as u32 - 1, qb),
            ExtKind::Sp => base * order_sp(a as u32 - 2, qb),
            ExtKind::G2 => pow(q, (m - 1) * (m - 1)) * pow(q, 10 * bb) * order_sl(2, qb),
        };
        let what = format!("R:{}", s.label());
        let mut cert = ctx.certify(&what, &g, &h, &v, Some(expected))?;
        if let (Some(og), Some(ok)) = (&cert.order_g, &cert.order_k) {
            let index = pow(q, 2 * m - 1) * (pow(q, 2 * m) - 1u32);
            let holds = og == &(&index * ok);
            cert = cert.with_note(format!(
                "index identity |G|/|K| = q^(2m-1)(q^(2m)-1) holds: {holds}"
            ));
        }
        cert.params.a = Some(a);
        cert.params.b = Some(bb);
        out.push(cert);
    }
    Ok(out)
}

fn gamma_row(ctx: &RowContext, p: &RowParams) -> Result<Vec<FactorizationCertificate>> {
    let b = &ctx.builder;
    let sp = b.space().clone();
    let m = sp.m();
    let g = b.build_su()?;
    let gamma = b.cyclic("<gamma>", b.build_outer(OuterKind::Gamma)?)?;
    let v = sp.v();
    let mut out = Vec::new();
    if p.wants(RowVariant::Sl) {
        let t = b.build_levi_t()?;
        let h = b.assemble("T:<gamma>", &[&t, &gamma])?.handle;
        out.push(ctx.certify("T:<gamma>", &g, &h, &v, Some(order_sl(m as u32 - 1, 4)))?);
    }
    if m.is_multiple_of(2) && p.wants(RowVariant::Sp) {
        let s = b.build_ext_subgroup(ExtKind::Sp, m, 1)?;
        let h = b.assemble("S:<gamma>", &[&s, &gamma])?.handle;
        let what = format!("{}:<gamma>", s.label());
        out.push(ctx.certify(&what, &g, &h, &v, Some(order_sp(m as u32 - 2, 4)))?);
    }
    Ok(out)
}

fn phi_rows(ctx: &RowContext, p: &RowParams) -> Result<Vec<FactorizationCertificate>> {
    let b = &ctx.builder;
    let sp = b.space().clone();
    let (m, q) = (sp.m(), sp.q());
    let f = sp.field().f() as u64;
    let su = b.build_su()?;
    let phi = b.build_outer(OuterKind::Phi)?;
    let mut gens = su.semilinear_generators();
    gens.push(phi);
    let g = b.handle_with_order("SU:<phi>", gens, order_su(sp.dim() as u32, q) * big(2 * f))?;
    let v = sp.v();
    let t = b.build_levi_t()?;
    let s = if m % 2 == 0 {
        Some(b.build_ext_subgroup(ExtKind::Sp, m, 1)?)
    } else {
        None
    };
    let mut out = Vec::new();
    for (variant, kind, name) in [
        (RowVariant::RhoPhi, OuterKind::RhoPhi, "phi"),
        (
            RowVariant::RhoPhiGamma,
            OuterKind::RhoPhiGamma,
            "phi*gamma^(2/f)",
        ),
    ] {
        if !p.wants(variant) {
            continue;
        }
        let rho = b.cyclic(name, b.build_outer(kind)?)?;
        if p.wants(RowVariant::Sl) || p.variants.iter().all(|v| *v != RowVariant::Sp) {
            let h = b.assemble("T:<rho>", &[&t, &rho])?.handle;
            let what = format!("T:<{name}>");
            let mut cert = ctx.certify(&what, &g, &h, &v, Some(order_sl(m as u32 - 1, q * q)))?;
            if f == 1 && kind == OuterKind::RhoPhiGamma {
                cert = cert.with_note("for f = 1, γ^(2/f) = γ² = 1 and ρ = φ");
            }
            out.push(cert);
        }
        if let Some(s) = &s {
            if p.wants(RowVariant::Sp) || p.variants.iter().all(|v| *v != RowVariant::Sl) {
                let h = b.assemble("S:<rho>", &[s, &rho])?.handle;
                let what = format!("{}:<{name}>", s.label());
                out.push(ctx.certify(&what, &g, &h, &v, Some(order_sp(m as u32 - 2, q * q)))?);
            }
        }
    }
    Ok(out)
}

fn symplectic_row(ctx: &RowContext) -> Result<Vec<FactorizationCertificate>> {
    let b = &ctx.builder;
    let sp = b.space().clone();
    let (m, q) = (sp.m(), sp.q());
    let g = b.build_su()?;
    let h = b.build_sp2m_in_su()?;
    let u = sp.u();
    let what = format!("{} with K = G_u", h.label());
    Ok(vec![ctx.certify(
        &what,
        &g,
        &h,
        &u,
        Some(order_sp(2 * m as u32 - 2, q)),
    )?])
}

fn g2_row(ctx: &RowContext, p: &RowParams) -> Result<Vec<FactorizationCertificate>> {
    let b = &ctx.builder;
    let sp = b.space().clone();
    let q = sp.q();
    let g = b.build_su()?;
    let h = b.build_g2()?;
    let v = sp.v();
    let mut out = Vec::new();
    if p.variants.is_empty() || p.variants.iter().any(|v| *v != RowVariant::Derived) {
        out.push(ctx.certify(h.label(), &g, &h, &v, Some(order_sl(2, q)))?);
    }
    if p.wants(RowVariant::Derived) {
        let d = h.derived_core();
        let what = format!("{}' (negative control)", h.label());
        let expected = if q == 2 {
            Verdict::Refuted
        } else {
            Verdict::Certified
        };
        let cert = ctx
            .certify(&what, &g, &d, &v, None)?
            .with_expected(expected);
        out.push(cert);
    }
    Ok(out)
}

fn imported_row(ctx: &RowContext, p: &RowParams) -> Result<Vec<FactorizationCertificate>> {
    let b = &ctx.builder;
    let g = b.build_su()?;
    let h = import_generators(b, p.import_h.as_ref().expect("checked by row_support"))?;
    let k = import_generators(b, p.import_k.as_ref().expect("checked by row_support"))?;
    let cert = certify_product(&ctx.label("imported pair"), ctx.params.clone(), &g, &h, &k)?;
    Ok(vec![cert.with_note(QUOTIENT_NOTE)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_one_counts() {
        assert_eq!(norm_one_count(4, 2), 120);
        assert_eq!(norm_one_count(6, 2), 2016);
        assert_eq!(norm_one_count(3, 3), 252);
        assert_eq!(norm_one_count(12, 2), 2048 * 4095);
    }

    #[test]
    fn support_matrix() {
        let p = RowParams::new(2, Some(2));
        assert!(matches!(row_support(7, &p), RowSupport::Supported { domain: 120, .. }));
        assert!(matches!(row_support(14, &p), RowSupport::ImportRequired { .. }));
        assert!(matches!(row_support(16, &p), RowSupport::TooLarge { .. }));
        assert!(matches!(row_support(19, &p), RowSupport::Invalid { .. }));
        assert!(matches!(row_support(6, &p), RowSupport::Invalid { .. }));
        assert!(matches!(row_support(2, &RowParams::new(2, Some(3))), RowSupport::Invalid { .. }));
        assert!(matches!(row_support(1, &RowParams::new(6, Some(2))), RowSupport::Invalid { .. }));
        let bad = RowParams::new(2, Some(2)).with_ab(3, 1);
        assert!(matches!(row_support(1, &bad), RowSupport::Invalid { .. }));
    }

    #[test]
    fn import_rows_without_files_are_inconclusive() {
        let certs = run_table_row(9, &RowParams::new(3, None)).unwrap();
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].verdict, Verdict::Inconclusive);
        assert!(certs[0].notes[0].contains("external data needed"));
    }

    #[test]
    fn too_large_rows_are_capacity_errors() {
        assert!(matches!(
            run_table_row(17, &RowParams::new(2, None)),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn ab_pairs_skip_trivial_sl1() {
        let p = RowParams::new(2, Some(4));
        assert_eq!(ab_pairs(4, &p, false), vec![(4, 1), (2, 2)]);
        assert_eq!(ab_pairs(4, &p, true), vec![(4, 1), (2, 2)]);
        assert_eq!(ab_pairs(3, &p, true), vec![]);
    }
}
