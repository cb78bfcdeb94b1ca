use num_bigint::BigUint;
use unifact::construct::Builder;
use unifact::verify::{fingerprint, hk_member, product_set, run_table_row, RowParams, Verdict};

fn run(row: usize, q: u32, m: Option<usize>) -> Vec<unifact::verify::FactorizationCertificate> {
    let certs = run_table_row(row, &RowParams::new(q, m)).unwrap();
    for c in &certs {
        eprintln!(
            "{} -> {} (|H∩K| = {:?}) {:?}",
            c.label, c.verdict, c.order_h_cap_k, c.notes
        );
    }
    certs
}

#[test]
fn small_rows_certify() {
    for (row, q, m) in [
        (1, 2, 2),
        (2, 2, 2),
        (4, 2, 2),
        (4, 2, 3),
        (5, 2, 2),
        (6, 4, 2),
        (7, 2, 2),
        (7, 3, 2),
        (8, 2, 0),
    ] {
        for c in run(row, q, (m > 0).then_some(m)) {
            assert!(c.as_expected(), "{}: {}", c.label, c.verdict);
            assert_eq!(c.identity_holds(), Some(c.verdict == Verdict::Certified));
        }
    }
}

#[test]
fn negative_control_is_refuted() {
    let certs = run(8, 2, None);
    let neg = certs.iter().find(|c| c.label.contains("negative")).unwrap();
    assert_eq!(neg.verdict, Verdict::Refuted);
}

#[test]
fn row_four_m3_intersection_is_sl2_4() {
    let certs = run(4, 2, Some(3));
    assert_eq!(certs[0].order_h_cap_k, Some(BigUint::from(60u32)));
}

#[test]
fn hk_member_agrees_with_product_set() {
    let b = Builder::new(4, 2).unwrap();
    let g = b.build_su().unwrap();
    let t = b.build_levi_t().unwrap();
    let v = b.space().v();
    let k = g.vector_stabilizer(&v).unwrap();
    let prod = product_set(&t, &k, 100_000).unwrap();
    let mut hits = 0;
    for x in g.elements(usize::MAX).unwrap().iter().step_by(7) {
        let lifted = g.domain().lift(x).unwrap();
        let member = hk_member(&lifted, &t, &v);
        assert_eq!(prod.contains(x.images()), member);
        hits += member as usize;
    }
    assert!(hits > 0);
}

#[test]
fn sl2_4_fingerprint() {
    let b = Builder::new(4, 2).unwrap();
    let t = b.build_levi_t().unwrap();
    let fp = fingerprint(&t).unwrap();
    assert!(fp.perfect);
    assert_eq!(fp.order, BigUint::from(60u32));
}

#[test]
fn subgroup_product_identity_in_semilinear_group() {
    use unifact::construct::{order_su, OuterKind};
    use unifact::verify::{property_subgroup_product, SubgroupProductOutcome};
    let b = Builder::new(4, 2).unwrap();
    let su = b.build_su().unwrap();
    let phi = b.build_outer(OuterKind::Phi).unwrap();
    let mut gens = su.semilinear_generators();
    gens.push(phi.clone());
    let g = b
        .handle_with_order("SU4(2):<phi>", gens, order_su(4, 2) * 2u32)
        .unwrap();
    let rho = b.cyclic("<phi>", phi).unwrap();
    let h = b
        .assemble("T:<phi>", &[&b.build_levi_t().unwrap(), &rho])
        .unwrap()
        .handle;
    let k = g.vector_stabilizer(&b.space().v()).unwrap();
    assert_eq!(k.order(), BigUint::from(432u32));
    match property_subgroup_product(&g, &h, &k, &su).unwrap() {
        SubgroupProductOutcome::Checked { holds, lhs, .. } => {
            assert!(holds);
            assert_eq!(lhs, g.order());
        }
        other => panic!("{other:?}"),
    }
}
