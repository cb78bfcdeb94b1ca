use std::time::Instant;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unifact::construct::{
    import_parsed, order_sl, order_su, Builder, ExtKind, GeneratorFile, OuterKind,
};
use unifact::Error;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

#[test]
fn su_orders() {
    for (n, q, o) in [
        (4, 2, 25920u64),
        (3, 3, 6048),
        (5, 2, 13685760),
        (4, 3, 13063680),
        (6, 2, 27590492160),
    ] {
        let t = Instant::now();
        let b = Builder::new(n, q).unwrap();
        let g = b.build_su().unwrap();
        assert_eq!(g.order(), big(o));
        assert_eq!(order_su(n as u32, q), big(o));
        eprintln!(
            "SU{n}({q}) on {} points: {:?}",
            b.domain().len(),
            t.elapsed()
        );
    }
}

#[test]
fn parabolic_pieces() {
    let b = Builder::new(4, 2).unwrap();
    let r = b.build_radical_r().unwrap();
    let t = b.build_levi_t().unwrap();
    assert_eq!(r.order(), big(16));
    assert_eq!(t.order(), big(60));
    let rt = b.assemble("R:T", &[&r, &t]).unwrap();
    assert_eq!(rt.order, big(960));
    assert!(rt.split_order_matches());
    let gamma = b.build_outer(OuterKind::Gamma).unwrap();
    let tg = b
        .assemble("T:<g>", &[&t, &b.cyclic("g", gamma).unwrap()])
        .unwrap();
    assert_eq!(tg.order, big(120));
    let b3 = Builder::new(4, 3).unwrap();
    assert_eq!(b3.build_radical_r().unwrap().order(), big(81));
}

#[test]
fn ext_and_symplectic() {
    let b = Builder::new(4, 2).unwrap();
    assert_eq!(
        b.build_ext_subgroup(ExtKind::Sl, 2, 1).unwrap().order(),
        big(60)
    );
    assert_eq!(
        b.build_ext_subgroup(ExtKind::Sp, 2, 1).unwrap().order(),
        big(60)
    );
    assert_eq!(
        b.build_ext_subgroup(ExtKind::Sl, 1, 2).unwrap().order(),
        big(1)
    );
    assert_eq!(b.build_sp2m_in_su().unwrap().order(), big(720));
    let b3 = Builder::new(4, 3).unwrap();
    assert_eq!(b3.build_sp2m_in_su().unwrap().order(), big(51840));
    assert!(matches!(
        Builder::new(8, 2),
        Err(Error::Capacity { actual: 32640, .. })
    ));
}

#[test]
fn containments() {
    let b = Builder::new(6, 2).unwrap();
    let r = b.build_radical_r().unwrap();
    let t = b.build_levi_t().unwrap();
    for x in t.perm_generators() {
        for y in r.perm_generators() {
            assert!(r.contains_perm(&x.inverse().then(y).then(x)));
        }
    }
    let ext = b.build_ext_subgroup(ExtKind::Sl, 3, 1).unwrap();
    assert!(ext.is_subgroup_of(&t));
    assert_eq!(ext.order(), order_sl(3, 4));
}

#[test]
fn g2_two() {
    let t = Instant::now();
    let b = Builder::new(6, 2).unwrap();
    let g = b.build_g2().unwrap();
    assert_eq!(g.order(), big(12096));
    let sp = b.build_sp2m_in_su().unwrap();
    assert!(g.is_subgroup_of(&sp));
    let core = g.derived_core();
    assert_eq!(core.order(), big(6048));
    eprintln!("G2(2): {:?}", t.elapsed());
}

/// Two random elements of SU4(2) that generate it.
fn two_generators(b: &Builder) -> GeneratorFile {
    let g = b.build_su().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    loop {
        let pair = [g.random_element(&mut rng), g.random_element(&mut rng)];
        let maps: Vec<_> = pair.iter().map(|p| g.domain().lift(p).unwrap()).collect();
        if b.handle("pair", maps.clone()).unwrap().order() == g.order() {
            return GeneratorFile {
                n: 4,
                p: 2,
                degree: 2,
                frob_allowed: false,
                generators: maps,
                expect_order: Some(g.order()),
            };
        }
    }
}

#[test]
fn import_round_trip() {
    let b = Builder::new(4, 2).unwrap();
    let file = two_generators(&b);
    let text = file.to_text().unwrap();
    let parsed = GeneratorFile::parse(&text).unwrap();
    assert_eq!(parsed, file);
    let h = import_parsed(&b, &parsed, "round-trip").unwrap();
    assert_eq!(h.order(), big(25920));
}

#[test]
fn import_edge_cases() {
    let b = Builder::new(4, 2).unwrap();
    let empty = GeneratorFile::parse("# nothing\n4 2 2 0\n").unwrap();
    assert_eq!(import_parsed(&b, &empty, "empty").unwrap().order(), big(1));

    let small =
        GeneratorFile::parse("3 2 2 0\n[1,0] [0,0] [0,0]\n[0,0] [1,0] [0,0]\n[0,0] [0,0] [1,0]\n")
            .unwrap();
    assert!(matches!(
        import_parsed(&b, &small, "small"),
        Err(Error::Dimension {
            expected: 4,
            found: 3
        })
    ));

    let mut singular = String::from("4 2 2 0\n");
    for r in 0..4 {
        let row: Vec<&str> = (0..4)
            .map(|c| if r == c && r < 3 { "[1,0]" } else { "[0,0]" })
            .collect();
        singular += &(row.join(" ") + "\n");
    }
    assert!(matches!(
        GeneratorFile::parse(&singular),
        Err(Error::NotInvertible { index: 0 })
    ));

    let mut wrong = two_generators(&b);
    wrong.expect_order = Some(big(100));
    let parsed = GeneratorFile::parse(&wrong.to_text().unwrap()).unwrap();
    assert!(matches!(
        import_parsed(&b, &parsed, "wrong"),
        Err(Error::OrderMismatch { .. })
    ));

    assert!(matches!(
        GeneratorFile::parse("4 2 2 0\nfrob 1\n"),
        Err(Error::Parse { line: 2, .. })
    ));
}
