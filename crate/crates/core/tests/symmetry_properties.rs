use proptest::prelude::*;
use rand::Rng;
use toric_hld::noise::rng_stream;
use toric_hld::symmetry::{
    align, antitransposition_representant, center, relabel_logical, syndrome_less, wrapped_decode,
};
use toric_hld::{sample_error, CodeGeometry, LogicalLabel, PauliChain, Syndrome, SymmetryMode, Transform, Underlying};

fn random_transform<R: Rng>(l: usize, rng: &mut R, with_flip: bool) -> Transform {
    Transform { dr: rng.gen_range(0..l), dc: rng.gen_range(0..l), antitransposed: with_flip && rng.gen_bool(0.5) }
}

fn all_transforms(l: usize, with_flip: bool) -> Vec<Transform> {
    let flips: &[bool] = if with_flip { &[false, true] } else { &[false] };
    let mut out = Vec::new();
    for &antitransposed in flips {
        for dr in 0..l {
            for dc in 0..l {
                out.push(Transform { dr, dc, antitransposed });
            }
        }
    }
    out
}

/// True iff only the identity maps `s` to itself.
fn has_trivial_stabilizer(g: &CodeGeometry, s: &Syndrome, with_flip: bool) -> bool {
    all_transforms(g.l(), with_flip)
        .into_iter()
        .filter(|t| !t.is_identity())
        .all(|t| t.apply_syndrome(g, s).unwrap() != *s)
}

fn random_syndrome<R: Rng>(g: &CodeGeometry, rng: &mut R) -> Syndrome {
    let p = rng.gen_range(0.02..0.3);
    g.syndrome_of(&sample_error(g, p, rng)).unwrap()
}

#[test]
fn canonical_forms_are_orbit_constant_and_idempotent() {
    for l in [2, 3, 5, 7] {
        let g = CodeGeometry::new(l).unwrap();
        let mut rng = rng_stream(l as u64, 10);
        for _ in 0..10_000 {
            let s = random_syndrome(&g, &mut rng);
            let (c, tc) = center(&g, &s).unwrap();
            assert_eq!(tc.apply_syndrome(&g, &s).unwrap(), c);
            assert_eq!(center(&g, &c).unwrap().0, c);
            let shift = random_transform(l, &mut rng, false);
            assert_eq!(center(&g, &shift.apply_syndrome(&g, &s).unwrap()).unwrap().0, c);

            let (a, ta) = align(&g, &s).unwrap();
            assert_eq!(ta.apply_syndrome(&g, &s).unwrap(), a);
            assert_eq!(align(&g, &a).unwrap().0, a);
            let any = random_transform(l, &mut rng, true);
            assert_eq!(align(&g, &any.apply_syndrome(&g, &s).unwrap()).unwrap().0, a);
            assert!(!syndrome_less(&c, &a).unwrap());
        }
    }
}

#[test]
fn align_is_the_orbit_minimum() {
    let g = CodeGeometry::new(3).unwrap();
    let mut rng = rng_stream(3, 11);
    for _ in 0..2000 {
        let s = random_syndrome(&g, &mut rng);
        let images: Vec<Syndrome> = all_transforms(3, true).iter().map(|t| t.apply_syndrome(&g, &s).unwrap()).collect();
        let min = images.iter().min_by(|a, b| a.bits().lex_cmp(b.bits())).unwrap();
        assert_eq!(&align(&g, &s).unwrap().0, min);
    }
}

#[test]
fn commuting_diagram_for_all_transforms() {
    for l in [2, 3, 5] {
        let g = CodeGeometry::new(l).unwrap();
        let transforms = all_transforms(l, true);
        let mut rng = rng_stream(l as u64, 12);
        for i in 0..10_000 {
            let e = sample_error(&g, 0.3, &mut rng);
            let t = transforms[i % transforms.len()];
            let lhs = g.syndrome_of(&t.apply_chain(&g, &e).unwrap()).unwrap();
            let rhs = t.apply_syndrome(&g, &g.syndrome_of(&e).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "L = {l}, {t:?}");
            assert_eq!(t.inverse(&g).apply_chain(&g, &t.apply_chain(&g, &e).unwrap()).unwrap(), e);
        }
    }
}

#[test]
fn translations_preserve_logical_class() {
    let g = CodeGeometry::new(3).unwrap();
    for label in LogicalLabel::all() {
        let c = g.logical_correction(label);
        for t in all_transforms(3, true) {
            let moved = t.apply_chain(&g, &c).unwrap();
            assert_eq!(g.logical_class(&moved).unwrap(), relabel_logical(label, &t));
        }
    }
}

#[test]
fn representant_examples() {
    let g = CodeGeometry::new(3).unwrap();
    // vertices (0,0) and (2,2) are swapped by the anti-transposition
    let mut s = Syndrome::zeros(18);
    s.flip(0);
    s.flip(8);
    let (r, t) = antitransposition_representant(&g, &s).unwrap();
    assert_eq!(r, s);
    assert!(!t.antitransposed);
    let mut rng = rng_stream(3, 13);
    for _ in 0..1000 {
        let s = random_syndrome(&g, &mut rng);
        let (r, _) = antitransposition_representant(&g, &s).unwrap();
        assert!(!syndrome_less(&s, &r).unwrap());
        assert_eq!(antitransposition_representant(&g, &r).unwrap().0, r);
    }
}

#[test]
fn empty_syndrome_is_fixed() {
    let g = CodeGeometry::new(4).unwrap();
    let s = Syndrome::zeros(32);
    assert_eq!(align(&g, &s).unwrap(), (s.clone(), Transform::IDENTITY));
    assert_eq!(center(&g, &s).unwrap(), (s, Transform::IDENTITY));
}

#[test]
fn wrapped_decoders_are_equivariant() {
    let g = CodeGeometry::new(5).unwrap();
    let mut rng = rng_stream(5, 14);
    let mut exact = 0;
    for i in 0..10_000 {
        let underlying = if i % 2 == 0 { Underlying::Mwpm } else { Underlying::Trivial };
        let mode = if i % 4 < 2 { SymmetryMode::Center } else { SymmetryMode::Align };
        let with_flip = mode == SymmetryMode::Align;
        let e = sample_error(&g, 0.08, &mut rng);
        let s = g.syndrome_of(&e).unwrap();
        let t = random_transform(5, &mut rng, with_flip);
        let s2 = t.apply_syndrome(&g, &s).unwrap();
        let r1 = wrapped_decode(&g, underlying, mode, &s).unwrap();
        let r2 = wrapped_decode(&g, underlying, mode, &s2).unwrap();
        assert_eq!(g.syndrome_of(&r2).unwrap(), s2);
        if has_trivial_stabilizer(&g, &s, with_flip) {
            assert_eq!(t.apply_chain(&g, &r1).unwrap(), r2);
            exact += 1;
        }
    }
    // nearly every random syndrome has no self-symmetry
    assert!(exact > 9_000, "{exact}");
}

fn transform_strategy(l: usize) -> impl Strategy<Value = Transform> {
    (0..l, 0..l, any::<bool>()).prop_map(|(dr, dc, antitransposed)| Transform { dr, dc, antitransposed })
}

proptest! {
    #[test]
    fn transform_composition_is_associative(a in transform_strategy(4), b in transform_strategy(4), c in transform_strategy(4)) {
        let g = CodeGeometry::new(4).unwrap();
        prop_assert_eq!(a.then(&g, &b).then(&g, &c), a.then(&g, &b.then(&g, &c)));
        prop_assert!(a.then(&g, &a.inverse(&g)).is_identity());
    }

    #[test]
    fn relabel_is_an_automorphism(x in 0u8..16, y in 0u8..16, t in transform_strategy(3)) {
        let (a, b) = (LogicalLabel::new(x).unwrap(), LogicalLabel::new(y).unwrap());
        prop_assert_eq!(relabel_logical(a.compose(b), &t), relabel_logical(a, &t).compose(relabel_logical(b, &t)));
        prop_assert_eq!(relabel_logical(relabel_logical(a, &t), &t), a);
    }

    #[test]
    fn lex_order_is_strict_and_total(x in 0u32..256, y in 0u32..256) {
        let mk = |v: u32| Syndrome::from_bits(toric_hld::BitVec::from_bools((0..8).map(|i| v >> i & 1 == 1)));
        let (a, b) = (mk(x), mk(y));
        let ab = syndrome_less(&a, &b).unwrap();
        let ba = syndrome_less(&b, &a).unwrap();
        prop_assert!(!(ab && ba));
        prop_assert_eq!(x == y, !ab && !ba);
    }
}

#[test]
fn identity_chain_decodes_to_identity() {
    let g = CodeGeometry::new(3).unwrap();
    for mode in [SymmetryMode::None, SymmetryMode::Center, SymmetryMode::Align] {
        let r = wrapped_decode(&g, Underlying::Mwpm, mode, &Syndrome::zeros(18)).unwrap();
        assert_eq!(r, PauliChain::identity(18));
    }
}
