use super::*;
use crate::homcalc::abelianization;
use crate::nilquot::nilpotent_quotient;
use crate::subgroups::low_index;

fn caps() -> Caps {
    Caps::default()
}

#[test]
fn builders_round_trip() {
    let mut all = vec![higman_group(), link_group_a2().0];
    all.extend((3..6).map(|p| acyclic_group(p).unwrap()));
    all.extend((1..4).map(|g| surface_group(g).unwrap()));
    for p in all {
        let text = p.serialize();
        let back = Presentation::parse(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.serialize(), text);
    }
}

#[test]
fn higman_facts() {
    let h = higman_group();
    assert_eq!((h.rank(), h.relators().len()), (4, 4));
    assert!(abelianization(&h).is_trivial());
    assert_eq!(low_index(&h, 5, false).unwrap().len(), 1);
}

#[test]
fn acyclic_groups() {
    let a = acyclic_group(3).unwrap();
    assert_eq!(a.rank(), 4);
    assert_eq!(a.show(&a.relators()[0]), "a1^-1 a2^3 a1 a2^-4");
    for p in 3..7 {
        assert!(abelianization(&acyclic_group(p).unwrap()).is_trivial());
    }
    assert!(acyclic_group(2).is_err());
}

#[test]
fn surfaces() {
    let t = surface_group(1).unwrap();
    assert_eq!(t.show(&t.relators()[0]), "a^-1 b^-1 a b");
    assert_eq!(abelianization(&t).free_rank, 2);
    let s = surface_group(2).unwrap();
    assert_eq!(s.rank(), 4);
    assert_eq!(s.relators()[0].len(), 8);
    assert_eq!(abelianization(&s).free_rank, 4);
    assert!(surface_group(0).is_err());
}

#[test]
fn link_group() {
    let (p, h) = link_group_a2();
    assert_eq!(h.certification, Certification::Exact);
    let a = abelianization(&p);
    assert_eq!((a.free_rank, a.torsion.len()), (2, 0));
    // Symbolic substitution: each relator becomes the empty word.
    for r in p.relators() {
        assert!(r.substitute(&h.hom.images).is_empty());
    }
}

#[test]
fn direct_products() {
    let z = Presentation::parse("gens: a\nrel: a^3").unwrap();
    let p = direct_product(&z, &z).unwrap();
    assert_eq!(p.names(), &["a".to_string(), "a'".to_string()]);
    assert_eq!(p.relators().len(), 3);
    assert_eq!(abelianization(&p).torsion, vec![3, 3]);
}

#[test]
fn fibre_product_generators() {
    let (prod, gens) = fibre_product_gens(4, &higman_group()).unwrap();
    assert_eq!(prod.rank(), 8);
    assert_eq!(gens.len(), 8);
    let q = Presentation::parse("gens: x\nrel: x").unwrap();
    let (prod, gens) = fibre_product_gens(1, &q).unwrap();
    assert_eq!(gens, vec![prod.parse_word("x x'").unwrap(), prod.parse_word("x").unwrap()]);
    // Z/2: generators (x, x) and (x^2, 1) span an index-2 sublattice of Z^2.
    let q = Presentation::parse("gens: x\nrel: x^2").unwrap();
    let (prod, gens) = fibre_product_gens(1, &q).unwrap();
    let t = crate::subgroups::todd_coxeter(&prod, &gens, 100).unwrap();
    assert_eq!(t.index(), 2);
    assert!(fibre_product_gens(3, &q).is_err());
}

#[test]
fn genus_check_examples() {
    let f2 = Presentation::free(&["x", "y"]);
    let id = check_hom(&GroupHom::identity(&f2), 3, &caps()).unwrap();
    let r = genus_check(&id, 3, &caps(), 1).unwrap();
    assert!(r.all_iso());

    let (_, h) = link_group_a2();
    let r = genus_check(&h, 4, &caps(), 2).unwrap();
    assert_eq!(r.iso_up_to_class, 4);

    let f3 = Presentation::free(&["a", "b", "c"]);
    let sub = GroupHom::new(f3, f2.clone(), vec![
        f2.parse_word("x").unwrap(),
        f2.parse_word("y^2").unwrap(),
        f2.parse_word("y x y^-1").unwrap(),
    ])
    .unwrap();
    let sub = check_hom(&sub, 2, &caps()).unwrap();
    let r = genus_check(&sub, 2, &caps(), 1).unwrap();
    assert_eq!(r.iso_up_to_class, 0);
    assert!(!r.per_class[0].is_iso());
}

#[test]
fn genus_check_ignores_target_relabelling() {
    let (p, h) = link_group_a2();
    let f2 = Presentation::free(&["v", "u"]);
    let swapped = GroupHom::from_spec(&p, &f2, "z=1,l=1").unwrap();
    let swapped = check_hom(&swapped, 3, &caps()).unwrap();
    let a = genus_check(&h, 3, &caps(), 1).unwrap();
    let b = genus_check(&swapped, 3, &caps(), 1).unwrap();
    let verdicts = |r: &GenusReport| {
        r.per_class
            .iter()
            .map(|o| match o {
                ClassOutcome::Computed(x) => Some(x.verdict),
                ClassOutcome::Capped { .. } => None,
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(verdicts(&a), verdicts(&b));
}

#[test]
fn parafree_certificate_never_claims_residual_nilpotence() {
    let (_, h) = link_group_a2();
    let c = parafree_certificate(&h, 3, &caps(), 1).unwrap();
    assert!(c.h1_check);
    assert!(c.class_checks.all_iso());
    assert_eq!(c.residual_nilpotence, "unknown");
}

#[test]
fn stallings_folding() {
    let f2 = Presentation::free(&["x", "y"]);
    let w = |s: &str| f2.parse_word(s).unwrap();
    assert!(generates_free_group(2, &[w("x"), w("y")]));
    assert!(generates_free_group(2, &[w("x y"), w("y")]));
    assert!(generates_free_group(2, &[w("x y x^-1"), w("x")]));
    assert!(!generates_free_group(2, &[w("x"), w("y^2")]));
    assert!(!generates_free_group(2, &[w("x y x^-1 y^-1"), w("x")]));
    assert!(generates_free_group(2, &[w("x"), w("y"), w("y^2")]));
}

#[test]
fn witness_for_the_link_group() {
    let (p, h) = link_group_a2();
    for cand in ["l", "z"] {
        let w = p.parse_word(cand).unwrap();
        let r = non_residual_nilpotence_witness(&h, &w, 4, 4, &caps()).unwrap();
        assert!(r.confirmed, "{cand}");
        assert_eq!(r.trivial_in_class, vec![true; 4]);
    }
    let f2 = Presentation::free(&["x", "y"]);
    let id = check_hom(&GroupHom::identity(&f2), 1, &caps()).unwrap();
    let e = non_residual_nilpotence_witness(&id, &Word::generator(0), 2, 0, &caps()).unwrap_err();
    assert!(matches!(e, Error::NotInKernel(_)));
}

#[test]
fn fibre_product_of_a_finite_quotient() {
    // Q = Z/2 over F_1: P is index 2 in Z^2 and not all of it; class 1 must differ.
    let q = Presentation::parse("gens: x\nrel: x^2").unwrap();
    let fp = fibre_product(&q, 0).unwrap();
    let r = genus_check(&fp.inclusion, 1, &caps(), 1).unwrap();
    assert_eq!(r.iso_up_to_class, 0);
    let _ = nilpotent_quotient(&fp.partial, 1, &caps()).unwrap();
}
