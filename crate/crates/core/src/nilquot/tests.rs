use super::*;
use crate::homcalc::abelianization;
use crate::words::{Letter, Presentation, Word};
use proptest::prelude::*;

fn caps() -> Caps {
    Caps::default()
}

fn pres(text: &str) -> Presentation {
    Presentation::parse(text).unwrap()
}

fn higman() -> Presentation {
    pres("gens: a b c d\nrel: b a b^-1 a^-2\nrel: c b c^-1 b^-2\nrel: d c d^-1 c^-2\nrel: a d a^-1 d^-2")
}

fn link() -> Presentation {
    pres("gens: u v z l\nrel: u^-1 l^-1 u l\nrel: u z u^-1 z^-1 v^-1 z^-1 v\nrel: l^-1 v^-1 u z u^-1 v z")
}

/// Witt's formula `(1/n) sum_{d | n} mu(d) r^{n/d}`, computed independently of the
/// quotient algorithm.
fn witt(r: i64, n: u32) -> i64 {
    fn mu(mut d: u32) -> i64 {
        let mut m = 1;
        let mut p = 2;
        while p * p <= d {
            if d % p == 0 {
                d /= p;
                if d % p == 0 {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if d > 1 {
            m = -m;
        }
        m
    }
    (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| mu(d) * r.pow(n / d))
        .sum::<i64>()
        / n as i64
}

fn free_ranks(r: usize, c: u32) -> Vec<usize> {
    let names: Vec<String> = (0..r).map(|i| format!("x{i}")).collect();
    let p = Presentation::new(names, vec![]).unwrap();
    nilpotent_quotient(&p, c, &caps()).unwrap().lcs_invariants().ranks()
}

#[test]
fn free_group_of_rank_two_class_two() {
    let q = nilpotent_quotient(&Presentation::free(&["x", "y"]), 2, &caps()).unwrap();
    assert_eq!(q.hirsch_length(), 3);
    assert_eq!(q.lcs_invariants().ranks(), vec![2, 1]);
    assert!(q.is_consistent());
}

#[test]
fn free_group_ranks_match_witt() {
    assert_eq!(free_ranks(2, 4), vec![2, 1, 2, 3]);
    for (r, c) in [(2usize, 5u32), (3, 3)] {
        let expected: Vec<usize> = (1..=c).map(|n| witt(r as i64, n) as usize).collect();
        assert_eq!(free_ranks(r, c), expected);
    }
    assert_eq!(free_ranks(3, 2), vec![3, 3]);
}

#[test]
fn commutator_collects_to_third_generator() {
    let p = Presentation::free(&["x", "y"]);
    let q = nilpotent_quotient(&p, 2, &caps()).unwrap();
    let w = p.parse_word("x^-1 y^-1 x y").unwrap();
    let v = q.collect(&w);
    assert_eq!(v.iter().filter(|&&e| e != 0).count(), 1);
    assert_eq!(v[2].abs(), 1);
    assert_eq!(q.weights()[2], 2);
    assert_eq!(q.collect(&Word::identity()), vec![0, 0, 0]);
}

#[test]
fn perfect_groups_have_trivial_quotients() {
    let h = higman();
    assert!(abelianization(&h).is_trivial());
    for c in 1..=5 {
        let q = nilpotent_quotient(&h, c, &caps()).unwrap();
        assert_eq!(q.len(), 0);
        assert!(q.lcs_invariants().is_trivial());
    }
}

#[test]
fn abelian_input_stops_at_class_one() {
    let z2 = pres("gens: a b\nrel: a^-1 b^-1 a b");
    let q5 = nilpotent_quotient(&z2, 5, &caps()).unwrap();
    let inv = q5.lcs_invariants();
    assert_eq!(inv.ranks(), vec![2, 0, 0, 0, 0]);
    assert!(inv.factors[1..].iter().all(AbelianInvariants::is_trivial));
    assert_eq!(q5.hirsch_length(), 2);
}

#[test]
fn torsion_is_exact() {
    // <a, b | a^2, b^2> is infinite dihedral; its class-c quotient has order 2^{c+1}.
    let d = pres("gens: a b\nrel: a^2\nrel: b^2");
    let q = nilpotent_quotient(&d, 3, &caps()).unwrap();
    let inv = q.lcs_invariants();
    assert_eq!(inv.factors[0].torsion, vec![2, 2]);
    assert_eq!(inv.factors[1].torsion, vec![2]);
    assert_eq!(inv.factors[2].torsion, vec![2]);
    // <a | a^6> stays cyclic of order 6.
    let c6 = pres("gens: a\nrel: a^6");
    let q = nilpotent_quotient(&c6, 3, &caps()).unwrap();
    assert_eq!(q.lcs_invariants().factors[0].torsion, vec![6]);
    assert_eq!(q.len(), 1);
}

#[test]
fn surface_group_class_one() {
    let s = pres("gens: a1 b1 a2 b2\nrel: a1^-1 b1^-1 a1 b1 a2^-1 b2^-1 a2 b2");
    let q = nilpotent_quotient(&s, 1, &caps()).unwrap();
    let inv = q.lcs_invariants();
    assert_eq!(inv.factors[0].free_rank, 4);
    assert!(inv.factors[0].torsion.is_empty());
    // Class 2: Lambda^2 Z^4 modulo the relator, rank 5.
    let q = nilpotent_quotient(&s, 2, &caps()).unwrap();
    assert_eq!(q.lcs_invariants().ranks(), vec![4, 5]);
}

#[test]
fn longitude_dies_in_link_quotients() {
    let p = link();
    let l = Word::generator(3);
    for c in 1..=4 {
        let q = nilpotent_quotient(&p, c, &caps()).unwrap();
        assert!(q.collect(&l).iter().all(|&e| e == 0), "class {c}");
        assert_eq!(q.lcs_invariants().ranks(), free_ranks(2, c));
    }
}

#[test]
fn induced_map_examples() {
    let f2 = Presentation::free(&["x", "y"]);
    let id = crate::words::check_hom(&crate::words::GroupHom::identity(&f2), 3, &caps()).unwrap();
    for c in 1..=3 {
        assert_eq!(induced_map_report(&id, c, &caps()).unwrap().verdict, Verdict::Iso);
    }
    let z2 = pres("gens: x y\nrel: x^-1 y^-1 x y");
    let h = crate::words::GroupHom::from_spec(&f2, &z2, "").unwrap();
    let h = crate::words::check_hom(&h, 2, &caps()).unwrap();
    let r = induced_map_report(&h, 2, &caps()).unwrap();
    assert!(r.surjective);
    assert_eq!(r.factor_match, vec![true, false]);
    assert_eq!(r.verdict, Verdict::InvariantMismatch);

    let (p, f) = (link(), Presentation::free(&["u", "v"]));
    let h = crate::words::GroupHom::from_spec(&p, &f, "z=1,l=1").unwrap();
    let h = crate::words::check_hom(&h, 4, &caps()).unwrap();
    assert_eq!(h.certification, crate::words::Certification::Exact);
    for c in 1..=4 {
        assert_eq!(induced_map_report(&h, c, &caps()).unwrap().verdict, Verdict::Iso);
    }
}

#[test]
fn not_surjective_is_detected() {
    let f2 = Presentation::free(&["x", "y"]);
    let h = crate::words::GroupHom::new(f2.clone(), f2.clone(), vec![Word::generator(0), Word::generator(1).pow(2)]).unwrap();
    let h = crate::words::check_hom(&h, 2, &caps()).unwrap();
    let r = induced_map_report(&h, 2, &caps()).unwrap();
    assert!(!r.surjective);
    assert_eq!(r.verdict, Verdict::NotSurjective);
}

#[test]
fn hirsch_cap_is_an_error() {
    let small = Caps {
        max_hirsch: 10,
        ..Caps::default()
    };
    let e = nilpotent_quotient(&Presentation::free(&["x", "y"]), 6, &small).unwrap_err();
    assert!(e.is_cap());
}

#[test]
fn truncation_is_functorial() {
    for p in [Presentation::free(&["x", "y"]), link(), pres("gens: a b\nrel: a^2\nrel: b^4 a^-1 b^-1 a b")] {
        let q4 = nilpotent_quotient(&p, 4, &caps()).unwrap();
        for c in 1..4 {
            let direct = nilpotent_quotient(&p, c, &caps()).unwrap();
            let cut = q4.truncate(c);
            assert_eq!(cut.lcs_invariants(), direct.lcs_invariants());
            assert_eq!(q4.lcs_invariants().factors[..c as usize], direct.lcs_invariants().factors[..]);
            assert!(cut.is_consistent());
        }
    }
}

fn arb_word(rank: usize, len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=len)
        .prop_map(|v| Word::reduced(v.into_iter().map(|(g, i)| Letter::new(g, i))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn collection_is_a_homomorphism(w1 in arb_word(2, 12), w2 in arb_word(2, 12)) {
        thread_local! {
            static Q: PcQuotient = nilpotent_quotient(&Presentation::free(&["x", "y"]), 4, &Caps::default()).unwrap();
        }
        Q.with(|q| {
            let lhs = q.collect(&w1.mul(&w2));
            let rhs = q.multiply(&q.collect(&w1), &q.collect(&w2));
            assert_eq!(lhs, rhs);
            let inv = q.inverse(&q.collect(&w1));
            assert_eq!(inv, q.collect(&w1.inverse()));
        });
    }

    #[test]
    fn collection_respects_relators(w in arb_word(4, 10)) {
        thread_local! {
            static Q: PcQuotient = nilpotent_quotient(&link(), 3, &Caps::default()).unwrap();
        }
        Q.with(|q| {
            for r in q.source().relators() {
                let conj = w.inverse().mul(r).mul(&w);
                assert!(q.collect(&conj).iter().all(|&e| e == 0));
            }
        });
    }
}
