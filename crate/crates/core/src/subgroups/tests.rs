use super::*;
use crate::homcalc::abelianization;
use proptest::prelude::*;

fn pres(text: &str) -> Presentation {
    Presentation::parse(text).unwrap()
}

fn s3() -> Presentation {
    pres("gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b")
}

fn f(r: usize) -> Presentation {
    Presentation::new((0..r).map(|i| format!("x{i}")).collect(), vec![]).unwrap()
}

/// Order of the group generated by permutations, by closing under multiplication.
fn permutation_group_order(gens: &[Vec<usize>]) -> usize {
    let n = gens[0].len();
    let id: Vec<usize> = (0..n).collect();
    let mut seen = std::collections::HashSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(p) = stack.pop() {
        for g in gens {
            let q: Vec<usize> = p.iter().map(|&i| g[i]).collect();
            if seen.insert(q.clone()) {
                stack.push(q);
            }
        }
    }
    seen.len()
}

#[test]
fn enumerates_symmetric_group() {
    let p = s3();
    let t = todd_coxeter(&p, &[], 1000).unwrap();
    assert_eq!(t.index(), 6);
    t.verify_closed(&p).unwrap();
    // Oracle: the regular representation has as many elements as cosets.
    let perms: Vec<Vec<usize>> = (0..2).map(|g| t.permutation(g)).collect();
    assert_eq!(permutation_group_order(&perms), 6);
    let t = todd_coxeter(&p, &[Word::generator(0)], 1000).unwrap();
    assert_eq!(t.index(), 3);
    assert_eq!(todd_coxeter(&f(2), &[Word::generator(0), Word::generator(1)], 10).unwrap().index(), 1);
}

#[test]
fn enumeration_needing_coincidences() {
    // A presentation of the trivial group that forces coincidences.
    let p = pres("gens: a b\nrel: a^-1 b a b^-2\nrel: b^-1 a b a^-2");
    assert_eq!(todd_coxeter(&p, &[], 10_000).unwrap().index(), 1);
    // The alternating group of degree 5.
    let p = pres("gens: r s\nrel: r^2\nrel: s^3\nrel: r s r s r s r s r s");
    assert_eq!(todd_coxeter(&p, &[], 10_000).unwrap().index(), 60);
}

#[test]
fn cap_is_reported() {
    let e = todd_coxeter(&f(2), &[], 50).unwrap_err();
    assert!(e.is_cap());
    let p = pres("gens: r s\nrel: r^2\nrel: s^3\nrel: r s r s r s r s r s");
    assert!(todd_coxeter(&p, &[], 20).unwrap_err().is_cap());
}

#[test]
fn small_cap_still_succeeds_with_lookahead() {
    let p = pres("gens: r s\nrel: r^2\nrel: s^3\nrel: r s r s r s r s r s");
    let t = todd_coxeter(&p, &[], 70).unwrap();
    assert_eq!(t.index(), 60);
}

#[test]
fn normal_index_two_subgroups() {
    let found = low_index(&f(2), 2, true).unwrap();
    assert_eq!(found.iter().filter(|r| r.index == 2).count(), 3);
    let surface = pres("gens: a1 b1 a2 b2\nrel: a1^-1 b1^-1 a1 b1 a2^-1 b2^-1 a2 b2");
    let found = low_index(&surface, 2, true).unwrap();
    assert_eq!(found.iter().filter(|r| r.index == 2).count(), 15);
}

/// Conjugacy classes of subgroups of index `n` in `F_2`, counted by brute force over
/// transitive pairs of permutations up to simultaneous conjugation fixing nothing:
/// each class of index-`n` subgroups is an orbit of transitive actions with a base point.
fn brute_force_classes(n: usize) -> usize {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        fn go(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    go(n, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
    let all = perms(n);
    let mut classes = std::collections::HashSet::new();
    for a in &all {
        for b in &all {
            // Transitive?
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut stack = vec![0];
            while let Some(x) = stack.pop() {
                for y in [a[x], b[x]] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if !seen.iter().all(|&s| s) {
                continue;
            }
            // Canonical form of the conjugacy class of (a, b): minimum over relabellings.
            let key = all
                .iter()
                .map(|s| {
                    let mut inv = vec![0; n];
                    for (i, &j) in s.iter().enumerate() {
                        inv[j] = i;
                    }
                    let ca: Vec<usize> = (0..n).map(|i| s[a[inv[i]]]).collect();
                    let cb: Vec<usize> = (0..n).map(|i| s[b[inv[i]]]).collect();
                    (ca, cb)
                })
                .min()
                .unwrap();
            classes.insert(key);
        }
    }
    classes.len()
}

#[test]
fn free_group_conjugacy_classes_match_brute_force() {
    let found = low_index(&f(2), 4, false).unwrap();
    for n in 1..=4 {
        let ours = found.iter().filter(|r| r.index == n).count();
        assert_eq!(ours, brute_force_classes(n), "index {n}");
    }
    assert_eq!(
        (1..=4).map(|n| found.iter().filter(|r| r.index == n).count()).collect::<Vec<_>>(),
        vec![1, 3, 7, 26]
    );
}

#[test]
fn higman_group_has_no_small_quotients() {
    let p = pres("gens: a b c d\nrel: b a b^-1 a^-2\nrel: c b c^-1 b^-2\nrel: d c d^-1 c^-2\nrel: a d a^-1 d^-2");
    let found = low_index(&p, 5, false).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].index, 1);
}

#[test]
fn schreier_rank_law() {
    for r in [2usize, 3] {
        for rec in low_index(&f(r), 4, false).unwrap() {
            let (sub, words) = reidemeister_schreier(&f(r), &rec.table).unwrap();
            assert!(sub.relators().is_empty());
            assert_eq!(sub.rank(), rec.index * (r - 1) + 1);
            assert!(words.iter().all(|w| rec.table.contains(w)));
        }
    }
}

#[test]
fn schreier_of_whole_group_and_surface_cover() {
    let p = s3();
    let (sub, _) = reidemeister_schreier(&p, &CosetTable::trivial(2)).unwrap();
    assert_eq!(sub.rank(), 2);
    assert_eq!(sub.relators().len(), 3);
    let surface = pres("gens: a1 b1 a2 b2\nrel: a1^-1 b1^-1 a1 b1 a2^-1 b2^-1 a2 b2");
    for rec in low_index(&surface, 2, true).unwrap().into_iter().filter(|r| r.index == 2) {
        let (sub, _) = reidemeister_schreier(&surface, &rec.table).unwrap();
        assert_eq!(abelianization(&sub).free_rank, 6);
    }
}

#[test]
fn intersections() {
    let p = f(2);
    let normals: Vec<CosetTable> = low_index(&p, 2, true)
        .unwrap()
        .into_iter()
        .filter(|r| r.index == 2)
        .map(|r| r.table)
        .collect();
    let k = intersect_normals(&p, &normals, 256).unwrap();
    assert_eq!(k.index(), 4);
    assert!(k.is_normal());
    assert!(quotient_is_nilpotent(&k));
    let one = intersect_normals(&p, &normals[..1], 256).unwrap();
    assert_eq!(one.rows(), normals[0].rows());
    let x = CosetTable::from_abelian_quotient(&p, &[2], &[vec![1], vec![0]], 16).unwrap();
    let y = CosetTable::from_abelian_quotient(&p, &[2], &[vec![0], vec![1]], 16).unwrap();
    assert_eq!(intersect_normals(&p, &[x, y], 256).unwrap().index(), 4);
}

#[test]
fn nilpotency_of_finite_quotients() {
    let p = s3();
    let t = todd_coxeter(&p, &[], 100).unwrap();
    assert!(t.is_normal());
    assert!(!quotient_is_nilpotent(&t));
    let q8 = pres("gens: i j\nrel: i^4\nrel: i^2 j^-2\nrel: j^-1 i j i");
    let t = todd_coxeter(&q8, &[], 100).unwrap();
    assert_eq!(t.index(), 8);
    assert!(quotient_is_nilpotent(&t));
}

fn arb_relators() -> impl Strategy<Value = Presentation> {
    prop::collection::vec(prop::collection::vec((0..2usize, any::<bool>()), 1..7), 0..3).prop_map(|rels| {
        let words: Vec<Word> = rels
            .into_iter()
            .map(|v| Word::reduced(v.into_iter().map(|(g, i)| Letter::new(g, i))))
            .collect();
        Presentation::new_dropping_trivial(vec!["a".into(), "b".into()], words).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn low_index_tables_are_closed_and_monotone(p in arb_relators()) {
        let four = low_index(&p, 4, false).unwrap();
        let three = low_index(&p, 3, false).unwrap();
        for rec in &four {
            prop_assert!(rec.table.verify_closed(&p).is_ok());
            prop_assert_eq!(rec.normal, rec.table.is_normal());
        }
        let cut: Vec<_> = four.iter().filter(|r| r.index <= 3).cloned().collect();
        prop_assert_eq!(cut, three);
        prop_assert_eq!(low_index_with_jobs(&p, 4, false, 3).unwrap(), four);
    }

    #[test]
    fn intersection_index_divides_product(p in arb_relators()) {
        let normals: Vec<CosetTable> = low_index(&p, 3, true).unwrap().into_iter().map(|r| r.table).collect();
        if normals.len() >= 2 {
            let (a, b) = (&normals[normals.len() - 2], &normals[normals.len() - 1]);
            let k = intersect_normals(&p, &[a.clone(), b.clone()], 256).unwrap();
            prop_assert_eq!((a.index() * b.index()) % k.index(), 0);
            prop_assert_eq!(k.index() % a.index(), 0);
            prop_assert_eq!(k.index() % b.index(), 0);
            prop_assert!(k.refines(a) && k.refines(b));
        }
    }

    #[test]
    fn enumeration_agrees_with_low_index(p in arb_relators()) {
        for rec in low_index(&p, 3, false).unwrap() {
            let t = todd_coxeter(&p, rec.table.subgroup_generators(), 10_000).unwrap();
            prop_assert_eq!(t.index(), rec.index);
            prop_assert!(t.verify_closed(&p).is_ok());
        }
    }
}
