//! Homology from presentations: abelianization, Fox derivatives and the mod-p
//! homology of the presentation 2-complex.
//!
//! The presentation complex has one 0-cell, a 1-cell per generator and a 2-cell per
//! relator. Its cellular chain complex with coefficients in a module `M` is
//! `M^rels -> M^gens -> M`, with boundaries given by the Fox matrix and `g - 1`.
//! With the trivial module `F_p` the Fox matrix augments to the exponent matrix, and
//! `d_1 = 0`. Second homology of the complex equals group homology only when the
//! presentation is aspherical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subgroups::CosetTable;
use crate::words::{Presentation, Word};
use crate::zlinalg::{is_prime, rank_mod_p_dense, smith_normal_form, IntMatrix, SnfResult};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    /// Torsion coefficients, each > 1 and dividing the next.
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    /// Reads the cokernel of a relation matrix.
    pub fn from_snf(snf: &SnfResult) -> Self {
        let torsion = snf
            .torsion()
            .into_iter()
            .map(|d| u64::try_from(&d).expect("torsion coefficient fits in u64"))
            .collect();
        AbelianInvariants {
            free_rank: snf.rank_free,
            torsion,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `H_1(p; Z)`: free rank is generators minus the integer rank of the exponent matrix.
pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let m = IntMatrix::from_rows(&p.exponent_matrix(), p.rank());
    AbelianInvariants::from_snf(&smith_normal_form(&m))
}

/// An element of the integral group ring of the free group, as word -> coefficient.
pub type GroupRingElement = BTreeMap<Word, i64>;

/// Fox derivatives `d r_i / d x_j`: rows are relators, columns generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoxMatrix {
    pub entries: Vec<Vec<GroupRingElement>>,
}

impl FoxMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    /// Applies the augmentation `g -> 1` entrywise.
    pub fn augmented(&self) -> Vec<Vec<i64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(augmentation).collect())
            .collect()
    }
}

pub fn augmentation(e: &GroupRingElement) -> i64 {
    e.values().sum()
}

/// Renders a group-ring element, e.g. `1 + x` or `-x^-1 + x^-1 y^-1`.
pub fn show_ring_element(e: &GroupRingElement, names: &[String]) -> String {
    if e.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (w, &c)) in e.iter().enumerate() {
        let word = w.display(names).to_string();
        let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
        if i == 0 {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if mag != 1 {
            out.push_str(&format!("{mag}"));
            if word != "1" {
                out.push('*');
                out.push_str(&word);
            }
        } else {
            out.push_str(&word);
        }
    }
    out
}

/// `d w / d x_j` by the Leibniz rule `d(uv) = du + u dv`, with
/// `d x_j / d x_j = 1` and `d x_j^-1 / d x_j = -x_j^-1`.
pub fn fox_derivative(w: &Word, j: usize) -> GroupRingElement {
    let mut out = GroupRingElement::new();
    let mut prefix = Word::identity();
    for &l in w.letters() {
        if l.generator() == j {
            let (term, coeff) = if l.is_inverse() {
                (prefix.mul(&Word::reduced([l])), -1)
            } else {
                (prefix.clone(), 1)
            };
            let e = out.entry(term).or_insert(0);
            *e += coeff;
        }
        prefix = prefix.mul(&Word::reduced([l]));
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn fox_derivatives(p: &Presentation) -> FoxMatrix {
    FoxMatrix {
        entries: p
            .relators()
            .iter()
            .map(|r| (0..p.rank()).map(|j| fox_derivative(r, j)).collect())
            .collect(),
    }
}

/// Dimensions over `F_p` of the homology of a 2-complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

impl HomologyDims {
    pub fn euler_characteristic(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }
}

fn rank_mod(rows: &[Vec<i64>], prime: u64) -> usize {
    let p = prime as i64;
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(p) as u64).collect())
        .collect();
    rank_mod_p_dense(&mut a, prime)
}

fn check_prime(prime: u64) -> Result<()> {
    if is_prime(prime) {
        Ok(())
    } else {
        Err(Error::NotPrime(prime))
    }
}

/// Homology of the presentation complex with trivial `F_p` coefficients.
pub fn complex_homology_mod_p(p: &Presentation, prime: u64) -> Result<HomologyDims> {
    check_prime(prime)?;
    let d2 = fox_derivatives(p).augmented();
    let r2 = rank_mod(&d2, prime);
    Ok(HomologyDims {
        h0: 1,
        h1: p.rank() - r2,
        h2: p.relators().len() - r2,
    })
}

/// Homology of the presentation complex with coefficients in the permutation module
/// `F_p[cosets]` of a closed coset table, i.e. of the finite cover it describes.
pub fn cover_homology_mod_p(p: &Presentation, t: &CosetTable, prime: u64) -> Result<HomologyDims> {
    check_prime(prime)?;
    t.verify_closed(p)?;
    let n = t.index();
    let k = p.rank();
    // Cells of the cover: cosets x cells. A word acts on a coset by the table.
    let walk = |coset: usize, w: &Word| -> usize {
        w.letters().iter().fold(coset, |c, &l| t.act(c, l))
    };
    // d_1: edge (c, x) runs from c to c.x.
    let mut d1 = vec![vec![0i64; n]; n * k];
    for c in 0..n {
        for x in 0..k {
            let row = &mut d1[c * k + x];
            let target = t.act(c, crate::words::Letter::gen(x));
            row[target] += 1;
            row[c] -= 1;
        }
    }
    // d_2: face (c, r) has boundary sum over Fox terms u of r: coeff * edge (c.u, x).
    let fox = fox_derivatives(p);
    let mut d2 = vec![vec![0i64; n * k]; n * p.relators().len()];
    for c in 0..n {
        for (ri, row) in fox.entries.iter().enumerate() {
            let out = &mut d2[c * p.relators().len() + ri];
            for (x, e) in row.iter().enumerate() {
                for (u, &coeff) in e {
                    out[walk(c, u) * k + x] += coeff;
                }
            }
        }
    }
    let r1 = rank_mod(&d1, prime);
    let r2 = rank_mod(&d2, prime);
    Ok(HomologyDims {
        h0: n - r1,
        h1: n * k - r1 - r2,
        h2: n * p.relators().len() - r2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zlinalg::rank_mod_p;
    use proptest::prelude::*;

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    fn higman() -> Presentation {
        pres("gens: a b c d\nrel: b a b^-1 a^-2\nrel: c b c^-1 b^-2\nrel: d c d^-1 c^-2\nrel: a d a^-1 d^-2")
    }

    fn link() -> Presentation {
        pres("gens: u v z l\nrel: u^-1 l^-1 u l\nrel: u z u^-1 z^-1 v^-1 z^-1 v\nrel: l^-1 v^-1 u z u^-1 v z")
    }

    #[test]
    fn abelianization_examples() {
        assert!(abelianization(&higman()).is_trivial());
        let a = abelianization(&link());
        assert_eq!((a.free_rank, a.torsion.clone()), (2, vec![]));
        let a = abelianization(&pres("gens: a b\nrel: a b a b^-1"));
        assert_eq!((a.free_rank, a.torsion), (1, vec![2]));
        assert_eq!(abelianization(&Presentation::free(&["x", "y"])).free_rank, 2);
    }

    #[test]
    fn fox_of_square_and_power() {
        let p = pres("gens: x\nrel: x^2");
        let d = fox_derivative(&p.relators()[0], 0);
        assert_eq!(show_ring_element(&d, p.names()), "1 + x");
        for q in [2i64, 3, 5, 7] {
            let w = Word::generator(0).pow(q);
            let d = fox_derivative(&w, 0);
            // Oracle: the expansion 1 + a + ... + a^{q-1}.
            let expected: GroupRingElement = (0..q).map(|i| (Word::generator(0).pow(i), 1)).collect();
            assert_eq!(d, expected);
            assert_eq!(augmentation(&d), q);
        }
    }

    #[test]
    fn fox_of_commutator() {
        let p = Presentation::free(&["x", "y"]);
        let r = p.parse_word("x^-1 y^-1 x y").unwrap();
        let dx = fox_derivative(&r, 0);
        assert_eq!(show_ring_element(&dx, p.names()), "-x^-1 + x^-1 y^-1");
        assert_eq!(augmentation(&dx), 0);
    }

    #[test]
    fn mod_p_homology_examples() {
        for p in [2, 3, 5] {
            assert_eq!(complex_homology_mod_p(&link(), p).unwrap().h2, 1);
        }
        assert_eq!(complex_homology_mod_p(&Presentation::free(&["x", "y"]), 3).unwrap().h2, 0);
        for q in [2u64, 3, 5] {
            let p = pres(&format!("gens: a\nrel: a^{q}"));
            let h = complex_homology_mod_p(&p, q).unwrap();
            assert_eq!((h.h0, h.h1, h.h2), (1, 1, 1));
        }
        assert!(matches!(complex_homology_mod_p(&link(), 4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn cover_homology_of_trivial_cover_matches() {
        let p = link();
        let t = CosetTable::trivial(p.rank());
        for q in [2, 3] {
            assert_eq!(cover_homology_mod_p(&p, &t, q).unwrap(), complex_homology_mod_p(&p, q).unwrap());
        }
    }

    #[test]
    fn cover_homology_of_double_cover_of_torus() {
        // Index-2 subgroup of Z^2 is Z^2 again: the cover is a torus.
        let p = pres("gens: a b\nrel: a^-1 b^-1 a b");
        let t = crate::subgroups::todd_coxeter(&p, &[p.parse_word("a^2").unwrap(), p.parse_word("b").unwrap()], 1000).unwrap();
        assert_eq!(t.index(), 2);
        let h = cover_homology_mod_p(&p, &t, 3).unwrap();
        assert_eq!((h.h0, h.h1, h.h2), (1, 2, 1));
    }

    fn arb_word(rank: usize, len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..rank, any::<bool>()), 0..=len).prop_map(|v| {
            Word::reduced(v.into_iter().map(|(g, i)| crate::words::Letter::new(g, i)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn fundamental_identity(w in arb_word(3, 30)) {
            let sums = w.exponent_sums(3);
            for j in 0..3 {
                prop_assert_eq!(augmentation(&fox_derivative(&w, j)), sums[j]);
            }
        }

        #[test]
        fn euler_characteristic_and_universal_coefficients(
            rels in prop::collection::vec(arb_word(3, 10), 0..4)
        ) {
            let rels: Vec<Word> = rels.into_iter().filter(|w| !w.is_empty()).collect();
            let p = Presentation::new(vec!["a".into(), "b".into(), "c".into()], rels).unwrap();
            let ab = abelianization(&p);
            let m = IntMatrix::from_rows(&p.exponent_matrix(), 3);
            for q in [2u64, 3, 5, 7] {
                let h = complex_homology_mod_p(&p, q).unwrap();
                prop_assert_eq!(h.euler_characteristic(), 1 - 3 + p.relators().len() as i64);
                let divisible = ab.torsion.iter().filter(|&&t| t % q == 0).count();
                prop_assert_eq!(ab.free_rank, h.h1 - divisible);
                prop_assert_eq!(rank_mod_p(&m, q).unwrap(), 3 - h.h1);
            }
        }
    }
}
