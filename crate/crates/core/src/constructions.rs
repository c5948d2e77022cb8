//! Named groups and end-to-end checks: Higman's group, the Baumslag-Gersten style
//! acyclic groups, surface groups, the two-component link group `A2`, direct and
//! fibre products, and the genus-check, parafree and witness reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homcalc::{abelianization, AbelianInvariants};
use crate::nilquot::{compare_along, quotients_upto, Caps, InducedMapReport, PcQuotient, Verdict};
use crate::resources::join;
use crate::subgroups::low_index;
use crate::words::{check_hom, Certification, CertifiedHom, GroupHom, Letter, Presentation, Word};

fn pres(text: &str) -> Presentation {
    Presentation::parse(text).expect("builder presentation parses")
}

/// `<a, b, c, d | b a b^-1 = a^2, c b c^-1 = b^2, d c d^-1 = c^2, a d a^-1 = d^2>`.
pub fn higman_group() -> Presentation {
    pres(
        "gens: a b c d\n\
         rel: b a b^-1 a^-2\n\
         rel: c b c^-1 b^-2\n\
         rel: d c d^-1 c^-2\n\
         rel: a d a^-1 d^-2",
    )
}

/// `<a1, a2, b1, b2 | a1^-1 a2^p a1 a2^{-p-1}, b1^-1 b2^p b1 b2^{-p-1},
/// a1^-1 [b2, b1^-1 b2 b1], b1^-1 [a2, a1^-1 a2 a1]>`, finitely presented, acyclic
/// and without finite quotients.
pub fn acyclic_group(p: i64) -> Result<Presentation> {
    if p < 3 {
        return Err(Error::InvalidArgument(format!("acyclic_group needs p >= 3, got {p}")));
    }
    let names = ["a1", "a2", "b1", "b2"].map(String::from).to_vec();
    let [a1, a2, b1, b2] = [0, 1, 2, 3].map(Word::generator);
    let baumslag = |s: &Word, t: &Word| s.inverse().mul(&t.pow(p)).mul(s).mul(&t.pow(-p - 1));
    let twisted = |lead: &Word, s: &Word, t: &Word| {
        lead.inverse().mul(&t.commutator(&s.inverse().mul(t).mul(s)))
    };
    let rels = vec![
        baumslag(&a1, &a2),
        baumslag(&b1, &b2),
        twisted(&a1, &b1, &b2),
        twisted(&b1, &a1, &a2),
    ];
    Presentation::new(names, rels)
}

/// Closed orientable surface of genus `g`: `<a1, b1, ..., ag, bg | [a1, b1]...[ag, bg]>`.
pub fn surface_group(g: usize) -> Result<Presentation> {
    if g < 1 {
        return Err(Error::InvalidArgument("surface genus must be at least 1".into()));
    }
    let names: Vec<String> = if g == 1 {
        vec!["a".into(), "b".into()]
    } else {
        (1..=g).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect()
    };
    let mut r = Word::identity();
    for i in 0..g {
        r = r.mul(&Word::generator(2 * i).commutator(&Word::generator(2 * i + 1)));
    }
    Presentation::new(names, vec![r])
}

/// The link group `<u, v, z, l | [u, l], u z u^-1 = v^-1 z v z, l = v^-1 u z u^-1 v z>`
/// with the exact retraction `z -> 1, l -> 1` onto the free group on `u, v`.
pub fn link_group_a2() -> (Presentation, CertifiedHom) {
    let p = pres(
        "gens: u v z l\n\
         rel: u^-1 l^-1 u l\n\
         rel: u z u^-1 z^-1 v^-1 z^-1 v\n\
         rel: l^-1 v^-1 u z u^-1 v z",
    );
    let f2 = Presentation::free(&["u", "v"]);
    let h = GroupHom::from_spec(&p, &f2, "z=1,l=1").expect("retraction spec");
    let c = check_hom(&h, 1, &Caps::default()).expect("retraction is a homomorphism");
    (p, c)
}

/// `A x B` on the generators of `A` followed by those of `B` (renamed with a trailing
/// `'` on a clash), both relator banks and all commutators between the banks.
pub fn direct_product(a: &Presentation, b: &Presentation) -> Result<Presentation> {
    let mut names = a.names().to_vec();
    for n in b.names() {
        let mut m = n.clone();
        while names.contains(&m) {
            m.push('\'');
        }
        names.push(m);
    }
    let shift = a.rank();
    let shifted: Vec<Word> = (0..b.rank()).map(|i| Word::generator(i + shift)).collect();
    let mut rels: Vec<Word> = a.relators().to_vec();
    rels.extend(b.relators().iter().map(|r| r.substitute(&shifted)));
    for i in 0..a.rank() {
        for j in 0..b.rank() {
            rels.push(Word::generator(i).commutator(&shifted[j]));
        }
    }
    Presentation::new(names, rels)
}

/// Generators of `P = {(x, y) : q(x) = q(y)}` inside `F_r x F_r`: the diagonal
/// `(x_i, x_i)` and `(r_j, 1)` for each relator `r_j` of `q`. Returns the product
/// presentation and the words.
pub fn fibre_product_gens(r: usize, q: &Presentation) -> Result<(Presentation, Vec<Word>)> {
    if q.rank() != r {
        return Err(Error::InvalidArgument(format!(
            "quotient has {} generators, expected {r}",
            q.rank()
        )));
    }
    let f = Presentation::new(q.names().to_vec(), vec![])?;
    let product = direct_product(&f, &f)?;
    let mut gens: Vec<Word> = (0..r)
        .map(|i| Word::generator(i).mul(&Word::generator(i + r)))
        .collect();
    gens.extend(q.relators().iter().cloned());
    Ok((product, gens))
}

/// A finite presentation `P~` mapping onto the fibre product `P`, with its map into
/// `F_r x F_r`.
///
/// `P~` has generators `d_i` (images `(x_i, x_i)`) and `t_j` (images `(r_j, 1)`).
/// With `s_j = r_j(d) t_j^-1`, whose image is `(1, r_j)`, the relators are
/// `[t_j, w s_k w^-1]` for conjugators `w` that are words of length at most `depth`
/// in the `d_i`. They hold in `F_r x F_r` because the two factors commute, so
/// `P~ -> F_r x F_r` is a homomorphism with image `P`. Consequently, if
/// `P~ / P~_{c+1} -> (F_r x F_r) / (F_r x F_r)_{c+1}` is an isomorphism, the
/// surjection `P~ -> P` forces `P / P_{c+1} -> (F_r x F_r)/(F_r x F_r)_{c+1}` to be
/// one as well.
#[derive(Clone, Debug)]
pub struct FibreProduct {
    pub quotient: Presentation,
    pub product: Presentation,
    pub generators: Vec<Word>,
    pub partial: Presentation,
    pub inclusion: CertifiedHom,
    pub depth: usize,
}

fn words_up_to(rank: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..rank {
                for inv in [false, true] {
                    let x = w.mul(&Word::reduced([Letter::new(g, inv)]));
                    if x.len() == w.len() + 1 {
                        next.push(x);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Exact check that `h` maps every relator of its source to the identity of a direct
/// product of two free groups given by [`direct_product`]: both projections must
/// reduce each relator image to the empty word.
fn certify_into_product_of_free_groups(h: GroupHom, r: usize) -> Result<CertifiedHom> {
    let left: Vec<Word> = (0..2 * r)
        .map(|i| if i < r { Word::generator(i) } else { Word::identity() })
        .collect();
    let right: Vec<Word> = (0..2 * r)
        .map(|i| if i < r { Word::identity() } else { Word::generator(i - r) })
        .collect();
    for (i, rel) in h.source.relators().iter().enumerate() {
        let img = h.image(rel);
        if !img.substitute(&left).is_empty() || !img.substitute(&right).is_empty() {
            return Err(Error::NotAHomomorphism {
                index: i,
                relator: h.source.show(rel),
            });
        }
    }
    Ok(CertifiedHom {
        hom: h,
        certification: Certification::Exact,
    })
}

pub fn fibre_product(q: &Presentation, depth: usize) -> Result<FibreProduct> {
    let r = q.rank();
    let m = q.relators().len();
    let (product, generators) = fibre_product_gens(r, q)?;
    let mut names: Vec<String> = (1..=r).map(|i| format!("d{i}")).collect();
    names.extend((1..=m).map(|j| format!("t{j}")));
    let d: Vec<Word> = (0..r).map(Word::generator).collect();
    let t: Vec<Word> = (0..m).map(|j| Word::generator(r + j)).collect();
    let s: Vec<Word> = (0..m)
        .map(|k| q.relators()[k].substitute(&d).mul(&t[k].inverse()))
        .collect();
    let mut rels = Vec::new();
    for w in words_up_to(r, depth) {
        for tj in &t {
            for sk in &s {
                rels.push(tj.commutator(&w.mul(sk).mul(&w.inverse())));
            }
        }
    }
    let partial = Presentation::new_dropping_trivial(names, rels)?;
    let hom = GroupHom::new(partial.clone(), product.clone(), generators.clone())?;
    let inclusion = certify_into_product_of_free_groups(hom, r)?;
    Ok(FibreProduct {
        quotient: q.clone(),
        product,
        generators,
        partial,
        inclusion,
        depth,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ClassOutcome {
    Computed(InducedMapReport),
    Capped { class: u32, error: String },
}

impl ClassOutcome {
    pub fn is_iso(&self) -> bool {
        matches!(self, ClassOutcome::Computed(r) if r.verdict == Verdict::Iso)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusReport {
    pub per_class: Vec<ClassOutcome>,
    /// Largest `c` such that classes `1..=c` are all isomorphisms.
    pub iso_up_to_class: u32,
    pub c_max: u32,
}

impl GenusReport {
    pub fn all_iso(&self) -> bool {
        self.iso_up_to_class == self.c_max
    }

    pub fn capped(&self) -> bool {
        self.per_class.iter().any(|o| matches!(o, ClassOutcome::Capped { .. }))
    }
}

fn quotient_series(p: &Presentation, c: u32, caps: &Caps) -> (Vec<PcQuotient>, Option<Error>) {
    let mut out = Vec::new();
    let err = quotients_upto(p, c, caps, |q| out.push(q)).err();
    (out, err)
}

/// Induced maps on `source / source_{c+1} -> target / target_{c+1}` for
/// `c = 1..=c_max`. Source and target quotients are computed once each, concurrently
/// when `jobs > 1`; a cap hit ends the report with a capped entry.
pub fn genus_check(h: &CertifiedHom, c_max: u32, caps: &Caps, jobs: usize) -> Result<GenusReport> {
    if c_max == 0 {
        return Err(Error::InvalidArgument("class bound must be at least 1".into()));
    }
    let reach = match h.certification {
        Certification::Exact => c_max,
        Certification::UpToClass(k) => k.min(c_max),
    };
    let ((sq, serr), (tq, terr)) = join(
        jobs,
        || quotient_series(&h.hom.source, reach, caps),
        || quotient_series(&h.hom.target, reach, caps),
    );
    let mut per_class = Vec::new();
    for c in 1..=c_max {
        let i = c as usize - 1;
        if c > reach {
            per_class.push(ClassOutcome::Capped {
                class: c,
                error: format!("homomorphism certified only to class {reach}"),
            });
            break;
        }
        match (sq.get(i), tq.get(i)) {
            (Some(s), Some(t)) => per_class.push(ClassOutcome::Computed(compare_along(h, s, t))),
            _ => {
                let e = serr.clone().or_else(|| terr.clone()).expect("missing class has an error");
                per_class.push(ClassOutcome::Capped {
                    class: c,
                    error: e.to_string(),
                });
                break;
            }
        }
    }
    let iso_up_to_class = per_class.iter().take_while(|o| o.is_iso()).count() as u32;
    Ok(GenusReport {
        per_class,
        iso_up_to_class,
        c_max,
    })
}

/// What is known about a group claimed to look free: only its lower central
/// quotients up to `c_max`. Residual nilpotence is never established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParafreeCertificate {
    pub rank: usize,
    pub h1: AbelianInvariants,
    pub h1_check: bool,
    pub class_checks: GenusReport,
    pub residual_nilpotence: String,
}

/// `h` must map onto a free group `F_r`.
pub fn parafree_certificate(h: &CertifiedHom, c_max: u32, caps: &Caps, jobs: usize) -> Result<ParafreeCertificate> {
    if !h.hom.target.is_free() {
        return Err(Error::InvalidArgument("parafree certificate needs a free target".into()));
    }
    let rank = h.hom.target.rank();
    let h1 = abelianization(&h.hom.source);
    Ok(ParafreeCertificate {
        rank,
        h1_check: h1.free_rank == rank && h1.torsion.is_empty(),
        h1,
        class_checks: genus_check(h, c_max, caps, jobs)?,
        residual_nilpotence: "unknown".into(),
    })
}

/// Whether words generate the free group of rank `rank`, by Stallings folding of
/// the bouquet of loops they spell.
pub fn generates_free_group(rank: usize, words: &[Word]) -> bool {
    // Graph on vertices with labelled edges; fold until deterministic.
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut vertices = 1usize;
    for w in words {
        let letters = w.letters();
        if letters.is_empty() {
            continue;
        }
        let mut cur = 0;
        for (k, &l) in letters.iter().enumerate() {
            let next = if k + 1 == letters.len() {
                0
            } else {
                vertices += 1;
                vertices - 1
            };
            if l.is_inverse() {
                edges.push((next, l.generator(), cur));
            } else {
                edges.push((cur, l.generator(), next));
            }
            cur = next;
        }
    }
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            let n = p[x];
            p[x] = r;
            x = n;
        }
        r
    }
    loop {
        let mut out: std::collections::HashMap<(usize, usize), usize> = Default::default();
        let mut inc: std::collections::HashMap<(usize, usize), usize> = Default::default();
        let mut merged = false;
        for &(a, g, b) in &edges {
            let (a, b) = (find(&mut parent, a), find(&mut parent, b));
            if let Some(&b2) = out.get(&(a, g)) {
                let b2 = find(&mut parent, b2);
                if b2 != b {
                    parent[b.max(b2)] = b.min(b2);
                    merged = true;
                }
            } else {
                out.insert((a, g), b);
            }
            if let Some(&a2) = inc.get(&(b, g)) {
                let a2 = find(&mut parent, a2);
                if a2 != a {
                    parent[a.max(a2)] = a.min(a2);
                    merged = true;
                }
            } else {
                inc.insert((b, g), a);
            }
        }
        if !merged {
            break;
        }
    }
    // Folded graph: generates F iff it is a single vertex carrying every letter.
    let root = find(&mut parent, 0);
    let mut loops = vec![false; rank];
    for &(a, g, b) in &edges {
        let (a, b) = (find(&mut parent, a), find(&mut parent, b));
        if a != root || b != root {
            return false;
        }
        loops[g] = true;
    }
    loops.iter().all(|&x| x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub retraction_onto: bool,
    pub h1_isomorphism: bool,
    pub candidate: String,
    pub candidate_in_kernel: bool,
    /// Whether the candidate collects to zero in the class-`c` quotient, `c = 1..`.
    pub trivial_in_class: Vec<bool>,
    /// Index of a subgroup whose coset action moves the candidate, showing it is
    /// not the identity; `None` when the search found none.
    pub nontrivial_in_finite_quotient: Option<usize>,
    pub confirmed: bool,
    pub capped: Option<String>,
}

/// Checks the hypotheses behind "a group retracting onto a free group of the same
/// first homology is not residually nilpotent unless the retraction is injective":
/// the retraction is onto and an isomorphism on `H_1`, the candidate lies in its
/// kernel, and the candidate dies in every computed lower central quotient.
pub fn non_residual_nilpotence_witness(
    retraction: &CertifiedHom,
    candidate: &Word,
    c_max: u32,
    search_index: usize,
    caps: &Caps,
) -> Result<WitnessReport> {
    let h = &retraction.hom;
    if !h.target.is_free() {
        return Err(Error::InvalidArgument("retraction target must be free".into()));
    }
    h.source.free_group().check(candidate)?;
    let shown = h.source.show(candidate);
    if !h.image(candidate).is_empty() {
        return Err(Error::NotInKernel(shown));
    }
    let r = h.target.rank();
    let retraction_onto = generates_free_group(r, &h.images);
    let h1 = abelianization(&h.source);
    let h1_isomorphism = retraction_onto && h1.free_rank == r && h1.torsion.is_empty();
    let mut trivial_in_class = Vec::new();
    let capped = quotients_upto(&h.source, c_max, caps, |q| {
        trivial_in_class.push(q.collect(candidate).iter().all(|&e| e == 0));
    })
    .err()
    .map(|e| e.to_string());
    let mut nontrivial_in_finite_quotient = None;
    for n in 2..=search_index {
        let found = low_index(&h.source, n, false)?
            .into_iter()
            .filter(|rec| rec.index == n)
            .any(|rec| (0..n).any(|c| rec.table.walk(c, candidate) != c));
        if found {
            nontrivial_in_finite_quotient = Some(n);
            break;
        }
    }
    let confirmed = retraction_onto
        && h1_isomorphism
        && capped.is_none()
        && trivial_in_class.iter().all(|&t| t);
    Ok(WitnessReport {
        retraction_onto,
        h1_isomorphism,
        candidate: shown,
        candidate_in_kernel: true,
        trivial_in_class,
        nontrivial_in_finite_quotient,
        confirmed,
        capped,
    })
}

#[cfg(test)]
mod tests;
