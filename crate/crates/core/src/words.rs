//! Free-group words, finite presentations and homomorphisms given on generators.
//!
//! Lower central series indexing throughout the crate: `G_1 = G`, `G_{k+1} = [G_k, G]`.
//! "Class-c quotient" means `G / G_{c+1}`; the abelianization is the class-1 quotient.
//! Commutators are `[u, v] = u^-1 v^-1 u v`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nilquot::{self, Caps};

/// A generator or its inverse, stored as `±(index + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        let v = generator as i32 + 1;
        Letter(if inverse { -v } else { v })
    }

    pub fn gen(generator: usize) -> Letter {
        Letter::new(generator, false)
    }

    pub fn inv(generator: usize) -> Letter {
        Letter::new(generator, true)
    }

    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn sign(self) -> i64 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

/// Free reduction with a stack; the result is the unique reduced form.
fn reduce_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    /// Reduces an arbitrary letter sequence. No alphabet check; see [`FreeGroup::reduce`].
    pub fn reduced<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        Word(reduce_letters(letters))
    }

    pub fn generator(g: usize) -> Word {
        Word(vec![Letter::gen(g)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator()).max()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::reduced(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Word) -> Word {
        let a = self.inverse();
        let b = other.inverse();
        Word::reduced(
            a.0.iter()
                .chain(b.0.iter())
                .chain(self.0.iter())
                .chain(other.0.iter())
                .copied(),
        )
    }

    /// `other^-1 self other`.
    pub fn conjugate_by(&self, other: &Word) -> Word {
        other.inverse().mul(self).mul(other)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..k.unsigned_abs() {
            out.extend_from_slice(&base.0);
        }
        Word::reduced(out)
    }

    /// Removes matching letters from both ends.
    pub fn cyclically_reduced(&self) -> Word {
        let v = &self.0;
        let (mut i, mut j) = (0, v.len());
        while j > i + 1 && v[i] == v[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word(v[i..j].to_vec())
    }

    /// Exponent sum of each generator, for an alphabet of the given rank.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut out = vec![0; rank];
        for l in &self.0 {
            out[l.generator()] += l.sign();
        }
        out
    }

    /// Replaces every generator by a word.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            let img = &images[l.generator()];
            if l.is_inverse() {
                out.extend(img.0.iter().rev().map(|x| x.inverse()));
            } else {
                out.extend_from_slice(&img.0);
            }
        }
        Word::reduced(out)
    }

    pub fn occurrences(&self, generator: usize) -> usize {
        self.0.iter().filter(|l| l.generator() == generator).count()
    }

    /// Renders with syllable compression, e.g. `b a b^-1 a^-2`. The empty word renders as `1`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = &self.word.0;
        if letters.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * l.sign();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let name = self
                .names
                .get(l.generator())
                .map(String::as_str)
                .unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// The free group on `rank` generators; provides alphabet-checked word arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeGroup {
    pub rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        FreeGroup { rank }
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.rank => Err(Error::Alphabet {
                index: g,
                rank: self.rank,
            }),
            _ => Ok(()),
        }
    }

    pub fn reduce(&self, letters: &[Letter]) -> Result<Word> {
        if let Some(l) = letters.iter().find(|l| l.generator() >= self.rank) {
            return Err(Error::Alphabet {
                index: l.generator(),
                rank: self.rank,
            });
        }
        Ok(Word::reduced(letters.iter().copied()))
    }

    pub fn multiply(&self, a: &Word, b: &Word) -> Result<Word> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.mul(b))
    }

    pub fn invert(&self, a: &Word) -> Result<Word> {
        self.check(a)?;
        Ok(a.inverse())
    }

    pub fn commutator(&self, a: &Word, b: &Word) -> Result<Word> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.commutator(b))
    }
}

/// A finite presentation `<names | relators>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '.'))
}

impl Presentation {
    /// Relators are freely reduced; an empty relator is rejected.
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(Error::InvalidArgument(format!("bad generator name `{n}`")));
            }
            if seen.insert(n.as_str(), i).is_some() {
                return Err(Error::DuplicateGenerator(n.clone()));
            }
        }
        let free = FreeGroup::new(names.len());
        let mut rels = Vec::with_capacity(relators.len());
        for (i, r) in relators.into_iter().enumerate() {
            let r = free.reduce(r.letters())?;
            if r.is_empty() {
                return Err(Error::EmptyRelator { line: i + 1 });
            }
            rels.push(r);
        }
        Ok(Presentation {
            names,
            relators: rels,
        })
    }

    /// Like [`Presentation::new`] but silently drops relators that reduce to the identity.
    pub fn new_dropping_trivial(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let rels = relators
            .into_iter()
            .map(|r| Word::reduced(r.0))
            .filter(|r| !r.is_empty())
            .collect();
        Presentation::new(names, rels)
    }

    pub fn free(names: &[&str]) -> Self {
        Presentation::new(names.iter().map(|s| s.to_string()).collect(), vec![])
            .expect("valid free presentation")
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn free_group(&self) -> FreeGroup {
        FreeGroup::new(self.rank())
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn show(&self, w: &Word) -> String {
        w.display(&self.names).to_string()
    }

    /// Parses whitespace-separated letters `name`, `name^k`; the single token `1` is the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks == ["1"] {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for tok in toks {
            let (name, e) = split_power(tok).map_err(|m| Error::Syntax {
                line: 1,
                column: 1,
                message: m,
            })?;
            let g = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            push_power(&mut letters, g, e);
        }
        Ok(Word::reduced(letters))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            };
            let trimmed = line.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = line.len() - trimmed.len();
            let syntax = |column: usize, message: String| Error::Syntax {
                line: line_no,
                column,
                message,
            };
            if let Some(rest) = trimmed.strip_prefix("gens:") {
                if names.is_some() {
                    return Err(syntax(indent + 1, "second `gens:` line".into()));
                }
                let mut list = Vec::new();
                for (col, tok) in tokens(rest, indent + 5) {
                    if !valid_name(tok) {
                        return Err(syntax(col, format!("bad generator name `{tok}`")));
                    }
                    if list.iter().any(|n: &String| n == tok) {
                        return Err(Error::DuplicateGenerator(tok.to_string()));
                    }
                    list.push(tok.to_string());
                }
                names = Some(list);
            } else if let Some(rest) = trimmed.strip_prefix("rel:") {
                let Some(names) = names.as_ref() else {
                    return Err(syntax(indent + 1, "`rel:` before `gens:`".into()));
                };
                let mut letters = Vec::new();
                for (col, tok) in tokens(rest, indent + 4) {
                    let (name, e) = split_power(tok).map_err(|m| syntax(col, m))?;
                    let g = names
                        .iter()
                        .position(|n| n == name)
                        .ok_or_else(|| syntax(col, format!("unknown generator `{name}`")))?;
                    push_power(&mut letters, g, e);
                }
                let w = Word::reduced(letters);
                if w.is_empty() {
                    return Err(Error::EmptyRelator { line: line_no });
                }
                relators.push(w);
            } else {
                return Err(syntax(indent + 1, "expected `gens:` or `rel:`".into()));
            }
        }
        let names = names.ok_or(Error::Syntax {
            line: 1,
            column: 1,
            message: "missing `gens:` line".into(),
        })?;
        Presentation::new(names, relators)
    }

    /// Canonical file text; `parse(serialize(p)) == p`.
    pub fn serialize(&self) -> String {
        let mut s = format!("gens: {}\n", self.names.join(" "));
        for r in &self.relators {
            s.push_str(&format!("rel: {}\n", r.display(&self.names)));
        }
        s
    }

    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| r.exponent_sums(self.rank()))
            .collect()
    }

    /// Eliminates generators occurring exactly once in some relator, repeatedly.
    /// Returns the simplified presentation and, for each original generator, its
    /// expression in the new generators.
    pub fn tietze_simplify(&self) -> (Presentation, Vec<Word>) {
        let n = self.rank();
        // expressions in terms of the original alphabet; `alive` marks survivors
        let mut expr: Vec<Word> = (0..n).map(Word::generator).collect();
        let mut alive = vec![true; n];
        let mut rels: Vec<Word> = self.relators.clone();
        loop {
            let mut found = None;
            'outer: for (ri, r) in rels.iter().enumerate() {
                // later generators first: they are usually the defined ones
                for g in (0..n).rev().filter(|&g| alive[g]) {
                    if r.occurrences(g) == 1 {
                        found = Some((ri, g));
                        break 'outer;
                    }
                }
            }
            let Some((ri, g)) = found else { break };
            let r = rels.remove(ri);
            let pos = r.0.iter().position(|l| l.generator() == g).unwrap();
            let u = Word(r.0[..pos].to_vec());
            let v = Word(r.0[pos + 1..].to_vec());
            let value = if r.0[pos].is_inverse() {
                v.mul(&u)
            } else {
                u.inverse().mul(&v.inverse())
            };
            let mut subst: Vec<Word> = (0..n).map(Word::generator).collect();
            subst[g] = value;
            alive[g] = false;
            for e in expr.iter_mut() {
                *e = e.substitute(&subst);
            }
            rels = rels
                .iter()
                .map(|w| w.substitute(&subst))
                .filter(|w| !w.is_empty())
                .collect();
        }
        let mut renumber = vec![usize::MAX; n];
        let mut names = Vec::new();
        for g in 0..n {
            if alive[g] {
                renumber[g] = names.len();
                names.push(self.names[g].clone());
            }
        }
        let rename = |w: &Word| {
            Word(
                w.0.iter()
                    .map(|l| Letter::new(renumber[l.generator()], l.is_inverse()))
                    .collect(),
            )
        };
        let mut new_rels: Vec<Word> = Vec::new();
        for r in &rels {
            let r = rename(r);
            if !new_rels.contains(&r) {
                new_rels.push(r);
            }
        }
        let p = Presentation {
            names,
            relators: new_rels,
        };
        (p, expr.iter().map(rename).collect())
    }
}

fn tokens(s: &str, offset: usize) -> impl Iterator<Item = (usize, &str)> {
    let base = s.as_ptr() as usize;
    s.split_whitespace()
        .map(move |t| (t.as_ptr() as usize - base + offset + 1, t))
}

fn split_power(tok: &str) -> std::result::Result<(&str, i64), String> {
    match tok.split_once('^') {
        None => Ok((tok, 1)),
        Some((name, e)) => {
            let e: i64 = e.parse().map_err(|_| format!("bad exponent in `{tok}`"))?;
            if e == 0 {
                return Err(format!("zero exponent in `{tok}`"));
            }
            Ok((name, e))
        }
    }
}

fn push_power(out: &mut Vec<Letter>, g: usize, e: i64) {
    let l = Letter::new(g, e < 0);
    for _ in 0..e.unsigned_abs() {
        out.push(l);
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// A homomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: Presentation,
    pub target: Presentation,
    pub images: Vec<Word>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certification {
    /// Relator images reduce to the identity in a free target.
    Exact,
    /// Relator images are trivial in `target / target_{c+1}`.
    UpToClass(u32),
}

impl Certification {
    pub fn covers_class(self, c: u32) -> bool {
        match self {
            Certification::Exact => true,
            Certification::UpToClass(k) => k >= c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedHom {
    pub hom: GroupHom,
    pub certification: Certification,
}

impl GroupHom {
    pub fn new(source: Presentation, target: Presentation, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::InvalidArgument(format!(
                "{} images for {} source generators",
                images.len(),
                source.rank()
            )));
        }
        let free = target.free_group();
        for w in &images {
            free.check(w)?;
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(p: &Presentation) -> Self {
        GroupHom {
            source: p.clone(),
            target: p.clone(),
            images: (0..p.rank()).map(Word::generator).collect(),
        }
    }

    /// Parses `gen=word,gen=word`. Unassigned source generators map to the
    /// target generator of the same name.
    pub fn from_spec(source: &Presentation, target: &Presentation, spec: &str) -> Result<Self> {
        let assigned = parse_assignments(source, spec)?;
        let mut images = Vec::with_capacity(source.rank());
        for (g, name) in source.names().iter().enumerate() {
            let img = match assigned.iter().find(|(h, _)| *h == g) {
                Some((_, text)) => target.parse_word(text)?,
                None => Word::generator(target.index_of(name).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "generator `{name}` unassigned and absent from the target"
                    ))
                })?),
            };
            images.push(img);
        }
        GroupHom::new(source.clone(), target.clone(), images)
    }

    /// The quotient map obtained by imposing `gen=word` (words in the source
    /// alphabet) and Tietze-simplifying the result.
    pub fn quotient_by_spec(source: &Presentation, spec: &str) -> Result<Self> {
        let assigned = parse_assignments(source, spec)?;
        let mut rels = source.relators().to_vec();
        for (g, text) in &assigned {
            let w = source.parse_word(text)?;
            rels.push(Word::generator(*g).mul(&w.inverse()));
        }
        let q = Presentation::new_dropping_trivial(source.names().to_vec(), rels)?;
        let (target, images) = q.tietze_simplify();
        GroupHom::new(source.clone(), target, images)
    }

    pub fn image(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    pub fn compose(&self, after: &GroupHom) -> Result<GroupHom> {
        if self.target != after.source {
            return Err(Error::InvalidArgument("composition of incompatible maps".into()));
        }
        let images = self.images.iter().map(|w| after.image(w)).collect();
        GroupHom::new(self.source.clone(), after.target.clone(), images)
    }
}

fn parse_assignments(source: &Presentation, spec: &str) -> Result<Vec<(usize, String)>> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (lhs, rhs) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected gen=word, got `{part}`")))?;
        let lhs = lhs.trim();
        let g = source
            .index_of(lhs)
            .ok_or_else(|| Error::UnknownGenerator(lhs.to_string()))?;
        if out.iter().any(|(h, _)| *h == g) {
            return Err(Error::InvalidArgument(format!("`{lhs}` assigned twice")));
        }
        out.push((g, rhs.trim().to_string()));
    }
    Ok(out)
}

/// Certifies that every source relator maps to the identity: exactly when the
/// target is free, otherwise in the target's class-`c` quotient.
pub fn check_hom(h: &GroupHom, c: u32, caps: &Caps) -> Result<CertifiedHom> {
    if c == 0 {
        return Err(Error::InvalidArgument("class bound must be at least 1".into()));
    }
    if h.target.is_free() {
        for (i, r) in h.source.relators().iter().enumerate() {
            if !h.image(r).is_empty() {
                return Err(not_hom(h, i));
            }
        }
        return Ok(CertifiedHom {
            hom: h.clone(),
            certification: Certification::Exact,
        });
    }
    let q = nilquot::nilpotent_quotient(&h.target, c, caps)?;
    for (i, r) in h.source.relators().iter().enumerate() {
        if !q.collect(&h.image(r)).iter().all(|&e| e == 0) {
            return Err(not_hom(h, i));
        }
    }
    Ok(CertifiedHom {
        hom: h.clone(),
        certification: Certification::UpToClass(c),
    })
}

fn not_hom(h: &GroupHom, i: usize) -> Error {
    Error::NotAHomomorphism {
        index: i,
        relator: h.source.show(&h.source.relators()[i]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> Letter {
        Letter::gen(0)
    }
    fn y() -> Letter {
        Letter::gen(1)
    }

    #[test]
    fn cancellation() {
        let f = FreeGroup::new(2);
        assert!(f.reduce(&[x(), x().inverse()]).unwrap().is_empty());
        assert!(f
            .reduce(&[x(), y(), y().inverse(), x().inverse()])
            .unwrap()
            .is_empty());
        let c = f
            .reduce(&[x().inverse(), y().inverse(), x(), y()])
            .unwrap();
        assert_eq!(c.len(), 4);
        assert!(matches!(
            f.reduce(&[Letter::gen(2)]),
            Err(Error::Alphabet { index: 2, rank: 2 })
        ));
    }

    #[test]
    fn commutator_convention() {
        let f = FreeGroup::new(2);
        let (a, b) = (Word::generator(0), Word::generator(1));
        let c = f.commutator(&a, &b).unwrap();
        assert_eq!(
            c.letters(),
            &[x().inverse(), y().inverse(), x(), y()]
        );
        assert!(f.commutator(&a, &a).unwrap().is_empty());
        let xy = Word::reduced([x(), y()]);
        let yix = Word::reduced([y().inverse(), x()]);
        assert_eq!(f.multiply(&xy, &yix).unwrap(), Word::reduced([x(), x()]));
        assert!(matches!(
            FreeGroup::new(1).multiply(&a, &b),
            Err(Error::Alphabet { .. })
        ));
    }

    #[test]
    fn parse_examples() {
        let p = Presentation::parse("gens: a b\nrel: a b a^-1 b^-1").unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.relators().len(), 1);
        assert!(matches!(
            Presentation::parse("gens: a\nrel:"),
            Err(Error::EmptyRelator { line: 2 })
        ));
        assert!(matches!(
            Presentation::parse("gens: a a"),
            Err(Error::DuplicateGenerator(_))
        ));
        match Presentation::parse("gens: a b\nrel: a c") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 8)),
            other => panic!("{other:?}"),
        }
        let p = Presentation::parse("# comment\ngens: a b # two\nrel: b a b^-1 a^-2\n").unwrap();
        assert_eq!(p.serialize(), "gens: a b\nrel: b a b^-1 a^-2\n");
        assert_eq!(p.relators()[0].len(), 5);
    }

    #[test]
    fn tietze_kills_defined_generators() {
        let p = Presentation::parse("gens: a b c\nrel: c a^-1 b^-1\nrel: a b a^-1 b^-1").unwrap();
        let (q, expr) = p.tietze_simplify();
        assert_eq!(q.rank(), 2);
        assert_eq!(q.relators().len(), 1);
        assert_eq!(q.show(&expr[2]), "b a");
    }

    #[test]
    fn check_hom_errors_on_fake_relator() {
        let src = Presentation::parse("gens: x\nrel: x").unwrap();
        let tgt = Presentation::free(&["x"]);
        let h = GroupHom::new(src, tgt, vec![Word::generator(0)]).unwrap();
        assert!(matches!(
            check_hom(&h, 1, &Caps::default()),
            Err(Error::NotAHomomorphism { index: 0, .. })
        ));
        let f2 = Presentation::free(&["x", "y"]);
        let id = check_hom(&GroupHom::identity(&f2), 3, &Caps::default()).unwrap();
        assert_eq!(id.certification, Certification::Exact);
    }

    fn letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((0..rank, any::<bool>()), 0..=max_len)
            .prop_map(|v| v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(ls in letters(3, 64)) {
            let w = Word::reduced(ls.iter().copied());
            prop_assert!(w.len() <= ls.len());
            prop_assert_eq!(Word::reduced(w.letters().iter().copied()), w.clone());
            prop_assert!(w.letters().windows(2).all(|p| p[0] != p[1].inverse()));
        }

        #[test]
        fn group_axioms(a in letters(3, 64), b in letters(3, 64), c in letters(3, 64)) {
            let (a, b, c) = (Word::reduced(a), Word::reduced(b), Word::reduced(c));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&Word::identity()), a.clone());
            prop_assert_eq!(Word::identity().mul(&a), a.clone());
            prop_assert!(a.mul(&a.inverse()).is_empty());
            prop_assert!(a.inverse().mul(&a).is_empty());
            prop_assert_eq!(a.inverse().inverse(), a);
        }

        #[test]
        fn powers_commute(w in letters(3, 16), i in -3i64..=3, j in -3i64..=3) {
            let w = Word::reduced(w);
            prop_assert!(w.pow(i).commutator(&w.pow(j)).is_empty());
        }

        #[test]
        fn serialize_round_trip(rels in prop::collection::vec(letters(3, 12), 0..5)) {
            let rels: Vec<Word> = rels.into_iter().map(Word::reduced).filter(|w| !w.is_empty()).collect();
            let p = Presentation::new(vec!["a".into(), "b".into(), "c1'".into()], rels).unwrap();
            prop_assert_eq!(Presentation::parse(&p.serialize()).unwrap(), p);
        }
    }
}
