//! Finite-index subgroups as coset tables: Todd-Coxeter enumeration, low-index
//! search, Reidemeister-Schreier rewriting and intersections of normal subgroups.
//!
//! Cosets are numbered from 0 (the subgroup itself). Column `2g` of a table is the
//! action of generator `g`, column `2g + 1` that of its inverse. Cosets act on the
//! right: `c . w` is the coset reached by reading `w` from `c`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resources::par_map;
use crate::words::{Letter, Presentation, Word};

const NONE: u32 = u32::MAX;

fn col(l: Letter) -> usize {
    2 * l.generator() + usize::from(l.is_inverse())
}

fn letter_of(col: usize) -> Letter {
    Letter::new(col / 2, col % 2 == 1)
}

fn inv_col(c: usize) -> usize {
    c ^ 1
}

/// A complete, transitive permutation action on the cosets of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetTable {
    rank: usize,
    /// Row-major, `2 * rank` entries per coset.
    table: Vec<u32>,
    subgroup_gens: Vec<Word>,
}

/// A subgroup found by [`low_index`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupRecord {
    pub table: CosetTable,
    pub normal: bool,
    pub index: usize,
}

impl CosetTable {
    /// The table of the whole group.
    pub fn trivial(rank: usize) -> Self {
        CosetTable {
            rank,
            table: (0..2 * rank).map(|_| 0).collect(),
            subgroup_gens: (0..rank).map(Word::generator).collect(),
        }
    }

    /// Builds the table of the stabilizer of point 0 under the action of the
    /// generators by `perms`, restricted to the orbit of 0 and renumbered.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Self> {
        let rank = perms.len();
        let degree = perms.first().map_or(1, Vec::len);
        let mut inverse = vec![vec![0usize; degree]; rank];
        for (g, p) in perms.iter().enumerate() {
            if p.len() != degree {
                return Err(Error::InvalidArgument("permutations of unequal degree".into()));
            }
            let mut seen = vec![false; degree];
            for (i, &j) in p.iter().enumerate() {
                if j >= degree || seen[j] {
                    return Err(Error::InvalidArgument("not a permutation".into()));
                }
                seen[j] = true;
                inverse[g][j] = i;
            }
        }
        let mut number = vec![NONE; degree.max(1)];
        let mut order = vec![0usize];
        number[0] = 0;
        let mut table = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let point = order[i];
            for c in 0..2 * rank {
                let g = c / 2;
                let image = if c % 2 == 0 { perms[g][point] } else { inverse[g][point] };
                if number[image] == NONE {
                    number[image] = order.len() as u32;
                    order.push(image);
                }
                table.push(number[image]);
            }
            i += 1;
        }
        let mut t = CosetTable {
            rank,
            table,
            subgroup_gens: vec![],
        };
        t.subgroup_gens = t.schreier_generator_words();
        Ok(t)
    }

    /// The kernel of the map to a finite abelian group `Z/m_1 x ... x Z/m_k` sending
    /// generator `g` to `images[g]`, as the regular action on the image.
    pub fn from_abelian_quotient(
        p: &Presentation,
        moduli: &[u64],
        images: &[Vec<i64>],
        max_index: usize,
    ) -> Result<Self> {
        if images.len() != p.rank() || images.iter().any(|v| v.len() != moduli.len()) {
            return Err(Error::InvalidArgument("image vectors do not match the generators".into()));
        }
        let reduce = |v: Vec<i64>| -> Vec<i64> {
            v.iter()
                .zip(moduli)
                .map(|(x, &m)| x.rem_euclid(m as i64))
                .collect()
        };
        let mut index: HashMap<Vec<i64>, u32> = HashMap::new();
        let mut points = vec![vec![0i64; moduli.len()]];
        index.insert(points[0].clone(), 0);
        let mut table = Vec::new();
        let mut i = 0;
        while i < points.len() {
            for c in 0..2 * p.rank() {
                let sign = if c % 2 == 0 { 1 } else { -1 };
                let next = reduce(
                    points[i]
                        .iter()
                        .zip(&images[c / 2])
                        .map(|(a, b)| a + sign * b)
                        .collect(),
                );
                let n = match index.get(&next) {
                    Some(&n) => n,
                    None => {
                        if points.len() >= max_index {
                            return Err(Error::CapExceeded {
                                what: "subgroup index",
                                limit: max_index as u64,
                            });
                        }
                        let n = points.len() as u32;
                        index.insert(next.clone(), n);
                        points.push(next);
                        n
                    }
                };
                table.push(n);
            }
            i += 1;
        }
        let mut t = CosetTable {
            rank: p.rank(),
            table,
            subgroup_gens: vec![],
        };
        t.verify_closed(p)?;
        t.subgroup_gens = t.schreier_generator_words();
        Ok(t)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn index(&self) -> usize {
        if self.rank == 0 {
            1
        } else {
            self.table.len() / (2 * self.rank)
        }
    }

    pub fn subgroup_generators(&self) -> &[Word] {
        &self.subgroup_gens
    }

    /// `c . l`.
    pub fn act(&self, c: usize, l: Letter) -> usize {
        self.table[c * 2 * self.rank + col(l)] as usize
    }

    /// `c . w`.
    pub fn walk(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |c, &l| self.act(c, l))
    }

    /// Whether `w` lies in the subgroup.
    pub fn contains(&self, w: &Word) -> bool {
        self.walk(0, w) == 0
    }

    /// Image of generator `g` as a permutation of the cosets.
    pub fn permutation(&self, g: usize) -> Vec<usize> {
        (0..self.index()).map(|c| self.act(c, Letter::gen(g))).collect()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(2 * self.rank.max(1))
            .map(|r| r.iter().map(|&x| x as usize).collect())
            .collect()
    }

    /// Independent check: the action is total and by permutations, transitive, every
    /// relator fixes every coset and every recorded subgroup generator fixes coset 0.
    pub fn verify_closed(&self, p: &Presentation) -> Result<()> {
        if p.rank() != self.rank {
            return Err(Error::AlphabetMismatch {
                left: p.rank(),
                right: self.rank,
            });
        }
        let n = self.index();
        if self.table.len() != n * 2 * self.rank {
            return Err(Error::TableNotClosed);
        }
        for c in 0..n {
            for x in 0..2 * self.rank {
                let d = self.table[c * 2 * self.rank + x] as usize;
                if d >= n || self.table[d * 2 * self.rank + inv_col(x)] as usize != c {
                    return Err(Error::TableNotClosed);
                }
            }
            for r in p.relators() {
                if self.walk(c, r) != c {
                    return Err(Error::TableNotClosed);
                }
            }
        }
        if self.subgroup_gens.iter().any(|w| !self.contains(w)) {
            return Err(Error::TableNotClosed);
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(c) = stack.pop() {
            for x in 0..2 * self.rank {
                let d = self.table[c * 2 * self.rank + x] as usize;
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::TableNotClosed)
        }
    }

    /// The table renumbered by first appearance when scanning from `base`: the table
    /// of the conjugate subgroup stabilizing `base`.
    fn standardized_from(&self, base: usize) -> Vec<u32> {
        let n = self.index();
        let w = 2 * self.rank;
        let mut number = vec![NONE; n];
        let mut order = Vec::with_capacity(n);
        number[base] = 0;
        order.push(base);
        let mut out = Vec::with_capacity(self.table.len());
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for x in 0..w {
                let d = self.table[c * w + x] as usize;
                if number[d] == NONE {
                    number[d] = order.len() as u32;
                    order.push(d);
                }
                out.push(number[d]);
            }
            i += 1;
        }
        out
    }

    /// Normal iff the subgroup equals all its conjugates.
    pub fn is_normal(&self) -> bool {
        (1..self.index()).all(|b| self.standardized_from(b) == self.table)
    }

    /// BFS spanning tree from coset 0: `(parent coset, column)` for each coset but 0,
    /// and coset representatives.
    fn spanning_tree(&self) -> (Vec<Option<(usize, usize)>>, Vec<Word>) {
        let n = self.index();
        let w = 2 * self.rank;
        let mut parent = vec![None; n];
        let mut reps = vec![Word::identity(); n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for x in 0..w {
                let d = self.table[c * w + x] as usize;
                if !seen[d] {
                    seen[d] = true;
                    parent[d] = Some((c, x));
                    reps[d] = reps[c].mul(&Word::reduced([letter_of(x)]));
                    queue.push_back(d);
                }
            }
        }
        (parent, reps)
    }

    /// Positive edges `(c, g)` that are not tree edges in either direction.
    fn schreier_edges(&self, parent: &[Option<(usize, usize)>]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for c in 0..self.index() {
            for g in 0..self.rank {
                let d = self.act(c, Letter::gen(g));
                let tree = parent[d] == Some((c, 2 * g)) || parent[c] == Some((d, 2 * g + 1));
                if !tree {
                    out.push((c, g));
                }
            }
        }
        out
    }

    fn schreier_generator_words(&self) -> Vec<Word> {
        let (parent, reps) = self.spanning_tree();
        self.schreier_edges(&parent)
            .into_iter()
            .map(|(c, g)| {
                let d = self.act(c, Letter::gen(g));
                reps[c].mul(&Word::generator(g)).mul(&reps[d].inverse())
            })
            .collect()
    }

    /// Whether `self` is contained in `other`: the cosets of `self` map onto those of
    /// `other` compatibly with the action.
    pub fn refines(&self, other: &CosetTable) -> bool {
        if self.rank != other.rank || self.index() % other.index() != 0 {
            return false;
        }
        let mut map = vec![usize::MAX; self.index()];
        map[0] = 0;
        let mut stack = vec![0];
        while let Some(c) = stack.pop() {
            for x in 0..2 * self.rank {
                let l = letter_of(x);
                let d = self.act(c, l);
                let e = other.act(map[c], l);
                if map[d] == usize::MAX {
                    map[d] = e;
                    stack.push(d);
                } else if map[d] != e {
                    return false;
                }
            }
        }
        true
    }
}

struct Enumerator {
    w: usize,
    table: Vec<u32>,
    forward: Vec<u32>,
    live: usize,
    max_cosets: usize,
}

struct Full;

impl Enumerator {
    fn new(rank: usize, max_cosets: usize) -> Self {
        Enumerator {
            w: 2 * rank,
            table: vec![NONE; 2 * rank],
            forward: vec![0],
            live: 1,
            max_cosets,
        }
    }

    fn len(&self) -> usize {
        self.forward.len()
    }

    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.w + x]
    }

    fn set(&mut self, c: usize, x: usize, d: u32) {
        self.table[c * self.w + x] = d;
    }

    fn alive(&self, c: usize) -> bool {
        self.forward[c] as usize == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.forward[r] as usize != r {
            r = self.forward[r] as usize;
        }
        let mut c = c;
        while self.forward[c] as usize != r {
            let next = self.forward[c] as usize;
            self.forward[c] = r as u32;
            c = next;
        }
        r
    }

    fn define(&mut self, c: usize, x: usize) -> std::result::Result<(), Full> {
        if self.live >= self.max_cosets {
            return Err(Full);
        }
        let d = self.len();
        self.forward.push(d as u32);
        self.table.extend(std::iter::repeat(NONE).take(self.w));
        self.live += 1;
        self.set(c, x, d as u32);
        self.set(d, inv_col(x), c as u32);
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.forward[hi] = lo as u32;
            self.live -= 1;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.w {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                let f = f as usize;
                if self.get(f, inv_col(x)) as usize == e {
                    self.set(f, inv_col(x), NONE);
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                if ex != NONE {
                    self.merge(f1, ex as usize, &mut queue);
                } else {
                    let fx = self.get(f1, inv_col(x));
                    if fx != NONE {
                        self.merge(e1, fx as usize, &mut queue);
                    } else {
                        self.set(e1, x, f1 as u32);
                        self.set(f1, inv_col(x), e1 as u32);
                    }
                }
            }
        }
    }

    /// Traces `w` from `c` in both directions; on a single gap records the
    /// deduction, on closure processes any coincidence. Defines cosets when `fill`.
    fn scan(&mut self, c: usize, w: &[usize], fill: bool) -> std::result::Result<(), Full> {
        let (mut i, mut j) = (0usize, w.len());
        let (mut f, mut b) = (c, c);
        loop {
            while i < j && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]) as usize;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.get(b, inv_col(w[j - 1])) != NONE {
                b = self.get(b, inv_col(w[j - 1])) as usize;
                j -= 1;
            }
            if i == j {
                self.coincidence(f, b);
                return Ok(());
            }
            if i + 1 == j {
                self.set(f, w[i], b as u32);
                self.set(b, inv_col(w[i]), f as u32);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn lookahead(&mut self, rels: &[Vec<usize>]) {
        for c in 0..self.len() {
            for r in rels {
                if !self.alive(c) {
                    break;
                }
                let _ = self.scan(c, r, false);
            }
        }
    }

    /// Drops dead cosets, keeping the relative order of live ones. Returns the new
    /// number of each old coset that survives.
    fn compact(&mut self) -> Vec<u32> {
        let n = self.len();
        let mut number = vec![NONE; n];
        let mut next = 0u32;
        for c in 0..n {
            if self.alive(c) {
                number[c] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.w);
        for c in 0..n {
            if self.alive(c) {
                for x in 0..self.w {
                    let d = self.get(c, x);
                    table.push(if d == NONE { NONE } else { number[self.rep(d as usize)] });
                }
            }
        }
        self.table = table;
        self.forward = (0..next).collect();
        self.live = next as usize;
        number
    }
}

fn letters_to_cols(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|&l| col(l)).collect()
}

/// Coset enumeration (HLT with lookahead). Terminates with the exact index when the
/// subgroup has finite index and the table fits in `max_cosets`; otherwise reports
/// the cap. Enumeration of an infinite-index subgroup never terminates by itself.
pub fn todd_coxeter(p: &Presentation, gens: &[Word], max_cosets: usize) -> Result<CosetTable> {
    if max_cosets == 0 {
        return Err(Error::InvalidArgument("max_cosets must be at least 1".into()));
    }
    let free = p.free_group();
    for g in gens {
        free.check(g)?;
    }
    let rank = p.rank();
    let cap = Error::CapExceeded {
        what: "coset table",
        limit: max_cosets as u64,
    };
    if rank == 0 {
        return Ok(CosetTable::trivial(0));
    }
    let rels: Vec<Vec<usize>> = p.relators().iter().map(letters_to_cols).collect();
    let sub: Vec<Vec<usize>> = gens.iter().map(letters_to_cols).collect();
    let mut e = Enumerator::new(rank, max_cosets);
    let mut c = 0usize;
    let mut subgroup_done = false;
    loop {
        let step = (|| -> std::result::Result<bool, Full> {
            if !subgroup_done {
                for s in &sub {
                    e.scan(0, s, true)?;
                }
                subgroup_done = true;
            }
            while c < e.len() {
                for r in &rels {
                    if !e.alive(c) {
                        break;
                    }
                    e.scan(c, r, true)?;
                }
                if e.alive(c) {
                    for x in 0..e.w {
                        if e.get(c, x) == NONE {
                            e.define(c, x)?;
                        }
                    }
                }
                c += 1;
            }
            Ok(true)
        })();
        match step {
            Ok(_) => break,
            Err(Full) => {
                e.lookahead(&rels);
                let number = e.compact();
                if e.live >= max_cosets {
                    return Err(cap);
                }
                // Resume at the first surviving coset at or after `c`.
                c = (c..number.len())
                    .find(|&k| number[k] != NONE)
                    .map_or(e.len(), |k| number[k] as usize);
            }
        }
    }
    e.compact();
    let rough = CosetTable {
        rank,
        table: e.table,
        subgroup_gens: vec![],
    };
    let table = rough.standardized_from(0);
    let t = CosetTable {
        rank,
        table,
        subgroup_gens: gens.to_vec(),
    };
    debug_assert!(t.verify_closed(p).is_ok());
    Ok(t)
}

/// Partial table for the low-index search: cosets are defined in order and never
/// identified, so every complete table reached is standardized.
#[derive(Clone)]
struct Partial {
    w: usize,
    table: Vec<u32>,
    /// First undefined entry in row-major order.
    cursor: usize,
    /// Cosets defined so far.
    defined: usize,
}

impl Partial {
    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.w + x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.table[c * self.w + x] = d as u32;
    }

    fn next_gap(&mut self) -> Option<(usize, usize)> {
        while self.cursor < self.defined * self.w {
            if self.table[self.cursor] == NONE {
                return Some((self.cursor / self.w, self.cursor % self.w));
            }
            self.cursor += 1;
        }
        None
    }

    /// Sets `c . x = d` and processes deductions; `false` on a contradiction.
    fn assign(&mut self, c: usize, x: usize, d: usize, rots: &[Vec<Vec<usize>>]) -> bool {
        if d == self.defined {
            self.defined += 1;
        }
        let mut queue = vec![(c, x, d)];
        while let Some((c, x, d)) = queue.pop() {
            let cur = self.get(c, x);
            let back = self.get(d, inv_col(x));
            if cur != NONE && cur as usize != d || back != NONE && back as usize != c {
                return false;
            }
            if cur != NONE {
                continue;
            }
            self.set(c, x, d);
            self.set(d, inv_col(x), c);
            for (start, col) in [(c, x), (d, inv_col(x))] {
                for w in &rots[col] {
                    match self.trace(start, w) {
                        Trace::Ok => {}
                        Trace::Conflict => return false,
                        Trace::Deduce(a, y, b) => queue.push((a, y, b)),
                    }
                }
            }
        }
        true
    }

    fn trace(&self, c: usize, w: &[usize]) -> Trace {
        let (mut i, mut j) = (0usize, w.len());
        let (mut f, mut b) = (c, c);
        while i < j && self.get(f, w[i]) != NONE {
            f = self.get(f, w[i]) as usize;
            i += 1;
        }
        if i == j {
            return if f == c { Trace::Ok } else { Trace::Conflict };
        }
        while j > i && self.get(b, inv_col(w[j - 1])) != NONE {
            b = self.get(b, inv_col(w[j - 1])) as usize;
            j -= 1;
        }
        if i + 1 == j {
            Trace::Deduce(f, w[i], b)
        } else {
            Trace::Ok
        }
    }

    /// Choices for the gap at `(c, x)`: an existing coset with a free inverse slot,
    /// or the next new coset.
    fn choices(&self, x: usize, max: usize) -> Vec<usize> {
        let m = self.defined;
        let mut out: Vec<usize> = (0..m)
            .filter(|&d| self.get(d, inv_col(x)) == NONE)
            .collect();
        if m < max {
            out.push(m);
        }
        out
    }

    fn complete(&self) -> CosetTable {
        let m = self.defined;
        CosetTable {
            rank: self.w / 2,
            table: self.table[..m * self.w].to_vec(),
            subgroup_gens: vec![],
        }
    }
}

enum Trace {
    Ok,
    Conflict,
    Deduce(usize, usize, usize),
}

/// Cyclic rotations of relators and their inverses, grouped by first column.
fn rotations(p: &Presentation) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new(); 2 * p.rank()];
    for r in p.relators() {
        for w in [r.clone(), r.inverse()] {
            let cols = letters_to_cols(&w);
            for s in 0..cols.len() {
                let rot: Vec<usize> = cols[s..].iter().chain(&cols[..s]).copied().collect();
                if !out[rot[0]].contains(&rot) {
                    out[rot[0]].push(rot);
                }
            }
        }
    }
    out
}

fn search(
    mut state: Partial,
    max: usize,
    rots: &[Vec<Vec<usize>>],
    normal_only: bool,
    out: &mut Vec<SubgroupRecord>,
) {
    match state.next_gap() {
        None => {
            let t = state.complete();
            let n = t.index();
            let mut normal = true;
            for b in 1..n {
                let s = t.standardized_from(b);
                if s < t.table {
                    return;
                }
                normal &= s == t.table;
            }
            if normal || !normal_only {
                out.push(finish_record(t, normal));
            }
        }
        Some((c, x)) => {
            for d in state.choices(x, max) {
                let mut next = state.clone();
                if next.assign(c, x, d, rots) {
                    search(next, max, rots, normal_only, out);
                }
            }
        }
    }
}

fn finish_record(mut t: CosetTable, normal: bool) -> SubgroupRecord {
    t.subgroup_gens = t.schreier_generator_words();
    SubgroupRecord {
        index: t.index(),
        normal,
        table: t,
    }
}

/// Expands the search tree breadth-first until there are enough independent
/// branches to share among workers. Complete tables met on the way go to `done`.
fn frontier(
    root: Partial,
    max: usize,
    rots: &[Vec<Vec<usize>>],
    want: usize,
    normal_only: bool,
    done: &mut Vec<SubgroupRecord>,
) -> Vec<Partial> {
    let mut level = vec![root];
    for _ in 0..8 {
        if level.len() >= want {
            break;
        }
        let mut next_level = Vec::new();
        for mut s in level {
            match s.next_gap() {
                None => search(s, max, rots, normal_only, done),
                Some((c, x)) => {
                    for d in s.choices(x, max) {
                        let mut n = s.clone();
                        if n.assign(c, x, d, rots) {
                            next_level.push(n);
                        }
                    }
                }
            }
        }
        level = next_level;
    }
    level
}

/// All subgroups of index at most `n`, one per conjugacy class, or only the normal
/// ones when `normal_only`. Sorted by index, then by coset table.
pub fn low_index(p: &Presentation, n: usize, normal_only: bool) -> Result<Vec<SubgroupRecord>> {
    low_index_with_jobs(p, n, normal_only, 1)
}

/// [`low_index`] with the search split across `jobs` workers; the result does not
/// depend on `jobs`.
pub fn low_index_with_jobs(
    p: &Presentation,
    n: usize,
    normal_only: bool,
    jobs: usize,
) -> Result<Vec<SubgroupRecord>> {
    if n == 0 {
        return Err(Error::InvalidArgument("maximal index must be at least 1".into()));
    }
    if p.rank() == 0 {
        return Ok(vec![finish_record(CosetTable::trivial(0), true)]);
    }
    let w = 2 * p.rank();
    let rots = rotations(p);
    let root = Partial {
        w,
        table: vec![NONE; n * w],
        cursor: 0,
        defined: 1,
    };
    let mut out = Vec::new();
    let branches = if jobs > 1 {
        frontier(root, n, &rots, 4 * jobs, normal_only, &mut out)
    } else {
        vec![root]
    };
    let found = par_map(jobs, branches, |b| {
        let mut v = Vec::new();
        search(b, n, &rots, normal_only, &mut v);
        v
    });
    out.extend(found.into_iter().flatten());
    out.sort_by(|a, b| (a.index, &a.table.table).cmp(&(b.index, &b.table.table)));
    Ok(out)
}

/// Presentation of the subgroup on Schreier generators named `{gen}_{coset}` (cosets
/// numbered from 1), and those generators as words in the parent group.
pub fn reidemeister_schreier(p: &Presentation, t: &CosetTable) -> Result<(Presentation, Vec<Word>)> {
    t.verify_closed(p)?;
    let (parent, reps) = t.spanning_tree();
    let edges = t.schreier_edges(&parent);
    let mut gen_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut names = Vec::with_capacity(edges.len());
    let mut words = Vec::with_capacity(edges.len());
    for (k, &(c, g)) in edges.iter().enumerate() {
        gen_of.insert((c, g), k);
        names.push(format!("{}_{}", p.names()[g], c + 1));
        let d = t.act(c, Letter::gen(g));
        words.push(reps[c].mul(&Word::generator(g)).mul(&reps[d].inverse()));
    }
    let mut relators = Vec::new();
    for c in 0..t.index() {
        for r in p.relators() {
            let mut letters = Vec::new();
            let mut cur = c;
            for &l in r.letters() {
                let next = t.act(cur, l);
                let (from, inverse) = if l.is_inverse() { (next, true) } else { (cur, false) };
                if let Some(&k) = gen_of.get(&(from, l.generator())) {
                    letters.push(Letter::new(k, inverse));
                }
                cur = next;
            }
            relators.push(Word::reduced(letters));
        }
    }
    Ok((Presentation::new_dropping_trivial(names, relators)?, words))
}

/// The intersection of finitely many normal subgroups: the stabilizer of the base
/// point in the product action.
pub fn intersect_normals(p: &Presentation, tables: &[CosetTable], max_index: usize) -> Result<CosetTable> {
    if tables.is_empty() {
        return Ok(CosetTable::trivial(p.rank()));
    }
    for t in tables {
        t.verify_closed(p)?;
        if !t.is_normal() {
            return Err(Error::InvalidArgument("intersect_normals needs normal subgroups".into()));
        }
    }
    let w = 2 * p.rank();
    let start = vec![0usize; tables.len()];
    let mut index: HashMap<Vec<usize>, u32> = HashMap::from([(start.clone(), 0)]);
    let mut points = vec![start];
    let mut table = Vec::new();
    let mut i = 0;
    while i < points.len() {
        for x in 0..w {
            let next: Vec<usize> = points[i]
                .iter()
                .zip(tables)
                .map(|(&c, t)| t.act(c, letter_of(x)))
                .collect();
            let k = match index.get(&next) {
                Some(&k) => k,
                None => {
                    if points.len() >= max_index {
                        return Err(Error::CapExceeded {
                            what: "product action degree",
                            limit: max_index as u64,
                        });
                    }
                    let k = points.len() as u32;
                    index.insert(next.clone(), k);
                    points.push(next);
                    k
                }
            };
            table.push(k);
        }
        i += 1;
    }
    let mut t = CosetTable {
        rank: p.rank(),
        table,
        subgroup_gens: vec![],
    };
    t.subgroup_gens = t.schreier_generator_words();
    Ok(t)
}

/// For a normal subgroup, whether the finite quotient group is nilpotent: its lower
/// central series, computed on the regular action, reaches the identity.
pub fn quotient_is_nilpotent(t: &CosetTable) -> bool {
    if !t.is_normal() {
        return false;
    }
    let n = t.index();
    // Element k of the quotient is the coset k; k * m is k . rep(m).
    let (parent, _) = t.spanning_tree();
    let mut order: Vec<usize> = vec![0];
    {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for x in 0..2 * t.rank {
                let d = t.act(c, letter_of(x));
                if !seen[d] {
                    seen[d] = true;
                    order.push(d);
                }
            }
            i += 1;
        }
    }
    let mut mul = vec![vec![0usize; n]; n];
    for k in 0..n {
        mul[k][0] = k;
        for &m in order.iter().skip(1) {
            let (pm, x) = parent[m].expect("non-root coset has a parent");
            mul[k][m] = t.act(mul[k][pm], letter_of(x));
        }
    }
    let mut inv = vec![0usize; n];
    for k in 0..n {
        inv[k] = (0..n).find(|&m| mul[k][m] == 0).expect("group element has an inverse");
    }
    let closure = |seed: Vec<usize>| -> Vec<bool> {
        let mut inside = vec![false; n];
        inside[0] = true;
        let gens: Vec<usize> = seed.into_iter().filter(|&g| g != 0).collect();
        let mut stack = vec![0];
        while let Some(a) = stack.pop() {
            for &g in &gens {
                let b = mul[a][g];
                if !inside[b] {
                    inside[b] = true;
                    stack.push(b);
                }
            }
        }
        inside
    };
    let mut current = vec![true; n];
    loop {
        let size = current.iter().filter(|&&b| b).count();
        if size == 1 {
            return true;
        }
        let mut comms = Vec::new();
        for a in (0..n).filter(|&a| current[a]) {
            for g in 0..n {
                comms.push(mul[mul[inv[a]][inv[g]]][mul[a][g]]);
            }
        }
        comms.sort_unstable();
        comms.dedup();
        let next = closure(comms);
        if next.iter().filter(|&&b| b).count() == size {
            return false;
        }
        current = next;
    }
}

#[cfg(test)]
mod tests;
