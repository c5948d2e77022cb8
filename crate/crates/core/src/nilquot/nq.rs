//! The iterative central-extension step `G/G_{c+1} -> G/G_{c+2}`.
//!
//! Given a consistent weighted presentation of the class-`c` quotient in which every
//! generator has a *definition* (an epimorphism image, a power relation or a
//! commutator relation whose right-hand side ends in that generator), every other
//! relation receives a new central "tail" generator. Consistency test words and the
//! images of the source relators give linear relations among the tails; the
//! echelonized tail lattice is the new layer `G_{c+1}/G_{c+2}`, and surviving tails
//! become the new generators, each defined by the relation it was the tail of.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::pc::{PcPres, Syl};
use crate::error::{Error, Result};
use crate::resources::{Caps, Deadline};
use crate::words::Presentation;
use crate::zlinalg::Lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Definition {
    /// Image of a source generator.
    Epi(usize),
    /// Tail of the power relation of a generator.
    Power(usize),
    /// Tail of `[g_j, g_i]`, stored as `(j, i)`.
    Comm(usize, usize),
}

#[derive(Clone, Debug)]
pub(crate) struct NqState {
    pub pc: PcPres,
    pub defs: Vec<Definition>,
    pub epi: Vec<Syl>,
    pub class: u32,
    /// The last layer was trivial, so every later layer is trivial too.
    pub stable: bool,
}

impl NqState {
    pub fn trivial(source_rank: usize) -> Self {
        let mut pc = PcPres::empty();
        pc.finish();
        NqState {
            pc,
            defs: vec![],
            epi: vec![Vec::new(); source_rank],
            class: 0,
            stable: false,
        }
    }

    fn defined_by(&self, d: Definition) -> bool {
        self.defs.contains(&d)
    }
}

pub(crate) fn extend(state: &NqState, p: &Presentation, caps: &Caps) -> Result<NqState> {
    let deadline = Deadline::new(caps.time_per_class);
    let c = state.class;
    let new_weight = c + 1;
    if state.stable {
        let mut s = state.clone();
        s.class = new_weight;
        return Ok(s);
    }
    let old = &state.pc;
    let n = old.len();

    // Tails in column order; leftmost columns are eliminated first, so relations we
    // would rather keep as definitions of new generators go last.
    let mut tails: Vec<Definition> = Vec::new();
    for x in 0..p.rank() {
        if !state.defined_by(Definition::Epi(x)) {
            tails.push(Definition::Epi(x));
        }
    }
    for i in 0..n {
        if old.orders[i] != 0 && !state.defined_by(Definition::Power(i)) {
            tails.push(Definition::Power(i));
        }
    }
    let mut comm_tails: Vec<(u32, u32, usize, usize)> = Vec::new();
    for j in 0..n {
        for i in 0..j {
            let ws = old.weights[i] + old.weights[j];
            if ws <= new_weight && !state.defined_by(Definition::Comm(j, i)) {
                comm_tails.push((ws, if old.weights[i] == 1 { 1 } else { 0 }, j, i));
            }
        }
    }
    comm_tails.sort();
    tails.extend(comm_tails.iter().map(|&(_, _, j, i)| Definition::Comm(j, i)));
    let m = tails.len();
    let total = n + m;

    // The extended presentation: old generators followed by central tails.
    let mut ext = PcPres::empty();
    for i in 0..n {
        ext.push(old.weights[i], old.orders[i], old.powers[i].clone());
    }
    for j in 0..n {
        for i in 0..j {
            ext.comms[j][i] = old.comms[j][i].clone();
        }
    }
    for _ in 0..m {
        ext.push(new_weight, 0, vec![]);
    }
    let mut epi_ext: Vec<Syl> = state.epi.clone();
    for (t, tail) in tails.iter().enumerate() {
        let g = n + t;
        match *tail {
            Definition::Epi(x) => epi_ext[x].push((g, 1)),
            Definition::Power(i) => ext.powers[i].push((g, 1)),
            Definition::Comm(j, i) => ext.comms[j][i].push((g, 1)),
        }
    }
    ext.finish();
    deadline.check()?;

    let mut lattice = Lattice::new(m);
    let mut failure: Option<Error> = None;
    let add_pair = |l: Vec<i64>, r: Vec<i64>, lattice: &mut Lattice| {
        debug_assert_eq!(l[..n], r[..n], "class-{c} quotient inconsistent");
        let diff: Vec<i64> = l[n..].iter().zip(&r[n..]).map(|(a, b)| a - b).collect();
        lattice.insert_i64(&diff);
    };
    let weights = &old.weights;
    let mut checks = 0usize;
    ext.consistency_pairs(
        n,
        |i, j, k| weights[i] + weights[j] + weights[k] <= new_weight,
        |l, r| {
            checks += 1;
            if failure.is_none() && checks % 256 == 0 {
                if let Err(e) = deadline.check() {
                    failure = Some(e);
                }
            }
            if failure.is_none() {
                add_pair(l, r, &mut lattice);
            }
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }

    // Relator images lie in the tail layer.
    let epi_inv: Vec<Syl> = epi_ext.iter().map(|s| ext.inverse(s)).collect();
    for r in p.relators() {
        deadline.check()?;
        let mut v = vec![0i64; total];
        for l in r.letters() {
            let img = if l.is_inverse() {
                &epi_inv[l.generator()]
            } else {
                &epi_ext[l.generator()]
            };
            ext.mul_syl(&mut v, img);
        }
        debug_assert!(v[..n].iter().all(|&e| e == 0), "epimorphism not a homomorphism");
        lattice.insert_i64(&v[n..]);
    }
    deadline.check()?;

    // New generators: tail columns that are not pivots of value one.
    let pivots: Vec<(usize, BigInt)> = lattice.pivots().map(|(c, p)| (c, p.clone())).collect();
    let mut new_index: Vec<Option<usize>> = vec![None; m];
    let mut new_orders: Vec<i64> = vec![0; m];
    let mut next = n;
    let mut piv_iter = pivots.iter().peekable();
    for col in 0..m {
        let pv = match piv_iter.peek() {
            Some((c2, p)) if *c2 == col => {
                piv_iter.next();
                Some(p.clone())
            }
            _ => None,
        };
        match pv {
            Some(p) if p.is_one() => {}
            Some(p) => {
                new_orders[col] = p.to_i64().ok_or(Error::CapExceeded {
                    what: "relative order",
                    limit: i64::MAX as u64,
                })?;
                new_index[col] = Some(next);
                next += 1;
            }
            None => {
                new_index[col] = Some(next);
                next += 1;
            }
        }
    }
    let layer_size = next - n;

    let normal_form = |v: Vec<BigInt>| -> Result<Syl> {
        let mut v = v;
        lattice.reduce(&mut v);
        let mut out = Vec::new();
        for (col, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let g = new_index[col].expect("reduced vector has support on kept columns");
            let e = x.to_i64().ok_or(Error::CapExceeded {
                what: "exponent size",
                limit: i64::MAX as u64,
            })?;
            out.push((g, e));
        }
        Ok(out)
    };
    let unit_tail = |t: usize| {
        let mut v = vec![BigInt::zero(); m];
        v[t] = BigInt::one();
        v
    };

    let mut pc = PcPres::empty();
    for i in 0..n {
        pc.push(old.weights[i], old.orders[i], old.powers[i].clone());
    }
    for j in 0..n {
        for i in 0..j {
            pc.comms[j][i] = old.comms[j][i].clone();
        }
    }
    for col in 0..m {
        if new_index[col].is_some() {
            let power = if new_orders[col] != 0 {
                let mut v = vec![BigInt::zero(); m];
                v[col] = BigInt::from(new_orders[col]);
                normal_form(v)?
            } else {
                vec![]
            };
            pc.push(new_weight, new_orders[col], power);
        }
    }
    let mut epi = state.epi.clone();
    let mut defs = state.defs.clone();
    for (t, tail) in tails.iter().enumerate() {
        let nf = normal_form(unit_tail(t))?;
        match *tail {
            Definition::Epi(x) => epi[x].extend(nf),
            Definition::Power(i) => pc.powers[i].extend(nf),
            Definition::Comm(j, i) => pc.comms[j][i].extend(nf),
        }
    }
    for col in 0..m {
        if new_index[col].is_some() {
            defs.push(tails[col]);
        }
    }
    pc.finish();

    if pc.orders.iter().filter(|&&o| o == 0).count() > caps.max_hirsch {
        return Err(Error::CapExceeded {
            what: "Hirsch length",
            limit: caps.max_hirsch as u64,
        });
    }
    Ok(NqState {
        pc,
        defs,
        epi,
        class: new_weight,
        stable: layer_size == 0,
    })
}
