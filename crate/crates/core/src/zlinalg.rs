//! Exact integer matrix algebra: Smith normal form, rank over prime fields,
//! and an incremental Hermite-style lattice used by the nilpotent quotient.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// `cols` is needed for the zero-row case.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &x) in r.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let s = &self.entries[src * self.cols + j];
            if !s.is_zero() {
                let t = s * q;
                self.entries[dst * self.cols + j] -= t;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let s = &self.entries[i * self.cols + src];
            if !s.is_zero() {
                let t = s * q;
                self.entries[i * self.cols + dst] -= t;
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// Diagonal of the Smith normal form, read as a presentation matrix whose rows
/// are relations among the column generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    /// `min(rows, cols)` entries, nonnegative, nonzero ones forming a divisibility chain.
    pub diagonal: Vec<BigInt>,
    /// Rank of the free part of the cokernel: `cols - #nonzero`.
    pub rank_free: usize,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Torsion coefficients `d_i > 1` of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect()
    }
}

fn min_abs_entry(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let e = &m[(i, j)];
            if e.is_zero() {
                continue;
            }
            match best {
                Some(b) if m[b].abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
            if e.abs().is_one() {
                return best;
            }
        }
    }
    best
}

fn snf_in_place(m: &mut IntMatrix, mut v: Option<&mut IntMatrix>) -> Vec<BigInt> {
    let k = m.rows.min(m.cols);
    let mut t = 0;
    while t < k {
        let Some((pi, pj)) = min_abs_entry(m, t) else {
            break;
        };
        m.swap_rows(t, pi);
        m.swap_cols(t, pj);
        if let Some(v) = v.as_deref_mut() {
            v.swap_cols(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m.rows {
                if !m[(i, t)].is_zero() {
                    let q = m[(i, t)].div_floor(&m[(t, t)]);
                    m.sub_row(i, t, &q);
                    if !m[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..m.cols {
                if !m[(t, j)].is_zero() {
                    let q = m[(t, j)].div_floor(&m[(t, t)]);
                    m.sub_col(j, t, &q);
                    if let Some(v) = v.as_deref_mut() {
                        v.sub_col(j, t, &q);
                    }
                    if !m[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // bring the smallest remainder in row t / column t to the pivot
                let mut best = (t, t);
                for i in t + 1..m.rows {
                    if !m[(i, t)].is_zero() && m[(i, t)].abs() < m[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..m.cols {
                    if !m[(t, j)].is_zero() && m[(t, j)].abs() < m[best].abs() {
                        best = (t, j);
                    }
                }
                m.swap_rows(t, best.0);
                m.swap_cols(t, best.1);
                if let Some(v) = v.as_deref_mut() {
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            let p = m[(t, t)].clone();
            let bad = (t + 1..m.rows).find(|&i| {
                (t + 1..m.cols).any(|j| !m[(i, j)].is_multiple_of(&p))
            });
            match bad {
                Some(i) => m.sub_row(t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        t += 1;
    }
    (0..k).map(|i| m[(i, i)].abs()).collect()
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let mut work = m.clone();
    let diagonal = snf_in_place(&mut work, None);
    let nz = diagonal.iter().filter(|d| !d.is_zero()).count();
    SnfResult {
        rank_free: m.cols - nz,
        diagonal,
    }
}

/// Smith normal form together with a unimodular `V` such that `U m V = D` for some
/// unimodular `U`. Column `j` of `V` expresses the `j`-th new coordinate.
pub fn smith_with_column_transform(m: &IntMatrix) -> (SnfResult, IntMatrix) {
    let mut work = m.clone();
    let mut v = IntMatrix::identity(m.cols);
    let diagonal = snf_in_place(&mut work, Some(&mut v));
    let nz = diagonal.iter().filter(|d| !d.is_zero()).count();
    (
        SnfResult {
            rank_free: m.cols - nz,
            diagonal,
        },
        v,
    )
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn rank_mod_p(m: &IntMatrix, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let modp = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.mod_floor(&modp).to_u64().unwrap())
                .collect()
        })
        .collect();
    Ok(rank_mod_p_dense(&mut a, p))
}

pub(crate) fn rank_mod_p_dense(a: &mut [Vec<u64>], p: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let inv = |x: u64| pow_mod(x, p - 2, p);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let s = inv(a[rank][c]);
        for x in a[rank].iter_mut() {
            *x = *x * s % p;
        }
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for j in c..cols {
                    let sub = f * a[rank][j] % p;
                    a[r][j] = (a[r][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// A sublattice of `Z^n` kept in echelon form with positive pivots.
///
/// [`Lattice::reduce`] maps a vector to the canonical representative of its class
/// in `Z^n / L`: pivot coordinates land in `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    rows: BTreeMap<usize, Vec<BigInt>>,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice {
            dim,
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert_i64(&mut self, v: &[i64]) {
        if v.iter().all(|&x| x == 0) {
            return;
        }
        self.insert(v.iter().map(|&x| BigInt::from(x)).collect());
    }

    pub fn insert(&mut self, mut v: Vec<BigInt>) {
        assert_eq!(v.len(), self.dim);
        let mut col = 0;
        loop {
            let Some(c) = (col..self.dim).find(|&j| !v[j].is_zero()) else {
                return;
            };
            match self.rows.remove(&c) {
                None => {
                    if v[c].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.rows.insert(c, v);
                    return;
                }
                Some(p) => {
                    let (a, b) = (&p[c], &v[c]);
                    if b.is_multiple_of(a) {
                        let q = b / a;
                        for j in c..self.dim {
                            v[j] -= &q * &p[j];
                        }
                        self.rows.insert(c, p);
                    } else {
                        let eg = a.extended_gcd(b);
                        let (g, s, t) = (eg.gcd, eg.x, eg.y);
                        let (ag, bg) = (a / &g, b / &g);
                        let mut new_p = vec![BigInt::zero(); self.dim];
                        let mut rest = vec![BigInt::zero(); self.dim];
                        for j in c..self.dim {
                            new_p[j] = &s * &p[j] + &t * &v[j];
                            rest[j] = &bg * &p[j] - &ag * &v[j];
                        }
                        if new_p[c].is_negative() {
                            new_p.iter_mut().for_each(|x| *x = -&*x);
                        }
                        self.rows.insert(c, new_p);
                        v = rest;
                    }
                    col = c + 1;
                }
            }
        }
    }

    /// `(column, pivot)` pairs in increasing column order.
    pub fn pivots(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.rows.iter().map(|(&c, r)| (c, &r[c]))
    }

    pub fn reduce(&self, v: &mut [BigInt]) {
        for (&c, row) in &self.rows {
            if v[c].is_zero() && row[c].is_one() {
                continue;
            }
            let q = v[c].div_floor(&row[c]);
            if q.is_zero() {
                continue;
            }
            for j in c..self.dim {
                if !row[j].is_zero() {
                    v[j] -= &q * &row[j];
                }
            }
        }
    }
}
