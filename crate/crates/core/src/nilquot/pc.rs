//! Polycyclic presentations and collection.
//!
//! Elements are exponent vectors `g_1^{e_1} ... g_n^{e_n}` with `0 <= e_i < m_i` for
//! generators of finite relative order `m_i`. Relations:
//!
//! * `g_i^{m_i} = powers[i]` (a normal form in generators after `g_i`);
//! * `[g_j, g_i] = comms[j][i]` for `i < j` (a normal form in generators after `g_j`),
//!   so that `g_j^{g_i} = g_j comms[j][i]`.
//!
//! Multiplication moves the generator being multiplied leftwards through the tail of
//! the current normal form ("collection from the left" on a dense vector).

/// Sparse normal form: `(generator, exponent)` with increasing generators.
pub type Syl = Vec<(usize, i64)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPres {
    pub weights: Vec<u32>,
    /// Relative orders; `0` means infinite.
    pub orders: Vec<i64>,
    pub powers: Vec<Syl>,
    /// `comms[j][i]` for `i < j`; an empty normal form means the pair commutes.
    pub comms: Vec<Vec<Syl>>,
    derived: Option<Derived>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Derived {
    inv_powers: Vec<Syl>,
    comm_invs: Vec<Vec<Syl>>,
    /// `[g_j, g_i^-1]`
    icomms: Vec<Vec<Syl>>,
    icomm_invs: Vec<Vec<Syl>>,
}

pub fn to_syl(v: &[i64]) -> Syl {
    v.iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| (i, e))
        .collect()
}

pub fn to_dense(s: &Syl, n: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    for &(i, e) in s {
        v[i] = e;
    }
    v
}

impl PcPres {
    pub fn empty() -> Self {
        PcPres {
            weights: vec![],
            orders: vec![],
            powers: vec![],
            comms: vec![],
            derived: None,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Appends a generator that commutes with everything so far.
    pub fn push(&mut self, weight: u32, order: i64, power: Syl) {
        let n = self.len();
        self.weights.push(weight);
        self.orders.push(order);
        self.powers.push(power);
        self.comms.push(vec![Vec::new(); n]);
        self.derived = None;
    }

    /// Computes the inverse data used by collection. Must be called after the last
    /// change to the relations.
    pub fn finish(&mut self) {
        let n = self.len();
        self.derived = Some(Derived {
            inv_powers: vec![Vec::new(); n],
            comm_invs: (0..n).map(|j| vec![Vec::new(); j]).collect(),
            icomms: (0..n).map(|j| vec![Vec::new(); j]).collect(),
            icomm_invs: (0..n).map(|j| vec![Vec::new(); j]).collect(),
        });
        // Everything computed at step i only touches data of generators after i.
        for i in (0..n).rev() {
            if self.orders[i] != 0 && !self.powers[i].is_empty() {
                let inv = self.inverse(&self.powers[i]);
                self.derived.as_mut().unwrap().inv_powers[i] = inv;
            }
            for j in (i + 1..n).rev() {
                if self.comms[j][i].is_empty() {
                    continue;
                }
                let ci = self.inverse(&self.comms[j][i]);
                // [g_j, g_i^-1] = g_i (c^-1) g_i^-1 where c = [g_j, g_i]
                let mut v = vec![0; n];
                v[i] = 1;
                self.mul_syl(&mut v, &ci);
                self.mul_gen(&mut v, i, true);
                debug_assert!(v[..=j].iter().all(|&e| e == 0));
                let ic = to_syl(&v);
                let ici = self.inverse(&ic);
                let d = self.derived.as_mut().unwrap();
                d.comm_invs[j][i] = ci;
                d.icomms[j][i] = ic;
                d.icomm_invs[j][i] = ici;
            }
        }
    }

    fn d(&self) -> &Derived {
        self.derived.as_ref().expect("PcPres::finish not called")
    }

    pub fn mul_syl(&self, v: &mut [i64], s: &Syl) {
        for &(k, e) in s {
            self.mul_gen_pow(v, k, e);
        }
    }

    pub fn mul_gen_pow(&self, v: &mut [i64], k: usize, e: i64) {
        if e == 0 {
            return;
        }
        if v[k + 1..].iter().all(|&x| x == 0) {
            let m = self.orders[k];
            let total = v[k] + e;
            if m == 0 {
                v[k] = total;
                return;
            }
            // g^m = powers[k] commutes with g
            let (q, r) = (total.div_euclid(m), total.rem_euclid(m));
            v[k] = r;
            if q > 0 {
                for _ in 0..q {
                    self.mul_syl(v, &self.powers[k]);
                }
            } else if q < 0 {
                let inv = &self.d().inv_powers[k];
                for _ in 0..-q {
                    self.mul_syl(v, inv);
                }
            }
            return;
        }
        for _ in 0..e.unsigned_abs() {
            self.mul_gen(v, k, e < 0);
        }
    }

    /// `v <- v * g_i^{±1}`
    pub fn mul_gen(&self, v: &mut [i64], i: usize, inverse: bool) {
        let mut tail: Syl = Vec::new();
        for (k, x) in v.iter_mut().enumerate().skip(i + 1) {
            if *x != 0 {
                tail.push((k, *x));
                *x = 0;
            }
        }
        let m = self.orders[i];
        if !inverse {
            v[i] += 1;
            if m != 0 && v[i] == m {
                v[i] = 0;
                self.mul_syl(v, &self.powers[i]);
            }
        } else {
            v[i] -= 1;
            if m != 0 && v[i] < 0 {
                v[i] = m - 1;
                let d = self.d();
                self.mul_syl(v, &d.inv_powers[i]);
            }
        }
        if tail.is_empty() {
            return;
        }
        let d = self.d();
        for (k, e) in tail {
            let (c, ci) = if inverse {
                (&d.icomms[k][i], &d.icomm_invs[k][i])
            } else {
                (&self.comms[k][i], &d.comm_invs[k][i])
            };
            if c.is_empty() {
                self.mul_gen_pow(v, k, e);
            } else if e > 0 {
                for _ in 0..e {
                    self.mul_gen_pow(v, k, 1);
                    self.mul_syl(v, c);
                }
            } else {
                for _ in 0..-e {
                    self.mul_syl(v, ci);
                    self.mul_gen_pow(v, k, -1);
                }
            }
        }
    }

    pub fn inverse(&self, s: &Syl) -> Syl {
        let mut v = vec![0; self.len()];
        for &(k, e) in s.iter().rev() {
            self.mul_gen_pow(&mut v, k, -e);
        }
        to_syl(&v)
    }

    pub fn multiply(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut v = a.to_vec();
        self.mul_syl(&mut v, &to_syl(b));
        v
    }

    pub fn unit(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.len()];
        v[i] = 1;
        v
    }

    /// Keeps the generators of weight at most `c`, which are always a prefix.
    pub fn truncate(&self, c: u32) -> PcPres {
        let n = self.weights.iter().take_while(|&&w| w <= c).count();
        let cut = |s: &Syl| -> Syl { s.iter().copied().filter(|&(k, _)| k < n).collect() };
        let mut p = PcPres {
            weights: self.weights[..n].to_vec(),
            orders: self.orders[..n].to_vec(),
            powers: self.powers[..n].iter().map(cut).collect(),
            comms: self.comms[..n]
                .iter()
                .map(|row| row.iter().map(cut).collect())
                .collect(),
            derived: None,
        };
        p.finish();
        p
    }

    /// Runs the standard consistency test words; returns the pairs of normal forms
    /// that should agree. `filter(i, j, k)` limits the triple checks.
    pub fn consistency_pairs(
        &self,
        upto: usize,
        mut triple_filter: impl FnMut(usize, usize, usize) -> bool,
        mut on_pair: impl FnMut(Vec<i64>, Vec<i64>),
    ) {
        let n = self.len();
        let prod2 = |a: usize, b: usize| {
            let mut v = self.unit(a);
            self.mul_gen(&mut v, b, false);
            v
        };
        // g_k (g_j g_i) = (g_k g_j) g_i
        for i in 0..upto {
            for j in i + 1..upto {
                for k in j + 1..upto {
                    if !triple_filter(i, j, k) {
                        continue;
                    }
                    let mut left = prod2(k, j);
                    self.mul_gen(&mut left, i, false);
                    let mut right = self.unit(k);
                    self.mul_syl(&mut right, &to_syl(&prod2(j, i)));
                    on_pair(left, right);
                }
            }
        }
        for i in 0..upto {
            for j in i + 1..upto {
                // g_j^m g_i = g_j^{m-1} (g_j g_i)
                if self.orders[j] != 0 {
                    let mut left = to_dense(&self.powers[j], n);
                    self.mul_gen(&mut left, i, false);
                    let mut right = vec![0; n];
                    right[j] = self.orders[j] - 1;
                    self.mul_syl(&mut right, &to_syl(&prod2(j, i)));
                    on_pair(left, right);
                }
                // g_j g_i^m = (g_j g_i) g_i^{m-1}
                if self.orders[i] != 0 {
                    let mut left = self.unit(j);
                    self.mul_syl(&mut left, &self.powers[i]);
                    let mut right = prod2(j, i);
                    for _ in 0..self.orders[i] - 1 {
                        self.mul_gen(&mut right, i, false);
                    }
                    on_pair(left, right);
                } else {
                    // g_j = (g_j g_i^-1) g_i
                    let mut left = self.unit(j);
                    self.mul_gen(&mut left, i, true);
                    self.mul_gen(&mut left, i, false);
                    on_pair(left, self.unit(j));
                }
            }
            // g_i g_i^m = g_i^m g_i
            if self.orders[i] != 0 {
                let mut left = self.unit(i);
                self.mul_syl(&mut left, &self.powers[i]);
                let mut right = to_dense(&self.powers[i], n);
                self.mul_gen(&mut right, i, false);
                on_pair(left, right);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Heisenberg group: x, y, z = [y, x]... with [y, x] = z central.
    fn heisenberg() -> PcPres {
        let mut p = PcPres::empty();
        p.push(1, 0, vec![]);
        p.push(1, 0, vec![]);
        p.push(2, 0, vec![]);
        p.comms[1][0] = vec![(2, 1)];
        p.finish();
        p
    }

    #[test]
    fn heisenberg_arithmetic() {
        let p = heisenberg();
        // y x = x y [y, x] = x y z
        let mut v = p.unit(1);
        p.mul_gen(&mut v, 0, false);
        assert_eq!(v, vec![1, 1, 1]);
        // y^-1 x = x y^-1 z^-1
        let mut v = vec![0, -1, 0];
        p.mul_gen(&mut v, 0, false);
        assert_eq!(v, vec![1, -1, -1]);
        // y x^-1 = x^-1 y z^-1
        let mut v = p.unit(1);
        p.mul_gen(&mut v, 0, true);
        assert_eq!(v, vec![-1, 1, -1]);
        let a = vec![2, -3, 5];
        let inv = to_dense(&p.inverse(&to_syl(&a)), 3);
        assert_eq!(p.multiply(&a, &inv), vec![0, 0, 0]);
        let mut bad = 0;
        p.consistency_pairs(3, |_, _, _| true, |l, r| bad += (l != r) as usize);
        assert_eq!(bad, 0);
    }

    #[test]
    fn cyclic_of_order_four_as_two_step() {
        // g^2 = h, h^2 = 1
        let mut p = PcPres::empty();
        p.push(1, 2, vec![(1, 1)]);
        p.push(1, 2, vec![]);
        p.finish();
        let mut v = vec![0, 0];
        for _ in 0..3 {
            p.mul_gen(&mut v, 0, false);
        }
        assert_eq!(v, vec![1, 1]);
        p.mul_gen(&mut v, 0, false);
        assert_eq!(v, vec![0, 0]);
        p.mul_gen(&mut v, 0, true);
        assert_eq!(v, vec![1, 1]);
    }
}
