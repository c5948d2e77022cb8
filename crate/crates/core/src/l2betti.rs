//! Lück approximation: the ratios `b_1(N_m) / [G : N_m]` along a chain of nested
//! finite-index normal subgroups.
//!
//! Only the finite ratio sequence is reported. For finitely presented groups and
//! chains with trivial intersection the ratios converge to the first L2 Betti number;
//! whether a finite prefix of a chain belongs to such a chain is not decidable here,
//! so no limit is ever claimed.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homcalc::abelianization;
use crate::resources::{par_map, Caps};
use crate::subgroups::{intersect_normals, low_index, quotient_is_nilpotent, reidemeister_schreier, CosetTable};
use crate::words::Presentation;
use crate::zlinalg::{is_prime, smith_with_column_transform, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TowerStrategy {
    /// Kernels of `G -> (Z/p^i)^{b_1}` through the free part of the abelianization.
    PCongruence(u64),
    /// `M(d)`: intersection of the normal subgroups of index at most `d` with
    /// nilpotent quotient, for `d = 2, 3, ...`, keeping the strictly smaller ones.
    MOfD,
    /// Caller-supplied tables, checked for normality and nesting.
    Explicit(Vec<CosetTable>),
}

impl TowerStrategy {
    pub fn name(&self) -> String {
        match self {
            TowerStrategy::PCongruence(p) => format!("p-congruence({p})"),
            TowerStrategy::MOfD => "m-of-d".into(),
            TowerStrategy::Explicit(_) => "explicit".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tower {
    pub strategy: String,
    pub steps: Vec<CosetTable>,
    /// For `MOfD`, the `d` that produced each step.
    pub labels: Vec<String>,
}

impl Tower {
    pub fn indices(&self) -> Vec<usize> {
        self.steps.iter().map(CosetTable::index).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct L2Estimate {
    pub indices: Vec<usize>,
    pub betti: Vec<usize>,
    pub ratios: Vec<Ratio<u64>>,
    pub notes: Vec<String>,
}

fn check_chain(p: &Presentation, steps: &[CosetTable]) -> Result<()> {
    for (i, t) in steps.iter().enumerate() {
        t.verify_closed(p)?;
        if !t.is_normal() {
            return Err(Error::NotNested(format!("step {} is not normal", i + 1)));
        }
        if i > 0 && !t.refines(&steps[i - 1]) {
            return Err(Error::NotNested(format!("step {} is not inside step {}", i + 1, i)));
        }
    }
    Ok(())
}

/// Images of the generators in `Z^{b_1}`, the free part of the abelianization.
pub fn free_abelian_images(p: &Presentation) -> Vec<Vec<i64>> {
    let m = IntMatrix::from_rows(&p.exponent_matrix(), p.rank());
    let (snf, v) = smith_with_column_transform(&m);
    let r = snf.rank();
    // Columns r.. of V span the integer kernel of the relation matrix; pairing a
    // generator with them gives its free-part coordinates.
    (0..p.rank())
        .map(|j| {
            (r..p.rank())
                .map(|t| i64::try_from(&v[(j, t)]).expect("small coordinates"))
                .collect()
        })
        .collect()
}

fn m_of_d(p: &Presentation, d: usize, caps: &Caps) -> Result<CosetTable> {
    let normals: Vec<CosetTable> = low_index(p, d, true)?
        .into_iter()
        .filter(|r| r.index > 1 && quotient_is_nilpotent(&r.table))
        .map(|r| r.table)
        .collect();
    intersect_normals(p, &normals, caps.max_index)
}

/// Builds `depth` steps of a tower. Indices are capped by `caps.max_index`.
pub fn build_tower(p: &Presentation, strategy: &TowerStrategy, depth: usize, caps: &Caps) -> Result<Tower> {
    let mut steps = Vec::new();
    let mut labels = Vec::new();
    match strategy {
        TowerStrategy::PCongruence(q) => {
            if !is_prime(*q) {
                return Err(Error::NotPrime(*q));
            }
            let images = free_abelian_images(p);
            let b1 = images.first().map_or(0, Vec::len);
            if b1 == 0 && depth > 0 {
                return Err(Error::InvalidArgument("first Betti number is zero; no congruence tower".into()));
            }
            for i in 1..=depth as u32 {
                let m = q.checked_pow(i).ok_or(Error::CapExceeded {
                    what: "subgroup index",
                    limit: caps.max_index as u64,
                })?;
                steps.push(CosetTable::from_abelian_quotient(p, &vec![m; b1], &images, caps.max_index)?);
                labels.push(format!("mod {m}"));
            }
        }
        TowerStrategy::MOfD => {
            let mut d = 2;
            while steps.len() < depth {
                if d > caps.max_index {
                    return Err(Error::CapExceeded {
                        what: "subgroup index",
                        limit: caps.max_index as u64,
                    });
                }
                let t = m_of_d(p, d, caps)?;
                let bigger = steps.last().map_or(t.index() > 1, |s: &CosetTable| t.index() > s.index());
                if bigger {
                    steps.push(t);
                    labels.push(format!("M({d})"));
                }
                d += 1;
            }
        }
        TowerStrategy::Explicit(tables) => {
            steps = tables.iter().take(depth.max(1)).cloned().collect();
            labels = (1..=steps.len()).map(|i| format!("step {i}")).collect();
        }
    }
    check_chain(p, &steps)?;
    Ok(Tower {
        strategy: strategy.name(),
        steps,
        labels,
    })
}

/// `b_1` of each step through Reidemeister-Schreier and abelianization; steps are
/// independent and run on `jobs` workers.
pub fn luck_estimate(p: &Presentation, t: &Tower, jobs: usize) -> Result<L2Estimate> {
    check_chain(p, &t.steps)?;
    let betti: Vec<usize> = par_map(jobs, t.steps.iter().collect(), |s| {
        reidemeister_schreier(p, s).map(|(sub, _)| abelianization(&sub).free_rank)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let indices = t.indices();
    let ratios: Vec<Ratio<u64>> = betti
        .iter()
        .zip(&indices)
        .map(|(&b, &d)| Ratio::new(b as u64, d as u64))
        .collect();
    let mut notes = Vec::new();
    if ratios.windows(2).all(|w| w[1] <= w[0]) && ratios.len() > 1 {
        notes.push("ratios nonincreasing".into());
    }
    if indices.windows(2).any(|w| w[1] <= w[0]) {
        notes.push("indices not strictly increasing".into());
    }
    Ok(L2Estimate {
        indices,
        betti,
        ratios,
        notes,
    })
}
