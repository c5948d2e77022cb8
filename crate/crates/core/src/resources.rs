//! Resource caps and the worker-pool helper shared by the parallel operations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::{Error, Result};

/// Caps on the expensive computations. Exceeding one is always an error, never a
/// silently truncated answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest Hirsch length a nilpotent quotient may reach.
    pub max_hirsch: usize,
    /// Wall-clock budget for computing one class of a nilpotent quotient.
    /// `None` disables the check (targets without a clock, e.g. wasm32).
    pub time_per_class: Option<Duration>,
    /// Largest coset table during enumeration.
    pub max_cosets: usize,
    /// Largest index of a tower step or product action.
    pub max_index: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_hirsch: 200,
            time_per_class: Some(Duration::from_secs(60)),
            max_cosets: 1_000_000,
            max_index: 256,
        }
    }
}

impl Caps {
    pub fn without_clock() -> Self {
        Caps {
            time_per_class: None,
            ..Caps::default()
        }
    }
}

pub(crate) struct Deadline {
    start: Option<Instant>,
    limit: Duration,
}

impl Deadline {
    pub(crate) fn new(limit: Option<Duration>) -> Self {
        Deadline {
            start: limit.map(|_| Instant::now()),
            limit: limit.unwrap_or_default(),
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        match self.start {
            Some(s) if s.elapsed() > self.limit => Err(Error::TimeCap(self.limit)),
            _ => Ok(()),
        }
    }
}

fn pool(jobs: usize) -> Arc<ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock().unwrap();
    pools
        .entry(jobs)
        .or_insert_with(|| {
            Arc::new(
                ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .expect("thread pool"),
            )
        })
        .clone()
}

/// Maps `f` over `items` with `jobs` workers. Output order is input order, so results
/// do not depend on the worker count. `jobs <= 1` runs inline without threads.
pub fn par_map<T, R, F>(jobs: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    if jobs <= 1 || items.len() <= 1 {
        items.into_iter().map(f).collect()
    } else {
        pool(jobs).install(|| items.into_par_iter().map(f).collect())
    }
}

/// Runs two closures, concurrently when `jobs > 1`.
pub fn join<A, B, RA, RB>(jobs: usize, a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    if jobs <= 1 {
        (a(), b())
    } else {
        pool(jobs).install(|| rayon::join(a, b))
    }
}
