//! Exhaustive census of bent functions at small arity.
//!
//! Two independent searches are provided. The naive one tests every truth
//! table. The degree-restricted one only visits functions whose ANF is
//! supported on `B_d` with `d` from [`bent_degree_bound`]; it is sound because
//! a bent function in `n >= 4` variables has degree at most `n/2`. At `n = 2`
//! the bent functions are `x_1 x_2` plus an affine function, of degree 2.
//!
//! Both searches split their candidate range into contiguous shards that run
//! in parallel and are merged in order, so the output does not depend on the
//! shard count.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bent::is_bent;
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::geometry::ball_points;
use crate::transforms::{degree_space_log2, moebius};

/// Largest arity for the naive census (`2^{2^4}` candidates).
pub const NAIVE_ARITY_CAP: usize = 4;

/// Largest `log2` of the candidate count for the degree-restricted census.
pub const DEGREE_EXPONENT_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Degree,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Naive => "naive",
            Method::Degree => "degree",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "degree" | "degree-restricted" => Ok(Method::Degree),
            _ => Err(Error::Parse(format!("unknown census method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CensusResult {
    pub arity: usize,
    pub method: Method,
    pub count: u64,
    /// Number of truth tables (or ANF tables) examined.
    pub candidates: u64,
    pub elapsed: Duration,
    /// The bent functions in ascending truth-table order, when requested.
    pub functions: Option<Vec<BooleanFunction>>,
}

#[derive(Debug, Clone, Copy)]
pub struct CensusOptions {
    pub shards: usize,
    pub collect: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            shards: 1,
            collect: true,
        }
    }
}

/// Largest algebraic degree of a bent function in `n` variables (`n` even).
pub fn bent_degree_bound(n: usize) -> usize {
    (n / 2).max(2).min(n)
}

/// `log2` of the number of candidates the method would visit, or the error
/// explaining why the method cannot run at `n`.
pub fn candidate_exponent(n: usize, method: Method) -> Result<usize> {
    if n < 1 {
        return Err(Error::ArityOutOfRange(n));
    }
    if n % 2 == 1 {
        return Err(Error::domain(format!("bent functions need even arity, got {n}")));
    }
    match method {
        Method::Naive => {
            if n > NAIVE_ARITY_CAP {
                return Err(Error::resource(
                    format!("naive census at arity {n}"),
                    NAIVE_ARITY_CAP,
                ));
            }
            Ok(1 << n)
        }
        Method::Degree => {
            let exp = degree_space_log2(n, bent_degree_bound(n))? as usize;
            if exp > DEGREE_EXPONENT_CAP {
                return Err(Error::resource(
                    format!("degree-restricted census at arity {n} needs 2^{exp} candidates"),
                    DEGREE_EXPONENT_CAP,
                ));
            }
            Ok(exp)
        }
    }
}

fn shard_ranges(total: u64, shards: usize) -> Vec<(u64, u64)> {
    let k = shards.max(1) as u64;
    (0..k)
        .map(|i| (total * i / k, total * (i + 1) / k))
        .collect()
}

pub fn enumerate_bent_naive(n: usize) -> Result<CensusResult> {
    enumerate_bent_naive_with(n, CensusOptions::default())
}

pub fn enumerate_bent_naive_with(n: usize, opts: CensusOptions) -> Result<CensusResult> {
    let exp = candidate_exponent(n, Method::Naive)?;
    let start = Instant::now();
    let total = 1u64 << exp;
    let shards: Vec<Vec<u64>> = shard_ranges(total, opts.shards)
        .into_par_iter()
        .map(|(lo, hi)| {
            (lo..hi)
                .filter(|&t| is_bent(&BooleanFunction::from_u64(n, t).unwrap()))
                .collect()
        })
        .collect();
    let tables: Vec<u64> = shards.into_iter().flatten().collect();
    Ok(CensusResult {
        arity: n,
        method: Method::Naive,
        count: tables.len() as u64,
        candidates: total,
        elapsed: start.elapsed(),
        functions: opts.collect.then(|| {
            tables
                .iter()
                .map(|&t| BooleanFunction::from_u64(n, t).unwrap())
                .collect()
        }),
    })
}

pub fn enumerate_bent_by_degree(n: usize) -> Result<CensusResult> {
    enumerate_bent_by_degree_with(n, CensusOptions::default())
}

pub fn enumerate_bent_by_degree_with(n: usize, opts: CensusOptions) -> Result<CensusResult> {
    let exp = candidate_exponent(n, Method::Degree)?;
    let start = Instant::now();
    let ball = ball_points(n, bent_degree_bound(n))?;
    let total = 1u64 << exp;
    let shards: Vec<Vec<BooleanFunction>> = shard_ranges(total, opts.shards)
        .into_par_iter()
        .map(|(lo, hi)| {
            (lo..hi)
                .filter_map(|sel| {
                    let mut anf = BooleanFunction::zero(n).unwrap();
                    for (i, &y) in ball.indices().iter().enumerate() {
                        if sel >> i & 1 == 1 {
                            anf.set_bit(y, true);
                        }
                    }
                    let f = moebius(&anf);
                    is_bent(&f).then_some(f)
                })
                .collect()
        })
        .collect();
    let mut functions: Vec<BooleanFunction> = shards.into_iter().flatten().collect();
    functions.sort_unstable_by(table_order);
    Ok(CensusResult {
        arity: n,
        method: Method::Degree,
        count: functions.len() as u64,
        candidates: total,
        elapsed: start.elapsed(),
        functions: opts.collect.then_some(functions),
    })
}

/// Orders tables of equal arity as unsigned integers.
pub fn table_order(a: &BooleanFunction, b: &BooleanFunction) -> std::cmp::Ordering {
    a.arity()
        .cmp(&b.arity())
        .then_with(|| a.words().iter().rev().cmp(b.words().iter().rev()))
}

pub fn enumerate(n: usize, method: Method, opts: CensusOptions) -> Result<CensusResult> {
    match method {
        Method::Naive => enumerate_bent_naive_with(n, opts),
        Method::Degree => enumerate_bent_by_degree_with(n, opts),
    }
}

/// Number of bent functions in `n` variables, cached per `(n, method)`.
pub fn bent_count(n: usize, method: Method) -> Result<u64> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, Method), u64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&c) = cache.lock().unwrap().get(&(n, method)) {
        return Ok(c);
    }
    let opts = CensusOptions {
        shards: rayon::current_num_threads(),
        collect: false,
    };
    let count = enumerate(n, method, opts)?.count;
    cache.lock().unwrap().insert((n, method), count);
    Ok(count)
}

/// Runs `op` on a dedicated pool of `jobs` threads.
pub fn with_jobs<T: Send>(jobs: usize, op: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    Ok(pool.install(op))
}
