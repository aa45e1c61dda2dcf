//! Bent-ness, dual bent functions, affine equivalence, and the distribution of
//! sums over two-dimensional affine flats.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{parity, BooleanFunction};
use crate::math::{gaussian_binomial2, log2_big};
use crate::transforms::walsh_fast;

/// Largest arity for [`two_flat_sum_distribution`].
pub const FLAT_ARITY_CAP: usize = 12;

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `true` iff `n` is even and `|W_f(y)| = 2^{n/2}` for every `y`.
pub fn is_bent(f: &BooleanFunction) -> bool {
    let n = f.arity();
    if n % 2 == 1 {
        return false;
    }
    let target = 1i32 << (n / 2);
    match walsh_fast(f) {
        Ok(w) => w.values().iter().all(|v| v.abs() == target),
        Err(_) => false,
    }
}

/// The dual `g` of a bent `b`, defined by `W_b(y) = 2^{n/2} (-1)^{g(y)}`.
pub fn dual_bent(b: &BooleanFunction) -> Result<BooleanFunction> {
    let n = b.arity();
    if n % 2 == 1 {
        return Err(Error::NotBent);
    }
    let target = 1i32 << (n / 2);
    let w = walsh_fast(b)?;
    if w.values().iter().any(|v| v.abs() != target) {
        return Err(Error::NotBent);
    }
    BooleanFunction::from_fn(n, |y| w.get(y) < 0)
}

/// Rank over `F_2` of the rows (each an `n`-bit vector).
pub fn rank_f2(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::with_capacity(rows.len());
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            // keep the basis sorted by leading bit, descending
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// An affine transformation of a function:
/// `g(x) = f(M x + translation) + <functional, x> + constant`.
///
/// Row `i` of `matrix` gives output coordinate `i` of `M x` as `<row_i, x>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(rename = "n")]
    arity: usize,
    matrix: Vec<u64>,
    translation: u64,
    functional: u64,
    constant: bool,
}

impl AffineMap {
    pub fn new(
        arity: usize,
        matrix: Vec<u64>,
        translation: u64,
        functional: u64,
        constant: bool,
    ) -> Result<Self> {
        let map = AffineMap {
            arity,
            matrix,
            translation,
            functional,
            constant,
        };
        map.validate()?;
        Ok(map)
    }

    /// Checks dimensions and invertibility; used after deserialization too.
    pub fn validate(&self) -> Result<()> {
        let n = self.arity;
        if !(1..=64).contains(&n) {
            return Err(Error::ArityOutOfRange(n));
        }
        if self.matrix.len() != n {
            return Err(Error::domain(format!(
                "matrix has {} rows, expected {n}",
                self.matrix.len()
            )));
        }
        let mask = low_mask(n);
        if self.matrix.iter().any(|r| r & !mask != 0)
            || self.translation & !mask != 0
            || self.functional & !mask != 0
        {
            return Err(Error::domain(format!("map entries exceed {n} bits")));
        }
        if rank_f2(&self.matrix) != n {
            return Err(Error::SingularMatrix);
        }
        Ok(())
    }

    pub fn identity(arity: usize) -> Result<Self> {
        AffineMap::new(arity, (0..arity).map(|i| 1u64 << i).collect(), 0, 0, false)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &[u64] {
        &self.matrix
    }

    pub fn translation(&self) -> u64 {
        self.translation
    }

    pub fn functional(&self) -> u64 {
        self.functional
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    /// `M x`.
    pub fn linear_image(&self, x: u64) -> u64 {
        self.matrix
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &row)| acc | (parity(row & x) as u64) << i)
    }

    fn columns(&self) -> Vec<u64> {
        (0..self.arity)
            .map(|j| {
                self.matrix
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (i, &row)| acc | ((row >> j) & 1) << i)
            })
            .collect()
    }
}

/// `g(x) = f(M x + c) + <l, x> + e`. Bent-ness is preserved.
pub fn apply_affine(f: &BooleanFunction, t: &AffineMap) -> Result<BooleanFunction> {
    let n = f.arity();
    if t.arity != n {
        return Err(Error::ArityMismatch {
            left: n,
            right: t.arity,
        });
    }
    t.validate()?;
    let cols = t.columns();
    let mut words = vec![0u64; f.words().len()];
    // walk x in Gray-code order so M x updates by one column per step
    let mut image = 0u64;
    for k in 0..1u64 << n {
        if k != 0 {
            image ^= cols[k.trailing_zeros() as usize];
        }
        let x = k ^ (k >> 1);
        let value = f.bit(image ^ t.translation) ^ parity(t.functional & x) ^ t.constant;
        if value {
            words[(x >> 6) as usize] |= 1 << (x & 63);
        }
    }
    BooleanFunction::from_words(n, words)
}

/// A uniformly random affine map with invertible matrix, reproducible from
/// `seed`. The matrix is rejection-sampled until it has full rank.
pub fn random_invertible(n: usize, seed: u64) -> Result<AffineMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_invertible_with(n, &mut rng)
}

pub fn random_invertible_with<R: Rng>(n: usize, rng: &mut R) -> Result<AffineMap> {
    if !(1..=64).contains(&n) {
        return Err(Error::ArityOutOfRange(n));
    }
    let mask = low_mask(n);
    let matrix = loop {
        let rows: Vec<u64> = (0..n).map(|_| rng.gen::<u64>() & mask).collect();
        if rank_f2(&rows) == n {
            break rows;
        }
    };
    let translation = rng.gen::<u64>() & mask;
    let functional = rng.gen::<u64>() & mask;
    let constant = rng.gen::<bool>();
    AffineMap::new(n, matrix, translation, functional, constant)
}

/// `|GL(n,2)| = prod_{i=0}^{n-1} (2^n - 2^i)`.
pub fn general_linear_order(n: usize) -> BigUint {
    let full = BigUint::from(1u32) << n;
    (0..n)
        .map(|i| &full - (BigUint::from(1u32) << i))
        .product()
}

/// Exact size of the affine orbit bound `|GL(n,2)| · 2^n · 2^{n+1}`:
/// matrix, input translation, and affine function `ℓ` with its constant.
pub fn affine_group_size(n: usize) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::ArityOutOfRange(n));
    }
    Ok(general_linear_order(n) << (2 * n + 1))
}

pub fn affine_group_size_log2(n: usize) -> Result<f64> {
    Ok(log2_big(&affine_group_size(n)?))
}

/// Number of two-dimensional affine flats of `F^n` hitting each coset sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatSumDistribution {
    arity: usize,
    counts: BTreeMap<i32, u64>,
}

impl FlatSumDistribution {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Counts keyed by sum value; every key of `{-4,-2,0,2,4}` is present.
    pub fn counts(&self) -> &BTreeMap<i32, u64> {
        &self.counts
    }

    pub fn count(&self, sum: i32) -> u64 {
        self.counts.get(&sum).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Flats whose sum is `±2`.
    pub fn pm2_count(&self) -> u64 {
        self.count(-2) + self.count(2)
    }

    pub fn pm2_proportion(&self) -> f64 {
        self.pm2_count() as f64 / self.total() as f64
    }

    /// `[n,2]_2 · 2^{n-2}`, the number of two-dimensional flats.
    pub fn expected_total(n: usize) -> BigUint {
        gaussian_binomial2(n as u32, 2) << n.saturating_sub(2)
    }
}

impl Serialize for FlatSumDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let counts: BTreeMap<String, u64> =
            self.counts.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let mut st = s.serialize_struct("FlatSumDistribution", 5)?;
        st.serialize_field("n", &self.arity)?;
        st.serialize_field("total", &self.total())?;
        st.serialize_field("counts", &counts)?;
        st.serialize_field("pm2_count", &self.pm2_count())?;
        st.serialize_field("pm2_proportion", &self.pm2_proportion())?;
        st.end()
    }
}

/// Sums `(-1)^{b(x)}` over every two-dimensional affine flat `t + span{u, v}`.
///
/// Each subspace is visited once through its reduced echelon basis: `u` has
/// leading bit `p1`, `v` has leading bit `p2 < p1`, and bit `p2` of `u` is
/// clear. The cosets are then indexed by the points with bits `p1` and `p2`
/// clear.
pub fn two_flat_sum_distribution(b: &BooleanFunction) -> Result<FlatSumDistribution> {
    let n = b.arity();
    if n < 2 {
        return Err(Error::domain(format!("arity {n} has no two-dimensional flats")));
    }
    if n > FLAT_ARITY_CAP {
        return Err(Error::resource(format!("flat enumeration at arity {n}"), FLAT_ARITY_CAP));
    }
    let signs: Vec<i8> = (0..b.len() as u64)
        .map(|x| if b.bit(x) { -1 } else { 1 })
        .collect();
    let full = low_mask(n);
    let tally = (1u64..1 << n)
        .into_par_iter()
        .map(|u| {
            let mut counts = [0u64; 5];
            let p1 = 63 - u.leading_zeros();
            for p2 in (0..p1).filter(|&p| u >> p & 1 == 0) {
                let free = full & !(1 << p1) & !(1 << p2);
                for v_low in 0..1u64 << p2 {
                    let v = 1 << p2 | v_low;
                    for t in crate::geometry::subsets(free) {
                        let s = signs[t as usize] as i32
                            + signs[(t ^ u) as usize] as i32
                            + signs[(t ^ v) as usize] as i32
                            + signs[(t ^ u ^ v) as usize] as i32;
                        counts[((s + 4) / 2) as usize] += 1;
                    }
                }
            }
            counts
        })
        .reduce(
            || [0u64; 5],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let counts = [-4, -2, 0, 2, 4].into_iter().zip(tally).collect();
    Ok(FlatSumDistribution { arity: n, counts })
}
