//! Coordinate faces of the hypercube, their cosets, and Hamming balls.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::function::{BooleanFunction, Point};
use crate::math::binomial_prefix_sum;

fn full_mask(arity: usize) -> u64 {
    if arity >= 64 {
        u64::MAX
    } else {
        (1u64 << arity) - 1
    }
}

/// Iterates the subsets of `mask` in ascending order.
pub fn subsets(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(cur.wrapping_sub(mask) & mask)
        };
        Some(cur)
    })
}

/// A face `Γ(mask) = {x : x & !mask = 0}` through the origin. The set bits of
/// `mask` are the free coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceMask {
    arity: usize,
    mask: u64,
}

impl FaceMask {
    pub fn new(arity: usize, mask: u64) -> Result<Self> {
        if !(1..=64).contains(&arity) {
            return Err(Error::ArityOutOfRange(arity));
        }
        if mask & !full_mask(arity) != 0 {
            return Err(Error::domain(format!(
                "mask {mask:#x} has bits beyond arity {arity}"
            )));
        }
        Ok(FaceMask { arity, mask })
    }

    /// The whole space `F^n`.
    pub fn full(arity: usize) -> Result<Self> {
        FaceMask::new(arity, full_mask(arity.min(64)))
    }

    /// The face `Γ_y` spanned by the support of `y`.
    pub fn below(y: &Point) -> Self {
        FaceMask {
            arity: y.arity(),
            mask: y.index(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn dim(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn contains(&self, x: u64) -> bool {
        x & !self.mask == 0
    }

    /// `Γ^⊥`: for a coordinate face this is the complementary coordinate face.
    pub fn dual(&self) -> FaceMask {
        FaceMask {
            arity: self.arity,
            mask: !self.mask & full_mask(self.arity),
        }
    }

    /// Indices of the face, ascending.
    pub fn indices(&self) -> impl Iterator<Item = u64> {
        subsets(self.mask)
    }

    /// Minimal-index member of the coset `z + Γ`.
    pub fn representative(&self, z: u64) -> u64 {
        z & !self.mask
    }

    fn check_function(&self, f: &BooleanFunction) -> Result<()> {
        if f.arity() != self.arity {
            return Err(Error::ArityMismatch {
                left: f.arity(),
                right: self.arity,
            });
        }
        Ok(())
    }
}

/// Points of `Γ(m)` in ascending index order.
pub fn subcube_points(m: &FaceMask) -> Vec<Point> {
    m.indices()
        .map(|x| Point::new(m.arity(), x).unwrap())
        .collect()
}

pub fn dual_face(m: &FaceMask) -> FaceMask {
    m.dual()
}

/// `sum_{x in z + Γ(m)} (-1)^{f(x)}`.
pub fn coset_sum(f: &BooleanFunction, m: &FaceMask, z: &Point) -> Result<i64> {
    m.check_function(f)?;
    if z.arity() != f.arity() {
        return Err(Error::ArityMismatch {
            left: f.arity(),
            right: z.arity(),
        });
    }
    Ok(coset_sum_raw(f, m.mask(), z.index()))
}

pub(crate) fn coset_sum_raw(f: &BooleanFunction, mask: u64, z: u64) -> i64 {
    subsets(mask)
        .map(|s| if f.bit(z ^ s) { -1 } else { 1 })
        .sum()
}

/// Coset sums of `f` over every coset of `Γ(m)`, keyed by the minimal-index
/// representative.
pub fn coset_spectrum(f: &BooleanFunction, m: &FaceMask) -> Result<BTreeMap<u64, i64>> {
    m.check_function(f)?;
    Ok(m.dual()
        .indices()
        .map(|rep| (rep, coset_sum_raw(f, m.mask(), rep)))
        .collect())
}

/// The Hamming ball `B_r = {x : wt(x) <= r}` of `F^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    arity: usize,
    radius: usize,
    points: Vec<u64>,
}

impl Ball {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Member indices sorted by (weight, index).
    pub fn indices(&self) -> &[u64] {
        &self.points
    }

    pub fn points(&self) -> Vec<Point> {
        self.points
            .iter()
            .map(|&x| Point::new(self.arity, x).unwrap())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        x.count_ones() as usize <= self.radius && x >> self.arity == 0
    }
}

/// Next integer with the same popcount (Gosper's hack).
fn next_same_weight(v: u64) -> u64 {
    let t = v | (v - 1);
    (t + 1) | (((!t & (!t).wrapping_neg()) - 1) >> (v.trailing_zeros() + 1))
}

/// Points of `F^n` with exactly `w` ones, ascending.
pub fn points_of_weight(n: usize, w: usize) -> impl Iterator<Item = u64> {
    let last = if w == 0 || w > n {
        0
    } else {
        (full_mask(n) << (n - w)) & full_mask(n)
    };
    let mut next = (w <= n).then(|| full_mask(w));
    std::iter::from_fn(move || {
        let cur = next?;
        next = (cur != last).then(|| next_same_weight(cur));
        Some(cur)
    })
}

/// Enumerates `B_r` in (weight, index) order.
pub fn ball_points(n: usize, r: usize) -> Result<Ball> {
    crate::function::check_arity(n)?;
    if r > n {
        return Err(Error::domain(format!("radius {r} exceeds arity {n}")));
    }
    let mut points = Vec::with_capacity(binomial_prefix_sum(n as u32, r as u32) as usize);
    for w in 0..=r {
        points.extend(points_of_weight(n, w));
    }
    Ok(Ball {
        arity: n,
        radius: r,
        points,
    })
}

/// Number of cosets of `Γ(m)` meeting `B_r`.
///
/// The lightest point of `z + Γ(m)` is its representative `z & !m`, so the
/// count is the number of representatives of weight at most `r`.
pub fn covering_coset_count(n: usize, r: usize, m: &FaceMask) -> Result<u128> {
    if m.arity() != n {
        return Err(Error::ArityMismatch {
            left: n,
            right: m.arity(),
        });
    }
    if r > n {
        return Err(Error::domain(format!("radius {r} exceeds arity {n}")));
    }
    let codim = n as u32 - m.dim();
    Ok(binomial_prefix_sum(codim, (r as u32).min(codim)))
}

/// The face spanned by the two highest coordinates `x_{n-1}, x_n`.
pub fn top_two_face(n: usize) -> Result<FaceMask> {
    if n < 2 {
        return Err(Error::domain(format!("arity {n} has no two-dimensional face")));
    }
    FaceMask::new(n, 0b11 << (n - 2))
}
