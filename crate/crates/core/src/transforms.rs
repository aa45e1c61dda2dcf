//! Walsh-Hadamard and Möbius transforms, algebraic degree, and the
//! convolution identities relating them.
//!
//! All arithmetic is exact. The fast transforms run an in-place butterfly on a
//! working copy; stage `i` mixes index bit `i`, i.e. coordinate `x_{i+1}`.

use std::ops::{Add, Sub};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function::{check_arity, parity, BooleanFunction};
use crate::geometry::FaceMask;
use crate::math::binomial_prefix_sum;

/// Largest arity accepted by [`walsh_naive`], which costs `4^n`.
pub const WALSH_NAIVE_CAP: usize = 12;

/// `W_f(y)` for every `y`, in index order.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct WalshSpectrum {
    #[serde(rename = "n")]
    arity: usize,
    values: Vec<i32>,
}

impl WalshSpectrum {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn get(&self, y: u64) -> i32 {
        self.values[y as usize]
    }

    /// `sum_y W_f(y)^2`; equals `2^{2n}` for every boolean function.
    pub fn parseval_sum(&self) -> u64 {
        self.values.iter().map(|&v| (v as i64 * v as i64) as u64).sum()
    }

    pub fn into_values(self) -> Vec<i32> {
        self.values
    }
}

/// A real-valued (here integer-valued) function on `F^n`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IntegerVector {
    #[serde(rename = "n")]
    arity: usize,
    values: Vec<i64>,
}

impl IntegerVector {
    pub fn new(arity: usize, values: Vec<i64>) -> Result<Self> {
        check_arity(arity)?;
        if values.len() != 1 << arity {
            return Err(Error::LengthMismatch {
                expected: 1 << arity,
                got: values.len(),
            });
        }
        Ok(IntegerVector { arity, values })
    }

    /// Indicator `1_{Γ}` of a face.
    pub fn indicator(face: &FaceMask) -> Result<Self> {
        let n = face.arity();
        check_arity(n)?;
        let values = (0..1u64 << n)
            .map(|x| face.contains(x) as i64)
            .collect();
        Ok(IntegerVector { arity: n, values })
    }

    /// The point mass at `at`.
    pub fn delta(arity: usize, at: u64) -> Result<Self> {
        check_arity(arity)?;
        let mut values = vec![0; 1 << arity];
        *values
            .get_mut(at as usize)
            .ok_or_else(|| Error::domain(format!("index {at} out of range")))? = 1;
        Ok(IntegerVector { arity, values })
    }

    /// `(-1)^{f(x)}`.
    pub fn signs_of(f: &BooleanFunction) -> Self {
        IntegerVector {
            arity: f.arity(),
            values: f.signs().into_iter().map(i64::from).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

fn butterfly<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let len = data.len();
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half <<= 1;
    }
}

/// Unnormalized Fourier transform `ĝ(y) = sum_x g(x) (-1)^{<x,y>}`.
///
/// Applying it twice multiplies by `2^n`.
pub fn fourier_transform(g: &IntegerVector) -> IntegerVector {
    let mut values = g.values.clone();
    butterfly(&mut values);
    IntegerVector {
        arity: g.arity,
        values,
    }
}

/// Walsh-Hadamard spectrum in `O(n 2^n)`.
pub fn walsh_fast(f: &BooleanFunction) -> Result<WalshSpectrum> {
    check_arity(f.arity())?;
    let mut values = f.signs();
    butterfly(&mut values);
    Ok(WalshSpectrum {
        arity: f.arity(),
        values,
    })
}

/// Walsh-Hadamard spectrum by direct double summation.
pub fn walsh_naive(f: &BooleanFunction) -> Result<WalshSpectrum> {
    let n = f.arity();
    if n > WALSH_NAIVE_CAP {
        return Err(Error::resource(format!("naive Walsh at arity {n}"), WALSH_NAIVE_CAP));
    }
    let size = 1u64 << n;
    let values = (0..size)
        .map(|y| {
            (0..size)
                .map(|x| if f.bit(x) ^ parity(x & y) { -1 } else { 1 })
                .sum()
        })
        .collect();
    Ok(WalshSpectrum { arity: n, values })
}

/// Spectra of many functions, evaluated in parallel, results in input order.
pub fn walsh_batch(fs: &[BooleanFunction]) -> Vec<Result<WalshSpectrum>> {
    fs.par_iter().map(walsh_fast).collect()
}

const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// Möbius transform `M[f](y) = XOR_{x <= y} f(x)`, the ANF coefficient table.
/// It is an involution.
pub fn moebius(f: &BooleanFunction) -> BooleanFunction {
    let n = f.arity();
    let mut words = f.words().to_vec();
    for (i, low) in LOW_HALF.iter().enumerate().take(n.min(6)) {
        let shift = 1u32 << i;
        for w in words.iter_mut() {
            *w ^= (*w & low) << shift;
        }
    }
    let mut step = 1;
    while step < words.len() {
        for block in words.chunks_exact_mut(2 * step) {
            let (lo, hi) = block.split_at_mut(step);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                *b ^= a;
            }
        }
        step <<= 1;
    }
    BooleanFunction::from_words_unchecked(n, words)
}

/// [`moebius`] on a raw bit table whose length must be a power of two `>= 2`.
pub fn moebius_bits(bits: &[bool]) -> Result<Vec<bool>> {
    let len = bits.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::domain(format!(
            "table length {len} is not 2^n with n >= 1"
        )));
    }
    let f = BooleanFunction::from_bits(len.trailing_zeros() as usize, bits)?;
    Ok(moebius(&f).to_bits())
}

/// Indices of set bits, ascending.
pub(crate) fn support(f: &BooleanFunction) -> impl Iterator<Item = u64> + '_ {
    f.words().iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let tz = w.trailing_zeros() as u64;
            w &= w - 1;
            Some(((wi as u64) << 6) | tz)
        })
    })
}

/// Algebraic degree; constants (including zero) have degree 0.
pub fn degree(f: &BooleanFunction) -> u32 {
    support(&moebius(f))
        .map(|y| y.count_ones())
        .max()
        .unwrap_or(0)
}

/// `log2` of the number of functions of degree at most `d`:
/// `sum_{i=0}^{d} C(n, i)`.
pub fn degree_space_log2(n: usize, d: usize) -> Result<u128> {
    if d > n {
        return Err(Error::domain(format!("degree {d} exceeds arity {n}")));
    }
    if n > 100 {
        return Err(Error::ArityOutOfRange(n));
    }
    Ok(binomial_prefix_sum(n as u32, d as u32))
}

/// `(f * g)(z) = sum_x (-1)^{f(x)} g(z + x)`, summed directly over the
/// support of `g`.
pub fn convolve_pm(f: &BooleanFunction, g: &IntegerVector) -> Result<IntegerVector> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            left: f.arity(),
            right: g.arity(),
        });
    }
    let size = f.len();
    let mut out = vec![0i64; size];
    for (w, &gw) in g.values.iter().enumerate().filter(|(_, v)| **v != 0) {
        for (z, o) in out.iter_mut().enumerate() {
            let s = if f.bit((z ^ w) as u64) { -1 } else { 1 };
            *o += s * gw;
        }
    }
    IntegerVector::new(f.arity(), out)
}

/// Both sides of `(-1)^f * 1_{Γ^⊥} = 2^{-dim Γ} FT(FT((-1)^f) · 1_Γ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionSides {
    pub convolution: IntegerVector,
    /// `FT(FT((-1)^f) · 1_Γ)` before the division by `2^{dim Γ}`.
    pub scaled_transform: IntegerVector,
    pub dim: u32,
}

impl RestrictionSides {
    pub fn agree(&self) -> bool {
        let scale = 1i64 << self.dim;
        self.convolution
            .values
            .iter()
            .zip(&self.scaled_transform.values)
            .all(|(&lhs, &rhs)| rhs % scale == 0 && lhs == rhs / scale)
    }
}

pub fn restriction_sides(f: &BooleanFunction, gamma: &FaceMask) -> Result<RestrictionSides> {
    if gamma.arity() != f.arity() {
        return Err(Error::ArityMismatch {
            left: f.arity(),
            right: gamma.arity(),
        });
    }
    let convolution = convolve_pm(f, &IntegerVector::indicator(&gamma.dual())?)?;
    let mut spectrum = fourier_transform(&IntegerVector::signs_of(f));
    for (y, v) in spectrum.values.iter_mut().enumerate() {
        if !gamma.contains(y as u64) {
            *v = 0;
        }
    }
    Ok(RestrictionSides {
        convolution,
        scaled_transform: fourier_transform(&spectrum),
        dim: gamma.dim(),
    })
}

/// Checks the restriction identity for `f` and the face `gamma` exactly.
pub fn check_restriction_identity(f: &BooleanFunction, gamma: &FaceMask) -> Result<bool> {
    Ok(restriction_sides(f, gamma)?.agree())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(s: &str) -> BooleanFunction {
        s.parse().unwrap()
    }

    /// ANF by per-point XOR over the subcube below y.
    fn moebius_oracle(f: &BooleanFunction) -> BooleanFunction {
        BooleanFunction::from_fn(f.arity(), |y| {
            crate::geometry::subsets(y).fold(false, |acc, x| acc ^ f.bit(x))
        })
        .unwrap()
    }

    #[test]
    fn walsh_examples() {
        assert_eq!(walsh_fast(&bf("bf:2:0")).unwrap().values(), [4, 0, 0, 0]);
        assert_eq!(walsh_fast(&bf("bf:2:8")).unwrap().values(), [2, 2, 2, -2]);
        assert_eq!(walsh_fast(&bf("bf:2:a")).unwrap().values(), [0, 4, 0, 0]);
        assert_eq!(walsh_naive(&bf("bf:2:8")).unwrap().values(), [2, 2, 2, -2]);
        assert_eq!(walsh_naive(&bf("bf:1:3")).unwrap().values(), [-2, 0]);
        assert!(matches!(
            walsh_naive(&BooleanFunction::zero(13).unwrap()),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn walsh_fast_matches_naive_exhaustively() {
        for n in 1..=3usize {
            for t in 0..1u64 << (1 << n) {
                let f = BooleanFunction::from_u64(n, t).unwrap();
                assert_eq!(walsh_fast(&f).unwrap(), walsh_naive(&f).unwrap());
            }
        }
    }

    #[test]
    fn walsh_batch_keeps_order() {
        let fs: Vec<_> = (0..16).map(|t| BooleanFunction::from_u64(2, t).unwrap()).collect();
        let batch = walsh_batch(&fs);
        for (f, w) in fs.iter().zip(batch) {
            assert_eq!(w.unwrap(), walsh_naive(f).unwrap());
        }
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(&bf("bf:2:8")), bf("bf:2:8"));
        assert_eq!(moebius(&bf("bf:2:f")), bf("bf:2:1"));
        assert_eq!(moebius(&bf("bf:2:0")), bf("bf:2:0"));
        assert_eq!(
            moebius_bits(&[true, true, true, true]).unwrap(),
            [true, false, false, false]
        );
        assert!(moebius_bits(&[true, false, true]).is_err());
        assert!(moebius_bits(&[true]).is_err());
    }

    #[test]
    fn moebius_matches_oracle() {
        for n in 1..=4usize {
            for t in 0..1u64 << (1 << n) {
                let f = BooleanFunction::from_u64(n, t).unwrap();
                assert_eq!(moebius(&f), moebius_oracle(&f));
            }
        }
        // multi-word tables
        for n in 7..=9usize {
            let f = BooleanFunction::from_fn(n, |x| (x * 0x9e37_79b9) >> 7 & 1 == 1).unwrap();
            assert_eq!(moebius(&f), moebius_oracle(&f));
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&bf("bf:2:0")), 0);
        assert_eq!(degree(&bf("bf:2:f")), 0);
        assert_eq!(degree(&bf("bf:2:8")), 2);
        assert_eq!(degree(&BooleanFunction::linear(2, 0b11).unwrap()), 1);
        assert_eq!(degree(&bf("bf:4:7888")), 2);
    }

    #[test]
    fn degree_space_examples() {
        assert_eq!(degree_space_log2(4, 2).unwrap(), 11);
        assert_eq!(degree_space_log2(7, 7).unwrap(), 128);
        assert_eq!(degree_space_log2(2, 1).unwrap(), 3);
        assert!(degree_space_log2(2, 3).is_err());
    }

    #[test]
    fn degree_census_matches_degree_space() {
        let n = 3;
        let mut by_degree = [0u128; 4];
        for t in 0..256u64 {
            let f = BooleanFunction::from_u64(n, t).unwrap();
            let d = degree(&f) as usize;
            let anf = moebius(&f);
            for (bound, slot) in by_degree.iter_mut().enumerate() {
                let vanishes = support(&anf).all(|y| y.count_ones() as usize <= bound);
                assert_eq!(d <= bound, vanishes);
                if d <= bound {
                    *slot += 1;
                }
            }
        }
        for (d, count) in by_degree.iter().enumerate() {
            assert_eq!(*count, 1u128 << degree_space_log2(n, d).unwrap());
        }
    }

    #[test]
    fn convolution_examples() {
        let f = bf("bf:3:5a");
        let out = convolve_pm(&f, &IntegerVector::delta(3, 0).unwrap()).unwrap();
        assert_eq!(out.values(), IntegerVector::signs_of(&f).values());
        let ones = IntegerVector::new(2, vec![1; 4]).unwrap();
        assert_eq!(convolve_pm(&bf("bf:2:0"), &ones).unwrap().values(), [4, 4, 4, 4]);
        assert!(convolve_pm(&f, &ones).is_err());
    }

    #[test]
    fn convolution_theorem() {
        // 2^n f*g = FT(FT f · FT g)
        let f = bf("bf:3:b4");
        let g = IntegerVector::new(3, vec![3, -1, 0, 2, 5, 0, -4, 1]).unwrap();
        let lhs = convolve_pm(&f, &g).unwrap();
        let ff = fourier_transform(&IntegerVector::signs_of(&f));
        let fg = fourier_transform(&g);
        let prod: Vec<i64> = ff.values().iter().zip(fg.values()).map(|(a, b)| a * b).collect();
        let rhs = fourier_transform(&IntegerVector::new(3, prod).unwrap());
        let scaled: Vec<i64> = lhs.values().iter().map(|v| v * 8).collect();
        assert_eq!(scaled, rhs.values());
    }

    #[test]
    fn restriction_identity_examples() {
        let and = bf("bf:2:8");
        assert!(check_restriction_identity(&and, &FaceMask::full(2).unwrap()).unwrap());
        let sides = restriction_sides(&and, &FaceMask::new(2, 0b01).unwrap()).unwrap();
        // Γ = {00,10}, Γ^⊥ = {00,01}: sums over {z, z + index 2}
        assert_eq!(sides.convolution.values(), [2, 0, 2, 0]);
        assert!(sides.agree());
        assert!(check_restriction_identity(&and, &FaceMask::new(3, 1).unwrap()).is_err());
    }

    #[test]
    fn fourier_twice_scales() {
        let f = bf("bf:4:7888");
        let s = IntegerVector::signs_of(&f);
        let twice = fourier_transform(&fourier_transform(&s));
        let expect: Vec<i64> = s.values().iter().map(|v| 16 * v).collect();
        assert_eq!(twice.values(), expect);
    }
}
