//! Bit-packed truth tables over the boolean hypercube `F^n`.
//!
//! A point `x = (x_1, ..., x_n)` is stored as the integer
//! `index(x) = x_1 + 2 x_2 + ... + 2^{n-1} x_n`, so coordinate `x_1` is the
//! least significant bit. The same convention is used for face masks, which
//! makes a coordinate subcube a plain integer bitmask.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest arity any table may ever have, independent of the guard.
/// Spectra are stored as `i32`, which holds `±2^30`.
pub const ARITY_LIMIT: usize = 30;

/// Default value of the arity guard (a 2^26-bit table is 8 MiB).
pub const DEFAULT_MAX_ARITY: usize = 26;

/// Environment variable overriding the arity guard.
pub const MAX_ARITY_ENV: &str = "BENTKIT_MAX_ARITY";

/// Current arity guard: [`DEFAULT_MAX_ARITY`] unless overridden through
/// [`MAX_ARITY_ENV`]. Values above [`ARITY_LIMIT`] are clamped.
pub fn max_arity() -> usize {
    static GUARD: OnceLock<usize> = OnceLock::new();
    *GUARD.get_or_init(|| {
        std::env::var(MAX_ARITY_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|v| v.clamp(1, ARITY_LIMIT))
            .unwrap_or(DEFAULT_MAX_ARITY)
    })
}

pub(crate) fn check_arity(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::ArityOutOfRange(n));
    }
    let guard = max_arity();
    if n > guard {
        return Err(Error::resource(format!("arity {n}"), guard));
    }
    Ok(())
}

fn word_count(n: usize) -> usize {
    if n >= 6 {
        1 << (n - 6)
    } else {
        1
    }
}

fn tail_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << n)) - 1
    }
}

/// A point of `F^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    arity: usize,
    bits: u64,
}

impl Point {
    pub fn new(arity: usize, bits: u64) -> Result<Self> {
        if !(1..=64).contains(&arity) {
            return Err(Error::ArityOutOfRange(arity));
        }
        if arity < 64 && bits >> arity != 0 {
            return Err(Error::domain(format!(
                "point {bits:#x} does not fit in {arity} coordinates"
            )));
        }
        Ok(Point { arity, bits })
    }

    /// Builds a point from its coordinates `(x_1, ..., x_n)`.
    pub fn from_coords(coords: &[u8]) -> Result<Self> {
        let mut bits = 0u64;
        for (i, &c) in coords.iter().enumerate() {
            match c {
                0 => {}
                1 => bits |= 1 << i,
                _ => return Err(Error::domain(format!("coordinate {c} is not a bit"))),
            }
        }
        Point::new(coords.len(), bits)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn index(&self) -> u64 {
        self.bits
    }

    /// Hamming weight.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn coords(&self) -> Vec<u8> {
        (0..self.arity).map(|i| ((self.bits >> i) & 1) as u8).collect()
    }

    /// `<x, y> = x_1 y_1 + ... + x_n y_n (mod 2)`.
    pub fn inner_product(&self, other: &Point) -> Result<bool> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(parity(self.bits & other.bits))
    }
}

#[inline]
pub(crate) fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// A boolean function `F^n -> F` stored as a packed truth table.
///
/// Bit `index(x)` of the table holds `f(x)`; bits beyond `2^n` in the last
/// word are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    arity: usize,
    words: Vec<u64>,
}

impl BooleanFunction {
    /// Builds `f` with `f(x) = bits[index(x)]`.
    pub fn from_bits(arity: usize, bits: &[bool]) -> Result<Self> {
        check_arity(arity)?;
        let expected = 1usize << arity;
        if bits.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: bits.len(),
            });
        }
        let mut words = vec![0u64; word_count(arity)];
        for (i, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
            words[i >> 6] |= 1 << (i & 63);
        }
        Ok(BooleanFunction { arity, words })
    }

    /// Builds `f` by evaluating `rule` at every index.
    pub fn from_fn(arity: usize, rule: impl Fn(u64) -> bool) -> Result<Self> {
        check_arity(arity)?;
        let mut words = vec![0u64; word_count(arity)];
        for i in 0..(1u64 << arity) {
            if rule(i) {
                words[(i >> 6) as usize] |= 1 << (i & 63);
            }
        }
        Ok(BooleanFunction { arity, words })
    }

    /// Builds `f` from packed 64-bit words, least significant index first.
    pub fn from_words(arity: usize, words: Vec<u64>) -> Result<Self> {
        check_arity(arity)?;
        let expected = word_count(arity);
        if words.len() != expected {
            return Err(Error::LengthMismatch {
                expected: 1 << arity,
                got: words.len() * 64,
            });
        }
        if words[0] & !tail_mask(arity) != 0 {
            return Err(Error::domain("table has bits set beyond 2^n"));
        }
        Ok(BooleanFunction { arity, words })
    }

    /// Builds a function of at most 6 variables from its table as an integer.
    pub fn from_u64(arity: usize, table: u64) -> Result<Self> {
        if arity > 6 {
            return Err(Error::domain(format!(
                "arity {arity} does not fit in a single word"
            )));
        }
        BooleanFunction::from_words(arity, vec![table])
    }

    pub fn zero(arity: usize) -> Result<Self> {
        check_arity(arity)?;
        Ok(BooleanFunction {
            arity,
            words: vec![0; word_count(arity)],
        })
    }

    pub fn one(arity: usize) -> Result<Self> {
        check_arity(arity)?;
        let mut words = vec![u64::MAX; word_count(arity)];
        words[0] &= tail_mask(arity);
        Ok(BooleanFunction { arity, words })
    }

    /// The linear function `x -> <a, x>`.
    pub fn linear(arity: usize, a: u64) -> Result<Self> {
        BooleanFunction::from_fn(arity, |x| parity(a & x))
    }

    pub(crate) fn from_words_unchecked(arity: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), word_count(arity));
        BooleanFunction { arity, words }
    }

    pub(crate) fn set_bit(&mut self, index: u64, value: bool) {
        let word = &mut self.words[(index >> 6) as usize];
        let bit = 1u64 << (index & 63);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of points, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.arity
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Table bit at `index`. Panics if `index >= 2^n`.
    #[inline]
    pub fn bit(&self, index: u64) -> bool {
        assert!(index < (1u64 << self.arity), "index out of range");
        (self.words[(index >> 6) as usize] >> (index & 63)) & 1 == 1
    }

    pub fn evaluate(&self, x: &Point) -> Result<bool> {
        if x.arity() != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: x.arity(),
            });
        }
        Ok(self.bit(x.index()))
    }

    /// Number of points where `f` is 1.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Pointwise XOR.
    pub fn xor(&self, other: &BooleanFunction) -> Result<BooleanFunction> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BooleanFunction {
            arity: self.arity,
            words,
        })
    }

    /// Complement, `f + 1`.
    pub fn negate(&self) -> BooleanFunction {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        words[0] &= tail_mask(self.arity);
        BooleanFunction {
            arity: self.arity,
            words,
        }
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len() as u64).map(|i| self.bit(i)).collect()
    }

    /// `(-1)^{f(x)}` in index order.
    pub fn signs(&self) -> Vec<i32> {
        (0..self.len() as u64)
            .map(|i| if self.bit(i) { -1 } else { 1 })
            .collect()
    }

    /// Canonical text form `bf:<n>:<hex>`.
    pub fn to_text(&self) -> String {
        let digits = hex_digits(self.arity);
        let mut s = String::with_capacity(digits + 8);
        s.push_str("bf:");
        s.push_str(&self.arity.to_string());
        s.push(':');
        for k in (0..digits).rev() {
            let bit = 4 * k;
            let nibble = (self.words[bit >> 6] >> (bit & 63)) & 0xf;
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s
    }
}

fn hex_digits(n: usize) -> usize {
    (1usize << n).div_ceil(4)
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity <= 8 {
            write!(f, "{}", self.to_text())
        } else {
            write!(f, "bf:{}:<{} words>", self.arity, self.words.len())
        }
    }
}

impl FromStr for BooleanFunction {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let mut parts = text.splitn(3, ':');
        let (Some(prefix), Some(n), Some(hex)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("expected bf:<n>:<hex>, got {text:?}")));
        };
        if prefix != "bf" {
            return Err(Error::Parse(format!("bad prefix {prefix:?}")));
        }
        let n: usize = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad arity {n:?}")))?;
        if n < 1 {
            return Err(Error::Parse("arity must be >= 1".into()));
        }
        if n > ARITY_LIMIT {
            return Err(Error::resource(format!("arity {n}"), max_arity()));
        }
        let digits = hex_digits(n);
        if hex.len() != digits {
            return Err(Error::Parse(format!(
                "expected {digits} hex digits for n={n}, got {}",
                hex.len()
            )));
        }
        let mut f = BooleanFunction::zero(n)?;
        for (k, c) in hex.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {c:?}")))?
                as u64;
            let bit = 4 * k;
            f.words[bit >> 6] |= nibble << (bit & 63);
        }
        if f.words[0] & !tail_mask(n) != 0 {
            return Err(Error::Parse(format!("hex value exceeds 2^{} bits", 1 << n)));
        }
        Ok(f)
    }
}

impl serde::Serialize for BooleanFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and2() -> BooleanFunction {
        BooleanFunction::from_bits(2, &[false, false, false, true]).unwrap()
    }

    #[test]
    fn make_function_examples() {
        assert_eq!(and2().to_text(), "bf:2:8");
        let zero = BooleanFunction::from_bits(1, &[false, false]).unwrap();
        assert_eq!(zero, BooleanFunction::zero(1).unwrap());
        let mut bits = vec![false; 16];
        for i in [3, 7, 11, 12, 13, 14] {
            bits[i] = true;
        }
        let f = BooleanFunction::from_bits(4, &bits).unwrap();
        assert_eq!(f.to_text(), "bf:4:7888");
        // x1x2 + x3x4 evaluated directly
        let g = BooleanFunction::from_fn(4, |x| {
            let b = |i: u32| (x >> i) & 1 == 1;
            (b(0) & b(1)) ^ (b(2) & b(3))
        })
        .unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn make_function_errors() {
        assert_eq!(
            BooleanFunction::from_bits(2, &[false; 3]),
            Err(Error::LengthMismatch {
                expected: 4,
                got: 3
            })
        );
        assert_eq!(
            BooleanFunction::from_bits(0, &[false]),
            Err(Error::ArityOutOfRange(0))
        );
        assert!(matches!(
            BooleanFunction::zero(ARITY_LIMIT + 1),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let and = and2();
        assert!(and.evaluate(&Point::from_coords(&[1, 1]).unwrap()).unwrap());
        assert!(!and.evaluate(&Point::from_coords(&[1, 0]).unwrap()).unwrap());
        let f: BooleanFunction = "bf:4:7888".parse().unwrap();
        assert!(f.evaluate(&Point::from_coords(&[1, 1, 0, 0]).unwrap()).unwrap());
        assert!(matches!(
            and.evaluate(&Point::from_coords(&[1, 1, 0]).unwrap()),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn inner_product_examples() {
        let p = |c: &[u8]| Point::from_coords(c).unwrap();
        assert!(!p(&[1, 1]).inner_product(&p(&[1, 1])).unwrap());
        assert!(!p(&[1, 0]).inner_product(&p(&[0, 1])).unwrap());
        assert!(!p(&[1, 0, 1]).inner_product(&p(&[1, 1, 1])).unwrap());
        assert!(p(&[1, 0, 1]).inner_product(&p(&[1, 1, 0])).unwrap());
        assert!(p(&[1, 0]).inner_product(&p(&[1, 0, 0])).is_err());
    }

    #[test]
    fn point_bounds() {
        assert!(Point::new(2, 4).is_err());
        assert!(Point::from_coords(&[0, 2]).is_err());
        let p = Point::from_coords(&[1, 0, 1, 1]).unwrap();
        assert_eq!(p.index(), 0b1101);
        assert_eq!(p.weight(), 3);
        assert_eq!(p.coords(), vec![1, 0, 1, 1]);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(and2().weight(), 1);
        assert_eq!(BooleanFunction::one(3).unwrap().weight(), 8);
        assert_eq!("bf:4:7888".parse::<BooleanFunction>().unwrap().weight(), 6);
        assert_eq!(BooleanFunction::one(8).unwrap().weight(), 256);
    }

    #[test]
    fn xor_examples() {
        let f: BooleanFunction = "bf:4:7888".parse().unwrap();
        assert_eq!(f.xor(&f).unwrap(), BooleanFunction::zero(4).unwrap());
        assert_eq!(f.xor(&BooleanFunction::zero(4).unwrap()).unwrap(), f);
        // x1x2 + x1 is 1 only at x = (1,0), index 1
        let x1 = BooleanFunction::linear(2, 1).unwrap();
        assert_eq!(and2().xor(&x1).unwrap().to_text(), "bf:2:2");
        assert!(f.xor(&and2()).is_err());
        assert_eq!(f.negate(), f.xor(&BooleanFunction::one(4).unwrap()).unwrap());
    }

    #[test]
    fn parse_examples() {
        assert_eq!("bf:2:8".parse::<BooleanFunction>().unwrap(), and2());
        assert_eq!(
            "bf:2:0".parse::<BooleanFunction>().unwrap(),
            BooleanFunction::zero(2).unwrap()
        );
        assert_eq!(
            "bf:8:ABCDEF0123456789abcdef0123456789abcdef0123456789abcdef0123456789"
                .parse::<BooleanFunction>()
                .unwrap()
                .to_text(),
            "bf:8:abcdef0123456789abcdef0123456789abcdef0123456789abcdef0123456789"
        );
        assert_eq!(BooleanFunction::one(1).unwrap().to_text(), "bf:1:3");
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "", "bf:2", "bx:2:8", "bf:0:0", "bf:-1:0", "bf:2:88", "bf:2:", "bf:2:g", "bf:1:4",
            "bf:3:0",
        ] {
            let err = bad.parse::<BooleanFunction>().unwrap_err();
            assert!(matches!(err, Error::Parse(_)), "{bad:?} gave {err:?}");
        }
    }

    #[test]
    fn index_is_bijective_and_evaluation_matches_bits() {
        for n in 1..=8usize {
            let bits: Vec<bool> = (0..1u64 << n).map(|i| (i * 2654435761) % 7 < 3).collect();
            let f = BooleanFunction::from_bits(n, &bits).unwrap();
            let mut seen = vec![false; 1 << n];
            for i in 0..1u64 << n {
                let coords: Vec<u8> = (0..n).map(|k| ((i >> k) & 1) as u8).collect();
                let p = Point::from_coords(&coords).unwrap();
                assert!(!seen[p.index() as usize]);
                seen[p.index() as usize] = true;
                assert_eq!(p.index(), i);
                assert_eq!(f.evaluate(&p).unwrap(), bits[i as usize]);
            }
        }
    }
}
