//! Small exact combinatorics shared by the geometry and bound code.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// `C(n, k)`, zero when `k > n`. Exact for every `n <= 100`.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `sum_{i=0}^{d} C(n, i)`.
pub fn binomial_prefix_sum(n: u32, d: u32) -> u128 {
    (0..=d).map(|i| binomial(n, i)).sum()
}

/// Gaussian binomial `[n, k]_2`, the number of `k`-dimensional subspaces of `F_2^n`.
pub fn gaussian_binomial2(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= (BigUint::one() << (n - i)) - BigUint::one();
        den *= (BigUint::one() << (i + 1)) - BigUint::one();
    }
    num / den
}

/// `log2(x)` for an arbitrarily large positive integer.
pub fn log2_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log2 of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}
