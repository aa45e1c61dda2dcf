//! Verification suites: exhaustive checks at small arity and seeded
//! randomized checks above it. Every suite counts the instances it checked
//! and the counterexamples it found; any counterexample is a failure.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bent::{apply_affine, dual_bent, is_bent, random_invertible_with, two_flat_sum_distribution};
use crate::census::{enumerate_bent_by_degree, enumerate_bent_naive};
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::geometry::{ball_points, FaceMask};
use crate::reconstruct::{check_lemma1, reconstruct_from_ball, BallAssignment};
use crate::transforms::{
    check_restriction_identity, degree, fourier_transform, moebius, walsh_fast, walsh_naive,
    IntegerVector,
};

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma1,
    Lemma2,
    Prop1,
    Convolution,
    Parseval,
    Involution,
    Flats,
    CensusAgreement,
    Walsh,
    Closure,
    SumClasses,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Prop1,
        Suite::Convolution,
        Suite::Parseval,
        Suite::Involution,
        Suite::Flats,
        Suite::CensusAgreement,
        Suite::Walsh,
        Suite::Closure,
        Suite::SumClasses,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Prop1 => "prop1",
            Suite::Convolution => "convolution",
            Suite::Parseval => "parseval",
            Suite::Involution => "involution",
            Suite::Flats => "flats",
            Suite::CensusAgreement => "census-agreement",
            Suite::Walsh => "walsh",
            Suite::Closure => "closure",
            Suite::SumClasses => "sum-classes",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(Suite::name).collect();
                Error::Parse(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Suite-specific arity; `None` picks the suite default.
    pub n: Option<usize>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n: None,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n: Option<usize>,
    pub checked: u64,
    pub counterexamples: u64,
    pub first_counterexample: Option<String>,
    /// Named side counts, such as how many triples met the premise.
    pub stats: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite, n: Option<usize>) -> Self {
        SuiteReport {
            suite: suite.name().to_string(),
            n,
            checked: 0,
            counterexamples: 0,
            first_counterexample: None,
            stats: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples == 0
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.counterexamples += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(describe());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.counterexamples += other.failures;
        if self.first_counterexample.is_none() {
            self.first_counterexample = other.first;
        }
        for (k, v) in other.stats {
            *self.stats.entry(k).or_insert(0) += v;
        }
    }

    fn stat(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_string()).or_insert(0) += by;
    }
}

/// Partial result of a parallel shard.
#[derive(Default)]
struct Tally {
    checked: u64,
    failures: u64,
    first: Option<String>,
    stats: BTreeMap<String, u64>,
}

impl Tally {
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    fn combine(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.failures += other.failures;
        self.first = self.first.or(other.first);
        for (k, v) in other.stats {
            *self.stats.entry(k).or_insert(0) += v;
        }
        self
    }
}

/// Uniformly random function of `n` variables.
pub fn random_function<R: Rng>(n: usize, rng: &mut R) -> BooleanFunction {
    let words = if n >= 6 { 1usize << (n - 6) } else { 1 };
    let mask = if n >= 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
    let mut table: Vec<u64> = (0..words).map(|_| rng.gen()).collect();
    table[0] &= mask;
    BooleanFunction::from_words(n, table).expect("valid table")
}

/// Uniformly random face of `F^n` through the origin.
pub fn random_face<R: Rng>(n: usize, rng: &mut R) -> FaceMask {
    FaceMask::new(n, rng.gen::<u64>() & ((1u64 << n) - 1)).expect("mask fits")
}

/// Permutes the values of `f` inside every coset of `Γ^⊥`. The coset sums over
/// `Γ^⊥` are unchanged, hence so is `W_f` on `Γ`.
pub fn shuffle_within_cosets<R: Rng>(
    f: &BooleanFunction,
    gamma: &FaceMask,
    rng: &mut R,
) -> BooleanFunction {
    let dual = gamma.dual();
    let mut bits = f.to_bits();
    for rep in gamma.indices() {
        let members: Vec<u64> = dual.indices().map(|s| rep ^ s).collect();
        let mut values: Vec<bool> = members.iter().map(|&x| bits[x as usize]).collect();
        values.shuffle(rng);
        for (&x, v) in members.iter().zip(values) {
            bits[x as usize] = v;
        }
    }
    BooleanFunction::from_bits(f.arity(), &bits).expect("same arity")
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// All pairs `(f, g)` of `n`-variable functions against every dimension-1
/// coordinate face.
pub fn lemma1_exhaustive(n: usize) -> Result<SuiteReport> {
    if !(1..=3).contains(&n) {
        return Err(Error::resource(format!("exhaustive lemma1 at arity {n}"), 3));
    }
    let size = 1u64 << (1 << n);
    let faces: Vec<FaceMask> = (0..n).map(|i| FaceMask::new(n, 1 << i).unwrap()).collect();
    let fs: Vec<BooleanFunction> = (0..size)
        .map(|t| BooleanFunction::from_u64(n, t).unwrap())
        .collect();
    let tally = fs
        .par_iter()
        .map(|f| {
            let mut t = Tally::default();
            for g in &fs {
                for gamma in &faces {
                    let r = check_lemma1(f, g, gamma).expect("same arity");
                    if r.premise {
                        *t.stats.entry("premise_true".into()).or_insert(0) += 1;
                    }
                    t.record(r.holds, || format!("f={f} g={g} mask={:#x}", gamma.mask()));
                }
            }
            t
        })
        .reduce(Tally::default, Tally::combine);
    let mut report = SuiteReport::new(Suite::Lemma1, Some(n));
    report.merge(tally);
    report.notes.push("exhaustive over ordered pairs and dimension-1 faces".into());
    Ok(report)
}

/// Random triples at arity `n`. Half of the `g` are independent of `f`; the
/// other half are coset shuffles of `f`, which meet the premise.
pub fn lemma1_random(n: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    crate::function::check_arity(n)?;
    let mut report = SuiteReport::new(Suite::Lemma1, Some(n));
    let mut rng = rng_for(seed, 1);
    for i in 0..samples {
        let f = random_function(n, &mut rng);
        let gamma = random_face(n, &mut rng);
        let g = if i % 2 == 0 {
            random_function(n, &mut rng)
        } else {
            shuffle_within_cosets(&f, &gamma, &mut rng)
        };
        let r = check_lemma1(&f, &g, &gamma)?;
        if r.premise {
            report.stat("premise_true", 1);
        }
        report.record(r.holds, || format!("f={f} g={g} mask={:#x}", gamma.mask()));
    }
    Ok(report)
}

fn degree_bounded(n: usize, r: usize, sel: u64, ball: &[u64]) -> BooleanFunction {
    let mut anf = BooleanFunction::zero(n).unwrap();
    for (i, &y) in ball.iter().enumerate() {
        if sel >> i & 1 == 1 {
            anf.set_bit(y, true);
        }
    }
    debug_assert!(degree(&moebius(&anf)) as usize <= r);
    moebius(&anf)
}

/// For every radius, all degree-bounded functions round-trip through their
/// ball restriction and have pairwise distinct restrictions.
pub fn lemma2_exhaustive(n: usize) -> Result<SuiteReport> {
    if !(1..=4).contains(&n) {
        return Err(Error::resource(format!("exhaustive lemma2 at arity {n}"), 4));
    }
    let mut report = SuiteReport::new(Suite::Lemma2, Some(n));
    for r in 0..=n {
        let ball = ball_points(n, r)?;
        let mut seen = std::collections::HashSet::new();
        for sel in 0..1u64 << ball.len() {
            let g = degree_bounded(n, r, sel, ball.indices());
            let a = BallAssignment::restrict(&g, r)?;
            let distinct = seen.insert(a.values().to_vec());
            let back = reconstruct_from_ball(&a);
            report.record(distinct && back == g, || format!("g={g} r={r}"));
        }
        report.stat(&format!("functions_r{r}"), 1 << ball.len());
    }
    Ok(report)
}

/// Random degree-`n/2` functions at arity `n` round-trip through `B_{n/2}`.
pub fn lemma2_random(n: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let r = n / 2;
    let ball = ball_points(n, r)?;
    let mut report = SuiteReport::new(Suite::Lemma2, Some(n));
    let mut rng = rng_for(seed, 2);
    for _ in 0..samples {
        let mut anf = BooleanFunction::zero(n)?;
        for &y in ball.indices() {
            anf.set_bit(y, rng.gen());
        }
        let g = moebius(&anf);
        let back = reconstruct_from_ball(&BallAssignment::restrict(&g, r)?);
        report.record(back == g, || format!("g={g} r={r}"));
    }
    Ok(report)
}

/// Bent functions stay bent under random affine maps. At `n <= 4` every bent
/// function is used; above that, random affine images of the quadratic
/// `x_1 x_2 + x_3 x_4 + ...` serve as inputs.
pub fn prop1(n: usize, maps_per_function: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::domain(format!("bent functions need even arity, got {n}")));
    }
    let mut rng = rng_for(seed, 3);
    let inputs: Vec<BooleanFunction> = if n <= 4 {
        enumerate_bent_by_degree(n)?.functions.unwrap_or_default()
    } else {
        let quad = BooleanFunction::from_fn(n, |x| {
            (0..n / 2).fold(false, |acc, i| acc ^ (x >> (2 * i) & x >> (2 * i + 1) & 1 == 1))
        })?;
        (0..samples)
            .map(|_| apply_affine(&quad, &random_invertible_with(n, &mut rng).unwrap()).unwrap())
            .collect()
    };
    let mut report = SuiteReport::new(Suite::Prop1, Some(n));
    report.stat("inputs", inputs.len() as u64);
    for f in &inputs {
        if !is_bent(f) {
            report.record(false, || format!("input {f} is not bent"));
            continue;
        }
        for _ in 0..maps_per_function {
            let t = random_invertible_with(n, &mut rng)?;
            let g = apply_affine(f, &t)?;
            report.record(is_bent(&g), || format!("f={f} map={t:?}"));
        }
    }
    Ok(report)
}

/// Restriction identity on every function and mask at `n = 2`, then random
/// `(f, mask)` with `1 <= n <= max_n`.
pub fn convolution(max_n: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Convolution, Some(max_n));
    for t in 0..16u64 {
        let f = BooleanFunction::from_u64(2, t)?;
        for m in 0..4 {
            let gamma = FaceMask::new(2, m)?;
            report.record(check_restriction_identity(&f, &gamma)?, || {
                format!("f={f} mask={m:#x}")
            });
        }
    }
    report.stat("exhaustive_n2", 64);
    let mut rng = rng_for(seed, 4);
    for _ in 0..samples {
        let n = rng.gen_range(1..=max_n);
        let f = random_function(n, &mut rng);
        let gamma = random_face(n, &mut rng);
        report.record(check_restriction_identity(&f, &gamma)?, || {
            format!("f={f} mask={:#x}", gamma.mask())
        });
    }
    Ok(report)
}

/// `sum_y W_f(y)^2 = 2^{2n}` on all functions at `n = 2` and random ones up
/// to `max_n`; also checks `W_f(0) = 2^n - 2 wt(f)`.
pub fn parseval(max_n: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Parseval, Some(max_n));
    let check = |f: &BooleanFunction, report: &mut SuiteReport| -> Result<()> {
        let n = f.arity();
        let w = walsh_fast(f)?;
        let ok = w.parseval_sum() == 1u64 << (2 * n)
            && w.get(0) as i64 == (1i64 << n) - 2 * f.weight() as i64;
        report.record(ok, || format!("f={f}"));
        Ok(())
    };
    for t in 0..16u64 {
        check(&BooleanFunction::from_u64(2, t)?, &mut report)?;
    }
    let mut rng = rng_for(seed, 5);
    for _ in 0..samples {
        let n = rng.gen_range(1..=max_n);
        check(&random_function(n, &mut rng), &mut report)?;
    }
    Ok(report)
}

/// Fast and naive Walsh transforms agree: exhaustive for `n <= 3`, random
/// for `4 <= n <= max_n`.
pub fn walsh_agreement(max_n: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Walsh, Some(max_n));
    for n in 1..=3usize {
        for t in 0..1u64 << (1 << n) {
            let f = BooleanFunction::from_u64(n, t)?;
            report.record(walsh_fast(&f)? == walsh_naive(&f)?, || format!("f={f}"));
        }
    }
    let mut rng = rng_for(seed, 6);
    if max_n >= 4 {
        for _ in 0..samples {
            let n = rng.gen_range(4..=max_n);
            let f = random_function(n, &mut rng);
            report.record(walsh_fast(&f)? == walsh_naive(&f)?, || format!("f={f}"));
        }
    }
    Ok(report)
}

/// `M[M[f]] = f` exhaustively for `n <= 4` and randomly up to `max_n`; the
/// double Fourier transform scales by `2^n` for random `n <= 12`.
pub fn involution(max_n: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Involution, Some(max_n));
    for n in 1..=4usize {
        for t in 0..1u64 << (1 << n) {
            let f = BooleanFunction::from_u64(n, t)?;
            report.record(moebius(&moebius(&f)) == f, || format!("f={f}"));
        }
    }
    let mut rng = rng_for(seed, 7);
    for _ in 0..samples {
        let n = rng.gen_range(1..=max_n);
        let f = random_function(n, &mut rng);
        report.record(moebius(&moebius(&f)) == f, || format!("f={f}"));
    }
    for _ in 0..samples {
        let n = rng.gen_range(1..=max_n.min(12));
        let f = random_function(n, &mut rng);
        let s = IntegerVector::signs_of(&f);
        let twice = fourier_transform(&fourier_transform(&s));
        let ok = twice
            .values()
            .iter()
            .zip(s.values())
            .all(|(a, b)| *a == b << n);
        report.record(ok, || format!("double transform of {f}"));
    }
    Ok(report)
}

/// Every bent function at `n = 4` has exactly 80 of its 140 two-dimensional
/// flats with sum `±2`.
pub fn flats() -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Flats, Some(4));
    let bents = enumerate_bent_by_degree(4)?.functions.unwrap_or_default();
    let mut histogram: BTreeMap<i32, u64> = BTreeMap::new();
    for b in &bents {
        let d = two_flat_sum_distribution(b)?;
        for (k, v) in d.counts() {
            *histogram.entry(*k).or_insert(0) += v;
        }
        report.record(d.total() == 140 && d.pm2_count() == 80, || {
            format!("b={b} total={} pm2={}", d.total(), d.pm2_count())
        });
    }
    for (k, v) in histogram {
        report.stat(&format!("sum_{k}"), v);
    }
    report
        .notes
        .push("measured ±2 proportion over affine flats at n=4 is 80/140 = 4/7".into());
    Ok(report)
}

/// Naive and degree-restricted census agree at `n = 2` and `n = 4`.
pub fn census_agreement() -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::CensusAgreement, None);
    for (n, expected) in [(2usize, 8u64), (4, 896)] {
        let naive = enumerate_bent_naive(n)?;
        let by_degree = enumerate_bent_by_degree(n)?;
        report.record(
            naive.count == expected && naive.functions == by_degree.functions,
            || format!("n={n}: naive {} vs degree {}", naive.count, by_degree.count),
        );
        report.stat(&format!("count_n{n}"), naive.count);
    }
    // at n = 2 bent means odd weight
    let odd = (0..16u64).filter(|t| t.count_ones() % 2 == 1).count() as u64;
    report.record(odd == 8, || format!("{odd} odd-weight tables at n=2"));
    Ok(report)
}

/// Degree bound and dual closure over every bent function at `n = 4`.
pub fn closure() -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Closure, Some(4));
    for b in enumerate_bent_by_degree(4)?.functions.unwrap_or_default() {
        report.record(degree(&b) <= 2, || format!("deg {b} = {}", degree(&b)));
        let ok = match dual_bent(&b) {
            Ok(g) => is_bent(&g) && dual_bent(&g).as_ref() == Ok(&b),
            Err(_) => false,
        };
        report.record(ok, || format!("dual closure fails at {b}"));
    }
    Ok(report)
}

/// Sizes of the classes of 4-bit sign patterns by their sum.
pub fn sum_class_sizes() -> BTreeMap<i32, u64> {
    let mut classes = BTreeMap::new();
    for pattern in 0u32..16 {
        let s: i32 = (0..4).map(|i| if pattern >> i & 1 == 1 { -1 } else { 1 }).sum();
        *classes.entry(s).or_insert(0) += 1;
    }
    classes
}

pub fn sum_classes() -> SuiteReport {
    let mut report = SuiteReport::new(Suite::SumClasses, None);
    let classes = sum_class_sizes();
    let expected: BTreeMap<i32, u64> = [(-4, 1), (-2, 4), (0, 6), (2, 4), (4, 1)].into();
    report.record(classes == expected, || format!("{classes:?}"));
    for (k, v) in classes {
        report.stat(&format!("sum_{k}"), v);
    }
    report
}

/// Runs `suite` with the CLI defaults filled in.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let VerifyOptions { n, samples, seed } = *opts;
    match suite {
        Suite::Lemma1 => match n.unwrap_or(3) {
            n @ 1..=3 => lemma1_exhaustive(n),
            n => lemma1_random(n, samples, seed),
        },
        Suite::Lemma2 => match n.unwrap_or(4) {
            n @ 1..=4 => lemma2_exhaustive(n),
            n => lemma2_random(n, samples, seed),
        },
        Suite::Prop1 => prop1(n.unwrap_or(4), 10, samples, seed),
        Suite::Convolution => convolution(n.unwrap_or(10), samples, seed),
        Suite::Parseval => parseval(n.unwrap_or(12), samples, seed),
        Suite::Walsh => walsh_agreement(n.unwrap_or(10).min(crate::transforms::WALSH_NAIVE_CAP), samples, seed),
        Suite::Involution => involution(n.unwrap_or(16), samples, seed),
        Suite::Flats => flats(),
        Suite::CensusAgreement => census_agreement(),
        Suite::Closure => closure(),
        Suite::SumClasses => Ok(sum_classes()),
    }
}
