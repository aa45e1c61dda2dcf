//! Exact evaluation of the counting quantities bounding the number of bent
//! functions, and a report comparing them with known counts.
//!
//! Integer exponents are computed exactly. Only `log2 a_n` and the
//! `log2 6` factor are floating point; their relative error is below `1e-12`.
//!
//! The theorem-level quantities are concrete surrogates of asymptotic
//! formulas carrying `(1 + o(1))` factors, so no fixed-`n` value certifies
//! anything. The report says so instead of hiding the numbers.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bent::affine_group_size_log2;
use crate::error::{Error, Result};
use crate::geometry::{covering_coset_count, top_two_face};
use crate::math::{binomial, binomial_prefix_sum, log2_big};

/// Largest arity accepted by the bound arithmetic.
pub const BOUND_ARITY_CAP: usize = 64;

fn even_arity(n: usize, min: usize) -> Result<()> {
    if n > BOUND_ARITY_CAP {
        return Err(Error::ArityOutOfRange(n));
    }
    if n % 2 == 1 {
        return Err(Error::domain(format!("arity must be even, got {n}")));
    }
    if n < min {
        return Err(Error::domain(format!("arity must be at least {min}, got {n}")));
    }
    Ok(())
}

/// `log2` of the degree bound: `2^{n-1} + C(n, n/2) / 2`.
pub fn trivial_upper_log2(n: usize) -> Result<u128> {
    even_arity(n, 2)?;
    Ok((1u128 << (n - 1)) + binomial(n as u32, n as u32 / 2) / 2)
}

/// `2^{n-2} + C(n, n/2) / 2`, the lower bound implied by the decomposition
/// conjecture.
pub fn tokareva_lower_log2(n: usize) -> Result<u128> {
    even_arity(n, 2)?;
    Ok((1u128 << (n - 2)) + binomial(n as u32, n as u32 / 2) / 2)
}

/// `log2 T_n = sum_{i=0}^{n/2} C(n-2, i)`: restrictions of degree-`n/2`
/// functions to a face of dimension `n - 2`.
pub fn t_n_log2(n: usize) -> Result<u128> {
    even_arity(n, 4)?;
    Ok(binomial_prefix_sum(n as u32 - 2, n as u32 / 2))
}

/// Cosets of the face spanned by the two top coordinates meeting `B_{n/2}`.
pub fn q_n(n: usize) -> Result<u128> {
    even_arity(n, 4)?;
    covering_coset_count(n, n / 2, &top_two_face(n)?)
}

/// `log2 a_n`, the exact affine-orbit size.
pub fn a_n_log2(n: usize) -> Result<f64> {
    affine_group_size_log2(n)
}

/// `log2(a_n T_n 4^{Q_n/2} 6^{3 Q_n / 8})`.
pub fn theorem_upper_log2(n: usize) -> Result<f64> {
    even_arity(n, 4)?;
    let q = q_n(n)? as f64;
    Ok(a_n_log2(n)? + t_n_log2(n)? as f64 + q + 3.0 * q / 8.0 * 6f64.log2())
}

/// `log2(6^{3 · 2^{n-6}} 2^{2^{n-2}})`.
pub fn headline_log2(n: usize) -> Result<f64> {
    even_arity(n, 6)?;
    Ok(3.0 * (1u128 << (n - 6)) as f64 * 6f64.log2() + (1u128 << (n - 2)) as f64)
}

/// `3 · 2^{n-3}`.
pub fn simplified_log2(n: usize) -> Result<u128> {
    even_arity(n, 4)?;
    Ok(3u128 << (n - 3))
}

/// `3 · 2^{n-3} - headline_log2(n) = (8 - 3 log2 6) · 2^{n-6}`.
pub fn headline_gap(n: usize) -> Result<f64> {
    even_arity(n, 6)?;
    Ok((8.0 - 3.0 * 6f64.log2()) * (1u128 << (n - 6)) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Computed by this crate's census.
    Census,
    /// Loaded from a user-supplied file.
    External,
}

/// A known number of bent functions for one arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownCount {
    pub n: usize,
    pub count: BigUint,
    pub source: String,
    pub provenance: Provenance,
}

impl KnownCount {
    pub fn census(n: usize, count: u64) -> Self {
        KnownCount {
            n,
            count: BigUint::from(count),
            source: "census".into(),
            provenance: Provenance::Census,
        }
    }

    pub fn log2(&self) -> f64 {
        log2_big(&self.count)
    }
}

#[derive(Deserialize)]
struct KnownCountEntry {
    n: usize,
    count: String,
    source: String,
}

/// Parses `[{"n": int, "count": "<decimal>", "source": string}, ...]`.
pub fn parse_known_counts(text: &str) -> Result<Vec<KnownCount>> {
    let entries: Vec<KnownCountEntry> =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("known counts: {e}")))?;
    let mut out: Vec<KnownCount> = Vec::with_capacity(entries.len());
    for e in entries {
        if e.count.is_empty() || !e.count.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Input(format!(
                "count for n={} is not a decimal string: {:?}",
                e.n, e.count
            )));
        }
        let count: BigUint = e.count.parse().expect("digits only");
        if count == BigUint::default() {
            return Err(Error::Input(format!("count for n={} is zero", e.n)));
        }
        if out.iter().any(|k| k.n == e.n) {
            return Err(Error::Input(format!("duplicate entry for n={}", e.n)));
        }
        out.push(KnownCount {
            n: e.n,
            count,
            source: e.source,
            provenance: Provenance::External,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlagKind {
    /// An upper bound evaluates below the known count.
    AsymptoticOnly,
    /// A lower bound evaluates above the known count.
    LowerExceedsKnown,
    /// An upper bound exceeds `2^n`, the log of the number of all functions.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundFlag {
    pub field: &'static str,
    pub kind: FlagKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnownCountReport {
    pub count: String,
    pub source: String,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub trivial_upper_log2: u128,
    pub tokareva_lower_log2: u128,
    pub t_n_log2: Option<u128>,
    pub q_n: Option<u128>,
    pub a_n_log2: f64,
    /// `log2 T_n + Q_n`, the exact part of the theorem exponent.
    pub theorem_exact_log2: Option<u128>,
    /// `log2 a_n + (3 Q_n / 8) log2 6`, the real-valued part.
    pub theorem_real_log2: Option<f64>,
    pub theorem_upper_log2: Option<f64>,
    pub headline_log2: Option<f64>,
    pub simplified_log2: Option<u128>,
    pub known_count: Option<KnownCountReport>,
    pub known_count_log2: Option<f64>,
    pub flags: Vec<BoundFlag>,
    pub notes: Vec<String>,
}

/// Evaluates every bound at `n` and compares with `known` when its arity
/// matches.
pub fn bound_report(n: usize, known: Option<&KnownCount>) -> Result<BoundReport> {
    even_arity(n, 2)?;
    let known = known.filter(|k| k.n == n);
    let trivial = trivial_upper_log2(n)?;
    let tokareva = tokareva_lower_log2(n)?;
    let (t, q) = if n >= 4 {
        (Some(t_n_log2(n)?), Some(q_n(n)?))
    } else {
        (None, None)
    };
    let a = a_n_log2(n)?;
    let theorem_exact = t.zip(q).map(|(t, q)| t + q);
    let theorem_real = q.map(|q| a + 3.0 * q as f64 / 8.0 * 6f64.log2());
    let theorem = if n >= 4 { Some(theorem_upper_log2(n)?) } else { None };
    let headline = if n >= 6 { Some(headline_log2(n)?) } else { None };
    let simplified = if n >= 4 { Some(simplified_log2(n)?) } else { None };

    let mut flags = Vec::new();
    let all_functions_log2 = (1u128 << n) as f64;
    for (field, value) in [("theorem_upper_log2", theorem), ("headline_log2", headline)] {
        if value.is_some_and(|v| v > all_functions_log2) {
            flags.push(BoundFlag {
                field,
                kind: FlagKind::Vacuous,
            });
        }
    }
    if let Some(k) = known {
        let below_count = |e: u128| e < k.count.bits() as u128 && BigUint::from(1u32) << e < k.count;
        let log_known = k.log2();
        let int_uppers = [("trivial_upper_log2", Some(trivial)), ("simplified_log2", simplified)];
        for (field, value) in int_uppers {
            if value.is_some_and(below_count) {
                flags.push(BoundFlag {
                    field,
                    kind: FlagKind::AsymptoticOnly,
                });
            }
        }
        for (field, value) in [("theorem_upper_log2", theorem), ("headline_log2", headline)] {
            if value.is_some_and(|v| v < log_known) {
                flags.push(BoundFlag {
                    field,
                    kind: FlagKind::AsymptoticOnly,
                });
            }
        }
        if BigUint::from(1u32) << tokareva > k.count {
            flags.push(BoundFlag {
                field: "tokareva_lower_log2",
                kind: FlagKind::LowerExceedsKnown,
            });
        }
    }

    let mut notes = Vec::new();
    if n >= 4 {
        notes.push(
            "theorem_upper_log2 and headline_log2 evaluate asymptotic formulas with (1+o(1)) \
             factors; they are not certified bounds at any fixed n"
                .to_string(),
        );
        notes.push(
            "q_n is the number of cosets of the face on the two top coordinates meeting B_{n/2}"
                .to_string(),
        );
    } else {
        notes.push("theorem quantities need n >= 4".to_string());
    }
    if let Some(k) = known {
        notes.push(format!("known count provenance: {:?} ({})", k.provenance, k.source).to_lowercase());
    }

    Ok(BoundReport {
        n,
        trivial_upper_log2: trivial,
        tokareva_lower_log2: tokareva,
        t_n_log2: t,
        q_n: q,
        a_n_log2: a,
        theorem_exact_log2: theorem_exact,
        theorem_real_log2: theorem_real,
        theorem_upper_log2: theorem,
        headline_log2: headline,
        simplified_log2: simplified,
        known_count: known.map(|k| KnownCountReport {
            count: k.count.to_string(),
            source: k.source.clone(),
            provenance: k.provenance,
        }),
        known_count_log2: known.map(KnownCount::log2),
        flags,
        notes,
    })
}

/// Plain-text table of a report.
pub fn render_table(r: &BoundReport) -> String {
    let mut out = String::new();
    let flagged = |field: &str| {
        r.flags
            .iter()
            .filter(|f| f.field == field)
            .map(|f| format!("{:?}", f.kind))
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut row = |name: &str, field: &str, value: String| {
        let _ = writeln!(out, "{name:<28} {value:>24}  {}", flagged(field));
    };
    row("n", "", r.n.to_string());
    row("trivial upper (log2)", "trivial_upper_log2", r.trivial_upper_log2.to_string());
    row("tokareva lower (log2)", "tokareva_lower_log2", r.tokareva_lower_log2.to_string());
    let opt = |v: Option<u128>| v.map_or("-".to_string(), |v| v.to_string());
    let optf = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.6}"));
    row("log2 T_n", "t_n_log2", opt(r.t_n_log2));
    row("Q_n", "q_n", opt(r.q_n));
    row("log2 a_n", "a_n_log2", format!("{:.6}", r.a_n_log2));
    row("theorem upper (log2)", "theorem_upper_log2", optf(r.theorem_upper_log2));
    row("headline (log2)", "headline_log2", optf(r.headline_log2));
    row("3*2^(n-3)", "simplified_log2", opt(r.simplified_log2));
    row("known count (log2)", "", optf(r.known_count_log2));
    for note in &r.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_tokareva() {
        assert_eq!(trivial_upper_log2(4).unwrap(), 11);
        assert_eq!(trivial_upper_log2(2).unwrap(), 3);
        assert_eq!(trivial_upper_log2(8).unwrap(), 163);
        assert_eq!(tokareva_lower_log2(4).unwrap(), 7);
        assert_eq!(tokareva_lower_log2(2).unwrap(), 2);
        assert_eq!(tokareva_lower_log2(8).unwrap(), 99);
        assert!(trivial_upper_log2(5).is_err());
        assert!(tokareva_lower_log2(0).is_err());
        for n in (2..=64).step_by(2) {
            let gap = trivial_upper_log2(n).unwrap() - tokareva_lower_log2(n).unwrap();
            assert_eq!(gap, 1 << (n - 2));
        }
    }

    #[test]
    fn t_and_q() {
        assert_eq!(t_n_log2(4).unwrap(), 4);
        assert_eq!(t_n_log2(6).unwrap(), 15);
        assert_eq!(t_n_log2(8).unwrap(), 57);
        assert_eq!(q_n(4).unwrap(), 4);
        assert_eq!(q_n(8).unwrap(), 57);
        assert!(t_n_log2(2).is_err());
        for n in (4..=30).step_by(2) {
            assert_eq!(q_n(n).unwrap(), t_n_log2(n).unwrap());
            assert!(t_n_log2(n).unwrap() <= 1 << (n - 2));
        }
        for n in (4..20).step_by(2) {
            let ratio = |n: usize| q_n(n).unwrap() as f64 / (1u64 << (n - 3)) as f64;
            assert!(ratio(n + 2) < ratio(n));
        }
        for n in (4..=64).step_by(2) {
            q_n(n).unwrap();
            trivial_upper_log2(n).unwrap();
        }
    }

    #[test]
    fn a_n_values() {
        assert!((a_n_log2(2).unwrap() - 192f64.log2()).abs() < 1e-12);
        assert_eq!(a_n_log2(1).unwrap(), 3.0);
        assert!((a_n_log2(4).unwrap() - (20160f64 * 16.0 * 32.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn theorem_values() {
        let expect4 = (20160f64 * 512.0).log2() + 4.0 + 4.0 + 1.5 * 6f64.log2();
        assert!((theorem_upper_log2(4).unwrap() - expect4).abs() < 1e-9);
        assert!((theorem_upper_log2(4).unwrap() - 35.18).abs() < 0.01);
        for n in (4..=18).step_by(2) {
            assert!(theorem_upper_log2(n + 2).unwrap() > theorem_upper_log2(n).unwrap());
        }
        assert!(theorem_upper_log2(3).is_err());
    }

    #[test]
    fn theorem_is_far_from_its_asymptotic_regime_at_n20() {
        // independent big-integer evaluation: 591757.7452321553, i.e. 1.5049 * 3 * 2^17;
        // the exact T_n and Q_n are still about 1.52 * 2^{n-3} here
        let v = theorem_upper_log2(20).unwrap();
        assert!((v - 591_757.745_232_155_3).abs() < 1e-6 * v);
        let ratio = v / (3u64 << 17) as f64;
        assert!((ratio - 1.504_917_768_433_012).abs() < 1e-9);
    }

    #[test]
    fn headline_values() {
        assert!((headline_log2(6).unwrap() - (3.0 * 6f64.log2() + 16.0)).abs() < 1e-12);
        assert!((headline_log2(6).unwrap() - 23.755).abs() < 1e-3);
        assert!((headline_log2(8).unwrap() - 95.02).abs() < 0.01);
        for n in (6..=64).step_by(2) {
            let simplified = simplified_log2(n).unwrap() as f64;
            let headline = headline_log2(n).unwrap();
            assert!(headline < simplified);
            let gap = headline_gap(n).unwrap();
            assert!((simplified - headline - gap).abs() <= 1e-12 * simplified);
        }
        assert!(headline_log2(4).is_err());
    }

    #[test]
    fn known_count_parsing() {
        let text = r#"[{"n": 6, "count": "5425430528", "source": "literature"},
                       {"n": 8, "count": "99270589265934370305785861242880", "source": "lit"}]"#;
        let known = parse_known_counts(text).unwrap();
        assert_eq!(known.len(), 2);
        assert_eq!(known[0].count, BigUint::from(5_425_430_528u64));
        assert_eq!(known[1].provenance, Provenance::External);
        for bad in [
            r#"{"n": 6}"#,
            r#"[{"n": 6, "count": 12, "source": "x"}]"#,
            r#"[{"n": 6, "count": "1e9", "source": "x"}]"#,
            r#"[{"n": 6, "count": "0", "source": "x"}]"#,
            r#"[{"n": 6, "count": "1", "source": "x"}, {"n": 6, "count": "2", "source": "y"}]"#,
        ] {
            assert!(matches!(parse_known_counts(bad), Err(Error::Input(_))), "{bad}");
        }
    }

    #[test]
    fn report_n2_has_no_theorem_fields() {
        let r = bound_report(2, None).unwrap();
        assert_eq!(r.trivial_upper_log2, 3);
        assert_eq!(r.tokareva_lower_log2, 2);
        assert!(r.t_n_log2.is_none() && r.theorem_upper_log2.is_none() && r.headline_log2.is_none());
        assert!(bound_report(3, None).is_err());
    }

    #[test]
    fn report_n4_with_census() {
        let known = KnownCount::census(4, 896);
        let r = bound_report(4, Some(&known)).unwrap();
        assert!((r.known_count_log2.unwrap() - 896f64.log2()).abs() < 1e-12);
        assert!(r.trivial_upper_log2 as f64 >= r.known_count_log2.unwrap());
        assert!(r.tokareva_lower_log2 as f64 <= r.known_count_log2.unwrap());
        // 2^{3 * 2^{n-3}} = 64 < 896: the simplified form is only asymptotic
        assert_eq!(
            r.flags,
            vec![
                BoundFlag {
                    field: "theorem_upper_log2",
                    kind: FlagKind::Vacuous
                },
                BoundFlag {
                    field: "simplified_log2",
                    kind: FlagKind::AsymptoticOnly
                }
            ]
        );
        assert_eq!(r.theorem_exact_log2, Some(8));
        let sum = r.theorem_exact_log2.unwrap() as f64 + r.theorem_real_log2.unwrap();
        assert!((sum - r.theorem_upper_log2.unwrap()).abs() < 1e-9);
        assert!(render_table(&r).contains("Vacuous"));
    }

    #[test]
    fn report_flags_bounds_below_known() {
        // a fabricated count above every upper bound at n = 6
        let known = KnownCount {
            n: 6,
            count: BigUint::from(1u32) << 45u32,
            source: "test".into(),
            provenance: Provenance::External,
        };
        let r = bound_report(6, Some(&known)).unwrap();
        let fields: Vec<_> = r
            .flags
            .iter()
            .filter(|f| f.kind == FlagKind::AsymptoticOnly)
            .map(|f| f.field)
            .collect();
        assert_eq!(fields, ["trivial_upper_log2", "simplified_log2", "headline_log2"]);
        let small = KnownCount {
            count: BigUint::from(2u32),
            ..known.clone()
        };
        let r = bound_report(6, Some(&small)).unwrap();
        assert!(r.flags.iter().any(|f| f.kind == FlagKind::LowerExceedsKnown));
        // a count for another arity is ignored
        let r = bound_report(8, Some(&known)).unwrap();
        assert!(r.known_count.is_none());
    }
}
