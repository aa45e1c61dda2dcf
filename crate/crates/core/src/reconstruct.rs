//! Reconstruction of degree-bounded functions from their values on a Hamming
//! ball, and the checker for the coset-sum consequence of agreeing spectra.
//!
//! A function of degree at most `r` has `M[f](y) = 0` whenever `wt(y) > r`.
//! Since `M[f](y)` is the XOR of `f` over the subcube below `y`, the value at
//! `y` is forced by the values strictly below it, so the restriction to `B_r`
//! determines `f` by induction on weight.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{check_arity, BooleanFunction};
use crate::geometry::{ball_points, coset_spectrum, points_of_weight, subsets, Ball, FaceMask};
use crate::transforms::{degree, walsh_fast, WalshSpectrum};

/// Values of a function on `B_r`, in (weight, index) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallAssignment {
    arity: usize,
    radius: usize,
    values: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct BallFile {
    n: usize,
    r: usize,
    values: Vec<u8>,
}

impl BallAssignment {
    pub fn new(arity: usize, radius: usize, values: Vec<bool>) -> Result<Self> {
        let ball = ball_points(arity, radius)?;
        if values.len() != ball.len() {
            return Err(Error::LengthMismatch {
                expected: ball.len(),
                got: values.len(),
            });
        }
        Ok(BallAssignment {
            arity,
            radius,
            values,
        })
    }

    /// `f|_{B_r}`.
    pub fn restrict(f: &BooleanFunction, radius: usize) -> Result<Self> {
        let ball = ball_points(f.arity(), radius)?;
        let values = ball.indices().iter().map(|&x| f.bit(x)).collect();
        Ok(BallAssignment {
            arity: f.arity(),
            radius,
            values,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn ball(&self) -> Ball {
        ball_points(self.arity, self.radius).expect("validated at construction")
    }

    /// Parses `{"n": n, "r": r, "values": [0/1, ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: BallFile =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("ball file: {e}")))?;
        let values = file
            .values
            .iter()
            .map(|&v| match v {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(Error::Input(format!("ball value {v} is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()?;
        BallAssignment::new(file.n, file.r, values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&BallFile {
            n: self.arity,
            r: self.radius,
            values: self.values.iter().map(|&b| b as u8).collect(),
        })
        .expect("plain struct")
    }
}

/// The unique `f` with `deg f <= r` and `f|_{B_r} = a`.
pub fn reconstruct_from_ball(a: &BallAssignment) -> BooleanFunction {
    let n = a.arity;
    let mut f = BooleanFunction::zero(n).expect("arity validated at construction");
    for (&x, &v) in a.ball().indices().iter().zip(&a.values) {
        f.set_bit(x, v);
    }
    for w in a.radius + 1..=n {
        for y in points_of_weight(n, w) {
            // forces M[f](y) = 0
            let forced = subsets(y)
                .filter(|&x| x != y)
                .fold(false, |acc, x| acc ^ f.bit(x));
            f.set_bit(y, forced);
        }
    }
    assert!(degree(&f) as usize <= a.radius, "reconstruction exceeded degree bound");
    assert_eq!(
        BallAssignment::restrict(&f, a.radius).expect("same arity").values,
        a.values,
        "reconstruction changed the ball values"
    );
    f
}

/// Outcome of checking one instance of the coset-sum lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    /// `W_f` and `W_g` agree on `Γ`.
    pub premise: bool,
    /// `f` and `g` have equal sums over every coset of `Γ^⊥`.
    pub conclusion: bool,
    /// `premise -> conclusion`.
    pub holds: bool,
}

fn check_pair(f: &BooleanFunction, g: &BooleanFunction, gamma: &FaceMask) -> Result<()> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            left: f.arity(),
            right: g.arity(),
        });
    }
    if gamma.arity() != f.arity() {
        return Err(Error::ArityMismatch {
            left: f.arity(),
            right: gamma.arity(),
        });
    }
    check_arity(f.arity())
}

pub(crate) fn spectra_agree_on(wf: &WalshSpectrum, wg: &WalshSpectrum, gamma: &FaceMask) -> bool {
    gamma.indices().all(|y| wf.get(y) == wg.get(y))
}

/// `W_f(y) = W_g(y)` for every `y` in `Γ`.
pub fn lemma1_premise(f: &BooleanFunction, g: &BooleanFunction, gamma: &FaceMask) -> Result<bool> {
    check_pair(f, g, gamma)?;
    Ok(spectra_agree_on(&walsh_fast(f)?, &walsh_fast(g)?, gamma))
}

/// Equal sums of `(-1)^f` and `(-1)^g` over every coset `z + Γ^⊥`.
pub fn lemma1_conclusion(
    f: &BooleanFunction,
    g: &BooleanFunction,
    gamma: &FaceMask,
) -> Result<bool> {
    check_pair(f, g, gamma)?;
    let dual = gamma.dual();
    Ok(coset_spectrum(f, &dual)? == coset_spectrum(g, &dual)?)
}

pub fn check_lemma1(f: &BooleanFunction, g: &BooleanFunction, gamma: &FaceMask) -> Result<Lemma1Report> {
    let premise = lemma1_premise(f, g, gamma)?;
    let conclusion = lemma1_conclusion(f, g, gamma)?;
    Ok(Lemma1Report {
        premise,
        conclusion,
        holds: !premise || conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{moebius, walsh_naive};

    fn bf(s: &str) -> BooleanFunction {
        s.parse().unwrap()
    }

    /// All functions whose ANF is supported on `B_r`.
    fn degree_bounded(n: usize, r: usize) -> Vec<BooleanFunction> {
        let ball = ball_points(n, r).unwrap();
        (0..1u64 << ball.len())
            .map(|sel| {
                let mut anf = BooleanFunction::zero(n).unwrap();
                for (i, &y) in ball.indices().iter().enumerate() {
                    anf.set_bit(y, sel >> i & 1 == 1);
                }
                moebius(&anf)
            })
            .collect()
    }

    #[test]
    fn reconstruct_examples() {
        let a = BallAssignment::new(2, 1, vec![false, true, true]).unwrap();
        assert_eq!(reconstruct_from_ball(&a), bf("bf:2:6"));
        let f = bf("bf:3:b4");
        let full = BallAssignment::restrict(&f, 3).unwrap();
        assert_eq!(reconstruct_from_ball(&full), f);
        assert!(BallAssignment::new(2, 1, vec![false; 4]).is_err());
        assert!(BallAssignment::new(2, 3, vec![false; 4]).is_err());
    }

    #[test]
    fn reconstruct_round_trips_all_quadratics_at_n4() {
        let fs = degree_bounded(4, 2);
        assert_eq!(fs.len(), 2048);
        for g in &fs {
            let a = BallAssignment::restrict(g, 2).unwrap();
            assert_eq!(&reconstruct_from_ball(&a), g);
        }
    }

    #[test]
    fn restrictions_are_unique() {
        for n in 1..=4 {
            for r in 0..=n {
                let fs = degree_bounded(n, r);
                let mut seen = std::collections::HashSet::new();
                for g in &fs {
                    assert!(seen.insert(BallAssignment::restrict(g, r).unwrap().values));
                }
            }
        }
    }

    #[test]
    fn reconstruction_has_vanishing_high_anf() {
        let a = BallAssignment::new(5, 2, (0..16).map(|i| i % 3 == 0).collect()).unwrap();
        let f = reconstruct_from_ball(&a);
        let anf = moebius(&f);
        for y in 0..32u64 {
            if y.count_ones() > 2 {
                assert!(!anf.bit(y));
            }
        }
    }

    #[test]
    fn ball_file_round_trip() {
        let a = BallAssignment::new(2, 1, vec![false, true, true]).unwrap();
        let text = a.to_json();
        assert_eq!(text, r#"{"n":2,"r":1,"values":[0,1,1]}"#);
        assert_eq!(BallAssignment::from_json(&text).unwrap(), a);
        assert!(matches!(
            BallAssignment::from_json(r#"{"n":2,"r":1,"values":[0,2,1]}"#),
            Err(Error::Input(_))
        ));
        assert!(BallAssignment::from_json(r#"{"n":2,"r":1,"values":[0,1]}"#).is_err());
        assert!(BallAssignment::from_json("not json").is_err());
    }

    #[test]
    fn lemma1_examples() {
        let and = bf("bf:2:8");
        let other = bf("bf:2:6");
        for m in 0..4 {
            let gamma = FaceMask::new(2, m).unwrap();
            let r = check_lemma1(&and, &and, &gamma).unwrap();
            assert!(r.premise && r.conclusion && r.holds);
        }
        // gamma = {0}: premise compares W(0) = 2^n - 2 wt
        let origin = FaceMask::new(2, 0).unwrap();
        assert!(!lemma1_premise(&and, &other, &origin).unwrap());
        assert!(lemma1_premise(&bf("bf:2:1"), &bf("bf:2:2"), &origin).unwrap());
        // W_and = [2,2,2,-2], W_{bf:2:6} = [0,0,0,4]
        assert_eq!(walsh_naive(&other).unwrap().values(), [0, 0, 0, 4]);
        let r = check_lemma1(&and, &other, &FaceMask::new(2, 0b01).unwrap()).unwrap();
        assert_eq!((r.premise, r.holds), (false, true));
        // full face: conclusion is pointwise equality
        let full = FaceMask::full(2).unwrap();
        assert!(!lemma1_conclusion(&and, &other, &full).unwrap());
        assert!(lemma1_conclusion(&and, &and, &full).unwrap());
        assert!(check_lemma1(&and, &bf("bf:3:00"), &full).is_err());
    }

    #[test]
    fn complement_negates_spectrum() {
        let f = bf("bf:3:b4");
        let g = f.negate();
        let wf = walsh_fast(&f).unwrap();
        let wg = walsh_fast(&g).unwrap();
        assert!(wf.values().iter().zip(wg.values()).all(|(a, b)| *a == -*b));
        for m in 0..8 {
            let r = check_lemma1(&f, &g, &FaceMask::new(3, m).unwrap()).unwrap();
            assert!(r.holds);
        }
    }
}
