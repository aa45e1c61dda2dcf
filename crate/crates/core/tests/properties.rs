use bentkit::bent::{apply_affine, is_bent, random_invertible};
use bentkit::geometry::{coset_spectrum, FaceMask};
use bentkit::reconstruct::{reconstruct_from_ball, BallAssignment};
use bentkit::transforms::{degree, moebius, walsh_fast, walsh_naive};
use bentkit::BooleanFunction;
use proptest::prelude::*;

fn function(max_n: usize) -> impl Strategy<Value = BooleanFunction> {
    (1..=max_n).prop_flat_map(|n| {
        let words = if n >= 6 { 1 << (n - 6) } else { 1 };
        proptest::collection::vec(any::<u64>(), words).prop_map(move |mut w| {
            if n < 6 {
                w[0] &= (1u64 << (1 << n)) - 1;
            }
            BooleanFunction::from_words(n, w).unwrap()
        })
    })
}

fn function_and_mask(max_n: usize) -> impl Strategy<Value = (BooleanFunction, FaceMask)> {
    function(max_n).prop_flat_map(|f| {
        let n = f.arity();
        (Just(f), 0..1u64 << n).prop_map(move |(f, m)| (f, FaceMask::new(n, m).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip(f in function(16)) {
        let text = f.to_text();
        prop_assert_eq!(&text.parse::<BooleanFunction>().unwrap(), &f);
        prop_assert_eq!(&text.to_uppercase().replace("BF:", "bf:").parse::<BooleanFunction>().unwrap(), &f);
    }

    #[test]
    fn spectrum_parity_follows_weight(f in function(12)) {
        let w = walsh_fast(&f).unwrap();
        let n = f.arity();
        prop_assert_eq!(w.get(0) as i64, (1i64 << n) - 2 * f.weight() as i64);
        // every W_f(y) is congruent to 2^n mod 4 for n >= 2
        if n >= 2 {
            prop_assert!(w.values().iter().all(|v| (v - w.get(0)) % 4 == 0));
        }
    }

    #[test]
    fn moebius_is_an_involution(f in function(14)) {
        prop_assert_eq!(moebius(&moebius(&f)), f);
    }

    #[test]
    fn parseval(f in function(12)) {
        let n = f.arity();
        prop_assert_eq!(walsh_fast(&f).unwrap().parseval_sum(), 1u64 << (2 * n));
    }

    #[test]
    fn fast_matches_naive(f in function(8)) {
        prop_assert_eq!(walsh_fast(&f).unwrap(), walsh_naive(&f).unwrap());
    }

    #[test]
    fn coset_sums_add_up((f, m) in function_and_mask(10)) {
        let sums = coset_spectrum(&f, &m).unwrap();
        let total: i64 = sums.values().sum();
        prop_assert_eq!(total, walsh_fast(&f).unwrap().get(0) as i64);
        prop_assert_eq!(sums.len() as u64, 1u64 << (f.arity() as u32 - m.dim()));
    }

    #[test]
    fn ball_round_trip(f in function(10), r in 0usize..=10) {
        let r = r.min(f.arity());
        let d = degree(&f) as usize;
        let g = reconstruct_from_ball(&BallAssignment::restrict(&f, r).unwrap());
        prop_assert!(degree(&g) as usize <= r);
        if d <= r {
            prop_assert_eq!(g, f);
        }
    }

    #[test]
    fn affine_images_keep_bentness(seed in any::<u64>(), k in 1usize..=4) {
        let n = 2 * k;
        let quad = BooleanFunction::from_fn(n, |x| {
            (0..k).fold(false, |acc, i| acc ^ (x >> (2 * i) & x >> (2 * i + 1) & 1 == 1))
        }).unwrap();
        let t = random_invertible(n, seed).unwrap();
        prop_assert!(is_bent(&apply_affine(&quad, &t).unwrap()));
    }
}
