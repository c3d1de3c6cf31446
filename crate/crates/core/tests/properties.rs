//! Randomized invariant checks: structural properties that must hold for every
//! parameter choice, exercised over small random ranges.

use cuspalg::exactalg::{rat, subspace_dims, Rational};
use cuspalg::gradedquot::{betti_from_model, BigradedSlots};
use cuspalg::jets::{implicitize, ParamCurve};
use cuspalg::oracles::{catalan_count, closed_hilbert_series};
use cuspalg::presentations::build_io;
use cuspalg::Integer;
use num::Zero;
use proptest::prelude::*;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

prop_compose! {
    fn coprime_pair(pmax: u32, qmax: u32)(p in 2..=pmax, q in 3..=qmax) -> (u32, u32) {
        // nudge non-coprime draws to a neighbouring coprime pair
        let mut q = q.max(p + 1);
        while gcd(p, q) != 1 {
            q += 1;
        }
        (p, q)
    }
}

proptest! {
    // the moduli ring is Gorenstein: its Hilbert function is palindromic
    #[test]
    fn gorenstein_symmetry((p, q) in coprime_pair(5, 11)) {
        let top = ((p - 1) * (q - 1)) as usize;
        let h = closed_hilbert_series(p, q, top).unwrap();
        for k in 0..=top {
            prop_assert_eq!(h[k], h[top - k]);
        }
        let total: u64 = h.iter().sum();
        prop_assert_eq!(Integer::from(total), catalan_count(p, q).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // saturating an already saturated slot reports the same dimension
    #[test]
    fn saturation_idempotent(a in 0i64..=4, b in 0i64..=4) {
        let mut s1 = BigradedSlots::new(2, 3).unwrap();
        let first = s1.dim_saturated(a, b).unwrap();
        let again = s1.dim_saturated(a, b).unwrap();
        prop_assert_eq!(first, again);
        let mut s2 = BigradedSlots::new(2, 3).unwrap();
        prop_assert_eq!(first, s2.dim_saturated(a, b).unwrap());
    }

    // Betti entries are differences of a non-decreasing filtration, so their
    // partial sums are positive and exhaust the total module count
    #[test]
    fn betti_differences_accumulate(k in 0usize..5) {
        let pairs = [(2u32, 3u32), (2, 5), (3, 4), (3, 5), (2, 7)];
        let (p, q) = pairs[k];
        let b = betti_from_model(p, q).unwrap();
        let mut acc = 0u64;
        for v in &b {
            acc += v;
            prop_assert!(acc > 0);
        }
        prop_assert_eq!(Integer::from(acc), catalan_count(p, q).unwrap());
    }

    // the implicit equation vanishes identically along the parametrization
    #[test]
    fn implicit_equation_vanishes_on_curve(
        num in -9i64..=9,
        den in 1i64..=9,
        k in 0usize..3,
    ) {
        let pairs = [(2u32, 3u32), (2, 5), (3, 4)];
        let (p, q) = pairs[k];
        let t = Rational::new(Integer::from(num), Integer::from(den));
        let poly = implicitize(&ParamCurve::toric(p, q).unwrap()).unwrap();
        let pow = |e: u32| num::pow::pow(t.clone(), e as usize);
        prop_assert!(poly.eval(&[pow(p), pow(q)]).is_zero());
    }

    // same property for a non-quasi-homogeneous planar curve
    #[test]
    fn implicit_equation_vanishes_planar(num in -5i64..=5, den in 1i64..=5) {
        let t = Rational::new(Integer::from(num), Integer::from(den));
        let poly = implicitize(&ParamCurve::planar_4_2q_s(3, 7).unwrap()).unwrap();
        let pow = |e: u32| num::pow::pow(t.clone(), e as usize);
        let x = pow(4);
        let y = pow(6) + pow(7);
        prop_assert!(poly.eval(&[x, y]).is_zero());
    }

    // canonical serialization and hashing are reproducible
    #[test]
    fn canonical_json_deterministic((p, q) in coprime_pair(4, 9)) {
        let a = build_io(p, q).unwrap();
        let b = build_io(p, q).unwrap();
        prop_assert_eq!(a.canonical_json(), b.canonical_json());
        prop_assert_eq!(a.content_hash(), b.content_hash());
        prop_assert_eq!(a.content_hash().len(), 64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // rank is modular: dim(U) + dim(W) = dim(U + W) + dim(U and W)
    #[test]
    fn subspace_inclusion_exclusion(
        au in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..4),
        bu in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..4),
    ) {
        let to_rows = |m: &Vec<Vec<i64>>| -> Vec<Vec<(u32, Rational)>> {
            m.iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, &v)| v != 0)
                        .map(|(j, &v)| (j as u32, rat(v)))
                        .collect()
                })
                .collect()
        };
        let a = to_rows(&au);
        let b = to_rows(&bu);
        let d = subspace_dims(&a, &b);
        prop_assert_eq!(d.dim_a + d.dim_b, d.dim_sum + d.dim_intersection);
        prop_assert!(d.dim_intersection <= d.dim_a.min(d.dim_b));
        prop_assert!(d.dim_sum <= 5);
        prop_assert!(d.dim_sum >= d.dim_a.max(d.dim_b));
    }
}
