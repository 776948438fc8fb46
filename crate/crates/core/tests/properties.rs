use std::cmp::Ordering;
use std::sync::LazyLock;

use proptest::prelude::*;

use shuffle_core::address::{address_of, compare, order_equivalent, precedes, segment_successor};
use shuffle_core::algebra::{from_finite_permutation, involution};
use shuffle_core::canonical::diagram;
use shuffle_core::enumerate::Dovetail;
use shuffle_core::fixtures::fixture;
use shuffle_core::ordinal::Orientation;
use shuffle_core::shuffle::Shuffle;

const BUDGET: u64 = 1_000_000;

/// Fixtures that induce a shuffle, with their smallest value.
const ORDERED: &[(&str, u64)] = &[
    ("identity", 0),
    ("evens_odds", 0),
    ("three_ladder", 1),
    ("sharkovskii", 0),
    ("sharkovskii_reversed", 1),
    ("sharkovskii_positive", 0),
    ("swap_adjacent", 0),
    ("p_partition", 0),
    ("ladder_bench_snake", 0),
    ("omega_ladders", 0),
];

static LOADED: LazyLock<Vec<Shuffle>> =
    LazyLock::new(|| ORDERED.iter().map(|(n, _)| fixture(n).unwrap().unwrap()).collect());

static STARRED: LazyLock<Vec<Option<Shuffle>>> = LazyLock::new(|| LOADED.iter().map(|s| involution(s).ok()).collect());

/// Position of `x` in the Šarkovskiĭ order, with 0 first: x = 2^a·m with m
/// odd, odd parts above one by ascending a then m, powers of two
/// descending last.
fn sharkovskii_key(x: u64) -> (u8, i64, u64) {
    if x == 0 {
        return (0, 0, 0);
    }
    let a = x.trailing_zeros() as i64;
    let m = x >> a;
    if m > 1 { (1, a, m) } else { (2, -a, 0) }
}

#[test]
fn sharkovskii_matches_closed_form() {
    let s = fixture("sharkovskii").unwrap().unwrap();
    for x in 0..=512u64 {
        for y in 0..=512u64 {
            let expected = sharkovskii_key(x).cmp(&sharkovskii_key(y));
            assert_eq!(compare(&s, x, y, BUDGET).unwrap(), expected, "{x} vs {y}");
        }
    }
}

#[test]
fn reversed_fixture_reverses_the_closed_form() {
    let s = fixture("sharkovskii_reversed").unwrap().unwrap();
    for x in 1..=256u64 {
        for y in 1..=256u64 {
            let expected = sharkovskii_key(y).cmp(&sharkovskii_key(x));
            assert_eq!(compare(&s, x, y, BUDGET).unwrap(), expected, "{x} vs {y}");
        }
    }
}

#[test]
fn involution_is_pointwise_self_inverse() {
    for (s, star) in LOADED.iter().zip(STARRED.iter()) {
        let Some(star) = star else {
            assert!(s.family().is_some());
            continue;
        };
        let back = involution(star).unwrap();
        assert_eq!(star.sign(), {
            let mut flipped = s.sign();
            flipped.count_sign = flipped.count_sign.flip();
            flipped.components.reverse();
            flipped.components.iter_mut().for_each(|c| *c = c.flip());
            flipped
        });
        let mut degree = s.degree();
        degree.components.reverse();
        assert_eq!(star.degree(), degree);
        let mut walk = Dovetail::new(s);
        while let Some((t, idx)) = walk.next() {
            if walk.round() > 6 {
                break;
            }
            assert_eq!(s.eval(t, &idx), back.eval(t, &idx), "{} at {t} {idx:?}", s.label());
        }
    }
}

#[test]
fn segment_successors_are_immediate() {
    for (s, &(name, lo)) in LOADED.iter().zip(ORDERED) {
        let addresses: Vec<_> = (lo..=1000).map(|z| (z, address_of(s, z, BUDGET).unwrap())).collect();
        for x in lo..=300 {
            let Some(y) = segment_successor(s, x, BUDGET).unwrap() else { continue };
            let (ax, ay) = (address_of(s, x, BUDGET).unwrap(), address_of(s, y, BUDGET).unwrap());
            for (z, az) in &addresses {
                assert!(!(ax < *az && *az < ay), "{name}: {x} < {z} < {y}");
            }
        }
    }
}

#[test]
fn diagrams_agree_on_order_equivalent_presentations() {
    let plus = r#"{"kind": "plus_inf"}"#;
    let doc = |expr: &str| {
        format!(r#"{{"label": "x", "components": [{{"domains": [{{"kind": "finite_prefix", "m": 2}}, {plus}], "expr": "{expr}"}}]}}"#)
    };
    let a = Shuffle::from_json(&doc("2*i1 + i0")).unwrap();
    let b = Shuffle::from_json(&doc("2*i1 + 1 - i0")).unwrap();
    assert!(order_equivalent(&a, &b).unwrap());
    assert_eq!(diagram(&a), diagram(&b));
    for s in LOADED.iter().filter(|s| s.family().is_none()) {
        let twice = involution(&involution(s).unwrap()).unwrap();
        assert!(order_equivalent(s, &twice).unwrap());
        assert_eq!(diagram(s), diagram(&twice));
    }
}

prop_compose! {
    fn fixture_and(width: usize)(k in 0..ORDERED.len())(k in Just(k), xs in proptest::collection::vec(ORDERED[k].1..=1000u64, width)) -> (usize, Vec<u64>) {
        (k, xs)
    }
}

fn permutation_pair() -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
    (1usize..=8).prop_flat_map(|n| {
        let identity: Vec<u64> = (0..n as u64).collect();
        (Just(identity.clone()).prop_shuffle(), Just(identity).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn trichotomy((k, xs) in fixture_and(2)) {
        let s = &LOADED[k];
        let (x, y) = (xs[0], xs[1]);
        let xy = compare(s, x, y, BUDGET).unwrap();
        let yx = compare(s, y, x, BUDGET).unwrap();
        prop_assert_eq!(xy, yx.reverse());
        prop_assert_eq!(xy == Ordering::Equal, x == y);
    }

    #[test]
    fn transitivity((k, xs) in fixture_and(3)) {
        let s = &LOADED[k];
        let p = |a, b| precedes(s, a, b, BUDGET).unwrap();
        if p(xs[0], xs[1]) && p(xs[1], xs[2]) {
            prop_assert!(p(xs[0], xs[2]));
        }
    }

    #[test]
    fn involution_reverses_order((k, xs) in fixture_and(2)) {
        if let Some(star) = &STARRED[k] {
            let s = &LOADED[k];
            prop_assert_eq!(precedes(s, xs[0], xs[1], BUDGET).unwrap(), precedes(star, xs[1], xs[0], BUDGET).unwrap());
        }
    }

    #[test]
    fn permutation_embedding_is_a_homomorphism((p, q) in permutation_pair()) {
        let n = p.len();
        let pq: Vec<u64> = q.iter().map(|&i| p[i as usize]).collect();
        for sign in [Orientation::Plus, Orientation::Minus] {
            let (ep, eq) = (from_finite_permutation(&p, sign).unwrap(), from_finite_permutation(&q, sign).unwrap());
            let composed = ep.compose(&eq).unwrap();
            let direct = from_finite_permutation(&pq, sign).unwrap();
            for k in 0..(n as u64 + 4) {
                prop_assert_eq!(composed.at(k).unwrap(), direct.at(k).unwrap());
            }
        }
    }
}
