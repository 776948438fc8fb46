use std::cmp::Ordering;

use shuffle_core::address::{address_of, compare, precedes, segment_successor, sort_prefix, value_at, Address};
use shuffle_core::algebra::{compose, involution};
use shuffle_core::canonical::{
    canonicalize, diagram, part_type_sequence, transfer, CanonicalError, PartItem, PartSequence, PartType,
    RepeatCount, TransferDirection,
};
use shuffle_core::enumerate::verify;
use shuffle_core::fixtures::fixture;
use shuffle_core::shuffle::Shuffle;

const BUDGET: u64 = 1_000_000;

fn load(name: &str) -> Shuffle {
    fixture(name).expect("bundled").expect("valid")
}

fn addr(t: u64, idx: &[i64]) -> Address {
    Address::new(t, idx.to_vec())
}

#[test]
fn addresses_and_values() {
    let e = load("evens_odds");
    assert_eq!(address_of(&e, 3, BUDGET).unwrap(), addr(1, &[1]));
    assert_eq!(address_of(&e, 4, BUDGET).unwrap(), addr(0, &[2]));
    assert_eq!(value_at(&e, &addr(1, &[1])).unwrap(), 3);
    assert_eq!(value_at(&e, &addr(0, &[2])).unwrap(), 4);
    let r = load("sharkovskii_reversed");
    assert_eq!(address_of(&r, 2, BUDGET).unwrap(), addr(0, &[1]));
    assert_eq!(address_of(&r, 36, BUDGET).unwrap(), addr(1, &[-3, -4]));
    assert_eq!(value_at(&r, &addr(1, &[-3, -4])).unwrap(), 36);
    assert_eq!(value_at(&r, &addr(0, &[1])).unwrap(), 2);
}

#[test]
fn order_chains() {
    let chain = |s: &Shuffle, xs: &[u64]| xs.windows(2).all(|w| precedes(s, w[0], w[1], BUDGET).unwrap());
    assert!(chain(&load("evens_odds"), &[8, 22, 5, 21]));
    assert!(chain(&load("sharkovskii_reversed"), &[4, 14, 15, 3]));
    assert!(chain(&load("sharkovskii"), &[0, 3, 5, 7, 6, 10, 12, 4, 2, 1]));
    assert_eq!(compare(&load("sharkovskii"), 3, 1, BUDGET).unwrap(), Ordering::Less);
}

#[test]
fn sorting_and_successors() {
    let s = load("sharkovskii");
    assert_eq!(sort_prefix(&s, &[1, 2, 3, 5, 6, 10], BUDGET).unwrap(), vec![3, 5, 6, 10, 2, 1]);
    assert_eq!(sort_prefix(&load("identity"), &[3, 1, 2], BUDGET).unwrap(), vec![1, 2, 3]);
    assert_eq!(segment_successor(&load("identity"), 5, BUDGET).unwrap(), Some(6));
    // the top of a snake has no successor in its segment
    assert_eq!(segment_successor(&s, 1, BUDGET).unwrap(), None);
    assert_eq!(segment_successor(&s, 0, BUDGET).unwrap(), None);
    assert_eq!(segment_successor(&s, 4, BUDGET).unwrap(), Some(2));
}

#[test]
fn descriptors() {
    let s = load("sharkovskii_reversed");
    assert_eq!(s.degree().to_string(), "(2, [1, 3])");
    assert_eq!(s.sign().to_string(), "(0, [+, -])");
    assert_eq!(load("sharkovskii").degree().to_string(), "(3, [0, 3, 1])");
    assert_eq!(load("sharkovskii").order_type().unwrap().to_string(), "w^2 + w*");
    assert_eq!(load("omega_ladders").order_type().unwrap().to_string(), "w^2");
    assert_eq!(load("evens_odds").order_type().unwrap().to_string(), "w*2");
}

#[test]
fn membership() {
    assert!(verify(&load("sharkovskii"), 300, BUDGET).is_member());
    assert!(verify(&load("omega_ladders"), 300, BUDGET).is_member());
    assert!(verify(&load("sharkovskii_positive"), 300, BUDGET).is_member());
    let r = verify(&load("sharkovskii_reversed"), 300, BUDGET);
    assert_eq!(r.missing, vec![0]);
    assert!(r.duplicates.is_empty());
    let p = verify(&load("prime_powers"), 30, BUDGET);
    let dup: Vec<u64> = p.duplicates.iter().map(|d| d.0).collect();
    assert_eq!(dup, vec![4, 16]);
    assert_eq!(p.missing[..5], [0, 1, 5, 6, 7]);
}

#[test]
fn three_ladder_involution() {
    let s = load("three_ladder");
    let star = involution(&s).unwrap();
    assert_eq!(star.order_type().unwrap().to_string(), "w**3");
    assert!(precedes(&s, 11, 6, BUDGET).unwrap());
    assert!(precedes(&star, 6, 11, BUDGET).unwrap());
    assert_eq!(diagram(&s), "•-o •-o •-o");
    assert_eq!(diagram(&star), "o-• o-• o-•");
}

#[test]
fn composition_examples() {
    let swap = load("swap_adjacent");
    let e = load("evens_odds_block");
    let r = compose(&swap, &e).unwrap();
    let table: Vec<u64> = [[0, 0], [0, 1], [1, 0], [1, 1]].iter().map(|i| r.eval(0, i).unwrap() as u64).collect();
    assert_eq!(table, vec![1, 3, 0, 2]);
    assert_eq!(r.order_type().unwrap().to_string(), "w*2");

    let v = compose(&e, &swap).unwrap();
    let first: Vec<i128> = (0..4).map(|k| v.eval(0, &[0, k]).unwrap()).collect();
    let second: Vec<i128> = (0..4).map(|k| v.eval(0, &[1, k]).unwrap()).collect();
    assert_eq!(first, vec![2, 0, 6, 4]);
    assert_eq!(second, vec![3, 1, 7, 5]);
    assert_eq!(v.order_type().unwrap().to_string(), "w*2");

    let s = load("sharkovskii_positive");
    assert_eq!(s.order_type().unwrap().to_string(), "w^2");
    let r = compose(&s, &e).unwrap();
    assert_eq!(r.order_type().unwrap().to_string(), "w^2");
    assert_eq!(r.eval(0, &[0, 0, 0]).unwrap(), 0);
    assert_eq!(r.eval(0, &[0, 0, 1]).unwrap(), 2);
    let v = compose(&e, &s).unwrap();
    assert_eq!(v.order_type().unwrap().to_string(), "w^2*2");
    assert_eq!(v.eval(0, &[0, 0, 0]).unwrap(), 0);
    assert_eq!(v.eval(0, &[1, 0, 0]).unwrap(), 1);
}

#[test]
fn degree_three_is_not_invertible() {
    let s = load("sharkovskii_positive");
    for u in ["identity", "swap_adjacent", "evens_odds_block", "three_ladder"] {
        let ot = compose(&s, &load(u)).unwrap().order_type().unwrap();
        assert!(ot.highest_power() >= 2, "{u}: {ot}");
    }
}

#[test]
fn part_sequences() {
    use PartType::*;
    assert_eq!(part_type_sequence(&load("evens_odds")), PartSequence::parts(&[Ladder, Ladder]));
    assert_eq!(
        part_type_sequence(&load("ladder_bench_snake")),
        PartSequence::parts(&[Ladder, Bench(Some(2)), Snake])
    );
    let omega_ladders = PartItem::Repeat { body: vec![PartItem::Part(Ladder)], count: RepeatCount::Omega };
    assert_eq!(
        part_type_sequence(&load("sharkovskii")).items,
        vec![PartItem::Part(Bench(Some(1))), omega_ladders.clone(), PartItem::Part(Snake)]
    );
    let (canon, unique) = canonicalize(&part_type_sequence(&load("sharkovskii")));
    assert_eq!(canon.items, vec![omega_ladders, PartItem::Part(Snake)]);
    assert!(unique);
}

#[test]
fn canonical_partitions() {
    let p = part_type_sequence(&load("p_partition"));
    let (canon, unique) = canonicalize(&p);
    assert_eq!(canon, PartSequence::parts(&[PartType::Ladder, PartType::Snake]));
    assert!(unique);
    let z = part_type_sequence(&load("z_partition"));
    let (canon, unique) = canonicalize(&z);
    assert_eq!(canon, z);
    assert!(!unique);
}

#[test]
fn transfer_moves_the_ladder_start() {
    let z = load("z_partition");
    let moved = transfer(&z, 1, 1, TransferDirection::LadderToSnake, 100, BUDGET).unwrap();
    let snake: Vec<i128> = (-3..=0).map(|i| moved.eval(1, &[i]).unwrap()).collect();
    assert_eq!(snake, vec![4, 2, 0, 7]);
    let ladder: Vec<i128> = (0..3).map(|i| moved.eval(2, &[i]).unwrap()).collect();
    assert_eq!(ladder, vec![9, 11, 13]);
    for x in 0..=100 {
        for y in 0..=100 {
            assert_eq!(compare(&z, x, y, BUDGET).unwrap(), compare(&moved, x, y, BUDGET).unwrap(), "{x} {y}");
        }
    }

    let back = transfer(&moved, 1, 1, TransferDirection::SnakeToLadder, 100, BUDGET).unwrap();
    assert_eq!(back.eval(2, &[0]).unwrap(), 7);
    assert_eq!(back.eval(1, &[0]).unwrap(), 0);

    assert_eq!(transfer(&z, 1, 0, TransferDirection::LadderToSnake, 100, BUDGET), Err(CanonicalError::ZeroTransfer));
    assert_eq!(transfer(&z, 0, 1, TransferDirection::LadderToSnake, 100, BUDGET), Err(CanonicalError::NoSuchPair(0)));
}

#[test]
fn diagrams() {
    assert_eq!(diagram(&load("evens_odds")), "•-o •-o");
    assert_eq!(diagram(&load("sharkovskii")), "•-o •-o ... •-o ... o-•");
    assert_eq!(diagram(&load("ladder_bench_snake")), "•-o •-• o-•");
    assert_eq!(diagram(&load("z_partition")), "•-• o-o");
    let bench = Shuffle::from_json(r#"{"label": "b", "components": [{"domains": [{"kind": "finite_prefix", "m": 4}], "expr": "i0"}]}"#).unwrap();
    assert_eq!(diagram(&bench), "•-•");
}
