//! Exact counts at small genus, frozen from an independent enumeration.

use std::collections::BTreeSet;

use fillperm::crossing::one_faced_fillings;
use fillperm::enumeration::{
    canonical_seed, count_classes, count_filling, enumerate_filling, excluded_count, excluded_roots, root_count,
    square_roots, upper_bound, BoundsReport, EnumerationOptions,
};
use fillperm::{FillingPermutation, GenusContext, Permutation};
use num_bigint::BigUint;

fn ctx(g: u32) -> GenusContext {
    GenusContext::new(g).unwrap()
}

fn opts() -> EnumerationOptions {
    EnumerationOptions::default()
}

#[test]
fn filling_and_class_counts() {
    for (g, solutions, classes) in [(1, 2, 1), (2, 0, 0), (3, 600, 5), (4, 65856, 168)] {
        let c = count_classes(&ctx(g), &opts()).unwrap();
        assert_eq!(c.solutions, solutions, "g={g}");
        assert_eq!(c.classes(), classes, "g={g}");
        assert_eq!(c.stats.roots_covered, root_count(&ctx(g)), "g={g}");
        assert_eq!(count_filling(&ctx(g), &opts()).unwrap(), solutions);
    }
}

#[test]
fn root_counts_follow_the_formula() {
    for (g, expected) in [(1u32, 2u64), (2, 48), (3, 3840), (4, 645120), (5, 185794560)] {
        let fact: u64 = (1..=(2 * g - 1) as u64).product();
        assert_eq!(fact << (2 * g - 1), expected);
        assert_eq!(root_count(&ctx(g)), BigUint::from(expected));
    }
    for g in 1..=3 {
        assert_eq!(square_roots(&ctx(g)).count() as u64, [2, 48, 3840][g as usize - 1]);
    }
}

#[test]
fn crossing_configurations_agree_with_root_search() {
    for g in [1, 2, 3] {
        let c = ctx(g);
        let from_roots: BTreeSet<Permutation> =
            enumerate_filling(&c, &opts()).unwrap().into_iter().map(FillingPermutation::into_perm).collect();
        assert_eq!(from_roots, one_faced_fillings(&c), "g={g}");
    }
}

#[test]
fn genus_three_class_representatives() {
    let reps: Vec<String> =
        count_classes(&ctx(3), &opts()).unwrap().representatives.iter().map(|p| p.to_string()).collect();
    assert_eq!(
        reps,
        [
            "[2,7,8,1,12,13,10,17,14,11,6,3,20,15,16,19,4,5,18,9]",
            "[2,7,8,1,12,13,18,9,14,11,6,3,20,15,16,19,4,5,10,17]",
            "[2,7,8,9,12,13,14,19,10,11,18,3,20,15,16,17,4,5,6,1]",
            "[2,7,10,19,12,17,8,13,6,11,14,3,20,15,18,1,4,9,16,5]",
            "[2,13,4,17,10,19,6,15,8,11,16,3,20,5,12,9,18,1,14,7]",
        ]
    );
}

#[test]
fn excluded_family_at_genus_three() {
    let c = ctx(3);
    let roots = excluded_roots(&c).unwrap();
    assert_eq!(roots.len(), 480);
    assert_eq!(excluded_count(&c), BigUint::from(480u32));
    assert_eq!(3840 - 480, 16 * 7 * 120 / 4);
    let iota = c.canonical_perms().iota;
    for r in &roots {
        let s = iota.compose(r).unwrap();
        assert_eq!(s.apply(s.apply(1)), 1);
        assert!(!s.is_n_cycle());
    }
}

#[test]
fn bounds() {
    assert_eq!(upper_bound(&ctx(3)).unwrap(), BigUint::from(672u32));
    assert_eq!(upper_bound(&ctx(4)).unwrap(), BigUint::from(84480u32));
    let b = BoundsReport::new(&ctx(3)).unwrap();
    assert_eq!(b.lower_bound.unwrap().to_string(), "1/100");
    let json = serde_json::to_value(BoundsReport::new(&ctx(4)).unwrap()).unwrap();
    assert_eq!(json["upper_bound"], "84480");
}

#[test]
fn genus_four_seed() {
    let seed = canonical_seed(&ctx(4), &opts()).unwrap().unwrap();
    assert_eq!(seed.perm().to_string(), "[2,7,8,1,16,17,10,21,14,25,12,23,18,15,6,3,28,19,20,27,4,5,22,9,26,13,24,11]");
    assert!(seed.perm().is_n_cycle());
    assert!(canonical_seed(&ctx(2), &opts()).unwrap().is_none());
}
