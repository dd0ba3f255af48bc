//! One test per acceptance criterion.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use fillperm::crossing::one_faced_fillings;
use fillperm::enumeration::{
    count_classes, count_lg, enumerate_filling, excluded_roots, root_count, square_roots, upper_bound,
    EnumerationOptions,
};
use fillperm::gluing::{polygon_sizes, search_patterns, GluingPattern};
use fillperm::hyperbolic::{
    edge_length, edge_length_half_angle, inj_radius_lower, lambda_g, m_g, max_coincident, right_angled_polygon_area,
};
use fillperm::zpiece::{build_from_sequence, derive_template, detect_zpieces, splice, LSequence, ZMatch};
use fillperm::{FillingPermutation, GenusContext, Permutation};
use num_bigint::BigUint;
use serde_json::Value;

fn ctx(g: u32) -> GenusContext {
    GenusContext::new(g).unwrap()
}

fn opts() -> EnumerationOptions {
    EnumerationOptions::default()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn fillperm(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_fillperm")).args(args).env_remove("FILLPERM_GUARD").output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn pairwise_disjoint(pieces: &[ZMatch]) -> bool {
    pieces.iter().enumerate().all(|(i, a)| pieces[i + 1..].iter().all(|b| a.is_disjoint(b)))
}

#[test]
fn criterion_01_genus_two_has_no_filling_permutation() {
    let (c, elapsed) = timed(|| count_classes(&ctx(2), &opts()).unwrap());
    assert_eq!(square_roots(&ctx(2)).count(), 48);
    assert_eq!(c.stats.roots_covered, BigUint::from(48u32));
    assert_eq!(c.solutions, 0);
    assert!(elapsed < Duration::from_secs(1), "{elapsed:?}");
}

#[test]
fn criterion_02_root_counts_and_squares() {
    for (g, expected) in [(1u32, 2u64), (2, 48), (3, 3840), (4, 645120)] {
        let c = ctx(g);
        let p = c.canonical_perms();
        let base = p.iota.compose(&p.tau).unwrap();
        let mut emitted = 0u64;
        for root in square_roots(&c) {
            assert_eq!(root.compose(&root).unwrap(), base);
            emitted += 1;
        }
        let fact: u64 = (1..=(2 * g - 1) as u64).product();
        assert_eq!(emitted, expected);
        assert_eq!(fact << (2 * g - 1), expected);
        assert_eq!(root_count(&c), BigUint::from(expected));
    }
}

#[test]
fn criterion_03_torus_base_case() {
    let c = count_classes(&ctx(1), &opts()).unwrap();
    assert_eq!(c.solutions, 2);
    assert_eq!(c.classes(), 1);
    let p = ctx(1).canonical_perms();
    assert!(p.tau.is_identity());
    let sigma = Permutation::from_cycles(4, &[[1, 2, 3, 4]]).unwrap();
    assert_eq!(sigma.compose(&p.iota.compose(&sigma).unwrap()).unwrap(), p.tau);
    assert!(ctx(1).is_filling(&sigma).unwrap());
}

#[test]
fn criterion_04_excluded_roots_at_genus_three() {
    let c = ctx(3);
    let roots = excluded_roots(&c).unwrap();
    assert_eq!(roots.len(), 480);
    assert_eq!(roots.iter().collect::<BTreeSet<_>>().len(), 480);
    let all: BTreeSet<Permutation> = square_roots(&c).collect();
    let iota = c.canonical_perms().iota;
    for r in &roots {
        assert!(all.contains(r));
        let s = iota.compose(r).unwrap();
        assert_eq!(s.apply(s.apply(1)), 1);
        assert!(!s.is_n_cycle());
    }
    let g = 3u64;
    assert_eq!(480, (1u64 << (2 * g - 2)) * (2 * g - 1) * 6);
    assert_eq!(3840 - 480, (1u64 << (2 * g - 2)) * (4 * g - 5) * 120 / (2 * g - 2));
}

#[test]
fn criterion_05_class_count_brackets() {
    let (c3, t3) = timed(|| count_classes(&ctx(3), &opts()).unwrap());
    let (c4, t4) = timed(|| count_classes(&ctx(4), &opts()).unwrap());
    assert!(t3 < Duration::from_secs(10), "{t3:?}");
    assert!(t4 < Duration::from_secs(120), "{t4:?}");
    assert!(1 <= c3.classes() && BigUint::from(c3.classes()) <= upper_bound(&ctx(3)).unwrap());
    assert!(1 <= c4.classes() && BigUint::from(c4.classes()) <= upper_bound(&ctx(4)).unwrap());
    assert_eq!(upper_bound(&ctx(3)).unwrap(), BigUint::from(672u32));
    assert_eq!(upper_bound(&ctx(4)).unwrap(), BigUint::from(84480u32));
    let witness = &c4.representatives[0];
    assert!(ctx(4).is_filling(witness).unwrap());
    assert_eq!(witness.degree(), 28);
}

#[test]
fn criterion_06_reconstruction_invariants() {
    let mut violations = 0;
    for g in [1, 3, 4] {
        for fp in enumerate_filling(&ctx(g), &opts()).unwrap() {
            let r = fp.reconstruct();
            let ok = r.vertex_classes.len() as u32 == 2 * g - 1
                && r.vertex_classes.iter().all(|c| c.len() == 4)
                && r.genus == g as i64
                && r.alpha_is_single_curve
                && r.beta_is_single_curve;
            violations += usize::from(!ok);
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn criterion_07_zpiece_pipeline() {
    let c3 = ctx(3);
    let independent: Vec<FillingPermutation> =
        one_faced_fillings(&c3).into_iter().map(|p| FillingPermutation::new(c3, p).unwrap()).collect();
    let t = derive_template(&independent).unwrap().template;

    for rep in count_classes(&c3, &opts()).unwrap().representatives {
        let fp = FillingPermutation::new(c3, rep).unwrap();
        for k in 1..=5 {
            let out = splice(&fp, k, &t).unwrap();
            assert_eq!(out.ctx().genus(), 5);
            assert!(out.ctx().is_filling(out.perm()).unwrap());
            assert!(pairwise_disjoint(&detect_zpieces(&out, &t)));
        }
    }

    for (g, expected) in [(3u32, 1usize), (5, 4), (7, 22)] {
        assert_eq!(count_lg(g).unwrap(), BigUint::from(expected));
        let built: BTreeSet<FillingPermutation> = LSequence::all(g)
            .unwrap()
            .iter()
            .map(|s| {
                let fp = build_from_sequence(s, &t).unwrap();
                assert!(fp.ctx().is_filling(fp.perm()).unwrap());
                assert!(pairwise_disjoint(&detect_zpieces(&fp, &t)));
                fp
            })
            .collect();
        assert_eq!(built.len(), expected, "g={g}");
    }
}

#[test]
fn criterion_08_t1_bounds() {
    for g in [1, 3, 4] {
        for fp in enumerate_filling(&ctx(g), &opts()).unwrap() {
            assert_eq!(GluingPattern::from_filling(&fp).t1().unwrap() as u32, 4 * g - 2);
        }
    }
    let found = search_patterns(2, 4, usize::MAX).unwrap();
    assert!(!found.is_empty());
    assert!(found.iter().all(|p| p.validate().is_valid() && p.t1().unwrap() <= 6));

    let mut irregular = 0;
    for (g, i) in [(1u32, 1u32), (1, 2), (1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (2, 6), (3, 5)] {
        for p in search_patterns(g, i, usize::MAX).unwrap() {
            let t1 = p.t1().unwrap() as u32;
            assert!(t1 <= 4 * g - 2);
            if polygon_sizes(&p).keys().any(|s| s % 4 != 0) {
                irregular += 1;
                assert!(t1 <= 4 * g - 4, "{p:?}");
            }
        }
    }
    assert!(irregular > 0);
    assert!(search_patterns(2, 3, usize::MAX).unwrap().is_empty());
}

#[test]
fn criterion_09_hyperbolic_numerics() {
    let closed = (2.0 * (0.5 + (5.0 / 8.0 + 5f64.sqrt() / 8.0).sqrt())).acosh();
    assert!((m_g(3).unwrap() / 20.0 - closed).abs() < 1e-12);
    for g in 2..=50u32 {
        let n = 8 * g - 4;
        let expected = 2.0 * std::f64::consts::PI * (2 * g - 2) as f64;
        assert!((right_angled_polygon_area(n) - expected).abs() < 1e-12 * expected);
        assert!((edge_length(g).unwrap() - edge_length_half_angle(n)).abs() < 1e-12);
    }
    assert!((lambda_g(3).unwrap() - 0.33560).abs() < 1e-4);
    assert!((4..=1000).all(|g| lambda_g(g).unwrap() < lambda_g(g - 1).unwrap()));
    let limit = (9.0 / 73f64.sqrt()).acosh();
    assert!((lambda_g(1_000_000).unwrap() - limit).abs() < 1e-5);
    assert!((inj_radius_lower() - limit / 2.0).abs() < 1e-15);
    assert_eq!(max_coincident(3).unwrap(), 168);

    let hyp = fillperm(&["hyp", "--genus", "3"]);
    let note = &hyp["inj_radius_note"];
    assert_eq!(note["quoted"], 0.3253);
    assert_eq!(note["quoted_matches"], "full_limit");
    assert!((note["half_limit"].as_f64().unwrap() - limit / 2.0).abs() < 1e-12);
}

#[test]
fn criterion_10_enumeration_is_deterministic() {
    let run = |jobs: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_fillperm"))
            .args(["enumerate", "--genus", "3", "--jobs", jobs])
            .output()
            .unwrap();
        assert!(out.status.success());
        let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(v.as_object_mut().unwrap().remove("timing").is_some());
        serde_json::to_vec(&v).unwrap()
    };
    let one = run("1");
    assert_eq!(one, run("2"));
    assert_eq!(one, run("8"));
    let classes = Command::new(env!("CARGO_BIN_EXE_fillperm"))
        .args(["enumerate", "--genus", "4", "--jobs", "8", "--classes"])
        .output()
        .unwrap();
    let single = Command::new(env!("CARGO_BIN_EXE_fillperm"))
        .args(["enumerate", "--genus", "4", "--jobs", "1", "--classes"])
        .output()
        .unwrap();
    let strip = |b: &[u8]| {
        let mut v: Value = serde_json::from_slice(b).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    assert_eq!(strip(&classes.stdout), strip(&single.stdout));
}
