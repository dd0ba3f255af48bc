use std::f64::consts::PI;

use fillperm::hyperbolic::*;

#[test]
fn perimeter_at_genus_three_closed_form() {
    let closed = (2.0 * (0.5 + (5.0 / 8.0 + 5f64.sqrt() / 8.0).sqrt())).acosh();
    assert!((m_g(3).unwrap() / 20.0 - closed).abs() < 1e-12);
    assert!((m_g(3).unwrap() - 34.549736).abs() < 1e-6);
}

#[test]
fn area_matches_euler_characteristic() {
    for g in 2..=50u32 {
        let n = 8 * g - 4;
        let area = right_angled_polygon_area(n);
        assert!((area - 2.0 * PI * (2.0 * g as f64 - 2.0)).abs() < 1e-12 * area.max(1.0), "g={g}");
    }
}

#[test]
fn edge_length_agrees_with_half_angle_form() {
    for g in 2..=50u32 {
        assert!((edge_length(g).unwrap() - edge_length_half_angle(8 * g - 4)).abs() < 1e-12, "g={g}");
    }
    assert!((edge_length(3).unwrap() - 1.72748).abs() < 1e-5);
    assert!((3..=1000).all(|g| edge_length(g).unwrap() > edge_length(g - 1).unwrap()));
    assert!(edge_length(10_000).unwrap() < 3f64.acosh());
}

#[test]
fn lambda_values() {
    assert!((lambda_g(3).unwrap() - 0.33560).abs() < 1e-4);
    let mut prev = lambda_g(3).unwrap();
    for g in 4..=500 {
        let l = lambda_g(g).unwrap();
        assert!(l < prev, "g={g}");
        prev = l;
    }
    let sampled: Vec<u32> = (0..=60).map(|k| (3.0 * (1e6f64 / 3.0).powf(k as f64 / 60.0)).round() as u32).collect();
    assert!(sampled.windows(2).all(|w| w[0] == w[1] || lambda_g(w[1]).unwrap() < lambda_g(w[0]).unwrap()));
    let limit = (9.0 / 73f64.sqrt()).acosh();
    assert!((lambda_g(1_000_000).unwrap() - limit).abs() < 1e-5);
    assert!((lambda_limit() - limit).abs() < 1e-15);
    assert!((inj_radius_lower() - 0.16259).abs() < 1e-4);
}

#[test]
fn coincidence_bound() {
    assert_eq!(max_coincident(3).unwrap(), 168);
    assert_eq!(max_coincident(2).unwrap(), 84);
    assert_eq!(max_coincident(1), Err(HyperbolicError::GenusTooSmall { got: 1, min: 2 }));
}

#[test]
fn report() {
    let r = HyperbolicReport::new(3).unwrap();
    assert!((r.min_pair_length - r.m_g / 2.0).abs() < 1e-12);
    assert_eq!(r.inj_radius_note.quoted_matches, "full_limit");
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["max_coincident"], 168);
    assert!(HyperbolicReport::new(1).is_err());
}
