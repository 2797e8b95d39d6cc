use conch_core::annotate::{fleiss_kappa, MetricError, RatingMatrix};
use conch_core::layout::{
    solve_angle_for_arc, spiral_arc_length, spiral_arc_length_closed_form, spiral_arc_length_quadrature, LayoutConfig,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point(a: f64, b: f64, t: f64) -> (f64, f64) {
    let r = a + b * t;
    (r * t.sin(), r * t.cos())
}

fn triples(seed: u64, n: usize) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let a = rng.random_range(0.01..1000.0);
            let b = if rng.random_bool(0.1) { 0.0 } else { rng.random_range(0.0..50.0) };
            (a, b, rng.random_range(1e-6..(2.0 * std::f64::consts::PI)))
        })
        .collect()
}

#[test]
fn closed_form_matches_quadrature() {
    for (a, b, theta) in triples(7, 100) {
        let c = spiral_arc_length_closed_form(a, b, 0.0, theta).unwrap();
        let q = spiral_arc_length_quadrature(a, b, 0.0, theta).unwrap();
        assert!(((c - q) / q).abs() <= 1e-9, "a={a} b={b} θ={theta}: {c} vs {q}");
    }
}

#[test]
fn additivity_and_chord_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (a, b, theta) in triples(13, 100) {
        let mid = theta * rng.random_range(0.0..1.0);
        let whole = spiral_arc_length(a, b, 0.0, theta).unwrap();
        let parts = spiral_arc_length(a, b, 0.0, mid).unwrap() + spiral_arc_length(a, b, mid, theta).unwrap();
        assert!((whole - parts).abs() <= 1e-9 * whole.max(1.0), "a={a} b={b}: {whole} vs {parts}");
        let (p, q) = (point(a, b, 0.0), point(a, b, theta));
        let chord = (p.0 - q.0).hypot(p.1 - q.1);
        assert!(whole >= chord * (1.0 - 1e-12), "a={a} b={b} θ={theta}: arc {whole} < chord {chord}");
    }
}

#[test]
fn circle_and_hand_values() {
    let full = spiral_arc_length(5.0, 0.0, 0.0, 2.0 * std::f64::consts::PI).unwrap();
    assert!((full - 10.0 * std::f64::consts::PI).abs() < 1e-12);
    // ∫₀^{2π} sqrt(θ² + 1) dθ
    let v = spiral_arc_length(0.0, 1.0, 0.0, 2.0 * std::f64::consts::PI).unwrap();
    assert!((v - 21.256294148209).abs() < 1e-9, "{v}");
    assert!(spiral_arc_length(1.0, -1.0, 0.0, 2.0).is_err());
    assert!(spiral_arc_length(1.0, 1.0, 2.0, 1.0).is_err());
}

#[test]
fn solved_angle_is_monotone() {
    let config = LayoutConfig::default();
    let (d, rise) = (340.0, 12.0);
    let lo = spiral_arc_length(d, rise / config.angle_min, 0.0, config.angle_min).unwrap();
    let hi = spiral_arc_length(d, rise / config.angle_max, 0.0, config.angle_max).unwrap();
    let mut prev = 0.0;
    for i in 0..=50 {
        let target = lo + (hi - lo) * i as f64 / 50.0;
        let phi = solve_angle_for_arc(d, rise, target, &config).unwrap();
        assert!(phi > prev || i == 0, "target {target}: {phi} <= {prev}");
        let arc = spiral_arc_length(d, rise / phi, 0.0, phi).unwrap();
        assert!((arc - target).abs() <= config.arc_tolerance * target);
        prev = phi;
    }
}

#[test]
fn kappa_oracles() {
    let perfect = RatingMatrix::new(vec![vec![3, 0], vec![0, 3], vec![3, 0]]).unwrap();
    assert_eq!(fleiss_kappa(&perfect).unwrap(), 1.0);
    // P̄ = (1 + 1/3)/2, P̄e = (5/6)² + (1/6)², so κ = (2/3 − 13/18)/(5/18).
    let hand = RatingMatrix::new(vec![vec![3, 0], vec![2, 1]]).unwrap();
    assert!((fleiss_kappa(&hand).unwrap() + 0.2).abs() <= 1e-9);
    let all_one = RatingMatrix::new(vec![vec![3, 0], vec![3, 0]]).unwrap();
    assert_eq!(fleiss_kappa(&all_one), Err(MetricError::DegenerateAgreement));
}

#[test]
fn kappa_permutation_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 1000 {
        let items = rng.random_range(1..12);
        let cats = rng.random_range(2..6);
        let raters = rng.random_range(2..8u64);
        let rows: Vec<Vec<u64>> = (0..items)
            .map(|_| {
                let mut row = vec![0u64; cats];
                for _ in 0..raters {
                    row[rng.random_range(0..cats)] += 1;
                }
                row
            })
            .collect();
        let Ok(base) = fleiss_kappa(&RatingMatrix::new(rows.clone()).unwrap()) else { continue };
        let mut shuffled = rows.clone();
        shuffled.shuffle(&mut rng);
        let mut perm: Vec<usize> = (0..cats).collect();
        perm.shuffle(&mut rng);
        let permuted: Vec<Vec<u64>> = shuffled.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect();
        let k = fleiss_kappa(&RatingMatrix::new(permuted).unwrap()).unwrap();
        assert!((k - base).abs() <= 1e-12, "{rows:?}: {base} vs {k}");
        checked += 1;
    }
}
