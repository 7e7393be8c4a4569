use proptest::prelude::*;
use rbf_lp::geometry::{fill_distance, make_quasi_uniform, separation_radius, BoxDomain};
use rbf_lp::polyrep::{default_c3, ReproBuilder, ReproSettings};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect()).collect()
}

fn brute_fill(points: &[Vec<f64>], domain: &BoxDomain<f64>, res: f64) -> f64 {
    let g = domain.grid(res);
    (0..g.len())
        .map(|i| {
            let x = g.point(i);
            points
                .iter()
                .map(|p| p.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

#[test]
fn fill_distance_matches_brute_force_fine_grid() {
    for d in 1..=2 {
        let pts = random_points(50, d, 11 + d as u64);
        let dom = BoxDomain::cube(d, 0.0, 1.0).unwrap();
        let res = 1e-3;
        let fast = fill_distance(&pts, &dom, res).unwrap();
        let slow = brute_fill(&pts, &dom, res);
        assert!((fast.value - slow).abs() < 1e-12, "d={d}: {} vs {slow}", fast.value);
        assert!((fast.slack - res * (d as f64).sqrt() / 2.0).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fill_distance_shrinks_when_points_are_added(seed in any::<u64>(), d in 1usize..=2, extra in 1usize..20) {
        let dom = BoxDomain::cube(d, 0.0, 1.0).unwrap();
        let base = random_points(30, d, seed);
        let mut more = base.clone();
        more.extend(random_points(extra, d, seed.wrapping_add(1)));
        let h0 = fill_distance(&base, &dom, 1e-2).unwrap().value;
        let h1 = fill_distance(&more, &dom, 1e-2).unwrap().value;
        prop_assert!(h1 <= h0 + 1e-15);
        let q0 = separation_radius(&base).unwrap();
        let q1 = separation_radius(&more).unwrap();
        prop_assert!(q1 <= q0 + 1e-15);
    }

    #[test]
    fn separation_never_exceeds_fill(seed in any::<u64>(), d in 1usize..=2) {
        let dom = BoxDomain::cube(d, 0.0, 1.0).unwrap();
        let pts = random_points(40, d, seed);
        let h = fill_distance(&pts, &dom, 1e-2).unwrap();
        let q = separation_radius(&pts).unwrap();
        prop_assert!(q <= h.value + h.slack);
    }

    #[test]
    fn translation_moves_partition_and_weights(
        seed in 0u64..1000,
        shift in prop::collection::vec(-3.0f64..3.0, 2),
        t in prop::collection::vec(0.2f64..0.8, 2),
    ) {
        let dom = BoxDomain::cube(2, 0.0, 1.0).unwrap();
        let x = make_quasi_uniform(&dom, 0.125, 0.2, seed).unwrap();
        let y = x.translate(&shift);
        prop_assert_eq!(x.h(), y.h());
        prop_assert_eq!(x.q(), y.q());
        let ts: Vec<f64> = t.iter().zip(&shift).map(|(a, b)| a + b).collect();
        prop_assert_eq!(x.partition().cube_of(&t), y.partition().cube_of(&ts));

        let settings = ReproSettings::new(1, default_c3(2, 1, 4.0));
        let fx = ReproBuilder::new(&x, settings.clone()).functional(&t).unwrap();
        let fy = ReproBuilder::new(&y, settings).functional(&ts).unwrap();
        prop_assert_eq!(&fx.star, &fy.star);
        for (a, b) in fx.weights.iter().zip(&fy.weights) {
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }
    }
}

#[test]
fn generated_sets_are_quasi_uniform() {
    for d in 1..=2 {
        let dom = BoxDomain::cube(d, 0.0, 1.0).unwrap();
        for seed in 0..4 {
            let x = make_quasi_uniform(&dom, 1.0 / 16.0, 0.25, seed).unwrap();
            assert!(x.check_quasi_uniform(4.0).is_ok(), "d={d} seed={seed} rho={}", x.rho());
        }
    }
}
