use proptest::prelude::*;
use rbf_lp::kernels::wendland_construct;
use rbf_lp::spectral::{build_measure_1d, hankel_oracle, wend1d_decompose, young_trials, WendlandTransform};
use rbf_lp::Wendland;

#[test]
fn same_m_gives_same_transform() {
    let a = WendlandTransform::<f64>::calibrate(3, 1).unwrap();
    let b = WendlandTransform::<f64>::calibrate(1, 2).unwrap();
    assert_eq!(a.m(), b.m());
    for r in [0.0, 0.3, 1.0, 4.0, 17.0] {
        let (x, y) = (a.eval(r), b.eval(r));
        assert!((x - y).abs() <= 1e-9 * x.abs().max(y.abs()), "r={r}: {x} vs {y}");
    }
}

#[test]
fn factored_forms_of_small_cases() {
    // (d, k) -> (ℓ, q, scale numerator, scale denominator)
    type Case = (usize, usize, usize, &'static [i64], i64, i64);
    let cases: [Case; 4] = [
        (1, 1, 3, &[1, 3], 1, 12),
        (1, 2, 5, &[1, 5, 8], 1, 280),
        (3, 1, 4, &[1, 4], 1, 20),
        (3, 3, 8, &[1, 8, 25, 32], 1, 22176),
    ];
    for (d, k, ell, q, n, den) in cases {
        let f = wendland_construct(d, k).unwrap().factored();
        assert_eq!(f.ell, ell, "d={d} k={k}");
        let got: Vec<i64> = f.q.iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(got, q, "d={d} k={k}");
        assert_eq!(f.scale, rbf_lp::exact::rat(n, den), "d={d} k={k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn young_inequality_holds(seed in any::<u64>(), k in 1usize..=3) {
        let dec = wend1d_decompose::<f64>(k).unwrap();
        let m = build_measure_1d(k, &dec).unwrap();
        for t in young_trials(&m.measure, 6, seed) {
            prop_assert!(t.holds(1e-10), "p={} lhs={} rhs={}", t.p, t.lhs, t.rhs);
        }
    }

    #[test]
    fn closed_form_matches_oracle_at_random_radii(r in 0.05f64..30.0, dk in 0usize..4) {
        let (d, k) = [(1, 1), (1, 2), (3, 1), (3, 2)][dk];
        let tr = WendlandTransform::<f64>::calibrate(d, k).unwrap();
        let oracle = hankel_oracle(&Wendland::<f64>::new(d, k).unwrap(), d, r).unwrap().value;
        let v = tr.eval(r);
        prop_assert!(v > 0.0);
        prop_assert!(((v - oracle) / oracle).abs() < 1e-6, "d={} k={} r={}: {} vs {}", d, k, r, v, oracle);
    }
}
