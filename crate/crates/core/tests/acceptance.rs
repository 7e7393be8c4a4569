//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rbf_lp::approx::{run_rates, KernelSpec, LpNorm, RateConfig};
use rbf_lp::exact::{factorial, int, GaussRat};
use rbf_lp::geometry::{make_quasi_uniform, BoxDomain};
use rbf_lp::kernels::{proportionality_factor, wendland_construct, Wendland};
use rbf_lp::poly::Poly;
use rbf_lp::polyrep::{default_c3, property2_scan, ReproBuilder, ReproSettings};
use rbf_lp::spectral::{
    build_measure_1d, decay_summary, factorization_table, hankel_oracle, log_grid, partial_fractions,
    wend1d_decompose, young_trials, WendlandTransform,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// (1-r)^e · q(r), q given by ascending integer coefficients
fn tabulated(e: usize, q: &[i64]) -> Poly<BigRational> {
    let one_minus_r = Poly::new(vec![int(1), int(-1)]);
    &one_minus_r.pow(e) * &Poly::new(q.iter().map(|&c| int(c)).collect())
}

fn table_one() -> Outcome {
    let table = [
        (1, 0, tabulated(1, &[1])),
        (1, 1, tabulated(3, &[1, 3])),
        (1, 2, tabulated(5, &[1, 5, 8])),
        (3, 0, tabulated(2, &[1])),
        (3, 1, tabulated(4, &[1, 4])),
        (3, 2, tabulated(6, &[3, 18, 35])),
        (3, 3, tabulated(8, &[1, 8, 25, 32])),
    ];
    let mut bad = Vec::new();
    let mut factors = Vec::new();
    for (d, k, form) in &table {
        let built = wendland_construct(*d, *k).expect("construction");
        match proportionality_factor(built.poly(), form) {
            Some(c) => factors.push(format!("({d},{k}):{c}")),
            None => bad.push(format!("({d},{k})")),
        }
    }
    if bad.is_empty() {
        outcome(true, format!("7/7 proportional, factors {}", factors.join(" ")))
    } else {
        outcome(false, format!("not proportional: {}", bad.join(", ")))
    }
}

fn partial_fraction_exactness() -> Outcome {
    let mut multiply_back = true;
    let mut alpha_ok = true;
    let mut beta_stated = true;
    let mut beta_opposite = true;
    for m in 0..=8usize {
        let t = partial_fractions(m).expect("table");
        multiply_back &= t.multiply_back() == Poly::constant(GaussRat::one());
        alpha_ok &= t.alpha()[m] == BigRational::one();
        let pow2 = int(1 << (m + 1));
        let stated = if m % 2 == 0 { int(1) } else { int(-1) } / pow2.clone();
        beta_stated &= t.beta()[m] == GaussRat::real(stated.clone());
        beta_opposite &= t.beta()[m] == GaussRat::real(-stated);
    }
    let detail = format!(
        "m=0..8: multiply-back {}, alpha_m=1 {}, beta_m=(-1)^m/2^(m+1) {}{}",
        ok(multiply_back),
        ok(alpha_ok),
        ok(beta_stated),
        if beta_opposite {
            " (computed beta_m = (-1)^(m+1)/2^(m+1) for every m)"
        } else {
            ""
        }
    );
    outcome(multiply_back && alpha_ok && beta_stated, detail)
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISMATCH"
    }
}

const PAIRS: [(usize, usize); 4] = [(1, 1), (1, 2), (3, 1), (3, 2)];

fn transform_agreement() -> Outcome {
    let radii = log_grid(0.1f64, 50.0, 20);
    let mut worst = (0.0f64, 0, 0, 0.0);
    for &(d, k) in &PAIRS {
        let tr = match WendlandTransform::<f64>::calibrate(d, k) {
            Ok(t) => t,
            Err(e) => return outcome(false, format!("({d},{k}) calibration: {e}")),
        };
        let phi = Wendland::<f64>::new(d, k).expect("kernel");
        for &r in &radii {
            let oracle = match hankel_oracle(&phi, d, r) {
                Ok(e) => e.value,
                Err(e) => return outcome(false, format!("({d},{k}) oracle at r={r}: {e}")),
            };
            let rel = ((tr.eval(r) - oracle) / oracle).abs();
            if rel > worst.0 {
                worst = (rel, d, k, r);
            }
        }
    }
    outcome(
        worst.0 < 1e-6,
        format!(
            "max relative error {:.2e} at (d,k)=({},{}), r={:.3} over 20 radii x 4 pairs",
            worst.0, worst.1, worst.2, worst.3
        ),
    )
}

fn decay() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for &(d, k) in &PAIRS {
        let tr = WendlandTransform::<f64>::calibrate(d, k).expect("calibration");
        let s = decay_summary(&tr, 40);
        let good = s.sup.is_finite() && s.final_decade_growth < 0.05;
        pass &= good;
        parts.push(format!(
            "({d},{k}) sup={:.3e} growth={:.2}%",
            s.sup,
            100.0 * s.final_decade_growth
        ));
    }
    outcome(pass, parts.join("; "))
}

fn measure_factorization() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for k in 1..=2usize {
        let dec = wend1d_decompose::<f64>(k).expect("decomposition");
        let m = build_measure_1d(k, &dec).expect("measure");
        let rows = match factorization_table(&m, dec.transform(), 50.0, 501) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("k={k}: {e}")),
        };
        let max_res = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
        let floor = dec.amplitude() / (2.0 * rbf_lp::exact::to_real::<f64>(&factorial(k)));
        let min_atoms = rows.iter().map(|r| r.atoms_ft.abs()).fold(f64::INFINITY, f64::min);
        // k = 1 attains the bound with equality at cos ω = -1
        let good = max_res < 1e-4 && min_atoms >= floor * (1.0 - 1e-12);
        pass &= good;
        parts.push(format!(
            "k={k} max residual {max_res:.2e}, min |atoms^| {min_atoms:.4e} vs B/(2k!) {floor:.4e}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn polynomial_reproduction() -> Outcome {
    let mut worst_err = 0.0f64;
    let mut worst_l1 = 0.0f64;
    for &(d, spacing, degree) in &[(1usize, 1.0 / 40.0, 3usize), (2, 1.0 / 16.0, 2)] {
        let dom = BoxDomain::cube(d, 0.0, 1.0).expect("domain");
        for seed in 1..=3u64 {
            let x = make_quasi_uniform(&dom, spacing, 0.25, seed).expect("points");
            let b = ReproBuilder::new(&x, ReproSettings::new(degree, default_c3(d, degree, 4.0)));
            let n_mono = b.basis().len();
            let exps = b.basis().exponents().to_vec();
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let polys: Vec<Vec<f64>> = (0..20)
                .map(|_| (0..n_mono).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let eval = |c: &[f64], y: &[f64]| -> f64 {
                exps.iter()
                    .zip(c)
                    .map(|(a, &ci)| ci * a.iter().zip(y).map(|(&e, &v)| v.powi(e as i32)).product::<f64>())
                    .sum()
            };
            for _ in 0..100 {
                let t: Vec<f64> = (0..d).map(|_| rng.gen_range(0.25..0.75)).collect();
                let f = match b.functional(&t) {
                    Ok(f) => f,
                    Err(e) => return outcome(false, format!("d={d} seed={seed}: {e}")),
                };
                worst_l1 = worst_l1.max(f.l1_norm);
                for c in &polys {
                    let got = f.apply(&x, |y| eval(c, y));
                    worst_err = worst_err.max((got - eval(c, &t)).abs());
                }
            }
        }
    }
    outcome(
        worst_err < 1e-9 && worst_l1 <= 2.5,
        format!("max reproduction error {worst_err:.2e}, max ||lambda_t||_1 {worst_l1:.3}"),
    )
}

fn rate_line(cfg: &RateConfig, min_rate: f64) -> (bool, String) {
    match run_rates(cfg) {
        Err(e) => (false, format!("{:?}: {e}", cfg.kernel)),
        Ok(reps) => {
            let mut pass = true;
            let parts: Vec<String> = reps
                .iter()
                .map(|r| {
                    let good = r.fitted_rate.is_some_and(|s| s >= min_rate);
                    pass &= good;
                    format!(
                        "{} p={} slope {} (need >= {min_rate})",
                        r.kernel,
                        r.p,
                        r.fitted_rate.map_or("n/a".into(), |s| format!("{s:.3}"))
                    )
                })
                .collect();
            (pass, parts.join("; "))
        }
    }
}

fn sobolev_rate() -> Outcome {
    let cfg = RateConfig::one_dimensional(KernelSpec::Sobolev { gamma: 2 });
    let (pass, detail) = rate_line(&cfg, 1.6);
    outcome(pass, detail)
}

fn wendland_rate() -> Outcome {
    let mut c1 = RateConfig::one_dimensional(KernelSpec::Wendland { k: 1 });
    c1.p = vec![LpNorm(2.0), LpNorm::INF];
    let mut c2 = RateConfig::one_dimensional(KernelSpec::Wendland { k: 2 });
    c2.p = vec![LpNorm(2.0), LpNorm::INF];
    let (p1, d1) = rate_line(&c1, 1.6);
    let (p2, d2) = rate_line(&c2, 3.4);
    outcome(p1 && p2, format!("{d1}; {d2}"))
}

fn property2_scaling() -> Outcome {
    let phi = Wendland::<f64>::new(1, 1).expect("kernel");
    let dom = BoxDomain::cube(1, -2.0, 3.0).expect("domain");
    let region = BoxDomain::cube(1, 0.0, 1.0).expect("region");
    let mut c = Vec::new();
    let mut beyond = 0.0f64;
    for &s in &[1.0 / 16.0, 1.0 / 32.0] {
        let x = make_quasi_uniform(&dom, s, 0.25, 7).expect("points");
        let b = ReproBuilder::new(&x, ReproSettings::new(1, default_c3(1, 1, 4.0)));
        let scan = match property2_scan(&phi, &b, 2.0, 2.0, &region, 4000, 7) {
            Ok(sc) => sc,
            Err(e) => return outcome(false, format!("spacing {s}: {e}")),
        };
        beyond = beyond.max(scan.beyond_support_max.unwrap_or(0.0));
        c.push((scan.h, scan.c_emp));
    }
    let ratio = c[1].1 / c[0].1;
    outcome(
        (0.25..=4.0).contains(&ratio),
        format!(
            "C_emp(h={:.4})={:.4e}, C_emp(h={:.4})={:.4e}, ratio {ratio:.3}; max |E| beyond 1+C1 h: {beyond:.1e}",
            c[0].0, c[0].1, c[1].0, c[1].1
        ),
    )
}

fn young() -> Outcome {
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut total = 0;
    for k in 1..=2usize {
        let dec = wend1d_decompose::<f64>(k).expect("decomposition");
        let m = build_measure_1d(k, &dec).expect("measure");
        for t in young_trials(&m.measure, 100, 20 + k as u64) {
            total += 1;
            if !t.holds(1e-10) {
                violations += 1;
            }
            worst = worst.max(t.lhs / t.rhs);
        }
    }
    outcome(
        violations == 0,
        format!("{total} trials over p in {{1,2,inf}}, k in {{1,2}}: {violations} violations, max lhs/rhs {worst:.4}"),
    )
}

fn d3_smoke() -> Outcome {
    let mut cfg = RateConfig::one_dimensional(KernelSpec::Wendland { k: 1 });
    cfg.d = 3;
    cfg.spacings = vec![0.5, 0.4];
    cfg.jitter = 0.1;
    cfg.fit_lo = -0.5;
    cfg.fit_hi = 0.5;
    cfg.bump_center = 0.0;
    cfg.bump_half_width = 0.45;
    match run_rates(&cfg) {
        Err(e) => outcome(false, e.to_string()),
        Ok(reps) => {
            let r = &reps[0];
            let errs: Vec<String> = r.levels.iter().map(|l| format!("h={:.3} err={:.3e}", l.h, l.error)).collect();
            outcome(r.monotone, format!("{}: {}", r.kernel, errs.join(", ")))
        }
    }
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 Table-1 exactness", table_one, Some(Duration::from_secs(1))),
        ("2 partial-fraction exactness", partial_fraction_exactness, Some(Duration::from_secs(1))),
        ("3 transform agreement", transform_agreement, Some(Duration::from_secs(30))),
        ("4 transform decay", decay, None),
        ("5 measure factorization", measure_factorization, None),
        ("6 polynomial reproduction", polynomial_reproduction, None),
        ("7 Sobolev-spline rate", sobolev_rate, Some(Duration::from_secs(120))),
        ("8 Wendland rate", wendland_rate, Some(Duration::from_secs(300))),
        ("9 Property-2 scaling", property2_scaling, None),
        ("10 Young's inequality", young, None),
        ("smoke d=3 Wendland", d3_smoke, None),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = budget.is_none_or(|b| took <= b);
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        let timing = match budget {
            Some(b) => format!("{:.2}s of {}s", took.as_secs_f64(), b.as_secs()),
            None => format!("{:.2}s", took.as_secs_f64()),
        };
        println!(
            "[{}] criterion {name}: {} ({timing})",
            if pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    println!("acceptance: {} of 11 passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

