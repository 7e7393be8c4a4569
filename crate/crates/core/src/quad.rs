//! Quadrature: Gauss–Legendre panels and adaptive Gauss–Kronrod.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// `n`-point rule; nodes from Newton iteration on `P_n` in `f64`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pnm1 = if n == 1 { 1.0 } else { p0 };
                dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F, a: T, b: T) -> T {
        let half = (b - a) * T::lit(0.5);
        let mid = (b + a) * T::lit(0.5);
        let mut s = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s = s + *w * f(mid + half * *x);
        }
        s * half
    }

    /// Composite rule over `panels` equal panels of `[a, b]`.
    pub fn integrate_panels<F: FnMut(T) -> T>(&self, mut f: F, a: T, b: T, panels: usize) -> T {
        let panels = panels.max(1);
        let w = (b - a) / T::of_usize(panels);
        (0..panels)
            .map(|i| {
                let lo = a + w * T::of_usize(i);
                self.integrate(&mut f, lo, lo + w)
            })
            .fold(T::zero(), |x, y| x + y)
    }
}

/// Integral value with an error estimate.
#[derive(Clone, Copy, Debug)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

// Kronrod 15-point extension of the 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Estimate<T> {
    let c = (a + b) * T::lit(0.5);
    let h = (b - a) * T::lit(0.5);
    let fc = f(c);
    let mut rk = fc * T::lit(WGK[7]);
    let mut rg = fc * T::lit(WG[3]);
    for j in 0..7 {
        let x = h * T::lit(XGK[j]);
        let s = f(c - x) + f(c + x);
        rk = rk + T::lit(WGK[j]) * s;
        if j % 2 == 1 {
            rg = rg + T::lit(WG[j / 2]) * s;
        }
    }
    Estimate {
        value: rk * h,
        error: ((rk - rg) * h).abs(),
    }
}

struct Piece<T> {
    a: T,
    b: T,
    est: Estimate<T>,
}

impl<T: Real> PartialEq for Piece<T> {
    fn eq(&self, o: &Self) -> bool {
        self.est.error == o.est.error
    }
}
impl<T: Real> Eq for Piece<T> {}
impl<T: Real> PartialOrd for Piece<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: Real> Ord for Piece<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.est
            .error
            .partial_cmp(&o.est.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) on `[a, b]`, starting from the
/// given breakpoints (which must lie inside `[a, b]`).
///
/// Stops when the summed error estimate drops below `tol` (absolute).
pub fn adaptive<T: Real, F: FnMut(T) -> T>(f: F, a: T, b: T, breakpoints: &[T], tol: T) -> Result<Estimate<T>> {
    let est = adaptive_best(f, a, b, breakpoints, tol);
    if est.error > tol {
        return Err(Error::QuadratureNonConvergence {
            achieved: est.error.as_f64(),
            tolerance: tol.as_f64(),
        });
    }
    Ok(est)
}

/// As [`adaptive`], but returns the best estimate even when `tol` is not met
/// (rounding sets a floor on the error estimate).
pub fn adaptive_best<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, breakpoints: &[T], tol: T) -> Estimate<T> {
    let mut cuts: Vec<T> = vec![a];
    let mut inner: Vec<T> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    inner.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    cuts.extend(inner);
    cuts.push(b);

    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut err = T::zero();
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let est = gk15(&mut f, w[0], w[1]);
        total = total + est.value;
        err = err + est.error;
        heap.push(Piece {
            a: w[0],
            b: w[1],
            est,
        });
    }
    const MAX_PIECES: usize = 20_000;
    while err > tol && heap.len() < MAX_PIECES {
        let Some(p) = heap.pop() else { break };
        let m = (p.a + p.b) * T::lit(0.5);
        if m <= p.a || m >= p.b {
            heap.push(p);
            break;
        }
        let l = gk15(&mut f, p.a, m);
        let r = gk15(&mut f, m, p.b);
        total = total - p.est.value + l.value + r.value;
        err = err - p.est.error + l.error + r.error;
        heap.push(Piece { a: p.a, b: m, est: l });
        heap.push(Piece { a: m, b: p.b, est: r });
    }
    // Recompute from the pieces to shed accumulated rounding in the running sums.
    let (value, error) = heap.iter().fold((T::zero(), T::zero()), |(v, e), p| {
        (v + p.est.value, e + p.est.error)
    });
    Estimate { value, error }
}

/// Adaptive integration over panels no wider than `max_width`, the
/// tolerance being shared across panels.
pub fn adaptive_panels<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    max_width: T,
    tol: T,
) -> Result<Estimate<T>> {
    adaptive(&mut f, a, b, &panel_cuts(a, b, max_width), tol)
}

/// Interior cut points splitting `[a, b]` into equal panels no wider than `max_width`.
pub fn panel_cuts<T: Real>(a: T, b: T, max_width: T) -> Vec<T> {
    let n = ((b - a) / max_width).ceil().to_usize().unwrap_or(1).max(1);
    let w = (b - a) / T::of_usize(n);
    (1..n).map(|i| a + w * T::of_usize(i)).collect()
}
