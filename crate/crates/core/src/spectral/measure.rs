//! The one-dimensional decomposition of `x^{2k+2} Φ̂_{1,k}(x)` and the finite
//! measure `μ` with `μ̂ = Φ̂_{1,k} (1 + |ω|^{2k+2})`.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::transform::WendlandTransform;
use crate::error::{Error, Result};
use crate::exact::{factorial, int, to_real};
use crate::kernels::wendland_construct;
use crate::poly::Poly;
use crate::quad::{adaptive_panels, GaussLegendre};
use crate::scalar::Real;

// ---------------------------------------------------------------------------
// Piecewise polynomials on the line

/// Polynomial pieces on consecutive intervals `[a_i, b_i)`, zero elsewhere.
/// Coefficients are in powers of `x` (not shifted).
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePoly<T> {
    pieces: Vec<(T, T, Vec<T>)>,
}

impl<T: Real> PiecewisePoly<T> {
    pub fn new(mut pieces: Vec<(T, T, Vec<T>)>) -> Self {
        pieces.retain(|(a, b, _)| b > a);
        pieces.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
        Self { pieces }
    }

    pub fn zero() -> Self {
        Self { pieces: Vec::new() }
    }

    /// Linear interpolant through `(x_i, y_i)`, zero outside `[x_0, x_n]`.
    pub fn linear_interpolant(nodes: &[(T, T)]) -> Self {
        let pieces = nodes
            .windows(2)
            .map(|w| {
                let ((x0, y0), (x1, y1)) = (w[0], w[1]);
                let slope = (y1 - y0) / (x1 - x0);
                (x0, x1, vec![y0 - slope * x0, slope])
            })
            .collect();
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[(T, T, Vec<T>)] {
        &self.pieces
    }

    pub fn eval(&self, x: T) -> T {
        for (a, b, c) in &self.pieces {
            if x >= *a && x < *b {
                return c.iter().rev().fold(T::zero(), |acc, &v| acc * x + v);
            }
        }
        T::zero()
    }

    /// Sorted interval endpoints.
    pub fn breaks(&self) -> Vec<T> {
        let mut v: Vec<T> = self.pieces.iter().flat_map(|(a, b, _)| [*a, *b]).collect();
        sort_dedup(&mut v);
        v
    }

    pub fn support(&self) -> Option<(T, T)> {
        let a = self.pieces.first()?.0;
        let b = self.pieces.iter().map(|p| p.1).fold(a, T::max);
        Some((a, b))
    }

    /// Restriction to `[lo, hi]`.
    pub fn clip(&self, lo: T, hi: T) -> Self {
        Self::new(
            self.pieces
                .iter()
                .map(|(a, b, c)| (a.max(lo), b.min(hi), c.clone()))
                .collect(),
        )
    }

    /// `∫ |p|` computed exactly per piece after splitting at sign changes.
    pub fn l1_norm(&self) -> T {
        let mut total = T::zero();
        for (a, b, c) in &self.pieces {
            let poly = Poly::new(c.clone());
            let anti = antiderivative(c);
            let mut cuts = vec![*a];
            cuts.extend(sign_changes(|x| poly.eval(&x), *a, *b, 64));
            cuts.push(*b);
            for w in cuts.windows(2) {
                total = total + (anti.eval(&w[1]) - anti.eval(&w[0])).abs();
            }
        }
        total
    }
}

fn antiderivative<T: Real>(c: &[T]) -> Poly<T> {
    let mut v = vec![T::zero()];
    v.extend(c.iter().enumerate().map(|(i, &a)| a / T::of_usize(i + 1)));
    Poly::new(v)
}

fn sort_dedup<T: Real>(v: &mut Vec<T>) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v.dedup();
}

/// Sign changes of `f` on `(a, b)`, located by sampling and bisection.
fn sign_changes<T: Real>(f: impl Fn(T) -> T, a: T, b: T, samples: usize) -> Vec<T> {
    let mut out = Vec::new();
    let step = (b - a) / T::of_usize(samples);
    let mut x0 = a;
    let mut f0 = f(a);
    for i in 1..=samples {
        let x1 = if i == samples { b } else { a + step * T::of_usize(i) };
        let f1 = f(x1);
        if f1 == T::zero() && i < samples {
            out.push(x1);
        } else if f0 * f1 < T::zero() {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = (lo + hi) / T::lit(2.0);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid);
                if fm * flo <= T::zero() {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            out.push((lo + hi) / T::lit(2.0));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

/// `‖g‖_p` of a function smooth between the given breakpoints; `p = ∞` gives
/// a sampled maximum.
pub fn lp_norm_piecewise<T: Real>(g: impl Fn(T) -> T, breaks: &[T], p: T) -> T {
    let gl = GaussLegendre::<T>::new(12);
    let mut acc = T::zero();
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        if p.is_infinite() {
            for i in 0..=64 {
                let x = a + (b - a) * T::of_usize(i) / T::lit(64.0);
                acc = acc.max(g(x).abs());
            }
            continue;
        }
        let mut cuts = vec![a];
        cuts.extend(sign_changes(&g, a, b, 32));
        cuts.push(b);
        for c in cuts.windows(2) {
            acc = acc + gl.integrate_panels(|x| g(x).abs().powf(p), c[0], c[1], 4);
        }
    }
    if p.is_infinite() {
        acc
    } else {
        acc.powf(T::one() / p)
    }
}

// ---------------------------------------------------------------------------
// The decomposition

/// `x^{2k+2} Φ̂_{1,k}(x) = B_k (1/k! + c_cos cos x + C sin x / x + ĥ(x))`.
#[derive(Clone, Debug)]
pub struct Wend1DDecomposition<T> {
    k: usize,
    const_term: BigRational,
    cos_coeff: BigRational,
    sinc_coeff: BigRational,
    // j ≤ k-2: [α_j/j!, 2Re β_j/j!, 2Im β_j/j!]
    remainder: Vec<[T; 3]>,
    transform: WendlandTransform<T>,
}

pub fn wend1d_decompose<T: Real>(k: usize) -> Result<Wend1DDecomposition<T>> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "the one-dimensional decomposition needs k ≥ 1".into(),
        ));
    }
    let transform = WendlandTransform::<T>::calibrate(1, k)?;
    let t = transform.table();
    let two = int(2);
    let const_term = t.alpha()[k].clone() / factorial(k);
    let cos_coeff = &t.beta()[k].re * &two / factorial(k);
    let sinc_coeff = &t.beta()[k - 1].im * &two / factorial(k - 1);
    let remainder = (0..k.saturating_sub(1))
        .map(|j| {
            let f = factorial(j);
            [
                to_real(&(t.alpha()[j].clone() / &f)),
                to_real(&(&t.beta()[j].re * &two / &f)),
                to_real(&(&t.beta()[j].im * &two / &f)),
            ]
        })
        .collect();
    Ok(Wend1DDecomposition {
        k,
        const_term,
        cos_coeff,
        sinc_coeff,
        remainder,
        transform,
    })
}

impl<T: Real> Wend1DDecomposition<T> {
    pub fn k(&self) -> usize {
        self.k
    }

    /// `1/k!`
    pub fn const_term(&self) -> &BigRational {
        &self.const_term
    }

    /// `(-1)^{k+1}/(k! 2^k)`
    pub fn cos_coeff(&self) -> &BigRational {
        &self.cos_coeff
    }

    /// Half the cosine coefficient.
    pub fn b_l(&self) -> BigRational {
        self.cos_coeff.clone() / int(2)
    }

    /// `C`, the coefficient of `sin x / x`.
    pub fn sinc_coeff(&self) -> &BigRational {
        &self.sinc_coeff
    }

    pub fn transform(&self) -> &WendlandTransform<T> {
        &self.transform
    }

    pub fn amplitude(&self) -> T {
        self.transform.amplitude()
    }

    pub fn remainder_is_zero(&self) -> bool {
        self.remainder.is_empty()
    }

    /// `B_k (1/k! + c_cos cos x + C sin x / x)`.
    pub fn named_terms(&self, x: T) -> T {
        let sinc = if x == T::zero() { T::one() } else { x.sin() / x };
        self.amplitude()
            * (to_real::<T>(&self.const_term)
                + to_real::<T>(&self.cos_coeff) * x.cos()
                + to_real::<T>(&self.sinc_coeff) * sinc)
    }

    /// `ĥ(x)`: residual form below the series switch, explicit form above.
    pub fn h_hat(&self, x: T) -> T {
        if self.remainder.is_empty() {
            return T::zero();
        }
        let x = x.abs();
        let fm = self.transform.fm();
        if x < fm.switch_radius() {
            let lhs = x.powi(2 * self.k as i32 + 2) * fm.eval_scaled(x);
            lhs - self.named_terms(x) / self.amplitude()
        } else {
            let (s, c) = x.sin_cos();
            let k = self.k as i32;
            self.remainder
                .iter()
                .enumerate()
                .map(|(j, t)| x.powi(j as i32 - k) * (t[0] + t[1] * c + t[2] * s))
                .fold(T::zero(), |a, b| a + b)
        }
    }
}

// ---------------------------------------------------------------------------
// Finite measures

/// `μ = Σ w_i δ_{a_i} + ρ(x) dx` on the line; there is no singular-continuous part.
#[derive(Clone, Debug)]
pub struct FiniteMeasure<T> {
    atoms: Vec<(T, T)>,
    density: PiecewisePoly<T>,
    tv_norm: T,
}

impl<T: Real> FiniteMeasure<T> {
    pub fn new(atoms: Vec<(T, T)>, density: PiecewisePoly<T>) -> Self {
        let tv_norm = atoms.iter().map(|(_, w)| w.abs()).fold(T::zero(), |a, b| a + b) + density.l1_norm();
        Self {
            atoms,
            density,
            tv_norm,
        }
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    pub fn density(&self) -> &PiecewisePoly<T> {
        &self.density
    }

    /// `‖μ‖ = Σ|w_i| + ∫|ρ|`.
    pub fn tv_norm(&self) -> T {
        self.tv_norm
    }

    /// `μ` restricted to `[-radius, radius]`.
    pub fn restrict(&self, radius: T) -> Self {
        Self::new(
            self.atoms.iter().copied().filter(|(a, _)| a.abs() <= radius).collect(),
            self.density.clip(-radius, radius),
        )
    }

    /// `μ - μ|_{[-radius, radius]}`.
    pub fn tail(&self, radius: T) -> Self {
        let big = T::max_value();
        let mut d = self.density.clip(-big, -radius).pieces().to_vec();
        d.extend(self.density.clip(radius, big).pieces().iter().cloned());
        let atoms = self.atoms.iter().copied().filter(|(a, _)| a.abs() > radius).collect();
        Self::new(atoms, PiecewisePoly::new(d))
    }

    /// `(f * μ)(x)` for a piecewise-linear (or piecewise-polynomial) `f`.
    pub fn convolve_at(&self, f: &PiecewisePoly<T>, x: T) -> T {
        let mut s = self
            .atoms
            .iter()
            .fold(T::zero(), |acc, &(a, w)| acc + w * f.eval(x - a));
        let gl = GaussLegendre::<T>::new(8);
        let fb = f.breaks();
        for (a, b, c) in self.density.pieces() {
            let mut cuts = vec![*a, *b];
            cuts.extend(fb.iter().map(|&t| x - t).filter(|&y| y > *a && y < *b));
            sort_dedup(&mut cuts);
            for w in cuts.windows(2) {
                s = s + gl.integrate(
                    |y| c.iter().rev().fold(T::zero(), |acc, &v| acc * y + v) * f.eval(x - y),
                    w[0],
                    w[1],
                );
            }
        }
        s
    }

    /// Breakpoints of `f * μ` given the breakpoints of `f`.
    fn convolution_breaks(&self, f: &PiecewisePoly<T>) -> Vec<T> {
        let fb = f.breaks();
        let mut shifts: Vec<T> = self.atoms.iter().map(|(a, _)| *a).collect();
        shifts.extend(self.density.breaks());
        let mut out: Vec<T> = fb
            .iter()
            .flat_map(|&t| shifts.iter().map(move |&s| t + s))
            .collect();
        sort_dedup(&mut out);
        out
    }
}

/// `μ̂(ω)` under the `(2π)^{-1/2}` convention (real part; the measures built
/// here are even). Atoms are summed exactly, the density by adaptive
/// quadrature with absolute tolerance `1e-10`.
pub fn measure_ft<T: Real>(mu: &FiniteMeasure<T>, omega: T) -> Result<T> {
    let c = T::one() / (T::PI() * T::lit(2.0)).sqrt();
    let mut s = atoms_ft(mu, omega);
    let tol = T::lit(1e-10).max(T::epsilon() * T::lit(1e3));
    let n = mu.density.pieces().len().max(1);
    for (a, b, coeffs) in mu.density.pieces() {
        let width = if omega == T::zero() {
            *b - *a
        } else {
            (T::PI() / (T::lit(4.0) * omega.abs())).min(*b - *a)
        };
        let est = adaptive_panels(
            |x| coeffs.iter().rev().fold(T::zero(), |acc, &v| acc * x + v) * (omega * x).cos(),
            *a,
            *b,
            width,
            tol / T::of_usize(n),
        )?;
        s = s + c * est.value;
    }
    Ok(s)
}

/// Transform of the atomic part alone.
pub fn atoms_ft<T: Real>(mu: &FiniteMeasure<T>, omega: T) -> T {
    let c = T::one() / (T::PI() * T::lit(2.0)).sqrt();
    mu.atoms
        .iter()
        .fold(T::zero(), |acc, &(a, w)| acc + w * (omega * a).cos())
        * c
}

/// `μ = Φ_{1,k} + (-1)^{k+1} D^{2k+2} Φ_{1,k}` in the distributional sense:
/// the density is `Φ + (-1)^{k+1} p^{(2k+2)}(|x|)` on `[-1, 1]` and the jumps
/// of `D^{2k+1}Φ` at `0` and `±1` become atoms. Its transform is
/// `Φ̂_{1,k} (1 + ω^{2k+2})`.
///
/// The decomposition is used to cross-check the atoms against
/// `√(2π) B_k/k!` and `√(2π) B_k c_cos / 2`.
pub fn build_measure_1d<T: Real>(k: usize, decomposition: &Wend1DDecomposition<T>) -> Result<Measure1D<T>> {
    if k == 0 || decomposition.k() != k {
        return Err(Error::InvalidParameter(format!(
            "measure needs k ≥ 1 matching the decomposition (k={k}, decomposition k={})",
            decomposition.k()
        )));
    }
    let p = wendland_construct(1, k)?.poly().clone();
    let sign = if k % 2 == 1 { int(1) } else { int(-1) }; // (-1)^{k+1}
    let d_top = p.nth_derivative(2 * k + 1);
    let d_next = d_top.derivative();
    let zero = BigRational::zero();
    let one = BigRational::one();
    let w0: T = to_real(&(sign.clone() * int(2) * d_top.eval(&zero)));
    let w1: T = to_real(&(sign.clone() * -d_top.eval(&one)));
    let right = &p + &d_next.scale(&sign);
    let right_f: Vec<T> = right.coeffs().iter().map(to_real).collect();
    let left_f: Vec<T> = right_f
        .iter()
        .enumerate()
        .map(|(j, &c)| if j % 2 == 1 { -c } else { c })
        .collect();
    let density = PiecewisePoly::new(vec![(-T::one(), T::zero(), left_f), (T::zero(), T::one(), right_f)]);
    let measure = FiniteMeasure::new(vec![(-T::one(), w1), (T::zero(), w0), (T::one(), w1)], density);

    let root = (T::PI() * T::lit(2.0)).sqrt();
    let b = decomposition.amplitude();
    let predicted_w0 = root * b / to_real::<T>(&factorial(k));
    let predicted_w1 = root * b * to_real::<T>(decomposition.cos_coeff()) / T::lit(2.0);
    let indicator_weight = root * b * to_real::<T>(decomposition.sinc_coeff()) / T::lit(2.0);
    // B·h = (-1)^{k+1} p^{(2k+2)}(|x|) - w_ind on [-1, 1]
    let bh: Vec<T> = d_next.scale(&sign).coeffs().iter().map(to_real).collect();
    let mut bh = if bh.is_empty() { vec![T::zero()] } else { bh };
    bh[0] = bh[0] - indicator_weight;
    let h_right: Vec<T> = bh.iter().map(|&c| c / b).collect();
    let h_left: Vec<T> = h_right
        .iter()
        .enumerate()
        .map(|(j, &c)| if j % 2 == 1 { -c } else { c })
        .collect();
    let h = PiecewisePoly::new(vec![(-T::one(), T::zero(), h_left), (T::zero(), T::one(), h_right)]);
    Ok(Measure1D {
        k,
        measure,
        predicted_atoms: [predicted_w0, predicted_w1],
        indicator_weight,
        h,
    })
}

/// The measure together with the pieces that tie it to the decomposition.
#[derive(Clone, Debug)]
pub struct Measure1D<T> {
    pub k: usize,
    pub measure: FiniteMeasure<T>,
    /// Atom weights at `0` and `±1` as implied by the calibrated amplitude.
    pub predicted_atoms: [T; 2],
    /// Weight of `𝟙_{[-1,1]}` in the density: `√(2π) B_k C / 2`.
    pub indicator_weight: T,
    /// The function `h` with transform `ĥ`.
    pub h: PiecewisePoly<T>,
}

impl<T: Real> Measure1D<T> {
    /// Largest relative gap between the physical atoms and the predicted ones.
    pub fn atom_mismatch(&self) -> T {
        let a = self.measure.atoms();
        let w0 = a.iter().find(|(x, _)| *x == T::zero()).map(|p| p.1).unwrap_or_else(T::zero);
        let w1 = a.iter().find(|(x, _)| *x == T::one()).map(|p| p.1).unwrap_or_else(T::zero);
        let r0 = ((w0 - self.predicted_atoms[0]) / self.predicted_atoms[0]).abs();
        let r1 = ((w1 - self.predicted_atoms[1]) / self.predicted_atoms[1]).abs();
        r0.max(r1)
    }
}

/// One row of the factorization check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FactorizationRow {
    pub omega: f64,
    pub measure_ft: f64,
    pub predicted: f64,
    pub residual: f64,
    pub atoms_ft: f64,
}

/// `μ̂(ω)/(1+|ω|^{2k+2}) - Φ̂_{1,k}(ω)` on a uniform grid of `[0, omega_max]`.
pub fn factorization_table<T: Real>(
    m: &Measure1D<T>,
    tr: &WendlandTransform<T>,
    omega_max: T,
    points: usize,
) -> Result<Vec<FactorizationRow>> {
    let p = 2 * m.k as i32 + 2;
    (0..points)
        .map(|i| {
            let w = omega_max * T::of_usize(i) / T::of_usize(points.max(2) - 1);
            let ft = measure_ft(&m.measure, w)?;
            let phi = tr.eval(w);
            let lhs = ft / (T::one() + w.abs().powi(p));
            Ok(FactorizationRow {
                omega: w.as_f64(),
                measure_ft: ft.as_f64(),
                predicted: (phi * (T::one() + w.abs().powi(p))).as_f64(),
                residual: (lhs - phi).abs().as_f64(),
                atoms_ft: atoms_ft(&m.measure, w).as_f64(),
            })
        })
        .collect()
}

/// Outcome of one randomized Young's-inequality trial.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct YoungTrial {
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl YoungTrial {
    pub fn holds(&self, rel_slack: f64) -> bool {
        self.lhs <= self.rhs * (1.0 + rel_slack)
    }
}

/// Random compactly supported piecewise-linear function on `[-3, 3]`.
pub fn random_piecewise_linear<T: Real>(rng: &mut ChaCha8Rng) -> PiecewisePoly<T> {
    let n = rng.gen_range(3..=10);
    let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    xs.dedup();
    let last = xs.len() - 1;
    let nodes: Vec<(T, T)> = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let y = if i == 0 || i == last { 0.0 } else { rng.gen_range(-1.0..1.0) };
            (T::lit(x), T::lit(y))
        })
        .collect();
    PiecewisePoly::linear_interpolant(&nodes)
}

/// `‖f * μ‖_p` and `‖f‖_p ‖μ‖` for the given `f`.
pub fn young_trial<T: Real>(mu: &FiniteMeasure<T>, f: &PiecewisePoly<T>, p: T) -> YoungTrial {
    let breaks = mu.convolution_breaks(f);
    let lhs = lp_norm_piecewise(|x| mu.convolve_at(f, x), &breaks, p);
    let fnorm = lp_norm_piecewise(|x| f.eval(x), &f.breaks(), p);
    YoungTrial {
        p: p.as_f64(),
        lhs: lhs.as_f64(),
        rhs: (fnorm * mu.tv_norm()).as_f64(),
    }
}

/// `trials` seeded trials cycling through `p ∈ {1, 2, ∞}`.
pub fn young_trials<T: Real>(mu: &FiniteMeasure<T>, trials: usize, seed: u64) -> Vec<YoungTrial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ps = [T::one(), T::lit(2.0), T::infinity()];
    (0..trials)
        .map(|i| {
            let f = random_piecewise_linear(&mut rng);
            young_trial(mu, &f, ps[i % 3])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::quad::adaptive;

    #[test]
    fn unit_atoms() {
        let c = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        let d = FiniteMeasure::new(vec![(0.0, 1.0)], PiecewisePoly::zero());
        assert!((measure_ft(&d, 3.7).unwrap() - c).abs() < 1e-15);
        let pair = FiniteMeasure::new(vec![(-1.0, 0.3), (1.0, 0.3)], PiecewisePoly::zero());
        assert!((measure_ft(&pair, 2.0).unwrap() - 0.6 * c * 2f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn piecewise_l1_exact() {
        // x on [-1, 1): ∫|x| = 1
        let p = PiecewisePoly::new(vec![(-1.0, 1.0, vec![0.0, 1.0])]);
        assert!((p.l1_norm() - 1.0f64).abs() < 1e-14);
    }

    #[test]
    fn decomposition_closed_forms() {
        for k in 1..=3 {
            let d = wend1d_decompose::<f64>(k).unwrap();
            assert_eq!(d.const_term(), &(BigRational::one() / factorial(k)));
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(d.cos_coeff(), &(rat(sign, 1) / (factorial(k) * int(1 << k))));
            assert_eq!(d.remainder_is_zero(), k == 1);
        }
        assert!(wend1d_decompose::<f64>(0).is_err());
    }

    #[test]
    fn atoms_match_amplitude() {
        for k in 1..=2 {
            let d = wend1d_decompose::<f64>(k).unwrap();
            let m = build_measure_1d(k, &d).unwrap();
            assert!(m.atom_mismatch() < 1e-9, "k={k}: {}", m.atom_mismatch());
        }
    }

    #[test]
    fn remainder_matches_transform_of_h() {
        let d = wend1d_decompose::<f64>(2).unwrap();
        let m = build_measure_1d(2, &d).unwrap();
        let c = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        for &w in &[0.5, 1.0, 3.0, 9.0, 25.0] {
            let ft = adaptive(|x| m.h.eval(x) * (w * x).cos(), -1.0, 1.0, &[0.0], 1e-14)
                .unwrap()
                .value
                * c;
            assert!((ft - d.h_hat(w)).abs() < 1e-8, "ω={w}: {ft} vs {}", d.h_hat(w));
        }
    }

    #[test]
    fn tv_norm_matches_quadrature() {
        let d = wend1d_decompose::<f64>(2).unwrap();
        let m = build_measure_1d(2, &d).unwrap().measure;
        let dens = adaptive(|x| m.density().eval(x).abs(), -1.0, 1.0, &[0.0], 1e-13)
            .unwrap()
            .value;
        let atoms: f64 = m.atoms().iter().map(|a| a.1.abs()).sum();
        assert!((m.tv_norm() - dens - atoms).abs() < 1e-8);
        let inner = m.restrict(0.5);
        let outer = m.tail(0.5);
        assert!((inner.tv_norm() + outer.tv_norm() - m.tv_norm()).abs() < 1e-10);
        assert_eq!(m.tail(1.0).tv_norm(), 0.0);
    }
}
