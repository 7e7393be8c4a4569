//! Approximants from `S_X(Φ)`: a least-squares witness for the best
//! approximation error and the constructive quasi-interpolant
//! `F = ∫ Tf(t) K(·,t) dt` for Green's kernels, plus `L^p` errors and rate fits.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{make_quasi_uniform, BoxDomain, PointSet, TensorGrid};
use crate::kernels::{KernelId, RadialKernel, SobolevSpline, Wendland};
use crate::linalg::{lstsq, Mat};
use crate::polyrep::{default_c3, ReproBuilder, ReproSettings};
use crate::quad::adaptive;
use crate::scalar::{dist, Real};

/// `exp(1 − 1/(1 − ρ²))` for `ρ = ‖x − c‖/w < 1`, zero outside.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Bump<T> {
    pub center: Vec<T>,
    pub half_width: T,
}

impl<T: Real> Bump<T> {
    pub fn new(center: Vec<T>, half_width: T) -> Result<Self> {
        if !(half_width > T::zero()) {
            return Err(Error::InvalidParameter("bump half-width must be positive".into()));
        }
        Ok(Self { center, half_width })
    }

    pub fn eval(&self, x: &[T]) -> T {
        let rho = dist(x, &self.center) / self.half_width;
        let s = T::one() - rho * rho;
        if s <= T::zero() {
            T::zero()
        } else {
            (T::one() - T::one() / s).exp()
        }
    }

    pub fn support_box(&self) -> Result<BoxDomain<T>> {
        BoxDomain::new(
            self.center.iter().map(|&c| c - self.half_width).collect(),
            self.center.iter().map(|&c| c + self.half_width).collect(),
        )
    }

    /// `‖g‖_p` by adaptive quadrature (one dimension) or a fine tensor rule.
    pub fn lp_norm(&self, p: LpNorm) -> Result<T> {
        if p.is_inf() {
            return Ok(T::one());
        }
        let pp = T::lit(p.0);
        let bx = self.support_box()?;
        if self.center.len() == 1 {
            let est = adaptive(
                |t: T| self.eval(&[t]).powf(pp),
                bx.lo[0],
                bx.hi[0],
                &[self.center[0]],
                T::lit(1e-13),
            )?;
            return Ok(est.value.powf(T::one() / pp));
        }
        let g = bx.grid(self.half_width / T::lit(64.0));
        let w = g.trapezoid_weights();
        let s = (0..g.len()).fold(T::zero(), |a, i| a + w[i] * self.eval(&g.point(i)).powf(pp));
        Ok(s.powf(T::one() / pp))
    }
}

/// What `T` does in a Green's pair: `f = ∫ Tf(t) G(·−t) dt`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operator {
    /// `(2π)^{-d/2}(1−Δ)^{γ/2}`, whose Green's function is the Sobolev spline `G_γ`.
    BesselPotential { gamma: usize },
}

/// A kernel with a differential operator it inverts.
pub struct GreensPair<T> {
    pub kernel: SobolevSpline<T>,
    pub operator: Operator,
    /// `γ`: membership of `f = G∗g` in `L^{γ,p}` for smooth `g`.
    pub smoothness_order: usize,
}

impl<T: Real> GreensPair<T> {
    pub fn sobolev(gamma: usize, d: usize) -> Result<Self> {
        Ok(Self {
            kernel: SobolevSpline::new(gamma, d)?,
            operator: Operator::BesselPotential { gamma },
            smoothness_order: gamma,
        })
    }
}

/// Target function for a rate experiment.
pub struct TestFunction<T> {
    pub bump: Bump<T>,
    /// `Some(G)` when `f = G∗g` and `Tf = g`; `None` when `f = g` directly.
    pub kernel: Option<SobolevSpline<T>>,
    pub tol: T,
}

impl<T: Real> TestFunction<T> {
    /// `f = G∗g`; one dimension only.
    pub fn convolved(pair: GreensPair<T>, bump: Bump<T>) -> Result<Self> {
        if bump.center.len() != 1 || pair.kernel.dim() != 1 {
            return Err(Error::Unsupported("convolved test functions are implemented for d = 1".into()));
        }
        Ok(Self {
            bump,
            kernel: Some(pair.kernel),
            tol: T::lit(1e-12),
        })
    }

    /// `f = g`.
    pub fn bump(bump: Bump<T>) -> Self {
        Self {
            bump,
            kernel: None,
            tol: T::lit(1e-12),
        }
    }

    pub fn f(&self, x: &[T]) -> Result<T> {
        match &self.kernel {
            None => Ok(self.bump.eval(x)),
            Some(g) => {
                let (c, w) = (self.bump.center[0], self.bump.half_width);
                let (a, b) = (c - w, c + w);
                let cut: Vec<T> = if x[0] > a && x[0] < b { vec![x[0]] } else { vec![] };
                let est = adaptive(
                    |t: T| self.bump.eval(&[t]) * g.profile((x[0] - t).abs()),
                    a,
                    b,
                    &cut,
                    self.tol,
                )?;
                Ok(est.value)
            }
        }
    }

    /// `f` at many points, in parallel.
    pub fn f_on(&self, xs: &[Vec<T>]) -> Result<Vec<T>> {
        xs.par_iter().map(|x| self.f(x)).collect()
    }

    /// `Tf`, when known exactly.
    pub fn tf(&self, x: &[T]) -> Option<T> {
        self.kernel.as_ref().map(|_| self.bump.eval(x))
    }

    /// `|f|_{W(L^p,T)} = ‖g‖_p`.
    pub fn seminorm(&self, p: LpNorm) -> Result<T> {
        self.bump.lp_norm(p)
    }
}

/// `f = G∗g` for the given Sobolev spline and bump.
pub fn synth_test_function<T: Real>(gamma: usize, d: usize, bump: Bump<T>) -> Result<TestFunction<T>> {
    TestFunction::convolved(GreensPair::sobolev(gamma, d)?, bump)
}

/// An `L^p` exponent; `∞` serializes as `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpNorm(pub f64);

impl LpNorm {
    pub const INF: LpNorm = LpNorm(f64::INFINITY);

    pub fn is_inf(self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for LpNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inf() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl std::str::FromStr for LpNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Self::INF),
            t => match t.parse::<f64>() {
                Ok(v) if v >= 1.0 => Ok(Self(v)),
                _ => Err(Error::InvalidParameter(format!("p must be ≥ 1 or inf, got {t:?}"))),
            },
        }
    }
}

impl Serialize for LpNorm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_inf() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for LpNorm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if v >= 1.0 => Ok(Self(v)),
            Raw::Num(v) => Err(serde::de::Error::custom(format!("p must be ≥ 1, got {v}"))),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Quadrature `L^p` norm of `f − s` with the given weights; `p = ∞` is the
/// grid maximum.
pub fn lp_error<T: Real>(f: &[T], s: &[T], p: LpNorm, weights: &[T]) -> Result<T> {
    if f.len() != s.len() || f.len() != weights.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples, {} approximant values, {} weights",
            f.len(),
            s.len(),
            weights.len()
        )));
    }
    let diff = f.iter().zip(s).map(|(&a, &b)| (a - b).abs());
    if p.is_inf() {
        return Ok(diff.fold(T::zero(), T::max));
    }
    let pp = T::lit(p.0);
    let sum = diff.zip(weights).fold(T::zero(), |acc, (e, &w)| acc + w * e.powf(pp));
    Ok(sum.powf(T::one() / pp))
}

/// Coefficients of `Σ c_ξ Φ(·−ξ)` over a subset of `X`.
#[derive(Clone, Debug, Serialize)]
pub struct Expansion<T> {
    pub centers: Vec<usize>,
    pub coeffs: Vec<T>,
    /// Numerical rank of the collocation matrix (least-squares witness only).
    pub rank: Option<usize>,
}

impl<T: Real> Expansion<T> {
    pub fn eval<K: RadialKernel<T> + ?Sized>(&self, x: &[T], phi: &K, points: &PointSet<T>) -> T {
        let sup = phi.support();
        self.centers.iter().zip(&self.coeffs).fold(T::zero(), |acc, (&i, &c)| {
            let r = dist(x, &points.points()[i]);
            if sup.is_some_and(|s| r >= s) {
                acc
            } else {
                acc + c * phi.profile(r)
            }
        })
    }

    pub fn eval_on<K: RadialKernel<T> + ?Sized>(&self, xs: &[Vec<T>], phi: &K, points: &PointSet<T>) -> Vec<T> {
        xs.par_iter().map(|x| self.eval(x, phi, points)).collect()
    }

    /// Full-length coefficient vector indexed like `X`.
    pub fn dense(&self, n: usize) -> Vec<T> {
        let mut v = vec![T::zero(); n];
        for (&i, &c) in self.centers.iter().zip(&self.coeffs) {
            v[i] = c;
        }
        v
    }
}

/// Minimizes the discrete `ℓ²` misfit over `grid`, through a QR-preconditioned
/// SVD with cutoff `1e-12·σ_max`. Centers whose kernel vanishes on the whole
/// grid are left out. `grid_spacing` must be below `q_X/2`.
pub fn ls_witness<T: Real, K: RadialKernel<T> + ?Sized>(
    f_samples: &[T],
    grid: &[Vec<T>],
    grid_spacing: T,
    phi: &K,
    points: &PointSet<T>,
) -> Result<Expansion<T>> {
    if f_samples.len() != grid.len() {
        return Err(Error::GridMismatch(format!("{} samples on {} nodes", f_samples.len(), grid.len())));
    }
    if !(grid_spacing < points.q() / T::lit(2.0)) {
        return Err(Error::InvalidParameter(format!(
            "evaluation grid spacing {grid_spacing} not below q/2 = {}",
            points.q() / T::lit(2.0)
        )));
    }
    let sup = phi.support();
    let centers: Vec<usize> = (0..points.len())
        .filter(|&i| match sup {
            None => true,
            Some(s) => grid.iter().any(|g| dist(g, &points.points()[i]) < s),
        })
        .collect();
    let a = Mat::from_fn(grid.len(), centers.len(), |r, c| {
        let d = dist(&grid[r], &points.points()[centers[c]]);
        if sup.is_some_and(|s| d >= s) {
            T::zero()
        } else {
            phi.profile(d)
        }
    });
    let sol = lstsq(&a, f_samples, T::lit(1e-12));
    Ok(Expansion {
        centers,
        coeffs: sol.x,
        rank: Some(sol.rank),
    })
}

/// `c_ξ = Σ_j g(t_j) A(t_j, ξ)·vol` over midpoints `t_j` of cells of side at
/// most `spacing` covering the bump. Contributions are summed in a fixed order.
pub fn quasi_interpolant<T: Real>(
    tf: &TestFunction<T>,
    builder: &ReproBuilder<'_, T>,
    spacing: T,
) -> Result<Expansion<T>> {
    if tf.kernel.is_none() {
        return Err(Error::Unsupported(
            "the quasi-interpolant needs Tf; use a convolved test function".into(),
        ));
    }
    let bx = tf.bump.support_box()?;
    let nodes = bx.grid(spacing);
    // midpoints of the grid cells
    let mids = TensorGrid {
        axes: nodes
            .axes
            .iter()
            .map(|ax| ax.windows(2).map(|w| (w[0] + w[1]) / T::lit(2.0)).collect())
            .collect(),
    };
    let vol: T = nodes.axes.iter().map(|ax| ax[1] - ax[0]).fold(T::one(), |a, b| a * b);
    let parts: Vec<Vec<(usize, T)>> = (0..mids.len())
        .into_par_iter()
        .map(|j| -> Result<Vec<(usize, T)>> {
            let t = mids.point(j);
            let g = tf.bump.eval(&t);
            if g == T::zero() {
                return Ok(Vec::new());
            }
            let f = builder.functional(&t)?;
            Ok(f.star.iter().zip(&f.weights).map(|(&i, &w)| (i, g * w * vol)).collect())
        })
        .collect::<Result<_>>()?;
    let n = builder.points().len();
    let mut dense = vec![T::zero(); n];
    for part in parts {
        for (i, c) in part {
            dense[i] = dense[i] + c;
        }
    }
    let centers: Vec<usize> = (0..n).filter(|&i| dense[i] != T::zero()).collect();
    Ok(Expansion {
        coeffs: centers.iter().map(|&i| dense[i]).collect(),
        centers,
        rank: None,
    })
}

/// Least-squares slope of `log error` against `log h`.
#[derive(Clone, Debug, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the log–log fit.
    pub residual: f64,
    pub used: usize,
}

pub const MIN_RATE_LEVELS: usize = 4;

/// Fits `error ≈ C h^slope`, dropping levels with error below `floor` or not
/// finite and positive.
pub fn fit_rate(levels: &[(f64, f64)], floor: f64) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = levels
        .iter()
        .filter(|(h, e)| h.is_finite() && *h > 0.0 && e.is_finite() && *e > 0.0 && *e >= floor)
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < MIN_RATE_LEVELS {
        return Err(Error::InsufficientLevels {
            needed: MIN_RATE_LEVELS,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all levels share one h".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(RateFit {
        slope,
        intercept,
        residual,
        used: pts.len(),
    })
}

/// Kernel choice for an experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum KernelSpec {
    Sobolev { gamma: usize },
    Wendland { k: usize },
}

impl KernelSpec {
    pub fn build<T: Real>(&self, d: usize) -> Result<Box<dyn RadialKernel<T>>> {
        Ok(match *self {
            KernelSpec::Sobolev { gamma } => Box::new(SobolevSpline::<T>::new(gamma, d)?),
            KernelSpec::Wendland { k } => Box::new(Wendland::<T>::new(d, k)?),
        })
    }

    /// Exponent the theory predicts for the best-approximation error.
    pub fn theory_rate(&self) -> f64 {
        match *self {
            KernelSpec::Sobolev { gamma } => gamma as f64,
            KernelSpec::Wendland { k } => 2.0 * k as f64,
        }
    }

    /// Reproduction degree `κ − 1` for the quasi-interpolant.
    pub fn degree(&self) -> usize {
        (self.theory_rate() as usize).saturating_sub(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    LeastSquares,
    QuasiInterpolant,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessKind::LeastSquares => "ls",
            WitnessKind::QuasiInterpolant => "qi",
        })
    }
}

/// Everything a rate experiment needs. Lengths are in the same units as the
/// point coordinates; `spacings` are lattice spacings, strictly decreasing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateConfig {
    pub kernel: KernelSpec,
    pub d: usize,
    pub p: Vec<LpNorm>,
    pub spacings: Vec<f64>,
    pub jitter: f64,
    pub seed: u64,
    pub witness: WitnessKind,
    /// Region where the witness is fitted and the error measured.
    pub fit_lo: f64,
    pub fit_hi: f64,
    /// Extra margin of points around the fit region.
    pub pad: f64,
    pub bump_center: f64,
    pub bump_half_width: f64,
    /// Fit-grid spacing is `q/fit_refine`; the error grid is twice as fine.
    pub fit_refine: f64,
    pub rho_max: f64,
    pub c3: Option<f64>,
    pub c2_cap: f64,
    /// Quasi-interpolant quadrature spacing as a fraction of `h`.
    pub qi_spacing: f64,
    /// Passing needs `fitted ≥ theory − rate_tolerance`.
    pub rate_tolerance: f64,
}

impl RateConfig {
    /// Defaults for the one-dimensional experiments: points on `[−2, 3]`,
    /// fit and measurement on `[−1, 2]`, spacings `1/8 … 1/128`.
    pub fn one_dimensional(kernel: KernelSpec) -> Self {
        let half_width = match kernel {
            KernelSpec::Sobolev { .. } => 0.1,
            KernelSpec::Wendland { .. } => 1.0,
        };
        Self {
            kernel,
            d: 1,
            p: vec![LpNorm(2.0)],
            spacings: (3..=7).map(|e| 0.5f64.powi(e)).collect(),
            jitter: 0.25,
            seed: 7,
            witness: WitnessKind::LeastSquares,
            fit_lo: -1.0,
            fit_hi: 2.0,
            pad: 1.0,
            bump_center: 0.5,
            bump_half_width: half_width,
            fit_refine: 2.5,
            rho_max: 4.0,
            c3: None,
            c2_cap: 2.0,
            qi_spacing: 0.25,
            rate_tolerance: 0.4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.d == 0 {
            return bad("d must be positive".into());
        }
        if self.spacings.is_empty() || self.spacings.iter().any(|&s| !(s > 0.0)) {
            return bad("spacings must be positive".into());
        }
        if self.spacings.windows(2).any(|w| !(w[1] < w[0])) {
            return bad("spacing schedule must be strictly decreasing".into());
        }
        if !(0.0..=0.4).contains(&self.jitter) {
            return bad(format!("jitter {} outside [0, 0.4]", self.jitter));
        }
        if !(self.fit_lo < self.fit_hi) || !(self.pad >= 0.0) {
            return bad("empty fit region or negative pad".into());
        }
        let (blo, bhi) = (
            self.bump_center - self.bump_half_width,
            self.bump_center + self.bump_half_width,
        );
        if !(blo > self.fit_lo && bhi < self.fit_hi) {
            return bad("bump must lie inside the fit region".into());
        }
        if self.p.is_empty() {
            return bad("no p given".into());
        }
        if !(self.fit_refine > 2.0) {
            return bad("fit_refine must exceed 2 so the grid is finer than q/2".into());
        }
        if !(self.rho_max > 1.0) || !(self.c2_cap > 0.0) || !(self.qi_spacing > 0.0) {
            return bad("rho_max, c2_cap and qi_spacing must be positive (rho_max > 1)".into());
        }
        if self.witness == WitnessKind::QuasiInterpolant && !matches!(self.kernel, KernelSpec::Sobolev { .. }) {
            return bad("the quasi-interpolant is available for Green's kernels (sobolev) only".into());
        }
        Ok(())
    }

    fn fit_region<T: Real>(&self) -> Result<BoxDomain<T>> {
        BoxDomain::cube(self.d, T::lit(self.fit_lo), T::lit(self.fit_hi))
    }

    fn point_region<T: Real>(&self) -> Result<BoxDomain<T>> {
        BoxDomain::cube(self.d, T::lit(self.fit_lo - self.pad), T::lit(self.fit_hi + self.pad))
    }
}

/// One refinement level.
#[derive(Clone, Debug, Serialize)]
pub struct LevelRecord {
    pub spacing: f64,
    pub h: f64,
    pub q: f64,
    pub rho: f64,
    pub n_points: usize,
    pub error: f64,
    pub witness: String,
    pub rank: Option<usize>,
    pub n_centers: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub kernel: KernelId,
    pub p: LpNorm,
    pub levels: Vec<LevelRecord>,
    pub fitted_rate: Option<f64>,
    pub fit_residual: Option<f64>,
    pub theory_rate: f64,
    pub rate_ok: Option<bool>,
    /// Errors strictly decrease from level to level.
    pub monotone: bool,
    pub seed: u64,
    pub config_hash: String,
}

impl ExperimentReport {
    pub fn to_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["spacing", "h", "q", "rho", "n_points", "error", "witness", "p"])?;
        for l in &self.levels {
            wr.write_record([
                format!("{:e}", l.spacing),
                format!("{:e}", l.h),
                format!("{:e}", l.q),
                format!("{:e}", l.rho),
                l.n_points.to_string(),
                format!("{:e}", l.error),
                l.witness.clone(),
                self.p.to_string(),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}

struct LevelOutcome {
    record: LevelRecord,
    errors: Vec<f64>,
    f_scale: f64,
}

/// Runs every level (in parallel), then fits one rate per `p`.
pub fn run_rates(cfg: &RateConfig) -> Result<Vec<ExperimentReport>> {
    cfg.validate()?;
    let phi = cfg.kernel.build::<f64>(cfg.d)?;
    let outcomes: Vec<LevelOutcome> = cfg
        .spacings
        .par_iter()
        .map(|&s| run_level(cfg, phi.as_ref(), s))
        .collect::<Result<_>>()?;
    let f_scale = outcomes.iter().map(|o| o.f_scale).fold(0.0, f64::max);
    let floor = 100.0 * f64::EPSILON * f_scale;
    let theory = cfg.kernel.theory_rate();
    Ok(cfg
        .p
        .iter()
        .enumerate()
        .map(|(ip, &p)| {
            let levels: Vec<LevelRecord> = outcomes
                .iter()
                .map(|o| LevelRecord {
                    error: o.errors[ip],
                    ..o.record.clone()
                })
                .collect();
            let pairs: Vec<(f64, f64)> = levels.iter().map(|l| (l.h, l.error)).collect();
            let fit = if levels.len() >= MIN_RATE_LEVELS {
                fit_rate(&pairs, floor).ok()
            } else {
                None
            };
            ExperimentReport {
                kernel: phi.id(),
                p,
                monotone: levels.windows(2).all(|w| w[1].error < w[0].error),
                fitted_rate: fit.as_ref().map(|f| f.slope),
                fit_residual: fit.as_ref().map(|f| f.residual),
                rate_ok: fit.as_ref().map(|f| f.slope >= theory - cfg.rate_tolerance),
                theory_rate: theory,
                levels,
                seed: cfg.seed,
                config_hash: String::new(),
            }
        })
        .collect())
}

fn run_level(cfg: &RateConfig, phi: &dyn RadialKernel<f64>, spacing: f64) -> Result<LevelOutcome> {
    let x = make_quasi_uniform(&cfg.point_region::<f64>()?, spacing, cfg.jitter, cfg.seed)?;
    x.check_quasi_uniform(cfg.rho_max)?;
    let fit_region = cfg.fit_region::<f64>()?;
    let bump = Bump::new(vec![cfg.bump_center; cfg.d], cfg.bump_half_width)?;
    let tf = match cfg.kernel {
        KernelSpec::Sobolev { gamma } => synth_test_function(gamma, cfg.d, bump)?,
        KernelSpec::Wendland { .. } => TestFunction::bump(bump),
    };
    let fit_step = x.q() / cfg.fit_refine;
    let eval_grid = fit_region.grid(fit_step / 2.0);
    let eval_pts = eval_grid.points();
    let weights = eval_grid.trapezoid_weights();
    let f_eval = tf.f_on(&eval_pts)?;
    let expansion = match cfg.witness {
        WitnessKind::LeastSquares => {
            let fit_grid = fit_region.grid(fit_step);
            let fit_pts = fit_grid.points();
            let f_fit = tf.f_on(&fit_pts)?;
            let realized = fit_grid.axes[0][1] - fit_grid.axes[0][0];
            ls_witness(&f_fit, &fit_pts, realized, phi, &x)?
        }
        WitnessKind::QuasiInterpolant => {
            let degree = cfg.kernel.degree();
            let c3 = cfg.c3.unwrap_or_else(|| default_c3(cfg.d, degree, cfg.rho_max));
            let mut settings = ReproSettings::new(degree, c3);
            settings.c2_cap = cfg.c2_cap;
            let builder = ReproBuilder::new(&x, settings);
            quasi_interpolant(&tf, &builder, cfg.qi_spacing * x.h())?
        }
    };
    let s_eval = expansion.eval_on(&eval_pts, phi, &x);
    let errors = cfg
        .p
        .iter()
        .map(|&p| lp_error(&f_eval, &s_eval, p, &weights))
        .collect::<Result<Vec<f64>>>()?;
    Ok(LevelOutcome {
        record: LevelRecord {
            spacing,
            h: x.h(),
            q: x.q(),
            rho: x.rho(),
            n_points: x.len(),
            error: f64::NAN,
            witness: cfg.witness.to_string(),
            rank: expansion.rank,
            n_centers: expansion.centers.len(),
        },
        errors,
        f_scale: f_eval.iter().fold(0.0f64, |m, v| m.max(v.abs())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let lv: Vec<(f64, f64)> = (0..5).map(|i| (0.5f64.powi(i), 3.0 * 0.25f64.powi(i))).collect();
        let f = fit_rate(&lv, 0.0).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn too_few_levels() {
        let lv = [(1.0, 1.0), (0.5, 0.3), (0.25, 1e-20), (0.125, 0.01)];
        assert!(matches!(
            fit_rate(&lv, 1e-15),
            Err(Error::InsufficientLevels { needed: 4, got: 3 })
        ));
    }

    #[test]
    fn garbage_does_not_crash() {
        let lv = [(1.0, 1.0), (0.5, 7.0), (0.25, 0.01), (0.125, 3.0), (0.06, 1e-3)];
        let f = fit_rate(&lv, 0.0).unwrap();
        assert!(f.residual > 1.0);
    }

    #[test]
    fn lp_error_constant_difference() {
        let dom = BoxDomain::cube(1, 0.0, 3.0).unwrap();
        let g = dom.grid(0.01);
        let w = g.trapezoid_weights();
        let f = vec![1.5; g.len()];
        let s = vec![1.0; g.len()];
        for &p in &[1.0, 2.0, 3.0] {
            let e = lp_error(&f, &s, LpNorm(p), &w).unwrap();
            assert!((e - 0.5 * 3f64.powf(1.0 / p)).abs() < 1e-12);
        }
        assert_eq!(lp_error(&f, &s, LpNorm::INF, &w).unwrap(), 0.5);
        assert_eq!(lp_error(&f, &f, LpNorm(2.0), &w).unwrap(), 0.0);
        assert!(lp_error(&f, &s[1..], LpNorm(2.0), &w).is_err());
    }

    #[test]
    fn lp_norm_serialization() {
        assert_eq!(serde_json::to_string(&LpNorm::INF).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&LpNorm(2.0)).unwrap(), "2.0");
        let v: Vec<LpNorm> = serde_json::from_str("[1, \"inf\", 2.5]").unwrap();
        assert_eq!(v, vec![LpNorm(1.0), LpNorm::INF, LpNorm(2.5)]);
        assert!("0.5".parse::<LpNorm>().is_err());
    }

    #[test]
    fn witness_recovers_translates() {
        let dom = BoxDomain::cube(1, 0.0, 2.0).unwrap();
        let x = make_quasi_uniform(&dom, 0.25, 0.1, 3).unwrap();
        let phi = Wendland::<f64>::new(1, 1).unwrap();
        let grid = dom.grid(x.q() / 3.0);
        let pts = grid.points();
        let (a, b) = (2, 5);
        let f: Vec<f64> = pts
            .iter()
            .map(|p| {
                phi.profile(dist(p, &x.points()[a])) - 0.5 * phi.profile(dist(p, &x.points()[b]))
            })
            .collect();
        let w = ls_witness(&f, &pts, x.q() / 3.0, &phi, &x).unwrap();
        let dense = w.dense(x.len());
        for (i, &c) in dense.iter().enumerate() {
            let e = if i == a { 1.0 } else if i == b { -0.5 } else { 0.0 };
            assert!((c - e).abs() < 1e-9, "i={i} c={c}");
        }
        assert!(ls_witness(&f, &pts, x.q(), &phi, &x).is_err());
    }

    #[test]
    fn greens_identity_by_finite_differences() {
        let mut tf = synth_test_function(2, 1, Bump::new(vec![0.5], 0.1).unwrap()).unwrap();
        tf.tol = 1e-15;
        let h = 1e-3;
        let c = (2.0 * std::f64::consts::PI).sqrt();
        for i in 0..10 {
            let x = 0.42 + 0.016 * i as f64;
            let f = |t: f64| tf.f(&[t]).unwrap();
            // fourth-order central stencil
            let d2 = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
                / (12.0 * h * h);
            let lhs = f(x) - d2;
            let err = (lhs - c * tf.tf(&[x]).unwrap()).abs();
            assert!(err < 1e-6, "x={x} err={err}");
        }
    }
}
