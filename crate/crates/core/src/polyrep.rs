//! Local polynomial reproduction `λ_t = Σ A(t,ξ) δ_ξ`, the surrogate kernel
//! `K(x,t) = Σ A(t,ξ) Φ(x−ξ)` and the error kernel `E = Φ(x−t) − K(x,t)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{site_rng, star_of_cube, BoxDomain, LocalStar, PointSet};
use crate::kernels::{KernelId, RadialKernel};
use crate::linalg::{Mat, Svd};
use crate::scalar::{dist, Real};

/// Monomials `y^α` with `|α| ≤ degree` in `d` variables, graded order.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    d: usize,
    degree: usize,
    exps: Vec<Vec<usize>>,
}

impl MonomialBasis {
    pub fn new(d: usize, degree: usize) -> Self {
        let mut exps = Vec::new();
        for deg in 0..=degree {
            graded(d, deg, &mut vec![0; d], 0, &mut exps);
        }
        Self { d, degree, exps }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<usize>] {
        &self.exps
    }

    pub fn eval<T: Real>(&self, y: &[T]) -> Vec<T> {
        self.exps
            .iter()
            .map(|a| a.iter().zip(y).fold(T::one(), |p, (&e, &v)| p * v.powi(e as i32)))
            .collect()
    }
}

fn graded(d: usize, left: usize, cur: &mut Vec<usize>, pos: usize, out: &mut Vec<Vec<usize>>) {
    if pos + 1 == d {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for v in (0..=left).rev() {
        cur[pos] = v;
        graded(d, left - v, cur, pos + 1, out);
    }
}

/// Build parameters for [`ReproBuilder`].
#[derive(Clone, Debug, Serialize)]
pub struct ReproSettings {
    pub degree: usize,
    pub c3: f64,
    pub c2_cap: f64,
    pub max_retries: usize,
    pub growth: f64,
    pub rcond: f64,
}

impl ReproSettings {
    pub fn new(degree: usize, c3: f64) -> Self {
        Self {
            degree,
            c3,
            c2_cap: 2.0,
            max_retries: 4,
            growth: 1.5,
            rcond: 1e-10,
        }
    }
}

/// Star radius factor for a given dimension and degree: `2(degree+1)·ρ_max`
/// in one dimension; otherwise large enough that a lattice with fill
/// distance `h` puts about `3·dim(P)` points in the star.
pub fn default_c3(d: usize, degree: usize, rho_max: f64) -> f64 {
    if d == 1 {
        return 2.0 * (degree as f64 + 1.0) * rho_max;
    }
    let dim_p = MonomialBasis::new(d, degree).len() as f64;
    let df = d as f64;
    // volume of the unit ball
    let vd = std::f64::consts::PI.powf(df / 2.0) / crate::bessel::gamma_half::<f64>(d + 2);
    // lattice spacing s = 2h/√d
    let c = (3.0 * dim_p / vd).powf(1.0 / df) * 2.0 / df.sqrt();
    (c * 2.0).ceil() / 2.0
}

/// `λ_t`, evaluated for one `t`.
#[derive(Clone, Debug, Serialize)]
pub struct ReproFunctional<T> {
    pub star: Vec<usize>,
    pub weights: Vec<T>,
    pub degree: usize,
    pub l1_norm: T,
    pub anchor: Vec<T>,
    pub cube: Vec<i64>,
    /// Star radius factor after retries.
    pub c3: T,
    pub retries: usize,
    /// Whether the cube's sampled `‖λ_t‖₁` stayed within the cap.
    pub cap_met: bool,
}

impl<T: Real> ReproFunctional<T> {
    /// `λ_t(p) = Σ A(t,ξ) p(ξ)`.
    pub fn apply(&self, x: &PointSet<T>, p: impl Fn(&[T]) -> T) -> T {
        self.star
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&i, &w)| acc + w * p(&x.points()[i]))
    }
}

/// The per-cube map `t ↦ α(t) = P β(t)` with `P = pinv(M)`.
#[derive(Clone, Debug)]
pub struct CubeMap<T> {
    pub star: LocalStar<T>,
    pub c3: T,
    pub retries: usize,
    pub cap_met: bool,
    pub sampled_l1: T,
    pinv: Mat<T>,
}

impl<T: Real> CubeMap<T> {
    fn weights(&self, basis: &MonomialBasis, t: &[T]) -> Vec<T> {
        let scale = self.star.radius;
        let y: Vec<T> = t.iter().zip(&self.star.anchor).map(|(&a, &b)| (a - b) / scale).collect();
        self.pinv.mul_vec(&basis.eval(&y))
    }
}

/// Builds and caches functionals cube by cube, so all `t` in one cube share a
/// star and a weight map.
pub struct ReproBuilder<'a, T> {
    x: &'a PointSet<T>,
    settings: ReproSettings,
    basis: MonomialBasis,
    cache: Mutex<HashMap<Vec<i64>, Arc<CubeMap<T>>>>,
}

impl<'a, T: Real> ReproBuilder<'a, T> {
    pub fn new(x: &'a PointSet<T>, settings: ReproSettings) -> Self {
        let basis = MonomialBasis::new(x.dim(), settings.degree);
        Self {
            x,
            settings,
            basis,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn points(&self) -> &PointSet<T> {
        self.x
    }

    pub fn settings(&self) -> &ReproSettings {
        &self.settings
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// `C₁` with `X(t) ⊂ B(t, C₁h)`: the initial `C₃` plus the cube half-diagonal.
    pub fn c1(&self) -> T {
        T::lit(self.settings.c3) + T::of_usize(self.x.dim()).sqrt() / T::lit(2.0)
    }

    pub fn functional(&self, t: &[T]) -> Result<ReproFunctional<T>> {
        let cube = self.x.partition().cube_of(t);
        let map = self.cube_map(&cube)?;
        let weights = map.weights(&self.basis, t);
        let l1_norm = weights.iter().fold(T::zero(), |a, w| a + w.abs());
        Ok(ReproFunctional {
            star: map.star.members.clone(),
            weights,
            degree: self.settings.degree,
            l1_norm,
            anchor: map.star.anchor.clone(),
            cube,
            c3: map.c3,
            retries: map.retries,
            cap_met: map.cap_met,
        })
    }

    pub fn cube_map(&self, cube: &[i64]) -> Result<Arc<CubeMap<T>>> {
        if let Some(m) = self.cache.lock().expect("cache poisoned").get(cube) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.build_cube(cube.to_vec())?);
        self.cache
            .lock()
            .expect("cache poisoned")
            .entry(cube.to_vec())
            .or_insert(m.clone());
        Ok(m)
    }

    fn build_cube(&self, cube: Vec<i64>) -> Result<CubeMap<T>> {
        let s = &self.settings;
        let need = self.basis.len();
        let probes = self.cube_probes(&cube);
        let mut c3 = T::lit(s.c3);
        let mut best: Option<CubeMap<T>> = None;
        let mut last_rank = (0, 0);
        for attempt in 0..=s.max_retries {
            if attempt > 0 {
                c3 = c3 * T::lit(s.growth);
            }
            let star = match star_of_cube(self.x, cube.clone(), c3) {
                Ok(st) => st,
                Err(Error::EmptyStar { .. }) if attempt < s.max_retries => continue,
                Err(e) => return Err(e),
            };
            let m = self.moment_matrix(&star);
            let svd = Svd::new(&m);
            let rank = svd.rank(T::lit(s.rcond));
            if rank < need {
                last_rank = (star.members.len(), rank);
                continue;
            }
            let mut map = CubeMap {
                pinv: svd.pinv(T::lit(s.rcond)),
                star,
                c3,
                retries: attempt,
                cap_met: false,
                sampled_l1: T::zero(),
            };
            map.sampled_l1 = probes
                .iter()
                .map(|t| map.weights(&self.basis, t).iter().fold(T::zero(), |a, w| a + w.abs()))
                .fold(T::zero(), T::max);
            map.cap_met = map.sampled_l1 <= T::lit(s.c2_cap);
            if map.cap_met {
                return Ok(map);
            }
            if best.as_ref().is_none_or(|b| map.sampled_l1 < b.sampled_l1) {
                best = Some(map);
            }
        }
        best.ok_or_else(|| Error::Unisolvent {
            t: self.x.partition().center(&cube).iter().map(|v| v.as_f64()).collect(),
            star_size: last_rank.0,
            rank: last_rank.1,
            needed: need,
        })
    }

    // Center and corners of a cube (corners pulled in slightly so they stay inside).
    fn cube_probes(&self, cube: &[i64]) -> Vec<Vec<T>> {
        let c = self.x.partition().center(cube);
        let half = self.x.h() * T::lit(0.5 - 1e-9);
        let d = c.len();
        let mut out = vec![c.clone()];
        for mask in 0..(1usize << d) {
            out.push(
                (0..d)
                    .map(|a| if mask >> a & 1 == 1 { c[a] + half } else { c[a] - half })
                    .collect(),
            );
        }
        out
    }

    fn moment_matrix(&self, star: &LocalStar<T>) -> Mat<T> {
        let pts = self.x.points();
        let cols: Vec<Vec<T>> = star
            .members
            .iter()
            .map(|&i| {
                let y: Vec<T> = pts[i]
                    .iter()
                    .zip(&star.anchor)
                    .map(|(&a, &b)| (a - b) / star.radius)
                    .collect();
                self.basis.eval(&y)
            })
            .collect();
        Mat::from_fn(self.basis.len(), cols.len(), |i, j| cols[j][i])
    }
}

/// One-shot construction of `λ_t`.
pub fn build_functional<T: Real>(
    t: &[T],
    x: &PointSet<T>,
    degree: usize,
    c3: f64,
    c2_cap: f64,
) -> Result<ReproFunctional<T>> {
    let mut s = ReproSettings::new(degree, c3);
    s.c2_cap = c2_cap;
    ReproBuilder::new(x, s).functional(t)
}

/// `K(x,t) = Σ_{ξ ∈ X(t)} A(t,ξ) Φ(x−ξ)`.
pub fn kernel_k<T: Real, K: RadialKernel<T> + ?Sized>(
    x: &[T],
    phi: &K,
    f: &ReproFunctional<T>,
    points: &PointSet<T>,
) -> T {
    let support = phi.support();
    f.star.iter().zip(&f.weights).fold(T::zero(), |acc, (&i, &w)| {
        let r = dist(x, &points.points()[i]);
        if w == T::zero() || support.is_some_and(|s| r >= s) {
            acc
        } else {
            acc + w * phi.profile(r)
        }
    })
}

/// `E(x,t) = Φ(x−t) − K(x,t)`.
pub fn error_kernel<T: Real, K: RadialKernel<T> + ?Sized>(
    x: &[T],
    t: &[T],
    phi: &K,
    f: &ReproFunctional<T>,
    points: &PointSet<T>,
) -> T {
    phi.profile(dist(x, t)) - kernel_k(x, phi, f, points)
}

/// `(κ, l)` of the bound `|E| ≤ C h^{κ−d}(1+‖x−t‖/h)^{−l}`: `κ = 2k` for
/// Wendland, `κ = γ` for Sobolev splines, `l = d + 1` for both.
pub fn property2_exponents(id: &KernelId) -> Result<(f64, f64)> {
    let l = id.d as f64 + 1.0;
    match id.family.as_str() {
        "wendland" => Ok((2.0 * id.k_or_gamma as f64, l)),
        "sobolev" => Ok((id.k_or_gamma as f64, l)),
        other => Err(Error::Unsupported(format!("no Property-2 exponents for {other}"))),
    }
}

/// One sampled `(x, t)` pair.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorRecord {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub dist_over_h: f64,
    pub abs_e: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorKernelScan {
    pub kernel: KernelId,
    pub h: f64,
    pub kappa: f64,
    pub l: f64,
    pub c1: f64,
    /// `max |E|·h^{d−κ}(1+‖x−t‖/h)^l`.
    pub c_emp: f64,
    pub near_field: usize,
    pub far_field: usize,
    /// Largest `|E|` among pairs farther apart than `support + C₁h`.
    pub beyond_support_max: Option<f64>,
    pub records: Vec<ErrorRecord>,
}

impl ErrorKernelScan {
    pub fn to_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["x", "t", "dist_over_h", "abs_E", "bound", "ratio"])?;
        let join = |v: &[f64]| v.iter().map(|c| format!("{c:e}")).collect::<Vec<_>>().join(" ");
        for r in &self.records {
            wr.write_record([
                join(&r.x),
                join(&r.t),
                format!("{:e}", r.dist_over_h),
                format!("{:e}", r.abs_e),
                format!("{:e}", r.bound),
                format!("{:e}", r.ratio),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}

pub const SCAN_STRATA: usize = 32;

/// Samples `(x, t)` with `t` uniform in `t_region` and `‖x−t‖/h` stratified:
/// one stratum `[0, ½]`, the rest geometric up to `(R + C₁h)/h` where `R` is
/// the support (or the `1e-12` effective radius).
pub fn property2_scan<T: Real, K: RadialKernel<T> + ?Sized>(
    phi: &K,
    builder: &ReproBuilder<'_, T>,
    kappa: f64,
    l: f64,
    t_region: &BoxDomain<T>,
    sample_budget: usize,
    seed: u64,
) -> Result<ErrorKernelScan> {
    let x = builder.points();
    let d = x.dim();
    let h = x.h().as_f64();
    let c1 = builder.c1().as_f64();
    let reach = phi
        .support()
        .unwrap_or_else(|| phi.effective_radius(T::lit(1e-12)))
        .as_f64();
    let top = (reach + c1 * h) / h * 1.05;
    let lo = 0.5f64;
    let mut edges = vec![0.0, lo];
    for i in 1..SCAN_STRATA {
        edges.push(lo * (top / lo).powf(i as f64 / (SCAN_STRATA - 1) as f64));
    }
    let per = (sample_budget / SCAN_STRATA).max(1);
    let records: Vec<ErrorRecord> = (0..SCAN_STRATA)
        .into_par_iter()
        .map(|s| -> Result<Vec<ErrorRecord>> {
            let mut rng = site_rng(seed, s as u64);
            let mut out = Vec::with_capacity(per);
            for _ in 0..per {
                let t: Vec<T> = (0..d)
                    .map(|a| {
                        let u: f64 = rng.gen();
                        t_region.lo[a] + (t_region.hi[a] - t_region.lo[a]) * T::lit(u)
                    })
                    .collect();
                let r = (edges[s] + (edges[s + 1] - edges[s]) * rng.gen::<f64>()) * h;
                let dir = unit_vector(&mut rng, d);
                let xp: Vec<T> = t.iter().zip(&dir).map(|(&a, &u)| a + T::lit(r * u)).collect();
                let f = builder.functional(&t)?;
                let e = error_kernel(&xp, &t, phi, &f, x).as_f64().abs();
                let rh = dist(&xp, &t).as_f64() / h;
                let bound = h.powf(kappa - d as f64) * (1.0 + rh).powf(-l);
                out.push(ErrorRecord {
                    x: xp.iter().map(|v| v.as_f64()).collect(),
                    t: t.iter().map(|v| v.as_f64()).collect(),
                    dist_over_h: rh,
                    abs_e: e,
                    bound,
                    ratio: e / bound,
                });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let c_emp = records.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let near_field = records.iter().filter(|r| r.dist_over_h <= 2.0 * c1).count();
    let beyond: Vec<f64> = match phi.support() {
        Some(sup) => records
            .iter()
            .filter(|r| r.dist_over_h * h > sup.as_f64() + c1 * h)
            .map(|r| r.abs_e)
            .collect(),
        None => Vec::new(),
    };
    Ok(ErrorKernelScan {
        kernel: phi.id(),
        h,
        kappa,
        l,
        c1,
        c_emp,
        near_field,
        far_field: records.len() - near_field,
        beyond_support_max: if beyond.is_empty() {
            None
        } else {
            Some(beyond.into_iter().fold(0.0, f64::max))
        },
        records,
    })
}

fn unit_vector<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    if d == 1 {
        return vec![if rng.gen::<bool>() { 1.0 } else { -1.0 }];
    }
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}
