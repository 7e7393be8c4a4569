//! Point sets, fill distance, separation radius and the cube partition used
//! to build local stars.

use std::collections::HashMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{dist, Real};

/// Axis-aligned box `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain<T> {
    pub lo: Vec<T>,
    pub hi: Vec<T>,
}

impl<T: Real> BoxDomain<T> {
    pub fn new(lo: Vec<T>, hi: Vec<T>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidParameter("box corners must have equal, nonzero dimension".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::InvalidParameter("empty box".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn cube(d: usize, lo: T, hi: T) -> Result<Self> {
        Self::new(vec![lo; d], vec![hi; d])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn shortest_side(&self) -> T {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| b - a)
            .fold(T::infinity(), T::min)
    }

    pub fn volume(&self) -> T {
        self.lo.iter().zip(&self.hi).map(|(&a, &b)| b - a).fold(T::one(), |p, s| p * s)
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(&v, (&a, &b))| v >= a && v <= b)
    }

    /// Box shrunk (or grown, for negative `by`) by `by` on every side.
    pub fn shrink(&self, by: T) -> Result<Self> {
        Self::new(
            self.lo.iter().map(|&a| a + by).collect(),
            self.hi.iter().map(|&b| b - by).collect(),
        )
    }

    pub fn translate(&self, v: &[T]) -> Self {
        Self {
            lo: self.lo.iter().zip(v).map(|(&a, &s)| a + s).collect(),
            hi: self.hi.iter().zip(v).map(|(&b, &s)| b + s).collect(),
        }
    }

    /// Tensor grid with at most `spacing` between nodes, boundary included.
    pub fn grid(&self, spacing: T) -> TensorGrid<T> {
        let axes = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| {
                let n = cells(b - a, spacing);
                let w = (b - a) / T::of_usize(n);
                (0..=n).map(|i| a + w * T::of_usize(i)).collect()
            })
            .collect();
        TensorGrid { axes }
    }
}

// Number of equal cells of width ≤ `spacing` covering `len`, forgiving rounding.
fn cells<T: Real>(len: T, spacing: T) -> usize {
    let q = (len / spacing).as_f64();
    ((q - 1e-9).ceil() as usize).max(1)
}

/// Cartesian product of per-axis node lists.
#[derive(Clone, Debug)]
pub struct TensorGrid<T> {
    pub axes: Vec<Vec<T>>,
}

impl<T: Real> TensorGrid<T> {
    pub fn len(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, mut flat: usize) -> Vec<T> {
        let mut out = Vec::with_capacity(self.axes.len());
        for ax in &self.axes {
            out.push(ax[flat % ax.len()]);
            flat /= ax.len();
        }
        out
    }

    pub fn points(&self) -> Vec<Vec<T>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Composite trapezoid weights, aligned with [`TensorGrid::points`].
    pub fn trapezoid_weights(&self) -> Vec<T> {
        let per_axis: Vec<Vec<T>> = self
            .axes
            .iter()
            .map(|ax| {
                let n = ax.len();
                (0..n)
                    .map(|i| {
                        let left = if i > 0 { ax[i] - ax[i - 1] } else { T::zero() };
                        let right = if i + 1 < n { ax[i + 1] - ax[i] } else { T::zero() };
                        (left + right) / T::lit(2.0)
                    })
                    .collect()
            })
            .collect();
        (0..self.len())
            .map(|mut flat| {
                let mut w = T::one();
                for ax in &per_axis {
                    w = w * ax[flat % ax.len()];
                    flat /= ax.len();
                }
                w
            })
            .collect()
    }
}

/// Hash grid of points for neighbor queries.
#[derive(Clone, Debug)]
pub struct BucketGrid<T> {
    origin: Vec<T>,
    cell: T,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
    // bounding range of occupied cells per axis
    min: Vec<i64>,
    max: Vec<i64>,
}

impl<T: Real> BucketGrid<T> {
    pub fn new(points: &[Vec<T>], origin: Vec<T>, cell: T) -> Self {
        let d = origin.len();
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        let mut min = vec![i64::MAX; d];
        let mut max = vec![i64::MIN; d];
        for (i, p) in points.iter().enumerate() {
            let key = cell_of(p, &origin, cell);
            for a in 0..d {
                min[a] = min[a].min(key[a]);
                max[a] = max[a].max(key[a]);
            }
            buckets.entry(key).or_default().push(i);
        }
        Self {
            origin,
            cell,
            buckets,
            min,
            max,
        }
    }

    pub fn cell(&self) -> T {
        self.cell
    }

    /// Indices of points with `‖p − x‖ ≤ radius`, sorted.
    pub fn within(&self, points: &[Vec<T>], x: &[T], radius: T) -> Vec<usize> {
        let lo: Vec<i64> = x
            .iter()
            .zip(&self.origin)
            .map(|(&v, &o)| ((v - radius - o) / self.cell).floor().to_i64().unwrap_or(i64::MIN))
            .collect();
        let hi: Vec<i64> = x
            .iter()
            .zip(&self.origin)
            .map(|(&v, &o)| ((v + radius - o) / self.cell).floor().to_i64().unwrap_or(i64::MAX))
            .collect();
        let mut out = Vec::new();
        self.for_box(&lo, &hi, |idx| {
            if dist(&points[idx], x) <= radius {
                out.push(idx);
            }
        });
        out.sort_unstable();
        out
    }

    /// Nearest point to `x` other than `skip`, with its distance.
    pub fn nearest(&self, points: &[Vec<T>], x: &[T], skip: Option<usize>) -> Option<(usize, T)> {
        let center = cell_of(x, &self.origin, self.cell);
        let reach = center
            .iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&c, (&a, &b))| (c - a).abs().max((b - c).abs()))
            .max()
            .unwrap_or(0);
        let mut best: Option<(usize, T)> = None;
        for ring in 0..=reach {
            if let Some((_, bd)) = best {
                // every unvisited cell lies at least (ring − 1)·cell away
                if T::of_usize((ring - 1).max(0) as usize) * self.cell > bd {
                    break;
                }
            }
            let lo: Vec<i64> = center.iter().map(|&c| c - ring).collect();
            let hi: Vec<i64> = center.iter().map(|&c| c + ring).collect();
            self.for_box(&lo, &hi, |idx| {
                if Some(idx) == skip {
                    return;
                }
                let dd = dist(&points[idx], x);
                if best.is_none_or(|(bi, bd)| dd < bd || (dd == bd && idx < bi)) {
                    best = Some((idx, dd));
                }
            });
        }
        best
    }

    fn for_box(&self, lo: &[i64], hi: &[i64], mut visit: impl FnMut(usize)) {
        let d = lo.len();
        let lo: Vec<i64> = (0..d).map(|a| lo[a].max(self.min[a])).collect();
        let hi: Vec<i64> = (0..d).map(|a| hi[a].min(self.max[a])).collect();
        if (0..d).any(|a| lo[a] > hi[a]) {
            return;
        }
        let count: u128 = (0..d).map(|a| (hi[a] - lo[a] + 1) as u128).product();
        if count > self.buckets.len() as u128 * 4 {
            for (key, ids) in &self.buckets {
                if (0..d).all(|a| key[a] >= lo[a] && key[a] <= hi[a]) {
                    ids.iter().for_each(|&i| visit(i));
                }
            }
            return;
        }
        let mut key = lo.clone();
        loop {
            if let Some(ids) = self.buckets.get(&key) {
                ids.iter().for_each(|&i| visit(i));
            }
            let mut a = 0;
            loop {
                if a == d {
                    return;
                }
                key[a] += 1;
                if key[a] <= hi[a] {
                    break;
                }
                key[a] = lo[a];
                a += 1;
            }
        }
    }
}

fn cell_of<T: Real>(x: &[T], origin: &[T], cell: T) -> Vec<i64> {
    x.iter()
        .zip(origin)
        .map(|(&v, &o)| ((v - o) / cell).floor().to_i64().unwrap_or(0))
        .collect()
}

fn typical_spacing<T: Real>(points: &[Vec<T>], domain: &BoxDomain<T>) -> T {
    let d = domain.dim();
    let per = domain.volume() / T::of_usize(points.len().max(1));
    per.powf(T::one() / T::of_usize(d))
}

/// Fill distance estimate over a candidate grid.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FillDistance<T> {
    /// Supremum over the candidate grid; a lower bound for the true value.
    pub value: T,
    /// `value + slack` bounds the true fill distance from above.
    pub slack: T,
}

/// `h_X = sup_{x ∈ domain} min_ξ ‖x − ξ‖₂`, over a candidate grid of spacing
/// at most `resolution`. The true value lies in `[value, value + resolution·√d/2]`.
pub fn fill_distance<T: Real>(points: &[Vec<T>], domain: &BoxDomain<T>, resolution: T) -> Result<FillDistance<T>> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("fill distance of an empty set".into()));
    }
    let grid = BucketGrid::new(points, domain.lo.clone(), typical_spacing(points, domain));
    let cand = domain.grid(resolution);
    let value = (0..cand.len())
        .into_par_iter()
        .map(|i| {
            let x = cand.point(i);
            grid.nearest(points, &x, None).map(|(_, d)| d.as_f64()).unwrap_or(0.0)
        })
        .reduce(|| 0.0, f64::max);
    let d = T::of_usize(domain.dim());
    Ok(FillDistance {
        value: T::lit(value),
        slack: resolution * d.sqrt() / T::lit(2.0),
    })
}

/// `q_X = ½ min_{ξ ≠ ξ'} ‖ξ − ξ'‖₂`, exact.
pub fn separation_radius<T: Real>(points: &[Vec<T>]) -> Result<T> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter("separation radius needs at least two points".into()));
    }
    let d = points[0].len();
    let mut lo = points[0].clone();
    let mut hi = points[0].clone();
    for p in points {
        for a in 0..d {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let vol = lo
        .iter()
        .zip(&hi)
        .map(|(&a, &b)| (b - a).max(T::epsilon()))
        .fold(T::one(), |v, s| v * s);
    let cell = (vol / T::of_usize(points.len())).powf(T::one() / T::of_usize(d));
    let grid = BucketGrid::new(points, lo, cell);
    let best = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let (j, dd) = grid.nearest(points, &points[i], Some(i)).expect("at least two points");
            (dd.as_f64(), i.min(j), i.max(j))
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |a, b| if (a.0, a.1, a.2) <= (b.0, b.1, b.2) { a } else { b },
        );
    if best.0 == 0.0 {
        return Err(Error::DuplicatePoint(best.1, best.2));
    }
    Ok(T::lit(best.0) / T::lit(2.0))
}

/// Half-open cubes of side `side` centered at `origin + i·side`.
#[derive(Clone, Debug, Serialize)]
pub struct CubePartition<T> {
    pub origin: Vec<T>,
    pub side: T,
}

impl<T: Real> CubePartition<T> {
    /// Index of the cube `Π [c_a − side/2, c_a + side/2)` containing `t`.
    pub fn cube_of(&self, t: &[T]) -> Vec<i64> {
        let half = T::lit(0.5);
        t.iter()
            .zip(&self.origin)
            .map(|(&v, &o)| ((v - o) / self.side + half).floor().to_i64().unwrap_or(0))
            .collect()
    }

    pub fn center(&self, cube: &[i64]) -> Vec<T> {
        cube.iter()
            .zip(&self.origin)
            .map(|(&i, &o)| o + self.side * T::from_i64(i).unwrap_or_else(T::zero))
            .collect()
    }
}

/// Scattered points in a box with their density functionals.
#[derive(Clone, Debug)]
pub struct PointSet<T> {
    points: Vec<Vec<T>>,
    domain: BoxDomain<T>,
    h: FillDistance<T>,
    q: T,
    seed: Option<u64>,
    partition: CubePartition<T>,
    grid: BucketGrid<T>,
}

impl<T: Real> PointSet<T> {
    /// Computes `h` (candidate grid of spacing `resolution`) and `q`.
    pub fn new(points: Vec<Vec<T>>, domain: BoxDomain<T>, resolution: T) -> Result<Self> {
        if points.iter().any(|p| p.len() != domain.dim()) {
            return Err(Error::InvalidParameter("point dimension differs from domain".into()));
        }
        let q = separation_radius(&points)?;
        let h = fill_distance(&points, &domain, resolution)?;
        let partition = CubePartition {
            origin: domain.lo.clone(),
            side: h.value,
        };
        let grid = BucketGrid::new(&points, domain.lo.clone(), h.value);
        Ok(Self {
            points,
            domain,
            h,
            q,
            seed: None,
            partition,
            grid,
        })
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &BoxDomain<T> {
        &self.domain
    }

    pub fn h(&self) -> T {
        self.h.value
    }

    pub fn fill(&self) -> FillDistance<T> {
        self.h
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn rho(&self) -> T {
        self.h.value / self.q
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn partition(&self) -> &CubePartition<T> {
        &self.partition
    }

    /// Indices within `radius` of `x`.
    pub fn within(&self, x: &[T], radius: T) -> Vec<usize> {
        self.grid.within(&self.points, x, radius)
    }

    pub fn check_quasi_uniform(&self, rho_max: T) -> Result<()> {
        if self.rho() < rho_max {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "mesh ratio {} not below rho_max {}",
                self.rho(),
                rho_max
            )))
        }
    }

    /// Shifted copy; `h`, `q` and the cube partition move along exactly.
    pub fn translate(&self, v: &[T]) -> Self {
        let points: Vec<Vec<T>> = self
            .points
            .iter()
            .map(|p| p.iter().zip(v).map(|(&a, &s)| a + s).collect())
            .collect();
        let domain = self.domain.translate(v);
        Self {
            grid: BucketGrid::new(&points, domain.lo.clone(), self.h.value),
            partition: CubePartition {
                origin: domain.lo.clone(),
                side: self.h.value,
            },
            points,
            domain,
            h: self.h,
            q: self.q,
            seed: self.seed,
        }
    }

    pub fn metadata(&self) -> PointSetMeta {
        PointSetMeta {
            h: self.h().as_f64(),
            h_slack: self.h.slack.as_f64(),
            q: self.q.as_f64(),
            rho: self.rho().as_f64(),
            domain: BoxDomain {
                lo: self.domain.lo.iter().map(|v| v.as_f64()).collect(),
                hi: self.domain.hi.iter().map(|v| v.as_f64()).collect(),
            },
            seed: self.seed,
            n_points: self.len(),
        }
    }

    /// Writes `x0,x1,…` rows to `csv_path` and the metadata sidecar next to it
    /// (same stem, `.json`).
    pub fn save(&self, csv_path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(csv_path)?;
        w.write_record((0..self.dim()).map(|a| format!("x{a}")))?;
        for p in &self.points {
            w.write_record(p.iter().map(|v| format!("{:e}", v.as_f64())))?;
        }
        w.flush()?;
        let meta = serde_json::to_string_pretty(&self.metadata())?;
        std::fs::write(csv_path.with_extension("json"), meta)?;
        Ok(())
    }

    /// Reads points and sidecar written by [`PointSet::save`]; `h` and `q`
    /// are recomputed, not trusted.
    pub fn load(csv_path: &Path, resolution: T) -> Result<Self> {
        let meta: PointSetMeta = serde_json::from_str(&std::fs::read_to_string(csv_path.with_extension("json"))?)?;
        let mut r = csv::Reader::from_path(csv_path)?;
        let mut points = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let p = rec
                .iter()
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map(T::lit)
                        .map_err(|e| Error::InvalidParameter(format!("bad coordinate {s:?}: {e}")))
                })
                .collect::<Result<Vec<T>>>()?;
            points.push(p);
        }
        let domain = BoxDomain::new(
            meta.domain.lo.iter().map(|&v| T::lit(v)).collect(),
            meta.domain.hi.iter().map(|&v| T::lit(v)).collect(),
        )?;
        let mut set = Self::new(points, domain, resolution)?;
        set.seed = meta.seed;
        Ok(set)
    }
}

/// Sidecar metadata of a saved point set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetMeta {
    pub h: f64,
    pub h_slack: f64,
    pub q: f64,
    pub rho: f64,
    pub domain: BoxDomain<f64>,
    pub seed: Option<u64>,
    pub n_points: usize,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded generator for one lattice site; independent of iteration order.
pub fn site_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

/// Lattice of the given `spacing` over `domain` (boundary included), each
/// coordinate perturbed uniformly by at most `jitter·spacing`.
///
/// `h` is measured on a candidate grid of spacing `spacing/8`.
pub fn make_quasi_uniform<T: Real>(domain: &BoxDomain<T>, spacing: T, jitter: T, seed: u64) -> Result<PointSet<T>> {
    if !(spacing > T::zero()) || !(spacing < domain.shortest_side()) {
        return Err(Error::InvalidParameter(format!(
            "spacing {spacing} must be positive and below the shortest side {}",
            domain.shortest_side()
        )));
    }
    if !(jitter >= T::zero() && jitter <= T::lit(0.4)) {
        return Err(Error::InvalidParameter(format!("jitter {jitter} outside [0, 0.4]")));
    }
    let counts: Vec<usize> = domain
        .lo
        .iter()
        .zip(&domain.hi)
        .map(|(&a, &b)| ((b - a) / spacing + T::lit(1e-9)).floor().to_usize().unwrap_or(0) + 1)
        .collect();
    let total: usize = counts.iter().product();
    let points: Vec<Vec<T>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rng = site_rng(seed, flat as u64);
            let mut rest = flat;
            let mut p = Vec::with_capacity(counts.len());
            for (a, &n) in counts.iter().enumerate() {
                let i = rest % n;
                rest /= n;
                let u: f64 = rng.gen_range(-1.0..=1.0);
                p.push(domain.lo[a] + spacing * T::of_usize(i) + jitter * spacing * T::lit(u));
            }
            p
        })
        .collect();
    let mut set = PointSet::new(points, domain.clone(), spacing / T::lit(8.0))?;
    set.seed = Some(seed);
    Ok(set)
}

/// `X(t)`: points within `C₃·h` of the center of `t`'s cube.
#[derive(Clone, Debug, Serialize)]
pub struct LocalStar<T> {
    pub cube: Vec<i64>,
    pub anchor: Vec<T>,
    pub radius: T,
    pub members: Vec<usize>,
}

impl<T: Real> LocalStar<T> {
    pub fn points<'a>(&'a self, x: &'a PointSet<T>) -> impl Iterator<Item = (usize, &'a [T])> + 'a {
        self.members.iter().map(move |&i| (i, x.points()[i].as_slice()))
    }
}

pub fn local_star<T: Real>(t: &[T], x: &PointSet<T>, c3: T) -> Result<LocalStar<T>> {
    star_of_cube(x, x.partition().cube_of(t), c3)
}

pub fn star_of_cube<T: Real>(x: &PointSet<T>, cube: Vec<i64>, c3: T) -> Result<LocalStar<T>> {
    let anchor = x.partition().center(&cube);
    let radius = c3 * x.h();
    let members = x.within(&anchor, radius);
    if members.is_empty() {
        return Err(Error::EmptyStar {
            anchor: anchor.iter().map(|v| v.as_f64()).collect(),
            radius: radius.as_f64(),
        });
    }
    Ok(LocalStar {
        cube,
        anchor,
        radius,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_q(p: &[Vec<f64>]) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..p.len() {
            for j in 0..i {
                best = best.min(dist(&p[i], &p[j]));
            }
        }
        best / 2.0
    }

    #[test]
    fn uniform_1d_grid() {
        let dom = BoxDomain::cube(1, 0.0, 1.0).unwrap();
        let x = make_quasi_uniform(&dom, 0.25, 0.0, 1).unwrap();
        let xs: Vec<f64> = x.points().iter().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(x.h(), 0.125);
        assert_eq!(x.q(), 0.125);
    }

    #[test]
    fn lattice_2d_fill() {
        let dom = BoxDomain::cube(2, 0.0, 1.0).unwrap();
        let x = make_quasi_uniform(&dom, 0.125, 0.0, 3).unwrap();
        assert!((x.h() - 0.125 * 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((x.q() - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn small_sets() {
        let dom = BoxDomain::cube(1, 0.0, 1.0).unwrap();
        let h = fill_distance(&[vec![0.0], vec![0.5], vec![1.0]], &dom, 0.01).unwrap();
        assert_eq!(h.value, 0.25);
        assert_eq!(fill_distance(&[vec![0.0]], &dom, 0.01).unwrap().value, 1.0);
        assert_eq!(separation_radius(&[vec![0.0], vec![0.5], vec![1.0]]).unwrap(), 0.25);
        assert!(matches!(
            separation_radius(&[vec![0.3], vec![0.1], vec![0.3]]),
            Err(Error::DuplicatePoint(0, 2))
        ));
        assert!(separation_radius(&[vec![0.3]]).is_err());
    }

    #[test]
    fn separation_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p: Vec<Vec<f64>> = (0..1000).map(|_| vec![rng.gen(), rng.gen()]).collect();
        assert_eq!(separation_radius(&p).unwrap(), brute_q(&p));
    }

    #[test]
    fn deterministic_generation() {
        let dom = BoxDomain::cube(2, -1.0, 1.0).unwrap();
        let a = make_quasi_uniform(&dom, 0.1, 0.25, 42).unwrap();
        let b = make_quasi_uniform(&dom, 0.1, 0.25, 42).unwrap();
        assert_eq!(a.points(), b.points());
        let c = make_quasi_uniform(&dom, 0.1, 0.25, 43).unwrap();
        assert_ne!(a.points(), c.points());
    }

    #[test]
    fn star_counts_and_tie_break() {
        let dom = BoxDomain::cube(1, 0.0, 2.0).unwrap();
        let s = 0.125;
        let x = make_quasi_uniform(&dom, s, 0.0, 0).unwrap();
        // h = s/2, so C3·h = 1.1 s
        let c3 = 2.2;
        for &t in &[0.5, 0.77, 1.02] {
            assert_eq!(local_star(&[t], &x, c3).unwrap().members.len(), 3);
        }
        // cubes centered midway between lattice sites see two
        assert_eq!(local_star(&[1.3], &x, c3).unwrap().members.len(), 2);
        // cube boundary at (i + 1/2)·h belongs to the upper cube
        let b = 0.5 + 0.5 * x.h();
        assert_eq!(x.partition().cube_of(&[b]), vec![9]);
        assert_eq!(x.partition().cube_of(&[b - 1e-12]), vec![8]);
    }

    #[test]
    fn empty_star_reported() {
        let dom = BoxDomain::cube(1, 0.0, 1.0).unwrap();
        let x = PointSet::new(vec![vec![0.0], vec![1.0]], dom, 0.01).unwrap();
        assert!(matches!(local_star(&[0.5], &x, 0.1), Err(Error::EmptyStar { .. })));
    }

    #[test]
    fn save_and_load() {
        let dom = BoxDomain::cube(2, 0.0, 1.0).unwrap();
        let x = make_quasi_uniform(&dom, 0.2, 0.2, 5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pts.csv");
        x.save(&path).unwrap();
        let y = PointSet::<f64>::load(&path, 0.025).unwrap();
        assert_eq!(y.len(), x.len());
        assert_eq!(y.seed(), Some(5));
        assert_eq!(y.q(), x.q());
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("x0,x1\n"));
    }
}
