//! Small dense linear algebra: Householder QR and one-sided Jacobi SVD,
//! enough for minimum-norm and least-squares solves with a singular-value cutoff.

use crate::scalar::Real;

/// Column-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![T::zero(); self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj == T::zero() {
                continue;
            }
            for (yi, &a) in y.iter_mut().zip(self.col(j)) {
                *yi = *yi + a * xj;
            }
        }
        y
    }

    /// `selfᵀ · x`
    pub fn tr_mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.rows);
        (0..self.cols).map(|j| dot(self.col(j), x)).collect()
    }

    pub fn mul(&self, o: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, o.rows);
        let mut out = Mat::zeros(self.rows, o.cols);
        for j in 0..o.cols {
            let y = self.mul_vec(o.col(j));
            out.col_mut(j).copy_from_slice(&y);
        }
        out
    }

    /// Swaps two columns in place.
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let r = self.rows;
        for i in 0..r {
            self.data.swap(a * r + i, b * r + i);
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[j * self.rows + i]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[j * self.rows + i]
    }
}

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

/// Householder QR of a tall matrix (`rows >= cols`), reflectors stored
/// below the diagonal, `R` on and above it.
struct Householder<T> {
    qr: Mat<T>,
    tau: Vec<T>,
}

impl<T: Real> Householder<T> {
    fn new(mut a: Mat<T>) -> Self {
        let (m, n) = (a.rows, a.cols);
        debug_assert!(m >= n);
        let mut tau = vec![T::zero(); n];
        for k in 0..n {
            let x = &a.col(k)[k..];
            let alpha = x.iter().fold(T::zero(), |s, &v| s.hypot(v));
            if alpha == T::zero() {
                continue;
            }
            let x0 = x[0];
            let beta = if x0 > T::zero() { -alpha } else { alpha };
            let v0 = x0 - beta;
            {
                let c = a.col_mut(k);
                for v in c[k + 1..].iter_mut() {
                    *v = *v / v0;
                }
                c[k] = beta;
            }
            tau[k] = (beta - x0) / beta;
            for j in k + 1..n {
                let (left, right) = a.data.split_at_mut(j * m);
                let vk = &left[k * m..(k + 1) * m];
                let cj = &mut right[..m];
                let mut s = cj[k];
                for i in k + 1..m {
                    s = s + vk[i] * cj[i];
                }
                s = s * tau[k];
                cj[k] = cj[k] - s;
                for i in k + 1..m {
                    cj[i] = cj[i] - s * vk[i];
                }
            }
        }
        Self { qr: a, tau }
    }

    fn r(&self) -> Mat<T> {
        let n = self.qr.cols;
        Mat::from_fn(n, n, |i, j| if i <= j { self.qr[(i, j)] } else { T::zero() })
    }

    /// Applies `Q` to a length-`rows` vector in place.
    fn apply_q(&self, x: &mut [T]) {
        let (m, n) = (self.qr.rows, self.qr.cols);
        for k in (0..n).rev() {
            self.reflect(k, m, x);
        }
    }

    /// Applies `Qᵀ` in place.
    fn apply_qt(&self, x: &mut [T]) {
        let (m, n) = (self.qr.rows, self.qr.cols);
        for k in 0..n {
            self.reflect(k, m, x);
        }
    }

    fn reflect(&self, k: usize, m: usize, x: &mut [T]) {
        if self.tau[k] == T::zero() {
            return;
        }
        let v = self.qr.col(k);
        let mut s = x[k];
        for i in k + 1..m {
            s = s + v[i] * x[i];
        }
        s = s * self.tau[k];
        x[k] = x[k] - s;
        for i in k + 1..m {
            x[i] = x[i] - s * v[i];
        }
    }
}

/// Thin singular value decomposition `A = U diag(s) Vᵀ`, singular values descending.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub u: Mat<T>,
    pub s: Vec<T>,
    pub v: Mat<T>,
}

impl<T: Real> Svd<T> {
    /// QR-preconditioned one-sided Jacobi.
    pub fn new(a: &Mat<T>) -> Self {
        if a.rows < a.cols {
            let t = Self::new(&a.transpose());
            return Self {
                u: t.v,
                s: t.s,
                v: t.u,
            };
        }
        let (m, n) = (a.rows, a.cols);
        let hh = Householder::new(a.clone());
        let (ur, s, v) = jacobi(hh.r());
        let mut u = Mat::zeros(m, n);
        for j in 0..n {
            let c = u.col_mut(j);
            c[..n].copy_from_slice(ur.col(j));
            hh.apply_q(c);
        }
        Self { u, s, v }
    }

    pub fn sigma_max(&self) -> T {
        self.s.first().copied().unwrap_or_else(T::zero)
    }

    /// Number of singular values above `rcond · σ_max`.
    pub fn rank(&self, rcond: T) -> usize {
        let cut = rcond * self.sigma_max();
        self.s.iter().filter(|&&s| s > cut).count()
    }

    /// Minimum-norm least-squares solution of `A x = b`, discarding singular
    /// values at or below `rcond · σ_max`.
    pub fn solve(&self, b: &[T], rcond: T) -> Vec<T> {
        let r = self.rank(rcond);
        let mut x = vec![T::zero(); self.v.rows];
        for k in 0..r {
            let c = dot(self.u.col(k), b) / self.s[k];
            for (xi, &vi) in x.iter_mut().zip(self.v.col(k)) {
                *xi = *xi + c * vi;
            }
        }
        x
    }

    /// Pseudo-inverse `V diag(1/s) Uᵀ` with the same cutoff rule.
    pub fn pinv(&self, rcond: T) -> Mat<T> {
        let r = self.rank(rcond);
        let (n, m) = (self.v.rows, self.u.rows);
        let mut p = Mat::zeros(n, m);
        for k in 0..r {
            let inv = T::one() / self.s[k];
            for j in 0..m {
                let c = self.u[(j, k)] * inv;
                if c == T::zero() {
                    continue;
                }
                for i in 0..n {
                    p[(i, j)] = p[(i, j)] + self.v[(i, k)] * c;
                }
            }
        }
        p
    }
}

/// One-sided Jacobi on a square matrix: returns `(U, s, V)` with columns
/// sorted by descending singular value. Zero columns get a zero `U` column.
fn jacobi<T: Real>(mut w: Mat<T>) -> (Mat<T>, Vec<T>, Mat<T>) {
    let n = w.cols;
    let mut v = Mat::identity(n);
    let tol = T::epsilon() * T::of_usize(n.max(1));
    // squared column norms, refreshed every sweep and updated per rotation
    let mut sq: Vec<T> = Vec::with_capacity(n);
    for _sweep in 0..80 {
        sq.clear();
        sq.extend((0..n).map(|j| dot(w.col(j), w.col(j))));
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta) = (sq[p], sq[q]);
                let gamma = dot(w.col(p), w.col(q));
                if gamma == T::zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
                sq[p] = alpha - t * gamma;
                sq[q] = beta + t * gamma;
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sig: Vec<T> = (0..n).map(|j| dot(w.col(j), w.col(j)).sqrt()).collect();
    // sort descending with a selection pass to keep the columns aligned
    for i in 0..n {
        let mut best = i;
        for j in i + 1..n {
            if sig[j] > sig[best] {
                best = j;
            }
        }
        sig.swap(i, best);
        w.swap_cols(i, best);
        v.swap_cols(i, best);
    }
    for (j, &s) in sig.iter().enumerate() {
        let c = w.col_mut(j);
        if s > T::zero() {
            for x in c.iter_mut() {
                *x = *x / s;
            }
        }
    }
    (w, sig, v)
}

fn rotate<T: Real>(m: &mut Mat<T>, p: usize, q: usize, c: T, s: T) {
    let r = m.rows;
    for i in 0..r {
        let a = m.data[p * r + i];
        let b = m.data[q * r + i];
        m.data[p * r + i] = c * a - s * b;
        m.data[q * r + i] = s * a + c * b;
    }
}

/// Least-squares solve of a tall system through Householder QR followed by
/// an SVD of `R`; avoids forming the thin `U` explicitly.
pub fn lstsq<T: Real>(a: &Mat<T>, b: &[T], rcond: T) -> LstsqResult<T> {
    assert_eq!(a.rows, b.len());
    if a.rows < a.cols {
        let svd = Svd::new(a);
        let x = svd.solve(b, rcond);
        return LstsqResult {
            rank: svd.rank(rcond),
            sigma_max: svd.sigma_max(),
            x,
        };
    }
    let n = a.cols;
    let hh = Householder::new(a.clone());
    let mut qtb = b.to_vec();
    hh.apply_qt(&mut qtb);
    let (ur, s, v) = jacobi(hh.r());
    let small = Svd { u: ur, s, v };
    LstsqResult {
        rank: small.rank(rcond),
        sigma_max: small.sigma_max(),
        x: small.solve(&qtb[..n], rcond),
    }
}

#[derive(Clone, Debug)]
pub struct LstsqResult<T> {
    pub x: Vec<T>,
    pub rank: usize,
    pub sigma_max: T,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(m: usize, n: usize) -> Mat<f64> {
        Mat::from_fn(m, n, |i, j| ((i * 7 + j * 13) % 11) as f64 - 5.0 + 0.1 * (i as f64) * (j as f64))
    }

    #[test]
    fn svd_reconstructs() {
        for &(m, n) in &[(6, 4), (4, 6), (5, 5)] {
            let a = sample(m, n);
            let svd = Svd::new(&a);
            let k = svd.s.len();
            let rec = Mat::from_fn(m, n, |i, j| {
                (0..k).map(|l| svd.u[(i, l)] * svd.s[l] * svd.v[(j, l)]).sum::<f64>()
            });
            for i in 0..m {
                for j in 0..n {
                    assert!((rec[(i, j)] - a[(i, j)]).abs() < 1e-12);
                }
            }
            assert!(svd.s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn min_norm_solution_of_wide_system() {
        // x + y = 2 has minimum-norm solution (1, 1)
        let a = Mat::from_fn(1, 2, |_, _| 1.0f64);
        let x = Svd::new(&a).solve(&[2.0], 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lstsq_matches_normal_equations_on_line_fit() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 2.9, 5.1, 7.0];
        let a: Mat<f64> = Mat::from_fn(4, 2, |i, j| if j == 0 { 1.0 } else { xs[i] });
        let r = lstsq(&a, &ys, 1e-12);
        assert_eq!(r.rank, 2);
        // closed form simple regression
        let slope = 2.02;
        let icpt = 0.97;
        assert!((r.x[1] - slope).abs() < 1e-12, "{:?}", r.x);
        assert!((r.x[0] - icpt).abs() < 1e-12);
    }

    #[test]
    fn rank_deficiency_detected() {
        let a = Mat::from_fn(5, 3, |i, j| match j {
            0 => 1.0,
            1 => (i * i) as f64,
            _ => 3.0 - 2.0 * (i * i) as f64,
        });
        assert_eq!(Svd::new(&a).rank(1e-10), 2);
    }

    #[test]
    fn pinv_times_matrix_is_projector() {
        let a = sample(3, 5);
        let p = Svd::new(&a).pinv(1e-12);
        let ap = a.mul(&p);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((ap[(i, j)] - e).abs() < 1e-11);
            }
        }
    }
}
