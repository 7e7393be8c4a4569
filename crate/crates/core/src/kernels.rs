//! Radial kernels: compactly supported Wendland functions built in exact
//! arithmetic, Sobolev splines (Matérn family) and a Gaussian reference.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bessel::{gamma_half, scaled_bessel_k};
use crate::error::{Error, Result};
use crate::exact::{factorial, int, to_real};
use crate::jet::{Jet, JetSpace};
use crate::poly::Poly;
use crate::scalar::{norm, Real};

/// Largest dimension and smoothness accepted by the exact construction.
pub const WENDLAND_MAX_D: usize = 9;
pub const WENDLAND_MAX_K: usize = 5;

/// Identification carried into reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelId {
    pub family: String,
    pub d: usize,
    pub k_or_gamma: usize,
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(d={}, {})", self.family, self.d, self.k_or_gamma)
    }
}

/// A radial function `x ↦ φ(‖x‖₂)` on `ℝ^d`.
pub trait RadialKernel<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    fn id(&self) -> KernelId;

    /// The radial profile `φ(r)`, `r ≥ 0`.
    fn profile(&self, r: T) -> T;

    /// Taylor coefficients `φ^{(j)}(r0)/j!`, `j = 0..=order`, of the profile
    /// (from the right at `r0 = 0`).
    fn taylor(&self, r0: T, order: usize) -> Result<Vec<T>>;

    /// Radius beyond which the profile is identically zero, if any.
    fn support(&self) -> Option<T>;

    /// Radius beyond which `|φ| < tol · φ(0)`.
    fn effective_radius(&self, tol: T) -> T;

    /// Highest total derivative order that may be requested anywhere.
    fn max_derivative_order(&self) -> Option<usize> {
        None
    }

    /// Interior radii where the profile is not smooth.
    fn breakpoints(&self) -> Vec<T> {
        self.support().into_iter().collect()
    }
}

/// `K(‖x‖₂)`.
pub fn kernel_eval<T: Real, K: RadialKernel<T> + ?Sized>(kernel: &K, x: &[T]) -> T {
    kernel.profile(norm(x))
}

/// `∂^α K(x)` by pushing a truncated Taylor jet through `r = ‖x‖₂`.
///
/// At `x = 0` the profile is read through its even extension; an odd Taylor
/// coefficient at or below the requested order means the derivative does not
/// exist there and [`Error::UnsupportedOrder`] is returned.
pub fn kernel_derivative<T: Real, K: RadialKernel<T> + ?Sized>(kernel: &K, x: &[T], alpha: &[usize]) -> Result<T> {
    let d = kernel.dim();
    if x.len() != d || alpha.len() != d {
        return Err(Error::InvalidParameter(format!(
            "point and multi-index must have length {d}"
        )));
    }
    let order: usize = alpha.iter().sum();
    if let Some(max) = kernel.max_derivative_order() {
        if order > max {
            return Err(Error::UnsupportedOrder {
                order,
                reason: format!("{} is only C^{max}", kernel.id()),
            });
        }
    }
    let space = JetSpace::new(d, order);
    let r0 = norm(x);
    let taylor = kernel.taylor(r0, order)?;
    let jet = if r0 == T::zero() {
        for (j, &c) in taylor.iter().enumerate() {
            if j % 2 == 1 && c != T::zero() {
                return Err(Error::UnsupportedOrder {
                    order,
                    reason: format!("{} has an odd radial term r^{j} at the origin", kernel.id()),
                });
            }
        }
        let mut s = Jet::constant(&space, T::zero());
        for i in 0..d {
            let xi = Jet::variable(&space, i, T::zero());
            s = s.add(&xi.mul(&xi));
        }
        // φ = Σ c_{2i} s^i
        let even: Vec<T> = taylor.iter().step_by(2).copied().collect();
        s.compose(&even)
    } else {
        let r = if d == 1 {
            Jet::variable(&space, 0, x[0]).scale(x[0].signum())
        } else {
            let mut s = Jet::constant(&space, T::zero());
            for (i, &xi) in x.iter().enumerate() {
                let v = Jet::variable(&space, i, xi);
                s = s.add(&v.mul(&v));
            }
            s.sqrt()
        };
        r.compose(&taylor)
    };
    Ok(jet.derivative(alpha))
}

// ---------------------------------------------------------------------------
// Wendland functions

/// Exact radial polynomial of `Φ_{d,k}` on `[0, 1]`; zero beyond.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePolyRadial {
    d: usize,
    k: usize,
    poly: Poly<BigRational>,
}

impl PiecewisePolyRadial {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn smoothness(&self) -> usize {
        self.k
    }

    /// Coefficients in ascending powers of `r`.
    pub fn coeffs(&self) -> &[BigRational] {
        self.poly.coeffs()
    }

    pub fn poly(&self) -> &Poly<BigRational> {
        &self.poly
    }

    /// Exact value of the polynomial piece.
    pub fn eval_exact(&self, r: &BigRational) -> BigRational {
        if r >= &BigRational::one() {
            BigRational::zero()
        } else {
            self.poly.eval(r)
        }
    }

    /// Whether the polynomial and its first `2k` derivatives vanish at `r = 1`.
    pub fn boundary_smooth(&self) -> bool {
        let one = BigRational::one();
        (0..=2 * self.k).all(|j| self.poly.nth_derivative(j).eval(&one).is_zero())
    }

    pub fn to_kernel<T: Real>(&self) -> Wendland<T> {
        Wendland::from_exact(self.clone())
    }

    /// `poly = scale · (1-r)^ℓ · q(r)` with `ℓ` maximal and `q` a primitive
    /// integer polynomial with positive constant term.
    pub fn factored(&self) -> Factored {
        let one = BigRational::one();
        let mut p = self.poly.clone();
        let mut ell = 0;
        while !p.is_zero() && p.eval(&one).is_zero() {
            // p = (1-r)s  ⇔  s_i = p_0 + … + p_i
            let c = p.coeffs();
            let mut acc = BigRational::zero();
            let s: Vec<BigRational> = c[..c.len() - 1]
                .iter()
                .map(|a| {
                    acc = &acc + a;
                    acc.clone()
                })
                .collect();
            p = Poly::new(s);
            ell += 1;
        }
        let lcm = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * &lcm).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            g = BigInt::one();
        }
        if ints.first().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let q: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
        Factored {
            ell,
            q,
            scale: BigRational::new(g, lcm),
        }
    }
}

/// See [`PiecewisePolyRadial::factored`].
#[derive(Clone, Debug, PartialEq)]
pub struct Factored {
    pub ell: usize,
    /// Ascending coefficients.
    pub q: Vec<BigInt>,
    pub scale: BigRational,
}

/// `Φ_{d,k}`: `k`-fold application of `f ↦ ∫_r^1 t f(t) dt` to `(1-r)^ℓ`,
/// `ℓ = ⌊d/2⌋ + k + 1`, in exact rational arithmetic.
pub fn wendland_construct(d: usize, k: usize) -> Result<PiecewisePolyRadial> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if d > WENDLAND_MAX_D || k > WENDLAND_MAX_K {
        return Err(Error::GuardExceeded(format!(
            "d={d}, k={k} (limits d ≤ {WENDLAND_MAX_D}, k ≤ {WENDLAND_MAX_K})"
        )));
    }
    let l = d / 2 + k + 1;
    let one_minus_r = Poly::new(vec![int(1), int(-1)]);
    let mut p = one_minus_r.pow(l);
    let t = Poly::monomial(int(1), 1);
    for _ in 0..k {
        let anti = (&t * &p).antiderivative();
        let at_one = anti.eval(&int(1));
        p = &Poly::constant(at_one) - &anti;
    }
    Ok(PiecewisePolyRadial { d, k, poly: p })
}

/// Positive rational `c` with `a = c · b`, if one exists.
pub fn proportionality_factor(a: &Poly<BigRational>, b: &Poly<BigRational>) -> Option<BigRational> {
    if a.degree() != b.degree() || b.is_zero() {
        return None;
    }
    let lead = b.degree()?;
    let c = a.coeff(lead) / b.coeff(lead);
    if !c.is_positive() {
        return None;
    }
    (b.scale(&c) == *a).then_some(c)
}

/// Floating-point evaluator for a Wendland function.
#[derive(Clone, Debug)]
pub struct Wendland<T> {
    exact: Arc<PiecewisePolyRadial>,
    coeffs: Vec<T>,
}

impl<T: Real> Wendland<T> {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        Ok(Self::from_exact(wendland_construct(d, k)?))
    }

    pub fn from_exact(p: PiecewisePolyRadial) -> Self {
        let coeffs = p.coeffs().iter().map(to_real).collect();
        Self {
            exact: Arc::new(p),
            coeffs,
        }
    }

    pub fn exact(&self) -> &PiecewisePolyRadial {
        &self.exact
    }

    pub fn k(&self) -> usize {
        self.exact.k
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }
}

fn horner<T: Real>(c: &[T], r: T) -> T {
    c.iter().rev().fold(T::zero(), |acc, &a| acc * r + a)
}

impl<T: Real> RadialKernel<T> for Wendland<T> {
    fn dim(&self) -> usize {
        self.exact.d
    }

    fn id(&self) -> KernelId {
        KernelId {
            family: "wendland".into(),
            d: self.exact.d,
            k_or_gamma: self.exact.k,
        }
    }

    fn profile(&self, r: T) -> T {
        if r >= T::one() {
            T::zero()
        } else {
            horner(&self.coeffs, r)
        }
    }

    fn taylor(&self, r0: T, order: usize) -> Result<Vec<T>> {
        if r0 >= T::one() {
            return Ok(vec![T::zero(); order + 1]);
        }
        let shifted = Poly::new(self.coeffs.clone()).taylor_shift(&r0);
        Ok((0..=order).map(|j| shifted.coeff(j)).collect())
    }

    fn support(&self) -> Option<T> {
        Some(T::one())
    }

    fn effective_radius(&self, _tol: T) -> T {
        T::one()
    }

    fn max_derivative_order(&self) -> Option<usize> {
        Some(2 * self.exact.k)
    }
}

// ---------------------------------------------------------------------------
// Sobolev splines

/// Evaluation path of a [`SobolevSpline`].
#[derive(Clone, Debug)]
pub enum SobolevEval<T> {
    /// `d` odd: `e^{-r} P(r)` with `P` of degree `ν - 1/2`.
    ClosedForm {
        poly: Vec<T>,
        exact_poly: Poly<BigRational>,
    },
    /// `r^ν K_ν(r)` by quadrature, optionally tabulated for cubic Hermite lookup.
    Numeric { table: Option<HermiteTable<T>> },
}

/// Green's function of `(1-Δ)^{γ/2}` on `ℝ^d`: the radial function whose
/// symmetric-convention Fourier transform is `(1+‖ω‖²)^{-γ/2}`.
///
/// `G(r) = 2^{1-γ/2}/Γ(γ/2) · r^ν K_ν(r)` with `ν = (γ-d)/2`.
#[derive(Clone, Debug)]
pub struct SobolevSpline<T> {
    gamma: usize,
    d: usize,
    /// `2ν = γ - d`
    nu2: usize,
    scale: T,
    eval: SobolevEval<T>,
}

impl<T: Real> SobolevSpline<T> {
    /// Closed form for odd `d`, tabulated quadrature for even `d`.
    pub fn new(gamma: usize, d: usize) -> Result<Self> {
        Self::check(gamma, d)?;
        if d % 2 == 1 {
            Self::closed_form(gamma, d)
        } else {
            Self::numeric(gamma, d, true)
        }
    }

    fn check(gamma: usize, d: usize) -> Result<()> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if gamma == 0 || gamma % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "gamma must be a positive even integer, got {gamma}"
            )));
        }
        if gamma <= d {
            return Err(Error::InvalidParameter(format!(
                "gamma={gamma} must exceed d={d} for a bounded kernel"
            )));
        }
        Ok(())
    }

    fn scale_for(gamma: usize) -> T {
        T::lit(2.0).powi(1 - (gamma / 2) as i32) / gamma_half::<T>(gamma)
    }

    pub fn closed_form(gamma: usize, d: usize) -> Result<Self> {
        Self::check(gamma, d)?;
        if d.is_multiple_of(2) {
            return Err(Error::Unsupported(
                "closed-form Sobolev spline needs odd d".into(),
            ));
        }
        let nu2 = gamma - d;
        let n = (nu2 - 1) / 2;
        // r^{n+1/2} K_{n+1/2}(r) = √(π/2) e^{-r} Σ_j (n+j)!/(j!(n-j)!) 2^{-j} r^{n-j}
        let mut c = vec![BigRational::zero(); n + 1];
        for j in 0..=n {
            c[n - j] = factorial(n + j) / (factorial(j) * factorial(n - j)) / int(1 << j);
        }
        let exact_poly = Poly::new(c);
        let root = (T::PI() / T::lit(2.0)).sqrt();
        let poly = exact_poly.coeffs().iter().map(|q| to_real::<T>(q) * root).collect();
        Ok(Self {
            gamma,
            d,
            nu2,
            scale: Self::scale_for(gamma),
            eval: SobolevEval::ClosedForm { poly, exact_poly },
        })
    }

    /// Quadrature path; with `tabulate` the profile is sampled at spacing
    /// 0.01 on `[0, 40]` and interpolated by cubic Hermite.
    pub fn numeric(gamma: usize, d: usize, tabulate: bool) -> Result<Self> {
        Self::check(gamma, d)?;
        let nu2 = gamma - d;
        let table = tabulate.then(|| HermiteTable::build(nu2, T::lit(0.01), 4000));
        Ok(Self {
            gamma,
            d,
            nu2,
            scale: Self::scale_for(gamma),
            eval: SobolevEval::Numeric { table },
        })
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    /// `ν = (γ - d)/2`.
    pub fn nu(&self) -> T {
        T::of_usize(self.nu2) / T::lit(2.0)
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.eval, SobolevEval::ClosedForm { .. })
    }

    /// `r^ν K_ν(r)` without the normalizing constant.
    fn scaled_k(&self, r: T) -> T {
        match &self.eval {
            SobolevEval::ClosedForm { poly, .. } => (-r).exp() * horner(poly, r),
            SobolevEval::Numeric { table } => match table {
                Some(t) if r <= t.r_max() => t.eval(r),
                _ => scaled_bessel_k(self.nu(), r),
            },
        }
    }
}

/// `(1+r²)^{-γ/2}`.
pub fn sobolev_hat<T: Real>(gamma: usize, r: T) -> T {
    (T::one() + r * r).powf(-T::of_usize(gamma) / T::lit(2.0))
}

impl<T: Real> RadialKernel<T> for SobolevSpline<T> {
    fn dim(&self) -> usize {
        self.d
    }

    fn id(&self) -> KernelId {
        KernelId {
            family: "sobolev".into(),
            d: self.d,
            k_or_gamma: self.gamma,
        }
    }

    fn profile(&self, r: T) -> T {
        self.scale * self.scaled_k(r.abs())
    }

    fn taylor(&self, r0: T, order: usize) -> Result<Vec<T>> {
        match &self.eval {
            SobolevEval::ClosedForm { exact_poly, poly } => {
                if r0 == T::zero() {
                    // exact: e^{-r} P(r) = Σ_n r^n Σ_{i+j=n} p_i (-1)^j / j!
                    let mut out = Vec::with_capacity(order + 1);
                    for n in 0..=order {
                        let mut s = BigRational::zero();
                        for i in 0..=n.min(exact_poly.coeffs().len().saturating_sub(1)) {
                            let j = n - i;
                            let sign = if j % 2 == 0 { int(1) } else { int(-1) };
                            s += exact_poly.coeff(i) * sign / factorial(j);
                        }
                        let root = (T::PI() / T::lit(2.0)).sqrt();
                        out.push(to_real::<T>(&s) * root * self.scale);
                    }
                    return Ok(out);
                }
                let shifted = Poly::new(poly.clone()).taylor_shift(&r0);
                let e0 = (-r0).exp();
                let mut ex = Vec::with_capacity(order + 1);
                let mut term = e0;
                for j in 0..=order {
                    ex.push(term);
                    term = -term / T::of_usize(j + 1);
                }
                Ok((0..=order)
                    .map(|n| {
                        (0..=n).map(|i| shifted.coeff(i) * ex[n - i]).fold(T::zero(), |a, b| a + b) * self.scale
                    })
                    .collect())
            }
            SobolevEval::Numeric { table } => {
                if order == 0 {
                    return Ok(vec![self.profile(r0)]);
                }
                match table {
                    Some(t) if order == 1 && r0 <= t.r_max() => {
                        Ok(vec![self.profile(r0), self.scale * t.slope(r0)])
                    }
                    _ => Err(Error::UnsupportedOrder {
                        order,
                        reason: "numeric Sobolev spline only provides values and first derivatives from its table"
                            .into(),
                    }),
                }
            }
        }
    }

    fn support(&self) -> Option<T> {
        None
    }

    fn effective_radius(&self, tol: T) -> T {
        // profile is decreasing: bisect on [0, 1000]
        let target = tol * self.profile(T::zero());
        let (mut lo, mut hi) = (T::zero(), T::lit(1000.0));
        for _ in 0..80 {
            let mid = (lo + hi) / T::lit(2.0);
            if self.profile(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    fn breakpoints(&self) -> Vec<T> {
        Vec::new()
    }
}

/// Cubic Hermite table of `r^ν K_ν(r)` on a uniform grid from 0.
#[derive(Clone, Debug)]
pub struct HermiteTable<T> {
    step: T,
    values: Vec<T>,
    slopes: Vec<T>,
}

impl<T: Real> HermiteTable<T> {
    /// `nu2 = 2ν`; samples `0, step, …, cells·step`.
    fn build(nu2: usize, step: T, cells: usize) -> Self {
        let nu = T::of_usize(nu2) / T::lit(2.0);
        let nu_m1 = (nu - T::one()).abs();
        let mut values = Vec::with_capacity(cells + 1);
        let mut slopes = Vec::with_capacity(cells + 1);
        for i in 0..=cells {
            let r = step * T::of_usize(i);
            values.push(scaled_bessel_k(nu, r));
            // d/dr r^ν K_ν = -r^ν K_{ν-1} = -r^{ν-|ν-1|} (r^{|ν-1|} K_{|ν-1|})
            let s = if i == 0 {
                if nu2 == 1 {
                    -(T::PI() / T::lit(2.0)).sqrt()
                } else {
                    T::zero()
                }
            } else {
                -r.powf(nu - nu_m1) * scaled_bessel_k(nu_m1, r)
            };
            slopes.push(s);
        }
        Self { step, values, slopes }
    }

    fn r_max(&self) -> T {
        self.step * T::of_usize(self.values.len() - 1)
    }

    fn locate(&self, r: T) -> (usize, T) {
        let u = r / self.step;
        let i = u.floor().to_usize().unwrap_or(0).min(self.values.len() - 2);
        (i, u - T::of_usize(i))
    }

    fn eval(&self, r: T) -> T {
        let (i, t) = self.locate(r);
        let h = self.step;
        let (t2, t3) = (t * t, t * t * t);
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;
        h00 * self.values[i] + h10 * h * self.slopes[i] + h01 * self.values[i + 1] + h11 * h * self.slopes[i + 1]
    }

    fn slope(&self, r: T) -> T {
        let (i, t) = self.locate(r);
        let h = self.step;
        let t2 = t * t;
        let six = T::lit(6.0);
        let d00 = six * t2 - six * t;
        let d10 = T::lit(3.0) * t2 - T::lit(4.0) * t + T::one();
        let d01 = -d00;
        let d11 = T::lit(3.0) * t2 - T::lit(2.0) * t;
        (d00 * self.values[i] + d01 * self.values[i + 1]) / h + d10 * self.slopes[i] + d11 * self.slopes[i + 1]
    }
}

// ---------------------------------------------------------------------------

/// `e^{-‖x‖²/2}`, its own Fourier transform under the symmetric convention.
#[derive(Clone, Copy, Debug)]
pub struct Gaussian {
    d: usize,
}

impl Gaussian {
    pub fn new(d: usize) -> Self {
        Self { d }
    }
}

impl<T: Real> RadialKernel<T> for Gaussian {
    fn dim(&self) -> usize {
        self.d
    }

    fn id(&self) -> KernelId {
        KernelId {
            family: "gaussian".into(),
            d: self.d,
            k_or_gamma: 0,
        }
    }

    fn profile(&self, r: T) -> T {
        (-r * r / T::lit(2.0)).exp()
    }

    fn taylor(&self, r0: T, order: usize) -> Result<Vec<T>> {
        // e^{-(r0+u)²/2} = e^{-r0²/2} · e^{-r0 u} · e^{-u²/2}
        let n = order + 1;
        let mut a = vec![T::zero(); n];
        let mut term = T::one();
        for (j, v) in a.iter_mut().enumerate() {
            *v = term;
            term = -term * r0 / T::of_usize(j + 1);
        }
        let mut b = vec![T::zero(); n];
        let mut term = T::one();
        for i in 0..n {
            if 2 * i >= n {
                break;
            }
            b[2 * i] = term;
            term = -term / (T::lit(2.0) * T::of_usize(i + 1));
        }
        let e0 = self.profile(r0);
        Ok((0..n)
            .map(|m| (0..=m).map(|i| a[i] * b[m - i]).fold(T::zero(), |x, y| x + y) * e0)
            .collect())
    }

    fn support(&self) -> Option<T> {
        None
    }

    fn effective_radius(&self, tol: T) -> T {
        (-T::lit(2.0) * tol.ln()).sqrt()
    }

    fn breakpoints(&self) -> Vec<T> {
        Vec::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn hat_function() {
        let w = wendland_construct(1, 0).unwrap();
        assert_eq!(w.coeffs(), &[int(1), int(-1)]);
        let k: Wendland<f64> = w.to_kernel();
        assert_eq!(kernel_eval(&k, &[0.25]), 0.75);
        assert_eq!(kernel_eval(&k, &[-1.5]), 0.0);
    }

    #[test]
    fn compact_support_and_boundary_smoothness() {
        for d in 1..=WENDLAND_MAX_D {
            for k in 0..=3 {
                let w = wendland_construct(d, k).unwrap();
                assert!(w.boundary_smooth(), "d={d} k={k}");
                assert!(w.coeffs()[0].is_positive());
                assert!(w.eval_exact(&int(1)).is_zero());
            }
        }
    }

    #[test]
    fn factored_form_d3_k2() {
        let f = wendland_construct(3, 2).unwrap().factored();
        assert_eq!(f.ell, 6);
        let q: Vec<i64> = f.q.iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(q, vec![3, 18, 35]);
        assert_eq!(f.scale, rat(1, 1680));
    }

    #[test]
    fn guards() {
        assert!(matches!(wendland_construct(0, 1), Err(Error::InvalidParameter(_))));
        assert!(matches!(wendland_construct(10, 1), Err(Error::GuardExceeded(_))));
        assert!(matches!(wendland_construct(3, 6), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn proportionality_is_scale_only() {
        let a = Poly::new(vec![int(2), int(4)]);
        let b = Poly::new(vec![int(1), int(2)]);
        assert_eq!(proportionality_factor(&a, &b), Some(int(2)));
        assert_eq!(proportionality_factor(&b.scale(&int(-1)), &b), None);
        assert_eq!(proportionality_factor(&Poly::new(vec![int(2), int(3)]), &b), None);
    }

    #[test]
    fn sobolev_low_orders() {
        let g2 = SobolevSpline::<f64>::new(2, 1).unwrap();
        let c = (std::f64::consts::PI / 2.0).sqrt();
        for &x in &[0.0, 0.5, 1.0, 2.0] {
            assert!((kernel_eval(&g2, &[x]) - c * (-x).exp()).abs() < 1e-15);
        }
        // γ = 4, d = 1: ν = 3/2, scale 1/2
        let g4 = SobolevSpline::<f64>::new(4, 1).unwrap();
        assert!((g4.profile(1.0) - 0.5 * c * (-1f64).exp() * 2.0).abs() < 1e-15);
        assert!(SobolevSpline::<f64>::new(3, 1).is_err());
        assert!(SobolevSpline::<f64>::new(2, 2).is_err());
    }

    #[test]
    fn sobolev_table_matches_closed_form() {
        for &(gamma, d) in &[(2, 1), (4, 1), (4, 3), (6, 3)] {
            let cf = SobolevSpline::<f64>::closed_form(gamma, d).unwrap();
            let nu = SobolevSpline::<f64>::numeric(gamma, d, true).unwrap();
            let raw = SobolevSpline::<f64>::numeric(gamma, d, false).unwrap();
            for i in 0..=100 {
                let r = 0.1 * 100f64.powf(i as f64 / 100.0);
                let e = cf.profile(r);
                assert!((nu.profile(r) - e).abs() <= 1e-8 * e, "γ={gamma} d={d} r={r}");
                assert!((raw.profile(r) - e).abs() <= 1e-12 * e);
            }
        }
    }

    #[test]
    fn even_dimension_uses_table() {
        let g = SobolevSpline::<f64>::new(4, 2).unwrap();
        assert!(!g.is_closed_form());
        // γ = 4, d = 2: G = (1/2) r K_1(r); G(0) = 1/2
        assert!((g.profile(0.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn derivatives_at_origin() {
        let w = Wendland::<f64>::new(1, 1).unwrap();
        assert_eq!(kernel_derivative(&w, &[0.0], &[1]).unwrap(), 0.0);
        // ∝ 1 - 6r² + 8r³ - 3r⁴: second derivative at 0 is -12 φ(0)
        let d2 = kernel_derivative(&w, &[0.0], &[2]).unwrap();
        assert!((d2 / w.profile(0.0) + 12.0).abs() < 1e-13);
        assert!(matches!(
            kernel_derivative(&w, &[0.0], &[3]),
            Err(Error::UnsupportedOrder { .. })
        ));
        let w3 = Wendland::<f64>::new(3, 1).unwrap();
        assert_eq!(kernel_derivative(&w3, &[1.2, 0.0, 0.3], &[2, 0, 0]).unwrap(), 0.0);
        let g4 = SobolevSpline::<f64>::new(4, 1).unwrap();
        assert!(kernel_derivative(&g4, &[0.0], &[2]).is_ok());
        assert!(kernel_derivative(&g4, &[0.0], &[3]).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let w = Wendland::<f64>::new(3, 2).unwrap();
        let x = [0.2, -0.3, 0.1];
        let h = 1e-5;
        let d = kernel_derivative(&w, &x, &[1, 1, 0]).unwrap();
        let f = |a: f64, b: f64| kernel_eval(&w, &[x[0] + a, x[1] + b, x[2]]);
        let fd = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
        assert!((d - fd).abs() < 1e-5, "{d} vs {fd}");
        let g = Gaussian::new(2);
        let v: f64 = kernel_derivative(&g, &[0.3, 0.4], &[0, 2]).unwrap();
        let e = (0.16 - 1.0) * (-0.125f64).exp();
        assert!((v - e).abs() < 1e-14);
    }
}
