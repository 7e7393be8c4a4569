//! Bessel-type special functions needed by radial Fourier transforms and
//! Sobolev splines.

use crate::scalar::Real;

/// `Γ(x)` for `x = half2 / 2 > 0` (integers and half-integers only).
pub fn gamma_half<T: Real>(half2: usize) -> T {
    assert!(half2 > 0);
    if half2.is_multiple_of(2) {
        // (n-1)!
        (1..half2 / 2).fold(T::one(), |acc, i| acc * T::of_usize(i))
    } else {
        // Γ(1/2) = √π, Γ(x+1) = xΓ(x)
        let mut g = T::PI().sqrt();
        let mut x2 = 1;
        while x2 < half2 {
            g = g * T::of_usize(x2) / T::lit(2.0);
            x2 += 2;
        }
        g
    }
}

/// `Λ_d(z) = z^{-ν} J_ν(z)` with `ν = (d-2)/2`, the radial kernel of the
/// `d`-dimensional Fourier transform under the symmetric convention.
///
/// `Λ_1(z) = √(2/π) cos z`, `Λ_3(z) = √(2/π) sin z / z`.
pub fn radial_kernel<T: Real>(d: usize, z: T) -> T {
    assert!(d >= 1);
    let z = z.abs();
    let n_eff = T::of_usize(d / 2 + 2);
    if z < n_eff || z < T::lit(2.0) {
        return radial_kernel_series(d, z);
    }
    if d % 2 == 1 {
        // d = 2n+1: Λ = √(2/π) z^{1-n} j_{n-1}(z) with j_{-1}(z) = cos z / z
        let n = (d - 1) / 2;
        let c = (T::lit(2.0) / T::PI()).sqrt();
        let (s, co) = z.sin_cos();
        let mut jm1 = co / z; // j_{-1}
        let mut j0 = s / z; // j_0
        if n == 0 {
            return c * z * jm1;
        }
        for l in 0..n.saturating_sub(1) {
            // j_{l+1} = (2l+1)/z j_l - j_{l-1}
            let next = T::of_usize(2 * l + 1) / z * j0 - jm1;
            jm1 = j0;
            j0 = next;
        }
        c * z.powi(1 - n as i32) * j0
    } else {
        let nu = (d - 2) / 2;
        bessel_j_int(nu, z) / z.powi(nu as i32)
    }
}

/// Power series of `z^{-ν} J_ν(z)`; fine for moderate `z`.
fn radial_kernel_series<T: Real>(d: usize, z: T) -> T {
    // ν + 1 = d/2, so Γ(ν+1) = gamma_half(d) and 2^ν = 2^{(d-2)/2}
    let two_nu = T::lit(2.0).powf(T::lit((d as f64 - 2.0) / 2.0));
    let mut term = T::one() / (two_nu * gamma_half::<T>(d));
    let q = -(z * z) / T::lit(4.0);
    let nu1 = T::lit(d as f64 / 2.0);
    let mut sum = term;
    for k in 1..200 {
        term = term * q / (T::of_usize(k) * (nu1 + T::of_usize(k - 1)));
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() * T::lit(0.01) {
            break;
        }
    }
    sum
}

/// `J_n(z)` for integer `n ≥ 0` via the trapezoid rule on Bessel's integral,
/// which converges geometrically for periodic analytic integrands.
pub fn bessel_j_int<T: Real>(n: usize, z: T) -> T {
    let m = (z.abs().as_f64() as usize + n + 40).next_power_of_two();
    let h = T::PI() * T::lit(2.0) / T::of_usize(m);
    let mut s = T::zero();
    for i in 0..m {
        let tau = h * T::of_usize(i);
        s = s + (T::of_usize(n) * tau - z * tau.sin()).cos();
    }
    s / T::of_usize(m)
}

/// `r^ν K_ν(r)` for real `ν ≥ 0`, `r ≥ 0`, by the trapezoid rule on
/// `∫_0^∞ e^{-r cosh τ} cosh(ντ) dτ`.
///
/// At `r = 0` returns the limit `2^{ν-1} Γ(ν)` (infinite for `ν = 0`).
pub fn scaled_bessel_k<T: Real>(nu: T, r: T) -> T {
    let nu = nu.abs();
    if r == T::zero() {
        if nu == T::zero() {
            return T::infinity();
        }
        let half2 = (nu * T::lit(2.0)).round().to_usize().unwrap_or(1);
        return T::lit(2.0).powf(nu - T::one()) * gamma_half::<T>(half2);
    }
    let h = T::lit(0.05);
    let mut sum = T::lit(0.5) * (-r).exp();
    let mut i = 1usize;
    loop {
        let tau = h * T::of_usize(i);
        let v = (-r * tau.cosh() + nu * tau).exp() * T::lit(0.5)
            + (-r * tau.cosh() - nu * tau).exp() * T::lit(0.5);
        sum = sum + v;
        let past_peak = r * tau.sinh() > nu;
        if past_peak && v <= sum * T::epsilon() * T::lit(1e-3) {
            break;
        }
        if i > 100_000 {
            break;
        }
        i += 1;
    }
    sum * h * r.powf(nu)
}
