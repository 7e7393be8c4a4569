//! Partial fractions of `1/(s^{m+1}(1+s²)^{m+1})` and the real functions
//! `f_m` whose Laplace transforms they are.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, to_real, GaussRat};
use crate::poly::{series_reciprocal, Poly};
use crate::scalar::Real;

pub const PARTIAL_FRACTION_MAX_M: usize = 12;

/// `1/(s^{m+1}(1+s²)^{m+1}) = Σ_j α_j/s^{j+1} + β_j/(s+i)^{j+1} + γ_j/(s-i)^{j+1}`
/// with `γ_j = conj(β_j)`, all exact.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractionTable {
    m: usize,
    alpha: Vec<BigRational>,
    beta: Vec<GaussRat>,
}

impl PartialFractionTable {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alpha(&self) -> &[BigRational] {
        &self.alpha
    }

    /// Coefficients at the pole `s = -i`.
    pub fn beta(&self) -> &[GaussRat] {
        &self.beta
    }

    /// Coefficients at the pole `s = +i`.
    pub fn gamma(&self) -> Vec<GaussRat> {
        self.beta.iter().map(GaussRat::conj).collect()
    }

    /// Clears denominators: returns `Σ (numerator terms)` as a polynomial in `s`,
    /// which equals 1 exactly when the table is right.
    pub fn multiply_back(&self) -> Poly<GaussRat> {
        let m = self.m;
        let s = Poly::monomial(GaussRat::one(), 1);
        let s_plus_i = Poly::linear(GaussRat::i());
        let s_minus_i = Poly::linear(-GaussRat::i());
        let one_plus_s2 = Poly::new(vec![GaussRat::one(), GaussRat::zero(), GaussRat::one()]);
        let sm1 = s.pow(m + 1);
        let mut total = Poly::zero();
        let gamma = self.gamma();
        for (j, ((alpha, beta), g)) in self.alpha.iter().zip(&self.beta).zip(&gamma).enumerate().take(m + 1) {
            let a = Poly::constant(GaussRat::real(alpha.clone()));
            let t = &(&a * &s.pow(m - j)) * &one_plus_s2.pow(m + 1);
            total = &total + &t;
            let b = Poly::constant(beta.clone());
            let t = &(&(&b * &sm1) * &s_plus_i.pow(m - j)) * &s_minus_i.pow(m + 1);
            total = &total + &t;
            let g = Poly::constant(g.clone());
            let t = &(&(&g * &sm1) * &s_minus_i.pow(m - j)) * &s_plus_i.pow(m + 1);
            total = &total + &t;
        }
        total
    }

    /// `α_j = 0` for odd `j + m`; `β_j` real for even `j + m`, imaginary for odd.
    pub fn parity_holds(&self) -> bool {
        let m = self.m;
        (0..=m).all(|j| {
            if (j + m) % 2 == 1 {
                self.alpha[j].is_zero() && self.beta[j].is_imaginary()
            } else {
                self.beta[j].is_real()
            }
        })
    }
}

/// Exact table by residue extraction: the Laurent coefficients at each pole
/// come from a power-series reciprocal of the remaining factor, Taylor-shifted
/// to the pole.
pub fn partial_fractions(m: usize) -> Result<PartialFractionTable> {
    if m > PARTIAL_FRACTION_MAX_M {
        return Err(Error::GuardExceeded(format!(
            "m={m} exceeds {PARTIAL_FRACTION_MAX_M}"
        )));
    }
    let one = GaussRat::one();
    let i = GaussRat::i();
    // pole 0: 1/(1+s²)^{m+1} = Σ q_n s^n; α_j = q_{m-j}
    let rest0 = Poly::new(vec![one.clone(), GaussRat::zero(), one.clone()]).pow(m + 1);
    let q0 = series_reciprocal(&rest0, m + 1);
    let alpha: Vec<BigRational> = (0..=m).map(|j| q0[m - j].re.clone()).collect();
    // pole -i, u = s + i: 1/((u - i)^{m+1}(u - 2i)^{m+1})
    let a = Poly::linear(-i.clone()).pow(m + 1);
    let b = Poly::linear(-(i.clone() + i)).pow(m + 1);
    let q1 = series_reciprocal(&(&a * &b), m + 1);
    let beta = (0..=m).map(|j| q1[m - j].clone()).collect();
    Ok(PartialFractionTable { m, alpha, beta })
}

/// Exact Maclaurin coefficients `e_N` of `f_m`, for `N < n_terms`.
///
/// `e_N = [N ≤ m] α_N/N! + Σ_j 2 Re(β_j (-i)^{N-j}) / (j! (N-j)!)`.
pub fn f_m_series(table: &PartialFractionTable, n_terms: usize) -> Vec<BigRational> {
    let m = table.m;
    (0..n_terms)
        .map(|n| {
            let mut e = if n <= m {
                table.alpha[n].clone() / factorial(n)
            } else {
                BigRational::zero()
            };
            for j in 0..=m.min(n) {
                let b = &table.beta[j];
                let two = BigRational::from_integer(2.into());
                // 2 Re(β (-i)^p)
                let re = match (n - j) % 4 {
                    0 => &b.re * &two,
                    1 => &b.im * &two,
                    2 => -(&b.re * &two),
                    _ => -(&b.im * &two),
                };
                e += re / (factorial(j) * factorial(n - j));
            }
            e
        })
        .collect()
}

/// Floating-point evaluator of `f_m(r) = Σ_j r^j/j! (α_j + 2Re β_j cos r + 2Im β_j sin r)`.
///
/// Below `switch` the Maclaurin series (which starts at `r^{3m+2}`) is used;
/// the trigonometric form cancels catastrophically for small `r`.
#[derive(Clone, Debug)]
pub struct FmEvaluator<T> {
    m: usize,
    // per j: [α_j/j!, 2Re β_j/j!, 2Im β_j/j!]
    direct: Vec<[T; 3]>,
    // e_{3m+2+i}
    series: Vec<T>,
    switch: T,
}

impl<T: Real> FmEvaluator<T> {
    pub fn new(table: &PartialFractionTable) -> Self {
        let m = table.m;
        let two = BigRational::from_integer(2.into());
        let direct = (0..=m)
            .map(|j| {
                let f = factorial(j);
                let b = &table.beta[j];
                [
                    to_real(&(table.alpha[j].clone() / &f)),
                    to_real(&(&b.re * &two / &f)),
                    to_real(&(&b.im * &two / &f)),
                ]
            })
            .collect();
        let switch = 8.0 + 2.0 * m as f64;
        let lead = 3 * m + 2;
        let n_terms = lead + (std::f64::consts::E * switch).ceil() as usize + 60;
        let series = f_m_series(table, n_terms)[lead..].iter().map(to_real).collect();
        Self {
            m,
            direct,
            series,
            switch: T::lit(switch),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Radius where evaluation switches from series to the trigonometric form.
    pub fn switch_radius(&self) -> T {
        self.switch
    }

    pub fn eval(&self, r: T) -> T {
        if r < self.switch {
            self.eval_series(r)
        } else {
            self.eval_direct(r)
        }
    }

    /// `f_m(r) / r^{3m+2}`, finite at `r = 0`.
    pub fn eval_scaled(&self, r: T) -> T {
        if r < self.switch {
            self.scaled_series(r)
        } else {
            self.eval_direct(r) / r.powi(3 * self.m as i32 + 2)
        }
    }

    pub fn eval_direct(&self, r: T) -> T {
        let (s, c) = r.sin_cos();
        self.direct
            .iter()
            .rev()
            .fold(T::zero(), |acc, t| acc * r + t[0] + t[1] * c + t[2] * s)
    }

    pub fn eval_series(&self, r: T) -> T {
        self.scaled_series(r) * r.powi(3 * self.m as i32 + 2)
    }

    fn scaled_series(&self, r: T) -> T {
        self.series.iter().rev().fold(T::zero(), |acc, &e| acc * r + e)
    }
}
