//! Dense univariate polynomials over any coefficient ring.
//!
//! The same type carries exact rational Wendland profiles (`Poly<BigRational>`),
//! Gaussian-rational partial-fraction identities (`Poly<GaussRat>`) and their
//! floating-point images (`Poly<f64>`).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{FromPrimitive, One, Zero};

/// Coefficient ring for [`Poly`].
pub trait Coeff: Clone + PartialEq + Debug + Zero + One + Sub<Output = Self> + Neg<Output = Self> {}
impl<C: Clone + PartialEq + Debug + Zero + One + Sub<Output = C> + Neg<Output = C>> Coeff for C {}

/// Coefficients in ascending powers; trailing zeros are trimmed so that
/// structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// `c·x^n`
    pub fn monomial(c: C, n: usize) -> Self {
        let mut v = vec![C::zero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    /// `x + a`
    pub fn linear(a: C) -> Self {
        Self::new(vec![a, C::one()])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `self · x^n`
    pub fn shift_up(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![C::zero(); n];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<C: Coeff + FromPrimitive> Poly<C> {
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * C::from_usize(i).expect("index fits"))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Taylor coefficients about `a`: returns `q` with `q(u) = self(a + u)`.
    ///
    /// Repeated synthetic division by `(x - a)`.
    pub fn taylor_shift(&self, a: &C) -> Self {
        let mut work = self.coeffs.clone();
        let n = work.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = work[j + 1].clone() * a.clone();
                work[j] = work[j].clone() + t;
            }
        }
        Self::new(work)
    }
}

impl<C: Coeff + FromPrimitive + Div<Output = C>> Poly<C> {
    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut v = vec![C::zero()];
        v.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() / C::from_usize(i + 1).expect("index fits")),
        );
        Self::new(v)
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, o: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, o: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, o: &Poly<C>) -> Poly<C> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![C::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// Power-series reciprocal `1/a(u)` truncated to `n` terms. Requires `a(0) != 0`.
pub fn series_reciprocal<C: Coeff + Div<Output = C>>(a: &Poly<C>, n: usize) -> Vec<C> {
    let a0 = a.coeff(0);
    assert!(!a0.is_zero(), "series reciprocal needs a nonzero constant term");
    let inv0 = C::one() / a0;
    let mut b: Vec<C> = Vec::with_capacity(n);
    for k in 0..n {
        if k == 0 {
            b.push(inv0.clone());
            continue;
        }
        let mut s = C::zero();
        for i in 1..=k {
            let ai = a.coeff(i);
            if !ai.is_zero() {
                s = s + ai * b[k - i].clone();
            }
        }
        b.push(-(s * inv0.clone()));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use num_rational::BigRational;

    fn p(v: &[i64]) -> Poly<BigRational> {
        Poly::new(v.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn arithmetic_and_trim() {
        let a = p(&[1, 1]);
        assert_eq!(&a * &a, p(&[1, 2, 1]));
        assert_eq!(&a - &a, Poly::zero());
        assert_eq!(p(&[1, 0, 0]).degree(), Some(0));
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let q = p(&[3, -2, 0, 5]);
        let a = rat(2, 3);
        let s = q.taylor_shift(&a);
        let u = rat(-7, 5);
        assert_eq!(s.eval(&u), q.eval(&(a + u)));
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let q = p(&[0, 4, -6, 1]);
        assert_eq!(q.derivative().antiderivative(), q);
    }

    #[test]
    fn reciprocal_series_of_one_plus_u() {
        let b = series_reciprocal(&p(&[1, 1]), 5);
        assert_eq!(b, vec![int(1), int(-1), int(1), int(-1), int(1)]);
    }
}
