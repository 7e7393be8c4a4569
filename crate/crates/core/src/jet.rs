//! Truncated multivariate Taylor polynomials, used to push radial profiles
//! through `r = ‖x‖₂` and read off partial derivatives.

use std::collections::HashMap;
use std::sync::Arc;

use crate::scalar::Real;

/// Multi-index layout for `dim` variables up to total degree `order`.
#[derive(Debug)]
pub struct JetSpace {
    dim: usize,
    order: usize,
    indices: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
    // (i, j, target) with |α_i| + |α_j| ≤ order
    products: Vec<(usize, usize, usize)>,
}

impl JetSpace {
    pub fn new(dim: usize, order: usize) -> Arc<Self> {
        let mut indices = Vec::new();
        for deg in 0..=order {
            push_compositions(dim, deg, &mut vec![0; dim], 0, &mut indices);
        }
        let lookup: HashMap<Vec<usize>, usize> = indices
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let mut products = Vec::new();
        for (i, a) in indices.iter().enumerate() {
            let da: usize = a.iter().sum();
            for (j, b) in indices.iter().enumerate() {
                let db: usize = b.iter().sum();
                if da + db > order {
                    continue;
                }
                let c: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                products.push((i, j, lookup[&c]));
            }
        }
        Arc::new(Self {
            dim,
            order,
            indices,
            lookup,
            products,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn index_of(&self, alpha: &[usize]) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }
}

fn push_compositions(dim: usize, left: usize, cur: &mut Vec<usize>, pos: usize, out: &mut Vec<Vec<usize>>) {
    if pos + 1 == dim {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for v in (0..=left).rev() {
        cur[pos] = v;
        push_compositions(dim, left - v, cur, pos + 1, out);
    }
}

/// A truncated Taylor expansion `Σ c_α δ^α` about some base point.
#[derive(Clone, Debug)]
pub struct Jet<T> {
    space: Arc<JetSpace>,
    coeffs: Vec<T>,
}

impl<T: Real> Jet<T> {
    pub fn constant(space: &Arc<JetSpace>, c: T) -> Self {
        let mut coeffs = vec![T::zero(); space.len()];
        coeffs[0] = c;
        Self {
            space: space.clone(),
            coeffs,
        }
    }

    /// The coordinate `x_i = base + δ_i`.
    pub fn variable(space: &Arc<JetSpace>, i: usize, base: T) -> Self {
        let mut j = Self::constant(space, base);
        if space.order >= 1 {
            let mut a = vec![0; space.dim];
            a[i] = 1;
            j.coeffs[space.lookup[&a]] = T::one();
        }
        j
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    pub fn coeff(&self, alpha: &[usize]) -> T {
        self.space
            .index_of(alpha)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(T::zero)
    }

    /// `∂^α` at the base point: `α! · c_α`.
    pub fn derivative(&self, alpha: &[usize]) -> T {
        let fact = alpha
            .iter()
            .flat_map(|&a| 1..=a)
            .fold(T::one(), |acc, i| acc * T::of_usize(i));
        self.coeff(alpha) * fact
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut coeffs = vec![T::zero(); self.coeffs.len()];
        for &(i, j, k) in &self.space.products {
            let (a, b) = (self.coeffs[i], o.coeffs[j]);
            if a != T::zero() && b != T::zero() {
                coeffs[k] = coeffs[k] + a * b;
            }
        }
        Self {
            space: self.space.clone(),
            coeffs,
        }
    }

    /// `g ∘ self` where `taylor[j]` is the `j`-th Taylor coefficient of `g`
    /// at `self.value()`. Missing high coefficients are taken as zero.
    pub fn compose(&self, taylor: &[T]) -> Self {
        let mut e = self.clone();
        e.coeffs[0] = T::zero();
        let mut out = Self::constant(&self.space, taylor.first().copied().unwrap_or_else(T::zero));
        let mut pow = Self::constant(&self.space, T::one());
        for &c in taylor.iter().take(self.space.order + 1).skip(1) {
            pow = pow.mul(&e);
            out = out.add(&pow.scale(c));
        }
        out
    }

    /// Square root of a jet with positive value.
    pub fn sqrt(&self) -> Self {
        let s0 = self.value();
        let n = self.space.order;
        // binom(1/2, j) s0^{1/2 - j}
        let mut taylor = Vec::with_capacity(n + 1);
        let mut b = T::one();
        let mut p = s0.sqrt();
        for j in 0..=n {
            taylor.push(b * p);
            b = b * (T::lit(0.5) - T::of_usize(j)) / T::of_usize(j + 1);
            p = p / s0;
        }
        self.compose(&taylor)
    }
}
