//! Truncated Taylor series ("jets") for exact-to-roundoff derivatives of the
//! smooth bump and ramp profiles.
//!
//! A jet of order `n` at `t₀` stores `c₀..c_n` with
//! `f(t₀ + ε) = Σ c_k ε^k + O(ε^{n+1})`; the `k`-th derivative is `k!·c_k`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::{factorial, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    c: Vec<T>,
}

impl<T: Real> Jet<T> {
    /// The constant `a` to order `n`.
    pub fn constant(a: T, order: usize) -> Self {
        let mut c = vec![T::zero(); order + 1];
        c[0] = a;
        Self { c }
    }

    /// The independent variable `t` expanded at `t₀`.
    pub fn variable(t0: T, order: usize) -> Self {
        let mut c = vec![T::zero(); order + 1];
        c[0] = t0;
        if order >= 1 {
            c[1] = T::one();
        }
        Self { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    pub fn coefficients(&self) -> &[T] {
        &self.c
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> T {
        self.c[k] * factorial::<T>(k)
    }

    /// `a·self + b` for scalars `a`, `b`.
    pub fn affine(&self, a: T, b: T) -> Self {
        let mut c: Vec<T> = self.c.iter().map(|&x| x * a).collect();
        c[0] = c[0] + b;
        Self { c }
    }

    pub fn exp(&self) -> Self {
        let n = self.order();
        let mut e = vec![T::zero(); n + 1];
        e[0] = self.c[0].exp();
        for k in 1..=n {
            let mut s = T::zero();
            for j in 1..=k {
                s = s + T::from_usize_lossy(j) * self.c[j] * e[k - j];
            }
            e[k] = s / T::from_usize_lossy(k);
        }
        Self { c: e }
    }

    pub fn recip(&self) -> Self {
        Jet::constant(T::one(), self.order()) / self.clone()
    }
}

impl<T: Real> Add for Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: Self) -> Self {
        Jet { c: self.c.iter().zip(&rhs.c).map(|(&a, &b)| a + b).collect() }
    }
}

impl<T: Real> Sub for Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: Self) -> Self {
        Jet { c: self.c.iter().zip(&rhs.c).map(|(&a, &b)| a - b).collect() }
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Self {
        Jet { c: self.c.iter().map(|&a| -a).collect() }
    }
}

impl<T: Real> Mul for Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: Self) -> Self {
        let n = self.order().min(rhs.order());
        let c = (0..=n)
            .map(|k| (0..=k).fold(T::zero(), |s, j| s + self.c[j] * rhs.c[k - j]))
            .collect();
        Jet { c }
    }
}

impl<T: Real> Div for Jet<T> {
    type Output = Jet<T>;
    fn div(self, rhs: Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut q = vec![T::zero(); n + 1];
        for k in 0..=n {
            let mut s = self.c[k];
            for j in 1..=k {
                s = s - rhs.c[j] * q[k - j];
            }
            q[k] = s / rhs.c[0];
        }
        Jet { c: q }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_variable() {
        let t = Jet::<f64>::variable(0.3, 5);
        let e = t.exp();
        for k in 0..=5 {
            assert!((e.derivative(k) - 0.3f64.exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn quotient_rule() {
        // f(t) = 1/(1 - t) at t = 0.5: f^{(k)} = k!/(1-t)^{k+1}.
        let t = Jet::<f64>::variable(0.5, 4);
        let f = Jet::constant(1.0, 4) / (Jet::constant(1.0, 4) - t);
        for k in 0..=4 {
            let expect = factorial::<f64>(k) / 0.5f64.powi(k as i32 + 1);
            assert!((f.derivative(k) - expect).abs() < 1e-10 * expect);
        }
    }

    #[test]
    fn product_matches_leibniz() {
        let t = Jet::<f64>::variable(1.2, 3);
        let f = t.clone() * t.clone() * t; // t³
        assert!((f.derivative(1) - 3.0 * 1.44).abs() < 1e-13);
        assert!((f.derivative(2) - 6.0 * 1.2).abs() < 1e-13);
        assert!((f.derivative(3) - 6.0).abs() < 1e-13);
    }
}
