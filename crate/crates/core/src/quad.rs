//! Gauss–Legendre quadrature rules.

use crate::scalar::Real;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Computed in `f64` by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `P_n(z)` and `P_n'(z)`.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}

/// Composite rule on `[a, b]` with `panels` equal panels of `n` points each.
pub fn composite<T: Real>(a: T, b: T, panels: usize, n: usize) -> Vec<(T, T)> {
    let (x, w) = gauss_legendre(n);
    let width = (b - a) / T::from_usize_lossy(panels);
    let half = width * T::lit(0.5);
    let mut out = Vec::with_capacity(panels * n);
    for p in 0..panels {
        let mid = a + width * (T::from_usize_lossy(p) + T::lit(0.5));
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + half * T::lit(*xi), half * T::lit(*wi)));
        }
    }
    out
}


/// Polynomial interpolant through Chebyshev points of the second kind on
/// `[a, b]`, evaluated with the barycentric formula.
#[derive(Clone, Debug)]
pub struct Chebyshev<T, V> {
    a: T,
    b: T,
    nodes: Vec<T>,
    weights: Vec<T>,
    values: Vec<V>,
}

/// The `n + 1` Chebyshev points `(a+b)/2 + (b−a)/2·cos(πj/n)` on `[a, b]`.
pub fn chebyshev_points<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    let mid = (a + b) * T::lit(0.5);
    let half = (b - a) * T::lit(0.5);
    (0..=n)
        .map(|j| mid + half * (T::PI() * T::from_usize_lossy(j) / T::from_usize_lossy(n)).cos())
        .collect()
}

impl<T: Real, V> Chebyshev<T, V>
where
    V: Copy + std::ops::Mul<T, Output = V> + std::ops::Add<Output = V>,
{
    /// Builds the interpolant from values at [`chebyshev_points`]`(a, b, n)`.
    pub fn new(a: T, b: T, values: Vec<V>) -> Self {
        let n = values.len() - 1;
        let nodes = chebyshev_points(a, b, n);
        let weights = (0..=n)
            .map(|j| {
                let s = if j % 2 == 0 { T::one() } else { -T::one() };
                if j == 0 || j == n {
                    s * T::lit(0.5)
                } else {
                    s
                }
            })
            .collect();
        Self { a, b, nodes, weights, values }
    }

    pub fn interval(&self) -> (T, T) {
        (self.a, self.b)
    }

    pub fn eval(&self, x: T) -> V {
        let mut num: Option<V> = None;
        let mut den = T::zero();
        for ((&xj, &wj), &vj) in self.nodes.iter().zip(&self.weights).zip(&self.values) {
            let diff = x - xj;
            if diff == T::zero() {
                return vj;
            }
            let c = wj / diff;
            num = Some(match num {
                None => vj * c,
                Some(acc) => acc + vj * c,
            });
            den = den + c;
        }
        num.expect("non-empty interpolant") * (T::one() / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // ∫_{-1}^{1} t^14 dt = 2/15 (degree 14 ≤ 2·8 − 1).
        let s: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn chebyshev_interpolates_smooth_function() {
        let pts = chebyshev_points(0.0f64, 2.0, 40);
        let vals: Vec<f64> = pts.iter().map(|x| (3.0 * x).sin()).collect();
        let c = Chebyshev::new(0.0, 2.0, vals);
        for &x in &[0.0, 0.123, 1.0, 1.999] {
            assert!((c.eval(x) - (3.0f64 * x).sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn composite_exp() {
        let q = composite::<f64>(0.0, 2.0, 4, 10);
        let s: f64 = q.iter().map(|(t, w)| w * t.exp()).sum();
        assert!((s - (2f64.exp() - 1.0)).abs() < 1e-13);
    }
}
