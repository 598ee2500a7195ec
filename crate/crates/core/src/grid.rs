//! Periodized grids, sampled functions and their Fourier coefficients.
//!
//! The torus `[-L, L)^d` stands in for `ℝ^d`. Axis 0 plays the role of the
//! normal variable `x₁`; on an *offset* grid its nodes sit at cell midpoints,
//! so no node ever lies on the hyperplane `x₁ = 0` and power weights `|x₁|^γ`
//! stay finite at every node.
//!
//! A [`Spectrum`] stores the true Fourier-series coefficients `c_k` of the
//! trigonometric interpolant, `f(x) = Σ_k c_k e^{iξ_k·x}` with
//! `ξ_k = π k / L`, so that pointwise evaluation anywhere (in particular at
//! `x₁ = 0`) is a plain sum over coefficients.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::{abs2, pairwise_sum, Complex, Real};

/// Uniform grid on the torus `[-L, L)^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodizedGrid<T> {
    n: Vec<usize>,
    half_period: T,
    offset: bool,
}

impl<T: Real> PeriodizedGrid<T> {
    /// Creates a grid with `n[a]` cells on axis `a` (each a power of two ≥ 2).
    ///
    /// `offset` shifts the axis-0 nodes to cell midpoints. A zero-dimensional
    /// grid (`n` empty) is allowed and represents the boundary of a 1-D grid.
    pub fn new(n: Vec<usize>, half_period: T, offset: bool) -> Result<Self> {
        for (a, &na) in n.iter().enumerate() {
            if na < 2 || !na.is_power_of_two() {
                return Err(Error::InvalidGrid(format!(
                    "axis {a} has {na} cells; a power of two >= 2 is required"
                )));
            }
        }
        if !(half_period > T::zero()) || !half_period.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "half-period must be positive and finite, got {half_period}"
            )));
        }
        if offset && n.is_empty() {
            return Err(Error::InvalidGrid("a zero-dimensional grid cannot be offset".into()));
        }
        Ok(Self { n, half_period, offset })
    }

    /// Offset grid with half-period `16π` (the default torus).
    pub fn standard(n: Vec<usize>) -> Result<Self> {
        Self::new(n, T::lit(16.0) * T::PI(), true)
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.n
    }

    pub fn half_period(&self) -> T {
        self.half_period
    }

    pub fn offset(&self) -> bool {
        self.offset
    }

    /// Total number of nodes (1 for a zero-dimensional grid).
    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Mesh width `h = 2L/N` on axis `a`.
    pub fn spacing(&self, a: usize) -> T {
        T::lit(2.0) * self.half_period / T::from_usize_lossy(self.n[a])
    }

    /// Row-major strides (the last axis is contiguous).
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.n.len()];
        for a in (0..self.n.len().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.n[a + 1];
        }
        s
    }

    /// First coordinate of axis `a`: `-L`, or `-L + h/2` on the offset axis.
    pub fn origin(&self, a: usize) -> T {
        let shift = if self.offset && a == 0 { T::lit(0.5) * self.spacing(a) } else { T::zero() };
        -self.half_period + shift
    }

    /// Coordinate of node `i` on axis `a`.
    pub fn coordinate(&self, a: usize, i: usize) -> T {
        self.origin(a) + T::from_usize_lossy(i) * self.spacing(a)
    }

    /// All node coordinates of axis `a`.
    pub fn coordinates(&self, a: usize) -> Vec<T> {
        (0..self.n[a]).map(|i| self.coordinate(a, i)).collect()
    }

    /// Signed wavenumber of FFT index `k` on axis `a`, in `[-N/2, N/2)`.
    pub fn signed_index(&self, a: usize, k: usize) -> i64 {
        let n = self.n[a] as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// Angular frequency `ξ_k = π k / L` of FFT index `k` on axis `a`.
    pub fn frequency(&self, a: usize, k: usize) -> T {
        T::PI() * T::from_i64(self.signed_index(a, k)).expect("index fits") / self.half_period
    }

    /// All frequencies of axis `a` in FFT order.
    pub fn frequencies(&self, a: usize) -> Vec<T> {
        (0..self.n[a]).map(|k| self.frequency(a, k)).collect()
    }

    /// Largest representable `|ξ|` on axis `a`.
    pub fn nyquist(&self, a: usize) -> T {
        T::PI() * T::from_usize_lossy(self.n[a] / 2) / self.half_period
    }

    /// Smallest Nyquist frequency over all axes (`∞` for a 0-D grid).
    pub fn min_nyquist(&self) -> T {
        (0..self.dim()).map(|a| self.nyquist(a)).fold(T::infinity(), T::min)
    }

    /// Multi-index of the flat node index `idx`.
    pub fn multi_index(&self, idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        let mut rest = idx;
        for a in (0..self.dim()).rev() {
            out[a] = rest % self.n[a];
            rest /= self.n[a];
        }
        out
    }

    /// Coordinates of the flat node index `idx`.
    pub fn node(&self, idx: usize) -> Vec<T> {
        self.multi_index(idx).iter().enumerate().map(|(a, &i)| self.coordinate(a, i)).collect()
    }

    /// Frequency vector of the flat spectral index `idx`.
    pub fn frequency_vector(&self, idx: usize) -> Vec<T> {
        self.multi_index(idx).iter().enumerate().map(|(a, &k)| self.frequency(a, k)).collect()
    }

    /// `|ξ|` at every spectral index, in storage order.
    pub fn frequency_magnitudes(&self) -> Vec<T> {
        let per_axis: Vec<Vec<T>> = (0..self.dim()).map(|a| self.frequencies(a)).collect();
        (0..self.len())
            .map(|idx| {
                let mi = self.multi_index(idx);
                mi.iter()
                    .enumerate()
                    .map(|(a, &k)| per_axis[a][k] * per_axis[a][k])
                    .fold(T::zero(), |s, x| s + x)
                    .sqrt()
            })
            .collect()
    }

    /// Grid of the boundary hyperplane (axis 0 removed, no offset).
    pub fn boundary(&self) -> Result<Self> {
        if self.n.is_empty() {
            return Err(Error::InvalidGrid("a zero-dimensional grid has no boundary".into()));
        }
        Ok(Self { n: self.n[1..].to_vec(), half_period: self.half_period, offset: false })
    }

    /// Index of the first axis-0 node with `x₁ > 0` on an offset grid.
    pub fn half_start(&self) -> usize {
        self.n[0] / 2
    }

    /// Number of nodes in one axis-0 "column" slab (the boundary grid size).
    pub fn slab_len(&self) -> usize {
        self.n[1..].iter().product()
    }
}

/// A sampled `ℂ^r`-valued function on a [`PeriodizedGrid`].
///
/// Samples are stored component-major: component `c` occupies the contiguous
/// range `c·len .. (c+1)·len`, each in row-major node order.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    grid: PeriodizedGrid<T>,
    fiber: usize,
    data: Vec<Complex<T>>,
    support_margin: T,
}

/// Fourier-series coefficients of a grid function (same layout as samples,
/// spectral indices in FFT order).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    grid: PeriodizedGrid<T>,
    fiber: usize,
    data: Vec<Complex<T>>,
}

/// Default support margin declared by constructors: a quarter of the torus.
pub const DEFAULT_SUPPORT_MARGIN: f64 = 0.25;

impl<T: Real> GridFunction<T> {
    pub fn zeros(grid: &PeriodizedGrid<T>, fiber: usize) -> Self {
        assert!(fiber >= 1, "fiber dimension must be positive");
        Self {
            grid: grid.clone(),
            fiber,
            data: vec![Complex::new(T::zero(), T::zero()); grid.len() * fiber],
            support_margin: T::lit(DEFAULT_SUPPORT_MARGIN),
        }
    }

    /// Wraps raw component-major samples.
    pub fn from_data(grid: &PeriodizedGrid<T>, fiber: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if fiber == 0 || data.len() != grid.len() * fiber {
            return Err(Error::ShapeMismatch(format!(
                "{} samples for {} nodes x {} components",
                data.len(),
                grid.len(),
                fiber
            )));
        }
        let f = Self { grid: grid.clone(), fiber, data, support_margin: T::lit(DEFAULT_SUPPORT_MARGIN) };
        f.check_finite("from_data")?;
        Ok(f)
    }

    /// Samples `f(x)` (one complex value per component) at every node.
    pub fn from_fn(grid: &PeriodizedGrid<T>, fiber: usize, f: impl Fn(&[T], &mut [Complex<T>])) -> Self {
        let mut out = Self::zeros(grid, fiber);
        let len = grid.len();
        let mut buf = vec![Complex::new(T::zero(), T::zero()); fiber];
        for idx in 0..len {
            let x = grid.node(idx);
            f(&x, &mut buf);
            for c in 0..fiber {
                out.data[c * len + idx] = buf[c];
            }
        }
        out
    }

    /// Samples a scalar function.
    pub fn from_scalar_fn(grid: &PeriodizedGrid<T>, f: impl Fn(&[T]) -> Complex<T>) -> Self {
        Self::from_fn(grid, 1, |x, out| out[0] = f(x))
    }

    pub fn grid(&self) -> &PeriodizedGrid<T> {
        &self.grid
    }

    pub fn fiber(&self) -> usize {
        self.fiber
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn support_margin(&self) -> T {
        self.support_margin
    }

    /// Declares the fraction of the torus guaranteed free of essential support.
    pub fn with_support_margin(mut self, margin: T) -> Self {
        self.support_margin = margin;
        self
    }

    pub fn component(&self, c: usize) -> &[Complex<T>] {
        let len = self.grid.len();
        &self.data[c * len..(c + 1) * len]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex<T>] {
        let len = self.grid.len();
        &mut self.data[c * len..(c + 1) * len]
    }

    /// Value of component `c` at node `idx`.
    pub fn value(&self, idx: usize, c: usize) -> Complex<T> {
        self.data[c * self.grid.len() + idx]
    }

    /// Euclidean fiber norm `‖f(x)‖_{ℂ^r}` at every node.
    pub fn fiber_norms(&self) -> Vec<T> {
        let len = self.grid.len();
        (0..len)
            .map(|idx| (0..self.fiber).map(|c| abs2(self.data[c * len + idx])).fold(T::zero(), |a, b| a + b).sqrt())
            .collect()
    }

    /// `sup_x ‖f(x)‖`.
    pub fn max_abs(&self) -> T {
        self.fiber_norms().into_iter().fold(T::zero(), T::max)
    }

    /// Discrete `ℓ²` norm of the samples (no cell volume).
    pub fn l2_samples(&self) -> T {
        let sq: Vec<T> = self.data.iter().map(|&z| abs2(z)).collect();
        pairwise_sum(&sq).sqrt()
    }

    pub fn check_finite(&self, context: &str) -> Result<()> {
        if self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite(context.to_string()))
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.fiber != other.fiber {
            return Err(Error::ShapeMismatch("grid functions live on different grids or fibers".into()));
        }
        Ok(())
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = *a + b;
        }
        out.support_margin = self.support_margin.min(other.support_margin);
        Ok(out)
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = *a - b;
        }
        out.support_margin = self.support_margin.min(other.support_margin);
        Ok(out)
    }

    /// `self + c·other`.
    pub fn axpy(&mut self, c: Complex<T>, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + c * b;
        }
        self.support_margin = self.support_margin.min(other.support_margin);
        Ok(())
    }

    /// `c·self`.
    pub fn scaled(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = *a * c;
        }
        out
    }

    /// Applies `f` to every sample.
    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = f(*a);
        }
        out
    }

    /// Forward transform to Fourier-series coefficients.
    pub fn spectrum(&self) -> Spectrum<T> {
        let mut data = self.data.clone();
        let len = self.grid.len();
        for c in 0..self.fiber {
            transform(&self.grid, &mut data[c * len..(c + 1) * len], Direction::Forward);
        }
        Spectrum { grid: self.grid.clone(), fiber: self.fiber, data }
    }
}

impl<T: Real> Spectrum<T> {
    pub fn zeros(grid: &PeriodizedGrid<T>, fiber: usize) -> Self {
        Self { grid: grid.clone(), fiber, data: vec![Complex::new(T::zero(), T::zero()); grid.len() * fiber] }
    }

    /// Wraps raw coefficients (component-major, FFT order).
    pub fn from_data(grid: &PeriodizedGrid<T>, fiber: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if fiber == 0 || data.len() != grid.len() * fiber {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for {} modes x {} components",
                data.len(),
                grid.len(),
                fiber
            )));
        }
        Ok(Self { grid: grid.clone(), fiber, data })
    }

    pub fn grid(&self) -> &PeriodizedGrid<T> {
        &self.grid
    }

    pub fn fiber(&self) -> usize {
        self.fiber
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn component(&self, c: usize) -> &[Complex<T>] {
        let len = self.grid.len();
        &self.data[c * len..(c + 1) * len]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex<T>] {
        let len = self.grid.len();
        &mut self.data[c * len..(c + 1) * len]
    }

    /// Inverse transform back to samples.
    pub fn to_function(&self) -> GridFunction<T> {
        let mut data = self.data.clone();
        let len = self.grid.len();
        for c in 0..self.fiber {
            transform(&self.grid, &mut data[c * len..(c + 1) * len], Direction::Inverse);
        }
        GridFunction {
            grid: self.grid.clone(),
            fiber: self.fiber,
            data,
            support_margin: T::lit(DEFAULT_SUPPORT_MARGIN),
        }
    }

    /// Multiplies every component by a real scalar symbol (storage order).
    pub fn multiply_real(&mut self, symbol: &[T]) {
        let len = self.grid.len();
        assert_eq!(symbol.len(), len, "symbol length");
        for c in 0..self.fiber {
            for (z, &s) in self.data[c * len..(c + 1) * len].iter_mut().zip(symbol) {
                *z = *z * s;
            }
        }
    }

    /// Multiplies every component by a complex scalar symbol (storage order).
    pub fn multiply_complex(&mut self, symbol: &[Complex<T>]) {
        let len = self.grid.len();
        assert_eq!(symbol.len(), len, "symbol length");
        for c in 0..self.fiber {
            for (z, &s) in self.data[c * len..(c + 1) * len].iter_mut().zip(symbol) {
                *z = *z * s;
            }
        }
    }

    /// Multiplies by `(iξ₁)^m`, the symbol of `∂₁^m`.
    pub fn differentiate_axis(&mut self, a: usize, m: usize) {
        if m == 0 {
            return;
        }
        let freqs = self.grid.frequencies(a);
        let stride = self.grid.strides()[a];
        let n = self.grid.shape()[a];
        let len = self.grid.len();
        let factors: Vec<Complex<T>> =
            freqs.iter().map(|&xi| Complex::new(T::zero(), xi).powu(m as u32)).collect();
        for c in 0..self.fiber {
            let plane = &mut self.data[c * len..(c + 1) * len];
            for (idx, z) in plane.iter_mut().enumerate() {
                let k = (idx / stride) % n;
                *z = *z * factors[k];
            }
        }
    }

    /// Sum of `|c_k|²` over all modes and components.
    pub fn energy(&self) -> T {
        let sq: Vec<T> = self.data.iter().map(|&z| abs2(z)).collect();
        pairwise_sum(&sq)
    }

    /// Relative `ℓ²` mass of the modes whose axis-`a` wavenumber satisfies
    /// `|k| ≥ (1 - fraction)·N/2`: a proxy for the unresolved tail.
    pub fn top_band_fraction(&self, a: usize, fraction: f64) -> T {
        let n = self.grid.shape()[a];
        let cut = ((1.0 - fraction) * (n / 2) as f64).floor() as i64;
        let stride = self.grid.strides()[a];
        let len = self.grid.len();
        let mut tail = Vec::new();
        for c in 0..self.fiber {
            for idx in 0..len {
                let k = (idx / stride) % n;
                if self.grid.signed_index(a, k).abs() >= cut {
                    tail.push(abs2(self.data[c * len + idx]));
                }
            }
        }
        let total = self.energy();
        if total == T::zero() {
            return T::zero();
        }
        (pairwise_sum(&tail) / total).sqrt()
    }

    /// Largest relative top-band fraction over all axes.
    pub fn max_top_band_fraction(&self, fraction: f64) -> T {
        (0..self.grid.dim()).map(|a| self.top_band_fraction(a, fraction)).fold(T::zero(), T::max)
    }

    /// Evaluates the series in the normal variable at `x₁`, returning the
    /// coefficients of `f(x₁, ·)` on the boundary grid.
    pub fn evaluate_axis0(&self, x1: T) -> Result<Spectrum<T>> {
        let bgrid = self.grid.boundary()?;
        let n0 = self.grid.shape()[0];
        let slab = bgrid.len();
        let phases: Vec<Complex<T>> = (0..n0)
            .map(|k| {
                let t = self.grid.frequency(0, k) * x1;
                Complex::new(t.cos(), t.sin())
            })
            .collect();
        let mut out = Spectrum::zeros(&bgrid, self.fiber);
        let len = self.grid.len();
        for c in 0..self.fiber {
            let plane = &self.data[c * len..(c + 1) * len];
            let dst = &mut out.data[c * slab..(c + 1) * slab];
            for (j, d) in dst.iter_mut().enumerate() {
                // Pairwise reduction over k₁ for run-to-run stable rounding.
                let re: Vec<T> = (0..n0).map(|k| (plane[k * slab + j] * phases[k]).re).collect();
                let im: Vec<T> = (0..n0).map(|k| (plane[k * slab + j] * phases[k]).im).collect();
                *d = Complex::new(pairwise_sum(&re), pairwise_sum(&im));
            }
        }
        Ok(out)
    }

    /// Restriction to the hyperplane `x₁ = 0`.
    pub fn restrict_axis0(&self) -> Result<Spectrum<T>> {
        let bgrid = self.grid.boundary()?;
        let n0 = self.grid.shape()[0];
        let slab = bgrid.len();
        let mut out = Spectrum::zeros(&bgrid, self.fiber);
        let len = self.grid.len();
        for c in 0..self.fiber {
            let plane = &self.data[c * len..(c + 1) * len];
            for j in 0..slab {
                let re: Vec<T> = (0..n0).map(|k| plane[k * slab + j].re).collect();
                let im: Vec<T> = (0..n0).map(|k| plane[k * slab + j].im).collect();
                out.data[c * slab + j] = Complex::new(pairwise_sum(&re), pairwise_sum(&im));
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Direction {
    Forward,
    Inverse,
}

type PlanKey = (TypeId, usize, bool);

fn plan_cache() -> &'static Mutex<HashMap<PlanKey, Arc<dyn Any + Send + Sync>>> {
    static CACHE: OnceLock<Mutex<HashMap<PlanKey, Arc<dyn Any + Send + Sync>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns a cached FFT plan; plans are immutable and shared across threads.
fn plan<T: Real>(len: usize, dir: Direction) -> Arc<dyn Fft<T>> {
    let key = (TypeId::of::<T>(), len, dir == Direction::Forward);
    let mut cache = plan_cache().lock().expect("plan cache poisoned");
    if let Some(p) = cache.get(&key) {
        return p.downcast_ref::<Arc<dyn Fft<T>>>().expect("plan type").clone();
    }
    let mut planner = FftPlanner::<T>::new();
    let p = match dir {
        Direction::Forward => planner.plan_fft_forward(len),
        Direction::Inverse => planner.plan_fft_inverse(len),
    };
    cache.insert(key, Arc::new(p.clone()));
    p
}

/// In-place transform between samples and Fourier-series coefficients of one
/// component, including the `1/N` normalization and the phase of the first
/// node, so coefficients are independent of the node offset.
fn transform<T: Real>(grid: &PeriodizedGrid<T>, plane: &mut [Complex<T>], dir: Direction) {
    let shape = grid.shape();
    let strides = grid.strides();
    for a in 0..grid.dim() {
        let n = shape[a];
        let stride = strides[a];
        let x0 = grid.origin(a);
        let inv_n = T::one() / T::from_usize_lossy(n);
        let factors: Vec<Complex<T>> = (0..n)
            .map(|k| {
                let t = grid.frequency(a, k) * x0;
                match dir {
                    Direction::Forward => Complex::new(t.cos(), -t.sin()) * inv_n,
                    Direction::Inverse => Complex::new(t.cos(), t.sin()),
                }
            })
            .collect();
        let fft = plan::<T>(n, dir);
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        let outer = plane.len() / (n * stride);
        for o in 0..outer {
            let base = o * n * stride;
            for j in 0..stride {
                for k in 0..n {
                    line[k] = plane[base + k * stride + j];
                }
                if dir == Direction::Inverse {
                    for (z, f) in line.iter_mut().zip(&factors) {
                        *z = *z * *f;
                    }
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                if dir == Direction::Forward {
                    for (z, f) in line.iter_mut().zip(&factors) {
                        *z = *z * *f;
                    }
                }
                for k in 0..n {
                    plane[base + k * stride + j] = line[k];
                }
            }
        }
    }
}

/// Transforms along axis 0 only: returns, for every boundary node `x̃`, the
/// coefficients `c_k(x̃)` of `x₁ ↦ f(x₁, x̃)` (same layout as the samples).
pub fn axis0_coefficients<T: Real>(f: &GridFunction<T>) -> Vec<Complex<T>> {
    let grid = f.grid();
    let n = grid.shape()[0];
    let slab = grid.slab_len();
    let len = grid.len();
    let x0 = grid.origin(0);
    let inv_n = T::one() / T::from_usize_lossy(n);
    let factors: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let t = grid.frequency(0, k) * x0;
            Complex::new(t.cos(), -t.sin()) * inv_n
        })
        .collect();
    let fft = plan::<T>(n, Direction::Forward);
    let mut out = f.data().to_vec();
    let mut line = vec![Complex::new(T::zero(), T::zero()); n];
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
    for c in 0..f.fiber() {
        let plane = &mut out[c * len..(c + 1) * len];
        for j in 0..slab {
            for k in 0..n {
                line[k] = plane[k * slab + j];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for k in 0..n {
                plane[k * slab + j] = line[k] * factors[k];
            }
        }
    }
    out
}

/// Samples of a 1-D trigonometric polynomial with coefficients `coeffs` (FFT
/// order on axis 0 of `grid`) at the axis-0 nodes.
pub fn axis0_synthesize<T: Real>(grid: &PeriodizedGrid<T>, coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = grid.shape()[0];
    assert_eq!(coeffs.len(), n);
    let x0 = grid.origin(0);
    let mut line: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let t = grid.frequency(0, k) * x0;
            coeffs[k] * Complex::new(t.cos(), t.sin())
        })
        .collect();
    let fft = plan::<T>(n, Direction::Inverse);
    fft.process(&mut line);
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(PeriodizedGrid::<f64>::new(vec![12], 1.0, true).is_err());
        assert!(PeriodizedGrid::<f64>::new(vec![16], -1.0, true).is_err());
        assert!(PeriodizedGrid::<f64>::new(vec![], 1.0, false).is_ok());
    }

    #[test]
    fn offset_nodes_avoid_zero() {
        let g = PeriodizedGrid::<f64>::standard(vec![64]).unwrap();
        let h = g.spacing(0);
        assert!((g.coordinate(0, 32) - h / 2.0).abs() < 1e-14);
        assert!((g.coordinate(0, 31) + h / 2.0).abs() < 1e-14);
    }

    #[test]
    fn pure_wave_has_single_coefficient() {
        let g = PeriodizedGrid::<f64>::standard(vec![256]).unwrap();
        let xi = g.frequency(0, 5);
        let f = GridFunction::from_scalar_fn(&g, |x| Complex::new(0.0, xi * x[0]).exp());
        let s = f.spectrum();
        for (k, z) in s.component(0).iter().enumerate() {
            let expect = if k == 5 { 1.0 } else { 0.0 };
            assert!((z - c(expect)).norm() < 1e-12, "k={k} z={z}");
        }
    }

    #[test]
    fn round_trip_two_dimensional() {
        let g = PeriodizedGrid::<f64>::standard(vec![32, 16]).unwrap();
        let f = GridFunction::from_scalar_fn(&g, |x| Complex::new((-x[0] * x[0] / 9.0).exp(), x[1].sin() * 0.1));
        let back = f.spectrum().to_function();
        let err = back.sub(&f).unwrap().max_abs();
        assert!(err < 1e-13);
    }

    #[test]
    fn restriction_of_cosine_is_one() {
        let g = PeriodizedGrid::<f64>::standard(vec![64, 8]).unwrap();
        let f = GridFunction::from_scalar_fn(&g, |x| c(x[0].cos()));
        let b = f.spectrum().restrict_axis0().unwrap().to_function();
        for z in b.component(0) {
            assert!((z - c(1.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn axis0_helpers_round_trip() {
        let g = PeriodizedGrid::<f64>::standard(vec![64]).unwrap();
        let f = GridFunction::from_scalar_fn(&g, |x| c((-x[0] * x[0]).exp()));
        let coeffs = axis0_coefficients(&f);
        let back = axis0_synthesize(&g, &coeffs);
        for (a, b) in back.iter().zip(f.component(0)) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
