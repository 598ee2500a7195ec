//! Trace operators, their right inverses (extension operators), the
//! boundary-preserving mollifier and the half-space indicator multiplier.
//!
//! * `Tr f = Σ_n (φ_n ∗ f)(0, ·)` and `Tr_m = Tr ∘ ∂₁^m`, evaluated exactly
//!   for band-limited data by summing Fourier coefficients along `x₁`.
//! * `ext₀ g = Σ_n 2^{-n} ρ_n(x₁) (φ_n ∗ g)(x̃)` with a one-dimensional
//!   Littlewood–Paley family `ρ_n` normalized by `ρ_n(0) = 2^n`.
//! * `ext_m g = Σ_j 2^{-j} (𝓕^{-1}η_j^m)(x₁) (φ_j ∗ g)(x̃)`, where
//!   `η_j^m = (−D)^m η(2^{-j}·)/m!`, `D = −i∂`, built from a bump `η₀`
//!   supported in `(−1, 1)` (for `j = 0`) and a bump `η` supported in
//!   `(1, 3/2)` (for `j ≥ 1`), both normalized by `𝓕^{-1}η(0) = 1`.
//!   In physical space `2^{-j}𝓕^{-1}η_j^m(x₁) = (x₁^m/m!)·(𝓕^{-1}ζ)(2^j x₁)`,
//!   so `Tr_i ext_m g = δ_{im} g` for `i ≤ m`.
//!
//! On the torus the kernels are trigonometric polynomials whose coefficients
//! sample the symbols on the frequency grid. Periodization perturbs the
//! moments `Σ_k (iξ_k)^i c_k` slightly; each kernel is therefore corrected
//! within the span of the lower-order kernels of the same block (same
//! frequency support) so that the discrete moments are exactly `δ_{im}`.

use crate::error::{Error, Result};
use crate::grid::{axis0_coefficients, axis0_synthesize, GridFunction, PeriodizedGrid};
use crate::jet::Jet;
use crate::linalg::CMatrix;
use crate::lp::{check_axis0_tail, ramp_jet, synthesis_remainder, LpGenerator, LpSystem, TOP_BAND_FRACTION};
use crate::norms::{weighted_lp_of_values, Domain, WeightSpec};
use crate::quad::{chebyshev_points, composite, Chebyshev};
use crate::scalar::{binomial, factorial, i_pow, pow2, Complex, Real};

/// Relative spectral tail tolerated in traces and extensions.
pub const TRACE_TAIL_THRESHOLD: f64 = 1e-8;

/// A smooth bump `ζ(ξ) = c·exp(−a/(1−u²))`, `u = (ξ − center)/halfwidth`,
/// normalized so that `(1/2π)∫ζ = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump<T> {
    pub center: T,
    pub halfwidth: T,
    pub sharpness: T,
    pub norm: T,
}

impl<T: Real> Bump<T> {
    pub fn new(center: T, halfwidth: T, sharpness: T) -> Self {
        let integral: T = composite(-T::one(), T::one(), 64, 24)
            .into_iter()
            .map(|(u, w)| w * raw_bump(u, sharpness))
            .fold(T::zero(), |a, b| a + b);
        let norm = T::lit(2.0) * T::PI() / (halfwidth * integral);
        Self { center, halfwidth, sharpness, norm }
    }

    /// Support interval `(center − halfwidth, center + halfwidth)`.
    pub fn support(&self) -> (T, T) {
        (self.center - self.halfwidth, self.center + self.halfwidth)
    }

    pub fn eval(&self, xi: T) -> T {
        self.norm * raw_bump((xi - self.center) / self.halfwidth, self.sharpness)
    }

    /// Derivatives `ζ^{(0..=order)}(ξ)`.
    pub fn derivatives(&self, xi: T, order: usize) -> Vec<T> {
        let u = (xi - self.center) / self.halfwidth;
        if u.abs() >= T::one() {
            return vec![T::zero(); order + 1];
        }
        let one = Jet::constant(T::one(), order);
        let uj = Jet::variable(xi, order).affine(T::one() / self.halfwidth, -self.center / self.halfwidth);
        let denom = one - uj.clone() * uj;
        if self.sharpness / denom.value() > T::lit(700.0) {
            return vec![T::zero(); order + 1];
        }
        let e = denom.recip().affine(-self.sharpness, T::zero()).exp();
        (0..=order).map(|k| self.norm * e.derivative(k)).collect()
    }

    /// `(𝓕^{-1}ζ)(y) = (1/2π)∫ζ(ξ)e^{iyξ}dξ` by Gauss–Legendre quadrature.
    pub fn inverse_fourier(&self, y: T) -> Complex<T> {
        let (a, b) = self.support();
        let panels = 64 + (y.abs() * (b - a)).to_usize().unwrap_or(0) * 2;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (xi, w) in composite(a, b, panels, 24) {
            let t = y * xi;
            acc = acc + Complex::new(t.cos(), t.sin()) * (w * self.eval(xi));
        }
        acc / (T::lit(2.0) * T::PI())
    }
}

fn raw_bump<T: Real>(u: T, a: T) -> T {
    if u.abs() >= T::one() {
        return T::zero();
    }
    let e = a / (T::one() - u * u);
    if e > T::lit(700.0) {
        T::zero()
    } else {
        (-e).exp()
    }
}

/// Construction parameters of an [`EtaFamily`].
#[derive(Clone, Copy, Debug)]
pub struct EtaParams<T> {
    /// Sharpness of the bump `η₀` on `(−1, 1)`.
    pub eta0_sharpness: T,
    /// Sharpness of the bump `η` on `(1, 3/2)`.
    pub eta_sharpness: T,
    /// Largest derivative order `m` for which kernels are prepared.
    pub m_max: usize,
    /// Generator of the one-dimensional family `ρ_n` used by `ext₀`.
    pub rho_generator: LpGenerator<T>,
}

/// The default sharpness values keep the periodization aliasing of the
/// kernels (and hence the moment correction) below `1e−3` on the standard
/// torus for orders up to 3.
impl<T: Real> Default for EtaParams<T> {
    fn default() -> Self {
        Self { eta0_sharpness: T::lit(6.0), eta_sharpness: T::lit(16.0), m_max: 3, rho_generator: LpGenerator::standard() }
    }
}

/// Coefficients (FFT order along `x₁`) and node samples of a kernel.
#[derive(Clone, Debug)]
struct Kernel<T> {
    coeffs: Vec<Complex<T>>,
    samples: Vec<Complex<T>>,
}

impl<T: Real> Kernel<T> {
    fn from_coeffs(grid: &PeriodizedGrid<T>, coeffs: Vec<Complex<T>>) -> Self {
        let samples = axis0_synthesize(grid, &coeffs);
        Self { coeffs, samples }
    }
}

/// The extension kernels `2^{-j}𝓕^{-1}η_j^m` (`j ≤ J`, `m ≤ m_max`) and the
/// family `2^{-n}ρ_n` (`n ≤ J`), realized on the normal axis of one grid.
///
/// The family does not depend on any smoothness, integrability or weight
/// parameter, so one instance serves every `(s, p, q, γ)`.
#[derive(Clone, Debug)]
pub struct EtaFamily<T> {
    params: EtaParams<T>,
    grid: PeriodizedGrid<T>,
    boundary_grid: PeriodizedGrid<T>,
    top_block: usize,
    eta0: Bump<T>,
    eta: Bump<T>,
    kernels: Vec<Vec<Kernel<T>>>,
    rho: Vec<Kernel<T>>,
    rho_scale: T,
    rho_block_factors: Vec<T>,
    moment_defect: T,
}

/// Largest top block `J` whose kernels stay inside the resolved band of
/// axis 0: `3/2·2^J ≤ (1 − 1/8)·Nyquist`.
pub fn max_extension_block<T: Real>(grid: &PeriodizedGrid<T>) -> Option<usize> {
    let limit = grid.nyquist(0) * T::lit(1.0 - TOP_BAND_FRACTION);
    let mut j = None;
    let mut k = 0;
    while T::lit(1.5) * pow2::<T>(k) <= limit && k < 60 {
        j = Some(k as usize);
        k += 1;
    }
    j
}

impl<T: Real> EtaFamily<T> {
    /// Builds the family for blocks `0..=top_block` on the normal axis of
    /// `grid` (which must be offset).
    pub fn new(grid: &PeriodizedGrid<T>, top_block: usize, params: EtaParams<T>) -> Result<Self> {
        if grid.dim() == 0 || !grid.offset() {
            return Err(Error::InvalidGrid("extension kernels need an offset normal axis".into()));
        }
        match max_extension_block(grid) {
            Some(max) if top_block <= max => {}
            max => {
                return Err(Error::InvalidArgument(format!(
                    "top block {top_block} does not fit the normal axis (largest admissible: {max:?})"
                )))
            }
        }
        let eta0 = Bump::new(T::zero(), T::one(), params.eta0_sharpness);
        let eta = Bump::new(T::lit(1.25), T::lit(0.25), params.eta_sharpness);
        let freqs = grid.frequencies(0);
        let two_l = T::lit(2.0) * grid.half_period();
        let m_max = params.m_max;

        let mut kernels = Vec::with_capacity(top_block + 1);
        let mut defect = T::zero();
        for j in 0..=top_block {
            let zeta = if j == 0 { &eta0 } else { &eta };
            let scale = pow2::<T>(-(j as i32));
            // raw[l][k] = 2^{-j} η_j^l(ξ_k) / (2L): samples of the kernel symbols.
            let mut raw = vec![vec![Complex::new(T::zero(), T::zero()); freqs.len()]; m_max + 1];
            for (k, &xi) in freqs.iter().enumerate() {
                let ders = zeta.derivatives(xi * scale, m_max);
                for (l, row) in raw.iter_mut().enumerate() {
                    let v = scale * pow2::<T>(-((j * l) as i32)) * ders[l] / factorial::<T>(l) / two_l;
                    row[k] = i_pow::<T>(l) * v;
                }
            }
            // moments[i][l] = Σ_k (iξ_k)^i raw[l][k].
            let powers: Vec<Vec<Complex<T>>> = (0..=m_max)
                .map(|i| freqs.iter().map(|&xi| Complex::new(T::zero(), xi).powu(i as u32)).collect())
                .collect();
            let moments: Vec<Vec<Complex<T>>> = (0..=m_max)
                .map(|i| {
                    (0..=m_max)
                        .map(|l| {
                            raw[l].iter().zip(&powers[i]).fold(Complex::new(T::zero(), T::zero()), |s, (&a, &b)| s + a * b)
                        })
                        .collect()
                })
                .collect();
            let mut per_m = Vec::with_capacity(m_max + 1);
            for m in 0..=m_max {
                let mut mat = CMatrix::zeros(m + 1, m + 1);
                for i in 0..=m {
                    for l in 0..=m {
                        mat.set(i, l, moments[i][l]);
                    }
                }
                let mut rhs = vec![Complex::new(T::zero(), T::zero()); m + 1];
                rhs[m] = Complex::new(T::one(), T::zero());
                let a = mat.solve(&rhs).ok_or_else(|| {
                    Error::InvalidArgument(format!("moment system of block {j}, order {m} is singular"))
                })?;
                for (l, &al) in a.iter().enumerate() {
                    let target = if l == m { T::one() } else { T::zero() };
                    defect = defect.max((al - Complex::new(target, T::zero())).norm());
                }
                let coeffs: Vec<Complex<T>> = (0..freqs.len())
                    .map(|k| a.iter().enumerate().fold(Complex::new(T::zero(), T::zero()), |s, (l, &al)| s + al * raw[l][k]))
                    .collect();
                per_m.push(Kernel::from_coeffs(grid, coeffs));
            }
            kernels.push(per_m);
        }

        // ρ_n: inverse transforms of the one-dimensional blocks, scaled so
        // that ρ_n(0) = 2^n (n ≥ 1) and ρ₀(0) = 1.
        let gen = params.rho_generator;
        let rho_scale = T::lit(4.0) * T::PI() / gen.integral_1d();
        let mut rho = Vec::with_capacity(top_block + 1);
        let mut rho_block_factors = Vec::with_capacity(top_block + 1);
        for n in 0..=top_block {
            let raw: Vec<T> = freqs.iter().map(|&xi| gen.block(n as i64, xi) / two_l).collect();
            let at_zero = raw.iter().fold(T::zero(), |s, &v| s + v);
            let target = if n == 0 { T::one() } else { pow2::<T>(n as i32) };
            let factor = target / at_zero;
            rho_block_factors.push(factor / rho_scale);
            let coeffs = raw.iter().map(|&v| Complex::new(v * factor, T::zero())).collect();
            rho.push(Kernel::from_coeffs(grid, coeffs));
        }

        Ok(Self {
            params,
            grid: grid.clone(),
            boundary_grid: grid.boundary()?,
            top_block,
            eta0,
            eta,
            kernels,
            rho,
            rho_scale,
            rho_block_factors,
            moment_defect: defect,
        })
    }

    /// Largest block the family supports on `grid`.
    pub fn with_max_block(grid: &PeriodizedGrid<T>, params: EtaParams<T>) -> Result<Self> {
        let j = max_extension_block(grid)
            .ok_or_else(|| Error::InvalidGrid("normal axis too coarse for any extension block".into()))?;
        Self::new(grid, j, params)
    }

    pub fn params(&self) -> &EtaParams<T> {
        &self.params
    }

    pub fn grid(&self) -> &PeriodizedGrid<T> {
        &self.grid
    }

    pub fn boundary_grid(&self) -> &PeriodizedGrid<T> {
        &self.boundary_grid
    }

    pub fn top_block(&self) -> usize {
        self.top_block
    }

    pub fn m_max(&self) -> usize {
        self.params.m_max
    }

    pub fn eta0(&self) -> &Bump<T> {
        &self.eta0
    }

    pub fn eta(&self) -> &Bump<T> {
        &self.eta
    }

    /// The bump used for block `j` (`η₀` for `j = 0`, `η` otherwise).
    pub fn profile(&self, j: usize) -> &Bump<T> {
        if j == 0 {
            &self.eta0
        } else {
            &self.eta
        }
    }

    /// Global factor applied to the inverse transforms of the `ρ` blocks
    /// so that `ρ₁(0) = 2` in the continuum.
    pub fn rho_scale(&self) -> T {
        self.rho_scale
    }

    /// Per-block factors (relative to [`Self::rho_scale`]) that make the
    /// discrete values `ρ_n(0) = 2^n` exact for `n ≥ 1` and `ρ₀(0) = 1`.
    pub fn rho_block_factors(&self) -> &[T] {
        &self.rho_block_factors
    }

    /// Largest deviation of the moment-correction weights from the identity
    /// (a measure of periodization aliasing).
    pub fn moment_defect(&self) -> T {
        self.moment_defect
    }

    /// Symbol `η_j^m(ξ) = i^m 2^{-jm} ζ^{(m)}(2^{-j}ξ)/m!`.
    pub fn symbol(&self, j: usize, m: usize, xi: T) -> Complex<T> {
        let scale = pow2::<T>(-(j as i32));
        let d = self.profile(j).derivatives(xi * scale, m)[m];
        i_pow::<T>(m) * (pow2::<T>(-((j * m) as i32)) * d / factorial::<T>(m))
    }

    /// Continuum kernel `2^{-j}𝓕^{-1}η_j^m(x₁) = (x₁^m/m!)·(𝓕^{-1}ζ)(2^j x₁)`.
    pub fn closed_form_kernel(&self, j: usize, m: usize, x1: T) -> Complex<T> {
        self.profile(j).inverse_fourier(pow2::<T>(j as i32) * x1) * (x1.powi(m as i32) / factorial::<T>(m))
    }

    /// Coefficients of the discrete kernel for block `j`, order `m`.
    pub fn kernel_coefficients(&self, j: usize, m: usize) -> &[Complex<T>] {
        &self.kernels[j][m].coeffs
    }

    /// Samples of the discrete kernel at the normal-axis nodes.
    pub fn kernel_samples(&self, j: usize, m: usize) -> &[Complex<T>] {
        &self.kernels[j][m].samples
    }

    /// Samples of the discrete `ρ_n` at the normal-axis nodes.
    pub fn rho_samples(&self, n: usize) -> &[Complex<T>] {
        &self.rho[n].samples
    }

    /// Coefficients of the discrete `ρ_n`.
    pub fn rho_coefficients(&self, n: usize) -> &[Complex<T>] {
        &self.rho[n].coeffs
    }
}

fn boundary_blocks<T: Real>(g: &GridFunction<T>, eta: &EtaFamily<T>, bsys: &LpSystem<T>) -> Result<Vec<GridFunction<T>>> {
    if g.grid() != eta.boundary_grid() || bsys.grid() != eta.boundary_grid() {
        return Err(Error::ShapeMismatch("boundary data, boundary system and kernel family disagree on the grid".into()));
    }
    if bsys.n_blocks() > eta.top_block() {
        return Err(Error::InvalidArgument(format!(
            "boundary system has {} blocks but the kernel family stops at {}",
            bsys.n_blocks(),
            eta.top_block()
        )));
    }
    let spec = g.spectrum();
    let tail = synthesis_remainder(&spec, bsys);
    if tail > T::lit(TRACE_TAIL_THRESHOLD) {
        return Err(Error::SpectralTail {
            tail: tail.to_f64_lossy(),
            threshold: TRACE_TAIL_THRESHOLD,
            context: "boundary data leaks beyond the top block".into(),
        });
    }
    bsys.blocks(g)
}

/// `Σ_j K_j(x₁) G_j(x̃)` on the full grid.
fn assemble<T: Real>(
    eta: &EtaFamily<T>,
    fiber: usize,
    blocks: &[GridFunction<T>],
    kernel: impl Fn(usize) -> Vec<Complex<T>>,
) -> GridFunction<T> {
    let grid = eta.grid();
    let mut out = GridFunction::zeros(grid, fiber);
    let slab = grid.slab_len();
    let len = grid.len();
    let n0 = grid.shape()[0];
    for (j, block) in blocks.iter().enumerate() {
        let k = kernel(j);
        for c in 0..fiber {
            let src = block.component(c);
            let dst = &mut out.data_mut()[c * len..(c + 1) * len];
            for i in 0..n0 {
                let ki = k[i];
                for t in 0..slab {
                    dst[i * slab + t] = dst[i * slab + t] + ki * src[t];
                }
            }
        }
    }
    out
}

/// `ext₀ g = Σ_n 2^{-n} ρ_n(x₁) (φ_n ∗ g)(x̃)`.
pub fn ext0<T: Real>(g: &GridFunction<T>, eta: &EtaFamily<T>, bsys: &LpSystem<T>) -> Result<GridFunction<T>> {
    let blocks = boundary_blocks(g, eta, bsys)?;
    let out = assemble(eta, g.fiber(), &blocks, |n| {
        let s = pow2::<T>(-(n as i32));
        eta.rho_samples(n).iter().map(|&z| z * s).collect()
    });
    out.check_finite("ext0")?;
    Ok(out)
}

/// `ext_m g = Σ_j 2^{-j}(𝓕^{-1}η_j^m)(x₁)(φ_j ∗ g)(x̃)`.
pub fn ext_m<T: Real>(g: &GridFunction<T>, m: usize, eta: &EtaFamily<T>, bsys: &LpSystem<T>) -> Result<GridFunction<T>> {
    if m > eta.m_max() {
        return Err(Error::InvalidArgument(format!("order {m} exceeds the family's m_max = {}", eta.m_max())));
    }
    let blocks = boundary_blocks(g, eta, bsys)?;
    let out = assemble(eta, g.fiber(), &blocks, |j| eta.kernel_samples(j, m).to_vec());
    out.check_finite("ext_m")?;
    Ok(out)
}

/// `Tr f = Σ_{n≤N} (φ_n ∗ f)(0, ·)`.
pub fn trace<T: Real>(f: &GridFunction<T>, sys: &LpSystem<T>) -> Result<GridFunction<T>> {
    trace_m(f, 0, sys)
}

/// `Tr_m f = Tr(∂₁^m f)`.
pub fn trace_m<T: Real>(f: &GridFunction<T>, m: usize, sys: &LpSystem<T>) -> Result<GridFunction<T>> {
    if f.grid() != sys.grid() {
        return Err(Error::ShapeMismatch("function and Littlewood–Paley system use different grids".into()));
    }
    let mut spec = f.spectrum();
    let tail = synthesis_remainder(&spec, sys);
    if tail > T::lit(TRACE_TAIL_THRESHOLD) {
        return Err(Error::SpectralTail {
            tail: tail.to_f64_lossy(),
            threshold: TRACE_TAIL_THRESHOLD,
            context: "block sum of the trace does not converge within the system".into(),
        });
    }
    check_axis0_tail(&spec, T::lit(TRACE_TAIL_THRESHOLD), "trace")?;
    spec.differentiate_axis(0, m);
    spec.multiply_real(&sys.synthesis_symbol());
    let out = spec.restrict_axis0()?.to_function().with_support_margin(f.support_margin());
    out.check_finite("trace")?;
    Ok(out)
}

/// Vector extension by the recursion
/// `f_j = f_{j−1} + ext_j(g_j − Tr_j f_{j−1})`, `f_{−1} = 0`.
pub fn ext_vector<T: Real>(
    gs: &[GridFunction<T>],
    eta: &EtaFamily<T>,
    bsys: &LpSystem<T>,
    sys: &LpSystem<T>,
) -> Result<GridFunction<T>> {
    let first = gs.first().ok_or_else(|| Error::InvalidArgument("no boundary data".into()))?;
    let mut f = GridFunction::zeros(eta.grid(), first.fiber());
    for (j, g) in gs.iter().enumerate() {
        let update = if j == 0 { g.clone() } else { g.sub(&trace_m(&f, j, sys)?)? };
        f = f.add(&ext_m(&update, j, eta, bsys)?)?;
    }
    Ok(f)
}

/// Multiplication by the half-space indicator `1_{x₁>0}`.
pub fn indicator_multiply<T: Real>(f: &GridFunction<T>) -> Result<GridFunction<T>> {
    let grid = f.grid();
    if grid.dim() == 0 || !grid.offset() {
        return Err(Error::InvalidGrid("the indicator needs an offset normal axis".into()));
    }
    let cut = grid.half_start() * grid.slab_len();
    let len = grid.len();
    let mut out = f.clone();
    for c in 0..f.fiber() {
        for z in &mut out.data_mut()[c * len..c * len + cut] {
            *z = Complex::new(T::zero(), T::zero());
        }
    }
    Ok(out)
}

/// `L^p(ℝ^{d−1})` norms of the slices `h(x₁, ·)` for a set of spectra.
fn slice_norm<T: Real>(slice: &GridFunction<T>, p: T) -> Result<T> {
    let w = WeightSpec::unweighted(Domain::FullSpace);
    weighted_lp_of_values(slice.grid(), &slice.fiber_norms(), p, &w)
}

/// `sup_{x₁} ‖h(x₁, ·)‖_{L^p(ℝ^{d−1})} / ‖h‖_{L^p(ℝ^d, w_γ)}`.
///
/// The supremum is taken over all nodes and `x₁ = 0`, then refined by a
/// golden-section search around the best candidate using exact spectral
/// evaluation between nodes.
pub fn slice_sup_ratio<T: Real>(h: &GridFunction<T>, p: T, gamma: T) -> Result<T> {
    let grid = h.grid();
    let w = WeightSpec::new(gamma, Domain::FullSpace)?;
    let denom = crate::norms::lp_norm(h, p, &w)?.value;
    let spec = h.spectrum();
    let eval = |x1: T| -> Result<T> { slice_norm(&spec.evaluate_axis0(x1)?.to_function(), p) };
    let n0 = grid.shape()[0];
    let slab = grid.slab_len();
    let bgrid = grid.boundary()?;
    let mut best = (eval(T::zero())?, T::zero());
    for i in 0..n0 {
        let data: Vec<Complex<T>> =
            (0..h.fiber()).flat_map(|c| h.component(c)[i * slab..(i + 1) * slab].to_vec()).collect();
        let slice = GridFunction::from_data(&bgrid, h.fiber(), data)?;
        let v = slice_norm(&slice, p)?;
        if v > best.0 {
            best = (v, grid.coordinate(0, i));
        }
    }
    let hstep = grid.spacing(0);
    let (mut a, mut b) = (best.1 - hstep, best.1 + hstep);
    let ratio = T::lit(0.618_033_988_749_894_8);
    let mut c = b - (b - a) * ratio;
    let mut d = a + (b - a) * ratio;
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    for _ in 0..40 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * ratio;
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * ratio;
            fd = eval(d)?;
        }
    }
    let sup = best.0.max(fc).max(fd);
    Ok(sup / denom)
}

/// The cutoff `φ(x) = 1 − ramp(2x − 1)`: 0 on `(−∞, 1/2]`, 1 on `[1, ∞)`.
pub fn mollifier_cutoff<T: Real>(x: T) -> T {
    T::one() - crate::lp::ramp(T::lit(2.0) * x - T::one(), T::one())
}

/// Derivatives `φ^{(0..=order)}(x)` of [`mollifier_cutoff`].
pub fn mollifier_cutoff_derivatives<T: Real>(x: T, order: usize) -> Vec<T> {
    let t = Jet::variable(T::lit(2.0) * x - T::one(), order);
    let r = ramp_jet(&t, T::one());
    (0..=order)
        .map(|k| if k == 0 { T::one() - r.value() } else { -pow2::<T>(k as i32) * r.derivative(k) })
        .collect()
}

/// Evaluates `∂₁^j f(t, x̃)` for every boundary node from axis-0 coefficients.
struct NormalEvaluator<T> {
    freqs: Vec<T>,
    coeffs: Vec<Complex<T>>,
    slab: usize,
    fiber: usize,
    n0: usize,
    len: usize,
}

impl<T: Real> NormalEvaluator<T> {
    fn new(f: &GridFunction<T>) -> Self {
        let grid = f.grid();
        Self {
            freqs: grid.frequencies(0),
            coeffs: axis0_coefficients(f),
            slab: grid.slab_len(),
            fiber: f.fiber(),
            n0: grid.shape()[0],
            len: grid.len(),
        }
    }

    /// Values for all (component, boundary node), component-major.
    fn eval(&self, j: usize, t: T) -> Vec<Complex<T>> {
        let phases: Vec<Complex<T>> = self
            .freqs
            .iter()
            .map(|&xi| Complex::new(T::zero(), xi).powu(j as u32) * Complex::new((xi * t).cos(), (xi * t).sin()))
            .collect();
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.fiber * self.slab];
        for c in 0..self.fiber {
            let plane = &self.coeffs[c * self.len..(c + 1) * self.len];
            for k in 0..self.n0 {
                let ph = phases[k];
                let row = &plane[k * self.slab..(k + 1) * self.slab];
                for (o, &z) in out[c * self.slab..(c + 1) * self.slab].iter_mut().zip(row) {
                    *o = *o + z * ph;
                }
            }
        }
        out
    }
}

/// Number of Chebyshev points used to resolve `∂₁^j f` on `[0, 1/n]`.
const CHEB_POINTS: usize = 96;

fn check_normal_trace<T: Real>(ev: &NormalEvaluator<T>, f: &GridFunction<T>, m: usize) -> Result<()> {
    let at_zero = ev.eval(m, T::zero());
    let scale = (0..f.grid().shape()[0])
        .map(|i| ev.eval(m, f.grid().coordinate(0, i)).iter().fold(T::zero(), |a, z| a.max(z.norm())))
        .fold(T::zero(), T::max)
        .max(T::min_positive_value());
    let val = at_zero.iter().fold(T::zero(), |a, z| a.max(z.norm()));
    if val > T::lit(TRACE_TAIL_THRESHOLD) * scale {
        return Err(Error::InvalidArgument(format!(
            "∂₁^{m} f does not vanish on the boundary (|value| = {:.3e})",
            val.to_f64_lossy()
        )));
    }
    Ok(())
}

/// Right-sided repeated integral
/// `J^r ψ(x) = (1/(r−1)!) ∫_x^{c} (t − x)^{r−1} ψ(t) dt`, `r ≥ 1`, split at
/// `c/2` where the cutoff starts to move.
fn right_integral<T: Real, V>(x: T, c: T, r: usize, psi: impl Fn(T) -> V) -> V
where
    V: Copy + std::ops::Mul<T, Output = V> + std::ops::Add<Output = V>,
{
    let mut pieces = Vec::new();
    let mid = c * T::lit(0.5);
    if x < mid {
        pieces.extend(composite(x, mid, 2, 20));
        pieces.extend(composite(mid, c, 8, 20));
    } else if x < c {
        pieces.extend(composite(x, c, 8, 20));
    }
    let fact = factorial::<T>(r - 1);
    let mut acc: Option<V> = None;
    for (t, w) in pieces {
        let v = psi(t) * (w * (t - x).powi(r as i32 - 1) / fact);
        acc = Some(match acc {
            None => v,
            Some(a) => a + v,
        });
    }
    acc.unwrap_or_else(|| psi(c) * T::zero())
}

/// Boundary-preserving mollification of a half-space function.
///
/// With `φ_n(x₁) = φ(n x₁)` and `ψ = (φ_n − 1) ∂₁^m f`, returns
/// `g_n = f + (−1)^m J^m ψ` (`g_n = φ_n f` for `m = 0`). Then
/// `∂₁^m g_n = φ_n ∂₁^m f`, so `∂₁^m g_n = 0` for `x₁ < 1/(2n)`, and
/// `g_n = f` for `x₁ ≥ 1/n`. Nodes with `x₁ < 0` keep the values of `f`.
pub fn boundary_preserving_mollify<T: Real>(f: &GridFunction<T>, m: usize, n: T) -> Result<GridFunction<T>> {
    let grid = f.grid();
    if grid.dim() == 0 || !grid.offset() {
        return Err(Error::InvalidGrid("mollification needs an offset normal axis".into()));
    }
    if !(n >= T::one()) {
        return Err(Error::InvalidArgument(format!("steepness n = {n} must be at least 1")));
    }
    let ev = NormalEvaluator::new(f);
    check_normal_trace(&ev, f, m)?;
    let c = T::one() / n;
    let slab = grid.slab_len();
    let len = grid.len();
    let mut out = f.clone();
    // ∂₁^m f on [0, c] for every boundary node, through Chebyshev interpolation.
    let pts = chebyshev_points(T::zero(), c, CHEB_POINTS);
    let samples: Vec<Vec<Complex<T>>> = pts.iter().map(|&t| ev.eval(m, t)).collect();
    for i in grid.half_start()..grid.shape()[0] {
        let x = grid.coordinate(0, i);
        if x >= c {
            break;
        }
        for comp in 0..f.fiber() {
            for tnode in 0..slab {
                let col = comp * slab + tnode;
                let interp = Chebyshev::new(T::zero(), c, samples.iter().map(|s| s[col]).collect());
                let psi = |t: T| interp.eval(t) * (mollifier_cutoff(n * t) - T::one());
                let correction = if m == 0 {
                    f.value(i * slab + tnode, comp) * (mollifier_cutoff(n * x) - T::one())
                } else {
                    let sign = if m % 2 == 0 { T::one() } else { -T::one() };
                    right_integral(x, c, m, psi) * sign
                };
                let idx = comp * len + i * slab + tnode;
                out.data_mut()[idx] = out.data()[idx] + correction;
            }
        }
    }
    out.check_finite("boundary_preserving_mollify")?;
    Ok(out)
}

/// `‖f − g_n‖_{W^{k,p}(ℝ₊, w_γ)}` for the mollification of a 1-D function,
/// computed by graded Gauss–Legendre quadrature on `(0, 1/n)` (the error
/// vanishes beyond) with exact derivatives of the cutoff.
pub fn mollify_defect_norm<T: Real>(f: &GridFunction<T>, m: usize, n: T, k: usize, p: T, gamma: T) -> Result<T> {
    let grid = f.grid();
    if grid.dim() != 1 || !grid.offset() {
        return Err(Error::InvalidGrid("the defect norm is computed on an offset 1-D grid".into()));
    }
    WeightSpec::new(gamma, Domain::HalfSpace)?;
    let ev = NormalEvaluator::new(f);
    check_normal_trace(&ev, f, m)?;
    let c = T::one() / n;
    let pts = chebyshev_points(T::zero(), c, CHEB_POINTS);
    let top = m + k;
    // derivs[j] interpolates ∂^j f on [0, c], j ≤ m + k.
    let derivs: Vec<Chebyshev<T, Complex<T>>> =
        (0..=top).map(|j| Chebyshev::new(T::zero(), c, pts.iter().map(|&t| ev.eval(j, t)[0]).collect())).collect();
    // ∂^r ψ(t) for ψ = (φ_n − 1)∂^m f.
    let psi_der = |r: usize, t: T| -> Complex<T> {
        let cut = mollifier_cutoff_derivatives(n * t, r);
        (0..=r).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            let dphi = if i == 0 { cut[0] - T::one() } else { n.powi(i as i32) * cut[i] };
            acc + derivs[m + r - i].eval(t) * (binomial::<T>(r, i) * dphi)
        })
    };
    // Graded panels towards 0 plus a refined cutoff region [c/2, c].
    let mut nodes: Vec<(T, T)> = Vec::new();
    let levels = 48;
    for lev in 1..levels {
        let hi = c * pow2::<T>(-(lev as i32));
        let lo = hi * T::lit(0.5);
        nodes.extend(composite(lo, hi, 1, 16));
    }
    nodes.extend(composite(c * T::lit(0.5), c, 16, 20));
    let eps = c * pow2::<T>(-(levels as i32 - 1));
    let mut total = T::zero();
    for l in 0..=k {
        let value = |t: T| -> Complex<T> {
            if l < m {
                let sign = if (m + l) % 2 == 0 { -T::one() } else { T::one() };
                right_integral(t, c, m - l, |s| psi_der(0, s)) * sign
            } else {
                -psi_der(l - m, t)
            }
        };
        let mut acc = T::zero();
        for &(t, w) in &nodes {
            acc = acc + w * value(t).norm().powf(p) * t.powf(gamma);
        }
        // ∫_0^ε |v|^p t^γ ≈ |v(ε/2)|^p ε^{γ+1}/(γ+1).
        acc = acc + value(eps * T::lit(0.5)).norm().powf(p) * eps.powf(gamma + T::one()) / (gamma + T::one());
        total = total + acc.powf(T::one() / p);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_normalization() {
        for b in [Bump::new(0.0f64, 1.0, 1.0), Bump::new(1.25, 0.25, 1.0), Bump::new(1.25, 0.25, 3.0)] {
            // Independent midpoint rule on the support.
            let (a, c) = b.support();
            let n = 20000;
            let h = (c - a) / n as f64;
            let s: f64 = (0..n).map(|i| b.eval(a + (i as f64 + 0.5) * h)).sum::<f64>() * h;
            assert!((s / (2.0 * std::f64::consts::PI) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn bump_derivatives_match_finite_differences() {
        let b = Bump::new(1.25f64, 0.25, 1.0);
        let x = 1.31;
        let d = b.derivatives(x, 2);
        let h = 1e-6;
        let fd = (b.eval(x + h) - b.eval(x - h)) / (2.0 * h);
        assert!((d[1] - fd).abs() < 1e-6 * d[1].abs().max(1.0));
    }

    #[test]
    fn cutoff_profile() {
        assert_eq!(mollifier_cutoff(0.3f64), 0.0);
        assert_eq!(mollifier_cutoff(1.2f64), 1.0);
        assert!((mollifier_cutoff(0.75f64) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn extension_block_limit() {
        let grid = PeriodizedGrid::<f64>::standard(vec![512]).unwrap();
        // Nyquist 16: 1.5·2^3 = 12 ≤ 14 but 1.5·2^4 = 24 > 14.
        assert_eq!(max_extension_block(&grid), Some(3));
    }
}
