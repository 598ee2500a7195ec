//! Littlewood–Paley systems and Fourier multipliers on periodized grids.
//!
//! A generator `φ̂` equals 1 on `|ξ| ≤ 1`, vanishes on `|ξ| ≥ 3/2` and moves
//! between the two through a C^∞ ramp. Blocks are
//! `φ̂₀ = φ̂` and `φ̂_n(ξ) = φ̂(2^{-n}ξ) − φ̂(2^{-n+1}ξ)` for `n ≥ 1`, and the
//! frequency block `S_n f` is the Fourier multiplier with symbol `φ̂_n`.

use crate::error::{Error, Result};
use crate::grid::{GridFunction, PeriodizedGrid, Spectrum};
use crate::jet::Jet;
use crate::linalg::CMatrix;
use crate::scalar::{abs2, pairwise_sum, pow2, Complex, Real};

/// The C^∞ ramp `h_a(t) = B(1−t)/(B(t)+B(1−t))`, `B(t) = exp(−a/t)`.
///
/// Equals 1 for `t ≤ 0`, 0 for `t ≥ 1`, and is strictly decreasing between.
pub fn ramp<T: Real>(t: T, sharpness: T) -> T {
    if t <= T::zero() {
        return T::one();
    }
    if t >= T::one() {
        return T::zero();
    }
    let e = sharpness / (T::one() - t) - sharpness / t;
    if e > T::lit(700.0) {
        return T::zero();
    }
    T::one() / (T::one() + e.exp())
}

/// The ramp evaluated on a jet (all derivatives up to the jet order).
pub fn ramp_jet<T: Real>(t: &Jet<T>, sharpness: T) -> Jet<T> {
    let n = t.order();
    let t0 = t.value();
    if t0 <= T::zero() {
        return Jet::constant(T::one(), n);
    }
    if t0 >= T::one() {
        return Jet::constant(T::zero(), n);
    }
    let one = Jet::constant(T::one(), n);
    let e = (one.clone() - t.clone()).recip().affine(sharpness, T::zero())
        - t.recip().affine(sharpness, T::zero());
    if e.value().abs() > T::lit(700.0) {
        // Every derivative is below exp(−700) in magnitude here.
        let v = if e.value() > T::zero() { T::zero() } else { T::one() };
        return Jet::constant(v, n);
    }
    (one.clone() + e.exp()).recip()
}

/// Shape parameters of a Littlewood–Paley generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileParams<T> {
    /// Ramp sharpness `a` in `B(t) = exp(−a/t)`.
    pub sharpness: T,
    /// Radius up to which `φ̂ = 1` (must be ≥ 1).
    pub plateau: T,
    /// Radius from which `φ̂ = 0` (must be ≤ 3/2).
    pub cutoff: T,
}

impl<T: Real> Default for ProfileParams<T> {
    fn default() -> Self {
        Self { sharpness: T::one(), plateau: T::one(), cutoff: T::lit(1.5) }
    }
}

/// A radial generator `φ̂(ξ) = ramp((|ξ| − plateau)/(cutoff − plateau))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpGenerator<T> {
    params: ProfileParams<T>,
}

/// Validates a profile and builds the generator.
pub fn build_generator<T: Real>(params: ProfileParams<T>) -> Result<LpGenerator<T>> {
    let ProfileParams { sharpness, plateau, cutoff } = params;
    if !(sharpness > T::zero()) || !sharpness.is_finite() {
        return Err(Error::InvalidProfile(format!("ramp sharpness must be positive, got {sharpness}")));
    }
    if !(plateau >= T::one()) {
        return Err(Error::InvalidProfile(format!("plateau radius {plateau} < 1 violates φ̂ = 1 on |ξ| ≤ 1")));
    }
    if !(cutoff <= T::lit(1.5)) {
        return Err(Error::InvalidProfile(format!("cutoff radius {cutoff} > 3/2 violates φ̂ = 0 on |ξ| ≥ 3/2")));
    }
    if !(plateau < cutoff) {
        return Err(Error::InvalidProfile(format!("plateau {plateau} must be below cutoff {cutoff}")));
    }
    Ok(LpGenerator { params })
}

impl<T: Real> LpGenerator<T> {
    /// The standard generator (sharpness 1, plateau 1, cutoff 3/2).
    pub fn standard() -> Self {
        build_generator(ProfileParams::default()).expect("default profile is valid")
    }

    pub fn params(&self) -> ProfileParams<T> {
        self.params
    }

    /// `φ̂` at radius `r = |ξ|`.
    pub fn eval(&self, r: T) -> T {
        let p = &self.params;
        let r = r.abs();
        if r <= p.plateau {
            T::one()
        } else if r >= p.cutoff {
            T::zero()
        } else {
            ramp((r - p.plateau) / (p.cutoff - p.plateau), p.sharpness)
        }
    }

    /// Block symbol `φ̂_n` at radius `r` (`n = −1` gives 0).
    pub fn block(&self, n: i64, r: T) -> T {
        match n {
            n if n < 0 => T::zero(),
            0 => self.eval(r),
            n => self.eval(r * pow2::<T>(-(n as i32))) - self.eval(r * pow2::<T>(-(n as i32) + 1)),
        }
    }

    /// `∫_ℝ φ̂(ξ) dξ` in one dimension (closed form on the plateau plus
    /// Gauss–Legendre on the ramp).
    pub fn integral_1d(&self) -> T {
        let p = &self.params;
        let ramp_part: T = crate::quad::composite(p.plateau, p.cutoff, 64, 24)
            .into_iter()
            .map(|(x, w)| w * self.eval(x))
            .fold(T::zero(), |a, b| a + b);
        T::lit(2.0) * (p.plateau + ramp_part)
    }
}

/// Largest block count `N` a grid supports without clipping: `2^{N−1}` must
/// not exceed the smallest Nyquist frequency.
pub fn max_admissible_blocks<T: Real>(grid: &PeriodizedGrid<T>) -> usize {
    let nyq = grid.min_nyquist();
    if !nyq.is_finite() {
        return 62;
    }
    let mut n = 0usize;
    while n < 62 && pow2::<T>(n as i32) <= nyq {
        n += 1;
    }
    n
}

/// A realized Littlewood–Paley system: cached block symbols on one grid.
#[derive(Clone, Debug)]
pub struct LpSystem<T> {
    generator: LpGenerator<T>,
    grid: PeriodizedGrid<T>,
    symbols: Vec<Vec<T>>,
    telescoping_residual: T,
}

/// Builds blocks `0..=n_blocks` on `grid`.
pub fn build_lp_system<T: Real>(gen: LpGenerator<T>, n_blocks: usize, grid: &PeriodizedGrid<T>) -> Result<LpSystem<T>> {
    let max = max_admissible_blocks(grid);
    if n_blocks > max {
        return Err(Error::TooManyBlocks { requested: n_blocks, max_admissible: max });
    }
    let radii = grid.frequency_magnitudes();
    let symbols: Vec<Vec<T>> =
        (0..=n_blocks).map(|n| radii.iter().map(|&r| gen.block(n as i64, r)).collect()).collect();
    let top = pow2::<T>(n_blocks as i32);
    let mut residual = T::zero();
    for (idx, &r) in radii.iter().enumerate() {
        if r <= top {
            let s = symbols.iter().fold(T::zero(), |s, b| s + b[idx]);
            residual = residual.max((s - T::one()).abs());
        }
    }
    Ok(LpSystem { generator: gen, grid: grid.clone(), symbols, telescoping_residual: residual })
}

impl<T: Real> LpSystem<T> {
    /// Standard generator with the default block count (10, or fewer if the
    /// grid cannot hold them).
    pub fn standard(grid: &PeriodizedGrid<T>) -> Result<Self> {
        let n = 10.min(max_admissible_blocks(grid));
        build_lp_system(LpGenerator::standard(), n, grid)
    }

    pub fn generator(&self) -> &LpGenerator<T> {
        &self.generator
    }

    pub fn grid(&self) -> &PeriodizedGrid<T> {
        &self.grid
    }

    /// Highest block index `N`.
    pub fn n_blocks(&self) -> usize {
        self.symbols.len() - 1
    }

    /// `max |Σ_{n≤N} φ̂_n − 1|` over grid frequencies with `|ξ| ≤ 2^N`.
    pub fn telescoping_residual(&self) -> T {
        self.telescoping_residual
    }

    /// Cached symbol of block `n` (storage order).
    pub fn symbol(&self, n: usize) -> &[T] {
        &self.symbols[n]
    }

    /// `Σ_{n≤N} φ̂_n` (storage order).
    pub fn synthesis_symbol(&self) -> Vec<T> {
        let len = self.grid.len();
        (0..len).map(|i| self.symbols.iter().fold(T::zero(), |s, b| s + b[i])).collect()
    }

    fn check_grid(&self, f_grid: &PeriodizedGrid<T>) -> Result<()> {
        if f_grid != &self.grid {
            return Err(Error::ShapeMismatch("function and Littlewood–Paley system use different grids".into()));
        }
        Ok(())
    }

    fn check_block(&self, n: i64) -> Result<()> {
        if n < -1 || n > self.n_blocks() as i64 {
            return Err(Error::BlockOutOfRange { n, max: self.n_blocks() });
        }
        Ok(())
    }

    /// Applies block `n` to a spectrum in place.
    pub fn apply_block_spectrum(&self, spec: &mut Spectrum<T>, n: i64) -> Result<()> {
        self.check_grid(spec.grid())?;
        self.check_block(n)?;
        if n < 0 {
            for z in spec.data_mut() {
                *z = Complex::new(T::zero(), T::zero());
            }
        } else {
            spec.multiply_real(&self.symbols[n as usize]);
        }
        Ok(())
    }

    /// All blocks `S_0 f, …, S_N f` from a single forward transform.
    pub fn blocks(&self, f: &GridFunction<T>) -> Result<Vec<GridFunction<T>>> {
        self.check_grid(f.grid())?;
        let spec = f.spectrum();
        Ok(self
            .symbols
            .iter()
            .map(|sym| {
                let mut s = spec.clone();
                s.multiply_real(sym);
                s.to_function().with_support_margin(f.support_margin())
            })
            .collect())
    }
}

/// The frequency block `S_n f = φ_n ∗ f` (`S_{−1} = 0`).
pub fn lp_block<T: Real>(f: &GridFunction<T>, sys: &LpSystem<T>, n: i64) -> Result<GridFunction<T>> {
    let mut spec = f.spectrum();
    sys.apply_block_spectrum(&mut spec, n)?;
    let out = spec.to_function().with_support_margin(f.support_margin());
    out.check_finite("lp_block")?;
    Ok(out)
}

/// Symbol values of a multiplier.
#[derive(Clone, Debug, PartialEq)]
pub enum Symbol<T> {
    /// One complex value per spectral index, acting on every component.
    Scalar(Vec<Complex<T>>),
    /// An `r×r` matrix per spectral index (row-major, node-major).
    Matrix { r: usize, values: Vec<Complex<T>> },
}

/// A Fourier multiplier on a fixed grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMultiplier<T> {
    grid: PeriodizedGrid<T>,
    symbol: Symbol<T>,
    tag: String,
}

impl<T: Real> SpectralMultiplier<T> {
    pub fn from_scalar(grid: &PeriodizedGrid<T>, values: Vec<Complex<T>>, tag: impl Into<String>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch("scalar symbol length differs from grid size".into()));
        }
        Ok(Self { grid: grid.clone(), symbol: Symbol::Scalar(values), tag: tag.into() })
    }

    pub fn from_matrix(grid: &PeriodizedGrid<T>, r: usize, values: Vec<Complex<T>>, tag: impl Into<String>) -> Result<Self> {
        if values.len() != grid.len() * r * r {
            return Err(Error::ShapeMismatch("matrix symbol length differs from grid size × r²".into()));
        }
        Ok(Self { grid: grid.clone(), symbol: Symbol::Matrix { r, values }, tag: tag.into() })
    }

    pub fn identity(grid: &PeriodizedGrid<T>) -> Self {
        Self {
            grid: grid.clone(),
            symbol: Symbol::Scalar(vec![Complex::new(T::one(), T::zero()); grid.len()]),
            tag: "identity".into(),
        }
    }

    /// Bessel potential `(1 + |ξ|²)^{s/2}`.
    pub fn bessel(grid: &PeriodizedGrid<T>, s: T) -> Self {
        let half = s * T::lit(0.5);
        let values = grid
            .frequency_magnitudes()
            .into_iter()
            .map(|r| Complex::new((T::one() + r * r).powf(half), T::zero()))
            .collect();
        Self { grid: grid.clone(), symbol: Symbol::Scalar(values), tag: format!("bessel(s={s})") }
    }

    /// Partial derivative `∂^α`, symbol `(iξ)^α`.
    pub fn derivative(grid: &PeriodizedGrid<T>, alpha: &[usize]) -> Result<Self> {
        if alpha.len() != grid.dim() {
            return Err(Error::ShapeMismatch(format!(
                "multi-index of length {} on a {}-dimensional grid",
                alpha.len(),
                grid.dim()
            )));
        }
        let per_axis: Vec<Vec<Complex<T>>> = (0..grid.dim())
            .map(|a| grid.frequencies(a).into_iter().map(|xi| Complex::new(T::zero(), xi).powu(alpha[a] as u32)).collect())
            .collect();
        let values = (0..grid.len())
            .map(|idx| {
                grid.multi_index(idx)
                    .iter()
                    .enumerate()
                    .fold(Complex::new(T::one(), T::zero()), |acc, (a, &k)| acc * per_axis[a][k])
            })
            .collect();
        Ok(Self { grid: grid.clone(), symbol: Symbol::Scalar(values), tag: format!("derivative{alpha:?}") })
    }

    /// The block multiplier `φ̂_n` of a system.
    pub fn lp_block(sys: &LpSystem<T>, n: usize) -> Result<Self> {
        if n > sys.n_blocks() {
            return Err(Error::BlockOutOfRange { n: n as i64, max: sys.n_blocks() });
        }
        let values = sys.symbol(n).iter().map(|&v| Complex::new(v, T::zero())).collect();
        Ok(Self { grid: sys.grid().clone(), symbol: Symbol::Scalar(values), tag: format!("lp_block({n})") })
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn symbol(&self) -> &Symbol<T> {
        &self.symbol
    }

    pub fn grid(&self) -> &PeriodizedGrid<T> {
        &self.grid
    }

    /// `self ∘ other` (apply `other` first); symbols multiply pointwise.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::ShapeMismatch("multipliers on different grids".into()));
        }
        let tag = format!("{}∘{}", self.tag, other.tag);
        let symbol = match (&self.symbol, &other.symbol) {
            (Symbol::Scalar(a), Symbol::Scalar(b)) => Symbol::Scalar(a.iter().zip(b).map(|(&x, &y)| x * y).collect()),
            (Symbol::Scalar(a), Symbol::Matrix { r, values }) | (Symbol::Matrix { r, values }, Symbol::Scalar(a)) => {
                let rr = r * r;
                Symbol::Matrix {
                    r: *r,
                    values: values.iter().enumerate().map(|(i, &v)| v * a[i / rr]).collect(),
                }
            }
            (Symbol::Matrix { r, values: a }, Symbol::Matrix { r: r2, values: b }) => {
                if r != r2 {
                    return Err(Error::ShapeMismatch(format!("matrix symbols of size {r} and {r2}")));
                }
                let rr = r * r;
                let mut values = Vec::with_capacity(a.len());
                for node in 0..self.grid.len() {
                    let ma = CMatrix::from_rows(*r, *r, a[node * rr..(node + 1) * rr].to_vec());
                    let mb = CMatrix::from_rows(*r, *r, b[node * rr..(node + 1) * rr].to_vec());
                    values.extend_from_slice(ma.mul(&mb).data());
                }
                Symbol::Matrix { r: *r, values }
            }
        };
        Ok(Self { grid: self.grid.clone(), symbol, tag })
    }

    /// Pointwise inverse symbol; fails if the symbol vanishes somewhere.
    pub fn inverse(&self) -> Result<Self> {
        let symbol = match &self.symbol {
            Symbol::Scalar(a) => {
                let mut out = Vec::with_capacity(a.len());
                for &z in a {
                    if abs2(z) == T::zero() || !(z.re.is_finite() && z.im.is_finite()) {
                        return Err(Error::InvalidArgument(format!("multiplier {} is not invertible", self.tag)));
                    }
                    out.push(Complex::new(T::one(), T::zero()) / z);
                }
                Symbol::Scalar(out)
            }
            Symbol::Matrix { r, values } => {
                let rr = r * r;
                let mut out = Vec::with_capacity(values.len());
                for node in 0..self.grid.len() {
                    let m = CMatrix::from_rows(*r, *r, values[node * rr..(node + 1) * rr].to_vec());
                    let inv = m
                        .inverse()
                        .ok_or_else(|| Error::InvalidArgument(format!("multiplier {} is singular", self.tag)))?;
                    out.extend_from_slice(inv.data());
                }
                Symbol::Matrix { r: *r, values: out }
            }
        };
        Ok(Self { grid: self.grid.clone(), symbol, tag: format!("inverse({})", self.tag) })
    }

    /// Applies the multiplier to a spectrum in place.
    pub fn apply_spectrum(&self, spec: &mut Spectrum<T>) -> Result<()> {
        if spec.grid() != &self.grid {
            return Err(Error::ShapeMismatch("multiplier and function use different grids".into()));
        }
        match &self.symbol {
            Symbol::Scalar(v) => spec.multiply_complex(v),
            Symbol::Matrix { r, values } => {
                if *r != spec.fiber() {
                    return Err(Error::ShapeMismatch(format!(
                        "matrix symbol of size {r} applied to fiber dimension {}",
                        spec.fiber()
                    )));
                }
                let len = self.grid.len();
                let rr = r * r;
                let data = spec.data_mut();
                let mut buf = vec![Complex::new(T::zero(), T::zero()); *r];
                for node in 0..len {
                    for c in 0..*r {
                        buf[c] = data[c * len + node];
                    }
                    let m = &values[node * rr..(node + 1) * rr];
                    for i in 0..*r {
                        let mut s = Complex::new(T::zero(), T::zero());
                        for j in 0..*r {
                            s = s + m[i * r + j] * buf[j];
                        }
                        data[i * len + node] = s;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Pointwise frequency-domain product `m(D) f`.
pub fn apply_multiplier<T: Real>(f: &GridFunction<T>, m: &SpectralMultiplier<T>) -> Result<GridFunction<T>> {
    let mut spec = f.spectrum();
    m.apply_spectrum(&mut spec)?;
    let out = spec.to_function().with_support_margin(f.support_margin());
    out.check_finite(m.tag())?;
    Ok(out)
}

/// Default relative tail tolerated by spectral restriction.
pub const DEFAULT_TAIL_THRESHOLD: f64 = 1e-8;

/// Fraction of the axis-0 wavenumbers treated as the unresolved top band.
pub const TOP_BAND_FRACTION: f64 = 0.125;

/// Checks that a spectrum is resolved along the normal axis.
pub fn check_axis0_tail<T: Real>(spec: &Spectrum<T>, threshold: T, context: &str) -> Result<()> {
    let tail = spec.top_band_fraction(0, TOP_BAND_FRACTION);
    if tail > threshold {
        return Err(Error::SpectralTail {
            tail: tail.to_f64_lossy(),
            threshold: threshold.to_f64_lossy(),
            context: context.into(),
        });
    }
    Ok(())
}

/// Exact value at `x₁ = 0` of the trigonometric interpolant along axis 0.
pub fn boundary_restrict<T: Real>(f: &GridFunction<T>) -> Result<GridFunction<T>> {
    boundary_restrict_with(f, T::lit(DEFAULT_TAIL_THRESHOLD))
}

/// [`boundary_restrict`] with an explicit tail threshold.
pub fn boundary_restrict_with<T: Real>(f: &GridFunction<T>, threshold: T) -> Result<GridFunction<T>> {
    let spec = f.spectrum();
    check_axis0_tail(&spec, threshold, "boundary restriction")?;
    let out = spec.restrict_axis0()?.to_function().with_support_margin(f.support_margin());
    out.check_finite("boundary_restrict")?;
    Ok(out)
}

/// Relative `ℓ²` spectral mass not captured by `Σ_{n≤N} φ̂_n`.
pub fn synthesis_remainder<T: Real>(spec: &Spectrum<T>, sys: &LpSystem<T>) -> T {
    let synth = sys.synthesis_symbol();
    let len = spec.grid().len();
    let mut rem = Vec::with_capacity(spec.data().len());
    for c in 0..spec.fiber() {
        for (i, &z) in spec.component(c).iter().enumerate() {
            rem.push(abs2(z) * (T::one() - synth[i % len]).powi(2));
        }
    }
    let total = spec.energy();
    if total == T::zero() {
        T::zero()
    } else {
        (pairwise_sum(&rem) / total).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_endpoints_and_midpoint() {
        assert_eq!(ramp(0.0f64, 1.0), 1.0);
        assert_eq!(ramp(1.0f64, 1.0), 0.0);
        assert!((ramp(0.5f64, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ramp_jet_matches_finite_differences() {
        let t = 0.37;
        let j = ramp_jet(&Jet::variable(t, 2), 1.3f64);
        let h = 1e-5;
        let fd1 = (ramp(t + h, 1.3) - ramp(t - h, 1.3)) / (2.0 * h);
        let fd2 = (ramp(t + h, 1.3) - 2.0 * ramp(t, 1.3) + ramp(t - h, 1.3)) / (h * h);
        assert!((j.derivative(1) - fd1).abs() < 1e-8);
        assert!((j.derivative(2) - fd2).abs() < 1e-4);
    }

    #[test]
    fn generator_rejects_bad_profiles() {
        let bad = ProfileParams { sharpness: 1.0f64, plateau: 0.9, cutoff: 1.5 };
        assert!(build_generator(bad).is_err());
        let bad = ProfileParams { sharpness: 1.0f64, plateau: 1.0, cutoff: 1.6 };
        assert!(build_generator(bad).is_err());
        let bad = ProfileParams { sharpness: 0.0f64, plateau: 1.0, cutoff: 1.5 };
        assert!(build_generator(bad).is_err());
    }

    #[test]
    fn block_support_arithmetic() {
        let g = LpGenerator::<f64>::standard();
        // |ξ| = 3: φ̂(3/4) = 1 and φ̂(3/2) = 0, so block 2 carries all of it.
        assert_eq!(g.block(2, 3.0), 1.0);
        assert_eq!(g.block(3, 3.0), 0.0);
        assert_eq!(g.block(3, 7.0), 1.0);
        assert_eq!(g.block(1, 0.0), 0.0);
        assert_eq!(g.block(-1, 0.3), 0.0);
    }

    #[test]
    fn admissible_block_count() {
        let grid = PeriodizedGrid::<f64>::standard(vec![4096]).unwrap();
        assert_eq!(max_admissible_blocks(&grid), 8);
        let err = build_lp_system(LpGenerator::standard(), 9, &grid).unwrap_err();
        assert_eq!(err, Error::TooManyBlocks { requested: 9, max_admissible: 8 });
    }

    #[test]
    fn integral_of_standard_generator() {
        // The ramp is antisymmetric about its midpoint, so ∫φ̂ = 2·(1 + 1/4).
        let g = LpGenerator::<f64>::standard();
        assert!((g.integral_1d() - 2.5).abs() < 1e-13);
    }
}
