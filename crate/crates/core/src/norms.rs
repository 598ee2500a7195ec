//! Power-weighted Lebesgue, Sobolev, Besov, Triebel–Lizorkin and Bessel
//! potential norms of grid functions, plus the Hardy ratio.
//!
//! The weight is `w_γ(x) = |x₁|^γ`. Cell masses `∫_cell |x₁|^γ dx₁` use the
//! closed-form antiderivative, so the quadrature stays accurate when `γ` is
//! close to −1. All sums use a fixed pairwise reduction order.

use crate::error::{Error, Result};
use crate::grid::{GridFunction, PeriodizedGrid};
use crate::linalg::CMatrix;
use crate::lp::{apply_multiplier, LpSystem, SpectralMultiplier};
use crate::scalar::{lq_norm, pairwise_sum, pow2, Complex, Real};

/// Summability exponent `q ∈ [1, ∞]`; `∞` is its own variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinity,
}

impl<T: Real> Exponent<T> {
    /// `min(p, q)`.
    pub fn min_with(self, p: T) -> Self {
        match self {
            Exponent::Infinity => Exponent::Finite(p),
            Exponent::Finite(q) => Exponent::Finite(q.min(p)),
        }
    }

    /// `max(p, q)`.
    pub fn max_with(self, p: T) -> Self {
        match self {
            Exponent::Infinity => Exponent::Infinity,
            Exponent::Finite(q) => Exponent::Finite(q.max(p)),
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            Exponent::Finite(q) if !(q >= T::one()) || !q.is_finite() => {
                Err(Error::InvalidArgument(format!("summability exponent q = {q} outside [1, ∞]")))
            }
            _ => Ok(()),
        }
    }
}

impl<T: Real> std::fmt::Display for Exponent<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(q) => write!(f, "{q}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// Integration domain of a weighted norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    /// The whole torus (surrogate for `ℝ^d`).
    FullSpace,
    /// Cells with `x₁ > 0` (surrogate for `ℝ^d_+`).
    HalfSpace,
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Domain::FullSpace => "full",
            Domain::HalfSpace => "half",
        })
    }
}

/// The power weight `|x₁|^γ` on a domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightSpec<T> {
    gamma: T,
    domain: Domain,
}

impl<T: Real> WeightSpec<T> {
    /// Rejects `γ ≤ −1` (the weight would not be locally integrable).
    pub fn new(gamma: T, domain: Domain) -> Result<Self> {
        if !(gamma > -T::one()) || !gamma.is_finite() {
            return Err(Error::WeightRejected(format!("γ = {gamma} must exceed −1")));
        }
        Ok(Self { gamma, domain })
    }

    pub fn unweighted(domain: Domain) -> Self {
        Self { gamma: T::zero(), domain }
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Muckenhoupt class membership: `w_γ ∈ A_p ⇔ γ ∈ (−1, p−1)`.
    pub fn is_ap(&self, p: T) -> bool {
        self.gamma > -T::one() && self.gamma < p - T::one()
    }
}

/// How a norm value was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureMeta {
    /// Number of cells contributing to the sum.
    pub cells: usize,
    pub gamma: f64,
    pub domain: Domain,
    /// Highest Littlewood–Paley block used, if any.
    pub blocks: Option<usize>,
    /// Short description of the evaluation route.
    pub method: &'static str,
}

/// A norm value with its truncation tail and quadrature description.
#[derive(Clone, Debug, PartialEq)]
pub struct NormResult<T> {
    pub value: T,
    /// Block-based norms: `‖f − Σ_{n≤N} S_n f‖_{L^p(w)}`. Sobolev/Lebesgue:
    /// relative spectral mass in the unresolved top band.
    pub truncation_tail: T,
    pub meta: QuadratureMeta,
}

/// Required support margin for every norm.
pub const REQUIRED_SUPPORT_MARGIN: f64 = 0.25;

fn check_margin<T: Real>(f: &GridFunction<T>) -> Result<()> {
    if f.support_margin() < T::lit(REQUIRED_SUPPORT_MARGIN) {
        return Err(Error::SupportMargin {
            declared: f.support_margin().to_f64_lossy(),
            required: REQUIRED_SUPPORT_MARGIN,
        });
    }
    Ok(())
}

fn check_p<T: Real>(p: T) -> Result<()> {
    if !(p > T::one()) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("integrability exponent p = {p} outside (1, ∞)")));
    }
    Ok(())
}

/// `(j+1)^a − j^a` for `j ≥ 0`, free of cancellation for large `j`.
fn power_increment<T: Real>(j: T, a: T) -> T {
    if j == T::zero() {
        T::one()
    } else {
        j.powf(a) * (a * (T::one() / j).ln_1p()).exp_m1()
    }
}

/// Weighted masses `∫_cell |x₁|^γ dx₁ · Π_{a≥1} h_a` of the axis-0 cells.
///
/// Half-space masses vanish for cells with `x₁ < 0`; they require an offset
/// grid so that `x₁ = 0` is a cell face.
pub fn cell_masses<T: Real>(grid: &PeriodizedGrid<T>, w: &WeightSpec<T>) -> Result<Vec<T>> {
    if grid.dim() == 0 {
        return Err(Error::InvalidGrid("weighted cell masses need at least one axis".into()));
    }
    let n = grid.shape()[0];
    let h = grid.spacing(0);
    let a = w.gamma + T::one();
    let vol = (1..grid.dim()).fold(T::one(), |v, ax| v * grid.spacing(ax));
    let scale = h.powf(a) / a * vol;
    let half = n / 2;
    if grid.offset() {
        Ok((0..n)
            .map(|i| {
                if w.domain == Domain::HalfSpace && i < half {
                    return T::zero();
                }
                let j = if i >= half { i - half } else { half - 1 - i };
                scale * power_increment(T::from_usize_lossy(j), a)
            })
            .collect())
    } else {
        if w.domain == Domain::HalfSpace {
            return Err(Error::InvalidGrid("half-space norms require an offset normal axis".into()));
        }
        let half_cell = T::lit(0.5);
        Ok((0..n)
            .map(|i| {
                let k = (i as i64 - half as i64).unsigned_abs() as usize;
                if k == 0 {
                    scale * T::lit(2.0) * half_cell.powf(a)
                } else {
                    // [k − ½, k + ½] in units of h.
                    let lo = T::from_usize_lossy(k) - half_cell;
                    scale * lo.powf(a) * (a * (T::one() / lo).ln_1p()).exp_m1()
                }
            })
            .collect())
    }
}

/// Weighted `L^p` norm of precomputed pointwise values `v(x) ≥ 0`
/// (on a 0-D grid: the single value).
pub fn weighted_lp_of_values<T: Real>(grid: &PeriodizedGrid<T>, values: &[T], p: T, w: &WeightSpec<T>) -> Result<T> {
    if grid.dim() == 0 {
        return Ok(values[0]);
    }
    let masses = cell_masses(grid, w)?;
    let slab = grid.slab_len();
    let terms: Vec<T> = values
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            let m = masses[idx / slab];
            if m == T::zero() || v == T::zero() {
                T::zero()
            } else {
                v.powf(p) * m
            }
        })
        .collect();
    Ok(pairwise_sum(&terms).powf(T::one() / p))
}

fn meta<T: Real>(grid: &PeriodizedGrid<T>, w: &WeightSpec<T>, blocks: Option<usize>, method: &'static str) -> QuadratureMeta {
    let cells = match w.domain {
        Domain::FullSpace => grid.len(),
        Domain::HalfSpace => grid.len() / 2,
    };
    QuadratureMeta { cells, gamma: w.gamma.to_f64_lossy(), domain: w.domain, blocks, method }
}

/// `(Σ_cells ‖f‖^p · cell mass)^{1/p}` with the Euclidean fiber norm.
pub fn lp_norm<T: Real>(f: &GridFunction<T>, p: T, w: &WeightSpec<T>) -> Result<NormResult<T>> {
    check_p(p)?;
    check_margin(f)?;
    let value = weighted_lp_of_values(f.grid(), &f.fiber_norms(), p, w)?;
    Ok(NormResult { value, truncation_tail: T::zero(), meta: meta(f.grid(), w, None, "cell-mass quadrature") })
}

/// All multi-indices `α ∈ ℕ₀^d` with `|α| = k`.
pub fn multi_indices(d: usize, k: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in multi_indices(d - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `Σ_{|α|≤k} ‖∂^α f‖_{L^p(w)}` with spectral derivatives.
pub fn sobolev_norm<T: Real>(f: &GridFunction<T>, k: usize, p: T, w: &WeightSpec<T>) -> Result<NormResult<T>> {
    let parts = sobolev_parts(f, k, p, w)?;
    let value = pairwise_sum(&parts.iter().map(|(_, v)| *v).collect::<Vec<_>>());
    let tail = f.spectrum().max_top_band_fraction(crate::lp::TOP_BAND_FRACTION);
    Ok(NormResult { value, truncation_tail: tail, meta: meta(f.grid(), w, None, "spectral derivatives") })
}

/// The individual terms `(α, ‖∂^α f‖_{L^p(w)})`, `|α| ≤ k`, in a fixed order.
pub fn sobolev_parts<T: Real>(f: &GridFunction<T>, k: usize, p: T, w: &WeightSpec<T>) -> Result<Vec<(Vec<usize>, T)>> {
    check_p(p)?;
    check_margin(f)?;
    let d = f.grid().dim();
    let spec = f.spectrum();
    let mut out = Vec::new();
    for order in 0..=k {
        for alpha in multi_indices(d, order) {
            let mut s = spec.clone();
            for (a, &m) in alpha.iter().enumerate() {
                s.differentiate_axis(a, m);
            }
            let g = s.to_function();
            let v = weighted_lp_of_values(f.grid(), &g.fiber_norms(), p, w)?;
            out.push((alpha, v));
        }
    }
    Ok(out)
}

/// Number of derivatives matched by the reflection used for smoothness `s`.
pub fn reflection_order<T: Real>(s: T) -> usize {
    let k = s.max(T::zero()).ceil().to_usize().unwrap_or(0) + 1;
    k.min(6)
}

/// Coefficients `a_l` of the higher-order reflection
/// `E f(x₁) = Σ_l a_l f(−λ_l x₁)` for `x₁ < 0`, `λ_l = 2l − 1`, solving
/// `Σ_l a_l (−λ_l)^j = 1` for `j = 0..=k` so `E f` is `C^k` across `x₁ = 0`.
pub fn reflection_coefficients<T: Real>(k: usize) -> Vec<T> {
    let n = k + 1;
    let mut m = CMatrix::<T>::zeros(n, n);
    for j in 0..n {
        for l in 0..n {
            let lam = -T::from_usize_lossy(2 * l + 1);
            m.set(j, l, Complex::new(lam.powi(j as i32), T::zero()));
        }
    }
    let rhs = vec![Complex::new(T::one(), T::zero()); n];
    m.solve(&rhs).expect("Vandermonde matrix with distinct nodes").into_iter().map(|z| z.re).collect()
}

/// Extends the `x₁ > 0` part of `f` to the full torus by higher-order
/// reflection of order `k`. Odd dilation factors map reflected nodes exactly
/// onto grid nodes; points beyond the torus contribute zero.
pub fn reflect_extend<T: Real>(f: &GridFunction<T>, k: usize) -> Result<GridFunction<T>> {
    let grid = f.grid();
    if grid.dim() == 0 || !grid.offset() {
        return Err(Error::InvalidGrid("reflection needs an offset normal axis".into()));
    }
    let coeffs = reflection_coefficients::<T>(k);
    let n = grid.shape()[0];
    let half = n / 2;
    let slab = grid.slab_len();
    let len = grid.len();
    let mut out = f.clone();
    for c in 0..f.fiber() {
        let src = f.component(c);
        let dst = &mut out.data_mut()[c * len..(c + 1) * len];
        for i in 0..half {
            let j = half - 1 - i;
            for t in 0..slab {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (l, &a) in coeffs.iter().enumerate() {
                    let lam = 2 * l + 1;
                    let node = half + lam * j + (lam - 1) / 2;
                    if node < n {
                        acc = acc + src[node * slab + t] * a;
                    }
                }
                dst[i * slab + t] = acc;
            }
        }
    }
    Ok(out)
}

/// Prepares the function whose full-space norm represents a B/F/H norm:
/// itself on the full space, a reflection on the half-space (A_p weights).
fn full_space_representative<T: Real>(
    f: &GridFunction<T>,
    s: T,
    p: T,
    w: &WeightSpec<T>,
) -> Result<(GridFunction<T>, WeightSpec<T>)> {
    match w.domain {
        Domain::FullSpace => Ok((f.clone(), *w)),
        Domain::HalfSpace => {
            if !w.is_ap(p) {
                return Err(Error::WeightRejected(format!(
                    "half-space Besov/Triebel–Lizorkin/Bessel norms need γ ∈ (−1, p−1); got γ = {}, p = {p}",
                    w.gamma
                )));
            }
            let ext = reflect_extend(f, reflection_order(s))?.with_support_margin(f.support_margin());
            Ok((ext, WeightSpec { gamma: w.gamma, domain: Domain::FullSpace }))
        }
    }
}

fn synthesis_tail<T: Real>(f: &GridFunction<T>, blocks: &[GridFunction<T>], p: T, w: &WeightSpec<T>) -> Result<T> {
    let mut rem = f.clone();
    for b in blocks {
        rem = rem.sub(b)?;
    }
    weighted_lp_of_values(f.grid(), &rem.fiber_norms(), p, w)
}

/// `‖(2^{ns} ‖S_n f‖_{L^p(w)})_n‖_{ℓ^q}`.
pub fn besov_norm<T: Real>(
    f: &GridFunction<T>,
    s: T,
    p: T,
    q: Exponent<T>,
    w: &WeightSpec<T>,
    sys: &LpSystem<T>,
) -> Result<NormResult<T>> {
    let parts = besov_block_norms(f, p, w, sys)?;
    let terms: Vec<T> = parts.norms.iter().enumerate().map(|(n, &v)| pow2::<T>(n as i32).powf(s) * v).collect();
    q.validate()?;
    Ok(NormResult {
        value: lq_norm(&terms, q),
        truncation_tail: parts.tail,
        meta: meta(f.grid(), w, Some(sys.n_blocks()), "Littlewood–Paley ℓ^q(L^p)"),
    })
}

/// Unscaled block norms `‖S_n f‖_{L^p(w)}` and the synthesis tail; lets
/// sweeps over `(s, q)` reuse one decomposition.
#[derive(Clone, Debug)]
pub struct BlockNorms<T> {
    pub norms: Vec<T>,
    pub tail: T,
}

pub fn besov_block_norms<T: Real>(f: &GridFunction<T>, p: T, w: &WeightSpec<T>, sys: &LpSystem<T>) -> Result<BlockNorms<T>> {
    check_p(p)?;
    check_margin(f)?;
    let (g, wf) = full_space_representative(f, T::zero(), p, w)?;
    let blocks = sys.blocks(&g)?;
    let norms = blocks
        .iter()
        .map(|b| weighted_lp_of_values(g.grid(), &b.fiber_norms(), p, &wf))
        .collect::<Result<Vec<_>>>()?;
    let tail = synthesis_tail(&g, &blocks, p, &wf)?;
    Ok(BlockNorms { norms, tail })
}

/// Besov norm from precomputed block norms.
pub fn besov_from_blocks<T: Real>(parts: &BlockNorms<T>, s: T, q: Exponent<T>) -> T {
    let terms: Vec<T> = parts.norms.iter().enumerate().map(|(n, &v)| pow2::<T>(n as i32).powf(s) * v).collect();
    lq_norm(&terms, q)
}

/// `‖ ‖(2^{ns} ‖S_n f(x)‖)_n‖_{ℓ^q} ‖_{L^p(w)}`.
pub fn triebel_norm<T: Real>(
    f: &GridFunction<T>,
    s: T,
    p: T,
    q: Exponent<T>,
    w: &WeightSpec<T>,
    sys: &LpSystem<T>,
) -> Result<NormResult<T>> {
    let fields = triebel_fields(f, p, w, sys)?;
    q.validate()?;
    Ok(NormResult {
        value: triebel_from_fields(&fields, s, p, q)?,
        truncation_tail: fields.tail,
        meta: meta(f.grid(), w, Some(sys.n_blocks()), "Littlewood–Paley L^p(ℓ^q)"),
    })
}

/// Pointwise block magnitudes `‖S_n f(x)‖`, reusable across `(s, q)`.
#[derive(Clone, Debug)]
pub struct BlockFields<T> {
    grid: PeriodizedGrid<T>,
    weight: WeightSpec<T>,
    fields: Vec<Vec<T>>,
    pub tail: T,
}

pub fn triebel_fields<T: Real>(f: &GridFunction<T>, p: T, w: &WeightSpec<T>, sys: &LpSystem<T>) -> Result<BlockFields<T>> {
    check_p(p)?;
    check_margin(f)?;
    let (g, wf) = full_space_representative(f, T::zero(), p, w)?;
    let blocks = sys.blocks(&g)?;
    let tail = synthesis_tail(&g, &blocks, p, &wf)?;
    Ok(BlockFields { grid: g.grid().clone(), weight: wf, fields: blocks.iter().map(|b| b.fiber_norms()).collect(), tail })
}

/// Triebel–Lizorkin norm from precomputed fields.
pub fn triebel_from_fields<T: Real>(fields: &BlockFields<T>, s: T, p: T, q: Exponent<T>) -> Result<T> {
    let len = fields.grid.len();
    let scales: Vec<T> = (0..fields.fields.len()).map(|n| pow2::<T>(n as i32).powf(s)).collect();
    let mut terms = vec![T::zero(); fields.fields.len()];
    let pointwise: Vec<T> = (0..len)
        .map(|idx| {
            for (n, fld) in fields.fields.iter().enumerate() {
                terms[n] = scales[n] * fld[idx];
            }
            lq_norm(&terms, q)
        })
        .collect();
    weighted_lp_of_values(&fields.grid, &pointwise, p, &fields.weight)
}

/// `‖(1 + |ξ|²)^{s/2} f̂‖_{L^p(w)}`; requires an A_p weight.
pub fn bessel_norm<T: Real>(f: &GridFunction<T>, s: T, p: T, w: &WeightSpec<T>) -> Result<NormResult<T>> {
    check_p(p)?;
    check_margin(f)?;
    if !w.is_ap(p) {
        return Err(Error::WeightRejected(format!(
            "Bessel potential norms need γ ∈ (−1, p−1); got γ = {}, p = {p}",
            w.gamma
        )));
    }
    let (g, wf) = full_space_representative(f, s, p, w)?;
    let smoothed = apply_multiplier(&g, &SpectralMultiplier::bessel(g.grid(), s))?;
    let value = weighted_lp_of_values(g.grid(), &smoothed.fiber_norms(), p, &wf)?;
    let tail = g.spectrum().max_top_band_fraction(crate::lp::TOP_BAND_FRACTION);
    Ok(NormResult { value, truncation_tail: tail, meta: meta(f.grid(), w, None, "Bessel multiplier") })
}

/// Multiplication by `|x₁|^κ` (the operator `M^κ` on the half-line).
pub fn weight_multiply<T: Real>(f: &GridFunction<T>, kappa: T) -> Result<GridFunction<T>> {
    let grid = f.grid();
    if grid.dim() == 0 {
        return Err(Error::InvalidGrid("weight multiplication needs a normal axis".into()));
    }
    let slab = grid.slab_len();
    let len = grid.len();
    let x: Vec<T> = grid.coordinates(0);
    let mut out = f.clone();
    for c in 0..f.fiber() {
        for (idx, z) in out.data_mut()[c * len..(c + 1) * len].iter_mut().enumerate() {
            *z = *z * x[idx / slab].abs().powf(kappa);
        }
    }
    out.check_finite("weight_multiply")?;
    Ok(out)
}

/// Outcome of a Hardy ratio evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct HardyReport<T> {
    /// `‖u‖_{L^p(ℝ₊, w_{γ−p})} / ‖u'‖_{L^p(ℝ₊, w_γ)}`.
    pub ratio: T,
    /// Spectrally evaluated `|u(0)|`.
    pub boundary_value: T,
    /// The classical sharp constant `p/|γ − p + 1|`.
    pub sharp_constant: T,
}

/// Boundary-value tolerance for the `γ < p − 1` branch.
pub const HARDY_BOUNDARY_TOLERANCE: f64 = 1e-8;

/// Ratio in the weighted Hardy inequality on the half-line.
///
/// Requires `γ > p − 1`, or `γ < p − 1` together with `u(0) = 0` (checked to
/// `1e−8` relative to `sup|u|`). `γ = p − 1` is rejected.
pub fn hardy_ratio<T: Real>(u: &GridFunction<T>, p: T, gamma: T) -> Result<HardyReport<T>> {
    check_p(p)?;
    check_margin(u)?;
    let grid = u.grid();
    if grid.dim() != 1 || !grid.offset() {
        return Err(Error::InvalidGrid("the Hardy ratio is defined on an offset 1-D grid".into()));
    }
    let shift = gamma - p + T::one();
    if shift.abs() <= T::epsilon() * T::lit(64.0) * (T::one() + p) {
        return Err(Error::HardyRejected(format!("γ = p − 1 = {gamma} is excluded")));
    }
    WeightSpec::new(gamma, Domain::HalfSpace)?;
    let spec = u.spectrum();
    let boundary_value = spec.restrict_axis0()?.data()[0].norm();
    if shift < T::zero() && boundary_value > T::lit(HARDY_BOUNDARY_TOLERANCE) * u.max_abs().max(T::min_positive_value()) {
        return Err(Error::HardyRejected(format!(
            "γ < p − 1 requires u(0) = 0, but |u(0)| = {:.3e}", boundary_value.to_f64_lossy()
        )));
    }
    let mut ds = spec.clone();
    ds.differentiate_axis(0, 1);
    let du = ds.to_function();
    let w = WeightSpec { gamma, domain: Domain::HalfSpace };
    let den = weighted_lp_of_values(grid, &du.fiber_norms(), p, &w)?;
    let shifted = gamma - p;
    let num = if shifted > -T::one() {
        weighted_lp_of_values(grid, &u.fiber_norms(), p, &WeightSpec { gamma: shifted, domain: Domain::HalfSpace })?
    } else {
        let x = grid.coordinates(0);
        let v: Vec<T> = u.fiber_norms().iter().zip(&x).map(|(&a, &t)| a / t.abs()).collect();
        weighted_lp_of_values(grid, &v, p, &w)?
    };
    if den == T::zero() {
        return Err(Error::InvalidArgument("u' vanishes identically".into()));
    }
    Ok(HardyReport { ratio: num / den, boundary_value, sharp_constant: p / shift.abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_rejects_gamma_at_minus_one() {
        assert!(WeightSpec::<f64>::new(-1.0, Domain::FullSpace).is_err());
        assert!(WeightSpec::<f64>::new(-0.99, Domain::FullSpace).is_ok());
    }

    #[test]
    fn masses_integrate_power_exactly() {
        // Σ masses over x₁ ∈ (0, L) = L^{γ+1}/(γ+1).
        let grid = PeriodizedGrid::<f64>::new(vec![64], 2.0, true).unwrap();
        for &g in &[-0.9, -0.5, 0.0, 1.5, 4.0] {
            let w = WeightSpec::new(g, Domain::HalfSpace).unwrap();
            let total: f64 = cell_masses(&grid, &w).unwrap().iter().sum();
            let exact = 2f64.powf(g + 1.0) / (g + 1.0);
            assert!((total - exact).abs() < 1e-13 * exact, "γ={g}");
        }
    }

    #[test]
    fn centered_masses_integrate_power_exactly() {
        let grid = PeriodizedGrid::<f64>::new(vec![32], 2.0, false).unwrap();
        let w = WeightSpec::new(0.5, Domain::FullSpace).unwrap();
        let total: f64 = cell_masses(&grid, &w).unwrap().iter().sum();
        // Cells cover [−L − h/2, L − h/2).
        let h = grid.spacing(0);
        let exact = ((2.0 + h / 2.0).powf(1.5) + (2.0 - h / 2.0).powf(1.5)) / 1.5;
        assert!((total - exact).abs() < 1e-13 * exact);
    }

    #[test]
    fn multi_indices_count() {
        assert_eq!(multi_indices(2, 2).len(), 3);
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert_eq!(multi_indices(0, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn reflection_matches_derivatives() {
        for k in 0..5 {
            let a = reflection_coefficients::<f64>(k);
            for j in 0..=k {
                let s: f64 = a.iter().enumerate().map(|(l, &c)| c * (-((2 * l + 1) as f64)).powi(j as i32)).sum();
                assert!((s - 1.0).abs() < 1e-10);
            }
        }
    }
}
