//! Normal boundary operators `B = Σ_{|α|≤m} b_α Tr ∂^α`, normal systems of
//! strictly increasing orders, the right inverse `ext_B` and the extended
//! system `C` whose kernel coincides with that of all traces up to a given
//! order.
//!
//! Coefficients are matrix fields on the boundary grid; tangential
//! derivatives are applied spectrally and coefficient products pointwise.

use crate::error::{Error, Result};
use crate::grid::{GridFunction, PeriodizedGrid};
use crate::linalg::CMatrix;
use crate::lp::{LpSystem, DEFAULT_TAIL_THRESHOLD, TOP_BAND_FRACTION};
use crate::scalar::{Complex, Real};
use crate::trace_ext::{ext_m, trace_m, EtaFamily};

/// Largest supported operator order.
pub const MAX_ORDER: usize = 4;

/// Tolerance of the pointwise right-inverse identity `b·b^c = I`.
pub const CORETRACTION_TOLERANCE: f64 = 1e-12;

/// Tolerance of the pointwise projection identity `π² = π`.
pub const PROJECTION_TOLERANCE: f64 = 1e-11;

/// Relative rank threshold of the default pseudoinverse coretraction.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// A field of `rows × cols` complex matrices on a boundary grid
/// (node-major, each matrix row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixField<T> {
    grid: PeriodizedGrid<T>,
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> MatrixField<T> {
    pub fn constant(grid: &PeriodizedGrid<T>, m: &CMatrix<T>) -> Self {
        let data = (0..grid.len()).flat_map(|_| m.data().to_vec()).collect();
        Self { grid: grid.clone(), rows: m.rows(), cols: m.cols(), data }
    }

    pub fn identity(grid: &PeriodizedGrid<T>, n: usize) -> Self {
        Self::constant(grid, &CMatrix::identity(n))
    }

    pub fn zeros(grid: &PeriodizedGrid<T>, rows: usize, cols: usize) -> Self {
        Self::constant(grid, &CMatrix::zeros(rows, cols))
    }

    /// Samples `f(x̃)` at every boundary node.
    pub fn from_fn(grid: &PeriodizedGrid<T>, rows: usize, cols: usize, f: impl Fn(&[T]) -> CMatrix<T>) -> Result<Self> {
        let mut data = Vec::with_capacity(grid.len() * rows * cols);
        for idx in 0..grid.len() {
            let m = f(&grid.node(idx));
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "coefficient returned a {}×{} matrix, expected {rows}×{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
            data.extend_from_slice(m.data());
        }
        Ok(Self { grid: grid.clone(), rows, cols, data })
    }

    pub fn grid(&self) -> &PeriodizedGrid<T> {
        &self.grid
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Matrix at boundary node `idx`.
    pub fn at(&self, idx: usize) -> CMatrix<T> {
        let size = self.rows * self.cols;
        CMatrix::from_rows(self.rows, self.cols, self.data[idx * size..(idx + 1) * size].to_vec())
    }

    fn map_nodes(&self, f: impl Fn(CMatrix<T>) -> Option<CMatrix<T>>) -> Option<Self> {
        let mut out = Vec::with_capacity(self.data.len());
        let (mut rows, mut cols) = (self.rows, self.cols);
        for idx in 0..self.grid.len() {
            let m = f(self.at(idx))?;
            rows = m.rows();
            cols = m.cols();
            out.extend_from_slice(m.data());
        }
        Some(Self { grid: self.grid.clone(), rows, cols, data: out })
    }

    /// Pointwise product `self(x̃)·other(x̃)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid || self.cols != other.rows {
            return Err(Error::ShapeMismatch("matrix fields cannot be multiplied".into()));
        }
        let mut out = Vec::with_capacity(self.grid.len() * self.rows * other.cols);
        for idx in 0..self.grid.len() {
            out.extend_from_slice(self.at(idx).mul(&other.at(idx)).data());
        }
        Ok(Self { grid: self.grid.clone(), rows: self.rows, cols: other.cols, data: out })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid || self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("matrix fields cannot be subtracted".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Ok(Self { data, ..self.clone() })
    }

    /// Pointwise matrix–vector product with a boundary function.
    pub fn apply(&self, g: &GridFunction<T>) -> Result<GridFunction<T>> {
        if g.grid() != &self.grid {
            return Err(Error::ShapeMismatch("coefficient and boundary function use different grids".into()));
        }
        if g.fiber() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "coefficient expects fiber dimension {}, got {}",
                self.cols,
                g.fiber()
            )));
        }
        let len = self.grid.len();
        let size = self.rows * self.cols;
        let mut out = GridFunction::zeros(&self.grid, self.rows);
        let data = out.data_mut();
        for idx in 0..len {
            let m = &self.data[idx * size..(idx + 1) * size];
            for i in 0..self.rows {
                let mut acc = Complex::new(T::zero(), T::zero());
                for c in 0..self.cols {
                    acc = acc + m[i * self.cols + c] * g.value(idx, c);
                }
                data[i * len + idx] = acc;
            }
        }
        Ok(out.with_support_margin(g.support_margin()))
    }

    /// `sup_x̃ ‖m(x̃)‖` (Frobenius norm, an upper bound of the operator norm).
    pub fn sup_norm(&self) -> T {
        (0..self.grid.len()).map(|idx| self.at(idx).norm_bound()).fold(T::zero(), T::max)
    }

    /// Largest entry modulus over all nodes.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Entries as an `rows·cols`-component boundary function.
    fn entries(&self) -> GridFunction<T> {
        let size = self.rows * self.cols;
        let len = self.grid.len();
        let mut data = vec![Complex::new(T::zero(), T::zero()); size * len];
        for idx in 0..len {
            for e in 0..size {
                data[e * len + idx] = self.data[idx * size + e];
            }
        }
        GridFunction::from_data(&self.grid, size, data).expect("entry layout matches the grid")
    }

    /// Rejects fields with spectral mass in the top band of any axis.
    pub fn check_band_limited(&self, context: &str) -> Result<()> {
        if self.grid.dim() == 0 {
            return Ok(());
        }
        let tail = self.entries().spectrum().max_top_band_fraction(TOP_BAND_FRACTION);
        if tail > T::lit(DEFAULT_TAIL_THRESHOLD) {
            return Err(Error::SpectralTail {
                tail: tail.to_f64_lossy(),
                threshold: DEFAULT_TAIL_THRESHOLD,
                context: context.to_string(),
            });
        }
        Ok(())
    }

    /// Pointwise Moore–Penrose right inverse; fails where the rank (threshold
    /// `1e−8·‖b‖`) drops below the row count.
    pub fn right_pseudo_inverse(&self) -> Result<Self> {
        let threshold = T::lit(RANK_THRESHOLD);
        self.map_nodes(|m| m.right_pseudo_inverse(threshold)).ok_or_else(|| {
            Error::BoundarySystem("leading coefficient is not of full row rank at some boundary node".into())
        })
    }
}

/// One term `b_α Tr ∂^α` of a boundary operator.
#[derive(Clone, Debug)]
pub struct BoundaryTerm<T> {
    /// Multi-index `α` over all `d` axes (`α₁` is the normal order).
    pub alpha: Vec<usize>,
    /// Coefficient `b_α`, an `r′ × r` matrix field.
    pub coefficient: MatrixField<T>,
}

impl<T: Real> BoundaryTerm<T> {
    pub fn new(alpha: Vec<usize>, coefficient: MatrixField<T>) -> Self {
        Self { alpha, coefficient }
    }

    fn order(&self) -> usize {
        self.alpha.iter().sum()
    }
}

/// A normal boundary operator `B = Σ_{|α|≤m} b_α Tr ∂^α` of order `m`.
#[derive(Clone, Debug)]
pub struct BoundaryOperator<T> {
    grid: PeriodizedGrid<T>,
    order: usize,
    fiber_in: usize,
    fiber_out: usize,
    terms: Vec<BoundaryTerm<T>>,
}

impl<T: Real> BoundaryOperator<T> {
    /// Validates the terms: common coefficient shapes on the boundary grid,
    /// band-limited coefficients and a non-vanishing top-order coefficient.
    pub fn new(grid: &PeriodizedGrid<T>, terms: Vec<BoundaryTerm<T>>) -> Result<Self> {
        let bgrid = grid.boundary()?;
        let first = terms.first().ok_or_else(|| Error::BoundarySystem("boundary operator without terms".into()))?;
        let (fiber_out, fiber_in) = (first.coefficient.rows(), first.coefficient.cols());
        let mut order = 0;
        for t in &terms {
            if t.alpha.len() != grid.dim() {
                return Err(Error::ShapeMismatch(format!(
                    "multi-index {:?} has {} entries on a {}-D grid",
                    t.alpha,
                    t.alpha.len(),
                    grid.dim()
                )));
            }
            if t.coefficient.grid() != &bgrid {
                return Err(Error::ShapeMismatch("coefficient does not live on the boundary grid".into()));
            }
            if t.coefficient.rows() != fiber_out || t.coefficient.cols() != fiber_in {
                return Err(Error::ShapeMismatch("coefficients of one operator must share their shape".into()));
            }
            t.coefficient.check_band_limited("boundary coefficient")?;
            order = order.max(t.order());
        }
        if order > MAX_ORDER {
            return Err(Error::BoundarySystem(format!("order {order} exceeds the supported maximum {MAX_ORDER}")));
        }
        if !terms.iter().any(|t| t.order() == order && t.coefficient.max_abs() > T::zero()) {
            return Err(Error::BoundarySystem(format!("all coefficients of order {order} vanish identically")));
        }
        Ok(Self { grid: grid.clone(), order, fiber_in, fiber_out, terms })
    }

    /// `B = Tr_j` on `r`-vector functions.
    pub fn trace(grid: &PeriodizedGrid<T>, j: usize, r: usize) -> Result<Self> {
        let mut alpha = vec![0; grid.dim()];
        alpha[0] = j;
        Self::new(grid, vec![BoundaryTerm::new(alpha, MatrixField::identity(&grid.boundary()?, r))])
    }

    /// `B = Σ_j b_j Tr_j` with matrix fields and no tangential derivatives.
    pub fn normal(grid: &PeriodizedGrid<T>, coefficients: Vec<(usize, MatrixField<T>)>) -> Result<Self> {
        let terms = coefficients
            .into_iter()
            .map(|(j, b)| {
                let mut alpha = vec![0; grid.dim()];
                alpha[0] = j;
                BoundaryTerm::new(alpha, b)
            })
            .collect();
        Self::new(grid, terms)
    }

    pub fn grid(&self) -> &PeriodizedGrid<T> {
        &self.grid
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn fiber_in(&self) -> usize {
        self.fiber_in
    }

    pub fn fiber_out(&self) -> usize {
        self.fiber_out
    }

    pub fn terms(&self) -> &[BoundaryTerm<T>] {
        &self.terms
    }

    /// Leading normal coefficient `b_m` (the coefficient of `Tr ∂₁^m`).
    pub fn leading_coefficient(&self) -> Result<MatrixField<T>> {
        let mut out = MatrixField::zeros(&self.grid.boundary()?, self.fiber_out, self.fiber_in);
        for t in &self.terms {
            if t.alpha[0] == self.order && t.order() == self.order {
                out = MatrixField { data: out.data.iter().zip(&t.coefficient.data).map(|(&a, &b)| a + b).collect(), ..out };
            }
        }
        Ok(out)
    }

    /// `b_j(x̃, ∇_x̃) h = Σ_{α₁=j} b_α ∂̃^{α̃} h` applied to a boundary function
    /// standing for `Tr_j f`.
    pub fn apply_normal_part(&self, j: usize, h: &GridFunction<T>) -> Result<GridFunction<T>> {
        let bgrid = self.grid.boundary()?;
        if h.grid() != &bgrid || h.fiber() != self.fiber_in {
            return Err(Error::ShapeMismatch("normal part applied to incompatible boundary data".into()));
        }
        let mut out = GridFunction::zeros(&bgrid, self.fiber_out).with_support_margin(h.support_margin());
        for t in self.terms.iter().filter(|t| t.alpha[0] == j) {
            let mut spec = h.spectrum();
            for (a, &k) in t.alpha.iter().enumerate().skip(1) {
                spec.differentiate_axis(a - 1, k);
            }
            out = out.add(&t.coefficient.apply(&spec.to_function())?)?;
        }
        Ok(out)
    }

    /// `B f = Σ_j b_j(x̃, ∇_x̃) Tr_j f`.
    pub fn apply(&self, f: &GridFunction<T>, sys: &LpSystem<T>) -> Result<GridFunction<T>> {
        if f.fiber() != self.fiber_in {
            return Err(Error::ShapeMismatch(format!(
                "operator acts on {}-vectors, got fiber dimension {}",
                self.fiber_in,
                f.fiber()
            )));
        }
        let mut out = GridFunction::zeros(&self.grid.boundary()?, self.fiber_out).with_support_margin(f.support_margin());
        for j in 0..=self.order {
            if self.terms.iter().any(|t| t.alpha[0] == j) {
                out = out.add(&self.apply_normal_part(j, &trace_m(f, j, sys)?)?)?;
            }
        }
        Ok(out)
    }

    /// Lower part `Σ_{j<m} b_j(x̃, ∇_x̃) Tr_j f`.
    fn apply_lower(&self, f: &GridFunction<T>, sys: &LpSystem<T>) -> Result<GridFunction<T>> {
        let mut out = GridFunction::zeros(&self.grid.boundary()?, self.fiber_out).with_support_margin(f.support_margin());
        for j in 0..self.order {
            if self.terms.iter().any(|t| t.alpha[0] == j) {
                out = out.add(&self.apply_normal_part(j, &trace_m(f, j, sys)?)?)?;
            }
        }
        Ok(out)
    }
}

/// A normal system `(B^{m₀}, …, B^{m_n})`, `0 ≤ m₀ < … < m_n`, with
/// coretractions `b^c_i` of the leading coefficients and the projections
/// `π_i = b^c_i b_i`.
#[derive(Clone, Debug)]
pub struct NormalSystem<T> {
    grid: PeriodizedGrid<T>,
    fiber: usize,
    operators: Vec<BoundaryOperator<T>>,
    leading: Vec<MatrixField<T>>,
    coretractions: Vec<MatrixField<T>>,
    projections: Vec<MatrixField<T>>,
}

impl<T: Real> NormalSystem<T> {
    /// Builds a system; `coretractions = None` selects the pointwise
    /// Moore–Penrose right inverse of every leading coefficient.
    pub fn new(operators: Vec<BoundaryOperator<T>>, coretractions: Option<Vec<MatrixField<T>>>) -> Result<Self> {
        let first = operators.first().ok_or_else(|| Error::BoundarySystem("empty normal system".into()))?;
        let grid = first.grid().clone();
        let fiber = first.fiber_in();
        for w in operators.windows(2) {
            if w[1].order() <= w[0].order() {
                return Err(Error::BoundarySystem(format!(
                    "orders must increase strictly, got {} then {}",
                    w[0].order(),
                    w[1].order()
                )));
            }
        }
        for op in &operators {
            if op.grid() != &grid || op.fiber_in() != fiber {
                return Err(Error::BoundarySystem("operators act on different grids or fibers".into()));
            }
        }
        let leading: Vec<MatrixField<T>> = operators.iter().map(|op| op.leading_coefficient()).collect::<Result<_>>()?;
        let coretractions = match coretractions {
            Some(c) => {
                if c.len() != operators.len() {
                    return Err(Error::BoundarySystem("one coretraction per operator is required".into()));
                }
                c
            }
            None => leading.iter().map(|b| b.right_pseudo_inverse()).collect::<Result<_>>()?,
        };
        let mut projections = Vec::with_capacity(operators.len());
        for (i, (b, bc)) in leading.iter().zip(&coretractions).enumerate() {
            bc.check_band_limited("coretraction")?;
            let id = MatrixField::identity(b.grid(), b.rows());
            let scale = T::one().max(b.sup_norm() * bc.sup_norm());
            let defect = b.mul(bc)?.sub(&id)?.max_abs();
            if defect > T::lit(CORETRACTION_TOLERANCE) * scale {
                return Err(Error::BoundarySystem(format!(
                    "coretraction {i} violates b·b^c = I by {:.3e}",
                    defect.to_f64_lossy()
                )));
            }
            let pi = bc.mul(b)?;
            let idem = pi.mul(&pi)?.sub(&pi)?.max_abs();
            if idem > T::lit(PROJECTION_TOLERANCE) * scale * scale {
                return Err(Error::BoundarySystem(format!(
                    "projection {i} violates π² = π by {:.3e}",
                    idem.to_f64_lossy()
                )));
            }
            projections.push(pi);
        }
        Ok(Self { grid, fiber, operators, leading, coretractions, projections })
    }

    pub fn grid(&self) -> &PeriodizedGrid<T> {
        &self.grid
    }

    pub fn fiber(&self) -> usize {
        self.fiber
    }

    pub fn operators(&self) -> &[BoundaryOperator<T>] {
        &self.operators
    }

    pub fn orders(&self) -> Vec<usize> {
        self.operators.iter().map(|op| op.order()).collect()
    }

    /// Highest order `m_n`.
    pub fn top_order(&self) -> usize {
        self.operators.last().map_or(0, |op| op.order())
    }

    pub fn leading_coefficient(&self, i: usize) -> &MatrixField<T> {
        &self.leading[i]
    }

    pub fn coretraction(&self, i: usize) -> &MatrixField<T> {
        &self.coretractions[i]
    }

    pub fn projection(&self, i: usize) -> &MatrixField<T> {
        &self.projections[i]
    }

    fn index_of_order(&self, j: usize) -> Option<usize> {
        self.operators.iter().position(|op| op.order() == j)
    }

    /// `B̃^{m_i} f = b^c_i B^{m_i} f`.
    pub fn apply_tilde(&self, i: usize, f: &GridFunction<T>, sys: &LpSystem<T>) -> Result<GridFunction<T>> {
        self.coretractions[i].apply(&self.operators[i].apply(f, sys)?)
    }

    /// `C̃^{m_i} f = −b^c_i Σ_{j<m_i} b_{i,j}(x̃, ∇_x̃) Tr_j f`.
    fn c_tilde(&self, i: usize, f: &GridFunction<T>, sys: &LpSystem<T>) -> Result<GridFunction<T>> {
        Ok(self.coretractions[i].apply(&self.operators[i].apply_lower(f, sys)?)?.scaled(Complex::new(-T::one(), T::zero())))
    }

    /// Measured constants of the kernel equivalence of `B̃^{m_i}` and
    /// `B^{m_i}`: `(sup‖b^c‖, sup‖b‖)`, so that `‖B̃v‖ ≤ sup‖b^c‖·‖Bv‖` and
    /// `‖Bv‖ ≤ sup‖b‖·‖B̃v‖` (because `b·B̃ = B`).
    pub fn field_bounds(&self, i: usize) -> (T, T) {
        (self.coretractions[i].sup_norm(), self.leading[i].sup_norm())
    }
}

/// `ext_B (g₀, …, g_n)` by the recursion
/// `f_j = f_{j−1} + ext_j(h_j + C̃^j f_{j−1} − Tr_j f_{j−1})`, `j = 0..=m_n`,
/// with `h_{m_i} = b^c_i g_i` and `h_j = C̃^j = 0` for orders outside the
/// system. Then `B^{m_i} ext_B g = g_i` and `Tr_j ext_B g = 0` for the
/// skipped orders.
pub fn ext_boundary<T: Real>(
    system: &NormalSystem<T>,
    gs: &[GridFunction<T>],
    eta: &EtaFamily<T>,
    bsys: &LpSystem<T>,
    sys: &LpSystem<T>,
) -> Result<GridFunction<T>> {
    if gs.len() != system.operators().len() {
        return Err(Error::BoundarySystem(format!(
            "{} boundary data for {} operators",
            gs.len(),
            system.operators().len()
        )));
    }
    if system.grid() != eta.grid() {
        return Err(Error::ShapeMismatch("system and kernel family use different grids".into()));
    }
    if system.top_order() > eta.m_max() {
        return Err(Error::InvalidArgument(format!(
            "system order {} exceeds the kernel family's m_max = {}",
            system.top_order(),
            eta.m_max()
        )));
    }
    for (g, op) in gs.iter().zip(system.operators()) {
        if g.fiber() != op.fiber_out() {
            return Err(Error::ShapeMismatch(format!(
                "boundary datum has fiber {} but the operator maps to {}",
                g.fiber(),
                op.fiber_out()
            )));
        }
    }
    let mut f = GridFunction::zeros(eta.grid(), system.fiber());
    for j in 0..=system.top_order() {
        let mut update = if j == 0 {
            GridFunction::zeros(eta.boundary_grid(), system.fiber())
        } else {
            trace_m(&f, j, sys)?.scaled(Complex::new(-T::one(), T::zero()))
        };
        if let Some(i) = system.index_of_order(j) {
            update = update.add(&system.coretraction(i).apply(&gs[i])?)?;
            if j > 0 {
                update = update.add(&system.c_tilde(i, &f, sys)?)?;
            }
        }
        f = f.add(&ext_m(&update, j, eta, bsys)?)?;
    }
    Ok(f)
}

/// Component of the extended system `C = (C⁰, …, C^a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CComponent {
    /// `C^j = Tr_j` (order outside the system).
    Trace,
    /// `C^j = (1 − π_i) Tr_j + B̃^{m_i}` for `j = m_i`.
    Projected(usize),
}

/// The extended system `C⁰, …, C^a` of a normal system.
#[derive(Clone, Debug)]
pub struct ExtendedSystem<'a, T> {
    system: &'a NormalSystem<T>,
    components: Vec<CComponent>,
}

/// Builds `C⁰, …, C^a` (`a ≥ m_n`).
pub fn extended_system_c<T: Real>(system: &NormalSystem<T>, a: usize) -> Result<ExtendedSystem<'_, T>> {
    if a < system.top_order() {
        return Err(Error::InvalidArgument(format!("order {a} is below the system's top order {}", system.top_order())));
    }
    let components =
        (0..=a).map(|j| system.index_of_order(j).map_or(CComponent::Trace, CComponent::Projected)).collect();
    Ok(ExtendedSystem { system, components })
}

impl<T: Real> ExtendedSystem<'_, T> {
    pub fn max_order(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[CComponent] {
        &self.components
    }

    /// `C^j f`.
    pub fn apply(&self, j: usize, f: &GridFunction<T>, sys: &LpSystem<T>) -> Result<GridFunction<T>> {
        let comp = *self
            .components
            .get(j)
            .ok_or_else(|| Error::InvalidArgument(format!("order {j} exceeds {}", self.max_order())))?;
        let tr = trace_m(f, j, sys)?;
        match comp {
            CComponent::Trace => Ok(tr),
            CComponent::Projected(i) => {
                let projected = self.system.projection(i).apply(&tr)?;
                tr.sub(&projected)?.add(&self.system.apply_tilde(i, f, sys)?)
            }
        }
    }
}

/// Outcome of comparing `‖C v‖` with `‖(Tr₀ v, …, Tr_a v)‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelReport<T> {
    /// `max_x̃ |C^j v|` for `j = 0..=a`.
    pub c_residuals: Vec<T>,
    /// `max_x̃ |Tr_j v|` for `j = 0..=a`.
    pub trace_residuals: Vec<T>,
    /// Reference scale `max |v|`.
    pub scale: T,
    /// Relative threshold separating "small" from "large".
    pub tolerance: T,
    pub c_small: bool,
    pub traces_small: bool,
}

impl<T: Real> KernelReport<T> {
    /// The two kernel predicates agree.
    pub fn agrees(&self) -> bool {
        self.c_small == self.traces_small
    }

    /// `max C-residual / max trace-residual` (comparability of both sides).
    pub fn ratio(&self) -> T {
        let c = self.c_residuals.iter().copied().fold(T::zero(), T::max);
        let t = self.trace_residuals.iter().copied().fold(T::zero(), T::max);
        if t == T::zero() {
            if c == T::zero() {
                T::one()
            } else {
                T::infinity()
            }
        } else {
            c / t
        }
    }
}

/// Evaluates both sides of `C v = 0 ⇔ Tr_j v = 0 (j ≤ a)` for one `v`.
pub fn kernel_equiv_check<T: Real>(
    c: &ExtendedSystem<'_, T>,
    v: &GridFunction<T>,
    sys: &LpSystem<T>,
    tolerance: T,
) -> Result<KernelReport<T>> {
    let mut c_residuals = Vec::with_capacity(c.max_order() + 1);
    let mut trace_residuals = Vec::with_capacity(c.max_order() + 1);
    for j in 0..=c.max_order() {
        c_residuals.push(c.apply(j, v, sys)?.max_abs());
        trace_residuals.push(trace_m(v, j, sys)?.max_abs());
    }
    let scale = v.max_abs().max(T::min_positive_value());
    let small = |r: &[T]| r.iter().all(|&x| x <= tolerance * scale);
    Ok(KernelReport {
        c_small: small(&c_residuals),
        traces_small: small(&trace_residuals),
        c_residuals,
        trace_residuals,
        scale,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pseudo_inverse_field_is_a_right_inverse() {
        let grid = PeriodizedGrid::<f64>::standard(vec![16]).unwrap();
        let b = MatrixField::from_fn(&grid, 1, 2, |x| {
            CMatrix::from_real(1, 2, &[1.0 + 0.5 * (x[0] / 16.0).cos(), 0.3])
        })
        .unwrap();
        let bc = b.right_pseudo_inverse().unwrap();
        let id = MatrixField::identity(&grid, 1);
        assert!(b.mul(&bc).unwrap().sub(&id).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_coefficient_is_rejected() {
        let grid = PeriodizedGrid::<f64>::standard(vec![8]).unwrap();
        let b = MatrixField::constant(&grid, &CMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]));
        assert!(b.right_pseudo_inverse().is_err());
    }

    #[test]
    fn orders_must_increase() {
        let grid = PeriodizedGrid::<f64>::standard(vec![16, 16]).unwrap();
        let ops = vec![BoundaryOperator::trace(&grid, 1, 1).unwrap(), BoundaryOperator::trace(&grid, 1, 1).unwrap()];
        assert!(NormalSystem::new(ops, None).is_err());
    }

    #[test]
    fn vanishing_top_coefficient_is_rejected() {
        let grid = PeriodizedGrid::<f64>::standard(vec![16, 16]).unwrap();
        let z = MatrixField::zeros(&grid.boundary().unwrap(), 1, 1);
        assert!(BoundaryOperator::normal(&grid, vec![(2, z)]).is_err());
    }
}
