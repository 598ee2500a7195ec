//! Boundary operators and systems: application against composition oracles,
//! the right inverse `ext_B`, and the extended system `C`.

use tracelab_core::boundary::{
    ext_boundary, extended_system_c, kernel_equiv_check, BoundaryOperator, BoundaryTerm, CComponent, MatrixField,
    NormalSystem,
};
use tracelab_core::grid::{GridFunction, PeriodizedGrid};
use tracelab_core::linalg::CMatrix;
use tracelab_core::lp::{apply_multiplier, build_lp_system, LpGenerator, LpSystem, SpectralMultiplier};
use tracelab_core::trace_ext::{ext_m, ext_vector, trace, trace_m, EtaFamily, EtaParams};
use tracelab_core::Complex;

struct Setup {
    grid: PeriodizedGrid<f64>,
    bgrid: PeriodizedGrid<f64>,
    eta: EtaFamily<f64>,
    bsys: LpSystem<f64>,
    sys: LpSystem<f64>,
}

fn setup() -> Setup {
    let grid = PeriodizedGrid::standard(vec![256, 256]).unwrap();
    let eta = EtaFamily::new(&grid, 2, EtaParams::default()).unwrap();
    let bgrid = eta.boundary_grid().clone();
    let bsys = build_lp_system(LpGenerator::standard(), 2, &bgrid).unwrap();
    let sys = LpSystem::standard(&grid).unwrap();
    Setup { grid, bgrid, eta, bsys, sys }
}

fn wave(grid: &PeriodizedGrid<f64>, r: usize, shift: f64) -> GridFunction<f64> {
    GridFunction::from_fn(grid, r, |y, out| {
        for (c, o) in out.iter_mut().enumerate() {
            let a = 0.5 + 0.75 * c as f64;
            *o = Complex::new((a * y[0] + shift).cos(), 0.3 * (1.25 * y[0] - shift).sin());
        }
    })
}

fn max_diff(a: &GridFunction<f64>, b: &GridFunction<f64>) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `f(x₁, y) = cos(x₁)·g(y)·exp(−x₁²/50)`: a windowed product.
fn windowed(s: &Setup) -> (GridFunction<f64>, GridFunction<f64>) {
    let g = |y: f64| (0.75 * y).sin() + 0.5;
    let f = GridFunction::from_scalar_fn(&s.grid, |x| Complex::new(x[0].cos() * g(x[1]) * (-x[0] * x[0] / 50.0).exp(), 0.0));
    let tr = GridFunction::from_scalar_fn(&s.bgrid, |y| Complex::new(g(y[0]), 0.0));
    (f, tr)
}

fn variable_scalar(grid: &PeriodizedGrid<f64>) -> MatrixField<f64> {
    MatrixField::from_fn(grid, 1, 1, |y| CMatrix::from_real(1, 1, &[1.0 + 0.25 * (y[0] / 8.0).cos()])).unwrap()
}

#[test]
fn dirichlet_and_neumann_application() {
    let s = setup();
    let (f, tr) = windowed(&s);
    let dirichlet = BoundaryOperator::trace(&s.grid, 0, 1).unwrap();
    let neumann = BoundaryOperator::trace(&s.grid, 1, 1).unwrap();
    assert!(max_diff(&dirichlet.apply(&f, &s.sys).unwrap(), &tr) < 1e-10);
    assert!(neumann.apply(&f, &s.sys).unwrap().max_abs() < 1e-10);
}

#[test]
fn application_matches_hand_composition() {
    let s = setup();
    let f = GridFunction::from_scalar_fn(&s.grid, |x| {
        Complex::new((0.5 * x[0] + 0.2).sin() * (x[1] * 0.75).cos() * (-x[0] * x[0] / 80.0).exp(), 0.0)
    });
    let b0 = variable_scalar(&s.bgrid);
    let op = BoundaryOperator::normal(&s.grid, vec![(0, b0.clone()), (1, MatrixField::identity(&s.bgrid, 1))]).unwrap();
    let oracle = b0.apply(&trace(&f, &s.sys).unwrap()).unwrap().add(&trace_m(&f, 1, &s.sys).unwrap()).unwrap();
    assert!(max_diff(&op.apply(&f, &s.sys).unwrap(), &oracle) < 1e-10);

    // Tangential term: Tr ∂₂ f equals the trace of the spectral derivative.
    let tangential = BoundaryOperator::new(&s.grid, vec![BoundaryTerm::new(vec![0, 1], b0.clone())]).unwrap();
    let d2 = apply_multiplier(&f, &SpectralMultiplier::derivative(&s.grid, &[0, 1]).unwrap()).unwrap();
    let oracle = b0.apply(&trace(&d2, &s.sys).unwrap()).unwrap();
    assert!(max_diff(&tangential.apply(&f, &s.sys).unwrap(), &oracle) < 1e-10);
}

#[test]
fn dirichlet_system_reduces_to_the_zeroth_extension() {
    let s = setup();
    let system = NormalSystem::new(vec![BoundaryOperator::trace(&s.grid, 0, 1).unwrap()], None).unwrap();
    let g = wave(&s.bgrid, 1, 0.1);
    let f = ext_boundary(&system, &[g.clone()], &s.eta, &s.bsys, &s.sys).unwrap();
    assert!(max_diff(&f, &ext_m(&g, 0, &s.eta, &s.bsys).unwrap()) < 1e-14);
    assert!(max_diff(&system.operators()[0].apply(&f, &s.sys).unwrap(), &g) < 1e-8);
}

#[test]
fn identity_pair_matches_the_vector_extension() {
    let s = setup();
    let ops = vec![BoundaryOperator::trace(&s.grid, 0, 1).unwrap(), BoundaryOperator::trace(&s.grid, 1, 1).unwrap()];
    let system = NormalSystem::new(ops, None).unwrap();
    let gs = vec![wave(&s.bgrid, 1, 0.1), wave(&s.bgrid, 1, -0.7)];
    let f = ext_boundary(&system, &gs, &s.eta, &s.bsys, &s.sys).unwrap();
    let v = ext_vector(&gs, &s.eta, &s.bsys, &s.sys).unwrap();
    assert!(max_diff(&f, &v) < 1e-12 * v.max_abs());
}

fn mixed_system(s: &Setup) -> NormalSystem<f64> {
    let b2 = MatrixField::from_fn(&s.bgrid, 2, 2, |y| {
        let t = y[0] / 16.0;
        CMatrix::from_real(2, 2, &[2.0 + 0.2 * t.cos(), 0.1, 0.15 * t.sin(), 1.5])
    })
    .unwrap();
    let b0 = MatrixField::from_fn(&s.bgrid, 2, 2, |y| {
        let t = y[0] / 16.0;
        CMatrix::from_real(2, 2, &[0.5, 0.2 * t.sin(), 0.0, 1.0 + 0.1 * t.cos()])
    })
    .unwrap();
    let ops = vec![
        BoundaryOperator::trace(&s.grid, 0, 2).unwrap(),
        BoundaryOperator::normal(&s.grid, vec![(2, b2), (0, b0)]).unwrap(),
    ];
    NormalSystem::new(ops, None).unwrap()
}

#[test]
fn mixed_second_order_system_is_inverted() {
    let s = setup();
    let system = mixed_system(&s);
    let gs = vec![wave(&s.bgrid, 2, 0.3), wave(&s.bgrid, 2, 1.1)];
    let f = ext_boundary(&system, &gs, &s.eta, &s.bsys, &s.sys).unwrap();
    for (op, g) in system.operators().iter().zip(&gs) {
        let res = max_diff(&op.apply(&f, &s.sys).unwrap(), g) / g.max_abs();
        assert!(res < 1e-6, "order {}: {res:e}", op.order());
    }
    let skipped = trace_m(&f, 1, &s.sys).unwrap().max_abs();
    assert!(skipped < 1e-6 * gs.iter().map(|g| g.max_abs()).fold(0.0, f64::max));
}

#[test]
fn extension_is_linear_in_the_data() {
    let s = setup();
    let system = mixed_system(&s);
    let a = vec![wave(&s.bgrid, 2, 0.3), wave(&s.bgrid, 2, 1.1)];
    let b = vec![wave(&s.bgrid, 2, -0.4), wave(&s.bgrid, 2, 2.0)];
    let c = Complex::new(0.7, -0.2);
    let combo: Vec<_> = a.iter().zip(&b).map(|(x, y)| x.add(&y.scaled(c)).unwrap()).collect();
    let lhs = ext_boundary(&system, &combo, &s.eta, &s.bsys, &s.sys).unwrap();
    let rhs = ext_boundary(&system, &a, &s.eta, &s.bsys, &s.sys)
        .unwrap()
        .add(&ext_boundary(&system, &b, &s.eta, &s.bsys, &s.sys).unwrap().scaled(c))
        .unwrap();
    assert!(max_diff(&lhs, &rhs) < 1e-12 * rhs.max_abs());
}

/// `r = 2` with a rank-one first-order condition: π is a genuine projection.
fn projected_system(s: &Setup) -> NormalSystem<f64> {
    let row = MatrixField::constant(&s.bgrid, &CMatrix::from_real(1, 2, &[1.0, 0.5]));
    let ops = vec![
        BoundaryOperator::trace(&s.grid, 0, 2).unwrap(),
        BoundaryOperator::normal(&s.grid, vec![(1, row)]).unwrap(),
    ];
    NormalSystem::new(ops, None).unwrap()
}

#[test]
fn identity_coefficients_make_c_the_traces() {
    let s = setup();
    let ops = vec![BoundaryOperator::trace(&s.grid, 0, 1).unwrap(), BoundaryOperator::trace(&s.grid, 2, 1).unwrap()];
    let system = NormalSystem::new(ops, None).unwrap();
    let c = extended_system_c(&system, 3).unwrap();
    assert_eq!(c.components(), &[CComponent::Projected(0), CComponent::Trace, CComponent::Projected(1), CComponent::Trace]);
    let v = ext_vector(&[wave(&s.bgrid, 1, 0.0), wave(&s.bgrid, 1, 1.0)], &s.eta, &s.bsys, &s.sys).unwrap();
    for j in 0..=3 {
        let cj = c.apply(j, &v, &s.sys).unwrap();
        let tj = trace_m(&v, j, &s.sys).unwrap();
        assert!(max_diff(&cj, &tj) < 1e-13 * v.max_abs().max(1.0));
    }
}

#[test]
fn projection_of_c_equals_projected_tilde_operator() {
    let s = setup();
    let system = projected_system(&s);
    let c = extended_system_c(&system, 2).unwrap();
    let v = ext_vector(&[wave(&s.bgrid, 2, 0.2), wave(&s.bgrid, 2, -0.5)], &s.eta, &s.bsys, &s.sys).unwrap();
    let pi = system.projection(1);
    let lhs = pi.apply(&c.apply(1, &v, &s.sys).unwrap()).unwrap();
    let rhs = pi.apply(&system.apply_tilde(1, &v, &s.sys).unwrap()).unwrap();
    assert!(max_diff(&lhs, &rhs) < 1e-10);
    // Order outside the system: plain trace, bit for bit.
    assert_eq!(c.apply(2, &v, &s.sys).unwrap(), trace_m(&v, 2, &s.sys).unwrap());
}

#[test]
fn kernel_predicates_agree_on_witnesses() {
    let s = setup();
    let system = projected_system(&s);
    let c = extended_system_c(&system, 2).unwrap();
    let zero = GridFunction::zeros(&s.bgrid, 2);
    let bump = GridFunction::from_fn(&s.grid, 2, |x, out| {
        let e = (-((x[0] - 20.0).powi(2) + x[1] * x[1]) / 4.0).exp();
        out[0] = Complex::new(e, 0.0);
        out[1] = Complex::new(-e, 0.5 * e);
    });
    let inside = ext_vector(&[zero.clone(), zero.clone(), zero.clone()], &s.eta, &s.bsys, &s.sys).unwrap().add(&bump).unwrap();
    let report = kernel_equiv_check(&c, &inside, &s.sys, 1e-8).unwrap();
    assert!(report.c_small && report.traces_small, "{report:?}");

    let g0 = wave(&s.bgrid, 2, 0.4);
    let witness = ext_vector(&[g0.clone(), zero.clone()], &s.eta, &s.bsys, &s.sys).unwrap();
    let report = kernel_equiv_check(&c, &witness, &s.sys, 1e-8).unwrap();
    assert!(!report.c_small && !report.traces_small);
    assert!(report.c_residuals[0] >= 0.5 * g0.max_abs());
    assert!(report.agrees());

    // Kernel of B̃ and B coincide: compare with the measured constants.
    let (bc_sup, b_sup) = system.field_bounds(1);
    let bv = system.operators()[1].apply(&witness, &s.sys).unwrap().max_abs();
    let btv = system.apply_tilde(1, &witness, &s.sys).unwrap().max_abs();
    assert!(btv <= bc_sup * bv * (1.0 + 1e-12) + 1e-14);
    assert!(bv <= b_sup * btv * (1.0 + 1e-12) + 1e-14);
}
