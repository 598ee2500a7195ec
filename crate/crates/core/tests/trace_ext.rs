//! Trace/extension identities on a 2-D grid, checked against independent
//! evaluations of trigonometric polynomials.

use tracelab_core::grid::{GridFunction, PeriodizedGrid};
use tracelab_core::lp::{build_lp_system, LpGenerator, LpSystem};
use tracelab_core::trace_ext::{
    boundary_preserving_mollify, ext0, ext_m, ext_vector, indicator_multiply, mollifier_cutoff, trace, trace_m,
    EtaFamily, EtaParams,
};
use tracelab_core::Complex;

struct Setup {
    grid: PeriodizedGrid<f64>,
    eta: EtaFamily<f64>,
    bsys: LpSystem<f64>,
    sys: LpSystem<f64>,
}

fn setup() -> Setup {
    let grid = PeriodizedGrid::standard(vec![256, 256]).unwrap();
    let eta = EtaFamily::new(&grid, 2, EtaParams::default()).unwrap();
    let bsys = build_lp_system(LpGenerator::standard(), 2, eta.boundary_grid()).unwrap();
    let sys = LpSystem::standard(&grid).unwrap();
    Setup { grid, eta, bsys, sys }
}

/// `cos(a y) + 0.5 sin(b y + 0.3)` with frequencies on the torus lattice.
fn boundary_wave(grid: &PeriodizedGrid<f64>, a: f64, b: f64) -> GridFunction<f64> {
    GridFunction::from_scalar_fn(grid, |y| Complex::new((a * y[0]).cos() + 0.5 * (b * y[0] + 0.3).sin(), 0.0))
}

fn max_diff(a: &GridFunction<f64>, b: &GridFunction<f64>) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn extensions_invert_their_trace_and_annihilate_lower_ones() {
    let s = setup();
    let g = boundary_wave(s.eta.boundary_grid(), 1.0, 2.5);
    for m in 0..=3 {
        let f = ext_m(&g, m, &s.eta, &s.bsys).unwrap();
        for i in 0..=m {
            let t = trace_m(&f, i, &s.sys).unwrap();
            let expected = if i == m { g.clone() } else { GridFunction::zeros(&t.grid().clone(), 1) };
            let err = max_diff(&t, &expected);
            assert!(err < 1e-10, "Tr_{i} ext_{m}: {err:e}");
        }
    }
}

#[test]
fn zeroth_extension_inverts_the_trace() {
    let s = setup();
    let g = boundary_wave(s.eta.boundary_grid(), 0.5, 3.0);
    let f = ext0(&g, &s.eta, &s.bsys).unwrap();
    let err = max_diff(&trace(&f, &s.sys).unwrap(), &g);
    assert!(err < 1e-10, "{err:e}");
}

#[test]
fn vector_extension_matches_every_trace() {
    let s = setup();
    let gs: Vec<_> =
        [(1.0, 2.0), (0.25, 3.0), (2.0, 0.5)].iter().map(|&(a, b)| boundary_wave(s.eta.boundary_grid(), a, b)).collect();
    let f = ext_vector(&gs, &s.eta, &s.bsys, &s.sys).unwrap();
    for (j, g) in gs.iter().enumerate() {
        let err = max_diff(&trace_m(&f, j, &s.sys).unwrap(), g);
        assert!(err < 1e-9, "component {j}: {err:e}");
    }
}

#[test]
fn trace_of_a_separable_wave() {
    // f(x₁, y) = cos(x₁ + 0.4)·sin(2y): Tr f = cos(0.4) sin(2y), Tr₁ f = −sin(0.4) sin(2y).
    let s = setup();
    let f = GridFunction::from_scalar_fn(&s.grid, |x| Complex::new((x[0] + 0.4).cos() * (2.0 * x[1]).sin(), 0.0));
    let bgrid = s.grid.boundary().unwrap();
    let t0 = trace(&f, &s.sys).unwrap();
    let t1 = trace_m(&f, 1, &s.sys).unwrap();
    let e0 = GridFunction::from_scalar_fn(&bgrid, |y| Complex::new(0.4f64.cos() * (2.0 * y[0]).sin(), 0.0));
    let e1 = GridFunction::from_scalar_fn(&bgrid, |y| Complex::new(-(0.4f64.sin()) * (2.0 * y[0]).sin(), 0.0));
    assert!(max_diff(&t0, &e0) < 1e-11);
    assert!(max_diff(&t1, &e1) < 1e-11);
}

#[test]
fn discrete_kernels_follow_the_closed_form() {
    let s = setup();
    for (j, m) in [(0, 0), (1, 1), (2, 2)] {
        let samples = s.eta.kernel_samples(j, m);
        let scale = samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for i in (96..160).step_by(7) {
            let x = s.grid.coordinate(0, i);
            let exact = s.eta.closed_form_kernel(j, m, x);
            assert!((samples[i] - exact).norm() < 1e-3 * scale, "j={j} m={m} x={x}");
        }
    }
}

#[test]
fn moment_correction_is_a_small_perturbation() {
    assert!(setup().eta.moment_defect() < 1e-3);
}

#[test]
fn rho_family_is_normalized_at_the_origin() {
    let s = setup();
    for n in 0..=2 {
        let at_zero: Complex<f64> = s.eta.rho_coefficients(n).iter().sum();
        let target = if n == 0 { 1.0 } else { 2f64.powi(n as i32) };
        assert!((at_zero.re - target).abs() < 1e-12 && at_zero.im.abs() < 1e-12);
    }
}

#[test]
fn data_outside_the_band_is_rejected() {
    let s = setup();
    let g = boundary_wave(s.eta.boundary_grid(), 1.0, 6.5);
    assert!(ext_m(&g, 0, &s.eta, &s.bsys).is_err());
}

#[test]
fn indicator_clears_the_lower_half() {
    let s = setup();
    let f = GridFunction::from_scalar_fn(&s.grid, |x| Complex::new(1.0 + x[0], x[1]));
    let h = indicator_multiply(&f).unwrap();
    for i in 0..s.grid.len() {
        let x1 = s.grid.node(i)[0];
        let v = h.value(i, 0);
        if x1 < 0.0 {
            assert_eq!(v, Complex::new(0.0, 0.0));
        } else {
            assert_eq!(v, f.value(i, 0));
        }
    }
}

#[test]
fn mollification_flattens_near_the_boundary() {
    let grid = PeriodizedGrid::<f64>::standard(vec![512]).unwrap();
    let nsteep = 1.0f64;
    // m = 0: f(0) = 0, so g = φ_n f.
    let f = GridFunction::from_scalar_fn(&grid, |x| Complex::new((0.75 * x[0]).sin(), 0.0));
    let g = boundary_preserving_mollify(&f, 0, nsteep).unwrap();
    for i in grid.half_start()..grid.shape()[0] {
        let x = grid.coordinate(0, i);
        let expected = mollifier_cutoff(nsteep * x) * f.value(i, 0).re;
        assert!((g.value(i, 0).re - expected).abs() < 1e-12);
    }
    // m = 1: f'(0) = 0, g' vanishes below 1/(2n), g = f beyond 1/n.
    let f = GridFunction::from_scalar_fn(&grid, |x| Complex::new((0.75 * x[0]).cos() + 0.1 * (1.5 * x[0]).cos(), 0.0));
    let g = boundary_preserving_mollify(&f, 1, nsteep).unwrap();
    let start = grid.half_start();
    let flat: Vec<f64> = (start..start + 3).map(|i| g.value(i, 0).re).collect();
    assert!(grid.coordinate(0, start + 2) < 0.5 / nsteep);
    assert!((flat[0] - flat[1]).abs() < 1e-12 && (flat[1] - flat[2]).abs() < 1e-12, "{flat:?}");
    for i in start..grid.shape()[0] {
        if grid.coordinate(0, i) >= 1.0 / nsteep {
            assert_eq!(g.value(i, 0), f.value(i, 0));
        }
    }
    assert!(boundary_preserving_mollify(&GridFunction::from_scalar_fn(&grid, |x| Complex::new(x[0].cos(), 0.0)), 0, 1.0)
        .is_err());
}


#[test]
fn mollification_defect_decays_at_the_predicted_rate() {
    // ‖f − g_n‖_{W^{k,p}(w_γ)} ~ n^{k−m−1−(γ+1)/p} when ∂^m f(0) = 0 but ∂^{m+1} f(0) ≠ 0.
    let grid = PeriodizedGrid::<f64>::standard(vec![512]).unwrap();
    let cases = [(0usize, 1usize, 2.0f64, 0.5f64, 0.75f64), (1, 2, 3.0, 1.5, 0.5), (1, 3, 2.0, -0.5, 0.5)];
    for (m, k, p, gamma, freq) in cases {
        let f = if m == 0 {
            GridFunction::from_scalar_fn(&grid, |x| Complex::new((freq * x[0]).sin(), 0.0))
        } else {
            GridFunction::from_scalar_fn(&grid, |x| Complex::new((freq * x[0]).cos() + 0.3 * (freq * x[0]).sin(), 0.0))
        };
        let f = if m == 1 {
            // Remove the first derivative at 0: f − 0.3·freq·sin(x)/1 keeps f'(0) = 0 and f''(0) ≠ 0.
            f.sub(&GridFunction::from_scalar_fn(&grid, |x| Complex::new(0.3 * x[0].sin() * freq, 0.0))).unwrap()
        } else {
            f
        };
        let ns = [8.0, 16.0, 32.0, 64.0];
        let vals: Vec<f64> =
            ns.iter().map(|&n| tracelab_core::trace_ext::mollify_defect_norm(&f, m, n, k, p, gamma).unwrap()).collect();
        let slope = (vals[3] / vals[0]).ln() / (ns[3] / ns[0]).ln();
        let expected = k as f64 - m as f64 - 1.0 - (gamma + 1.0) / p;
        assert!((slope - expected).abs() < 0.1, "m={m} k={k}: slope {slope}, expected {expected}");
    }
}
