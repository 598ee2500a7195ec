//! Shared setup for the suites: the trace/extension machinery on a 2-D grid
//! and small numeric helpers.

use tracelab_core::lp::{build_lp_system, LpGenerator};
use tracelab_core::norms::weighted_lp_of_values;
use tracelab_core::trace_ext::{EtaFamily, EtaParams};
use tracelab_core::{Domain, EtaFamily64, Grid64, GridFunction64, LpSystem64, WeightSpec};

use crate::config::GridConfig;
use crate::error::Result;

/// Grid, Littlewood–Paley systems and extension kernels used by the trace,
/// extension and boundary-system suites.
pub struct TraceSetup {
    pub grid: Grid64,
    pub bgrid: Grid64,
    pub eta: EtaFamily64,
    /// System on the boundary hyperplane (blocks up to the kernels' top block).
    pub bsys: LpSystem64,
    /// System on the full grid.
    pub sys: LpSystem64,
}

impl TraceSetup {
    /// `grid_cfg` describes the bulk grid and its block count; `top_block`
    /// is the highest extension block (boundary data must be band-limited
    /// accordingly).
    pub fn new(grid_cfg: &GridConfig, top_block: usize) -> Result<Self> {
        let grid = grid_cfg.build()?;
        let eta = EtaFamily::new(&grid, top_block, EtaParams::default())?;
        let bgrid = eta.boundary_grid().clone();
        let bsys = build_lp_system(LpGenerator::standard(), top_block, &bgrid)?;
        let sys = build_lp_system(LpGenerator::standard(), grid_cfg.n_blocks, &grid)?;
        Ok(Self { grid, bgrid, eta, bsys, sys })
    }
}

/// Id fragment for a number.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// The full-space weight `|x₁|^γ`.
pub fn full(gamma: f64) -> Result<WeightSpec<f64>> {
    Ok(WeightSpec::new(gamma, Domain::FullSpace)?)
}

/// The half-space weight `|x₁|^γ` on `x₁ > 0`.
pub fn half(gamma: f64) -> Result<WeightSpec<f64>> {
    Ok(WeightSpec::new(gamma, Domain::HalfSpace)?)
}

/// Unweighted `L^p` norm over the whole grid (0-D grids: the single value).
pub fn plain_lp(f: &GridFunction64, p: f64) -> Result<f64> {
    Ok(weighted_lp_of_values(f.grid(), &f.fiber_norms(), p, &WeightSpec::unweighted(Domain::FullSpace))?)
}

/// `max |a − b|` over all samples.
pub fn sup_diff(a: &GridFunction64, b: &GridFunction64) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `max/min` of a positive sequence.
pub fn variation(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

/// Number of steps breaking monotonicity in the dominant direction.
pub fn monotonicity_breaks(values: &[f64]) -> usize {
    let ups = values.windows(2).filter(|w| w[1] > w[0]).count();
    let downs = values.windows(2).filter(|w| w[1] < w[0]).count();
    ups.min(downs) + values.windows(2).filter(|w| w[1] == w[0]).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_power_law() {
        let xs = [2.0, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(0.75)).collect();
        assert!((loglog_slope(&xs, &ys) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn monotonicity_and_variation() {
        assert_eq!(monotonicity_breaks(&[1.0, 2.0, 3.0]), 0);
        assert_eq!(monotonicity_breaks(&[3.0, 2.0, 2.5, 1.0]), 1);
        assert_eq!(variation(&[2.0, 8.0, 4.0]), 4.0);
    }
}
