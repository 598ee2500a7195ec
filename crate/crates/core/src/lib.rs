//! Numerical core: Littlewood–Paley systems, power-weighted norms, trace and
//! extension operators, and normal boundary systems on periodized grids.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the `*64` aliases below fix `f64`.

pub mod boundary;
pub mod error;
pub mod grid;
pub mod io;
pub mod jet;
pub mod linalg;
pub mod lp;
pub mod norms;
pub mod quad;
pub mod scalar;
pub mod trace_ext;

pub use error::{Error, Result};
pub use grid::{GridFunction, PeriodizedGrid, Spectrum};
pub use lp::{LpGenerator, LpSystem, ProfileParams, SpectralMultiplier};
pub use norms::{Domain, Exponent, NormResult, WeightSpec};
pub use scalar::{Complex, Real};

pub type Grid64 = PeriodizedGrid<f64>;
pub type GridFunction64 = GridFunction<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type LpSystem64 = LpSystem<f64>;
pub type LpGenerator64 = LpGenerator<f64>;
pub type Multiplier64 = SpectralMultiplier<f64>;
pub type WeightSpec64 = WeightSpec<f64>;
pub type NormResult64 = NormResult<f64>;
pub type EtaFamily64 = trace_ext::EtaFamily<f64>;
pub type NormalSystem64 = boundary::NormalSystem<f64>;
pub type Complex64 = Complex<f64>;
