//! Deterministic test banks.
//!
//! A bank member is a [`Profile`]: a finite sum of Gaussian wave packets
//! `a·exp(−Σ_a (x_a − c_a)²/(2σ_a²))·e^{iξ·(x−c)}`. Packets are known in
//! closed form, so members can be dilated and translated exactly and their
//! spectral and spatial extent is known before sampling. The generator only
//! emits members whose spectrum beyond `|ξ| = 2^N` is negligible (below
//! `1e−12` in relative ℓ² mass) and whose essential support stays inside the
//! declared support margin.
//!
//! Members cycle through four kinds: randomized block spectra (packets with
//! frequencies in randomly chosen Littlewood–Paley annuli), modulated bumps,
//! dilates `f(2^e x)` with `e ∈ −3..=3`, and bumps concentrated at distance
//! `2^{−j}` (`j ≤ 6`) from the interface `x₁ = 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tracelab_core::{Complex64, Grid64, GridFunction64};

use crate::config::{BankConfig, GridConfig};
use crate::error::{CliError, Result};

/// Standard deviations kept between a packet's centre and the band edge (in
/// frequency) or the free margin of the torus (in space).
pub const PACKET_REACH: f64 = 7.5;

/// Fraction of the half-period a profile's essential support may occupy
/// (the remaining quarter of the torus is the declared support margin).
pub const SUPPORT_FRACTION: f64 = 0.75;

/// Relative spectral mass allowed beyond the top block.
pub const TAIL_MASS_LIMIT: f64 = 1e-12;

/// A Gaussian wave packet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Packet {
    pub center: Vec<f64>,
    /// Per-axis widths `σ_a`.
    pub width: Vec<f64>,
    pub freq: Vec<f64>,
    /// Complex amplitude `(re, im)`.
    pub amp: (f64, f64),
}

impl Packet {
    fn eval(&self, x: &[f64]) -> Complex64 {
        let mut e = 0.0;
        let mut phase = 0.0;
        for a in 0..x.len() {
            let t = x[a] - self.center[a];
            e += t * t / (2.0 * self.width[a] * self.width[a]);
            phase += self.freq[a] * t;
        }
        Complex64::new(self.amp.0, self.amp.1) * (-e).exp() * Complex64::from_polar(1.0, phase)
    }

    /// Radius beyond which the spectrum is negligible.
    fn band_reach(&self) -> f64 {
        self.freq.iter().zip(&self.width).map(|(f, w)| (f.abs() + PACKET_REACH / w).powi(2)).sum::<f64>().sqrt()
    }
}

/// Kind of a bank member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemberKind {
    BlockSpectrum,
    ModulatedBump,
    Dilate,
    BoundaryBump,
}

/// A closed-form bank member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub label: String,
    pub kind: MemberKind,
    pub packets: Vec<Packet>,
}

impl Profile {
    pub fn dim(&self) -> usize {
        self.packets[0].center.len()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.packets.iter().map(|p| p.eval(x)).sum()
    }

    /// `f(λx)`.
    pub fn dilate(&self, lambda: f64) -> Profile {
        let packets = self
            .packets
            .iter()
            .map(|p| Packet {
                center: p.center.iter().map(|c| c / lambda).collect(),
                width: p.width.iter().map(|w| w / lambda).collect(),
                freq: p.freq.iter().map(|f| f * lambda).collect(),
                amp: p.amp,
            })
            .collect();
        Profile { label: format!("{}@dilate({lambda})", self.label), kind: self.kind, packets }
    }

    /// `f(x − t)`.
    pub fn translate(&self, t: &[f64]) -> Profile {
        let packets = self
            .packets
            .iter()
            .map(|p| Packet { center: p.center.iter().zip(t).map(|(c, s)| c + s).collect(), ..p.clone() })
            .collect();
        Profile { label: format!("{}@shift({:?})", self.label, t), kind: self.kind, packets }
    }

    /// Translate along the normal axis so that the first packet is centred at `x₁ = c`.
    pub fn recenter_normal(&self, c: f64) -> Profile {
        let mut t = vec![0.0; self.dim()];
        t[0] = c - self.packets[0].center[0];
        self.translate(&t)
    }

    /// Radius beyond which the spectrum is negligible.
    pub fn band_reach(&self) -> f64 {
        self.packets.iter().map(Packet::band_reach).fold(0.0, f64::max)
    }

    /// Largest `|x_a|` of the essential support over all axes.
    pub fn spatial_reach(&self) -> f64 {
        self.packets
            .iter()
            .flat_map(|p| p.center.iter().zip(&p.width).map(|(c, w)| c.abs() + PACKET_REACH * w))
            .fold(0.0, f64::max)
    }

    /// Whether the profile is resolved by `grid` below block `n_blocks` and
    /// respects the support margin.
    pub fn fits(&self, grid: &Grid64, n_blocks: usize) -> bool {
        self.dim() == grid.dim()
            && self.band_reach() <= band_edge(grid, n_blocks)
            && self.spatial_reach() <= SUPPORT_FRACTION * grid.half_period()
    }

    /// Samples the profile at every node.
    pub fn sample(&self, grid: &Grid64) -> GridFunction64 {
        GridFunction64::from_scalar_fn(grid, |x| self.eval(x))
    }
}

/// Samples several profiles as the components of one `ℂ^r`-valued function.
pub fn sample_vector(profiles: &[Profile], grid: &Grid64) -> GridFunction64 {
    GridFunction64::from_fn(grid, profiles.len(), |x, out| {
        for (o, p) in out.iter_mut().zip(profiles) {
            *o = p.eval(x);
        }
    })
}

/// `min(2^N, Nyquist)`: frequencies a bank member may occupy.
pub fn band_edge(grid: &Grid64, n_blocks: usize) -> f64 {
    2f64.powi(n_blocks as i32).min(grid.min_nyquist())
}

/// Relative ℓ² spectral mass of `f` at `|ξ| > 2^N`.
pub fn tail_mass(f: &GridFunction64, n_blocks: usize) -> f64 {
    let radii = f.grid().frequency_magnitudes();
    let edge = 2f64.powi(n_blocks as i32);
    let spec = f.spectrum();
    let len = radii.len();
    let (mut tail, mut total) = (0.0, 0.0);
    for (i, z) in spec.data().iter().enumerate() {
        let e = z.norm_sqr();
        total += e;
        if radii[i % len] > edge {
            tail += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        (tail / total).sqrt()
    }
}

struct Draw<'a> {
    rng: ChaCha8Rng,
    grid: &'a Grid64,
    edge: f64,
    n_blocks: usize,
}

impl Draw<'_> {
    fn dim(&self) -> usize {
        self.grid.dim()
    }

    fn l(&self) -> f64 {
        self.grid.half_period()
    }

    /// Largest isotropic width leaving room for a centre offset of `offset`.
    fn max_width(&self, offset: f64) -> f64 {
        (SUPPORT_FRACTION * self.l() - offset) / PACKET_REACH
    }

    fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return lo;
        }
        (self.rng.gen_range(lo.ln()..hi.ln())).exp()
    }

    fn direction(&mut self) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..self.dim()).map(|_| self.rng.gen_range(-1.0..1.0)).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 0.1 && n <= 1.0 {
                return v.into_iter().map(|x| x / n).collect();
            }
        }
    }

    fn amplitude(&mut self) -> (f64, f64) {
        let r = self.rng.gen_range(0.5..1.5);
        let t = self.rng.gen_range(0.0..std::f64::consts::TAU);
        (r * t.cos(), r * t.sin())
    }

    /// Smallest isotropic width whose band reach around a carrier of
    /// magnitude `r` stays below the edge: `Σ_a (|r_a| + c)² ≤ (r + √d·c)²`.
    fn min_width(&self, r: f64) -> f64 {
        PACKET_REACH * (self.dim() as f64).sqrt() / (self.edge - r)
    }

    /// A packet with frequency magnitude `r`, centred within `spread`.
    fn packet(&mut self, r: f64, spread: f64) -> Option<Packet> {
        let lo = self.min_width(r);
        let hi = self.max_width(spread);
        if !(self.edge > r) || lo > hi {
            return None;
        }
        let width = self.log_uniform(lo, hi.min(lo * 8.0));
        let dir = self.direction();
        let center: Vec<f64> = (0..self.dim()).map(|_| self.rng.gen_range(-spread..=spread)).collect();
        Some(Packet { center, width: vec![width; self.dim()], freq: dir.iter().map(|d| d * r).collect(), amp: self.amplitude() })
    }

    fn block_spectrum(&mut self, i: usize) -> Result<Profile> {
        let count = self.rng.gen_range(1..=3);
        let spread = self.l() / 8.0;
        let mut packets = Vec::new();
        for _ in 0..count {
            let mut n = self.rng.gen_range(0..self.n_blocks.max(1));
            loop {
                let (lo, hi) = if n == 0 { (0.0, 0.5) } else { (2f64.powi(n as i32 - 1), 1.5 * 2f64.powi(n as i32 - 1)) };
                let r = self.rng.gen_range(lo..hi);
                if let Some(p) = self.packet(r, spread) {
                    packets.push(p);
                    break;
                }
                if n == 0 {
                    return Err(CliError::Infeasible(format!("no packet fits the grid {:?}", self.grid.shape())));
                }
                n -= 1;
            }
        }
        Ok(Profile { label: format!("m{i:03}:block"), kind: MemberKind::BlockSpectrum, packets })
    }

    fn modulated(&mut self, i: usize) -> Result<Profile> {
        let spread = self.l() / 8.0;
        for _ in 0..64 {
            let r = self.rng.gen_range(0.0..0.5 * self.edge);
            if let Some(p) = self.packet(r, spread) {
                return Ok(Profile { label: format!("m{i:03}:modulated"), kind: MemberKind::ModulatedBump, packets: vec![p] });
            }
        }
        Err(CliError::Infeasible(format!("no modulated bump fits the grid {:?}", self.grid.shape())))
    }

    fn dilate(&mut self, i: usize, e: i32) -> Result<Profile> {
        let d = self.dim();
        // Unit carrier frequency; the width is the geometric mean of the
        // band-limited and the support-limited extremes, which leaves the
        // same room for dilation in both directions.
        let (lo, hi) = (self.min_width(1.0), self.max_width(0.0));
        if !(self.edge > 1.0) || lo > hi {
            return Err(CliError::Infeasible(format!("no dilation base fits the grid {:?}", self.grid.shape())));
        }
        let base = Profile {
            label: format!("m{i:03}:dilate-base"),
            kind: MemberKind::Dilate,
            packets: vec![Packet {
                center: vec![0.0; d],
                width: vec![(lo * hi).sqrt(); d],
                freq: self.direction(),
                amp: self.amplitude(),
            }],
        };
        // Shrink |e| until the dilate fits the grid.
        let mut e = e;
        loop {
            let p = base.dilate(2f64.powi(e));
            if p.fits(self.grid, self.n_blocks) {
                return Ok(Profile { label: format!("m{i:03}:dilate(2^{e})"), ..p });
            }
            if e == 0 {
                return Err(CliError::Infeasible(format!("dilation base does not fit the grid {:?}", self.grid.shape())));
            }
            e -= e.signum();
        }
    }

    fn boundary(&mut self, i: usize, j: i32) -> Result<Profile> {
        let d = self.dim();
        let dist = 2f64.powi(-j);
        let min_width = self.min_width(0.0);
        let w1 = dist.max(min_width);
        let mut width = vec![(self.l() / 16.0).max(min_width); d];
        width[0] = w1;
        let mut center = vec![0.0; d];
        center[0] = dist;
        let p = Profile {
            label: format!("m{i:03}:boundary(2^-{j})"),
            kind: MemberKind::BoundaryBump,
            packets: vec![Packet { center, width, freq: vec![0.0; d], amp: self.amplitude() }],
        };
        if p.fits(self.grid, self.n_blocks) {
            Ok(p)
        } else {
            Err(CliError::Infeasible(format!("boundary bump 2^-{j} does not fit the grid {:?}", self.grid.shape())))
        }
    }
}

/// The `size` closed-form members for `seed` on a grid.
pub fn bank_profiles(bank: &BankConfig, grid_cfg: &GridConfig) -> Result<Vec<Profile>> {
    let grid = grid_cfg.build()?;
    let edge = band_edge(&grid, grid_cfg.n_blocks);
    let mut draw = Draw { rng: ChaCha8Rng::seed_from_u64(bank.seed), grid: &grid, edge, n_blocks: grid_cfg.n_blocks };
    let mut out = Vec::with_capacity(bank.size);
    for i in 0..bank.size {
        let round = (i / 4) as i32;
        let p = match i % 4 {
            0 => draw.block_spectrum(i)?,
            1 => draw.modulated(i)?,
            2 => draw.dilate(i, round.rem_euclid(7) - 3)?,
            _ => draw.boundary(i, round.rem_euclid(7))?,
        };
        debug_assert!(p.fits(&grid, grid_cfg.n_blocks), "{}", p.label);
        out.push(p);
    }
    Ok(out)
}

/// Samples the bank on its grid and verifies the tail-mass bound.
pub fn generate_bank(bank: &BankConfig, grid_cfg: &GridConfig) -> Result<Vec<GridFunction64>> {
    let grid = grid_cfg.build()?;
    bank_profiles(bank, grid_cfg)?
        .iter()
        .map(|p| {
            let f = p.sample(&grid);
            let tail = tail_mass(&f, grid_cfg.n_blocks);
            if tail > TAIL_MASS_LIMIT {
                return Err(CliError::Infeasible(format!("{}: spectral tail {tail:.2e} beyond block N", p.label)));
            }
            Ok(f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid_1d() -> GridConfig {
        GridConfig::new(vec![4096], 16.0 * PI, 8)
    }

    #[test]
    fn same_seed_same_bits() {
        let b = BankConfig { size: 10, seed: 7 };
        let x = generate_bank(&b, &grid_1d()).unwrap();
        let y = generate_bank(&b, &grid_1d()).unwrap();
        assert_eq!(x.len(), 10);
        for (f, g) in x.iter().zip(&y) {
            let fb: Vec<u64> = f.data().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect();
            let gb: Vec<u64> = g.data().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect();
            assert_eq!(fb, gb);
        }
        let other = generate_bank(&BankConfig { size: 10, seed: 8 }, &grid_1d()).unwrap();
        assert_ne!(x[0].data(), other[0].data());
    }

    #[test]
    fn every_kind_appears_and_fits() {
        let cfg = grid_1d();
        let grid = cfg.build().unwrap();
        let ps = bank_profiles(&BankConfig { size: 28, seed: 1 }, &cfg).unwrap();
        for kind in [MemberKind::BlockSpectrum, MemberKind::ModulatedBump, MemberKind::Dilate, MemberKind::BoundaryBump] {
            assert!(ps.iter().any(|p| p.kind == kind));
        }
        assert!(ps.iter().all(|p| p.fits(&grid, cfg.n_blocks)));
    }

    #[test]
    fn infeasible_block_count_is_an_error() {
        let cfg = GridConfig::new(vec![256], 16.0 * PI, 9);
        assert!(generate_bank(&BankConfig { size: 4, seed: 0 }, &cfg).is_err());
    }

    #[test]
    fn closed_form_matches_samples() {
        let cfg = GridConfig::new(vec![128, 128], 16.0 * PI, 3);
        let grid = cfg.build().unwrap();
        let ps = bank_profiles(&BankConfig { size: 4, seed: 3 }, &cfg).unwrap();
        let f = ps[1].sample(&grid);
        let idx = 128 * 20 + 7;
        assert_eq!(f.value(idx, 0), ps[1].eval(&grid.node(idx)));
    }
}
