//! Little-endian binary container for grid functions.
//!
//! Layout: magic `WTLB`, `version: u32`, `d: u32`, `r: u32`, `N_axis[d]: u32`,
//! `L: f64`, `offset: u8`, `gamma: f64`, then the samples in row-major node
//! order, the `r` components of each node consecutive, each value stored as
//! `(re, im)` `f64` pairs.

use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, PeriodizedGrid};
use crate::scalar::{Complex, Real};

pub const MAGIC: &[u8; 4] = b"WTLB";
pub const VERSION: u32 = 1;

/// A grid function together with the weight exponent it is meant for.
#[derive(Clone, Debug, PartialEq)]
pub struct StoredFunction<T> {
    pub function: GridFunction<T>,
    pub gamma: T,
}

/// Serializes `f` (tagged with `gamma`) to a writer.
pub fn write_function<T: Real, W: Write>(mut w: W, f: &GridFunction<T>, gamma: T) -> Result<()> {
    let grid = f.grid();
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u32::<LittleEndian>(grid.dim() as u32)?;
    w.write_u32::<LittleEndian>(f.fiber() as u32)?;
    for &n in grid.shape() {
        w.write_u32::<LittleEndian>(n as u32)?;
    }
    w.write_f64::<LittleEndian>(grid.half_period().to_f64_lossy())?;
    w.write_u8(u8::from(grid.offset()))?;
    w.write_f64::<LittleEndian>(gamma.to_f64_lossy())?;
    for idx in 0..grid.len() {
        for c in 0..f.fiber() {
            let z = f.value(idx, c);
            w.write_f64::<LittleEndian>(z.re.to_f64_lossy())?;
            w.write_f64::<LittleEndian>(z.im.to_f64_lossy())?;
        }
    }
    Ok(())
}

/// Reads a function written by [`write_function`].
pub fn read_function<T: Real, R: Read>(mut r: R) -> Result<StoredFunction<T>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let d = r.read_u32::<LittleEndian>()? as usize;
    let fiber = r.read_u32::<LittleEndian>()? as usize;
    if d > 8 || fiber == 0 {
        return Err(Error::Format(format!("implausible header: d = {d}, r = {fiber}")));
    }
    let shape = (0..d).map(|_| r.read_u32::<LittleEndian>().map(|n| n as usize)).collect::<std::io::Result<Vec<_>>>()?;
    let half_period = r.read_f64::<LittleEndian>()?;
    let offset = match r.read_u8()? {
        0 => false,
        1 => true,
        b => return Err(Error::Format(format!("offset flag {b} is neither 0 nor 1"))),
    };
    let gamma = r.read_f64::<LittleEndian>()?;
    let grid = PeriodizedGrid::new(shape, T::lit(half_period), offset)?;
    let len = grid.len();
    let mut data = vec![Complex::new(T::zero(), T::zero()); len * fiber];
    for idx in 0..len {
        for c in 0..fiber {
            let re = r.read_f64::<LittleEndian>()?;
            let im = r.read_f64::<LittleEndian>()?;
            data[c * len + idx] = Complex::new(T::lit(re), T::lit(im));
        }
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after the payload".into()));
    }
    Ok(StoredFunction { function: GridFunction::from_data(&grid, fiber, data)?, gamma: T::lit(gamma) })
}

pub fn save<T: Real>(path: impl AsRef<Path>, f: &GridFunction<T>, gamma: T) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_function(&mut w, f, gamma)?;
    w.flush()?;
    Ok(())
}

pub fn load<T: Real>(path: impl AsRef<Path>) -> Result<StoredFunction<T>> {
    read_function(std::io::BufReader::new(std::fs::File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout_is_exact() {
        let grid = PeriodizedGrid::<f64>::new(vec![2, 4], 1.5, true).unwrap();
        let f = GridFunction::from_fn(&grid, 2, |x, out| {
            out[0] = Complex::new(x[0], x[1]);
            out[1] = Complex::new(-x[1], 0.5);
        });
        let mut buf = Vec::new();
        write_function(&mut buf, &f, 0.25).unwrap();
        assert_eq!(&buf[0..4], b"WTLB");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(buf[12..16].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(buf[16..20].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(buf[20..24].try_into().unwrap()), 4);
        assert_eq!(f64::from_le_bytes(buf[24..32].try_into().unwrap()), 1.5);
        assert_eq!(buf[32], 1);
        assert_eq!(f64::from_le_bytes(buf[33..41].try_into().unwrap()), 0.25);
        assert_eq!(buf.len(), 41 + 8 * 2 * 16);
        // First node, component 0 then component 1.
        let x0 = grid.node(0);
        assert_eq!(f64::from_le_bytes(buf[41..49].try_into().unwrap()), x0[0]);
        assert_eq!(f64::from_le_bytes(buf[57..65].try_into().unwrap()), -x0[1]);
        let back: StoredFunction<f64> = read_function(buf.as_slice()).unwrap();
        assert_eq!(back.function, f);
        assert_eq!(back.gamma, 0.25);
    }

    #[test]
    fn corrupted_input_is_rejected() {
        assert!(read_function::<f64, _>(&b"WTLX\x01\0\0\0"[..]).is_err());
        let grid = PeriodizedGrid::<f64>::standard(vec![4]).unwrap();
        let mut buf = Vec::new();
        write_function(&mut buf, &GridFunction::zeros(&grid, 1), 0.0).unwrap();
        buf.push(0);
        assert!(read_function::<f64, _>(buf.as_slice()).is_err());
        buf.truncate(buf.len() - 9);
        assert!(read_function::<f64, _>(buf.as_slice()).is_err());
    }
}
