//! Field snapshot export.
//!
//! CSV: header `x,t,u`, one row per grid point, slices in time order.
//!
//! Binary (little-endian): 8-byte magic `PASYMFLD`, `u32` format version (1),
//! `u64` nt, `u64` nx, then `nx` x-coordinates, `nt` times and `nt·nx`
//! values in row-major (time-slice) order, all `f64`.

use std::io::{Read, Write};

use super::SampledField;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"PASYMFLD";
const VERSION: u32 = 1;

pub fn write_csv<W: Write>(field: &SampledField, mut w: W) -> Result<()> {
    writeln!(w, "x,t,u")?;
    for (k, &t) in field.t.iter().enumerate() {
        for (&x, &u) in field.x.iter().zip(field.slice(k)) {
            writeln!(w, "{x},{t},{u}")?;
        }
    }
    Ok(())
}

pub fn write_binary<W: Write>(field: &SampledField, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(field.nt() as u64).to_le_bytes())?;
    w.write_all(&(field.nx() as u64).to_le_bytes())?;
    for v in field.x.iter().chain(&field.t).chain(&field.values) {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<SampledField> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let version = u32::from_le_bytes(b4);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let nt = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let nx = u64::from_le_bytes(b8) as usize;
    let count = nt
        .checked_mul(nx)
        .and_then(|v| v.checked_add(nt + nx))
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    let mut doubles = Vec::with_capacity(count.min(1 << 28));
    for _ in 0..count {
        r.read_exact(&mut b8)?;
        doubles.push(f64::from_le_bytes(b8));
    }
    let values = doubles.split_off(nx + nt);
    let t = doubles.split_off(nx);
    SampledField::new(doubles, t, values).map_err(|e| Error::Format(e.to_string()))
}
