use super::field::SpectralField;
use crate::{Error, Result};
use num_complex::Complex64;
use std::io::{Read, Write};

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"WCGL";
pub const SNAPSHOT_VERSION: u32 = 1;

/// Writes `magic, version, N, grid_size` followed by `(re, im)` pairs in
/// storage order, all little-endian.
pub fn write_snapshot<W: Write>(mut w: W, f: &SpectralField) -> Result<()> {
    w.write_all(SNAPSHOT_MAGIC)?;
    w.write_all(&SNAPSHOT_VERSION.to_le_bytes())?;
    w.write_all(&(f.n_max() as u32).to_le_bytes())?;
    w.write_all(&(f.grid_size() as u32).to_le_bytes())?;
    for c in f.coeffs() {
        w.write_all(&c.re.to_le_bytes())?;
        w.write_all(&c.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<SpectralField> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(Error::config("not a WCGL snapshot"));
    }
    let version = read_u32(&mut r)?;
    if version != SNAPSHOT_VERSION {
        return Err(Error::Config(format!("unsupported snapshot version {version}")));
    }
    let n = read_u32(&mut r)? as usize;
    let m = read_u32(&mut r)? as usize;
    if m < 2 * n + 1 {
        return Err(Error::Config(format!("snapshot grid {m} cannot hold band {n}")));
    }
    let side = 2 * n + 1;
    let coeffs = (0..side * side)
        .map(|_| Ok(Complex64::new(read_f64(&mut r)?, read_f64(&mut r)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralField::from_coeffs(n, m, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_layout() {
        let f = SpectralField::from_fn(1, 4, |a, b| Complex64::new(a as f64, b as f64));
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &f).unwrap();
        assert_eq!(&buf[..4], b"WCGL");
        assert_eq!(buf.len(), 16 + 9 * 16);
        assert_eq!(&buf[8..12], &1u32.to_le_bytes());
        assert_eq!(f64::from_le_bytes(buf[16..24].try_into().unwrap()), -1.0);
        assert_eq!(read_snapshot(&buf[..]).unwrap(), f);
        assert!(read_snapshot(&b"WCGX"[..]).is_err());
    }
}
