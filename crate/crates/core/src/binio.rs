//! Little-endian binary helpers shared by the KSCL/KSVF/KSAV/KSTM containers.

use std::io::{Read, Write};

use crate::error::{KsError, Result};
use crate::tensor::Tensor2;

pub(crate) fn write_u32<W: Write>(w: &mut W, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

pub(crate) fn write_u64<W: Write>(w: &mut W, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

pub(crate) fn write_f32_slice<W: Write>(w: &mut W, xs: &[f32]) -> Result<()> {
    for &x in xs {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub(crate) fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf)
        .map_err(|e| KsError::Format(format!("truncated file: {e}")))
}

pub(crate) fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub(crate) fn read_f32_vec<R: Read>(r: &mut R, n: usize) -> Result<Vec<f32>> {
    let mut bytes = vec![0u8; n * 4];
    read_exact(r, &mut bytes)?;
    Ok(bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

pub(crate) fn check_magic<R: Read>(r: &mut R, magic: &[u8; 4]) -> Result<()> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    if &b != magic {
        return Err(KsError::Format(format!(
            "bad magic: expected {:?}, got {:?}",
            std::str::from_utf8(magic).unwrap_or("?"),
            b
        )));
    }
    Ok(())
}

/// Tensor payload: u32 rows, u32 cols, then rows*cols little-endian f32.
pub(crate) fn write_tensor<W: Write>(w: &mut W, t: &Tensor2) -> Result<()> {
    write_u32(w, t.rows() as u32)?;
    write_u32(w, t.cols() as u32)?;
    write_f32_slice(w, t.data())
}

pub(crate) fn read_tensor<R: Read>(r: &mut R) -> Result<Tensor2> {
    let rows = read_u32(r)? as usize;
    let cols = read_u32(r)? as usize;
    if rows.checked_mul(cols).is_none() || rows * cols > (1 << 28) {
        return Err(KsError::Format(format!("unreasonable tensor shape {rows}x{cols}")));
    }
    let data = read_f32_vec(r, rows * cols)?;
    Tensor2::from_vec(rows, cols, data).map_err(|e| KsError::Format(e.to_string()))
}
