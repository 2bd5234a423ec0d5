//! Uniformly sampled fields on boxes and the `BCGO1` binary container.
//!
//! Layout (little-endian): magic `BCGO1`, `u32` dimension, one `u64` count per
//! axis, `2n` `f64` box bounds as `(lo, hi)` pairs, a `u8` flag (0 real,
//! 1 complex), then the samples in row-major order with the last axis
//! fastest. Complex samples are stored as `(re, im)` pairs. Sample `i` on an
//! axis sits at `lo + i (hi - lo) / count`.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::unravel;

pub const MAGIC: &[u8; 5] = b"BCGO1";

/// Scalar types that can live in a [`Grid`].
pub trait Sample: Copy + Default + Send + Sync + 'static {
    const COMPLEX: bool;
    fn write_le(&self, out: &mut Vec<u8>);
    fn read_le(bytes: &[u8]) -> Self;
}

impl Sample for f64 {
    const COMPLEX: bool = false;
    fn write_le(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }
    fn read_le(bytes: &[u8]) -> Self {
        f64::from_le_bytes(bytes[..8].try_into().unwrap())
    }
}

impl Sample for Complex64 {
    const COMPLEX: bool = true;
    fn write_le(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.re.to_le_bytes());
        out.extend_from_slice(&self.im.to_le_bytes());
    }
    fn read_le(bytes: &[u8]) -> Self {
        Complex64::new(
            f64::from_le_bytes(bytes[..8].try_into().unwrap()),
            f64::from_le_bytes(bytes[8..16].try_into().unwrap()),
        )
    }
}

/// Samples of a field on the half-open box `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    pub shape: Vec<usize>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub data: Vec<T>,
}

pub type GridField = Grid<f64>;
pub type ComplexGrid = Grid<Complex64>;

impl<T: Sample> Grid<T> {
    pub fn zeros(shape: &[usize], lo: &[f64], hi: &[f64]) -> Self {
        assert_eq!(shape.len(), lo.len());
        assert_eq!(shape.len(), hi.len());
        Self {
            shape: shape.to_vec(),
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            data: vec![T::default(); shape.iter().product()],
        }
    }

    /// Samples `f` at every grid position.
    pub fn from_fn(shape: &[usize], lo: &[f64], hi: &[f64], f: impl Fn(&[f64]) -> T) -> Self {
        let mut g = Self::zeros(shape, lo, hi);
        let mut idx = vec![0usize; shape.len()];
        let mut x = vec![0.0; shape.len()];
        for flat in 0..g.data.len() {
            unravel(flat, shape, &mut idx);
            g.position_into(&idx, &mut x);
            g.data[flat] = f(&x);
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn spacing(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|a| (self.hi[a] - self.lo[a]) / self.shape[a] as f64)
            .collect()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().iter().product()
    }

    pub fn position_into(&self, idx: &[usize], out: &mut [f64]) {
        for a in 0..self.dim() {
            out[a] = self.lo[a] + (self.hi[a] - self.lo[a]) * idx[a] as f64 / self.shape[a] as f64;
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(64 + self.data.len() * 16);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.dim() as u32).to_le_bytes());
        for &c in &self.shape {
            out.extend_from_slice(&(c as u64).to_le_bytes());
        }
        for a in 0..self.dim() {
            out.extend_from_slice(&self.lo[a].to_le_bytes());
            out.extend_from_slice(&self.hi[a].to_le_bytes());
        }
        out.push(T::COMPLEX as u8);
        for v in &self.data {
            v.write_le(&mut out);
        }
        out
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(&self.to_bytes())?;
        Ok(())
    }

    /// Parses one record from the front of `bytes`, returning it and the
    /// number of bytes consumed.
    pub fn from_bytes(bytes: &[u8]) -> Result<(Self, usize)> {
        let mut cur = Cursor { bytes, pos: 0 };
        if cur.take(5)? != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let dim = u32::from_le_bytes(cur.take(4)?.try_into().unwrap()) as usize;
        if dim == 0 || dim > 16 {
            return Err(Error::Format(format!("unsupported dimension {dim}")));
        }
        let mut shape = Vec::with_capacity(dim);
        for _ in 0..dim {
            shape.push(u64::from_le_bytes(cur.take(8)?.try_into().unwrap()) as usize);
        }
        let mut lo = Vec::with_capacity(dim);
        let mut hi = Vec::with_capacity(dim);
        for _ in 0..dim {
            lo.push(f64::read_le(cur.take(8)?));
            hi.push(f64::read_le(cur.take(8)?));
        }
        let flag = cur.take(1)?[0];
        if flag > 1 {
            return Err(Error::Format(format!("bad value-kind flag {flag}")));
        }
        if (flag == 1) != T::COMPLEX {
            return Err(Error::Format(format!(
                "expected {} samples, file holds {}",
                if T::COMPLEX { "complex" } else { "real" },
                if flag == 1 { "complex" } else { "real" }
            )));
        }
        let count: usize = shape
            .iter()
            .try_fold(1usize, |acc, &c| acc.checked_mul(c))
            .ok_or_else(|| Error::Format("sample count overflows".into()))?;
        let width = if T::COMPLEX { 16 } else { 8 };
        let body = cur.take(
            count
                .checked_mul(width)
                .ok_or_else(|| Error::Format("sample count overflows".into()))?,
        )?;
        let data = body.chunks_exact(width).map(T::read_le).collect();
        Ok((Self { shape, lo, hi, data }, cur.pos))
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let (g, used) = Self::from_bytes(&bytes)?;
        if used != bytes.len() {
            return Err(Error::Format(format!("{} trailing bytes", bytes.len() - used)));
        }
        Ok(g)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format("truncated record".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }
}

impl GridField {
    /// Multilinear interpolation; samples beyond the box count as zero.
    pub fn interpolate(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let mut base = [0i64; 8];
        let mut frac = [0.0f64; 8];
        assert!(n <= 8, "interpolation supports up to 8 dimensions");
        for a in 0..n {
            let h = (self.hi[a] - self.lo[a]) / self.shape[a] as f64;
            let t = (x[a] - self.lo[a]) / h;
            let f = t.floor();
            base[a] = f as i64;
            frac[a] = t - f;
        }
        let mut acc = 0.0;
        'corner: for corner in 0..(1usize << n) {
            let mut w = 1.0;
            let mut flat = 0usize;
            for a in 0..n {
                let bit = (corner >> a) & 1;
                let i = base[a] + bit as i64;
                if i < 0 || i >= self.shape[a] as i64 {
                    continue 'corner;
                }
                w *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
                flat = flat * self.shape[a] + i as usize;
            }
            acc += w * self.data[flat];
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Riemann-sum L² norm (unnormalized).
    pub fn l2_norm(&self) -> f64 {
        (self.data.iter().map(|v| v * v).sum::<f64>() * self.cell_volume()).sqrt()
    }

    pub fn integral(&self) -> f64 {
        self.data.iter().sum::<f64>() * self.cell_volume()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_real_and_complex() {
        let g = GridField::from_fn(&[3, 4], &[-1.0, 0.0], &[1.0, 2.0], |x| x[0] * 10.0 + x[1]);
        let (back, used) = GridField::from_bytes(&g.to_bytes()).unwrap();
        assert_eq!(back, g);
        assert_eq!(used, g.to_bytes().len());

        let c = ComplexGrid::from_fn(&[2, 2, 2], &[0.0; 3], &[1.0; 3], |x| Complex64::new(x[0], -x[2]));
        let back = ComplexGrid::read_from(&c.to_bytes()[..]).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_wrong_kind_and_truncation() {
        let g = GridField::zeros(&[2, 2], &[0.0, 0.0], &[1.0, 1.0]);
        let bytes = g.to_bytes();
        assert!(matches!(ComplexGrid::from_bytes(&bytes), Err(Error::Format(_))));
        assert!(matches!(GridField::from_bytes(&bytes[..bytes.len() - 1]), Err(Error::Format(_))));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(GridField::from_bytes(&bad).is_err());
    }

    #[test]
    fn header_layout() {
        let g = GridField::zeros(&[2, 3], &[-1.0, 0.5], &[1.0, 2.5]);
        let b = g.to_bytes();
        assert_eq!(&b[..5], b"BCGO1");
        assert_eq!(u32::from_le_bytes(b[5..9].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(b[9..17].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(b[17..25].try_into().unwrap()), 3);
        assert_eq!(f64::from_le_bytes(b[25..33].try_into().unwrap()), -1.0);
        assert_eq!(f64::from_le_bytes(b[33..41].try_into().unwrap()), 1.0);
        assert_eq!(b[57], 0);
        assert_eq!(b.len(), 58 + 6 * 8);
    }

    #[test]
    fn interpolation_exact_for_linear() {
        let g = GridField::from_fn(&[8, 8, 8], &[0.0; 3], &[1.0; 3], |x| 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2]);
        let p = [0.31, 0.47, 0.66];
        assert!((g.interpolate(&p) - (1.0 + 0.62 - 0.47 + 0.33)).abs() < 1e-12);
        let node = [0.25, 0.5, 0.125];
        assert!((g.interpolate(&node) - (1.0 + 0.5 - 0.5 + 0.0625)).abs() < 1e-12);
        assert_eq!(g.interpolate(&[-0.5, 0.5, 0.5]), 0.0);
    }
}
