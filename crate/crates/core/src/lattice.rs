//! Fourier analysis on the cube `Q = [-π, π]^n` in the half-shifted basis
//! `v_l(y) = exp(i (l + e₂/2)·y)` and the diagonal solution operator.
//!
//! Inner products are normalized, `(f, g) = (2π)^{-n} ∫_Q f ḡ`, so the basis
//! is orthonormal and the coefficient sum of squares equals the normalized
//! squared norm. The unnormalized `L²(Q)` norm is `(2π)^{n/2}` times larger.
//! Coefficients are stored in DFT order: axis bin `b` holds lattice index
//! `signed_index(b, N)` in `[-N/2, N/2)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{bin_of, signed_index, unravel, FftNd};

/// Truncated lattice together with its uniform sample grid on `[-π, π)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeGrid {
    dim: usize,
    modes: usize,
}

impl LatticeGrid {
    pub fn new(dim: usize, modes: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::ParameterRange(format!("lattice dimension must be at least 2, got {dim}")));
        }
        if modes < 4 || modes % 2 != 0 {
            return Err(Error::ParameterRange(format!(
                "mode count must be even and at least 4, got {modes}"
            )));
        }
        Ok(Self { dim, modes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.modes; self.dim]
    }

    pub fn len(&self) -> usize {
        self.modes.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.modes as f64
    }

    /// Coordinate of sample `i` along any axis.
    pub fn node(&self, i: usize) -> f64 {
        -PI + self.spacing() * i as f64
    }

    /// All sample positions, row-major.
    pub fn nodes(&self) -> Vec<Vec<f64>> {
        let shape = self.shape();
        let mut idx = vec![0; self.dim];
        (0..self.len())
            .map(|flat| {
                unravel(flat, &shape, &mut idx);
                idx.iter().map(|&i| self.node(i)).collect()
            })
            .collect()
    }

    /// Lattice index stored at flat DFT offset `flat`.
    pub fn index_of(&self, flat: usize, out: &mut [i64]) {
        let mut f = flat;
        for a in (0..self.dim).rev() {
            out[a] = signed_index(f % self.modes, self.modes);
            f /= self.modes;
        }
    }

    /// Flat DFT offset of lattice index `l`, if it lies in the band.
    pub fn flat_of(&self, l: &[i64]) -> Option<usize> {
        let half = (self.modes / 2) as i64;
        let mut flat = 0;
        for &c in l {
            if c < -half || c >= half {
                return None;
            }
            flat = flat * self.modes + bin_of(c, self.modes);
        }
        Some(flat)
    }
}

/// Coefficients on a truncated shifted lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: LatticeGrid,
    pub coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: LatticeGrid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::default(); grid.len()],
        }
    }

    /// Single basis mode `v_l` with unit coefficient.
    pub fn unit(grid: LatticeGrid, l: &[i64]) -> Result<Self> {
        let flat = grid
            .flat_of(l)
            .ok_or_else(|| Error::GridMismatch(format!("lattice index {l:?} outside the band")))?;
        let mut f = Self::zeros(grid);
        f.coeffs[flat] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn get(&self, l: &[i64]) -> Option<Complex64> {
        self.grid.flat_of(l).map(|i| self.coeffs[i])
    }

    /// Normalized `L²(Q)` norm (coefficient ℓ² norm).
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }
}

/// `v_l(x) = exp(i (l + e₂/2)·x)`.
pub fn basis_eval(l: &[i64], x: &[f64]) -> Complex64 {
    assert_eq!(l.len(), x.len(), "index and point dimensions differ");
    let mut phase = 0.0;
    for (a, (&li, &xi)) in l.iter().zip(x).enumerate() {
        let shift = if a == 1 { 0.5 } else { 0.0 };
        phase += (li as f64 + shift) * xi;
    }
    Complex64::from_polar(1.0, phase)
}

/// Planned analysis/synthesis between grid samples and shifted-lattice
/// coefficients.
#[derive(Debug, Clone)]
pub struct SpectralTransform {
    grid: LatticeGrid,
    fft: FftNd,
    /// `(-1)^{Σl}` per flat DFT offset.
    sign: Vec<f64>,
    /// `exp(-i y₂/2)` per sample index along axis 1.
    half_shift: Vec<Complex64>,
}

impl SpectralTransform {
    pub fn new(grid: LatticeGrid) -> Self {
        let mut l = vec![0i64; grid.dim()];
        let sign = (0..grid.len())
            .map(|flat| {
                grid.index_of(flat, &mut l);
                if l.iter().sum::<i64>().rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        let half_shift = (0..grid.modes())
            .map(|i| Complex64::from_polar(1.0, -0.5 * grid.node(i)))
            .collect();
        Self {
            grid,
            fft: FftNd::new(&grid.shape()),
            sign,
            half_shift,
        }
    }

    pub fn grid(&self) -> LatticeGrid {
        self.grid
    }

    fn axis1_stride(&self) -> usize {
        self.grid.modes().pow(self.grid.dim() as u32 - 2)
    }

    /// Multiplies samples by `exp(∓ i y₂/2)`.
    fn apply_shift(&self, data: &mut [Complex64], inverse: bool) {
        let stride = self.axis1_stride();
        let n = self.grid.modes();
        for (flat, v) in data.iter_mut().enumerate() {
            let j = (flat / stride) % n;
            let s = self.half_shift[j];
            *v *= if inverse { s.conj() } else { s };
        }
    }

    /// Coefficients `f_l = (2π)^{-n} ∫ f v̄_l` by the rectangle rule on the grid.
    pub fn analyze(&self, samples: &[Complex64]) -> Result<SpectralField> {
        let mut buf = samples.to_vec();
        self.analyze_in_place(&mut buf)?;
        Ok(SpectralField {
            grid: self.grid,
            coeffs: buf,
        })
    }

    pub fn analyze_in_place(&self, buf: &mut [Complex64]) -> Result<()> {
        if buf.len() != self.grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                self.grid.len(),
                buf.len()
            )));
        }
        self.apply_shift(buf, false);
        self.fft.forward(buf);
        let scale = 1.0 / self.grid.len() as f64;
        for (v, s) in buf.iter_mut().zip(&self.sign) {
            *v *= s * scale;
        }
        Ok(())
    }

    /// Grid samples of `Σ c_l v_l`.
    pub fn synthesize(&self, field: &SpectralField) -> Vec<Complex64> {
        let mut buf = field.coeffs.clone();
        self.synthesize_in_place(&mut buf);
        buf
    }

    pub fn synthesize_in_place(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.grid.len());
        for (v, s) in buf.iter_mut().zip(&self.sign) {
            *v *= *s;
        }
        self.fft.inverse(buf);
        self.apply_shift(buf, true);
    }
}

/// Symbol data in the canonical frame where `Re ζ ∥ e₁` and `Im ζ ∥ e₂`.
///
/// `rotation` is row-major and maps lab coordinates to canonical ones.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalZeta {
    pub w1_abs: f64,
    pub w2_abs: f64,
    pub k: f64,
    pub rotation: Vec<f64>,
}

impl CanonicalZeta {
    /// Canonical data for `ζ` with `ζ·ζ = k²`; the rotation is the
    /// Gram–Schmidt completion of `(Re ζ/|Re ζ|, Im ζ/|Im ζ|)`.
    pub fn from_zeta(zeta: &[Complex64], k: f64) -> Result<Self> {
        Self::from_zeta_with_twist(zeta, k, 0.0)
    }

    /// As [`from_zeta`](Self::from_zeta), but rotates the completion vectors
    /// by `twist` radians within their span (or flips the sign of a lone
    /// completion vector when `twist ≠ 0`). Any twist yields a valid frame.
    pub fn from_zeta_with_twist(zeta: &[Complex64], k: f64, twist: f64) -> Result<Self> {
        let n = zeta.len();
        if n < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: n });
        }
        let w1: Vec<f64> = zeta.iter().map(|z| z.re).collect();
        let w2: Vec<f64> = zeta.iter().map(|z| z.im).collect();
        let w1_abs = norm(&w1);
        let w2_abs = norm(&w2);
        if w2_abs == 0.0 {
            return Err(Error::DegenerateSymbol(0.0));
        }
        let scale = w1_abs.max(w2_abs).max(1.0);
        if dot(&w1, &w2).abs() > 1e-9 * scale * scale {
            return Err(Error::ParameterRange("Re ζ and Im ζ are not orthogonal".into()));
        }
        let mut rows: Vec<Option<Vec<f64>>> = vec![None; n];
        let has_w1 = w1_abs > 1e-14 * scale;
        if has_w1 {
            rows[0] = Some(w1.iter().map(|v| v / w1_abs).collect());
        }
        let mut f2: Vec<f64> = w2.iter().map(|v| v / w2_abs).collect();
        if let Some(f1) = &rows[0] {
            let c = dot(f1, &f2);
            for (a, b) in f2.iter_mut().zip(f1) {
                *a -= c * b;
            }
            let l = norm(&f2);
            f2.iter_mut().for_each(|v| *v /= l);
        }
        rows[1] = Some(f2);
        let mut basis: Vec<Vec<f64>> = rows.iter().flatten().cloned().collect();
        let slots: Vec<usize> = (0..n).filter(|&i| rows[i].is_none()).collect();
        let mut completion = Vec::with_capacity(slots.len());
        for _ in &slots {
            let mut best: Option<(f64, Vec<f64>)> = None;
            for j in 0..n {
                let mut v = vec![0.0; n];
                v[j] = 1.0;
                for b in &basis {
                    let c = dot(b, &v);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= c * y;
                    }
                }
                let r = norm(&v);
                if best.as_ref().is_none_or(|(br, _)| r > br + 1e-12) {
                    best = Some((r, v));
                }
            }
            let (r, mut v) = best.expect("n ≥ 1");
            v.iter_mut().for_each(|x| *x /= r);
            // second pass for orthogonality to rounding
            for b in &basis {
                let c = dot(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
            let r = norm(&v);
            v.iter_mut().for_each(|x| *x /= r);
            basis.push(v.clone());
            completion.push(v);
        }
        if twist != 0.0 {
            if completion.len() >= 2 {
                let (c, s) = (twist.cos(), twist.sin());
                let (a, b) = (completion[0].clone(), completion[1].clone());
                for i in 0..n {
                    completion[0][i] = c * a[i] + s * b[i];
                    completion[1][i] = -s * a[i] + c * b[i];
                }
            } else if let Some(v) = completion.first_mut() {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        for (slot, v) in slots.into_iter().zip(completion) {
            rows[slot] = Some(v);
        }
        let rotation = rows.into_iter().flat_map(|r| r.expect("all rows filled")).collect();
        Ok(Self {
            w1_abs,
            w2_abs,
            k,
            rotation,
        })
    }

    pub fn dim(&self) -> usize {
        (self.rotation.len() as f64).sqrt().round() as usize
    }

    /// `ζ` in canonical coordinates: `(|w₁|, i|w₂|, 0, …)`.
    pub fn canonical_zeta(&self) -> Vec<Complex64> {
        let mut z = vec![Complex64::default(); self.dim()];
        z[0] = Complex64::new(self.w1_abs, 0.0);
        z[1] = Complex64::new(0.0, self.w2_abs);
        z
    }

    /// `ζ` in lab coordinates, `Rotᵀ ζ'`.
    pub fn lab_zeta(&self) -> Vec<Complex64> {
        let n = self.dim();
        let z = self.canonical_zeta();
        (0..n)
            .map(|j| (0..n).map(|i| z[i] * self.rotation[i * n + j]).sum())
            .collect()
    }

    /// Canonical coordinates `Rot·x`.
    pub fn to_canonical(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            out[i] = (0..n).map(|j| self.rotation[i * n + j] * x[j]).sum();
        }
    }

    /// Lab coordinates `Rotᵀ·y`.
    pub fn to_lab(&self, y: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for j in 0..n {
            out[j] = (0..n).map(|i| self.rotation[i * n + j] * y[i]).sum();
        }
    }
}

/// Plain parameters of the symbol, without the frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolParams {
    pub w1_abs: f64,
    pub w2_abs: f64,
    pub k: f64,
}

impl From<&CanonicalZeta> for SymbolParams {
    fn from(cz: &CanonicalZeta) -> Self {
        Self {
            w1_abs: cz.w1_abs,
            w2_abs: cz.w2_abs,
            k: cz.k,
        }
    }
}

/// `p_l = |l + e₂/2|² + 2|w₁| l₁ + 2i|w₂|(l₂ + 1/2)` and `d_l = p_l² + 2k² p_l`.
/// Axis numbering is zero-based here (`l[0]`, `l[1]`).
pub fn symbol_p(l: &[i64], params: SymbolParams) -> Result<(Complex64, Complex64)> {
    if params.w2_abs == 0.0 {
        return Err(Error::DegenerateSymbol(params.w2_abs));
    }
    Ok(symbol_unchecked(l, params))
}

#[inline]
pub(crate) fn symbol_unchecked(l: &[i64], params: SymbolParams) -> (Complex64, Complex64) {
    let mut m2 = 0.0;
    for (a, &li) in l.iter().enumerate() {
        let m = li as f64 + if a == 1 { 0.5 } else { 0.0 };
        m2 += m * m;
    }
    let p = Complex64::new(
        m2 + 2.0 * params.w1_abs * l[0] as f64,
        2.0 * params.w2_abs * (l[1] as f64 + 0.5),
    );
    let d = p * p + 2.0 * params.k * params.k * p;
    (p, d)
}

/// Table of `d_l` in DFT order.
pub fn symbol_table(grid: LatticeGrid, params: SymbolParams) -> Result<Vec<Complex64>> {
    if params.w2_abs == 0.0 {
        return Err(Error::DegenerateSymbol(0.0));
    }
    let mut l = vec![0i64; grid.dim()];
    Ok((0..grid.len())
        .map(|flat| {
            grid.index_of(flat, &mut l);
            symbol_unchecked(&l, params).1
        })
        .collect())
}

/// `r_l = f_l / d_l`, the periodic solution operator of the conjugated
/// equation. Requires `|w₂| ≥ 1`.
pub fn apply_g(f: &SpectralField, params: SymbolParams) -> Result<SpectralField> {
    if params.w2_abs == 0.0 {
        return Err(Error::DegenerateSymbol(0.0));
    }
    if params.w2_abs < 1.0 {
        return Err(Error::ParameterRange(format!(
            "|Im ζ| = {} is below 1 in the lattice frame",
            params.w2_abs
        )));
    }
    let table = symbol_table(f.grid, params)?;
    Ok(SpectralField {
        grid: f.grid,
        coeffs: f.coeffs.iter().zip(&table).map(|(c, d)| c / d).collect(),
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_examples() {
        assert!((basis_eval(&[0, 0, 0], &[0.0, 0.0, 0.0]) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((basis_eval(&[0, 0, 0], &[0.0, PI, 0.0]) - c(0.0, 1.0)).norm() < 1e-15);
        assert!((basis_eval(&[1, 0, 0], &[PI / 2.0, 0.0, 0.0]) - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn analyze_single_mode() {
        let grid = LatticeGrid::new(3, 8).unwrap();
        let t = SpectralTransform::new(grid);
        let l = [1, 0, 0];
        let samples: Vec<_> = grid.nodes().iter().map(|x| basis_eval(&l, x)).collect();
        let f = t.analyze(&samples).unwrap();
        let hit = grid.flat_of(&l).unwrap();
        for (i, v) in f.coeffs.iter().enumerate() {
            let want = if i == hit { 1.0 } else { 0.0 };
            assert!((v - c(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn synthesize_zero_mode_is_half_shift() {
        let grid = LatticeGrid::new(2, 6).unwrap();
        let t = SpectralTransform::new(grid);
        let s = t.synthesize(&SpectralField::unit(grid, &[0, 0]).unwrap());
        for (v, x) in s.iter().zip(grid.nodes()) {
            assert!((v - Complex64::from_polar(1.0, x[1] / 2.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn symbol_examples() {
        let p = SymbolParams { w1_abs: 0.0, w2_abs: 2.0, k: 0.0 };
        let (pl, dl) = symbol_p(&[0, 0, 0], p).unwrap();
        assert!((pl - c(0.25, 2.0)).norm() < 1e-15);
        assert!((dl - c(-63.0 / 16.0, 1.0)).norm() < 1e-14);
        let (pl, _) = symbol_p(&[0, 0, 0], SymbolParams { w2_abs: 1.0, ..p }).unwrap();
        assert!((pl - c(0.25, 1.0)).norm() < 1e-15);
        assert!(matches!(
            symbol_p(&[0, 0, 0], SymbolParams { w2_abs: 0.0, ..p }),
            Err(Error::DegenerateSymbol(_))
        ));
    }

    #[test]
    fn apply_g_unit_mode() {
        let grid = LatticeGrid::new(3, 4).unwrap();
        let f = SpectralField::unit(grid, &[0, 0, 0]).unwrap();
        let r = apply_g(&f, SymbolParams { w1_abs: 0.0, w2_abs: 2.0, k: 0.0 }).unwrap();
        let r0 = r.get(&[0, 0, 0]).unwrap();
        assert!((r0.re + 0.23858).abs() < 5e-6 && (r0.im + 0.06059).abs() < 5e-6);
        assert!(r0.norm() <= 0.25);
    }

    #[test]
    fn rotation_is_orthogonal_and_maps_zeta() {
        let k: f64 = 1.3;
        let a: f64 = 2.5;
        let b = (k * k + a * a).sqrt();
        // Re ζ ∥ (1,2,2)/3, Im ζ ∥ (2,-2,1)/3
        let re = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
        let im = [2.0 / 3.0, -2.0 / 3.0, 1.0 / 3.0];
        let zeta: Vec<_> = (0..3).map(|i| c(b * re[i], a * im[i])).collect();
        for twist in [0.0, 1.0] {
            let cz = CanonicalZeta::from_zeta_with_twist(&zeta, k, twist).unwrap();
            let r = &cz.rotation;
            for i in 0..3 {
                for j in 0..3 {
                    let d: f64 = (0..3).map(|m| r[m * 3 + i] * r[m * 3 + j]).sum();
                    assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
                }
            }
            let back = cz.lab_zeta();
            for i in 0..3 {
                assert!((back[i] - zeta[i]).norm() < 1e-12);
            }
            let zz: Complex64 = back.iter().map(|z| z * z).sum();
            assert!((zz - c(k * k, 0.0)).norm() < 1e-10);
        }
    }
}
