//! Multi-dimensional FFTs over row-major buffers (last axis fastest).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Planned forward/inverse transforms for a fixed row-major shape.
///
/// Both directions are unnormalized, matching `rustfft`.
#[derive(Clone)]
pub struct FftNd {
    shape: Vec<usize>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for FftNd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftNd").field("shape", &self.shape).finish()
    }
}

impl FftNd {
    pub fn new(shape: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        let forward = shape.iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse = shape.iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        Self {
            shape: shape.to_vec(),
            forward,
            inverse,
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.forward);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inverse);
    }

    fn run(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>]) {
        assert_eq!(data.len(), self.len(), "buffer does not match planned shape");
        let ndim = self.shape.len();
        let mut lane = Vec::new();
        for axis in 0..ndim {
            let n = self.shape[axis];
            if n == 1 {
                continue;
            }
            let plan = &plans[axis];
            let stride: usize = self.shape[axis + 1..].iter().product();
            if stride == 1 {
                plan.process(data);
                continue;
            }
            lane.resize(n, Complex64::default());
            let block = n * stride;
            for outer in (0..data.len()).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    for (i, slot) in lane.iter_mut().enumerate() {
                        *slot = data[base + i * stride];
                    }
                    plan.process(&mut lane);
                    for (i, v) in lane.iter().enumerate() {
                        data[base + i * stride] = *v;
                    }
                }
            }
        }
    }
}

/// Signed frequency index of DFT bin `i` of an `n`-point transform, in `[-n/2, n/2)`.
#[inline]
pub fn signed_index(i: usize, n: usize) -> i64 {
    let i = i as i64;
    let n = n as i64;
    if i >= (n + 1) / 2 {
        i - n
    } else {
        i
    }
}

/// DFT bin holding signed frequency `l` of an `n`-point transform.
#[inline]
pub fn bin_of(l: i64, n: usize) -> usize {
    l.rem_euclid(n as i64) as usize
}

/// Row-major strides for `shape`.
pub fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for a in (0..shape.len().saturating_sub(1)).rev() {
        s[a] = s[a + 1] * shape[a + 1];
    }
    s
}

/// Multi-index of flat offset `flat` for `shape`.
pub fn unravel(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for a in (0..shape.len()).rev() {
        out[a] = flat % shape[a];
        flat /= shape[a];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_3d() {
        let shape = [4, 6, 8];
        let plan = FftNd::new(&shape);
        let orig: Vec<Complex64> = (0..plan.len())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut buf = orig.clone();
        plan.forward(&mut buf);
        plan.inverse(&mut buf);
        let scale = plan.len() as f64;
        for (a, b) in orig.iter().zip(&buf) {
            assert!((a - b / scale).norm() < 1e-12);
        }
    }

    #[test]
    fn single_mode_lands_in_its_bin() {
        let shape = [8, 8];
        let plan = FftNd::new(&shape);
        let (l0, l1) = (-3i64, 2i64);
        let mut buf = vec![Complex64::default(); 64];
        let mut idx = [0usize; 2];
        for (flat, v) in buf.iter_mut().enumerate() {
            unravel(flat, &shape, &mut idx);
            let ph = 2.0 * std::f64::consts::PI * (l0 as f64 * idx[0] as f64 + l1 as f64 * idx[1] as f64) / 8.0;
            *v = Complex64::from_polar(1.0, ph);
        }
        plan.forward(&mut buf);
        let peak = bin_of(l0, 8) * 8 + bin_of(l1, 8);
        for (flat, v) in buf.iter().enumerate() {
            let expect = if flat == peak { 64.0 } else { 0.0 };
            assert!((v.norm() - expect).abs() < 1e-9, "bin {flat}");
        }
    }

    #[test]
    fn signed_index_covers_band() {
        let got: Vec<i64> = (0..6).map(|i| signed_index(i, 6)).collect();
        assert_eq!(got, vec![0, 1, 2, -3, -2, -1]);
        for l in -3..3 {
            assert_eq!(signed_index(bin_of(l, 6), 6), l);
        }
    }
}
