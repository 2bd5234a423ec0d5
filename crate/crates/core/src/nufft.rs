//! Off-grid evaluation of truncated Fourier series `Σ_l c_l e^{i l·y}`
//! (type-2 non-uniform FFT with Gaussian gridding on a twice oversampled grid).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::fft::{bin_of, signed_index, FftNd};

/// Planned evaluator for coefficient arrays on an `N^n` band.
#[derive(Debug, Clone)]
pub struct Nufft {
    dim: usize,
    modes: usize,
    fine: usize,
    spread: usize,
    tau: f64,
    /// `1/ĝ(l)` for each axis bin of the coarse band.
    deconv: Vec<f64>,
    fft: FftNd,
}

/// Deconvolved samples on the fine grid, components interleaved.
#[derive(Debug, Clone)]
pub struct FineGrid {
    components: usize,
    data: Vec<Complex64>,
}

impl FineGrid {
    pub fn components(&self) -> usize {
        self.components
    }
}

impl Nufft {
    /// `spread` is the half-width of the Gaussian stencil in fine-grid points;
    /// 12 gives close to double precision, 8 about nine digits.
    pub fn new(dim: usize, modes: usize, spread: usize) -> Self {
        assert!(spread >= 2, "spread must be at least 2");
        let fine = 2 * modes;
        let tau = PI * spread as f64 / (3.0 * (modes * modes) as f64);
        let deconv = (0..modes)
            .map(|b| {
                let l = signed_index(b, modes) as f64;
                1.0 / ((tau / PI).sqrt() * (-tau * l * l).exp())
            })
            .collect();
        Self {
            dim,
            modes,
            fine,
            spread,
            tau,
            deconv,
            fft: FftNd::new(&vec![fine; dim]),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Fine-grid data for several DFT-ordered coefficient arrays at once.
    pub fn prepare(&self, arrays: &[&[Complex64]]) -> FineGrid {
        let nc = arrays.len();
        let fine_len = self.fine.pow(self.dim as u32);
        let coarse_len = self.modes.pow(self.dim as u32);
        let mut data = vec![Complex64::default(); fine_len * nc];
        let mut buf = vec![Complex64::default(); fine_len];
        let mut fine_index = vec![0usize; coarse_len];
        let mut weight = vec![0.0f64; coarse_len];
        for flat in 0..coarse_len {
            let mut f = flat;
            let mut idx = 0usize;
            let mut stride = 1usize;
            let mut w = 1.0;
            for _ in 0..self.dim {
                let b = f % self.modes;
                f /= self.modes;
                let l = signed_index(b, self.modes);
                idx += bin_of(l, self.fine) * stride;
                stride *= self.fine;
                w *= self.deconv[b];
            }
            fine_index[flat] = idx;
            weight[flat] = w;
        }
        for (c, arr) in arrays.iter().enumerate() {
            assert_eq!(arr.len(), coarse_len, "coefficient array has the wrong length");
            buf.iter_mut().for_each(|v| *v = Complex64::default());
            for flat in 0..coarse_len {
                buf[fine_index[flat]] = arr[flat] * weight[flat];
            }
            self.fft.inverse(&mut buf);
            for (j, v) in buf.iter().enumerate() {
                data[j * nc + c] = *v;
            }
        }
        FineGrid { components: nc, data }
    }

    /// Evaluates every component at `y` (any real coordinates; the series is
    /// `2π`-periodic). `out` must have one slot per component.
    pub fn eval(&self, grid: &FineGrid, y: &[f64], out: &mut [Complex64]) {
        let n = self.dim;
        let nc = grid.components;
        assert_eq!(y.len(), n);
        assert_eq!(out.len(), nc);
        let width = 2 * self.spread;
        let h = 2.0 * PI / self.fine as f64;
        let inv4tau = 1.0 / (4.0 * self.tau);
        let mut idx = vec![0usize; n * width];
        let mut wts = vec![0.0f64; n * width];
        for a in 0..n {
            let u = y[a] / h;
            let j0 = u.floor() as i64;
            for s in 0..width {
                let j = j0 - self.spread as i64 + 1 + s as i64;
                let t = y[a] - h * j as f64;
                wts[a * width + s] = (-t * t * inv4tau).exp();
                idx[a * width + s] = j.rem_euclid(self.fine as i64) as usize;
            }
        }
        out.iter_mut().for_each(|v| *v = Complex64::default());
        let mut odo = vec![0usize; n - 1];
        let last = n - 1;
        loop {
            let mut w = 1.0;
            let mut base = 0usize;
            for a in 0..last {
                w *= wts[a * width + odo[a]];
                base = base * self.fine + idx[a * width + odo[a]];
            }
            base *= self.fine;
            for s in 0..width {
                let ws = w * wts[last * width + s];
                let off = (base + idx[last * width + s]) * nc;
                for c in 0..nc {
                    out[c] += grid.data[off + c] * ws;
                }
            }
            let mut a = last;
            loop {
                if a == 0 {
                    let scale = 1.0 / (self.fine as f64).powi(n as i32);
                    out.iter_mut().for_each(|v| *v *= scale);
                    return;
                }
                a -= 1;
                odo[a] += 1;
                if odo[a] < width {
                    break;
                }
                odo[a] = 0;
            }
        }
    }
}

/// Exact evaluation of `Σ_l c_l e^{i l·y}` using separable phase tables.
pub fn direct_eval(dim: usize, modes: usize, coeffs: &[Complex64], y: &[f64]) -> Complex64 {
    assert_eq!(coeffs.len(), modes.pow(dim as u32));
    let tables: Vec<Vec<Complex64>> = (0..dim)
        .map(|a| {
            (0..modes)
                .map(|b| Complex64::from_polar(1.0, signed_index(b, modes) as f64 * y[a]))
                .collect()
        })
        .collect();
    fn rec(level: usize, dim: usize, modes: usize, offset: usize, coeffs: &[Complex64], t: &[Vec<Complex64>]) -> Complex64 {
        if level == dim {
            return coeffs[offset];
        }
        let stride = modes.pow((dim - level - 1) as u32);
        let mut acc = Complex64::default();
        for b in 0..modes {
            acc += t[level][b] * rec(level + 1, dim, modes, offset + b * stride, coeffs, t);
        }
        acc
    }
    rec(0, dim, modes, 0, coeffs, &tables)
}
