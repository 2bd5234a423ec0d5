//! Frames adapted to a target frequency and the complex frequency pairs
//! `ζ₁, ζ₂` with `ζⱼ·ζⱼ = k²` and `ζ₁ + ζ₂ = −ξ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{dot, norm};

/// Orthonormal frame with `e(1) = (ξ'/|ξ'|, 0)` and `e(n) = e_n`, completed
/// by Gram–Schmidt over the standard basis. Falls back to the standard basis
/// when `ξ' = 0`.
pub fn make_frame(xi: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = xi.len();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: n });
    }
    if norm(xi) == 0.0 {
        return Err(Error::ParameterRange("the frame needs ξ ≠ 0".into()));
    }
    let unit = |j: usize| {
        let mut v = vec![0.0; n];
        v[j] = 1.0;
        v
    };
    let tangential = norm(&xi[..n - 1]);
    if tangential == 0.0 {
        return Ok((0..n).map(unit).collect());
    }
    let mut e1 = xi.to_vec();
    e1[n - 1] = 0.0;
    e1.iter_mut().for_each(|v| *v /= tangential);
    let mut fixed = vec![e1.clone(), unit(n - 1)];
    let mut middle = Vec::with_capacity(n - 2);
    for _ in 0..n.saturating_sub(2) {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for j in 0..n {
            let mut v = unit(j);
            for _ in 0..2 {
                for b in &fixed {
                    let c = dot(b, &v);
                    v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let r = norm(&v);
            if best.as_ref().is_none_or(|(br, _)| r > br + 1e-12) {
                best = Some((r, v));
            }
        }
        let (r, mut v) = best.expect("candidates exist");
        v.iter_mut().for_each(|x| *x /= r);
        fixed.push(v.clone());
        middle.push(v);
    }
    let mut frame = Vec::with_capacity(n);
    frame.push(e1);
    frame.extend(middle);
    frame.push(unit(n - 1));
    Ok(frame)
}

/// Complex frequency pair for a target frequency `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaPair {
    pub xi: Vec<f64>,
    pub k: f64,
    pub a: f64,
    pub frame: Vec<Vec<f64>>,
    pub mu1: Vec<f64>,
    pub mu2: Vec<f64>,
    pub zeta1: Vec<Complex64>,
    pub zeta2: Vec<Complex64>,
}

impl ZetaPair {
    /// `√(k² + a² − |ξ|²/4)`.
    pub fn beta(&self) -> f64 {
        (self.k * self.k + self.a * self.a - dot(&self.xi, &self.xi) / 4.0).max(0.0).sqrt()
    }
}

/// `ζ₁,₂ = −ξ/2 ± √(k² + a² − |ξ|²/4) μ⁽¹⁾ ± i a μ⁽²⁾`.
pub fn make_zeta_pair(xi: &[f64], k: f64, a: f64) -> Result<ZetaPair> {
    let n = xi.len();
    if n < 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: n });
    }
    if !(k >= 0.0 && a > 0.0 && k.is_finite() && a.is_finite()) {
        return Err(Error::ParameterRange(format!("need k ≥ 0 and a > 0, got k = {k}, a = {a}")));
    }
    let xi2 = dot(xi, xi);
    let radicand = k * k + a * a - xi2 / 4.0;
    if radicand < 0.0 {
        return Err(Error::ParameterRange(format!(
            "k² + a² = {} is below |ξ|²/4 = {}",
            k * k + a * a,
            xi2 / 4.0
        )));
    }
    let frame = make_frame(xi)?;
    let xi_abs = xi2.sqrt();
    let tangential = norm(&xi[..n - 1]);
    let c1 = -xi[n - 1] / xi_abs;
    let cn = tangential / xi_abs;
    let mu1: Vec<f64> = (0..n).map(|i| c1 * frame[0][i] + cn * frame[n - 1][i]).collect();
    let mu2 = frame[1].clone();
    let beta = radicand.sqrt();
    let zeta1 = (0..n).map(|i| Complex64::new(-xi[i] / 2.0 + beta * mu1[i], a * mu2[i])).collect();
    let zeta2 = (0..n).map(|i| Complex64::new(-xi[i] / 2.0 - beta * mu1[i], -a * mu2[i])).collect();
    Ok(ZetaPair {
        xi: xi.to_vec(),
        k,
        a,
        frame,
        mu1,
        mu2,
        zeta1,
        zeta2,
    })
}

/// Bilinear (unconjugated) dot product.
pub fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Plain complex frequency `(√(k² + a²), i a, 0, …)` along the first two axes.
pub fn axis_zeta(dim: usize, k: f64, a: f64) -> Vec<Complex64> {
    let mut z = vec![Complex64::default(); dim];
    z[0] = Complex64::new((k * k + a * a).sqrt(), 0.0);
    z[1] = Complex64::new(0.0, a);
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_examples() {
        let f = make_frame(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(f, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let f = make_frame(&[0.0, 0.0, 5.0]).unwrap();
        assert_eq!(f[0], vec![1.0, 0.0, 0.0]);
        assert_eq!(f[2], vec![0.0, 0.0, 1.0]);
        let f = make_frame(&[3.0, 4.0, 0.0]).unwrap();
        assert!((f[0][0] - 0.6).abs() < 1e-15 && (f[0][1] - 0.8).abs() < 1e-15);
        let coords: Vec<f64> = f.iter().map(|e| dot(e, &[3.0, 4.0, 0.0])).collect();
        assert!((coords[0] - 5.0).abs() < 1e-14 && coords[1].abs() < 1e-14 && coords[2].abs() < 1e-14);
        assert!(make_frame(&[0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn zeta_pair_example() {
        let p = make_zeta_pair(&[1.0, 0.0, 0.0], 1.0, 2.0).unwrap();
        let want = [Complex64::new(-0.5, 0.0), Complex64::new(0.0, 2.0), Complex64::new(19f64.sqrt() / 2.0, 0.0)];
        for i in 0..3 {
            assert!((p.zeta1[i] - want[i]).norm() < 1e-14);
            assert!((p.zeta1[i] + p.zeta2[i] + p.xi[i]).norm() < 1e-14);
        }
        assert!((cdot(&p.zeta1, &p.zeta1) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let q = make_zeta_pair(&[0.0, 0.0, 2.0], 2.0, 2.0).unwrap();
        assert!((cdot(&q.zeta2, &q.zeta2) - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        assert!(matches!(make_zeta_pair(&[10.0, 0.0, 0.0], 1.0, 1.0), Err(Error::ParameterRange(_))));
    }
}
