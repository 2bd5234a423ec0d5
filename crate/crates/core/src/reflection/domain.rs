//! Box domains below the plane `x_n = 0` and their faces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed axis-aligned box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxRegion {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    pub fn contains_box(&self, other: &BoxRegion) -> bool {
        (0..self.dim()).all(|a| other.lo[a] >= self.lo[a] && other.hi[a] <= self.hi[a])
    }

    pub fn union(&self, other: &BoxRegion) -> BoxRegion {
        BoxRegion {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a.min(*b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a.max(*b)).collect(),
        }
    }

    pub fn intersection(&self, other: &BoxRegion) -> Option<BoxRegion> {
        let lo: Vec<f64> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(*b)).collect();
        let hi: Vec<f64> = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(*b)).collect();
        lo.iter().zip(&hi).all(|(a, b)| a < b).then_some(BoxRegion { lo, hi })
    }

    /// Image under `x_n ↦ −x_n`.
    pub fn mirrored(&self) -> BoxRegion {
        let n = self.dim();
        let mut b = self.clone();
        b.lo[n - 1] = -self.hi[n - 1];
        b.hi[n - 1] = -self.lo[n - 1];
        b
    }

    /// Largest distance from the origin to a point of the box.
    pub fn corner_radius(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| a.abs().max(b.abs()).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }
}

/// One flat face of a box: the set where coordinate `axis` equals `offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub axis: usize,
    /// `+1` for the face at the upper bound, `−1` at the lower bound.
    pub side: i8,
    pub offset: f64,
    /// Tangential extent over the remaining axes, in increasing axis order.
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Face {
    /// Outward unit normal.
    pub fn normal(&self, dim: usize) -> Vec<f64> {
        let mut v = vec![0.0; dim];
        v[self.axis] = self.side as f64;
        v
    }

    pub fn tangential_axes(&self, dim: usize) -> Vec<usize> {
        (0..dim).filter(|&a| a != self.axis).collect()
    }

    /// Lifts tangential coordinates to a point on the face.
    pub fn lift(&self, t: &[f64]) -> Vec<f64> {
        let dim = t.len() + 1;
        let mut x = Vec::with_capacity(dim);
        let mut it = t.iter();
        for a in 0..dim {
            x.push(if a == self.axis { self.offset } else { *it.next().unwrap() });
        }
        x
    }

    pub fn area(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }
}

/// `Ω = (−L, L)^{n−1} × (−H, 0)` with the flat piece `Γ₀ = ∂Ω ∩ {x_n = 0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub dim: usize,
    pub half_width: f64,
    pub depth: f64,
}

impl DomainSpec {
    pub fn new(dim: usize, half_width: f64, depth: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::ParameterRange(format!("domain dimension must be at least 2, got {dim}")));
        }
        if !(half_width > 0.0 && depth > 0.0 && half_width.is_finite() && depth.is_finite()) {
            return Err(Error::ParameterRange("domain extents must be positive".into()));
        }
        Ok(Self { dim, half_width, depth })
    }

    pub fn region(&self) -> BoxRegion {
        let n = self.dim;
        let mut lo = vec![-self.half_width; n];
        let mut hi = vec![self.half_width; n];
        lo[n - 1] = -self.depth;
        hi[n - 1] = 0.0;
        BoxRegion { lo, hi }
    }

    /// `Ω ∪ Ω*`, the doubled box.
    pub fn doubled(&self) -> BoxRegion {
        let r = self.region();
        r.union(&r.mirrored())
    }

    /// Radius of the enclosing ball, at least 1.
    pub fn enclosing_radius(&self) -> f64 {
        self.doubled().corner_radius().max(1.0)
    }

    /// Scale `κ = 0.9π/R` that maps the enclosing ball well inside `Q`.
    pub fn kappa(&self) -> f64 {
        0.9 * std::f64::consts::PI / self.enclosing_radius()
    }

    /// All `2n` faces; the last one is `Γ₀`.
    pub fn faces(&self) -> Vec<Face> {
        let n = self.dim;
        let r = self.region();
        let mut faces = Vec::with_capacity(2 * n);
        for axis in 0..n {
            for side in [-1i8, 1] {
                if axis == n - 1 && side == 1 {
                    continue;
                }
                faces.push(self.face(&r, axis, side));
            }
        }
        faces.push(self.face(&r, n - 1, 1));
        faces
    }

    /// The accessible faces `Γ = ∂Ω \ Γ₀`.
    pub fn gamma(&self) -> Vec<Face> {
        let mut f = self.faces();
        f.pop();
        f
    }

    pub fn gamma0(&self) -> Face {
        self.faces().pop().expect("box has faces")
    }

    fn face(&self, r: &BoxRegion, axis: usize, side: i8) -> Face {
        let offset = if side > 0 { r.hi[axis] } else { r.lo[axis] };
        let (lo, hi) = (0..self.dim)
            .filter(|&a| a != axis)
            .map(|a| (r.lo[a], r.hi[a]))
            .unzip();
        Face { axis, side, offset, lo, hi }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_and_radius() {
        let d = DomainSpec::new(3, 0.6, 1.0).unwrap();
        let faces = d.faces();
        assert_eq!(faces.len(), 6);
        let g0 = d.gamma0();
        assert_eq!((g0.axis, g0.side, g0.offset), (2, 1, 0.0));
        assert_eq!(d.gamma().len(), 5);
        let want = (0.36f64 + 0.36 + 1.0).sqrt();
        assert!((d.enclosing_radius() - want).abs() < 1e-15);
        let small = DomainSpec::new(3, 0.2, 0.2).unwrap();
        assert_eq!(small.enclosing_radius(), 1.0);
        let total: f64 = faces.iter().map(Face::area).sum();
        assert!((total - (2.0 * 1.44 + 4.0 * 1.2)).abs() < 1e-12);
    }

    #[test]
    fn lift_places_offset() {
        let d = DomainSpec::new(3, 0.5, 1.0).unwrap();
        let bottom = d.faces().into_iter().find(|f| f.axis == 2 && f.side == -1).unwrap();
        assert_eq!(bottom.lift(&[0.1, 0.2]), vec![0.1, 0.2, -1.0]);
        assert_eq!(bottom.normal(3), vec![0.0, 0.0, -1.0]);
    }
}
