//! Real potentials: sums of analytic terms, gridded samples, and even
//! extensions across `x_n = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::domain::BoxRegion;
use crate::error::{Error, Result};
use crate::field::GridField;
use crate::special::{interval_moment_transform, interval_transform, poly_bump_transform, unit_ball_transform_3d};

/// One analytic building block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Term {
    /// `A Π_a (1 − ((x_a − c_a)/h_a)²)^m` on the box `|x_a − c_a| < h_a`.
    PolyBox {
        center: Vec<f64>,
        half_widths: Vec<f64>,
        #[serde(default = "default_power")]
        power: u32,
        amplitude: f64,
    },
    /// `A (1 − |x − c|²/ρ²)^m` on the ball `|x − c| < ρ`.
    RadialBump {
        center: Vec<f64>,
        radius: f64,
        #[serde(default = "default_power")]
        power: u32,
        amplitude: f64,
    },
    /// `A 1_{|x − c| < ρ}`.
    Ball { center: Vec<f64>, radius: f64, amplitude: f64 },
    /// `v 1_box`.
    Constant { lo: Vec<f64>, hi: Vec<f64>, value: f64 },
    /// `A x_n 1_box`.
    LinearNormal { lo: Vec<f64>, hi: Vec<f64>, amplitude: f64 },
}

fn default_power() -> u32 {
    4
}

impl Term {
    pub fn dim(&self) -> usize {
        match self {
            Term::PolyBox { center, .. } | Term::RadialBump { center, .. } | Term::Ball { center, .. } => center.len(),
            Term::Constant { lo, .. } | Term::LinearNormal { lo, .. } => lo.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        match self {
            Term::PolyBox { center, half_widths, .. } => {
                if half_widths.len() != center.len() || half_widths.iter().any(|h| !(*h > 0.0)) {
                    return bad("poly-box needs one positive half width per axis");
                }
            }
            Term::RadialBump { radius, .. } | Term::Ball { radius, .. } => {
                if !(*radius > 0.0) {
                    return bad("radius must be positive");
                }
            }
            Term::Constant { lo, hi, .. } | Term::LinearNormal { lo, hi, .. } => {
                if lo.len() != hi.len() || lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
                    return bad("box bounds must satisfy lo < hi on every axis");
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Term::PolyBox { center, half_widths, power, amplitude } => {
                let mut v = *amplitude;
                for a in 0..x.len() {
                    let t = (x[a] - center[a]) / half_widths[a];
                    if t.abs() >= 1.0 {
                        return 0.0;
                    }
                    v *= (1.0 - t * t).powi(*power as i32);
                }
                v
            }
            Term::RadialBump { center, radius, power, amplitude } => {
                let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / (radius * radius);
                if r2 >= 1.0 {
                    0.0
                } else {
                    amplitude * (1.0 - r2).powi(*power as i32)
                }
            }
            Term::Ball { center, radius, amplitude } => {
                let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                if r2 < radius * radius {
                    *amplitude
                } else {
                    0.0
                }
            }
            Term::Constant { lo, hi, value } => {
                if inside_open(x, lo, hi) {
                    *value
                } else {
                    0.0
                }
            }
            Term::LinearNormal { lo, hi, amplitude } => {
                if inside_open(x, lo, hi) {
                    amplitude * x[x.len() - 1]
                } else {
                    0.0
                }
            }
        }
    }

    pub fn support(&self) -> BoxRegion {
        match self {
            Term::PolyBox { center, half_widths, .. } => BoxRegion::new(
                center.iter().zip(half_widths).map(|(c, h)| c - h).collect(),
                center.iter().zip(half_widths).map(|(c, h)| c + h).collect(),
            ),
            Term::RadialBump { center, radius, .. } | Term::Ball { center, radius, .. } => BoxRegion::new(
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            Term::Constant { lo, hi, .. } | Term::LinearNormal { lo, hi, .. } => BoxRegion::new(lo.clone(), hi.clone()),
        }
    }

    /// Upper bound for `sup |term|`.
    pub fn sup_bound(&self) -> f64 {
        match self {
            Term::PolyBox { amplitude, .. } | Term::RadialBump { amplitude, .. } | Term::Ball { amplitude, .. } => {
                amplitude.abs()
            }
            Term::Constant { value, .. } => value.abs(),
            Term::LinearNormal { lo, hi, amplitude } => {
                let n = lo.len() - 1;
                amplitude.abs() * lo[n].abs().max(hi[n].abs())
            }
        }
    }

    /// `∫ term(x) e^{-iξ·x} dx` where a closed form is available.
    pub fn fourier(&self, xi: &[f64]) -> Option<Complex64> {
        let phase = |c: &[f64]| Complex64::from_polar(1.0, -xi.iter().zip(c).map(|(a, b)| a * b).sum::<f64>());
        match self {
            Term::PolyBox { center, half_widths, power, amplitude } => {
                let mut v = *amplitude;
                for a in 0..xi.len() {
                    v *= half_widths[a] * poly_bump_transform(*power, xi[a] * half_widths[a]);
                }
                Some(phase(center) * v)
            }
            Term::Ball { center, radius, amplitude } if xi.len() == 3 => {
                let rho = xi.iter().map(|v| v * v).sum::<f64>().sqrt() * radius;
                Some(phase(center) * (amplitude * radius.powi(3) * unit_ball_transform_3d(rho)))
            }
            Term::Constant { lo, hi, value } => {
                let mut v = Complex64::new(*value, 0.0);
                for a in 0..xi.len() {
                    v *= interval_transform(lo[a], hi[a], xi[a]);
                }
                Some(v)
            }
            Term::LinearNormal { lo, hi, amplitude } => {
                let n = xi.len() - 1;
                let mut v = Complex64::new(*amplitude, 0.0) * interval_moment_transform(lo[n], hi[n], xi[n]);
                for a in 0..n {
                    v *= interval_transform(lo[a], hi[a], xi[a]);
                }
                Some(v)
            }
            _ => None,
        }
    }
}

fn inside_open(x: &[f64], lo: &[f64], hi: &[f64]) -> bool {
    x.iter().zip(lo.iter().zip(hi)).all(|(v, (a, b))| v > a && v < b)
}

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Terms(Vec<Term>),
    Grid(GridField),
    Even(Box<Potential>),
}

/// A priori regularity data attached to a potential.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Regularity {
    /// Sobolev order `s`.
    pub s: f64,
    /// Declared bound `M ≥ ‖q‖_∞ + ‖q‖_{H^s}`.
    pub bound: f64,
}

/// Real-valued potential on `ℝⁿ`, zero outside its support box.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    dim: usize,
    source: Source,
    pub regularity: Option<Regularity>,
}

impl Potential {
    pub fn zero(dim: usize) -> Self {
        Self { dim, source: Source::Terms(Vec::new()), regularity: None }
    }

    pub fn from_terms(dim: usize, terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if t.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: t.dim() });
            }
            t.validate()?;
        }
        Ok(Self { dim, source: Source::Terms(terms), regularity: None })
    }

    /// Gridded potential evaluated by multilinear interpolation.
    pub fn from_grid(grid: GridField) -> Self {
        Self { dim: grid.dim(), source: Source::Grid(grid), regularity: None }
    }

    pub fn with_regularity(mut self, s: f64, bound: f64) -> Self {
        self.regularity = Some(Regularity { s, bound });
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> Option<&[Term]> {
        match &self.source {
            Source::Terms(t) => Some(t),
            _ => None,
        }
    }

    pub fn grid(&self) -> Option<&GridField> {
        match &self.source {
            Source::Grid(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_even_extension(&self) -> bool {
        matches!(self.source, Source::Even(_))
    }

    pub fn is_zero(&self) -> bool {
        match &self.source {
            Source::Terms(t) => t.is_empty(),
            Source::Grid(g) => g.data.iter().all(|v| *v == 0.0),
            Source::Even(p) => p.is_zero(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match &self.source {
            Source::Terms(t) => t.iter().map(|t| t.eval(x)).sum(),
            Source::Grid(g) => g.interpolate(x),
            Source::Even(p) => {
                let n = self.dim - 1;
                if x[n] > 0.0 {
                    let mut y = x.to_vec();
                    y[n] = -x[n];
                    p.eval(&y)
                } else {
                    p.eval(x)
                }
            }
        }
    }

    /// Bounding box of the support, `None` for the zero potential.
    pub fn support(&self) -> Option<BoxRegion> {
        match &self.source {
            Source::Terms(t) => t.iter().map(Term::support).reduce(|a, b| a.union(&b)),
            Source::Grid(g) => {
                if g.data.iter().all(|v| *v == 0.0) {
                    return None;
                }
                let h = g.spacing();
                Some(BoxRegion::new(
                    g.lo.iter().zip(&h).map(|(a, h)| a - h).collect(),
                    g.hi.clone(),
                ))
            }
            Source::Even(p) => p.support().map(|b| b.union(&b.mirrored())),
        }
    }

    /// Upper bound for `‖q‖_∞`.
    pub fn sup_bound(&self) -> f64 {
        match &self.source {
            Source::Terms(t) => t.iter().map(Term::sup_bound).sum(),
            Source::Grid(g) => g.max_abs(),
            Source::Even(p) => p.sup_bound(),
        }
    }

    /// Closed-form transform `∫ q e^{-iξ·x} dx` when every piece has one.
    pub fn fourier(&self, xi: &[f64]) -> Option<Complex64> {
        match &self.source {
            Source::Terms(t) => t.iter().map(|t| t.fourier(xi)).sum(),
            Source::Grid(_) => None,
            Source::Even(p) => {
                let mut m = xi.to_vec();
                let n = self.dim - 1;
                m[n] = -m[n];
                Some(p.fourier(xi)? + p.fourier(&m)?)
            }
        }
    }

    /// Even extension across `x_n = 0`; `q` must vanish on `x_n > 0`.
    pub fn even_extension(&self) -> Result<Potential> {
        if let Some(b) = self.support() {
            let top = b.hi[self.dim - 1];
            if top > 1e-12 {
                return Err(Error::SupportViolation(format!(
                    "support reaches x_n = {top}, the even extension needs q supported in x_n ≤ 0"
                )));
            }
        }
        Ok(Potential {
            dim: self.dim,
            source: Source::Even(Box::new(self.clone())),
            regularity: self.regularity,
        })
    }

    /// Samples on a uniform grid.
    pub fn sample(&self, shape: &[usize], lo: &[f64], hi: &[f64]) -> GridField {
        GridField::from_fn(shape, lo, hi, |x| self.eval(x))
    }
}

/// `q^even(x) = q(x', −|x_n|)`.
pub fn even_extension(q: &Potential) -> Result<Potential> {
    q.even_extension()
}
