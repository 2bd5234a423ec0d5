//! The standard mollifier `Ψ = c_n exp(1/(|x|² − 1))`, mollification of grid
//! fields, approximation rates `‖f − f_τ‖/τ^s` and the two-term decay bound
//! `|𝓕f(ξ)| ≤ C_N/(1 + τ|ξ|)^N + C τ^s`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{signed_index, unravel, FftNd};
use crate::field::GridField;
use crate::quadrature::{composite_gauss, RuleKind, TensorRule};
use crate::reflection::Potential;
use crate::special::unit_ball_transform_3d;

/// `|S^{m−1}| = 2π^{m/2}/Γ(m/2)`.
fn sphere_area(m: usize) -> f64 {
    // Γ(m/2) via Γ(1/2) = √π, Γ(1) = 1 and Γ(x + 1) = xΓ(x)
    let (mut g, mut x) = if m % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while x < m as f64 / 2.0 - 1e-12 {
        g *= x;
        x += 1.0;
    }
    2.0 * PI.powf(m as f64 / 2.0) / g
}

fn unnormalized_bump(r2: f64) -> f64 {
    if r2 < 1.0 {
        (1.0 / (r2 - 1.0)).exp()
    } else {
        0.0
    }
}

/// `c_n` with `∫ Ψ = 1`, computed once per dimension.
pub fn normalization(dim: usize) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<usize, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().expect("cache poisoned").get(&dim) {
        return *c;
    }
    let rule = composite_gauss(16, 64, 0.0, 1.0);
    let radial = rule.integrate(|r| r.powi(dim as i32 - 1) * unnormalized_bump(r * r));
    let mass = if dim == 1 { 2.0 * radial } else { sphere_area(dim) * radial };
    let c = 1.0 / mass;
    cache.lock().expect("cache poisoned").insert(dim, c);
    c
}

/// `Ψ` in `n` dimensions with its tabulated hyperplane projection
/// `P(t) = ∫_{ℝ^{n−1}} Ψ(t, y) dy`, from which `𝓕Ψ(η) = 2∫₀¹ P(t) cos(|η|t) dt`.
#[derive(Debug, Clone)]
pub struct Mollifier {
    pub dim: usize,
    pub c_n: f64,
    t_nodes: Vec<f64>,
    t_weights: Vec<f64>,
    slice: Vec<f64>,
}

impl Mollifier {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        let c_n = normalization(dim);
        let outer = composite_gauss(12, 96, 0.0, 1.0);
        let inner = composite_gauss(12, 16, 0.0, 1.0);
        let slice = outer
            .nodes
            .iter()
            .map(|&t| {
                let s = 1.0 - t * t;
                if dim == 1 {
                    return c_n * unnormalized_bump(t * t);
                }
                if s <= 0.0 {
                    return 0.0;
                }
                let m = dim - 1;
                let integral = inner.integrate(|u| {
                    let d = s * (1.0 - u * u);
                    if d <= 0.0 {
                        0.0
                    } else {
                        u.powi(m as i32 - 1) * (-1.0 / d).exp()
                    }
                });
                let area = if m == 1 { 2.0 } else { sphere_area(m) };
                c_n * area * s.powf(m as f64 / 2.0) * integral
            })
            .collect();
        Self { dim, c_n, t_nodes: outer.nodes, t_weights: outer.weights, slice }
    }

    /// `Ψ(x)`.
    pub fn profile(&self, x: &[f64]) -> f64 {
        self.c_n * unnormalized_bump(x.iter().map(|v| v * v).sum())
    }

    /// `Ψ_τ(x) = τ^{−n} Ψ(x/τ)`.
    pub fn scaled(&self, x: &[f64], tau: f64) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum::<f64>() / (tau * tau);
        self.c_n * unnormalized_bump(r2) / tau.powi(self.dim as i32)
    }

    /// `max Ψ = c_n e^{−1}`.
    pub fn peak(&self) -> f64 {
        self.c_n * (-1f64).exp()
    }

    /// `𝓕Ψ(η)` as a function of `|η|`; real and radial.
    pub fn transform(&self, eta: f64) -> f64 {
        2.0 * self
            .t_nodes
            .iter()
            .zip(&self.t_weights)
            .zip(&self.slice)
            .map(|((t, w), p)| w * p * (eta * t).cos())
            .sum::<f64>()
    }

    /// `sup_{|η| ≤ eta_max} |𝓕Ψ(η)| (1 + |η|)^N` on a uniform sample.
    pub fn decay_sup(&self, power: i32, eta_max: f64, samples: usize) -> f64 {
        (0..=samples)
            .map(|i| {
                let eta = eta_max * i as f64 / samples as f64;
                self.transform(eta).abs() * (1.0 + eta).powi(power)
            })
            .fold(0.0, f64::max)
    }
}

/// Distance from the nonzero samples of `f` to the edges of its box.
pub fn support_margin(f: &GridField) -> Option<f64> {
    let n = f.dim();
    let mut lo_idx = vec![usize::MAX; n];
    let mut hi_idx = vec![0usize; n];
    let mut idx = vec![0; n];
    let mut any = false;
    for (flat, v) in f.data.iter().enumerate() {
        if *v != 0.0 {
            any = true;
            unravel(flat, &f.shape, &mut idx);
            for a in 0..n {
                lo_idx[a] = lo_idx[a].min(idx[a]);
                hi_idx[a] = hi_idx[a].max(idx[a]);
            }
        }
    }
    if !any {
        return None;
    }
    let h = f.spacing();
    Some(
        (0..n)
            .map(|a| {
                let first = lo_idx[a] as f64 * h[a];
                let last = (f.shape[a] - hi_idx[a]) as f64 * h[a];
                first.min(last)
            })
            .fold(f64::INFINITY, f64::min),
    )
}

/// `f * Ψ_τ` by multiplying the DFT of the samples with `𝓕Ψ(τξ)`.
pub fn mollify(f: &GridField, tau: f64) -> Result<GridField> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::ParameterRange(format!("τ = {tau} must lie in (0, 1)")));
    }
    let Some(margin) = support_margin(f) else {
        return Ok(f.clone());
    };
    if margin < tau {
        return Err(Error::InsufficientPadding { margin, tau });
    }
    let n = f.dim();
    let psi = Mollifier::new(n);
    let mut buf: Vec<Complex64> = f.data.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    let fft = FftNd::new(&f.shape);
    fft.forward(&mut buf);
    let h = f.spacing();
    let dxi: Vec<f64> = f.shape.iter().zip(&h).map(|(s, h)| 2.0 * PI / (*s as f64 * h)).collect();
    let xi2: Vec<f64> = (0..buf.len())
        .map(|flat| {
            let mut idx = vec![0; n];
            unravel(flat, &f.shape, &mut idx);
            (0..n).map(|a| (signed_index(idx[a], f.shape[a]) as f64 * dxi[a]).powi(2)).sum()
        })
        .collect();
    let mut unique: Vec<u64> = xi2.iter().map(|v| v.to_bits()).collect();
    unique.sort_unstable();
    unique.dedup();
    let table: HashMap<u64, f64> = unique
        .par_iter()
        .map(|b| (*b, psi.transform(tau * f64::from_bits(*b).sqrt())))
        .collect();
    let total = buf.len() as f64;
    for (c, x) in buf.iter_mut().zip(&xi2) {
        *c *= table[&x.to_bits()] / total;
    }
    fft.inverse(&mut buf);
    Ok(GridField { shape: f.shape.clone(), lo: f.lo.clone(), hi: f.hi.clone(), data: buf.iter().map(|c| c.re).collect() })
}

/// Discrete convolution `Σ_j f_j Ψ_τ(x − x_j) hⁿ` at one point.
pub fn direct_convolution(f: &GridField, tau: f64, x: &[f64]) -> f64 {
    let psi = Mollifier::new(f.dim());
    let mut idx = vec![0; f.dim()];
    let mut p = vec![0.0; f.dim()];
    let mut acc = 0.0;
    for (flat, v) in f.data.iter().enumerate() {
        if *v == 0.0 {
            continue;
        }
        unravel(flat, &f.shape, &mut idx);
        f.position_into(&idx, &mut p);
        let d: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a - b).collect();
        acc += v * psi.scaled(&d, tau);
    }
    acc * f.cell_volume()
}

/// `j_m(x)/x^m` for all `x ≥ 0`.
fn scaled_spherical_bessel(m: u32, x: f64) -> f64 {
    if x <= m as f64 + 8.0 {
        // Σ_k (−x²/2)^k / (k! (2m + 2k + 1)!!)
        let dfact: f64 = (1..=m).map(|j| (2 * j + 1) as f64).product();
        let mut term = 1.0 / dfact;
        let mut sum = term;
        for k in 1..200 {
            let kf = k as f64;
            term *= -x * x / (2.0 * kf) / (2.0 * (m as f64 + kf) + 1.0);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        crate::special::spherical_bessel_j(m, x) / x.powi(m as i32)
    }
}

/// Radial test functions in three dimensions with closed-form transforms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RadialField {
    /// Indicator of `|x| < radius`.
    Ball { radius: f64 },
    /// `(1 − |x|²/radius²)^power` inside the ball.
    Bump { radius: f64, power: u32 },
}

impl RadialField {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        match *self {
            RadialField::Ball { radius } => {
                if r2 < radius * radius {
                    1.0
                } else {
                    0.0
                }
            }
            RadialField::Bump { radius, power } => {
                let t = 1.0 - r2 / (radius * radius);
                if t > 0.0 {
                    t.powi(power as i32)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn radius(&self) -> f64 {
        match *self {
            RadialField::Ball { radius } | RadialField::Bump { radius, .. } => radius,
        }
    }

    /// `𝓕f` as a function of `|ξ|`.
    pub fn transform(&self, rho: f64) -> f64 {
        match *self {
            RadialField::Ball { radius } => radius.powi(3) * unit_ball_transform_3d(rho * radius),
            RadialField::Bump { radius, power } => {
                // 4π 2^p p! j_{p+1}(x)/x^{p+1}
                let fact: f64 = (1..=power).map(|j| j as f64).product();
                let c = 4.0 * PI * 2f64.powi(power as i32) * fact;
                radius.powi(3) * c * scaled_spherical_bessel(power + 1, rho.abs() * radius)
            }
        }
    }

    /// `‖f‖²_{L²}`.
    pub fn l2_norm_sq(&self) -> f64 {
        let r = self.radius();
        match *self {
            RadialField::Ball { .. } => 4.0 * PI * r.powi(3) / 3.0,
            RadialField::Bump { power, .. } => {
                let rule = composite_gauss(16, 4, 0.0, 1.0);
                4.0 * PI * r.powi(3) * rule.integrate(|t| (1.0 - t * t).powi(2 * power as i32) * t * t)
            }
        }
    }
}

/// Anything with a Fourier transform under `𝓕f(ξ) = ∫ f e^{−iξ·x} dx`.
pub trait FourierSource: Sync {
    fn dim(&self) -> usize;
    fn fourier(&self, xi: &[f64]) -> Complex64;
}

impl FourierSource for RadialField {
    fn dim(&self) -> usize {
        3
    }

    fn fourier(&self, xi: &[f64]) -> Complex64 {
        Complex64::new(self.transform(xi.iter().map(|v| v * v).sum::<f64>().sqrt()), 0.0)
    }
}

impl FourierSource for Potential {
    fn dim(&self) -> usize {
        Potential::dim(self)
    }

    /// Closed form when available, tensor Gauss–Legendre over the support otherwise.
    fn fourier(&self, xi: &[f64]) -> Complex64 {
        if let Some(v) = Potential::fourier(self, xi) {
            return v;
        }
        let Some(b) = self.support() else {
            return Complex64::default();
        };
        let (pts, w) = TensorRule::new(RuleKind::GaussLegendre, &vec![32; xi.len()], &b.lo, &b.hi).points();
        pts.iter()
            .zip(&w)
            .map(|(x, w)| {
                let ph: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
                w * self.eval(x) * Complex64::from_polar(1.0, -ph)
            })
            .sum()
    }
}

/// Ratios `‖f − f_τ‖_{L²}/τ^s` over a decreasing `τ` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub s: f64,
    pub taus: Vec<f64>,
    pub errors: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Ratios strictly decrease over the last three `τ` values.
    pub decreasing_tail: bool,
}

/// `‖f − f_τ‖²_{L²} = (2π)^{−3} 4π ∫₀^∞ |𝓕f(ρ)|² |1 − 𝓕Ψ(τρ)|² ρ² dρ`, with the
/// range beyond `|𝓕Ψ(τρ)| ≈ 0` closed off by Parseval.
pub fn mollification_error(f: &RadialField, tau: f64) -> f64 {
    let psi = Mollifier::new(3);
    // |𝓕Ψ(η)| is below 1e-15 well before η = 600
    let cut = 600.0 / tau;
    let width = (PI / f.radius()).min(1.0);
    let panels = (cut / width).ceil() as usize;
    let rule = composite_gauss(8, panels, 0.0, cut);
    let (inner, plain): (f64, f64) = rule
        .nodes
        .par_iter()
        .zip(&rule.weights)
        .map(|(r, w)| {
            let g = f.transform(*r).powi(2) * r * r * w;
            (g * (1.0 - psi.transform(tau * r)).powi(2), g)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let total = (2.0 * PI).powi(3) * f.l2_norm_sq() / (4.0 * PI);
    let tail = (total - plain).max(0.0);
    ((inner + tail) * 4.0 * PI / (2.0 * PI).powi(3)).max(0.0).sqrt()
}

pub fn approximation_rate(f: &RadialField, s: f64, taus: &[f64]) -> Result<RateReport> {
    if taus.iter().any(|t| !(*t > 0.0 && *t < 1.0)) || taus.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::ParameterRange("τ grid must decrease within (0, 1)".into()));
    }
    let errors: Vec<f64> = taus.iter().map(|t| mollification_error(f, *t)).collect();
    let ratios: Vec<f64> = errors.iter().zip(taus).map(|(e, t)| e / t.powf(s)).collect();
    let m = ratios.len();
    let decreasing_tail = m >= 3 && ratios[m - 1] < ratios[m - 2] && ratios[m - 2] < ratios[m - 3];
    Ok(RateReport { s, taus: taus.to_vec(), errors, ratios, decreasing_tail })
}

/// One row of a decay report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub xi: Vec<f64>,
    pub abs_f: f64,
    /// `C_N/(1 + τ|ξ|)^N`.
    pub term1: f64,
    /// `C τ^s`.
    pub term2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub tau: f64,
    pub power: i32,
    pub s: f64,
    pub c_n: f64,
    pub c: f64,
    pub rows: Vec<DecayRow>,
}

impl DecayReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.abs_f <= (r.term1 + r.term2) * (1.0 + 1e-12) + 1e-300)
    }

    /// CSV with columns `xi_1..xi_n, abs_f, term1, term2, c_n, c`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let n = self.rows.first().map_or(0, |r| r.xi.len());
        let mut header: Vec<String> = (1..=n).map(|i| format!("xi_{i}")).collect();
        header.extend(["abs_f", "term1", "term2", "c_n", "c"].map(String::from));
        out.write_record(&header).map_err(crate::recon::csv_err)?;
        for r in &self.rows {
            let mut row: Vec<String> = r.xi.iter().map(|v| format!("{v:.12e}")).collect();
            for v in [r.abs_f, r.term1, r.term2, self.c_n, self.c] {
                row.push(format!("{v:.12e}"));
            }
            out.write_record(&row).map_err(crate::recon::csv_err)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Fits `(C_N, C)`: `C_N` covers the samples with `τ|ξ| ≤ 1`, then `C` is
/// the smallest value making the bound hold on every sample.
pub fn rl_decay_check(f: &impl FourierSource, samples: &[Vec<f64>], tau: f64, power: i32, s: f64) -> DecayReport {
    let vals: Vec<(f64, f64)> = samples
        .par_iter()
        .map(|xi| (f.fourier(xi).norm(), xi.iter().map(|v| v * v).sum::<f64>().sqrt()))
        .collect();
    let decay = |r: f64| (1.0 + tau * r).powi(power);
    let c_n = vals
        .iter()
        .filter(|(_, r)| tau * r <= 1.0)
        .map(|(v, r)| v * decay(*r))
        .fold(0.0, f64::max);
    let ts = tau.powf(s);
    let c = vals.iter().map(|(v, r)| (v - c_n / decay(*r)).max(0.0) / ts).fold(0.0, f64::max);
    let rows = samples
        .iter()
        .zip(&vals)
        .map(|(xi, (v, r))| DecayRow { xi: xi.clone(), abs_f: *v, term1: c_n / decay(*r), term2: c * ts })
        .collect();
    DecayReport { tau, power, s, c_n, c, rows }
}

/// Least-squares slope of `log|𝓕f|` against `log|ξ|` over the local maxima
/// of `|𝓕f(t·dir)|`, `t ∈ [lo, hi]`.
pub fn decay_exponent(f: &impl FourierSource, dir: &[f64], lo: f64, hi: f64, samples: usize) -> f64 {
    let unit: f64 = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ts: Vec<f64> = (0..samples).map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64).collect();
    let vals: Vec<f64> = ts
        .par_iter()
        .map(|t| {
            let xi: Vec<f64> = dir.iter().map(|d| d / unit * t).collect();
            f.fourier(&xi).norm()
        })
        .collect();
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for i in 1..samples - 1 {
        if vals[i] > vals[i - 1] && vals[i] >= vals[i + 1] && vals[i] > 0.0 {
            pts.push((ts[i].ln(), vals[i].ln()));
        }
    }
    if pts.len() < 2 {
        pts = ts.iter().zip(&vals).filter(|(_, v)| **v > 0.0).map(|(t, v)| (t.ln(), v.ln())).collect();
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (m * sxy - sx * sy) / (m * sxx - sx * sx)
}
