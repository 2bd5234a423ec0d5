//! Fourier-domain recovery of `q₁ − q₂` from products of reflected CGO
//! solutions, Parseval assembly over `E(ρ)` and Fourier-weighted norms.
//!
//! Convention: `𝓕f(ξ) = ∫ f(x) e^{-iξ·x} dx`, so Parseval reads
//! `∫|𝓕f|² dξ = (2π)ⁿ ‖f‖²_{L²}`.
//!
//! The pairing `P = ∫_Ω (q₂ − q₁) u₁ u₂` splits into four phases. The two
//! direct phases sum to `𝓕(q₂^even − q₁^even)(ξ)`, the two cross phases give
//! `−𝓕(q₂ − q₁)(ξ±)`. The estimator returns `−P`; the cross phases, the
//! remainder products and the data term are logged as an error budget.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cauchy::{boundary_traces, trace_pairing, volume_pairing, BoundaryMesh, QuadOptions};
use crate::cgo::{build_cgo, make_zeta_pair, CgoEvaluator, CgoOptions, CgoSolution, Derivatives};
use crate::error::{Error, Result};
use crate::fft::{signed_index, unravel, FftNd};
use crate::field::GridField;
use crate::lattice::norm;
use crate::quadrature::TensorRule;
use crate::reflection::{DomainSpec, Potential, Reflected, Term};

/// `ξ± = (ξ', ±2√(k² + a² − |ξ|²/4) |ξ'|/|ξ|)`, returned as `(ξ₊, ξ₋)`.
pub fn xi_pm(xi: &[f64], k: f64, a: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = xi.len();
    let m = norm(xi);
    if m == 0.0 {
        return Err(Error::ParameterRange("ξ± needs ξ ≠ 0".into()));
    }
    let disc = k * k + a * a - 0.25 * m * m;
    if disc < 0.0 {
        return Err(Error::ParameterRange(format!("k² + a² = {} is below |ξ|²/4 = {}", k * k + a * a, 0.25 * m * m)));
    }
    let t = 2.0 * disc.sqrt() * norm(&xi[..n - 1]) / m;
    let mut plus = xi.to_vec();
    let mut minus = xi.to_vec();
    plus[n - 1] = t;
    minus[n - 1] = -t;
    Ok((plus, minus))
}

/// Where the pairing comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingSource {
    /// Volume quadrature with the known potentials.
    #[default]
    Oracle,
    /// Surface integrals of the Cauchy traces over `Γ`.
    Boundary,
}

impl PairingSource {
    pub fn tag(self) -> &'static str {
        match self {
            PairingSource::Oracle => "oracle",
            PairingSource::Boundary => "boundary",
        }
    }
}

/// Multiplicative perturbation `t ↦ t(1 + δη)`, `|η| ≤ 1`, of the traces of `u₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceNoise {
    pub delta: f64,
    pub seed: u64,
}

/// Gaussian stencil half-width for pairing evaluations. Only the remainder
/// series goes through the gridding step, so its relative error is scaled
/// by `‖r‖`.
pub const PAIRING_SPREAD: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct ReconOptions {
    /// Lattice settings; `kappa` is replaced by the domain's scale.
    pub cgo: CgoOptions,
    pub spread: usize,
    pub quad: QuadOptions,
    pub source: PairingSource,
    pub noise: Option<TraceNoise>,
    /// Cauchy-data distance used in the data term of the budget.
    pub delta: f64,
}

impl Default for ReconOptions {
    fn default() -> Self {
        Self {
            cgo: CgoOptions::default(),
            spread: PAIRING_SPREAD,
            quad: QuadOptions::default(),
            source: PairingSource::Oracle,
            noise: None,
            delta: 0.0,
        }
    }
}

/// Nonnegative error terms attached to a single estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorBudget {
    /// `e^{2aR} k⁸ δ`.
    pub data: f64,
    /// `‖q₁ − q₂‖_{L¹} / a²`.
    pub inv_a2: f64,
    /// `|𝓕(q₁ − q₂)(ξ₊)|`.
    pub xi_plus: f64,
    /// `|𝓕(q₁ − q₂)(ξ₋)|`.
    pub xi_minus: f64,
    /// `4 ‖q₁ − q₂‖_{L¹} (ε₁ + ε₂ + ε₁ε₂)` with `εⱼ ≥ sup|rⱼ|`.
    pub remainder: f64,
}

impl ErrorBudget {
    pub fn total(&self) -> f64 {
        self.data + self.inv_a2 + self.xi_plus + self.xi_minus + self.remainder
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierEstimate {
    pub xi: Vec<f64>,
    /// Estimate of `𝓕(q₁^even − q₂^even)(ξ)`.
    pub value: Complex64,
    pub budget: ErrorBudget,
    pub xi_plus: Vec<f64>,
    pub xi_minus: Vec<f64>,
    /// Closed-form `𝓕(q₁^even − q₂^even)(ξ)` when available.
    pub truth: Option<Complex64>,
}

impl FourierEstimate {
    /// A bare value with an empty budget.
    pub fn from_value(xi: Vec<f64>, value: Complex64) -> Self {
        Self { xi_plus: xi.clone(), xi_minus: xi.clone(), xi, value, budget: ErrorBudget::default(), truth: None }
    }

    pub fn error(&self) -> Option<f64> {
        self.truth.map(|t| (t - self.value).norm())
    }
}

/// Precomputed data shared by every frequency of one reconstruction.
#[derive(Debug, Clone)]
pub struct Reconstructor {
    pub q1: Potential,
    pub q2: Potential,
    pub dom: DomainSpec,
    pub opts: ReconOptions,
    q1_even: Potential,
    q2_even: Potential,
    diff_l1: f64,
    diff_l2: f64,
    identical: bool,
}

impl Reconstructor {
    pub fn new(q1: &Potential, q2: &Potential, dom: &DomainSpec, opts: &ReconOptions) -> Result<Self> {
        for q in [q1, q2] {
            if q.dim() != dom.dim {
                return Err(Error::DimensionMismatch { expected: dom.dim, got: q.dim() });
            }
        }
        let (diff_l1, diff_l2) = diff_norms(q1, q2, dom, &opts.quad);
        let mut opts = opts.clone();
        opts.cgo.kappa = dom.kappa();
        Ok(Self {
            q1_even: q1.even_extension()?,
            q2_even: q2.even_extension()?,
            q1: q1.clone(),
            q2: q2.clone(),
            dom: dom.clone(),
            identical: q1 == q2,
            opts,
            diff_l1,
            diff_l2,
        })
    }

    /// `‖q₁ − q₂‖_{L¹(Ω)}`.
    pub fn diff_l1(&self) -> f64 {
        self.diff_l1
    }

    /// `‖q₁ − q₂‖_{L²(Ω)}`.
    pub fn diff_l2(&self) -> f64 {
        self.diff_l2
    }

    /// Parseval constant of the tail outside `E(ρ)`:
    /// `(2π)ⁿ ‖q₁^even − q₂^even‖²_{L²} = 2 (2π)ⁿ ‖q₁ − q₂‖²_{L²(Ω)}`.
    pub fn tail_constant(&self) -> f64 {
        2.0 * (2.0 * std::f64::consts::PI).powi(self.dom.dim as i32) * self.diff_l2 * self.diff_l2
    }

    /// Closed-form `𝓕(q₁ − q₂)(ξ)` after cancelling shared terms, if every
    /// remaining term has one.
    pub fn diff_transform_exact(&self, xi: &[f64]) -> Option<Complex64> {
        let (only1, only2) = unshared_terms(&self.q1, &self.q2)?;
        let mut v = Complex64::default();
        for t in &only1 {
            v += t.fourier(xi)?;
        }
        for t in &only2 {
            v -= t.fourier(xi)?;
        }
        Some(v)
    }

    /// `𝓕(q₁ − q₂)(ξ)`, in closed form where possible and by volume
    /// quadrature otherwise.
    pub fn diff_transform(&self, xi: &[f64]) -> Complex64 {
        if let Some(v) = self.diff_transform_exact(xi) {
            return v;
        }
        let (pts, w) = volume_rule(&self.q1, &self.q2, &self.dom, &self.opts.quad);
        pts.iter()
            .zip(&w)
            .map(|(x, w)| {
                let phase: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
                w * (self.q1.eval(x) - self.q2.eval(x)) * Complex64::from_polar(1.0, -phase)
            })
            .sum()
    }

    /// Closed-form `𝓕(q₁^even − q₂^even)(ξ) = 𝓕(q₁ − q₂)(ξ) + 𝓕(q₁ − q₂)(ξ*)`.
    pub fn truth(&self, xi: &[f64]) -> Option<Complex64> {
        let m = crate::reflection::mirror(xi);
        Some(self.diff_transform_exact(xi)? + self.diff_transform_exact(&m)?)
    }

    /// The two reflected solutions for one frequency.
    pub fn solutions(&self, xi: &[f64], k: f64, a: f64) -> Result<(CgoSolution, CgoSolution)> {
        let pair = make_zeta_pair(xi, k, a)?;
        let s1 = build_cgo(&self.q1_even, &pair.zeta1, k, &self.opts.cgo)?;
        let s2 = build_cgo(&self.q2_even, &pair.zeta2, k, &self.opts.cgo)?;
        Ok((s1, s2))
    }

    pub fn estimate(&self, xi: &[f64], k: f64, a: f64) -> Result<FourierEstimate> {
        let (xi_plus, xi_minus) = xi_pm(xi, k, a)?;
        let (s1, s2) = self.solutions(xi, k, a)?;
        let pairing = self.pairing(&s1, &s2, xi, k)?;
        let sup_r = |s: &CgoSolution| s.remainder.coeffs.iter().map(|c| c.norm()).sum::<f64>();
        let (e1, e2) = (sup_r(&s1), sup_r(&s2));
        let delta = if self.identical {
            0.0
        } else {
            self.opts.noise.map(|n| n.delta).unwrap_or(self.opts.delta)
        };
        let radius = self.dom.enclosing_radius();
        let budget = ErrorBudget {
            data: (2.0 * a * radius).exp() * k.powi(8) * delta,
            inv_a2: self.diff_l1 / (a * a),
            xi_plus: self.diff_transform(&xi_plus).norm(),
            xi_minus: self.diff_transform(&xi_minus).norm(),
            remainder: 4.0 * self.diff_l1 * (e1 + e2 + e1 * e2),
        };
        let truth = self.truth(xi);
        Ok(FourierEstimate { xi: xi.to_vec(), value: -pairing, budget, xi_plus, xi_minus, truth })
    }

    fn pairing(&self, s1: &CgoSolution, s2: &CgoSolution, xi: &[f64], k: f64) -> Result<Complex64> {
        match self.opts.source {
            PairingSource::Oracle => {
                let u1 = Reflected::new(CgoEvaluator::new(s1, Derivatives::Value, self.opts.spread));
                let u2 = Reflected::new(CgoEvaluator::new(s2, Derivatives::Value, self.opts.spread));
                let p = volume_pairing(&self.q1, &self.q2, &u1, &u2, &self.dom, &self.opts.quad);
                Ok(match self.opts.noise {
                    Some(noise) => p * (1.0 + noise.delta * unit_disk(&mut noise_rng(noise.seed, xi))),
                    None => p,
                })
            }
            PairingSource::Boundary => {
                let mesh = BoundaryMesh::gamma(&self.dom, &self.opts.quad);
                let u1 = Reflected::new(CgoEvaluator::new(s1, Derivatives::Full, self.opts.spread));
                let u2 = Reflected::new(CgoEvaluator::new(s2, Derivatives::Full, self.opts.spread));
                let t1 = boundary_traces(&u1, &mesh, k)?;
                let mut t2 = boundary_traces(&u2, &mesh, k)?;
                if let Some(noise) = self.opts.noise {
                    let mut rng = noise_rng(noise.seed, xi);
                    t2 = t2.map(|_, _, _, v| v * (1.0 + noise.delta * unit_disk(&mut rng)));
                }
                trace_pairing(&t1, &t2)
            }
        }
    }

    /// Estimates at every node of `fbox`, in node order.
    pub fn estimate_box(&self, fbox: &FrequencyBox, k: f64, a: f64) -> Result<Vec<FourierEstimate>> {
        fbox.check_admissible(k, a)?;
        fbox.nodes().par_iter().map(|xi| self.estimate(xi, k, a)).collect()
    }
}

/// Terms of `q₁` and `q₂` left after removing the ones they share.
fn unshared_terms(q1: &Potential, q2: &Potential) -> Option<(Vec<Term>, Vec<Term>)> {
    let mut only2 = q2.terms()?.to_vec();
    let mut only1 = Vec::new();
    for t in q1.terms()? {
        match only2.iter().position(|u| u == t) {
            Some(i) => {
                only2.remove(i);
            }
            None => only1.push(t.clone()),
        }
    }
    Some((only1, only2))
}

fn noise_rng(seed: u64, xi: &[f64]) -> ChaCha8Rng {
    let mix = xi
        .iter()
        .fold(seed ^ 0x9e37_79b9_7f4a_7c15, |h, v| (h ^ v.to_bits()).wrapping_mul(0x1000_0000_01b3));
    ChaCha8Rng::seed_from_u64(mix)
}

fn unit_disk(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    }
}

fn volume_rule(q1: &Potential, q2: &Potential, dom: &DomainSpec, quad: &QuadOptions) -> (Vec<Vec<f64>>, Vec<f64>) {
    let region = match (q1.support(), q2.support()) {
        (None, None) => None,
        (Some(a), None) | (None, Some(a)) => Some(a),
        (Some(a), Some(b)) => Some(a.union(&b)),
    }
    .and_then(|r| r.intersection(&dom.region()));
    match region {
        Some(r) => TensorRule::new(quad.kind, &vec![quad.volume_nodes; dom.dim], &r.lo, &r.hi).points(),
        None => (Vec::new(), Vec::new()),
    }
}

fn diff_norms(q1: &Potential, q2: &Potential, dom: &DomainSpec, quad: &QuadOptions) -> (f64, f64) {
    let (pts, w) = volume_rule(q1, q2, dom, quad);
    let (l1, l2) = pts.iter().zip(&w).fold((0.0, 0.0), |(l1, l2), (x, w)| {
        let d = q1.eval(x) - q2.eval(x);
        (l1 + w * d.abs(), l2 + w * d * d)
    });
    (l1, l2.sqrt())
}

/// Single-frequency estimate with default resolution.
pub fn estimate_fourier_diff(
    q1: &Potential,
    q2: &Potential,
    xi: &[f64],
    k: f64,
    a: f64,
    source: PairingSource,
    dom: &DomainSpec,
) -> Result<FourierEstimate> {
    let opts = ReconOptions { source, ..ReconOptions::default() };
    Reconstructor::new(q1, q2, dom, &opts)?.estimate(xi, k, a)
}

/// Default number of cells per axis of `E(ρ)`.
pub const DEFAULT_CELLS_PER_AXIS: usize = 6;

/// `E(ρ) = {|ξ'| ≤ ρ, |ξ_n| ≤ ρ}` sampled at the centers of a uniform
/// `cells³` partition of `[−ρ, ρ]ⁿ`, keeping centers with `|ξ'| ≤ ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyBox {
    pub dim: usize,
    pub rho: f64,
    pub cells: usize,
}

impl FrequencyBox {
    pub fn new(dim: usize, rho: f64, cells: usize) -> Result<Self> {
        if !(rho >= 1.0) || !rho.is_finite() {
            return Err(Error::ParameterRange(format!("ρ = {rho} must be at least 1")));
        }
        if cells == 0 || dim < 2 {
            return Err(Error::ParameterRange("E(ρ) needs dim ≥ 2 and at least one cell".into()));
        }
        Ok(Self { dim, rho, cells })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.rho / self.cells as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.step().powi(self.dim as i32)
    }

    pub fn nodes(&self) -> Vec<Vec<f64>> {
        let h = self.step();
        let shape = vec![self.cells; self.dim];
        let total = self.cells.pow(self.dim as u32);
        let mut idx = vec![0; self.dim];
        let mut out = Vec::new();
        for flat in 0..total {
            unravel(flat, &shape, &mut idx);
            let xi: Vec<f64> = idx.iter().map(|&i| -self.rho + (i as f64 + 0.5) * h).collect();
            if norm(&xi[..self.dim - 1]) <= self.rho * (1.0 + 1e-12) {
                out.push(xi);
            }
        }
        out
    }

    /// `ρ ≤ √(k² + a²)`.
    pub fn check_admissible(&self, k: f64, a: f64) -> Result<()> {
        let cap = (k * k + a * a).sqrt();
        if self.rho > cap * (1.0 + 1e-12) {
            return Err(Error::ParameterRange(format!("ρ = {} exceeds √(k² + a²) = {cap}", self.rho)));
        }
        Ok(())
    }
}

/// `(Σ_{ξ ∈ E(ρ)} |est(ξ)|² / (1 + |ξ|²) · hⁿ + C_tail / ρ²)^{1/2}`.
pub fn assemble_hminus1(estimates: &[FourierEstimate], fbox: &FrequencyBox, c_tail: f64) -> Result<f64> {
    let nodes = fbox.nodes();
    if nodes.len() != estimates.len() {
        return Err(Error::NonUniformSampling(format!(
            "{} estimates for {} nodes of E(ρ)",
            estimates.len(),
            nodes.len()
        )));
    }
    let tol = 1e-9 * fbox.step();
    let v = fbox.cell_volume();
    let mut sum = 0.0;
    for (node, e) in nodes.iter().zip(estimates) {
        if e.xi.len() != node.len() || e.xi.iter().zip(node).any(|(a, b)| (a - b).abs() > tol) {
            return Err(Error::NonUniformSampling(format!("estimate at {:?} is off the E(ρ) grid", e.xi)));
        }
        let w = 1.0 + e.xi.iter().map(|x| x * x).sum::<f64>();
        sum += e.value.norm_sqr() / w * v;
    }
    Ok((sum + c_tail.max(0.0) / (fbox.rho * fbox.rho)).sqrt())
}

/// Zero-padding factor used by [`sobolev_norm`].
pub const SOBOLEV_PAD: usize = 2;

/// `(∫ (1 + |ξ|²)^order |𝓕f(ξ)|² dξ)^{1/2}` from the padded DFT of the
/// samples. For `order = 0` this is `(2π)^{n/2} ‖f‖_{L²}`.
pub fn sobolev_norm(f: &GridField, order: f64) -> f64 {
    let n = f.dim();
    let h = f.spacing();
    let shape: Vec<usize> = f.shape.iter().map(|s| s * SOBOLEV_PAD).collect();
    let total: usize = shape.iter().product();
    let mut buf = vec![Complex64::default(); total];
    let strides = crate::fft::strides(&shape);
    let mut idx = vec![0; n];
    for (flat, v) in f.data.iter().enumerate() {
        unravel(flat, &f.shape, &mut idx);
        let j: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
        buf[j] = Complex64::new(*v, 0.0);
    }
    FftNd::new(&shape).forward(&mut buf);
    let cell: f64 = h.iter().product();
    let dxi: Vec<f64> = shape.iter().zip(&h).map(|(p, h)| 2.0 * std::f64::consts::PI / (*p as f64 * h)).collect();
    let dvol: f64 = dxi.iter().product();
    let sum: f64 = buf
        .par_iter()
        .enumerate()
        .map(|(flat, c)| {
            let mut idx = vec![0; n];
            unravel(flat, &shape, &mut idx);
            let xi2: f64 = (0..n)
                .map(|a| {
                    let x = signed_index(idx[a], shape[a]) as f64 * dxi[a];
                    x * x
                })
                .sum();
            (1.0 + xi2).powf(order) * c.norm_sqr()
        })
        .sum();
    (sum * cell * cell * dvol).sqrt()
}

/// Inputs of the term-by-term bound on `‖q₁^even − q₂^even‖²_{H^{-1}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainInputs {
    pub n: usize,
    pub k: f64,
    pub a: f64,
    pub rho: f64,
    pub tau: f64,
    pub s: f64,
    pub radius: f64,
    pub dist: f64,
    /// Generic constant multiplying every term.
    pub c: f64,
}

/// Numeric values of the individual terms; reporting only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainTerms {
    /// `C/ρ²`.
    pub tail: f64,
    /// `C e^{4aR} k¹⁶ ρⁿ δ²`.
    pub data: f64,
    /// `C ρⁿ / a⁴`.
    pub inv_a4: f64,
    /// `C ρⁿ τ^{2s}`.
    pub approx: f64,
    /// `C ρⁿ / (τ √(k² + a²))^{n−1}`.
    pub decay: f64,
}

impl ChainTerms {
    pub fn evaluate(p: &ChainInputs) -> Self {
        let n = p.n as f64;
        let rn = p.rho.powf(n);
        let big = (p.k * p.k + p.a * p.a).sqrt();
        Self {
            tail: p.c / (p.rho * p.rho),
            data: p.c * (4.0 * p.a * p.radius).exp() * p.k.powi(16) * rn * p.dist * p.dist,
            inv_a4: p.c * rn / p.a.powi(4),
            approx: p.c * rn * p.tau.powf(2.0 * p.s),
            decay: p.c * rn / (p.tau * big).powf(n - 1.0),
        }
    }

    pub fn total(&self) -> f64 {
        self.tail + self.data + self.inv_a4 + self.approx + self.decay
    }
}

/// Sums `4 ∫_{E(ρ)} |𝓕(q₁ − q₂)(ξ±)|² dξ` from a set of estimates; the
/// measured counterpart of the cross-phase terms in the chain.
pub fn measured_cross_terms(recon: &Reconstructor, estimates: &[FourierEstimate], fbox: &FrequencyBox) -> f64 {
    let v = fbox.cell_volume();
    estimates
        .iter()
        .map(|e| {
            let p = recon.diff_transform(&e.xi_plus).norm_sqr();
            let m = recon.diff_transform(&e.xi_minus).norm_sqr();
            4.0 * (p + m) * v
        })
        .sum()
}

/// Writes estimates as CSV: `xi_1..xi_n, re, im, data, inv_a2, xi_plus,
/// xi_minus, remainder, truth_re, truth_im`.
pub fn write_estimates_csv(w: impl Write, estimates: &[FourierEstimate]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let n = estimates.first().map_or(0, |e| e.xi.len());
    let mut header: Vec<String> = (1..=n).map(|i| format!("xi_{i}")).collect();
    header.extend(
        ["re", "im", "data", "inv_a2", "xi_plus", "xi_minus", "remainder", "truth_re", "truth_im"].map(String::from),
    );
    out.write_record(&header).map_err(csv_err)?;
    for e in estimates {
        let mut row: Vec<String> = e.xi.iter().map(|v| format!("{v:.12e}")).collect();
        let b = &e.budget;
        for v in [e.value.re, e.value.im, b.data, b.inv_a2, b.xi_plus, b.xi_minus, b.remainder] {
            row.push(format!("{v:.12e}"));
        }
        match e.truth {
            Some(t) => {
                row.push(format!("{:.12e}", t.re));
                row.push(format!("{:.12e}", t.im));
            }
            None => {
                row.push(String::new());
                row.push(String::new());
            }
        }
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Format(format!("{other:?}")),
    }
}
