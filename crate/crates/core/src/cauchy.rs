//! Boundary traces, the Green formula for `Δ²`, the volume/boundary pairing
//! identity and a discrete distance between Cauchy traces.
//!
//! The distance is a proxy: each flat face carries a Fourier-multiplier norm
//! `Σ_m (1 + |ξ_m|²)^s |c_m|² · area` with face-periodic frequencies, and the
//! true sup/inf over full Cauchy data sets is replaced by matched pairs.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cgo::{Derivatives, SolutionEval};
use crate::error::{Error, Result};
use crate::field::ComplexGrid;
use crate::quadrature::{RuleKind, TensorRule};
use crate::reflection::{DomainSpec, Face, Potential};

/// Sobolev orders used for `(u, Δu, ∂_ν u, ∂_ν Δu)`.
pub const TRACE_ORDERS: [f64; 4] = [3.5, 1.5, 2.5, 0.5];

/// Quadrature resolution for faces and volumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    pub kind: RuleKind,
    pub face_nodes: usize,
    pub volume_nodes: usize,
    /// Face Fourier band `|m_a| ≤ band` for the trace norm.
    pub band: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            kind: RuleKind::GaussLegendre,
            face_nodes: 32,
            volume_nodes: 24,
            band: 8,
        }
    }
}

/// Quadrature on a set of faces.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMesh {
    pub dim: usize,
    pub faces: Vec<Face>,
    pub kind: RuleKind,
    pub nodes: usize,
    points: Vec<Vec<Vec<f64>>>,
    weights: Vec<Vec<f64>>,
}

impl BoundaryMesh {
    pub fn new(dim: usize, faces: Vec<Face>, kind: RuleKind, nodes: usize) -> Self {
        let mut points = Vec::with_capacity(faces.len());
        let mut weights = Vec::with_capacity(faces.len());
        for f in &faces {
            let rule = TensorRule::new(kind, &vec![nodes; dim - 1], &f.lo, &f.hi);
            let (t, w) = rule.points();
            points.push(t.iter().map(|t| f.lift(t)).collect());
            weights.push(w);
        }
        Self { dim, faces, kind, nodes, points, weights }
    }

    /// Mesh on the accessible faces `Γ`.
    pub fn gamma(dom: &DomainSpec, quad: &QuadOptions) -> Self {
        Self::new(dom.dim, dom.gamma(), quad.kind, quad.face_nodes)
    }

    /// Mesh on all faces of `∂Ω`.
    pub fn full(dom: &DomainSpec, quad: &QuadOptions) -> Self {
        Self::new(dom.dim, dom.faces(), quad.kind, quad.face_nodes)
    }

    pub fn points(&self, face: usize) -> &[Vec<f64>] {
        &self.points[face]
    }

    pub fn weights(&self, face: usize) -> &[f64] {
        &self.weights[face]
    }

    pub fn same_as(&self, other: &BoundaryMesh) -> bool {
        self.dim == other.dim && self.faces == other.faces && self.kind == other.kind && self.nodes == other.nodes
    }
}

/// Traces of one solution on one face.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FaceTrace {
    pub u: Vec<Complex64>,
    pub lap: Vec<Complex64>,
    pub dn: Vec<Complex64>,
    pub dn_lap: Vec<Complex64>,
}

impl FaceTrace {
    fn components(&self) -> [&[Complex64]; 4] {
        [&self.u, &self.lap, &self.dn, &self.dn_lap]
    }

    fn components_mut(&mut self) -> [&mut Vec<Complex64>; 4] {
        [&mut self.u, &mut self.lap, &mut self.dn, &mut self.dn_lap]
    }
}

/// `(u, Δu, ∂_ν u, ∂_ν Δu)` sampled on a boundary mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyTrace {
    pub k: f64,
    pub mesh: BoundaryMesh,
    pub faces: Vec<FaceTrace>,
}

impl CauchyTrace {
    pub fn zeros_like(&self) -> Self {
        let mut t = self.clone();
        for f in &mut t.faces {
            for c in f.components_mut() {
                c.iter_mut().for_each(|v| *v = Complex64::default());
            }
        }
        t
    }

    /// Applies `f(face, component, node, value)` to every sample.
    pub fn map(&self, mut f: impl FnMut(usize, usize, usize, Complex64) -> Complex64) -> Self {
        let mut t = self.clone();
        for (fi, face) in t.faces.iter_mut().enumerate() {
            for (ci, comp) in face.components_mut().into_iter().enumerate() {
                for (ni, v) in comp.iter_mut().enumerate() {
                    *v = f(fi, ci, ni, *v);
                }
            }
        }
        t
    }

    pub fn combine(&self, other: &CauchyTrace, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        check_compatible(self, other)?;
        let mut t = self.clone();
        for (a, b) in t.faces.iter_mut().zip(&other.faces) {
            for (ca, cb) in a.components_mut().into_iter().zip(b.components()) {
                for (x, y) in ca.iter_mut().zip(cb) {
                    *x = f(*x, *y);
                }
            }
        }
        Ok(t)
    }

    /// Discrete `H^{7/2, 3/2, 5/2, 1/2}(Γ)` norm proxy.
    pub fn proxy_norm(&self, band: usize) -> f64 {
        let mut total = 0.0;
        for (fi, face) in self.faces.iter().enumerate() {
            for (comp, s) in face.components().into_iter().zip(TRACE_ORDERS) {
                total += face_norm_sq(&self.mesh, fi, comp, s, band);
            }
        }
        total.sqrt()
    }

    /// Plain `L²(Γ)` norm of the four components.
    pub fn l2_norm(&self) -> f64 {
        let mut total = 0.0;
        for (fi, face) in self.faces.iter().enumerate() {
            let w = self.mesh.weights(fi);
            for comp in face.components() {
                total += comp.iter().zip(w).map(|(v, w)| w * v.norm_sqr()).sum::<f64>();
            }
        }
        total.sqrt()
    }

    /// Serializes as one `BCGO1` record per face and component (in the
    /// order `u, Δu, ∂_ν u, ∂_ν Δu`). Only uniform meshes can be written.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let n = self.mesh.dim;
        let c = self.mesh.nodes;
        let mut out = Vec::new();
        for (fi, face) in self.mesh.faces.iter().enumerate() {
            let tangential = face.tangential_axes(n);
            let mut shape = vec![c; n];
            shape[face.axis] = 1;
            let mut lo = vec![face.offset; n];
            let mut hi = vec![face.offset; n];
            for (j, &a) in tangential.iter().enumerate() {
                let (l, h) = uniform_box(self.mesh.kind, face.lo[j], face.hi[j], c)?;
                lo[a] = l;
                hi[a] = h;
            }
            for comp in self.faces[fi].components() {
                let g = ComplexGrid { shape: shape.clone(), lo: lo.clone(), hi: hi.clone(), data: comp.to_vec() };
                out.extend(g.to_bytes());
            }
        }
        Ok(out)
    }
}

fn uniform_box(kind: RuleKind, lo: f64, hi: f64, count: usize) -> Result<(f64, f64)> {
    match kind {
        RuleKind::Trapezoid => {
            let h = (hi - lo) / (count.max(2) - 1) as f64;
            Ok((lo, lo + h * count as f64))
        }
        RuleKind::Midpoint => {
            let h = (hi - lo) / count as f64;
            Ok((lo + 0.5 * h, lo + 0.5 * h + h * count as f64))
        }
        RuleKind::GaussLegendre => Err(Error::NonUniformSampling(
            "Gauss–Legendre face nodes cannot be stored in the uniform field format".into(),
        )),
    }
}

fn check_compatible(a: &CauchyTrace, b: &CauchyTrace) -> Result<()> {
    if !a.mesh.same_as(&b.mesh) {
        return Err(Error::MeshMismatch("traces live on different meshes".into()));
    }
    if (a.k - b.k).abs() > 1e-12 * a.k.abs().max(1.0) {
        return Err(Error::MeshMismatch(format!("traces belong to k = {} and k = {}", a.k, b.k)));
    }
    Ok(())
}

/// `‖f‖²_{L²} + Σ_m ((1 + |ξ_m|²)^s − 1)|c_m|² · area` on one face.
fn face_norm_sq(mesh: &BoundaryMesh, face: usize, values: &[Complex64], s: f64, band: usize) -> f64 {
    let w = mesh.weights(face);
    let l2: f64 = values.iter().zip(w).map(|(v, w)| w * v.norm_sqr()).sum();
    if band == 0 || s == 0.0 {
        return l2;
    }
    let f = &mesh.faces[face];
    let n = mesh.dim;
    let tangential = f.tangential_axes(n);
    let sides: Vec<f64> = f.lo.iter().zip(&f.hi).map(|(a, b)| b - a).collect();
    let area = f.area();
    let pts = mesh.points(face);
    let d = n - 1;
    let width = 2 * band + 1;
    // phase tables per tangential axis: e^{-i ξ_m (t − lo)}
    let tables: Vec<Vec<Vec<Complex64>>> = (0..d)
        .map(|j| {
            let axis = tangential[j];
            (0..width)
                .map(|mi| {
                    let m = mi as f64 - band as f64;
                    let xi = 2.0 * std::f64::consts::PI * m / sides[j];
                    pts.iter()
                        .map(|p| Complex64::from_polar(1.0, -xi * (p[axis] - f.lo[j])))
                        .collect()
                })
                .collect()
        })
        .collect();
    let total_modes = width.pow(d as u32);
    let extra: f64 = (0..total_modes)
        .into_par_iter()
        .map(|flat| {
            let mut idx = vec![0usize; d];
            crate::fft::unravel(flat, &vec![width; d], &mut idx);
            let mut xi2 = 0.0;
            for j in 0..d {
                let m = idx[j] as f64 - band as f64;
                xi2 += (2.0 * std::f64::consts::PI * m / sides[j]).powi(2);
            }
            let mut c = Complex64::default();
            for (p, (v, wt)) in values.iter().zip(w).enumerate() {
                let mut ph = Complex64::new(*wt, 0.0);
                for j in 0..d {
                    ph *= tables[j][idx[j]][p];
                }
                c += v * ph;
            }
            c /= area;
            ((1.0 + xi2).powf(s) - 1.0) * c.norm_sqr() * area
        })
        .sum();
    l2 + extra
}

/// Samples the four traces of `u` on `mesh`.
pub fn boundary_traces(u: &impl SolutionEval, mesh: &BoundaryMesh, k: f64) -> Result<CauchyTrace> {
    if u.dim() != mesh.dim {
        return Err(Error::DimensionMismatch { expected: mesh.dim, got: u.dim() });
    }
    let faces = (0..mesh.faces.len())
        .map(|fi| {
            let nu = mesh.faces[fi].normal(mesh.dim);
            let jets = u.jets(mesh.points(fi), Derivatives::Full);
            FaceTrace {
                u: jets.iter().map(|j| j.u).collect(),
                lap: jets.iter().map(|j| j.lap).collect(),
                dn: jets.iter().map(|j| j.normal(&nu)).collect(),
                dn_lap: jets.iter().map(|j| j.normal_lap(&nu)).collect(),
            }
        })
        .collect();
    Ok(CauchyTrace { k, mesh: mesh.clone(), faces })
}

/// `∫ [∂_ν Δu₁ · u₂ − Δu₁ · ∂_ν u₂ + ∂_ν u₁ · Δu₂ − u₁ · ∂_ν Δu₂] dS` over the mesh.
pub fn trace_pairing(t1: &CauchyTrace, t2: &CauchyTrace) -> Result<Complex64> {
    check_compatible(t1, t2)?;
    let mut acc = Complex64::default();
    for (fi, (a, b)) in t1.faces.iter().zip(&t2.faces).enumerate() {
        let w = t1.mesh.weights(fi);
        for p in 0..w.len() {
            acc += w[p] * (a.dn_lap[p] * b.u[p] - a.lap[p] * b.dn[p] + a.dn[p] * b.lap[p] - a.u[p] * b.dn_lap[p]);
        }
    }
    Ok(acc)
}

fn volume_rule(region: &crate::reflection::BoxRegion, quad: &QuadOptions) -> (Vec<Vec<f64>>, Vec<f64>) {
    TensorRule::new(quad.kind, &vec![quad.volume_nodes; region.dim()], &region.lo, &region.hi).points()
}

/// `|∫_Ω (Δ²u v − u Δ²v) − ∫_{∂Ω} [∂_ν Δu v − Δu ∂_ν v + ∂_ν u Δv − u ∂_ν Δv]|`.
pub fn green_residual(u: &impl SolutionEval, v: &impl SolutionEval, dom: &DomainSpec, quad: &QuadOptions) -> f64 {
    let (pts, w) = volume_rule(&dom.region(), quad);
    let ju = u.jets(&pts, Derivatives::Full);
    let jv = v.jets(&pts, Derivatives::Full);
    let lhs: Complex64 = ju
        .iter()
        .zip(&jv)
        .zip(&w)
        .map(|((a, b), w)| w * (a.bilap * b.u - a.u * b.bilap))
        .sum();
    let mesh = BoundaryMesh::full(dom, quad);
    let tu = boundary_traces(u, &mesh, 0.0).expect("dimensions checked by caller");
    let tv = boundary_traces(v, &mesh, 0.0).expect("dimensions checked by caller");
    let rhs = trace_pairing(&tu, &tv).expect("same mesh");
    (lhs - rhs).norm()
}

/// Which side of the pairing identity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingMode {
    Volume,
    Boundary,
}

/// Relative tolerance for the vanishing of `u` and `Δu` on `Γ₀`.
pub const GAMMA0_TOL: f64 = 1e-8;

/// Checks `u|_{Γ₀} = Δu|_{Γ₀} = 0` on a coarse sample of the flat face.
pub fn check_gamma0(u: &impl SolutionEval, dom: &DomainSpec, samples: usize) -> Result<()> {
    let mesh = BoundaryMesh::new(dom.dim, vec![dom.gamma0()], RuleKind::Midpoint, samples);
    let jets = u.jets(mesh.points(0), Derivatives::Full);
    let scale = jets.iter().fold(1.0f64, |m, j| m.max(j.grad.iter().map(|g| g.norm()).fold(0.0, f64::max)));
    let lap_scale = jets
        .iter()
        .fold(1.0f64, |m, j| m.max(j.grad_lap.iter().map(|g| g.norm()).fold(0.0, f64::max)));
    for j in &jets {
        if j.u.norm() > GAMMA0_TOL * scale || j.lap.norm() > GAMMA0_TOL * lap_scale {
            return Err(Error::InvalidSolution(format!(
                "u or Δu does not vanish on the flat face (|u| = {:.3e}, |Δu| = {:.3e})",
                j.u.norm(),
                j.lap.norm()
            )));
        }
    }
    Ok(())
}

/// `∫_Ω (q₂ − q₁) u₁ u₂` (volume mode) or the equivalent integral over `Γ`
/// (boundary mode).
#[allow(clippy::too_many_arguments)]
pub fn alessandrini_pairing(
    q1: &Potential,
    q2: &Potential,
    u1: &impl SolutionEval,
    u2: &impl SolutionEval,
    dom: &DomainSpec,
    mode: PairingMode,
    quad: &QuadOptions,
    k: f64,
) -> Result<Complex64> {
    check_gamma0(u1, dom, 6)?;
    check_gamma0(u2, dom, 6)?;
    match mode {
        PairingMode::Volume => Ok(volume_pairing(q1, q2, u1, u2, dom, quad)),
        PairingMode::Boundary => {
            let mesh = BoundaryMesh::gamma(dom, quad);
            let t1 = boundary_traces(u1, &mesh, k)?;
            let t2 = boundary_traces(u2, &mesh, k)?;
            trace_pairing(&t1, &t2)
        }
    }
}

/// Volume side over the bounding box of `supp(q₂ − q₁) ∩ Ω`.
pub fn volume_pairing(
    q1: &Potential,
    q2: &Potential,
    u1: &impl SolutionEval,
    u2: &impl SolutionEval,
    dom: &DomainSpec,
    quad: &QuadOptions,
) -> Complex64 {
    let region = match (q1.support(), q2.support()) {
        (None, None) => return Complex64::default(),
        (Some(a), None) | (None, Some(a)) => a,
        (Some(a), Some(b)) => a.union(&b),
    };
    let Some(region) = region.intersection(&dom.region()) else {
        return Complex64::default();
    };
    let (pts, w) = volume_rule(&region, quad);
    pts.par_iter()
        .zip(&w)
        .map(|(x, w)| {
            let dq = q2.eval(x) - q1.eval(x);
            if dq == 0.0 {
                Complex64::default()
            } else {
                w * dq * u1.value(x) * u2.value(x)
            }
        })
        .sum()
}

/// `‖t₁ − t₂‖ / max(‖t₁‖, ‖t₂‖)` in the trace norm proxy.
pub fn cauchy_dist_proxy(t1: &CauchyTrace, t2: &CauchyTrace, band: usize) -> Result<f64> {
    let diff = t1.combine(t2, |a, b| a - b)?;
    let scale = t1.proxy_norm(band).max(t2.proxy_norm(band));
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(diff.proxy_norm(band) / scale)
}
