//! Complex geometric optics solutions `u = e^{iζ·x}(1 + r)` of
//! `(Δ² − k⁴ + q) u = 0`.
//!
//! Physical coordinates `x` are mapped to `y = κx` so the region of interest
//! sits well inside the periodic cube, then rotated into the frame where
//! `Re ζ ∥ e₁` and `Im ζ ∥ e₂`. In that frame the remainder solves
//! `(L² + 2k²L + q) r = −q` with `L = D² + 2ζ·D`, which is diagonal on the
//! shifted lattice apart from the multiplication by `q`. Writing `r = G r̃`
//! turns this into the fixed point `r̃ = −q − q G r̃`, a contraction once
//! `|Im ζ|² ≥ 2‖q‖_∞`.

pub mod eval;
pub mod zeta;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{symbol_table, CanonicalZeta, LatticeGrid, SpectralField, SpectralTransform, SymbolParams};
use crate::reflection::potential::Potential;

pub use eval::{CgoEvaluator, Derivatives, Jet, PlaneWave, Polynomial, SolutionEval, DEFAULT_SPREAD};
pub use zeta::{axis_zeta, cdot, make_frame, make_zeta_pair, ZetaPair};

/// Contraction constant: the build requires `|Im ζ| ≥ max{C₀ √‖q‖_∞, 1}`.
pub const DEFAULT_C0: f64 = std::f64::consts::SQRT_2;
/// Certified remainder constant: `‖r‖ ≤ C₁ ‖q‖ / |Im ζ|²`.
pub const DEFAULT_C1: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CgoOptions {
    /// Lattice modes per axis.
    pub modes: usize,
    /// Stop once successive iterates differ by at most `tol · ‖q‖`.
    pub tol: f64,
    pub max_iter: usize,
    /// Physical-to-lattice scale `y = κx`.
    pub kappa: f64,
    pub c0: f64,
    pub c1: f64,
    /// Rotation of the frame completion, see [`CanonicalZeta::from_zeta_with_twist`].
    pub twist: f64,
}

impl Default for CgoOptions {
    fn default() -> Self {
        Self {
            modes: 32,
            tol: 1e-10,
            max_iter: 200,
            kappa: 1.0,
            c0: DEFAULT_C0,
            c1: DEFAULT_C1,
            twist: 0.0,
        }
    }
}

/// The conjugated periodic problem for one potential and one `ζ`.
#[derive(Debug, Clone)]
pub struct ConjugatedProblem {
    pub transform: SpectralTransform,
    pub frame: CanonicalZeta,
    /// `κ`.
    pub kappa: f64,
    /// Scaled potential `q(Rotᵀ y/κ)/κ⁴` at the lattice nodes.
    pub q_samples: Vec<f64>,
    /// Shifted-lattice coefficients of the scaled potential.
    pub q_coeffs: SpectralField,
    /// `d_l = p_l² + 2k²p_l` in DFT order.
    pub symbols: Vec<Complex64>,
}

impl ConjugatedProblem {
    /// Sets up the problem for physical `ζ` (with `ζ·ζ = k²`).
    pub fn new(q: &Potential, zeta: &[Complex64], k: f64, opts: &CgoOptions) -> Result<Self> {
        let n = q.dim();
        if zeta.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: zeta.len() });
        }
        if !(opts.kappa > 0.0) {
            return Err(Error::ParameterRange(format!("κ must be positive, got {}", opts.kappa)));
        }
        let zz = cdot(zeta, zeta);
        let scale = zeta.iter().map(|z| z.norm_sqr()).sum::<f64>().max(1.0);
        if (zz - Complex64::new(k * k, 0.0)).norm() > 1e-9 * scale {
            return Err(Error::ParameterRange(format!("ζ·ζ = {zz} differs from k² = {}", k * k)));
        }
        if let Some(b) = q.support() {
            let reach = b.corner_radius() * opts.kappa;
            if reach >= std::f64::consts::PI {
                return Err(Error::SupportViolation(format!(
                    "support reaches radius {reach:.4} in lattice units, beyond the cube half-width π"
                )));
            }
        }
        let grid = LatticeGrid::new(n, opts.modes)?;
        let kappa = opts.kappa;
        let scaled: Vec<Complex64> = zeta.iter().map(|z| z / kappa).collect();
        let frame = CanonicalZeta::from_zeta_with_twist(&scaled, k / kappa, opts.twist)?;
        let transform = SpectralTransform::new(grid);
        let inv4 = kappa.powi(-4);
        let mut x = vec![0.0; n];
        let q_samples: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|y| {
                frame.to_lab(y, &mut x);
                x.iter_mut().for_each(|v| *v /= kappa);
                q.eval(&x) * inv4
            })
            .collect();
        let q_complex: Vec<Complex64> = q_samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let q_coeffs = transform.analyze(&q_complex)?;
        let symbols = symbol_table(grid, SymbolParams::from(&frame))?;
        Ok(Self {
            transform,
            frame,
            kappa,
            q_samples,
            q_coeffs,
            symbols,
        })
    }

    pub fn grid(&self) -> LatticeGrid {
        self.transform.grid()
    }

    /// `max |q|` over the lattice nodes, in scaled units.
    pub fn q_sup(&self) -> f64 {
        self.q_samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(q · G f)` in coefficients.
    pub fn apply_qg(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = f.iter().zip(&self.symbols).map(|(c, d)| c / d).collect();
        self.multiply_q(&mut buf);
        buf
    }

    /// Coefficients of `q · f` for `f` given by coefficients (in place).
    pub fn multiply_q(&self, buf: &mut [Complex64]) {
        self.transform.synthesize_in_place(buf);
        for (v, q) in buf.iter_mut().zip(&self.q_samples) {
            *v *= *q;
        }
        self.transform
            .analyze_in_place(buf)
            .expect("buffer matches the lattice");
    }
}

/// A converged remainder together with its frame bookkeeping.
#[derive(Debug, Clone)]
pub struct CgoSolution {
    /// Physical `ζ`.
    pub zeta: Vec<Complex64>,
    pub k: f64,
    pub kappa: f64,
    /// Scaled canonical frame.
    pub frame: CanonicalZeta,
    /// Remainder coefficients on the shifted lattice (scaled canonical frame).
    pub remainder: SpectralField,
    pub iterations: usize,
    /// Norm gaps between successive iterates.
    pub gaps: Vec<f64>,
    /// Normalized `L²(Q)` norm of `r`.
    pub remainder_norm: f64,
    /// Certified bound `C₁ ‖q‖ / |Im ζ|²` (scaled units, normalized norms).
    pub certified_bound: f64,
    /// Normalized `L²(Q)` norm of the scaled potential.
    pub q_norm: f64,
}

impl CgoSolution {
    /// The exact exponential solution (`r = 0`) for `q = 0`.
    pub fn plane_wave(zeta: &[Complex64], k: f64, modes: usize, kappa: f64) -> Result<Self> {
        let q = Potential::zero(zeta.len());
        build_cgo(&q, zeta, k, &CgoOptions { modes, kappa, ..CgoOptions::default() })
    }

    pub fn dim(&self) -> usize {
        self.zeta.len()
    }

    pub fn grid(&self) -> LatticeGrid {
        self.remainder.grid
    }

    /// `|Im ζ|` in lattice units.
    pub fn im_zeta_scaled(&self) -> f64 {
        self.frame.w2_abs
    }
}

/// Builds `u = e^{iζ·x}(1 + r)` for `(Δ² − k⁴ + q)u = 0` by Neumann
/// iteration on the truncated lattice.
pub fn build_cgo(q: &Potential, zeta: &[Complex64], k: f64, opts: &CgoOptions) -> Result<CgoSolution> {
    let problem = ConjugatedProblem::new(q, zeta, k, opts)?;
    solve(&problem, zeta, k, opts)
}

/// Runs the fixed-point iteration for a prepared problem.
pub fn solve(problem: &ConjugatedProblem, zeta: &[Complex64], k: f64, opts: &CgoOptions) -> Result<CgoSolution> {
    let w2 = problem.frame.w2_abs;
    let q_sup = problem.q_sup();
    let required = (opts.c0 * q_sup.sqrt()).max(1.0);
    if q_sup > 0.0 && w2 < required * (1.0 - 1e-12) {
        return Err(Error::ContractionNotGuaranteed { im_zeta: w2, required });
    }
    let q_hat = &problem.q_coeffs.coeffs;
    let q_norm = problem.q_coeffs.norm();
    let threshold = opts.tol * q_norm;
    let mut current: Vec<Complex64> = q_hat.iter().map(|c| -c).collect();
    let mut gaps = Vec::new();
    let mut iterations = 0;
    if q_norm > 0.0 {
        loop {
            if iterations >= opts.max_iter {
                return Err(Error::IterationLimit {
                    iterations,
                    gap: gaps.last().copied().unwrap_or(f64::NAN),
                });
            }
            let s = problem.apply_qg(&current);
            let next: Vec<Complex64> = q_hat.iter().zip(&s).map(|(q, s)| -q - s).collect();
            let gap = next
                .iter()
                .zip(&current)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            current = next;
            iterations += 1;
            gaps.push(gap);
            if gap <= threshold {
                break;
            }
        }
    }
    let coeffs: Vec<Complex64> = current.iter().zip(&problem.symbols).map(|(c, d)| c / d).collect();
    let remainder = SpectralField {
        grid: problem.grid(),
        coeffs,
    };
    let remainder_norm = remainder.norm();
    let certified_bound = opts.c1 * q_norm / (w2 * w2);
    if remainder_norm > certified_bound * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::BoundViolated {
            norm: remainder_norm,
            bound: certified_bound,
        });
    }
    Ok(CgoSolution {
        zeta: zeta.to_vec(),
        k,
        kappa: problem.kappa,
        frame: problem.frame.clone(),
        remainder,
        iterations,
        gaps,
        remainder_norm,
        certified_bound,
        q_norm,
    })
}

/// Normalized `L²(Q)` norm of `d_l r_l + (q r)_l + q_l`, the residual of the
/// conjugated equation on the lattice (scaled units).
pub fn residual_norm(sol: &CgoSolution, q: &Potential, opts: &CgoOptions) -> Result<f64> {
    let problem = ConjugatedProblem::new(
        q,
        &sol.zeta,
        sol.k,
        &CgoOptions {
            modes: sol.grid().modes(),
            kappa: sol.kappa,
            ..opts.clone()
        },
    )?;
    if problem.grid() != sol.grid() {
        return Err(Error::GridMismatch("solution and potential lattices differ".into()));
    }
    Ok(residual_of(&problem, &sol.remainder.coeffs))
}

/// Residual for arbitrary remainder coefficients.
pub fn residual_of(problem: &ConjugatedProblem, r: &[Complex64]) -> f64 {
    let mut qr = r.to_vec();
    problem.multiply_q(&mut qr);
    r.iter()
        .zip(&problem.symbols)
        .zip(qr.iter().zip(&problem.q_coeffs.coeffs))
        .map(|((r, d), (qr, q))| (d * r + qr + q).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflection::potential::Term;

    fn bump(amplitude: f64) -> Potential {
        Potential::from_terms(
            3,
            vec![Term::PolyBox {
                center: vec![0.2, -0.1, 0.0],
                half_widths: vec![1.0, 1.2, 0.9],
                power: 4,
                amplitude,
            }],
        )
        .unwrap()
    }

    #[test]
    fn zero_potential_gives_plane_wave() {
        let z = axis_zeta(3, 1.0, 2.0);
        let sol = build_cgo(&Potential::zero(3), &z, 1.0, &CgoOptions { modes: 8, ..Default::default() }).unwrap();
        assert_eq!(sol.remainder_norm, 0.0);
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn contraction_and_residual() {
        let q = bump(1.0);
        let z = axis_zeta(3, 1.0, 2.0);
        let opts = CgoOptions { modes: 16, tol: 1e-12, ..Default::default() };
        let sol = build_cgo(&q, &z, 1.0, &opts).unwrap();
        for w in sol.gaps.windows(2).skip(1) {
            assert!(w[1] <= 0.55 * w[0] || w[1] < 1e-14, "gaps {:?}", sol.gaps);
        }
        let res = residual_norm(&sol, &q, &opts).unwrap();
        assert!(res <= 1e-10, "residual {res}");
        assert!(sol.remainder_norm <= sol.certified_bound);
    }

    #[test]
    fn rejects_small_imaginary_part() {
        let q = bump(8.0);
        let z = axis_zeta(3, 1.0, 2.0);
        let err = build_cgo(&q, &z, 1.0, &CgoOptions { modes: 8, ..Default::default() }).unwrap_err();
        assert!(matches!(err, Error::ContractionNotGuaranteed { .. }));
    }

    #[test]
    fn iteration_limit_is_reported() {
        let q = bump(1.0);
        let z = axis_zeta(3, 1.0, 2.0);
        let err = build_cgo(&q, &z, 1.0, &CgoOptions { modes: 8, max_iter: 2, tol: 1e-15, ..Default::default() })
            .unwrap_err();
        assert!(matches!(err, Error::IterationLimit { iterations: 2, .. }));
        assert_eq!(err.exit_code(), 4);
    }
}
