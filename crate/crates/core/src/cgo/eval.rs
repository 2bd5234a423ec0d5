//! Pointwise evaluation of solutions and their derivatives up to `∇Δ` and `Δ²`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::CgoSolution;
use crate::lattice::{symbol_unchecked, SymbolParams};
use crate::nufft::{direct_eval, FineGrid, Nufft};

/// How many derivatives to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Derivatives {
    Value,
    Gradient,
    /// Value, gradient, `Δ`, `∇Δ` and `Δ²`.
    Full,
}

/// Value and derivatives at one point; unrequested entries are zero/empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Jet {
    pub u: Complex64,
    pub grad: Vec<Complex64>,
    pub lap: Complex64,
    pub grad_lap: Vec<Complex64>,
    pub bilap: Complex64,
}

impl Jet {
    pub fn normal(&self, nu: &[f64]) -> Complex64 {
        self.grad.iter().zip(nu).map(|(g, n)| g * n).sum()
    }

    pub fn normal_lap(&self, nu: &[f64]) -> Complex64 {
        self.grad_lap.iter().zip(nu).map(|(g, n)| g * n).sum()
    }
}

/// A function that can be evaluated together with its derivatives.
pub trait SolutionEval: Send + Sync {
    fn dim(&self) -> usize;

    fn jet(&self, x: &[f64], order: Derivatives) -> Jet;

    fn value(&self, x: &[f64]) -> Complex64 {
        self.jet(x, Derivatives::Value).u
    }

    fn jets(&self, points: &[Vec<f64>], order: Derivatives) -> Vec<Jet> {
        points.par_iter().map(|x| self.jet(x, order)).collect()
    }
}

impl<T: SolutionEval + ?Sized> SolutionEval for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn jet(&self, x: &[f64], order: Derivatives) -> Jet {
        (**self).jet(x, order)
    }
}

enum Backend {
    Nufft(Nufft, FineGrid),
    Direct(Vec<Vec<Complex64>>),
}

/// Evaluates `e^{iζ·x}(1 + r(x))` from a built solution.
pub struct CgoEvaluator {
    sol: CgoSolution,
    order: Derivatives,
    backend: Backend,
}

impl std::fmt::Debug for CgoEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CgoEvaluator")
            .field("k", &self.sol.k)
            .field("order", &self.order)
            .finish()
    }
}

/// Default Gaussian stencil half-width for off-grid evaluation.
pub const DEFAULT_SPREAD: usize = 12;

impl CgoEvaluator {
    /// Fast evaluator supporting derivatives up to `order`.
    pub fn new(sol: &CgoSolution, order: Derivatives, spread: usize) -> Self {
        let arrays = component_arrays(sol, order);
        let grid = sol.grid();
        let plan = Nufft::new(grid.dim(), grid.modes(), spread);
        let refs: Vec<&[Complex64]> = arrays.iter().map(Vec::as_slice).collect();
        let fine = plan.prepare(&refs);
        Self {
            sol: sol.clone(),
            order,
            backend: Backend::Nufft(plan, fine),
        }
    }

    /// Exact trigonometric sums; slow, meant as a reference.
    pub fn direct(sol: &CgoSolution, order: Derivatives) -> Self {
        Self {
            sol: sol.clone(),
            order,
            backend: Backend::Direct(component_arrays(sol, order)),
        }
    }

    pub fn solution(&self) -> &CgoSolution {
        &self.sol
    }

    fn series(&self, y: &[f64], out: &mut [Complex64]) {
        match &self.backend {
            Backend::Nufft(plan, fine) => plan.eval(fine, y, out),
            Backend::Direct(arrays) => {
                let g = self.sol.grid();
                for (o, a) in out.iter_mut().zip(arrays) {
                    *o = direct_eval(g.dim(), g.modes(), a, y);
                }
            }
        }
    }
}

fn component_count(n: usize, order: Derivatives) -> usize {
    match order {
        Derivatives::Value => 1,
        Derivatives::Gradient => 1 + n,
        Derivatives::Full => 3 + 2 * n,
    }
}

/// Coefficient arrays `r, r m, r p, r p m, r p²` (as far as `order` needs).
fn component_arrays(sol: &CgoSolution, order: Derivatives) -> Vec<Vec<Complex64>> {
    let grid = sol.grid();
    let n = grid.dim();
    let nc = component_count(n, order);
    let params = SymbolParams::from(&sol.frame);
    let mut arrays = vec![vec![Complex64::default(); grid.len()]; nc];
    let mut l = vec![0i64; n];
    for (flat, &r) in sol.remainder.coeffs.iter().enumerate() {
        grid.index_of(flat, &mut l);
        arrays[0][flat] = r;
        if order == Derivatives::Value {
            continue;
        }
        for a in 0..n {
            let m = l[a] as f64 + if a == 1 { 0.5 } else { 0.0 };
            arrays[1 + a][flat] = r * m;
        }
        if order == Derivatives::Full {
            let (p, _) = symbol_unchecked(&l, params);
            arrays[1 + n][flat] = r * p;
            for a in 0..n {
                let m = l[a] as f64 + if a == 1 { 0.5 } else { 0.0 };
                arrays[2 + n + a][flat] = r * p * m;
            }
            arrays[2 + 2 * n][flat] = r * p * p;
        }
    }
    arrays
}

impl SolutionEval for CgoEvaluator {
    fn dim(&self) -> usize {
        self.sol.dim()
    }

    fn jet(&self, x: &[f64], order: Derivatives) -> Jet {
        assert!(order <= self.order, "evaluator was prepared for fewer derivatives");
        let n = self.dim();
        let kappa = self.sol.kappa;
        let frame = &self.sol.frame;
        let scaled: Vec<f64> = x.iter().map(|v| v * kappa).collect();
        let mut y = vec![0.0; n];
        frame.to_canonical(&scaled, &mut y);
        let nc = component_count(n, order);
        let mut s = vec![Complex64::default(); component_count(n, self.order)];
        self.series(&y, &mut s);
        let half = Complex64::from_polar(1.0, 0.5 * y[1]);
        s.iter_mut().take(nc).for_each(|v| *v *= half);
        let e = Complex64::from_polar((-frame.w2_abs * y[1]).exp(), frame.w1_abs * y[0]);
        let one_r = Complex64::new(1.0, 0.0) + s[0];
        let mut jet = Jet {
            u: e * one_r,
            ..Jet::default()
        };
        if order == Derivatives::Value {
            return jet;
        }
        let zc = frame.canonical_zeta();
        let i = Complex64::i();
        let rotate_back = |v: &[Complex64], scale: f64| -> Vec<Complex64> {
            (0..n)
                .map(|j| (0..n).map(|r| v[r] * frame.rotation[r * n + j]).sum::<Complex64>() * scale)
                .collect()
        };
        let grad_c: Vec<Complex64> = (0..n).map(|a| i * e * (zc[a] * one_r + s[1 + a])).collect();
        jet.grad = rotate_back(&grad_c, kappa);
        if order == Derivatives::Gradient {
            return jet;
        }
        let k2 = (self.sol.k / kappa).powi(2);
        let sp = s[1 + n];
        let spp = s[2 + 2 * n];
        jet.lap = -e * (k2 * one_r + sp) * kappa.powi(2);
        let gl_c: Vec<Complex64> = (0..n)
            .map(|a| -i * e * (k2 * zc[a] * one_r + k2 * s[1 + a] + zc[a] * sp + s[2 + n + a]))
            .collect();
        jet.grad_lap = rotate_back(&gl_c, kappa.powi(3));
        jet.bilap = e * (k2 * k2 * one_r + 2.0 * k2 * sp + spp) * kappa.powi(4);
        jet
    }
}

/// `e^{iζ·x}` with exact derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWave {
    pub zeta: Vec<Complex64>,
}

impl SolutionEval for PlaneWave {
    fn dim(&self) -> usize {
        self.zeta.len()
    }

    fn jet(&self, x: &[f64], order: Derivatives) -> Jet {
        let i = Complex64::i();
        let phase: Complex64 = self.zeta.iter().zip(x).map(|(z, v)| z * v).sum();
        let u = (i * phase).exp();
        let mut jet = Jet { u, ..Jet::default() };
        if order >= Derivatives::Gradient {
            jet.grad = self.zeta.iter().map(|z| i * z * u).collect();
        }
        if order == Derivatives::Full {
            let zz: Complex64 = self.zeta.iter().map(|z| z * z).sum();
            jet.lap = -zz * u;
            jet.grad_lap = self.zeta.iter().map(|z| -i * z * zz * u).collect();
            jet.bilap = zz * zz * u;
        }
        jet
    }
}

/// Polynomial `Σ c xᵖ` with exact derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<(Complex64, Vec<u32>)>,
    grad: Vec<Vec<(Complex64, Vec<u32>)>>,
    lap: Vec<(Complex64, Vec<u32>)>,
    grad_lap: Vec<Vec<(Complex64, Vec<u32>)>>,
    bilap: Vec<(Complex64, Vec<u32>)>,
}

type Terms = Vec<(Complex64, Vec<u32>)>;

fn differentiate(terms: &Terms, axis: usize) -> Terms {
    terms
        .iter()
        .filter(|(_, p)| p[axis] > 0)
        .map(|(c, p)| {
            let mut q = p.clone();
            q[axis] -= 1;
            (c * p[axis] as f64, q)
        })
        .collect()
}

fn laplacian(terms: &Terms, dim: usize) -> Terms {
    (0..dim)
        .flat_map(|a| differentiate(&differentiate(terms, a), a))
        .collect()
}

fn evaluate(terms: &Terms, x: &[f64]) -> Complex64 {
    terms
        .iter()
        .map(|(c, p)| c * p.iter().zip(x).map(|(&e, v)| v.powi(e as i32)).product::<f64>())
        .sum()
}

impl Polynomial {
    pub fn new(dim: usize, terms: Vec<(f64, Vec<u32>)>) -> Self {
        let terms: Terms = terms.into_iter().map(|(c, p)| (Complex64::new(c, 0.0), p)).collect();
        assert!(terms.iter().all(|(_, p)| p.len() == dim), "exponent vector length must match the dimension");
        let grad = (0..dim).map(|a| differentiate(&terms, a)).collect();
        let lap = laplacian(&terms, dim);
        let grad_lap = (0..dim).map(|a| differentiate(&lap, a)).collect();
        let bilap = laplacian(&lap, dim);
        Self { dim, terms, grad, lap, grad_lap, bilap }
    }

    pub fn monomial(dim: usize, powers: Vec<u32>) -> Self {
        Self::new(dim, vec![(1.0, powers)])
    }
}

impl SolutionEval for Polynomial {
    fn dim(&self) -> usize {
        self.dim
    }

    fn jet(&self, x: &[f64], order: Derivatives) -> Jet {
        let mut jet = Jet {
            u: evaluate(&self.terms, x),
            ..Jet::default()
        };
        if order >= Derivatives::Gradient {
            jet.grad = self.grad.iter().map(|t| evaluate(t, x)).collect();
        }
        if order == Derivatives::Full {
            jet.lap = evaluate(&self.lap, x);
            jet.grad_lap = self.grad_lap.iter().map(|t| evaluate(t, x)).collect();
            jet.bilap = evaluate(&self.bilap, x);
        }
        jet
    }
}
