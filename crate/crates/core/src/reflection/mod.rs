//! Reflection across `x_n = 0`: even extension of potentials and odd
//! combination of solutions, so that `u` and `Δu` vanish on the flat face.

pub mod domain;
pub mod potential;

use num_complex::Complex64;

use crate::cgo::{Derivatives, Jet, SolutionEval};

pub use domain::{BoxRegion, DomainSpec, Face};
pub use potential::{even_extension, Potential, Regularity, Term};

/// `x* = (x', −x_n)`.
pub fn mirror(x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    let n = y.len() - 1;
    y[n] = -y[n];
    y
}

/// `u(x) = ũ(x', x_n) − ũ(x', −x_n)`.
#[derive(Debug, Clone)]
pub struct Reflected<E> {
    pub inner: E,
}

impl<E: SolutionEval> Reflected<E> {
    pub fn new(inner: E) -> Self {
        Self { inner }
    }
}

/// Odd combination of a jet at `x` and at `x*`.
pub fn reflect_jet(direct: &Jet, mirrored: &Jet) -> Jet {
    let n = direct.grad.len();
    let flip = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
        (0..a.len())
            .map(|i| if i + 1 == n { a[i] + b[i] } else { a[i] - b[i] })
            .collect()
    };
    Jet {
        u: direct.u - mirrored.u,
        grad: flip(&direct.grad, &mirrored.grad),
        lap: direct.lap - mirrored.lap,
        grad_lap: flip(&direct.grad_lap, &mirrored.grad_lap),
        bilap: direct.bilap - mirrored.bilap,
    }
}

impl<E: SolutionEval> SolutionEval for Reflected<E> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn jet(&self, x: &[f64], order: Derivatives) -> Jet {
        let a = self.inner.jet(x, order);
        let b = self.inner.jet(&mirror(x), order);
        reflect_jet(&a, &b)
    }
}

/// Wraps any closure as a value-only evaluator.
pub struct FnEval<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[f64], Derivatives) -> Jet + Send + Sync> SolutionEval for FnEval<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn jet(&self, x: &[f64], order: Derivatives) -> Jet {
        (self.f)(x, order)
    }
}
