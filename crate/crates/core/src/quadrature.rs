//! One-dimensional rules and their tensor products over boxes.

use serde::{Deserialize, Serialize};

/// Family of one-dimensional quadrature rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    #[default]
    GaussLegendre,
    Trapezoid,
    Midpoint,
}

/// Nodes and weights on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    pub fn new(kind: RuleKind, count: usize, lo: f64, hi: f64) -> Self {
        assert!(count >= 1, "a rule needs at least one node");
        match kind {
            RuleKind::GaussLegendre => gauss_legendre(count).mapped(lo, hi),
            RuleKind::Trapezoid => trapezoid(count.max(2), lo, hi),
            RuleKind::Midpoint => midpoint(count, lo, hi),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Affine image of a rule on `[-1, 1]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> Self {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        Self {
            nodes: self.nodes.iter().map(|t| mid + half * t).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss–Legendre rule with `n` nodes on `[-1, 1]` (Newton iteration on the
/// three-term recurrence).
pub fn gauss_legendre(n: usize) -> Rule1d {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule1d { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn trapezoid(count: usize, lo: f64, hi: f64) -> Rule1d {
    let h = (hi - lo) / (count - 1) as f64;
    let nodes = (0..count).map(|i| lo + h * i as f64).collect();
    let weights = (0..count)
        .map(|i| if i == 0 || i == count - 1 { 0.5 * h } else { h })
        .collect();
    Rule1d { nodes, weights }
}

fn midpoint(count: usize, lo: f64, hi: f64) -> Rule1d {
    let h = (hi - lo) / count as f64;
    Rule1d {
        nodes: (0..count).map(|i| lo + h * (i as f64 + 0.5)).collect(),
        weights: vec![h; count],
    }
}

/// Composite Gauss–Legendre rule: `panels` equal panels with `order` nodes each.
pub fn composite_gauss(order: usize, panels: usize, lo: f64, hi: f64) -> Rule1d {
    let base = gauss_legendre(order);
    let h = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(order * panels);
    let mut weights = Vec::with_capacity(order * panels);
    for p in 0..panels {
        let a = lo + h * p as f64;
        let r = base.mapped(a, a + h);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    Rule1d { nodes, weights }
}

/// Tensor-product rule over an axis-aligned box.
#[derive(Debug, Clone)]
pub struct TensorRule {
    pub axes: Vec<Rule1d>,
}

impl TensorRule {
    pub fn new(kind: RuleKind, counts: &[usize], lo: &[f64], hi: &[f64]) -> Self {
        let axes = counts
            .iter()
            .zip(lo.iter().zip(hi))
            .map(|(&c, (&a, &b))| Rule1d::new(kind, c, a, b))
            .collect();
        Self { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Rule1d::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All nodes (row-major, last axis fastest) with their weights.
    pub fn points(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let n = self.dim();
        let total = self.len();
        let shape: Vec<usize> = self.axes.iter().map(Rule1d::len).collect();
        let mut idx = vec![0usize; n];
        let mut pts = Vec::with_capacity(total);
        let mut wts = Vec::with_capacity(total);
        for flat in 0..total {
            crate::fft::unravel(flat, &shape, &mut idx);
            let mut p = Vec::with_capacity(n);
            let mut w = 1.0;
            for (a, &i) in idx.iter().enumerate() {
                p.push(self.axes[a].nodes[i]);
                w *= self.axes[a].weights[i];
            }
            pts.push(p);
            wts.push(w);
        }
        (pts, wts)
    }
}
