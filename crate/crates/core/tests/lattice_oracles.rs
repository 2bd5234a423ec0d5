use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bcgo::cgo::{axis_zeta, build_cgo, residual_norm, CgoOptions};
use bcgo::lattice::{apply_g, basis_eval, symbol_p, LatticeGrid, SpectralField, SpectralTransform, SymbolParams};
use bcgo::reflection::{Potential, Term};

fn random_field(grid: LatticeGrid, rng: &mut ChaCha8Rng) -> SpectralField {
    SpectralField {
        grid,
        coeffs: (0..grid.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
    }
}

fn lattice_index(grid: LatticeGrid, flat: usize) -> Vec<i64> {
    let mut l = vec![0; grid.dim()];
    grid.index_of(flat, &mut l);
    l
}

#[test]
fn analysis_of_basis_functions_is_kronecker() {
    let grid = LatticeGrid::new(3, 8).unwrap();
    let tr = SpectralTransform::new(grid);
    let nodes = grid.nodes();
    for flat in (0..grid.len()).step_by(37) {
        let l = lattice_index(grid, flat);
        let samples: Vec<Complex64> = nodes.iter().map(|y| basis_eval(&l, y)).collect();
        let c = tr.analyze(&samples).unwrap();
        for (j, v) in c.coeffs.iter().enumerate() {
            let want = if j == flat { 1.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-12, "mode {l:?} leaked into {j}: {v}");
        }
    }
}

#[test]
fn synthesis_roundtrip() {
    let grid = LatticeGrid::new(3, 12).unwrap();
    let tr = SpectralTransform::new(grid);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = random_field(grid, &mut rng);
    let back = tr.analyze(&tr.synthesize(&f)).unwrap();
    let err: f64 = back.coeffs.iter().zip(&f.coeffs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    assert!(err <= 1e-10 * f.norm());
}

#[test]
fn symbol_lower_bound_over_whole_truncation() {
    let grid = LatticeGrid::new(3, 16).unwrap();
    for (w1, w2, k) in [(0.0, 1.0, 0.0), (3.0, 1.0, 2.0), (5.0, 2.5, 1.5), (12.0, 7.0, 9.0)] {
        let params = SymbolParams { w1_abs: w1, w2_abs: w2, k };
        for flat in 0..grid.len() {
            let l = lattice_index(grid, flat);
            let (p, d) = symbol_p(&l, params).unwrap();
            assert!(p.im.abs() >= w2 - 1e-12);
            assert!(d.norm() >= w2 * w2 * (1.0 - 1e-12), "l = {l:?}, |d| = {}", d.norm());
        }
    }
}

#[test]
fn symbol_matches_complex_arithmetic() {
    let l = [3i64, -2, 1];
    let (w1, w2, k) = (5.0, 2.0, 1.5);
    let m = [3.0, -1.5, 1.0];
    let zeta = [Complex64::new(w1, 0.0), Complex64::new(0.0, w2), Complex64::new(0.0, 0.0)];
    let p: Complex64 = m.iter().map(|v| v * v).sum::<f64>() + 2.0 * zeta.iter().zip(&m).map(|(z, v)| z * v).sum::<Complex64>();
    let d = p * (p + 2.0 * k * k);
    let (pg, dg) = symbol_p(&l, SymbolParams { w1_abs: w1, w2_abs: w2, k }).unwrap();
    assert!((p - pg).norm() < 1e-12);
    assert!((d - dg).norm() < 1e-12);
    assert!(dg.norm() >= 4.0);
}

#[test]
fn apply_g_matches_mode_division_and_norm_bound() {
    let grid = LatticeGrid::new(3, 8).unwrap();
    let params = SymbolParams { w1_abs: 2.0, w2_abs: 3.0, k: 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let f = random_field(grid, &mut rng);
        let r = apply_g(&f, params).unwrap();
        let l = lattice_index(grid, 17);
        let m = [l[0] as f64, l[1] as f64 + 0.5, l[2] as f64];
        let p = Complex64::new(m.iter().map(|v| v * v).sum::<f64>() + 4.0 * m[0], 6.0 * m[1]);
        let want = f.coeffs[17] / (p * p + 2.0 * p);
        assert!((r.coeffs[17] - want).norm() < 1e-14);
        assert!(r.norm() <= f.norm() / 9.0);
    }
}

#[test]
fn apply_g_unit_mode_example() {
    let grid = LatticeGrid::new(3, 4).unwrap();
    let f = SpectralField::unit(grid, &[0, 0, 0]).unwrap();
    let r = apply_g(&f, SymbolParams { w1_abs: 0.0, w2_abs: 2.0, k: 0.0 }).unwrap();
    let r0 = r.get(&[0, 0, 0]).unwrap();
    let want = 1.0 / Complex64::new(-63.0 / 16.0, 1.0);
    assert!((r0 - want).norm() < 1e-12);
    assert!(r0.norm() <= 0.25);
}

#[test]
fn neumann_limit_equals_dense_solve() {
    let q = Potential::from_terms(
        2,
        vec![Term::PolyBox { center: vec![0.3, -0.2], half_widths: vec![1.6, 1.4], power: 4, amplitude: 1.5 }],
    )
    .unwrap();
    let (k, a) = (1.0, 4.0);
    let opts = CgoOptions { modes: 8, kappa: 1.0, tol: 1e-15, ..Default::default() };
    let sol = build_cgo(&q, &axis_zeta(2, k, a), k, &opts).unwrap();
    let grid = sol.grid();
    let nodes = grid.nodes();
    let n = grid.len();
    let w1 = (k * k + a * a).sqrt();
    let qs: Vec<f64> = nodes.iter().map(|y| q.eval(y)).collect();
    // Collocation at the grid nodes: S diag(d) c + diag(q) S c = −q.
    let mut mat = DMatrix::<Complex64>::zeros(n, n);
    for col in 0..n {
        let l = lattice_index(grid, col);
        let m = [l[0] as f64, l[1] as f64 + 0.5];
        let p = Complex64::new(m[0] * m[0] + m[1] * m[1] + 2.0 * w1 * m[0], 2.0 * a * m[1]);
        let d = p * p + 2.0 * k * k * p;
        for (row, y) in nodes.iter().enumerate() {
            mat[(row, col)] = basis_eval(&l, y) * (d + qs[row]);
        }
    }
    let rhs = DVector::from_iterator(n, qs.iter().map(|v| Complex64::new(-v, 0.0)));
    let c = mat.lu().solve(&rhs).expect("nonsingular collocation matrix");
    let scale = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (flat, got) in sol.remainder.coeffs.iter().enumerate() {
        assert!((got - c[flat]).norm() <= 1e-10 * scale, "mode {flat}: {got} vs {}", c[flat]);
    }
}

#[test]
fn converged_build_has_tiny_residual() {
    let q = Potential::from_terms(
        3,
        vec![Term::RadialBump { center: vec![0.0, 0.3, -0.2], radius: 1.2, power: 4, amplitude: 0.8 }],
    )
    .unwrap();
    let opts = CgoOptions { modes: 16, tol: 1e-12, ..Default::default() };
    let sol = build_cgo(&q, &axis_zeta(3, 2.0, 3.0), 2.0, &opts).unwrap();
    assert!(residual_norm(&sol, &q, &opts).unwrap() <= 1e-10);
    assert!(sol.remainder_norm <= sol.certified_bound);
}
