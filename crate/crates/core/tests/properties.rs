use num_complex::Complex64;
use proptest::prelude::*;

use bcgo::cgo::{cdot, make_frame, make_zeta_pair};
use bcgo::field::GridField;
use bcgo::harness::{alpha, bound_value, parameter_schedule};
use bcgo::recon::{sobolev_norm, xi_pm};
use bcgo::rl::{mollify, Mollifier};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn admissible() -> impl Strategy<Value = (Vec<f64>, f64, f64)> {
    (prop::collection::vec(-8.0..8.0f64, 3..=5), 1.0..10.0f64, 1.0..10.0f64)
        .prop_filter("ξ ≠ 0 and k² + a² ≥ |ξ|²/4", |(xi, k, a)| {
            let m = dot(xi, xi);
            m > 1e-6 && k * k + a * a >= m / 4.0
        })
}

fn blob_field(c: [f64; 2], w: f64, amp: f64) -> GridField {
    GridField::from_fn(&[64, 64], &[-2.0, -2.0], &[2.0, 2.0], |x| {
        let d2 = (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2);
        let t = 1.0 - d2 / (w * w);
        if t > 0.0 {
            amp * t * t * t
        } else {
            0.0
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn zeta_pair_algebra((xi, k, a) in admissible()) {
        let p = make_zeta_pair(&xi, k, a).unwrap();
        let scale = 1.0 + k * k + a * a;
        prop_assert!((cdot(&p.zeta1, &p.zeta1) - k * k).norm() <= 1e-12 * scale);
        prop_assert!((cdot(&p.zeta2, &p.zeta2) - k * k).norm() <= 1e-12 * scale);
        for i in 0..xi.len() {
            prop_assert!((p.zeta1[i] + p.zeta2[i] + xi[i]).norm() <= 1e-12 * scale);
        }
        let im: Vec<f64> = p.zeta1.iter().map(|z| z.im).collect();
        prop_assert!((dot(&im, &im).sqrt() - a).abs() <= 1e-12 * scale);
        prop_assert!(dot(&im, &xi).abs() <= 1e-12 * scale);
        prop_assert_eq!(im[xi.len() - 1], 0.0);
    }

    #[test]
    fn frames_are_orthonormal(xi in prop::collection::vec(-5.0..5.0f64, 3..=6)) {
        prop_assume!(dot(&xi, &xi) > 1e-8);
        let e = make_frame(&xi).unwrap();
        for i in 0..e.len() {
            for j in 0..e.len() {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot(&e[i], &e[j]) - want).abs() < 1e-12);
            }
        }
        prop_assert_eq!(e[e.len() - 1][xi.len() - 1], 1.0);
    }

    #[test]
    fn cross_phases((xi, k, a) in admissible(), x in prop::collection::vec(-1.0..1.0f64, 5)) {
        let n = xi.len();
        let x = &x[..n];
        let mut xs = x.to_vec();
        xs[n - 1] = -xs[n - 1];
        let p = make_zeta_pair(&xi, k, a).unwrap();
        let (plus, minus) = xi_pm(&xi, k, a).unwrap();
        let c = |v: &[f64]| -> Vec<Complex64> { v.iter().map(|&t| t.into()).collect() };
        let lhs = cdot(&p.zeta1, &c(x)) + cdot(&p.zeta2, &c(&xs));
        prop_assert!((lhs + dot(&minus, x)).norm() <= 1e-10 * (1.0 + k + a));
        let lhs = cdot(&p.zeta1, &c(&xs)) + cdot(&p.zeta2, &c(x));
        prop_assert!((lhs + dot(&plus, x)).norm() <= 1e-10 * (1.0 + k + a));
    }

    #[test]
    fn xi_pm_norm_identity((xi, k, a) in admissible()) {
        let (plus, minus) = xi_pm(&xi, k, a).unwrap();
        let n = xi.len();
        let want = dot(&xi[..n - 1], &xi[..n - 1]).sqrt() / dot(&xi, &xi).sqrt() * 2.0 * (k * k + a * a).sqrt();
        for v in [&plus, &minus] {
            prop_assert!((dot(v, v).sqrt() - want).abs() <= 1e-10 * want.max(1.0));
            prop_assert_eq!(&v[..n - 1], &xi[..n - 1]);
        }
        prop_assert_eq!(plus[n - 1], -minus[n - 1]);
    }

    #[test]
    fn alpha_in_open_interval(n in 3usize..16, s in 0.001..0.499f64) {
        let al = alpha(n, s);
        prop_assert!(al > 0.0 && al < 0.5);
    }

    #[test]
    fn schedule_invariants(
        k in 1.0..50.0f64,
        logd in 1.01..30.0f64,
        s in 0.01..0.49f64,
        n in 3usize..6,
        m in 1.0..5.0f64,
        r in 1.0..3.0f64,
        c0 in 0.5..3.0f64,
    ) {
        let delta = (-logd).exp();
        let p = parameter_schedule(k, delta, s, n, m, r, c0).unwrap();
        prop_assert!(p.a >= (c0 * m.sqrt()).max(1.0).max(k) - 1e-12);
        prop_assert!(p.tau > 0.0 && p.tau < 1.0);
        prop_assert!(p.rho >= 1.0);
        let base = k * k + p.a * p.a;
        prop_assert!((p.rho - base.powf(p.alpha)).abs() <= 1e-10 * p.rho);
    }

    #[test]
    fn bound_is_monotone_in_delta(k in 1.0..20.0f64, l1 in 1.01..40.0f64, l2 in 1.01..40.0f64, al in 0.01..0.49f64) {
        let (lo, hi) = if l1 < l2 { (l1, l2) } else { (l2, l1) };
        prop_assume!(hi - lo > 1e-6);
        prop_assert!(bound_value(k, (-hi).exp(), al, 1.0) < bound_value(k, (-lo).exp(), al, 1.0));
    }

    #[test]
    fn young_stability(cx in -0.5..0.5f64, cy in -0.5..0.5f64, w in 0.3..1.0f64, amp in -2.0..2.0f64, tau in 0.05..0.4f64) {
        let f = blob_field([cx, cy], w, amp);
        let g = mollify(&f, tau).unwrap();
        prop_assert!(g.l2_norm() <= f.l2_norm() * (1.0 + 1e-8));
        let mut diff = g.clone();
        diff.data.iter_mut().zip(&f.data).for_each(|(a, b)| *a -= b);
        prop_assert!(diff.l2_norm() <= 2.0 * f.l2_norm() + 1e-300);
        prop_assert!((g.integral() - f.integral()).abs() <= 1e-10 * (1.0 + f.integral().abs()));
    }

    #[test]
    fn sobolev_norm_is_monotone_in_order(cx in -0.5..0.5f64, w in 0.3..1.0f64, s1 in -2.0..3.0f64, s2 in -2.0..3.0f64) {
        let f = blob_field([cx, 0.1], w, 1.0);
        let (lo, hi) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
        prop_assert!(sobolev_norm(&f, lo) <= sobolev_norm(&f, hi) * (1.0 + 1e-12));
    }
}

#[test]
fn mollifier_transform_has_schwartz_decay() {
    let m = Mollifier::new(3);
    for power in [2, 4, 6] {
        assert!(m.decay_sup(power, 50.0, 2000).is_finite());
    }
    // For small N the weighted sup has already levelled off inside the window.
    for power in [2, 4] {
        let inner = m.decay_sup(power, 40.0, 1600);
        let outer = m.decay_sup(power, 50.0, 2000);
        assert!(outer <= inner * (1.0 + 1e-12), "N = {power}: {inner} vs {outer}");
    }
    assert!((m.transform(0.0) - 1.0).abs() < 1e-8);
}
