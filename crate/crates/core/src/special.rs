//! Closed-form transforms used by the analytic potentials and mollifier checks.

use std::f64::consts::PI;

/// `∫_{-1}^{1} (1 − t²)^m e^{-iωt} dt`, which is real and even in `ω`.
pub fn poly_bump_transform(m: u32, omega: f64) -> f64 {
    let w = omega.abs();
    if w <= m as f64 + 6.0 {
        // Σ_k (−1)^k ω^{2k}/(2k)! · B(k + 1/2, m + 1)
        let mut moment: f64 = (1..=m).map(|j| 2.0 * j as f64 / (2.0 * j as f64 + 1.0)).product::<f64>() * 2.0;
        let mut term = moment;
        let mut sum = term;
        let mf = m as f64;
        for k in 0..200 {
            let kf = k as f64;
            let next_moment = moment * (kf + 0.5) / (kf + mf + 1.5);
            term *= -w * w / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0)) * (next_moment / moment);
            moment = next_moment;
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        sum
    } else {
        // m! 2^{m+1} j_m(ω) / ω^m, upward recurrence is stable for ω > m
        let jm = spherical_bessel_j(m, w);
        let fact: f64 = (1..=m).map(|j| j as f64).product();
        fact * 2f64.powi(m as i32 + 1) * jm / w.powi(m as i32)
    }
}

/// Spherical Bessel function `j_m(x)` for `x > m` by upward recurrence.
pub fn spherical_bessel_j(m: u32, x: f64) -> f64 {
    let j0 = x.sin() / x;
    if m == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = x.sin() / (x * x) - x.cos() / x;
    for l in 1..m {
        let next = (2 * l + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `F(1_{|x|<1})(ξ)` in three dimensions as a function of `ρ = |ξ|`.
pub fn unit_ball_transform_3d(rho: f64) -> f64 {
    let r = rho.abs();
    if r < 0.5 {
        // Σ_{k≥1} (−1)^{k+1} 2k ρ^{2k−2} / (2k+1)!
        let mut sum = 0.0;
        let mut pow = 1.0;
        let mut fact = 6.0;
        for k in 1..12 {
            let kf = k as f64;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sum += sign * 2.0 * kf * pow / fact;
            pow *= r * r;
            fact *= (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
        }
        4.0 * PI * sum
    } else {
        4.0 * PI * (r.sin() - r * r.cos()) / (r * r * r)
    }
}

/// `∫_lo^hi e^{-iωt} dt`.
pub fn interval_transform(lo: f64, hi: f64, omega: f64) -> num_complex::Complex64 {
    use num_complex::Complex64;
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let x = omega * half;
    let sinc = if x.abs() < 1e-6 { 1.0 - x * x / 6.0 } else { x.sin() / x };
    Complex64::from_polar(2.0 * half * sinc, -omega * mid)
}

/// `∫_lo^hi t e^{-iωt} dt`.
pub fn interval_moment_transform(lo: f64, hi: f64, omega: f64) -> num_complex::Complex64 {
    use num_complex::Complex64;
    let scale = lo.abs().max(hi.abs()).max(1e-300);
    if (omega * scale).abs() < 1e-3 {
        // expand e^{-iωt} to third order
        let m = |p: i32| (hi.powi(p) - lo.powi(p)) / p as f64;
        let w = omega;
        return Complex64::new(m(2) - w * w * m(4) / 2.0, -w * m(3) + w * w * w * m(5) / 6.0);
    }
    let i = Complex64::i();
    let anti = |t: f64| Complex64::from_polar(1.0, -omega * t) * (i * t / omega + 1.0 / (omega * omega));
    anti(hi) - anti(lo)
}
