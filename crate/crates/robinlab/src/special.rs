//! Bessel functions, their zeros, and a few scalar helpers.
//!
//! Integer-order `J_m` uses Miller's backward recurrence normalised by
//! `J_0 + 2 Σ J_2k = 1`, which is accurate for every order at once.
//! Real-order `J_ν` (needed for half-integer orders) uses the power series.
//! Ratios `I_{m+1}/I_m` come from the continued fraction, so no overflow.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `Γ(k/2)` for a positive integer `k`, exact up to rounding.
pub fn gamma_half(k: u32) -> f64 {
    assert!(k > 0, "gamma_half needs k >= 1");
    let (mut g, mut x) = if k % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = k as f64 / 2.0;
    while x < target - 1e-12 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: u32) -> f64 {
    PI.powf(n as f64 / 2.0) / gamma_half(n + 2)
}

/// `J_0(x), …, J_nmax(x)` for `x >= 0`.
pub fn bessel_j_all(x: f64, nmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    assert!(x > 0.0, "bessel_j_all expects x >= 0");
    let top = (nmax as f64).max(x);
    let mut start = (top + 30.0 + (60.0 * top).sqrt()) as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let mut jp1 = 0.0_f64;
    let mut j = 1e-30_f64;
    let mut norm = 0.0_f64;
    let two_over_x = 2.0 / x;
    for k in (1..=start).rev() {
        let jm1 = k as f64 * two_over_x * j - jp1;
        jp1 = j;
        j = jm1;
        // j now holds the unnormalised J_{k-1}
        let idx = k - 1;
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * j;
        }
        if idx <= nmax {
            out[idx] = j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    norm += j;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// `J_m(x)` for integer order.
pub fn bessel_j(m: usize, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(m, -x);
        return if m % 2 == 0 { v } else { -v };
    }
    bessel_j_all(x, m)[m]
}

/// `(J_m(x), J_m'(x))` for `x >= 0`.
pub fn bessel_j_and_deriv(m: usize, x: f64) -> (f64, f64) {
    let all = bessel_j_all(x, m + 1);
    let d = if m == 0 {
        -all[1]
    } else {
        0.5 * (all[m - 1] - all[m + 1])
    };
    (all[m], d)
}

/// `J_ν(x)` for real `ν >= 0` by the power series; fine for moderate `x`.
pub fn bessel_j_real(nu: f64, x: f64) -> f64 {
    assert!(nu >= 0.0 && x >= 0.0);
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let two_nu = (2.0 * nu).round();
    let lead = if (two_nu - 2.0 * nu).abs() < 1e-12 {
        // Γ(ν+1) = Γ((2ν+2)/2) exactly for half-integer ν.
        half.powf(nu) / gamma_half(two_nu as u32 + 2)
    } else {
        half.powf(nu) / lanczos_gamma(nu + 1.0)
    };
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    for k in 1..400 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && k > 5 {
            break;
        }
    }
    sum
}

/// Lanczos approximation of `Γ(x)` for `x > 0` (g=7, n=9).
pub fn lanczos_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * lanczos_gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// `I_{m+1}(x) / I_m(x)` for `x > 0` by the modified Lentz algorithm.
pub fn bessel_i_ratio(m: usize, x: f64) -> f64 {
    assert!(x > 0.0);
    let tiny = 1e-300;
    let inv = 2.0 / x;
    let mut f = tiny;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..100_000 {
        let b = (m + k) as f64 * inv;
        d += b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + 1.0 / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

/// `x I_m'(x) / I_m(x) = m + x I_{m+1}(x)/I_m(x)`.
pub fn bessel_i_log_deriv(m: usize, x: f64) -> f64 {
    if x == 0.0 {
        return m as f64;
    }
    m as f64 + x * bessel_i_ratio(m, x)
}

/// Bisection on a sign change; returns the midpoint of the final bracket.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, what: &str) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.signum() != fb.signum()) || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Bracket {
            lo,
            hi,
            what: what.to_string(),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Smallest positive zero of `J_ν`, `ν >= 0`.
pub fn first_bessel_zero(nu: f64) -> Result<f64> {
    let f = |x: f64| bessel_j_real(nu, x);
    let step = 0.05;
    let mut a = nu.max(step);
    let mut fa = f(a);
    for _ in 0..10_000 {
        let b = a + step;
        let fb = f(b);
        if fa.signum() != fb.signum() {
            return bisect(f, a, b, "first zero of J_nu");
        }
        a = b;
        fa = fb;
    }
    Err(Error::Bracket {
        lo: nu,
        hi: a,
        what: "first zero of J_nu not found".into(),
    })
}

/// The `p`-th positive zero of `J_m` (1-based `p`), found by scanning.
pub fn bessel_j_zero(m: usize, p: usize) -> Result<f64> {
    assert!(p >= 1);
    let f = |x: f64| bessel_j(m, x);
    let step = 0.05;
    let mut a = (m as f64).max(step);
    let mut fa = f(a);
    let mut found = 0;
    for _ in 0..1_000_000 {
        let b = a + step;
        let fb = f(b);
        if fa.signum() != fb.signum() {
            found += 1;
            if found == p {
                return bisect(f, a, b, "zero of J_m");
            }
        }
        a = b;
        fa = fb;
    }
    Err(Error::Bracket {
        lo: m as f64,
        hi: a,
        what: "zero of J_m not found".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_values() {
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half(2), 1.0);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-14);
        assert_eq!(gamma_half(8), 6.0);
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn miller_matches_series() {
        for &x in &[0.01, 0.5, 1.0, 3.7, 7.0, 10.0] {
            let all = bessel_j_all(x, 12);
            for (m, v) in all.iter().enumerate() {
                let s = bessel_j_real(m as f64, x);
                assert!((v - s).abs() < 1e-12, "m={m} x={x}: {v} vs {s}");
            }
        }
    }

    #[test]
    fn miller_large_argument() {
        // Reference values of J_0, J_1 at x = 100 and J_50(60).
        assert!((bessel_j(0, 100.0) - 0.019_985_850_304_223_122).abs() < 1e-13);
        assert!((bessel_j(1, 100.0) - (-0.077_145_352_014_112_16)).abs() < 1e-13);
        // Wronskian-type identity J_{m-1} + J_{m+1} = (2m/x) J_m.
        let all = bessel_j_all(75.0, 120);
        for m in 1..119 {
            let lhs = all[m - 1] + all[m + 1];
            let rhs = 2.0 * m as f64 / 75.0 * all[m];
            assert!((lhs - rhs).abs() < 1e-13);
        }
    }

    #[test]
    fn i_ratio_against_series() {
        // I_m by series for moderate x.
        let i = |m: usize, x: f64| {
            let mut term = (0.5 * x).powi(m as i32) / (1..=m).map(|k| k as f64).product::<f64>();
            let mut s = term;
            for k in 1..200 {
                term *= 0.25 * x * x / (k as f64 * (k + m) as f64);
                s += term;
            }
            s
        };
        for &x in &[0.1, 1.0, 2.5, 8.0] {
            for m in 0..5 {
                let r = bessel_i_ratio(m, x);
                assert!((r - i(m + 1, x) / i(m, x)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn known_zeros() {
        assert!((first_bessel_zero(0.0).unwrap() - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((first_bessel_zero(0.5).unwrap() - PI).abs() < 1e-12);
        assert!((bessel_j_zero(2, 1).unwrap() - 5.135_622_301_840_683).abs() < 1e-12);
        assert!((bessel_j_zero(0, 3).unwrap() - 8.653_727_912_911_013).abs() < 1e-12);
    }

    #[test]
    fn lanczos_gamma_integers() {
        assert!((lanczos_gamma(5.0) - 24.0).abs() < 1e-10);
        assert!((lanczos_gamma(0.5) - PI.sqrt()).abs() < 1e-12);
    }
}
