//! Log-gamma, log-beta, terminating ₂F₁ and Jacobi polynomials.
//!
//! Gamma ratios in the normalization constants reach arguments of a few
//! hundred, so callers combine these in log space and exponentiate last.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Arguments below this are shifted upward before the asymptotic series is used.
const STIRLING_THRESHOLD: f64 = 15.0;

/// B₂ₖ / (2k(2k−1)) for k = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Horner in 1/x² for the correction series.
    let series = STIRLING_COEFFS
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * inv2 + c)
        * inv;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("log_gamma needs a finite positive argument", x));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_THRESHOLD {
        product *= shifted;
        shifted += 1.0;
    }
    Ok(stirling(shifted) - product.ln())
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(domain("log_beta needs a > 0", a));
    }
    if !(b > 0.0) {
        return Err(domain("log_beta needs b > 0", b));
    }
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// ln n!
pub fn log_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// ln of the rising factorial (a)ₙ = a(a+1)…(a+n−1), for a > 0.
pub fn log_pochhammer(a: f64, n: u32) -> Result<f64> {
    if !(a > 0.0) {
        return Err(domain("log_pochhammer needs a > 0", a));
    }
    Ok((0..n).map(|k| (a + k as f64).ln()).sum())
}

/// ₂F₁(−n, β; γ; z) as the finite sum of its n+1 terms.
pub fn hyp2f1_terminating(n: u32, beta: f64, gamma: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let denom = (gamma + kf) * (kf + 1.0);
        if gamma + kf == 0.0 {
            return Err(domain(
                "hypergeometric gamma hits a non-positive integer",
                gamma,
            ));
        }
        term *= (kf - n as f64) * (beta + kf) / denom * z;
        sum += term;
    }
    Ok(sum)
}

/// Degree and parameters of a Jacobi polynomial P_n^{(a,b)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    n: u32,
    a: f64,
    b: f64,
}

impl JacobiParams {
    pub fn new(n: u32, a: f64, b: f64) -> Result<Self> {
        if !(a > -1.0) {
            return Err(domain("Jacobi parameter a must exceed -1", a));
        }
        if !(b > -1.0) {
            return Err(domain("Jacobi parameter b must exceed -1", b));
        }
        Ok(Self { n, a, b })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// P_n^{(a,b)}(x) by the three-term recurrence in n.
pub fn jacobi_poly(p: JacobiParams, x: f64) -> f64 {
    let JacobiParams { n, a, b } = p;
    let p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    match n {
        0 => 1.0,
        1 => p1,
        _ => {
            let (mut prev, mut cur) = (1.0, p1);
            for k in 1..n {
                let k = k as f64;
                let s = 2.0 * k + a + b;
                let c0 = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
                let c1 = (s + 1.0) * ((s + 2.0) * s * x + a * a - b * b);
                let c2 = 2.0 * (k + a) * (k + b) * (s + 2.0);
                let next = (c1 * cur - c2 * prev) / c0;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_kronrod;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn log_gamma_known_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!((log_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - 0.5723649429247001).abs() < 1e-14);
        // 40-digit reference value
        assert!(rel(log_gamma(120.3).unwrap(), 454.4602682773518342716) < 1e-12);
        assert!((log_gamma(10.0).unwrap() - 362880f64.ln()).abs() < 1e-13);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_recurrence() {
        let mut x = 0.013;
        while x < 300.0 {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "x={x}");
            x *= 1.37;
        }
    }

    #[test]
    fn log_gamma_is_convex() {
        let h = 1e-3;
        let mut x = 0.05;
        while x < 200.0 {
            let d2 =
                log_gamma(x + h).unwrap() - 2.0 * log_gamma(x).unwrap() + log_gamma(x - h).unwrap();
            assert!(d2 >= -1e-12, "x={x} d2={d2}");
            x *= 1.5;
        }
    }

    #[test]
    fn log_beta_values() {
        assert!(log_beta(1.0, 1.0).unwrap().abs() < 1e-15);
        assert_eq!(log_beta(3.7, 2.2).unwrap(), log_beta(2.2, 3.7).unwrap());
        let lb = log_beta(3.7, 2.2).unwrap();
        assert!((lb - (-3.092772312037894760)).abs() < 1e-12);
        let quad = gauss_kronrod(|t| t.powf(2.7) * (1.0 - t).powf(1.2), 0.0, 1.0, 1e-13)
            .unwrap()
            .value;
        assert!(rel(lb.exp(), quad) < 1e-10);
        assert!(log_beta(0.0, 1.0).is_err());
        assert!(log_beta(1.0, -1.0).is_err());
    }

    #[test]
    fn hyp2f1_small_cases() {
        assert_eq!(hyp2f1_terminating(0, 3.3, 0.7, 0.9).unwrap(), 1.0);
        let (beta, gamma, z) = (2.5, 1.5, 0.4);
        let v = hyp2f1_terminating(1, beta, gamma, z).unwrap();
        assert!((v - (1.0 - beta * z / gamma)).abs() < 1e-15);
        // exact rational value of the four-term sum
        let v = hyp2f1_terminating(3, 5.5, 2.5, 0.3).unwrap();
        assert!(rel(v, -17.0 / 280.0) < 1e-13);
        assert!(hyp2f1_terminating(3, 1.0, -1.0, 0.5).is_err());
        // γ = −5 is only reached beyond the last term when n = 3
        assert!(hyp2f1_terminating(3, 1.0, -5.0, 0.5).is_ok());
    }

    #[test]
    fn jacobi_low_degrees() {
        for &(a, b, x) in &[(0.3, 1.7, 0.2), (-0.5, 4.0, -0.9), (2.0, 2.0, 1.0)] {
            let p0 = jacobi_poly(JacobiParams::new(0, a, b).unwrap(), x);
            assert_eq!(p0, 1.0);
            let p1 = jacobi_poly(JacobiParams::new(1, a, b).unwrap(), x);
            assert!((p1 - ((a - b) / 2.0 + (a + b + 2.0) * x / 2.0)).abs() < 1e-15);
        }
        // Legendre special case
        let p = JacobiParams::new(3, 0.0, 0.0).unwrap();
        let x: f64 = 0.37;
        assert!((jacobi_poly(p, x) - 0.5 * (5.0 * x.powi(3) - 3.0 * x)).abs() < 1e-15);
        assert!(JacobiParams::new(2, -1.0, 0.0).is_err());
        assert!(JacobiParams::new(2, 0.0, -1.5).is_err());
    }

    fn jacobi_via_hyp(n: u32, a: f64, b: f64, x: f64) -> f64 {
        let s = 0.5 * (1.0 - x);
        let pref = (log_pochhammer(a + 1.0, n).unwrap() - log_factorial(n)).exp();
        pref * hyp2f1_terminating(n, 1.0 + a + b + n as f64, a + 1.0, s).unwrap()
    }

    #[test]
    fn jacobi_recurrence_matches_hypergeometric_form() {
        let v = jacobi_poly(JacobiParams::new(4, 1.3, 0.7).unwrap(), 0.25);
        let w = jacobi_via_hyp(4, 1.3, 0.7, 0.25);
        assert!(rel(v, w) < 1e-12);
    }

    #[test]
    fn jacobi_orthogonality() {
        for &(a, b) in &[(0.3, 1.7), (1.7, 0.3), (4.0, 4.0)] {
            for m in 0..=5u32 {
                for n in 0..m {
                    let pm = JacobiParams::new(m, a, b).unwrap();
                    let pn = JacobiParams::new(n, a, b).unwrap();
                    let f = |x: f64| {
                        (1.0 - x).powf(a)
                            * (1.0 + x).powf(b)
                            * jacobi_poly(pm, x)
                            * jacobi_poly(pn, x)
                    };
                    let v = gauss_kronrod(f, -1.0, 1.0, 1e-12).unwrap().value;
                    assert!(v.abs() < 1e-9, "a={a} b={b} m={m} n={n}: {v}");
                }
            }
        }
    }
}
