//! Parametric Nikiforov–Uvarov machinery.
//!
//! An equation of the form
//!
//! ```text
//! ψ'' + (c1 − c2 s)/(s(1 − c3 s)) ψ' + (−A s² + B s − C)/(s²(1 − c3 s)²) ψ = 0
//! ```
//!
//! is characterised by six numbers. From them follow ten derived constants,
//! an algebraic quantization condition, and polynomial solutions
//! `s^c12 (1 − c3 s)^c13 P_n^(c10, c11)(1 − 2 c3 s)`. Nothing here knows about a
//! particular potential; [`crate::sdf`] supplies the mapping.

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuConstants {
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    pub c11: f64,
    pub c12: f64,
    pub c13: f64,
}

impl NuConstants {
    /// Whether the constants describe a normalizable polynomial solution.
    pub fn is_normalizable(&self) -> bool {
        self.c10 > -1.0 && self.c11 > -1.0 && self.c12 > 0.0 && self.c13 > 0.0
    }
}

pub fn derive_constants(c: &NuCoefficients) -> Result<NuConstants> {
    if c.c3 == 0.0 {
        return Err(Error::UnsupportedBranch("c3 = 0"));
    }
    let c4 = 0.5 * (1.0 - c.c1);
    let c5 = 0.5 * (c.c2 - 2.0 * c.c3);
    let c6 = c5 * c5 + c.a;
    let c7 = 2.0 * c4 * c5 - c.b;
    let c8 = c4 * c4 + c.c;
    let c9 = c.c3 * (c7 + c.c3 * c8) + c6;
    if !(c8 >= 0.0) {
        return Err(domain("c8 must be non-negative", c8));
    }
    if !(c9 >= 0.0) {
        return Err(domain("c9 must be non-negative", c9));
    }
    let (s8, s9) = (c8.sqrt(), c9.sqrt());
    Ok(NuConstants {
        c4,
        c5,
        c6,
        c7,
        c8,
        c9,
        c10: c.c1 + 2.0 * c4 + 2.0 * s8 - 1.0,
        c11: 1.0 - c.c1 - 2.0 * c4 + 2.0 / c.c3 * s9,
        c12: c4 + s8,
        c13: -c4 + (s9 - c5) / c.c3,
    })
}

/// Left-hand side of the NU energy equation; zero exactly at an eigenvalue.
pub fn quantization_residual(n: u32, c: &NuCoefficients) -> Result<f64> {
    let k = derive_constants(c)?;
    let n = n as f64;
    let (s8, s9) = (k.c8.sqrt(), k.c9.sqrt());
    Ok(c.c2 * n - (2.0 * n + 1.0) * k.c5
        + (2.0 * n + 1.0) * (s9 + c.c3 * s8)
        + n * (n - 1.0) * c.c3
        + k.c7
        + 2.0 * c.c3 * k.c8
        + 2.0 * (k.c8 * k.c9).sqrt())
}

/// Minimum number of bisection steps taken by [`solve_energy_by_root`].
pub const MIN_BISECTIONS: u32 = 60;
const MAX_BISECTIONS: u32 = 400;

/// Finds ε in `bracket` where the quantization residual for state `n`
/// vanishes, treating `mapping` as a black box.
pub fn solve_energy_by_root<M>(n: u32, mapping: M, bracket: (f64, f64)) -> Result<f64>
where
    M: Fn(f64) -> NuCoefficients,
{
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::Bracket { lo, hi });
    }
    let residual = |eps: f64| -> Result<f64> {
        let r = quantization_residual(n, &mapping(eps))?;
        if r.is_finite() {
            Ok(r)
        } else {
            Err(domain("residual is not finite", eps))
        }
    };
    let mut f_lo = residual(lo)?;
    let f_hi = residual(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    for iteration in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let width = hi - lo;
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        if iteration >= MIN_BISECTIONS && width <= 1e-14 * scale || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = residual(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Shape parameters of the polynomial solution:
/// `s^exp_s (1 − c3 s)^exp_1ms P_n^(jacobi_a, jacobi_b)(1 − 2 c3 s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionForm {
    pub n: u32,
    pub exp_s: f64,
    pub exp_1ms: f64,
    pub jacobi_a: f64,
    pub jacobi_b: f64,
}

pub fn wavefunction_form(c: &NuCoefficients, n: u32) -> Result<WavefunctionForm> {
    let k = derive_constants(c)?;
    if !(k.c12 > 0.0 && k.c13 > 0.0) {
        return Err(Error::NonNormalizable {
            c12: k.c12,
            c13: k.c13,
        });
    }
    Ok(WavefunctionForm {
        n,
        exp_s: k.c12,
        exp_1ms: k.c13,
        jacobi_a: k.c10,
        jacobi_b: k.c11,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{jacobi_poly, JacobiParams};
    use proptest::prelude::*;

    fn unit(a: f64, b: f64, c: f64) -> NuCoefficients {
        NuCoefficients {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            a,
            b,
            c,
        }
    }

    #[test]
    fn all_zero_couplings() {
        let k = derive_constants(&unit(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(
            (k.c4, k.c5, k.c6, k.c7, k.c8, k.c9),
            (0.0, -0.5, 0.25, 0.0, 0.0, 0.25)
        );
        assert_eq!(k.c13, 1.0);
        assert_eq!(quantization_residual(0, &unit(0.0, 0.0, 0.0)).unwrap(), 1.0);
    }

    #[test]
    fn c3_zero_and_negative_radicands() {
        let mut c = unit(1.0, 1.0, 1.0);
        c.c3 = 0.0;
        assert!(matches!(
            derive_constants(&c),
            Err(Error::UnsupportedBranch(_))
        ));
        assert!(matches!(
            derive_constants(&unit(0.0, 0.0, -1.0)),
            Err(Error::Domain { .. })
        ));
        // 4(A − B + C) + 1 < 0
        assert!(matches!(
            derive_constants(&unit(0.0, 1.0, 0.0)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn wavefunction_form_simple() {
        let w = wavefunction_form(&unit(0.0, 0.0, 0.25), 0).unwrap();
        assert_eq!(w.exp_s, 0.5);
        assert!(matches!(
            wavefunction_form(&unit(0.0, 0.0, 0.0), 0),
            Err(Error::NonNormalizable { .. })
        ));
    }

    #[test]
    fn degenerate_bracket() {
        let r = solve_energy_by_root(0, |e| unit(1.0, 1.0, -e), (-1.0, -1.0));
        assert!(matches!(r, Err(Error::Bracket { .. })));
        let r = solve_energy_by_root(0, |e| unit(1.0, 1.0, -e), (0.0, -1.0));
        assert!(matches!(r, Err(Error::Bracket { .. })));
    }

    // A − B + C = k for every ε and C = −ε, so c13 is fixed and c12 = √(−ε).
    fn toy(eps: f64, k: f64, beta0: f64) -> NuCoefficients {
        unit(k + beta0 - eps, beta0 - 2.0 * eps, -eps)
    }

    #[test]
    fn root_of_toy_problem_solves_the_residual() {
        let eps = solve_energy_by_root(1, |e| toy(e, 6.0, 40.0), (-50.0, 0.0)).unwrap();
        let r = quantization_residual(1, &toy(eps, 6.0, 40.0)).unwrap();
        assert!(r.abs() < 1e-12 * 50.0, "{r}");
        assert!(eps < 0.0);
    }

    #[test]
    fn no_sign_change_is_bracket_error() {
        // with a weak coupling the residual stays positive on the whole bracket
        let r = solve_energy_by_root(0, |e| toy(e, 20.0, 0.01), (-10.0, 0.0));
        assert!(matches!(r, Err(Error::Bracket { .. })));
    }

    /// Second-order central-difference residual of the NU equation.
    fn ode_residual(c: &NuCoefficients, psi: &dyn Fn(f64) -> f64, s: f64, h: f64) -> f64 {
        let d1 = (psi(s + h) - psi(s - h)) / (2.0 * h);
        let d2 = (psi(s + h) - 2.0 * psi(s) + psi(s - h)) / (h * h);
        let sigma = s * (1.0 - c.c3 * s);
        d2 + (c.c1 - c.c2 * s) / sigma * d1
            + (-c.a * s * s + c.b * s - c.c) / (sigma * sigma) * psi(s)
    }

    #[test]
    fn polynomial_solution_satisfies_the_equation() {
        for n in 0..=3u32 {
            let eps = solve_energy_by_root(n, |e| toy(e, 20.0, 60.0), (-200.0, 0.0)).unwrap();
            let c = toy(eps, 20.0, 60.0);
            let w = wavefunction_form(&c, n).unwrap();
            let jp = JacobiParams::new(n, w.jacobi_a, w.jacobi_b).unwrap();
            let psi = move |s: f64| {
                s.powf(w.exp_s) * (1.0 - s).powf(w.exp_1ms) * jacobi_poly(jp, 1.0 - 2.0 * s)
            };
            let h = 1e-4;
            let mut worst: f64 = 0.0;
            let peak = (1..200)
                .map(|i| psi(i as f64 / 200.0).abs())
                .fold(0.0, f64::max);
            for i in 1..=200 {
                let s = i as f64 / 201.0;
                worst = worst.max((ode_residual(&c, &psi, s, h) * h * h / peak).abs());
            }
            assert!(worst < 1e-6, "n={n}: {worst}");
            // off-eigenvalue the same construction fails
            let c_off = toy(eps * 1.1, 20.0, 60.0);
            let w = wavefunction_form(&c_off, n).unwrap();
            let jp = JacobiParams::new(n, w.jacobi_a, w.jacobi_b).unwrap();
            let psi_off = move |s: f64| {
                s.powf(w.exp_s) * (1.0 - s).powf(w.exp_1ms) * jacobi_poly(jp, 1.0 - 2.0 * s)
            };
            let s = 0.5;
            let r_off = (ode_residual(&c_off, &psi_off, s, h) / psi_off(s)).abs();
            assert!(r_off > 1e-2, "n={n}: {r_off}");
        }
    }

    proptest! {
        #[test]
        fn unit_coefficients_match_closed_table(a in -5.0..50.0f64, b in -5.0..50.0f64, c in 0.0..50.0f64) {
            let disc = 4.0 * (a - b + c) + 1.0;
            prop_assume!(disc >= 0.0);
            let k = derive_constants(&unit(a, b, c)).unwrap();
            let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * y.abs().max(1.0);
            prop_assert_eq!(k.c4, 0.0);
            prop_assert_eq!(k.c5, -0.5);
            prop_assert!(close(k.c6, a + 0.25));
            prop_assert!(close(k.c7, -b));
            prop_assert_eq!(k.c8, c);
            prop_assert!(close(k.c9, 0.25 * disc));
            prop_assert!(close(k.c10, 2.0 * c.sqrt()));
            prop_assert!(close(k.c11, disc.sqrt()));
            prop_assert!(close(k.c12, c.sqrt()));
            prop_assert!(close(k.c13, 0.5 * (1.0 + disc.sqrt())));
        }
    }
}
