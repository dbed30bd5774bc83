//! Shifted Deng–Fan potential and its closed-form bound states.
//!
//! With the exponential replacement for the centrifugal term,
//! `1/r² ≈ α²[d0 + e^{−αr}/(1 − e^{−αr})²]`, the radial equation in
//! `s = e^{−αr}` takes the Nikiforov–Uvarov form with `c1 = c2 = c3 = 1`, and
//! the levels follow in closed form:
//!
//! ```text
//! δ_l = ½(1 + √((2l + 1)² + 4 D b² / (κ α²)))
//! η   = D b (2 + b) / (2 κ α² (n + δ_l)) − (n + δ_l)/2
//! E   = κ l(l+1) α² d0 − κ α² η²
//! R(r) = N e^{−η α r} (1 − e^{−α r})^δ_l P_n^(2η, 2δ_l − 1)(1 − 2 e^{−α r})
//! ```
//!
//! with κ = ħ²/2μ in eV·Å² and `b = e^{α r_e} − 1`. All gamma-function
//! ratios are assembled in log space; CO reaches Γ arguments above 2000.

use crate::error::{domain, Error, Result};
use crate::nu::{quantization_residual, solve_energy_by_root, NuCoefficients};
use crate::quadrature::{gauss_kronrod, tanh_sinh, QuadResult};
use crate::special::{
    hyp2f1_terminating, jacobi_poly, log_beta, log_factorial, log_gamma, log_pochhammer,
    JacobiParams,
};
use crate::units::{MoleculeParams, PhysicalConstants};

/// Relative tolerance of the normalization quadrature.
pub const NORM_QUAD_TOL: f64 = 1e-9;

/// `b = e^{α r_e} − 1`.
pub fn b_param(alpha: f64, r_e: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(domain("alpha must be positive", alpha));
    }
    if !(r_e > 0.0) {
        return Err(domain("r_e must be positive", r_e));
    }
    Ok((alpha * r_e).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdfPotential {
    depth: f64,
    alpha: f64,
    r_e: f64,
    b: f64,
}

impl SdfPotential {
    pub fn new(depth: f64, alpha: f64, r_e: f64) -> Result<Self> {
        if !(depth > 0.0) {
            return Err(domain("well depth D must be positive", depth));
        }
        let b = b_param(alpha, r_e)?;
        Ok(Self {
            depth,
            alpha,
            r_e,
            b,
        })
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn r_e(&self) -> f64 {
        self.r_e
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// b/(e^{αr} − 1)
    fn ratio(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(domain("r must be positive", r));
        }
        Ok(self.b / (self.alpha * r).exp_m1())
    }

    /// Shifted potential, minimum −D at r_e and zero at infinity.
    pub fn v(&self, r: f64) -> Result<f64> {
        let q = self.ratio(r)?;
        Ok(self.depth * q * (q - 2.0))
    }

    /// Unshifted potential D(1 − b/(e^{αr} − 1))².
    pub fn v_df(&self, r: f64) -> Result<f64> {
        let q = self.ratio(r)?;
        Ok(self.depth * (1.0 - q) * (1.0 - q))
    }
}

pub fn v_sdf(r: f64, p: &SdfPotential) -> Result<f64> {
    p.v(r)
}

pub fn v_df(r: f64, p: &SdfPotential) -> Result<f64> {
    p.v_df(r)
}

/// Exponential stand-in for 1/r²: α²(d0 + 1/(e^{αr}−1) + 1/(e^{αr}−1)²), in Å⁻².
pub fn pekeris_centrifugal(r: f64, alpha: f64, d0: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(domain("r must be positive", r));
    }
    if !(alpha > 0.0) {
        return Err(domain("alpha must be positive", alpha));
    }
    let x = (alpha * r).exp_m1();
    Ok(alpha * alpha * (d0 + (1.0 + x) / (x * x)))
}

/// NU coefficients of the radial equation at trial reduced energy `epsilon`
/// (ε = E/κ, Å⁻²) for reduced depth `d` = D/κ.
pub fn map_to_nu(epsilon: f64, d: f64, b: f64, l: u32, d0: f64, alpha: f64) -> NuCoefficients {
    let a2 = alpha * alpha;
    let ll = (l as f64) * (l as f64 + 1.0);
    NuCoefficients {
        c1: 1.0,
        c2: 1.0,
        c3: 1.0,
        a: (d * b * (2.0 + b) - epsilon) / a2 + ll * d0,
        b: 2.0 * (d * b - epsilon) / a2 + ll * (2.0 * d0 - 1.0),
        c: -epsilon / a2 + ll * d0,
    }
}

/// Energies divided by κ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedQuantities {
    /// ε = E/κ, Å⁻²
    pub epsilon: f64,
    /// d = D/κ, Å⁻²
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub n: u32,
    pub l: u32,
    /// eV
    pub energy: f64,
    pub eta: f64,
    pub delta_l: f64,
    /// Å^{-1/2}
    pub norm: f64,
}

/// Result of checking the Jacobi norm integral identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    /// Quadrature of the left-hand side.
    pub lhs: f64,
    /// Closed-form right-hand side.
    pub rhs: f64,
    pub quadrature: QuadResult,
}

impl IdentityCheck {
    pub fn relative_deviation(&self) -> f64 {
        ((self.lhs - self.rhs) / self.rhs).abs()
    }
}

/// Potential plus the mass-dependent constant κ and the centrifugal constant d0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdfModel {
    pub potential: SdfPotential,
    /// ħ²/2μ in eV·Å²
    pub kappa: f64,
    pub d0: f64,
}

impl SdfModel {
    pub fn new(potential: SdfPotential, kappa: f64, d0: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(domain("kappa must be positive", kappa));
        }
        if !(0.0..=1.0).contains(&d0) {
            return Err(domain("d0 must lie in [0, 1]", d0));
        }
        Ok(Self {
            potential,
            kappa,
            d0,
        })
    }

    pub fn from_molecule(m: &MoleculeParams, constants: &PhysicalConstants) -> Result<Self> {
        let potential = SdfPotential::new(m.dissociation_ev(constants)?, m.alpha, m.r_e)?;
        Self::new(potential, m.kappa(constants)?, constants.d0)
    }

    fn alpha2(&self) -> f64 {
        self.potential.alpha * self.potential.alpha
    }

    /// D/κ
    pub fn reduced_depth(&self) -> f64 {
        self.potential.depth / self.kappa
    }

    pub fn reduced(&self, energy: f64) -> ReducedQuantities {
        ReducedQuantities {
            epsilon: energy / self.kappa,
            d: self.reduced_depth(),
        }
    }

    pub fn delta_l(&self, l: u32) -> f64 {
        let p = &self.potential;
        let two_l1 = 2.0 * l as f64 + 1.0;
        0.5 * (1.0
            + (two_l1 * two_l1 + 4.0 * p.depth * p.b * p.b / (self.kappa * self.alpha2())).sqrt())
    }

    /// Positive exactly for bound states.
    pub fn eta(&self, n: u32, l: u32) -> f64 {
        let p = &self.potential;
        let nd = n as f64 + self.delta_l(l);
        p.depth * p.b * (2.0 + p.b) / (2.0 * self.kappa * self.alpha2() * nd) - 0.5 * nd
    }

    fn bound_eta(&self, n: u32, l: u32) -> Result<f64> {
        let eta = self.eta(n, l);
        if eta > 0.0 {
            Ok(eta)
        } else {
            Err(Error::Unbound { n, l, eta })
        }
    }

    /// Largest bound n at this l, or `None` when not even n = 0 is bound.
    pub fn max_n(&self, l: u32) -> Option<u32> {
        if self.eta(0, l) <= 0.0 {
            return None;
        }
        let p = &self.potential;
        let edge =
            (p.depth * p.b * (2.0 + p.b) / (self.kappa * self.alpha2())).sqrt() - self.delta_l(l);
        let mut n = edge.max(0.0).floor() as u32;
        while n > 0 && self.eta(n, l) <= 0.0 {
            n -= 1;
        }
        while self.eta(n + 1, l) > 0.0 {
            n += 1;
        }
        Some(n)
    }

    /// Closed-form level in eV (negative for bound states).
    pub fn energy(&self, n: u32, l: u32) -> Result<f64> {
        let eta = self.bound_eta(n, l)?;
        let ll = (l as f64) * (l as f64 + 1.0);
        let a2 = self.alpha2();
        Ok(self.kappa * ll * a2 * self.d0 - self.kappa * a2 * eta * eta)
    }

    pub fn nu_coefficients(&self, epsilon: f64, l: u32) -> NuCoefficients {
        let p = &self.potential;
        map_to_nu(epsilon, self.reduced_depth(), p.b, l, self.d0, p.alpha)
    }

    /// ε range searched by [`SdfModel::energy_by_root`]: from −D/κ up to the
    /// value where the coefficient C reaches zero (pulled in by one part in
    /// 10¹² so rounding cannot make C negative).
    pub fn epsilon_bracket(&self, l: u32) -> (f64, f64) {
        let ll = (l as f64) * (l as f64 + 1.0);
        let top = self.alpha2() * ll * self.d0;
        (-self.reduced_depth(), top * (1.0 - 1e-12))
    }

    /// The level obtained by root-finding on the NU quantization residual
    /// rather than from the closed form. eV.
    pub fn energy_by_root(&self, n: u32, l: u32) -> Result<f64> {
        let eps = solve_energy_by_root(n, |e| self.nu_coefficients(e, l), self.epsilon_bracket(l))?;
        Ok(eps * self.kappa)
    }

    pub fn quantization_residual_at(&self, n: u32, l: u32, energy: f64) -> Result<f64> {
        quantization_residual(n, &self.nu_coefficients(energy / self.kappa, l))
    }

    /// ln N_nl from the general-n closed form.
    pub fn log_norm_constant(&self, n: u32, l: u32) -> Result<f64> {
        let eta = self.bound_eta(n, l)?;
        let delta = self.delta_l(l);
        let nf = n as f64;
        let ln_sq = (2.0 * eta * self.potential.alpha).ln()
            + log_factorial(n)
            + (nf + eta + delta).ln()
            + log_gamma(nf + 2.0 * (eta + delta))?
            - (nf + delta).ln()
            - log_gamma(nf + 2.0 * eta + 1.0)?
            - log_gamma(nf + 2.0 * delta)?;
        Ok(0.5 * ln_sq)
    }

    pub fn norm_constant(&self, n: u32, l: u32) -> Result<f64> {
        Ok(self.log_norm_constant(n, l)?.exp())
    }

    /// Ground-state normalization through the beta function,
    /// N_0l = √(α(η + δ)/(δ B(2η, 2δ))).
    pub fn norm_constant_ground(&self, l: u32) -> Result<f64> {
        let eta = self.bound_eta(0, l)?;
        let delta = self.delta_l(l);
        let ln_sq =
            (self.potential.alpha * (eta + delta) / delta).ln() - log_beta(2.0 * eta, 2.0 * delta)?;
        Ok((0.5 * ln_sq).exp())
    }

    pub fn bound_state(&self, n: u32, l: u32) -> Result<BoundState> {
        Ok(BoundState {
            n,
            l,
            energy: self.energy(n, l)?,
            eta: self.eta(n, l),
            delta_l: self.delta_l(l),
            norm: self.norm_constant(n, l)?,
        })
    }

    fn jacobi(&self, n: u32, l: u32) -> Result<(JacobiParams, f64, f64, f64)> {
        let eta = self.bound_eta(n, l)?;
        let delta = self.delta_l(l);
        let params = JacobiParams::new(n, 2.0 * eta, 2.0 * delta - 1.0)?;
        Ok((params, eta, delta, self.log_norm_constant(n, l)?))
    }

    /// R_nl(r) in Å^{-1/2}.
    pub fn radial_wavefunction(&self, n: u32, l: u32, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(domain("r must be positive", r));
        }
        let (params, eta, delta, ln_norm) = self.jacobi(n, l)?;
        let ar = self.potential.alpha * r;
        let s = (-ar).exp();
        let poly = jacobi_poly(params, 1.0 - 2.0 * s);
        let ln_env = ln_norm - eta * ar + delta * (-(-ar).exp_m1()).ln();
        Ok(ln_env.exp() * poly)
    }

    /// R_nl(r) through the terminating ₂F₁ form with prefactor (2η+1)_n/n!.
    pub fn radial_wavefunction_hypergeometric(&self, n: u32, l: u32, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(domain("r must be positive", r));
        }
        let eta = self.bound_eta(n, l)?;
        let delta = self.delta_l(l);
        let ln_norm = self.log_norm_constant(n, l)?;
        let nf = n as f64;
        let ar = self.potential.alpha * r;
        let s = (-ar).exp();
        let f = hyp2f1_terminating(n, nf + 2.0 * eta + 2.0 * delta, 1.0 + 2.0 * eta, s)?;
        let ln_env = ln_norm + log_pochhammer(2.0 * eta + 1.0, n)? - log_factorial(n) - eta * ar
            + delta * (-(-ar).exp_m1()).ln();
        Ok(ln_env.exp() * f)
    }

    /// ∫₀^∞ |R_nl|² dr computed as ∫₀¹ |R(s)|² ds/(αs).
    pub fn normalization_integral(&self, n: u32, l: u32) -> Result<QuadResult> {
        let (params, eta, delta, ln_norm) = self.jacobi(n, l)?;
        let alpha = self.potential.alpha;
        let integrand = |s: f64| {
            if s <= 0.0 || s >= 1.0 {
                return 0.0;
            }
            let poly = jacobi_poly(params, 1.0 - 2.0 * s);
            let ln = 2.0 * (ln_norm + eta * s.ln() + delta * (-s).ln_1p()) - s.ln() - alpha.ln();
            ln.exp() * poly * poly
        };
        gauss_kronrod(integrand, 0.0, 1.0, NORM_QUAD_TOL)
    }

    /// Interior sign changes of R_nl on `points` uniform samples of (0, r_max).
    pub fn node_count(&self, n: u32, l: u32, r_max: f64, points: usize) -> Result<u32> {
        let mut last = 0.0f64;
        let mut nodes = 0;
        for i in 1..points {
            let r = r_max * i as f64 / points as f64;
            let v = self.radial_wavefunction(n, l, r)?;
            if v != 0.0 {
                if last != 0.0 && v.signum() != last.signum() {
                    nodes += 1;
                }
                last = v;
            }
        }
        Ok(nodes)
    }
}

fn signed_log_gamma(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        Ok((log_gamma(x)?, 1.0))
    } else if x > -1.0 && x != 0.0 {
        // Γ(x) = Γ(x + 1)/x
        Ok((log_gamma(x + 1.0)? - x.abs().ln(), -1.0))
    } else {
        Err(domain("gamma argument outside (-1, inf) or at a pole", x))
    }
}

/// Checks
///
/// ```text
/// ∫₀¹ s^{2a−1}(1−s)^{2(b+1)} [₂F₁(−n, n+2(a+b+1); 2a+1; s)]² ds
///   = (n+b+1) n! Γ(n+2b+2) Γ(2a) Γ(2a+1) / ((n+a+b+1) Γ(n+2a+1) Γ(n+2(a+b+1)))
/// ```
///
/// by tanh-sinh quadrature of the left side. The integral only converges for
/// a > 0 and b > −3/2.
pub fn jacobi_norm_identity(a: f64, b: f64, n: u32) -> Result<IdentityCheck> {
    if !(a > 0.0) {
        return Err(domain("identity needs a > 0 for a convergent integral", a));
    }
    if !(b > -1.5) {
        return Err(domain("identity needs b > -3/2", b));
    }
    let nf = n as f64;
    let beta = nf + 2.0 * (a + b + 1.0);
    let gamma = 2.0 * a + 1.0;
    // (s, 1 − s) passed separately so both endpoints resolve
    let integrand = |s: f64, t: f64| {
        let f = hyp2f1_terminating(n, beta, gamma, s).unwrap_or(f64::NAN);
        ((2.0 * a - 1.0) * s.ln() + 2.0 * (b + 1.0) * t.ln()).exp() * f * f
    };
    let left = tanh_sinh(|s| integrand(s, 1.0 - s), 0.0, 0.5, 1e-12)?;
    let right = tanh_sinh(|t| integrand(1.0 - t, t), 0.0, 0.5, 1e-12)?;
    let quadrature = QuadResult {
        value: left.value + right.value,
        error_estimate: left.error_estimate + right.error_estimate,
        evaluations: left.evaluations + right.evaluations,
    };

    let mut ln_rhs = 0.0;
    let mut sign = 1.0;
    let mut factor = |x: f64, power: f64| -> Result<()> {
        if x == 0.0 {
            return Err(domain("identity right-hand side is singular", x));
        }
        ln_rhs += power * x.abs().ln();
        if x < 0.0 {
            sign = -sign;
        }
        Ok(())
    };
    factor(nf + b + 1.0, 1.0)?;
    factor(nf + a + b + 1.0, -1.0)?;
    for (x, power) in [
        (nf + 2.0 * b + 2.0, 1.0),
        (2.0 * a, 1.0),
        (2.0 * a + 1.0, 1.0),
        (nf + 2.0 * a + 1.0, -1.0),
        (nf + 2.0 * (a + b + 1.0), -1.0),
    ] {
        let (lg, sg) = signed_log_gamma(x)?;
        ln_rhs += power * lg;
        sign *= sg;
    }
    ln_rhs += log_factorial(n);
    Ok(IdentityCheck {
        lhs: quadrature.value,
        rhs: sign * ln_rhs.exp(),
        quadrature,
    })
}
