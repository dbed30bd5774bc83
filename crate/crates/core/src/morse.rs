//! Morse potential V(r) = D[1 − e^{−α(r − r_e)}]² and its s-wave levels.
//!
//! Levels are measured from the dissociation limit so they line up with the
//! shifted Deng–Fan spectrum. Only l = 0 is computed; rotating-Morse levels
//! come from the reference table in [`crate::reference`].

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorsePotential {
    depth: f64,
    alpha: f64,
    r_e: f64,
}

impl MorsePotential {
    pub fn new(depth: f64, alpha: f64, r_e: f64) -> Result<Self> {
        if !(depth > 0.0) {
            return Err(domain("Morse depth must be positive", depth));
        }
        if !(alpha > 0.0) {
            return Err(domain("Morse alpha must be positive", alpha));
        }
        if !(r_e > 0.0) {
            return Err(domain("Morse r_e must be positive", r_e));
        }
        Ok(Self { depth, alpha, r_e })
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

    /// Zero at r_e, D at infinity, finite at r = 0.
    pub fn v(&self, r: f64) -> f64 {
        let x = -(-self.alpha * (r - self.r_e)).exp_m1();
        self.depth * x * x
    }

    /// Number of bound s-wave levels: n + ½ < √(D/(κα²)).
    pub fn level_count(&self, kappa: f64) -> u32 {
        let lambda = (self.depth / (kappa * self.alpha * self.alpha)).sqrt();
        let mut count = (lambda - 0.5).max(0.0).ceil() as u32;
        while count > 0 && count as f64 - 0.5 >= lambda {
            count -= 1;
        }
        count
    }

    /// ħω = 2α√(κD)
    pub fn harmonic_quantum(&self, kappa: f64) -> f64 {
        2.0 * self.alpha * (kappa * self.depth).sqrt()
    }
}

pub fn v_morse(r: f64, p: &MorsePotential) -> f64 {
    p.v(r)
}

/// E_n = −D + ħω(n + ½) − κα²(n + ½)² in eV.
pub fn morse_energy_l0(n: u32, p: &MorsePotential, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(domain("kappa must be positive", kappa));
    }
    if n >= p.level_count(kappa) {
        return Err(Error::Unbound {
            n,
            l: 0,
            eta: (p.depth / (kappa * p.alpha * p.alpha)).sqrt() - (n as f64 + 0.5),
        });
    }
    let v = n as f64 + 0.5;
    Ok(-p.depth + p.harmonic_quantum(kappa) * v - kappa * p.alpha * p.alpha * v * v)
}
