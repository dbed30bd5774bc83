//! Physical constants, unit conversions and the molecule parameter database.
//!
//! Everything downstream works in eV and Å. Wavenumbers and atomic mass
//! units are converted once, here, when a [`MoleculeParams`] record is turned
//! into model inputs.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Default database shipped with the crate.
pub const DEFAULT_MOLECULES_TOML: &str = include_str!("../data/molecules.toml");

/// Relative tolerance between an explicit `D_ev` and the converted `D_cm1`.
pub const OVERRIDE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// ħc in eV·Å.
    pub hbar_c: f64,
    /// Atomic mass unit rest energy in eV.
    pub amu_c2: f64,
    /// Constant term of the exponential centrifugal approximation.
    pub d0: f64,
    /// eV per cm⁻¹ used by [`cm1_to_ev`].
    ///
    /// The default 1.23985e-4 is the factor that maps 38266 cm⁻¹ onto the
    /// reference H₂ depth of 4.74441001 eV. [`PhysicalConstants::hbar_c_wavenumber_factor`]
    /// gives the factor implied by `hbar_c` alone (2π·ħc·10⁻⁸), which differs
    /// in the sixth significant digit.
    pub ev_per_cm1: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar_c: 1973.29,
            amu_c2: 931.494028e6,
            d0: 1.0 / 12.0,
            ev_per_cm1: 1.23985e-4,
        }
    }
}

impl PhysicalConstants {
    pub fn with_d0(self, d0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&d0) {
            return Err(domain("d0 must lie in [0, 1]", d0));
        }
        Ok(Self { d0, ..self })
    }

    /// 2π·ħc·10⁻⁸: eV per cm⁻¹ derived from `hbar_c` (Å → cm).
    pub fn hbar_c_wavenumber_factor(&self) -> f64 {
        2.0 * PI * self.hbar_c * 1e-8
    }

    /// Constants whose wavenumber factor is derived from `hbar_c` instead of
    /// the reference-depth factor.
    pub fn with_hbar_c_wavenumber_factor(self) -> Self {
        Self {
            ev_per_cm1: self.hbar_c_wavenumber_factor(),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar_c > 0.0) {
            return Err(domain("hbar_c must be positive", self.hbar_c));
        }
        if !(self.amu_c2 > 0.0) {
            return Err(domain("amu_c2 must be positive", self.amu_c2));
        }
        if !(self.ev_per_cm1 > 0.0) {
            return Err(domain("ev_per_cm1 must be positive", self.ev_per_cm1));
        }
        if !(0.0..=1.0).contains(&self.d0) {
            return Err(domain("d0 must lie in [0, 1]", self.d0));
        }
        Ok(())
    }
}

/// Converts a wavenumber in cm⁻¹ to eV.
pub fn cm1_to_ev(wavenumber: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(wavenumber >= 0.0) {
        return Err(domain("wavenumber must be non-negative", wavenumber));
    }
    Ok(wavenumber * constants.ev_per_cm1)
}

/// κ = ħ²/(2μ) in eV·Å² for a reduced mass given in amu.
pub fn kappa(mu_amu: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(mu_amu > 0.0) {
        return Err(domain("reduced mass must be positive", mu_amu));
    }
    Ok(constants.hbar_c * constants.hbar_c / (2.0 * mu_amu * constants.amu_c2))
}

/// One row of the molecule database.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculeParams {
    pub name: String,
    #[serde(rename = "mu_amu")]
    pub mu: f64,
    #[serde(rename = "alpha_per_angstrom")]
    pub alpha: f64,
    #[serde(rename = "re_angstrom")]
    pub r_e: f64,
    #[serde(rename = "D_cm1")]
    pub d_wavenumber: f64,
    #[serde(rename = "D_ev", default, skip_serializing_if = "Option::is_none")]
    pub d_ev_override: Option<f64>,
}

impl MoleculeParams {
    /// Dissociation energy in eV: the override if present, else the converted wavenumber.
    pub fn dissociation_ev(&self, constants: &PhysicalConstants) -> Result<f64> {
        match self.d_ev_override {
            Some(d) => Ok(d),
            None => cm1_to_ev(self.d_wavenumber, constants),
        }
    }

    pub fn kappa(&self, constants: &PhysicalConstants) -> Result<f64> {
        kappa(self.mu, constants)
    }

    pub fn validate(&self, constants: &PhysicalConstants) -> Result<()> {
        let bad = |field: &'static str, reason: String| Error::Parse {
            record: self.name.clone(),
            field,
            reason,
        };
        if self.name.trim().is_empty() {
            return Err(bad("name", "must not be empty".into()));
        }
        for (field, value) in [
            ("mu_amu", self.mu),
            ("alpha_per_angstrom", self.alpha),
            ("re_angstrom", self.r_e),
            ("D_cm1", self.d_wavenumber),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(bad(field, format!("must be finite and > 0, got {value}")));
            }
        }
        if let Some(d_ev) = self.d_ev_override {
            let converted = cm1_to_ev(self.d_wavenumber, constants)?;
            let rel = ((d_ev - converted) / converted).abs();
            if !(rel <= OVERRIDE_TOLERANCE) {
                return Err(bad(
                    "D_ev",
                    format!("{d_ev} eV differs from converted D_cm1 ({converted} eV) by {rel:.2e}"),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Database {
    #[serde(default)]
    molecule: Vec<MoleculeParams>,
}

/// Parses a molecule database from TOML text, validating every record.
pub fn parse_molecules(text: &str) -> Result<Vec<MoleculeParams>> {
    let db: Database = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let constants = PhysicalConstants::default();
    for m in &db.molecule {
        m.validate(&constants)?;
    }
    Ok(db.molecule)
}

pub fn load_molecules(path: impl AsRef<Path>) -> Result<Vec<MoleculeParams>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_molecules(&text)
}

pub fn default_molecules() -> Vec<MoleculeParams> {
    parse_molecules(DEFAULT_MOLECULES_TOML).expect("shipped molecule database is valid")
}

pub fn molecules_to_toml(molecules: &[MoleculeParams]) -> String {
    let db = Database {
        molecule: molecules.to_vec(),
    };
    toml::to_string(&db).expect("molecule records serialize")
}

/// Case-insensitive lookup by name.
pub fn find_molecule<'a>(
    molecules: &'a [MoleculeParams],
    name: &str,
) -> Option<&'a MoleculeParams> {
    molecules.iter().find(|m| m.name.eq_ignore_ascii_case(name))
}
