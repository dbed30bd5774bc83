//! Published reference levels for H₂, LiH, CO and HCl.
//!
//! Values are stored as printed, i.e. −E in eV (positive). Use
//! [`ReferenceLevel::energy_nu`] and friends for signed energies.

use crate::error::{Error, Result};

pub const TABLE3_CSV: &str = include_str!("../data/table3.csv");

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceLevel {
    pub molecule: String,
    pub n: u32,
    pub l: u32,
    /// −E from the closed-form solution.
    pub nu: f64,
    /// −E from the amplitude-phase numerical solution.
    pub ap: f64,
    /// −E for the Morse potential.
    pub morse: f64,
}

impl ReferenceLevel {
    pub fn energy_nu(&self) -> f64 {
        -self.nu
    }

    pub fn energy_ap(&self) -> f64 {
        -self.ap
    }

    pub fn energy_morse(&self) -> f64 {
        -self.morse
    }
}

fn parse_err(record: &str, field: &'static str, reason: impl Into<String>) -> Error {
    Error::Parse {
        record: record.to_string(),
        field,
        reason: reason.into(),
    }
}

/// Parses the fixture format: `#` comments, a header line, then
/// `molecule,n,l,nu,ap,morse` records.
pub fn parse_reference(text: &str) -> Result<Vec<ReferenceLevel>> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| parse_err("", "header", "missing header"))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    if columns != ["molecule", "n", "l", "nu", "ap", "morse"] {
        return Err(parse_err(header, "header", "unexpected columns"));
    }
    let mut out = Vec::new();
    for line in lines {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 6 {
            return Err(parse_err(
                line,
                "record",
                format!("expected 6 fields, found {}", f.len()),
            ));
        }
        let int = |i: usize, name: &'static str| -> Result<u32> {
            f[i].parse()
                .map_err(|e: std::num::ParseIntError| parse_err(line, name, e.to_string()))
        };
        let real = |i: usize, name: &'static str| -> Result<f64> {
            let v: f64 = f[i]
                .parse()
                .map_err(|e: std::num::ParseFloatError| parse_err(line, name, e.to_string()))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse_err(line, name, "not finite"))
            }
        };
        out.push(ReferenceLevel {
            molecule: f[0].to_string(),
            n: int(1, "n")?,
            l: int(2, "l")?,
            nu: real(3, "nu")?,
            ap: real(4, "ap")?,
            morse: real(5, "morse")?,
        });
    }
    Ok(out)
}

/// The shipped 36-entry table.
pub fn reference_levels() -> Vec<ReferenceLevel> {
    parse_reference(TABLE3_CSV).expect("bundled reference table is well formed")
}
