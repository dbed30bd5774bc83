//! Ro-vibrational spectra of the shifted Deng–Fan potential.
//!
//! Closed-form levels and wavefunctions come from the parametric
//! Nikiforov–Uvarov construction ([`nu`], [`sdf`]); an independent Numerov
//! solver ([`oracle`]) and the Morse oscillator ([`morse`]) serve as checks.
//! Energies are in eV, lengths in Å.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision, clippy::approx_constant))]

pub mod error;
pub mod morse;
pub mod nu;
pub mod oracle;
pub mod quadrature;
pub mod reference;
pub mod sdf;
pub mod special;
pub mod units;
pub mod validation;

pub use error::{Error, Result};
pub use morse::{morse_energy_l0, v_morse, MorsePotential};
pub use nu::{
    derive_constants, quantization_residual, solve_energy_by_root, NuCoefficients, NuConstants,
};
pub use oracle::{
    count_nodes, normalize_quadrature, solve_bound_state, RadialProblem, ShootingResult,
};
pub use reference::{reference_levels, ReferenceLevel};
pub use sdf::{
    b_param, map_to_nu, v_df, v_sdf, BoundState, ReducedQuantities, SdfModel, SdfPotential,
};
pub use units::{
    cm1_to_ev, default_molecules, find_molecule, kappa, load_molecules, MoleculeParams,
    PhysicalConstants,
};
pub use validation::{run_validation, CheckOutcome, Scope, ValidationReport};
