//! Invariant suite behind `sdf validate`.
//!
//! Each check compares one family of results against the reference table
//! or against another route to the same quantity, and reports the worst
//! deviation next to its tolerance.

use std::fmt;

use crate::error::Result;
use crate::morse::{morse_energy_l0, MorsePotential};
use crate::oracle::{solve_bound_state, RadialProblem};
use crate::reference::{reference_levels, ReferenceLevel};
use crate::sdf::{pekeris_centrifugal, SdfModel};
use crate::special::{
    hyp2f1_terminating, jacobi_poly, log_factorial, log_pochhammer, JacobiParams,
};
use crate::units::{find_molecule, MoleculeParams, PhysicalConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Skips oracle solves for l > 0.
    Fast,
    Full,
}

impl std::str::FromStr for Scope {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fast" => Ok(Scope::Fast),
            "full" => Ok(Scope::Full),
            other => Err(format!("unknown scope '{other}', expected fast or full")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Largest deviation seen, in the check's own units.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} worst={:.3e} tol={:.1e} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tolerance,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub scope: Scope,
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Tracks the worst deviation over a family of cases.
struct Tally {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    worst_case: String,
    errors: Vec<String>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: 0.0,
            worst_case: String::new(),
            errors: Vec::new(),
        }
    }

    fn record(&mut self, case: impl fmt::Display, deviation: f64) {
        if !(deviation <= self.worst) {
            self.worst = deviation;
            self.worst_case = case.to_string();
        }
    }

    fn fail(&mut self, case: impl fmt::Display, why: impl fmt::Display) {
        self.errors.push(format!("{case}: {why}"));
    }

    fn finish(self) -> CheckOutcome {
        let passed = self.errors.is_empty() && self.worst <= self.tolerance;
        let mut detail = if self.worst_case.is_empty() {
            String::new()
        } else {
            format!("at {}", self.worst_case)
        };
        if !self.errors.is_empty() {
            if !detail.is_empty() {
                detail.push_str("; ");
            }
            detail.push_str(&self.errors.join("; "));
        }
        CheckOutcome {
            name: self.name,
            passed,
            worst: self.worst,
            tolerance: self.tolerance,
            detail,
        }
    }
}

struct Case<'a> {
    level: &'a ReferenceLevel,
    model: SdfModel,
}

impl fmt::Display for Case<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} l={}",
            self.level.molecule, self.level.n, self.level.l
        )
    }
}

/// sDF level from the numerical solver with the exact centrifugal term.
pub fn oracle_energy(model: &SdfModel, n: u32, l: u32) -> Result<f64> {
    Ok(solve_bound_state(&RadialProblem::for_sdf(model, l)?, n)?.energy)
}

pub fn run_validation(
    scope: Scope,
    molecules: &[MoleculeParams],
    constants: &PhysicalConstants,
) -> Result<ValidationReport> {
    constants.validate()?;
    let table = reference_levels();
    let mut missing = Tally::new("molecule_records", 0.0);
    let mut cases = Vec::new();
    for level in &table {
        match find_molecule(molecules, &level.molecule)
            .map(|m| SdfModel::from_molecule(m, constants))
        {
            Some(Ok(model)) => cases.push(Case { level, model }),
            Some(Err(e)) => missing.fail(&level.molecule, e),
            None => missing.fail(&level.molecule, "not in database"),
        }
    }
    missing.errors.dedup();

    let mut nu_l0 = Tally::new("table_nu_l0", 1e-3);
    let mut nu_lpos = Tally::new("table_nu_l_positive", 1e-3);
    let mut root = Tally::new("closed_form_vs_root", 1e-10);
    let mut norm = Tally::new("normalization", 1e-6);
    let mut nodes = Tally::new("node_count", 0.0);
    let mut d0_free = Tally::new("l0_d0_independence", 0.0);
    for c in &cases {
        let (n, l) = (c.level.n, c.level.l);
        match c.model.energy(n, l) {
            Ok(e) => {
                let dev = (e - c.level.energy_nu()).abs();
                if l == 0 {
                    nu_l0.record(c, dev);
                } else {
                    nu_lpos.record(c, dev);
                }
                match c.model.energy_by_root(n, l) {
                    Ok(r) => root.record(c, ((r - e) / e).abs()),
                    Err(err) => root.fail(c, err),
                }
                if l == 0 {
                    for d0 in [0.0, 1.0 / 12.0, 1.0] {
                        let other = SdfModel::new(c.model.potential, c.model.kappa, d0)
                            .and_then(|m| m.energy(n, 0));
                        match other {
                            Ok(o) if o.to_bits() == e.to_bits() => {}
                            Ok(o) => d0_free.record(c, (o - e).abs().max(f64::MIN_POSITIVE)),
                            Err(err) => d0_free.fail(c, err),
                        }
                    }
                }
            }
            Err(err) => {
                let t = if l == 0 { &mut nu_l0 } else { &mut nu_lpos };
                t.fail(c, err);
            }
        }
        match c.model.normalization_integral(n, l) {
            Ok(q) => norm.record(c, (q.value - 1.0).abs()),
            Err(err) => norm.fail(c, err),
        }
        let r_max = c.model.potential.r_e() + 40.0 / c.model.potential.alpha();
        match c.model.node_count(n, l, r_max, 20_000) {
            Ok(k) if k == n => {}
            Ok(k) => nodes.fail(c, format!("{k} nodes")),
            Err(err) => nodes.fail(c, err),
        }
    }

    let mut oracle_l0 = Tally::new("oracle_vs_closed_form_l0", 1e-5);
    let mut ap_l0 = Tally::new("table_ap_l0", 1e-4);
    let mut ap_lpos = Tally::new("table_ap_l_positive", 1e-3);
    let mut pattern = Tally::new("approximation_error_grows_with_l", 0.0);
    let mut gaps: Vec<(String, u32, u32, f64)> = Vec::new();
    for c in &cases {
        let (n, l) = (c.level.n, c.level.l);
        if l > 0 && scope == Scope::Fast {
            continue;
        }
        let e = match oracle_energy(&c.model, n, l) {
            Ok(e) => e,
            Err(err) => {
                let t = if l == 0 { &mut ap_l0 } else { &mut ap_lpos };
                t.fail(c, err);
                continue;
            }
        };
        if l == 0 {
            ap_l0.record(c, (e - c.level.energy_ap()).abs());
            match c.model.energy(n, 0) {
                Ok(a) => oracle_l0.record(c, (a - e).abs()),
                Err(err) => oracle_l0.fail(c, err),
            }
        } else {
            ap_lpos.record(c, (e - c.level.energy_ap()).abs());
        }
        if let Ok(a) = c.model.energy(n, l) {
            gaps.push((c.level.molecule.clone(), n, l, (a - e).abs()));
        }
    }
    if scope == Scope::Full {
        gaps.sort_by(|a, b| (&a.0, a.1, a.2).cmp(&(&b.0, b.1, b.2)));
        for w in gaps.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 && w[1].3 < w[0].3 {
                pattern.fail(
                    format!("{} n={} l={}->{}", w[0].0, w[0].1, w[0].2, w[1].2),
                    "gap shrinks",
                );
            }
        }
    }

    let mut morse = Tally::new("morse_l0_formula_vs_table", 2e-3);
    for c in cases.iter().filter(|c| c.level.l == 0) {
        let p = c.model.potential;
        let e = MorsePotential::new(p.depth(), p.alpha(), p.r_e())
            .and_then(|m| morse_energy_l0(c.level.n, &m, c.model.kappa));
        match e {
            Ok(e) => morse.record(c, (e - c.level.energy_morse()).abs()),
            Err(err) => morse.fail(c, err),
        }
    }

    let mut checks = vec![
        missing.finish(),
        nu_l0.finish(),
        nu_lpos.finish(),
        root.finish(),
        d0_free.finish(),
        norm.finish(),
        nodes.finish(),
        oracle_l0.finish(),
        ap_l0.finish(),
    ];
    if scope == Scope::Full {
        checks.push(ap_lpos.finish());
        checks.push(pattern.finish());
    }
    checks.push(morse.finish());
    checks.push(jacobi_routes());
    checks.push(pekeris_limit());
    Ok(ValidationReport { scope, checks })
}

/// Recurrence against the terminating ₂F₁ form of the Jacobi polynomial.
pub fn jacobi_routes() -> CheckOutcome {
    let mut t = Tally::new("jacobi_recurrence_vs_hypergeometric", 1e-11);
    for n in 0..=8u32 {
        for &a in &[-0.5, 0.0, 0.7, 3.2, 25.0] {
            for &b in &[-0.5, 0.0, 1.5, 12.0] {
                for k in 0..=10 {
                    let x = -1.0 + 0.2 * k as f64;
                    let Ok(p) = JacobiParams::new(n, a, b) else {
                        continue;
                    };
                    let direct = jacobi_poly(p, x);
                    let (beta, gamma, z) = (n as f64 + a + b + 1.0, a + 1.0, 0.5 * (1.0 - x));
                    // relative to the sum of term magnitudes, i.e. the series at −z
                    let via = log_pochhammer(a + 1.0, n).and_then(|lp| {
                        let pre = (lp - log_factorial(n)).exp();
                        Ok((
                            pre * hyp2f1_terminating(n, beta, gamma, z)?,
                            pre * hyp2f1_terminating(n, beta, gamma, -z)?,
                        ))
                    });
                    match via {
                        Ok((v, magnitude)) => {
                            let scale = direct.abs().max(magnitude.abs()).max(f64::MIN_POSITIVE);
                            t.record(
                                format!("n={n} a={a} b={b} x={x:.1}"),
                                (direct - v).abs() / scale,
                            )
                        }
                        Err(err) => t.fail(format!("n={n} a={a} b={b}"), err),
                    }
                }
            }
        }
    }
    t.finish()
}

/// Small-α limit of the exponential centrifugal stand-in.
pub fn pekeris_limit() -> CheckOutcome {
    let mut t = Tally::new("exponential_centrifugal_small_alpha", 1e-8);
    for r in [0.5, 1.0, 2.0] {
        match pekeris_centrifugal(r, 1e-6, 1.0 / 12.0) {
            Ok(v) => t.record(format!("r={r}"), (v * r * r - 1.0).abs()),
            Err(err) => t.fail(format!("r={r}"), err),
        }
    }
    t.finish()
}
