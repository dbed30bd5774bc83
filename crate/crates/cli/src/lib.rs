//! Command-line workbench: spectrum tables, potential curves, wavefunction
//! dumps and the validation runner.
//!
//! Every command builds a [`Table`] first and renders it afterwards, so the
//! same data can be written as aligned text or CSV.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use sdf_core::oracle::{solve_bound_state, RadialProblem};
use sdf_core::reference::reference_levels;
use sdf_core::validation::{oracle_energy, run_validation, Scope};
use sdf_core::{
    default_molecules, find_molecule, load_molecules, morse_energy_l0, Error, MoleculeParams,
    MorsePotential, PhysicalConstants, SdfModel,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sdf",
    version,
    about = "Shifted Deng-Fan spectra, curves and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Molecule database (TOML) replacing the built-in one
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Constant term of the exponential centrifugal approximation
    #[arg(long, global = true)]
    pub d0: Option<f64>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Method {
    Nu,
    Oracle,
    Morse,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies E_nl (eV, signed) for chosen states
    Levels {
        #[arg(long)]
        molecule: String,
        #[arg(long, value_delimiter = ',', default_value = "0,5,7")]
        n: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "0,5,10")]
        l: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "nu,oracle,morse")]
        methods: Vec<Method>,
    },
    /// All reference states with deviations from the published values (-E, eV)
    Table3,
    /// Potential curves V_sDF, V_Morse and effective potentials
    Curves {
        #[arg(long)]
        molecule: String,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_delimiter = ',', default_value = "0,5,10")]
        l: Vec<u32>,
    },
    /// Radial wavefunction R_nl(r)
    Wavefunction {
        #[arg(long)]
        molecule: String,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_delimiter = ',', default_value = "nu")]
        methods: Vec<Method>,
    },
    /// Run the invariant suite
    Validate {
        #[arg(long, default_value = "fast")]
        scope: Scope,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct RangeArgs {
    /// Å
    #[arg(long, default_value_t = 0.2)]
    pub r_min: f64,
    /// Å
    #[arg(long, default_value_t = 5.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 500)]
    pub points: usize,
}

impl RangeArgs {
    fn grid(&self) -> Result<Vec<f64>, CliError> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(CliError::Usage(format!(
                "need 0 < r-min < r-max, got r-min={} r-max={}",
                self.r_min, self.r_max
            )));
        }
        if self.points < 2 {
            return Err(CliError::Usage("need at least 2 points".into()));
        }
        let h = (self.r_max - self.r_min) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.r_max
                } else {
                    self.r_min + h * i as f64
                }
            })
            .collect())
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

fn numeric(e: Error) -> CliError {
    CliError::Numeric(e.to_string())
}

/// Formats with 12 significant digits; parsing the result and formatting
/// again gives the same string.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-3..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // rounding may carry into a new leading digit; one more pass settles it
        let reparsed: f64 = s.parse().unwrap();
        let exp2 = reparsed.abs().log10().floor() as i32;
        if exp2 != exp {
            let decimals = (11 - exp2).max(0) as usize;
            return format!("{reparsed:.decimals$}");
        }
        s
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u32),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(t) => t.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub metadata: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for m in &self.metadata {
            let _ = writeln!(out, "# {m}");
        }
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        match format {
            Format::Csv => {
                let _ = writeln!(out, "{}", self.header.join(","));
                for r in &cells {
                    let _ = writeln!(out, "{}", r.join(","));
                }
            }
            Format::Text => {
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
                for r in &cells {
                    for (w, c) in widths.iter_mut().zip(r) {
                        *w = (*w).max(c.len());
                    }
                }
                let line = |r: &[String]| {
                    r.iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                let _ = writeln!(out, "{}", line(&self.header));
                for r in &cells {
                    let _ = writeln!(out, "{}", line(r));
                }
            }
        }
        out
    }
}

/// Output of a command: the table plus anything destined for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub summary: Vec<String>,
    pub exit_code: i32,
}

impl Report {
    fn ok(table: Table) -> Self {
        Self {
            table,
            summary: Vec::new(),
            exit_code: EXIT_OK,
        }
    }
}

pub struct Context {
    pub molecules: Vec<MoleculeParams>,
    pub constants: PhysicalConstants,
}

impl Context {
    pub fn new(config: Option<&PathBuf>, d0: Option<f64>) -> Result<Self, CliError> {
        let mut constants = PhysicalConstants::default();
        if let Some(d0) = d0 {
            constants = constants
                .with_d0(d0)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        let molecules = match config {
            Some(path) => load_molecules(path).map_err(|e| CliError::Usage(e.to_string()))?,
            None => default_molecules(),
        };
        Ok(Self {
            molecules,
            constants,
        })
    }

    pub fn molecule(&self, name: &str) -> Result<&MoleculeParams, CliError> {
        find_molecule(&self.molecules, name).ok_or_else(|| {
            let names: Vec<&str> = self.molecules.iter().map(|m| m.name.as_str()).collect();
            CliError::Usage(format!(
                "unknown molecule '{name}'; available: {}",
                names.join(", ")
            ))
        })
    }

    fn model(&self, m: &MoleculeParams) -> Result<SdfModel, CliError> {
        SdfModel::from_molecule(m, &self.constants).map_err(|e| CliError::Usage(e.to_string()))
    }

    fn morse(&self, m: &MoleculeParams) -> Result<MorsePotential, CliError> {
        let depth = m
            .dissociation_ev(&self.constants)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        MorsePotential::new(depth, m.alpha, m.r_e).map_err(|e| CliError::Usage(e.to_string()))
    }

    fn metadata(&self, command: &str) -> String {
        format!(
            "sdf {} {command} d0={} ev_per_cm1={}",
            env!("CARGO_PKG_VERSION"),
            format_number(self.constants.d0),
            format_number(self.constants.ev_per_cm1)
        )
    }
}

/// Outcome of one energy evaluation.
#[derive(Debug, Clone, PartialEq)]
enum Level {
    Bound(f64),
    Unbound,
    Missing,
    Failed(String),
}

impl Level {
    fn from_result(r: sdf_core::Result<f64>) -> Self {
        match r {
            Ok(e) => Level::Bound(e),
            Err(Error::Unbound { .. } | Error::BracketExhausted { .. }) => Level::Unbound,
            Err(e) => Level::Failed(e.to_string()),
        }
    }

    fn value(&self) -> Option<f64> {
        match self {
            Level::Bound(e) => Some(*e),
            _ => None,
        }
    }

    fn cell(&self, sign: f64) -> Cell {
        match self {
            Level::Bound(e) => Cell::Num(sign * e),
            Level::Unbound => Cell::Text("unbound".into()),
            Level::Missing => Cell::Text("n/a".into()),
            Level::Failed(_) => Cell::Text("nonconverged".into()),
        }
    }
}

fn diff_cell(a: &Level, b: &Level, sign: f64) -> Cell {
    match (a.value(), b.value()) {
        (Some(x), Some(y)) => Cell::Num(sign * (x - y)),
        _ => Cell::Text("n/a".into()),
    }
}

/// Reference Morse level: analytic at l = 0, tabulated otherwise.
fn morse_level(ctx: &Context, m: &MoleculeParams, n: u32, l: u32) -> Result<Level, CliError> {
    if l == 0 {
        let p = ctx.morse(m)?;
        return Ok(Level::from_result(morse_energy_l0(
            n,
            &p,
            m.kappa(&ctx.constants).map_err(numeric)?,
        )));
    }
    Ok(reference_levels()
        .into_iter()
        .find(|r| r.molecule.eq_ignore_ascii_case(&m.name) && r.n == n && r.l == l)
        .map_or(Level::Missing, |r| Level::Bound(r.energy_morse())))
}

pub fn cmd_levels(
    ctx: &Context,
    molecule: &str,
    ns: &[u32],
    ls: &[u32],
    methods: &[Method],
) -> Result<Report, CliError> {
    let m = ctx.molecule(molecule)?;
    let model = ctx.model(m)?;
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    let mut states: Vec<(u32, u32)> = ns
        .iter()
        .flat_map(|&n| ls.iter().map(move |&l| (n, l)))
        .collect();
    states.sort();
    states.dedup();

    let levels: Vec<Vec<Level>> = states
        .par_iter()
        .map(|&(n, l)| {
            methods
                .iter()
                .map(|method| match method {
                    Method::Nu => Ok(Level::from_result(model.energy(n, l))),
                    Method::Oracle => Ok(Level::from_result(oracle_energy(&model, n, l))),
                    Method::Morse => morse_level(ctx, m, n, l),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let mut header: Vec<String> = vec!["molecule".into(), "n".into(), "l".into()];
    for method in &methods {
        header.push(format!("e_{}", method_name(*method)));
    }
    let has = |x| methods.contains(&x);
    if has(Method::Nu) && has(Method::Oracle) {
        header.push("nu_minus_oracle".into());
    }
    if has(Method::Nu) && has(Method::Morse) {
        header.push("nu_minus_morse".into());
    }
    let mut rows = Vec::new();
    let mut failed = false;
    for (&(n, l), lv) in states.iter().zip(&levels) {
        let mut row = vec![Cell::Text(m.name.clone()), Cell::Int(n), Cell::Int(l)];
        row.extend(lv.iter().map(|x| x.cell(1.0)));
        let get = |x: Method| &lv[methods.iter().position(|&y| y == x).unwrap()];
        if has(Method::Nu) && has(Method::Oracle) {
            row.push(diff_cell(get(Method::Nu), get(Method::Oracle), 1.0));
        }
        if has(Method::Nu) && has(Method::Morse) {
            row.push(diff_cell(get(Method::Nu), get(Method::Morse), 1.0));
        }
        failed |= lv.iter().any(|x| matches!(x, Level::Failed(_)));
        rows.push(row);
    }
    let mut summary = Vec::new();
    for (&(n, l), lv) in states.iter().zip(&levels) {
        for (method, x) in methods.iter().zip(lv) {
            if let Level::Failed(why) = x {
                summary.push(format!(
                    "{} ({n},{l}) {}: {why}",
                    m.name,
                    method_name(*method)
                ));
            }
        }
    }
    Ok(Report {
        table: Table {
            metadata: vec![
                ctx.metadata("levels"),
                "energies E_nl in eV (negative = bound)".into(),
            ],
            header,
            rows,
        },
        summary,
        exit_code: if failed { EXIT_NUMERIC } else { EXIT_OK },
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Nu => "nu",
        Method::Oracle => "oracle",
        Method::Morse => "morse",
    }
}

pub fn cmd_table3(ctx: &Context) -> Result<Report, CliError> {
    let reference = reference_levels();
    let computed: Vec<(Level, Level, Level)> = reference
        .par_iter()
        .map(|r| {
            let m = ctx.molecule(&r.molecule)?;
            let model = ctx.model(m)?;
            Ok((
                Level::from_result(model.energy(r.n, r.l)),
                Level::from_result(oracle_energy(&model, r.n, r.l)),
                morse_level(ctx, m, r.n, r.l)?,
            ))
        })
        .collect::<Result<_, CliError>>()?;

    let header = [
        "molecule",
        "n",
        "l",
        "nu",
        "nu_ref",
        "nu_dev",
        "oracle",
        "ap_ref",
        "oracle_dev",
        "morse",
        "morse_ref",
        "morse_dev",
    ];
    let mut rows = Vec::new();
    let mut max_dev = [0.0f64; 3];
    let mut failed = Vec::new();
    for (r, (nu, oracle, morse)) in reference.iter().zip(&computed) {
        let refs = [
            Level::Bound(r.energy_nu()),
            Level::Bound(r.energy_ap()),
            Level::Bound(r.energy_morse()),
        ];
        let mut row = vec![
            Cell::Text(r.molecule.clone()),
            Cell::Int(r.n),
            Cell::Int(r.l),
        ];
        for (k, (x, reference)) in [nu, oracle, morse].into_iter().zip(&refs).enumerate() {
            row.push(x.cell(-1.0));
            row.push(reference.cell(-1.0));
            row.push(diff_cell(x, reference, -1.0));
            if let (Some(a), Some(b)) = (x.value(), reference.value()) {
                max_dev[k] = max_dev[k].max((a - b).abs());
            }
            if let Level::Failed(why) = x {
                failed.push(format!("{} ({},{}): {why}", r.molecule, r.n, r.l));
            }
        }
        rows.push(row);
    }
    let mut summary = vec![
        format!("max |nu - nu_ref| = {} eV", format_number(max_dev[0])),
        format!("max |oracle - ap_ref| = {} eV", format_number(max_dev[1])),
        format!(
            "max |morse - morse_ref| = {} eV (l = 0 only; l > 0 morse is the reference)",
            format_number(max_dev[2])
        ),
    ];
    summary.extend(failed.iter().cloned());
    Ok(Report {
        table: Table {
            metadata: vec![
                ctx.metadata("table3"),
                "values are -E_nl in eV (positive = bound); dev = computed - reference in the same convention".into(),
            ],
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        },
        summary,
        exit_code: if failed.is_empty() { EXIT_OK } else { EXIT_NUMERIC },
    })
}

pub fn cmd_curves(
    ctx: &Context,
    molecule: &str,
    range: RangeArgs,
    ls: &[u32],
) -> Result<Report, CliError> {
    let m = ctx.molecule(molecule)?;
    let model = ctx.model(m)?;
    let morse = ctx.morse(m)?;
    let grid = range.grid()?;
    let mut header = vec!["r".to_string(), "v_sdf".into(), "v_morse".into()];
    header.extend(ls.iter().map(|l| format!("v_eff_l{l}")));
    let mut rows = Vec::with_capacity(grid.len());
    for &r in &grid {
        let v = model.potential.v(r).map_err(numeric)?;
        let mut row = vec![Cell::Num(r), Cell::Num(v), Cell::Num(morse.v(r))];
        for &l in ls {
            let ll = l as f64 * (l as f64 + 1.0);
            row.push(Cell::Num(v + model.kappa * ll / (r * r)));
        }
        rows.push(row);
    }
    Ok(Report::ok(Table {
        metadata: vec![
            ctx.metadata("curves"),
            format!(
                "{}: D={} eV alpha={} 1/A r_e={} A; v_eff_l = v_sdf + kappa*l(l+1)/r^2 with kappa={} eV A^2",
                m.name,
                format_number(model.potential.depth()),
                format_number(m.alpha),
                format_number(m.r_e),
                format_number(model.kappa)
            ),
        ],
        header,
        rows,
    }))
}

pub fn cmd_wavefunction(
    ctx: &Context,
    molecule: &str,
    n: u32,
    l: u32,
    range: RangeArgs,
    methods: &[Method],
) -> Result<Report, CliError> {
    let m = ctx.molecule(molecule)?;
    let model = ctx.model(m)?;
    let grid = range.grid()?;
    let state = match model.bound_state(n, l) {
        Ok(s) => s,
        Err(Error::Unbound { .. }) => {
            return Err(CliError::Usage(format!(
                "{} ({n},{l}) is not bound",
                m.name
            )))
        }
        Err(e) => return Err(numeric(e)),
    };
    let mut header = vec!["r".to_string()];
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut metadata = vec![
        ctx.metadata("wavefunction"),
        format!(
            "{} n={n} l={l}: E={} eV N={} eta={} delta_l={}",
            m.name,
            format_number(state.energy),
            format_number(state.norm),
            format_number(state.eta),
            format_number(state.delta_l)
        ),
    ];
    let closed: Vec<f64> = grid
        .iter()
        .map(|&r| model.radial_wavefunction(n, l, r))
        .collect::<Result<_, _>>()
        .map_err(numeric)?;
    if methods.contains(&Method::Nu) {
        header.push("r_nu".into());
        columns.push(closed.clone());
        header.push("r_nu_hypergeometric".into());
        columns.push(
            grid.iter()
                .map(|&r| model.radial_wavefunction_hypergeometric(n, l, r))
                .collect::<Result<_, _>>()
                .map_err(numeric)?,
        );
    }
    if methods.contains(&Method::Oracle) {
        let problem = RadialProblem::for_sdf(&model, l).map_err(numeric)?;
        let shot = solve_bound_state(&problem, n).map_err(numeric)?;
        // match the closed-form sign convention at the largest-|R| sample
        let peak = closed
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap();
        let mut values: Vec<f64> = grid
            .iter()
            .map(|&r| interpolate(&shot.radii, &shot.wavefunction, r))
            .collect();
        if values[peak] * closed[peak] < 0.0 {
            values.iter_mut().for_each(|v| *v = -*v);
        }
        metadata.push(format!(
            "oracle E={} eV, linear interpolation from the Numerov grid",
            format_number(shot.energy)
        ));
        header.push("r_oracle".into());
        columns.push(values);
    }
    if methods.contains(&Method::Morse) {
        return Err(CliError::Usage(
            "wavefunction supports methods nu and oracle".into(),
        ));
    }
    let rows = grid
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            std::iter::once(Cell::Num(r))
                .chain(columns.iter().map(|c| Cell::Num(c[i])))
                .collect()
        })
        .collect();
    metadata.push("R in 1/sqrt(A), normalized to 1 over r in (0, inf)".into());
    Ok(Report::ok(Table {
        metadata,
        header,
        rows,
    }))
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] || x >= xs[xs.len() - 1] {
        return 0.0;
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + t * (ys[i + 1] - ys[i])
}

pub fn cmd_validate(ctx: &Context, scope: Scope) -> Result<Report, CliError> {
    let report = run_validation(scope, &ctx.molecules, &ctx.constants).map_err(numeric)?;
    let rows = report
        .checks
        .iter()
        .map(|c| {
            vec![
                Cell::Text(c.name.into()),
                Cell::Text(if c.passed { "pass" } else { "fail" }.into()),
                Cell::Num(c.worst),
                Cell::Num(c.tolerance),
                Cell::Text(c.detail.replace(',', ";")),
            ]
        })
        .collect();
    let failures: Vec<String> = report.failures().map(|c| c.to_string()).collect();
    Ok(Report {
        table: Table {
            metadata: vec![ctx.metadata(match scope {
                Scope::Fast => "validate fast",
                Scope::Full => "validate full",
            })],
            header: ["check", "status", "worst", "tolerance", "detail"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            rows,
        },
        exit_code: if failures.is_empty() {
            EXIT_OK
        } else {
            EXIT_VALIDATION
        },
        summary: failures,
    })
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let ctx = Context::new(cli.config.as_ref(), cli.d0)?;
    match &cli.command {
        Command::Levels {
            molecule,
            n,
            l,
            methods,
        } => cmd_levels(&ctx, molecule, n, l, methods),
        Command::Table3 => cmd_table3(&ctx),
        Command::Curves { molecule, range, l } => cmd_curves(&ctx, molecule, *range, l),
        Command::Wavefunction {
            molecule,
            n,
            l,
            range,
            methods,
        } => cmd_wavefunction(&ctx, molecule, *n, *l, *range, methods),
        Command::Validate { scope } => cmd_validate(&ctx, *scope),
    }
}

/// Runs a parsed command line, writing output and returning the exit code.
pub fn run(cli: &Cli) -> i32 {
    let report = match execute(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let text = report.table.render(cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{text}"),
    }
    for line in &report.summary {
        eprintln!("{line}");
    }
    report.exit_code
}
