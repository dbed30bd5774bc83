//! Numerov shooting solver for the radial equation with the exact
//! centrifugal term,
//!
//! ```text
//! R''(r) = [(V(r) + κ l(l+1)/r² − E)/κ] R(r)
//! ```
//!
//! It shares nothing with the closed-form path and serves as its
//! independent check. A state is isolated by Sturm node counting of the
//! outward solution, then refined by bisection on the sign of the Wronskian
//! between the outward solution and an inward one started from a decaying
//! exponential, matched at the outermost classical turning point.

use crate::error::{domain, Error, Result};
use crate::morse::MorsePotential;
use crate::sdf::SdfModel;

/// Default inner edge of the grid, Å.
pub const DEFAULT_R_MIN: f64 = 1e-4;
/// Minimum number of grid intervals accepted by [`RadialProblem::new`].
pub const MIN_INTERVALS: f64 = 1e4;
/// Default number of intervals for [`RadialProblem::with_default_grid`].
pub const DEFAULT_INTERVALS: f64 = 2e4;
/// Upper bound on k·h at the bottom of the well for default grids.
pub const MAX_PHASE_STEP: f64 = 0.01;
/// Eigenvalue bisection stops once the bracket is narrower than this (eV).
pub const ENERGY_TOL: f64 = 1e-10;
const RESCALE_AT: f64 = 1e100;
const MAX_ITERATIONS: u32 = 300;
/// Samples below this fraction of the peak are ignored when counting nodes.
pub const DECAY_THRESHOLD: f64 = 1e-12;
/// Estimated mass outside the grid, relative to the integral, above which
/// [`NormIntegral::truncation_estimate`] is set.
pub const TRUNCATION_TOLERANCE: f64 = 1e-10;

/// Radial problem on a uniform grid.
#[derive(Clone)]
pub struct RadialProblem<V> {
    potential: V,
    pub l: u32,
    /// ħ²/2μ, eV·Å²
    pub kappa: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub step: f64,
}

impl<V: Fn(f64) -> f64> RadialProblem<V> {
    pub fn new(
        potential: V,
        l: u32,
        kappa: f64,
        r_min: f64,
        r_max: f64,
        step: f64,
    ) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(domain("kappa must be positive", kappa));
        }
        if !(r_min > 0.0) {
            return Err(domain("r_min must be positive", r_min));
        }
        if !(r_max > r_min) {
            return Err(domain("r_max must exceed r_min", r_max));
        }
        if !(step > 0.0) {
            return Err(domain("step must be positive", step));
        }
        if (r_max - r_min) / step < MIN_INTERVALS * (1.0 - 1e-12) {
            return Err(domain(
                "grid needs at least 1e4 intervals",
                (r_max - r_min) / step,
            ));
        }
        Ok(Self {
            potential,
            l,
            kappa,
            r_min,
            r_max,
            step,
        })
    }

    /// r ∈ [1e-4, max(20/α, 6 r_e)] with at least 2·10⁴ intervals and
    /// k·h ≤ 0.01 at the bottom of a well of the given depth.
    pub fn with_default_grid(
        potential: V,
        l: u32,
        kappa: f64,
        alpha: f64,
        r_e: f64,
        depth: f64,
    ) -> Result<Self> {
        if !(alpha > 0.0 && r_e > 0.0 && depth > 0.0) {
            return Err(domain(
                "grid scales must be positive",
                alpha.min(r_e).min(depth),
            ));
        }
        let r_max = (20.0 / alpha).max(6.0 * r_e);
        let k_max = (depth / kappa).sqrt();
        let step = ((r_max - DEFAULT_R_MIN) / DEFAULT_INTERVALS).min(MAX_PHASE_STEP / k_max);
        Self::new(potential, l, kappa, DEFAULT_R_MIN, r_max, step)
    }

    /// Same problem with the step halved.
    pub fn refined(self) -> Self {
        Self {
            step: self.step * 0.5,
            ..self
        }
    }

    pub fn intervals(&self) -> usize {
        ((self.r_max - self.r_min) / self.step).round() as usize
    }

    fn discretize(&self) -> Result<Grid> {
        let intervals = self.intervals();
        let h = (self.r_max - self.r_min) / intervals as f64;
        let ll = (self.l as f64) * (self.l as f64 + 1.0);
        let mut radii = Vec::with_capacity(intervals + 1);
        let mut veff = Vec::with_capacity(intervals + 1);
        for i in 0..=intervals {
            let r = self.r_min + h * i as f64;
            let v = (self.potential)(r) + self.kappa * ll / (r * r);
            if !v.is_finite() {
                return Err(domain("potential is not finite on the grid", r));
            }
            radii.push(r);
            veff.push(v);
        }
        let v_min = veff.iter().copied().fold(f64::INFINITY, f64::min);
        // Numerov needs 1 − h²f/12 comfortably positive; skip the part of a
        // repulsive core where it is not, the solution there is negligible.
        let stiff = |v: f64| h * h * (v - v_min) / self.kappa >= 6.0;
        let start = veff.iter().rposition(|&v| stiff(v)).map_or(0, |i| i + 1);
        if start + 4 >= veff.len() {
            return Err(domain("grid is too coarse for the potential", h));
        }
        Ok(Grid {
            radii,
            veff,
            h,
            kappa: self.kappa,
            l: self.l,
            start,
            v_min,
        })
    }
}

impl RadialProblem<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
    /// Shifted Deng–Fan potential (exact centrifugal term) on the default grid.
    pub fn for_sdf(model: &SdfModel, l: u32) -> Result<Self> {
        let p = model.potential;
        let potential: Box<dyn Fn(f64) -> f64 + Send + Sync> =
            Box::new(move |r| p.v(r).unwrap_or(f64::NAN));
        Self::with_default_grid(potential, l, model.kappa, p.alpha(), p.r_e(), p.depth())
    }

    /// Morse potential shifted down by D, so levels are measured from dissociation.
    pub fn for_morse(morse: &MorsePotential, kappa: f64, l: u32) -> Result<Self> {
        let p = *morse;
        let potential: Box<dyn Fn(f64) -> f64 + Send + Sync> =
            Box::new(move |r| p.v(r) - p.depth());
        Self::with_default_grid(potential, l, kappa, p.alpha(), p.r_e(), p.depth())
    }
}

impl<V> std::fmt::Debug for RadialProblem<V> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProblem")
            .field("l", &self.l)
            .field("kappa", &self.kappa)
            .field("r_min", &self.r_min)
            .field("r_max", &self.r_max)
            .field("step", &self.step)
            .finish()
    }
}

struct Grid {
    radii: Vec<f64>,
    veff: Vec<f64>,
    h: f64,
    kappa: f64,
    l: u32,
    start: usize,
    v_min: f64,
}

impl Grid {
    fn len(&self) -> usize {
        self.radii.len()
    }

    fn g(&self, i: usize, energy: f64) -> f64 {
        1.0 - self.h * self.h * (self.veff[i] - energy) / (12.0 * self.kappa)
    }

    /// Integrates outward through index `last`, returning the solution
    /// (zero before `start`) and its count of sign changes.
    fn outward(&self, energy: f64, last: usize) -> (Vec<f64>, u32) {
        let mut y = vec![0.0; last + 1];
        let s = self.start;
        if s == 0 {
            let ratio = self.radii[1] / self.radii[0];
            y[0] = 1e-30;
            y[1] = 1e-30 * ratio.powi(self.l as i32 + 1);
        } else {
            y[s + 1] = 1e-30;
        }
        let mut nodes = 0;
        let (mut g_prev, mut g_cur) = (self.g(s, energy), self.g(s + 1, energy));
        for i in s + 1..last {
            let g_next = self.g(i + 1, energy);
            let next = ((12.0 - 10.0 * g_cur) * y[i] - g_prev * y[i - 1]) / g_next;
            y[i + 1] = next;
            // a sample landing exactly on zero is bridged by its predecessor
            let before = if y[i] != 0.0 { y[i] } else { y[i - 1] };
            if next != 0.0 && before != 0.0 && next.signum() != before.signum() {
                nodes += 1;
            }
            if next.abs() > RESCALE_AT {
                for v in &mut y[s..=i + 1] {
                    *v /= RESCALE_AT;
                }
            }
            g_prev = g_cur;
            g_cur = g_next;
        }
        (y, nodes)
    }

    /// Integrates inward from the outer edge down to index `first`. The
    /// returned vector is indexed like the grid; entries below `first` are zero.
    fn inward(&self, energy: f64, first: usize) -> Vec<f64> {
        let n = self.len();
        let mut y = vec![0.0; n];
        let last = n - 1;
        let f_edge = (self.veff[last] - energy) / self.kappa;
        let q = f_edge.max(0.0).sqrt();
        y[last] = 1e-30;
        y[last - 1] = 1e-30 * (q * self.h).exp();
        let (mut g_next, mut g_cur) = (self.g(last, energy), self.g(last - 1, energy));
        for i in (first + 1..last).rev() {
            let g_prev = self.g(i - 1, energy);
            y[i - 1] = ((12.0 - 10.0 * g_cur) * y[i] - g_next * y[i + 1]) / g_prev;
            if y[i - 1].abs() > RESCALE_AT {
                for v in &mut y[i - 1..] {
                    *v /= RESCALE_AT;
                }
            }
            g_next = g_cur;
            g_cur = g_prev;
        }
        y
    }

    fn count_nodes(&self, energy: f64) -> u32 {
        self.outward(energy, self.len() - 1).1
    }

    /// Outermost grid index at or inside the classically allowed region.
    fn matching_index(&self, energy: f64) -> usize {
        let n = self.len();
        let idx = self
            .veff
            .iter()
            .rposition(|&v| v <= energy)
            .unwrap_or_else(|| {
                self.veff
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(i, _)| i)
                    .unwrap()
            });
        idx.clamp(self.start + 2, n - 3)
    }

    /// Sign-carrying Wronskian of outward and inward solutions at `m`.
    fn mismatch(&self, energy: f64, m: usize) -> f64 {
        let (out, _) = self.outward(energy, m + 1);
        let inn = self.inward(energy, m - 1);
        let so = out[m - 1].abs().max(out[m].abs()).max(out[m + 1].abs());
        let si = inn[m - 1].abs().max(inn[m].abs()).max(inn[m + 1].abs());
        let (o0, o1, o2) = (out[m - 1] / so, out[m] / so, out[m + 1] / so);
        let (i0, i1, i2) = (inn[m - 1] / si, inn[m] / si, inn[m + 1] / si);
        o1 * (i2 - i0) - i1 * (o2 - o0)
    }

    fn assemble(&self, energy: f64, m: usize) -> Vec<f64> {
        let (out, _) = self.outward(energy, m);
        let mut y = self.inward(energy, m);
        let scale = out[m] / y[m];
        for v in &mut y[m..] {
            *v *= scale;
        }
        y[..=m].copy_from_slice(&out[..=m]);
        y
    }
}

/// Outcome of one eigenvalue search.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootingResult {
    /// eV
    pub energy: f64,
    pub node_count: u32,
    pub radii: Vec<f64>,
    /// Normalized so that ∫|R|² dr = 1, positive near the origin.
    pub wavefunction: Vec<f64>,
    pub converged: bool,
    pub iterations: u32,
}

/// Number of sign changes of the outward solution at energy `energy`, i.e.
/// the number of levels below it.
pub fn count_nodes<V: Fn(f64) -> f64>(problem: &RadialProblem<V>, energy: f64) -> Result<u32> {
    Ok(problem.discretize()?.count_nodes(energy))
}

/// Finds the bound state with `n_target` interior nodes.
pub fn solve_bound_state<V: Fn(f64) -> f64>(
    problem: &RadialProblem<V>,
    n_target: u32,
) -> Result<ShootingResult> {
    let grid = problem.discretize()?;
    let ceiling = grid.veff[grid.len() - 1];
    let found = grid.count_nodes(ceiling);
    if found <= n_target {
        return Err(Error::BracketExhausted {
            n: n_target,
            ceiling,
            found,
        });
    }

    let (mut lo, mut hi) = (grid.v_min, ceiling);
    let (mut c_lo, mut c_hi) = (grid.count_nodes(lo), found);
    let mut iterations = 0;
    while !(c_lo == n_target && c_hi == n_target + 1) {
        iterations += 1;
        if iterations > MAX_ITERATIONS || hi - lo <= ENERGY_TOL * 1e-3 {
            return Err(Error::NonConvergence { iterations, lo, hi });
        }
        let mid = 0.5 * (lo + hi);
        let c = grid.count_nodes(mid);
        if c <= n_target {
            lo = mid;
            c_lo = c;
        } else {
            hi = mid;
            c_hi = c;
        }
    }

    let m = grid.matching_index(hi);
    let mut w_lo = grid.mismatch(lo, m);
    let w_hi = grid.mismatch(hi, m);
    if w_lo.signum() == w_hi.signum() {
        return Err(Error::NonConvergence { iterations, lo, hi });
    }
    while hi - lo > ENERGY_TOL {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::NonConvergence { iterations, lo, hi });
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let w = grid.mismatch(mid, m);
        if w == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if w.signum() == w_lo.signum() {
            lo = mid;
            w_lo = w;
        } else {
            hi = mid;
        }
    }

    let energy = 0.5 * (lo + hi);
    let mut wavefunction = grid.assemble(energy, m);
    let norm = normalize_quadrature(&wavefunction, &grid.radii)?;
    let scale = 1.0 / norm.value.sqrt();
    for v in &mut wavefunction {
        *v *= scale;
    }
    let node_count = sign_changes(&wavefunction, DECAY_THRESHOLD);
    Ok(ShootingResult {
        energy,
        node_count,
        radii: grid.radii,
        wavefunction,
        converged: node_count == n_target,
        iterations,
    })
}

/// Sign changes among samples whose magnitude exceeds `floor` × peak.
fn sign_changes(samples: &[f64], floor: f64) -> u32 {
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in samples {
        if v.abs() > floor * peak {
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
    }
    count
}

/// ∫|R|² dr over the sampled range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormIntegral {
    pub value: f64,
    /// Estimated mass beyond the grid ends, set when it exceeds
    /// [`TRUNCATION_TOLERANCE`] of `value`.
    pub truncation_estimate: Option<f64>,
}

/// Mass missing outside the grid: a power law r^p toward r = 0 and an
/// exponential beyond the outer edge, both fitted to the last two samples.
fn tail_mass(y: &[f64], r: &[f64]) -> f64 {
    let n = y.len();
    let inner = if y[0] == 0.0 {
        0.0
    } else {
        let p = (y[1] / y[0]).abs().ln() / (r[1] / r[0]).ln();
        if p > -0.5 {
            y[0] * y[0] * r[0] / (2.0 * p + 1.0)
        } else {
            f64::INFINITY
        }
    };
    let (a, b) = (y[n - 2].abs(), y[n - 1].abs());
    let outer = if b == 0.0 {
        0.0
    } else if a > b {
        b * b * (r[n - 1] - r[n - 2]) / (2.0 * (a / b).ln())
    } else {
        b * b * (r[n - 1] - r[0])
    };
    inner + outer
}

/// Composite Simpson (with a 3/8 panel for odd interval counts) of the
/// squared samples on a uniform grid.
pub fn normalize_quadrature(samples: &[f64], grid: &[f64]) -> Result<NormIntegral> {
    if samples.len() != grid.len() {
        return Err(domain(
            "samples and grid differ in length",
            samples.len() as f64,
        ));
    }
    let n = grid.len();
    if n < 4 {
        return Err(domain("need at least four samples", n as f64));
    }
    let h = (grid[n - 1] - grid[0]) / (n - 1) as f64;
    if !(h > 0.0) {
        return Err(domain("grid must be increasing", h));
    }
    let sq: Vec<f64> = samples.iter().map(|v| v * v).collect();
    let intervals = n - 1;
    let simpson_end = if intervals.is_multiple_of(2) {
        intervals
    } else {
        intervals - 3
    };
    let mut sum = 0.0;
    let mut i = 0;
    while i < simpson_end {
        sum += h / 3.0 * (sq[i] + 4.0 * sq[i + 1] + sq[i + 2]);
        i += 2;
    }
    if simpson_end < intervals {
        let j = simpson_end;
        sum += 3.0 * h / 8.0 * (sq[j] + 3.0 * sq[j + 1] + 3.0 * sq[j + 2] + sq[j + 3]);
    }
    let tail = tail_mass(samples, grid);
    let truncation_estimate = if tail > TRUNCATION_TOLERANCE * sum {
        Some(tail)
    } else {
        None
    };
    Ok(NormIntegral {
        value: sum,
        truncation_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(l: u32) -> RadialProblem<impl Fn(f64) -> f64> {
        // κ = ½, V = ½r²: ħω = 1, levels 2n + l + 3/2
        RadialProblem::new(|r: f64| 0.5 * r * r, l, 0.5, 1e-4, 12.0, 12.0 / 2e4).unwrap()
    }

    #[test]
    fn oscillator_levels() {
        let p = oscillator(0);
        for n in 0..=5u32 {
            let s = solve_bound_state(&p, n).unwrap();
            let exact = 2.0 * n as f64 + 1.5;
            assert!((s.energy / exact - 1.0).abs() < 1e-6, "n={n}: {}", s.energy);
            assert!(s.converged);
            assert_eq!(s.node_count, n);
        }
        let s = solve_bound_state(&oscillator(2), 1).unwrap();
        assert!((s.energy - 5.5).abs() < 1e-6 * 5.5);
    }

    #[test]
    fn node_counts_are_monotone() {
        let p = oscillator(0);
        assert_eq!(count_nodes(&p, 0.5).unwrap(), 0);
        assert_eq!(count_nodes(&p, 2.5).unwrap(), 1);
        assert_eq!(count_nodes(&p, 4.0).unwrap(), 2);
        let mut prev = 0;
        for i in 0..200 {
            let c = count_nodes(&p, 0.1 + 0.1 * i as f64).unwrap();
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn grid_invariants() {
        let v = |r: f64| r;
        assert!(RadialProblem::new(v, 0, 1.0, 0.0, 1.0, 1e-5).is_err());
        assert!(RadialProblem::new(v, 0, 1.0, 1.0, 0.5, 1e-5).is_err());
        assert!(RadialProblem::new(v, 0, 1.0, 0.1, 1.0, 1e-3).is_err());
        assert!(RadialProblem::new(v, 0, 0.0, 0.1, 1.0, 1e-5).is_err());
        let bad = RadialProblem::new(|_: f64| f64::NAN, 0, 1.0, 0.1, 1.0, 1e-5).unwrap();
        assert!(matches!(count_nodes(&bad, -1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn missing_state_is_reported() {
        // a shallow square-ish well has a single level
        let well = |r: f64| if r < 1.0 { -3.0 } else { 0.0 };
        let p = RadialProblem::new(well, 0, 1.0, 1e-4, 10.0, 10.0 / 2e4).unwrap();
        assert!(solve_bound_state(&p, 0).is_ok());
        assert!(matches!(
            solve_bound_state(&p, 3),
            Err(Error::BracketExhausted { .. })
        ));
    }

    #[test]
    fn quadrature_basics() {
        let grid: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.01).collect();
        let zero = vec![0.0; grid.len()];
        let q = normalize_quadrature(&zero, &grid).unwrap();
        assert_eq!(q.value, 0.0);
        assert!(q.truncation_estimate.is_none());
        // ∫₀¹⁰ x² dx with samples √x², odd and even interval counts
        let lin: Vec<f64> = grid.clone();
        let q = normalize_quadrature(&lin, &grid).unwrap();
        assert!((q.value - 1000.0 / 3.0).abs() < 1e-9);
        assert!(q.truncation_estimate.is_some());
        let q = normalize_quadrature(&lin[..1000], &grid[..1000]).unwrap();
        assert!((q.value - 9.99f64.powi(3) / 3.0).abs() < 1e-9);
        assert!(normalize_quadrature(&lin[..3], &grid[..3]).is_err());
    }

    #[test]
    fn wavefunction_is_normalized_and_decays() {
        let s = solve_bound_state(&oscillator(0), 2).unwrap();
        let q = normalize_quadrature(&s.wavefunction, &s.radii).unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
        assert!(q.truncation_estimate.is_none());
        assert!(s.wavefunction[1] > 0.0);
        // R(r) = (2/π^{1/4})·… compare shape against r e^{−r²/2}(1 − 4r²/3 + 4r⁴/15)
        let exact = |r: f64| r * (-0.5 * r * r).exp() * (15.0 - 20.0 * r * r + 4.0 * r.powi(4));
        let i = s.radii.iter().position(|&r| r >= 1.0).unwrap();
        let ratio = s.wavefunction[i] / exact(s.radii[i]);
        for j in (100..s.radii.len() / 2).step_by(997) {
            let e = exact(s.radii[j]);
            if e.abs() > 1e-3 {
                assert!(
                    (s.wavefunction[j] / e / ratio - 1.0).abs() < 1e-6,
                    "r={}",
                    s.radii[j]
                );
            }
        }
    }

    fn h2() -> SdfModel {
        let c = crate::units::PhysicalConstants::default();
        SdfModel::from_molecule(&crate::units::default_molecules()[0], &c).unwrap()
    }

    #[test]
    fn sdf_node_counts_bracket_analytic_levels() {
        let m = h2();
        let p = RadialProblem::for_sdf(&m, 0).unwrap();
        assert_eq!(count_nodes(&p, -m.potential.depth() + 1e-3).unwrap(), 0);
        for n in 0..6u32 {
            let mid = 0.5 * (m.energy(n, 0).unwrap() + m.energy(n + 1, 0).unwrap());
            assert_eq!(count_nodes(&p, mid).unwrap(), n + 1);
        }
    }

    #[test]
    fn sdf_s_wave_matches_closed_form() {
        let m = h2();
        let p = RadialProblem::for_sdf(&m, 0).unwrap();
        for n in [0, 5] {
            let s = solve_bound_state(&p, n).unwrap();
            assert!((s.energy - m.energy(n, 0).unwrap()).abs() < 1e-8, "n={n}");
        }
    }

    #[test]
    fn grid_halving_changes_levels_below_1e8() {
        let m = h2();
        for (n, l) in [(0, 0), (5, 10)] {
            let p = RadialProblem::for_sdf(&m, l).unwrap();
            let coarse = solve_bound_state(&p, n).unwrap().energy;
            let fine = solve_bound_state(&p.refined(), n).unwrap().energy;
            assert!(
                (coarse - fine).abs() < 1e-8,
                "({n},{l}): {:e}",
                coarse - fine
            );
        }
    }
}
