//! Integrating-factor pseudo-spectral time stepping for
//! `∂ₜθ + u·∇θ + Λ^κθ = 0` and the frozen-velocity Picard iterates.

mod initial;

pub use initial::InitialData;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gevrey::{analyticity_radius_estimate, heat_semigroup, riesz_velocity};
use crate::littlewood_paley::{besov_norm, BesovParams, DyadicSystem};
use crate::spectral::{
    forward_transform, inverse_transform_unchecked, lp_norm, Grid, RealField, SpectralField,
};
use crate::{Error, Result};

/// Equation convention written into every trajectory's metadata.
pub const SIGN_CONVENTION: &str =
    "d_t theta + u . grad theta + Lambda^kappa theta = 0, u = (-R2 theta, R1 theta)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dealias {
    TwoThirds,
    None,
}

impl fmt::Display for Dealias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dealias::TwoThirds => "two-thirds",
            Dealias::None => "none",
        })
    }
}

impl FromStr for Dealias {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-thirds" | "2/3" => Ok(Dealias::TwoThirds),
            "none" => Ok(Dealias::None),
            other => Err(Error::Config(format!(
                "unknown dealias rule `{other}` (expected two-thirds or none)"
            ))),
        }
    }
}

impl Dealias {
    /// Keep-mask over the grid: the zero mode is always dropped, and the
    /// two-thirds rule also drops every mode with `|m_i| > n/3`.
    pub fn mask(&self, grid: &Grid) -> Vec<bool> {
        let cut = (grid.n() / 3) as i64;
        (0..grid.len())
            .map(|i| {
                let (a, b) = grid.frequencies(i);
                if a == 0 && b == 0 {
                    return false;
                }
                match self {
                    Dealias::TwoThirds => a.abs() <= cut && b.abs() <= cut,
                    Dealias::None => true,
                }
            })
            .collect()
    }
}

/// What the per-record diagnostics measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSpec {
    /// Integrability of the `lp` column.
    pub p: f64,
    /// Norm of the `besov` column.
    pub besov: BesovParams,
    /// Gevrey exponent used by the radius fit.
    pub alpha: f64,
}

impl Default for DiagnosticsSpec {
    fn default() -> Self {
        DiagnosticsSpec {
            p: 2.0,
            besov: BesovParams {
                s: 1.2,
                p: 2.0,
                q: 2.0,
            },
            alpha: 0.4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid: Grid,
    pub kappa: f64,
    pub dt: f64,
    pub t_end: f64,
    pub dealias: Dealias,
    pub picard_depth: usize,
    pub initial_data: InitialData,
    /// Steps between recorded snapshots; the final state is always recorded.
    pub record_every: usize,
    pub diagnostics: DiagnosticsSpec,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            grid: Grid::periodic(128).expect("128 is a valid grid size"),
            kappa: 0.8,
            dt: 0.01,
            t_end: 0.5,
            dealias: Dealias::TwoThirds,
            picard_depth: 6,
            initial_data: InitialData::default(),
            record_every: 5,
            diagnostics: DiagnosticsSpec::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end >= self.dt && self.t_end.is_finite()) {
            return Err(Error::Config(format!(
                "t_end must be at least dt, got t_end={} dt={}",
                self.t_end, self.dt
            )));
        }
        if !(self.kappa > 0.0 && self.kappa <= 2.0) {
            return Err(Error::Config(format!(
                "kappa must lie in (0, 2], got {}",
                self.kappa
            )));
        }
        if self.record_every == 0 {
            return Err(Error::Config("record_every must be at least 1".into()));
        }
        BesovParams::new(
            self.diagnostics.besov.s,
            self.diagnostics.besov.p,
            self.diagnostics.besov.q,
        )?;
        if self.diagnostics.p.is_nan() || self.diagnostics.p < 1.0 {
            return Err(Error::Config(format!(
                "diagnostic p must be >= 1, got {}",
                self.diagnostics.p
            )));
        }
        if !(self.diagnostics.alpha > 0.0 && self.diagnostics.alpha <= 1.0) {
            return Err(Error::Config(format!(
                "diagnostic alpha must lie in (0, 1], got {}",
                self.diagnostics.alpha
            )));
        }
        Ok(())
    }

    /// Step count and the length of the final step, which is shortened so
    /// the run ends exactly at `t_end`.
    fn schedule(&self) -> (usize, f64) {
        let ratio = self.t_end / self.dt;
        let full = (ratio + 1e-9).floor() as usize;
        let rest = self.t_end - full as f64 * self.dt;
        if rest > 1e-9 * self.dt {
            (full + 1, rest)
        } else {
            (full, self.dt)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub t: f64,
    pub l2: f64,
    pub lp: f64,
    pub besov: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub config: SolverConfig,
    /// Picard level, `None` for the full nonlinear solve.
    pub level: Option<usize>,
    pub snapshots: Vec<(f64, SpectralField)>,
    pub diagnostics: Vec<DiagnosticRecord>,
    pub warnings: Vec<String>,
    pub metadata: Vec<(String, String)>,
}

impl Trajectory {
    fn new(config: &SolverConfig, level: Option<usize>) -> Self {
        let mut metadata = vec![("equation".to_string(), SIGN_CONVENTION.to_string())];
        metadata.push(("scheme".into(), "integrating-factor Heun".into()));
        if let Some(n) = level {
            metadata.push(("picard_level".into(), n.to_string()));
            metadata.push((
                "frozen_velocity".into(),
                "u^n = (-R2 theta^n, R1 theta^n)".into(),
            ));
        }
        Trajectory {
            config: config.clone(),
            level,
            snapshots: Vec::new(),
            diagnostics: Vec::new(),
            warnings: Vec::new(),
            metadata,
        }
    }

    /// Time of the last recorded state.
    pub fn horizon(&self) -> f64 {
        self.snapshots.last().map_or(0.0, |s| s.0)
    }

    pub fn last(&self) -> Option<&SpectralField> {
        self.snapshots.last().map(|s| &s.1)
    }

    pub fn diagnostics_csv(&self) -> String {
        let mut out = String::from("t,l2,lp,besov,radius\n");
        for d in &self.diagnostics {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                d.t, d.l2, d.lp, d.besov, d.radius
            ));
        }
        out
    }

    fn record(&mut self, sys: &DyadicSystem, t: f64, theta: &SpectralField) -> Result<()> {
        let spec = &self.config.diagnostics;
        let real = RealField::new(*theta.grid(), real_part(theta))?;
        let radius = if theta.is_zero() {
            0.0
        } else {
            analyticity_radius_estimate(theta, spec.alpha)?.gamma
        };
        self.diagnostics.push(DiagnosticRecord {
            t,
            l2: theta.l2_norm(),
            lp: lp_norm(&real, spec.p)?,
            besov: besov_norm(sys, theta, spec.besov)?.value,
            radius,
        });
        self.snapshots.push((t, theta.clone()));
        Ok(())
    }
}

fn real_part(f: &SpectralField) -> Vec<f64> {
    inverse_transform_unchecked(f)
        .into_iter()
        .map(|c| c.re)
        .collect()
}

fn physical(f: &SpectralField) -> Vec<f64> {
    real_part(f)
}

fn gradient(theta: &SpectralField) -> (SpectralField, SpectralField) {
    let g = *theta.grid();
    let mut d1 = SpectralField::zeros(g);
    let mut d2 = SpectralField::zeros(g);
    for (i, c) in theta.coeffs().iter().enumerate() {
        if *c == Complex64::default() {
            continue;
        }
        let k = g.wavevector(i);
        d1.coeffs_mut()[i] = c * Complex64::new(0.0, k[0]);
        d2.coeffs_mut()[i] = c * Complex64::new(0.0, k[1]);
    }
    (d1, d2)
}

fn masked(f: &SpectralField, mask: &[bool]) -> SpectralField {
    let mut out = f.clone();
    for (c, keep) in out.coeffs_mut().iter_mut().zip(mask) {
        if !keep {
            *c = Complex64::default();
        }
    }
    out
}

/// Physical-space velocity `u = (−R₂θ, R₁θ)` of a (masked) field.
fn velocity_values(theta: &SpectralField) -> Result<(Vec<f64>, Vec<f64>)> {
    let (u1, u2) = riesz_velocity(theta)?;
    Ok((physical(&u1), physical(&u2)))
}

/// `u·∇θ` with `u` given at the collocation points, masked by `mask`.
fn transport(
    u: &(Vec<f64>, Vec<f64>),
    theta: &SpectralField,
    mask: &[bool],
) -> Result<SpectralField> {
    let (d1, d2) = gradient(theta);
    let (g1, g2) = (physical(&d1), physical(&d2));
    let values: Vec<f64> = (0..g1.len())
        .map(|i| u.0[i] * g1[i] + u.1[i] * g2[i])
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("transport product is not finite".into()));
    }
    let prod = forward_transform(&RealField::new(*theta.grid(), values)?);
    Ok(masked(&prod, mask))
}

/// Spectral coefficients of `u·∇θ`, `u = (−R₂θ, R₁θ)`.
///
/// With the two-thirds rule the input is truncated before the product and
/// the output after it; the zero mode of the output is always removed.
pub fn nonlinear_term(theta: &SpectralField, dealias: Dealias) -> Result<SpectralField> {
    let mask = dealias.mask(theta.grid());
    let input = masked(theta, &mask);
    let u = velocity_values(&input)?;
    transport(&u, &input, &mask)
}

/// Advection by a frozen velocity field, `u^n·∇v` with `u^n` built from
/// `frozen`.
pub fn frozen_transport(
    frozen: &SpectralField,
    v: &SpectralField,
    dealias: Dealias,
) -> Result<SpectralField> {
    let mask = dealias.mask(v.grid());
    let u = velocity_values(&masked(frozen, &mask))?;
    transport(&u, &masked(v, &mask), &mask)
}

/// One-step integrator with the factors `exp(−dt|k|^κ)` cached.
pub struct Stepper {
    grid: Grid,
    dt: f64,
    dealias: Dealias,
    mask: Vec<bool>,
    decay: Vec<f64>,
}

impl Stepper {
    pub fn new(grid: Grid, kappa: f64, dt: f64, dealias: Dealias) -> Self {
        let decay = (0..grid.len())
            .map(|i| (-dt * grid.wavenumber(i).powf(kappa)).exp())
            .collect();
        Stepper {
            grid,
            dt,
            dealias,
            mask: dealias.mask(&grid),
            decay,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn propagate(&self, f: &SpectralField) -> SpectralField {
        f.mul_elementwise(&self.decay)
    }

    /// `dt·k_max·max|u|`; the scheme is trusted when this is at most 1.
    pub fn courant_number(&self, theta: &SpectralField) -> Result<f64> {
        let (u1, u2) = velocity_values(&masked(theta, &self.mask))?;
        let umax = u1
            .iter()
            .zip(&u2)
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max);
        Ok(self.dt * self.grid.k_max() * umax)
    }

    /// Heun step with integrating factor `E = exp(−dtΛ^κ)`:
    ///
    /// ```text
    /// v* = E(v − dt N(v)),   v⁺ = E(v − dt/2 N(v)) − dt/2 N(v*)
    /// ```
    ///
    /// `n0` and `n1` evaluate the transport term at the start and end of the
    /// step.
    fn heun(
        &self,
        v: &SpectralField,
        n0: impl Fn(&SpectralField) -> Result<SpectralField>,
        n1: impl Fn(&SpectralField) -> Result<SpectralField>,
    ) -> Result<SpectralField> {
        let a = n0(v)?;
        if a.is_zero() {
            return Ok(self.propagate(v));
        }
        let predictor = self.propagate(&v.combine(1.0, &a, -self.dt)?);
        let b = n1(&predictor)?;
        let mut out = self
            .propagate(&v.combine(1.0, &a, -0.5 * self.dt)?)
            .combine(1.0, &b, -0.5 * self.dt)?;
        out.coeffs_mut()[0] = v.coeffs()[0];
        if out
            .coeffs()
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::Domain("non-finite coefficient after step".into()));
        }
        Ok(out)
    }

    pub fn step(&self, theta: &SpectralField) -> Result<SpectralField> {
        let n = |v: &SpectralField| nonlinear_term(v, self.dealias);
        self.heun(theta, n, n)
    }

    /// Step of `∂ₜv + u^n·∇v + Λ^κv = 0` with the velocity frozen from
    /// `frozen_start` and `frozen_end` at the two ends of the step.
    pub fn step_frozen(
        &self,
        v: &SpectralField,
        frozen_start: &SpectralField,
        frozen_end: &SpectralField,
    ) -> Result<SpectralField> {
        let u0 = velocity_values(&masked(frozen_start, &self.mask))?;
        let u1 = velocity_values(&masked(frozen_end, &self.mask))?;
        self.heun(
            v,
            |w| transport(&u0, &masked(w, &self.mask), &self.mask),
            |w| transport(&u1, &masked(w, &self.mask), &self.mask),
        )
    }
}

/// One integrating-factor Heun step of the full equation.
pub fn step(theta: &SpectralField, dt: f64, config: &SolverConfig) -> Result<SpectralField> {
    Stepper::new(*theta.grid(), config.kappa, dt, config.dealias).step(theta)
}

fn blow_up(time: f64, traj: Trajectory) -> Error {
    Error::BlowUp {
        time,
        last: Box::new(traj),
    }
}

/// Integrates the full equation from the configured initial data.
///
/// Snapshots and diagnostics are recorded at `t = 0`, every
/// `record_every` steps and at the final time. A blow-up returns the
/// trajectory up to the last finite state.
pub fn solve(config: &SolverConfig) -> Result<Trajectory> {
    config.validate()?;
    let theta0 = config.initial_data.build(config.grid)?;
    solve_from(config, theta0)
}

/// [`solve`] from an explicit initial field.
pub fn solve_from(config: &SolverConfig, theta0: SpectralField) -> Result<Trajectory> {
    config.validate()?;
    let sys = DyadicSystem::new(config.grid)?;
    let (steps, last_dt) = config.schedule();
    let stepper = Stepper::new(config.grid, config.kappa, config.dt, config.dealias);
    let tail = (last_dt != config.dt)
        .then(|| Stepper::new(config.grid, config.kappa, last_dt, config.dealias));
    let mut traj = Trajectory::new(config, None);
    let mut theta = theta0.without_mean();
    traj.record(&sys, 0.0, &theta)?;
    let mut warned = false;
    for k in 0..steps {
        let s = if k + 1 == steps {
            tail.as_ref().unwrap_or(&stepper)
        } else {
            &stepper
        };
        let t = k as f64 * config.dt;
        if !warned {
            let c = s.courant_number(&theta)?;
            if c > 1.0 {
                traj.warnings.push(format!(
                    "t = {t}: dt*k_max*max|u| = {c:.3} exceeds 1; the step may be unstable"
                ));
                warned = true;
            }
        }
        let next = match s.step(&theta) {
            Ok(v) => v,
            Err(_) => {
                if traj.horizon() < t {
                    traj.record(&sys, t, &theta)?;
                }
                return Err(blow_up(t + s.dt(), traj));
            }
        };
        theta = next;
        let t_next = if k + 1 == steps {
            config.t_end
        } else {
            (k + 1) as f64 * config.dt
        };
        if (k + 1) % config.record_every == 0 || k + 1 == steps {
            traj.record(&sys, t_next, &theta)?;
        }
    }
    Ok(traj)
}

/// Runs the Picard scheme: `θ⁰` is the heat flow of the initial data and
/// each `θ^{n+1}` solves the linear transport–diffusion equation with the
/// velocity frozen from `θ^n`. All levels advance together on one time
/// grid, so level `n+1` sees `θ^n` at both ends of each step.
pub fn picard_solve(config: &SolverConfig) -> Result<Vec<Trajectory>> {
    config.validate()?;
    let theta0 = config.initial_data.build(config.grid)?;
    picard_solve_from(config, theta0)
}

/// [`picard_solve`] from an explicit initial field.
pub fn picard_solve_from(config: &SolverConfig, theta0: SpectralField) -> Result<Vec<Trajectory>> {
    config.validate()?;
    let sys = DyadicSystem::new(config.grid)?;
    let theta0 = theta0.without_mean();
    let depth = config.picard_depth;
    let (steps, last_dt) = config.schedule();
    let stepper = Stepper::new(config.grid, config.kappa, config.dt, config.dealias);
    let tail = (last_dt != config.dt)
        .then(|| Stepper::new(config.grid, config.kappa, last_dt, config.dealias));
    let mut trajs: Vec<Trajectory> = (0..=depth)
        .map(|n| Trajectory::new(config, Some(n)))
        .collect();
    let mut levels = vec![theta0.clone(); depth + 1];
    for (traj, v) in trajs.iter_mut().zip(&levels) {
        traj.record(&sys, 0.0, v)?;
    }
    for k in 0..steps {
        let s = if k + 1 == steps {
            tail.as_ref().unwrap_or(&stepper)
        } else {
            &stepper
        };
        let t_next = if k + 1 == steps {
            config.t_end
        } else {
            (k + 1) as f64 * config.dt
        };
        let mut next = Vec::with_capacity(depth + 1);
        next.push(heat_semigroup(&theta0, t_next, config.kappa)?);
        for n in 1..=depth {
            match s.step_frozen(&levels[n], &levels[n - 1], &next[n - 1]) {
                Ok(v) => next.push(v),
                Err(_) => {
                    let mut traj = trajs.swap_remove(n);
                    let t = k as f64 * config.dt;
                    if traj.horizon() < t {
                        traj.record(&sys, t, &levels[n])?;
                    }
                    return Err(blow_up(t + s.dt(), traj));
                }
            }
        }
        levels = next;
        if (k + 1) % config.record_every == 0 || k + 1 == steps {
            for (traj, v) in trajs.iter_mut().zip(&levels) {
                traj.record(&sys, t_next, v)?;
            }
        }
    }
    Ok(trajs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random_field;

    fn cfg(n: usize) -> SolverConfig {
        SolverConfig {
            grid: Grid::periodic(n).unwrap(),
            kappa: 0.8,
            dt: 0.01,
            t_end: 0.1,
            record_every: 2,
            picard_depth: 2,
            ..SolverConfig::default()
        }
    }

    fn smooth(g: Grid, seed: u64, amp: f64) -> SpectralField {
        random_field(g, seed, |r| {
            if r == 0.0 {
                0.0
            } else {
                amp * (-0.5 * r).exp()
            }
        })
    }

    #[test]
    fn nonlinear_term_vanishes_on_zero_and_shear() {
        let g = Grid::periodic(32).unwrap();
        assert!(nonlinear_term(&SpectralField::zeros(g), Dealias::TwoThirds)
            .unwrap()
            .is_zero());
        let theta = SpectralField::cosine(g, (1, 0), 1.0);
        assert!(nonlinear_term(&theta, Dealias::None).unwrap().max_abs() < 1e-16);
    }

    #[test]
    fn transport_conserves_l2() {
        let g = Grid::periodic(64).unwrap();
        let theta = smooth(g, 3, 1.0);
        for d in [Dealias::TwoThirds, Dealias::None] {
            let nl = nonlinear_term(&theta, d).unwrap();
            // ∫θ (u·∇θ) = L² Σ θ̂(k) conj(N̂(k)), real part
            let integral: f64 = theta
                .coeffs()
                .iter()
                .zip(nl.coeffs())
                .map(|(a, b)| (a * b.conj()).re)
                .sum::<f64>()
                * g.area();
            let scale = theta.l2_norm().powi(3);
            assert!(integral.abs() < 1e-10 * scale, "{d}: {integral}");
        }
    }

    #[test]
    fn linear_step_is_heat_flow() {
        let c = cfg(32);
        let theta = SpectralField::cosine(c.grid, (1, 0), 1.0);
        let s = step(&theta, 0.05, &c).unwrap();
        let h = heat_semigroup(&theta, 0.05, c.kappa).unwrap();
        assert!(s.sub(&h).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn mean_is_kept_zero() {
        let c = cfg(32);
        let theta = smooth(c.grid, 4, 1.0);
        let s = step(&theta, 0.01, &c).unwrap();
        assert_eq!(s.coeffs()[0], Complex64::default());
    }

    #[test]
    fn heat_only_run_matches_semigroup() {
        let mut c = cfg(32);
        c.initial_data = InitialData::Mode {
            m: (2, 0),
            amplitude: 0.7,
        };
        let traj = solve(&c).unwrap();
        let theta0 = c.initial_data.build(c.grid).unwrap();
        for (t, f) in &traj.snapshots {
            let h = heat_semigroup(&theta0, *t, c.kappa).unwrap();
            assert!(f.sub(&h).unwrap().max_abs() < 1e-10);
        }
        assert_eq!(traj.horizon(), c.t_end);
        assert!(traj.snapshots.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn partial_final_step_lands_on_t_end() {
        let mut c = cfg(16);
        c.t_end = 0.035;
        let traj = solve(&c).unwrap();
        assert!((traj.horizon() - 0.035).abs() < 1e-15);
    }

    #[test]
    fn zero_data_stays_zero() {
        let mut c = cfg(16);
        c.initial_data = InitialData::Zero;
        let traj = solve(&c).unwrap();
        assert!(traj.snapshots.iter().all(|(_, f)| f.is_zero()));
        assert!(traj
            .diagnostics
            .iter()
            .all(|d| d.l2 == 0.0 && d.besov == 0.0));
    }

    #[test]
    fn huge_dt_warns() {
        let mut c = cfg(32);
        c.initial_data = InitialData::VortexPair {
            amplitude: 50.0,
            width: 0.5,
            separation: 1.5,
        };
        c.dt = 1.0;
        c.t_end = 2.0;
        match solve(&c) {
            Ok(t) => assert!(!t.warnings.is_empty()),
            Err(Error::BlowUp { last, .. }) => assert!(!last.warnings.is_empty()),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn picard_depth_zero_is_heat_flow() {
        let mut c = cfg(32);
        c.picard_depth = 0;
        let levels = picard_solve(&c).unwrap();
        assert_eq!(levels.len(), 1);
        let theta0 = c.initial_data.build(c.grid).unwrap();
        for (t, f) in &levels[0].snapshots {
            let h = heat_semigroup(&theta0, *t, c.kappa).unwrap();
            assert!(f.sub(&h).unwrap().max_abs() < 1e-14);
        }
    }

    #[test]
    fn dealias_mask_counts() {
        let g = Grid::periodic(16).unwrap();
        let mask = Dealias::TwoThirds.mask(&g);
        // |m_i| ≤ 5 on each axis, minus the zero mode
        assert_eq!(mask.iter().filter(|k| **k).count(), 11 * 11 - 1);
        assert_eq!(Dealias::None.mask(&g).iter().filter(|k| **k).count(), 255);
        assert_eq!("two-thirds".parse::<Dealias>().unwrap(), Dealias::TwoThirds);
        assert!("half".parse::<Dealias>().is_err());
    }

    #[test]
    fn config_validation() {
        let c = cfg(16);
        assert!(c.validate().is_ok());
        assert!(SolverConfig {
            dt: 0.0,
            ..c.clone()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            t_end: 0.001,
            ..c.clone()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            kappa: 2.5,
            ..c.clone()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            record_every: 0,
            ..c
        }
        .validate()
        .is_err());
    }

    #[test]
    fn initial_data_profiles() {
        let g = Grid::periodic(32).unwrap();
        let ring = InitialData::Ring {
            radius: 3,
            amplitude: 1.0,
        }
        .build(g)
        .unwrap();
        assert!(ring.is_hermitian());
        // (±3,0), (0,±3), (±3,±1), (±1,±3), (±2,±2)
        assert_eq!(ring.occupied(), 16);
        let pair = InitialData::VortexPair {
            amplitude: 1.0,
            width: 0.4,
            separation: 2.0,
        }
        .build(g)
        .unwrap();
        assert!(pair.mean().abs() < 1e-15);
        let bp = BesovParams::new(1.2, 2.0, 2.0).unwrap();
        let rb = InitialData::RandomBand {
            norm: 0.3,
            besov: bp,
            seed: 5,
        }
        .build(g)
        .unwrap();
        let sys = DyadicSystem::new(g).unwrap();
        assert!((besov_norm(&sys, &rb, bp).unwrap().value - 0.3).abs() < 1e-12);
        assert!(InitialData::Ring {
            radius: 16,
            amplitude: 1.0
        }
        .build(g)
        .is_err());
        assert!(InitialData::Mode {
            m: (40, 0),
            amplitude: 1.0
        }
        .build(g)
        .is_err());
    }
}
