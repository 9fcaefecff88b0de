//! Mountain-pass solver for the clamped discretization.

pub mod disc;
pub mod newton;
pub mod path;
pub mod spectral;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::certify::{self, CertificateChecks, LowerBound, PartitionCertificate};
use crate::constants::Thresholds;
use crate::error::{invalid, Error, Result};
use crate::gridfn::{Accuracy, GridFunction};
use crate::par::{self, Execution};
use crate::potential::Potential;
use crate::report::{fmt_f64, write_float_csv};

pub use disc::{energy, residual, Discretization, EnergyBreakdown};
pub use newton::{newton_polish, newton_polish_disc, NewtonOutcome, NewtonSpace};
pub use path::{
    construct_endpoint, endpoint_for, mountain_pass, mountain_pass_grid, EndpointMethod, PathState,
};
pub use spectral::{fit_decay, morse_index, DecayFit};

/// Residual sup above which a stagnated Newton run counts as failed.
pub const STAGNATION_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    /// Half-length L of the mesh [−L, L].
    pub domain_length: f64,
    /// Mesh nodes N, odd.
    pub grid_points: usize,
    /// Path nodes P.
    pub path_points: usize,
    /// Residual sup at which the path deformation hands over to Newton.
    pub coarse_tol: f64,
    pub newton_tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Path step in the H² metric.
    pub step: f64,
    pub respread_every: usize,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            domain_length: 40.0,
            grid_points: 2001,
            path_points: 41,
            coarse_tol: 0.2,
            newton_tol: 1e-8,
            max_iter: 5000,
            seed: 0,
            step: 0.3,
            respread_every: 5,
            execution: Execution::default(),
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.domain_length > 0.0) || !self.domain_length.is_finite() {
            return Err(invalid(format!(
                "domain length must be positive, got {}",
                self.domain_length
            )));
        }
        if self.grid_points % 2 == 0 {
            return Err(invalid(format!(
                "grid points must be odd, got {}",
                self.grid_points
            )));
        }
        if self.path_points < 3 {
            return Err(invalid(format!(
                "path points must be at least 3, got {}",
                self.path_points
            )));
        }
        if !(self.newton_tol > 0.0) || !(self.coarse_tol > 0.0) || !(self.step > 0.0) {
            return Err(invalid("tolerances and step must be positive"));
        }
        if self.respread_every == 0 || self.max_iter == 0 {
            return Err(invalid("max_iter and respread_every must be positive"));
        }
        Ok(())
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EndpointInfo {
    pub energy: f64,
    #[serde(flatten)]
    pub method: EndpointMethod,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub beta: f64,
    pub k0: f64,
    pub potential: Potential,
    pub settings: SolverSettings,
    #[serde(skip)]
    pub profile: GridFunction,
    /// Energy of the polished critical point.
    pub c_beta: f64,
    pub energy: EnergyBreakdown,
    /// Path maximum when the deformation stopped.
    pub path_max: f64,
    pub straight_path_max: f64,
    pub path_iterations: usize,
    pub endpoint: Option<EndpointInfo>,
    pub newton: NewtonOutcome,
    pub residual_sup: f64,
    pub pohozaev_sup: f64,
    pub morse_index: usize,
    pub decay_fit: Option<DecayFit>,
    pub decay_note: Option<String>,
    pub min_u: f64,
    pub max_u: f64,
    pub thresholds: Option<Thresholds>,
    pub certificate: Option<PartitionCertificate>,
    pub certificate_note: Option<String>,
    pub interval_bounds: Vec<LowerBound>,
    pub checks: CertificateChecks,
}

/// Cold solve: endpoint, path deformation, Newton polish, certification.
pub fn solve(beta: f64, p: Potential, k0: f64, settings: &SolverSettings) -> Result<SolveReport> {
    check_beta(beta)?;
    settings.validate()?;
    let disc = Discretization::symmetric(settings.domain_length, settings.grid_points, beta, p)?;
    let end = endpoint_for(&disc)?;
    log::info!(
        "endpoint for beta = {beta}: energy {:.6e} via {:?}",
        end.energy,
        end.method
    );
    let mp = mountain_pass(&disc, &end.profile, settings)?;
    log::info!(
        "path converged after {} iterations, max {:.10}",
        mp.iterations,
        mp.c_beta
    );
    let polished = polish(&disc, &mp.profile, settings.newton_tol)?;
    let info = EndpointInfo {
        energy: end.energy,
        method: end.method,
    };
    finish(
        &disc,
        k0,
        settings,
        polished,
        Some(info),
        mp.c_beta,
        mp.straight_max,
        mp.iterations,
    )
}

/// Solve seeded by a nearby profile on the same mesh, skipping the path.
pub fn solve_from(
    beta: f64,
    p: Potential,
    k0: f64,
    settings: &SolverSettings,
    seed: &GridFunction,
) -> Result<SolveReport> {
    check_beta(beta)?;
    settings.validate()?;
    let disc = Discretization::for_grid(seed, beta, p)?;
    let polished = polish(&disc, seed.values(), settings.newton_tol)?;
    let e = disc.energy(&polished.profile)?.total;
    finish(&disc, k0, settings, polished, None, e, f64::NAN, 0)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(invalid(format!(
            "beta must be positive and finite, got {beta}"
        )));
    }
    Ok(())
}

fn polish(disc: &Discretization, u0: &[f64], tol: f64) -> Result<NewtonOutcome> {
    let out = newton_polish_disc(disc, u0, tol)?;
    let rs = out.residual_sup();
    if !out.converged && rs > STAGNATION_LIMIT {
        return Err(Error::NonConvergence {
            iterations: out.iterations,
            residual: rs,
            best: disc.grid(out.profile).ok().map(Box::new),
        });
    }
    if !out.converged {
        log::info!("newton stopped at the roundoff floor, residual {rs:.3e}");
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    disc: &Discretization,
    k0: f64,
    settings: &SolverSettings,
    newton: NewtonOutcome,
    endpoint: Option<EndpointInfo>,
    path_max: f64,
    straight_path_max: f64,
    path_iterations: usize,
) -> Result<SolveReport> {
    let (beta, p) = (disc.beta, disc.potential);
    let profile = disc.grid(newton.profile.clone())?;
    let energy = disc.energy(profile.values())?;
    let residual_sup = disc.residual_sup(profile.values());
    let pohozaev_sup = certify::pohozaev_sup(&profile, beta, p)?;
    let morse = spectral::morse_index_disc(disc, profile.values())?;
    let (decay_fit, decay_note) = match fit_decay(&profile, beta, p) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (thresholds, certificate, certificate_note) = match Thresholds::new(beta, k0, p) {
        Ok(th) => {
            let cert = certify::partition(&profile, beta, p, &th)?;
            let note = cert
                .is_empty()
                .then(|| format!("u never reaches u* = {}", th.u_star));
            (Some(th), Some(cert), note)
        }
        Err(e) => (None, None, Some(format!("no thresholds: {e}"))),
    };
    let (checks, interval_bounds) =
        certify::assemble_checks(&profile, beta, p, certificate.as_ref(), pohozaev_sup, morse);
    Ok(SolveReport {
        beta,
        k0,
        potential: p,
        settings: *settings,
        c_beta: energy.total,
        energy,
        path_max,
        straight_path_max,
        path_iterations,
        endpoint,
        residual_sup,
        pohozaev_sup,
        morse_index: morse,
        decay_fit,
        decay_note,
        min_u: profile.min(),
        max_u: profile.max(),
        thresholds,
        certificate,
        certificate_note,
        interval_bounds,
        checks,
        newton,
        profile,
    })
}

/// One row of a β sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub beta: f64,
    pub c_beta: f64,
    pub morse_index: usize,
    pub tau_fit: f64,
    pub tau_theory: f64,
    pub min_u: f64,
}

impl SweepRow {
    pub fn from_report(r: &SolveReport) -> Self {
        let tau_theory =
            crate::constants::decay_roots(r.beta, r.potential.c0()).map_or(f64::NAN, |d| d.tau);
        SweepRow {
            beta: r.beta,
            c_beta: r.c_beta,
            morse_index: r.morse_index,
            tau_fit: r.decay_fit.map_or(f64::NAN, |d| d.tau_fit),
            tau_theory,
            min_u: r.min_u,
        }
    }
}

/// Solves over a β grid. Rows come back sorted by β. With `continuation`
/// each solve after the first is seeded by its predecessor and runs in
/// order; otherwise the points are independent and run concurrently.
pub fn sweep(
    betas: &[f64],
    p: Potential,
    k0: f64,
    settings: &SolverSettings,
    continuation: bool,
) -> Result<Vec<SweepRow>> {
    let mut betas = betas.to_vec();
    if betas.iter().any(|b| !b.is_finite()) {
        return Err(invalid("sweep betas must be finite"));
    }
    betas.sort_by(f64::total_cmp);
    if !continuation {
        // the inner path loop stays sequential; β points carry the parallelism
        let inner = settings.with_execution(Execution::Sequential);
        let reports = par::map(settings.execution, &betas, |&b| solve(b, p, k0, &inner));
        return reports
            .into_iter()
            .map(|r| r.map(|r| SweepRow::from_report(&r)))
            .collect();
    }
    let mut rows = Vec::with_capacity(betas.len());
    let mut prev: Option<GridFunction> = None;
    for &b in &betas {
        let seeded = prev.as_ref().map(|u| solve_from(b, p, k0, settings, u));
        let report = match seeded {
            Some(Ok(r)) if r.morse_index == 1 && r.c_beta > 0.0 => r,
            _ => solve(b, p, k0, settings)?,
        };
        rows.push(SweepRow::from_report(&report));
        prev = Some(report.profile);
    }
    Ok(rows)
}

pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record([
        "beta",
        "c_beta",
        "morse_index",
        "tau_fit",
        "tau_theory",
        "min_u",
    ])?;
    for r in rows {
        wr.write_record([
            fmt_f64(r.beta),
            fmt_f64(r.c_beta),
            r.morse_index.to_string(),
            fmt_f64(r.tau_fit),
            fmt_f64(r.tau_theory),
            fmt_f64(r.min_u),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

/// Profile table `x,u,du,d2u,residual,pohozaev`.
pub fn write_profile_csv<W: Write>(w: W, u: &GridFunction, beta: f64, p: Potential) -> Result<()> {
    let du = u.differentiate_with(1, Accuracy::Sixth)?;
    let d2u = u.differentiate_with(2, Accuracy::Sixth)?;
    let res = residual(u, beta, p)?;
    let poho = certify::pohozaev_residual(u, beta, p)?;
    let rows: Vec<Vec<f64>> = (0..u.len())
        .map(|i| {
            vec![
                u.x(i),
                u.values()[i],
                du.values()[i],
                d2u.values()[i],
                res.values()[i],
                poho.values()[i],
            ]
        })
        .collect();
    write_float_csv(w, &["x", "u", "du", "d2u", "residual", "pohozaev"], &rows)
}
