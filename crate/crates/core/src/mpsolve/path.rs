//! Endpoint construction and the mountain-pass path deformation.

use serde::Serialize;

use super::disc::Discretization;
use super::SolverSettings;
use crate::error::{Error, Result};
use crate::gridfn::GridFunction;
use crate::par;
use crate::potential::Potential;

/// How the path endpoint was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum EndpointMethod {
    /// t·v(λx) with v(x) = −(1 − x²)² on [−1, 1].
    Dilation {
        lambda: f64,
        t: f64,
        quadratic_part: f64,
    },
    /// A relaxed plateau: a local minimum of the energy away from 0.
    RelaxedPlateau {
        width: f64,
        descent_steps: usize,
        residual_sup: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Endpoint {
    pub profile: Vec<f64>,
    pub energy: f64,
    pub method: EndpointMethod,
}

fn bump(disc: &Discretization, lambda: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..disc.n)
        .map(|i| {
            let y = lambda * disc.x(i);
            if y.abs() < 1.0 {
                -(1.0 - y * y).powi(2)
            } else {
                0.0
            }
        })
        .collect();
    disc.pin(&mut v);
    v
}

/// Dilation candidates for the endpoint scan.
pub fn dilation_candidates(beta: f64) -> [f64; 4] {
    [beta / 4.0, beta / 2.0, beta, 2.0 * beta]
}

/// Scans dilations for a negative quadratic part, then doubles t until the
/// energy of t·v_λ is negative.
pub fn construct_endpoint(disc: &Discretization) -> Result<Endpoint> {
    let beta = disc.beta;
    if !(beta > 0.0) {
        return Err(Error::EndpointFailure(format!(
            "beta must be positive, got {beta}"
        )));
    }
    let half_span = -disc.x_left - disc.dx * super::disc::PIN as f64;
    let quad = Discretization::new(disc.x_left, disc.dx, disc.n, beta, disc.potential)?;
    for lambda in dilation_candidates(beta) {
        if 1.0 / lambda >= half_span {
            continue;
        }
        let v = bump(disc, lambda);
        let e = quad.energy(&v)?;
        let q = 2.0 * (e.bending + e.gradient_term);
        if q >= 0.0 {
            continue;
        }
        let mut t = 1.0;
        while t < 1e6 {
            let tv: Vec<f64> = v.iter().map(|x| t * x).collect();
            let en = disc.energy(&tv)?.total;
            if en < 0.0 {
                return Ok(Endpoint {
                    profile: tv,
                    energy: en,
                    method: EndpointMethod::Dilation {
                        lambda,
                        t,
                        quadratic_part: q,
                    },
                });
            }
            t *= 2.0;
        }
    }
    Err(Error::EndpointFailure(format!(
        "no dilation of the bump reaches negative energy at beta = {beta} ({})",
        disc.potential
    )))
}

/// Relaxes a depth −2 plateau of the given width by Sobolev descent.
pub fn relaxed_plateau_endpoint(disc: &Discretization, width: f64) -> Result<Endpoint> {
    let mut u: Vec<f64> = (0..disc.n)
        .map(|i| {
            let x = disc.x(i);
            -(((x + width / 2.0) / 2.0).tanh() - ((x - width / 2.0) / 2.0).tanh())
        })
        .collect();
    disc.pin(&mut u);
    let factor = disc.metric_factor();
    let mut steps = 0;
    let mut rs = f64::INFINITY;
    for k in 0..20000 {
        let r = disc.residual(&u);
        rs = r.iter().fold(0.0, |m, v| m.max(v.abs()));
        steps = k;
        if rs < 1e-9 {
            break;
        }
        let g = disc.sobolev(&factor, &r);
        for (a, b) in u.iter_mut().zip(&g) {
            *a -= 0.5 * b;
        }
    }
    let energy = disc.energy(&u)?.total;
    if u.iter().all(|v| v.abs() < 1e-3) {
        return Err(Error::EndpointFailure(
            "plateau relaxed back to zero".into(),
        ));
    }
    Ok(Endpoint {
        profile: u,
        energy,
        method: EndpointMethod::RelaxedPlateau {
            width,
            descent_steps: steps,
            residual_sup: rs,
        },
    })
}

/// Endpoint for a solve: the dilation scan, and for Swift–Hohenberg,
/// where the energy is bounded below along every ray, a relaxed plateau.
pub fn endpoint_for(disc: &Discretization) -> Result<Endpoint> {
    match construct_endpoint(disc) {
        Ok(e) => Ok(e),
        Err(Error::EndpointFailure(msg)) if disc.potential == Potential::SwiftHohenbergShifted => {
            log::info!("{msg}; using a relaxed plateau endpoint");
            relaxed_plateau_endpoint(disc, 4.0)
        }
        Err(e) => Err(e),
    }
}

/// Discretized path with node energies.
#[derive(Debug, Clone)]
pub struct PathState {
    pub nodes: Vec<Vec<f64>>,
    pub energies: Vec<f64>,
}

impl PathState {
    /// Straight path s·e, s uniform on [0, 1].
    pub fn straight(disc: &Discretization, end: &[f64], points: usize) -> Result<Self> {
        let nodes: Vec<Vec<f64>> = (0..points)
            .map(|k| {
                let s = k as f64 / (points - 1) as f64;
                end.iter().map(|v| s * v).collect()
            })
            .collect();
        let energies = nodes
            .iter()
            .map(|u| disc.energy(u).map(|e| e.total))
            .collect::<Result<_>>()?;
        Ok(PathState { nodes, energies })
    }

    /// Index of the highest interior node; ties go to the lower index.
    pub fn max_index(&self) -> usize {
        let mut k = 1;
        for i in 2..self.nodes.len() - 1 {
            if self.energies[i] > self.energies[k] {
                k = i;
            }
        }
        k
    }

    /// Equal H²-arc-length redistribution by linear interpolation.
    pub fn respread(&mut self, disc: &Discretization) {
        let p = self.nodes.len();
        let mut s = vec![0.0; p];
        for i in 1..p {
            let d: Vec<f64> = self.nodes[i]
                .iter()
                .zip(&self.nodes[i - 1])
                .map(|(a, b)| a - b)
                .collect();
            s[i] = s[i - 1] + disc.h2_inner(&d, &d).max(0.0).sqrt();
        }
        let total = s[p - 1];
        if !(total > 0.0) {
            return;
        }
        let old = self.nodes.clone();
        for k in 1..p - 1 {
            let target = total * k as f64 / (p - 1) as f64;
            let mut j = s.partition_point(|&v| v <= target).saturating_sub(1);
            j = j.min(p - 2);
            let span = s[j + 1] - s[j];
            let w = if span > 0.0 {
                (target - s[j]) / span
            } else {
                0.0
            };
            self.nodes[k] = old[j]
                .iter()
                .zip(&old[j + 1])
                .map(|(a, b)| (1.0 - w) * a + w * b)
                .collect();
        }
    }
}

/// Result of the path deformation.
#[derive(Debug, Clone)]
pub struct MountainPass {
    pub profile: Vec<f64>,
    /// Path maximum at termination.
    pub c_beta: f64,
    /// Maximum over the initial straight path.
    pub straight_max: f64,
    pub iterations: usize,
    pub residual_sup: f64,
    pub path: PathState,
}

/// String method with a climbing image in the H² metric. Interior nodes
/// descend perpendicular to the path, the highest node climbs along it, and
/// nodes are re-spread by arc length every few iterations.
pub fn mountain_pass(
    disc: &Discretization,
    end: &[f64],
    cfg: &SolverSettings,
) -> Result<MountainPass> {
    let p = cfg.path_points;
    if p < 3 {
        return Err(Error::InvalidArgument(format!(
            "path needs at least 3 points, got {p}"
        )));
    }
    let mut path = PathState::straight(disc, end, p)?;
    let straight_max = path
        .energies
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let factor = disc.metric_factor();
    let scale = 1.0 + path.energies[p - 1].abs();
    let mut best = (f64::INFINITY, 0usize);
    for it in 0..cfg.max_iter {
        let residuals: Vec<Vec<f64>> =
            par::map_range(cfg.execution, p - 2, |i| disc.residual(&path.nodes[i + 1]));
        let k = path.max_index();
        let ck = path.energies[k];
        if !(ck > 1e-12 * scale) {
            return Err(Error::MountainCollapse { max_energy: ck });
        }
        let rs = residuals[k - 1].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !rs.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "non-finite residual at iteration {it}"
            )));
        }
        if rs < best.0 {
            best = (rs, it);
        }
        if it % 100 == 0 {
            log::debug!("path iteration {it}: max node {k}, energy {ck:.10}, residual {rs:.3e}");
        }
        if rs < cfg.coarse_tol {
            return Ok(MountainPass {
                profile: path.nodes[k].clone(),
                c_beta: ck,
                straight_max,
                iterations: it,
                residual_sup: rs,
                path,
            });
        }
        let nodes = &path.nodes;
        let updated: Vec<Vec<f64>> = par::map_range(cfg.execution, p - 2, |m| {
            let i = m + 1;
            let r = &residuals[m];
            let g = disc.sobolev(&factor, r);
            let tau: Vec<f64> = nodes[i + 1]
                .iter()
                .zip(&nodes[i - 1])
                .map(|(a, b)| a - b)
                .collect();
            let tn = disc.h2_inner(&tau, &tau).sqrt();
            // <g, tau>_H2 = dx r.tau since P g = r
            let gt = if tn > 0.0 {
                disc.l2_inner(r, &tau) / tn
            } else {
                0.0
            };
            let c = if i == k { 2.0 } else { 1.0 };
            nodes[i]
                .iter()
                .zip(&g)
                .zip(&tau)
                .map(|((u, gi), ti)| u - cfg.step * (gi - c * gt * ti / tn.max(f64::MIN_POSITIVE)))
                .collect()
        });
        for (m, u) in updated.into_iter().enumerate() {
            path.nodes[m + 1] = u;
        }
        if (it + 1) % cfg.respread_every == 0 {
            path.respread(disc);
        }
        let energies: Vec<Result<f64>> = par::map_range(cfg.execution, p, |i| {
            disc.energy(&path.nodes[i]).map(|e| e.total)
        });
        path.energies = energies.into_iter().collect::<Result<_>>()?;
    }
    let k = path.max_index();
    let best_node = disc.grid(path.nodes[k].clone()).ok().map(Box::new);
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        residual: best.0,
        best: best_node,
    })
}

/// Endpoint plus path deformation on a grid function interface.
pub fn mountain_pass_grid(
    beta: f64,
    p: Potential,
    cfg: &SolverSettings,
) -> Result<(GridFunction, f64)> {
    let disc = Discretization::symmetric(cfg.domain_length, cfg.grid_points, beta, p)?;
    let end = endpoint_for(&disc)?;
    let mp = mountain_pass(&disc, &end.profile, cfg)?;
    Ok((disc.grid(mp.profile)?, mp.c_beta))
}
