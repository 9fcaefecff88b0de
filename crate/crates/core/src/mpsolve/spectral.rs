//! Morse index and tail decay fit.

use serde::Serialize;

use super::disc::{Discretization, PIN};
use crate::banded::SymBand;
use crate::constants::decay_roots;
use crate::error::{Error, Result};
use crate::gridfn::GridFunction;
use crate::potential::Potential;

/// Relative shift separating genuine negative directions from roundoff.
pub const MORSE_REL_TOL: f64 = 1e-8;

/// Number of eigenvalues of the second variation below −1e−8·scale,
/// scale = max(1, max|V_uu(u)|).
pub fn morse_index_disc(disc: &Discretization, u: &[f64]) -> Result<usize> {
    let mut h = disc.hessian(u);
    let scale = u[PIN..disc.n - PIN]
        .iter()
        .fold(1.0f64, |m, &v| m.max(disc.potential.v_uu(v).abs()));
    h.add_diag(MORSE_REL_TOL * scale);
    h.negative_count()
}

pub fn morse_index(u: &GridFunction, beta: f64, p: Potential) -> Result<usize> {
    morse_index_disc(&Discretization::for_grid(u, beta, p)?, u.values())
}

/// Negative directions of the form restricted to span{φ_i}, with V_uu given
/// pointwise. Used as a self-test of the index detector.
pub fn form_index_on_span(disc: &Discretization, v_uu: &[f64], phis: &[Vec<f64>]) -> Result<usize> {
    let m = phis.len();
    let mut q = SymBand::zeros(m, m.saturating_sub(1));
    let b2 = disc.beta * disc.beta;
    let parts: Vec<(Vec<f64>, Vec<f64>)> = phis.iter().map(|p| disc.d1_d2(p)).collect();
    for i in 0..m {
        for j in 0..=i {
            let (a1, a2) = &parts[i];
            let (c1, c2) = &parts[j];
            let mut s = 0.0;
            for k in 0..disc.n {
                s += a2[k] * c2[k] - b2 * a1[k] * c1[k] + v_uu[k] * phis[i][k] * phis[j][k];
            }
            q.set(i, j, s * disc.dx);
        }
    }
    q.negative_count()
}

/// Fitted and theoretical tail decay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub tau_fit: f64,
    pub delta_fit: f64,
    pub tau_theory: f64,
    pub delta_theory: f64,
    pub extrema: usize,
}

/// Extrema of |u| on x ≥ x_min with lo < |u| < hi, refined by a parabola.
fn tail_extrema(u: &GridFunction, x_min: f64, x_max: f64, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let v = u.values();
    let mut out = Vec::new();
    for i in 1..v.len() - 1 {
        let x = u.x(i);
        if x < x_min || x > x_max {
            continue;
        }
        let (a, b, c) = (v[i - 1].abs(), v[i].abs(), v[i + 1].abs());
        if b >= a && b > c && b > lo && b < hi {
            // parabola through the three samples of u itself (smooth at a peak)
            let (p, q, r) = (v[i - 1], v[i], v[i + 1]);
            let den = p - 2.0 * q + r;
            let (shift, peak) = if den != 0.0 {
                let s = 0.5 * (p - r) / den;
                (s, q - 0.25 * (p - r) * s)
            } else {
                (0.0, q)
            };
            out.push((x + shift * u.dx(), peak.abs()));
        }
    }
    out
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Least-squares fit of the right tail, away from the clamped end.
pub fn fit_decay_samples(u: &GridFunction) -> Result<(f64, f64, usize)> {
    let ext = tail_extrema(u, 0.0, u.x_right() - 2.0, 1e-11, 1e-3);
    if ext.len() < 3 {
        return Err(Error::InsufficientTail { found: ext.len() });
    }
    let logs: Vec<(f64, f64)> = ext.iter().map(|&(x, a)| (x, a.ln())).collect();
    let tau = -slope(&logs);
    let spacing: Vec<(f64, f64)> = ext
        .iter()
        .enumerate()
        .map(|(k, &(x, _))| (k as f64, x))
        .collect();
    let delta = std::f64::consts::PI / slope(&spacing);
    Ok((tau, delta, ext.len()))
}

pub fn fit_decay(u: &GridFunction, beta: f64, p: Potential) -> Result<DecayFit> {
    let (tau_fit, delta_fit, extrema) = fit_decay_samples(u)?;
    let th = decay_roots(beta, p.c0())?;
    Ok(DecayFit {
        tau_fit,
        delta_fit,
        tau_theory: th.tau,
        delta_theory: th.delta,
        extrema,
    })
}
