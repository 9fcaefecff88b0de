//! Certificates: first integral, energy partition and interval bounds.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::constants::Thresholds;
use crate::error::Result;
use crate::gridfn::{integrate_linear, Accuracy, GridFunction};
use crate::mpsolve::disc::Discretization;
use crate::potential::Potential;

/// u'u''' − (u'')²/2 + (β²/2)(u')² + V(u) pointwise.
pub fn pohozaev_residual(u: &GridFunction, beta: f64, p: Potential) -> Result<GridFunction> {
    let d1 = u.differentiate_with(1, Accuracy::Sixth)?;
    let d2 = u.differentiate_with(2, Accuracy::Sixth)?;
    let d3 = u.differentiate_with(3, Accuracy::Sixth)?;
    let b2 = beta * beta;
    let vals = (0..u.len())
        .map(|i| {
            let (a, b, c) = (d1.values()[i], d2.values()[i], d3.values()[i]);
            a * c - 0.5 * b * b + 0.5 * b2 * a * a + p.v_poho(u.values()[i])
        })
        .collect();
    u.with_values(vals)
}

pub fn pohozaev_sup(u: &GridFunction, beta: f64, p: Potential) -> Result<f64> {
    Ok(pohozaev_residual(u, beta, p)?.sup_norm())
}

/// One component of {u ≤ u*}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubInterval {
    pub a: f64,
    pub b: f64,
    pub length: f64,
    pub energy: f64,
    /// A/B with A = ∫V_u(u)(u − u*), B = ∫V(u), on this component.
    pub sigma: f64,
    pub negative: bool,
    /// 1/σ ≥ 1 + 15(−1−u*)/(2a*⁴), checked on negative components only.
    pub sigma_bound: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionCertificate {
    pub u_star: f64,
    pub a_star: f64,
    pub intervals: Vec<SubInterval>,
    /// Energy over {u ≥ u*}.
    pub supercritical_energy: f64,
    pub total_energy: f64,
    pub negative_count: usize,
    pub max_subcritical_length: f64,
    pub scale: f64,
    pub at_most_one_negative: bool,
    pub four_pi_check: bool,
    pub a_star_check: bool,
    pub supercritical_check: bool,
    /// σ is defined per component, generalizing the single-interval ratio.
    pub sigma_per_component: bool,
}

impl PartitionCertificate {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn all_checks(&self) -> bool {
        self.at_most_one_negative
            && self.four_pi_check
            && self.a_star_check
            && self.supercritical_check
    }
}

/// Components of {u ≤ level} with linearly interpolated ends.
pub fn sublevel_components(u: &GridFunction, level: f64) -> Vec<(f64, f64)> {
    let v = u.values();
    let n = v.len();
    let dx = u.dx();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        if v[i] > level {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && v[i] <= level {
            i += 1;
        }
        let end = i - 1;
        let a = if start == 0 {
            u.x_left()
        } else {
            let (p, q) = (v[start - 1], v[start]);
            u.x(start - 1) + (level - p) / (q - p) * dx
        };
        let b = if end == n - 1 {
            u.x_right()
        } else {
            let (p, q) = (v[end], v[end + 1]);
            u.x(end) + (level - p) / (q - p) * dx
        };
        out.push((a, b));
    }
    out
}

/// Splits the energy over {u ≤ u*} and {u ≥ u*} and checks the bounds.
pub fn partition(
    u: &GridFunction,
    beta: f64,
    p: Potential,
    th: &Thresholds,
) -> Result<PartitionCertificate> {
    let disc = Discretization::for_grid(u, beta, p)?;
    let density = disc.energy_density(u.values());
    let (x0, dx) = (u.x_left(), u.dx());
    let total = integrate_linear(&density, x0, dx, x0, u.x_right());
    let scale = total.abs() + 1.0;
    let us = th.u_star;
    let a_vals: Vec<f64> = u.values().iter().map(|&v| p.v_u(v) * (v - us)).collect();
    let b_vals: Vec<f64> = u.values().iter().map(|&v| p.v(v)).collect();
    let sigma_rhs = 1.0 + 15.0 * (-1.0 - us) / (2.0 * th.a_star.powi(4));
    let mut intervals = Vec::new();
    let mut sub_energy = 0.0;
    for (a, b) in sublevel_components(u, us) {
        let energy = integrate_linear(&density, x0, dx, a, b);
        sub_energy += energy;
        let aa = integrate_linear(&a_vals, x0, dx, a, b);
        let bb = integrate_linear(&b_vals, x0, dx, a, b);
        let sigma = if bb != 0.0 { aa / bb } else { f64::INFINITY };
        let negative = energy < -1e-8 * scale;
        let sigma_bound = negative.then(|| sigma > 0.0 && 1.0 / sigma >= sigma_rhs);
        intervals.push(SubInterval {
            a,
            b,
            length: b - a,
            energy,
            sigma,
            negative,
            sigma_bound,
        });
    }
    let supercritical_energy = total - sub_energy;
    let negative_count = intervals.iter().filter(|s| s.negative).count();
    let max_subcritical_length = intervals.iter().map(|s| s.length).fold(0.0, f64::max);
    let four_pi_check = intervals
        .iter()
        .filter(|s| s.negative)
        .all(|s| beta * s.length < 4.0 * PI);
    let a_star_check = intervals
        .iter()
        .filter(|s| !s.negative)
        .all(|s| s.length <= 2.0 * th.a_star);
    Ok(PartitionCertificate {
        u_star: us,
        a_star: th.a_star,
        intervals,
        supercritical_energy,
        total_energy: total,
        negative_count,
        max_subcritical_length,
        scale,
        at_most_one_negative: negative_count <= 1,
        four_pi_check,
        a_star_check,
        supercritical_check: supercritical_energy >= -1e-8 * scale,
        sigma_per_component: true,
    })
}

/// min u ≤ ln(β⁴/4).
pub fn nontriviality_check(u: &GridFunction, beta: f64) -> bool {
    u.min() <= nontriviality_threshold(beta)
}

pub fn nontriviality_threshold(beta: f64) -> f64 {
    (beta.powi(4) / 4.0).ln()
}

/// (π/2)·√(1 + 2/σ), the lower bound on β·a.
pub fn interval_bound(sigma: f64) -> f64 {
    if sigma <= 0.0 {
        f64::INFINITY
    } else {
        FRAC_PI_2 * (1.0 + 2.0 / sigma).sqrt()
    }
}

/// Per-interval result of the half-length lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound {
    pub index: usize,
    pub beta_half_length: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn interval_lower_bounds(cert: &PartitionCertificate, beta: f64) -> Vec<LowerBound> {
    cert.intervals
        .iter()
        .enumerate()
        .filter(|(_, s)| s.negative)
        .map(|(index, s)| {
            let bound = interval_bound(s.sigma);
            let beta_half_length = beta * s.length / 2.0;
            LowerBound {
                index,
                beta_half_length,
                bound,
                holds: beta_half_length >= bound,
            }
        })
        .collect()
}

/// β·a ≥ (π/2)·√(1 + 2/σ) on every negative-energy component.
pub fn interval_lower_bound_check(cert: &PartitionCertificate, beta: f64) -> bool {
    interval_lower_bounds(cert, beta).iter().all(|b| b.holds)
}

/// u(u+1)(u+2)(u − u*) ≤ 0 on every subcritical component (Swift–Hohenberg).
pub fn sh_sign_check(u: &GridFunction, cert: &PartitionCertificate) -> bool {
    let us = cert.u_star;
    cert.intervals.iter().all(|s| {
        (0..u.len())
            .filter(|&i| u.x(i) > s.a && u.x(i) < s.b)
            .all(|i| {
                let v = u.values()[i];
                v * (v + 1.0) * (v + 2.0) * (v - us) <= 1e-12
            })
    })
}

/// Checks reported with a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificateChecks {
    pub four_pi: bool,
    pub a_star: bool,
    pub supercritical: bool,
    pub at_most_one_negative: bool,
    pub pohozaev_sup: f64,
    /// min u ≤ ln(β⁴/4); bridge only.
    pub nontrivial: Option<bool>,
    pub morse_index: usize,
    pub interval_lower_bound: bool,
    /// u(u+1)(u+2)(u − u*) ≤ 0 on subcritical components; Swift–Hohenberg only.
    pub sh_sign: Option<bool>,
    /// u > −2 everywhere; Swift–Hohenberg only.
    pub above_minus_two: Option<bool>,
}

/// Vacuously true partition checks when there is no certificate.
pub fn assemble_checks(
    u: &GridFunction,
    beta: f64,
    p: Potential,
    cert: Option<&PartitionCertificate>,
    pohozaev_sup: f64,
    morse_index: usize,
) -> (CertificateChecks, Vec<LowerBound>) {
    let bounds = cert
        .map(|c| interval_lower_bounds(c, beta))
        .unwrap_or_default();
    let sh = p == Potential::SwiftHohenbergShifted;
    let checks = CertificateChecks {
        four_pi: cert.map_or(true, |c| c.four_pi_check),
        a_star: cert.map_or(true, |c| c.a_star_check),
        supercritical: cert.map_or(true, |c| c.supercritical_check),
        at_most_one_negative: cert.map_or(true, |c| c.at_most_one_negative),
        pohozaev_sup,
        nontrivial: (!sh).then(|| nontriviality_check(u, beta)),
        morse_index,
        interval_lower_bound: bounds.iter().all(|b| b.holds),
        sh_sign: if sh {
            cert.map(|c| sh_sign_check(u, c))
        } else {
            None
        },
        above_minus_two: sh.then(|| u.min() > -2.0),
    };
    (checks, bounds)
}

/// Certificate of a stored profile.
#[derive(Debug, Clone, Serialize)]
pub struct CertifyReport {
    pub beta: f64,
    pub k0: f64,
    pub potential: Potential,
    pub residual_sup: f64,
    pub u_star: Option<f64>,
    pub a_star: Option<f64>,
    pub intervals: Vec<SubInterval>,
    pub supercritical_energy: Option<f64>,
    pub total_energy: f64,
    pub negative_count: usize,
    pub max_subcritical_length: f64,
    pub interval_bounds: Vec<LowerBound>,
    pub sigma_per_component: bool,
    pub note: Option<String>,
    pub checks: CertificateChecks,
}

/// Runs every check on `u` without solving.
pub fn certify_profile(
    u: &GridFunction,
    beta: f64,
    p: Potential,
    k0: f64,
) -> Result<CertifyReport> {
    let disc = Discretization::for_grid(u, beta, p)?;
    let residual_sup = disc.residual_sup(u.values());
    let total_energy = disc.energy(u.values())?.total;
    let pohozaev_sup = pohozaev_sup(u, beta, p)?;
    let morse = crate::mpsolve::spectral::morse_index_disc(&disc, u.values())?;
    let (th, cert, note) = match Thresholds::new(beta, k0, p) {
        Ok(th) => {
            let c = partition(u, beta, p, &th)?;
            let note = c
                .is_empty()
                .then(|| format!("u never reaches u* = {}", th.u_star));
            (Some(th), Some(c), note)
        }
        Err(e) => (None, None, Some(format!("no thresholds: {e}"))),
    };
    let (checks, interval_bounds) = assemble_checks(u, beta, p, cert.as_ref(), pohozaev_sup, morse);
    Ok(CertifyReport {
        beta,
        k0,
        potential: p,
        residual_sup,
        u_star: th.map(|t| t.u_star),
        a_star: th.map(|t| t.a_star),
        supercritical_energy: cert.as_ref().map(|c| c.supercritical_energy),
        total_energy,
        negative_count: cert.as_ref().map_or(0, |c| c.negative_count),
        max_subcritical_length: cert.as_ref().map_or(0.0, |c| c.max_subcritical_length),
        intervals: cert.map(|c| c.intervals).unwrap_or_default(),
        interval_bounds,
        sigma_per_component: true,
        note,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_profile() {
        let u = GridFunction::from_fn(-10.0, 10.0, 201, |_| 0.0).unwrap();
        assert_eq!(pohozaev_sup(&u, 0.5, Potential::Bridge).unwrap(), 0.0);
        assert!(!nontriviality_check(&u, 0.5));
    }

    #[test]
    fn detector_sanity() {
        let u = GridFunction::from_fn(-8.0, 8.0, 1601, |x| (-x * x).exp()).unwrap();
        assert!(pohozaev_sup(&u, 0.5, Potential::Bridge).unwrap() > 1e-2);
    }

    #[test]
    fn threshold_arithmetic() {
        assert!((nontriviality_threshold(0.7) - (0.2401f64 / 4.0).ln()).abs() < 1e-15);
        assert!((nontriviality_threshold(0.7) + 2.8130).abs() < 1e-4);
        assert!((interval_bound(1.0) - FRAC_PI_2 * 3f64.sqrt()).abs() < 1e-15);
        assert!((interval_bound(1.0) - 2.7207).abs() < 1e-4);
        assert!((interval_bound(1e12) - FRAC_PI_2).abs() < 1e-9);
        assert!(interval_bound(0.0).is_infinite());
    }

    #[test]
    fn components_are_interpolated() {
        let u = GridFunction::from_fn(-4.0, 4.0, 81, |x| x * x - 1.0).unwrap();
        let c = sublevel_components(&u, 0.0);
        assert_eq!(c.len(), 1);
        assert!((c[0].0 + 1.0).abs() < 1e-2 && (c[0].1 - 1.0).abs() < 1e-2);
    }
}
