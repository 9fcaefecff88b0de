//! Scalar constants and β-dependent thresholds.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::ineqlab::solve_mu_tan;
use crate::par::{self, Execution};
use crate::potential::Potential;
use crate::roots::{bisect, scan};

/// Working value of k₀ printed in the literature.
pub const K1_PAPER: f64 = 1.62;
/// Published value of β*.
pub const BETA_STAR_REPORTED: f64 = 0.7427;
/// β-grid step used before bisecting the β* boundary.
pub const BETA_STAR_GRID_STEP: f64 = 1e-3;

/// Root > 1 of 4k² − 2k − 3 = 0.
pub fn solve_k2() -> f64 {
    (1.0 + 13f64.sqrt()) / 4.0
}

fn k1_equation(k: f64) -> f64 {
    k * k - 1.0 - k - (k * k - 1.0).sqrt()
}

/// Smallest root k > 1 of k² − 1 − k − √(k² − 1) = 0.
pub fn solve_k1_literal() -> f64 {
    let (lo, hi) = scan(k1_equation, 1.0, 10.0, 900).expect("k1 equation changes sign on (1, 10)");
    bisect(k1_equation, lo, hi, 0.0).expect("bracket has a sign change")
}

/// β₀ = √(√2 / k₀).
pub fn compute_beta0(k0: f64) -> Result<f64> {
    if !(k0 > 0.0) || !k0.is_finite() {
        return Err(invalid(format!("k0 must be positive, got {k0}")));
    }
    Ok((SQRT_2 / k0).sqrt())
}

/// (e^u − u − 1)/u², accurate near zero.
fn ustar_lhs(u: f64) -> f64 {
    (u.exp_m1() - u) / (u * u)
}

/// The u < 0 with (e^u − u − 1)/u² = β⁴k₀²/8.
pub fn u_star_bridge(beta: f64, k0: f64) -> Result<f64> {
    let beta0 = compute_beta0(k0)?;
    if !(beta > 0.0) || beta >= beta0 {
        return Err(Error::NoRoot(format!(
            "u* needs 0 < beta < beta0 = {beta0}, got beta = {beta}"
        )));
    }
    let c = beta.powi(4) * k0 * k0 / 8.0;
    // lhs increases from 0 (u -> -inf) to 1/2 (u -> 0); c < 1/4 here.
    let hi = -1e-3;
    let lo = -(2.0 / c + 2.0);
    let u = bisect(|u| ustar_lhs(u) - c, lo, hi, 0.0)?;
    Ok(u)
}

/// u* = −2 + k₀β²/√2.
pub fn u_star_sh(beta: f64, k0: f64) -> f64 {
    -2.0 + k0 * beta * beta / SQRT_2
}

/// (μ₁, μ₂) with μ₁² + μ₂² = β², μ₁μ₂ = √e.
pub fn linearization_mus(beta: f64, e_u_star: f64) -> Result<(f64, f64)> {
    if !(e_u_star >= 0.0) {
        return Err(invalid(format!("e^u* must be nonnegative, got {e_u_star}")));
    }
    let half = beta * beta / 2.0;
    let bound = half * half;
    let mut disc = bound - e_u_star;
    if disc < 0.0 {
        if disc > -1e-14 * bound {
            disc = 0.0;
        } else {
            return Err(Error::ComplexRoots { bound, e_u_star });
        }
    }
    let mu2 = (half + disc.sqrt()).sqrt();
    // Vieta form avoids cancellation in half - sqrt(disc)
    let mu1 = if e_u_star == 0.0 {
        0.0
    } else {
        e_u_star.sqrt() / mu2
    };
    Ok((mu1, mu2))
}

/// β-dependent thresholds for one potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub beta: f64,
    pub k0: f64,
    pub potential: Potential,
    pub u_star: f64,
    /// e^{u*} for the bridge, 0 for Swift–Hohenberg.
    pub e_u_star: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub a_star: f64,
}

impl Thresholds {
    pub fn new(beta: f64, k0: f64, potential: Potential) -> Result<Self> {
        let (u_star, e_u_star) = match potential {
            Potential::Bridge => {
                let u = u_star_bridge(beta, k0)?;
                (u, u.exp())
            }
            Potential::SwiftHohenbergShifted => {
                if !(beta > 0.0) {
                    return Err(invalid(format!("beta must be positive, got {beta}")));
                }
                (u_star_sh(beta, k0), 0.0)
            }
        };
        let (mu1, mu2) = linearization_mus(beta, e_u_star)?;
        let a_star = a_star_from_mus(mu1, mu2)?;
        Ok(Thresholds {
            beta,
            k0,
            potential,
            u_star,
            e_u_star,
            mu1,
            mu2,
            a_star,
        })
    }
}

fn a_star_from_mus(mu1: f64, mu2: f64) -> Result<f64> {
    let arg = 1.5 * PI * mu1 / mu2;
    if arg >= FRAC_PI_2 {
        return Err(Error::FormulaDomain(format!(
            "tan argument 3 pi mu1/(2 mu2) = {arg} >= pi/2"
        )));
    }
    Ok(PI / mu2 + mu1 / mu2 * arg.tan())
}

/// a* together with the root of μ₂ tan μ₂a = μ₁ tan μ₁a it bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AStar {
    pub beta: f64,
    pub k0: f64,
    pub u_star: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub a_star: f64,
    pub tan_root: f64,
    pub bounds_tan_root: bool,
}

/// a* = π/μ₂ + (μ₁/μ₂)·tan(3πμ₁/(2μ₂)) for the bridge thresholds.
pub fn a_star(beta: f64, k0: f64) -> Result<f64> {
    Ok(a_star_detail(beta, k0)?.a_star)
}

/// a* with its intermediate values and the transcendental root.
pub fn a_star_detail(beta: f64, k0: f64) -> Result<AStar> {
    let u_star = u_star_bridge(beta, k0)?;
    let (mu1, mu2) = linearization_mus(beta, u_star.exp())?;
    let a = a_star_from_mus(mu1, mu2)?;
    let tan_root = if mu1 < mu2 {
        solve_mu_tan(mu1, mu2)?
    } else {
        f64::NAN
    };
    // near π/μ₂ the closed form overshoots the root only when μ₂ > 2/3
    let bounds_tan_root = !tan_root.is_finite() || a >= tan_root * (1.0 - 1e-12);
    if !bounds_tan_root {
        log::warn!("a* = {a} lies below the tan-equation root {tan_root} (mu2 = {mu2})");
    }
    Ok(AStar {
        beta,
        k0,
        u_star,
        mu1,
        mu2,
        a_star: a,
        tan_root,
        bounds_tan_root,
    })
}

/// Both sides of the admissibility condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition144 {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// (π/2)·√(15(−1−u*)/a*⁴ + 3) > β·a*.
pub fn condition_1_44(beta: f64, k0: f64) -> Result<Condition144> {
    let u_star = u_star_bridge(beta, k0)?;
    if u_star > -1.0 {
        return Err(Error::ConditionVacuous { u_star });
    }
    let (mu1, mu2) = linearization_mus(beta, u_star.exp())?;
    let a = a_star_from_mus(mu1, mu2)?;
    let lhs = FRAC_PI_2 * (15.0 * (-1.0 - u_star) / a.powi(4) + 3.0).sqrt();
    let rhs = beta * a;
    Ok(Condition144 {
        holds: lhs > rhs,
        lhs,
        rhs,
    })
}

/// β → 0 limits of both sides of the condition.
pub fn condition_limit(k0: f64) -> (f64, f64) {
    let inner = 3.0 + 120.0 / (k0 * k0 * PI.powi(4));
    (FRAC_PI_2 * inner.sqrt(), PI)
}

/// Outcome of the β* search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaStar {
    pub k0: f64,
    pub beta_star_computed: f64,
    pub beta_star_reported: f64,
    pub difference: f64,
    pub beta0: f64,
    pub grid_step: f64,
    pub diagnostic: Option<String>,
}

fn condition_true(beta: f64, k0: f64) -> bool {
    matches!(condition_1_44(beta, k0), Ok(c) if c.holds)
}

/// Supremum of β such that the condition holds on all of (0, β).
pub fn beta_star_bisect(k0: f64) -> Result<BetaStar> {
    beta_star_bisect_with(k0, Execution::default())
}

pub fn beta_star_bisect_with(k0: f64, exec: Execution) -> Result<BetaStar> {
    let beta0 = compute_beta0(k0)?;
    let h = BETA_STAR_GRID_STEP;
    let n = ((beta0 / h).ceil() as usize).saturating_sub(1).max(1);
    let grid: Vec<f64> = (1..=n)
        .map(|i| i as f64 * h)
        .filter(|&b| b < beta0)
        .collect();
    let flags = par::map(exec, &grid, |&b| condition_true(b, k0));
    let out = |value: f64, diagnostic: Option<String>| BetaStar {
        k0,
        beta_star_computed: value,
        beta_star_reported: BETA_STAR_REPORTED,
        difference: value - BETA_STAR_REPORTED,
        beta0,
        grid_step: h,
        diagnostic,
    };
    if grid.is_empty() || !flags[0] {
        let (l, r) = condition_limit(k0);
        let msg = format!(
            "condition fails at the smallest grid point beta = {h} (small-beta limit lhs {l:.6} vs rhs {r:.6})"
        );
        log::warn!("beta*: {msg}");
        return Ok(out(0.0, Some(msg)));
    }
    let Some(first_false) = flags.iter().position(|&f| !f) else {
        let msg = format!("condition holds on the whole grid below beta0 = {beta0}");
        log::info!("beta*: {msg}");
        return Ok(out(beta0, Some(msg)));
    };
    let mut lo = grid[first_false - 1];
    let mut hi = grid[first_false];
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if condition_true(mid, k0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(out(lo, None))
}

/// Roots ±τ ± iδ of m⁴ + β²m² + c₀ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRoots {
    pub beta: f64,
    pub c0: f64,
    pub tau: f64,
    pub delta: f64,
    pub eta: f64,
}

pub fn decay_roots(beta: f64, c0: f64) -> Result<DecayRoots> {
    if !(c0 > 0.0) || !(beta >= 0.0) {
        return Err(invalid(format!(
            "need c0 > 0 and beta >= 0, got c0 = {c0}, beta = {beta}"
        )));
    }
    let s = c0.sqrt();
    let limit = 2.0 * s;
    let b2 = beta * beta;
    if b2 >= limit {
        return Err(Error::RealRootsRegime { beta_sq: b2, limit });
    }
    let r = s.sqrt();
    let tau = r * ((1.0 - b2 / limit) / 2.0).sqrt();
    let delta = r * ((1.0 + b2 / limit) / 2.0).sqrt();
    let eta = (tau / r).acos();
    Ok(DecayRoots {
        beta,
        c0,
        tau,
        delta,
        eta,
    })
}

/// Constants report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaperConstants {
    pub k1_literal: f64,
    pub k1_paper: f64,
    pub k2: f64,
    pub k0: f64,
    pub beta0: f64,
    pub beta_star_computed: f64,
    pub beta_star_reported: f64,
    pub beta_star_diagnostic: Option<String>,
    pub residuals: BTreeMap<String, f64>,
}

impl PaperConstants {
    pub fn compute(k0: f64) -> Result<Self> {
        let k1 = solve_k1_literal();
        let k2 = solve_k2();
        let beta0 = compute_beta0(k0)?;
        let bs = beta_star_bisect(k0)?;
        let mut residuals = BTreeMap::new();
        residuals.insert("k1_literal".into(), k1_equation(k1));
        residuals.insert("k2".into(), 4.0 * k2 * k2 - 2.0 * k2 - 3.0);
        residuals.insert("beta0".into(), beta0.powi(4) * k0 * k0 - 2.0);
        Ok(PaperConstants {
            k1_literal: k1,
            k1_paper: K1_PAPER,
            k2,
            k0,
            beta0,
            beta_star_computed: bs.beta_star_computed,
            beta_star_reported: BETA_STAR_REPORTED,
            beta_star_diagnostic: bs.diagnostic,
            residuals,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_closed_form() {
        let k = solve_k2();
        assert!((k - 1.151387818865997).abs() < 1e-12);
        assert!((4.0 * k * k - 2.0 * k - 3.0).abs() < 1e-12);
        assert!(k > 1.0);
    }

    #[test]
    fn k1_literal_root() {
        let k = solve_k1_literal();
        assert!((k - 2.332189766475137).abs() < 1e-10, "{k}");
        assert!(k1_equation(k).abs() < 1e-10);
    }

    #[test]
    fn beta0_values() {
        assert!((compute_beta0(SQRT_2).unwrap() - 1.0).abs() < 1e-15);
        assert!((compute_beta0(1.62).unwrap() - 0.934329350281905).abs() < 1e-12);
        assert!((compute_beta0(1.62).unwrap() - 0.9342).abs() < 2e-3);
        assert!((compute_beta0(2.3322).unwrap() - 0.778707940823720).abs() < 1e-12);
        assert!(compute_beta0(0.0).is_err());
        assert!(compute_beta0(2.0).unwrap() < compute_beta0(1.9).unwrap());
    }

    #[test]
    fn u_star_values() {
        let u = u_star_bridge(0.5, 1.62).unwrap();
        assert!((u - (-47.75166327494892)).abs() < 1e-9, "{u}");
        let c = 0.5f64.powi(4) * 1.62 * 1.62 / 8.0;
        assert!((ustar_lhs(u) - c).abs() < 1e-12);
        let u2 = u_star_bridge(0.2, 1.62).unwrap();
        let scaled = u2 * 0.2f64.powi(4) * 1.62 * 1.62 / 8.0;
        assert!((scaled + 1.0).abs() < 0.05, "{scaled}");
        assert!((u_star_bridge(0.7, 1.62).unwrap() + 11.601712418938).abs() < 1e-9);
        assert!((u_star_bridge(0.9, 1.62).unwrap() + 3.284570987).abs() < 1e-8);
        assert!(u_star_bridge(0.95, 1.62).is_err());
        assert!(u_star_bridge(0.0, 1.62).is_err());
    }

    #[test]
    fn u_star_is_monotone_and_bounded() {
        // u* rises toward -1 as beta grows, so |u*| is what decreases
        let k0 = 1.62;
        let mut prev = f64::NEG_INFINITY;
        for i in 1..=90 {
            let b = 0.01 * i as f64;
            let u = u_star_bridge(b, k0).unwrap();
            assert!(u > prev);
            assert!(u.exp() <= b.powi(4) * k0 * k0 / 4.0);
            prev = u;
        }
    }

    #[test]
    fn sh_u_star() {
        assert_eq!(u_star_sh(0.0, 1.62), -2.0);
        let b0 = compute_beta0(1.62).unwrap();
        assert!((u_star_sh(b0, 1.62) + 1.0).abs() < 1e-15);
        assert!((u_star_sh(0.5, 1.62) + 1.713621753619448).abs() < 1e-12);
    }

    #[test]
    fn mus() {
        assert_eq!(linearization_mus(0.8, 0.0).unwrap(), (0.0, 0.8));
        let b: f64 = 0.8;
        let (m1, m2) = linearization_mus(b, b.powi(4) / 4.0).unwrap();
        // double root: the split is only resolved to sqrt(eps)
        assert!((m1 - b / SQRT_2).abs() < 1e-7 && (m2 - b / SQRT_2).abs() < 1e-7);
        let (m1, m2) = linearization_mus(0.7427, 1.38e-4).unwrap();
        assert!((m1 - 0.015820662778500).abs() < 1e-12);
        assert!((m2 - 0.742531478544344).abs() < 1e-12);
        assert!((m1 * m1 + m2 * m2 - 0.7427f64.powi(2)).abs() < 1e-12);
        assert!((m1 * m1 * m2 * m2 - 1.38e-4).abs() < 1e-12);
        assert!(matches!(
            linearization_mus(0.5, 0.1),
            Err(Error::ComplexRoots { .. })
        ));
    }

    #[test]
    fn a_star_values() {
        let d = a_star_detail(0.7427, 1.62).unwrap();
        assert!((d.a_star - 4.233056520685588).abs() < 1e-9, "{}", d.a_star);
        assert!((d.a_star - 4.2325).abs() < 1e-3);
        assert!(d.bounds_tan_root && d.a_star >= d.tan_root);
        // below μ₂ = 2/3 the closed form falls short of the root
        let d = a_star_detail(0.62, 1.62).unwrap();
        assert!(!d.bounds_tan_root && d.a_star < d.tan_root);
        // e^{u*} tiny: a* is close to pi/beta
        let b = 0.2;
        let a = a_star(b, 1.62).unwrap();
        assert!(u_star_bridge(b, 1.62).unwrap().exp() < 1e-10);
        assert!((a - PI / b).abs() / (PI / b) < 1e-3);
        let mut prev = f64::INFINITY;
        for i in 0..=40 {
            let b = 0.3 + 0.01 * i as f64;
            let a = a_star(b, 1.62).unwrap();
            assert!(a < prev);
            prev = a;
        }
    }

    #[test]
    fn condition_examples() {
        let c = condition_1_44(0.1, 1.0).unwrap();
        assert!(c.holds);
        assert!((c.lhs - 3.23137).abs() < 1e-4, "{}", c.lhs);
        let c = condition_1_44(0.1, 1.62).unwrap();
        assert!(!c.holds);
        assert!(c.lhs > 0.0 && c.rhs > 0.0);
        // small beta approaches the asymptotic values
        let (l, r) = condition_limit(1.62);
        assert!((l - 2.92582).abs() < 1e-5);
        let c = condition_1_44(0.005, 1.62).unwrap();
        assert!((c.lhs - l).abs() < 1e-3 && (c.rhs - r).abs() < 1e-3);
    }

    #[test]
    fn decay_root_examples() {
        let d = decay_roots(0.0, 1.0).unwrap();
        assert!((d.tau - 0.5f64.sqrt()).abs() < 1e-15 && (d.delta - 0.5f64.sqrt()).abs() < 1e-15);
        let d = decay_roots(1.0, 1.0).unwrap();
        assert!((d.tau - 0.5).abs() < 1e-15 && (d.delta - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let m = num_complex::Complex64::new(d.tau, d.delta);
        let r = m.powi(4) + m * m + 1.0;
        assert!(r.norm() < 1e-10);
        let d = decay_roots(0.0, 2.0).unwrap();
        assert!((d.tau - 2f64.powf(-0.25)).abs() < 1e-15);
        let d = decay_roots(0.5, 2.0).unwrap();
        assert!((d.tau * d.tau + d.delta * d.delta - 2f64.sqrt()).abs() < 1e-12);
        assert!((d.delta * d.delta - d.tau * d.tau - 0.125).abs() < 1e-12);
        assert!(decay_roots(1.5, 1.0).is_err());
    }
}
