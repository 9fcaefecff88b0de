//! Damped Newton polish on the discrete residual.

use serde::Serialize;

use super::disc::{Discretization, BAND, PIN};
use crate::banded::BandMatrix;
use crate::error::{Error, Result};
use crate::gridfn::GridFunction;
use crate::potential::Potential;

/// Condition estimate above which the Jacobian counts as singular.
pub const SINGULAR_COND: f64 = 1e14;
const MAX_NEWTON: usize = 50;

/// Which unknowns Newton works with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NewtonSpace {
    /// Profiles even about the mesh center; removes the translation mode.
    Even,
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct NewtonOutcome {
    #[serde(skip)]
    pub profile: Vec<f64>,
    /// Residual sup norm before each iteration, and after the last.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Stopped at the roundoff floor without reaching the tolerance.
    pub stagnated: bool,
    pub space: NewtonSpace,
}

impl NewtonOutcome {
    pub fn residual_sup(&self) -> f64 {
        *self.history.last().unwrap_or(&f64::NAN)
    }
}

fn sup(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn norm2(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn is_even(disc: &Discretization, u: &[f64]) -> bool {
    let c = (disc.n - 1) / 2;
    let peak = sup(u).max(1e-300);
    disc.n % 2 == 1 && (1..=c).all(|k| (u[c + k] - u[c - k]).abs() <= 1e-6 * peak)
}

/// Newton step `δ` with `J δ = −r` in the chosen space, as a full-mesh update.
fn newton_step(
    disc: &Discretization,
    u: &[f64],
    r: &[f64],
    space: NewtonSpace,
) -> Result<Vec<f64>> {
    let n = disc.n;
    let mut step = vec![0.0; n];
    match space {
        NewtonSpace::Even => {
            let c = (n - 1) / 2;
            let m = c - PIN;
            let mut a = BandMatrix::zeros(m + 1, BAND, BAND);
            for j in 0..=m {
                let lo = j.saturating_sub(BAND);
                let hi = (j + BAND).min(m);
                for k in lo..=hi {
                    let mut v = disc.jacobian_entry(u, c + j, c + k);
                    if k > 0 {
                        v += disc.jacobian_entry(u, c + j, c - k);
                    }
                    a.set(j, k, v);
                }
            }
            let lu = a.lu()?;
            if lu.cond_estimate > SINGULAR_COND {
                return Err(Error::SingularJacobian(lu.cond_estimate));
            }
            let rhs: Vec<f64> = (0..=m).map(|j| -r[c + j]).collect();
            let d = lu.solve(&rhs);
            for k in 0..=m {
                step[c + k] = d[k];
                step[c - k] = d[k];
            }
        }
        NewtonSpace::Full => {
            let mf = disc.n_free();
            let mut a = BandMatrix::zeros(mf, BAND, BAND);
            for i in 0..mf {
                for j in i.saturating_sub(BAND)..=(i + BAND).min(mf - 1) {
                    a.set(i, j, disc.jacobian_entry(u, PIN + i, PIN + j));
                }
            }
            let lu = a.lu()?;
            if lu.cond_estimate > SINGULAR_COND {
                return Err(Error::SingularJacobian(lu.cond_estimate));
            }
            let rhs: Vec<f64> = (0..mf).map(|i| -r[PIN + i]).collect();
            let d = lu.solve(&rhs);
            step[PIN..n - PIN].copy_from_slice(&d);
        }
    }
    Ok(step)
}

/// Damped Newton with backtracking on the residual norm. Stops when the
/// residual sup is below `tol`, or when no step can reduce it further.
pub fn newton_polish_disc(disc: &Discretization, u0: &[f64], tol: f64) -> Result<NewtonOutcome> {
    let mut r = disc.residual(u0);
    let mut rs = sup(&r);
    let space = if is_even(disc, u0) {
        NewtonSpace::Even
    } else {
        NewtonSpace::Full
    };
    let mut out = NewtonOutcome {
        profile: u0.to_vec(),
        history: vec![rs],
        iterations: 0,
        converged: rs < tol,
        stagnated: false,
        space,
    };
    if out.converged {
        return Ok(out);
    }
    let mut u = u0.to_vec();
    disc.pin(&mut u);
    if space == NewtonSpace::Even {
        let c = (disc.n - 1) / 2;
        for k in 1..=c {
            let m = 0.5 * (u[c + k] + u[c - k]);
            u[c + k] = m;
            u[c - k] = m;
        }
    }
    r = disc.residual(&u);
    rs = sup(&r);
    for it in 0..MAX_NEWTON {
        out.iterations = it;
        if !rs.is_finite() {
            return Err(Error::NonConvergence {
                iterations: it,
                residual: rs,
                best: None,
            });
        }
        if rs < tol {
            out.converged = true;
            break;
        }
        let step = newton_step(disc, &u, &r, space)?;
        let n0 = norm2(&r);
        let mut alpha = 1.0;
        let mut accepted = None;
        while alpha > 1e-6 {
            let trial: Vec<f64> = u.iter().zip(&step).map(|(a, b)| a + alpha * b).collect();
            if disc.potential.check_range(&trial).is_ok() {
                let rt = disc.residual(&trial);
                if norm2(&rt) <= (1.0 - 1e-4 * alpha) * n0 {
                    accepted = Some((trial, rt));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((trial, rt)) = accepted else {
            out.stagnated = true;
            break;
        };
        let rel = alpha * sup(&step) / sup(&u).max(1.0);
        u = trial;
        r = rt;
        rs = sup(&r);
        out.history.push(rs);
        out.iterations = it + 1;
        if rs < tol {
            out.converged = true;
            break;
        }
        if rel < 1e-12 {
            out.stagnated = true;
            break;
        }
    }
    if !out.converged && !out.stagnated {
        return Err(Error::NonConvergence {
            iterations: out.iterations,
            residual: rs,
            best: disc.grid(u).ok().map(Box::new),
        });
    }
    out.profile = u;
    Ok(out)
}

/// Polishes `u0` to residual `tol` (or the roundoff floor).
pub fn newton_polish(
    u0: &GridFunction,
    beta: f64,
    p: Potential,
    tol: f64,
) -> Result<(GridFunction, NewtonOutcome)> {
    let disc = Discretization::for_grid(u0, beta, p)?;
    let out = newton_polish_disc(&disc, u0.values(), tol)?;
    Ok((disc.grid(out.profile.clone())?, out))
}
