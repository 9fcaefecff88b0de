//! Clamped discretization of the energy functional.
//!
//! Derivatives use the sixth-order centered stencils on the rows where they
//! fit. The first and last `PIN` nodes are held at zero, which models
//! u = u' = 0 at ±L; on the remaining free nodes the residual is exactly the
//! energy gradient divided by dx.

use serde::Serialize;

use crate::banded::{Ldlt, SymBand};
use crate::error::{invalid, Error, Result};
use crate::gridfn::{trapezoid_by, GridFunction};
use crate::potential::Potential;
use crate::stencil::{centered, Accuracy};

/// Stencil half-width.
pub const HW: usize = 3;
/// Pinned nodes at each end.
pub const PIN: usize = 2 * HW;
/// Half-bandwidth of the Hessian.
pub const BAND: usize = 2 * HW;

/// Energy split into its three terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    /// ½∫(u'')²
    pub bending: f64,
    /// −β²/2·∫(u')²
    pub gradient_term: f64,
    /// ∫V(u)
    pub potential_term: f64,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct Discretization {
    pub x_left: f64,
    pub dx: f64,
    pub n: usize,
    pub beta: f64,
    pub potential: Potential,
    c1: [f64; 2 * HW + 1],
    c2: [f64; 2 * HW + 1],
    /// D2ᵀD2 − β²D1ᵀD1 as a Toeplitz row, offsets −BAND..=BAND.
    kern: [f64; 2 * BAND + 1],
    /// D2ᵀD2 + D1ᵀD1 + I, the H² metric.
    metric: [f64; 2 * BAND + 1],
}

fn correlate(a: &[f64; 2 * HW + 1], scale: f64) -> [f64; 2 * BAND + 1] {
    let mut out = [0.0; 2 * BAND + 1];
    for (d, o) in out.iter_mut().enumerate() {
        let off = d as isize - BAND as isize;
        let mut s = 0.0;
        for i in 0..a.len() as isize {
            let j = i + off;
            if (0..a.len() as isize).contains(&j) {
                s += a[i as usize] * a[j as usize];
            }
        }
        *o = s * scale;
    }
    out
}

impl Discretization {
    pub fn new(x_left: f64, dx: f64, n: usize, beta: f64, potential: Potential) -> Result<Self> {
        if n < 4 * PIN + 1 {
            return Err(Error::MeshTooSmall {
                n,
                min: 4 * PIN + 1,
            });
        }
        if !(dx > 0.0) || !(beta >= 0.0) || !beta.is_finite() {
            return Err(invalid(format!(
                "need dx > 0 and beta >= 0, got dx = {dx}, beta = {beta}"
            )));
        }
        let mut c1 = [0.0; 2 * HW + 1];
        let mut c2 = [0.0; 2 * HW + 1];
        c1.copy_from_slice(&centered(1, Accuracy::Sixth).weights);
        c2.copy_from_slice(&centered(2, Accuracy::Sixth).weights);
        let t2 = correlate(&c2, dx.powi(-4));
        let t1 = correlate(&c1, dx.powi(-2));
        let b2 = beta * beta;
        let mut kern = [0.0; 2 * BAND + 1];
        let mut metric = [0.0; 2 * BAND + 1];
        for d in 0..kern.len() {
            kern[d] = t2[d] - b2 * t1[d];
            metric[d] = t2[d] + t1[d];
        }
        metric[BAND] += 1.0;
        Ok(Discretization {
            x_left,
            dx,
            n,
            beta,
            potential,
            c1,
            c2,
            kern,
            metric,
        })
    }

    /// Symmetric mesh [−L, L] with `n` nodes.
    pub fn symmetric(l: f64, n: usize, beta: f64, potential: Potential) -> Result<Self> {
        if !(l > 0.0) {
            return Err(invalid(format!(
                "domain half-length must be positive, got {l}"
            )));
        }
        if n % 2 == 0 {
            return Err(invalid(format!("grid points must be odd, got {n}")));
        }
        Self::new(-l, 2.0 * l / (n - 1) as f64, n, beta, potential)
    }

    /// Same mesh as `u`.
    pub fn for_grid(u: &GridFunction, beta: f64, potential: Potential) -> Result<Self> {
        Self::new(u.x_left(), u.dx(), u.len(), beta, potential)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_left + i as f64 * self.dx
    }

    /// Free node range.
    pub fn free(&self) -> std::ops::Range<usize> {
        PIN..self.n - PIN
    }

    pub fn n_free(&self) -> usize {
        self.n - 2 * PIN
    }

    pub fn grid(&self, values: Vec<f64>) -> Result<GridFunction> {
        GridFunction::new(self.x_left, self.dx, values)
    }

    /// Zeroes the pinned nodes.
    pub fn pin(&self, u: &mut [f64]) {
        let n = self.n;
        u[..PIN].fill(0.0);
        u[n - PIN..].fill(0.0);
    }

    /// (D1u, D2u) on the rows where the stencil fits, zero elsewhere.
    pub fn d1_d2(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let mut d1 = vec![0.0; n];
        let mut d2 = vec![0.0; n];
        let (s1, s2) = (1.0 / self.dx, 1.0 / (self.dx * self.dx));
        for j in HW..n - HW {
            let w = &u[j - HW..=j + HW];
            let mut a = 0.0;
            let mut b = 0.0;
            for k in 0..2 * HW + 1 {
                a += self.c1[k] * w[k];
                b += self.c2[k] * w[k];
            }
            d1[j] = a * s1;
            d2[j] = b * s2;
        }
        (d1, d2)
    }

    pub fn energy(&self, u: &[f64]) -> Result<EnergyBreakdown> {
        self.potential.check_range(u)?;
        let (d1, d2) = self.d1_d2(u);
        let dx = self.dx;
        let bending = 0.5 * dx * d2.iter().map(|v| v * v).sum::<f64>();
        let gradient_term =
            -0.5 * self.beta * self.beta * dx * d1.iter().map(|v| v * v).sum::<f64>();
        let p = self.potential;
        let potential_term = trapezoid_by(u, dx, |v| p.v(v));
        Ok(EnergyBreakdown {
            bending,
            gradient_term,
            potential_term,
            total: bending + gradient_term + potential_term,
        })
    }

    /// Energy density whose trapezoid integral is the total energy.
    pub fn energy_density(&self, u: &[f64]) -> Vec<f64> {
        let (d1, d2) = self.d1_d2(u);
        let b2 = self.beta * self.beta;
        (0..self.n)
            .map(|i| 0.5 * d2[i] * d2[i] - 0.5 * b2 * d1[i] * d1[i] + self.potential.v(u[i]))
            .collect()
    }

    /// Toeplitz operator applied at free node `i`.
    #[inline]
    fn apply_row(kern: &[f64; 2 * BAND + 1], u: &[f64], i: usize) -> f64 {
        let w = &u[i - BAND..=i + BAND];
        let mut s = 0.0;
        for k in 0..2 * BAND + 1 {
            s += kern[k] * w[k];
        }
        s
    }

    /// u'''' + β²u'' + V_u(u) on the free nodes, zero on pinned nodes.
    pub fn residual(&self, u: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; self.n];
        for i in self.free() {
            r[i] = Self::apply_row(&self.kern, u, i) + self.potential.v_u(u[i]);
        }
        r
    }

    pub fn residual_sup(&self, u: &[f64]) -> f64 {
        self.residual(u).iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Hessian of the energy divided by dx, restricted to the free nodes.
    pub fn hessian(&self, u: &[f64]) -> SymBand {
        let m = self.n_free();
        let mut h = SymBand::zeros(m, BAND);
        for i in 0..m {
            for d in 0..=BAND.min(i) {
                h.set(i, i - d, self.kern[BAND + d]);
            }
            h.set(i, i, self.kern[BAND] + self.potential.v_uu(u[PIN + i]));
        }
        h
    }

    /// Entry of the Jacobian between full-mesh free nodes `i` and `j`.
    pub fn jacobian_entry(&self, u: &[f64], i: usize, j: usize) -> f64 {
        let d = j as isize - i as isize;
        if d.unsigned_abs() > BAND {
            return 0.0;
        }
        let mut v = self.kern[(BAND as isize + d) as usize];
        if i == j {
            v += self.potential.v_uu(u[i]);
        }
        v
    }

    /// Factorized H² metric on the free nodes.
    pub fn metric_factor(&self) -> Ldlt {
        let m = self.n_free();
        let mut p = SymBand::zeros(m, BAND);
        for i in 0..m {
            for d in 0..=BAND.min(i) {
                p.set(i, i - d, self.metric[BAND + d]);
            }
        }
        p.ldlt()
    }

    /// Sobolev gradient P⁻¹r on the free nodes, zero elsewhere.
    pub fn sobolev(&self, factor: &Ldlt, r: &[f64]) -> Vec<f64> {
        let g = factor.solve(&r[self.free()]);
        let mut out = vec![0.0; self.n];
        out[self.free()].copy_from_slice(&g);
        out
    }

    /// dx·aᵀPb for vectors vanishing on the pinned nodes.
    pub fn h2_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in self.free() {
            s += a[i] * Self::apply_row(&self.metric, b, i);
        }
        s * self.dx
    }

    /// dx·aᵀb.
    pub fn l2_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.dx * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
    }
}

/// Energy of a grid function.
pub fn energy(u: &GridFunction, beta: f64, p: Potential) -> Result<EnergyBreakdown> {
    Discretization::for_grid(u, beta, p)?.energy(u.values())
}

/// u'''' + β²u'' + V_u(u) on the interior mesh.
pub fn residual(u: &GridFunction, beta: f64, p: Potential) -> Result<GridFunction> {
    let d = Discretization::for_grid(u, beta, p)?;
    u.with_values(d.residual(u.values()))
}
