//! Closed-form minimizers, quadratic forms and auxiliary eigenproblems.

use std::f64::consts::{FRAC_PI_2, PI};

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::banded::SymBand;
use crate::error::{invalid, Error, Result};
use crate::gridfn::{Accuracy, GridFunction};
use crate::par::{self, Execution};
use crate::roots::bisect;
use crate::stencil::fornberg;

/// Minimizer of ∫(u'')² − 2∫(u')² + k²∫u² on [−a, a] with u(±a) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimizerL1 {
    pub k: f64,
    pub a: f64,
    pub lambda: f64,
    pub mu: f64,
    #[serde(rename = "A")]
    pub coef_a: f64,
    #[serde(rename = "B")]
    pub coef_b: f64,
    /// −2u(a)(u'''(a) + 2u'(a)).
    #[serde(rename = "M_a")]
    pub m_a: f64,
    /// The same form by Gauss–Legendre quadrature.
    pub m_a_quadrature: f64,
    /// ∫|(u'')²| + 2|(u')²| + k²u², the scale of the cross-check.
    pub magnitude: f64,
}

impl MinimizerL1 {
    fn r(&self) -> Complex64 {
        Complex64::new(self.lambda, self.mu)
    }

    /// n-th derivative of u = A cosh λx cos μx + B sinh λx sin μx.
    pub fn derivative(&self, n: u32, x: f64) -> f64 {
        let r = self.r();
        let z = r * x;
        let h = if n % 2 == 0 { z.cosh() } else { z.sinh() };
        let w = r.powu(n) * h;
        self.coef_a * w.re + self.coef_b * w.im
    }

    pub fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }

    /// Samples u on `n` nodes of [−a, a].
    pub fn sample(&self, n: usize) -> Result<GridFunction> {
        GridFunction::from_fn(-self.a, self.a, n, |x| self.value(x))
    }
}

pub fn minimizer_l1(k: f64, a: f64) -> Result<MinimizerL1> {
    if !(k > 1.0) {
        return Err(invalid(format!("k must exceed 1, got {k}")));
    }
    if !(a > 0.0) {
        return Err(invalid(format!("a must be positive, got {a}")));
    }
    let lambda = ((k - 1.0) / 2.0).sqrt();
    let mu = ((k + 1.0) / 2.0).sqrt();
    let (ch, sh) = ((lambda * a).cosh(), (lambda * a).sinh());
    let (c, s) = ((mu * a).cos(), (mu * a).sin());
    let det = ch * ch * c * c + sh * sh * s * s;
    if det < 1e-14 {
        return Err(Error::DegenerateDenominator(det));
    }
    let q = (mu * mu - lambda * lambda) / (2.0 * lambda * mu);
    let coef_a = (ch * c - q * sh * s) / det;
    let coef_b = (sh * s + q * ch * c) / det;
    let mut m = MinimizerL1 {
        k,
        a,
        lambda,
        mu,
        coef_a,
        coef_b,
        m_a: 0.0,
        m_a_quadrature: 0.0,
        magnitude: 0.0,
    };
    m.m_a = -2.0 * m.derivative(0, a) * (m.derivative(3, a) + 2.0 * m.derivative(1, a));
    let (q, mag) = l1_quadrature(&m)?;
    m.m_a_quadrature = q;
    m.magnitude = mag;
    if (m.m_a - q).abs() > 1e-8 * mag {
        return Err(Error::CrossCheck {
            what: "endpoint formula vs quadrature",
            lhs: m.m_a,
            rhs: q,
        });
    }
    Ok(m)
}

fn l1_quadrature(m: &MinimizerL1) -> Result<(f64, f64)> {
    let gl = GaussLegendre::new(20).map_err(|e| Error::NumericalFailure(e.to_string()))?;
    let panels = ((2.0 * m.a / 0.25).ceil() as usize).max(4);
    let h = 2.0 * m.a / panels as f64;
    let k2 = m.k * m.k;
    let (mut form, mut mag) = (0.0, 0.0);
    for p in 0..panels {
        let x0 = -m.a + p as f64 * h;
        form += gl.integrate(x0, x0 + h, |x| {
            let (u, u1, u2) = (m.derivative(0, x), m.derivative(1, x), m.derivative(2, x));
            u2 * u2 - 2.0 * u1 * u1 + k2 * u * u
        });
        mag += gl.integrate(x0, x0 + h, |x| {
            let (u, u1, u2) = (m.derivative(0, x), m.derivative(1, x), m.derivative(2, x));
            u2 * u2 + 2.0 * u1 * u1 + k2 * u * u
        });
    }
    Ok((form, mag))
}

/// (k² − k − 1 − √(k²−1))·(sinh 2λa/λ − sin 2μa/μ).
pub fn l1_sign_factor(k: f64, a: f64) -> f64 {
    let lambda = ((k - 1.0) / 2.0).sqrt();
    let mu = ((k + 1.0) / 2.0).sqrt();
    let first = k * k - k - 1.0 - (k * k - 1.0).sqrt();
    first * ((2.0 * lambda * a).sinh() / lambda - (2.0 * mu * a).sin() / mu)
}

/// One row of an L1 scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1Row {
    pub k: f64,
    pub a: f64,
    pub m_a: f64,
    pub sign: i8,
}

/// M_a over a (k, a) grid, row-major in k.
pub fn l1_grid(ks: &[f64], as_: &[f64], exec: Execution) -> Result<Vec<L1Row>> {
    let pairs: Vec<(f64, f64)> = ks
        .iter()
        .flat_map(|&k| as_.iter().map(move |&a| (k, a)))
        .collect();
    par::map(exec, &pairs, |&(k, a)| {
        minimizer_l1(k, a).map(|m| L1Row {
            k,
            a,
            m_a: m.m_a,
            sign: sign_of(m.m_a),
        })
    })
    .into_iter()
    .collect()
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// u'''(0) + 2u'(0) for the half-line minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimizerL2 {
    pub k: f64,
    pub lambda: f64,
    pub mu: f64,
    pub value: f64,
    /// The same quantity from one-sided differences of the sampled profile.
    pub value_fd: f64,
    /// u''(0), zero by construction.
    pub d2_at_zero: f64,
}

pub fn minimizer_l2(k: f64) -> Result<MinimizerL2> {
    if !(k > 1.0) {
        return Err(invalid(format!("k must exceed 1, got {k}")));
    }
    let lambda = ((k - 1.0) / 2.0).sqrt();
    let mu = ((k + 1.0) / 2.0).sqrt();
    let b = -1.0 / (k * k - 1.0).sqrt();
    // u = Re(C e^{s x}) with C = A - iB, s = -λ + iμ
    let c = Complex64::new(1.0, -b);
    let s = Complex64::new(-lambda, mu);
    let d = |n: u32| (c * s.powu(n)).re;
    let value = d(3) + 2.0 * d(1);
    let h = 1e-2;
    let xs: Vec<f64> = (0..9).map(|i| i as f64).collect();
    let u = |x: f64| (c * (s * x).exp()).re;
    let fd = |m: usize| -> f64 {
        fornberg(0.0, &xs, m)
            .iter()
            .zip(&xs)
            .map(|(w, &t)| w * u(t * h))
            .sum::<f64>()
            / h.powi(m as i32)
    };
    let value_fd = fd(3) + 2.0 * fd(1);
    Ok(MinimizerL2 {
        k,
        lambda,
        mu,
        value,
        value_fd,
        d2_at_zero: d(2),
    })
}

/// The k in (1, 3] where minimizer_l2 changes sign.
pub fn l2_sign_change() -> Result<f64> {
    let f = |k: f64| minimizer_l2(k).map(|m| m.value).unwrap_or(f64::NAN);
    bisect(f, 1.0 + 1e-6, 3.0, 0.0)
}

/// Which boundary constraint a quadratic-form sample satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    ZeroEnds,
    EqualEnds,
    HalfLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadFormReport {
    pub value: f64,
    pub interval: (f64, f64),
    pub k: f64,
    pub beta: f64,
    pub boundary_kind: BoundaryKind,
    /// ∫(u'')² + β²∫(u')² + (k²β⁴/4)∫u².
    pub scale: f64,
}

/// ∫(u'')² − β²∫(u')² + (k²β⁴/4)∫u².
pub fn quad_form(
    u: &GridFunction,
    beta: f64,
    k: f64,
    kind: BoundaryKind,
) -> Result<QuadFormReport> {
    let v = u.values();
    let n = v.len();
    let peak = u.sup_norm().max(1.0);
    match kind {
        BoundaryKind::ZeroEnds => {
            if v[0].abs() > 1e-10 * peak {
                return Err(Error::ConstraintViolation {
                    endpoint: "left",
                    defect: v[0].abs(),
                });
            }
            if v[n - 1].abs() > 1e-10 * peak {
                return Err(Error::ConstraintViolation {
                    endpoint: "right",
                    defect: v[n - 1].abs(),
                });
            }
        }
        BoundaryKind::EqualEnds => {
            let d = (v[0] - v[n - 1]).abs();
            if d > 1e-10 * peak {
                return Err(Error::ConstraintViolation {
                    endpoint: "right",
                    defect: d,
                });
            }
        }
        BoundaryKind::HalfLine => {
            if v[n - 1].abs() > 1e-8 * peak {
                return Err(Error::ConstraintViolation {
                    endpoint: "right",
                    defect: v[n - 1].abs(),
                });
            }
        }
    }
    let d1 = u.differentiate_with(1, Accuracy::Sixth)?;
    let d2 = u.differentiate_with(2, Accuracy::Sixth)?;
    let sq = |g: &GridFunction| g.map(|x| x * x).integrate();
    let (i2, i1, i0) = (sq(&d2), sq(&d1), sq(u));
    let b2 = beta * beta;
    let c = k * k * b2 * b2 / 4.0;
    Ok(QuadFormReport {
        value: i2 - b2 * i1 + c * i0,
        interval: (u.x_left(), u.x_right()),
        k,
        beta,
        boundary_kind: kind,
        scale: i2 + b2 * i1 + c * i0,
    })
}

/// A random smooth zero-ends function: up to 8 sine modes on [−a, a].
pub fn random_zero_ends(rng: &mut impl Rng, a: f64, n: usize) -> Result<GridFunction> {
    let count = rng.random_range(1..=8usize);
    let modes: Vec<(f64, f64)> = (0..count)
        .map(|_| {
            (
                rng.random_range(1..=16u32) as f64,
                rng.random_range(-1.0..=1.0),
            )
        })
        .collect();
    let f = |x: f64| -> f64 {
        modes
            .iter()
            .map(|&(j, c)| c * (j * PI * (x + a) / (2.0 * a)).sin())
            .sum()
    };
    let raw = GridFunction::from_fn(-a, a, n, f)?;
    // project out end values so u(±a) = 0 holds to the last bit
    let (l, r) = (raw.values()[0], raw.values()[n - 1]);
    let vals = raw
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let t = i as f64 / (n - 1) as f64;
            v - (1.0 - t) * l - t * r
        })
        .collect();
    raw.with_values(vals)
}

/// One randomized quadratic-form trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadTrial {
    pub index: usize,
    pub a: f64,
    pub value: f64,
    pub scale: f64,
}

/// Seeded zero-ends trials; trial `i` draws from stream `i` of the seed.
pub fn quad_form_trials(
    trials: usize,
    seed: u64,
    beta: f64,
    k: f64,
    exec: Execution,
) -> Result<Vec<QuadTrial>> {
    par::map_range(exec, trials, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let a = rng.random_range(0.5..4.0);
        let u = random_zero_ends(&mut rng, a, 2001)?;
        let r = quad_form(&u, beta, k, BoundaryKind::ZeroEnds)?;
        Ok(QuadTrial {
            index: i,
            a,
            value: r.value,
            scale: r.scale,
        })
    })
    .into_iter()
    .collect()
}

/// Closed form and discrete value of the first Navier eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NavierEigen {
    pub a: f64,
    pub closed_form: f64,
    pub discrete: f64,
    pub intervals: usize,
}

impl NavierEigen {
    pub fn relative_error(&self) -> f64 {
        (self.discrete - self.closed_form).abs() / self.closed_form
    }
}

/// T²/h³ and T/h for T = tridiag(−1, 2, −1) on the interior nodes.
fn navier_forms(n_interior: usize, h: f64) -> (SymBand, SymBand) {
    let m = n_interior;
    let mut k = SymBand::zeros(m, 2);
    let mut w = SymBand::zeros(m, 1);
    let h3 = h * h * h;
    for i in 0..m {
        let edge = i == 0 || i == m - 1;
        k.set(i, i, if edge { 5.0 } else { 6.0 } / h3);
        if i >= 1 {
            k.set(i, i - 1, -4.0 / h3);
            w.set(i, i - 1, -1.0 / h);
        }
        if i >= 2 {
            k.set(i, i - 2, 1.0 / h3);
        }
        w.set(i, i, 2.0 / h);
    }
    (k, w)
}

/// λ₁² = π²/(4a²) for u'''' + λ²u'' = 0 with u = u'' = 0 at ±a.
pub fn navier_first_eigen(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(invalid(format!("a must be positive, got {a}")));
    }
    Ok(PI * PI / (4.0 * a * a))
}

/// Smallest generalized eigenvalue of (∫(u'')², ∫(u')²) on `intervals`
/// cells, located by bisection on the inertia of K − λM.
pub fn navier_first_eigen_discrete(a: f64, intervals: usize) -> Result<NavierEigen> {
    let closed_form = navier_first_eigen(a)?;
    if intervals < 8 {
        return Err(Error::MeshTooSmall {
            n: intervals,
            min: 8,
        });
    }
    let h = 2.0 * a / intervals as f64;
    let (k, m) = navier_forms(intervals - 1, h);
    let below = |lam: f64| -> Result<usize> { k.add_scaled(-lam, &m).negative_count() };
    let mut lo = 0.0;
    let mut hi = 1.0 / (a * a);
    while below(hi)? == 0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if below(mid)? == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(NavierEigen {
        a,
        closed_form,
        discrete: 0.5 * (lo + hi),
        intervals,
    })
}

/// Extremal ratio 15/(4a⁵) with its witness and checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeamRatio {
    pub a: f64,
    pub ratio: f64,
    #[serde(skip)]
    pub witness: GridFunction,
    pub integral: f64,
    pub bending: f64,
    /// min ∫(v'')²/(∫v)² over discretized zero-ends functions.
    pub discrete_min: f64,
}

pub fn beam_ratio(a: f64) -> Result<BeamRatio> {
    if !(a > 0.0) {
        return Err(invalid(format!("a must be positive, got {a}")));
    }
    let ratio = 15.0 / (4.0 * a.powi(5));
    let a2 = a * a;
    let a4 = a2 * a2;
    let witness = GridFunction::from_fn(-a, a, 4001, |x| {
        (x.powi(4) - a4) / 24.0 - a2 * (x * x - a2) / 4.0
    })?;
    let integral = witness.integrate();
    let d2 = witness.differentiate_with(2, Accuracy::Sixth)?;
    let bending = d2.map(|v| v * v).integrate();
    let target = 4.0 * a.powi(5) / 15.0;
    for (what, got) in [("witness integral", integral), ("witness bending", bending)] {
        if (got - target).abs() > 1e-6 * target {
            return Err(Error::CrossCheck {
                what,
                lhs: got,
                rhs: target,
            });
        }
    }
    Ok(BeamRatio {
        a,
        ratio,
        witness,
        integral,
        bending,
        discrete_min: beam_ratio_discrete(a, 1024)?,
    })
}

/// Exact minimum 1/(wᵀK⁻¹w) of the discretized ratio.
pub fn beam_ratio_discrete(a: f64, intervals: usize) -> Result<f64> {
    let h = 2.0 * a / intervals as f64;
    let (k, _) = navier_forms(intervals - 1, h);
    let w = vec![h; intervals - 1];
    let z = k.ldlt().solve(&w);
    let wz: f64 = w.iter().zip(&z).map(|(a, b)| a * b).sum();
    Ok(1.0 / wz)
}

/// Defect of φ = 1 + cos βx as a clamped solution of φ'''' + β²φ'' = 0
/// on [−π/β, π/β].
pub fn clamped_even_check(beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(invalid(format!("beta must be positive, got {beta}")));
    }
    clamped_even_defect(beta, PI / beta)
}

/// Same defect on [−a, a].
pub fn clamped_even_defect(beta: f64, a: f64) -> Result<f64> {
    let b2 = beta * beta;
    let n = 2001;
    let h = 2.0 * a / (n - 1) as f64;
    let mut interior = 0.0f64;
    for i in 0..n {
        let c = (beta * (-a + i as f64 * h)).cos();
        let d4 = b2 * b2 * c;
        let d2 = -b2 * c;
        interior = interior.max((d4 + b2 * d2).abs());
    }
    let phi = |x: f64| 1.0 + (beta * x).cos();
    let dphi = |x: f64| -beta * (beta * x).sin();
    let boundary = phi(-a).abs() + phi(a).abs() + dphi(-a).abs() + dphi(a).abs();
    Ok(interior + boundary)
}

/// Root of μ₂ tan μ₂a = μ₁ tan μ₁a in (π/(2μ₂), 3π/(2μ₂)).
pub fn solve_mu_tan(mu1: f64, mu2: f64) -> Result<f64> {
    if !(mu1 >= 0.0) || !(mu2 > 0.0) {
        return Err(invalid(format!(
            "need mu1 >= 0 and mu2 > 0, got {mu1}, {mu2}"
        )));
    }
    if mu1 == mu2 {
        return Err(Error::Degenerate(
            "mu1 = mu2 makes the equation an identity".into(),
        ));
    }
    if mu1 > mu2 {
        return Err(invalid(format!("need mu1 < mu2, got {mu1} > {mu2}")));
    }
    if mu1 == 0.0 {
        return Ok(PI / mu2);
    }
    let f = |a: f64| mu2 * (mu2 * a).tan() - mu1 * (mu1 * a).tan();
    let lo = FRAC_PI_2 / mu2 + 1e-9;
    let hi = 3.0 * FRAC_PI_2 / mu2 - 1e-9;
    // poles of the right-hand side inside the bracket split it further
    let mut cuts = vec![lo];
    let mut j = 0;
    loop {
        let p = (2 * j + 1) as f64 * FRAC_PI_2 / mu1;
        if p >= hi {
            break;
        }
        if p > lo {
            cuts.push(p - 1e-9);
            cuts.push(p + 1e-9);
        }
        j += 1;
    }
    cuts.push(hi);
    let steps = 4000;
    for seg in cuts.chunks(2) {
        let (s0, s1) = (seg[0], seg[1]);
        let h = (s1 - s0) / steps as f64;
        let mut x0 = s0;
        let mut f0 = f(s0);
        for i in 1..=steps {
            let x1 = if i == steps { s1 } else { s0 + i as f64 * h };
            let f1 = f(x1);
            if f0.signum() != f1.signum() {
                let r = bisect(f, x0, x1, 0.0)?;
                let scale = mu2 * (1.0 + (mu2 * r).tan().abs());
                if f(r).abs() < 1e-10 * scale.max(1.0) {
                    return Ok(r);
                }
            }
            x0 = x1;
            f0 = f1;
        }
    }
    Err(Error::NoRoot(format!(
        "mu2 tan(mu2 a) = mu1 tan(mu1 a) has no root for mu = ({mu1}, {mu2})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_invariants_and_boundary_values() {
        for &(k, a) in &[(2.4, 3.0), (2.0, 1.0), (3.0, 0.5), (1.5, 7.0)] {
            let m = minimizer_l1(k, a).unwrap();
            assert!((m.lambda.powi(2) - m.mu.powi(2) + 1.0).abs() < 1e-12);
            assert!((m.lambda.powi(2) + m.mu.powi(2) - k).abs() < 1e-12);
            for x in [-a, a] {
                assert!((m.value(x) - 1.0).abs() < 1e-8);
                assert!(m.derivative(2, x).abs() < 1e-8);
            }
        }
        let m = minimizer_l1(2.4, 3.0).unwrap();
        assert!(m.m_a >= 0.0);
    }

    #[test]
    fn l1_small_interval() {
        let m = minimizer_l1(2.0, 1e-3).unwrap();
        assert!(m.m_a > 0.0);
        assert!((m.m_a - 2.0 * 4.0 * 1e-3).abs() < 1e-5);
    }

    #[test]
    fn l1_errors() {
        assert!(minimizer_l1(1.0, 1.0).is_err());
        assert!(minimizer_l1(2.0, 0.0).is_err());
    }

    #[test]
    fn l2_closed_form() {
        for &k in &[1.05, 1.1514, 1.5, 2.0, 3.0] {
            let m = minimizer_l2(k).unwrap();
            let lam = ((k - 1.0) / 2.0).sqrt();
            let want = k * (k - 2.0) / (2.0 * lam);
            assert!((m.value - want).abs() < 1e-10 * (1.0 + want.abs()), "{k}");
            assert!(
                (m.value_fd - m.value).abs() < 1e-6 * (1.0 + want.abs()),
                "{k}"
            );
            assert!(m.d2_at_zero.abs() < 1e-12);
        }
        assert!(minimizer_l2(1.05).unwrap().value < 0.0);
        assert!(minimizer_l2(1.0).is_err());
    }

    #[test]
    fn quad_form_cosine() {
        let a = 1.3;
        let om = PI / (2.0 * a);
        let u = GridFunction::from_fn(-a, a, 4001, |x| (om * x).cos()).unwrap();
        let r = quad_form(&u, 2f64.sqrt(), 1.0, BoundaryKind::ZeroEnds).unwrap();
        let want = a * (om * om - 1.0).powi(2);
        assert!((r.value - want).abs() < 1e-7, "{} {want}", r.value);
    }

    #[test]
    fn quad_form_constraint() {
        let u = GridFunction::from_fn(-1.0, 1.0, 101, |x| x + 2.0).unwrap();
        let err = quad_form(&u, 1.0, 1.0, BoundaryKind::ZeroEnds).unwrap_err();
        assert!(matches!(
            err,
            Error::ConstraintViolation {
                endpoint: "left",
                ..
            }
        ));
        let err = quad_form(&u, 1.0, 1.0, BoundaryKind::EqualEnds).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolation { .. }));
    }

    #[test]
    fn quad_form_matches_minimizer() {
        let m = minimizer_l1(2.5, 1.0).unwrap();
        let u = m.sample(20001).unwrap();
        let r = quad_form(&u, 2f64.sqrt(), 2.5, BoundaryKind::EqualEnds).unwrap();
        assert!(
            (r.value - m.m_a).abs() < 1e-7 * m.magnitude,
            "{} {}",
            r.value,
            m.m_a
        );
    }

    #[test]
    fn navier() {
        assert!((navier_first_eigen(FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
        assert!((navier_first_eigen(1.0).unwrap() - 2.46740110027234).abs() < 1e-12);
        let r = navier_first_eigen(2.0).unwrap() * 4.0 - navier_first_eigen(1.0).unwrap();
        assert!(r.abs() < 1e-15);
        let d = navier_first_eigen_discrete(1.0, 1024).unwrap();
        assert!(d.relative_error() < 1e-4, "{}", d.relative_error());
        assert!(navier_first_eigen(0.0).is_err());
    }

    #[test]
    fn beam() {
        let b = beam_ratio(1.0).unwrap();
        assert_eq!(b.ratio, 3.75);
        assert!((b.integral - 4.0 / 15.0).abs() < 1e-6);
        assert!(
            (b.discrete_min - 3.75).abs() < 0.01 * 3.75,
            "{}",
            b.discrete_min
        );
        let w = &b.witness;
        assert!(w.values()[0].abs() < 1e-12 && w.values()[w.len() - 1].abs() < 1e-12);
        let upp = |x: f64| x * x / 2.0 - 0.5;
        assert!(upp(1.0).abs() < 1e-12 && upp(-1.0).abs() < 1e-12);
        assert!(beam_ratio(-1.0).is_err());
    }

    #[test]
    fn clamped() {
        assert!(clamped_even_check(1.0).unwrap() < 1e-8);
        assert!(clamped_even_check(0.5).unwrap() < 1e-8 * 0.5f64.powi(4));
        assert!(clamped_even_defect(1.0, 1.05 * PI).unwrap() > 1e-3);
    }

    #[test]
    fn mu_tan() {
        assert_eq!(solve_mu_tan(0.0, 0.8).unwrap(), PI / 0.8);
        let a = solve_mu_tan(0.2, 1.0).unwrap();
        assert!((a - 3.295290179132045).abs() < 1e-10, "{a}");
        assert!(a > FRAC_PI_2 && a < 3.0 * FRAC_PI_2);
        assert!(((a).tan() - 0.2 * (0.2 * a).tan()).abs() < 1e-10);
        assert!(solve_mu_tan(1.0, 1.0).is_err());
        assert!(solve_mu_tan(1.0, 0.5).is_err());
        for &(m1, m2) in &[(0.1, 1.0), (0.3, 1.0), (0.01, 0.7)] {
            let a = solve_mu_tan(m1, m2).unwrap();
            assert!(a > FRAC_PI_2 / m2 && a < 3.0 * FRAC_PI_2 / m2);
        }
        // only a pole of the right side lies in the bracket
        assert!(matches!(solve_mu_tan(0.5, 1.0), Err(Error::NoRoot(_))));
        assert!(matches!(solve_mu_tan(0.9, 1.0), Err(Error::NoRoot(_))));
    }
}
