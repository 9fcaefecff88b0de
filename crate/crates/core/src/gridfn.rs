//! Real functions sampled on a uniform 1-D mesh.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::report::fmt_f64;
use crate::stencil;
pub use crate::stencil::Accuracy;

/// Smallest admissible mesh.
pub const MIN_NODES: usize = 9;

/// Uniform-grid samples `values[i] = f(x_left + i*dx)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    x_left: f64,
    dx: f64,
    values: Vec<f64>,
}

/// First through fourth derivatives.
#[derive(Debug, Clone)]
pub struct DerivativeBundle {
    pub d1: GridFunction,
    pub d2: GridFunction,
    pub d3: GridFunction,
    pub d4: GridFunction,
}

/// Squared H² norm plus the boundary defect when the samples do not decay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct H2Norm {
    pub value: f64,
    /// Largest of |f|, |f'| at the endpoints relative to max|f|, when above 1e-8.
    pub boundary_leak: Option<f64>,
}

impl GridFunction {
    pub fn new(x_left: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() || !x_left.is_finite() {
            return Err(invalid(format!("mesh spacing must be positive, got {dx}")));
        }
        if values.len() < MIN_NODES {
            return Err(Error::MeshTooSmall {
                n: values.len(),
                min: MIN_NODES,
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite value at node {i}")));
        }
        Ok(GridFunction { x_left, dx, values })
    }

    /// Samples `f` at `n` equispaced nodes spanning `[a, b]`.
    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 || !(b > a) {
            return Err(invalid(format!("bad interval [{a}, {b}] with {n} nodes")));
        }
        let dx = (b - a) / (n - 1) as f64;
        let values = (0..n).map(|i| f(a + i as f64 * dx)).collect();
        Self::new(a, dx, values)
    }

    /// Same mesh, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(invalid("value count does not match mesh"));
        }
        Self::new(self.x_left, self.dx, values)
    }

    pub fn zeros_like(&self) -> Self {
        GridFunction {
            x_left: self.x_left,
            dx: self.dx,
            values: vec![0.0; self.len()],
        }
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x(self.len() - 1)
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_left + i as f64 * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GridFunction {
            x_left: self.x_left,
            dx: self.dx,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `a*self + b*other` on a shared mesh.
    pub fn axpby(&self, a: f64, other: &GridFunction, b: f64) -> Result<Self> {
        self.check_same_mesh(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| a * u + b * v)
            .collect();
        Ok(GridFunction {
            x_left: self.x_left,
            dx: self.dx,
            values,
        })
    }

    /// Pointwise product on a shared mesh.
    pub fn mul(&self, other: &GridFunction) -> Result<Self> {
        self.check_same_mesh(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| u * v)
            .collect();
        Ok(GridFunction {
            x_left: self.x_left,
            dx: self.dx,
            values,
        })
    }

    fn check_same_mesh(&self, other: &GridFunction) -> Result<()> {
        if self.len() != other.len()
            || (self.dx - other.dx).abs() > 1e-14 * self.dx
            || (self.x_left - other.x_left).abs() > 1e-12 * (1.0 + self.x_left.abs())
        {
            return Err(invalid("grid functions live on different meshes"));
        }
        Ok(())
    }

    /// Derivative of the given order with second-order stencils.
    pub fn differentiate(&self, order: usize) -> Result<Self> {
        self.differentiate_with(order, Accuracy::Second)
    }

    /// Derivative of the given order: centered stencils in the interior,
    /// one-sided stencils of matching accuracy near the ends.
    pub fn differentiate_with(&self, order: usize, acc: Accuracy) -> Result<Self> {
        if !(1..=4).contains(&order) {
            return Err(invalid(format!(
                "derivative order must be in 1..4, got {order}"
            )));
        }
        let n = self.len();
        let need = order + acc.order();
        if n < need.max(MIN_NODES) {
            return Err(Error::MeshTooSmall {
                n,
                min: need.max(MIN_NODES),
            });
        }
        let scale = self.dx.powi(order as i32);
        let center = stencil::centered(order, acc);
        let hw = center.len() / 2;
        let mut out = vec![0.0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let s;
            let st = if i >= hw && i + hw < n {
                &center
            } else {
                s = stencil::at_node(i, n, order, acc);
                &s
            };
            let mut acc_v = 0.0;
            for (&off, &w) in st.offsets.iter().zip(&st.weights) {
                acc_v += w * self.values[(i as isize + off) as usize];
            }
            *o = acc_v / scale;
        }
        Ok(GridFunction {
            x_left: self.x_left,
            dx: self.dx,
            values: out,
        })
    }

    /// All four derivatives with sixth-order stencils.
    pub fn derivatives(&self) -> Result<DerivativeBundle> {
        let acc = Accuracy::Sixth;
        Ok(DerivativeBundle {
            d1: self.differentiate_with(1, acc)?,
            d2: self.differentiate_with(2, acc)?,
            d3: self.differentiate_with(3, acc)?,
            d4: self.differentiate_with(4, acc)?,
        })
    }

    /// Composite trapezoid rule over the mesh extent.
    pub fn integrate(&self) -> f64 {
        trapezoid(&self.values, self.dx)
    }

    /// ∫(f'')² + ∫(f')² + ∫f².
    pub fn h2_norm_squared(&self) -> Result<H2Norm> {
        let d1 = self.differentiate_with(1, Accuracy::Sixth)?;
        let d2 = self.differentiate_with(2, Accuracy::Sixth)?;
        let sq = |g: &GridFunction| trapezoid_by(&g.values, self.dx, |v| v * v);
        let value = sq(&d2) + sq(&d1) + sq(self);
        let n = self.len();
        let edge = [
            self.values[0].abs(),
            self.values[n - 1].abs(),
            d1.values[0].abs(),
            d1.values[n - 1].abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let peak = self.sup_norm();
        let rel = if peak > 0.0 { edge / peak } else { 0.0 };
        Ok(H2Norm {
            value,
            boundary_leak: (rel >= 1e-8).then_some(rel),
        })
    }

    /// Linear interpolation at `x`, clamped to the mesh.
    pub fn interpolate(&self, x: f64) -> f64 {
        let t = ((x - self.x_left) / self.dx).clamp(0.0, (self.len() - 1) as f64);
        let i = (t.floor() as usize).min(self.len() - 2);
        let w = t - i as f64;
        (1.0 - w) * self.values[i] + w * self.values[i + 1]
    }

    /// Writes `x,value` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["x", "value"])?;
        for (i, v) in self.values.iter().enumerate() {
            wr.write_record([fmt_f64(self.x(i)), fmt_f64(*v)])?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Reads a CSV whose first two columns are mesh position and value.
    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let parse = |k: usize| -> Result<f64> {
                rec.get(k)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| invalid(format!("bad CSV field in column {k}")))
            };
            xs.push(parse(0)?);
            vs.push(parse(1)?);
        }
        if xs.len() < MIN_NODES {
            return Err(Error::MeshTooSmall {
                n: xs.len(),
                min: MIN_NODES,
            });
        }
        let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        for (i, &x) in xs.iter().enumerate() {
            if (x - (xs[0] + i as f64 * dx)).abs() > 1e-9 * (1.0 + x.abs()) {
                return Err(invalid("CSV mesh is not uniform"));
            }
        }
        Self::new(xs[0], dx, vs)
    }
}

/// Trapezoid rule for samples with spacing `dx`.
pub fn trapezoid(v: &[f64], dx: f64) -> f64 {
    trapezoid_by(v, dx, |x| x)
}

pub(crate) fn trapezoid_by(v: &[f64], dx: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = v.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = v[1..n - 1].iter().map(|&x| f(x)).sum();
    dx * (inner + 0.5 * (f(v[0]) + f(v[n - 1])))
}

/// Integral over `[a, b]` of the piecewise-linear interpolant of samples
/// `v` on the mesh starting at `x_left`. Partial cells are split
/// proportionally, so integrals over adjacent pieces add up exactly.
pub fn integrate_linear(v: &[f64], x_left: f64, dx: f64, a: f64, b: f64) -> f64 {
    let n = v.len();
    let x_right = x_left + (n - 1) as f64 * dx;
    let a = a.max(x_left);
    let b = b.min(x_right);
    if b <= a {
        return 0.0;
    }
    let at = |x: f64| {
        let t = ((x - x_left) / dx).clamp(0.0, (n - 1) as f64);
        let i = (t.floor() as usize).min(n - 2);
        let w = t - i as f64;
        (1.0 - w) * v[i] + w * v[i + 1]
    };
    let ia = ((a - x_left) / dx).floor() as usize;
    let ib = ((b - x_left) / dx).ceil() as usize;
    let mut total = 0.0;
    let mut xprev = a;
    let mut fprev = at(a);
    for k in ia + 1..ib.min(n) {
        let xk = x_left + k as f64 * dx;
        if xk <= a || xk >= b {
            continue;
        }
        total += 0.5 * (fprev + v[k]) * (xk - xprev);
        xprev = xk;
        fprev = v[k];
    }
    total + 0.5 * (fprev + at(b)) * (b - xprev)
}
