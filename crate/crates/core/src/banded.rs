//! Banded matrices: LU with partial pivoting and symmetric LDLᵀ.

use crate::error::{Error, Result};

/// Square matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    // row i holds columns i-kl ..= i+ku+kl (extra kl for pivoting fill-in)
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            0.0
        }
    }

    /// Adds `v` at `(i, j)`, which must lie inside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.data[self.idx(i, j)] * x[j]).sum()
            })
            .collect()
    }

    /// LU factorization with partial pivoting.
    pub fn lu(mut self) -> Result<BandLu> {
        let n = self.n;
        let up = self.ku + self.kl;
        let mut piv = vec![0usize; n];
        let mut pmax = 0.0f64;
        let mut pmin = f64::INFINITY;
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = self.data[self.idx(k, k)].abs();
            for i in k + 1..=last {
                let v = self.data[self.idx(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > 0.0) || !best.is_finite() {
                return Err(Error::SingularJacobian(f64::INFINITY));
            }
            piv[k] = p;
            let jend = (k + up).min(n - 1);
            if p != k {
                for j in k..=jend {
                    let a = self.idx(k, j);
                    let b = self.idx(p, j);
                    self.data.swap(a, b);
                }
            }
            let d = self.data[self.idx(k, k)];
            pmax = pmax.max(d.abs());
            pmin = pmin.min(d.abs());
            for i in k + 1..=last {
                let ik = self.idx(i, k);
                let l = self.data[ik] / d;
                self.data[ik] = l;
                if l != 0.0 {
                    for j in k + 1..=jend {
                        let kj = self.data[self.idx(k, j)];
                        let ij = self.idx(i, j);
                        self.data[ij] -= l * kj;
                    }
                }
            }
        }
        Ok(BandLu {
            m: self,
            piv,
            cond_estimate: pmax / pmin,
        })
    }
}

/// Factorized band matrix.
#[derive(Debug, Clone)]
pub struct BandLu {
    m: BandMatrix,
    piv: Vec<usize>,
    /// Ratio of largest to smallest pivot magnitude; a cheap lower
    /// indicator of the condition number.
    pub cond_estimate: f64,
}

impl BandLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = &self.m;
        let n = m.n;
        let up = m.ku + m.kl;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            for i in k + 1..=(k + m.kl).min(n - 1) {
                x[i] -= m.data[m.idx(i, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..=(k + up).min(n - 1) {
                s -= m.data[m.idx(k, j)] * x[j];
            }
            x[k] = s / m.data[m.idx(k, k)];
        }
        x
    }
}

/// Symmetric band matrix stored by its lower half-band.
#[derive(Debug, Clone)]
pub struct SymBand {
    n: usize,
    b: usize,
    // row i holds columns i-b ..= i
    data: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, b: usize) -> Self {
        SymBand {
            n,
            b,
            data: vec![0.0; n * (b + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.b
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        // requires j <= i, i - j <= b
        i * (self.b + 1) + (self.b + j - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        if i - j > self.b {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Sets the symmetric pair `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        assert!(i - j <= self.b, "({i}, {j}) outside band");
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn add_diag(&mut self, shift: f64) {
        for i in 0..self.n {
            let k = self.idx(i, i);
            self.data[k] += shift;
        }
    }

    /// `self + s * other` for matrices of equal size.
    pub fn add_scaled(&self, s: f64, other: &SymBand) -> SymBand {
        let b = self.b.max(other.b);
        let mut out = SymBand::zeros(self.n, b);
        for i in 0..self.n {
            for j in i.saturating_sub(b)..=i {
                out.set(i, j, self.get(i, j) + s * other.get(i, j));
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let d = self.data[self.idx(i, i)];
            y[i] += d * x[i];
            for j in i.saturating_sub(self.b)..i {
                let a = self.data[self.idx(i, j)];
                y[i] += a * x[j];
                y[j] += a * x[i];
            }
        }
        y
    }

    /// LDLᵀ without pivoting.
    pub fn ldlt(&self) -> Ldlt {
        let n = self.n;
        let b = self.b;
        let mut l = self.data.clone();
        let mut d = vec![0.0; n];
        for j in 0..n {
            let jlo = j.saturating_sub(b);
            let mut dj = l[self.idx(j, j)];
            for k in jlo..j {
                let ljk = l[self.idx(j, k)];
                dj -= ljk * ljk * d[k];
            }
            d[j] = dj;
            for i in j + 1..=(j + b).min(n - 1) {
                let ilo = i.saturating_sub(b).max(jlo);
                let mut s = l[self.idx(i, j)];
                for k in ilo..j {
                    s -= l[self.idx(i, k)] * l[self.idx(j, k)] * d[k];
                }
                let k = self.idx(i, j);
                l[k] = if dj != 0.0 { s / dj } else { f64::INFINITY };
            }
        }
        Ldlt { n, b, l, d }
    }

    /// Number of negative eigenvalues (Sylvester's law of inertia).
    pub fn negative_count(&self) -> Result<usize> {
        let f = self.ldlt();
        if f.d.iter().any(|v| !v.is_finite() || *v == 0.0) {
            return Err(Error::NumericalFailure(
                "zero or non-finite pivot in LDLT".into(),
            ));
        }
        Ok(f.d.iter().filter(|&&v| v < 0.0).count())
    }
}

/// LDLᵀ factors of a symmetric band matrix.
#[derive(Debug, Clone)]
pub struct Ldlt {
    n: usize,
    b: usize,
    l: Vec<f64>,
    pub d: Vec<f64>,
}

impl Ldlt {
    #[inline]
    fn li(&self, i: usize, j: usize) -> f64 {
        self.l[i * (self.b + 1) + (self.b + j - i)]
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = rhs.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in i.saturating_sub(self.b)..i {
                s -= self.li(i, k) * x[k];
            }
            x[i] = s;
        }
        for i in 0..n {
            x[i] /= self.d[i];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..=(i + self.b).min(n - 1) {
                s -= self.li(k, i) * x[k];
            }
            x[i] = s;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> BandMatrix {
        let mut m = BandMatrix::zeros(n, 2, 3);
        for i in 0..n {
            for j in i.saturating_sub(2)..=(i + 3).min(n - 1) {
                let v = 5.0 * ((i * 7 + j * 13) as f64).sin();
                m.set(i, j, if i == j { v * 0.01 } else { v });
            }
        }
        m
    }

    #[test]
    fn lu_solves_with_pivoting() {
        let n = 40;
        let m = sample(n);
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let b = m.matvec(&x);
        let y = m.lu().unwrap().solve(&b);
        for (a, c) in x.iter().zip(&y) {
            assert!((a - c).abs() < 1e-9, "{a} {c}");
        }
    }

    #[test]
    fn singular_is_reported() {
        let m = BandMatrix::zeros(5, 1, 1);
        assert!(matches!(m.lu(), Err(Error::SingularJacobian(_))));
    }

    #[test]
    fn ldlt_solve_and_inertia() {
        let n = 30;
        let mut s = SymBand::zeros(n, 2);
        for i in 0..n {
            s.set(i, i, if i == 0 || i == n - 1 { 5.0 } else { 6.0 });
            if i >= 1 {
                s.set(i, i - 1, -4.0);
            }
            if i >= 2 {
                s.set(i, i - 2, 1.0);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
        let b = s.matvec(&x);
        let y = s.ldlt().solve(&b);
        for (a, c) in x.iter().zip(&y) {
            assert!((a - c).abs() < 1e-8 * (1.0 + a.abs()));
        }
        assert_eq!(s.negative_count().unwrap(), 0);
        let mut t = s.clone();
        t.add_diag(-1.0);
        // eigenvalues of the pentadiagonal (2 - 2cos)^2 - 1 are negative below pi/3
        let expected = (1..=n)
            .filter(|&k| {
                let th = k as f64 * std::f64::consts::PI / (n as f64 + 1.0);
                (2.0 - 2.0 * th.cos()).powi(2) < 1.0
            })
            .count();
        assert_eq!(t.negative_count().unwrap(), expected);
    }
}
