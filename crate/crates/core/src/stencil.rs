//! Finite-difference weights on integer offsets (Fornberg's recursion).

/// Formal accuracy of a finite-difference stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Accuracy {
    #[default]
    Second,
    Fourth,
    Sixth,
}

impl Accuracy {
    pub fn order(self) -> usize {
        match self {
            Accuracy::Second => 2,
            Accuracy::Fourth => 4,
            Accuracy::Sixth => 6,
        }
    }
}

/// Weights for the `m`-th derivative at `z` using nodes `xs`.
pub fn fornberg(z: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// A stencil: `(offset, weight)` pairs for unit spacing.
#[derive(Debug, Clone)]
pub struct Stencil {
    pub offsets: Vec<isize>,
    pub weights: Vec<f64>,
}

impl Stencil {
    fn from_offsets(offsets: Vec<isize>, at: f64, m: usize) -> Self {
        let xs: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
        let weights = fornberg(at, &xs, m);
        Stencil { offsets, weights }
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

/// Number of points of the centered stencil for derivative `m`.
pub fn centered_points(m: usize, acc: Accuracy) -> usize {
    2 * m.div_ceil(2) - 1 + acc.order()
}

/// Centered stencil for derivative `m`.
pub fn centered(m: usize, acc: Accuracy) -> Stencil {
    let hw = (centered_points(m, acc) / 2) as isize;
    Stencil::from_offsets((-hw..=hw).collect(), 0.0, m)
}

/// Stencil evaluating derivative `m` at node `i` of a mesh with `n` nodes.
/// Interior nodes get the centered stencil, nodes near the ends a
/// one-sided stencil of `m + p` points shifted to fit.
pub fn at_node(i: usize, n: usize, m: usize, acc: Accuracy) -> Stencil {
    let pts = centered_points(m, acc);
    let hw = pts / 2;
    if i >= hw && i + hw < n {
        return centered(m, acc);
    }
    let width = (m + acc.order()).min(n);
    let start = if i < hw { 0 } else { n - width };
    let offsets = (0..width)
        .map(|k| (start + k) as isize - i as isize)
        .collect();
    Stencil::from_offsets(offsets, 0.0, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_sixth_order_weights() {
        let d1 = centered(1, Accuracy::Sixth);
        let want = [-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0];
        for (w, e) in d1.weights.iter().zip(want) {
            assert!((w - e / 60.0).abs() < 1e-15);
        }
        let d2 = centered(2, Accuracy::Sixth);
        let want = [
            1.0 / 90.0,
            -3.0 / 20.0,
            1.5,
            -49.0 / 18.0,
            1.5,
            -3.0 / 20.0,
            1.0 / 90.0,
        ];
        for (w, e) in d2.weights.iter().zip(want) {
            assert!((w - e).abs() < 1e-14);
        }
    }

    #[test]
    fn point_counts() {
        assert_eq!(centered_points(1, Accuracy::Second), 3);
        assert_eq!(centered_points(2, Accuracy::Second), 3);
        assert_eq!(centered_points(3, Accuracy::Second), 5);
        assert_eq!(centered_points(4, Accuracy::Second), 5);
        assert_eq!(centered_points(4, Accuracy::Sixth), 9);
    }

    #[test]
    fn one_sided_is_exact_on_polynomials() {
        // d3 of x^3 at the left boundary
        let s = at_node(0, 50, 3, Accuracy::Second);
        let v: f64 = s
            .offsets
            .iter()
            .zip(&s.weights)
            .map(|(&o, w)| w * (o as f64).powi(3))
            .sum();
        assert!((v - 6.0).abs() < 1e-10);
    }
}
