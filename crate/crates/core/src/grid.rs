//! Uniform collocation grid on (-L, L) with Dirichlet walls, and the basis
//! functions peaked at its nodes.
//!
//! The basis function attached to node k is a finite sine series,
//!
//!   s_k(x) = (2/N) sum_{m=1}^{N-1} sin(m pi i/N) sin(m pi (x+L)/(2L)),
//!
//! with i = k + N/2. It equals 1 at node k, 0 at every other node, and
//! vanishes at both walls. Derivative matrices come from differentiating the
//! series term by term, which is exact and free of removable singularities.

use crate::error::{Result, SolverError};
use ndarray::Array2;
use std::f64::consts::PI;

/// One axis of the collocation grid.
///
/// N is even, the M = N - 1 nodes are x_k = k h for k = -N/2+1 ..= N/2-1,
/// and h = 2L/N, so all nodes lie strictly inside (-L, L).
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub n: usize,
    pub half_width: f64,
    pub spacing: f64,
    pub node_count: usize,
    pub nodes: Vec<f64>,
}

impl GridSpec {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(SolverError::InvalidGrid(format!(
                "N must be an even integer >= 4, got {n}"
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(SolverError::InvalidGrid(format!(
                "half width must be positive and finite, got {half_width}"
            )));
        }
        let spacing = 2.0 * half_width / n as f64;
        let node_count = n - 1;
        let half = (n / 2) as i64;
        let nodes = (1 - half..=half - 1)
            .map(|k| k as f64 * spacing)
            .collect();
        Ok(GridSpec {
            n,
            half_width,
            spacing,
            node_count,
            nodes,
        })
    }

    /// Symmetric node labels run from 1 - N/2 to N/2 - 1.
    pub fn label_range(&self) -> (i64, i64) {
        let half = (self.n / 2) as i64;
        (1 - half, half - 1)
    }

    /// Node coordinate for a symmetric label k.
    pub fn node(&self, k: i64) -> Result<f64> {
        let (lo, hi) = self.label_range();
        if k < lo || k > hi {
            return Err(SolverError::IndexOutOfRange(format!(
                "node label {k} outside [{lo}, {hi}]"
            )));
        }
        Ok(self.nodes[(k - lo) as usize])
    }
}

/// First and second derivative collocation matrices.
///
/// Row a holds the derivatives of the basis function of node a evaluated at
/// every node: d1[a][b] = s_a'(x_b), d2[a][b] = s_a''(x_b). d2 is symmetric
/// with negative diagonal. d1 is not antisymmetric; its true structure is
/// persymmetric antisymmetry, d1[a][b] = -d1[M-1-a][M-1-b], which the tests
/// pin down together with a finite difference oracle.
#[derive(Debug, Clone)]
pub struct DiffMatrices {
    pub d1: Array2<f64>,
    pub d2: Array2<f64>,
}

/// Evaluate the basis function of node k at a point x strictly inside the box.
pub fn lsf_eval(grid: &GridSpec, k: i64, x: f64) -> Result<f64> {
    let (lo, hi) = grid.label_range();
    if k < lo || k > hi {
        return Err(SolverError::IndexOutOfRange(format!(
            "node label {k} outside [{lo}, {hi}]"
        )));
    }
    let l = grid.half_width;
    if !(x > -l && x < l) {
        return Err(SolverError::IndexOutOfRange(format!(
            "point {x} outside the open interval (-{l}, {l})"
        )));
    }
    let n = grid.n as f64;
    let i = (k + (grid.n / 2) as i64) as f64;
    let u = (x + l) / (2.0 * l);
    let mut sum = 0.0;
    for m in 1..grid.n {
        let mf = m as f64;
        sum += (mf * PI * i / n).sin() * (mf * PI * u).sin();
    }
    Ok(2.0 / n * sum)
}

/// Interpolate nodal samples to an arbitrary point inside the box.
pub fn interpolate(grid: &GridSpec, samples: &[f64], x: f64) -> Result<f64> {
    if samples.len() != grid.node_count {
        return Err(SolverError::DimensionMismatch {
            expected: grid.node_count,
            got: samples.len(),
        });
    }
    let (lo, _) = grid.label_range();
    let mut acc = 0.0;
    for (offset, &f) in samples.iter().enumerate() {
        acc += f * lsf_eval(grid, lo + offset as i64, x)?;
    }
    Ok(acc)
}

/// Build the M x M derivative matrices by term-wise differentiation of the
/// sine series. d2 is filled from its upper triangle so it is symmetric
/// bitwise.
pub fn build_diff_matrices(grid: &GridSpec) -> DiffMatrices {
    let m = grid.node_count;
    let n = grid.n as f64;
    let w = PI / (2.0 * grid.half_width);
    let mut d1 = Array2::<f64>::zeros((m, m));
    let mut d2 = Array2::<f64>::zeros((m, m));
    // sin(t pi / N) for t = 0 .. 2N-1; arguments m*i below are reduced mod 2N.
    let period = 2 * grid.n;
    let sin_tab: Vec<f64> = (0..period).map(|t| (t as f64 * PI / n).sin()).collect();
    let cos_tab: Vec<f64> = (0..period).map(|t| (t as f64 * PI / n).cos()).collect();
    for a in 0..m {
        let ia = a + 1;
        for b in 0..m {
            let ib = b + 1;
            let mut s1 = 0.0;
            for t in 1..grid.n {
                let tf = t as f64;
                s1 += tf * sin_tab[t * ia % period] * cos_tab[t * ib % period];
            }
            d1[[a, b]] = 2.0 / n * w * s1;
        }
        for b in a..m {
            let ib = b + 1;
            let mut s2 = 0.0;
            for t in 1..grid.n {
                let tf = t as f64;
                s2 += tf * tf * sin_tab[t * ia % period] * sin_tab[t * ib % period];
            }
            let v = -(2.0 / n) * w * w * s2;
            d2[[a, b]] = v;
            d2[[b, a]] = v;
        }
    }
    DiffMatrices { d1, d2 }
}

/// Sum of -d2[k][k] over all nodes in closed form:
/// (pi/2L)^2 (N-1) N (2N-1) / 6.
pub fn kinetic_trace_1d(n: usize, half_width: f64) -> f64 {
    let w = PI / (2.0 * half_width);
    let nf = n as f64;
    w * w * (nf - 1.0) * nf * (2.0 * nf - 1.0) / 6.0
}
