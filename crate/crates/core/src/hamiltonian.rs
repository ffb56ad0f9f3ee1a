//! The discretized Hamiltonian: a matrix-free symmetric operator with
//! Kronecker-sum kinetic structure and a diagonal potential.
//!
//! apply() contracts the 1-D second-derivative matrix along each axis and
//! adds the potential diagonal, costing O(D * M^(D+1)). A dense assembly is
//! provided as a small-scale oracle, and the trace is available analytically
//! without ever forming the matrix.

use crate::error::{Result, SolverError};
use crate::grid::{build_diff_matrices, kinetic_trace_1d, DiffMatrices, GridSpec};
use crate::linalg::PAR_CHUNK;
use crate::potential::PolynomialPotential;
use crate::transform::{transformed_problem, TransformParams};
use ndarray::Array2;
use rayon::prelude::*;

/// Default cap on the number of grid points M^D.
pub const DEFAULT_CAPACITY: usize = 10_000_000;
/// Largest instance the dense oracle will materialize.
pub const DENSE_ORACLE_CAP: usize = 4096;

#[derive(Debug, Clone)]
pub struct HamiltonianOperator {
    dims: usize,
    grid: GridSpec,
    diff: DiffMatrices,
    kinetic_prefactors: Vec<f64>,
    // prefactor_i * (-d2), one M x M block per axis
    axis_kinetic: Vec<Array2<f64>>,
    potential_diagonal: Vec<f64>,
    size: usize,
}

impl HamiltonianOperator {
    /// Discretize the transformed problem on an N-point-per-axis grid.
    pub fn build(
        pot: &PolynomialPotential,
        params: &TransformParams,
        n: usize,
    ) -> Result<Self> {
        Self::build_with_capacity(pot, params, n, DEFAULT_CAPACITY)
    }

    pub fn build_with_capacity(
        pot: &PolynomialPotential,
        params: &TransformParams,
        n: usize,
        capacity: usize,
    ) -> Result<Self> {
        let (w, prefactors) = transformed_problem(pot, params)?;
        let grid = GridSpec::new(n, params.half_width())?;
        let dims = pot.dims();
        let m = grid.node_count;
        let points = (m as u128).pow(dims as u32);
        if points > capacity as u128 {
            return Err(SolverError::CapacityExceeded {
                points: points.min(usize::MAX as u128) as usize,
                capacity,
            });
        }
        let size = points as usize;
        let diff = build_diff_matrices(&grid);
        let axis_kinetic: Vec<Array2<f64>> = prefactors
            .iter()
            .map(|&p| diff.d2.mapv(|v| -p * v))
            .collect();
        let potential_diagonal = fill_diagonal(&w, &grid, dims, size);
        Ok(HamiltonianOperator {
            dims,
            grid,
            diff,
            kinetic_prefactors: prefactors,
            axis_kinetic,
            potential_diagonal,
            size,
        })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn diff(&self) -> &DiffMatrices {
        &self.diff
    }

    pub fn kinetic_prefactors(&self) -> &[f64] {
        &self.kinetic_prefactors
    }

    pub fn potential_diagonal(&self) -> &[f64] {
        &self.potential_diagonal
    }

    /// Total number of grid points M^D.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.size];
        self.apply_into(v, &mut y)?;
        Ok(y)
    }

    /// y = H v. Axis contractions are parallel over independent grid lines;
    /// every element is written by exactly one task with a fixed-order inner
    /// sum, so the result is identical for any thread count.
    pub fn apply_into(&self, v: &[f64], y: &mut [f64]) -> Result<()> {
        if v.len() != self.size {
            return Err(SolverError::DimensionMismatch {
                expected: self.size,
                got: v.len(),
            });
        }
        assert_eq!(y.len(), self.size);
        y.par_chunks_mut(PAR_CHUNK)
            .zip(v.par_chunks(PAR_CHUNK))
            .zip(self.potential_diagonal.par_chunks(PAR_CHUNK))
            .for_each(|((yc, vc), dc)| {
                for i in 0..yc.len() {
                    yc[i] = dc[i] * vc[i];
                }
            });
        let m = self.grid.node_count;
        for axis in 0..self.dims {
            let stride = m.pow((self.dims - 1 - axis) as u32);
            let block = m * stride;
            let w = &self.axis_kinetic[axis];
            y.par_chunks_mut(block)
                .zip(v.par_chunks(block))
                .for_each(|(yc, vc)| contract_block(yc, vc, w, m, stride));
        }
        Ok(())
    }

    /// Explicit symmetric matrix, for oracle-scale instances only.
    pub fn dense_assemble(&self) -> Result<Array2<f64>> {
        if self.size > DENSE_ORACLE_CAP {
            return Err(SolverError::CapacityExceeded {
                points: self.size,
                capacity: DENSE_ORACLE_CAP,
            });
        }
        let m = self.grid.node_count;
        let n = self.size;
        let mut h = Array2::<f64>::zeros((n, n));
        let mut digits = vec![0usize; self.dims];
        for row in 0..n {
            let mut rest = row;
            for a in (0..self.dims).rev() {
                digits[a] = rest % m;
                rest /= m;
            }
            for axis in 0..self.dims {
                let stride = m.pow((self.dims - 1 - axis) as u32);
                let r = digits[axis];
                let base = row - r * stride;
                for c in 0..m {
                    h[[row, base + c * stride]] += self.axis_kinetic[axis][[r, c]];
                }
            }
            h[[row, row]] += self.potential_diagonal[row];
        }
        Ok(h)
    }

    /// Trace without assembly: the kinetic part is M^(D-1) times the sum of
    /// per-axis 1-D kinetic traces, the potential part is the diagonal sum.
    pub fn trace(&self) -> f64 {
        let m = self.grid.node_count;
        let lines = m.pow((self.dims - 1) as u32) as f64;
        let ktr = kinetic_trace_1d(self.grid.n, self.grid.half_width);
        let kinetic: f64 = self.kinetic_prefactors.iter().map(|p| p * ktr).sum::<f64>() * lines;
        kinetic + self.potential_diagonal.iter().sum::<f64>()
    }
}

fn contract_block(yc: &mut [f64], vc: &[f64], w: &Array2<f64>, m: usize, stride: usize) {
    for r in 0..m {
        let yrow = &mut yc[r * stride..(r + 1) * stride];
        for c in 0..m {
            let wrc = w[[r, c]];
            if wrc == 0.0 {
                continue;
            }
            let vrow = &vc[c * stride..(c + 1) * stride];
            for i in 0..stride {
                yrow[i] += wrc * vrow[i];
            }
        }
    }
}

fn fill_diagonal(
    w: &PolynomialPotential,
    grid: &GridSpec,
    dims: usize,
    size: usize,
) -> Vec<f64> {
    let m = grid.node_count;
    let mut diag = vec![0.0; size];
    diag.par_chunks_mut(PAR_CHUNK).enumerate().for_each(|(ci, chunk)| {
        let mut digits = vec![0usize; dims];
        let mut rest = ci * PAR_CHUNK;
        for a in (0..dims).rev() {
            digits[a] = rest % m;
            rest /= m;
        }
        let mut point: Vec<f64> = digits.iter().map(|&d| grid.nodes[d]).collect();
        for slot in chunk.iter_mut() {
            *slot = w.eval_unchecked(&point);
            for a in (0..dims).rev() {
                digits[a] += 1;
                if digits[a] < m {
                    point[a] = grid.nodes[digits[a]];
                    break;
                }
                digits[a] = 0;
                point[a] = grid.nodes[0];
            }
        }
    });
    diag
}

/// Kinetic and potential parts of the trace, analytically in the parameters.
/// Odd-power monomials sum to zero exactly on the symmetric grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceTerms {
    pub kinetic: f64,
    pub potential: f64,
}

impl TraceTerms {
    pub fn total(&self) -> f64 {
        self.kinetic + self.potential
    }
}

pub fn trace_terms(
    pot: &PolynomialPotential,
    params: &TransformParams,
    n: usize,
) -> Result<TraceTerms> {
    let (w, prefactors) = transformed_problem(pot, params)?;
    let grid = GridSpec::new(n, params.half_width())?;
    let dims = pot.dims();
    let m = grid.node_count;
    let lines = (m as f64).powi(dims as i32 - 1);
    let ktr = kinetic_trace_1d(grid.n, grid.half_width);
    let kinetic: f64 = prefactors.iter().map(|p| p * ktr).sum::<f64>() * lines;

    let max_deg = w.terms().iter().map(|t| t.degree()).max().unwrap_or(0) as usize;
    let mut power_sums = vec![0.0f64; max_deg + 1];
    power_sums[0] = m as f64;
    for e in (2..=max_deg).step_by(2) {
        power_sums[e] = grid.nodes.iter().map(|x| x.powi(e as i32)).sum();
    }
    let mut potential = 0.0;
    for t in w.terms() {
        if t.exponents.iter().any(|&e| e % 2 == 1) {
            continue;
        }
        let mut prod = t.coefficient;
        for &e in &t.exponents {
            prod *= power_sums[e as usize];
        }
        potential += prod;
    }
    Ok(TraceTerms { kinetic, potential })
}
