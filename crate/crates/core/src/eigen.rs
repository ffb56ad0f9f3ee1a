//! Lowest eigenpairs of the matrix-free operator.
//!
//! The workhorse is a Lanczos iteration with full two-pass
//! reorthogonalization. Degenerate levels are recovered by deflation sweeps:
//! the first sweep converges k+2 pairs, then each further sweep restarts the
//! iteration orthogonal to everything found so far and asks for the smallest
//! eigenvalue of the deflated operator. If that value lies above the current
//! k-th candidate the answer is complete; otherwise it is a missed copy and
//! is locked in. Every reported pair carries an exactly computed residual.
//!
//! Small instances are diagonalized densely, and a failed iteration falls
//! back to the dense route when the operator fits the oracle cap.

use crate::error::{Result, SolverError};
use crate::hamiltonian::{HamiltonianOperator, DENSE_ORACLE_CAP};
use crate::linalg::{dense_symmetric_eigen, dense_symmetric_eigenvalues, par_axpy, par_dot, par_norm, par_scale, tridiag_eigen};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DIM: usize = 700;
/// Ritz bounds are inspected every this many iterations.
const CHECK_INTERVAL: usize = 20;
/// At or below this size the dense route is used directly.
const DENSE_DIRECT_CUTOFF: usize = 64;
const BREAKDOWN_REL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct EigenRequest {
    /// k, the number of smallest eigenvalues wanted.
    pub how_many: usize,
    /// Certification bound: every pair satisfies
    /// ||Hv - lambda v|| <= tol * max(1, |lambda|).
    pub residual_tolerance: f64,
    /// Cap on the Krylov dimension per sweep; None picks the default.
    pub max_dim: Option<usize>,
    /// Seed for the deterministic start vector.
    pub seed: u64,
}

impl EigenRequest {
    pub fn new(how_many: usize) -> Self {
        EigenRequest {
            how_many,
            residual_tolerance: DEFAULT_RESIDUAL_TOL,
            max_dim: None,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.residual_tolerance = tol;
        self
    }

    pub fn with_max_dim(mut self, dim: usize) -> Self {
        self.max_dim = Some(dim);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// ||Hv - lambda v|| per pair, computed with a real operator apply.
    pub residual_norms: Vec<f64>,
    /// Total Lanczos iterations over all sweeps (0 for the dense route).
    pub iterations: usize,
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

/// All eigenvalues of a symmetric matrix, ascending. Oracle-scale only.
pub fn dense_eigen(matrix: &Array2<f64>) -> Result<Vec<f64>> {
    let n = matrix.dim().0;
    if n > DENSE_ORACLE_CAP {
        return Err(SolverError::CapacityExceeded {
            points: n,
            capacity: DENSE_ORACLE_CAP,
        });
    }
    dense_symmetric_eigenvalues(matrix)
}

pub fn lowest_eigenpairs(op: &HamiltonianOperator, req: &EigenRequest) -> Result<EigenResult> {
    let n = op.size();
    let k = req.how_many;
    if k == 0 {
        return Err(SolverError::InvalidParameter(
            "how_many must be at least 1".into(),
        ));
    }
    if !(req.residual_tolerance.is_finite() && req.residual_tolerance > 0.0) {
        return Err(SolverError::InvalidParameter(
            "residual tolerance must be positive".into(),
        ));
    }
    let max_dim = req.max_dim.unwrap_or(DEFAULT_MAX_DIM).min(n);
    if k >= n {
        return Err(SolverError::InvalidParameter(format!(
            "{k} eigenvalues requested from a {n}-point operator"
        )));
    }
    if n <= DENSE_DIRECT_CUTOFF || k + 2 >= n {
        if n <= DENSE_ORACLE_CAP {
            return dense_route(op, k);
        }
        return Err(SolverError::InvalidParameter(format!(
            "{k} eigenvalues of a {n}-point operator need the dense route, \
             which is capped at {DENSE_ORACLE_CAP}"
        )));
    }
    if k + 2 >= max_dim {
        if n <= DENSE_ORACLE_CAP {
            return dense_route(op, k);
        }
        return Err(SolverError::InvalidParameter(format!(
            "max Lanczos dimension {max_dim} cannot converge {k}+2 pairs"
        )));
    }

    let tol = req.residual_tolerance;
    let mut locked: Vec<LockedPair> = Vec::new();
    let mut total_iterations = 0usize;
    let max_sweeps = k + 3;
    for sweep in 0..max_sweeps {
        let target = if sweep == 0 { k + 2 } else { 1 };
        let outcome = lanczos_sweep(
            op,
            target,
            tol,
            max_dim,
            req.seed.wrapping_add(sweep as u64),
            &locked,
        );
        match outcome {
            SweepOutcome::Converged { iterations, pairs } => {
                total_iterations += iterations;
                if sweep == 0 {
                    locked.extend(pairs);
                } else {
                    let kth = kth_smallest(&locked, k);
                    let margin = (100.0 * tol * kth.abs().max(1.0)).max(1e-8);
                    let head = &pairs[0];
                    if head.value > kth + margin {
                        break;
                    }
                    locked.extend(pairs.into_iter().take(1));
                }
            }
            SweepOutcome::Stalled {
                iterations,
                ritz_values,
                bounds,
            } => {
                if n <= DENSE_ORACLE_CAP {
                    return dense_route(op, k);
                }
                return Err(SolverError::NotConverged {
                    reason: format!(
                        "sweep {sweep} stalled after {} total iterations \
                         (Krylov cap {max_dim})",
                        total_iterations + iterations
                    ),
                    ritz_values,
                    residuals: bounds,
                });
            }
        }
    }

    locked.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    locked.truncate(k);
    Ok(EigenResult {
        eigenvalues: locked.iter().map(|p| p.value).collect(),
        residual_norms: locked.iter().map(|p| p.residual).collect(),
        iterations: total_iterations,
        eigenvectors: Some(locked.into_iter().map(|p| p.vector).collect()),
    })
}

struct LockedPair {
    value: f64,
    residual: f64,
    vector: Vec<f64>,
}

fn kth_smallest(locked: &[LockedPair], k: usize) -> f64 {
    let mut vals: Vec<f64> = locked.iter().map(|p| p.value).collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals[k - 1]
}

fn dense_route(op: &HamiltonianOperator, k: usize) -> Result<EigenResult> {
    let dense = op.dense_assemble()?;
    let (vals, vecs) = dense_symmetric_eigen(&dense)?;
    let n = op.size();
    let mut buf = vec![0.0; n];
    let mut eigenvalues = Vec::with_capacity(k);
    let mut residual_norms = Vec::with_capacity(k);
    let mut eigenvectors = Vec::with_capacity(k);
    for c in 0..k {
        let v: Vec<f64> = (0..n).map(|r| vecs[[r, c]]).collect();
        op.apply_into(&v, &mut buf)?;
        par_axpy(&mut buf, -vals[c], &v);
        eigenvalues.push(vals[c]);
        residual_norms.push(par_norm(&buf));
        eigenvectors.push(v);
    }
    Ok(EigenResult {
        eigenvalues,
        residual_norms,
        iterations: 0,
        eigenvectors: Some(eigenvectors),
    })
}

enum SweepOutcome {
    Converged {
        iterations: usize,
        pairs: Vec<LockedPair>,
    },
    Stalled {
        iterations: usize,
        ritz_values: Vec<f64>,
        bounds: Vec<f64>,
    },
}

/// One Lanczos run orthogonal to `locked`, returning `target` certified
/// smallest pairs of the deflated operator.
fn lanczos_sweep(
    op: &HamiltonianOperator,
    target: usize,
    tol: f64,
    max_dim: usize,
    seed: u64,
    locked: &[LockedPair],
) -> SweepOutcome {
    let n = op.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_dim + 1);
    let mut v0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    orthogonalize(&mut v0, locked, &basis);
    let norm = par_norm(&v0);
    par_scale(&mut v0, 1.0 / norm);
    basis.push(v0);

    let mut alphas: Vec<f64> = Vec::with_capacity(max_dim);
    let mut betas: Vec<f64> = Vec::with_capacity(max_dim);
    let mut w = vec![0.0; n];
    let mut scale_est: f64 = f64::MIN_POSITIVE;
    let mut exhausted = false;

    for j in 0..max_dim {
        op.apply_into(&basis[j], &mut w).expect("operator size fixed");
        if j > 0 {
            par_axpy(&mut w, -betas[j - 1], &basis[j - 1]);
        }
        let alpha = par_dot(&w, &basis[j]);
        alphas.push(alpha);
        par_axpy(&mut w, -alpha, &basis[j]);
        for _ in 0..2 {
            orthogonalize_once(&mut w, locked, &basis);
        }
        let beta = par_norm(&w);
        scale_est = scale_est.max(alpha.abs() + beta);
        if beta <= BREAKDOWN_REL * scale_est {
            // invariant subspace hit: restart with a fresh direction and a
            // zero coupling, keeping T block-diagonal
            let mut fresh: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            orthogonalize(&mut fresh, locked, &basis);
            let fresh_norm = par_norm(&fresh);
            if fresh_norm <= 1e-8 * (n as f64).sqrt() {
                // locked + basis span the whole space; T is now exact
                betas.push(0.0);
                exhausted = true;
            } else {
                betas.push(0.0);
                par_scale(&mut fresh, 1.0 / fresh_norm);
                basis.push(fresh);
            }
        } else {
            betas.push(beta);
            let mut next = w.clone();
            par_scale(&mut next, 1.0 / beta);
            basis.push(next);
        }

        let steps = j + 1;
        if steps % CHECK_INTERVAL == 0 || steps == max_dim || exhausted {
            if let Some(pairs) =
                try_certify(op, target, tol, &alphas, &betas, &basis, locked)
            {
                return SweepOutcome::Converged {
                    iterations: steps,
                    pairs,
                };
            }
            if exhausted {
                break;
            }
        }
    }

    // report the best available Ritz data
    let steps = alphas.len();
    let (theta, z) = match tridiag_eigen(&alphas, &betas[..steps - 1]) {
        Ok(tz) => tz,
        Err(_) => (vec![], vec![]),
    };
    let m = theta.len();
    let shown = target.min(m);
    let bounds: Vec<f64> = (0..shown)
        .map(|i| (betas[steps - 1] * z[(m - 1) * m + i]).abs())
        .collect();
    SweepOutcome::Stalled {
        iterations: steps,
        ritz_values: theta[..shown].to_vec(),
        bounds,
    }
}

fn orthogonalize(v: &mut [f64], locked: &[LockedPair], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        orthogonalize_once(v, locked, basis);
    }
}

fn orthogonalize_once(v: &mut [f64], locked: &[LockedPair], basis: &[Vec<f64>]) {
    for p in locked {
        let c = par_dot(v, &p.vector);
        par_axpy(v, -c, &p.vector);
    }
    for q in basis {
        let c = par_dot(v, q);
        par_axpy(v, -c, q);
    }
}

/// If the cheap Ritz bounds clear half the tolerance for the `target`
/// smallest pairs, form the Ritz vectors and certify with exact residuals.
fn try_certify(
    op: &HamiltonianOperator,
    target: usize,
    tol: f64,
    alphas: &[f64],
    betas: &[f64],
    basis: &[Vec<f64>],
    locked: &[LockedPair],
) -> Option<Vec<LockedPair>> {
    let steps = alphas.len();
    if steps < target {
        return None;
    }
    let (theta, z) = tridiag_eigen(alphas, &betas[..steps - 1]).ok()?;
    let m = theta.len();
    let tail = betas[steps - 1];
    for i in 0..target {
        let bound = (tail * z[(m - 1) * m + i]).abs();
        if bound > 0.5 * tol * theta[i].abs().max(1.0) {
            return None;
        }
    }
    let n = op.size();
    let mut buf = vec![0.0; n];
    let mut pairs = Vec::with_capacity(target);
    for i in 0..target {
        let mut y = vec![0.0; n];
        for (r, q) in basis.iter().enumerate().take(m) {
            par_axpy(&mut y, z[r * m + i], q);
        }
        // scrub any deflation drift before certifying
        for p in locked {
            let c = par_dot(&y, &p.vector);
            par_axpy(&mut y, -c, &p.vector);
        }
        let norm = par_norm(&y);
        par_scale(&mut y, 1.0 / norm);
        op.apply_into(&y, &mut buf).expect("operator size fixed");
        let value = theta[i];
        par_axpy(&mut buf, -value, &y);
        let residual = par_norm(&buf);
        if residual > tol * value.abs().max(1.0) {
            return None;
        }
        pairs.push(LockedPair {
            value,
            residual,
            vector: y,
        });
    }
    Some(pairs)
}
