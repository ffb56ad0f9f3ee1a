//! Variational coordinate transforms: overall grid scale, per-axis
//! anisotropic factors, and composed plane rotations.
//!
//! The working substitution is y = R * S^-1 * x with S = diag(sigma), so a
//! potential V becomes W(x) = V(R S^-1 x) symbolically (polynomials stay
//! polynomials) and the kinetic coefficient on axis i becomes
//! sigma_i^2 / (2 m_i). Rotations never touch the kinetic part.

use crate::error::{Result, SolverError};
use crate::potential::{Monomial, PolynomialPotential};
use ndarray::Array2;
use std::collections::BTreeMap;

/// Relative cutoff below which expanded coefficients are treated as
/// cancellation noise and dropped.
const COEFF_CLEANUP_REL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TransformParams {
    half_width: f64,
    axis_scales: Vec<f64>,
    angles: Vec<f64>,
}

impl TransformParams {
    /// First axis scale is pinned to 1 by convention; the remaining scales
    /// and the angles are the free anisotropy/rotation parameters.
    pub fn new(half_width: f64, axis_scales: Vec<f64>, angles: Vec<f64>) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(SolverError::InvalidParameter(format!(
                "half width must be positive and finite, got {half_width}"
            )));
        }
        let d = axis_scales.len();
        if d == 0 {
            return Err(SolverError::InvalidParameter(
                "need at least one axis scale".into(),
            ));
        }
        if axis_scales[0] != 1.0 {
            return Err(SolverError::InvalidParameter(format!(
                "first axis scale is pinned to 1, got {}",
                axis_scales[0]
            )));
        }
        if axis_scales.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
            return Err(SolverError::InvalidParameter(
                "axis scales must be positive and finite".into(),
            ));
        }
        let max_angles = d * (d - 1) / 2;
        if angles.len() > max_angles {
            return Err(SolverError::InvalidParameter(format!(
                "{} angles given but {d} coordinates admit at most {max_angles}",
                angles.len()
            )));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(SolverError::InvalidParameter("angles must be finite".into()));
        }
        Ok(TransformParams { half_width, axis_scales, angles })
    }

    /// Plain scale-only parameters: unit scales, no rotation.
    pub fn isotropic(half_width: f64, dims: usize) -> Result<Self> {
        Self::new(half_width, vec![1.0; dims], vec![])
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn axis_scales(&self) -> &[f64] {
        &self.axis_scales
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn dims(&self) -> usize {
        self.axis_scales.len()
    }

    pub fn is_identity(&self) -> bool {
        self.axis_scales.iter().all(|&s| s == 1.0) && self.angles.iter().all(|&a| a == 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationMatrix {
    dims: usize,
    entries: Array2<f64>,
}

impl RotationMatrix {
    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }
}

/// Compose plane rotations in fixed lexicographic plane order
/// (1,2), (1,3), ..., (D-1,D), one angle per plane, taking as many planes
/// as there are angles. Always orthogonal with determinant +1.
pub fn rotation_matrix(angles: &[f64], dims: usize) -> Result<RotationMatrix> {
    if dims == 0 {
        return Err(SolverError::InvalidParameter("dims must be positive".into()));
    }
    let max_angles = dims * (dims - 1) / 2;
    if angles.len() > max_angles {
        return Err(SolverError::InvalidParameter(format!(
            "{} angles given but {dims} coordinates admit at most {max_angles}",
            angles.len()
        )));
    }
    if angles.iter().any(|a| !a.is_finite()) {
        return Err(SolverError::InvalidParameter("angles must be finite".into()));
    }
    let mut r = Array2::<f64>::eye(dims);
    let mut idx = 0usize;
    'outer: for p in 0..dims {
        for q in (p + 1)..dims {
            if idx >= angles.len() {
                break 'outer;
            }
            let (s, c) = angles[idx].sin_cos();
            idx += 1;
            if s == 0.0 && c == 1.0 {
                continue;
            }
            // r <- r * G(p, q, theta) touches only columns p and q
            for row in 0..dims {
                let rp = r[[row, p]];
                let rq = r[[row, q]];
                r[[row, p]] = rp * c + rq * s;
                r[[row, q]] = -rp * s + rq * c;
            }
        }
    }
    Ok(RotationMatrix { dims, entries: r })
}

/// Apply the substitution y = R S^-1 x to a potential and report the
/// per-axis kinetic prefactors sigma_i^2 / (2 m_i). Rotation with unequal
/// kinetic masses would break the diagonal kinetic form, so it is rejected.
pub fn transformed_problem(
    pot: &PolynomialPotential,
    params: &TransformParams,
) -> Result<(PolynomialPotential, Vec<f64>)> {
    let d = pot.dims();
    if params.dims() != d {
        return Err(SolverError::DimensionMismatch {
            expected: d,
            got: params.dims(),
        });
    }
    let masses = pot.kinetic_masses();
    let rotating = params.angles().iter().any(|&a| a != 0.0);
    if rotating && masses.windows(2).any(|w| w[0] != w[1]) {
        return Err(SolverError::InvalidParameter(
            "rotation requires equal kinetic masses on all axes".into(),
        ));
    }
    let prefactors: Vec<f64> = (0..d)
        .map(|i| params.axis_scales()[i].powi(2) / (2.0 * masses[i]))
        .collect();
    if params.is_identity() {
        return Ok((pot.clone(), prefactors));
    }

    let rot = rotation_matrix(params.angles(), d)?;
    // b = R * S^-1, so column j of R is divided by sigma_j
    let mut b = rot.entries().clone();
    for j in 0..d {
        let inv = 1.0 / params.axis_scales()[j];
        for i in 0..d {
            b[[i, j]] *= inv;
        }
    }

    let mut acc: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    for term in pot.terms() {
        // expand coeff * prod_i (sum_j b[i][j] x_j)^{e_i}
        let mut partial: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        partial.insert(vec![0u32; d], term.coefficient);
        for i in 0..d {
            for _ in 0..term.exponents[i] {
                let mut next: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
                for (exps, coef) in &partial {
                    for j in 0..d {
                        let bij = b[[i, j]];
                        if bij == 0.0 {
                            continue;
                        }
                        let mut e = exps.clone();
                        e[j] += 1;
                        *next.entry(e).or_insert(0.0) += coef * bij;
                    }
                }
                partial = next;
            }
        }
        for (e, c) in partial {
            *acc.entry(e).or_insert(0.0) += c;
        }
    }

    let max_abs = acc.values().fold(0.0f64, |m, &c| m.max(c.abs()));
    let cutoff = COEFF_CLEANUP_REL * max_abs;
    let terms: Vec<Monomial> = acc
        .into_iter()
        .filter(|(_, c)| c.abs() > cutoff)
        .map(|(e, c)| Monomial::new(c, e))
        .collect();
    let max_deg = pot
        .terms()
        .iter()
        .map(|t| t.degree())
        .max()
        .unwrap_or(0)
        .max(crate::potential::MAX_DEGREE);
    let transformed = PolynomialPotential::with_max_degree(d, terms, max_deg)?
        .with_masses(masses.to_vec())?;
    Ok((transformed, prefactors))
}
