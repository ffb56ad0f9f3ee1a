//! Variational choice of the transform parameters.
//!
//! The operator trace is a cheap upper-bound functional on the spectrum: it
//! needs only the one-axis kinetic trace and power sums of the grid nodes,
//! never a diagonalization. Minimizing it over the transform parameters is
//! the principle-of-minimal-sensitivity rule used throughout: the scale
//! stage finds the grid half-width by a scan plus golden-section search on
//! ln L, and the richer stages refine (ln L, ln sigma, theta) with a
//! Nelder-Mead simplex warm-started from the previous stage, so each stage
//! can only improve on the last.

use crate::error::{Result, SolverError};
use crate::hamiltonian::trace_terms;
use crate::potential::PolynomialPotential;
use crate::transform::TransformParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;

pub const DEFAULT_MAX_ITERATIONS: usize = 4000;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Search window for the half-width, in natural units.
const L_MIN: f64 = 1e-4;
const L_MAX: f64 = 1e4;
/// Coarse samples of ln L used to bracket the minimum before refinement.
const SCAN_POINTS: usize = 64;
const INV_PHI: f64 = 0.618_033_988_749_894_9;
/// Initial simplex edge and restart jitter half-width, in ln/angle units.
const SIMPLEX_STEP: f64 = 0.1;
const JITTER: f64 = 0.05;
const RESTART_SEED: u64 = 0x7a17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    /// One isotropic half-width.
    ScaleOnly,
    /// Half-width plus per-axis scales.
    ScaleAniso,
    /// Half-width, per-axis scales, and rotation angles.
    ScaleAnisoRot,
}

#[derive(Debug, Clone)]
pub struct OptimizationStrategy {
    pub kind: StrategyKind,
    /// Cap on simplex iterations per restart.
    pub max_iterations: usize,
    /// Convergence tolerance: golden-section width on ln L and simplex
    /// diameter in (ln L, ln sigma, theta) coordinates.
    pub tolerance: f64,
}

impl OptimizationStrategy {
    pub fn new(kind: StrategyKind) -> Self {
        OptimizationStrategy {
            kind,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// A named parameter-optimization recipe, dispatchable by CLI flag.
pub trait TraceMinimizer: Send + Sync {
    fn name(&self) -> &'static str;
    fn kind(&self) -> StrategyKind;
    fn optimize(&self, pot: &PolynomialPotential, n: usize) -> Result<TransformParams> {
        optimize_full(pot, n, &OptimizationStrategy::new(self.kind()))
    }
}

struct ScaleMinimizer;
struct AnisoMinimizer;
struct RotationMinimizer;

impl TraceMinimizer for ScaleMinimizer {
    fn name(&self) -> &'static str {
        "scale"
    }
    fn kind(&self) -> StrategyKind {
        StrategyKind::ScaleOnly
    }
}

impl TraceMinimizer for AnisoMinimizer {
    fn name(&self) -> &'static str {
        "aniso"
    }
    fn kind(&self) -> StrategyKind {
        StrategyKind::ScaleAniso
    }
}

impl TraceMinimizer for RotationMinimizer {
    fn name(&self) -> &'static str {
        "rot"
    }
    fn kind(&self) -> StrategyKind {
        StrategyKind::ScaleAnisoRot
    }
}

pub fn strategy_names() -> &'static [&'static str] {
    &["scale", "aniso", "rot"]
}

pub fn strategy_by_name(name: &str) -> Result<Box<dyn TraceMinimizer>> {
    match name {
        "scale" => Ok(Box::new(ScaleMinimizer)),
        "aniso" => Ok(Box::new(AnisoMinimizer)),
        "rot" => Ok(Box::new(RotationMinimizer)),
        other => Err(SolverError::UnknownStrategy(format!(
            "no strategy named '{other}'; available: {}",
            strategy_names().join(", ")
        ))),
    }
}

/// Half-width minimizing the operator trace at fixed grid size.
pub fn optimize_scale(pot: &PolynomialPotential, n: usize) -> Result<f64> {
    optimize_scale_with_tolerance(pot, n, DEFAULT_TOLERANCE)
}

fn optimize_scale_with_tolerance(
    pot: &PolynomialPotential,
    n: usize,
    tol: f64,
) -> Result<f64> {
    let d = pot.dims();
    // one checked evaluation validates the grid and the potential; after it
    // the objective cannot fail for any L in the window
    let probe = TransformParams::isotropic(1.0, d)?;
    trace_terms(pot, &probe, n)?;
    let f = |ln_l: f64| -> f64 {
        let params = TransformParams::isotropic(ln_l.exp(), d).unwrap();
        let v = trace_terms(pot, &params, n).unwrap().total();
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let lo = L_MIN.ln();
    let hi = L_MAX.ln();
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let mut best_i = 0;
    let mut best_f = f64::INFINITY;
    for i in 0..SCAN_POINTS {
        let v = f(lo + i as f64 * step);
        if v < best_f {
            best_f = v;
            best_i = i;
        }
    }
    if best_i == 0 || best_i == SCAN_POINTS - 1 {
        let l_edge = (lo + best_i as f64 * step).exp();
        return Err(SolverError::OptimizationFailed {
            reason: format!(
                "trace minimum sits at the edge of the half-width window \
                 [{L_MIN:e}, {L_MAX:e}] (best sample L = {l_edge:.3e}); \
                 the potential gives the trace no interior minimum"
            ),
            best: Some(TransformParams::isotropic(l_edge, d)?),
        });
    }

    let mut a = lo + (best_i - 1) as f64 * step;
    let mut b = lo + (best_i + 1) as f64 * step;
    let mut c = b - INV_PHI * (b - a);
    let mut e = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fe = f(e);
    while b - a > tol.max(1e-14) {
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + INV_PHI * (b - a);
            fe = f(e);
        }
    }
    Ok((0.5 * (a + b)).exp())
}

/// Full transform optimization through the staged warm-start chain.
pub fn optimize_full(
    pot: &PolynomialPotential,
    n: usize,
    strategy: &OptimizationStrategy,
) -> Result<TransformParams> {
    if !(strategy.tolerance.is_finite() && strategy.tolerance > 0.0) {
        return Err(SolverError::InvalidParameter(
            "optimization tolerance must be positive".into(),
        ));
    }
    let d = pot.dims();
    let l_scale = optimize_scale_with_tolerance(pot, n, strategy.tolerance)?;
    let scale_params = TransformParams::isotropic(l_scale, d)?;
    if strategy.kind == StrategyKind::ScaleOnly || d == 1 {
        return Ok(scale_params);
    }

    let aniso_params = refine_stage(pot, n, &scale_params, false, strategy)?;
    if strategy.kind == StrategyKind::ScaleAniso {
        return Ok(aniso_params);
    }

    // fail fast if rotations are structurally unavailable (unequal masses)
    let tiny = TransformParams::new(
        aniso_params.half_width(),
        aniso_params.axis_scales().to_vec(),
        vec![1e-3; d - 1],
    )?;
    trace_terms(pot, &tiny, n)?;
    refine_stage(pot, n, &aniso_params, true, strategy)
}

/// One Nelder-Mead stage over (ln L, ln sigma_2.., [theta..]) warm-started
/// from `base`, with two jittered restarts and a trace-then-L tie break.
fn refine_stage(
    pot: &PolynomialPotential,
    n: usize,
    base: &TransformParams,
    with_angles: bool,
    strategy: &OptimizationStrategy,
) -> Result<TransformParams> {
    let d = pot.dims();
    let n_sigma = d - 1;
    let n_theta = if with_angles { d - 1 } else { 0 };

    let mut z0 = Vec::with_capacity(1 + n_sigma + n_theta);
    z0.push(base.half_width().ln());
    for i in 0..n_sigma {
        let s = base.axis_scales().get(i + 1).copied().unwrap_or(1.0);
        z0.push(s.ln());
    }
    for i in 0..n_theta {
        z0.push(base.angles().get(i).copied().unwrap_or(0.0));
    }

    let decode = move |z: &[f64]| -> (TransformParams, f64) {
        let l = z[0].exp();
        let mut sigma = vec![1.0; d];
        for i in 0..n_sigma {
            sigma[i + 1] = z[1 + i].exp();
        }
        let mut theta = Vec::with_capacity(n_theta);
        let mut outside = 0.0;
        for i in 0..n_theta {
            let raw = z[1 + n_sigma + i];
            let clamped = raw.clamp(0.0, FRAC_PI_2);
            outside += (raw - clamped).abs();
            theta.push(clamped);
        }
        let params = TransformParams::new(l, sigma, theta).unwrap();
        (params, outside)
    };
    let objective = |z: &[f64]| -> f64 {
        let (params, outside) = decode(z);
        let v = match trace_terms(pot, &params, n) {
            Ok(t) => t.total(),
            Err(_) => return f64::INFINITY,
        };
        if !v.is_finite() {
            return f64::INFINITY;
        }
        v + outside * 10.0 * (1.0 + v.abs())
    };

    // the warm start itself is a candidate, so the stage never regresses
    let mut candidates = vec![(z0.clone(), objective(&z0))];
    for run in 0..3u64 {
        let mut start = z0.clone();
        if run > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED + run);
            for v in start.iter_mut() {
                *v += rng.gen_range(-JITTER..JITTER);
            }
        }
        let (z, fz) = nelder_mead(
            &objective,
            &start,
            SIMPLEX_STEP,
            strategy.tolerance,
            strategy.max_iterations,
        );
        candidates.push((z, fz));
    }

    candidates.sort_by(|a, b| {
        let close = (a.1 - b.1).abs() <= 1e-9 * a.1.abs().max(1.0);
        if close {
            let la = a.0[0];
            let lb = b.0[0];
            la.partial_cmp(&lb).unwrap_or(Ordering::Equal)
        } else {
            a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal)
        }
    });
    Ok(decode(&candidates[0].0).0)
}

/// Standard simplex minimizer (reflect 1, expand 2, contract 1/2,
/// shrink 1/2). Returns the best vertex when the simplex diameter drops
/// under `tol` or the iteration cap is reached.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    z0: &[f64],
    step: f64,
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let d = z0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((z0.to_vec(), f(z0)));
    for i in 0..d {
        let mut z = z0.to_vec();
        z[i] += step;
        let fz = f(&z);
        simplex.push((z, fz));
    }
    let by_value = |a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)| {
        a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal)
    };

    for _ in 0..max_iter {
        simplex.sort_by(by_value);
        let diameter = simplex[1..]
            .iter()
            .map(|(z, _)| {
                z.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0_f64, f64::max);
        if diameter < tol {
            break;
        }

        let mut centroid = vec![0.0; d];
        for (z, _) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(z) {
                *c += v / d as f64;
            }
        }
        let worst = simplex[d].clone();
        let lerp = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let refl = lerp(1.0);
        let f_refl = f(&refl);
        if f_refl < simplex[0].1 {
            let expd = lerp(2.0);
            let f_expd = f(&expd);
            simplex[d] = if f_expd < f_refl {
                (expd, f_expd)
            } else {
                (refl, f_refl)
            };
        } else if f_refl < simplex[d - 1].1 {
            simplex[d] = (refl, f_refl);
        } else {
            let (cand, f_cand) = if f_refl < worst.1 {
                let c = lerp(0.5);
                let fc = f(&c);
                (c, fc)
            } else {
                let c = lerp(-0.5);
                let fc = f(&c);
                (c, fc)
            };
            if f_cand < worst.1.min(f_refl) {
                simplex[d] = (cand, f_cand);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for (v, b) in entry.0.iter_mut().zip(&best) {
                        *v = b + 0.5 * (*v - b);
                    }
                    entry.1 = f(&entry.0);
                }
            }
        }
    }
    simplex.sort_by(by_value);
    simplex.swap_remove(0)
}
