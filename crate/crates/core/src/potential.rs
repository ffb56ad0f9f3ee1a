//! Polynomial potentials: representation, evaluation, built-in models, and
//! the plain-text monomial format used by the CLI.
//!
//! A potential is a sum of monomials c * x1^e1 * ... * xD^eD together with
//! per-axis kinetic masses. Terms are kept in a canonical sorted form so that
//! structural comparison of two potentials is meaningful.

use crate::error::{Result, SolverError};
use ndarray::Array2;

/// Default cap on the total degree of any single term.
pub const MAX_DEGREE: u32 = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coefficient: f64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(coefficient: f64, exponents: Vec<u32>) -> Self {
        Monomial { coefficient, exponents }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPotential {
    dims: usize,
    terms: Vec<Monomial>,
    kinetic_masses: Vec<f64>,
}

impl PolynomialPotential {
    /// Build a potential from raw terms with the default degree cap.
    /// Terms are sorted, duplicates combined, zero coefficients dropped.
    pub fn new(dims: usize, terms: Vec<Monomial>) -> Result<Self> {
        Self::with_max_degree(dims, terms, MAX_DEGREE)
    }

    pub fn with_max_degree(dims: usize, terms: Vec<Monomial>, max_degree: u32) -> Result<Self> {
        if dims == 0 {
            return Err(SolverError::InvalidPotential(
                "potential needs at least one coordinate".into(),
            ));
        }
        for (i, t) in terms.iter().enumerate() {
            if t.exponents.len() != dims {
                return Err(SolverError::InvalidPotential(format!(
                    "term {i} has {} exponents, expected {dims}",
                    t.exponents.len()
                )));
            }
            if !t.coefficient.is_finite() {
                return Err(SolverError::InvalidPotential(format!(
                    "term {i} has non-finite coefficient"
                )));
            }
            if t.degree() > max_degree {
                return Err(SolverError::InvalidPotential(format!(
                    "term {i} has total degree {} > {max_degree}",
                    t.degree()
                )));
            }
        }
        let mut sorted = terms;
        sorted.sort_by(|a, b| a.exponents.cmp(&b.exponents));
        let mut canon: Vec<Monomial> = Vec::with_capacity(sorted.len());
        for t in sorted {
            match canon.last_mut() {
                Some(last) if last.exponents == t.exponents => last.coefficient += t.coefficient,
                _ => canon.push(t),
            }
        }
        canon.retain(|t| t.coefficient != 0.0);
        Ok(PolynomialPotential {
            dims,
            terms: canon,
            kinetic_masses: vec![1.0; dims],
        })
    }

    pub fn with_masses(mut self, masses: Vec<f64>) -> Result<Self> {
        if masses.len() != self.dims {
            return Err(SolverError::DimensionMismatch {
                expected: self.dims,
                got: masses.len(),
            });
        }
        if masses.iter().any(|&m| !(m.is_finite() && m > 0.0)) {
            return Err(SolverError::InvalidPotential(
                "kinetic masses must be positive and finite".into(),
            ));
        }
        self.kinetic_masses = masses;
        Ok(self)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn kinetic_masses(&self) -> &[f64] {
        &self.kinetic_masses
    }

    /// Evaluate at a point.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.dims {
            return Err(SolverError::DimensionMismatch {
                expected: self.dims,
                got: point.len(),
            });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[f64]) -> f64 {
        let mut sum = 0.0;
        for t in &self.terms {
            let mut p = t.coefficient;
            for (x, &e) in point.iter().zip(&t.exponents) {
                if e > 0 {
                    p *= x.powi(e as i32);
                }
            }
            sum += p;
        }
        sum
    }
}

/// V = 1/2 sum_i x_i^2 + 1/2 sum_ij v_ij x_i x_j for a symmetric coupling v.
pub fn make_coupled_harmonic(dims: usize, coupling: &Array2<f64>) -> Result<PolynomialPotential> {
    if coupling.dim() != (dims, dims) {
        return Err(SolverError::DimensionMismatch {
            expected: dims,
            got: coupling.dim().0,
        });
    }
    let scale = coupling.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(1.0);
    for i in 0..dims {
        for j in (i + 1)..dims {
            if (coupling[[i, j]] - coupling[[j, i]]).abs() > 1e-12 * scale {
                return Err(SolverError::InvalidPotential(format!(
                    "coupling matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    let mut terms = Vec::new();
    for i in 0..dims {
        let mut e = vec![0u32; dims];
        e[i] = 2;
        terms.push(Monomial::new(0.5 * (1.0 + coupling[[i, i]]), e));
    }
    for i in 0..dims {
        for j in (i + 1)..dims {
            let c = 0.5 * (coupling[[i, j]] + coupling[[j, i]]);
            if c != 0.0 {
                let mut e = vec![0u32; dims];
                e[i] = 1;
                e[j] = 1;
                terms.push(Monomial::new(c, e));
            }
        }
    }
    PolynomialPotential::new(dims, terms)
}

/// V = 1/2 (x^2 + y^2) + kappa x^2 y^2.
pub fn make_pullen_edmonds(kappa: f64) -> PolynomialPotential {
    let terms = vec![
        Monomial::new(0.5, vec![2, 0]),
        Monomial::new(0.5, vec![0, 2]),
        Monomial::new(kappa, vec![2, 2]),
    ];
    PolynomialPotential::new(2, terms).unwrap()
}

/// Central-field companion of the x^2 y^2 model:
/// V = 1/2 r^2 + (kappa/8) r^4 written out in two Cartesian coordinates.
pub fn make_pe_radial_effective(kappa: f64) -> PolynomialPotential {
    let q = kappa / 8.0;
    let terms = vec![
        Monomial::new(0.5, vec![2, 0]),
        Monomial::new(0.5, vec![0, 2]),
        Monomial::new(q, vec![4, 0]),
        Monomial::new(2.0 * q, vec![2, 2]),
        Monomial::new(q, vec![0, 4]),
    ];
    PolynomialPotential::new(2, terms).unwrap()
}

/// V = 1/2 (x1^2 + x2^2) + lambda (x1^4 + x2^4 + 2 x1^2 x2^2).
pub fn make_quartic_pair(lambda: f64) -> PolynomialPotential {
    let terms = vec![
        Monomial::new(0.5, vec![2, 0]),
        Monomial::new(0.5, vec![0, 2]),
        Monomial::new(lambda, vec![4, 0]),
        Monomial::new(lambda, vec![0, 4]),
        Monomial::new(2.0 * lambda, vec![2, 2]),
    ];
    PolynomialPotential::new(2, terms).unwrap()
}

/// Three-axis quartic with unequal self- and cross-couplings:
/// V = 1/2 r^2 + lambda (x^4/2 + y^4/3 + z^4/6 + x^2 y^2 + x^2 z^2 + y^2 z^2 / 2).
pub fn make_witwit_quartic(lambda: f64) -> PolynomialPotential {
    let terms = vec![
        Monomial::new(0.5, vec![2, 0, 0]),
        Monomial::new(0.5, vec![0, 2, 0]),
        Monomial::new(0.5, vec![0, 0, 2]),
        Monomial::new(lambda / 2.0, vec![4, 0, 0]),
        Monomial::new(lambda / 3.0, vec![0, 4, 0]),
        Monomial::new(lambda / 6.0, vec![0, 0, 4]),
        Monomial::new(lambda, vec![2, 2, 0]),
        Monomial::new(lambda, vec![2, 0, 2]),
        Monomial::new(lambda / 2.0, vec![0, 2, 2]),
    ];
    PolynomialPotential::new(3, terms).unwrap()
}

/// V = 1/2 sum x_i^2 + 2 sum x_i^4 + 1/2 sum x_i^6 + sum_{i<j} c x_i x_j
/// with c = 1. Defined for 3 or 4 coordinates.
pub fn make_sextic(dims: usize) -> Result<PolynomialPotential> {
    make_sextic_with_cross(dims, 1.0)
}

fn make_sextic_with_cross(dims: usize, cross: f64) -> Result<PolynomialPotential> {
    if dims != 3 && dims != 4 {
        return Err(SolverError::InvalidParameter(format!(
            "sextic model is defined for 3 or 4 coordinates, got {dims}"
        )));
    }
    let mut terms = Vec::new();
    for i in 0..dims {
        for (c, e) in [(0.5, 2u32), (2.0, 4), (0.5, 6)] {
            let mut exps = vec![0u32; dims];
            exps[i] = e;
            terms.push(Monomial::new(c, exps));
        }
    }
    for i in 0..dims {
        for j in (i + 1)..dims {
            let mut exps = vec![0u32; dims];
            exps[i] = 1;
            exps[j] = 1;
            terms.push(Monomial::new(cross, exps));
        }
    }
    PolynomialPotential::new(dims, terms)
}

fn uniform_coupling(dims: usize, off: f64) -> Array2<f64> {
    Array2::from_shape_fn((dims, dims), |(i, j)| if i == j { 0.0 } else { off })
}

pub const BUILTIN_MODELS: &[&str] = &[
    "harmonic1d",
    "harmonic3d",
    "harmonic4d",
    "pe",
    "pe_radial",
    "quartic_pair",
    "witwit",
    "sextic3d",
    "sextic4d",
];

/// Look up a built-in model by name. `coupling` overrides the model's
/// coupling constant (off-diagonal v for harmonics, kappa for the x^2 y^2
/// models, lambda for the quartics, the bilinear coefficient for sextics);
/// None selects each model's default.
pub fn builtin_model(name: &str, coupling: Option<f64>) -> Result<PolynomialPotential> {
    match name {
        "harmonic1d" => make_coupled_harmonic(1, &uniform_coupling(1, 0.0)),
        "harmonic3d" => make_coupled_harmonic(3, &uniform_coupling(3, coupling.unwrap_or(0.0))),
        "harmonic4d" => {
            make_coupled_harmonic(4, &uniform_coupling(4, coupling.unwrap_or(1.0 / 3.0)))
        }
        "pe" => Ok(make_pullen_edmonds(coupling.unwrap_or(1.0))),
        "pe_radial" => Ok(make_pe_radial_effective(coupling.unwrap_or(1.0))),
        "quartic_pair" => Ok(make_quartic_pair(coupling.unwrap_or(1.0))),
        "witwit" => Ok(make_witwit_quartic(coupling.unwrap_or(1e6))),
        "sextic3d" => make_sextic_with_cross(3, coupling.unwrap_or(1.0)),
        "sextic4d" => make_sextic_with_cross(4, coupling.unwrap_or(1.0)),
        _ => Err(SolverError::UnknownModel(format!(
            "unknown model '{name}' (available: {})",
            BUILTIN_MODELS.join(", ")
        ))),
    }
}

/// Parse the plain-text monomial format: one `coeff e1 e2 ... eD` per line,
/// `#` starts a comment, blank lines ignored. The dimension is inferred from
/// the first term and must be consistent.
pub fn parse_potential_text(text: &str) -> Result<PolynomialPotential> {
    let mut dims: Option<usize> = None;
    let mut terms = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(SolverError::InvalidPotential(format!(
                "line {}: expected 'coeff e1 ... eD', got '{line}'",
                lineno + 1
            )));
        }
        let coeff: f64 = tokens[0].parse().map_err(|_| {
            SolverError::InvalidPotential(format!(
                "line {}: cannot parse coefficient '{}'",
                lineno + 1,
                tokens[0]
            ))
        })?;
        let mut exps = Vec::with_capacity(tokens.len() - 1);
        for tok in &tokens[1..] {
            let e: u32 = tok.parse().map_err(|_| {
                SolverError::InvalidPotential(format!(
                    "line {}: cannot parse exponent '{tok}'",
                    lineno + 1
                ))
            })?;
            exps.push(e);
        }
        match dims {
            None => dims = Some(exps.len()),
            Some(d) if d != exps.len() => {
                return Err(SolverError::InvalidPotential(format!(
                    "line {}: {} exponents but earlier lines had {d}",
                    lineno + 1,
                    exps.len()
                )));
            }
            _ => {}
        }
        terms.push(Monomial::new(coeff, exps));
    }
    let dims = dims.ok_or_else(|| {
        SolverError::InvalidPotential("potential description has no terms".into())
    })?;
    PolynomialPotential::new(dims, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let pe = make_pullen_edmonds(1.0);
        assert_eq!(pe.eval(&[1.0, 0.0]).unwrap(), 0.5);
        assert_eq!(pe.eval(&[1.0, 1.0]).unwrap(), 2.0);

        let rad = make_pe_radial_effective(1.0);
        assert_eq!(rad.eval(&[1.0, 0.0]).unwrap(), 0.625);
        assert_eq!(rad.eval(&[1.0, 1.0]).unwrap(), 1.5);

        let q = make_quartic_pair(1.0);
        assert_eq!(q.eval(&[1.0, 1.0]).unwrap(), 5.0);

        let w = make_witwit_quartic(1.0);
        assert_eq!(w.eval(&[1.0, 0.0, 0.0]).unwrap(), 1.0);
        let w0 = make_witwit_quartic(0.0);
        assert_eq!(w0.eval(&[1.0, 1.0, 1.0]).unwrap(), 1.5);

        let s3 = make_sextic(3).unwrap();
        assert_eq!(s3.eval(&[1.0, 1.0, 1.0]).unwrap(), 12.0);

        let h1 = make_coupled_harmonic(1, &Array2::zeros((1, 1))).unwrap();
        assert_eq!(h1.eval(&[3.0]).unwrap(), 4.5);
        assert_eq!(h1.eval(&[2.0]).unwrap(), 2.0);
    }

    #[test]
    fn origin_is_zero_for_all_builtins() {
        for name in BUILTIN_MODELS {
            let pot = builtin_model(name, None).unwrap();
            let origin = vec![0.0; pot.dims()];
            assert_eq!(pot.eval(&origin).unwrap(), 0.0, "model {name}");
        }
    }

    #[test]
    fn builtins_bounded_below_on_box() {
        for name in BUILTIN_MODELS {
            let pot = builtin_model(name, None).unwrap();
            let d = pot.dims();
            let pts_per_axis = 21usize;
            let total = pts_per_axis.pow(d as u32);
            let mut min = f64::INFINITY;
            let mut point = vec![0.0; d];
            for flat in 0..total {
                let mut rest = flat;
                for p in point.iter_mut() {
                    let i = rest % pts_per_axis;
                    rest /= pts_per_axis;
                    *p = -5.0 + 10.0 * i as f64 / (pts_per_axis - 1) as f64;
                }
                min = min.min(pot.eval_unchecked(&point));
            }
            assert!(min > -1e-12, "model {name} dips to {min}");
        }
    }

    #[test]
    fn pullen_edmonds_symmetric_in_xy() {
        let pe = make_pullen_edmonds(0.7);
        for &(x, y) in &[(0.3, -1.2), (2.0, 0.1), (-0.5, -0.6)] {
            assert_eq!(pe.eval(&[x, y]).unwrap(), pe.eval(&[y, x]).unwrap());
        }
    }

    #[test]
    fn sextic_permutation_invariant() {
        let s = make_sextic(3).unwrap();
        let p = [0.37, -1.21, 0.84];
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let base = s.eval(&p).unwrap();
        for perm in perms {
            let q = [p[perm[0]], p[perm[1]], p[perm[2]]];
            assert!((s.eval(&q).unwrap() - base).abs() < 1e-14);
        }
    }

    #[test]
    fn coupled_harmonic_permutation_equivariance() {
        let mut v = Array2::<f64>::zeros((3, 3));
        v[[0, 1]] = pair(0, 1);
        v[[1, 0]] = pair(0, 1);
        v[[0, 2]] = pair(0, 2);
        v[[2, 0]] = pair(0, 2);
        v[[1, 2]] = pair(1, 2);
        v[[2, 1]] = pair(1, 2);
        fn pair(i: usize, j: usize) -> f64 {
            0.1 * (i + 1) as f64 - 0.07 * (j + 1) as f64
        }
        let pot = make_coupled_harmonic(3, &v).unwrap();
        // permute axes (2 0 1) and v's rows/columns the same way
        let perm = [2usize, 0, 1];
        let vp = Array2::from_shape_fn((3, 3), |(i, j)| v[[perm[i], perm[j]]]);
        let potp = make_coupled_harmonic(3, &vp).unwrap();
        let x = [0.4, -0.9, 1.3];
        let xp = [x[perm[0]], x[perm[1]], x[perm[2]]];
        assert!((pot.eval(&x).unwrap() - potp.eval(&xp).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn asymmetric_coupling_rejected() {
        let mut v = Array2::<f64>::zeros((2, 2));
        v[[0, 1]] = 0.25;
        assert!(make_coupled_harmonic(2, &v).is_err());
    }

    #[test]
    fn canonicalization_combines_terms() {
        let pot = PolynomialPotential::new(
            1,
            vec![
                Monomial::new(0.25, vec![2]),
                Monomial::new(0.25, vec![2]),
                Monomial::new(1.0, vec![4]),
                Monomial::new(-1.0, vec![4]),
            ],
        )
        .unwrap();
        assert_eq!(pot.terms().len(), 1);
        assert_eq!(pot.terms()[0], Monomial::new(0.5, vec![2]));
    }

    #[test]
    fn degree_cap_enforced() {
        let over = PolynomialPotential::new(2, vec![Monomial::new(1.0, vec![4, 3])]);
        assert!(over.is_err());
        let ok = PolynomialPotential::with_max_degree(2, vec![Monomial::new(1.0, vec![4, 3])], 8);
        assert!(ok.is_ok());
    }

    #[test]
    fn parse_round_trips_pullen_edmonds() {
        let text = "# x^2 y^2 model\n0.5 2 0\n0.5 0 2\n1 2 2\n";
        let parsed = parse_potential_text(text).unwrap();
        assert_eq!(parsed, make_pullen_edmonds(1.0));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_potential_text("").is_err());
        assert!(parse_potential_text("# only comments\n").is_err());
        let e = parse_potential_text("0.5 2\nbogus 1\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = parse_potential_text("0.5 2 0\n0.5 2\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(parse_potential_text("1.5\n").is_err());
        assert!(parse_potential_text("0.5 -2\n").is_err());
    }

    #[test]
    fn parse_single_axis() {
        let pot = parse_potential_text("0.5 2").unwrap();
        assert_eq!(pot.dims(), 1);
        assert_eq!(pot.eval(&[2.0]).unwrap(), 2.0);
    }

    #[test]
    fn unknown_model_lists_alternatives() {
        let e = builtin_model("nope", None).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("nope") && msg.contains("sextic4d"), "{msg}");
    }

    #[test]
    fn masses_validation() {
        let pot = make_pullen_edmonds(1.0);
        assert!(pot.clone().with_masses(vec![1.0, 2.0]).is_ok());
        assert!(pot.clone().with_masses(vec![1.0]).is_err());
        assert!(pot.with_masses(vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn eval_dimension_mismatch() {
        let pe = make_pullen_edmonds(1.0);
        assert!(pe.eval(&[1.0]).is_err());
    }
}
