//! Closed-form spectra and frozen benchmark energies.
//!
//! Coupled harmonic models diagonalize exactly: the quadratic form
//! V = x'(I + C)x / 2 has normal-mode frequencies omega_a = sqrt(eig_a) and
//! level set E(n) = sum_a omega_a (n_a + 1/2). That closed form is the
//! independent oracle the collocation solver is tested against.
//!
//! The static table below freezes benchmark energies for the built-in
//! models: converged collocation baselines on labeled grids plus a few
//! independently published values. Rows carry the raw index of the level in
//! the ascending spectrum, so degenerate copies occupy their true slots.

use crate::error::{Result, SolverError};
use crate::linalg::jacobi_eigen;
use ndarray::Array2;

/// Normal-mode data for an exactly solvable coupled harmonic model.
#[derive(Debug, Clone)]
pub struct HarmonicSpectrum {
    omegas: Vec<f64>,
}

impl HarmonicSpectrum {
    /// Frequencies from the symmetric coupling matrix C (diagonal entries
    /// add to the unit base curvature, off-diagonal entries couple axes).
    pub fn from_coupling(coupling: &Array2<f64>) -> Result<Self> {
        let (rows, cols) = coupling.dim();
        if rows == 0 || rows != cols {
            return Err(SolverError::InvalidParameter(format!(
                "coupling matrix must be square and non-empty, got {rows}x{cols}"
            )));
        }
        let mut a = coupling.clone();
        for i in 0..rows {
            a[[i, i]] += 1.0;
        }
        let (lambdas, _) = jacobi_eigen(&a)?;
        if lambdas[0] <= 0.0 {
            return Err(SolverError::InvalidPotential(format!(
                "quadratic form is not positive definite \
                 (smallest eigenvalue {:.6e}); the model is unbounded below",
                lambdas[0]
            )));
        }
        Ok(HarmonicSpectrum {
            omegas: lambdas.into_iter().map(f64::sqrt).collect(),
        })
    }

    pub fn dims(&self) -> usize {
        self.omegas.len()
    }

    /// Normal-mode frequencies, ascending.
    pub fn frequencies(&self) -> &[f64] {
        &self.omegas
    }

    /// The `count` lowest levels, ascending, degeneracies included.
    pub fn levels(&self, count: usize) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(SolverError::InvalidParameter(
                "at least one level must be requested".into(),
            ));
        }
        if count > 100_000 {
            return Err(SolverError::InvalidParameter(format!(
                "{count} levels requested; the exact enumerator caps at 100000"
            )));
        }
        let e0: f64 = 0.5 * self.omegas.iter().sum::<f64>();
        let omega_min = self.omegas[0];
        // every state left out of the cutoff enumeration has a larger
        // excitation than every state kept, so once `count` states are in
        // hand the smallest `count` are exact
        let mut cutoff = omega_min;
        loop {
            let mut excitations = Vec::new();
            enumerate_excitations(&self.omegas, 0.0, cutoff, &mut excitations);
            if excitations.len() >= count {
                excitations.sort_by(|a, b| a.partial_cmp(b).unwrap());
                return Ok(excitations[..count].iter().map(|x| e0 + x).collect());
            }
            cutoff *= 2.0;
        }
    }
}

fn enumerate_excitations(omegas: &[f64], partial: f64, budget: f64, out: &mut Vec<f64>) {
    match omegas.split_first() {
        None => out.push(partial),
        Some((w, rest)) => {
            let mut step = 0.0;
            while step <= budget + 1e-12 {
                enumerate_excitations(rest, partial + step, budget - step, out);
                step += w;
            }
        }
    }
}

/// Lowest `count` exact levels of the coupled harmonic model.
pub fn exact_harmonic_levels(coupling: &Array2<f64>, count: usize) -> Result<Vec<f64>> {
    HarmonicSpectrum::from_coupling(coupling)?.levels(count)
}

/// One frozen benchmark energy.
///
/// `coupling = None` means the model's default coupling. `level` is the raw
/// index in the ascending spectrum. `grid` is "M^D" for collocation
/// baselines, "exact" for closed forms, "ref" for independently published
/// values, and "19^2-alt" for the alternate quartic-pair baseline column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub model: &'static str,
    pub coupling: Option<f64>,
    pub strategy: Option<&'static str>,
    pub grid: &'static str,
    pub level: usize,
    pub value: f64,
    pub source: &'static str,
}

const fn base(
    model: &'static str,
    grid: &'static str,
    level: usize,
    value: f64,
) -> ReferenceRow {
    ReferenceRow {
        model,
        coupling: None,
        strategy: None,
        grid,
        level,
        value,
        source: "collocation-baseline",
    }
}

const fn lam(
    model: &'static str,
    coupling: f64,
    grid: &'static str,
    level: usize,
    value: f64,
) -> ReferenceRow {
    ReferenceRow {
        model,
        coupling: Some(coupling),
        strategy: None,
        grid,
        level,
        value,
        source: "collocation-baseline",
    }
}

const fn strat(
    model: &'static str,
    strategy: &'static str,
    grid: &'static str,
    level: usize,
    value: f64,
) -> ReferenceRow {
    ReferenceRow {
        model,
        coupling: None,
        strategy: Some(strategy),
        grid,
        level,
        value,
        source: "collocation-baseline",
    }
}

const fn lit(
    model: &'static str,
    grid: &'static str,
    level: usize,
    value: f64,
    source: &'static str,
) -> ReferenceRow {
    ReferenceRow {
        model,
        coupling: None,
        strategy: None,
        grid,
        level,
        value,
        source,
    }
}

pub static REFERENCE_TABLE: &[ReferenceRow] = &[
    // four-dimensional coupled harmonic, default coupling, levels 0 and 1
    base("harmonic4d", "5^4", 0, 1.929802495),
    base("harmonic4d", "5^4", 1, 2.755212192),
    base("harmonic4d", "7^4", 0, 1.931801216),
    base("harmonic4d", "7^4", 1, 2.748861410),
    base("harmonic4d", "9^4", 0, 1.931851103),
    base("harmonic4d", "9^4", 1, 2.748382295),
    base("harmonic4d", "11^4", 0, 1.931851707),
    base("harmonic4d", "11^4", 1, 2.748350435),
    base("harmonic4d", "13^4", 0, 1.931851659),
    base("harmonic4d", "13^4", 1, 2.748348376),
    base("harmonic4d", "15^4", 0, 1.931851653),
    base("harmonic4d", "15^4", 1, 2.748348243),
    lit("harmonic4d", "exact", 0, 1.931851653, "closed-form"),
    lit("harmonic4d", "exact", 1, 2.748348234, "closed-form"),
    // uncoupled three-dimensional harmonic ground state
    base("harmonic3d", "9^3", 0, 1.4999927163457656),
    base("harmonic3d", "15^3", 0, 1.4999999993138868),
    base("harmonic3d", "19^3", 0, 1.4999999999986033),
    base("harmonic3d", "29^3", 0, 1.5000000000000016),
    lit("harmonic3d", "exact", 0, 1.5, "closed-form"),
    // planar quartic-coupled oscillator, default coupling
    base("pe", "19^2", 0, 1.169791833),
    base("pe", "19^2", 1, 2.438995552),
    base("pe", "19^2", 2, 2.438995552),
    base("pe", "19^2", 3, 3.476809761),
    base("pe", "29^2", 0, 1.169783302),
    base("pe", "29^2", 1, 2.438859138),
    base("pe", "29^2", 2, 2.438859138),
    base("pe", "29^2", 3, 3.475378334),
    base("pe", "39^2", 0, 1.169783112),
    base("pe", "39^2", 1, 2.438854966),
    base("pe", "39^2", 2, 2.438854966),
    base("pe", "39^2", 3, 3.475320052),
    base("pe", "49^2", 0, 1.169783105),
    base("pe", "49^2", 1, 2.438854795),
    base("pe", "49^2", 2, 2.438854795),
    base("pe", "49^2", 3, 3.475317137),
    base("pe", "59^2", 0, 1.169783105),
    base("pe", "59^2", 1, 2.438854786),
    base("pe", "59^2", 2, 2.438854786),
    base("pe", "59^2", 3, 3.475316964),
    base("pe", "69^2", 0, 1.169783105),
    base("pe", "69^2", 1, 2.438854785),
    base("pe", "69^2", 2, 2.438854785),
    base("pe", "69^2", 3, 3.475316952),
    // radially symmetric quartic limit of the planar model
    lit("pe_radial", "exact", 0, 1.1790711996155153, "radial-limit"),
    // symmetric two-axis quartic pair across couplings; the first excited
    // value sits at raw indices 1 and 2, the next distinct one at 3
    lam("quartic_pair", 0.05, "19^2", 0, 1.084298606),
    lam("quartic_pair", 0.05, "19^2", 1, 2.238800191),
    lam("quartic_pair", 0.05, "19^2", 3, 3.454166066),
    lam("quartic_pair", 0.1, "19^2", 0, 1.150188128),
    lam("quartic_pair", 0.1, "19^2", 1, 2.414340361),
    lam("quartic_pair", 0.1, "19^2", 3, 3.772322621),
    lam("quartic_pair", 0.5, "19^2", 0, 1.476025071),
    lam("quartic_pair", 0.5, "19^2", 1, 3.231453204),
    lam("quartic_pair", 0.5, "19^2", 3, 5.195313797),
    lam("quartic_pair", 1.0, "19^2", 0, 1.724184113),
    lam("quartic_pair", 1.0, "19^2", 1, 3.830324193),
    lam("quartic_pair", 1.0, "19^2", 3, 6.213815314),
    lam("quartic_pair", 10.0, "19^2", 0, 3.301210724),
    lam("quartic_pair", 10.0, "19^2", 1, 7.527044432),
    lam("quartic_pair", 10.0, "19^2", 3, 12.39681625),
    lam("quartic_pair", 100.0, "19^2", 0, 6.911899705),
    lam("quartic_pair", 100.0, "19^2", 1, 15.86897394),
    lam("quartic_pair", 100.0, "19^2", 3, 26.23624148),
    lam("quartic_pair", 5000.0, "19^2", 0, 25.27402386),
    lam("quartic_pair", 5000.0, "19^2", 1, 58.13369977),
    lam("quartic_pair", 5000.0, "19^2", 3, 96.21028659),
    lam("quartic_pair", 0.05, "19^2-alt", 0, 1.084298606),
    lam("quartic_pair", 0.05, "19^2-alt", 1, 2.238800180),
    lam("quartic_pair", 0.05, "19^2-alt", 3, 3.454166056),
    lam("quartic_pair", 0.1, "19^2-alt", 0, 1.150188125),
    lam("quartic_pair", 0.1, "19^2-alt", 1, 2.414340327),
    lam("quartic_pair", 0.1, "19^2-alt", 3, 3.772322591),
    lam("quartic_pair", 0.5, "19^2-alt", 0, 1.476025046),
    lam("quartic_pair", 0.5, "19^2-alt", 1, 3.231453000),
    lam("quartic_pair", 0.5, "19^2-alt", 3, 5.195313648),
    lam("quartic_pair", 1.0, "19^2-alt", 0, 1.724184069),
    lam("quartic_pair", 1.0, "19^2-alt", 1, 3.830323856),
    lam("quartic_pair", 1.0, "19^2-alt", 3, 6.213815078),
    lam("quartic_pair", 10.0, "19^2-alt", 0, 3.301210571),
    lam("quartic_pair", 10.0, "19^2-alt", 1, 7.527043378),
    lam("quartic_pair", 10.0, "19^2-alt", 3, 12.39681556),
    lam("quartic_pair", 100.0, "19^2-alt", 0, 6.911899338),
    lam("quartic_pair", 100.0, "19^2-alt", 1, 15.86897147),
    lam("quartic_pair", 100.0, "19^2-alt", 3, 26.23623988),
    lam("quartic_pair", 5000.0, "19^2-alt", 0, 25.27402247),
    lam("quartic_pair", 5000.0, "19^2-alt", 1, 58.13369048),
    lam("quartic_pair", 5000.0, "19^2-alt", 3, 96.21028060),
    // strongly coupled three-axis quartic, per optimization strategy
    strat("witwit", "scale", "19^3", 0, 169.2157495),
    strat("witwit", "scale", "29^3", 0, 169.2145773),
    strat("witwit", "scale", "39^3", 0, 169.2145661),
    strat("witwit", "scale", "19^3", 1, 294.4522990),
    strat("witwit", "scale", "29^3", 1, 294.4365531),
    strat("witwit", "scale", "39^3", 1, 294.4363754),
    strat("witwit", "scale", "19^3", 2, 315.2612020),
    strat("witwit", "scale", "29^3", 2, 315.2602658),
    strat("witwit", "scale", "39^3", 2, 315.2602614),
    strat("witwit", "scale", "19^3", 3, 339.6044054),
    strat("witwit", "scale", "29^3", 3, 339.6041638),
    strat("witwit", "scale", "39^3", 3, 339.6041624),
    strat("witwit", "scale", "19^3", 4, 436.2738801),
    strat("witwit", "scale", "29^3", 4, 436.1607904),
    strat("witwit", "scale", "39^3", 4, 436.1591660),
    strat("witwit", "scale", "19^3", 5, 456.4724743),
    strat("witwit", "scale", "29^3", 5, 456.4654890),
    strat("witwit", "scale", "39^3", 5, 456.4654254),
    strat("witwit", "scale", "19^3", 6, 487.7693071),
    strat("witwit", "scale", "29^3", 6, 487.7639023),
    strat("witwit", "scale", "39^3", 6, 487.7639454),
    strat("witwit", "scale", "19^3", 7, 492.8611895),
    strat("witwit", "scale", "29^3", 7, 492.8571862),
    strat("witwit", "scale", "39^3", 7, 492.8570397),
    strat("witwit", "scale", "19^3", 8, 509.1325800),
    strat("witwit", "scale", "29^3", 8, 509.1322591),
    strat("witwit", "scale", "39^3", 8, 509.1323064),
    strat("witwit", "scale", "19^3", 9, 548.6572531),
    strat("witwit", "scale", "29^3", 9, 548.6517620),
    strat("witwit", "scale", "39^3", 9, 548.6516792),
    strat("witwit", "aniso", "19^3", 0, 169.2146979),
    strat("witwit", "aniso", "29^3", 0, 169.2145663),
    strat("witwit", "aniso", "39^3", 0, 169.2145660),
    strat("witwit", "aniso", "19^3", 1, 294.4375151),
    strat("witwit", "aniso", "29^3", 1, 294.4363709),
    strat("witwit", "aniso", "39^3", 1, 294.4363667),
    strat("witwit", "aniso", "19^3", 2, 315.2605725),
    strat("witwit", "aniso", "29^3", 2, 315.2602620),
    strat("witwit", "aniso", "39^3", 2, 315.2601985),
    strat("witwit", "aniso", "19^3", 3, 339.6047811),
    strat("witwit", "aniso", "29^3", 3, 339.6041637),
    strat("witwit", "aniso", "39^3", 3, 339.6041624),
    strat("witwit", "aniso", "19^3", 4, 436.1685952),
    strat("witwit", "aniso", "29^3", 4, 436.1591847),
    strat("witwit", "aniso", "39^3", 4, 436.1591447),
    strat("witwit", "aniso", "19^3", 5, 456.4659709),
    strat("witwit", "aniso", "29^3", 5, 456.4654324),
    strat("witwit", "aniso", "39^3", 5, 456.4654243),
    strat("witwit", "aniso", "19^3", 6, 487.7665445),
    strat("witwit", "aniso", "29^3", 6, 487.7638786),
    strat("witwit", "aniso", "39^3", 6, 487.7638732),
    strat("witwit", "aniso", "19^3", 7, 492.8575850),
    strat("witwit", "aniso", "29^3", 7, 492.8576386),
    strat("witwit", "aniso", "39^3", 7, 492.8570724),
    strat("witwit", "aniso", "19^3", 8, 509.1326192),
    strat("witwit", "aniso", "29^3", 8, 509.1323070),
    strat("witwit", "aniso", "39^3", 8, 509.1323014),
    strat("witwit", "aniso", "19^3", 9, 548.6570096),
    strat("witwit", "aniso", "29^3", 9, 548.6516923),
    strat("witwit", "aniso", "39^3", 9, 548.6516780),
    strat("witwit", "rot", "19^3", 0, 169.2146303),
    strat("witwit", "rot", "29^3", 0, 169.2145660),
    strat("witwit", "rot", "39^3", 0, 169.2145660),
    strat("witwit", "rot", "19^3", 1, 294.4368237),
    strat("witwit", "rot", "29^3", 1, 294.4363675),
    strat("witwit", "rot", "39^3", 1, 294.4363668),
    strat("witwit", "rot", "19^3", 2, 315.2605587),
    strat("witwit", "rot", "29^3", 2, 315.2602619),
    strat("witwit", "rot", "39^3", 2, 315.2602616),
    strat("witwit", "rot", "19^3", 3, 339.6043482),
    strat("witwit", "rot", "29^3", 3, 339.6041626),
    strat("witwit", "rot", "39^3", 3, 339.6041623),
    strat("witwit", "rot", "19^3", 4, 436.1613515),
    strat("witwit", "rot", "29^3", 4, 436.1591490),
    strat("witwit", "rot", "39^3", 4, 436.1591446),
    strat("witwit", "rot", "19^3", 5, 456.4664315),
    strat("witwit", "rot", "29^3", 5, 456.4654261),
    strat("witwit", "rot", "39^3", 5, 456.4654249),
    strat("witwit", "rot", "19^3", 6, 487.7652490),
    strat("witwit", "rot", "29^3", 6, 487.7638755),
    strat("witwit", "rot", "39^3", 6, 487.7642896),
    strat("witwit", "rot", "19^3", 7, 492.8588268),
    strat("witwit", "rot", "29^3", 7, 492.8571556),
    strat("witwit", "rot", "39^3", 7, 492.8571528),
    strat("witwit", "rot", "19^3", 8, 509.1332413),
    strat("witwit", "rot", "29^3", 8, 509.1323079),
    strat("witwit", "rot", "39^3", 8, 509.1323066),
    strat("witwit", "rot", "19^3", 9, 548.6527375),
    strat("witwit", "rot", "29^3", 9, 548.6516798),
    strat("witwit", "rot", "39^3", 9, 548.6516781),
    lit("witwit", "ref", 0, 169.23, "witwit-1993"),
    lit("witwit", "ref", 1, 294.42, "witwit-1993"),
    lit("witwit", "ref", 2, 315.28, "witwit-1993"),
    lit("witwit", "ref", 3, 339.66, "witwit-1993"),
    lit("witwit", "ref", 5, 456.46, "witwit-1993"),
    lit("witwit", "ref", 7, 492.85, "witwit-1993"),
    lit("witwit", "ref", 8, 509.14, "witwit-1993"),
    // three-axis sextic with quadratic cross coupling; printed levels map
    // to raw indices 0, 1, 3
    base("sextic3d", "5^3", 0, 2.973116328),
    base("sextic3d", "5^3", 1, 5.292534159),
    base("sextic3d", "5^3", 3, 5.859553533),
    base("sextic3d", "9^3", 0, 2.978379470),
    base("sextic3d", "9^3", 1, 5.296297359),
    base("sextic3d", "9^3", 3, 5.866068948),
    base("sextic3d", "17^3", 0, 2.978302843),
    base("sextic3d", "17^3", 1, 5.295993128),
    base("sextic3d", "17^3", 3, 5.865822825),
    base("sextic3d", "19^3", 0, 2.978302696),
    base("sextic3d", "19^3", 1, 5.295992510),
    base("sextic3d", "19^3", 3, 5.865822333),
    base("sextic3d", "21^3", 0, 2.978302665),
    base("sextic3d", "21^3", 1, 5.295992375),
    base("sextic3d", "21^3", 3, 5.865822226),
    base("sextic3d", "29^3", 0, 2.978302657),
    base("sextic3d", "29^3", 1, 5.295992339),
    base("sextic3d", "29^3", 3, 5.865822193),
    lit("sextic3d", "ref", 0, 2.978302, "braun-1996"),
    lit("sextic3d", "ref", 1, 5.295992, "braun-1996"),
    lit("sextic3d", "ref", 3, 5.865822, "braun-1996"),
    lit("sextic3d", "ref", 0, 2.978305, "chung-chew-2007"),
    lit("sextic3d", "ref", 1, 5.296000, "chung-chew-2007"),
    lit("sextic3d", "ref", 3, 5.865828, "chung-chew-2007"),
    // four-axis sextic; printed levels map to raw indices 0, 1, 4
    base("sextic4d", "3^4", 0, 4.133363559),
    base("sextic4d", "3^4", 1, 6.144782201),
    base("sextic4d", "3^4", 4, 6.929503230),
    base("sextic4d", "5^4", 0, 3.952498514),
    base("sextic4d", "5^4", 1, 6.276113935),
    base("sextic4d", "5^4", 4, 7.007385139),
    base("sextic4d", "9^4", 0, 3.959409424),
    base("sextic4d", "9^4", 1, 6.281167988),
    base("sextic4d", "9^4", 4, 7.016036697),
    base("sextic4d", "11^4", 0, 3.959326310),
    base("sextic4d", "11^4", 1, 6.280902944),
    base("sextic4d", "11^4", 4, 7.015828402),
    base("sextic4d", "13^4", 0, 3.959309441),
    base("sextic4d", "13^4", 1, 6.280850134),
    base("sextic4d", "13^4", 4, 7.015787290),
    base("sextic4d", "15^4", 0, 3.959305195),
    base("sextic4d", "15^4", 1, 6.280836518),
    base("sextic4d", "15^4", 4, 7.015776655),
    lit("sextic4d", "ref", 0, 3.960086, "chung-chew-2007"),
    lit("sextic4d", "ref", 1, 6.283305, "chung-chew-2007"),
    lit("sextic4d", "ref", 4, 7.017863, "chung-chew-2007"),
    lit("sextic4d", "ref", 0, 3.959304, "kaluza-1992"),
];

/// Table rows for one model, in table order.
pub fn reference_values(model: &str) -> Vec<&'static ReferenceRow> {
    REFERENCE_TABLE.iter().filter(|r| r.model == model).collect()
}
