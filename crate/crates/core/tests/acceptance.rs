//! Acceptance gate: ten criteria covering accuracy against frozen
//! benchmarks, the exact harmonic oracle, optimizer parameters, and the
//! structural contracts of the discretization. Each test prints one
//! criterion line and enforces its runtime budget.

use lsfc_core::{
    build_diff_matrices, builtin_model, decode, dense_eigen, encode, exact_harmonic_levels,
    lowest_eigenpairs, lsf_eval, make_coupled_harmonic, optimize_full, optimize_scale,
    strategy_by_name, trace_terms, EigenRequest, GridSpec, HamiltonianOperator,
    HarmonicSpectrum, OptimizationStrategy, PolynomialPotential, StrategyKind, TransformParams,
};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn solve_builtin(model: &str, n: usize, k: usize, strategy: &str) -> Vec<f64> {
    let pot = builtin_model(model, None).unwrap();
    let minimizer = strategy_by_name(strategy).unwrap();
    let params = minimizer.optimize(&pot, n).unwrap();
    let op = HamiltonianOperator::build(&pot, &params, n).unwrap();
    lowest_eigenpairs(&op, &EigenRequest::new(k))
        .unwrap()
        .eigenvalues
}

fn solve_potential(pot: &PolynomialPotential, n: usize, k: usize) -> Vec<f64> {
    let l = optimize_scale(pot, n).unwrap();
    let params = TransformParams::isotropic(l, pot.dims()).unwrap();
    let op = HamiltonianOperator::build(pot, &params, n).unwrap();
    lowest_eigenpairs(&op, &EigenRequest::new(k))
        .unwrap()
        .eigenvalues
}

#[test]
fn criterion_01_coupled_harmonic_four_axes() {
    let t0 = Instant::now();
    let nine = solve_builtin("harmonic4d", 10, 2, "scale");
    assert!(
        (nine[0] - 1.931851103).abs() < 5e-9,
        "9^4 E0 = {:.10}",
        nine[0]
    );
    assert!(
        (nine[1] - 2.748382295).abs() < 5e-9,
        "9^4 E1 = {:.10}",
        nine[1]
    );
    let fifteen = solve_builtin("harmonic4d", 16, 1, "scale");
    let exact = 1.931851653;
    assert!(
        (fifteen[0] - exact).abs() < 1e-8,
        "15^4 E0 = {:.10}",
        fifteen[0]
    );
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 60.0, "took {dt:.1}s");
    println!(
        "criterion 01: PASS  harmonic4d 9^4 ({:.9}, {:.9}), 15^4 {:.9} vs exact {exact} [{dt:.1}s]",
        nine[0], nine[1], fifteen[0]
    );
}

#[test]
fn criterion_02_exact_oracle_agreement() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    // grid sizes chosen so every dimension resolves levels to 1e-8
    let setup = [(1usize, 40usize, 3usize), (2, 30, 3), (3, 20, 3), (4, 18, 2)];
    let mut worst: f64 = 0.0;
    for &(d, n, k) in &setup {
        for draw in 0..5 {
            let coupling = loop {
                let mut c = Array2::zeros((d, d));
                for i in 0..d {
                    for j in i..d {
                        let v = rng.gen_range(-0.3..0.3);
                        c[[i, j]] = v;
                        c[[j, i]] = v;
                    }
                }
                // keep the quadratic form safely positive definite
                match HarmonicSpectrum::from_coupling(&c) {
                    Ok(s) if s.frequencies()[0].powi(2) >= 0.05 => break c,
                    _ => continue,
                }
            };
            let exact = exact_harmonic_levels(&coupling, k).unwrap();
            let pot = make_coupled_harmonic(d, &coupling).unwrap();
            // per-axis scales absorb soft modes that an isotropic box resolves poorly
            let params =
                optimize_full(&pot, n, &OptimizationStrategy::new(StrategyKind::ScaleAniso))
                    .unwrap();
            let op = HamiltonianOperator::build(&pot, &params, n).unwrap();
            let got = lowest_eigenpairs(&op, &EigenRequest::new(k))
                .unwrap()
                .eigenvalues;
            for i in 0..k {
                let err = (got[i] - exact[i]).abs();
                worst = worst.max(err);
                assert!(
                    err < 1e-8,
                    "D={d} draw={draw} level={i}: {} vs exact {} (err {err:.2e})",
                    got[i],
                    exact[i]
                );
            }
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    println!(
        "criterion 02: PASS  20 random couplings across D=1..4, worst |err| = {worst:.2e} [{dt:.1}s]"
    );
}

#[test]
fn criterion_03_planar_quartic_coupling() {
    let t0 = Instant::now();
    let got = solve_builtin("pe", 40, 4, "scale");
    let want = [1.169783112, 2.438854966, 2.438854966, 3.475320052];
    for (i, (&g, &w)) in got.iter().zip(&want).enumerate() {
        assert!((g - w).abs() < 1e-8, "level {i}: {g:.10} vs {w}");
    }
    let split = (got[1] - got[2]).abs();
    assert!(split < 1e-8, "degenerate pair split {split:.2e}");
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 30.0, "took {dt:.1}s");
    println!(
        "criterion 03: PASS  39^2 levels ({:.9}, {:.9}, {:.9}, {:.9}), pair split {split:.1e} [{dt:.1}s]",
        got[0], got[1], got[2], got[3]
    );
}

#[test]
fn criterion_04_radial_limit_ground_state() {
    let t0 = Instant::now();
    let got = solve_builtin("pe_radial", 60, 1, "scale");
    let want = 1.1790711996;
    let err = (got[0] - want).abs();
    assert!(err < 1e-8, "E0 = {:.11} (err {err:.2e})", got[0]);
    let dt = t0.elapsed().as_secs_f64();
    println!(
        "criterion 04: PASS  radial-limit ground state {:.10} vs {want} (err {err:.1e}) [{dt:.1}s]",
        got[0]
    );
}

#[test]
fn criterion_05_quartic_pair_couplings() {
    let t0 = Instant::now();
    let cases = [(0.1, 1.150188128), (1.0, 1.724184113), (100.0, 6.911899705)];
    let mut report = String::new();
    for &(lambda, want) in &cases {
        let pot = builtin_model("quartic_pair", Some(lambda)).unwrap();
        let got = solve_potential(&pot, 20, 1);
        let err = (got[0] - want).abs();
        assert!(err < 1e-7, "lambda={lambda}: {:.10} vs {want}", got[0]);
        report.push_str(&format!(" {:.9}", got[0]));
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 20.0, "took {dt:.1}s");
    println!("criterion 05: PASS  19^2 ground states{report} [{dt:.1}s]");
}

#[test]
fn criterion_06_strong_quartic_strategies() {
    let t0 = Instant::now();
    let target = 169.2145660;
    let scale29 = solve_builtin("witwit", 30, 1, "scale");
    assert!(
        (scale29[0] - 169.2145773).abs() < 1e-5,
        "29^3 scale E0 = {:.7}",
        scale29[0]
    );
    let rot29 = solve_builtin("witwit", 30, 1, "rot");
    assert!(
        (rot29[0] - target).abs() < 1e-5,
        "29^3 rot E0 = {:.7}",
        rot29[0]
    );
    let scale19 = solve_builtin("witwit", 20, 1, "scale");
    let rot19 = solve_builtin("witwit", 20, 1, "rot");
    assert!(
        (rot19[0] - target).abs() <= (scale19[0] - target).abs(),
        "19^3 ordering: rot {:.7} vs scale {:.7}",
        rot19[0],
        scale19[0]
    );
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 300.0, "took {dt:.1}s");
    println!(
        "criterion 06: PASS  29^3 scale {:.7}, rot {:.7}; 19^3 rot beats scale ({:.7} vs {:.7}) [{dt:.1}s]",
        scale29[0], rot29[0], rot19[0], scale19[0]
    );
}

#[test]
fn criterion_07_optimizer_parameters() {
    let t0 = Instant::now();
    let pot = builtin_model("witwit", None).unwrap();
    let wants = [(20usize, 0.2922), (30, 0.3309), (40, 0.3623)];
    for &(n, want) in &wants {
        let l = optimize_scale(&pot, n).unwrap();
        assert!((l - want).abs() < 1e-3, "N={n}: L = {l:.5} vs {want}");
    }
    let aniso = optimize_full(&pot, 40, &OptimizationStrategy::new(StrategyKind::ScaleAniso)).unwrap();
    assert!(
        (aniso.axis_scales()[1] - 0.91939).abs() < 1e-3,
        "beta = {:.6}",
        aniso.axis_scales()[1]
    );
    assert!(
        (aniso.axis_scales()[2] - 0.86281).abs() < 1e-3,
        "gamma = {:.6}",
        aniso.axis_scales()[2]
    );
    let rot = optimize_full(&pot, 40, &OptimizationStrategy::new(StrategyKind::ScaleAnisoRot)).unwrap();
    assert!(
        (rot.angles()[1] - 0.78540).abs() < 1e-4,
        "theta2 = {:.6}",
        rot.angles()[1]
    );
    let dt = t0.elapsed().as_secs_f64();
    println!(
        "criterion 07: PASS  L(20,30,40) ok, aniso ({:.5}, {:.5}), theta2 {:.5} [{dt:.1}s]",
        aniso.axis_scales()[1],
        aniso.axis_scales()[2],
        rot.angles()[1]
    );
}

#[test]
fn criterion_08_three_axis_sextic() {
    let t0 = Instant::now();
    // the second excited printed level sits at raw index 3 behind a
    // two-fold level at indices 1 and 2
    let seventeen = solve_builtin("sextic3d", 18, 4, "scale");
    let want17 = [(0usize, 2.978302843), (1, 5.295993128), (3, 5.865822825)];
    for &(idx, w) in &want17 {
        assert!(
            (seventeen[idx] - w).abs() < 1e-8,
            "17^3 level {idx}: {:.10} vs {w}",
            seventeen[idx]
        );
    }
    let twentynine = solve_builtin("sextic3d", 30, 1, "scale");
    assert!(
        (twentynine[0] - 2.978302657).abs() < 1e-8,
        "29^3 E0 = {:.10}",
        twentynine[0]
    );
    // independent published value, 7 printed digits
    let literature = 2.978302;
    assert!((twentynine[0] - literature).abs() < 1e-6);
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 120.0, "took {dt:.1}s");
    println!(
        "criterion 08: PASS  17^3 ({:.9}, {:.9}, {:.9}), 29^3 {:.9} [{dt:.1}s]",
        seventeen[0], seventeen[1], seventeen[3], twentynine[0]
    );
}

#[test]
fn criterion_09_four_axis_sextic() {
    let t0 = Instant::now();
    let nine = solve_builtin("sextic4d", 10, 1, "scale");
    assert!(
        (nine[0] - 3.959409424).abs() < 1e-7,
        "9^4 E0 = {:.10}",
        nine[0]
    );
    let fifteen = solve_builtin("sextic4d", 16, 1, "scale");
    assert!(
        (fifteen[0] - 3.959305195).abs() < 1e-7,
        "15^4 E0 = {:.10}",
        fifteen[0]
    );
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 600.0, "took {dt:.1}s");
    println!(
        "criterion 09: PASS  9^4 {:.9}, 15^4 {:.9} [{dt:.1}s]",
        nine[0], fifteen[0]
    );
}

#[test]
fn criterion_10_structural_suite() {
    let t0 = Instant::now();

    // nodal delta property and continuum orthogonality of the basis
    let g = GridSpec::new(8, 1.3).unwrap();
    let (lo, hi) = g.label_range();
    for k in lo..=hi {
        for j in lo..=hi {
            let v = lsf_eval(&g, k, g.node(j).unwrap()).unwrap();
            let want = if k == j { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12, "delta k={k} j={j}");
        }
    }
    let panels = 4000;
    let step = 2.0 * g.half_width / panels as f64;
    for a in lo..=hi {
        for b in a..=hi {
            let mut integral = 0.0;
            for t in 1..panels {
                let x = -g.half_width + step * t as f64;
                integral +=
                    lsf_eval(&g, a, x).unwrap() * lsf_eval(&g, b, x).unwrap() * step;
            }
            let want = if a == b { g.spacing } else { 0.0 };
            assert!(
                (integral - want).abs() < 1e-4 * g.spacing,
                "orthogonality a={a} b={b}: {integral}"
            );
        }
    }

    // derivative-matrix structure: the second derivative is symmetric, the
    // first is antisymmetric under the grid's index reversal, and both
    // scale as inverse powers of the half-width
    let m = g.node_count;
    let d = build_diff_matrices(&g);
    for a in 0..m {
        for b in 0..m {
            assert_eq!(d.d2[[a, b]], d.d2[[b, a]], "d2 symmetry {a},{b}");
            let mirrored = d.d1[[m - 1 - a, m - 1 - b]];
            assert!(
                (d.d1[[a, b]] + mirrored).abs() <= 1e-12 * d.d1[[a, b]].abs().max(1.0),
                "d1 reversal antisymmetry {a},{b}"
            );
        }
    }
    let half = build_diff_matrices(&GridSpec::new(8, 0.65).unwrap());
    for a in 0..m {
        for b in 0..m {
            assert!((half.d1[[a, b]] - 2.0 * d.d1[[a, b]]).abs() <= 1e-14 * d.d1[[a, b]].abs().max(1.0));
            assert!((half.d2[[a, b]] - 4.0 * d.d2[[a, b]]).abs() <= 1e-14 * d.d2[[a, b]].abs().max(1.0));
        }
    }

    // index maps are a bijection between flat labels and digit vectors
    for m in 1..=5usize {
        for dims in 1..=4usize {
            let total = m.pow(dims as u32);
            let mut seen = vec![false; total];
            for flat in 1..=total {
                let digits = decode(flat, m, dims).unwrap();
                assert!(digits.iter().all(|&t| 1 <= t && t <= m));
                let back = encode(&digits, m).unwrap();
                assert_eq!(back, flat);
                assert!(!seen[flat - 1]);
                seen[flat - 1] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    // operator symmetry, matrix-free vs dense, iterative vs dense values,
    // and the analytic trace, on every dense-checkable instance
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let instances: Vec<(&str, usize, TransformParams)> = vec![
        ("pe", 8, TransformParams::isotropic(3.0, 2).unwrap()),
        ("pe", 40, TransformParams::isotropic(4.26, 2).unwrap()),
        ("pe", 64, TransformParams::isotropic(4.9, 2).unwrap()),
        (
            "sextic3d",
            8,
            TransformParams::new(2.0, vec![1.0, 0.9, 1.1], vec![0.3, 0.1]).unwrap(),
        ),
        (
            "sextic3d",
            16,
            TransformParams::new(2.2, vec![1.0, 1.05, 0.95], vec![]).unwrap(),
        ),
        ("harmonic4d", 6, TransformParams::isotropic(3.5, 4).unwrap()),
    ];
    for (model, n, params) in &instances {
        let pot = builtin_model(model, None).unwrap();
        let op = HamiltonianOperator::build(&pot, params, *n).unwrap();
        let size = op.size();
        assert!(size <= 4096, "{model} N={n} too large for the dense oracle");
        let dense = op.dense_assemble().unwrap();
        let scale = dense.iter().fold(0.0_f64, |acc, &x| acc.max(x.abs()));

        for _ in 0..10 {
            let u: Vec<f64> = (0..size).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..size).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let hu = op.apply(&u).unwrap();
            let hv = op.apply(&v).unwrap();
            // matrix-free apply equals the dense action
            for r in 0..size {
                let mut want = 0.0;
                for c in 0..size {
                    want += dense[[r, c]] * u[c];
                }
                assert!(
                    (hu[r] - want).abs() <= 1e-10 * scale * size as f64,
                    "{model} N={n} apply row {r}"
                );
            }
            // symmetry through inner products
            let uhv: f64 = u.iter().zip(&hv).map(|(a, b)| a * b).sum();
            let vhu: f64 = v.iter().zip(&hu).map(|(a, b)| a * b).sum();
            let norm_u: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            let norm_v: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(
                (uhv - vhu).abs() <= 1e-10 * scale * norm_u * norm_v,
                "{model} N={n} symmetry"
            );
        }

        // analytic trace against the dense diagonal
        let dense_trace: f64 = (0..size).map(|i| dense[[i, i]]).sum();
        let analytic = trace_terms(&pot, params, *n).unwrap().total();
        assert!(
            (analytic - dense_trace).abs() <= 1e-9 * dense_trace.abs(),
            "{model} N={n} trace {analytic} vs {dense_trace}"
        );
    }

    // iterative eigenvalues match the dense oracle to 1e-9
    let pot = builtin_model("sextic3d", None).unwrap();
    let params = TransformParams::isotropic(2.2, 3).unwrap();
    let op = HamiltonianOperator::build(&pot, &params, 12).unwrap();
    let iterative = lowest_eigenpairs(&op, &EigenRequest::new(4)).unwrap();
    assert!(iterative.iterations > 0, "iterative path expected");
    let dense_vals = dense_eigen(&op.dense_assemble().unwrap()).unwrap();
    for i in 0..4 {
        assert!(
            (iterative.eigenvalues[i] - dense_vals[i]).abs()
                <= 1e-9 * dense_vals[i].abs().max(1.0),
            "level {i}"
        );
    }

    let dt = t0.elapsed().as_secs_f64();
    println!(
        "criterion 10: PASS  basis, derivative structure, index bijection, operator and trace oracles [{dt:.1}s]"
    );
}
