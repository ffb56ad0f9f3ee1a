//! Report rendering: text tables, CSV, and JSON.
//!
//! Text and CSV print every energy through the same 10-significant-digit
//! formatter so the two outputs carry identical numeric strings; JSON keeps
//! full float precision. Nothing time- or host-dependent is emitted, so a
//! repeated run produces byte-identical output.

use crate::config::{OutputFormat, RunConfig};
use lsfc_core::TransformParams;
use serde_json::json;
use std::fmt::Write as _;

pub struct SolveRow {
    pub n: usize,
    pub grid: String,
    pub params: TransformParams,
    pub energies: Vec<f64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

pub struct CheckLine {
    pub grid: String,
    pub level: usize,
    pub energy: f64,
    pub reference: f64,
    pub abs_error: f64,
    pub ok: bool,
    pub source: &'static str,
}

/// `sig` significant digits in plain decimal notation.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return format!("{:.*}", sig.saturating_sub(1), 0.0);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - magnitude).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

fn fmt_energy(x: f64) -> String {
    fmt_sig(x, 10)
}

fn fmt_error(x: f64) -> String {
    format!("{x:.3e}")
}

pub fn render(cfg: &RunConfig, rows: &[SolveRow], checks: &[CheckLine]) -> String {
    match cfg.format {
        OutputFormat::Text => render_text(cfg, rows, checks),
        OutputFormat::Csv => render_csv(cfg, rows, checks),
        OutputFormat::Json => render_json(cfg, rows, checks),
    }
}

fn render_text(cfg: &RunConfig, rows: &[SolveRow], checks: &[CheckLine]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "model {}  strategy {}  k {}",
        cfg.model_label, cfg.strategy, cfg.k
    );
    let grid_w = rows
        .iter()
        .map(|r| r.grid.len())
        .chain(["grid".len()])
        .max()
        .unwrap()
        + 2;
    let _ = write!(s, "{:<grid_w$}", "grid");
    for i in 0..cfg.k {
        let _ = write!(s, "{:<16}", format!("E{i}"));
    }
    s.push('\n');
    for row in rows {
        let _ = write!(s, "{:<grid_w$}", row.grid);
        for e in &row.energies {
            let _ = write!(s, "{:<16}", fmt_energy(*e));
        }
        s.push('\n');
    }

    if cfg.check {
        s.push('\n');
        let _ = writeln!(s, "checks (tolerance {:e})", cfg.tolerance);
        if checks.is_empty() {
            let _ = writeln!(s, "no matching reference rows");
        } else {
            let _ = writeln!(
                s,
                "{:<grid_w$}{:<7}{:<16}{:<16}{:<12}{}",
                "grid", "level", "energy", "reference", "abs_error", "status"
            );
            for c in checks {
                let _ = writeln!(
                    s,
                    "{:<grid_w$}{:<7}{:<16}{:<16}{:<12}{}",
                    c.grid,
                    c.level,
                    fmt_energy(c.energy),
                    fmt_energy(c.reference),
                    fmt_error(c.abs_error),
                    if c.ok { "ok" } else { "MISMATCH" }
                );
            }
            let _ = writeln!(
                s,
                "check result: {}",
                if checks.iter().all(|c| c.ok) {
                    "ok"
                } else {
                    "mismatch"
                }
            );
        }
    }
    s
}

fn render_csv(cfg: &RunConfig, rows: &[SolveRow], checks: &[CheckLine]) -> String {
    let mut s = String::from("model,grid,level,energy,reference,abs_error\n");
    for row in rows {
        for (level, e) in row.energies.iter().enumerate() {
            let hit = checks
                .iter()
                .find(|c| c.grid == row.grid && c.level == level);
            let (reference, abs_error) = match hit {
                Some(c) => (fmt_energy(c.reference), fmt_error(c.abs_error)),
                None => (String::new(), String::new()),
            };
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                cfg.model_label,
                row.grid,
                level,
                fmt_energy(*e),
                reference,
                abs_error
            );
        }
    }
    s
}

fn render_json(cfg: &RunConfig, rows: &[SolveRow], checks: &[CheckLine]) -> String {
    let runs: Vec<_> = rows
        .iter()
        .map(|r| {
            let row_checks: Vec<_> = checks
                .iter()
                .filter(|c| c.grid == r.grid)
                .map(|c| {
                    json!({
                        "level": c.level,
                        "energy": c.energy,
                        "reference": c.reference,
                        "abs_error": c.abs_error,
                        "ok": c.ok,
                        "source": c.source,
                    })
                })
                .collect();
            json!({
                "grid": r.grid,
                "n": r.n,
                "half_width": r.params.half_width(),
                "axis_scales": r.params.axis_scales(),
                "angles": r.params.angles(),
                "energies": r.energies,
                "residual_norms": r.residuals,
                "iterations": r.iterations,
                "checks": row_checks,
            })
        })
        .collect();
    let doc = json!({
        "model": cfg.model_label,
        "strategy": cfg.strategy,
        "k": cfg.k,
        "coupling": cfg.coupling,
        "tolerance": cfg.tolerance,
        "check": cfg.check,
        "runs": runs,
        "ok": checks.iter().all(|c| c.ok),
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::resolve;
    use crate::config::SolveArgs;

    fn sample_cfg(format: &str, check: bool) -> RunConfig {
        let args = SolveArgs {
            model: Some("pe".into()),
            n: Some("10".into()),
            k: Some(2),
            format: Some(format.into()),
            check,
            ..Default::default()
        };
        resolve(&args).unwrap()
    }

    fn sample_rows() -> Vec<SolveRow> {
        vec![SolveRow {
            n: 10,
            grid: "9^2".into(),
            params: TransformParams::isotropic(3.25, 2).unwrap(),
            energies: vec![1.1697831123456, 2.4388549661234],
            residuals: vec![1e-12, 2e-12],
            iterations: 42,
        }]
    }

    #[test]
    fn ten_significant_digits() {
        assert_eq!(fmt_sig(169.2145773, 10), "169.2145773");
        assert_eq!(fmt_sig(1.931851103, 10), "1.931851103");
        assert_eq!(fmt_sig(25.27402386, 10), "25.27402386");
        assert_eq!(fmt_sig(0.2922, 10), "0.2922000000");
        assert_eq!(fmt_sig(0.0, 10), "0.000000000");
        assert_eq!(fmt_sig(-1.5, 10), "-1.500000000");
        assert_eq!(fmt_sig(1234.5678901, 10), "1234.567890");
    }

    #[test]
    fn text_and_csv_share_numeric_strings() {
        let rows = sample_rows();
        let checks = vec![CheckLine {
            grid: "9^2".into(),
            level: 0,
            energy: rows[0].energies[0],
            reference: 1.169783112,
            abs_error: 2.3e-10,
            ok: true,
        source: "collocation-baseline",
        }];
        let text = render_text(&sample_cfg("text", true), &rows, &checks);
        let csv = render_csv(&sample_cfg("csv", true), &rows, &checks);
        for value in ["1.169783112", "2.438854966", "1.169783112", "2.300e-10"] {
            assert!(text.contains(value), "text missing {value}\n{text}");
            assert!(csv.contains(value), "csv missing {value}\n{csv}");
        }
        let header = csv.lines().next().unwrap();
        assert_eq!(header, "model,grid,level,energy,reference,abs_error");
        assert!(csv.lines().any(|l| l.starts_with("pe,9^2,0,1.169783112,1.169783112,")));
        assert!(csv.lines().any(|l| l.ends_with(",,")), "unchecked row keeps empty fields");
    }

    #[test]
    fn json_is_parseable_full_precision() {
        let rows = sample_rows();
        let out = render_json(&sample_cfg("json", false), &rows, &[]);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        let e0 = doc["runs"][0]["energies"][0].as_f64().unwrap();
        assert_eq!(e0, 1.1697831123456);
        assert_eq!(doc["runs"][0]["grid"], "9^2");
        assert_eq!(doc["model"], "pe");
        assert_eq!(doc["ok"], true);
    }

    #[test]
    fn mismatches_flip_the_status_line() {
        let rows = sample_rows();
        let checks = vec![CheckLine {
            grid: "9^2".into(),
            level: 0,
            energy: 1.16,
            reference: 1.169783112,
            abs_error: 9.8e-3,
            ok: false,
            source: "collocation-baseline",
        }];
        let text = render_text(&sample_cfg("text", true), &rows, &checks);
        assert!(text.contains("MISMATCH"));
        assert!(text.contains("check result: mismatch"));
    }
}
