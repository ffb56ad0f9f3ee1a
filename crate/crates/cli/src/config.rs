//! Run configuration: CLI flags merged over an optional key = value file.

use lsfc_core::{builtin_model, parse_potential_text, PolynomialPotential, BUILTIN_MODELS};
use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

pub const DEFAULT_CHECK_TOLERANCE: f64 = 1e-6;

#[derive(clap::Args, Debug, Default)]
pub struct SolveArgs {
    /// Built-in model name or path to a potential file
    #[arg(long)]
    pub model: Option<String>,
    /// Comma-separated even grid sizes, e.g. 20,30,40
    #[arg(long = "N", value_name = "N1,N2,...")]
    pub n: Option<String>,
    /// Number of lowest levels to compute
    #[arg(long)]
    pub k: Option<usize>,
    /// Parameter optimization: scale, aniso, or rot
    #[arg(long)]
    pub strategy: Option<String>,
    /// Absolute tolerance for --check comparisons
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Output format: text, csv, or json
    #[arg(long)]
    pub format: Option<String>,
    /// Coupling constant for built-in models that take one
    #[arg(long)]
    pub coupling: Option<f64>,
    /// Compare results against the frozen reference table
    #[arg(long)]
    pub check: bool,
    /// Config file with the same keys as the flags
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

pub struct RunConfig {
    pub model_label: String,
    pub potential: PolynomialPotential,
    pub dims: usize,
    pub grid_sizes: Vec<usize>,
    pub k: usize,
    pub strategy: String,
    pub tolerance: f64,
    pub format: OutputFormat,
    pub check: bool,
    pub coupling: Option<f64>,
}

const CONFIG_KEYS: [&str; 8] = [
    "model",
    "N",
    "k",
    "strategy",
    "tolerance",
    "format",
    "coupling",
    "check",
];

pub fn parse_config_file(text: &str) -> Result<HashMap<String, String>, String> {
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("config line {}: expected key = value", i + 1));
        };
        let key = key.trim();
        let value = value.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(format!(
                "config line {}: unknown key '{}'; known keys: {}",
                i + 1,
                key,
                CONFIG_KEYS.join(", ")
            ));
        }
        if value.is_empty() {
            return Err(format!("config line {}: empty value for '{key}'", i + 1));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(format!("config line {}: duplicate key '{key}'", i + 1));
        }
    }
    Ok(map)
}

pub fn parse_grid_sizes(raw: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        let n: usize = part
            .parse()
            .map_err(|_| format!("grid size '{part}' is not a positive integer"))?;
        if n < 4 || n % 2 != 0 {
            return Err(format!(
                "grid size must be an even integer of at least 4, got {n}"
            ));
        }
        out.push(n);
    }
    if out.is_empty() {
        return Err("at least one grid size is required".into());
    }
    Ok(out)
}

/// Read a potential in the monomial-per-line format.
pub fn parse_potential_file(path: &Path) -> Result<PolynomialPotential, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read potential file {}: {e}", path.display()))?;
    parse_potential_text(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn resolve(args: &SolveArgs) -> Result<RunConfig, String> {
    let file = match &args.config {
        None => HashMap::new(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
            parse_config_file(&text)?
        }
    };
    let pick = |flag: &Option<String>, key: &str| -> Option<String> {
        flag.clone().or_else(|| file.get(key).cloned())
    };

    let model = pick(&args.model, "model").ok_or("a model is required (--model)")?;
    let n_raw = pick(&args.n, "N").ok_or("at least one grid size is required (--N)")?;
    let grid_sizes = parse_grid_sizes(&n_raw)?;

    let k = match (args.k, file.get("k")) {
        (Some(k), _) => k,
        (None, Some(raw)) => raw
            .parse()
            .map_err(|_| format!("k must be a positive integer, got '{raw}'"))?,
        (None, None) => 1,
    };
    if k == 0 {
        return Err("k must be at least 1".into());
    }

    let strategy = pick(&args.strategy, "strategy").unwrap_or_else(|| "scale".into());
    if !lsfc_core::strategy_names().contains(&strategy.as_str()) {
        return Err(format!(
            "unknown strategy '{strategy}'; available: {}",
            lsfc_core::strategy_names().join(", ")
        ));
    }

    let tolerance = match (args.tolerance, file.get("tolerance")) {
        (Some(t), _) => t,
        (None, Some(raw)) => raw
            .parse()
            .map_err(|_| format!("tolerance must be a number, got '{raw}'"))?,
        (None, None) => DEFAULT_CHECK_TOLERANCE,
    };
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(format!("tolerance must be positive, got {tolerance}"));
    }

    let format = match pick(&args.format, "format").as_deref() {
        None | Some("text") => OutputFormat::Text,
        Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        Some(other) => {
            return Err(format!(
                "unknown format '{other}'; available: text, csv, json"
            ))
        }
    };

    let coupling = match (args.coupling, file.get("coupling")) {
        (Some(c), _) => Some(c),
        (None, Some(raw)) => Some(
            raw.parse()
                .map_err(|_| format!("coupling must be a number, got '{raw}'"))?,
        ),
        (None, None) => None,
    };

    let check = args.check
        || match file.get("check").map(String::as_str) {
            None => false,
            Some("true") => true,
            Some("false") => false,
            Some(other) => return Err(format!("check must be true or false, got '{other}'")),
        };

    let (model_label, potential) = if BUILTIN_MODELS.contains(&model.as_str()) {
        let pot = builtin_model(&model, coupling).map_err(|e| e.to_string())?;
        (model.clone(), pot)
    } else {
        let path = Path::new(&model);
        if !path.is_file() {
            return Err(format!(
                "'{model}' is neither a built-in model ({}) nor a potential file",
                BUILTIN_MODELS.join(", ")
            ));
        }
        if coupling.is_some() {
            return Err("--coupling applies to built-in models only".into());
        }
        let pot = parse_potential_file(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| model.clone());
        (label, pot)
    };

    let dims = potential.dims();
    Ok(RunConfig {
        model_label,
        potential,
        dims,
        grid_sizes,
        k,
        strategy,
        tolerance,
        format,
        check,
        coupling,
    })
}
