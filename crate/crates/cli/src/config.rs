//! JSON run configuration.

use crate::error::{CliError, CliResult};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use szego_core::blaschke::BlaschkeProduct;
use szego_core::quadrature::{CircleGrid, GridFunction};
use szego_core::spectral::{PathChoice, SpectrumKind, TestFunctionFamily};
use szego_core::symbol::{CoefficientWindow, FourierSymbol, M1Symbol, SampledSymbol, Symbol};
use szego_core::Complex64;

/// Complex number as `{"re": x, "im": y}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JsonComplex {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<JsonComplex> for Complex64 {
    fn from(z: JsonComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for JsonComplex {
    fn from(z: Complex64) -> Self {
        JsonComplex { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SymbolConfig {
    /// `Σ a_t B^t` with `a_{t_min}, a_{t_min + 1}, ...`.
    M1 {
        t_min: i64,
        coefficients: Vec<JsonComplex>,
    },
    /// `Σ a_t z^t`.
    Fourier {
        t_min: i64,
        coefficients: Vec<JsonComplex>,
    },
    /// Boundary samples at the roots of unity, one `re,im` line each.
    Samples { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeConfig {
    Eigen,
    Singular,
    #[default]
    Both,
}

impl ModeConfig {
    pub fn kinds(self) -> Vec<SpectrumKind> {
        match self {
            ModeConfig::Eigen => vec![SpectrumKind::Eigen],
            ModeConfig::Singular => vec![SpectrumKind::Singular],
            ModeConfig::Both => vec![SpectrumKind::Eigen, SpectrumKind::Singular],
        }
    }
}

impl std::str::FromStr for ModeConfig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "eigen" => Ok(ModeConfig::Eigen),
            "singular" => Ok(ModeConfig::Singular),
            "both" => Ok(ModeConfig::Both),
            other => Err(format!("unknown mode {other:?}; expected eigen, singular or both")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunctionsConfig {
    pub centers: Vec<f64>,
    pub widths: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Zeros as `[re, im, multiplicity]`.
    pub blaschke: Vec<(f64, f64, usize)>,
    pub symbol: SymbolConfig,
    pub n_schedule: Vec<usize>,
    #[serde(default)]
    pub grid_size: Option<usize>,
    #[serde(default)]
    pub mode: ModeConfig,
    #[serde(default)]
    pub test_functions: Option<TestFunctionsConfig>,
    #[serde(default)]
    pub path: PathChoice,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    /// When set, `szego` fails unless every final gap is below it and gaps trend down.
    #[serde(default)]
    pub gap_threshold: Option<f64>,
}

/// A configuration checked against every invariant the commands rely on.
#[derive(Debug, Clone)]
pub struct Run {
    pub blaschke: BlaschkeProduct,
    pub symbol: Symbol,
    pub n_schedule: Vec<usize>,
    pub grid_size: Option<usize>,
    pub modes: Vec<SpectrumKind>,
    pub family: Option<TestFunctionFamily>,
    pub path: PathChoice,
    pub output: PathBuf,
    pub seed: u64,
    pub gap_threshold: Option<f64>,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub grid_size: Option<usize>,
    pub mode: Option<ModeConfig>,
}

pub fn load(path: &Path, overrides: &Overrides) -> CliResult<Run> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read config {}: {e}", path.display()))
    })?;
    let cfg: RunConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    cfg.validate(base, overrides)
}

fn read_samples(path: &Path) -> CliResult<GridFunction> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read samples {}: {e}", path.display()))
    })?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("re") {
            continue;
        }
        let parsed: Option<Vec<f64>> = line.split(',').map(|f| f.trim().parse().ok()).collect();
        match parsed.as_deref() {
            Some([re, im]) => values.push(Complex64::new(*re, *im)),
            Some([re]) => values.push(Complex64::new(*re, 0.0)),
            _ => {
                return Err(CliError::Config(format!(
                    "{}:{}: expected `re,im`",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(CliError::Config(format!("{}: non-finite sample", path.display())));
    }
    let grid = CircleGrid::new(values.len()).map_err(|_| {
        CliError::Config(format!(
            "{}: {} samples; need a power of two >= 16",
            path.display(),
            values.len()
        ))
    })?;
    Ok(GridFunction::new(&grid, values)?)
}

impl RunConfig {
    pub fn validate(&self, base: &Path, overrides: &Overrides) -> CliResult<Run> {
        let blaschke = BlaschkeProduct::new(
            self.blaschke
                .iter()
                .map(|&(re, im, m)| (Complex64::new(re, im), m)),
        )?;
        let window = |t_min: i64, coeffs: &[JsonComplex]| {
            CoefficientWindow::new(t_min, coeffs.iter().map(|&z| z.into()).collect())
        };
        let symbol = match &self.symbol {
            SymbolConfig::M1 {
                t_min,
                coefficients,
            } => Symbol::M1(M1Symbol::new(&blaschke, window(*t_min, coefficients))),
            SymbolConfig::Fourier {
                t_min,
                coefficients,
            } => Symbol::Fourier(FourierSymbol::new(window(*t_min, coefficients))),
            SymbolConfig::Samples { path } => {
                Symbol::Sampled(SampledSymbol::new(read_samples(&base.join(path))?))
            }
        };
        if self.n_schedule.is_empty() {
            return Err(CliError::Config("n_schedule is empty".into()));
        }
        if self.n_schedule.contains(&0) {
            return Err(CliError::Config("n must be ≥ 1".into()));
        }
        if self.n_schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config("n_schedule must be strictly increasing".into()));
        }
        let grid_size = overrides.grid_size.or(self.grid_size);
        if let Some(m) = grid_size {
            CircleGrid::new(m)?;
        }
        let mode = overrides.mode.unwrap_or(self.mode);
        let modes = mode.kinds();
        if modes.contains(&SpectrumKind::Eigen) {
            let grid = CircleGrid::new(grid_size.unwrap_or(4096))?;
            let max_imag = symbol.boundary_values(&grid).max_imag();
            if max_imag > szego_core::symbol::REAL_TOL {
                return Err(CliError::Config(format!(
                    "eigen mode requires a real-valued symbol (max |Im| = {max_imag:e}); \
                     eigenvalue distribution is only claimed for real-valued symbols"
                )));
            }
        }
        let family = match &self.test_functions {
            None => None,
            Some(tf) => {
                if tf.centers.is_empty() || tf.widths.is_empty() {
                    return Err(CliError::Config("test_functions needs centers and widths".into()));
                }
                if tf.widths.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
                    return Err(CliError::Config("test function widths must be positive".into()));
                }
                if tf.centers.iter().any(|c| !c.is_finite()) {
                    return Err(CliError::Config("test function centers must be finite".into()));
                }
                Some(TestFunctionFamily::grid(&tf.centers, &tf.widths))
            }
        };
        let output = overrides
            .out
            .clone()
            .or_else(|| self.output.as_ref().map(|p| base.join(p)))
            .unwrap_or_else(|| PathBuf::from("szego-out"));
        Ok(Run {
            blaschke,
            symbol,
            n_schedule: self.n_schedule.clone(),
            grid_size,
            modes,
            family,
            path: self.path,
            output,
            seed: self.seed,
            gap_threshold: self.gap_threshold,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> CliResult<Run> {
        let cfg: RunConfig = serde_json::from_str(json).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate(Path::new("."), &Overrides::default())
    }

    #[test]
    fn minimal_config() {
        let run = parse(
            r#"{"blaschke": [[0, 0, 1]],
                "symbol": {"type": "m1", "t_min": -1, "coefficients": [{"re": 1}, {"re": 0}, {"re": 1}]},
                "n_schedule": [4, 8]}"#,
        )
        .unwrap();
        assert!(run.blaschke.is_identity());
        assert_eq!(run.modes.len(), 2);
        assert_eq!(run.path, PathChoice::Auto);
    }

    #[test]
    fn rejects_bad_inputs() {
        let bad_zero = parse(
            r#"{"blaschke": [[1.2, 0, 1]], "symbol": {"type": "fourier", "t_min": 0, "coefficients": [{"re": 1}]}, "n_schedule": [2]}"#,
        );
        assert!(matches!(bad_zero, Err(CliError::Config(m)) if m.contains("zero outside open disk")));
        let n0 = parse(
            r#"{"blaschke": [[0, 0, 1]], "symbol": {"type": "fourier", "t_min": 0, "coefficients": [{"re": 1}]}, "n_schedule": [0]}"#,
        );
        assert!(matches!(n0, Err(CliError::Config(m)) if m == "n must be ≥ 1"));
        let empty = parse(
            r#"{"blaschke": [[0, 0, 1]], "symbol": {"type": "fourier", "t_min": 0, "coefficients": [{"re": 1}]}, "n_schedule": []}"#,
        );
        assert!(matches!(empty, Err(CliError::Config(_))));
        let complex_eigen = parse(
            r#"{"blaschke": [[0.5, 0, 1]], "symbol": {"type": "m1", "t_min": 1, "coefficients": [{"re": 1}]}, "n_schedule": [2], "mode": "eigen"}"#,
        );
        assert!(matches!(complex_eigen, Err(CliError::Config(m)) if m.contains("real-valued")));
        let unknown = parse(
            r#"{"blaschke": [[0, 0, 1]], "symbol": {"type": "fourier", "t_min": 0, "coefficients": []}, "n_schedule": [1], "bogus": 1}"#,
        );
        assert!(unknown.is_err());
    }
}
