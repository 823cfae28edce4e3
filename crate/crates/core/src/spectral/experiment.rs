//! Empirical spectral averages against their limits along a schedule of `n`.

use super::distribution::{empirical_average, limit_integral, Hat, TestFunctionFamily};
use super::{spectrum, SpectrumKind};
use crate::blaschke::BlaschkeProduct;
use crate::compression::{compress_analytic, compress_quadrature, CompressedMatrix};
use crate::error::{Error, Result};
use crate::malmquist::MalmquistBasis;
use crate::quadrature::{default_grid_size, CircleGrid, GridFunction};
use crate::symbol::{compose_moebius_inverse, real_valued, Symbol};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Grid used for the limit integrals `(1/2π)∫ G(g)`.
pub const LIMIT_GRID_SIZE: usize = 1 << 16;

/// Relative noise allowed when checking that gaps shrink along the schedule.
pub const TREND_ALLOWANCE: f64 = 0.2;

/// Absolute slack in the same check, so rounding-level gaps never count as growth.
pub const TREND_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathChoice {
    /// Analytic blocks for B-power symbols, quadrature otherwise.
    #[default]
    Auto,
    Analytic,
    Quadrature,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub blaschke: BlaschkeProduct,
    pub symbol: Symbol,
    pub n_schedule: Vec<usize>,
    pub modes: Vec<SpectrumKind>,
    /// Hats to test with; `None` spans the range of the limit function.
    pub family: Option<TestFunctionFamily>,
    pub grid_size: Option<usize>,
    pub path: PathChoice,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub n: usize,
    pub dim: usize,
    #[serde(rename = "G_center")]
    pub g_center: f64,
    #[serde(rename = "G_width")]
    pub g_width: f64,
    pub mode: SpectrumKind,
    pub empirical: f64,
    pub limit: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DistributionReport {
    pub rows: Vec<DistributionRow>,
}

/// Gap trend for one test function and mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceSummary {
    pub mode: SpectrumKind,
    pub hat: Hat,
    pub first_gap: f64,
    pub last_gap: f64,
    /// Every consecutive step satisfies `gap_next <= gap_prev + allowance * max(gap_prev, gap_next)`.
    pub trend_ok: bool,
}

impl ConvergenceSummary {
    pub fn below(&self, threshold: f64) -> bool {
        self.last_gap <= threshold
    }
}

pub const CSV_HEADER: &str = "n,dim,G_center,G_width,mode,empirical,limit,gap";

impl DistributionReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.n, r.dim, r.g_center, r.g_width, r.mode, r.empirical, r.limit, r.gap
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => return Err(Error::Parse(format!("bad header {other:?}"))),
        }
        let mut rows = Vec::new();
        for (lineno, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(Error::Parse(format!("line {}: expected 8 fields", lineno + 2)));
            }
            let bad = |what: &str| Error::Parse(format!("line {}: bad {what}", lineno + 2));
            let float = |i: usize, what: &str| fields[i].parse::<f64>().map_err(|_| bad(what));
            rows.push(DistributionRow {
                n: fields[0].parse().map_err(|_| bad("n"))?,
                dim: fields[1].parse().map_err(|_| bad("dim"))?,
                g_center: float(2, "G_center")?,
                g_width: float(3, "G_width")?,
                mode: fields[4].parse().map_err(|_| bad("mode"))?,
                empirical: float(5, "empirical")?,
                limit: float(6, "limit")?,
                gap: float(7, "gap")?,
            });
        }
        Ok(Self { rows })
    }

    /// Distinct `(mode, hat)` pairs in first-seen order.
    pub fn series_keys(&self) -> Vec<(SpectrumKind, Hat)> {
        let mut keys: Vec<(SpectrumKind, Hat)> = Vec::new();
        for r in &self.rows {
            let key = (r.mode, Hat::new(r.g_center, r.g_width));
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        keys
    }

    /// `(n, gap)` along the schedule for one test function.
    pub fn series(&self, mode: SpectrumKind, hat: Hat) -> Vec<(usize, f64)> {
        self.rows
            .iter()
            .filter(|r| r.mode == mode && r.g_center == hat.center && r.g_width == hat.width)
            .map(|r| (r.n, r.gap))
            .collect()
    }

    pub fn convergence(&self) -> Vec<ConvergenceSummary> {
        self.series_keys()
            .into_iter()
            .map(|(mode, hat)| {
                let gaps: Vec<f64> = self.series(mode, hat).into_iter().map(|(_, g)| g).collect();
                let trend_ok = gaps
                    .windows(2)
                    .all(|w| w[1] <= w[0] + TREND_ALLOWANCE * w[0].max(w[1]) + TREND_FLOOR);
                ConvergenceSummary {
                    mode,
                    hat,
                    first_gap: gaps.first().copied().unwrap_or(0.0),
                    last_gap: gaps.last().copied().unwrap_or(0.0),
                    trend_ok,
                }
            })
            .collect()
    }
}

/// The function the spectra distribute like: `Σ a_t z^t` for B-power symbols,
/// `f` itself when `B(z) = z`, and `f ∘ b_{-λ}` when `B = b_λ`.
pub fn limit_function(b: &BlaschkeProduct, symbol: &Symbol, grid: &CircleGrid) -> Result<GridFunction> {
    if let Symbol::M1(s) = symbol {
        return Ok(s.representative().sample(grid));
    }
    if b.is_identity() {
        return Ok(symbol.boundary_values(grid));
    }
    let lambda = b.single_simple_zero().ok_or_else(|| {
        Error::Unsupported(
            "no limit is known for a general symbol unless B has a single simple zero".into(),
        )
    })?;
    match symbol {
        Symbol::Fourier(f) => Ok(grid.sample(|z| f.evaluate((z + lambda) / (1.0 + lambda.conj() * z)))),
        Symbol::Sampled(f) => compose_moebius_inverse(lambda, f, grid),
        Symbol::M1(_) => unreachable!(),
    }
}

fn validate_schedule(schedule: &[usize]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::Unsupported("n schedule is empty".into()));
    }
    if schedule.contains(&0) {
        return Err(Error::ZeroDimension);
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Unsupported("n schedule must be strictly increasing".into()));
    }
    Ok(())
}

fn compress_for(cfg: &ExperimentConfig, symbol: &Symbol, n: usize) -> Result<CompressedMatrix> {
    let analytic = match (cfg.path, symbol) {
        (PathChoice::Quadrature, _) => None,
        (_, Symbol::M1(s)) => Some(s),
        (PathChoice::Analytic, _) => {
            return Err(Error::Unsupported(
                "the analytic path needs a symbol given by coefficients over powers of B".into(),
            ))
        }
        (PathChoice::Auto, _) => None,
    };
    if let Some(s) = analytic {
        return compress_analytic(s, n);
    }
    let size = cfg.grid_size.unwrap_or_else(|| {
        default_grid_size(n, cfg.blaschke.degree(), symbol.bandwidth())
    });
    let grid = CircleGrid::new(size)?;
    let basis = MalmquistBasis::build(&cfg.blaschke, n, &grid)?;
    compress_quadrature(&symbol.boundary_values(&grid), &basis)
}

/// Runs the schedule and tabulates empirical averages, limits and gaps.
///
/// Rows are ordered by `n`, then mode, then test function. Each `n` is computed
/// independently and may run on a separate worker.
pub fn szego_experiment(cfg: &ExperimentConfig) -> Result<DistributionReport> {
    validate_schedule(&cfg.n_schedule)?;
    let symbol = match &cfg.symbol {
        Symbol::M1(s) => Symbol::M1(s.with_blaschke(&cfg.blaschke)),
        other => other.clone(),
    };
    let limit_grid = CircleGrid::new(LIMIT_GRID_SIZE.max(cfg.grid_size.unwrap_or(0)))?;
    if cfg.modes.contains(&SpectrumKind::Eigen) && !real_valued(&symbol, &limit_grid) {
        let max_imag = symbol.boundary_values(&limit_grid).max_imag();
        return Err(Error::NotRealValued { max_imag });
    }
    let g = limit_function(&cfg.blaschke, &symbol, &limit_grid)?;

    // limits per mode and hat
    let mut limits: Vec<(SpectrumKind, Vec<(Hat, f64)>)> = Vec::new();
    for &mode in &cfg.modes {
        let target = match mode {
            SpectrumKind::Eigen => g.map(|v| Complex64::new(v.re, 0.0)),
            SpectrumKind::Singular => g.map(|v| Complex64::new(v.norm(), 0.0)),
        };
        let family = cfg.family.clone().unwrap_or_else(|| {
            let (lo, hi) = target
                .values()
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v.re), hi.max(v.re))
                });
            TestFunctionFamily::spanning(lo, hi)
        });
        let per_hat = family
            .hats
            .par_iter()
            .map(|h| (*h, limit_integral(&target, h)))
            .collect();
        limits.push((mode, per_hat));
    }

    let per_n: Vec<Vec<DistributionRow>> = cfg
        .n_schedule
        .par_iter()
        .map(|&n| -> Result<Vec<DistributionRow>> {
            let a = compress_for(cfg, &symbol, n)?;
            let mut rows = Vec::new();
            for (mode, per_hat) in &limits {
                let spec = spectrum(&a, *mode)?;
                for &(hat, limit) in per_hat {
                    let empirical = empirical_average(&spec.values, &hat);
                    rows.push(DistributionRow {
                        n,
                        dim: a.dimension(),
                        g_center: hat.center,
                        g_width: hat.width,
                        mode: *mode,
                        empirical,
                        limit,
                        gap: (empirical - limit).abs(),
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(DistributionReport {
        rows: per_n.into_iter().flatten().collect(),
    })
}
