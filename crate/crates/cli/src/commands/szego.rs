//! `szego szego`: the distribution experiment, its report and gap charts.

use crate::config::Run;
use crate::error::{CliError, CliResult};
use crate::export::{ensure_dir, to_json, write_file};
use crate::svg::{gap_chart, Series};
use szego_core::spectral::{szego_experiment, DistributionReport, ExperimentConfig};

pub fn experiment_config(run: &Run) -> ExperimentConfig {
    ExperimentConfig {
        blaschke: run.blaschke.clone(),
        symbol: run.symbol.clone(),
        n_schedule: run.n_schedule.clone(),
        modes: run.modes.clone(),
        family: run.family.clone(),
        grid_size: run.grid_size,
        path: run.path,
    }
}

/// File names and contents, in write order.
pub fn render_outputs(report: &DistributionReport) -> CliResult<Vec<(String, String)>> {
    let mut files = vec![
        ("report.csv".to_string(), report.to_csv()),
        ("report.json".to_string(), to_json(report)?),
    ];
    let keys = report.series_keys();
    let mut modes: Vec<_> = keys.iter().map(|(m, _)| *m).collect();
    modes.dedup();
    for mode in modes {
        let series: Vec<Series> = keys
            .iter()
            .filter(|(m, _)| *m == mode)
            .map(|&(m, hat)| Series {
                label: format!("c = {}, w = {}", hat.center, hat.width),
                points: report
                    .series(m, hat)
                    .into_iter()
                    .map(|(n, g)| (n as f64, g))
                    .collect(),
            })
            .collect();
        files.push((
            format!("gap_{mode}.svg"),
            gap_chart(&format!("{mode} gap against n"), &series),
        ));
    }
    Ok(files)
}

pub fn cmd_szego(run: &Run) -> CliResult<()> {
    let report = szego_experiment(&experiment_config(run))?;
    ensure_dir(&run.output)?;
    for (name, contents) in render_outputs(&report)? {
        write_file(&run.output.join(name), &contents)?;
    }
    let summaries = report.convergence();
    println!("{:<8}  {:>8}  {:>6}  {:>12}  {:>12}  trend", "mode", "center", "width", "first gap", "last gap");
    for s in &summaries {
        println!(
            "{:<8}  {:>8.3}  {:>6.3}  {:>12.3e}  {:>12.3e}  {}",
            s.mode.to_string(),
            s.hat.center,
            s.hat.width,
            s.first_gap,
            s.last_gap,
            if s.trend_ok { "ok" } else { "up" }
        );
    }
    if let Some(threshold) = run.gap_threshold {
        let failing: Vec<String> = summaries
            .iter()
            .filter(|s| !s.below(threshold) || !s.trend_ok)
            .map(|s| format!("{} hat({}, {})", s.mode, s.hat.center, s.hat.width))
            .collect();
        if !failing.is_empty() {
            return Err(CliError::Check(format!(
                "convergence check failed (threshold {threshold}) for {}",
                failing.join(", ")
            )));
        }
    }
    Ok(())
}
