//! `szego matrix`: the compressed matrix at the largest scheduled `n`.

use crate::config::Run;
use crate::error::CliResult;
use crate::export::{ensure_dir, matrix_csv, matrix_json, to_json, write_file};
use serde::Serialize;
use szego_core::compression::{
    block_deviation, compress_analytic, compress_quadrature, BlockDeviation, CompressedMatrix,
};
use szego_core::malmquist::MalmquistBasis;
use szego_core::quadrature::{default_grid_size, CircleGrid};
use szego_core::symbol::Symbol;

#[derive(Debug, Clone, Serialize)]
pub struct MatrixDiagnostics {
    pub n: usize,
    pub dimension: usize,
    pub grid_size: usize,
    /// Max entrywise difference between the two paths, when both exist.
    pub path_agreement: Option<f64>,
    pub block_deviation: BlockDeviation,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct MatrixOutput {
    pub quadrature: CompressedMatrix,
    pub analytic: Option<CompressedMatrix>,
    pub diagnostics: MatrixDiagnostics,
}

pub fn build_matrices(run: &Run) -> CliResult<MatrixOutput> {
    let b = &run.blaschke;
    let n = *run.n_schedule.last().expect("validated schedule");
    let symbol = match &run.symbol {
        Symbol::M1(s) => Symbol::M1(s.with_blaschke(b)),
        other => other.clone(),
    };
    let size = run
        .grid_size
        .unwrap_or_else(|| default_grid_size(n, b.degree(), symbol.bandwidth()));
    let grid = CircleGrid::new(size)?;
    let basis = MalmquistBasis::build(b, n, &grid)?;
    let quadrature = compress_quadrature(&symbol.boundary_values(&grid), &basis)?;
    let (analytic, note) = match &symbol {
        Symbol::M1(s) => (Some(compress_analytic(s, n)?), None),
        other => (
            None,
            Some(format!(
                "analytic path unavailable for a {} symbol; only the quadrature matrix was written",
                other.kind()
            )),
        ),
    };
    let path_agreement = analytic
        .as_ref()
        .map(|a| a.matrix().max_abs_diff(quadrature.matrix()));
    let diagnostics = MatrixDiagnostics {
        n,
        dimension: quadrature.dimension(),
        grid_size: size,
        path_agreement,
        block_deviation: block_deviation(&quadrature),
        note,
    };
    Ok(MatrixOutput {
        quadrature,
        analytic,
        diagnostics,
    })
}

pub fn cmd_matrix(run: &Run) -> CliResult<()> {
    let out = build_matrices(run)?;
    ensure_dir(&run.output)?;
    write_file(&run.output.join("matrix_quadrature.csv"), &matrix_csv(&out.quadrature))?;
    write_file(&run.output.join("matrix_quadrature.json"), &matrix_json(&out.quadrature)?)?;
    if let Some(a) = &out.analytic {
        write_file(&run.output.join("matrix_analytic.csv"), &matrix_csv(a))?;
        write_file(&run.output.join("matrix_analytic.json"), &matrix_json(a)?)?;
    }
    write_file(&run.output.join("diagnostics.json"), &to_json(&out.diagnostics)?)?;
    let d = &out.diagnostics;
    println!("matrix: n = {}, dimension = {}, grid = {}", d.n, d.dimension, d.grid_size);
    if let Some(agree) = d.path_agreement {
        println!("path agreement (max |analytic - quadrature|): {agree:.3e}");
    }
    println!(
        "block deviation: offdiag {:.3e}, blockspread {:.3e}, toeplitzspread {:.3e}",
        d.block_deviation.offdiag, d.block_deviation.blockspread, d.block_deviation.toeplitzspread
    );
    if let Some(note) = &d.note {
        println!("note: {note}");
    }
    Ok(())
}
