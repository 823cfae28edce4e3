//! The invariant suite behind `szego verify`.

use crate::config::Run;
use crate::error::{CliError, CliResult};
use crate::export::{ensure_dir, write_file, Check};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use szego_core::blaschke::{compose_moebius, BlaschkeProduct};
use szego_core::compression::{block_deviation, compress_analytic, compress_quadrature, shifted_inner_product};
use szego_core::malmquist::{kernel_sample, BasisIndex, MalmquistBasis};
use szego_core::matrix::CMatrix;
use szego_core::quadrature::{default_grid_size, inner_product, CircleGrid};
use szego_core::symbol::{
    gamma_inverse_single_zero, gamma_map, gram_of_powers, change_of_variable_check, norm_bounds_check,
    CoefficientWindow, M1Symbol, SampledSymbol, Symbol, NORM_BOUND_SLACK,
};
use szego_core::Complex64;

pub const NORM_CHECK_VECTORS: usize = 100;
pub const NORM_CHECK_HALF_WINDOW: i64 = 8;
const TABLE_POWERS: i64 = 4;
const TABLE_SHIFTS: usize = 4;
const GRAM_POWERS: i64 = 4;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub grid_size: usize,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

/// Runs every check at the largest scheduled `n`.
pub fn verify_suite(run: &Run) -> CliResult<VerifyReport> {
    let b = &run.blaschke;
    let n = *run.n_schedule.last().expect("validated schedule");
    let size = run
        .grid_size
        .unwrap_or_else(|| default_grid_size(n, b.degree(), run.symbol.bandwidth()));
    let grid = CircleGrid::new(size)?;
    let mut checks = Vec::new();

    let samples = b.sample(&grid);
    let unimodular = samples.values().iter().map(|w| (w.norm() - 1.0).abs()).fold(0.0, f64::max);
    checks.push(Check::new("unimodular on circle", unimodular, 1e-12));

    let non_increasing = b.phase_increments(&grid).iter().filter(|&&d| d <= 0.0).count();
    checks.push(Check::new("phase strictly increasing", non_increasing as f64, 0.0));

    let winding = (b.winding_number(&grid) - b.degree() as f64).abs();
    checks.push(Check::new("winding number equals zero count", winding, 1e-6));

    let delta = (b.delta().value() - b.evaluate(Complex64::new(0.0, 0.0))?).norm();
    checks.push(Check::new("delta equals B(0)", delta, 1e-12));

    for zero in b.zeros() {
        let lam = zero.point;
        let mut worst = 0.0f64;
        for &z in grid.nodes() {
            worst = worst.max((compose_moebius(lam, z)? - z).norm());
        }
        checks.push(Check::new(
            &format!("moebius inverse at {}", fmt_point(lam)),
            worst,
            1e-12,
        ));
        let norm = (kernel_sample(lam, &grid)?.norm_sqr() - 1.0).abs();
        checks.push(Check::new(
            &format!("kernel norm at {}", fmt_point(lam)),
            norm,
            1e-9,
        ));
    }

    let basis = MalmquistBasis::build(b, n, &grid)?;
    let gram = basis.gram_matrix();
    let orth = gram.max_abs_diff(&CMatrix::identity(basis.dimension()));
    checks.push(Check::new("basis orthonormal", orth, 1e-9));

    let dim_err = (basis.dimension() as f64 - (n * b.degree()) as f64).abs();
    checks.push(Check::new("dimension is n times degree", dim_err, 0.0));

    let nesting = if n > 1 {
        let smaller = MalmquistBasis::build(b, n - 1, &grid)?;
        let mut worst = 0.0f64;
        for flat in 0..smaller.dimension() {
            let idx: BasisIndex = smaller.index_of(flat);
            let other = basis.element(basis.flat_index(idx)?);
            worst = worst.max(smaller.element(flat).max_abs_diff(other)?);
        }
        worst
    } else {
        0.0
    };
    checks.push(Check::new("bases nested in n", nesting, 1e-12));

    checks.push(Check::new("shifted basis inner products", shifted_inner_product_table(b, &grid)?, 1e-9));

    match &run.symbol {
        Symbol::M1(s) => {
            let s = s.with_blaschke(b);
            let quad = compress_quadrature(&Symbol::M1(s.clone()).boundary_values(&grid), &basis)?;
            let analytic = compress_analytic(&s, n)?;
            let agree = quad.matrix().max_abs_diff(analytic.matrix());
            checks.push(Check::new("analytic and quadrature paths agree", agree, 1e-8));
            let dev = block_deviation(&quad);
            checks.push(Check::new("off-diagonal blocks vanish", dev.offdiag, 1e-9));
            checks.push(Check::new("diagonal blocks coincide", dev.blockspread, 1e-9));
        }
        _ => checks.push(Check::skipped("analytic and quadrature paths agree")),
    }

    let gram_err = powers_gram_error(b, &grid)?;
    checks.push(Check::new("gram of B powers", gram_err, 1e-9));

    checks.push(norm_bounds(b, &grid, run.seed));

    let l9 = change_of_variable_worst(b, &grid);
    checks.push(Check::new("change of variable inequality", l9, 1e-9));

    match b.single_simple_zero() {
        Some(lam) => {
            checks.push(Check::new("inverse of gamma for one zero", gamma_inverse_error(b, lam, &grid)?, 1e-9));
        }
        None => checks.push(Check::skipped("inverse of gamma for one zero")),
    }

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        n,
        grid_size: size,
        checks,
        all_pass,
    })
}

fn fmt_point(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Worst deviation of `⟨B^{t+i} e_j^r, B^l e_k^s⟩` from `δ_{t+i,l} δ_{jk} δ_{rs}`.
fn shifted_inner_product_table(b: &BlaschkeProduct, grid: &CircleGrid) -> CliResult<f64> {
    let pairs: Vec<(usize, usize)> = b
        .zeros()
        .iter()
        .enumerate()
        .flat_map(|(j, z)| (0..z.multiplicity).map(move |r| (j, r)))
        .collect();
    let mut cases = Vec::new();
    for t in -TABLE_POWERS..=TABLE_POWERS {
        for i in 0..TABLE_SHIFTS {
            for l in 0..TABLE_SHIFTS {
                for &p in &pairs {
                    for &q in &pairs {
                        cases.push((t, i, l, p, q));
                    }
                }
            }
        }
    }
    let worst = cases
        .par_iter()
        .map(|&(t, i, l, p, q)| -> szego_core::Result<f64> {
            let got = shifted_inner_product(b, i, l, t, p, q, grid)?;
            let want = if t + i as i64 == l as i64 && p == q { 1.0 } else { 0.0 };
            Ok((got - want).norm())
        })
        .collect::<szego_core::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(worst)
}

fn powers_gram_error(b: &BlaschkeProduct, grid: &CircleGrid) -> CliResult<f64> {
    let closed = gram_of_powers(b, -GRAM_POWERS, GRAM_POWERS);
    let powers: Vec<_> = (-GRAM_POWERS..=GRAM_POWERS).map(|t| b.sample_power(grid, t)).collect();
    let mut worst = 0.0f64;
    for (row, p) in powers.iter().enumerate() {
        for (col, q) in powers.iter().enumerate() {
            worst = worst.max((inner_product(p, q)? - closed[(row, col)]).norm());
        }
    }
    Ok(worst)
}

/// Largest ratio across the three norm inequalities over seeded random windows;
/// passes when no ratio exceeds `1 + slack`.
pub fn norm_bounds_ratio(b: &BlaschkeProduct, grid: &CircleGrid, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = b.delta().modulus();
    let mut worst = 0.0f64;
    for _ in 0..NORM_CHECK_VECTORS {
        let coeffs = (0..2 * NORM_CHECK_HALF_WINDOW + 1)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let s = M1Symbol::new(b, CoefficientWindow::new(-NORM_CHECK_HALF_WINDOW, coeffs));
        let nb = norm_bounds_check(&s, grid);
        let image = gamma_map(&s, grid).norm_sqr();
        let upper = 2.0 * nb.mid / (1.0 - delta);
        worst = worst
            .max(nb.lhs / nb.mid)
            .max(nb.mid / nb.rhs)
            .max(image / upper);
    }
    worst
}

fn norm_bounds(b: &BlaschkeProduct, grid: &CircleGrid, seed: u64) -> Check {
    let worst = norm_bounds_ratio(b, grid, seed);
    Check::new("norm equivalence of gamma", worst, 1.0 + NORM_BOUND_SLACK)
}

/// The three test densities `|ξ-1|²`, `1 + Re ξ` and `|k_{0.3}|²`.
pub fn change_of_variable_densities() -> [fn(Complex64) -> f64; 3] {
    [
        |z| (z - 1.0).norm_sqr(),
        |z| 1.0 + z.re,
        |z| (1.0 - 0.09) / (1.0 - 0.3 * z).norm_sqr(),
    ]
}

/// Largest `∫h - ∫(h∘B)|B'|` over the test densities.
pub fn change_of_variable_worst(b: &BlaschkeProduct, grid: &CircleGrid) -> f64 {
    change_of_variable_densities()
        .iter()
        .map(|h| {
            let c = change_of_variable_check(h, b, grid);
            c.plain - c.composed
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Recovers `Σ a_t z^t` from `Σ a_t b_λ^t` for a fixed window and reports the error.
fn gamma_inverse_error(b: &BlaschkeProduct, lam: Complex64, grid: &CircleGrid) -> CliResult<f64> {
    let window = CoefficientWindow::new(
        -2,
        vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, -0.2),
            Complex64::new(-0.4, 0.0),
            Complex64::new(0.2, 0.3),
        ],
    );
    let s = M1Symbol::new(b, window);
    let f = SampledSymbol::new(gamma_map(&s, grid));
    let recovered = gamma_inverse_single_zero(lam, &f)?;
    let want = s.representative().sample(grid);
    Ok(recovered.values().max_abs_diff(&want)?)
}

pub fn cmd_verify(run: &Run) -> CliResult<()> {
    let report = verify_suite(run)?;
    println!("verify: n = {}, grid = {}", report.n, report.grid_size);
    println!("{}", crate::export::check_table(&report.checks));
    ensure_dir(&run.output)?;
    write_file(&run.output.join("verify.csv"), &crate::export::checks_csv(&report.checks))?;
    write_file(&run.output.join("verify.json"), &crate::export::to_json(&report)?)?;
    if report.all_pass {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        Err(CliError::Check(format!("failed checks: {}", failed.join(", "))))
    }
}
