//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use szego_cli::commands::verify::{change_of_variable_worst, norm_bounds_ratio, NORM_CHECK_HALF_WINDOW, NORM_CHECK_VECTORS};
use szego_core::blaschke::{compose_moebius, BlaschkeProduct};
use szego_core::compression::{
    block_deviation, compress_analytic, compress_quadrature, shifted_inner_product, toeplitz_from_window,
};
use szego_core::malmquist::MalmquistBasis;
use szego_core::matrix::CMatrix;
use szego_core::quadrature::{default_grid_size, CircleGrid, GridFunction};
use szego_core::spectral::{
    empirical_average, limit_integral, szego_experiment, DistributionReport, ExperimentConfig, Hat,
    PathChoice, SpectrumKind, TestFunctionFamily, LIMIT_GRID_SIZE,
};
use szego_core::symbol::{
    gamma_map, gram_of_powers, CoefficientWindow, FourierSymbol, M1Symbol, SampledSymbol, Symbol,
    NORM_BOUND_SLACK,
};
use szego_core::Complex64;

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn three_zero() -> BlaschkeProduct {
    BlaschkeProduct::new([(c(0.5, 0.0), 1), (c(-0.3, 0.4), 2)]).unwrap()
}

fn half() -> BlaschkeProduct {
    BlaschkeProduct::single(c(0.5, 0.0), 1).unwrap()
}

fn five_term_window() -> CoefficientWindow {
    CoefficientWindow::new(-2, [0.3, 1.0, 0.5, 1.0, 0.3].iter().map(|&a| c(a, 0.0)).collect())
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn orthonormality() -> Outcome {
    let start = Instant::now();
    let grid = CircleGrid::new(8192).map_err(err)?;
    let basis = MalmquistBasis::build(&three_zero(), 6, &grid).map_err(err)?;
    let dev = basis.gram_matrix().max_abs_diff(&CMatrix::identity(basis.dimension()));
    let elapsed = start.elapsed();
    Ok((
        basis.dimension() == 18 && dev <= 1e-9 && elapsed <= Duration::from_secs(5),
        format!("dim {}, max |G - I| = {dev:.2e} (<= 1e-9), {:.2} s (<= 5 s)", basis.dimension(), elapsed.as_secs_f64()),
    ))
}

fn shifted_inner_products() -> Outcome {
    let b = three_zero();
    let grid = CircleGrid::new(8192).map_err(err)?;
    let pairs = [(0, 0), (1, 0), (1, 1)];
    let mut worst = 0.0f64;
    let mut count = 0;
    for t in -4i64..=4 {
        for i in 0..4usize {
            for l in 0..4usize {
                for &p in &pairs {
                    for &q in &pairs {
                        let got = shifted_inner_product(&b, i, l, t, p, q, &grid).map_err(err)?;
                        let want = if t + i as i64 == l as i64 && p == q { 1.0 } else { 0.0 };
                        worst = worst.max((got - want).norm());
                        count += 1;
                    }
                }
            }
        }
    }
    Ok((worst <= 1e-9, format!("{count} entries, max error {worst:.2e} (<= 1e-9)")))
}

fn path_agreement() -> Outcome {
    let b = three_zero();
    let n = 5;
    let s = M1Symbol::new(&b, five_term_window());
    let grid = CircleGrid::new(default_grid_size(n, b.degree(), Symbol::M1(s.clone()).bandwidth())).map_err(err)?;
    let basis = MalmquistBasis::build(&b, n, &grid).map_err(err)?;
    let quad = compress_quadrature(&gamma_map(&s, &grid), &basis).map_err(err)?;
    let analytic = compress_analytic(&s, n).map_err(err)?;
    let agree = quad.matrix().max_abs_diff(analytic.matrix());
    let dev = block_deviation(&quad);
    Ok((
        agree <= 1e-8 && dev.offdiag <= 1e-9 && dev.blockspread <= 1e-9,
        format!(
            "paths {agree:.2e} (<= 1e-8), off-diagonal {:.2e} (<= 1e-9), block spread {:.2e} (<= 1e-9)",
            dev.offdiag, dev.blockspread
        ),
    ))
}

fn classical_reduction() -> Outcome {
    let b = BlaschkeProduct::identity();
    let window = CoefficientWindow::new(
        -3,
        vec![c(0.1, -0.2), c(-0.5, 0.3), c(1.0, 0.0), c(2.0, 0.5), c(0.7, -0.1), c(0.0, 0.4), c(-0.25, 0.0)],
    );
    let symbol = FourierSymbol::new(window.clone());
    let mut worst = 0.0f64;
    for n in 1..=64 {
        let grid = CircleGrid::new(default_grid_size(n, 1, 3)).map_err(err)?;
        let basis = MalmquistBasis::build(&b, n, &grid).map_err(err)?;
        let quad = compress_quadrature(&symbol.sample(&grid), &basis).map_err(err)?;
        worst = worst.max(quad.matrix().max_abs_diff(&toeplitz_from_window(&window, n)));
    }
    Ok((worst <= 1e-10, format!("n = 1..64, max deviation {worst:.2e} (<= 1e-10)")))
}

fn classical_limit() -> Outcome {
    let start = Instant::now();
    let n = 512;
    let hat = Hat::new(0.0, 1.0);
    let b = BlaschkeProduct::identity();
    let window = CoefficientWindow::new(-1, vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let cfg = ExperimentConfig {
        blaschke: b.clone(),
        symbol: Symbol::M1(M1Symbol::new(&b, window)),
        n_schedule: vec![n],
        modes: vec![SpectrumKind::Eigen],
        family: Some(TestFunctionFamily { hats: vec![hat] }),
        grid_size: None,
        path: PathChoice::Auto,
    };
    let report = szego_experiment(&cfg).map_err(err)?;
    let row = &report.rows[0];
    let closed_eigs: Vec<f64> = (1..=n).map(|k| 2.0 * (k as f64 * PI / (n as f64 + 1.0)).cos()).collect();
    let closed_empirical = empirical_average(&closed_eigs, &hat);
    // mean of max(0, 1 - |2 cos θ|) over the circle
    let closed_limit = 1.0 / 3.0 - 2.0 / PI * (2.0 - 3f64.sqrt());
    let elapsed = start.elapsed();
    let ok = row.gap <= 0.01
        && (row.empirical - closed_empirical).abs() <= 1e-9
        && (row.limit - closed_limit).abs() <= 1e-6
        && elapsed <= Duration::from_secs(30);
    Ok((
        ok,
        format!(
            "gap {:.2e} (<= 0.01), empirical vs closed-form eigenvalues {:.1e}, limit vs closed form {:.1e}, {:.2} s (<= 30 s)",
            row.gap,
            (row.empirical - closed_empirical).abs(),
            (row.limit - closed_limit).abs(),
            elapsed.as_secs_f64()
        ),
    ))
}

fn multiplicity_reduction() -> Outcome {
    let run = |b: BlaschkeProduct| -> Result<DistributionReport, String> {
        let cfg = ExperimentConfig {
            symbol: Symbol::M1(M1Symbol::new(&b, five_term_window())),
            blaschke: b,
            n_schedule: vec![16, 32, 64, 128],
            modes: vec![SpectrumKind::Eigen, SpectrumKind::Singular],
            family: None,
            grid_size: None,
            path: PathChoice::Quadrature,
        };
        szego_experiment(&cfg).map_err(err)
    };
    let two = run(three_zero())?;
    let one = run(BlaschkeProduct::identity())?;
    if two.rows.len() != one.rows.len() || two.rows.is_empty() {
        return Ok((false, format!("row counts differ: {} vs {}", two.rows.len(), one.rows.len())));
    }
    let mut worst = 0.0f64;
    let mut keys_match = true;
    for (a, b) in two.rows.iter().zip(&one.rows) {
        keys_match &= a.n == b.n && a.mode == b.mode && a.g_center == b.g_center && a.g_width == b.g_width;
        keys_match &= a.dim == 3 * b.dim;
        worst = worst.max((a.gap - b.gap).abs());
    }
    Ok((
        keys_match && worst <= 1e-9,
        format!("{} rows, eigen and singular, max gap difference {worst:.2e} (<= 1e-9)", two.rows.len()),
    ))
}

fn single_zero_convergence() -> Outcome {
    let b = half();
    let samples = CircleGrid::new(1024).map_err(err)?.sample(|z| c(z.re, 0.0));
    let centers = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let cfg = ExperimentConfig {
        blaschke: b,
        symbol: Symbol::Sampled(SampledSymbol::new(samples)),
        n_schedule: vec![16, 32, 64, 128, 256],
        modes: vec![SpectrumKind::Eigen],
        family: Some(TestFunctionFamily::grid(&centers, &[0.5])),
        grid_size: None,
        path: PathChoice::Auto,
    };
    let report = szego_experiment(&cfg).map_err(err)?;
    // limit from the closed form cos(arg b_{-1/2}(ξ)) = Re b_{-1/2}(ξ)
    let grid = CircleGrid::new(LIMIT_GRID_SIZE).map_err(err)?;
    let g: GridFunction = grid.sample(|z| c(((z + 0.5) / (1.0 + 0.5 * z)).re, 0.0));
    let mut ok = true;
    let mut worst_last = 0.0f64;
    let mut worst_limit = 0.0f64;
    for &center in &centers {
        let hat = Hat::new(center, 0.5);
        let series = report.series(SpectrumKind::Eigen, hat);
        let (first, last) = (series[0].1, series[series.len() - 1].1);
        ok &= series.len() == 5 && last <= 0.05 && last < first;
        worst_last = worst_last.max(last);
        let want = limit_integral(&g, &hat);
        for r in report.rows.iter().filter(|r| r.g_center == center) {
            worst_limit = worst_limit.max((r.limit - want).abs());
        }
    }
    ok &= worst_limit <= 1e-9;
    Ok((
        ok,
        format!("max gap(256) {worst_last:.2e} (<= 0.05), gap(256) < gap(16) for all hats, limit vs closed form {worst_limit:.1e}"),
    ))
}

fn norm_equivalence() -> Outcome {
    let grid = CircleGrid::new(8192).map_err(err)?;
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, b) in [("b_1/2", half()), ("three-zero", three_zero())] {
        let ratio = norm_bounds_ratio(&b, &grid, 2024);
        ok &= ratio <= 1.0 + NORM_BOUND_SLACK;
        // independent check of ‖Γa‖² against the power Gram quadratic form
        let coeffs: Vec<Complex64> = (-NORM_CHECK_HALF_WINDOW..=NORM_CHECK_HALF_WINDOW)
            .map(|t| c((0.37 * t as f64).sin(), (0.11 * t as f64).cos()))
            .collect();
        let s = M1Symbol::new(&b, CoefficientWindow::new(-NORM_CHECK_HALF_WINDOW, coeffs.clone()));
        let gram = gram_of_powers(&b, -NORM_CHECK_HALF_WINDOW, NORM_CHECK_HALF_WINDOW);
        let quad_form: Complex64 = (0..coeffs.len())
            .flat_map(|r| (0..coeffs.len()).map(move |k| (r, k)))
            .map(|(r, k)| coeffs[r] * coeffs[k].conj() * gram[(r, k)])
            .sum();
        let image = gamma_map(&s, &grid).norm_sqr();
        let rel = (image - quad_form.re).abs() / image;
        ok &= rel <= 1e-9;
        parts.push(format!("{name}: worst ratio {ratio:.6} (<= 1 + 1e-8), quadratic form {rel:.1e}"));
    }
    Ok((ok, format!("{NORM_CHECK_VECTORS} vectors each; {}", parts.join("; "))))
}

fn change_of_variable() -> Outcome {
    let grid = CircleGrid::new(8192).map_err(err)?;
    let a = change_of_variable_worst(&half(), &grid);
    let b = change_of_variable_worst(&three_zero(), &grid);
    Ok((
        a <= 1e-9 && b <= 1e-9,
        format!("max (plain - composed): b_1/2 {a:.2e}, three-zero {b:.2e} (<= 1e-9)"),
    ))
}

fn moebius_inverse() -> Outcome {
    let grid = CircleGrid::new(8192).map_err(err)?;
    let mut worst = 0.0f64;
    for lam in [c(0.5, 0.0), c(0.3, 0.4), c(-0.9, 0.0)] {
        for &z in grid.nodes() {
            worst = worst.max((compose_moebius(lam, z).map_err(err)? - z).norm());
        }
    }
    Ok((worst <= 1e-12, format!("max |b_l(b_-l(z)) - z| = {worst:.2e} (<= 1e-12)")))
}

fn winding() -> Outcome {
    let grid = CircleGrid::new(8192).map_err(err)?;
    let cases: Vec<Vec<(Complex64, usize)>> = vec![
        vec![(c(0.5, 0.0), 1)],
        vec![(c(0.5, 0.0), 1), (c(-0.3, 0.4), 2)],
        vec![(c(0.0, 0.0), 3)],
        vec![(c(0.0, 0.9), 2), (c(-0.6, 0.0), 1)],
        vec![(c(0.2, -0.7), 1), (c(0.95, 0.0), 1), (c(-0.4, -0.4), 3)],
    ];
    let mut worst = 0.0f64;
    for zeros in cases {
        let b = BlaschkeProduct::new(zeros).map_err(err)?;
        worst = worst.max((b.winding_number(&grid) - b.degree() as f64).abs());
    }
    Ok((worst <= 1e-6, format!("five products, max |winding - degree| = {worst:.2e} (<= 1e-6)")))
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .map_err(err)?
        .map(|e| {
            let e = e.map_err(err)?;
            Ok((e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).map_err(err)?))
        })
        .collect::<Result<_, String>>()?;
    files.sort();
    Ok(files)
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(err)?;
    let config = tmp.path().join("run.json");
    std::fs::write(
        &config,
        r#"{
  "blaschke": [[0.5, 0, 1], [-0.3, 0.4, 2]],
  "symbol": {"type": "m1", "t_min": -2, "coefficients": [{"re": 0.3}, {"re": 1}, {"re": 0.5}, {"re": 1}, {"re": 0.3}]},
  "n_schedule": [4, 8, 16],
  "mode": "both",
  "path": "quadrature",
  "seed": 11
}"#,
    )
    .map_err(err)?;
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2"].iter().enumerate() {
        let out = tmp.path().join(format!("out{i}"));
        let status = Command::new(env!("CARGO_BIN_EXE_szego"))
            .args(["szego", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .env("SZEGO_THREADS", threads)
            .output()
            .map_err(err)?;
        if !status.status.success() {
            return Ok((false, format!("run {i} exited with {:?}", status.status.code())));
        }
        outputs.push(read_dir_sorted(&out)?);
    }
    let names: Vec<&str> = outputs[0].iter().map(|(n, _)| n.as_str()).collect();
    Ok((
        outputs[0] == outputs[1] && names.len() >= 4,
        format!("two runs, files {} byte-identical: {}", names.join(", "), outputs[0] == outputs[1]),
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("orthonormal basis", orthonormality),
        ("shifted basis inner products", shifted_inner_products),
        ("analytic and quadrature compressions agree", path_agreement),
        ("identity product gives the Toeplitz matrix", classical_reduction),
        ("classical eigenvalue distribution", classical_limit),
        ("multiplicity reduction to the identity product", multiplicity_reduction),
        ("single-zero distribution convergence", single_zero_convergence),
        ("norm equivalence of power expansions", norm_equivalence),
        ("change of variable inequality", change_of_variable),
        ("moebius inverse", moebius_inverse),
        ("winding number", winding),
        ("deterministic outputs", determinism),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.2} s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
