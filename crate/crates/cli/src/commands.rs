use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use halfplane_bvp::config::{classify, threshold, Branch, Problem, Status, WellposednessReport};
use halfplane_bvp::operators::{m_gamma, HalfLineInverse, MultiplierSymbol, OpSign};
use halfplane_bvp::solver::{
    configure, harmonic_measure_table, DirichletSolution, FieldGrid, FieldKind, GradientSolution, GridSpec, Preset,
    SolverOptions,
};
use halfplane_bvp::verify::{default_sweep, laplacian_residual, run_suite, summary_table, SuiteSpec};
use halfplane_bvp::{Error, PVQuadratureScheme};
use num_complex::Complex;

use crate::manifest::{parse_grid, Format, Settings};
use crate::output::{csv, emit, field_csv, svg_plot};
use crate::CliError;

const DEFAULT_ALPHAS: [f64; 4] = [-1.5, -0.75, 0.0, 0.75];
const DEFAULT_GRID: &str = "0.05:2:40,-3:3:60";
/// `|m_gamma|` above this is reported as a pole approach.
const LARGE_SYMBOL: f64 = 10.0;

fn no_svg(s: &Settings, command: &str) -> Result<(), CliError> {
    if s.format == Some(Format::Svg) {
        return Err(CliError::Config(format!("svg output is not available for `{command}`")));
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Harmonic measures `P_alpha(t, x; y)` over `y in [-4, 4]`.
pub fn kernel_table(s: &Settings) -> Result<(), CliError> {
    let alphas = s.alpha_list.clone().unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
    if let Some(a) = alphas.iter().find(|a| !(**a > -2.0 && **a < 1.0)) {
        return Err(Error::DomainError(format!("alpha = {a} is outside (-2, 1)")).into());
    }
    let t = s.t.unwrap_or(0.5);
    let x = s.x.unwrap_or(1.0);
    let ys: Vec<f64> = (0..=400).map(|j| -4.0 + 0.02 * j as f64).filter(|y| y.abs() > 1e-12).collect();
    let rows = harmonic_measure_table(&alphas, t, x, &ys)?;
    let out = s.out.as_deref();
    match s.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let data: Vec<[f64; 3]> = rows.iter().map(|r| [r.alpha, r.y, r.value]).collect();
            emit(out, &csv(&["alpha", "y", "P"], &data))
        }
        Format::Json => emit(out, &to_json(&rows)),
        Format::Svg => {
            let curves: Vec<(String, Vec<(f64, f64)>)> = alphas
                .iter()
                .map(|&a| {
                    let pts = rows.iter().filter(|r| r.alpha == a).map(|r| (r.y, r.value)).collect();
                    (format!("alpha = {a}"), pts)
                })
                .collect();
            emit(out, &svg_plot(&format!("P_alpha({t}, {x}; y)"), "y", "P", &curves))
        }
    }
}

#[derive(Serialize)]
struct SolveMetadata {
    problem: Problem,
    preset: Preset,
    config: halfplane_bvp::ProblemConfig,
    classification: [WellposednessReport<f64>; 2],
    notes: Vec<String>,
    residual: Residual,
    nodes: usize,
    runtime_ms: f64,
}

#[derive(Serialize)]
struct Residual {
    /// Normalized finite-difference residual of the PDE on the grid
    /// (`null` when the grid is too coarse for the stencil).
    pde: Option<f64>,
    /// Max deviation from a closed-form solution, when one is known.
    reference: Option<f64>,
}

/// Solve one boundary value problem on a grid.
pub fn solve(s: &Settings) -> Result<(), CliError> {
    let start = Instant::now();
    let problem = s.problem.unwrap_or(Problem::Dirichlet);
    let k = s.k.unwrap_or(0.0);
    let p = s.p.unwrap_or(2.0);
    let branch = s.branch.unwrap_or(Branch::LpInfBranch);
    let preset = s.preset.unwrap_or(Preset::Gaussian);
    let spec = match (&s.grid, s.t, s.x) {
        (Some(g), _, _) => parse_grid(g)?,
        (None, Some(t), Some(x)) => GridSpec::new(vec![t], vec![x])?,
        _ => parse_grid(DEFAULT_GRID)?,
    };
    let opts = SolverOptions {
        scheme: PVQuadratureScheme::from_settings(&s.quadrature)?,
        log_grid: s.log_grid.clone(),
        route: s.route,
    };
    let cfg = configure(problem, k, p, branch).map_err(not_well_posed)?;
    let data = preset.sample::<f64>();
    let grid = match problem {
        Problem::Dirichlet => DirichletSolution::new(data, &cfg, &opts).map_err(not_well_posed)?.grid(&spec)?,
        Problem::Neumann => GradientSolution::neumann(&data, &cfg, &opts).map_err(not_well_posed)?.grid(&spec)?,
        Problem::Regularity => GradientSolution::regularity(&data, &cfg, &opts).map_err(not_well_posed)?.grid(&spec)?,
    };

    let classification = classify(problem, k, p)?;
    let mut notes = Vec::new();
    if classification[0].status == Status::Fails {
        notes.push(format!(
            "the energy-sense problem is not well posed for this k (threshold {}); the field is the boundary-equation solution",
            classification[0].threshold_value
        ));
    }
    if problem == Problem::Dirichlet && branch == Branch::H1Branch && k > threshold(problem, p)? {
        notes.push("H1-branch potential: its traces need not lie in L_p for this k".into());
    }
    let reference = (problem == Problem::Dirichlet && k == 0.0 && preset == Preset::Rational).then(|| {
        // Poisson extension of 1/(pi (1 + y^2)).
        max_deviation(&grid, |t, x| (1.0 + t) / (std::f64::consts::PI * ((1.0 + t).powi(2) + x * x)))
    });
    let meta = SolveMetadata {
        problem,
        preset,
        config: cfg,
        classification,
        notes,
        residual: Residual {
            pde: pde_residual(&grid),
            reference,
        },
        nodes: spec.len(),
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    };

    let out = s.out.as_deref();
    match s.format.unwrap_or(Format::Csv) {
        Format::Json => emit(out, &to_json(&json!({ "metadata": meta, "field": grid }))),
        Format::Csv => {
            emit(out, &field_csv(&grid))?;
            write_metadata(out, &meta)
        }
        Format::Svg => {
            emit(out, &profile_svg(&grid, problem, k))?;
            write_metadata(out, &meta)
        }
    }
}

/// Thresholds surface as not-well-posed errors.
fn not_well_posed(e: Error) -> Error {
    match e {
        Error::NotInvertible { k, threshold, .. } => Error::NotWellPosed { k, threshold },
        e => e,
    }
}

/// Next to the output file as `<stem>.meta.json`, or on stderr.
fn write_metadata(out: Option<&Path>, meta: &SolveMetadata) -> Result<(), CliError> {
    let text = to_json(meta);
    match out {
        Some(p) => emit(Some(&metadata_path(p)), &text),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

pub fn metadata_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

fn max_deviation(grid: &FieldGrid<f64>, exact: impl Fn(f64, f64) -> f64) -> f64 {
    let mut m = 0.0f64;
    for (i, &t) in grid.t_levels.iter().enumerate() {
        for (j, &x) in grid.x_nodes.iter().enumerate() {
            m = m.max((grid.at(i, j)[0] - exact(t, x)).abs());
        }
    }
    m
}

fn pde_residual(grid: &FieldGrid<f64>) -> Option<f64> {
    match grid.kind {
        FieldKind::Potential => laplacian_residual(grid).ok(),
        FieldKind::Gradient => gradient_residual(grid),
    }
}

/// `F = grad U` with `U` harmonic: `d_t F0 + d_x F1 = 0` and
/// `d_x F0 - d_t F1 = 0` off the interface, by central differences,
/// relative to the largest difference quotient.
fn gradient_residual(grid: &FieldGrid<f64>) -> Option<f64> {
    let (t, x) = (&grid.t_levels, &grid.x_nodes);
    if t.len() < 3 || x.len() < 3 {
        return None;
    }
    let f = |i: usize, j: usize, c: usize| grid.at(i, j)[c];
    let (mut res, mut scale) = (0.0f64, 0.0f64);
    for i in 1..t.len() - 1 {
        for j in 1..x.len() - 1 {
            if x[j - 1].signum() != x[j + 1].signum() {
                continue;
            }
            let dt = t[i + 1] - t[i - 1];
            let dx = x[j + 1] - x[j - 1];
            let f0t = (f(i + 1, j, 0) - f(i - 1, j, 0)) / dt;
            let f1t = (f(i + 1, j, 1) - f(i - 1, j, 1)) / dt;
            let f0x = (f(i, j + 1, 0) - f(i, j - 1, 0)) / dx;
            let f1x = (f(i, j + 1, 1) - f(i, j - 1, 1)) / dx;
            res = res.max((f0t + f1x).abs()).max((f0x - f1t).abs());
            scale = scale.max(f0t.abs()).max(f1t.abs()).max(f0x.abs()).max(f1x.abs());
        }
    }
    (scale > 0.0).then(|| res / scale).or(Some(0.0))
}

fn profile_svg(grid: &FieldGrid<f64>, problem: Problem, k: f64) -> String {
    let nt = grid.t_levels.len();
    let picks: Vec<usize> = if nt <= 4 { (0..nt).collect() } else { (0..4).map(|m| m * (nt - 1) / 3).collect() };
    let label = if grid.kind == FieldKind::Potential { "U" } else { "F0" };
    let curves = picks
        .into_iter()
        .map(|i| {
            let pts = grid.x_nodes.iter().enumerate().map(|(j, &x)| (x, grid.at(i, j)[0])).collect();
            (format!("t = {}", grid.t_levels[i]), pts)
        })
        .collect::<Vec<_>>();
    svg_plot(&format!("{} solution, k = {k}", problem.name()), "x", label, &curves)
}

#[derive(Serialize)]
struct ClassRow {
    problem: Problem,
    k: f64,
    p: f64,
    threshold: f64,
    h1: Status,
    lpinf: Status,
}

/// Well-posedness over `(k, p)`.
pub fn classify_table(s: &Settings) -> Result<(), CliError> {
    no_svg(s, "classify")?;
    let ps = s.p.map(|p| vec![p]).unwrap_or_else(|| vec![1.5, 2.0, 3.0]);
    let problems = s.problem.map(|p| vec![p]).unwrap_or_else(|| Problem::ALL.to_vec());
    let mut rows = Vec::new();
    for &p in &ps {
        for &problem in &problems {
            let ks = match s.k {
                Some(k) => vec![k],
                None => {
                    // Quarter steps on [-2, 2] plus the threshold itself.
                    let mut ks: Vec<f64> = (0..=16).map(|j| -2.0 + 0.25 * j as f64).collect();
                    let th = threshold(problem, p)?;
                    if th.abs() <= 2.0 && ks.iter().all(|k| (k - th).abs() > 1e-12) {
                        ks.push(th);
                        ks.sort_by(f64::total_cmp);
                    }
                    ks
                }
            };
            for k in ks {
                let [h1, lp] = classify(problem, k, p)?;
                rows.push(ClassRow {
                    problem,
                    k,
                    p,
                    threshold: h1.threshold_value,
                    h1: h1.status,
                    lpinf: lp.status,
                });
            }
        }
    }
    let out = s.out.as_deref();
    match s.format {
        Some(Format::Json) => emit(out, &to_json(&rows)),
        Some(Format::Csv) => {
            let mut text = String::from("problem,k,p,threshold,h1,lpinf\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{:?},{:?},{:?},{:?},{:?}\n",
                    r.problem.name(),
                    r.k,
                    r.p,
                    r.threshold,
                    r.h1,
                    r.lpinf
                ));
            }
            emit(out, &text)
        }
        _ => {
            let mut text = format!(
                "{:<11} {:>8} {:>6} {:>10}  {:<10} {:<10}\n",
                "problem", "k", "p", "threshold", "H1", "LpInf"
            );
            for r in &rows {
                text.push_str(&format!(
                    "{:<11} {:>8.4} {:>6.3} {:>10.6}  {:<10} {:<10}\n",
                    r.problem.name(),
                    r.k,
                    r.p,
                    r.threshold,
                    format!("{:?}", r.h1),
                    format!("{:?}", r.lpinf)
                ));
            }
            emit(out, &text)
        }
    }
}

/// Run the verification suite. Returns the names of unexpected failures.
pub fn verify(s: &Settings) -> Result<Vec<String>, CliError> {
    no_svg(s, "verify")?;
    let sweep = match (&s.sweep, s.k, s.p) {
        (Some(sw), _, _) => sw.clone(),
        (None, None, None) => default_sweep(),
        (None, k, p) => {
            let ks = k.map(|k| vec![k]).unwrap_or_else(|| vec![0.0, 0.5, -0.5, 1.0, -1.0, 2.0]);
            let ps = p.map(|p| vec![p]).unwrap_or_else(|| vec![1.5, 2.0, 3.0]);
            ks.iter().flat_map(|&k| ps.iter().map(move |&p| (k, p))).collect()
        }
    };
    for &(_, p) in &sweep {
        halfplane_bvp::config::conjugate(p)?;
    }
    let spec = SuiteSpec {
        only: s.only.clone(),
        seed: s.seed.unwrap_or(0),
        include_energy: s.include_energy,
    };
    let reports = run_suite(&sweep, &spec);
    print!("{}", summary_table(&reports));
    if let Some(path) = s.out.as_deref() {
        let text = match s.format {
            Some(Format::Csv) => {
                let mut t = String::from("check,passed,expected_failure,measured_error,tolerance,runtime_ms,parameters,note\n");
                for r in &reports {
                    let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    t.push_str(&format!(
                        "{},{},{},{:?},{:?},{:?},{},{}\n",
                        r.check_name,
                        r.passed,
                        r.expected_failure,
                        r.measured_error,
                        r.tolerance,
                        r.runtime_ms,
                        quote(&params.join(";")),
                        quote(&r.note)
                    ));
                }
                t
            }
            _ => to_json(&reports),
        };
        emit(Some(path), &text)?;
    }
    Ok(reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| {
            let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{} [{}]: {}", r.check_name, params.join(", "), r.note)
        })
        .collect())
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// `m_gamma(xi)` on `[-10, 10]` with the product-identity residual.
pub fn spectrum(s: &Settings) -> Result<(), CliError> {
    no_svg(s, "spectrum")?;
    let k = s.k.unwrap_or(1.0);
    let p = s.p.unwrap_or(2.0);
    let inv = HalfLineInverse::new(OpSign::Minus, k, p)?;
    let gamma = s.gamma.unwrap_or(inv.alpha + 1.0 / p);
    let symbol = MultiplierSymbol::new(gamma)?;
    let one = Complex::new(1.0, 0.0);
    let rows: Vec<[f64; 4]> = (0..=2000)
        .map(|j| {
            let xi = -10.0 + 0.01 * j as f64;
            let m = symbol.eval(xi);
            let lhs = (one - m_gamma(1.0 / p, xi) * k) * (one + m_gamma(inv.alpha + 1.0 / p, xi) * k);
            [xi, m.re, m.im, (lhs - (1.0 + k * k)).norm()]
        })
        .collect();
    let big = rows.iter().filter(|r| r[1].hypot(r[2]) > LARGE_SYMBOL).count();
    if big > 0 {
        let peak = rows.iter().map(|r| r[1].hypot(r[2])).fold(0.0, f64::max);
        eprintln!("warning: |m| exceeds {LARGE_SYMBOL} at {big} nodes near xi = 0 (peak {peak:.3e}); gamma = {gamma} is close to a pole");
    }
    let out = s.out.as_deref();
    match s.format {
        Some(Format::Json) => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| json!({"xi": r[0], "re_m": r[1], "im_m": r[2], "identity_residual": r[3]}))
                .collect();
            emit(out, &to_json(&json!({"gamma": gamma, "k": k, "p": p, "alpha": inv.alpha, "rows": v})))
        }
        _ => emit(out, &csv(&["xi", "re_m", "im_m", "identity_residual"], &rows)),
    }
}
