//! The verification sweep.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    continuity_check, dirichlet_far_field_decay, energy_scaling, nontangential_max, pde_residual_order,
    tail_exponent, tail_in_lp, trace_norm_sequence, transmission_check, NTVariant,
};
use super::dunford::{dunford_extension, dunford_hilbert_gaussian, dunford_reconstruction, dunford_scalar_identity};
use super::identities::*;
use super::report::{timed, VerificationReport};
use crate::config::{k_of_alpha, Branch, Problem};
use crate::ProblemConfig;
use crate::error::Result;
use crate::operators::{BoundarySample, BoundaryVectorField};
use crate::PVQuadratureScheme;
use crate::solver::{configure, DirichletSolution, GridSpec, Preset, SolverOptions};

/// Sweep options.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteSpec {
    /// Run only the checks with this name.
    pub only: Option<String>,
    /// Seed for the randomized test fields.
    pub seed: u64,
    /// Include the energy-scaling checks (the slowest in the suite).
    pub include_energy: bool,
}

/// `k in {0, +-0.5, +-1, 2}` times `p in {3/2, 2, 3}`.
pub fn default_sweep() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &k in &[0.0, 0.5, -0.5, 1.0, -1.0, 2.0] {
        for &p in &[1.5, 2.0, 3.0] {
            out.push((k, p));
        }
    }
    out
}

type Job = (&'static str, Box<dyn Fn() -> VerificationReport + Send + Sync>);

fn job<F>(name: &'static str, params: Vec<(&'static str, String)>, tol: f64, f: F) -> Job
where
    F: Fn() -> Result<VerificationReport> + Send + Sync + 'static,
{
    (name, Box::new(move || timed(name, &params, tol, &f)))
}

fn dirichlet(alpha: f64, p: f64, branch: Branch, u: BoundarySample<f64>) -> Result<DirichletSolution<f64>> {
    let cfg = ProblemConfig {
        k: k_of_alpha(alpha),
        p,
        q: p / (p - 1.0),
        branch,
        alpha,
    };
    DirichletSolution::new(u, &cfg, &SolverOptions::default())
}

fn per_config_jobs(k: f64, p: f64, jobs: &mut Vec<Job>) {
    let kp = || vec![("k", k.to_string()), ("p", p.to_string())];
    if !at_threshold(Problem::Regularity, k, p) {
        jobs.push(job("multiplier-identity", kp(), 1e-12, move || multiplier_identity(k, p)));
        jobs.push(job("inverse-round-trip", kp(), 1e-4, move || inverse_round_trip_report(k, p, None)));
    }
    for problem in Problem::ALL {
        if at_threshold(problem, k, p) {
            let name: &'static str = match problem {
                Problem::Dirichlet => "dirichlet-threshold",
                Problem::Neumann => "neumann-threshold",
                Problem::Regularity => "regularity-threshold",
            };
            jobs.push((name, Box::new(move || {
                let start = std::time::Instant::now();
                let mut r = threshold_expectation(problem, k, p);
                r.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
                r
            })));
            continue;
        }
        match problem {
            Problem::Dirichlet => jobs.push(job("dirichlet-routes", kp(), 1e-4, move || {
                dirichlet_routes(k, p, Branch::LpInfBranch)
            })),
            Problem::Neumann => jobs.push(job("neumann-trace", kp(), 2e-3, move || {
                gradient_trace(Problem::Neumann, k, p)
            })),
            Problem::Regularity => jobs.push(job("regularity-trace", kp(), 2e-3, move || {
                gradient_trace(Problem::Regularity, k, p)
            })),
        }
    }
}

fn global_jobs(spec: &SuiteSpec, jobs: &mut Vec<Job>) {
    let none = Vec::new;
    jobs.push(job("residue-lemma", none(), 1e-6, || residue_sweep(&PVQuadratureScheme::default())));
    jobs.push(job("quadrant-identity", none(), 1e-6, || quadrant_sweep(&PVQuadratureScheme::default())));
    for &a in &[-1.5, -0.75, 0.4] {
        jobs.push(job("axis-formula", vec![("alpha", a.to_string())], 1e-12, move || axis_formula(a)));
    }
    for &a in &[-0.9, -0.5, 0.0, 0.5, 0.9] {
        jobs.push(job("kernel-positivity", vec![("alpha", a.to_string())], 1e-12, move || {
            positivity_scan(a)
        }));
    }
    jobs.push(job("kernel-negative-witness", vec![("alpha", "-1.3".into())], 0.5, || {
        negative_witness(-1.3)
    }));
    jobs.push(job("axis-blowup", vec![("alpha", "-1.3".into())], 0.05, || {
        axis_blowup(-1.3, 2.0, &PVQuadratureScheme::default())
    }));
    jobs.push(job("dirichlet-classical", none(), 1e-8, || {
        dirichlet_classical(&PVQuadratureScheme::default())
    }));

    // PDE certification at k = 1 on both branches.
    let pts: Vec<(f64, f64)> = [0.3, 0.6, 0.9]
        .iter()
        .flat_map(|&t| [-0.9, -0.6, -0.3, 0.3, 0.6, 0.9].map(move |x| (t, x)))
        .collect();
    for &(p, branch) in &[(2.0, Branch::H1Branch), (1.5, Branch::LpInfBranch)] {
        let pts = pts.clone();
        let b = if branch == Branch::H1Branch { "h1" } else { "lpinf" };
        jobs.push(job("pde-residual-order", vec![("branch", b.into())], 0.3, move || {
            let cfg = configure(Problem::Dirichlet, 1.0, p, branch)?;
            let sol = DirichletSolution::new(Preset::Gaussian.sample(), &cfg, &SolverOptions::default())?;
            Ok(pde_residual_order(&|t, x| sol.value(t, x), &cfg, &pts, 0.1)?.param("branch", b))
        }));
    }
    let ts = [0.2, 0.5, 1.0];
    jobs.push(job("transmission", none(), 1e-3, move || {
        let cfg = configure(Problem::Dirichlet, 1.0, 2.0, Branch::H1Branch)?;
        let sol = DirichletSolution::new(Preset::Bump.sample(), &cfg, &SolverOptions::default())?;
        transmission_check(&|t, x| sol.value(t, x), &cfg, &ts, 1e-3)
    }));
    jobs.push(job("transmission", vec![("k", "0".into())], 1e-3, move || {
        let cfg = configure(Problem::Dirichlet, 0.0, 2.0, Branch::H1Branch)?;
        let sol = DirichletSolution::new(Preset::Bump.sample(), &cfg, &SolverOptions::default())?;
        transmission_check(&|t, x| sol.value(t, x), &cfg, &ts, 1e-3)
    }));
    jobs.push(job("continuity", none(), 1e-8, move || {
        let cfg = configure(Problem::Dirichlet, 1.0, 2.0, Branch::H1Branch)?;
        let sol = DirichletSolution::new(Preset::Bump.sample(), &cfg, &SolverOptions::default())?;
        continuity_check(&|t, x| sol.value(t, x), &cfg, &ts, 1e-10)
    }));

    // Dunford reconstructions on a seeded Gaussian pair.
    let mut rng = StdRng::seed_from_u64(spec.seed);
    let c0: f64 = rng.gen_range(-0.5..0.5);
    let w0: f64 = rng.gen_range(0.7..1.4);
    let c1: f64 = rng.gen_range(-0.5..0.5);
    let x0: f64 = rng.gen_range(0.2..1.2);
    let field = move || {
        BoundaryVectorField::new(
            BoundarySample::from_fn(move |y: f64| (-((y - c0) / w0).powi(2)).exp()),
            BoundarySample::from_fn(move |y: f64| 0.5 * (-(y - c1).powi(2)).exp()),
        )
    };
    let seed = vec![("seed", spec.seed.to_string())];
    jobs.push(job("dunford-scalar", none(), 1e-10, || Ok(dunford_scalar_identity(1.0, 1.0))));
    jobs.push(job("dunford-hilbert-gaussian", none(), 1e-3, || {
        dunford_hilbert_gaussian(0.7, &PVQuadratureScheme::default())
    }));
    for &k in &[0.5, -1.5] {
        let mut params = seed.clone();
        params.push(("k", k.to_string()));
        jobs.push(job("dunford-sgn", params.clone(), 1e-3, move || {
            let cfg = configure(Problem::Dirichlet, k, 2.0, Branch::H1Branch)?;
            Ok(dunford_reconstruction(&field(), x0, &cfg, &PVQuadratureScheme::default())?
                .param("seed", spec_seed(&params)))
        }));
    }
    jobs.push(job("dunford-extension", seed.clone(), 1e-3, move || {
        let cfg = configure(Problem::Dirichlet, 0.5, 2.0, Branch::H1Branch)?;
        dunford_extension(&field(), 0.5, -x0, &cfg, &PVQuadratureScheme::default())
    }));

    // Non-tangential maximal function.
    jobs.push(job("nt-max-bound", none(), 0.1, || {
        let sol = dirichlet(alpha_of(2.0, 2.0), 2.0, Branch::LpInfBranch, Preset::Bump.sample())?;
        let u = Preset::Bump.sample::<f64>();
        let un = u.lp_norm(2.0, &PVQuadratureScheme::default())?;
        let mut cs = Vec::new();
        for &(nt, nx) in &[(20usize, 160usize), (40, 320)] {
            let spec = geometric_spec(0.01, 2.0, nt, 4.0, nx)?;
            let g = sol.grid(&spec)?;
            cs.push(nontangential_max(&g, NTVariant::Plain)?.lp_norm(2.0) / un);
        }
        let drift = (cs[1] - cs[0]).abs() / cs[1];
        Ok(VerificationReport::new("nt-max-bound", drift, 0.1)
            .param("alpha", sol.alpha())
            .note(format!("C = {:.4} -> {:.4}", cs[0], cs[1])))
    }));
    jobs.push(job("nt-max-principle", none(), 1e-9, || {
        let sol = dirichlet(0.0, 2.0, Branch::H1Branch, Preset::Bump.sample())?;
        let g = sol.grid(&geometric_spec(0.01, 2.0, 20, 3.0, 120)?)?;
        let n = nontangential_max(&g, NTVariant::Plain)?.max();
        Ok(VerificationReport::new("nt-max-principle", (n - 1.0).max(0.0), 1e-9).note(format!("max N = {n:.6}")))
    }));

    // Trace convergence and the far-field tail.
    jobs.push(job("trace-convergence", none(), 1e-2, || {
        // Moderate k keeps alpha > -1, where the trace gap closes like a
        // positive power of t.
        let alpha = alpha_of(0.5, 2.0);
        let u = Preset::Bump.sample::<f64>();
        let sol = dirichlet(alpha, 2.0, Branch::LpInfBranch, u.clone())?;
        let scheme = PVQuadratureScheme::default();
        let ts: Vec<f64> = (0..8).map(|j| 0.1 * 0.5f64.powi(j)).collect();
        let uu = u.clone();
        let norms = trace_norm_sequence(
            &|t, x| sol.value(t, x),
            &move |x| uu.eval(x),
            2.0,
            &ts,
            dirichlet_far_field_decay(alpha),
            &[0.5, 1.0, 1.5],
            &scheme,
        )?;
        let un = u.lp_norm(2.0, &scheme)?;
        let monotone = norms.windows(2).all(|w| w[1] < w[0]);
        let last = norms[norms.len() - 1] / un;
        Ok(VerificationReport::new("trace-convergence", if monotone { last } else { f64::INFINITY }, 1e-2)
            .param("alpha", alpha)
            .note(format!("relative gaps {:?}", norms.iter().map(|n| n / un).collect::<Vec<_>>())))
    }));
    jobs.push(job("trace-tail-exponent", none(), 0.05, || {
        let alpha = 0.7;
        let sol = dirichlet(alpha, 2.0, Branch::H1Branch, Preset::Bump.sample())?;
        let xs = [50.0, 80.0, 130.0, 200.0, 320.0];
        let e = tail_exponent(&|t, x| sol.value(t, x), 1.0, &xs)?;
        Ok(VerificationReport::new("trace-tail-exponent", (e - (alpha - 2.0)).abs(), 0.05)
            .param("alpha", alpha)
            .note(format!("fitted {e:.4}; U_t in L_2: {}", tail_in_lp(e, 2.0))))
    }));

    if spec.include_energy {
        for &alpha in &[0.4, -1.3] {
            jobs.push(job("energy-scaling", vec![("alpha", alpha.to_string())], 0.1, move || {
                let branch = if alpha > -1.0 { Branch::H1Branch } else { Branch::LpInfBranch };
                let sol = dirichlet(alpha, 2.0, branch, Preset::Bump.sample())?;
                let cfg = sol.cfg;
                // Above ~1e-2 the smooth O(eps) part of each band hides
                // the singular growth.
                let eps: Vec<f64> = (6..11).map(|j| 0.1 * 0.5f64.powi(j)).collect();
                Ok(energy_scaling(&|t, x| sol.value(t, x), &cfg, &eps)?.1)
            }));
        }
    }
}

fn spec_seed(params: &[(&str, String)]) -> String {
    params.iter().find(|(k, _)| *k == "seed").map(|(_, v)| v.clone()).unwrap_or_default()
}

/// LpInf-branch alpha for `(k, p)`; the checks that call this use
/// non-degenerate pairs.
fn alpha_of(k: f64, p: f64) -> f64 {
    lpinf_alpha(k, p).expect("non-degenerate branch")
}

/// `nt` geometric heights on `[t0, t1]` and `nx` cell-centred abscissae on
/// `[-half, half]`.
pub fn geometric_spec(t0: f64, t1: f64, nt: usize, half: f64, nx: usize) -> Result<GridSpec<f64>> {
    let r = (t1 / t0).powf(1.0 / (nt - 1) as f64);
    let t = (0..nt).map(|i| t0 * r.powi(i as i32)).collect();
    let h = 2.0 * half / nx as f64;
    let x = (0..nx).map(|j| -half + h * (j as f64 + 0.5)).collect();
    GridSpec::new(t, x)
}

/// Run every applicable check for each `(k, p)` plus the configuration-free
/// checks. An empty configuration list yields an empty report. Failures are
/// recorded, never raised; results are sorted by name and parameters.
pub fn run_suite(cfgs: &[(f64, f64)], spec: &SuiteSpec) -> Vec<VerificationReport> {
    if cfgs.is_empty() {
        return Vec::new();
    }
    let mut jobs: Vec<Job> = Vec::new();
    let mut ks: Vec<f64> = Vec::new();
    for &(k, p) in cfgs {
        per_config_jobs(k, p, &mut jobs);
        if !ks.contains(&k) {
            ks.push(k);
        }
    }
    for k in ks {
        jobs.push(job("hardy-involution", vec![("k", k.to_string())], 1e-4, move || hardy_involution(k)));
    }
    global_jobs(spec, &mut jobs);
    if let Some(only) = &spec.only {
        jobs.retain(|(name, _)| name == only);
    }
    let mut reports: Vec<VerificationReport> = jobs.par_iter().map(|(_, run)| run()).collect();
    reports.sort_by_key(|r| r.sort_key());
    reports
}

/// Names of all checks the suite can run.
pub fn check_names() -> Vec<&'static str> {
    let mut jobs = Vec::new();
    per_config_jobs(0.3, 2.0, &mut jobs);
    per_config_jobs(1.0, 2.0, &mut jobs);
    per_config_jobs(-1.0, 2.0, &mut jobs);
    jobs.push(job("hardy-involution", Vec::new(), 0.0, || hardy_involution(0.0)));
    global_jobs(
        &SuiteSpec {
            include_energy: true,
            ..SuiteSpec::default()
        },
        &mut jobs,
    );
    let mut names: Vec<&'static str> = jobs.into_iter().map(|(n, _)| n).collect();
    names.sort_unstable();
    names.dedup();
    names
}
