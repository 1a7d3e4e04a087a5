//! Subcommand runners. Each wraps module-level reports; pass/fail comes
//! straight from those reports and the configured thresholds.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use semilinear::analysis::integrals::DIVERGENCE_RATIO;
use semilinear::analysis::{
    check_moment_bound, check_weighted_integrals, classify_regime, harnack_constants, holder_estimate, verify_harnack,
    HolderParams, RegimeConditions, RegimeVerdict,
};
use semilinear::kernel::{estimate_holder_kernel, holder_sample_design, verify_kernel_axioms, verify_two_sided};
use semilinear::profiles::check_profile_conditions;
use semilinear::solver::{
    default_blowup_cap, local_horizon_until, nonexistence_witness_range, picard_solve, ProblemSpec, SolveReport,
    SolveStatus, DEFAULT_HORIZON_STEPS,
};
use semilinear::{GridFunction, TimeGrid};

use crate::config::{Plan, ProblemData, WitnessOptions};
use crate::report::{write_rows, Check, HorizonRow, PointValueRow, ScanRow, VerdictRow, WitnessRow};

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(String),
    Assertion(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Assertion(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Assertion(m) => m,
        }
    }
}

impl From<semilinear::Error> for Failure {
    fn from(e: semilinear::Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Numerical(format!("writing output: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn problem(plan: &Plan) -> Result<&ProblemData, Failure> {
    plan.problem.as_ref().ok_or_else(|| Failure::Config("this subcommand needs a `problem` section".into()))
}

fn grid(plan: &Plan) -> Result<&TimeGrid, Failure> {
    plan.grid.as_ref().ok_or_else(|| Failure::Config("this subcommand needs a `time` section".into()))
}

fn problem_spec(plan: &Plan, data: &ProblemData, p: f64) -> Result<ProblemSpec, Failure> {
    Ok(ProblemSpec::new(plan.kernel.clone(), plan.space.clone(), data.phi.clone(), data.f.clone(), p)?)
}

fn is_nonzero(g: &GridFunction) -> bool {
    g.values().iter().any(|v| *v > 0.0)
}

fn blowup_cap(plan: &Plan, data: &ProblemData) -> f64 {
    plan.tolerances.blowup_cap.unwrap_or_else(|| default_blowup_cap(&data.phi))
}

fn verdict_for(plan: &Plan, data: &ProblemData, p: f64) -> Result<RegimeVerdict, Failure> {
    let (alpha, beta) = (plan.kernel.alpha(), plan.kernel.beta());
    let report = check_profile_conditions(&plan.lower, &plan.upper, p, alpha)?;
    let conditions = RegimeConditions::from_report(&report, plan.kernel.conservative_claim());
    Ok(classify_regime(alpha, beta, p, is_nonzero(&data.phi), is_nonzero(&data.f), &conditions)?)
}

/// Fails with exit status 1 when any row failed.
fn finish(out: &Path, rows: &[Check]) -> Outcome {
    write_rows(&out.join("report.csv"), rows)?;
    for r in rows {
        println!("{:<5} {} = {} (threshold {})", if r.pass { "PASS" } else { "FAIL" }, r.check, r.value, r.threshold);
    }
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Assertion(format!("failed checks: {}", failed.join(", "))))
    }
}

pub fn classify(plan: &Plan, out: &Path) -> Outcome {
    let data = problem(plan)?;
    let v = verdict_for(plan, data, data.p)?;
    let row = VerdictRow {
        verdict: v.verdict.to_string(),
        cited_case: v.cited_case.to_string(),
        also_cited: v.also_cited.join(";"),
        conditional: v.conditional,
        fujita_exponent: v.fujita_exponent,
        intermediate_exponent: v.intermediate_exponent,
    };
    println!("{}, {}", row.verdict, row.cited_case);
    write_rows(&out.join("verdict.csv"), &[row])?;
    Ok(())
}

fn run_solver(plan: &Plan) -> Result<SolveReport, Failure> {
    let data = problem(plan)?;
    let grid = grid(plan)?;
    let spec = problem_spec(plan, data, data.p)?;
    let tol = &plan.tolerances;
    Ok(picard_solve(&spec, grid, tol.picard_tol, tol.max_iter, blowup_cap(plan, data))?)
}

pub fn solve(plan: &Plan, out: &Path) -> Outcome {
    let rep = run_solver(plan)?;
    rep.trajectory.write_csv(&out.join("trajectory.csv"))?;
    let tol = &plan.tolerances;
    let mut rows = vec![
        Check::new("picard_sweeps", rep.iterations as f64, tol.max_iter as f64, rep.status == SolveStatus::Converged, "monotone iteration"),
        Check::new("picard_residual", rep.residual, tol.picard_tol, rep.residual <= tol.picard_tol, "monotone iteration"),
    ];
    if let SolveStatus::BlownUp { t_blow } = rep.status {
        rows.push(Check::new("blowup_time", t_blow, grid(plan)?.t_end(), false, "blow-up"));
    }
    write_rows(&out.join("report.csv"), &rows)?;
    println!("status {:?} after {} sweeps, residual {:.3e}", rep.status, rep.iterations, rep.residual);
    Ok(())
}

pub fn horizon(plan: &Plan, out: &Path) -> Outcome {
    let data = problem(plan)?;
    let spec = problem_spec(plan, data, data.p)?;
    let step = plan.horizon.ode_step;
    let t_limit = plan.horizon.t_limit.unwrap_or(DEFAULT_HORIZON_STEPS * step);
    let rep = local_horizon_until(&spec, step, blowup_cap(plan, data), t_limit)?;
    let rows: Vec<HorizonRow> = rep
        .t_samples
        .iter()
        .zip(&rep.a_samples)
        .zip(&rep.b_samples)
        .map(|((&t, &a), &b)| HorizonRow { t, a, b })
        .collect();
    write_rows(&out.join("horizon.csv"), &rows)?;
    let bound = 1.0 / (data.p - 1.0);
    let checks = vec![
        match rep.t0_estimate {
            Some(t0) => Check::measured("t0_estimate", t0, "local existence horizon"),
            None => Check::info("t0_estimate", "none", "local existence horizon"),
        },
        Check::new("existence_condition", rep.existence_condition_value, bound, rep.condition_met, "local existence horizon"),
    ];
    write_rows(&out.join("report.csv"), &checks)?;
    match rep.t0_estimate {
        Some(t0) => println!("T0 = {t0}"),
        None => println!("no blow-up of the comparison system before t = {}", rep.t_limit),
    }
    Ok(())
}

fn witness_rows(plan: &Plan, data: &ProblemData, p: f64, w: &WitnessOptions) -> Result<(Vec<WitnessRow>, Option<f64>, f64, bool), Failure> {
    let hc = harnack_constants(w.a1, w.a2, plan.kernel.alpha(), plan.kernel.beta())?;
    let spec = problem_spec(plan, data, p)?;
    let rep = nonexistence_witness_range(&spec, &hc, w.t_min, w.t_max, w.t_count)?;
    let rows = rep.t_samples.iter().zip(&rep.w_max).map(|(&t, &w_max)| WitnessRow { t, w_max }).collect();
    Ok((rows, rep.growth_exponent, rep.expected_exponent, rep.witness))
}

pub fn witness(plan: &Plan, out: &Path) -> Outcome {
    let data = problem(plan)?;
    let w = &plan.witness;
    let (rows, fitted, expected, flag) = witness_rows(plan, data, data.p, w)?;
    write_rows(&out.join("witness.csv"), &rows)?;
    let fitted = fitted.ok_or_else(|| Failure::Numerical("witness fit failed: no positive samples".into()))?;
    let checks = vec![
        Check::new("growth_exponent", fitted, expected, (fitted - expected).abs() <= w.exponent_tolerance, "nonexistence witness"),
        Check::info("unbounded_growth", flag, "nonexistence witness"),
    ];
    write_rows(&out.join("report.csv"), &checks)?;
    println!("growth exponent {fitted:.4} (expected {expected:.4}), witness {flag}");
    Ok(())
}

fn default_x_samples(n: usize) -> Vec<usize> {
    let mut xs: Vec<usize> = (0..9).map(|k| k * (n - 1) / 8).collect();
    xs.dedup();
    xs
}

pub fn verify_kernel(plan: &Plan, out: &Path) -> Outcome {
    let o = &plan.verify_kernel;
    let xs = o.x_samples.clone().unwrap_or_else(|| default_x_samples(plan.space.len()));
    let rep = verify_kernel_axioms(&plan.kernel, &plan.space, &o.t_samples, &xs)?;
    let mut rows = vec![
        Check::new("positivity", rep.positivity_ok as u8 as f64, 1.0, rep.positivity_ok, "kernel positivity"),
        Check::new("symmetry_residual", rep.symmetry_residual, 0.0, rep.symmetry_residual == 0.0, "kernel symmetry"),
        Check::new(
            "semigroup_residual",
            rep.semigroup_residual,
            o.max_semigroup_residual,
            rep.semigroup_residual < o.max_semigroup_residual,
            "Chapman-Kolmogorov",
        ),
        Check::measured("min_mass", rep.min_mass, "Markov property"),
        Check::measured("max_mass", rep.markov_mass, "Markov property"),
        Check::new("boundary_mass", rep.boundary_mass, semilinear::kernel::BOUNDARY_MASS_TOL, !rep.boundary_warning, "truncation"),
    ];
    if let Some(d) = rep.conservative_deficit {
        rows.push(Check::new("conservative_deficit", d, o.max_deficit, d < o.max_deficit, "conservativeness"));
    }
    if o.two_sided {
        let (ts, pairs) = holder_sample_design(&plan.space);
        let ts: Vec<f64> = ts.into_iter().filter(|t| *t <= o.t_samples.iter().cloned().fold(0.0, f64::max)).collect();
        let ts = if ts.is_empty() { o.t_samples.clone() } else { ts };
        let two = verify_two_sided(&plan.kernel, &plan.lower, &plan.upper, &plan.space, &ts, &pairs)?;
        rows.push(Check::new("two_sided_margin", two.worst_margin, 0.0, two.holds, "two-sided kernel bound"));
    }
    finish(out, &rows)
}

/// Random nonnegative test functions: dense uniform noise alternating with
/// sparse spikes.
fn harnack_samples(n: usize, count: usize, seed: u64) -> Vec<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|trial| {
            let v = if trial % 2 == 0 {
                (0..n).map(|_| rng.gen::<f64>()).collect()
            } else {
                (0..n).map(|_| if rng.gen::<f64>() < 0.02 { 10.0 * rng.gen::<f64>() } else { 0.0 }).collect()
            };
            GridFunction::new(v)
        })
        .collect()
}

pub fn harnack(plan: &Plan, out: &Path) -> Outcome {
    let o = &plan.harnack;
    let hc = harnack_constants(o.a1, o.a2, plan.kernel.alpha(), plan.kernel.beta())?;
    let samples = harnack_samples(plan.space.len(), o.samples, plan.seed);
    let mut rows = vec![
        Check::measured("A", hc.a, "Harnack constants"),
        Check::measured("B", hc.b, "Harnack constants"),
        Check::measured("B1", hc.b1, "Harnack constants"),
    ];
    for &t in &o.times {
        let reports = samples
            .par_iter()
            .map(|g| verify_harnack(&plan.kernel, &plan.space, g, t, &hc))
            .collect::<semilinear::Result<Vec<_>>>()?;
        let worst = |f: fn(&semilinear::analysis::HarnackReport) -> f64| reports.iter().map(f).fold(f64::INFINITY, f64::min);
        for (name, m) in [
            ("harnack1", worst(|r| r.margin_h1)),
            ("harnack2", worst(|r| r.margin_h2)),
            ("combined", worst(|r| r.margin_combined)),
        ] {
            rows.push(Check::new(format!("{name}@t={t}"), m, -o.tolerance, m >= -o.tolerance, "Harnack-type inequality"));
        }
    }
    finish(out, &rows)
}

pub fn integrals(plan: &Plan, out: &Path) -> Outcome {
    let o = plan.integrals.as_ref().ok_or_else(|| Failure::Config("integrals needs an `integrals` section".into()))?;
    let space = &plan.space;
    let xs = o.x_samples.clone().unwrap_or_else(|| default_x_samples(space.len()));
    let rep = check_weighted_integrals(space, o.lambda1, o.lambda2, space.x0(), &xs)?;
    let alpha = space.alpha_hint();
    let predicted_finite = o.lambda1 + o.lambda2 > alpha;
    let values: Vec<PointValueRow> = rep.values.iter().map(|&(point_id, value)| PointValueRow { point_id, value }).collect();
    write_rows(&out.join("integrals.csv"), &values)?;
    let mut rows = vec![
        Check::new("tail_ratio", rep.tail_ratio, DIVERGENCE_RATIO, rep.divergent != predicted_finite, "weighted integral finiteness"),
        Check::measured("sup", rep.sup, "weighted integral bound"),
    ];
    if let Some(ns) = rep.normalized_sup {
        rows.push(Check::measured("normalized_sup", ns, "weighted integral bound"));
    }
    if let (Some(m), Some(profile)) = (&o.moment, &plan.moment_profile) {
        let mb = check_moment_bound(space, profile, plan.kernel.alpha(), plan.kernel.beta(), m.lambda, &m.times)?;
        rows.push(Check::new("moment_spread", mb.spread(), m.max_spread, mb.spread() <= m.max_spread, "moment bound"));
    }
    finish(out, &rows)
}

pub fn holder(plan: &Plan, out: &Path) -> Outcome {
    let rep = run_solver(plan)?;
    if rep.status != SolveStatus::Converged {
        return Err(Failure::Numerical(format!("solver did not converge: {:?}", rep.status)));
    }
    let u = rep.trajectory.last().ok_or_else(|| Failure::Numerical("empty trajectory".into()))?;
    let (ts, pairs) = holder_sample_design(&plan.space);
    let fit = estimate_holder_kernel(&plan.kernel, &plan.space, &ts, &pairs)?;
    let o = &plan.holder;
    let params = HolderParams::new(o.theta1, o.theta2, fit.sigma, fit.nu, fit.l, plan.kernel.beta())?;
    let est = holder_estimate(u, &plan.space, &params)?;
    let threshold = est.theoretical_theta - o.tolerance;
    let rows = vec![
        Check::measured("kernel_sigma", fit.sigma, "kernel Hölder bound"),
        Check::measured("kernel_nu", fit.nu, "kernel Hölder bound"),
        Check::measured("kernel_l", fit.l, "kernel Hölder bound"),
        Check::new("theta_hat", est.theta_hat, threshold, est.theta_hat >= threshold, "solution Hölder regularity"),
    ];
    finish(out, &rows)
}

pub fn fujita_scan(plan: &Plan, out: &Path) -> Outcome {
    let o = plan.fujita_scan.as_ref().ok_or_else(|| Failure::Config("fujita-scan needs a `fujita_scan` section".into()))?;
    let data = problem(plan)?;
    let rows = o
        .p_values
        .iter()
        .map(|&p| {
            let (_, growth_exponent, _, _) = witness_rows(plan, data, p, &o.witness)?;
            let verdict = verdict_for(plan, data, p)?.verdict.to_string();
            Ok(ScanRow { p, growth_exponent, verdict })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    for r in &rows {
        let g = r.growth_exponent.map_or("n/a".to_string(), |g| format!("{g:+.4}"));
        println!("p = {}: growth exponent {g}, {}", r.p, r.verdict);
    }
    write_rows(&out.join("scan.csv"), &rows)?;
    Ok(())
}
