//! Weak solutions of `u_t = Δu + u^p + f`, `u(0) = φ`, through the fixed
//! point of
//!
//! ```text
//! 𝓕u(t) = K_t φ + ∫₀ᵗ K_τ f dτ + ∫₀ᵗ K_{t−τ} u(τ)^p dτ
//! ```
//!
//! iterated from `u₀ = K_t φ`. For nonnegative data the iterates increase
//! monotonically to the minimal solution whenever one exists.

use rayon::prelude::*;

use crate::analysis::harnack::HarnackConstants;
use crate::error::{invalid, Error, Result};
use crate::kernel::HeatKernel;
use crate::numeric::{fit_line, log_space};
use crate::semigroup::{Semigroup, TimeGrid, Trajectory};
use crate::space::{GridFunction, MetricMeasureGrid};

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    kernel: HeatKernel,
    space: MetricMeasureGrid,
    phi: GridFunction,
    f: GridFunction,
    p: f64,
}

impl ProblemSpec {
    pub fn new(kernel: HeatKernel, space: MetricMeasureGrid, phi: GridFunction, f: GridFunction, p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return invalid(format!("exponent p must exceed 1, got {p}"));
        }
        phi.check_len(space.len())?;
        f.check_len(space.len())?;
        phi.check_nonnegative("initial data")?;
        f.check_nonnegative("source term")?;
        if !phi.is_finite() || !f.is_finite() {
            return Err(Error::Numerical("data must be finite".into()));
        }
        Ok(Self { kernel, space, phi, f, p })
    }

    pub fn kernel(&self) -> &HeatKernel {
        &self.kernel
    }

    pub fn space(&self) -> &MetricMeasureGrid {
        &self.space
    }

    pub fn phi(&self) -> &GridFunction {
        &self.phi
    }

    pub fn f(&self) -> &GridFunction {
        &self.f
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveStatus {
    Converged,
    /// Some iterate crossed the cap; `t_blow` is the first offending node.
    BlownUp { t_blow: f64 },
    MaxIter,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Solution on the nodes preceding any blow-up.
    pub trajectory: Trajectory,
    pub status: SolveStatus,
    /// Picard sweeps performed.
    pub iterations: usize,
    /// Sweeps until each node stopped changing by more than the tolerance.
    pub node_iterations: Vec<usize>,
    /// `sup |u_n|` over the active window, one entry per iterate (from `u₀`).
    pub sup_norm_history: Vec<f64>,
    /// Final `‖u_n − u_{n−1}‖∞ / ‖u_n‖∞`.
    pub residual: f64,
    /// `‖u(t_{i+1}) − u(t_i)‖∞ / (t_{i+1} − t_i)` along the trajectory.
    pub time_increment_ratio: Vec<f64>,
}

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;

/// `10⁶ · max(‖φ‖∞, 1)`.
pub fn default_blowup_cap(phi: &GridFunction) -> f64 {
    1e6 * phi.sup_norm().max(1.0)
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn picard_solve(
    problem: &ProblemSpec,
    t_grid: &TimeGrid,
    tol: f64,
    max_iter: usize,
    blowup_cap: f64,
) -> Result<SolveReport> {
    if !(tol > 0.0) {
        return invalid(format!("tolerance must be positive, got {tol}"));
    }
    if max_iter == 0 {
        return invalid("max_iter must be at least 1");
    }
    if !(blowup_cap > problem.phi.sup_norm()) {
        return invalid(format!("blow-up cap {blowup_cap} must exceed ‖φ‖∞ = {}", problem.phi.sup_norm()));
    }
    let sg = Semigroup::new(&problem.kernel, &problem.space);
    let p = problem.p;
    let nodes = t_grid.nodes();
    let kphi: Vec<Vec<f64>> = nodes.par_iter().map(|&t| sg.apply_raw(&problem.phi, t)).collect();
    let source = sg.cumulative_source(&problem.f, t_grid);
    let base: Vec<Vec<f64>> = kphi
        .iter()
        .zip(&source)
        .map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| x + y).collect())
        .collect();

    let offending = |u: &[Vec<f64>]| u.iter().position(|v| v.iter().any(|x| !(*x <= blowup_cap)));
    let mut u = kphi;
    let mut active = nodes.len();
    let mut t_blow = None;
    if let Some(k) = offending(&u) {
        active = k.max(1);
        t_blow = Some(nodes[active]);
        u.truncate(active);
    }
    let mut history = vec![u.iter().map(|v| sup(v)).fold(0.0, f64::max)];
    let mut last_change = vec![0usize; nodes.len()];
    let mut converged = false;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;

    for n in 1..=max_iter {
        iterations = n;
        let powered: Vec<Vec<f64>> = u.par_iter().map(|v| v.iter().map(|x| x.powf(p)).collect()).collect();
        let duhamel = sg.duhamel_all(&powered, t_grid, active);
        let mut next: Vec<Vec<f64>> = duhamel
            .into_iter()
            .zip(&base)
            .map(|(d, b)| d.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        if let Some(k) = offending(&next) {
            // later nodes depend only on earlier ones, so the window before
            // the first offending node is unaffected
            active = k.max(1);
            t_blow = Some(nodes[active.min(nodes.len() - 1)]);
            next.truncate(active);
            u.truncate(active);
        }
        let norm = next.iter().map(|v| sup(v)).fold(0.0, f64::max);
        let mut delta = 0.0_f64;
        for (i, (a, b)) in next.iter().zip(&u).enumerate() {
            let d = sup_diff(a, b);
            if d > tol * norm {
                last_change[i] = n;
            }
            delta = delta.max(d);
        }
        u = next;
        history.push(norm);
        residual = if norm > 0.0 { delta / norm } else { 0.0 };
        if delta <= tol * norm {
            converged = true;
            break;
        }
    }

    let node_iterations = last_change[..active].iter().map(|&c| (c + 1).min(iterations)).collect();
    let times = nodes[..active].to_vec();
    let time_increment_ratio = (1..active)
        .map(|i| sup_diff(&u[i], &u[i - 1]) / (times[i] - times[i - 1]))
        .collect();
    let trajectory = Trajectory::new(times, u.into_iter().map(GridFunction::new).collect())?;
    let status = match (t_blow, converged) {
        (Some(t_blow), _) => SolveStatus::BlownUp { t_blow },
        (None, true) => SolveStatus::Converged,
        (None, false) => SolveStatus::MaxIter,
    };
    Ok(SolveReport {
        trajectory,
        status,
        iterations,
        node_iterations,
        sup_norm_history: history,
        residual,
        time_increment_ratio,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorizonReport {
    /// First time `b` exceeds the cap; `None` if it stays below up to `t_limit`.
    pub t0_estimate: Option<f64>,
    pub t_samples: Vec<f64>,
    pub a_samples: Vec<f64>,
    pub b_samples: Vec<f64>,
    /// `∫₀^{T₀} (a/b + ‖K_sφ‖∞)^{p−1} ds` (up to `t_limit` without blow-up).
    pub existence_condition_value: f64,
    /// `existence_condition_value ≤ 1/(p−1)`.
    pub condition_met: bool,
    pub t_limit: f64,
}

/// Default integration window of `local_horizon`, in ODE steps.
pub const DEFAULT_HORIZON_STEPS: f64 = 1e4;

/// Integrates the comparison system
///
/// ```text
/// a' = ‖K_t f‖∞ + a [a + b‖K_tφ‖∞]^{p−1},   a(0) = 0
/// b' = b [a + b‖K_tφ‖∞]^{p−1},             b(0) = 1
/// ```
///
/// whose solution bounds the weak solution by `a(t) + b(t)K_tφ`, up to
/// `10⁴ · ode_step`.
pub fn local_horizon(problem: &ProblemSpec, ode_step: f64, blowup_cap: f64) -> Result<HorizonReport> {
    local_horizon_until(problem, ode_step, blowup_cap, DEFAULT_HORIZON_STEPS * ode_step)
}

pub fn local_horizon_until(problem: &ProblemSpec, ode_step: f64, blowup_cap: f64, t_limit: f64) -> Result<HorizonReport> {
    if !(ode_step > 0.0) || !(t_limit > 0.0) {
        return invalid("ode_step and t_limit must be positive");
    }
    if !(blowup_cap > 1.0) {
        return invalid(format!("blow-up cap must exceed b(0) = 1, got {blowup_cap}"));
    }
    let sg = Semigroup::new(&problem.kernel, &problem.space);
    let p = problem.p;
    let h = ode_step;
    let mut table = NormTable { sg: &sg, phi: &problem.phi, f: &problem.f, h, norms: Vec::new() };
    let (n0, f0) = table.at(0);
    if !n0.is_finite() || !f0.is_finite() {
        return Err(Error::Numerical("non-finite data norms".into()));
    }
    let rhs = |table: &mut NormTable, t: f64, a: f64, b: f64| -> (f64, f64) {
        let (nphi, nf) = table.interp(t);
        let s = (a + b * nphi).max(0.0).powf(p - 1.0);
        (nf + a * s, b * s)
    };

    let (mut t, mut a, mut b) = (0.0_f64, 0.0_f64, 1.0_f64);
    let mut ts = vec![t];
    let mut as_ = vec![a];
    let mut bs = vec![b];
    let mut integrand = vec![n0.powf(p - 1.0)];
    let mut step = h;
    let min_step = h * 2f64.powi(-60);
    let mut t0 = None;
    while t < t_limit {
        let dt = step.min(t_limit - t);
        let (k1a, k1b) = rhs(&mut table, t, a, b);
        let (k2a, k2b) = rhs(&mut table, t + dt / 2.0, a + dt / 2.0 * k1a, b + dt / 2.0 * k1b);
        let (k3a, k3b) = rhs(&mut table, t + dt / 2.0, a + dt / 2.0 * k2a, b + dt / 2.0 * k2b);
        let (k4a, k4b) = rhs(&mut table, t + dt, a + dt * k3a, b + dt * k3b);
        let na = a + dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        let nb = b + dt / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        let rel = (nb - b) / b;
        let rel_a = if a > 0.0 { (na - a) / a } else { 0.0 };
        if (!nb.is_finite() || !na.is_finite() || rel > 0.05 || rel_a > 0.05) && dt > min_step {
            step = dt / 2.0;
            continue;
        }
        t += dt;
        a = na;
        b = nb;
        ts.push(t);
        as_.push(a);
        bs.push(b);
        integrand.push((a / b + table.interp(t).0).powf(p - 1.0));
        if !(b <= blowup_cap) {
            t0 = Some(t);
            break;
        }
        if rel < 0.01 && rel_a < 0.01 {
            step = (2.0 * step).min(h);
        }
    }
    let value: f64 = (1..ts.len())
        .map(|i| 0.5 * (ts[i] - ts[i - 1]) * (integrand[i] + integrand[i - 1]))
        .sum();
    Ok(HorizonReport {
        t0_estimate: t0,
        t_samples: ts,
        a_samples: as_,
        b_samples: bs,
        existence_condition_value: value,
        condition_met: value <= 1.0 / (p - 1.0) * (1.0 + 1e-9),
        t_limit,
    })
}

// ‖K_tφ‖∞, ‖K_tf‖∞ at multiples of h, linearly interpolated
struct NormTable<'a> {
    sg: &'a Semigroup<'a>,
    phi: &'a [f64],
    f: &'a [f64],
    h: f64,
    norms: Vec<(f64, f64)>,
}

impl NormTable<'_> {
    fn at(&mut self, k: usize) -> (f64, f64) {
        while self.norms.len() <= k {
            let t = self.norms.len() as f64 * self.h;
            let a = sup(&self.sg.apply_raw(self.phi, t));
            let b = sup(&self.sg.apply_raw(self.f, t));
            self.norms.push((a, b));
        }
        self.norms[k]
    }

    fn interp(&mut self, t: f64) -> (f64, f64) {
        let x = t / self.h;
        let k = x.floor().max(0.0) as usize;
        let w = x - k as f64;
        let (a0, b0) = self.at(k);
        if w == 0.0 {
            return (a0, b0);
        }
        let (a1, b1) = self.at(k + 1);
        (a0 + w * (a1 - a0), b0 + w * (b1 - b0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub t_samples: Vec<f64>,
    /// `max_x W(t, x)` per sample time.
    pub w_max: Vec<f64>,
    /// Least-squares slope of `log max W` against `log t`.
    pub growth_exponent: Option<f64>,
    /// `1/(p−1) − α/β`, the exponent expected for integrable data.
    pub expected_exponent: f64,
    /// Unbounded growth detected: the fitted exponent exceeds the margin.
    pub witness: bool,
}

/// Fitted exponents at or below this are not reported as growth.
pub const WITNESS_MARGIN: f64 = 0.02;

/// `W(t,x) = t^{1/(p−1)} K_{B₁t}φ + t^{p/(p−1)} K_{B₁t}f` on `t_count`
/// log-spaced times in `[t_max/100, t_max]`.
pub fn nonexistence_witness(problem: &ProblemSpec, harnack: &HarnackConstants, t_max: f64, t_count: usize) -> Result<WitnessReport> {
    nonexistence_witness_range(problem, harnack, t_max / 100.0, t_max, t_count)
}

pub fn nonexistence_witness_range(
    problem: &ProblemSpec,
    harnack: &HarnackConstants,
    t_min: f64,
    t_max: f64,
    t_count: usize,
) -> Result<WitnessReport> {
    if t_count < 3 {
        return invalid(format!("need at least 3 sample times, got {t_count}"));
    }
    if !(t_min > 0.0) || !(t_max > t_min) {
        return invalid(format!("need 0 < t_min < t_max, got {t_min}, {t_max}"));
    }
    let sg = Semigroup::new(&problem.kernel, &problem.space);
    let p = problem.p;
    let ts = log_space(t_min, t_max, t_count);
    let w_max: Vec<f64> = ts
        .par_iter()
        .map(|&t| {
            let s = harnack.b1 * t;
            let kp = sg.apply_raw(&problem.phi, s);
            let kf = sg.apply_raw(&problem.f, s);
            let (c1, c2) = (t.powf(1.0 / (p - 1.0)), t.powf(p / (p - 1.0)));
            kp.iter().zip(&kf).map(|(a, b)| c1 * a + c2 * b).fold(0.0, f64::max)
        })
        .collect();
    let pts: Vec<(f64, f64)> = ts.iter().zip(&w_max).filter(|(_, w)| **w > 0.0).map(|(t, w)| (t.ln(), w.ln())).collect();
    let growth = if pts.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        fit_line(&x, &y).map(|(s, _)| s)
    } else {
        None
    };
    Ok(WitnessReport {
        t_samples: ts,
        w_max,
        growth_exponent: growth,
        expected_exponent: 1.0 / (p - 1.0) - harnack.alpha / harnack.beta,
        witness: growth.is_some_and(|g| g > WITNESS_MARGIN),
    })
}
