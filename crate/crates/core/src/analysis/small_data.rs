//! Small-data global existence: the invariant envelope
//! `S_ε = {0 ≤ u ≤ ε/(1 + d(x,x₀)^{α−β})}`, the contraction constants and
//! the admissible data amplitude.

use crate::error::{invalid, Result};
use crate::kernel::HeatKernel;
use crate::semigroup::{Semigroup, TimeGrid, Trajectory};
use crate::space::{GridFunction, MetricMeasureGrid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallDataConfig {
    pub lambda: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub x0: usize,
}

impl SmallDataConfig {
    pub fn new(lambda: f64, delta: f64, epsilon: f64, x0: usize, alpha: f64) -> Result<Self> {
        if !(lambda > alpha) {
            return invalid(format!("decay exponent lambda = {lambda} must exceed alpha = {alpha}"));
        }
        if !(delta > 0.0) || !(epsilon > 0.0) {
            return invalid("delta and epsilon must be positive");
        }
        Ok(Self { lambda, delta, epsilon, x0 })
    }

    /// `δ/(1 + d(x,x₀)^λ)` sampled on the space.
    pub fn data(&self, space: &MetricMeasureGrid) -> GridFunction {
        power_decay(space, self.x0, self.delta, self.lambda)
    }
}

/// `amplitude/(1 + d(x,x₀)^λ)`.
pub fn power_decay(space: &MetricMeasureGrid, x0: usize, amplitude: f64, lambda: f64) -> GridFunction {
    GridFunction::from_fn(space, |i| amplitude / (1.0 + space.dist(i, x0).powf(lambda)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeReport {
    pub pass: bool,
    /// `min (envelope − u)` over nodes and points.
    pub worst_margin: f64,
    /// `(node, point)` of the worst margin.
    pub worst_at: (usize, usize),
    pub negative_values: bool,
}

pub fn envelope_check(
    trajectory: &Trajectory,
    epsilon: f64,
    alpha: f64,
    beta: f64,
    x0: usize,
    space: &MetricMeasureGrid,
) -> Result<EnvelopeReport> {
    if !(alpha > beta) {
        return invalid(format!("envelope needs alpha > beta, got {alpha}, {beta}"));
    }
    if !(epsilon > 0.0) {
        return invalid("epsilon must be positive");
    }
    space.check_index(x0)?;
    let env: Vec<f64> = (0..space.len())
        .map(|i| epsilon / (1.0 + space.dist(i, x0).powf(alpha - beta)))
        .collect();
    let mut worst = f64::INFINITY;
    let mut worst_at = (0, 0);
    let mut negative = false;
    for (k, u) in trajectory.values().iter().enumerate() {
        u.check_len(space.len())?;
        for (i, (&v, &e)) in u.iter().zip(&env).enumerate() {
            negative |= v < 0.0;
            if e - v < worst {
                worst = e - v;
                worst_at = (k, i);
            }
        }
    }
    Ok(EnvelopeReport { pass: worst >= 0.0 && !negative, worst_margin: worst, worst_at, negative_values: negative })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    pub epsilon_star: f64,
    pub delta_max: f64,
}

pub const SAFETY_FACTOR: f64 = 0.9;

/// Largest `ε` with `C₃pε^{p−1} < 1` and `C₁ε^p < ε`, shrunk by 0.9, and
/// `δ_max = ε/C₁ − ε^p`.
pub fn contraction_feasibility(c1_fix: f64, c3_lip: f64, p: f64) -> Result<Feasibility> {
    if !(c1_fix > 0.0) || !(c3_lip > 0.0) || !c1_fix.is_finite() || !c3_lip.is_finite() {
        return invalid(format!("constants must be positive and finite, got {c1_fix}, {c3_lip}"));
    }
    if !(p > 1.0) {
        return invalid(format!("exponent p must exceed 1, got {p}"));
    }
    let q = 1.0 / (p - 1.0);
    let eps = SAFETY_FACTOR * (1.0 / (c3_lip * p)).powf(q).min(c1_fix.powf(-q));
    let delta_max = eps / c1_fix - eps.powf(p);
    Ok(Feasibility { feasible: delta_max > 0.0, epsilon_star: eps, delta_max })
}

/// Constants of the small-data fixed-point argument, measured with the
/// discrete operators of the solver on a given time grid. With
/// `e = 1/(1 + d(x,x₀)^{α−β})` and unit-amplitude data `1/(1 + d^λ)`:
///
/// - `c_phi = max K_t φ̂ / e`, `c_f = max ∫₀ᵗ K_τ f̂ / e`
/// - `c_n = max ∫₀ᵗ K_{t−τ} e^p / e`
/// - `c1 = max(c_phi + c_f, c_n)`, so `u ≤ εe ⇒ 𝓕u ≤ C₁(δ + ε^p)e`
/// - `c3 = max ∫₀ᵗ K_{t−τ} e^{p−1}`, the sup-norm Lipschitz factor
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallDataConstants {
    pub c_phi: f64,
    pub c_f: f64,
    pub c_n: f64,
    pub c1: f64,
    pub c3: f64,
}

pub fn measure_small_data_constants(
    kernel: &HeatKernel,
    space: &MetricMeasureGrid,
    p: f64,
    lambda: f64,
    x0: usize,
    grid: &TimeGrid,
) -> Result<SmallDataConstants> {
    let (alpha, beta) = (kernel.alpha(), kernel.beta());
    if !(alpha > beta) {
        return invalid("small-data constants need alpha > beta");
    }
    if !(p > 1.0) || !(lambda > alpha) {
        return invalid(format!("need p > 1 and lambda > alpha, got {p}, {lambda}"));
    }
    space.check_index(x0)?;
    let sg = Semigroup::new(kernel, space);
    let e: Vec<f64> = (0..space.len())
        .map(|i| 1.0 / (1.0 + space.dist(i, x0).powf(alpha - beta)))
        .collect();
    let data = power_decay(space, x0, 1.0, lambda);
    let ratio_max = |v: &[f64]| v.iter().zip(&e).map(|(a, b)| a / b).fold(0.0, f64::max);

    let m = grid.len();
    let c_phi = grid
        .nodes()
        .iter()
        .map(|&t| ratio_max(&sg.apply_raw(&data, t)))
        .fold(0.0, f64::max);
    let c_f = sg.cumulative_source(&data, grid).iter().map(|v| ratio_max(v)).fold(0.0, f64::max);
    let ep: Vec<f64> = e.iter().map(|v| v.powf(p)).collect();
    let c_n = sg
        .duhamel_all(&vec![ep; m], grid, m)
        .iter()
        .map(|v| ratio_max(v))
        .fold(0.0, f64::max);
    let ep1: Vec<f64> = e.iter().map(|v| v.powf(p - 1.0)).collect();
    let c3 = sg
        .duhamel_all(&vec![ep1; m], grid, m)
        .iter()
        .map(|v| v.iter().fold(0.0_f64, |a, b| a.max(*b)))
        .fold(0.0, f64::max);
    Ok(SmallDataConstants { c_phi, c_f, c_n, c1: (c_phi + c_f).max(c_n), c3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::build_lattice_space;
    use approx::assert_relative_eq;

    #[test]
    fn feasibility_examples() {
        let f = contraction_feasibility(1.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(f.epsilon_star, 0.45, epsilon = 1e-15);
        assert_relative_eq!(f.delta_max, 0.2475, epsilon = 1e-15);
        assert!(f.feasible);
        let f = contraction_feasibility(1e3, 1e3, 2.0).unwrap();
        assert_relative_eq!(f.epsilon_star, 4.5e-4, max_relative = 1e-12);
        assert_relative_eq!(f.delta_max, 2.475e-7, max_relative = 1e-9);
        assert!(f.feasible);
        assert!(contraction_feasibility(1.0, 1.0, 1.0).is_err());
        assert!(contraction_feasibility(0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn envelope_examples() {
        let space = build_lattice_space(1, 5.0, 11).unwrap();
        let eps = 0.2;
        let x0 = space.x0();
        let half = GridFunction::from_fn(&space, |i| 0.5 * eps / (1.0 + space.dist(i, x0)));
        let tr = Trajectory::new(vec![0.0, 1.0], vec![half.clone(), half.clone()]).unwrap();
        let rep = envelope_check(&tr, eps, 2.0, 1.0, x0, &space).unwrap();
        assert!(rep.pass);
        assert_relative_eq!(rep.worst_margin, 0.5 * eps / 6.0, epsilon = 1e-15);
        let mut bad = half.clone();
        bad[3] = eps;
        let tr = Trajectory::new(vec![0.0, 1.0], vec![half, bad]).unwrap();
        let rep = envelope_check(&tr, eps, 2.0, 1.0, x0, &space).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.worst_at, (1, 3));
        assert!(envelope_check(&tr, eps, 1.0, 2.0, x0, &space).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SmallDataConfig::new(1.5, 0.1, 0.1, 0, 2.0).is_err());
        assert!(SmallDataConfig::new(3.0, 0.0, 0.1, 0, 2.0).is_err());
        assert!(SmallDataConfig::new(3.0, 0.1, 0.1, 0, 2.0).is_ok());
    }
}
