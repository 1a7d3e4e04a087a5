//! Weighted potential integrals
//! `I(x) = ∫ d(x,y)^{-λ₁} (1 + d(y,x₀)^{λ₂})^{-1} dμ(y)`
//! and profile moments `J(t,x) = ∫ d(x,y)^λ Φ(d(x,y)/t^{1/β}) dμ(y)`.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{invalid, Result};
use crate::profiles::{moment_integral, Integrability, Profile};
use crate::space::MetricMeasureGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedIntegralReport {
    pub lambda1: f64,
    pub lambda2: f64,
    pub alpha: f64,
    /// `(x, I(x))` per sample.
    pub values: Vec<(usize, f64)>,
    pub sup: f64,
    /// `sup_x I(x)(1 + d(x,x₀)^{λ₁})`, reported when `λ₂ > α`.
    pub normalized_sup: Option<f64>,
    /// Ratio of successive dyadic tail increments of `I(x₀)`; near
    /// `2^{α−λ₁−λ₂}` on a regular space.
    pub tail_ratio: f64,
    /// Set when the tail increments do not decay.
    pub divergent: bool,
}

/// Tail ratios at or above this value are reported as divergent.
pub const DIVERGENCE_RATIO: f64 = 0.98;

fn unit_ball_volume(alpha: f64) -> f64 {
    PI.powf(alpha / 2.0) / gamma(alpha / 2.0 + 1.0)
}

/// Contribution of the cell containing `x` to `∫ d(x,y)^{-λ₁} dμ(y)`: the
/// cell is replaced by a ball of equal measure in dimension `α`.
fn self_cell(weight: f64, alpha: f64, lambda1: f64) -> f64 {
    let rho = (weight / unit_ball_volume(alpha)).powf(1.0 / alpha);
    weight * rho.powf(-lambda1) * alpha / (alpha - lambda1)
}

fn integral_at(space: &MetricMeasureGrid, x: usize, lambda1: f64, lambda2: f64, radius: f64) -> f64 {
    let alpha = space.alpha_hint();
    let mut s = 0.0;
    for y in 0..space.len() {
        if space.dist_x0(y) > radius {
            continue;
        }
        let tail = 1.0 / (1.0 + space.dist_x0(y).powf(lambda2));
        if y == x {
            s += self_cell(space.weight(y), alpha, lambda1) * tail;
        } else {
            s += space.weight(y) * space.dist(x, y).powf(-lambda1) * tail;
        }
    }
    s
}

pub fn check_weighted_integrals(
    space: &MetricMeasureGrid,
    lambda1: f64,
    lambda2: f64,
    x0: usize,
    x_samples: &[usize],
) -> Result<WeightedIntegralReport> {
    let alpha = space.alpha_hint();
    if !(lambda1 > 0.0) || !(lambda2 > 0.0) {
        return invalid(format!("lambda1, lambda2 must be positive, got {lambda1}, {lambda2}"));
    }
    if lambda1 >= alpha {
        return invalid(format!("lambda1 = {lambda1} >= alpha = {alpha}: local integral diverges"));
    }
    if x_samples.is_empty() {
        return invalid("need at least one sample point");
    }
    for &x in x_samples {
        space.check_index(x)?;
    }
    let space = space.clone().with_x0(x0)?;
    let extent = (0..space.len()).map(|y| space.dist_x0(y)).fold(0.0, f64::max);

    let values: Vec<(usize, f64)> = x_samples
        .iter()
        .map(|&x| (x, integral_at(&space, x, lambda1, lambda2, f64::INFINITY)))
        .collect();
    let sup = values.iter().map(|v| v.1).fold(0.0, f64::max);
    let normalized_sup = (lambda2 > alpha).then(|| {
        values
            .iter()
            .map(|&(x, v)| v * (1.0 + space.dist_x0(x).powf(lambda1)))
            .fold(0.0, f64::max)
    });

    let i_quarter = integral_at(&space, x0, lambda1, lambda2, extent / 4.0);
    let i_half = integral_at(&space, x0, lambda1, lambda2, extent / 2.0);
    let i_full = integral_at(&space, x0, lambda1, lambda2, extent);
    let tail_ratio = (i_full - i_half) / (i_half - i_quarter);

    Ok(WeightedIntegralReport {
        lambda1,
        lambda2,
        alpha,
        values,
        sup,
        normalized_sup,
        tail_ratio,
        divergent: tail_ratio >= DIVERGENCE_RATIO,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentBoundReport {
    /// `(t, J(t,x)/t^{(α+λ)/β})` at the evaluation point.
    pub ratios: Vec<(f64, f64)>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `∫₀^∞ s^α Φ(s) ds`
    pub moment: Integrability,
}

impl MomentBoundReport {
    /// `max/min − 1`.
    pub fn spread(&self) -> f64 {
        self.max_ratio / self.min_ratio - 1.0
    }
}

/// `J(t, x₀)/t^{(α+λ)/β}` over `t_samples`; `x₀` is the space's reference
/// point and should sit well inside the grid.
pub fn check_moment_bound(
    space: &MetricMeasureGrid,
    profile: &Profile,
    alpha: f64,
    beta: f64,
    lambda: f64,
    t_samples: &[f64],
) -> Result<MomentBoundReport> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return invalid(format!("lambda must lie in (0, 1], got {lambda}"));
    }
    if !(alpha > 0.0) || !(beta > 0.0) {
        return invalid("alpha and beta must be positive");
    }
    if t_samples.is_empty() || t_samples.iter().any(|t| !(*t > 0.0)) {
        return invalid("need positive sample times");
    }
    let moment = moment_integral(profile, alpha + 1.0);
    if !moment.finite {
        return invalid(format!("profile {profile} fails the moment condition ∫ s^α Φ(s) ds < ∞"));
    }
    let x = space.x0();
    let ratios: Vec<(f64, f64)> = t_samples
        .iter()
        .map(|&t| {
            let scale = t.powf(-1.0 / beta);
            let j: f64 = (0..space.len())
                .map(|y| {
                    let d = space.dist(x, y);
                    space.weight(y) * d.powf(lambda) * profile.eval(d * scale)
                })
                .sum();
            (t, j / t.powf((alpha + lambda) / beta))
        })
        .collect();
    let min_ratio = ratios.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(MomentBoundReport { ratios, min_ratio, max_ratio, moment })
}
