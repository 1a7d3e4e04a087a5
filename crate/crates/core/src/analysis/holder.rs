//! Spatial Hölder regularity of grid functions.

use crate::error::{invalid, Result};
use crate::numeric::{fit_line, log_space};
use crate::space::{GridFunction, MetricMeasureGrid};

/// Regularity data: Hölder exponents of the data and the kernel's
/// `|k(t,x₁,y) − k(t,x₂,y)| ≤ L t^{-ν} d(x₁,x₂)^σ` parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderParams {
    pub theta1: f64,
    pub theta2: f64,
    pub sigma: f64,
    pub nu: f64,
    pub l: f64,
    pub beta: f64,
}

impl HolderParams {
    pub fn new(theta1: f64, theta2: f64, sigma: f64, nu: f64, l: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("theta1", theta1), ("theta2", theta2), ("sigma", sigma)] {
            if !(v > 0.0 && v <= 1.0) {
                return invalid(format!("{name} must lie in (0, 1], got {v}"));
            }
        }
        if !(nu >= 1.0) || !(beta > 0.0) || !(l >= 0.0) {
            return invalid(format!("need nu >= 1, beta > 0, L >= 0 (got {nu}, {beta}, {l})"));
        }
        Ok(Self { theta1, theta2, sigma, nu, l, beta })
    }

    /// `θ = θ₁σ/(θ₁ + νβ)`
    pub fn theta(&self) -> f64 {
        self.theta1 * self.sigma / (self.theta1 + self.nu * self.beta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderEstimate {
    pub theta_hat: f64,
    pub c_hat: f64,
    pub theoretical_theta: f64,
    pub pass: bool,
    pub pairs_used: usize,
}

pub const MIN_PAIRS: usize = 50;
pub const FIT_TOLERANCE: f64 = 0.05;
const MAX_ANCHORS: usize = 256;
const BINS: usize = 24;

/// Point pairs with `0 < d ≤ 1`, anchored at up to 256 evenly spread points.
pub fn holder_pairs(space: &MetricMeasureGrid) -> Vec<(usize, usize)> {
    let n = space.len();
    let stride = n.div_ceil(MAX_ANCHORS).max(1);
    let mut pairs = Vec::new();
    for a in (0..n).step_by(stride) {
        for b in 0..n {
            let d = space.dist(a, b);
            if d > 0.0 && d <= 1.0 {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

/// Fits `|u(x₁) − u(x₂)| ≤ C d^θ` on pairs with `d ≤ 1`.
///
/// The per-bin maxima of the differences over log-spaced distance bins form
/// an upper envelope; its log-log slope (capped at 1) gives `θ̂`, and `Ĉ` is
/// the smallest constant for which the bound holds on every sampled pair.
pub fn holder_estimate(u: &GridFunction, space: &MetricMeasureGrid, params: &HolderParams) -> Result<HolderEstimate> {
    u.check_len(space.len())?;
    let pairs = holder_pairs(space);
    if pairs.len() < MIN_PAIRS {
        return invalid(format!("need at least {MIN_PAIRS} pairs with d <= 1, found {}", pairs.len()));
    }
    let samples: Vec<(f64, f64)> = pairs.iter().map(|&(a, b)| (space.dist(a, b), (u[a] - u[b]).abs())).collect();
    let dmin = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let dmax = samples.iter().map(|s| s.0).fold(0.0, f64::max);

    let mut envelope: Vec<(f64, f64)> = Vec::new();
    if dmax > dmin * (1.0 + 1e-9) {
        let edges = log_space(dmin, dmax, BINS + 1);
        let mut best = vec![(0.0_f64, 0.0_f64); BINS];
        for &(d, diff) in &samples {
            let k = edges.partition_point(|e| *e <= d).saturating_sub(1).min(BINS - 1);
            if diff > best[k].1 {
                best[k] = (d, diff);
            }
        }
        envelope = best.into_iter().filter(|b| b.1 > 0.0).collect();
    }
    let theta_hat = if envelope.len() >= 2 {
        let x: Vec<f64> = envelope.iter().map(|b| b.0.ln()).collect();
        let y: Vec<f64> = envelope.iter().map(|b| b.1.ln()).collect();
        fit_line(&x, &y).map_or(1.0, |(s, _)| s.clamp(0.0, 1.0))
    } else {
        1.0
    };
    let c_hat = samples.iter().map(|&(d, diff)| diff / d.powf(theta_hat)).fold(0.0, f64::max);
    let theoretical_theta = params.theta();
    Ok(HolderEstimate {
        theta_hat,
        c_hat,
        theoretical_theta,
        pass: theta_hat >= theoretical_theta - FIT_TOLERANCE,
        pairs_used: samples.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::build_lattice_space;

    fn params() -> HolderParams {
        HolderParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 2.0).unwrap()
    }

    #[test]
    fn theta_formula_and_bounds() {
        let p = HolderParams::new(0.5, 0.7, 0.9, 1.5, 1.0, 2.0).unwrap();
        let th = p.theta();
        assert!((th - 0.5 * 0.9 / 3.5).abs() < 1e-15);
        assert!(th <= p.theta1 && th <= p.sigma / p.nu);
        assert!(HolderParams::new(0.0, 1.0, 1.0, 1.0, 1.0, 2.0).is_err());
        assert!(HolderParams::new(1.0, 1.0, 1.0, 0.5, 1.0, 2.0).is_err());
    }

    #[test]
    fn constant_field() {
        let space = build_lattice_space(1, 5.0, 201).unwrap();
        let est = holder_estimate(&GridFunction::constant(201, 2.0), &space, &params()).unwrap();
        assert_eq!(est.theta_hat, 1.0);
        assert_eq!(est.c_hat, 0.0);
    }

    #[test]
    fn too_few_pairs() {
        let space = build_lattice_space(1, 10.0, 11).unwrap();
        assert!(holder_estimate(&GridFunction::zeros(11), &space, &params()).is_err());
    }

    #[test]
    fn bound_holds_on_every_pair() {
        let space = build_lattice_space(1, 5.0, 201).unwrap();
        let u = GridFunction::from_fn(&space, |i| space.coords(i).unwrap()[0].abs().powf(0.3));
        let est = holder_estimate(&u, &space, &params()).unwrap();
        for (a, b) in holder_pairs(&space) {
            let d = space.dist(a, b);
            assert!((u[a] - u[b]).abs() <= est.c_hat * d.powf(est.theta_hat) * (1.0 + 1e-12));
        }
    }
}
