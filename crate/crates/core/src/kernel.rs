//! Heat kernels `k(t, x, y)` and numerical checks of the kernel axioms:
//! positivity, symmetry, the semigroup (Chapman–Kolmogorov) identity,
//! conservativeness, two-sided profile bounds and spatial Hölder continuity.
//!
//! Every family here depends on `(x, y)` only through `d(x, y)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::error::{invalid, Result};
use crate::numeric::{least_squares, log_space};
use crate::profiles::Profile;
use crate::space::MetricMeasureGrid;

#[derive(Debug, Clone, PartialEq)]
pub enum KernelFamily {
    /// `(4πt)^{-n/2} exp(-d²/4t)` on `ℝⁿ`; `α = n`, `β = 2`.
    GaussWeierstrass { n: u32 },
    /// `C_n t^{-n} (1 + d²/t²)^{-(n+1)/2}` on `ℝⁿ`; `α = n`, `β = 1`.
    CauchyPoisson { n: u32 },
    /// `t^{-α/β} Φ(d / t^{1/β})`: a bound template with prescribed exponents.
    Profile { alpha: f64, beta: f64, profile: Profile },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatKernel {
    family: KernelFamily,
    conservative_claim: bool,
    // cached C_n for Cauchy–Poisson
    norm: f64,
}

impl HeatKernel {
    pub fn gauss_weierstrass(n: u32) -> Result<Self> {
        if n == 0 {
            return invalid("Gauss–Weierstrass dimension must be >= 1");
        }
        Ok(Self {
            family: KernelFamily::GaussWeierstrass { n },
            conservative_claim: true,
            norm: (4.0 * PI).powf(-(n as f64) / 2.0),
        })
    }

    pub fn cauchy_poisson(n: u32) -> Result<Self> {
        if n == 0 {
            return invalid("Cauchy–Poisson dimension must be >= 1");
        }
        let h = (n as f64 + 1.0) / 2.0;
        Ok(Self {
            family: KernelFamily::CauchyPoisson { n },
            conservative_claim: true,
            norm: gamma(h) / PI.powf(h),
        })
    }

    pub fn profile(alpha: f64, beta: f64, profile: Profile) -> Result<Self> {
        if !(alpha > 0.0) || !(beta > 0.0) {
            return invalid(format!("profile kernel needs alpha, beta > 0 (got {alpha}, {beta})"));
        }
        Ok(Self {
            family: KernelFamily::Profile { alpha, beta, profile },
            conservative_claim: false,
            norm: 1.0,
        })
    }

    pub fn with_conservative_claim(mut self, claim: bool) -> Self {
        self.conservative_claim = claim;
        self
    }

    pub fn family(&self) -> &KernelFamily {
        &self.family
    }

    pub fn conservative_claim(&self) -> bool {
        self.conservative_claim
    }

    /// Volume-growth exponent `α`.
    pub fn alpha(&self) -> f64 {
        match &self.family {
            KernelFamily::GaussWeierstrass { n } | KernelFamily::CauchyPoisson { n } => *n as f64,
            KernelFamily::Profile { alpha, .. } => *alpha,
        }
    }

    /// Walk dimension `β`.
    pub fn beta(&self) -> f64 {
        match &self.family {
            KernelFamily::GaussWeierstrass { .. } => 2.0,
            KernelFamily::CauchyPoisson { .. } => 1.0,
            KernelFamily::Profile { beta, .. } => *beta,
        }
    }

    /// Closed-form density at time `t > 0` and distance `d` (unchecked).
    #[inline]
    pub fn eval_distance(&self, t: f64, d: f64) -> f64 {
        match &self.family {
            KernelFamily::GaussWeierstrass { n } => {
                self.norm * t.powf(-(*n as f64) / 2.0) * (-d * d / (4.0 * t)).exp()
            }
            KernelFamily::CauchyPoisson { n } => {
                let nf = *n as f64;
                let q = d / t;
                self.norm * t.powf(-nf) * (1.0 + q * q).powf(-(nf + 1.0) / 2.0)
            }
            KernelFamily::Profile { alpha, beta, profile } => {
                t.powf(-alpha / beta) * profile.eval(d * t.powf(-1.0 / beta))
            }
        }
    }

    #[inline]
    pub fn eval(&self, space: &MetricMeasureGrid, t: f64, x: usize, y: usize) -> f64 {
        self.eval_distance(t, space.dist(x, y))
    }

    /// Short family label for reports.
    pub fn label(&self) -> String {
        match &self.family {
            KernelFamily::GaussWeierstrass { n } => format!("gauss_weierstrass({n})"),
            KernelFamily::CauchyPoisson { n } => format!("cauchy_poisson({n})"),
            KernelFamily::Profile { alpha, beta, profile } => {
                format!("profile(alpha={alpha}, beta={beta}, {profile})")
            }
        }
    }
}

pub fn kernel_eval(kernel: &HeatKernel, space: &MetricMeasureGrid, t: f64, x: usize, y: usize) -> Result<f64> {
    if !(t > 0.0) {
        return invalid(format!("kernel time must be positive, got {t}"));
    }
    space.check_index(x)?;
    space.check_index(y)?;
    Ok(kernel.eval(space, t, x, y))
}

/// `∫ k(t, x, y) dμ(y)` by quadrature.
pub fn kernel_mass(kernel: &HeatKernel, space: &MetricMeasureGrid, t: f64, x: usize) -> f64 {
    (0..space.len())
        .map(|y| kernel.eval(space, t, x, y) * space.weight(y))
        .sum()
}

/// Kernel mass carried by points within 1.5 spacings of the lattice edge.
/// Zero for point clouds (no boundary is known).
pub fn boundary_mass(kernel: &HeatKernel, space: &MetricMeasureGrid, t: f64, x: usize) -> f64 {
    let Some(l) = space.lattice() else { return 0.0 };
    let band = 1.5 * l.spacing;
    (0..space.len())
        .filter(|&y| space.boundary_distance(y).unwrap_or(f64::INFINITY) < band)
        .map(|y| kernel.eval(space, t, x, y) * space.weight(y))
        .sum()
}

/// Tolerance on boundary-adjacent kernel mass above which a truncation
/// warning is raised.
pub const BOUNDARY_MASS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedReport {
    pub holds: bool,
    /// Smallest slack of either inequality, `min(t^{α/β}k − Φ₁, Φ₂ − t^{α/β}k)`.
    pub worst_margin: f64,
    /// Sample `(t, d)` where the worst margin occurs.
    pub worst_at: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelHolderFit {
    pub l: f64,
    pub nu: f64,
    pub sigma: f64,
    /// Unconstrained regression exponents before projection.
    pub raw_nu: f64,
    pub raw_sigma: f64,
    /// True when the unconstrained fit violated `ν ≥ 1` or `0 < σ ≤ 1`.
    pub projected: bool,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelAxiomReport {
    /// Largest sampled `∫ k(t,x,·) dμ`.
    pub markov_mass: f64,
    /// Smallest sampled mass.
    pub min_mass: f64,
    /// No negative or non-finite density values (far tails may underflow to 0).
    pub positivity_ok: bool,
    pub symmetry_residual: f64,
    /// Largest relative Chapman–Kolmogorov error over sampled `(s, t, x, z)`.
    pub semigroup_residual: f64,
    /// Largest `|1 − mass|` at interior samples; `None` unless the kernel
    /// claims to be conservative.
    pub conservative_deficit: Option<f64>,
    /// Largest boundary-adjacent kernel mass over the samples.
    pub boundary_mass: f64,
    pub boundary_warning: bool,
    pub two_sided: Option<TwoSidedReport>,
    pub holder: Option<KernelHolderFit>,
}

/// Interior samples: at least half the truncation radius from the lattice
/// edge. Point clouds keep every sample.
fn interior_samples(space: &MetricMeasureGrid, x_samples: &[usize]) -> Vec<usize> {
    match space.lattice() {
        Some(l) => x_samples
            .iter()
            .copied()
            .filter(|&x| space.boundary_distance(x).unwrap_or(0.0) >= 0.5 * l.radius - 1e-12)
            .collect(),
        None => x_samples.to_vec(),
    }
}

pub fn verify_kernel_axioms(
    kernel: &HeatKernel,
    space: &MetricMeasureGrid,
    t_samples: &[f64],
    x_samples: &[usize],
) -> Result<KernelAxiomReport> {
    if t_samples.is_empty() || x_samples.is_empty() {
        return invalid("kernel axiom check needs nonempty t and x samples");
    }
    if let Some(t) = t_samples.iter().find(|t| !(**t > 0.0)) {
        return invalid(format!("sample times must be positive, got {t}"));
    }
    for &x in x_samples {
        space.check_index(x)?;
    }
    let interior = interior_samples(space, x_samples);
    if interior.is_empty() {
        return invalid("no sample point lies at least half the truncation radius from the boundary");
    }

    let mut markov = 0.0_f64;
    let mut min_mass = f64::INFINITY;
    let mut positivity_ok = true;
    let mut symmetry = 0.0_f64;
    let mut deficit = 0.0_f64;
    let mut bmass = 0.0_f64;
    for &t in t_samples {
        for &x in x_samples {
            let mass = kernel_mass(kernel, space, t, x);
            markov = markov.max(mass);
            min_mass = min_mass.min(mass);
            for y in 0..space.len() {
                let kxy = kernel.eval(space, t, x, y);
                positivity_ok &= kxy >= 0.0 && kxy.is_finite();
                symmetry = symmetry.max((kxy - kernel.eval(space, t, y, x)).abs());
            }
        }
        for &x in &interior {
            deficit = deficit.max((1.0 - kernel_mass(kernel, space, t, x)).abs());
            bmass = bmass.max(boundary_mass(kernel, space, t, x));
        }
    }

    let mut tuples = Vec::new();
    for &s in t_samples {
        for &t in t_samples {
            for &x in &interior {
                for &z in &interior {
                    tuples.push((s, t, x, z));
                }
            }
        }
    }
    let semigroup = tuples
        .par_iter()
        .map(|&(s, t, x, z)| {
            let composed: f64 = (0..space.len())
                .map(|y| kernel.eval(space, s, x, y) * kernel.eval(space, t, y, z) * space.weight(y))
                .sum();
            let direct = kernel.eval(space, s + t, x, z);
            (composed - direct).abs() / direct
        })
        .reduce(|| 0.0, f64::max);

    Ok(KernelAxiomReport {
        markov_mass: markov,
        min_mass,
        positivity_ok,
        symmetry_residual: symmetry,
        semigroup_residual: semigroup,
        conservative_deficit: kernel.conservative_claim().then_some(deficit),
        boundary_mass: bmass,
        boundary_warning: bmass > BOUNDARY_MASS_TOL,
        two_sided: None,
        holder: None,
    })
}

/// Checks `Φ₁(d/t^{1/β}) ≤ t^{α/β} k(t,x,y) ≤ Φ₂(d/t^{1/β})` on samples.
pub fn verify_two_sided(
    kernel: &HeatKernel,
    phi1: &Profile,
    phi2: &Profile,
    space: &MetricMeasureGrid,
    t_samples: &[f64],
    pair_samples: &[(usize, usize)],
) -> Result<TwoSidedReport> {
    if t_samples.is_empty() || pair_samples.is_empty() {
        return invalid("two-sided check needs nonempty samples");
    }
    let (a, b) = (kernel.alpha(), kernel.beta());
    let mut holds = true;
    let mut worst = f64::INFINITY;
    let mut worst_at = (0.0, 0.0);
    for &t in t_samples {
        if !(t > 0.0) {
            return invalid("sample times must be positive");
        }
        for &(x, y) in pair_samples {
            space.check_index(x)?;
            space.check_index(y)?;
            let d = space.dist(x, y);
            let s = d * t.powf(-1.0 / b);
            let scaled = t.powf(a / b) * kernel.eval_distance(t, d);
            let lo = phi1.eval(s);
            let hi = phi2.eval(s);
            let slack = (scaled - lo).min(hi - scaled);
            // relative slack absorbs rounding in equality cases
            let tol = 1e-12 * hi.max(scaled);
            if scaled < lo - tol || scaled > hi + tol {
                holds = false;
            }
            if slack < worst {
                worst = slack;
                worst_at = (t, d);
            }
        }
    }
    Ok(TwoSidedReport { holds, worst_margin: worst, worst_at })
}

/// Default Hölder sample design: 32 log-spaced times on `[10⁻², 10]` and up
/// to 128 point pairs anchored at the reference point with log-spaced
/// distances between the grid spacing and a quarter of the extent.
pub fn holder_sample_design(space: &MetricMeasureGrid) -> (Vec<f64>, Vec<(usize, usize)>) {
    let ts = log_space(1e-2, 10.0, 32);
    let x0 = space.x0();
    let dmin = space.min_spacing();
    let dmax = match space.lattice() {
        Some(l) => 0.25 * l.radius,
        None => (0..space.len()).map(|j| space.dist(x0, j)).fold(0.0, f64::max) * 0.25,
    }
    .max(dmin);
    let mut others: Vec<(f64, usize)> = (0..space.len())
        .filter(|&j| j != x0)
        .map(|j| (space.dist(x0, j), j))
        .collect();
    others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for target in log_space(dmin, dmax, 128) {
        let k = others.partition_point(|(d, _)| *d < target * (1.0 - 1e-9));
        if let Some(&(_, j)) = others.get(k) {
            if !pairs.contains(&(x0, j)) && !pairs.iter().any(|&(_, q)| space.dist(x0, q) == space.dist(x0, j)) {
                pairs.push((x0, j));
            }
        }
    }
    (ts, pairs)
}

/// Fits `sup_y |k(t,x₁,y) − k(t,x₂,y)| ≤ L t^{-ν} d(x₁,x₂)^σ`.
///
/// Only pairs with `d ≤ t^{1/β}/2` enter the regression: there the
/// difference is governed by the spatial derivative of the kernel, while
/// for larger separations it saturates at `2 sup k` and carries no
/// information about `σ`. The fitted `(ν, σ)` are projected onto `ν ≥ 1`,
/// `0 < σ ≤ 1`, and `L` is raised until the bound holds on every sample.
pub fn estimate_holder_kernel(
    kernel: &HeatKernel,
    space: &MetricMeasureGrid,
    t_samples: &[f64],
    pair_samples: &[(usize, usize)],
) -> Result<KernelHolderFit> {
    if t_samples.iter().any(|t| !(*t > 0.0)) {
        return invalid("sample times must be positive");
    }
    let beta = kernel.beta();
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for &t in t_samples {
        for &(x1, x2) in pair_samples {
            space.check_index(x1)?;
            space.check_index(x2)?;
            let d = space.dist(x1, x2);
            if d > 0.0 && d <= 0.5 * t.powf(1.0 / beta) {
                samples.push((t, d));
            }
        }
    }
    let distinct_t = samples.iter().any(|s| s.0 != samples[0].0);
    let distinct_d = samples.iter().any(|s| s.1 != samples[0].1);
    if samples.len() < 3 || !distinct_t || !distinct_d {
        return invalid("degenerate Hölder sample set: need several distinct times and distances");
    }

    let pair_of: Vec<(usize, usize)> = pair_samples.to_vec();
    let diffs: Vec<(f64, f64, f64)> = t_samples
        .par_iter()
        .flat_map_iter(|&t| {
            pair_of
                .iter()
                .filter_map(|&(x1, x2)| {
                    let d = space.dist(x1, x2);
                    if !(d > 0.0 && d <= 0.5 * t.powf(1.0 / beta)) {
                        return None;
                    }
                    let sup = (0..space.len())
                        .map(|y| (kernel.eval(space, t, x1, y) - kernel.eval(space, t, x2, y)).abs())
                        .fold(0.0, f64::max);
                    Some((t, d, sup))
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let usable: Vec<&(f64, f64, f64)> = diffs.iter().filter(|s| s.2 > 1e-300).collect();
    let (raw_nu, raw_sigma) = if usable.len() >= 3 {
        let rows: Vec<Vec<f64>> = usable.iter().map(|s| vec![1.0, -s.0.ln(), s.1.ln()]).collect();
        let y: Vec<f64> = usable.iter().map(|s| s.2.ln()).collect();
        match least_squares(&rows, &y) {
            Some(beta_hat) => (beta_hat[1], beta_hat[2]),
            None => (1.0, 1.0),
        }
    } else {
        // kernel (numerically) constant in space: any exponents work with L = 0
        (1.0, 1.0)
    };
    let nu = raw_nu.max(1.0);
    let sigma = raw_sigma.clamp(1e-6, 1.0);
    let projected = nu != raw_nu || sigma != raw_sigma;
    let l = diffs
        .iter()
        .map(|&(t, d, sup)| sup * t.powf(nu) / d.powf(sigma))
        .fold(0.0, f64::max);
    Ok(KernelHolderFit {
        l,
        nu,
        sigma,
        raw_nu,
        raw_sigma,
        projected,
        samples: diffs.len(),
    })
}
