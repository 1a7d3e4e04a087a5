//! Experiment configuration: a versioned JSON tree, validated into a
//! [`Plan`] before anything is computed.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use statrs::function::gamma::gamma;

use semilinear::analysis::small_data::power_decay;
use semilinear::space::build_lattice_space;
use semilinear::{GridFunction, HeatKernel, MetricMeasureGrid, Profile, TimeGrid};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub space: SpaceConfig,
    pub kernel: KernelConfig,
    /// Lower and upper bound profiles; derived from the kernel when absent.
    #[serde(default)]
    pub profiles: Option<ProfilePairConfig>,
    #[serde(default)]
    pub problem: Option<ProblemConfig>,
    #[serde(default)]
    pub time: Option<TimeConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub horizon: HorizonOptions,
    #[serde(default)]
    pub witness: WitnessOptions,
    #[serde(default)]
    pub verify_kernel: VerifyKernelOptions,
    #[serde(default)]
    pub harnack: HarnackOptions,
    #[serde(default)]
    pub integrals: Option<IntegralsOptions>,
    #[serde(default)]
    pub holder: HolderOptions,
    #[serde(default)]
    pub fujita_scan: Option<FujitaScanOptions>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceConfig {
    Lattice { dim: usize, radius: f64, points: usize },
    /// CSV files as read by `MetricMeasureGrid::read_point_cloud`, relative
    /// to the config file.
    PointCloud { weights: PathBuf, distances: PathBuf, alpha: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelConfig {
    GaussWeierstrass {
        n: u32,
    },
    CauchyPoisson {
        n: u32,
    },
    Profile {
        alpha: f64,
        beta: f64,
        profile: ProfileConfig,
        #[serde(default)]
        conservative: bool,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    Gauss { amplitude: f64, rate: f64, gamma: f64 },
    Cauchy { amplitude: f64, gamma: f64 },
    Table { s: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfilePairConfig {
    pub lower: ProfileConfig,
    pub upper: ProfileConfig,
}

/// Named analytic data families, sampled as functions of `d(x, x₀)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataConfig {
    Zero,
    Constant { value: f64 },
    /// `amplitude · exp(−(d/width)²)`
    GaussianBump { amplitude: f64, width: f64 },
    /// `delta / (1 + d^lambda)`
    PowerDecay { delta: f64, lambda: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub phi: DataConfig,
    #[serde(default = "zero_data")]
    pub f: DataConfig,
    pub p: f64,
}

fn zero_data() -> DataConfig {
    DataConfig::Zero
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_end: f64,
    pub steps: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub picard_tol: f64,
    pub max_iter: usize,
    /// Defaults to `10⁶ · max(‖φ‖∞, 1)`.
    pub blowup_cap: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { picard_tol: semilinear::solver::DEFAULT_TOL, max_iter: semilinear::solver::DEFAULT_MAX_ITER, blowup_cap: None }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HorizonOptions {
    pub ode_step: f64,
    pub t_limit: Option<f64>,
}

impl Default for HorizonOptions {
    fn default() -> Self {
        Self { ode_step: 1e-3, t_limit: None }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WitnessOptions {
    pub a1: f64,
    pub a2: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
    /// Allowed gap between fitted and expected growth exponents.
    pub exponent_tolerance: f64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self { a1: 1.0, a2: 2.0, t_min: 20.0, t_max: 2000.0, t_count: 24, exponent_tolerance: 0.05 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyKernelOptions {
    pub t_samples: Vec<f64>,
    /// Point indices; defaults to 9 points spread along the first axis.
    pub x_samples: Option<Vec<usize>>,
    pub max_deficit: f64,
    pub max_semigroup_residual: f64,
    pub two_sided: bool,
}

impl Default for VerifyKernelOptions {
    fn default() -> Self {
        Self {
            t_samples: vec![0.1, 0.25, 0.5, 1.0],
            x_samples: None,
            max_deficit: 1e-4,
            max_semigroup_residual: 1e-3,
            two_sided: true,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HarnackOptions {
    pub a1: f64,
    pub a2: f64,
    pub samples: usize,
    pub times: Vec<f64>,
    pub tolerance: f64,
}

impl Default for HarnackOptions {
    fn default() -> Self {
        Self { a1: 1.0, a2: 2.0, samples: 100, times: vec![0.25, 1.0, 4.0], tolerance: 1e-6 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegralsOptions {
    pub lambda1: f64,
    pub lambda2: f64,
    #[serde(default)]
    pub x_samples: Option<Vec<usize>>,
    #[serde(default)]
    pub moment: Option<MomentOptions>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentOptions {
    pub lambda: f64,
    pub times: Vec<f64>,
    /// Defaults to the upper bound profile.
    #[serde(default)]
    pub profile: Option<ProfileConfig>,
    #[serde(default = "default_spread")]
    pub max_spread: f64,
}

fn default_spread() -> f64 {
    0.05
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HolderOptions {
    pub theta1: f64,
    pub theta2: f64,
    pub tolerance: f64,
}

impl Default for HolderOptions {
    fn default() -> Self {
        Self { theta1: 1.0, theta2: 1.0, tolerance: 0.05 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FujitaScanOptions {
    pub p_values: Vec<f64>,
    #[serde(default)]
    pub witness: WitnessOptions,
}

/// A validated experiment ready to run.
#[derive(Debug)]
pub struct Plan {
    pub space: MetricMeasureGrid,
    pub kernel: HeatKernel,
    pub lower: Profile,
    pub upper: Profile,
    pub problem: Option<ProblemData>,
    pub grid: Option<TimeGrid>,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub horizon: HorizonOptions,
    pub witness: WitnessOptions,
    pub verify_kernel: VerifyKernelOptions,
    pub harnack: HarnackOptions,
    pub integrals: Option<IntegralsOptions>,
    pub moment_profile: Option<Profile>,
    pub holder: HolderOptions,
    pub fujita_scan: Option<FujitaScanOptions>,
}

#[derive(Debug, Clone)]
pub struct ProblemData {
    pub phi: GridFunction,
    pub f: GridFunction,
    pub p: f64,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn cfg<T>(r: semilinear::Result<T>, what: &str) -> Result<T, ConfigError> {
    r.map_err(|e| ConfigError(format!("{what}: {e}")))
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), ConfigError> {
    if cond {
        Ok(())
    } else {
        Err(ConfigError(msg.into()))
    }
}

pub fn load(path: &Path, seed_override: Option<u64>) -> Result<Plan, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let config: ExperimentConfig =
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    build_plan(config, base, seed_override)
}

pub fn profile_from(c: &ProfileConfig) -> Result<Profile, ConfigError> {
    cfg(
        match c {
            ProfileConfig::Gauss { amplitude, rate, gamma } => Profile::gauss(*amplitude, *rate, *gamma),
            ProfileConfig::Cauchy { amplitude, gamma } => Profile::cauchy(*amplitude, *gamma),
            ProfileConfig::Table { s, values } => Profile::table(s.clone(), values.clone()),
        },
        "profile",
    )
}

/// Two-sided bound profiles of the built-in kernels.
fn kernel_profiles(kernel: &KernelConfig) -> Result<(Profile, Profile), ConfigError> {
    match kernel {
        KernelConfig::GaussWeierstrass { n } => {
            let g = cfg(Profile::gauss((4.0 * PI).powf(-(*n as f64) / 2.0), 0.25, 2.0), "profile")?;
            Ok((g.clone(), g))
        }
        KernelConfig::CauchyPoisson { n } => {
            // (1+s)²/2 ≤ 1+s² ≤ (1+s)²
            let h = (*n as f64 + 1.0) / 2.0;
            let c = gamma(h) / PI.powf(h);
            let gamma = *n as f64 + 1.0;
            Ok((cfg(Profile::cauchy(c, gamma), "profile")?, cfg(Profile::cauchy(c * 2f64.powf(h), gamma), "profile")?))
        }
        KernelConfig::Profile { profile, .. } => {
            let p = profile_from(profile)?;
            Ok((p.clone(), p))
        }
    }
}

pub fn sample_data(space: &MetricMeasureGrid, d: &DataConfig, what: &str) -> Result<GridFunction, ConfigError> {
    let n = space.len();
    let g = match *d {
        DataConfig::Zero => GridFunction::zeros(n),
        DataConfig::Constant { value } => {
            require(value >= 0.0 && value.is_finite(), format!("{what}: constant must be nonnegative"))?;
            GridFunction::constant(n, value)
        }
        DataConfig::GaussianBump { amplitude, width } => {
            require(amplitude >= 0.0 && width > 0.0, format!("{what}: bump needs amplitude >= 0 and width > 0"))?;
            GridFunction::from_fn(space, |i| amplitude * (-(space.dist_x0(i) / width).powi(2)).exp())
        }
        DataConfig::PowerDecay { delta, lambda } => {
            require(delta >= 0.0 && lambda > 0.0, format!("{what}: power decay needs delta >= 0 and lambda > 0"))?;
            power_decay(space, space.x0(), delta, lambda)
        }
    };
    require(g.is_finite(), format!("{what}: sampled values are not finite"))?;
    Ok(g)
}

fn build_plan(c: ExperimentConfig, base: &Path, seed_override: Option<u64>) -> Result<Plan, ConfigError> {
    require(c.version == CONFIG_VERSION, format!("unsupported config version {} (expected {CONFIG_VERSION})", c.version))?;
    let space = match &c.space {
        SpaceConfig::Lattice { dim, radius, points } => cfg(build_lattice_space(*dim, *radius, *points), "space")?,
        SpaceConfig::PointCloud { weights, distances, alpha } => cfg(
            MetricMeasureGrid::read_point_cloud(&base.join(weights), &base.join(distances), *alpha),
            "space",
        )?,
    };
    let kernel = match &c.kernel {
        KernelConfig::GaussWeierstrass { n } => cfg(HeatKernel::gauss_weierstrass(*n), "kernel")?,
        KernelConfig::CauchyPoisson { n } => cfg(HeatKernel::cauchy_poisson(*n), "kernel")?,
        KernelConfig::Profile { alpha, beta, profile, conservative } => {
            cfg(HeatKernel::profile(*alpha, *beta, profile_from(profile)?), "kernel")?.with_conservative_claim(*conservative)
        }
    };
    let (lower, upper) = match &c.profiles {
        Some(pair) => (profile_from(&pair.lower)?, profile_from(&pair.upper)?),
        None => kernel_profiles(&c.kernel)?,
    };
    let problem = match &c.problem {
        Some(pc) => {
            require(pc.p > 1.0 && pc.p.is_finite(), format!("problem.p must exceed 1, got {}", pc.p))?;
            Some(ProblemData {
                phi: sample_data(&space, &pc.phi, "problem.phi")?,
                f: sample_data(&space, &pc.f, "problem.f")?,
                p: pc.p,
            })
        }
        None => None,
    };
    let grid = match &c.time {
        Some(t) => Some(cfg(TimeGrid::uniform(t.t_end, t.steps), "time")?),
        None => None,
    };
    let tol = &c.tolerances;
    require(tol.picard_tol > 0.0, "tolerances.picard_tol must be positive")?;
    require(tol.max_iter > 0, "tolerances.max_iter must be at least 1")?;
    if let (Some(cap), Some(pd)) = (tol.blowup_cap, &problem) {
        require(cap > pd.phi.sup_norm(), "tolerances.blowup_cap must exceed sup phi")?;
    }
    require(c.horizon.ode_step > 0.0, "horizon.ode_step must be positive")?;
    require(c.horizon.t_limit.is_none_or(|t| t > 0.0), "horizon.t_limit must be positive")?;
    check_witness(&c.witness, "witness")?;
    let vk = &c.verify_kernel;
    require(!vk.t_samples.is_empty() && vk.t_samples.iter().all(|t| *t > 0.0), "verify_kernel.t_samples must be positive")?;
    if let Some(xs) = &vk.x_samples {
        require(!xs.is_empty() && xs.iter().all(|&x| x < space.len()), "verify_kernel.x_samples out of range")?;
    }
    let h = &c.harnack;
    require(h.samples > 0 && !h.times.is_empty() && h.times.iter().all(|t| *t > 0.0), "harnack needs samples > 0 and positive times")?;
    cfg(semilinear::analysis::harnack_constants(h.a1, h.a2, kernel.alpha(), kernel.beta()), "harnack")?;
    let mut moment_profile = None;
    if let Some(io) = &c.integrals {
        require(io.lambda1 > 0.0 && io.lambda2 > 0.0, "integrals.lambda1, lambda2 must be positive")?;
        if let Some(xs) = &io.x_samples {
            require(!xs.is_empty() && xs.iter().all(|&x| x < space.len()), "integrals.x_samples out of range")?;
        }
        if let Some(m) = &io.moment {
            require(m.lambda > 0.0 && m.lambda <= 1.0, "integrals.moment.lambda must lie in (0, 1]")?;
            require(!m.times.is_empty() && m.times.iter().all(|t| *t > 0.0), "integrals.moment.times must be positive")?;
            moment_profile = Some(match &m.profile {
                Some(p) => profile_from(p)?,
                None => upper.clone(),
            });
        }
    }
    let ho = &c.holder;
    cfg(semilinear::analysis::HolderParams::new(ho.theta1, ho.theta2, 1.0, 1.0, 0.0, kernel.beta()), "holder")?;
    if let Some(fs) = &c.fujita_scan {
        require(!fs.p_values.is_empty() && fs.p_values.iter().all(|p| *p > 1.0), "fujita_scan.p_values must exceed 1")?;
        check_witness(&fs.witness, "fujita_scan")?;
    }
    Ok(Plan {
        space,
        kernel,
        lower,
        upper,
        problem,
        grid,
        tolerances: c.tolerances,
        seed: seed_override.or(c.seed).unwrap_or(0),
        horizon: c.horizon,
        witness: c.witness,
        verify_kernel: c.verify_kernel,
        harnack: c.harnack,
        integrals: c.integrals,
        moment_profile,
        holder: c.holder,
        fujita_scan: c.fujita_scan,
    })
}

fn check_witness(w: &WitnessOptions, what: &str) -> Result<(), ConfigError> {
    require(
        w.t_min > 0.0 && w.t_max > w.t_min && w.t_count >= 3,
        format!("{what}: need 0 < t_min < t_max and t_count >= 3"),
    )?;
    require(w.exponent_tolerance > 0.0, format!("{what}: exponent_tolerance must be positive"))
}
