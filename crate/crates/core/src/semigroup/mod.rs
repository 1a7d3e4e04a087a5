//! The heat semigroup `K_t g(x) = ∫ k(t,x,y) g(y) dμ(y)` by quadrature, and
//! the time integrals of the weak-solution formula:
//!
//! ```text
//! u(t) = K_t φ + ∫₀ᵗ K_τ f dτ + ∫₀ᵗ K_{t−τ} u(τ)^p dτ
//! ```
//!
//! Time integrals use the trapezoidal rule on a [`TimeGrid`], with the
//! `K_0 = identity` limit supplied at the endpoints.
//!
//! Two backends compute `K_t g`: a dense `O(N²)` sum that works on any
//! space, and a zero-padded FFT convolution used automatically on uniform
//! lattices. Both evaluate the same discrete sum.

mod fft;

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::kernel::HeatKernel;
use crate::space::{GridFunction, MetricMeasureGrid};

use fft::LatticeFft;

/// Quadrature rule used for the time integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Trapezoid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    nodes: Vec<f64>,
    scheme: Scheme,
    // step of a uniform grid; lags are then exact multiples
    uniform_step: Option<f64>,
}

impl TimeGrid {
    /// `steps + 1` equally spaced nodes on `[0, t_end]`.
    pub fn uniform(t_end: f64, steps: usize) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return invalid(format!("time grid end must be positive, got {t_end}"));
        }
        if steps < 1 {
            return invalid("time grid needs at least one step");
        }
        let dt = t_end / steps as f64;
        let nodes = (0..=steps).map(|i| i as f64 * dt).collect();
        Ok(Self { nodes, scheme: Scheme::Trapezoid, uniform_step: Some(dt) })
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return invalid("time grid needs at least 2 nodes");
        }
        if nodes[0] != 0.0 {
            return invalid(format!("time grid must start at 0, got {}", nodes[0]));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return invalid("time grid nodes must be finite and strictly increasing");
        }
        Ok(Self { nodes, scheme: Scheme::Trapezoid, uniform_step: None })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn uniform_step(&self) -> Option<f64> {
        self.uniform_step
    }

    pub fn t_end(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// `t_i − t_j`, exact on uniform grids.
    pub fn lag(&self, i: usize, j: usize) -> f64 {
        match self.uniform_step {
            Some(dt) => (i - j) as f64 * dt,
            None => self.nodes[i] - self.nodes[j],
        }
    }

    /// Trapezoid weights for `∫₀^{t_i}` over nodes `0..=i`.
    pub fn trapezoid_weights(&self, i: usize) -> Vec<f64> {
        let mut w = vec![0.0; i + 1];
        for k in 0..i {
            let h = 0.5 * (self.nodes[k + 1] - self.nodes[k]);
            w[k] += h;
            w[k + 1] += h;
        }
        w
    }
}

/// Values `u(t_i, ·)` on the nodes of a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    values: Vec<GridFunction>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, values: Vec<GridFunction>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::SizeMismatch { expected: times.len(), got: values.len() });
        }
        if let Some(first) = values.first() {
            for v in &values {
                v.check_len(first.len())?;
            }
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[GridFunction] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn at(&self, i: usize) -> &GridFunction {
        &self.values[i]
    }

    pub fn last(&self) -> Option<&GridFunction> {
        self.values.last()
    }

    /// Index of the node closest to `t`.
    pub fn nearest_index(&self, t: f64) -> Option<usize> {
        (0..self.times.len()).min_by(|&a, &b| (self.times[a] - t).abs().total_cmp(&(self.times[b] - t).abs()))
    }

    pub fn sup_norms(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.sup_norm()).collect()
    }

    /// Rows `t,point_id,value`.
    pub fn write_csv_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "point_id", "value"])?;
        for (t, v) in self.times.iter().zip(&self.values) {
            for (j, x) in v.iter().enumerate() {
                w.write_record([format!("{t}"), j.to_string(), format!("{x}")])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        self.write_csv_to(std::fs::File::create(path)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Dense,
    Fft,
}

const SPECTRUM_CACHE_LIMIT: usize = 1024;

/// `K_t` bound to a kernel and a space, with cached kernel spectra.
#[derive(Debug)]
pub struct Semigroup<'a> {
    kernel: &'a HeatKernel,
    space: &'a MetricMeasureGrid,
    fft: Option<LatticeFft>,
    cache: Mutex<HashMap<u64, Arc<Vec<Complex64>>>>,
}

impl<'a> Semigroup<'a> {
    /// FFT backend on uniform lattices, dense otherwise.
    pub fn new(kernel: &'a HeatKernel, space: &'a MetricMeasureGrid) -> Self {
        let fft = space.lattice().map(|l| LatticeFft::new(l, space.weight(0)));
        Self { kernel, space, fft, cache: Mutex::new(HashMap::new()) }
    }

    pub fn dense(kernel: &'a HeatKernel, space: &'a MetricMeasureGrid) -> Self {
        Self { kernel, space, fft: None, cache: Mutex::new(HashMap::new()) }
    }

    pub fn backend(&self) -> Backend {
        if self.fft.is_some() {
            Backend::Fft
        } else {
            Backend::Dense
        }
    }

    pub fn kernel(&self) -> &HeatKernel {
        self.kernel
    }

    pub fn space(&self) -> &MetricMeasureGrid {
        self.space
    }

    fn spectrum(&self, fft: &LatticeFft, t: f64) -> Arc<Vec<Complex64>> {
        let key = t.to_bits();
        if let Some(s) = self.cache.lock().unwrap().get(&key) {
            return Arc::clone(s);
        }
        let s = Arc::new(fft.kernel_spectrum(self.kernel, t));
        let mut cache = self.cache.lock().unwrap();
        if cache.len() >= SPECTRUM_CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, Arc::clone(&s));
        s
    }

    /// `K_t g` for `t ≥ 0`, with `K_0` the identity. No validation.
    pub(crate) fn apply_raw(&self, g: &[f64], t: f64) -> Vec<f64> {
        if t == 0.0 {
            return g.to_vec();
        }
        if g.iter().all(|&v| v == 0.0) {
            return vec![0.0; g.len()];
        }
        match &self.fft {
            Some(fft) => {
                let spec = self.spectrum(fft, t);
                let mut gh = fft.forward(g);
                for (a, b) in gh.iter_mut().zip(spec.iter()) {
                    *a *= b;
                }
                fft.inverse(gh)
            }
            None => {
                let s = self.space;
                (0..s.len())
                    .into_par_iter()
                    .map(|x| {
                        (0..s.len())
                            .map(|y| self.kernel.eval(s, t, x, y) * g[y] * s.weight(y))
                            .sum::<f64>()
                    })
                    .collect()
            }
        }
    }

    pub fn apply(&self, g: &GridFunction, t: f64) -> Result<GridFunction> {
        if !(t > 0.0) || !t.is_finite() {
            return invalid(format!("semigroup time must be positive, got {t}"));
        }
        g.check_len(self.space.len())?;
        if !g.is_finite() {
            return Err(Error::Numerical("semigroup input has non-finite values".into()));
        }
        Ok(GridFunction::new(self.apply_raw(g, t)))
    }

    /// Trapezoidal `∫₀ᵗ K_τ f dτ` with `steps` subintervals.
    pub fn source_integral(&self, f: &GridFunction, t: f64, steps: usize) -> Result<GridFunction> {
        if !(t > 0.0) {
            return invalid(format!("integration horizon must be positive, got {t}"));
        }
        if steps < 2 {
            return invalid(format!("source_integral needs steps >= 2, got {steps}"));
        }
        f.check_len(self.space.len())?;
        f.check_nonnegative("source term")?;
        let grid = TimeGrid::uniform(t, steps)?;
        Ok(self.cumulative_source(f, &grid).pop().unwrap())
    }

    /// `∫₀^{t_i} K_τ f dτ` at every node of `grid`.
    pub(crate) fn cumulative_source(&self, f: &[f64], grid: &TimeGrid) -> Vec<GridFunction> {
        let kf: Vec<Vec<f64>> = grid.nodes().par_iter().map(|&t| self.apply_raw(f, t)).collect();
        let mut out = Vec::with_capacity(grid.len());
        let mut acc = vec![0.0; f.len()];
        out.push(GridFunction::new(acc.clone()));
        for i in 1..grid.len() {
            let h = 0.5 * (grid.nodes()[i] - grid.nodes()[i - 1]);
            for (a, (l, r)) in acc.iter_mut().zip(kf[i - 1].iter().zip(&kf[i])) {
                *a += h * (l + r);
            }
            out.push(GridFunction::new(acc.clone()));
        }
        out
    }

    /// Trapezoidal `∫ K_τ g dτ` over explicit increasing nodes.
    pub(crate) fn integral_over(&self, g: &[f64], nodes: &[f64]) -> Vec<f64> {
        let vals: Vec<Vec<f64>> = nodes.par_iter().map(|&t| self.apply_raw(g, t)).collect();
        let mut acc = vec![0.0; g.len()];
        for k in 1..nodes.len() {
            let h = 0.5 * (nodes[k] - nodes[k - 1]);
            for (a, (l, r)) in acc.iter_mut().zip(vals[k - 1].iter().zip(&vals[k])) {
                *a += h * (l + r);
            }
        }
        acc
    }

    /// Trapezoidal `∫₀^{t_i} K_{t_i−τ} u(τ)^p dτ` over nodes `0..=i`.
    pub fn duhamel_step(&self, trajectory: &Trajectory, p: f64, grid: &TimeGrid, i: usize) -> Result<GridFunction> {
        if i >= grid.len() || i >= trajectory.len() {
            return invalid(format!(
                "node index {i} out of range (grid {}, trajectory {})",
                grid.len(),
                trajectory.len()
            ));
        }
        for v in &trajectory.values()[..=i] {
            v.check_len(self.space.len())?;
            v.check_nonnegative("trajectory")?;
        }
        let w = grid.trapezoid_weights(i);
        let terms: Vec<Vec<f64>> = (0..=i)
            .into_par_iter()
            .map(|j| {
                let up: Vec<f64> = trajectory.at(j).iter().map(|v| v.powf(p)).collect();
                self.apply_raw(&up, grid.lag(i, j))
            })
            .collect();
        let mut acc = vec![0.0; self.space.len()];
        for (wj, term) in w.iter().zip(&terms) {
            for (a, v) in acc.iter_mut().zip(term) {
                *a += wj * v;
            }
        }
        Ok(GridFunction::new(acc))
    }

    /// Duhamel sums at nodes `0..active` from the powered values
    /// `powered[j] = u(t_j)^p`.
    pub(crate) fn duhamel_all(&self, powered: &[Vec<f64>], grid: &TimeGrid, active: usize) -> Vec<Vec<f64>> {
        let n = self.space.len();
        match (&self.fft, grid.uniform_step()) {
            (Some(fft), Some(dt)) => {
                let spectra: Vec<Vec<Complex64>> = powered[..active].par_iter().map(|u| fft.forward(u)).collect();
                let kernels: Vec<Arc<Vec<Complex64>>> =
                    (1..active.max(1)).map(|m| self.spectrum(fft, m as f64 * dt)).collect();
                (0..active)
                    .into_par_iter()
                    .map(|i| {
                        if i == 0 {
                            return vec![0.0; n];
                        }
                        let w = grid.trapezoid_weights(i);
                        let mut acc = vec![Complex64::new(0.0, 0.0); fft.spectrum_len()];
                        for j in 0..i {
                            let k = &kernels[i - j - 1];
                            let wj = w[j];
                            for ((a, kv), uv) in acc.iter_mut().zip(k.iter()).zip(&spectra[j]) {
                                *a += wj * kv * uv;
                            }
                        }
                        let mut out = fft.inverse(acc);
                        for (o, v) in out.iter_mut().zip(&powered[i]) {
                            *o += w[i] * v;
                        }
                        out
                    })
                    .collect()
            }
            _ => (0..active)
                .into_par_iter()
                .map(|i| {
                    let w = grid.trapezoid_weights(i);
                    let mut acc = vec![0.0; n];
                    for j in 0..=i {
                        let term = self.apply_raw(&powered[j], grid.lag(i, j));
                        for (a, v) in acc.iter_mut().zip(&term) {
                            *a += w[j] * v;
                        }
                    }
                    acc
                })
                .collect(),
        }
    }
}

pub fn apply_semigroup(kernel: &HeatKernel, space: &MetricMeasureGrid, g: &GridFunction, t: f64) -> Result<GridFunction> {
    Semigroup::new(kernel, space).apply(g, t)
}

pub fn source_integral(
    kernel: &HeatKernel,
    space: &MetricMeasureGrid,
    f: &GridFunction,
    t: f64,
    steps: usize,
) -> Result<GridFunction> {
    Semigroup::new(kernel, space).source_integral(f, t, steps)
}

pub fn duhamel_step(
    kernel: &HeatKernel,
    space: &MetricMeasureGrid,
    trajectory: &Trajectory,
    p: f64,
    t_grid: &TimeGrid,
    i: usize,
) -> Result<GridFunction> {
    if !(p > 1.0) {
        return invalid(format!("exponent p must exceed 1, got {p}"));
    }
    Semigroup::new(kernel, space).duhamel_step(trajectory, p, t_grid, i)
}
