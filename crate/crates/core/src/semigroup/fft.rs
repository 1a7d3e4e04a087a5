//! Zero-padded FFT convolution on uniform lattices.
//!
//! On a lattice every kernel in this crate is a function of the offset
//! between two points, so `K_t g` is a discrete convolution. Padding each
//! axis to `2n` points makes the circular convolution agree exactly with the
//! linear one on the original block.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::kernel::HeatKernel;
use crate::space::Lattice;

pub(crate) struct LatticeFft {
    dim: usize,
    n: usize,
    l: usize,
    len: usize,
    spacing: f64,
    weight: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for LatticeFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LatticeFft")
            .field("dim", &self.dim)
            .field("n", &self.n)
            .field("l", &self.l)
            .finish()
    }
}

impl LatticeFft {
    pub(crate) fn new(lattice: &Lattice, weight: f64) -> Self {
        let n = lattice.points_per_axis;
        let l = 2 * n;
        let mut planner = FftPlanner::new();
        Self {
            dim: lattice.dim,
            n,
            l,
            len: l.pow(lattice.dim as u32),
            spacing: lattice.spacing,
            weight,
            fwd: planner.plan_fft_forward(l),
            inv: planner.plan_fft_inverse(l),
        }
    }

    pub(crate) fn spectrum_len(&self) -> usize {
        self.len
    }

    /// Spectrum of the weighted kernel `k(t, ·)·w` laid out by wrapped offset.
    pub(crate) fn kernel_spectrum(&self, kernel: &HeatKernel, t: f64) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        for (idx, slot) in buf.iter_mut().enumerate() {
            let mut rem = idx;
            let mut r2 = 0.0;
            for _ in 0..self.dim {
                let q = rem % self.l;
                rem /= self.l;
                let o = if q < self.n { q as f64 } else { q as f64 - self.l as f64 };
                r2 += o * o;
            }
            let d = self.spacing * r2.sqrt();
            *slot = Complex64::new(kernel.eval_distance(t, d) * self.weight, 0.0);
        }
        self.transform(&mut buf, false);
        buf
    }

    /// Spectrum of a grid function embedded in the padded block.
    pub(crate) fn forward(&self, g: &[f64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        for (i, &v) in g.iter().enumerate() {
            buf[self.padded_index(i)] = Complex64::new(v, 0.0);
        }
        self.transform(&mut buf, false);
        buf
    }

    /// Inverse transform and restriction to the original block.
    pub(crate) fn inverse(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut spec, true);
        let scale = 1.0 / self.len as f64;
        let total = self.n.pow(self.dim as u32);
        (0..total)
            .map(|i| (spec[self.padded_index(i)].re * scale).max(0.0))
            .collect()
    }

    fn padded_index(&self, i: usize) -> usize {
        let mut rem = i;
        let mut out = 0;
        let mut stride = 1;
        for _ in 0..self.dim {
            out += (rem % self.n) * stride;
            rem /= self.n;
            stride *= self.l;
        }
        out
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let plan = if inverse { &self.inv } else { &self.fwd };
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        if self.dim == 1 {
            plan.process_with_scratch(data, &mut scratch);
            return;
        }
        let mut line = vec![Complex64::new(0.0, 0.0); self.l];
        let mut stride = 1;
        for _ in 0..self.dim {
            for base in 0..self.len {
                if (base / stride) % self.l != 0 {
                    continue;
                }
                for (k, v) in line.iter_mut().enumerate() {
                    *v = data[base + k * stride];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
            stride *= self.l;
        }
    }
}
