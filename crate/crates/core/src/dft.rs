//! Thin wrapper over `rustfft` with unitary scaling.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward/inverse DFT pair of a fixed size, scaled by `1/sqrt(n)` both ways.
#[derive(Clone)]
pub struct UnitaryDft {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for UnitaryDft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UnitaryDft")
            .field("len", &self.len)
            .finish()
    }
}

impl UnitaryDft {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
            scale: 1.0 / (len as f64).sqrt(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
        buf.iter_mut().for_each(|v| *v *= self.scale);
    }

    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        buf.iter_mut().for_each(|v| *v *= self.scale);
    }

    pub fn forward_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut v = x.to_vec();
        self.forward(&mut v);
        v
    }

    pub fn inverse_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut v = x.to_vec();
        self.inverse(&mut v);
        v
    }
}
