//! Small 2-D FFT helpers on square complex buffers.

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub fn next_fast_len(n: usize) -> usize {
    let mut m = n;
    loop {
        let mut k = m;
        for p in [2, 3, 5] {
            while k % p == 0 {
                k /= p;
            }
        }
        if k == 1 {
            return m;
        }
        m += 1;
    }
}

pub struct Fft2d {
    pub n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft2d {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2d {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    fn transpose(&self, data: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                data.swap(i * n + j, j * n + i);
            }
        }
    }

    fn pass(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        for row in data.chunks_exact_mut(n) {
            fft.process_with_scratch(row, &mut scratch);
        }
        self.transpose(data);
        for row in data.chunks_exact_mut(n) {
            fft.process_with_scratch(row, &mut scratch);
        }
        self.transpose(data);
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.pass(data, &self.forward.clone());
    }

    /// Inverse transform including the `1/n^2` normalization.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.pass(data, &self.inverse.clone());
        let norm = 1.0 / (self.n * self.n) as f64;
        for z in data.iter_mut() {
            *z *= norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let n = 12;
        let fft = Fft2d::new(n);
        let orig: Vec<Complex64> = (0..n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut data = orig.clone();
        fft.forward(&mut data);
        fft.inverse(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn fast_lens() {
        assert_eq!(next_fast_len(17), 18);
        assert_eq!(next_fast_len(128), 128);
        assert_eq!(next_fast_len(641), 648);
    }
}
