//! Arbitrary-length DFTs by the chirp-z (Bluestein) reduction.
//!
//! A length-`n` transform is rewritten as a circular convolution of length
//! `m >= 2n - 1`, `m` a power of two, using `jk = (j^2 + k^2 - (j - k)^2) / 2`.
//! The power-of-two transforms are delegated to `rustfft`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::linalg::ZERO;

/// Sign of the exponent in `sum_k x_k exp(sign 2 pi i j k / n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// A planned unnormalized DFT of fixed length.
pub struct ChirpZ {
    n: usize,
    m: usize,
    chirp: Vec<Complex64>,
    kernel_spectrum: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl ChirpZ {
    pub fn new(n: usize, sign: Sign) -> Self {
        assert!(n > 0, "empty transform");
        let m = (2 * n - 1).next_power_of_two();
        let s = match sign {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        };
        // c_k = exp(s pi i k^2 / n); k^2 is reduced mod 2n to keep the angle small.
        let two_n = 2 * n as u64;
        let chirp: Vec<Complex64> = (0..n as u64)
            .map(|k| {
                let r = ((k as u128 * k as u128) % two_n as u128) as f64;
                Complex64::from_polar(1.0, s * PI * r / n as f64)
            })
            .collect();

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);

        let mut kernel = vec![ZERO; m];
        kernel[0] = chirp[0].conj();
        for k in 1..n {
            kernel[k] = chirp[k].conj();
            kernel[m - k] = chirp[k].conj();
        }
        forward.process(&mut kernel);

        Self {
            n,
            m,
            chirp,
            kernel_spectrum: kernel,
            forward,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `X_j = sum_k x_k exp(sign 2 pi i j k / n)`, without normalization.
    pub fn transform(&self, input: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(input.len(), self.n, "transform length");
        let mut buf = vec![ZERO; self.m];
        for (k, (x, c)) in input.iter().zip(&self.chirp).enumerate() {
            buf[k] = x * c;
        }
        self.forward.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_spectrum) {
            *b *= k;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.m as f64;
        buf.truncate(self.n);
        for (b, c) in buf.iter_mut().zip(&self.chirp) {
            *b *= c * scale;
        }
        buf
    }
}

/// The unitary DFT `F[f](y) = p^{-1/2} sum_x psi(y x) f(x)` with
/// `psi(z) = exp(2 pi i z / n)`, in `O(n log n)`.
pub struct FastDft {
    plan: ChirpZ,
}

impl FastDft {
    pub fn new(n: usize) -> Self {
        Self {
            plan: ChirpZ::new(n, Sign::Positive),
        }
    }

    pub fn len(&self) -> usize {
        self.plan.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plan.is_empty()
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let scale = 1.0 / (self.plan.len() as f64).sqrt();
        let mut out = self.plan.transform(f);
        out.iter_mut().for_each(|z| *z *= scale);
        out
    }
}

/// One-shot unitary fast DFT of `f`.
pub fn fast_dft(f: &[Complex64]) -> Vec<Complex64> {
    FastDft::new(f.len()).apply(f)
}
