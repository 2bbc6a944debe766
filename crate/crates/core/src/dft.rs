//! Mixed-radix discrete Fourier transform for arbitrary lengths.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

/// Precomputed plan for one transform length. Unnormalized in both
/// directions; the `*_unitary` helpers scale by 1/√n.
#[derive(Debug, Clone)]
pub struct Dft {
    n: usize,
    factors: Vec<(usize, usize)>,
    twiddles: Vec<Complex64>,
}

impl Dft {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "transform length must be positive");
        let twiddles = (0..n)
            .map(|i| Complex64::from_polar(1.0, -2.0 * PI * i as f64 / n as f64))
            .collect();
        let mut factors = Vec::new();
        let mut rest = n;
        let mut p = 2;
        while rest > 1 {
            if p * p > rest {
                p = rest;
            }
            while rest.is_multiple_of(p) {
                rest /= p;
                factors.push((p, rest));
            }
            p += 1;
        }
        Self {
            n,
            factors,
            twiddles,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// X[k] = Σ x[n]·e^{∓j2πkn/N}; minus sign for forward.
    pub fn process(&self, input: &[Complex64], output: &mut [Complex64], inverse: bool) {
        assert_eq!(input.len(), self.n);
        assert_eq!(output.len(), self.n);
        if self.n == 1 {
            output[0] = input[0];
            return;
        }
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.factors[0].0];
        self.work(output, input, 0, 1, &self.factors, inverse, &mut scratch);
    }

    #[allow(clippy::too_many_arguments)]
    fn work(
        &self,
        out: &mut [Complex64],
        input: &[Complex64],
        offset: usize,
        fstride: usize,
        factors: &[(usize, usize)],
        inverse: bool,
        scratch: &mut Vec<Complex64>,
    ) {
        let (p, m) = factors[0];
        if m == 1 {
            for (q, o) in out.iter_mut().take(p).enumerate() {
                *o = input[offset + q * fstride];
            }
        } else {
            for q in 0..p {
                self.work(
                    &mut out[q * m..(q + 1) * m],
                    input,
                    offset + q * fstride,
                    fstride * p,
                    &factors[1..],
                    inverse,
                    scratch,
                );
            }
        }
        if scratch.len() < p {
            scratch.resize(p, Complex64::new(0.0, 0.0));
        }
        for u in 0..m {
            for q in 0..p {
                scratch[q] = out[u + q * m];
            }
            for q1 in 0..p {
                let k = u + q1 * m;
                let mut acc = scratch[0];
                for (q, &s) in scratch.iter().enumerate().take(p).skip(1) {
                    let idx = (q * k * fstride) % self.n;
                    let tw = self.twiddles[idx];
                    acc += s * if inverse { tw.conj() } else { tw };
                }
                out[k] = acc;
            }
        }
    }

    pub fn forward_unitary(&self, input: &[Complex64]) -> Vec<Complex64> {
        self.scaled(input, false)
    }

    pub fn inverse_unitary(&self, input: &[Complex64]) -> Vec<Complex64> {
        self.scaled(input, true)
    }

    fn scaled(&self, input: &[Complex64], inverse: bool) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        self.process(input, &mut out, inverse);
        let scale = 1.0 / Float::sqrt(self.n as f64);
        for v in &mut out {
            *v *= scale;
        }
        out
    }
}
