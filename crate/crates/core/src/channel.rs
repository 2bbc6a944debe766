//! Impairments between a device and the base station: multipath fading,
//! timing and frequency offsets, thermal noise.
//!
//! Coupling loss never appears here; it is folded into the per-RE SNR that
//! [`apply_awgn`] targets.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;

use crate::phy::ComplexSignal;
use crate::rng::{complex_normal, rng_from_seed};
use crate::types::{Fading, ImpairmentProfile};
use crate::units::db_to_linear;

/// Extended Pedestrian A tap delays (ns).
pub const EPA_DELAYS_NS: [f64; 7] = [0.0, 30.0, 70.0, 90.0, 110.0, 190.0, 410.0];
/// Extended Pedestrian A tap powers (dB).
pub const EPA_POWERS_DB: [f64; 7] = [0.0, -1.0, -2.0, -3.0, -8.0, -17.2, -20.8];

/// Sinusoids per tap in the sum-of-sinusoids generator.
const SOS_TERMS: usize = 16;
/// Interpolator support: taps n = −FIR_PRE ..= FIR_POST.
const FIR_PRE: isize = 3;
const FIR_POST: isize = 4;
/// Longest stretch over which tap gains are held constant.
const MAX_BLOCK: usize = 256;
/// Largest Doppler phase drift tolerated within one block (rad).
const MAX_BLOCK_DRIFT: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct EpaProfile {
    pub delays_ns: Vec<f64>,
    pub powers_db: Vec<f64>,
    pub doppler_hz: f64,
}

impl Default for EpaProfile {
    fn default() -> Self {
        Self::with_doppler(1.0)
    }
}

impl EpaProfile {
    pub fn with_doppler(doppler_hz: f64) -> Self {
        Self {
            delays_ns: EPA_DELAYS_NS.to_vec(),
            powers_db: EPA_POWERS_DB.to_vec(),
            doppler_hz,
        }
    }

    /// One unit-gain tap at zero delay.
    pub fn single_tap(doppler_hz: f64) -> Self {
        Self {
            delays_ns: alloc::vec![0.0],
            powers_db: alloc::vec![0.0],
            doppler_hz,
        }
    }

    /// Linear tap powers scaled to unit sum.
    pub fn normalized_powers(&self) -> Vec<f64> {
        let lin: Vec<f64> = self.powers_db.iter().map(|&p| db_to_linear(p)).collect();
        let total: f64 = lin.iter().sum();
        lin.iter().map(|p| p / total).collect()
    }
}

/// One tap's Rayleigh process: the Zheng-Xiao sum of sinusoids, normalised
/// to unit mean power.
#[derive(Debug, Clone)]
struct SosTap {
    freqs_i: [f64; SOS_TERMS],
    freqs_q: [f64; SOS_TERMS],
    phases_i: [f64; SOS_TERMS],
    phases_q: [f64; SOS_TERMS],
}

impl SosTap {
    fn draw<R: Rng + ?Sized>(rng: &mut R, doppler_hz: f64) -> Self {
        let theta = rng.random_range(-PI..PI);
        let mut tap = Self {
            freqs_i: [0.0; SOS_TERMS],
            freqs_q: [0.0; SOS_TERMS],
            phases_i: [0.0; SOS_TERMS],
            phases_q: [0.0; SOS_TERMS],
        };
        for n in 0..SOS_TERMS {
            let alpha = (2.0 * PI * (n + 1) as f64 - PI + theta) / (4.0 * SOS_TERMS as f64);
            tap.freqs_i[n] = 2.0 * PI * doppler_hz * Float::cos(alpha);
            tap.freqs_q[n] = 2.0 * PI * doppler_hz * Float::sin(alpha);
            tap.phases_i[n] = rng.random_range(-PI..PI);
            tap.phases_q[n] = rng.random_range(-PI..PI);
        }
        tap
    }

    fn gain(&self, t: f64) -> Complex64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for n in 0..SOS_TERMS {
            re += Float::cos(self.freqs_i[n] * t + self.phases_i[n]);
            im += Float::cos(self.freqs_q[n] * t + self.phases_q[n]);
        }
        Complex64::new(re, im) * Float::sqrt(1.0 / SOS_TERMS as f64)
    }
}

fn windowed_sinc(x: f64) -> f64 {
    let half = FIR_POST as f64 + 0.5;
    if x.abs() >= half {
        return 0.0;
    }
    let sinc = if x.abs() < 1e-12 {
        1.0
    } else {
        Float::sin(PI * x) / (PI * x)
    };
    let w = 0.5 + 0.5 * Float::cos(PI * x / half);
    sinc * w
}

/// Interpolator coefficients for a delay of `d` samples, n = −PRE..=POST.
fn fractional_delay_taps(d: f64) -> Vec<f64> {
    (-FIR_PRE..=FIR_POST)
        .map(|n| windowed_sinc(n as f64 - d))
        .collect()
}

/// Tapped-delay-line fading. Each tap is an independent Rayleigh process with
/// a Jakes spectrum at `profile.doppler_hz`; sub-sample tap delays use a
/// windowed-sinc interpolator. With zero Doppler the taps are fixed at
/// √(normalised power), so a single-tap profile is the identity. Output has
/// the input's length.
pub fn apply_fading(signal: &ComplexSignal, profile: &EpaProfile, seed: u64) -> ComplexSignal {
    let fs = signal.sample_rate_hz;
    let powers = profile.normalized_powers();
    let interp: Vec<Vec<f64>> = profile
        .delays_ns
        .iter()
        .map(|&ns| fractional_delay_taps(ns * 1e-9 * fs))
        .collect();
    let static_channel = profile.doppler_hz == 0.0;
    let mut rng = rng_from_seed(seed);
    let taps: Vec<SosTap> = powers
        .iter()
        .map(|_| SosTap::draw(&mut rng, profile.doppler_hz))
        .collect();

    let block = if static_channel {
        signal.len().max(1)
    } else {
        let b = MAX_BLOCK_DRIFT * fs / (2.0 * PI * profile.doppler_hz.abs());
        (b as usize).clamp(1, MAX_BLOCK)
    };
    let n = signal.len();
    let x = &signal.samples;
    let len = (FIR_PRE + FIR_POST + 1) as usize;
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); n];
    let mut filt = alloc::vec![Complex64::new(0.0, 0.0); len];
    let mut start = 0;
    while start < n {
        let end = (start + block).min(n);
        let t = 0.5 * (start + end) as f64 / fs;
        filt.fill(Complex64::new(0.0, 0.0));
        for ((tap, &p), coefs) in taps.iter().zip(&powers).zip(&interp) {
            let g = if static_channel {
                Complex64::new(Float::sqrt(p), 0.0)
            } else {
                tap.gain(t) * Float::sqrt(p)
            };
            for (f, &c) in filt.iter_mut().zip(coefs) {
                *f += g * c;
            }
        }
        for (m, o) in out.iter_mut().enumerate().take(end).skip(start) {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, f) in filt.iter().enumerate() {
                // y[m] = Σ f[n]·x[m − n] with n = j − PRE.
                let idx = m as isize - (j as isize - FIR_PRE);
                if idx >= 0 && (idx as usize) < n {
                    acc += f * x[idx as usize];
                }
            }
            *o = acc;
        }
        start = end;
    }
    ComplexSignal::new(out, fs)
}

/// Delays by round(Δt·fs) whole samples (output grows by that many) and
/// rotates by exp(j2πΔf·n/fs).
pub fn apply_offsets(signal: &ComplexSignal, delta_t_s: f64, delta_f_hz: f64) -> ComplexSignal {
    let fs = signal.sample_rate_hz;
    let d = Float::round(delta_t_s.max(0.0) * fs) as usize;
    let mut samples = alloc::vec![Complex64::new(0.0, 0.0); signal.len() + d];
    samples[d..].copy_from_slice(&signal.samples);
    if delta_f_hz != 0.0 {
        let step = 2.0 * PI * delta_f_hz / fs;
        for (n, s) in samples.iter_mut().enumerate() {
            *s *= Complex64::from_polar(1.0, step * n as f64);
        }
    }
    ComplexSignal::new(samples, fs)
}

/// Noise variance per sample giving `snr_db` against `signal_ref_power`.
/// With unitary transforms this is also the noise variance per RE.
pub fn noise_variance(snr_db: f64, signal_ref_power: f64) -> f64 {
    signal_ref_power / db_to_linear(snr_db)
}

/// Adds circularly symmetric Gaussian noise. An infinite SNR leaves the
/// signal untouched.
pub fn apply_awgn(signal: &ComplexSignal, snr_db: f64, signal_ref_power: f64, seed: u64) -> ComplexSignal {
    let mut out = signal.clone();
    if snr_db == f64::INFINITY {
        return out;
    }
    let var = noise_variance(snr_db, signal_ref_power);
    let mut rng = rng_from_seed(seed);
    for s in &mut out.samples {
        *s += complex_normal(&mut rng, var);
    }
    out
}

/// Fading followed by timing and frequency offsets for one device; noise is
/// added once to the composite received signal.
pub fn impair_device(signal: &ComplexSignal, profile: &ImpairmentProfile, seed: u64) -> ComplexSignal {
    let faded = match profile.fading {
        Fading::Flat => signal.clone(),
        Fading::Epa { doppler_hz } => apply_fading(signal, &EpaProfile::with_doppler(doppler_hz), seed),
    };
    apply_offsets(&faded, profile.delta_t_s, profile.delta_f_hz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dft::Dft;
    use crate::rng::derive_seed;

    fn noise_signal(n: usize, seed: u64) -> ComplexSignal {
        let mut rng = rng_from_seed(seed);
        ComplexSignal::new((0..n).map(|_| complex_normal(&mut rng, 1.0)).collect(), 180e3)
    }

    #[test]
    fn static_single_tap_is_identity() {
        let x = noise_signal(300, 1);
        let y = apply_fading(&x, &EpaProfile::single_tap(0.0), 9);
        for (a, b) in x.samples.iter().zip(&y.samples) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn normalized_powers_sum_to_one() {
        let p = EpaProfile::default().normalized_powers();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn ensemble_power_is_preserved() {
        let profile = EpaProfile::default();
        let trials = 10_000;
        let mut ratio = 0.0;
        for i in 0..trials {
            let x = noise_signal(64, derive_seed(100, i));
            let y = apply_fading(&x, &profile, derive_seed(200, i));
            // Skip the interpolator edges.
            let inner = 8..56;
            let px: f64 = x.samples[inner.clone()].iter().map(|c| c.norm_sqr()).sum();
            let py: f64 = y.samples[inner].iter().map(|c| c.norm_sqr()).sum();
            ratio += py / px;
        }
        let mean = ratio / trials as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean gain {mean}");
    }

    #[test]
    fn fading_is_deterministic() {
        let x = noise_signal(2000, 2);
        let a = apply_fading(&x, &EpaProfile::default(), 5);
        let b = apply_fading(&x, &EpaProfile::default(), 5);
        assert_eq!(a, b);
        let c = apply_fading(&x, &EpaProfile::default(), 6);
        assert_ne!(a, c);
    }

    #[test]
    fn sos_tap_has_jakes_autocorrelation() {
        // E[h(t)h*(t+τ)] = J0(2π fd τ); at fd·τ = 0.3835 the first zero.
        let mut rng = rng_from_seed(3);
        let trials = 20_000;
        let mut at_zero = Complex64::new(0.0, 0.0);
        let mut at_null = Complex64::new(0.0, 0.0);
        for _ in 0..trials {
            let tap = SosTap::draw(&mut rng, 10.0);
            let h0 = tap.gain(0.7);
            at_zero += h0 * h0.conj();
            at_null += h0 * tap.gain(0.7 + 0.038_27).conj();
        }
        assert!((at_zero.re / trials as f64 - 1.0).abs() < 0.03);
        assert!(at_null.norm() / (trials as f64) < 0.04);
    }

    #[test]
    fn zero_offsets_are_identity() {
        let x = noise_signal(100, 4);
        assert_eq!(apply_offsets(&x, 0.0, 0.0), x);
    }

    #[test]
    fn whole_symbol_delay_is_a_shift() {
        let x = noise_signal(132, 4);
        let y = apply_offsets(&x, 66.0 / 180e3, 0.0);
        assert_eq!(y.len(), 198);
        assert_eq!(&y.samples[66..], &x.samples[..]);
    }

    #[test]
    fn frequency_offset_phase_slope() {
        // One tone, 60-point symbols with 6-sample CP: the same FFT bin in
        // consecutive windows rotates by 2πΔf(T + T_CP).
        let s = 60;
        let cp = 6;
        let mut samples = Vec::new();
        for _ in 0..4 {
            let sym: Vec<Complex64> = (0..s)
                .map(|n| Complex64::from_polar(1.0, 2.0 * PI * 5.0 * n as f64 / s as f64))
                .collect();
            samples.extend_from_slice(&sym[s - cp..]);
            samples.extend_from_slice(&sym);
        }
        let x = ComplexSignal::new(samples, 180e3);
        let y = apply_offsets(&x, 20e-6, 50.0);
        let d = (20e-6f64 * 180e3).round() as usize;
        let plan = Dft::new(s);
        let bins: Vec<Complex64> = (0..4)
            .map(|i| {
                let start = d + i * (s + cp) + cp;
                plan.forward_unitary(&y.samples[start..start + s])[5]
            })
            .collect();
        let want = 2.0 * PI * 50.0 * (s + cp) as f64 / 180e3;
        for w in bins.windows(2) {
            let got = (w[1] * w[0].conj()).arg();
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn infinite_snr_is_identity() {
        let x = noise_signal(100, 4);
        assert_eq!(apply_awgn(&x, f64::INFINITY, 1.0, 1), x);
    }

    #[test]
    fn per_re_snr_matches_target() {
        // Unit-power REs through a unitary transform; measure noise per RE.
        let s = 60;
        let plan = Dft::new(s);
        let symbols = 10_000 / s + 1;
        for (snr_db, tol_db) in [(0.0, 0.1), (10.0, 0.1), (-5.0, 0.1)] {
            let mut clean = Vec::new();
            for _ in 0..symbols {
                let re = alloc::vec![Complex64::new(1.0, 0.0); s];
                clean.extend(plan.inverse_unitary(&re));
            }
            let x = ComplexSignal::new(clean, 180e3);
            let y = apply_awgn(&x, snr_db, 1.0, 77);
            let mut noise = 0.0;
            for i in 0..symbols {
                let rx = plan.forward_unitary(&y.samples[i * s..(i + 1) * s]);
                noise += rx.iter().map(|r| (r - 1.0).norm_sqr()).sum::<f64>();
            }
            let measured = -10.0 * (noise / (symbols * s) as f64).log10();
            assert!((measured - snr_db).abs() < tol_db, "{measured} vs {snr_db}");
        }
    }

    #[test]
    fn delay_and_cfo_commute_up_to_a_phase() {
        let x = noise_signal(200, 8);
        let a = apply_offsets(&apply_offsets(&x, 0.0, 40.0), 10.0 / 180e3, 0.0);
        let b = apply_offsets(&apply_offsets(&x, 10.0 / 180e3, 0.0), 0.0, 40.0);
        let ratio = b.samples[50] / a.samples[50];
        assert!((ratio.norm() - 1.0).abs() < 1e-12);
        for (p, q) in a.samples.iter().zip(&b.samples).skip(10) {
            assert!((q - p * ratio).norm() < 1e-9);
        }
    }
}
