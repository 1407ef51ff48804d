//! Uniformly sampled complex time signals with an FFT-backed spectral
//! representation, smooth dyadic frequency projections, and the Bessel-piece
//! multiplier operators T^piece_{ν,r}.

use super::{ramp_up, CutoffFamily, Piece};
use crate::error::{Error, Result};
use crate::quad::pairwise_sum;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::sync::Arc;

/// Complex samples g(t_m) at t_m = m·dt, m = 0..P. The dual grid carries
/// frequencies ξ_l = 2π·l'/(P·dt) with l' the signed bin index.
#[derive(Debug, Clone)]
pub struct TimeSignal {
    pub dt: f64,
    pub values: Vec<Complex64>,
}

impl TimeSignal {
    pub fn new(dt: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain(format!("time step must be positive, got {dt}")));
        }
        if values.len() < 4 {
            return Err(Error::domain(format!(
                "time signal needs at least 4 samples, got {}",
                values.len()
            )));
        }
        Ok(TimeSignal { dt, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Signed frequency of FFT bin `l`.
    pub fn freq(&self, l: usize) -> f64 {
        let p = self.len();
        let signed = if l <= p / 2 { l as f64 } else { l as f64 - p as f64 };
        2.0 * std::f64::consts::PI * signed / (p as f64 * self.dt)
    }

    /// Largest frequency magnitude resolved by the dual grid (π/dt).
    pub fn xi_max(&self) -> f64 {
        std::f64::consts::PI / self.dt
    }

    /// ∫|g|²dt on the periodic grid.
    pub fn energy(&self) -> f64 {
        let vals: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        pairwise_sum(&vals) * self.dt
    }

    /// Spectral coefficients ĝ(ξ_l) = dt/√(2π) Σ_m g_m e^{-iξ_l t_m}.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf = self.values.clone();
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(buf.len()).process(&mut buf);
        let scale = self.dt / (2.0 * std::f64::consts::PI).sqrt();
        buf.iter_mut().for_each(|v| *v *= scale);
        buf
    }

    /// Rebuild time samples from spectral coefficients (inverse of
    /// [`TimeSignal::spectrum`]).
    pub fn from_spectrum(dt: f64, mut spectrum: Vec<Complex64>) -> Result<Self> {
        let p = spectrum.len();
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(p).process(&mut spectrum);
        let scale = (2.0 * std::f64::consts::PI).sqrt() / (p as f64 * dt);
        spectrum.iter_mut().for_each(|v| *v *= scale);
        TimeSignal::new(dt, spectrum)
    }

    /// Parseval defect |Σ|ĝ|²dξ - Σ|g|²dt| / energy, for diagnostics.
    pub fn parseval_defect(&self) -> f64 {
        let spec = self.spectrum();
        let dxi = 2.0 * std::f64::consts::PI / (self.len() as f64 * self.dt);
        let se: Vec<f64> = spec.iter().map(|v| v.norm_sqr()).collect();
        let spectral = pairwise_sum(&se) * dxi;
        let direct = self.energy();
        if direct == 0.0 {
            0.0
        } else {
            ((spectral - direct) / direct).abs()
        }
    }
}

/// Smooth dyadic shell ψ_n(ξ) supported on ±(2^{n-1}, 1.5·2^n) ⊂
/// ±(2^{n-1}, 2^{n+1}), identically 1 on ±[0.75·2^n, 2^n], with Σ_n ψ_n ≡ 1
/// away from ξ = 0.
pub fn psi_shell(n: i32, xi: f64) -> f64 {
    let a = xi.abs();
    if a == 0.0 {
        return 0.0;
    }
    let lo = (2.0f64).powi(n - 1);
    let hi = (2.0f64).powi(n);
    ramp_up(a, lo, 1.5 * lo) - ramp_up(a, hi, 1.5 * hi)
}

/// Project onto dyadic shell n: ĝ_n = ĝ·ψ_n. The dual grid must cover the
/// shell's support (2^{n+1} ≤ π/dt).
pub fn dyadic_project(g: &TimeSignal, n: i32) -> Result<TimeSignal> {
    let hi = (2.0f64).powi(n + 1);
    if hi > g.xi_max() * (1.0 + 1e-12) {
        return Err(Error::Coverage(format!(
            "shell n={n} extends to {hi:.3e} but the dual grid stops at {:.3e}",
            g.xi_max()
        )));
    }
    let mut spec = g.spectrum();
    for (l, v) in spec.iter_mut().enumerate() {
        *v *= psi_shell(n, g.freq(l));
    }
    TimeSignal::from_spectrum(g.dt, spec)
}

/// Apply T^piece_{ν,r}: multiply ĝ(ξ) by m^piece(r√|ξ|) and synthesize back.
/// Errors when the multiplier's support straddles the edge of the dual grid;
/// a multiplier entirely above the grid yields the zero signal.
pub fn apply_t_operator(
    family: &CutoffFamily,
    piece: Piece,
    r: f64,
    g: &TimeSignal,
) -> Result<TimeSignal> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("operator radius must be positive, got {r}")));
    }
    let (lo, hi) = family.support(piece);
    let xi_lo = (lo / r) * (lo / r);
    let xi_hi = (hi / r) * (hi / r);
    let xi_max = g.xi_max();
    if xi_lo >= xi_max {
        // support entirely beyond the resolved band: nothing to apply
        return TimeSignal::new(g.dt, vec![Complex64::new(0.0, 0.0); g.len()]);
    }
    if xi_hi > xi_max * (1.0 + 1e-12) {
        return Err(Error::Coverage(format!(
            "multiplier support [{xi_lo:.3e}, {xi_hi:.3e}] straddles the dual grid edge {xi_max:.3e}"
        )));
    }
    let mut spec = g.spectrum();
    for (l, v) in spec.iter_mut().enumerate() {
        let arg = r * g.freq(l).abs().sqrt();
        *v *= family.m_piece_unchecked(piece, arg);
    }
    TimeSignal::from_spectrum(g.dt, spec)
}

/// Direct circular convolution (K * g)(t_i) = Σ_m K(t_i - t_m) g(t_m) dt for
/// cross-checking the multiplier form of T^piece.
pub fn circular_convolution(kernel: &[Complex64], g: &TimeSignal) -> Result<TimeSignal> {
    if kernel.len() != g.len() {
        return Err(Error::domain(format!(
            "kernel has {} samples, signal {}",
            kernel.len(),
            g.len()
        )));
    }
    let p = g.len();
    let mut out = vec![Complex64::new(0.0, 0.0); p];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..p {
            let lag = (i + p - m) % p;
            acc += kernel[lag] * g.values[m];
        }
        *slot = acc * g.dt;
    }
    TimeSignal::new(g.dt, out)
}

/// Deterministic band-limited random signal: unit-normal complex
/// coefficients on the dual-grid bins with |ξ| in [xi_lo, xi_hi].
pub fn random_band_signal(
    dt: f64,
    len: usize,
    xi_lo: f64,
    xi_hi: f64,
    seed: u64,
) -> Result<TimeSignal> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let probe = TimeSignal::new(dt, vec![Complex64::new(0.0, 0.0); len])?;
    let spec: Vec<Complex64> = (0..len)
        .map(|l| {
            let xi = probe.freq(l).abs();
            if xi >= xi_lo && xi <= xi_hi {
                Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    TimeSignal::from_spectrum(dt, spec)
}

/// Shared FFT plans for hot scan loops.
pub struct FftPair {
    pub forward: Arc<dyn rustfft::Fft<f64>>,
    pub inverse: Arc<dyn rustfft::Fft<f64>>,
}

impl FftPair {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftPair {
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::BesselOrder;
    use crate::kernels::{build_cutoffs, kernel_sample};

    #[test]
    fn parseval_on_dual_grid() {
        let g = random_band_signal(0.01, 1024, 10.0, 100.0, 7).unwrap();
        assert!(g.parseval_defect() < 1e-12);
    }

    #[test]
    fn spectrum_roundtrip_is_identity() {
        let g = random_band_signal(0.02, 512, 5.0, 60.0, 3).unwrap();
        let back = TimeSignal::from_spectrum(g.dt, g.spectrum()).unwrap();
        for (a, b) in g.values.iter().zip(&back.values) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn dyadic_projections_partition_band() {
        // ĝ supported in shells 2..6; DC bin empty by construction
        let g = random_band_signal(0.01, 2048, 2.0, 64.0, 11).unwrap();
        let mut acc = vec![Complex64::new(0.0, 0.0); g.len()];
        for n in 0..=7 {
            let gn = dyadic_project(&g, n).unwrap();
            for (a, b) in acc.iter_mut().zip(&gn.values) {
                *a += b;
            }
        }
        for (a, b) in acc.iter().zip(&g.values) {
            assert!((a - b).norm() < 1e-10, "partition drop {:.3e}", (a - b).norm());
        }

        // projection is the identity on a signal inside the shell's plateau
        let inner = random_band_signal(0.01, 2048, 24.5, 31.5, 5).unwrap(); // inside [24, 32]
        let proj = dyadic_project(&inner, 5).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in proj.values.iter().zip(&inner.values) {
            worst = worst.max((a - b).norm());
        }
        assert!(worst < 1e-10, "identity defect {worst}");

        // shells two apart have disjoint supports
        let p57 = dyadic_project(&dyadic_project(&g, 5).unwrap(), 7).unwrap();
        assert!(p57.values.iter().all(|v| v.norm() < 1e-12));

        // coverage guard
        assert!(matches!(dyadic_project(&g, 40), Err(Error::Coverage(_))));
    }

    #[test]
    fn t_operator_disjoint_support_gives_zero() {
        let fam = build_cutoffs(BesselOrder::new(1.0).unwrap(), 8).unwrap();
        // signal band [1, 4]; piece Shell(6) at r = 1 needs ξ ∈ [1024, 16384]
        let g = random_band_signal(1e-4, 4096, 1.0, 4.0, 9).unwrap();
        let out = apply_t_operator(&fam, Piece::Shell(6), 1.0, &g).unwrap();
        assert!(out.values.iter().all(|v| v.norm() < 1e-13));
    }

    #[test]
    fn t_operator_piece_sum_reconstructs_bessel_multiplier() {
        let nu = 1.0;
        let fam = build_cutoffs(BesselOrder::new(nu).unwrap(), 6).unwrap();
        let r = 1.0;
        // band within the partition's exact range: ξ ≤ 2^{2·6}/r² is ample;
        // grid must cover the largest piece support (2^7)² = 16384
        let dt = std::f64::consts::PI / 20000.0;
        let g = random_band_signal(dt, 1 << 15, 3.0, 50.0, 21).unwrap();
        let mut acc = vec![Complex64::new(0.0, 0.0); g.len()];
        for piece in fam.pieces() {
            let out = apply_t_operator(&fam, piece, r, &g).unwrap();
            for (a, b) in acc.iter_mut().zip(&out.values) {
                *a += b;
            }
        }
        // compare against the full J_ν(r√|ξ|) multiplier
        let ev = crate::bessel::OrderEvaluator::new(BesselOrder::new(nu).unwrap());
        let mut spec = g.spectrum();
        for (l, v) in spec.iter_mut().enumerate() {
            *v *= ev.eval(r * g.freq(l).abs().sqrt()).unwrap();
        }
        let full = TimeSignal::from_spectrum(g.dt, spec).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in acc.iter().zip(&full.values) {
            worst = worst.max((a - b).norm());
        }
        assert!(worst < 1e-8, "piece sum defect {worst}");
    }

    #[test]
    fn t_operator_matches_kernel_convolution() {
        // small periodic case: multiplier form vs circular convolution with
        // the quadrature-sampled kernel
        let nu = 1.0;
        let fam = build_cutoffs(BesselOrder::new(nu).unwrap(), 4).unwrap();
        let piece = Piece::Shell(3);
        let r = 1.0;
        // shell 3 at r = 1 occupies ξ ∈ (16, 256): need ξ_max ≥ 256, and a
        // period long enough that the kernel's tails have died off
        let p = 2048;
        let dt = 0.01;
        let g = random_band_signal(dt, p, 20.0, 60.0, 33).unwrap();

        // kernel samples on circular lags: t_l = l·dt mapped to (-T/2, T/2]
        let lags: Vec<f64> = (0..p)
            .map(|l| {
                let sl = if l <= p / 2 { l as f64 } else { l as f64 - p as f64 };
                sl * dt
            })
            .collect();
        let ks = kernel_sample(&fam, piece, r, &lags).unwrap();
        // convolution kernel scaled: T g = (K * g), our K already carries
        // the ½∫e^{iηy} normalization matching the multiplier convention
        // up to the 2π factor from the spectral measure
        let kernel: Vec<Complex64> = ks
            .values
            .iter()
            .map(|v| v / std::f64::consts::PI)
            .collect();
        let conv = circular_convolution(&kernel, &g).unwrap();
        let direct = apply_t_operator(&fam, piece, r, &g).unwrap();
        let scale = direct
            .values
            .iter()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max);
        let mut worst = 0.0f64;
        for (a, b) in conv.values.iter().zip(&direct.values) {
            worst = worst.max((a - b).norm());
        }
        assert!(
            worst < 2e-2 * scale,
            "convolution vs multiplier defect {worst} (scale {scale})"
        );
    }
}
