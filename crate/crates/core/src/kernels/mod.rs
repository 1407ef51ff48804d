//! Dyadic cutoff decomposition of J_ν, the oscillatory kernels K^j_{ν,r},
//! multiplier operators on time signals, kernel products, and the explicit
//! bounding functions Φ⁰_ν and Φ_j.
//!
//! The partition J_ν = m⁰ + m¹ + Σ_{j≥j_min} m^j is built from quintic
//! smoothstep ramps and telescopes exactly: the low piece falls from 1 on
//! [ν/2, ν/√2], the first high ramp rises on [ν, 2ν], and every later ramp
//! rises on [2^{j-1}, 2^j]. The first shell index is forced to
//! j_min = ⌊log₂ 2ν⌋ by the support constraints; `j_asym = ⌈log₂ 4ν⌉` marks
//! where the shells are far enough above the turning point for the 2^{-j/2}
//! amplitude asymptotics, and scans start there.

pub mod scans;
pub mod signal;

pub use signal::{apply_t_operator, dyadic_project, psi_shell, TimeSignal};

use crate::bessel::{BesselOrder, JTable};
use crate::error::{Error, Result};
use crate::quad::{pairwise_sum_complex, GaussLegendre};
use num_complex::Complex64;
use std::sync::Arc;

/// Quintic smoothstep: 0 below 0, 1 above 1, 6x⁵-15x⁴+10x³ between (C²).
pub fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
    }
}

/// Smoothstep ramp from 0 at `lo` to 1 at `hi`.
pub fn ramp_up(x: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(hi > lo);
    smoothstep((x - lo) / (hi - lo))
}

/// One piece of the partition: the low cutoff θ₀, the middle bump θ₁, or a
/// dyadic shell θ_j.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    Low,
    Mid,
    Shell(i32),
}

/// The smooth pieces θ₀, θ₁, {θ_j} and the multipliers m = J_ν · θ.
#[derive(Debug)]
pub struct CutoffFamily {
    order: BesselOrder,
    /// ramp anchor: ν for ν > 0, and 1 in the degenerate ν = 0 family
    lambda: f64,
    pub j_min: i32,
    /// first shell safely inside the oscillatory regime (2^{j-1} ≥ 2ν)
    pub j_asym: i32,
    pub j_max: i32,
    jtable: Arc<JTable>,
}

/// j_min forced by the support and partition invariants.
pub fn family_j_min(nu: f64) -> i32 {
    let lambda = if nu > 0.0 { nu } else { 1.0 };
    (2.0 * lambda).log2().floor() as i32
}

/// Build the cutoff family with shells j_min..=j_max.
pub fn build_cutoffs(order: BesselOrder, j_max: i32) -> Result<CutoffFamily> {
    let nu = order.nu();
    let lambda = if nu > 0.0 { nu } else { 1.0 };
    let j_min = family_j_min(nu);
    let j_asym = (4.0 * lambda).log2().ceil() as i32;
    if j_max < j_min {
        return Err(Error::domain(format!(
            "j_max = {j_max} below the family's first shell j_min = {j_min}"
        )));
    }
    let x_max = (2.0f64).powi(j_max + 1);
    let jtable = JTable::build(order, x_max)?;
    Ok(CutoffFamily {
        order,
        lambda,
        j_min,
        j_asym,
        j_max,
        jtable,
    })
}

impl CutoffFamily {
    pub fn order(&self) -> BesselOrder {
        self.order
    }

    pub fn pieces(&self) -> Vec<Piece> {
        let mut out = vec![Piece::Low, Piece::Mid];
        out.extend((self.j_min..=self.j_max).map(Piece::Shell));
        out
    }

    fn check_piece(&self, piece: Piece) -> Result<()> {
        if let Piece::Shell(j) = piece {
            if j < self.j_min || j > self.j_max {
                return Err(Error::domain(format!(
                    "shell {j} outside this family's range {}..={}",
                    self.j_min, self.j_max
                )));
            }
        }
        Ok(())
    }

    /// Rising ramp that opens shell j: [ν, 2ν] for the first shell,
    /// [2^{j-1}, 2^j] beyond.
    fn shell_ramp(&self, j: i32, eta: f64) -> f64 {
        if j == self.j_min {
            ramp_up(eta, self.lambda, 2.0 * self.lambda)
        } else {
            let base = (2.0f64).powi(j - 1);
            ramp_up(eta, base, 2.0 * base)
        }
    }

    fn theta0(&self, eta: f64) -> f64 {
        let nu = self.order.nu();
        if nu == 0.0 {
            return 0.0;
        }
        1.0 - ramp_up(eta, 0.5 * nu, nu / std::f64::consts::SQRT_2)
    }

    /// Smooth cutoff value of one piece at η ≥ 0.
    pub fn theta(&self, piece: Piece, eta: f64) -> f64 {
        match piece {
            Piece::Low => self.theta0(eta),
            Piece::Mid => 1.0 - self.theta0(eta) - self.shell_ramp(self.j_min, eta),
            Piece::Shell(j) => self.shell_ramp(j, eta) - self.shell_ramp(j + 1, eta),
        }
    }

    /// Support interval (lo, hi) of a piece's cutoff.
    pub fn support(&self, piece: Piece) -> (f64, f64) {
        let nu = self.order.nu();
        match piece {
            Piece::Low => (0.0, nu / std::f64::consts::SQRT_2),
            Piece::Mid => (0.5 * nu, 2.0 * self.lambda),
            Piece::Shell(j) => {
                let lo = if j == self.j_min {
                    self.lambda
                } else {
                    (2.0f64).powi(j - 1)
                };
                (lo, (2.0f64).powi(j + 1))
            }
        }
    }

    /// Multiplier piece m(η) = J_ν(η) θ_piece(η).
    pub fn m_piece(&self, piece: Piece, eta: f64) -> Result<f64> {
        self.check_piece(piece)?;
        Ok(self.m_piece_unchecked(piece, eta))
    }

    pub(crate) fn m_piece_unchecked(&self, piece: Piece, eta: f64) -> f64 {
        let th = self.theta(piece, eta);
        if th == 0.0 {
            0.0
        } else {
            self.jtable.eval(eta) * th
        }
    }

    /// Σ of all pieces up to j_max; equals 1 on [0, 2^{j_max}].
    pub fn theta_sum(&self, eta: f64) -> f64 {
        let mut acc = self.theta(Piece::Low, eta) + self.theta(Piece::Mid, eta);
        for j in self.j_min..=self.j_max {
            acc += self.theta(Piece::Shell(j), eta);
        }
        acc
    }

    /// Interior C² joints of a piece's cutoff (ramp endpoints), needed as
    /// panel boundaries by the oscillatory quadrature.
    fn joints(&self, piece: Piece) -> Vec<f64> {
        let nu = self.order.nu();
        let mut j: Vec<f64> = match piece {
            Piece::Low => vec![0.5 * nu, nu / std::f64::consts::SQRT_2],
            Piece::Mid => vec![
                0.5 * nu,
                nu / std::f64::consts::SQRT_2,
                self.lambda,
                2.0 * self.lambda,
            ],
            Piece::Shell(jj) => {
                let two_j = (2.0f64).powi(jj);
                if jj == self.j_min {
                    vec![self.lambda, 2.0 * self.lambda, two_j, 2.0 * two_j]
                } else {
                    vec![0.5 * two_j, two_j, 2.0 * two_j]
                }
            }
        };
        j.retain(|&x| x > 0.0);
        j.sort_by(|a, b| a.partial_cmp(b).unwrap());
        j.dedup();
        j
    }
}

/// Sampled oscillatory kernel K^piece_{ν,r} on an η grid. The kernel is real
/// and even in η up to quadrature error when the piece multiplier is even in
/// y (always true here).
#[derive(Debug, Clone)]
pub struct KernelSample {
    pub piece: Piece,
    pub nu: f64,
    pub r: f64,
    pub eta: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Half-line oscillatory integral ∫ a(u) e^{iη u²} 2u du over [u_lo, u_hi]
/// with phase-graded Gauss-Legendre panels; `joints` are forced panel
/// boundaries (C² breaks of the amplitude) and `amp_freq` is the intrinsic
/// oscillation rate of the amplitude itself (J_ν rides at unit frequency per
/// dilation factor).
fn oscillatory_u_integral<F: Fn(f64) -> f64 + Sync>(
    amplitude: &F,
    u_lo: f64,
    u_hi: f64,
    eta: f64,
    joints: &[f64],
    amp_freq: f64,
    nodes: usize,
) -> (Complex64, f64) {
    if u_hi <= u_lo {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let gl = GaussLegendre::cached(nodes);
    // panel boundaries: joints plus phase-uniform subdivision (Δ(ηu²) ≈ 5π
    // per panel) plus a minimum amplitude resolution of 8 panels per joint
    // interval, with geometric refinement toward u = 0
    let mut bounds: Vec<f64> = vec![u_lo];
    for &j in joints {
        if j > u_lo && j < u_hi {
            bounds.push(j);
        }
    }
    bounds.push(u_hi);
    let mut panels: Vec<(f64, f64)> = Vec::new();
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let phase_var = eta.abs() * (b * b - a * a);
        let by_phase = (phase_var / (5.0 * std::f64::consts::PI)).ceil() as usize;
        let by_amplitude = (0.5 * (b - a) * amp_freq).ceil() as usize;
        let parts = by_phase.max(by_amplitude).max(8);
        // phase-uniform boundaries: uniform in u²
        let a2 = a * a;
        let step = (b * b - a2) / parts as f64;
        for p in 0..parts {
            let lo = (a2 + p as f64 * step).sqrt();
            let hi = (a2 + (p + 1) as f64 * step).sqrt();
            if a == 0.0 && p == 0 {
                // refine the endpoint panel geometrically: the amplitude may
                // carry a u^{ν+1} singularity in its derivatives
                let mut edge = hi;
                let mut sub = Vec::new();
                for _ in 0..6 {
                    sub.push(edge);
                    edge *= 0.25;
                }
                sub.push(0.0);
                sub.reverse();
                for sw in sub.windows(2) {
                    panels.push((sw[0], sw[1]));
                }
            } else {
                panels.push((lo, hi));
            }
        }
    }
    let parts: Vec<Complex64> = panels
        .iter()
        .map(|&(a, b)| {
            gl.integrate_complex(a, b, |u| {
                let amp = amplitude(u);
                if amp == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, eta * u * u) * (2.0 * amp * u)
                }
            })
        })
        .collect();
    // the gross panel magnitude sets the f64 noise floor of the result
    let gross: f64 = parts.iter().map(|p| p.norm()).sum();
    (pairwise_sum_complex(&parts), gross)
}

/// Evaluate K^piece_{ν,r}(η) = ½∫ m(√|y| r) e^{iηy} dy on an η grid by
/// oscillatory quadrature in u = √y. Node doubling guards convergence.
pub fn kernel_sample(
    family: &CutoffFamily,
    piece: Piece,
    r: f64,
    eta_grid: &[f64],
) -> Result<KernelSample> {
    family.check_piece(piece)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("kernel radius must be positive, got {r}")));
    }
    let (lo, hi) = family.support(piece);
    let (u_lo, u_hi) = (lo / r, hi / r);
    let joints: Vec<f64> = family.joints(piece).iter().map(|&x| x / r).collect();
    let amp = |u: f64| family.m_piece_unchecked(piece, r * u);

    let mut values = Vec::with_capacity(eta_grid.len());
    let mut scale = 0.0f64;
    let mut coarse = Vec::with_capacity(eta_grid.len());
    for &eta in eta_grid {
        // ½ ∫_ℝ = ½ (half-line at +η) + ½ (half-line at -η)
        let (plus, _) = oscillatory_u_integral(&amp, u_lo, u_hi, eta, &joints, r, 16);
        let (minus, _) = oscillatory_u_integral(&amp, u_lo, u_hi, -eta, &joints, r, 16);
        let k = (plus + minus) * 0.5;
        scale = scale.max(k.norm());
        coarse.push(k);
    }
    for (idx, &eta) in eta_grid.iter().enumerate() {
        let (plus, gross_p) = oscillatory_u_integral(&amp, u_lo, u_hi, eta, &joints, r, 32);
        let (minus, gross_m) = oscillatory_u_integral(&amp, u_lo, u_hi, -eta, &joints, r, 32);
        let fine = (plus + minus) * 0.5;
        let err = (fine - coarse[idx]).norm();
        let floor = 1e-12 * (gross_p + gross_m);
        if err > (1e-6 * scale).max(floor).max(1e-300) {
            return Err(Error::NonConvergence(format!(
                "kernel quadrature at η={eta}, r={r}: doubling moved the value by {err:.3e}"
            )));
        }
        values.push(fine);
    }
    Ok(KernelSample {
        piece,
        nu: family.order().nu(),
        r,
        eta: eta_grid.to_vec(),
        values,
    })
}

/// The kernel-product integral ∫ m^j(a√|y|) m̄^j(b√|y|) e^{isy} dy on an
/// s grid; identically zero when the dilated supports are disjoint
/// (b/a outside (1/4, 4)).
pub fn kernel_product(
    family: &CutoffFamily,
    piece: Piece,
    a: f64,
    b: f64,
    s_grid: &[f64],
) -> Result<Vec<Complex64>> {
    family.check_piece(piece)?;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(format!(
            "kernel product needs positive dilations, got a={a}, b={b}"
        )));
    }
    let (lo, hi) = family.support(piece);
    let u_lo = (lo / a).max(lo / b);
    let u_hi = (hi / a).min(hi / b);
    if u_hi <= u_lo {
        return Ok(vec![Complex64::new(0.0, 0.0); s_grid.len()]);
    }
    let mut joints: Vec<f64> = family
        .joints(piece)
        .iter()
        .flat_map(|&x| [x / a, x / b])
        .filter(|&x| x > u_lo && x < u_hi)
        .collect();
    joints.sort_by(|x, y| x.partial_cmp(y).unwrap());
    joints.dedup();
    let amp = |u: f64| {
        family.m_piece_unchecked(piece, a * u) * family.m_piece_unchecked(piece, b * u)
    };
    let mut out = Vec::with_capacity(s_grid.len());
    let mut scale = 0.0f64;
    let mut coarse = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let (plus, _) = oscillatory_u_integral(&amp, u_lo, u_hi, s, &joints, a + b, 16);
        let (minus, _) = oscillatory_u_integral(&amp, u_lo, u_hi, -s, &joints, a + b, 16);
        let v = plus + minus; // ∫_ℝ, no ½: both half-lines contribute
        scale = scale.max(v.norm());
        coarse.push(v);
    }
    for (idx, &s) in s_grid.iter().enumerate() {
        let (plus, gross_p) = oscillatory_u_integral(&amp, u_lo, u_hi, s, &joints, a + b, 32);
        let (minus, gross_m) = oscillatory_u_integral(&amp, u_lo, u_hi, -s, &joints, a + b, 32);
        let fine = plus + minus;
        let err = (fine - coarse[idx]).norm();
        let floor = 1e-12 * (gross_p + gross_m);
        if err > (1e-6 * scale).max(floor).max(1e-300) {
            return Err(Error::NonConvergence(format!(
                "kernel product quadrature at s={s}: doubling moved the value by {err:.3e}"
            )));
        }
        out.push(fine);
    }
    Ok(out)
}

/// Bounding shape for the low-frequency kernel:
/// c(1+|η|)^{-(1+ν/2)} for 0 < ν ≤ 2, c(1+|η|)^{-2} for ν > 2 (the caller
/// supplies the fitted constant C(ν) through `c`).
pub fn phi0_bound(order: BesselOrder, eta: f64, c: f64) -> Result<f64> {
    let nu = order.nu();
    if nu <= 0.0 {
        return Err(Error::domain(
            "Φ⁰_ν needs ν > 0; the ν = 0 kernel is reported unasserted".to_string(),
        ));
    }
    let p = if nu <= 2.0 { 1.0 + 0.5 * nu } else { 2.0 };
    Ok(c * (1.0 + eta.abs()).powf(-p))
}

/// L¹ norm of Φ⁰_ν over ℝ: 4c/ν for ν ≤ 2, 2c for ν > 2.
pub fn phi0_l1(order: BesselOrder, c: f64) -> Result<f64> {
    let nu = order.nu();
    if nu <= 0.0 {
        return Err(Error::domain("Φ⁰_ν needs ν > 0".to_string()));
    }
    Ok(if nu <= 2.0 { 4.0 * c / nu } else { 2.0 * c })
}

/// High-frequency bounding function Φ_j(s): c·2^j on (0, 2^{-2j}],
/// c·s^{-1/2} on (2^{-2j}, 40·2^{-j}), c·2^j(2^{2j}s)^{-10} beyond.
pub fn phi_j_bound(j: i32, s: f64, c: f64) -> Result<f64> {
    if j < 1 {
        return Err(Error::domain(format!("Φ_j needs j ≥ 1, got {j}")));
    }
    if !(s > 0.0) {
        return Err(Error::domain(format!("Φ_j needs s > 0, got {s}")));
    }
    let two_j = (2.0f64).powi(j);
    let v = if s <= two_j.powi(-2) {
        two_j
    } else if s < 40.0 / two_j {
        s.powf(-0.5)
    } else {
        two_j * (two_j * two_j * s).powi(-10)
    };
    Ok(c * v)
}

/// L¹ norm of Φ_j over ℝ (even extension), in closed form.
pub fn phi_j_l1(j: i32, c: f64) -> Result<f64> {
    if j < 1 {
        return Err(Error::domain(format!("Φ_j needs j ≥ 1, got {j}")));
    }
    let two_j = (2.0f64).powi(j);
    let first = two_j * two_j.powi(-2); // 2^j · 2^{-2j}
    let second = 2.0 * ((40.0 / two_j).sqrt() - two_j.powi(-1));
    let s0 = 40.0 / two_j;
    let third = two_j * (two_j * two_j).powi(-10) * s0.powi(-9) / 9.0;
    Ok(2.0 * c * (first + second + third))
}

/// Sup over supp θ_j of 2^{j/2}|m^j_ν(ξ)| — the scaled shell amplitude that
/// the stationary-phase asymptotics predict to be flat in j and ν.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MjAmplitude {
    pub nu: f64,
    pub j: i32,
    pub sup_scaled: f64,
}

pub fn verify_mj_amplitude(family: &CutoffFamily, j: i32) -> Result<MjAmplitude> {
    family.check_piece(Piece::Shell(j))?;
    let (lo, hi) = family.support(Piece::Shell(j));
    let n = 2048;
    let mut sup = 0.0f64;
    for i in 0..=n {
        let xi = lo + (hi - lo) * i as f64 / n as f64;
        let m = family.m_piece_unchecked(Piece::Shell(j), xi);
        sup = sup.max(m.abs() * (2.0f64).powf(0.5 * j as f64));
    }
    Ok(MjAmplitude {
        nu: family.order().nu(),
        j,
        sup_scaled: sup,
    })
}
