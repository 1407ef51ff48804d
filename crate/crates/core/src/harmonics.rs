//! Angular mode analysis and synthesis between f(r,θ) and {f_k(r)}, and the
//! angularly averaged L_θ norm.
//!
//! The angular grid is uniform and dyadic, so analysis/synthesis are exact
//! discrete Fourier inversions for band-limited data and contribute no
//! quadrature error to downstream norms.

use crate::error::{Error, Result};
use crate::hankel::{RadialGrid, RadialProfile};
use crate::quad::pairwise_sum;
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Complex samples f(r_i, θ_m) on a radial grid × uniform angular grid
/// θ_m = 2πm/N_θ with N_θ a power of two ≥ 4.
#[derive(Debug, Clone)]
pub struct AngularField {
    pub values: Array2<Complex64>,
    pub rgrid: Arc<RadialGrid>,
}

impl AngularField {
    pub fn from_fn<F: FnMut(f64, f64) -> Complex64>(
        rgrid: Arc<RadialGrid>,
        n_theta: usize,
        mut f: F,
    ) -> Result<Self> {
        check_n_theta(n_theta)?;
        let n_r = rgrid.len();
        let mut values = Array2::zeros((n_r, n_theta));
        for (i, &r) in rgrid.nodes.iter().enumerate() {
            for m in 0..n_theta {
                let theta = 2.0 * std::f64::consts::PI * m as f64 / n_theta as f64;
                values[[i, m]] = f(r, theta);
            }
        }
        Ok(AngularField { values, rgrid })
    }

    pub fn n_theta(&self) -> usize {
        self.values.ncols()
    }
}

fn check_n_theta(n_theta: usize) -> Result<()> {
    if n_theta < 4 || !n_theta.is_power_of_two() {
        return Err(Error::grid(format!(
            "angular grid must be a power of two ≥ 4, got {n_theta}"
        )));
    }
    Ok(())
}

/// Collection {k → f_k(r)} with potential strength `a`; represents
/// f(r,θ) = Σ f_k(r) e^{ikθ}. All profiles share one radial grid.
#[derive(Debug, Clone)]
pub struct ModeField {
    pub a: f64,
    pub grid: Arc<RadialGrid>,
    pub modes: BTreeMap<i32, Array1<Complex64>>,
}

impl ModeField {
    pub fn new(a: f64, grid: Arc<RadialGrid>) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::domain(format!(
                "potential strength must be finite and nonnegative, got {a}"
            )));
        }
        Ok(ModeField {
            a,
            grid,
            modes: BTreeMap::new(),
        })
    }

    /// Effective Bessel order of mode k: ν(k) = √(a² + k²).
    pub fn nu(&self, k: i32) -> f64 {
        (self.a * self.a + (k as f64) * (k as f64)).sqrt()
    }

    pub fn insert(&mut self, k: i32, values: Array1<Complex64>) -> Result<()> {
        if values.len() != self.grid.len() {
            return Err(Error::grid(format!(
                "mode {k} has {} samples on a {}-node grid",
                values.len(),
                self.grid.len()
            )));
        }
        self.modes.insert(k, values);
        Ok(())
    }

    pub fn profile(&self, k: i32) -> Option<RadialProfile> {
        self.modes.get(&k).map(|v| RadialProfile {
            grid: self.grid.clone(),
            values: v.clone(),
        })
    }

    pub fn max_mode(&self) -> i32 {
        self.modes.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    /// Total L²(ℝ²) energy: 2π Σ_k Σ_i |f_k(r_i)|² w_i.
    pub fn l2_energy(&self) -> f64 {
        let per_mode: Vec<f64> = self
            .modes
            .values()
            .map(|v| {
                let vals: Vec<f64> = v
                    .iter()
                    .zip(&self.grid.weights)
                    .map(|(c, &w)| w * c.norm_sqr())
                    .collect();
                pairwise_sum(&vals)
            })
            .collect();
        2.0 * std::f64::consts::PI * pairwise_sum(&per_mode)
    }
}

/// Discrete Fourier analysis in θ: f_k(r_i) = (1/N_θ) Σ_m f(r_i,θ_m)e^{-ikθ_m},
/// keeping |k| ≤ k_max. Errors if the discarded tail carries more than 1e-8
/// of the field's energy.
pub fn decompose(field: &AngularField, a: f64, k_max: usize) -> Result<ModeField> {
    let n_theta = field.n_theta();
    if 2 * k_max >= n_theta {
        return Err(Error::grid(format!(
            "k_max = {k_max} requires an angular grid with more than {} points",
            2 * k_max
        )));
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n_theta);
    let n_r = field.rgrid.len();
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(n_r);
    for i in 0..n_r {
        let mut row: Vec<Complex64> = field.values.row(i).to_vec();
        fft.process(&mut row);
        for v in row.iter_mut() {
            *v /= n_theta as f64;
        }
        rows.push(row);
    }

    // weighted tail-energy check (Parseval per row)
    let mut tail = 0.0;
    let mut total = 0.0;
    for (i, row) in rows.iter().enumerate() {
        let w = field.rgrid.weights[i];
        for (bin, v) in row.iter().enumerate() {
            // signed wavenumber of this FFT bin
            let k = if bin <= n_theta / 2 {
                bin as i32
            } else {
                bin as i32 - n_theta as i32
            };
            let e = w * v.norm_sqr();
            total += e;
            if k.unsigned_abs() as usize > k_max {
                tail += e;
            }
        }
    }
    if total > 0.0 && tail > 1e-8 * total {
        return Err(Error::Aliasing {
            tail,
            limit: 1e-8 * total,
        });
    }

    let mut out = ModeField::new(a, field.rgrid.clone())?;
    for k in -(k_max as i32)..=(k_max as i32) {
        let bin = k.rem_euclid(n_theta as i32) as usize;
        let values: Array1<Complex64> = rows.iter().map(|row| row[bin]).collect();
        out.insert(k, values)?;
    }
    Ok(out)
}

/// Synthesis f(r_i, θ_m) = Σ_k f_k(r_i) e^{ikθ_m} on a dyadic angular grid
/// with N_θ > 2·max|k|.
pub fn recombine(modes: &ModeField, n_theta: usize) -> Result<AngularField> {
    check_n_theta(n_theta)?;
    if n_theta <= 2 * modes.max_mode() as usize {
        return Err(Error::grid(format!(
            "N_θ = {n_theta} cannot hold modes up to |k| = {}",
            modes.max_mode()
        )));
    }
    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(n_theta);
    let n_r = modes.grid.len();
    let mut values = Array2::zeros((n_r, n_theta));
    let mut row = vec![Complex64::new(0.0, 0.0); n_theta];
    for i in 0..n_r {
        row.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (&k, mode) in &modes.modes {
            let bin = k.rem_euclid(n_theta as i32) as usize;
            row[bin] += mode[i];
        }
        ifft.process(&mut row);
        for (m, &v) in row.iter().enumerate() {
            values[[i, m]] = v;
        }
    }
    Ok(AngularField {
        values,
        rgrid: modes.grid.clone(),
    })
}

/// L_θ norm at one radius from angular samples:
/// ((1/2π)∫|f(r,θ)|² dθ)^{1/2} by the exact dyadic quadrature.
pub fn l_theta_norm_field(field: &AngularField, r_index: usize) -> f64 {
    let row = field.values.row(r_index);
    let vals: Vec<f64> = row.iter().map(|v| v.norm_sqr()).collect();
    (pairwise_sum(&vals) / field.n_theta() as f64).sqrt()
}

/// L_θ norm at one radius from mode coefficients: (Σ_k |f_k(r)|²)^{1/2}.
pub fn l_theta_norm_modes(modes: &ModeField, r_index: usize) -> f64 {
    let vals: Vec<f64> = modes
        .modes
        .values()
        .map(|m| m[r_index].norm_sqr())
        .collect();
    pairwise_sum(&vals).sqrt()
}

/// Smooth compactly supported bump: exp(1 - 1/(1-x²)) for |x| < 1, else 0.
pub fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}
