//! Spacetime norm measurement — the angularly averaged endpoint norm
//! L²_t L^∞_r L_θ — Strichartz-ratio estimation, and the discrete
//! Hardy–Littlewood maximal operator.
//!
//! Norms are restricted to a wavefront-contained window: r ≤ R_safe and
//! t ≤ T_safe with 2·s_max·T_safe < r_max - R_safe, so band-limited energy
//! cannot reach the domain truncation and reflect back into a measurement.
//! The sup over r is a grid max and is reported as a lower bound of the
//! true sup.

use crate::error::{Error, Result};
use crate::hankel::{FrequencyGrid, RadialGrid};
use crate::harmonics::ModeField;
use crate::kernels::TimeSignal;
use crate::propagator::{evolve_field, OperatorCache, Trajectory};
use crate::quad::pairwise_sum;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::sync::Arc;

pub const NORM_FORMAT_VERSION: u32 = 1;

/// Wavefront-containment window derived from the grid pairing.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SafeWindows {
    pub r_safe: f64,
    pub t_safe: f64,
}

impl SafeWindows {
    /// R_safe = 0.6·r_max; T_safe chosen so the group-velocity front
    /// 2·s_max·T_safe stays short of r_max - R_safe.
    pub fn from_grids(rgrid: &RadialGrid, fgrid: &FrequencyGrid) -> Self {
        let r_safe = 0.6 * rgrid.extent;
        let t_safe = (rgrid.extent - r_safe) / (2.0 * fgrid.extent);
        SafeWindows { r_safe, t_safe }
    }
}

/// Measured norm with its window and resolution metadata.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NormReport {
    pub format_version: u32,
    pub value: f64,
    pub t_window: (f64, f64),
    pub r_window: (f64, f64),
    pub grid: GridMeta,
    /// norm²(first half of the window) / norm²(full window): how much of the
    /// captured norm had already accumulated by T/2 — tail truncation is
    /// visible when this sits near 1 or far from it under T doubling
    pub captured_fraction: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct GridMeta {
    pub n_r: usize,
    pub r_max: f64,
    pub n_t: usize,
}

fn trapezoid_times(times: &[f64], values: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..times.len() {
        acc += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
    }
    acc
}

/// (∫₀^T [sup_{r≤R_safe} (Σ_k |v_k(r,t)|²)^{1/2}]² dt)^{1/2} by trapezoid in
/// t and grid max in r. Errors if the trajectory leaves the containment
/// window.
pub fn spacetime_norm(traj: &Trajectory, windows: &SafeWindows) -> Result<NormReport> {
    let t_max = traj.times.iter().cloned().fold(0.0f64, f64::max);
    if t_max > windows.t_safe * (1.0 + 1e-12) {
        return Err(Error::Wavefront(format!(
            "trajectory reaches t = {t_max:.4} beyond T_safe = {:.4}; \
             increase r_max or reduce t_max",
            windows.t_safe
        )));
    }
    let grid = &traj.states[0].grid;
    let sup_sq: Vec<f64> = traj
        .states
        .iter()
        .map(|mf| {
            let mut sup = 0.0f64;
            for (i, &r) in grid.nodes.iter().enumerate() {
                if r <= windows.r_safe {
                    let vals: Vec<f64> =
                        mf.modes.values().map(|m| m[i].norm_sqr()).collect();
                    sup = sup.max(pairwise_sum(&vals));
                }
            }
            sup
        })
        .collect();
    let total_sq = trapezoid_times(&traj.times, &sup_sq);
    // first-half contribution for the captured-fraction heuristic
    let half_t = 0.5 * t_max;
    let mut half_times = Vec::new();
    let mut half_vals = Vec::new();
    for (i, &t) in traj.times.iter().enumerate() {
        if t <= half_t * (1.0 + 1e-12) {
            half_times.push(t);
            half_vals.push(sup_sq[i]);
        }
    }
    let half_sq = trapezoid_times(&half_times, &half_vals);
    Ok(NormReport {
        format_version: NORM_FORMAT_VERSION,
        value: total_sq.sqrt(),
        t_window: (0.0, t_max),
        r_window: (0.0, windows.r_safe),
        grid: GridMeta {
            n_r: grid.len(),
            r_max: grid.extent,
            n_t: traj.times.len(),
        },
        captured_fraction: if total_sq > 0.0 { half_sq / total_sq } else { 1.0 },
    })
}

/// Σ_k ∫ sup_{r≤R_safe} |v_k|² dt — the mode-sum upper bound on the squared
/// spacetime norm.
pub fn mode_sum_bound(traj: &Trajectory, windows: &SafeWindows) -> f64 {
    let grid = &traj.states[0].grid;
    let ks: Vec<i32> = traj.states[0].modes.keys().copied().collect();
    let mut acc = 0.0;
    for k in ks {
        let sup_sq: Vec<f64> = traj
            .states
            .iter()
            .map(|mf| {
                let m = &mf.modes[&k];
                let mut sup = 0.0f64;
                for (i, &r) in grid.nodes.iter().enumerate() {
                    if r <= windows.r_safe {
                        sup = sup.max(m[i].norm_sqr());
                    }
                }
                sup
            })
            .collect();
        acc += trapezoid_times(&traj.times, &sup_sq);
    }
    acc
}

/// Strichartz measurement: the endpoint ratio and Lemma-style per-mode
/// constants C_k = (∫sup_r|v_k|²dt / ∫|f_k|²r dr)^{1/2}.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StrichartzReport {
    pub ratio: f64,
    pub per_mode: BTreeMap<i32, f64>,
    pub norm: NormReport,
}

/// Evolve `u0` over `times` and measure spacetime_norm / ‖u0‖_{L²(ℝ²)}.
pub fn strichartz_ratio(
    u0: &ModeField,
    fgrid: &Arc<FrequencyGrid>,
    times: &[f64],
    cache: &OperatorCache,
) -> Result<StrichartzReport> {
    let l2 = u0.l2_energy();
    if l2 <= 0.0 {
        return Err(Error::domain(
            "Strichartz ratio needs nonzero initial data".to_string(),
        ));
    }
    let traj = evolve_field(u0, cache, fgrid, times)?;
    let windows = SafeWindows::from_grids(&u0.grid, fgrid);
    let norm = spacetime_norm(&traj, &windows)?;
    let ratio = norm.value / l2.sqrt();

    let grid = &u0.grid;
    let mut per_mode = BTreeMap::new();
    for (&k, f_k) in &u0.modes {
        let denom: f64 = {
            let vals: Vec<f64> = f_k
                .iter()
                .zip(&grid.weights)
                .map(|(v, &w)| w * v.norm_sqr())
                .collect();
            pairwise_sum(&vals)
        };
        if denom == 0.0 {
            continue;
        }
        let sup_sq: Vec<f64> = traj
            .states
            .iter()
            .map(|mf| {
                let m = &mf.modes[&k];
                let mut sup = 0.0f64;
                for (i, &r) in grid.nodes.iter().enumerate() {
                    if r <= windows.r_safe {
                        sup = sup.max(m[i].norm_sqr());
                    }
                }
                sup
            })
            .collect();
        let num = trapezoid_times(&traj.times, &sup_sq);
        per_mode.insert(k, (num / denom).sqrt());
    }
    Ok(StrichartzReport {
        ratio,
        per_mode,
        norm,
    })
}

/// Discrete Hardy–Littlewood maximal function: max over symmetric
/// node-aligned windows of the trapezoid average of |g|, over the window set
/// {0} ∪ {1..16} ∪ {dyadic m ≤ P} (O(P log P) via prefix sums). Windows are
/// clipped to the grid, so the result is a lower bound of the continuum M.
pub fn maximal_function(g: &TimeSignal) -> TimeSignal {
    let p = g.len();
    let abs: Vec<f64> = g.values.iter().map(|v| v.norm()).collect();
    // prefix[q] = Σ_{n<q} |g_n|
    let mut prefix = vec![0.0f64; p + 1];
    for i in 0..p {
        prefix[i + 1] = prefix[i] + abs[i];
    }
    let mut radii: Vec<usize> = (1..=16.min(p.saturating_sub(1))).collect();
    let mut m = 32;
    while m < p {
        radii.push(m);
        m *= 2;
    }
    let values: Vec<Complex64> = (0..p)
        .map(|i| {
            let mut best = abs[i]; // m = 0 window
            for &m in &radii {
                if i >= m && i + m < p {
                    let sum = prefix[i + m + 1] - prefix[i - m] - 0.5 * (abs[i - m] + abs[i + m]);
                    best = best.max(sum / (2.0 * m as f64));
                }
            }
            Complex64::new(best, 0.0)
        })
        .collect();
    TimeSignal {
        dt: g.dt,
        values,
    }
}

/// Empirical operator constant max_g ‖M g‖_p / ‖g‖_p over a trial family.
pub fn maximal_inequality_check(signals: &[TimeSignal], p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain(format!(
            "maximal inequality holds for 1 < p < ∞, got {p}"
        )));
    }
    let mut worst = 0.0f64;
    for g in signals {
        let m = maximal_function(g);
        let np = |s: &TimeSignal| -> f64 {
            let vals: Vec<f64> = s.values.iter().map(|v| v.norm().powf(p)).collect();
            (pairwise_sum(&vals) * s.dt).powf(1.0 / p)
        };
        let denom = np(g);
        if denom > 0.0 {
            worst = worst.max(np(&m) / denom);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::BesselOrder;
    use crate::propagator::evolve_mode;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn maximal_of_constant_is_constant() {
        let g = TimeSignal::new(0.1, vec![Complex64::new(0.0, -2.5); 256]).unwrap();
        let m = maximal_function(&g);
        for v in &m.values {
            assert!((v.re - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn maximal_indicator_quarter_value() {
        // grid t ∈ [-1, 5] at dt = 1/8; indicator of [0,1] sampled half-open
        // (0 at the left jump node, 1 at nodes in (0, 1]): the trapezoid
        // window average then reproduces the continuum optimum — window
        // radius 2 at t = 2 averages exactly 1/4
        let dt = 0.125;
        let n = 49;
        let values: Vec<Complex64> = (0..n)
            .map(|i| {
                let t = -1.0 + i as f64 * dt;
                let v = if t > 1e-12 && t <= 1.0 + 1e-12 { 1.0 } else { 0.0 };
                Complex64::new(v, 0.0)
            })
            .collect();
        let g = TimeSignal::new(dt, values).unwrap();
        let m = maximal_function(&g);
        let at_2 = m.values[24].re; // t = 2
        assert!(
            (at_2 - 0.25).abs() < 1e-12,
            "indicator maximal value {at_2} ≠ 1/4"
        );
    }

    #[test]
    fn maximal_dominates_and_is_sublinear() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            let vals: Vec<Complex64> = (0..512)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            TimeSignal::new(0.01, vals).unwrap()
        };
        let g = mk(&mut rng);
        let h = mk(&mut rng);
        let mg = maximal_function(&g);
        let mh = maximal_function(&h);
        for (v, m) in g.values.iter().zip(&mg.values) {
            assert!(m.re >= v.norm() - 1e-15);
        }
        let sum = TimeSignal::new(
            0.01,
            g.values
                .iter()
                .zip(&h.values)
                .map(|(a, b)| a + b)
                .collect(),
        )
        .unwrap();
        let msum = maximal_function(&sum);
        for ((a, b), s) in mg.values.iter().zip(&mh.values).zip(&msum.values) {
            assert!(s.re <= a.re + b.re + 1e-12);
        }
    }

    #[test]
    fn maximal_two_two_constant_budget() {
        // seeded random step functions
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut signals = Vec::new();
        for _ in 0..20 {
            let mut vals = vec![Complex64::new(0.0, 0.0); 512];
            for _ in 0..6 {
                let a = rng.random_range(0..512);
                let b = (a + rng.random_range(1..128)).min(512);
                let level = rng.random::<f64>() * 2.0 - 1.0;
                for v in vals[a..b].iter_mut() {
                    *v += Complex64::new(level, 0.0);
                }
            }
            signals.push(TimeSignal::new(0.01, vals).unwrap());
        }
        // a lone spike: large maximal tail but finite p = 2 ratio
        let mut spike = vec![Complex64::new(0.0, 0.0); 512];
        spike[200] = Complex64::new(10.0, 0.0);
        signals.push(TimeSignal::new(0.01, spike).unwrap());

        let c = maximal_inequality_check(&signals, 2.0).unwrap();
        assert!(c >= 1.0 && c <= 4.0, "empirical 2→2 constant {c}");
        // constants contribute exactly 1
        let flat = vec![TimeSignal::new(0.1, vec![Complex64::new(1.0, 0.0); 64]).unwrap()];
        let c1 = maximal_inequality_check(&flat, 2.0).unwrap();
        assert!((c1 - 1.0).abs() < 1e-12);
        // p ≤ 1 rejected
        assert!(maximal_inequality_check(&flat, 1.0).is_err());
    }

    fn small_trajectory() -> (Trajectory, SafeWindows) {
        let rg = RadialGrid::gauss_legendre(192, 16.0).unwrap();
        let fg = RadialGrid::gauss_legendre(192, 12.0).unwrap();
        let mut u0 = ModeField::new(1.0, rg.clone()).unwrap();
        for k in [0i32, 2] {
            let vals: ndarray::Array1<Complex64> = rg
                .nodes
                .iter()
                .map(|&r| Complex64::new((-(r - 6.0) * (r - 6.0) / 2.0).exp(), 0.0))
                .collect();
            u0.insert(k, vals).unwrap();
        }
        let windows = SafeWindows::from_grids(&rg, &fg);
        let times: Vec<f64> = (0..9).map(|i| i as f64 * windows.t_safe / 8.0).collect();
        let cache = OperatorCache::new();
        let traj = evolve_field(&u0, &cache, &fg, &times).unwrap();
        (traj, windows)
    }

    #[test]
    fn spacetime_norm_basics() {
        let (traj, windows) = small_trajectory();
        let report = spacetime_norm(&traj, &windows).unwrap();
        assert!(report.value > 0.0);
        assert!(report.captured_fraction > 0.0 && report.captured_fraction <= 1.0);

        // mode-sum domination: norm² ≤ Σ_k ∫ sup_r |v_k|² dt
        let bound = mode_sum_bound(&traj, &windows);
        assert!(
            report.value * report.value <= bound * (1.0 + 1e-12),
            "{} vs {bound}",
            report.value * report.value
        );

        // zero trajectory
        let rg = traj.states[0].grid.clone();
        let zero_state = ModeField::new(1.0, rg).unwrap();
        let zero_traj = Trajectory {
            a: 1.0,
            times: vec![0.0, 0.01, 0.02],
            states: vec![zero_state.clone(), zero_state.clone(), zero_state],
        };
        assert_eq!(spacetime_norm(&zero_traj, &windows).unwrap().value, 0.0);
    }

    #[test]
    fn wavefront_violation_detected() {
        let (traj, windows) = small_trajectory();
        let tight = SafeWindows {
            r_safe: windows.r_safe,
            t_safe: windows.t_safe * 0.5,
        };
        assert!(matches!(
            spacetime_norm(&traj, &tight),
            Err(Error::Wavefront(_))
        ));
    }

    #[test]
    fn single_mode_norm_equals_mode_l2t() {
        let rg = RadialGrid::gauss_legendre(192, 16.0).unwrap();
        let fg = RadialGrid::gauss_legendre(192, 12.0).unwrap();
        let order = BesselOrder::new(1.0).unwrap();
        let op = crate::hankel::build_hankel(order, rg.clone(), fg.clone()).unwrap();
        let f = crate::hankel::RadialProfile::from_fn(rg.clone(), |r| {
            Complex64::new((-(r - 6.0) * (r - 6.0) / 2.0).exp(), 0.0)
        });
        let windows = SafeWindows::from_grids(&rg, &fg);
        let times: Vec<f64> = (0..7).map(|i| i as f64 * windows.t_safe / 6.0).collect();
        let mt = evolve_mode(&f, order, &op, &times).unwrap();
        let mut u0 = ModeField::new(0.0, rg.clone()).unwrap();
        u0.insert(1, f.values.clone()).unwrap();
        let cache = OperatorCache::new();
        let traj = evolve_field(&u0, &cache, &fg, &times).unwrap();
        let report = spacetime_norm(&traj, &windows).unwrap();

        // direct ‖ sup_r |v_k| ‖_{L²_t}
        let sup_sq: Vec<f64> = mt
            .states
            .iter()
            .map(|st| {
                let mut sup = 0.0f64;
                for (i, &r) in rg.nodes.iter().enumerate() {
                    if r <= windows.r_safe {
                        sup = sup.max(st.values[i].norm_sqr());
                    }
                }
                sup
            })
            .collect();
        let direct = trapezoid_times(&times, &sup_sq).sqrt();
        assert!(
            (report.value - direct).abs() < 1e-12 * direct.max(1.0),
            "{} vs {direct}",
            report.value
        );
    }

    #[test]
    fn strichartz_ratio_guards_zero_data() {
        let rg = RadialGrid::gauss_legendre(64, 16.0).unwrap();
        let fg: Arc<FrequencyGrid> = RadialGrid::gauss_legendre(64, 12.0).unwrap();
        let u0 = ModeField::new(0.0, rg).unwrap();
        let cache = OperatorCache::new();
        assert!(strichartz_ratio(&u0, &fg, &[0.0, 0.01], &cache).is_err());
    }
}
