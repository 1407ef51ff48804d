//! The six named experiments behind the CLI. Each fills a [`RunOutput`]
//! with checks, fitted constants, CSV tables and plot data.

use super::config::{ExperimentConfig, ModeTerm, ProfileKind, ProfileParams};
use super::rng::component_rng;
use super::{CheckResult, CsvCell, RunOutput};
use crate::bessel::{
    bessel_j, bessel_j_prime, bessel_j_second, bessel_split, verify_uniform_bounds, BesselOrder,
    OrderEvaluator,
};
use crate::error::{Error, Result};
use crate::hankel::{
    apply_a_nu, build_hankel, random_ring_profile, transform, Direction, RadialGrid,
    RadialProfile,
};
use crate::harmonics::ModeField;
use crate::kernels::scans::{
    fit_slope, k0_scan, log2_slope, product_scan, rj_scan, t1_shell_scan, RjScanConfig,
    T1ScanConfig,
};
use crate::kernels::{
    build_cutoffs, kernel_sample, phi_j_l1, verify_mj_amplitude, Piece, TimeSignal,
};
use crate::norms::{
    maximal_function, maximal_inequality_check, spacetime_norm, strichartz_ratio, SafeWindows,
};
use crate::propagator::{evolve_field, mass_drift, pde_residual, write_trajectory_csv, OperatorCache};
use num_complex::Complex64;
use rand::Rng;
use std::sync::Arc;

fn grids(cfg: &ExperimentConfig) -> Result<(Arc<RadialGrid>, Arc<RadialGrid>)> {
    Ok((
        RadialGrid::gauss_legendre(cfg.grid.n_r, cfg.grid.r_max)?,
        RadialGrid::gauss_legendre(cfg.grid.n_s, cfg.grid.s_max)?,
    ))
}

/// Evolve the configured initial data and export the trajectory with a norm
/// summary and conservation diagnostics.
pub fn propagate(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<()> {
    let (rgrid, fgrid) = grids(cfg)?;
    let spec = cfg.initial_data.as_ref().ok_or_else(|| {
        Error::config("initial_data", "propagate needs initial data")
    })?;
    let u0 = super::build_initial_data(spec, &rgrid, cfg.a, cfg.k_max)?;
    let cache = OperatorCache::new();
    let times = cfg.times();
    let traj = evolve_field(&u0, &cache, &fgrid, &times)?;

    let worst_drift = mass_drift(&traj).values().cloned().fold(0.0f64, f64::max);
    out.check(CheckResult::le("mass_conservation", worst_drift, 1e-8));

    if times.len() >= 3 {
        let residuals = pde_residual(&traj)?;
        let worst = residuals.values().cloned().fold(0.0f64, f64::max);
        out.constant("max_pde_residual", worst);
    }

    let windows = SafeWindows::from_grids(&rgrid, &fgrid);
    let norm = spacetime_norm(&traj, &windows)?;
    out.constant("spacetime_norm", norm.value);
    out.constant("captured_fraction", norm.captured_fraction);
    out.write_json("norms.json", &norm)?;

    let path = out.out_dir().join("trajectory.csv");
    let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
    write_trajectory_csv(&traj, &mut file)?;
    out.artifacts.push("trajectory.csv".to_string());
    Ok(())
}

fn default_lambdas() -> Vec<f64> {
    vec![0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
}

fn ring_terms(r_max: f64, ks: &[i32]) -> Vec<ModeTerm> {
    ks.iter()
        .map(|&k| ModeTerm {
            k,
            profile: ProfileKind::Gaussian,
            params: ProfileParams {
                r0: 0.35 * r_max,
                sigma: Some(r_max / 18.0),
                width: None,
                amplitude: None,
            },
        })
        .collect()
}

/// Scale-invariance of the endpoint ratio across matched-grid rescalings,
/// plus per-mode constants over k for each configured potential strength.
pub fn strichartz_scan(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<()> {
    let lambdas = cfg.scan.lambda.clone().unwrap_or_else(default_lambdas);
    let times = cfg.times();

    // --- scale invariance on a small mode mixture ---
    let mut scale_rows = Vec::new();
    let mut ratios = Vec::new();
    for &lam in &lambdas {
        let rgrid = RadialGrid::gauss_legendre(cfg.grid.n_r, cfg.grid.r_max / lam)?;
        let fgrid = RadialGrid::gauss_legendre(cfg.grid.n_s, cfg.grid.s_max * lam)?;
        let mut u0 = ModeField::new(cfg.a, rgrid.clone())?;
        for term in ring_terms(cfg.grid.r_max, &[0, 1, 3]) {
            let r0 = term.params.r0 / lam;
            let sigma = term.params.sigma.unwrap() / lam;
            let values: ndarray::Array1<Complex64> = rgrid
                .nodes
                .iter()
                .map(|&r| Complex64::new((-(r - r0) * (r - r0) / (2.0 * sigma * sigma)).exp(), 0.0))
                .collect();
            u0.insert(term.k, values)?;
        }
        let scaled_times: Vec<f64> = times.iter().map(|&t| t / (lam * lam)).collect();
        let cache = OperatorCache::new();
        let report = strichartz_ratio(&u0, &fgrid, &scaled_times, &cache)?;
        scale_rows.push(vec![CsvCell::from(lam), CsvCell::from(report.ratio)]);
        ratios.push(report.ratio);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios
        .iter()
        .map(|r| (r - mean).abs() / mean)
        .fold(0.0f64, f64::max);
    out.check(CheckResult::le("scale_invariance_spread", spread, 0.01));
    out.write_csv("strichartz_scale.csv", "lambda,ratio", &scale_rows)?;

    // --- per-mode constants over k for each potential strength ---
    let a_values = cfg.scan.a.clone().unwrap_or_else(|| vec![cfg.a]);
    let (rgrid, fgrid) = grids(cfg)?;
    let mut mode_rows = Vec::new();
    for &a in &a_values {
        let ks: Vec<i32> = (0..=cfg.k_max as i32).collect();
        let mut u0 = ModeField::new(a, rgrid.clone())?;
        for term in ring_terms(cfg.grid.r_max, &ks) {
            let sigma = term.params.sigma.unwrap();
            let values: ndarray::Array1<Complex64> = rgrid
                .nodes
                .iter()
                .map(|&r| {
                    Complex64::new(
                        (-(r - term.params.r0) * (r - term.params.r0)
                            / (2.0 * sigma * sigma))
                            .exp(),
                        0.0,
                    )
                })
                .collect();
            u0.insert(term.k, values)?;
        }
        let cache = OperatorCache::new();
        let report = strichartz_ratio(&u0, &fgrid, &times, &cache)?;
        let mut low_max = 0.0f64;
        let mut all_max = 0.0f64;
        for (&k, &c) in &report.per_mode {
            mode_rows.push(vec![
                CsvCell::from(a),
                CsvCell::from(k),
                CsvCell::from(u0.nu(k)),
                CsvCell::from(c),
            ]);
            if k <= 4 {
                low_max = low_max.max(c);
            }
            all_max = all_max.max(c);
        }
        if a > 0.0 {
            out.check(CheckResult::le(
                format!("mode_uniformity_a_{a}"),
                all_max,
                1.05 * low_max,
            ));
        } else {
            // ν(0) = 0 degenerates the low-frequency bound; report only
            out.constant("a0_k0_constant", report.per_mode.get(&0).copied().unwrap_or(0.0));
        }
        out.constant(format!("strichartz_ratio_a_{a}"), report.ratio);
    }
    out.write_csv("strichartz_modes.csv", "a,k,nu,constant", &mode_rows)?;
    Ok(())
}

/// Bessel-function verification: split identity, turning-zone uniform
/// bounds, recurrence and ODE consistency.
pub fn verify_bessel(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<()> {
    // split identity over ν ∈ [0.5, 20] × r ∈ [ν/2, 2ν], 200 deterministic samples
    let mut worst_split = 0.0f64;
    for i in 0..20 {
        let nu = 0.5 + 19.5 * i as f64 / 19.0;
        let order = BesselOrder::new(nu)?;
        let ev = OrderEvaluator::new(order);
        for jr in 0..10 {
            let r = 0.5 * nu + 1.5 * nu * jr as f64 / 9.0 + 1e-3;
            let (a, b) = ev.split(r)?;
            let direct = ev.eval(r)?;
            worst_split = worst_split.max((a - b - direct).abs());
        }
    }
    out.check(CheckResult::le("split_identity", worst_split, 1e-8));

    // Lemma-style uniform bounds across orders
    let nus = cfg
        .scan
        .nu
        .clone()
        .unwrap_or_else(|| vec![5.0, 10.0, 20.0, 40.0, 80.0]);
    let orders: Vec<BesselOrder> = nus
        .iter()
        .map(|&n| BesselOrder::new(n))
        .collect::<Result<_>>()?;
    let report = verify_uniform_bounds(&orders, 200)?;
    let mut rows = Vec::new();
    for b in &report.per_order {
        rows.push(vec![
            CsvCell::from(b.nu),
            CsvCell::from(b.c1),
            CsvCell::from(b.c2),
        ]);
    }
    out.write_csv("bessel_bounds.csv", "nu,c1,c2", &rows)?;
    let c1s: Vec<f64> = report.per_order.iter().map(|b| b.c1).collect();
    let c2s: Vec<f64> = report.per_order.iter().map(|b| b.c2).collect();
    let variation = |v: &[f64]| {
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v.iter().cloned().fold(0.0f64, f64::max);
        hi / lo
    };
    out.check(CheckResult::le("c1_variation", variation(&c1s), 2.0));
    out.check(CheckResult::le("c2_variation", variation(&c2s), 2.0));
    out.constant("c1_global", report.c1);
    out.constant("c2_global", report.c2);

    // recurrence against finite differences, and the defining ODE
    let mut worst_rec = 0.0f64;
    let mut worst_ode = 0.0f64;
    let h = 1e-5;
    for &nu in &[0.0, 0.5, 1.0, 2.5, 5.0, 10.0] {
        let order = BesselOrder::new(nu)?;
        for i in 1..=8 {
            let r = 1.5 * i as f64;
            let jp = bessel_j_prime(order, r)?;
            let fd = (bessel_j(order, r + h)? - bessel_j(order, r - h)?) / (2.0 * h);
            worst_rec = worst_rec.max((jp - fd).abs() / (1.0 + jp.abs()));
            let res = bessel_j_second(order, r)?
                + jp / r
                + (1.0 - nu * nu / (r * r)) * bessel_j(order, r)?;
            worst_ode = worst_ode.max(res.abs());
        }
    }
    out.check(CheckResult::le("recurrence_vs_fd", worst_rec, 1e-6));
    out.check(CheckResult::le("ode_residual", worst_ode, 1e-8));

    // appendix spot values
    let (_, b) = bessel_split(BesselOrder::new(3.0)?, 4.0)?;
    out.check(CheckResult::le("b_part_integer_order", b.abs(), 0.0));
    let (_, b10) = bessel_split(BesselOrder::new(10.5)?, 15.0)?;
    out.constant("b_part_over_c_nu", b10.abs() * 10.5);
    Ok(())
}

fn involution_and_plancherel(
    op: &crate::hankel::HankelOperator,
    profile: &RadialProfile,
) -> Result<(f64, f64)> {
    let spec = transform(op, profile, Direction::Forward)?;
    let back = transform(op, &spec, Direction::Inverse)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in back.values.iter().zip(&profile.values) {
        num += (a - b).norm_sqr();
        den += b.norm_sqr();
    }
    let inv = (num / den).sqrt();
    let pl = ((spec.mass() - profile.mass()) / profile.mass()).abs();
    Ok((inv, pl))
}

/// Hankel-transform verification: involution, Plancherel, diagonalization
/// with observed refinement order.
pub fn verify_hankel(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<()> {
    let nus = cfg
        .scan
        .nu
        .clone()
        .unwrap_or_else(|| vec![0.0, 0.5, 1.0, 2.5, 5.0]);
    let (rgrid, fgrid) = grids(cfg)?;
    let mut rows = Vec::new();
    let base_seed = super::rng::component_seed(cfg.seed, "verify-hankel");
    let mut worst_inv = 0.0f64;
    let mut worst_pl = 0.0f64;
    for (idx, &nu) in nus.iter().enumerate() {
        let op = build_hankel(BesselOrder::new(nu)?, rgrid.clone(), fgrid.clone())?;
        let profile = random_ring_profile(&rgrid, base_seed.wrapping_add(idx as u64));
        let (inv, pl) = involution_and_plancherel(&op, &profile)?;
        worst_inv = worst_inv.max(inv);
        worst_pl = worst_pl.max(pl);
        rows.push(vec![
            CsvCell::from(nu),
            CsvCell::from(inv),
            CsvCell::from(pl),
        ]);
    }
    out.check(CheckResult::le("involution", worst_inv, 1e-6));
    out.check(CheckResult::le("plancherel", worst_pl, 1e-6));
    out.write_csv("hankel_checks.csv", "nu,involution,plancherel", &rows)?;

    // diagonalization error and refinement order at ν = 1
    let order = BesselOrder::new(1.0)?;
    let mut errs = Vec::new();
    for n in [cfg.grid.n_r / 2, cfg.grid.n_r] {
        let rg = RadialGrid::gauss_legendre(n, cfg.grid.r_max)?;
        let fg = RadialGrid::gauss_legendre(n, cfg.grid.s_max)?;
        let op = build_hankel(order, rg.clone(), fg)?;
        let c = 0.4 * cfg.grid.r_max;
        let w = cfg.grid.r_max / 12.0;
        let f = RadialProfile::from_fn(rg, |r| {
            Complex64::new((-(r - c) * (r - c) / (2.0 * w * w)).exp(), 0.0)
        });
        let af = apply_a_nu(&f, order)?;
        let left = transform(&op, &af, Direction::Forward)?;
        let spec = transform(&op, &f, Direction::Forward)?;
        let mut num = 0.0;
        let mut den = 0.0;
        for ((l, s), &xi) in left.values.iter().zip(&spec.values).zip(&op.fgrid().nodes) {
            num += (l - s * (xi * xi)).norm_sqr();
            den += (s * (xi * xi)).norm_sqr();
        }
        errs.push((num / den).sqrt());
    }
    let order_observed = (errs[0] / errs[1]).log2();
    out.check(CheckResult::le("diagonalization", errs[1], 1e-3));
    out.check(CheckResult::ge("diagonalization_order", order_observed, 1.8));
    out.constant("diagonalization_error", errs[1]);
    out.constant("diagonalization_refinement_order", order_observed);
    Ok(())
}

/// Kernel-side verification: partition, low-frequency domination and tail
/// slopes, kernel products against Φ_j, operator decay R_j, middle-frequency
/// shell uniformity, and shell amplitudes.
pub fn verify_kernels(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<()> {
    let mut bound_rows: Vec<Vec<CsvCell>> = Vec::new();

    // partition of unity over the dyadic range
    let mut rng = component_rng(cfg.seed, "verify-kernels");
    let mut worst_partition = 0.0f64;
    for &nu in &[0.0, 0.5, 1.0, 2.5, 8.0] {
        let fam = build_cutoffs(BesselOrder::new(nu)?, 10)?;
        for _ in 0..1000 {
            let eta = rng.random::<f64>() * (2.0f64).powi(10);
            worst_partition = worst_partition.max((fam.theta_sum(eta) - 1.0).abs());
        }
    }
    out.check(CheckResult::le("partition_of_unity", worst_partition, 1e-12));

    // low-frequency kernel domination and tail slopes
    let nus = cfg
        .scan
        .nu
        .clone()
        .unwrap_or_else(|| vec![0.5, 1.0, 2.0, 3.0, 5.0, 8.0]);
    let mut tail_rows = Vec::new();
    let mut global_c = 0.0f64;
    for &nu in &nus {
        let rep = k0_scan(nu, 1000.0, 14)?;
        global_c = global_c.max(rep.fitted_c);
        bound_rows.push(vec![
            CsvCell::from("low"),
            CsvCell::from(nu),
            CsvCell::Int(0),
            CsvCell::from("tail_slope"),
            CsvCell::from(rep.tail_slope),
            CsvCell::from(rep.fitted_c),
        ]);
        for (eta, a) in &rep.samples {
            tail_rows.push(vec![
                CsvCell::from(nu),
                CsvCell::from(*eta),
                CsvCell::from(*a),
            ]);
        }
        if nu <= 2.0 {
            out.check(CheckResult::le(
                format!("k0_slope_two_sided_nu_{nu}"),
                (rep.tail_slope - rep.expected_slope).abs(),
                0.1,
            ));
        } else {
            // stationary phase gives a steeper true tail than the bound's
            // exponent; assert the bound direction only
            out.check(CheckResult::le(
                format!("k0_slope_at_least_nu_{nu}"),
                rep.tail_slope,
                rep.expected_slope + 0.1,
            ));
        }
    }
    out.constant("k0_fitted_c", global_c);
    out.check(CheckResult::le("k0_fitted_c_finite", global_c, 1e3));
    out.write_csv("plotdata_k0_tail.csv", "nu,eta,abs_k", &tail_rows)?;

    // ν = 0 low piece is empty by construction; measured, never asserted
    {
        let fam = build_cutoffs(BesselOrder::new(0.0)?, 6)?;
        let ks = kernel_sample(&fam, Piece::Low, 1.0, &[0.0, 1.0, 10.0])?;
        let sup = ks.values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        out.constant("k0_nu0_sup", sup);
    }

    // kernel products dominated by Φ_j on the measurable branches
    let j_list = cfg.scan.j.clone().unwrap_or_else(|| (4..=8).collect());
    let (j_lo, j_hi) = (
        *j_list.iter().min().unwrap_or(&4),
        *j_list.iter().max().unwrap_or(&8),
    );
    let products = product_scan(1.0, j_lo, j_hi, &[1.0 / 3.0, 1.0, 3.0], 24)?;
    let mut prod_c = 0.0f64;
    for p in &products {
        prod_c = prod_c.max(p.fitted_c);
        bound_rows.push(vec![
            CsvCell::from("shell_product"),
            CsvCell::from(1.0),
            CsvCell::from(p.j),
            CsvCell::from("fitted_c"),
            CsvCell::from(p.fitted_c),
            CsvCell::from(p.fitted_c),
        ]);
    }
    out.constant("product_fitted_c", prod_c);
    out.check(CheckResult::le("product_fitted_c_finite", prod_c, 1e3));

    // ‖Φ_j‖₁ decay slope
    let l1_pts: Vec<(f64, f64)> = (j_lo..=j_hi)
        .map(|j| (j as f64, phi_j_l1(j, 1.0).unwrap().log2()))
        .collect();
    let l1_fit = fit_slope(&l1_pts);
    out.check(CheckResult::le(
        "phi_j_l1_slope_dev",
        (l1_fit.slope + 0.5).abs(),
        0.15,
    ));
    let mut l1_rows = Vec::new();
    for j in j_lo..=j_hi {
        l1_rows.push(vec![CsvCell::from(j), CsvCell::from(phi_j_l1(j, 1.0)?)]);
    }
    out.write_csv("plotdata_phij_l1.csv", "j,l1", &l1_rows)?;

    // operator-ratio decay R_j
    let rj_cfg = RjScanConfig {
        nu: 1.0,
        j_lo: 3,
        j_hi: 8,
        seed: super::rng::component_seed(cfg.seed, "rj-scan"),
        ..Default::default()
    };
    let rj = rj_scan(&rj_cfg)?;
    let fit = log2_slope(&rj);
    out.check(CheckResult::le(
        "rj_slope_dev",
        (fit.slope + 0.5).abs(),
        0.15,
    ));
    out.constant("rj_slope", fit.slope);
    let mut rj_rows = Vec::new();
    for p in &rj {
        out.constant(format!("rj_ratio_j_{}", p.index), p.ratio);
        rj_rows.push(vec![CsvCell::from(p.index), CsvCell::from(p.ratio)]);
        bound_rows.push(vec![
            CsvCell::from("shell_operator"),
            CsvCell::from(rj_cfg.nu),
            CsvCell::from(p.index),
            CsvCell::from("ratio"),
            CsvCell::from(p.ratio),
            CsvCell::from(fit.slope),
        ]);
    }
    out.write_csv("plotdata_rj_decay.csv", "j,ratio", &rj_rows)?;

    // middle-frequency per-shell uniformity at ν ∈ {1, 2.5, 8}
    for &nu in &[1.0, 2.5, 8.0] {
        let cfg_t1 = T1ScanConfig {
            nu,
            seed: super::rng::component_seed(cfg.seed, "t1-scan"),
            ..Default::default()
        };
        let pts = t1_shell_scan(&cfg_t1)?;
        let lo = pts.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p.ratio).fold(0.0f64, f64::max);
        out.check(CheckResult::le(
            format!("t1_shell_variation_nu_{nu}"),
            hi / lo,
            2.0,
        ));
        for p in &pts {
            bound_rows.push(vec![
                CsvCell::from("mid"),
                CsvCell::from(nu),
                CsvCell::from(p.index),
                CsvCell::from("shell_constant"),
                CsvCell::from(p.ratio),
                CsvCell::from(hi),
            ]);
        }
    }

    // scaled shell amplitudes 2^{j/2}|m^j| flat in j and ν
    let fam2 = build_cutoffs(BesselOrder::new(2.0)?, 12)?;
    let mut amp = Vec::new();
    for j in 6..=12 {
        let a = verify_mj_amplitude(&fam2, j)?;
        bound_rows.push(vec![
            CsvCell::from("shell_amplitude"),
            CsvCell::from(2.0),
            CsvCell::from(j),
            CsvCell::from("sup_scaled"),
            CsvCell::from(a.sup_scaled),
            CsvCell::from(0.0),
        ]);
        amp.push(a.sup_scaled);
    }
    let lo = amp.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = amp.iter().cloned().fold(0.0f64, f64::max);
    out.check(CheckResult::le("mj_amplitude_flat", hi / lo, 1.5));
    let fam10 = build_cutoffs(BesselOrder::new(10.0)?, 12)?;
    let a2 = verify_mj_amplitude(&fam2, 8)?.sup_scaled;
    let a10 = verify_mj_amplitude(&fam10, 8)?.sup_scaled;
    out.check(CheckResult::le(
        "mj_amplitude_nu_uniform",
        (a2 / a10).max(a10 / a2),
        2.0,
    ));

    out.write_csv(
        "kernels_bounds.csv",
        "piece,nu,j,param,value,fitted_constant",
        &bound_rows,
    )?;
    Ok(())
}

/// Maximal-operator verification: pointwise domination, the exact
/// indicator spot value, and the empirical 2→2 constant.
pub fn verify_maximal(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<()> {
    // indicator of [0,1] sampled half-open on t ∈ [-1, 5]: the trapezoid
    // window average then reproduces the continuum optimum exactly
    let dt = 0.125;
    let values: Vec<Complex64> = (0..49)
        .map(|i| {
            let t = -1.0 + i as f64 * dt;
            let v = if t > 1e-12 && t <= 1.0 + 1e-12 { 1.0 } else { 0.0 };
            Complex64::new(v, 0.0)
        })
        .collect();
    let g = TimeSignal::new(dt, values)?;
    let m = maximal_function(&g);
    out.check(CheckResult::le(
        "indicator_spot_value",
        (m.values[24].re - 0.25).abs(),
        1e-12,
    ));

    // pointwise domination and the 2→2 constant over a seeded family
    let mut rng = component_rng(cfg.seed, "verify-maximal");
    let mut signals = Vec::new();
    for _ in 0..40 {
        let mut vals = vec![Complex64::new(0.0, 0.0); 512];
        for _ in 0..6 {
            let a = rng.random_range(0..512usize);
            let b = (a + rng.random_range(1..128usize)).min(512);
            let level = rng.random::<f64>() * 2.0 - 1.0;
            for v in vals[a..b].iter_mut() {
                *v += Complex64::new(level, 0.0);
            }
        }
        signals.push(TimeSignal::new(0.01, vals)?);
    }
    let mut spike = vec![Complex64::new(0.0, 0.0); 512];
    spike[200] = Complex64::new(10.0, 0.0);
    signals.push(TimeSignal::new(0.01, spike)?);

    let mut domination_defect = 0.0f64;
    for g in &signals {
        let m = maximal_function(g);
        for (v, mv) in g.values.iter().zip(&m.values) {
            domination_defect = domination_defect.max(v.norm() - mv.re);
        }
    }
    out.check(CheckResult::le("pointwise_domination", domination_defect, 0.0));

    let c = maximal_inequality_check(&signals, 2.0)?;
    out.check(CheckResult::le("empirical_l2_constant", c, 4.0));
    out.constant("empirical_l2_constant", c);
    Ok(())
}
