//! Experiment configuration: strict JSON with unknown-field rejection and
//! load-time validation (including wavefront containment of the time window).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Propagate,
    StrichartzScan,
    VerifyBessel,
    VerifyHankel,
    VerifyKernels,
    VerifyMaximal,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Propagate => "propagate",
            ExperimentKind::StrichartzScan => "strichartz-scan",
            ExperimentKind::VerifyBessel => "verify-bessel",
            ExperimentKind::VerifyHankel => "verify-hankel",
            ExperimentKind::VerifyKernels => "verify-kernels",
            ExperimentKind::VerifyMaximal => "verify-maximal",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_r: usize,
    pub r_max: f64,
    pub n_s: usize,
    pub s_max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_max: f64,
    pub n_t: usize,
}

/// Initial-data specification consumed from runner configs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialDataSpec {
    /// Single angular mode with a Gaussian ring profile.
    Gaussian { r0: f64, sigma: f64, k: i32 },
    /// Sum of per-mode profiles.
    ModeMixture { terms: Vec<ModeTerm> },
    /// CSV rows r,theta_index,re,im sampled on the configured radial grid.
    GridFile { path: PathBuf },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeTerm {
    pub k: i32,
    pub profile: ProfileKind,
    pub params: ProfileParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Gaussian,
    Bump,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileParams {
    pub r0: f64,
    /// Gaussian standard deviation (required by `gaussian`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// Bump half-width (required by `bump`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    /// Complex amplitude (re, im); defaults to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<(f64, f64)>,
}

/// Optional scan lists. Absent lists fall back to per-experiment defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<i32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<Vec<f64>>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("runs")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub k_max: usize,
    pub grid: GridConfig,
    pub time: TimeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_data: Option<InitialDataSpec>,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config: ExperimentConfig = serde_json::from_str(&text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.n_r < 2 {
            return Err(Error::config("grid.n_r", "must be at least 2"));
        }
        if self.grid.n_s < 2 {
            return Err(Error::config("grid.n_s", "must be at least 2"));
        }
        if !(self.grid.r_max > 0.0 && self.grid.r_max.is_finite()) {
            return Err(Error::config("grid.r_max", "must be positive"));
        }
        if !(self.grid.s_max > 0.0 && self.grid.s_max.is_finite()) {
            return Err(Error::config("grid.s_max", "must be positive"));
        }
        if self.time.n_t < 2 {
            return Err(Error::config("time.n_t", "must be at least 2"));
        }
        if !(self.time.t_max >= 0.0 && self.time.t_max.is_finite()) {
            return Err(Error::config("time.t_max", "must be nonnegative"));
        }
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::config("a", "must be nonnegative"));
        }
        // wavefront containment: T_safe = (r_max - 0.6 r_max)/(2 s_max)
        let t_safe = 0.2 * self.grid.r_max / self.grid.s_max;
        if matches!(
            self.experiment,
            ExperimentKind::Propagate | ExperimentKind::StrichartzScan
        ) && self.time.t_max > t_safe * (1.0 + 1e-12)
        {
            return Err(Error::config(
                "time.t_max",
                format!(
                    "violates wavefront containment (T_safe = {t_safe:.6}); \
                     increase grid.r_max, reduce grid.s_max, or reduce time.t_max"
                ),
            ));
        }
        if let Some(InitialDataSpec::ModeMixture { terms }) = &self.initial_data {
            for (i, term) in terms.iter().enumerate() {
                match term.profile {
                    ProfileKind::Gaussian if term.params.sigma.is_none() => {
                        return Err(Error::config(
                            format!("initial_data.terms[{i}].params.sigma"),
                            "gaussian profile needs sigma",
                        ));
                    }
                    ProfileKind::Bump if term.params.width.is_none() => {
                        return Err(Error::config(
                            format!("initial_data.terms[{i}].params.width"),
                            "bump profile needs width",
                        ));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Uniform output times [0, t_max].
    pub fn times(&self) -> Vec<f64> {
        let n = self.time.n_t;
        (0..n)
            .map(|i| self.time.t_max * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Build a mode field from the initial-data specification.
pub fn build_initial_data(
    spec: &InitialDataSpec,
    grid: &std::sync::Arc<crate::hankel::RadialGrid>,
    a: f64,
    k_max: usize,
) -> Result<crate::harmonics::ModeField> {
    use crate::harmonics::{bump, decompose, AngularField, ModeField};
    use num_complex::Complex64;

    let mut field = ModeField::new(a, grid.clone())?;
    match spec {
        InitialDataSpec::Gaussian { r0, sigma, k } => {
            if !(sigma.is_finite() && *sigma > 0.0) {
                return Err(Error::config("initial_data.sigma", "must be positive"));
            }
            let values: ndarray::Array1<Complex64> = grid
                .nodes
                .iter()
                .map(|&r| {
                    Complex64::new((-(r - r0) * (r - r0) / (2.0 * sigma * sigma)).exp(), 0.0)
                })
                .collect();
            field.insert(*k, values)?;
        }
        InitialDataSpec::ModeMixture { terms } => {
            for term in terms {
                let amp = term
                    .params
                    .amplitude
                    .map(|(re, im)| Complex64::new(re, im))
                    .unwrap_or_else(|| Complex64::new(1.0, 0.0));
                let r0 = term.params.r0;
                let values: ndarray::Array1<Complex64> = match term.profile {
                    ProfileKind::Gaussian => {
                        let sigma = term.params.sigma.ok_or_else(|| {
                            Error::config("initial_data.params.sigma", "gaussian needs sigma")
                        })?;
                        grid.nodes
                            .iter()
                            .map(|&r| {
                                amp * (-(r - r0) * (r - r0) / (2.0 * sigma * sigma)).exp()
                            })
                            .collect()
                    }
                    ProfileKind::Bump => {
                        let width = term.params.width.ok_or_else(|| {
                            Error::config("initial_data.params.width", "bump needs width")
                        })?;
                        grid.nodes
                            .iter()
                            .map(|&r| amp * bump((r - r0) / width))
                            .collect()
                    }
                };
                // accumulate into any existing mode
                if let Some(existing) = field.modes.get(&term.k).cloned() {
                    field.insert(term.k, existing + values)?;
                } else {
                    field.insert(term.k, values)?;
                }
            }
        }
        InitialDataSpec::GridFile { path } => {
            let text = std::fs::read_to_string(path)?;
            let mut rows: Vec<(usize, usize, Complex64)> = Vec::new();
            let mut max_theta = 0usize;
            for (ln, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || (ln == 0 && line.starts_with(|c: char| c.is_alphabetic())) {
                    continue; // optional header
                }
                let parts: Vec<&str> = line.split(',').collect();
                if parts.len() != 4 {
                    return Err(Error::config(
                        "initial_data.path",
                        format!("line {} needs r,theta_index,re,im", ln + 1),
                    ));
                }
                let r: f64 = parts[0].trim().parse().map_err(|e| {
                    Error::config("initial_data.path", format!("line {}: {e}", ln + 1))
                })?;
                let theta_index: usize = parts[1].trim().parse().map_err(|e| {
                    Error::config("initial_data.path", format!("line {}: {e}", ln + 1))
                })?;
                let re: f64 = parts[2].trim().parse().map_err(|e| {
                    Error::config("initial_data.path", format!("line {}: {e}", ln + 1))
                })?;
                let im: f64 = parts[3].trim().parse().map_err(|e| {
                    Error::config("initial_data.path", format!("line {}: {e}", ln + 1))
                })?;
                // locate the grid node
                let i = grid
                    .nodes
                    .iter()
                    .position(|&node| (node - r).abs() <= 1e-9 * node.abs().max(1.0))
                    .ok_or_else(|| {
                        Error::config(
                            "initial_data.path",
                            format!("line {}: r = {r} is not a grid node", ln + 1),
                        )
                    })?;
                max_theta = max_theta.max(theta_index);
                rows.push((i, theta_index, Complex64::new(re, im)));
            }
            let n_theta = (max_theta + 1).next_power_of_two().max(4);
            let mut values = ndarray::Array2::zeros((grid.len(), n_theta));
            for (i, m, v) in rows {
                values[[i, m]] = v;
            }
            let afield = AngularField {
                values,
                rgrid: grid.clone(),
            };
            return decompose(&afield, a, k_max);
        }
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_json() -> serde_json::Value {
        serde_json::json!({
            "experiment": "propagate",
            "a": 1.0,
            "k_max": 2,
            "grid": {"n_r": 64, "r_max": 16.0, "n_s": 64, "s_max": 12.0},
            "time": {"t_max": 0.2, "n_t": 8},
            "initial_data": {"type": "gaussian", "r0": 6.0, "sigma": 1.0, "k": 0},
            "seed": 7
        })
    }

    #[test]
    fn parses_and_validates() {
        let cfg: ExperimentConfig = serde_json::from_value(base_json()).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.experiment.name(), "propagate");
        assert_eq!(cfg.times().len(), 8);
    }

    #[test]
    fn rejects_unknown_fields() {
        let mut v = base_json();
        v["surprise"] = serde_json::json!(1);
        assert!(serde_json::from_value::<ExperimentConfig>(v).is_err());
    }

    #[test]
    fn rejects_zero_counts_and_uncontained_time() {
        let mut v = base_json();
        v["grid"]["n_r"] = serde_json::json!(0);
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        assert!(matches!(cfg.validate(), Err(Error::Config { .. })));

        let mut v = base_json();
        v["time"]["t_max"] = serde_json::json!(1.0); // T_safe = 0.2·16/12 ≈ 0.267
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("wavefront"), "{err}");
    }

    #[test]
    fn initial_data_variants_build() {
        let grid = crate::hankel::RadialGrid::gauss_legendre(64, 16.0).unwrap();
        let spec = InitialDataSpec::ModeMixture {
            terms: vec![
                ModeTerm {
                    k: 1,
                    profile: ProfileKind::Gaussian,
                    params: ProfileParams {
                        r0: 5.0,
                        sigma: Some(1.0),
                        width: None,
                        amplitude: None,
                    },
                },
                ModeTerm {
                    k: -2,
                    profile: ProfileKind::Bump,
                    params: ProfileParams {
                        r0: 7.0,
                        sigma: None,
                        width: Some(2.0),
                        amplitude: Some((0.0, 1.0)),
                    },
                },
            ],
        };
        let mf = build_initial_data(&spec, &grid, 0.5, 4).unwrap();
        assert_eq!(mf.modes.len(), 2);
        assert!(mf.l2_energy() > 0.0);
    }

    #[test]
    fn grid_file_roundtrip() {
        let grid = crate::hankel::RadialGrid::gauss_legendre(16, 8.0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("field.csv");
        let mut text = String::from("r,theta_index,re,im\n");
        for (i, &r) in grid.nodes.iter().enumerate() {
            for m in 0..8 {
                // pure k = 1 mode
                let theta = 2.0 * std::f64::consts::PI * m as f64 / 8.0;
                let v = num_complex::Complex64::new(0.0, theta).exp() * (-r).exp();
                text.push_str(&format!("{r},{m},{},{}\n", v.re, v.im));
                let _ = i;
            }
        }
        std::fs::write(&path, text).unwrap();
        let mf = build_initial_data(
            &InitialDataSpec::GridFile { path },
            &grid,
            0.0,
            3,
        )
        .unwrap();
        // only k = 1 carries energy
        for (&k, mode) in &mf.modes {
            let e: f64 = mode.iter().map(|v| v.norm_sqr()).sum();
            if k == 1 {
                assert!(e > 0.1);
            } else {
                assert!(e < 1e-20, "mode {k} has energy {e}");
            }
        }
    }
}
