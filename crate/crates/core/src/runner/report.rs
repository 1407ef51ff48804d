//! Aggregation of run records into a markdown + CSV summary.

use super::{RunRecord, RUN_FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::kernels::scans::fit_slope;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize)]
pub struct ConstantSummary {
    pub name: String,
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary {
    pub runs: usize,
    pub all_passed: bool,
    pub constants: Vec<ConstantSummary>,
    /// slope of log₂ R_j against j pooled across records, when present,
    /// with a ±2·stderr confidence band
    pub rj_slope: Option<(f64, f64)>,
    pub markdown: String,
    pub csv: String,
}

/// Aggregate fitted constants across runs; records must share the format
/// version. An empty list yields an empty summary.
pub fn report(records: &[RunRecord]) -> Result<ReportSummary> {
    for rec in records {
        if rec.format_version != RUN_FORMAT_VERSION {
            return Err(Error::Version {
                expected: RUN_FORMAT_VERSION,
                got: rec.format_version,
            });
        }
    }
    let mut by_name: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for rec in records {
        for (name, &value) in &rec.fitted_constants {
            by_name.entry(name).or_default().push(value);
        }
    }
    let constants: Vec<ConstantSummary> = by_name
        .iter()
        .map(|(name, vals)| ConstantSummary {
            name: name.to_string(),
            count: vals.len(),
            mean: vals.iter().sum::<f64>() / vals.len() as f64,
            min: vals.iter().cloned().fold(f64::INFINITY, f64::min),
            max: vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        })
        .collect();

    // pooled R_j decay points from any kernels runs
    let mut rj_points = Vec::new();
    for rec in records {
        for (name, &value) in &rec.fitted_constants {
            if let Some(jtxt) = name.strip_prefix("rj_ratio_j_") {
                if let Ok(j) = jtxt.parse::<f64>() {
                    rj_points.push((j, value.log2()));
                }
            }
        }
    }
    let rj_slope = if rj_points.len() >= 3 {
        let fit = fit_slope(&rj_points);
        Some((fit.slope, 2.0 * fit.stderr))
    } else {
        None
    };

    let all_passed = records.iter().all(|r| r.passed);
    let mut markdown = String::new();
    markdown.push_str("# Run summary\n\n");
    markdown.push_str(&format!(
        "{} run(s), all checks passed: {}\n\n",
        records.len(),
        all_passed
    ));
    if let Some((slope, band)) = rj_slope {
        markdown.push_str(&format!(
            "Pooled log2 R_j slope: {slope:.4} ± {band:.4}\n\n"
        ));
    }
    markdown.push_str("| constant | count | mean | min | max |\n|---|---|---|---|---|\n");
    let mut csv = String::from("name,count,mean,min,max\n");
    for c in &constants {
        markdown.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            c.name, c.count, c.mean, c.min, c.max
        ));
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            c.name, c.count, c.mean, c.min, c.max
        ));
    }
    Ok(ReportSummary {
        runs: records.len(),
        all_passed,
        constants,
        rj_slope,
        markdown,
        csv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_empty() {
        let summary = report(&[]).unwrap();
        assert_eq!(summary.runs, 0);
        assert!(summary.constants.is_empty());
        assert!(summary.all_passed);
    }

    #[test]
    fn version_mismatch_rejected() {
        let cfg: super::super::ExperimentConfig = serde_json::from_value(serde_json::json!({
            "experiment": "verify-maximal",
            "grid": {"n_r": 8, "r_max": 4.0, "n_s": 8, "s_max": 4.0},
            "time": {"t_max": 0.0, "n_t": 2}
        }))
        .unwrap();
        let rec = RunRecord {
            format_version: 99,
            experiment: "verify-maximal".into(),
            code_version: "0".into(),
            seed: 0,
            config: cfg,
            timing_seconds: 0.0,
            checks: vec![],
            fitted_constants: BTreeMap::new(),
            artifacts: vec![],
            passed: true,
        };
        assert!(matches!(report(&[rec]), Err(Error::Version { .. })));
    }
}
