//! Empirical distributions of evaluation samples and their CSV export.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::CandidatePosition;
use crate::error::MetricsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "throughput_Mbps")]
    ThroughputMbps,
    #[serde(rename = "delay_s")]
    DelayS,
}

impl MetricKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::ThroughputMbps => "throughput_Mbps",
            MetricKind::DelayS => "delay_s",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSeries {
    pub label: String,
    pub kind: MetricKind,
    pub samples: Vec<f64>,
}

impl MetricSeries {
    pub fn new(label: impl Into<String>, kind: MetricKind, samples: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            kind,
            samples,
        }
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        if self.samples.is_empty() {
            return Err(MetricsError::EmptySeries);
        }
        if let Some(&bad) = self.samples.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(MetricsError::BadSample {
                label: self.label.clone(),
                value: bad,
            });
        }
        Ok(())
    }

    pub fn median(&self) -> Option<f64> {
        median(&self.samples)
    }

    pub fn mean(&self) -> Option<f64> {
        if self.samples.is_empty() {
            None
        } else {
            Some(self.samples.iter().sum::<f64>() / self.samples.len() as f64)
        }
    }

    pub fn distribution(&self) -> Result<Vec<DistributionPoint>, MetricsError> {
        distribution(&self.samples)
    }
}

pub fn median(samples: &[f64]) -> Option<f64> {
    if samples.is_empty() {
        return None;
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    Some(if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    })
}

/// Empirical CDF and CCDF evaluated at each distinct sample value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionPoint {
    pub value: f64,
    /// Fraction of samples `<= value`.
    pub cdf: f64,
    /// Fraction of samples `> value`.
    pub ccdf: f64,
}

pub fn distribution(samples: &[f64]) -> Result<Vec<DistributionPoint>, MetricsError> {
    if samples.is_empty() {
        return Err(MetricsError::EmptySeries);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut points = Vec::new();
    let mut i = 0;
    while i < n {
        let v = sorted[i];
        let mut j = i;
        while j < n && sorted[j] == v {
            j += 1;
        }
        points.push(DistributionPoint {
            value: v,
            cdf: j as f64 / n as f64,
            ccdf: (n - j) as f64 / n as f64,
        });
        i = j;
    }
    Ok(points)
}

/// `(value, fraction <= value)` at each distinct value.
pub fn cdf(samples: &[f64]) -> Result<Vec<(f64, f64)>, MetricsError> {
    Ok(distribution(samples)?.iter().map(|p| (p.value, p.cdf)).collect())
}

/// `(value, fraction > value)` at each distinct value.
pub fn ccdf(samples: &[f64]) -> Result<Vec<(f64, f64)>, MetricsError> {
    Ok(distribution(samples)?.iter().map(|p| (p.value, p.ccdf)).collect())
}

/// What was run, so exported metric files can be traced back to inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub seeds: Vec<u64>,
    pub duration: f64,
    pub positions: Vec<CandidatePosition>,
}

impl RunManifest {
    pub fn new(
        scenario: impl Into<String>,
        seeds: Vec<u64>,
        duration: f64,
        positions: Vec<CandidatePosition>,
    ) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: scenario.into(),
            seeds,
            duration,
            positions,
        }
    }
}

pub const MANIFEST_FILE: &str = "manifest.json";

fn file_stem(series: &MetricSeries) -> String {
    let label: String = series
        .label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect();
    format!("{label}_{}", series.kind.as_str())
}

pub fn series_csv(series: &MetricSeries) -> Result<String, MetricsError> {
    series.validate()?;
    let mut out = String::from("value,cdf,ccdf\n");
    for p in series.distribution()? {
        writeln!(out, "{},{},{}", p.value, p.cdf, p.ccdf).expect("writing to a String");
    }
    Ok(out)
}

fn write(path: &Path, contents: &str) -> Result<(), MetricsError> {
    std::fs::write(path, contents).map_err(|source| MetricsError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes one `value,cdf,ccdf` file per series plus `manifest.json`.
/// Output is a pure function of the inputs.
pub fn export_metrics(
    series: &[MetricSeries],
    manifest: &RunManifest,
    out_dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>, MetricsError> {
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir).map_err(|source| MetricsError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::with_capacity(series.len() + 1);
    for s in series {
        let path = out_dir.join(format!("{}.csv", file_stem(s)));
        write(&path, &series_csv(s)?)?;
        written.push(path);
    }
    let path = out_dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(manifest).expect("manifest serializes") + "\n";
    write(&path, &json)?;
    written.push(path);
    Ok(written)
}
