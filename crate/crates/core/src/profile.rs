//! Entropy profile rows, the tail-window limsup surrogate, and the CSV
//! contracts shared by the measure and cover profiles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive range of Følner indices to scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NRange {
    pub start: u32,
    pub end: u32,
}

impl NRange {
    pub fn new(start: u32, end: u32) -> Self {
        NRange { start, end }
    }

    pub fn validate(&self) -> Result<()> {
        if self.start == 0 || self.start > self.end {
            return Err(Error::invalid(format!(
                "n_range [{}, {}] must satisfy 1 <= start <= end",
                self.start, self.end
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyUnit {
    Nats,
    Bits,
}

impl EntropyUnit {
    pub fn convert(&self, nats: f64) -> f64 {
        match self {
            EntropyUnit::Nats => nats,
            EntropyUnit::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            EntropyUnit::Nats => "nats",
            EntropyUnit::Bits => "bits",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRow {
    pub n: u32,
    /// `|S ∩ F_n|`, before any internal translate deduplication.
    pub count: u64,
    /// Joint entropy (nats) or `log N(join)` for cover profiles.
    pub joint: f64,
    pub normalized: f64,
    /// `N(join)` for cover profiles.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover_count: Option<u64>,
}

/// Finite-scale profile plus the tail-window maximum of the normalized
/// values, the working surrogate for the limsup. The window is the last
/// half of the computed rows; raw rows are always kept so the window can be
/// widened downstream.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyProfile {
    pub rows: Vec<ProfileRow>,
    pub tail_max: f64,
    /// Capacity message when the scan stopped early.
    pub truncation: Option<String>,
}

impl EntropyProfile {
    pub fn from_rows(rows: Vec<ProfileRow>, truncation: Option<String>) -> Self {
        let tail_max = rows[rows.len() / 2..]
            .iter()
            .map(|r| r.normalized)
            .fold(0.0f64, f64::max);
        EntropyProfile {
            rows,
            tail_max,
            truncation,
        }
    }

    pub fn truncated(&self) -> bool {
        self.truncation.is_some()
    }

    /// CSV contract for measure profiles:
    /// `n,count,joint_entropy,normalized,tail_max`.
    pub fn measure_csv(&self, unit: EntropyUnit) -> String {
        let mut out = String::from("n,count,joint_entropy,normalized,tail_max\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.n,
                row.count,
                format_sig(unit.convert(row.joint)),
                format_sig(unit.convert(row.normalized)),
                format_sig(unit.convert(self.tail_max)),
            ));
        }
        out
    }

    /// CSV contract for cover profiles, with the subcover count and solver
    /// mode: `n,count,n_join,joint_entropy,normalized,solver,tail_max`.
    pub fn top_csv(&self, unit: EntropyUnit, solver: &str) -> String {
        let mut out = String::from("n,count,n_join,joint_entropy,normalized,solver,tail_max\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.n,
                row.count,
                row.cover_count.unwrap_or(0),
                format_sig(unit.convert(row.joint)),
                format_sig(unit.convert(row.normalized)),
                solver,
                format_sig(unit.convert(self.tail_max)),
            ));
        }
        out
    }
}

/// Render with 12 significant digits, plain decimal notation.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).clamp(0, 30) as usize;
    format!("{:.*}", decimals, x)
}

/// Evaluate profile rows across a range, in parallel, preserving order and
/// the truncation contract: rows that fail with a capacity error end the
/// profile and set the truncation message; malformed-input errors
/// propagate.
pub(crate) fn compute_rows<F>(range: &NRange, row: F) -> Result<EntropyProfile>
where
    F: Fn(u32) -> Result<Option<ProfileRow>> + Sync,
{
    let results: Vec<(u32, Result<Option<ProfileRow>>)> = (range.start..=range.end)
        .into_par_iter()
        .map(|n| (n, row(n)))
        .collect();
    let mut rows = Vec::new();
    let mut truncation = None;
    for (_, result) in results {
        match result {
            Ok(Some(r)) => rows.push(r),
            Ok(None) => {}
            Err(e) if e.is_capacity() => {
                truncation = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(EntropyProfile::from_rows(rows, truncation))
}
