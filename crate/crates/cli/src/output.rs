//! Deterministic CSV datasets and their JSON sidecars.
//!
//! CSV: comma separated, one header row, LF line endings, floats in
//! 12-significant-digit scientific notation, rows in grid order. Two runs
//! of the same configuration produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// Render a float with 12 significant digits in scientific notation.
pub fn fmt_sig12(v: f64) -> String {
    format!("{v:.11e}")
}

/// Filename-safe rendering of a parameter value: `-0.9` -> `m0p9`.
pub fn fmt_token(v: f64) -> String {
    format!("{v}").replace('-', "m").replace('.', "p")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    Num(f64),
    Empty,
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Num(v) => fmt_sig12(*v),
            Field::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Dataset {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Field::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsMeta {
    pub epsilon: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub j_defect: i64,
}

impl From<&ctqw_core::DefectLineParams> for ParamsMeta {
    fn from(p: &ctqw_core::DefectLineParams) -> Self {
        Self {
            epsilon: p.epsilon,
            gamma: p.gamma,
            alpha: p.alpha,
            beta: p.beta,
            j_defect: p.j_defect,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowMeta {
    pub center: i64,
    pub radius: usize,
}

impl From<&ctqw_core::LatticeWindow> for WindowMeta {
    fn from(w: &ctqw_core::LatticeWindow) -> Self {
        Self {
            center: w.center(),
            radius: w.radius(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepMeta {
    pub variable: String,
    pub values: Vec<f64>,
}

/// Provenance attached to every dataset.
#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub command: String,
    pub code_version: String,
    pub params: ParamsMeta,
    pub j0: i64,
    pub times: Vec<f64>,
    pub backend: String,
    pub quadrature_nodes: usize,
    pub window_buffer: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowMeta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepMeta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_deviation: Option<f64>,
    /// Bound eigenvalues of the (base) configuration, ascending.
    pub bound_states: Vec<f64>,
    /// Sweep values where |gamma + beta| fell below tolerance and the
    /// runner switched to "oracle (forced)".
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub forced_oracle_values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_backend_delta: Option<f64>,
    pub runtime_seconds: f64,
}

/// Write `stem.csv` and `stem.json` under `dir`.
pub fn write_dataset(
    dir: &Path,
    stem: &str,
    dataset: &Dataset,
    sidecar: &Sidecar,
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    fs::write(&csv_path, dataset.to_csv())?;
    let json_path = dir.join(format!("{stem}.json"));
    let mut json = serde_json::to_string_pretty(sidecar)
        .map_err(|e| CliError::config(format!("sidecar serialization: {e}")))?;
    json.push('\n');
    fs::write(json_path, json)?;
    Ok(csv_path)
}
