//! On-disk formats. JSON is pretty-printed with a trailing newline; CSV
//! always carries its header row, even with no records.

use std::fs;
use std::io::Write;
use std::path::Path;

use harmsum_core::coeffs::{CoeffEntry, CoefficientSequence};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::Result;

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    write_text(path, &to_json_string(value)?)
}

pub fn csv_string<T: Serialize>(header: &[&str], rows: &[T]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub const VERIFY_CSV_HEADER: [&str; 7] =
    ["band_m", "band_j", "one_minus_r_exp", "direction_index", "log_S", "log_Phi", "ratio"];

pub const L2_CSV_HEADER: [&str; 5] = ["r", "logM2_closed", "logM2_quad", "logw", "ratio"];

/// `{"entries": [[k, log a], ...], "crossover": f, "weight": "<grammar>"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffsFile {
    pub entries: Vec<(u128, f64)>,
    pub crossover: f64,
    pub weight: String,
    #[serde(default)]
    pub tangency_radii: Vec<f64>,
}

impl CoeffsFile {
    pub fn from_sequence(c: &CoefficientSequence, weight: &str) -> Self {
        CoeffsFile {
            entries: c.entries.iter().map(|e| (e.k, e.log_a)).collect(),
            crossover: c.crossover,
            weight: weight.to_string(),
            tangency_radii: c.tangency_radii.clone(),
        }
    }

    pub fn to_sequence(&self) -> Result<CoefficientSequence> {
        let entries = self.entries.iter().map(|&(k, log_a)| CoeffEntry { k, log_a }).collect();
        let mut c = CoefficientSequence::from_entries(entries, self.crossover)?;
        c.tangency_radii = self.tangency_radii.clone();
        Ok(c)
    }
}

/// Zonal basis plus a reference to the coefficient file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttainerFile {
    pub d: u32,
    pub pole: Vec<f64>,
    pub k_max: u128,
    pub coeffs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L2Row {
    pub r: f64,
    #[serde(rename = "logM2_closed")]
    pub log_m2_closed: f64,
    #[serde(rename = "logM2_quad")]
    pub log_m2_quad: f64,
    pub logw: f64,
    pub ratio: f64,
}
