//! File loading and small parsing helpers for the CLI.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use schmidt_kit::exact::ExactScalar;
use schmidt_kit::mixed::DensityMatrix;
use schmidt_kit::states::{C64, ExactState, PureState};
use schmidt_kit::subspace::RankCertificate;

/// A pure-state input, in whichever arithmetic the file used.
pub enum StateFile {
    Floating(PureState),
    Exact(ExactState),
}

impl StateFile {
    pub fn dimensions(&self) -> (usize, usize) {
        match self {
            StateFile::Floating(s) => (s.m(), s.n()),
            StateFile::Exact(s) => (s.m(), s.n()),
        }
    }

    /// Floating view regardless of source arithmetic.
    pub fn to_pure_state(&self) -> PureState {
        match self {
            StateFile::Floating(s) => s.clone(),
            StateFile::Exact(s) => s.to_pure_state(),
        }
    }
}

/// Reads a pure state from JSON (floating `[re,im]` pairs or exact strings,
/// distinguished by the amplitude entries) or from CSV (an m×n real matrix,
/// one matrix row per line).
pub fn read_state(path: &Path) -> Result<StateFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read state file {}", path.display()))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        return read_csv_state(&text, path);
    }
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("{} is not valid JSON", path.display()))?;
    let amplitudes = value
        .get("amplitudes")
        .and_then(|a| a.as_array())
        .with_context(|| format!("{} has no \"amplitudes\" array", path.display()))?;
    let exact = matches!(amplitudes.first(), Some(serde_json::Value::String(_)));
    if exact {
        let state: ExactState = serde_json::from_value(value)
            .with_context(|| format!("{} is not a valid exact state", path.display()))?;
        Ok(StateFile::Exact(state))
    } else {
        let state: PureState = serde_json::from_value(value)
            .with_context(|| format!("{} is not a valid state", path.display()))?;
        Ok(StateFile::Floating(state))
    }
}

fn read_csv_state(text: &str, path: &Path) -> Result<StateFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.with_context(|| format!("bad CSV in {}", path.display()))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row: Vec<f64> = record
            .iter()
            .map(|f| f.parse::<f64>().with_context(|| format!("bad number {f:?}")))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if m == 0 || n == 0 {
        bail!("{} contains no data", path.display());
    }
    if rows.iter().any(|r| r.len() != n) {
        bail!("{} has ragged rows", path.display());
    }
    let amplitudes: Vec<C64> = rows
        .into_iter()
        .flatten()
        .map(|re| C64::new(re, 0.0))
        .collect();
    Ok(StateFile::Floating(PureState::new(m, n, amplitudes)?))
}

pub fn read_density_matrix(path: &Path) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read density matrix {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("{} is not a valid density matrix", path.display()))
}

pub fn read_certificate(path: &Path) -> Result<RankCertificate> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read certificate {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("{} is not a valid certificate", path.display()))
}

/// Parses an inclusive integer range such as `-2..2` into grid scalars.
pub fn parse_grid(spec: &str) -> Result<Vec<ExactScalar>> {
    let (lo, hi) = spec
        .split_once("..")
        .with_context(|| format!("grid {spec:?} is not of the form LO..HI"))?;
    let lo: i64 = lo.trim().parse().with_context(|| format!("bad grid bound {lo:?}"))?;
    let hi: i64 = hi.trim().parse().with_context(|| format!("bad grid bound {hi:?}"))?;
    if lo > hi {
        bail!("grid {spec:?} is empty");
    }
    Ok((lo..=hi).map(ExactScalar::from_int).collect())
}

pub fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    fs::write(path, json + "\n")
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
