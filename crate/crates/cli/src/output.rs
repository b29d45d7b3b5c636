use std::io::Write;
use std::path::Path;

use covobs::io::{density_csv, to_json};
use covobs::Result;
use serde::Serialize;

use crate::{Format, RunConfig};

/// Writes `text` to `--out` through a temporary file and rename, or to stdout.
pub fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.flush()?;
            tmp.persist(path).map_err(|e| e.error)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

pub fn emit_json<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<()> {
    emit(cfg, &to_json(value)?)
}

#[derive(Serialize)]
struct DensityRow<'a> {
    outcome_index: usize,
    outcome_name: &'a str,
    probability: f64,
}

pub fn emit_density(cfg: &RunConfig, density: &[f64], names: &[String]) -> Result<()> {
    match cfg.format {
        Format::Csv => emit(cfg, &density_csv(density, names)),
        Format::Json => {
            let rows: Vec<DensityRow> = density
                .iter()
                .zip(names)
                .enumerate()
                .map(|(outcome_index, (&probability, name))| DensityRow {
                    outcome_index,
                    outcome_name: name,
                    probability,
                })
                .collect();
            emit_json(cfg, &rows)
        }
    }
}
