//! Experiment runner for Finsler–Laplacian spectra on flat tori.
//!
//! A run reads one TOML configuration, evaluates the configured experiment
//! with [`fspec_core`], and writes `report.json`, `rows.csv` and optional SVG
//! plots. Every row of `rows.csv` carries its bounds, so verdicts can be
//! recomputed from the CSV alone.

pub mod config;
pub mod experiments;
pub mod export;
pub mod report;
pub mod svg;

use std::path::Path;

use anyhow::{Context, Result};

/// Write the report, plots and optional tables of a finished run into `dir`.
pub fn write_outputs(run: &experiments::Run, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    run.report.write_json(&dir.join("report.json"))?;
    run.report.write_csv(&dir.join("rows.csv"))?;
    for (name, doc) in &run.plots {
        std::fs::write(dir.join(name), doc)?;
    }
    for (i, s) in run.solved.iter().enumerate() {
        export::write_symbol_csv(&s.field, &dir.join(format!("symbol_{i:02}.csv")))?;
        export::write_spectrum_csv(&s.spectrum, &dir.join(format!("spectrum_{i:02}.csv")))?;
    }
    if !run.solved.is_empty() {
        let index: Vec<String> = run.solved.iter().enumerate().map(|(i, s)| format!("{i:02},{}", s.case)).collect();
        std::fs::write(dir.join("tables.csv"), format!("index,case\n{}\n", index.join("\n")))?;
    }
    Ok(())
}
