#![allow(dead_code)]

use std::path::{Path, PathBuf};

use ardl_core::pipeline::synthetic::{write_paper_shape_dataset, PAPER_SHAPE_SEED};
use ardl_core::pipeline::{
    load_data, load_manifest_and_config, render_csv, render_markdown, run_all, RunReport,
};

pub fn paper_shape_config_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/paper-shape/config.toml")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/paper-shape")
}

/// Runs the bundled paper-shape configuration over freshly generated data.
pub fn paper_shape_report(jobs: usize) -> RunReport {
    let dir = tempfile::tempdir().expect("temp dir");
    let manifest = write_paper_shape_dataset(dir.path(), PAPER_SHAPE_SEED).expect("dataset");
    let (manifest, config) =
        load_manifest_and_config(&manifest, &paper_shape_config_path()).expect("config");
    let data = load_data(&manifest, &config).expect("data");
    run_all(&data, &manifest, &config, jobs, PAPER_SHAPE_SEED).expect("run")
}

/// Rendered golden files: markdown plus the three csv tables.
pub fn rendered(report: &RunReport) -> Vec<(String, String)> {
    let mut files = vec![("report.md".to_string(), render_markdown(report))];
    for (name, content) in render_csv(report).expect("csv") {
        files.push((name.to_string(), content));
    }
    files
}

/// Compares against the stored golden files; `UPDATE_GOLDEN=1` rewrites them.
pub fn check_golden(files: &[(String, String)]) -> Result<(), String> {
    let dir = golden_dir();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        for (name, content) in files {
            std::fs::write(dir.join(name), content).map_err(|e| e.to_string())?;
        }
        return Ok(());
    }
    for (name, content) in files {
        let path = dir.join(name);
        let stored = std::fs::read_to_string(&path)
            .map_err(|e| format!("{}: {e} (run with UPDATE_GOLDEN=1)", path.display()))?;
        if &stored != content {
            let line = stored
                .lines()
                .zip(content.lines())
                .position(|(a, b)| a != b)
                .map_or_else(|| "length".to_string(), |i| format!("line {}", i + 1));
            return Err(format!("{name} differs from golden file at {line}"));
        }
    }
    Ok(())
}
