use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use chrono::NaiveDate;
use clap::{Parser, Subcommand};

use ardl_core::ardl::write_bounds_rows;
use ardl_core::mc::{generate, simulate_critical_values, CritTest, Dgp, DgpKind};
use ardl_core::pipeline::synthetic::{paper_shape_config, write_paper_shape_dataset};
use ardl_core::pipeline::{
    load_data, load_manifest_and_config, render_reports, run_all, ReportFormat,
};
use ardl_core::series::{read_series_csv, write_series_csv, Frequency};
use ardl_core::unitroot::tables::write_unitroot_rows;
use ardl_core::unitroot::{
    adf_test, dfgls_test, za_test, BreakModel, DeterministicCase, LagSelection, TestKind,
};

#[derive(Parser)]
#[command(
    name = "ardl",
    version,
    about = "Unit-root, ARDL bounds and ECM estimation for price panels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every model of a configuration and write the report tables.
    Run {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "markdown")]
        format: ReportFormat,
        /// Recorded in the report; estimation itself is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads, 0 for one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Unit-root test of a `date,value` series; prints JSON.
    Unitroot {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        test: TestKind,
        #[arg(long, default_value = "constant")]
        case: DeterministicCase,
        #[arg(long)]
        max_lags: Option<usize>,
        /// aic, bic or fixed:K
        #[arg(long, default_value = "aic")]
        lag_selection: LagSelection,
        #[arg(long, default_value = "intercept")]
        break_model: BreakModel,
        #[arg(long, default_value_t = 0.15)]
        trim: f64,
        /// Take logs before testing.
        #[arg(long)]
        log: bool,
    },
    /// Simulate a DGP into `y.csv` (and `x.csv`) plus a manifest.
    Simulate {
        /// e.g. `random_walk`, `ar1(0.5)`, `cointegrated_pair(2,0.5)`
        #[arg(long)]
        dgp: DgpKind,
        #[arg(long, default_value_t = 500)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "2000-01-01")]
        start: NaiveDate,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulated critical values in the embedded table format.
    Critvals {
        /// `adf:constant`, `dfgls:constant_trend`, `za:intercept`, `bounds:III:2`, ...
        #[arg(long)]
        test: CritTest,
        #[arg(long, default_value_t = 20000)]
        reps: usize,
        #[arg(long, default_value_t = 200)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample-size range the rows apply to; unit-root tests only.
        #[arg(long)]
        t_range: Option<String>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the synthetic paper-shape data set, manifest and configuration.
    GeneratePaperData {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = ardl_core::pipeline::synthetic::PAPER_SHAPE_SEED)]
        seed: u64,
    },
}

fn run_pipeline(
    manifest: &Path,
    config: &Path,
    out: &Path,
    format: ReportFormat,
    seed: u64,
    jobs: usize,
) -> Result<ExitCode> {
    let (manifest, config) = match load_manifest_and_config(manifest, config) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let data = match load_data(&manifest, &config) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let report = run_all(&data, &manifest, &config, jobs, seed)?;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for path in render_reports(&report, format, out)? {
        println!("{}", path.display());
    }
    for s in report.sections.iter().filter(|s| s.is_skipped()) {
        eprintln!("skipped {}", s.id);
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn write_to(out: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            f(&mut file)
        }
        None => f(&mut std::io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn real_main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run {
            manifest,
            config,
            out,
            format,
            seed,
            jobs,
        } => return run_pipeline(&manifest, &config, &out, format, seed, jobs),
        Command::Unitroot {
            series,
            test,
            case,
            max_lags,
            lag_selection,
            break_model,
            trim,
            log,
        } => {
            let s = read_series_csv(&series, "series", Frequency::Daily)?;
            let mut y = s.values().to_vec();
            if log {
                y = ardl_core::series::apply_transform(&y, ardl_core::series::Transform::Log)?;
            }
            let result = match test {
                TestKind::Adf => adf_test(&y, case, max_lags, lag_selection)?,
                TestKind::Dfgls => dfgls_test(&y, case, max_lags, lag_selection)?,
                TestKind::Za => {
                    za_test(&y, break_model, max_lags, lag_selection, trim)?.with_dates(s.dates())
                }
            };
            println!("{}", serde_json::to_string_pretty(&result)?);
        }
        Command::Simulate {
            dgp,
            length,
            seed,
            start,
            out,
        } => {
            let sim = generate(&Dgp::new(dgp, length, seed))?;
            std::fs::create_dir_all(&out)?;
            let mut manifest = String::from("name,path,frequency,transform\n");
            for s in sim.to_series(start)? {
                let file = format!("{}.csv", s.name());
                write_series_csv(&out.join(&file), &s)?;
                manifest.push_str(&format!("{},{file},daily,level\n", s.name()));
            }
            std::fs::write(out.join("manifest.csv"), manifest)?;
        }
        Command::Critvals {
            test,
            reps,
            length,
            seed,
            t_range,
            out,
        } => {
            let table = simulate_critical_values(test, length, reps, seed)?;
            write_to(out.as_deref(), |w| {
                if matches!(test, CritTest::Bounds { .. }) {
                    write_bounds_rows(w, &table.to_bounds_rows()?)?;
                } else {
                    let range = t_range.unwrap_or_else(|| format!("{length}-{length}"));
                    write_unitroot_rows(w, &table.to_unitroot_rows(&range)?)?;
                }
                Ok(())
            })?;
        }
        Command::GeneratePaperData { out, seed } => {
            let manifest = write_paper_shape_dataset(&out, seed)?;
            let config = out.join("config.toml");
            std::fs::write(&config, paper_shape_config())?;
            println!("{}\n{}", manifest.display(), config.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}
