use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ardl_core::ardl::{bounds_test, fit_ecm_direct, ArdlSpec};
use ardl_core::mc::{generate, Dgp, DgpKind};
use ardl_core::series::{DeterministicCase, Panel};
use ardl_core::unitroot::{adf_test, za_test, BreakModel, LagSelection};
use ardl_ffi::*;

fn pair(seed: u64) -> (Vec<f64>, Vec<f64>) {
    let sim = generate(&Dgp::new(
        DgpKind::CointegratedPair {
            theta: 2.0,
            alpha: 0.5,
        },
        300,
        seed,
    ))
    .unwrap();
    (sim.y, sim.x.unwrap())
}

fn last_error() -> String {
    let p = ardl_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

struct Handles {
    panel: *mut ArdlPanel,
    _names: Vec<CString>,
    regressors: Vec<*const c_char>,
}

impl Handles {
    fn new(y: &[f64], x: &[f64]) -> Self {
        let names = vec![CString::new("y").unwrap(), CString::new("x").unwrap()];
        let panel = ardl_panel_new(y.len());
        unsafe {
            assert_eq!(
                ardl_panel_add_column(panel, names[0].as_ptr(), y.as_ptr(), y.len()),
                ArdlStatus::Ok
            );
            assert_eq!(
                ardl_panel_add_column(panel, names[1].as_ptr(), x.as_ptr(), x.len()),
                ArdlStatus::Ok
            );
        }
        let regressors = vec![names[1].as_ptr()];
        Self {
            panel,
            _names: names,
            regressors,
        }
    }

    fn spec(&self, p: usize, q: usize) -> ArdlModelSpec {
        ArdlModelSpec {
            dependent: self._names[0].as_ptr(),
            regressors: self.regressors.as_ptr(),
            n_regressors: 1,
            exogenous: ptr::null(),
            n_exogenous: 0,
            case_: ArdlCase::Constant,
            p,
            q,
        }
    }
}

impl Drop for Handles {
    fn drop(&mut self) {
        unsafe { ardl_panel_free(self.panel) };
    }
}

fn core_panel(y: &[f64], x: &[f64]) -> Panel {
    let start = chrono::NaiveDate::from_ymd_opt(2000, 1, 1).unwrap();
    Panel::daily_from(
        start,
        vec![("y".into(), y.to_vec()), ("x".into(), x.to_vec())],
    )
    .unwrap()
}

#[test]
fn unit_root_matches_core() {
    let (y, _) = pair(1);
    let mut out = ArdlUnitRootResult::default();
    let status = unsafe {
        ardl_unit_root(
            y.as_ptr(),
            y.len(),
            ardl_unit_root_options_default(),
            &mut out,
        )
    };
    assert_eq!(status, ArdlStatus::Ok);
    let direct = adf_test(&y, DeterministicCase::Constant, None, LagSelection::Aic).unwrap();
    assert_eq!(out.statistic, direct.statistic);
    assert_eq!(out.lags_used, direct.lags_used);
    assert_eq!(
        out.critical_values,
        [
            direct.critical_values.one,
            direct.critical_values.five,
            direct.critical_values.ten
        ]
    );
    assert_eq!(out.break_index, -1);

    let mut opts = ardl_unit_root_options_default();
    opts.test = ArdlTest::Za;
    opts.lag_selection = ArdlLagSelection::Fixed;
    opts.fixed_lags = 1;
    let status = unsafe { ardl_unit_root(y.as_ptr(), y.len(), opts, &mut out) };
    assert_eq!(status, ArdlStatus::Ok);
    let za = za_test(
        &y,
        BreakModel::Intercept,
        None,
        LagSelection::Fixed(1),
        0.15,
    )
    .unwrap();
    assert_eq!(out.statistic, za.statistic);
    assert_eq!(out.break_index, za.break_index.unwrap() as i64);
}

#[test]
fn unit_root_errors() {
    let short = [1.0, 2.0, 3.0];
    let mut out = ArdlUnitRootResult::default();
    let status = unsafe {
        ardl_unit_root(
            short.as_ptr(),
            short.len(),
            ardl_unit_root_options_default(),
            &mut out,
        )
    };
    assert_eq!(status, ArdlStatus::TooShort);
    assert!(!last_error().is_empty());

    let status =
        unsafe { ardl_unit_root(ptr::null(), 10, ardl_unit_root_options_default(), &mut out) };
    assert_eq!(status, ArdlStatus::NullPointer);
    assert!(last_error().contains("values"));

    let y = pair(2).0;
    let status = unsafe {
        ardl_unit_root(
            y.as_ptr(),
            y.len(),
            ardl_unit_root_options_default(),
            &mut out,
        )
    };
    assert_eq!(status, ArdlStatus::Ok);
    assert!(ardl_last_error().is_null());
}

#[test]
fn ecm_matches_core() {
    let (y, x) = pair(3);
    let h = Handles::new(&y, &x);
    let spec = h.spec(2, 1);
    let mut ecm = ptr::null_mut();
    assert_eq!(
        unsafe { ardl_ecm_fit(h.panel, &spec, &mut ecm) },
        ArdlStatus::Ok
    );

    let direct = fit_ecm_direct(
        &core_panel(&y, &x),
        &ArdlSpec::new("y", &["x"], DeterministicCase::Constant, 2, 1),
    )
    .unwrap();
    unsafe {
        let mut c = ArdlCoefficient::default();
        assert_eq!(ardl_ecm_alpha(ecm, &mut c), ArdlStatus::Ok);
        assert_eq!(c.estimate, direct.alpha.estimate);
        assert_eq!(c.std_error, direct.alpha.std_error);
        assert_eq!(ardl_ecm_long_run(ecm, 0, &mut c), ArdlStatus::Ok);
        assert_eq!(c.estimate, direct.theta[0].estimate);
        assert!((c.estimate - 2.0).abs() < 0.1);
        assert_eq!(
            ardl_ecm_long_run(ecm, 1, &mut c),
            ArdlStatus::InvalidArgument
        );

        let n = ardl_ecm_num_coefficients(ecm);
        assert_eq!(n, direct.coefficients.len());
        for i in 0..n {
            let mut name = ptr::null();
            assert_eq!(
                ardl_ecm_coefficient(ecm, i, &mut c, &mut name),
                ArdlStatus::Ok
            );
            assert_eq!(
                CStr::from_ptr(name).to_str().unwrap(),
                direct.coefficients[i].name
            );
            assert_eq!(c.t_value, direct.coefficients[i].t_value);
        }
        assert_eq!(ardl_ecm_nobs(ecm), direct.nobs);
        let mut resid = vec![0.0; direct.nobs];
        assert_eq!(
            ardl_ecm_residuals(ecm, resid.as_mut_ptr(), resid.len()),
            ArdlStatus::Ok
        );
        assert_eq!(resid, direct.residuals);
        ardl_ecm_free(ecm);
        ardl_ecm_free(ptr::null_mut());
        assert_eq!(ardl_ecm_nobs(ptr::null()), 0);
    }
}

#[test]
fn bounds_matches_core() {
    let (y, x) = pair(4);
    let h = Handles::new(&y, &x);
    let spec = h.spec(1, 1);
    let mut out = ArdlBoundsResult::default();
    assert_eq!(
        unsafe { ardl_bounds_test(h.panel, &spec, 3, &mut out) },
        ArdlStatus::Ok
    );
    let direct = bounds_test(
        &core_panel(&y, &x),
        &ArdlSpec::new("y", &["x"], DeterministicCase::Constant, 1, 1),
        Some(ardl_core::ardl::BoundsCase::III),
    )
    .unwrap();
    assert_eq!(out.f_statistic, direct.f_statistic);
    assert_eq!(
        (out.df1, out.df2, out.k, out.bounds_case),
        (direct.df1, direct.df2, 1, 3)
    );
    for (l, d) in out.levels.iter().zip(&direct.levels) {
        assert_eq!(
            (l.level, l.lower_bound, l.upper_bound),
            (d.level, d.lower_bound, d.upper_bound)
        );
    }
    assert!(out
        .levels
        .iter()
        .all(|l| l.conclusion == ArdlConclusion::Cointegrated));
    assert_eq!(
        unsafe { ardl_bounds_test(h.panel, &spec, 9, &mut out) },
        ArdlStatus::InvalidArgument
    );
}

#[test]
fn panel_and_spec_errors() {
    assert!(ardl_panel_new(0).is_null());
    let (y, x) = pair(5);
    let h = Handles::new(&y, &x);
    let name = CString::new("z").unwrap();
    let status = unsafe { ardl_panel_add_column(h.panel, name.as_ptr(), y.as_ptr(), 10) };
    assert_eq!(status, ArdlStatus::InvalidArgument);
    let dup = CString::new("x").unwrap();
    let status = unsafe { ardl_panel_add_column(h.panel, dup.as_ptr(), x.as_ptr(), x.len()) };
    assert_eq!(status, ArdlStatus::InvalidArgument);
    assert!(last_error().contains("duplicate"));

    let missing = CString::new("missing").unwrap();
    let regs = [missing.as_ptr()];
    let mut spec = h.spec(1, 1);
    spec.regressors = regs.as_ptr();
    let mut ecm = ptr::null_mut();
    let status = unsafe { ardl_ecm_fit(h.panel, &spec, &mut ecm) };
    assert_ne!(status, ArdlStatus::Ok);
    assert!(ecm.is_null());
    assert!(last_error().contains("missing"));

    let status = unsafe { ardl_ecm_fit(ptr::null(), &spec, &mut ecm) };
    assert_eq!(status, ArdlStatus::NullPointer);
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(ardl_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn run_pipeline_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (y, x) = pair(6);
    let start = chrono::NaiveDate::from_ymd_opt(2014, 1, 1).unwrap();
    let mut manifest = String::from("name,path,frequency,transform\n");
    for (name, values) in [("y", y), ("x", x)] {
        let s = ardl_core::series::TimeSeries::daily_from(name, start, values).unwrap();
        ardl_core::series::write_series_csv(&dir.path().join(format!("{name}.csv")), &s).unwrap();
        manifest.push_str(&format!("{name},{name}.csv,daily,level\n"));
    }
    std::fs::write(dir.path().join("manifest.csv"), manifest).unwrap();
    std::fs::write(
        dir.path().join("config.toml"),
        "[[model]]\nid = \"pair\"\ndependent = \"y\"\ndynamic_regressors = [\"x\"]\n",
    )
    .unwrap();
    let c = |p: PathBuf| CString::new(p.to_str().unwrap()).unwrap();
    let (m, cfg, out) = (
        c(dir.path().join("manifest.csv")),
        c(dir.path().join("config.toml")),
        c(dir.path().join("out")),
    );
    let mut code = -1;
    let status = unsafe {
        ardl_run_pipeline(
            m.as_ptr(),
            cfg.as_ptr(),
            out.as_ptr(),
            ArdlReportFormat::Json,
            0,
            1,
            &mut code,
        )
    };
    assert_eq!(status, ArdlStatus::Ok, "{}", last_error());
    assert_eq!(code, 0);
    assert!(std::fs::read_dir(dir.path().join("out"))
        .unwrap()
        .next()
        .is_some());

    let bad = c(dir.path().join("nope.toml"));
    let status = unsafe {
        ardl_run_pipeline(
            m.as_ptr(),
            bad.as_ptr(),
            out.as_ptr(),
            ArdlReportFormat::Json,
            0,
            1,
            &mut code,
        )
    };
    assert_eq!(status, ArdlStatus::Io);
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "ardl.h"

int main(void) {
    double y[200];
    unsigned long s = 12345;
    double level = 0.0;
    for (int i = 0; i < 200; i++) {
        s = s * 6364136223846793005UL + 1442695040888963407UL;
        level += ((double)(s >> 11) / 9007199254740992.0) - 0.5;
        y[i] = level;
    }
    ArdlUnitRootOptions opts = ardl_unit_root_options_default();
    ArdlUnitRootResult res;
    ArdlStatus st = ardl_unit_root(y, 200, opts, &res);
    if (st != ARDL_STATUS_OK) { fprintf(stderr, "%s\n", ardl_last_error()); return 1; }
    st = ardl_unit_root(y, 2, opts, &res);
    if (st != ARDL_STATUS_TOO_SHORT || ardl_last_error() == NULL) return 2;
    ArdlPanel *panel = ardl_panel_new(200);
    if (ardl_panel_add_column(panel, "y", y, 200) != ARDL_STATUS_OK) return 3;
    ardl_panel_free(panel);
    printf("%s %.6f %zu\n", ardl_version(), res.statistic, res.lags_used);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests/ffi-<hash> lives in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header_and_staticlib() {
    let lib = target_dir().join("libardl_ffi.a");
    let compiler = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&compiler).arg("--version").output().is_err() {
        eprintln!(
            "skipping: no C compiler or static library at {}",
            lib.display()
        );
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let exe = dir.path().join("main");
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(&compiler)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let output = Command::new(&exe).output().unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = String::from_utf8(output.stdout).unwrap();
    let mut parts = text.split_whitespace();
    assert_eq!(parts.next(), Some(env!("CARGO_PKG_VERSION")));
    let stat: f64 = parts.next().unwrap().parse().unwrap();
    assert!(stat.is_finite());
}
