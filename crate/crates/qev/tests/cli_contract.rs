//! End-to-end checks of the command-line surface: output formats, config
//! precedence, and the per-subcommand file contracts.

use std::path::{Path, PathBuf};
use std::process::Output;

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qev-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn qev(dir: &Path, args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_qev"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should launch")
}

fn data_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(str::to_string)
        .collect()
}

/// Field count of one CSV record, honoring quoted cells.
fn field_count(line: &str) -> usize {
    let mut fields = 1;
    let mut in_quotes = false;
    for c in line.chars() {
        match c {
            '"' => in_quotes = !in_quotes,
            ',' if !in_quotes => fields += 1,
            _ => {}
        }
    }
    fields
}

#[test]
fn csv_files_start_with_resolved_config_comments() {
    let dir = scratch("comments");
    let out = dir.join("sweep.csv");
    let res = qev(
        &dir,
        &[
            "uncertainty-sweep",
            "--m",
            "2",
            "--steps",
            "3",
            "--out",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(res.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# "), "file must open with comment lines");
    for key in [
        "artifact_version",
        "subcommand",
        "preset",
        "m_list",
        "lo",
        "hi",
        "steps",
    ] {
        assert!(
            text.contains(&format!("# {key} = ")),
            "missing config key {key}"
        );
    }
    assert!(text.ends_with('\n'));
    assert!(!text.contains('\r'));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn zero_vorticity_entropy_columns_vanish() {
    let dir = scratch("zero-entropy");
    let out = dir.join("e.csv");
    let res = qev(
        &dir,
        &[
            "entropy-sweep",
            "--m",
            "0",
            "--steps",
            "5",
            "--out",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(res.status.code(), Some(0));
    let lines = data_lines(&out);
    assert_eq!(lines.len(), 6);
    for row in &lines[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        // s_a, s_b, s_ab, s_a+s_b, |s_a-s_b|, i_c all zero
        for cell in &cells[2..8] {
            let v: f64 = cell.parse().unwrap();
            assert_eq!(v, 0.0, "nonzero entropy column in {row}");
        }
        assert_eq!(cells[8], "true");
        assert_eq!(cells[9], "true");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn json_output_has_config_rows_findings() {
    let dir = scratch("json");
    let out = dir.join("report.json");
    let res = qev(
        &dir,
        &[
            "inequalities",
            "--m",
            "1",
            "--steps",
            "4",
            "--format",
            "json",
            "--out",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(res.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let obj = doc.as_object().unwrap();
    assert!(obj.contains_key("config"));
    assert!(obj.contains_key("rows"));
    assert!(obj.contains_key("findings"));
    let rows = obj["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let r = row.as_object().unwrap();
        assert!(r.contains_key("s_ab"));
        assert!(r.contains_key("s_a_plus_s_b"));
        assert!(r.contains_key("abs_s_a_minus_s_b"));
        assert!(r["subadditivity_ok"].is_boolean());
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = scratch("config");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "steps = 3\nhi = 4.0  # config comment\n").unwrap();
    let out = dir.join("sweep.csv");
    let res = qev(
        &dir,
        &[
            "uncertainty-sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--steps",
            "4",
            "--out",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(res.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    // flag beats file, file beats default
    assert!(text.contains("# steps = 4"));
    assert!(text.contains("# hi = 4.0000000000000000e0"));
    assert_eq!(data_lines(&out).len(), 5);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn wigner_grid_small_case_is_positive_for_gaussian() {
    let dir = scratch("grid");
    let out = dir.join("grid.csv");
    let res = qev(
        &dir,
        &[
            "wigner-grid",
            "--m",
            "0",
            "--steps",
            "2",
            "--lo",
            "-1",
            "--hi",
            "1",
            "--method",
            "both",
            "--out",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(
        res.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&res.stderr)
    );
    let lines = data_lines(&out);
    assert_eq!(lines[0], "axis1,axis2,value_closed,value_numeric");
    assert_eq!(lines.len(), 5);
    for row in &lines[1..] {
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cells[2] > 0.0 && cells[3] > 0.0, "negative values in {row}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn width_override_keeps_weight_coupling() {
    let dir = scratch("coupling");
    let out = dir.join("grid.csv");
    let res = qev(
        &dir,
        &[
            "wigner-grid",
            "--m",
            "1",
            "--sigma-x",
            "2",
            "--steps",
            "2",
            "--out",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(res.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    // section2 couples eta_x = 1/(sqrt2 sigma_x) to the requested width.
    let expect = 1.0 / (std::f64::consts::SQRT_2 * 2.0);
    assert!(
        text.contains(&format!("# eta_x = {expect:.16e}")),
        "weight not recoupled:\n{text}"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn validate_writes_checks_and_findings() {
    let dir = scratch("validate");
    let out = dir.join("validate.csv");
    let res = qev(
        &dir,
        &["validate", "--m", "1", "--out", out.to_str().unwrap()],
    );
    assert_eq!(res.status.code(), Some(0));
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("hard checks passed"), "summary: {stdout}");
    let lines = data_lines(&out);
    assert_eq!(lines[0], "check,kind,measured,tolerance,passed,note");
    assert!(
        lines.len() >= 7,
        "expected at least 6 checks, got {}",
        lines.len() - 1
    );
    // Notes may contain commas; quoting must keep every record at 6 fields.
    for line in &lines {
        assert_eq!(field_count(line), 6, "ragged record: {line}");
    }
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("coordinate_norm_constant_ratio"));
    assert!(text.contains("wigner_closed_vs_numeric_max_dev"));
    assert!(text.contains("# finding: "));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_flag_value_is_invalid_usage() {
    let dir = scratch("usage");
    let res = qev(&dir, &["entropy-sweep", "--steps"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&res.stderr).is_empty());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn help_exits_cleanly() {
    let dir = scratch("help");
    let res = qev(&dir, &["--help"]);
    assert_eq!(res.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&res.stdout).contains("subcommands"));
    std::fs::remove_dir_all(&dir).ok();
}
