//! Command-line front end. One subcommand per run, one output file per run,
//! one summary line on stdout.
//!
//! Subcommands: `uncertainty-sweep`, `entropy-sweep`, `inequalities`,
//! `optimize`, `wigner-grid`, `validate`.
//!
//! Configuration precedence: built-in preset defaults < `--config` file
//! (flat `key = value` lines) < command-line flags. Output is CSV (default)
//! or JSON; CSV files open with `#` comment lines that record the fully
//! resolved parameter set, use `.` decimals, `,` delimiters, `\n` endings
//! and 17-significant-digit floats, so identical runs are byte-identical.
//!
//! Exit codes: 0 success, 1 invalid arguments, 2 numerical failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::analysis::{self, CheckKind, EntropyTarget, Preset, SweepSpec, SweepVariable};
use crate::error::{Error, Result};
use crate::state::QevParams;
use crate::wigner::{self, EvalMethod, PhaseGridRequest, Plane};

/// Parses argv, runs one subcommand, returns the process exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    match try_run(args.into_iter().collect()) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_) | Error::Io(_) => 1,
                Error::Domain(_) | Error::NonConvergence(_) | Error::Truncation(_) => 2,
            }
        }
    }
}

const USAGE: &str = "usage: qev <subcommand> [flags]

subcommands:
  uncertainty-sweep   quadrature uncertainties along a sigma_x sweep
  entropy-sweep       mode entropies along an eta_x sweep
  inequalities        entropic-inequality columns along an eta_x sweep
  optimize            search eta_x maximizing s_a, s_b or s_ab
  wigner-grid         sample a 2-D phase-space slice of the Wigner function
  validate            run the cross-validation suite and report findings

flags:
  --m LIST            vorticities, comma separated (default 1)
  --eta-x V --eta-y V --zeta-x V --zeta-y V
  --sigma-x V         sets zeta_x = ln(sigma_x)/2; same for --sigma-y
  --preset P          section2 | section2-unit | section3
  --lo V --hi V --steps N
  --target T          s_a | s_b | s_ab (optimize)
  --method M          closed | numeric | both (wigner-grid)
  --plane P           x-y x-px y-py px-py x-py y-px (wigner-grid)
  --fixed A,B         held coordinate values (wigner-grid)
  --config PATH       flat key = value file merged below flags
  --out PATH          output file (default <subcommand>.csv/.json)
  --format F          csv | json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MethodChoice {
    Closed,
    Numeric,
    Both,
}

/// Everything a flag or config line can set. `None` means "not given".
#[derive(Debug, Clone, Default)]
struct Overrides {
    m_list: Option<Vec<u32>>,
    eta_x: Option<f64>,
    eta_y: Option<f64>,
    zeta_x: Option<f64>,
    zeta_y: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
    steps: Option<usize>,
    preset: Option<String>,
    target: Option<EntropyTarget>,
    method: Option<MethodChoice>,
    plane: Option<Plane>,
    fixed: Option<[f64; 2]>,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    config: Option<PathBuf>,
}

impl Overrides {
    fn merge_over(self, base: Overrides) -> Overrides {
        Overrides {
            m_list: self.m_list.or(base.m_list),
            eta_x: self.eta_x.or(base.eta_x),
            eta_y: self.eta_y.or(base.eta_y),
            zeta_x: self.zeta_x.or(base.zeta_x),
            zeta_y: self.zeta_y.or(base.zeta_y),
            lo: self.lo.or(base.lo),
            hi: self.hi.or(base.hi),
            steps: self.steps.or(base.steps),
            preset: self.preset.or(base.preset),
            target: self.target.or(base.target),
            method: self.method.or(base.method),
            plane: self.plane.or(base.plane),
            fixed: self.fixed.or(base.fixed),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            config: self.config.or(base.config),
        }
    }

    fn has_param_override(&self) -> bool {
        self.eta_x.is_some()
            || self.eta_y.is_some()
            || self.zeta_x.is_some()
            || self.zeta_y.is_some()
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::InvalidArgument(format!("bad {what} value '{value}'"));
        match key {
            "m" => {
                let mut list = Vec::new();
                for piece in value.split(',') {
                    list.push(piece.trim().parse::<u32>().map_err(|_| bad("m"))?);
                }
                if list.is_empty() {
                    return Err(bad("m"));
                }
                self.m_list = Some(list);
            }
            "eta-x" => self.eta_x = Some(parse_f64(value)?),
            "eta-y" => self.eta_y = Some(parse_f64(value)?),
            "zeta-x" => self.zeta_x = Some(parse_f64(value)?),
            "zeta-y" => self.zeta_y = Some(parse_f64(value)?),
            // ζ = ln σ / 2
            "sigma-x" => self.zeta_x = Some(0.5 * parse_positive(value)?.ln()),
            "sigma-y" => self.zeta_y = Some(0.5 * parse_positive(value)?.ln()),
            "lo" => self.lo = Some(parse_f64(value)?),
            "hi" => self.hi = Some(parse_f64(value)?),
            "steps" => self.steps = Some(value.parse().map_err(|_| bad("steps"))?),
            "preset" => match value {
                "section2" | "section2-unit" | "section3" => self.preset = Some(value.to_string()),
                _ => return Err(bad("preset")),
            },
            "target" => self.target = Some(value.parse()?),
            "method" => {
                self.method = Some(match value {
                    "closed" => MethodChoice::Closed,
                    "numeric" => MethodChoice::Numeric,
                    "both" => MethodChoice::Both,
                    _ => return Err(bad("method")),
                })
            }
            "plane" => self.plane = Some(value.parse()?),
            "fixed" => {
                let parts: Vec<&str> = value.split(',').collect();
                if parts.len() != 2 {
                    return Err(bad("fixed"));
                }
                self.fixed = Some([parse_f64(parts[0].trim())?, parse_f64(parts[1].trim())?]);
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => {
                self.format = Some(match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    _ => return Err(bad("format")),
                })
            }
            "config" => self.config = Some(PathBuf::from(value)),
            other => return Err(Error::InvalidArgument(format!("unknown flag '--{other}'"))),
        }
        Ok(())
    }
}

fn parse_f64(value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidArgument(format!("bad numeric value '{value}'")))
}

fn parse_positive(value: &str) -> Result<f64> {
    let v = parse_f64(value)?;
    if v <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "value must be positive, got '{value}'"
        )));
    }
    Ok(v)
}

fn parse_flags(tokens: &[String]) -> Result<Overrides> {
    let mut over = Overrides::default();
    let mut i = 0;
    while i < tokens.len() {
        let tok = &tokens[i];
        let Some(stripped) = tok.strip_prefix("--") else {
            return Err(Error::InvalidArgument(format!(
                "expected a --flag, found '{tok}'"
            )));
        };
        let (key, value) = match stripped.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                i += 1;
                let Some(v) = tokens.get(i) else {
                    return Err(Error::InvalidArgument(format!(
                        "flag '--{stripped}' needs a value"
                    )));
                };
                (stripped.to_string(), v.clone())
            }
        };
        over.set(&key, &value)?;
        i += 1;
    }
    Ok(over)
}

/// Flat `key = value` config file; `#` starts a comment. Keys match the flag
/// names, with `_` accepted for `-`.
fn parse_config_file(path: &Path) -> Result<Overrides> {
    let text = std::fs::read_to_string(path)?;
    let mut over = Overrides::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidArgument(format!(
                "{}:{}: expected key = value",
                path.display(),
                lineno + 1
            )));
        };
        over.set(&key.trim().replace('_', "-"), value.trim())?;
    }
    Ok(over)
}

fn preset_from_name(name: &str) -> Result<Preset> {
    match name {
        "section2" => Ok(Preset::Section2),
        "section2-unit" => Ok(Preset::Section2Unit),
        "section3" => Ok(Preset::Section3),
        other => Err(Error::InvalidArgument(format!("unknown preset '{other}'"))),
    }
}

/// The resolved run: defaults, then config file, then flags.
struct Run {
    subcommand: String,
    over: Overrides,
}

impl Run {
    fn m_list(&self) -> Vec<u32> {
        self.over.m_list.clone().unwrap_or_else(|| vec![1])
    }

    fn first_m(&self) -> u32 {
        self.m_list()[0]
    }

    fn format(&self) -> OutputFormat {
        self.over.format.unwrap_or(OutputFormat::Csv)
    }

    fn out_path(&self) -> PathBuf {
        self.over.out.clone().unwrap_or_else(|| {
            let ext = match self.format() {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            };
            PathBuf::from(format!("{}.{ext}", self.subcommand))
        })
    }

    fn preset_name(&self, default: &str) -> String {
        self.over.preset.clone().unwrap_or_else(|| default.into())
    }

    /// Base parameter record for the point subcommands (wigner-grid,
    /// validate), with any explicit field overrides applied on top of the
    /// preset's defaults.
    fn point_params(&self, default_preset: &str) -> Result<QevParams> {
        let m = self.first_m();
        // Seed width presets from the requested width so their weight
        // coupling follows it; explicit overrides still win field by field.
        let sigma_x = self.over.zeta_x.map_or(1.0, |z| (2.0 * z).exp());
        let base = match self.preset_name(default_preset).as_str() {
            "section2" => QevParams::section2(m, sigma_x)?,
            "section2-unit" => QevParams::section2_unit_weights(m, sigma_x)?,
            "section3" => QevParams::section3(m, self.over.eta_x.unwrap_or(0.8))?,
            other => return Err(Error::InvalidArgument(format!("unknown preset '{other}'"))),
        };
        QevParams::new(
            m,
            self.over.eta_x.unwrap_or(base.eta_x),
            self.over.eta_y.unwrap_or(base.eta_y),
            self.over.zeta_x.unwrap_or(base.zeta_x),
            self.over.zeta_y.unwrap_or(base.zeta_y),
        )
    }

    /// Sweep preset: the named regime, or a custom base record when any
    /// parameter field was overridden explicitly.
    fn sweep_preset(&self, default_preset: &str, variable: SweepVariable) -> Result<Preset> {
        let named = preset_from_name(&self.preset_name(default_preset))?;
        match (&named, variable) {
            (Preset::Section3, SweepVariable::SigmaX) => {
                return Err(Error::InvalidArgument(
                    "preset section3 fixes the widths; it cannot drive a sigma_x sweep".into(),
                ))
            }
            (Preset::Section2 | Preset::Section2Unit, SweepVariable::EtaX) => {
                return Err(Error::InvalidArgument(
                    "width presets couple eta to sigma; they cannot drive an eta_x sweep".into(),
                ))
            }
            _ => {}
        }
        if self.over.has_param_override() {
            let base = self.point_params(default_preset)?;
            Ok(Preset::Custom(base))
        } else {
            Ok(named)
        }
    }

    fn sweep_spec(
        &self,
        variable: SweepVariable,
        default_preset: &str,
        default_lo: f64,
        default_hi: f64,
        default_steps: usize,
    ) -> Result<SweepSpec> {
        Ok(SweepSpec {
            variable,
            lo: self.over.lo.unwrap_or(default_lo),
            hi: self.over.hi.unwrap_or(default_hi),
            steps: self.over.steps.unwrap_or(default_steps),
            m_list: self.m_list(),
            preset: self.sweep_preset(default_preset, variable)?,
        })
    }
}

/// One output cell; floats render with 17 significant digits.
#[derive(Debug, Clone)]
enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Quote a text field when it would otherwise break the row structure.
fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => fmt_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => csv_escape(s),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Float(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

struct Output {
    config: BTreeMap<String, String>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    findings: Vec<String>,
}

impl Output {
    fn write(&self, path: &Path, format: OutputFormat) -> Result<()> {
        let bytes = match format {
            OutputFormat::Csv => self.to_csv().into_bytes(),
            OutputFormat::Json => {
                let mut doc = serde_json::to_vec_pretty(&self.to_json())
                    .expect("output serialization cannot fail");
                doc.push(b'\n');
                doc
            }
        };
        std::fs::write(path, bytes)?;
        Ok(())
    }

    fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.config {
            let _ = writeln!(s, "# {k} = {v}");
        }
        for finding in &self.findings {
            let _ = writeln!(s, "# finding: {finding}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    obj.insert(col.to_string(), cell.json());
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        json!({
            "config": self.config,
            "rows": rows,
            "findings": self.findings,
        })
    }
}

fn base_config(run: &Run, preset_label: &str) -> BTreeMap<String, String> {
    let mut cfg = BTreeMap::new();
    cfg.insert("artifact_version".into(), env!("CARGO_PKG_VERSION").into());
    cfg.insert("subcommand".into(), run.subcommand.clone());
    cfg.insert("preset".into(), preset_label.to_string());
    cfg.insert(
        "m_list".into(),
        run.m_list()
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    cfg.insert(
        "format".into(),
        match run.format() {
            OutputFormat::Csv => "csv".into(),
            OutputFormat::Json => "json".into(),
        },
    );
    cfg
}

fn params_into_config(cfg: &mut BTreeMap<String, String>, p: &QevParams) {
    let d = p.derived();
    cfg.insert("m".into(), p.m.to_string());
    cfg.insert("eta_x".into(), fmt_float(p.eta_x));
    cfg.insert("eta_y".into(), fmt_float(p.eta_y));
    cfg.insert("zeta_x".into(), fmt_float(p.zeta_x));
    cfg.insert("zeta_y".into(), fmt_float(p.zeta_y));
    cfg.insert("sigma_x".into(), fmt_float(d.sigma_x));
    cfg.insert("sigma_y".into(), fmt_float(d.sigma_y));
}

fn sweep_config(cfg: &mut BTreeMap<String, String>, spec: &SweepSpec) {
    cfg.insert("variable".into(), spec.variable.label().into());
    cfg.insert("lo".into(), fmt_float(spec.lo));
    cfg.insert("hi".into(), fmt_float(spec.hi));
    cfg.insert("steps".into(), spec.steps.to_string());
    if let Preset::Custom(base) = &spec.preset {
        params_into_config(cfg, base);
    }
}

fn ok_or_text(outcome: &std::result::Result<impl Copy, String>) -> (Cell, bool) {
    match outcome {
        Ok(_) => (Cell::Text(String::new()), true),
        Err(msg) => (Cell::Text(msg.clone()), false),
    }
}

fn try_run(tokens: Vec<String>) -> Result<String> {
    let Some(subcommand) = tokens.first().cloned() else {
        return Err(Error::InvalidArgument(format!(
            "missing subcommand\n{USAGE}"
        )));
    };
    if subcommand == "--help" || subcommand == "-h" || subcommand == "help" {
        return Ok(USAGE.to_string());
    }
    let flags = parse_flags(&tokens[1..])?;
    let file = match &flags.config {
        Some(path) => parse_config_file(path)?,
        None => Overrides::default(),
    };
    let over = flags.merge_over(file);
    let run = Run {
        subcommand: subcommand.clone(),
        over,
    };
    match subcommand.as_str() {
        "uncertainty-sweep" => uncertainty_sweep_cmd(&run),
        "entropy-sweep" => entropy_sweep_cmd(&run, false),
        "inequalities" => entropy_sweep_cmd(&run, true),
        "optimize" => optimize_cmd(&run),
        "wigner-grid" => wigner_grid_cmd(&run),
        "validate" => validate_cmd(&run),
        other => Err(Error::InvalidArgument(format!(
            "unknown subcommand '{other}'\n{USAGE}"
        ))),
    }
}

fn uncertainty_sweep_cmd(run: &Run) -> Result<String> {
    let spec = run.sweep_spec(SweepVariable::SigmaX, "section2", 1.0, 10.0, 64)?;
    let table = analysis::sweep_uncertainty(&spec)?;
    let mut cfg = base_config(run, spec.preset.label());
    sweep_config(&mut cfg, &spec);
    let mut rows = Vec::with_capacity(table.rows.len());
    for r in &table.rows {
        let (status, ok) = ok_or_text(&r.outcome);
        let v = r.outcome.as_ref().ok();
        let f = |pick: fn(&crate::moments::UncertaintyReport) -> f64| -> Cell {
            if ok {
                Cell::Float(pick(v.unwrap()))
            } else {
                Cell::Float(f64::NAN)
            }
        };
        rows.push(vec![
            Cell::Int(r.m as i64),
            Cell::Float(r.value),
            f(|u| u.dx),
            f(|u| u.dy),
            f(|u| u.dpx),
            f(|u| u.dpy),
            f(|u| u.prod_x),
            f(|u| u.prod_y),
            f(|u| u.sum),
            status,
        ]);
    }
    let out = Output {
        config: cfg,
        columns: vec![
            "m", "sigma_x", "dx", "dy", "dpx", "dpy", "prod_x", "prod_y", "sum", "status",
        ],
        rows,
        findings: vec![],
    };
    let path = run.out_path();
    out.write(&path, run.format())?;
    Ok(format!(
        "uncertainty-sweep: {} rows -> {}",
        out.rows.len(),
        path.display()
    ))
}

fn entropy_sweep_cmd(run: &Run, inequalities_view: bool) -> Result<String> {
    let spec = run.sweep_spec(SweepVariable::EtaX, "section3", 0.05, 20.0, 256)?;
    let table = analysis::sweep_entropy(&spec)?;
    let mut cfg = base_config(run, spec.preset.label());
    sweep_config(&mut cfg, &spec);
    let mut rows = Vec::with_capacity(table.rows.len());
    for r in &table.rows {
        let (status, ok) = ok_or_text(&r.outcome);
        let v = r.outcome.as_ref().ok();
        let f = |pick: fn(&crate::entropy::EntropyReport) -> f64| -> Cell {
            if ok {
                Cell::Float(pick(v.unwrap()))
            } else {
                Cell::Float(f64::NAN)
            }
        };
        let flag = |pick: fn(&crate::entropy::EntropyReport) -> bool| -> Cell {
            if ok {
                Cell::Bool(pick(v.unwrap()))
            } else {
                Cell::Bool(false)
            }
        };
        if inequalities_view {
            rows.push(vec![
                Cell::Int(r.m as i64),
                Cell::Float(r.value),
                f(|e| e.s_ab),
                f(|e| e.s_a + e.s_b),
                f(|e| (e.s_a - e.s_b).abs()),
                flag(|e| e.subadditivity_ok),
                flag(|e| e.araki_lieb_ok),
                status,
            ]);
        } else {
            rows.push(vec![
                Cell::Int(r.m as i64),
                Cell::Float(r.value),
                f(|e| e.s_a),
                f(|e| e.s_b),
                f(|e| e.s_ab),
                f(|e| e.s_a + e.s_b),
                f(|e| (e.s_a - e.s_b).abs()),
                f(|e| e.i_c),
                flag(|e| e.subadditivity_ok),
                flag(|e| e.araki_lieb_ok),
                status,
            ]);
        }
    }
    let columns = if inequalities_view {
        vec![
            "m",
            "eta_x",
            "s_ab",
            "s_a_plus_s_b",
            "abs_s_a_minus_s_b",
            "subadditivity_ok",
            "araki_lieb_ok",
            "status",
        ]
    } else {
        vec![
            "m",
            "eta_x",
            "s_a",
            "s_b",
            "s_ab",
            "s_a_plus_s_b",
            "abs_s_a_minus_s_b",
            "i_c",
            "subadditivity_ok",
            "araki_lieb_ok",
            "status",
        ]
    };
    let out = Output {
        config: cfg,
        columns,
        rows,
        findings: vec![],
    };
    let path = run.out_path();
    out.write(&path, run.format())?;
    Ok(format!(
        "{}: {} rows -> {}",
        run.subcommand,
        out.rows.len(),
        path.display()
    ))
}

fn optimize_cmd(run: &Run) -> Result<String> {
    let target = run.over.target.unwrap_or(EntropyTarget::SA);
    let preset = run.sweep_preset("section3", SweepVariable::EtaX)?;
    let mut rows = Vec::new();
    let mut findings = Vec::new();
    let mut headline = None;
    for &m in &run.m_list() {
        let best = analysis::optimal_ellipticity(&preset, m, target)?;
        if let Some(w) = &best.warning {
            findings.push(format!("m={m}: {w}"));
        }
        if headline.is_none() {
            headline = Some((m, best.eta_x, best.value));
        }
        rows.push(vec![
            Cell::Text(target.label().into()),
            Cell::Int(m as i64),
            Cell::Float(best.eta_x),
            Cell::Float(best.value),
            Cell::Text(best.warning.unwrap_or_default()),
        ]);
    }
    let mut cfg = base_config(run, preset.label());
    cfg.insert("target".into(), target.label().into());
    if let Preset::Custom(base) = &preset {
        params_into_config(&mut cfg, base);
    }
    let out = Output {
        config: cfg,
        columns: vec!["target", "m", "eta_x_star", "value_bits", "warning"],
        rows,
        findings,
    };
    let path = run.out_path();
    out.write(&path, run.format())?;
    let (m, eta, value) = headline.expect("at least one vorticity");
    Ok(format!(
        "optimize: eta_x_star ≈ {eta:.6} maximizes {} at m={m} ({value:.6} bits) -> {}",
        target.label(),
        path.display()
    ))
}

fn wigner_grid_cmd(run: &Run) -> Result<String> {
    let params = run.point_params("section2")?;
    let plane = run.over.plane.unwrap_or(Plane::XPx);
    let fixed = run.over.fixed.unwrap_or([0.0, 0.0]);
    let steps = run.over.steps.unwrap_or(41);
    let lo = run.over.lo.unwrap_or(-3.0);
    let hi = run.over.hi.unwrap_or(3.0);
    if steps < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 steps".into()));
    }
    if lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "grid range must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    let request = PhaseGridRequest {
        plane,
        fixed,
        axis1: wigner::uniform_axis(lo, hi, steps),
        axis2: wigner::uniform_axis(lo, hi, steps),
    };
    let method = run.over.method.unwrap_or(MethodChoice::Closed);
    let closed = match method {
        MethodChoice::Closed | MethodChoice::Both => Some(wigner::wigner_grid(
            &params,
            &request,
            EvalMethod::ClosedForm,
        )?),
        MethodChoice::Numeric => None,
    };
    let numeric = match method {
        MethodChoice::Numeric | MethodChoice::Both => {
            Some(wigner::wigner_grid(&params, &request, EvalMethod::Numeric)?)
        }
        MethodChoice::Closed => None,
    };

    let (c1, c2) = plane.labels();
    let (f1, f2) = plane.fixed_labels();
    let mut cfg = base_config(run, run.preset_name("section2").as_str());
    params_into_config(&mut cfg, &params);
    cfg.insert("plane".into(), format!("{c1}-{c2}"));
    cfg.insert(
        "fixed".into(),
        format!("{f1}={},{f2}={}", fixed[0], fixed[1]),
    );
    cfg.insert("lo".into(), fmt_float(lo));
    cfg.insert("hi".into(), fmt_float(hi));
    cfg.insert("steps".into(), steps.to_string());
    cfg.insert(
        "method".into(),
        match method {
            MethodChoice::Closed => "closed".into(),
            MethodChoice::Numeric => "numeric".into(),
            MethodChoice::Both => "both".into(),
        },
    );

    let mut columns: Vec<&'static str> = vec!["axis1", "axis2"];
    match method {
        MethodChoice::Closed => columns.push("value_closed"),
        MethodChoice::Numeric => columns.push("value_numeric"),
        MethodChoice::Both => {
            columns.push("value_closed");
            columns.push("value_numeric");
        }
    }
    let n = steps;
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![Cell::Float(request.axis1[i]), Cell::Float(request.axis2[j])];
            if let Some(g) = &closed {
                row.push(Cell::Float(g.value(i, j)));
            }
            if let Some(g) = &numeric {
                row.push(Cell::Float(g.value(i, j)));
            }
            rows.push(row);
        }
    }
    let out = Output {
        config: cfg,
        columns,
        rows,
        findings: vec![],
    };
    let path = run.out_path();
    out.write(&path, run.format())?;
    Ok(format!(
        "wigner-grid: {n}x{n} {c1}-{c2} slice -> {}",
        path.display()
    ))
}

fn validate_cmd(run: &Run) -> Result<String> {
    let params = run.point_params("section3")?;
    let report = analysis::validate(&params);
    let mut cfg = base_config(run, run.preset_name("section3").as_str());
    params_into_config(&mut cfg, &params);
    let mut rows = Vec::new();
    let mut findings = Vec::new();
    for c in &report.checks {
        rows.push(vec![
            Cell::Text(c.name.clone()),
            Cell::Text(
                match c.kind {
                    CheckKind::Hard => "hard",
                    CheckKind::Info => "info",
                }
                .into(),
            ),
            Cell::Float(c.measured),
            match c.tolerance {
                Some(t) => Cell::Float(t),
                None => Cell::Text(String::new()),
            },
            Cell::Bool(c.passed),
            Cell::Text(c.note.clone()),
        ]);
        if c.kind == CheckKind::Info {
            findings.push(format!(
                "{}: {} ({})",
                c.name,
                fmt_float(c.measured),
                c.note
            ));
        }
    }
    let out = Output {
        config: cfg,
        columns: vec!["check", "kind", "measured", "tolerance", "passed", "note"],
        rows,
        findings,
    };
    let path = run.out_path();
    out.write(&path, run.format())?;
    let hard_total = report.hard_checks().count();
    let hard_passed = report.hard_checks().filter(|c| c.passed).count();
    let info = report.checks.len() - hard_total;
    Ok(format!(
        "validate: {hard_passed}/{hard_total} hard checks passed, {info} findings -> {}",
        path.display()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_parsing_variants() {
        let over = parse_flags(&[
            "--m".into(),
            "1,3,5".into(),
            "--eta-x=0.8".into(),
            "--steps".into(),
            "12".into(),
        ])
        .unwrap();
        assert_eq!(over.m_list, Some(vec![1, 3, 5]));
        assert_eq!(over.eta_x, Some(0.8));
        assert_eq!(over.steps, Some(12));
    }

    #[test]
    fn sigma_flag_sets_zeta() {
        let over = parse_flags(&["--sigma-x".into(), "5".into()]).unwrap();
        let zeta = over.zeta_x.unwrap();
        assert!((zeta - 0.5 * 5.0_f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn unknown_flag_rejected() {
        assert!(matches!(
            parse_flags(&["--bogus".into(), "1".into()]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn float_formatting_has_17_significant_digits() {
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_float(1.0 / 3.0), "3.3333333333333331e-1");
    }

    #[test]
    fn text_cells_with_delimiters_are_quoted() {
        assert_eq!(csv_escape("plain note"), "plain note");
        assert_eq!(csv_escape("a, b"), "\"a, b\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn config_file_merges_below_flags() {
        let dir = std::env::temp_dir().join(format!("qev-cli-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cfg_path = dir.join("run.cfg");
        std::fs::write(&cfg_path, "steps = 7\nm = 2\n# comment\neta_x = 1.5\n").unwrap();
        let flags = parse_flags(&[
            "--config".into(),
            cfg_path.display().to_string(),
            "--steps".into(),
            "9".into(),
        ])
        .unwrap();
        let file = parse_config_file(&cfg_path).unwrap();
        let merged = flags.merge_over(file);
        assert_eq!(merged.steps, Some(9)); // flag wins
        assert_eq!(merged.m_list, Some(vec![2])); // file fills the rest
        assert_eq!(merged.eta_x, Some(1.5));
        std::fs::remove_dir_all(&dir).ok();
    }
}
