//! Parameter sweeps over width and ellipticity, the optimal-ellipticity
//! search, inequality-region extraction, and the cross-validation suite that
//! plays every closed-form route against its brute-force oracle.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{self, EntropyReport, Mode};
use crate::error::{Error, Result};
use crate::moments::{self, UncertaintyReport};
use crate::specfun::{gauss_2f1, SeriesControl};
use crate::state::{self, QevParams, Wavefunction};
use crate::wigner::{PhasePoint, WignerClosedForm, WignerNumeric};

/// Which variable a sweep moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepVariable {
    SigmaX,
    EtaX,
}

impl SweepVariable {
    pub fn label(&self) -> &'static str {
        match self {
            SweepVariable::SigmaX => "sigma_x",
            SweepVariable::EtaX => "eta_x",
        }
    }
}

/// Built-in parameter regimes, plus a custom base record whose swept field
/// gets replaced point by point.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    /// Width sweep: σ_y = √5 σ_x (ζ_y = ln5/4 + ζ_x), η_i = 1/(√2 σ_i).
    Section2,
    /// Width sweep with unit weights and σ_y² = 5 σ_x; the variant whose
    /// uncertainty products actually move, kept for the validation report.
    Section2Unit,
    /// Ellipticity sweep: σ_x = 5, σ_y = 3, η_y = 1/(√2 η_x).
    Section3,
    Custom(QevParams),
}

impl Preset {
    pub fn label(&self) -> &'static str {
        match self {
            Preset::Section2 => "section2",
            Preset::Section2Unit => "section2-unit",
            Preset::Section3 => "section3",
            Preset::Custom(_) => "custom",
        }
    }

    /// Parameter record at one grid point of a sweep.
    pub fn params_at(&self, m: u32, variable: SweepVariable, value: f64) -> Result<QevParams> {
        match (self, variable) {
            (Preset::Section2, SweepVariable::SigmaX) => QevParams::section2(m, value),
            (Preset::Section2Unit, SweepVariable::SigmaX) => {
                QevParams::section2_unit_weights(m, value)
            }
            (Preset::Section3, SweepVariable::EtaX) => QevParams::section3(m, value),
            (Preset::Custom(base), SweepVariable::SigmaX) => {
                if value <= 0.0 || value.is_nan() {
                    return Err(Error::Domain(format!("sigma_x must be > 0, got {value}")));
                }
                QevParams::new(m, base.eta_x, base.eta_y, 0.5 * value.ln(), base.zeta_y)
            }
            (Preset::Custom(base), SweepVariable::EtaX) => {
                QevParams::new(m, value, base.eta_y, base.zeta_x, base.zeta_y)
            }
            (p, v) => Err(Error::InvalidArgument(format!(
                "preset {} cannot sweep {}",
                p.label(),
                v.label()
            ))),
        }
    }
}

/// A sweep request: variable, range, resolution, vorticities, regime.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub m_list: Vec<u32>,
    pub preset: Preset,
}

impl SweepSpec {
    /// Width sweep defaults: σ_x ∈ [1, 10], 64 points.
    pub fn section2_default(m_list: Vec<u32>) -> Self {
        Self {
            variable: SweepVariable::SigmaX,
            lo: 1.0,
            hi: 10.0,
            steps: 64,
            m_list,
            preset: Preset::Section2,
        }
    }

    /// Ellipticity sweep defaults: η_x ∈ [0.05, 20], 256 log-spaced points.
    pub fn section3_default(m_list: Vec<u32>) -> Self {
        Self {
            variable: SweepVariable::EtaX,
            lo: 0.05,
            hi: 20.0,
            steps: 256,
            m_list,
            preset: Preset::Section3,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.lo <= 0.0 || self.lo >= self.hi || self.lo.is_nan() || self.hi.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "sweep range must satisfy 0 < lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidArgument(
                "sweep needs at least 2 steps".into(),
            ));
        }
        if self.m_list.is_empty() {
            return Err(Error::InvalidArgument(
                "sweep needs at least one vorticity".into(),
            ));
        }
        Ok(())
    }

    /// Grid values: linear for width sweeps, log-spaced for ellipticity.
    /// Endpoints are pinned to lo and hi exactly.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps;
        let interior = |i: usize| -> f64 {
            match self.variable {
                SweepVariable::SigmaX => self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64,
                SweepVariable::EtaX => {
                    let (llo, lhi) = (self.lo.ln(), self.hi.ln());
                    (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp()
                }
            }
        };
        (0..n)
            .map(|i| {
                if i == 0 {
                    self.lo
                } else if i == n - 1 {
                    self.hi
                } else {
                    interior(i)
                }
            })
            .collect()
    }

    fn sorted_m(&self) -> Vec<u32> {
        let mut m = self.m_list.clone();
        m.sort_unstable();
        m.dedup();
        m
    }
}

/// One sweep record; a failed point keeps its row with the error message.
#[derive(Debug, Clone)]
pub struct SweepRow<T> {
    pub m: u32,
    pub value: f64,
    pub outcome: std::result::Result<T, String>,
}

/// Ordered sweep results, rows sorted by (m, swept value).
#[derive(Debug, Clone)]
pub struct SweepTable<T> {
    pub variable: SweepVariable,
    pub rows: Vec<SweepRow<T>>,
}

fn run_sweep<T, F>(spec: &SweepSpec, expect: SweepVariable, f: F) -> Result<SweepTable<T>>
where
    T: Send,
    F: Fn(&QevParams) -> Result<T> + Sync,
{
    spec.check()?;
    if spec.variable != expect {
        return Err(Error::InvalidArgument(format!(
            "this sweep varies {}, spec asked for {}",
            expect.label(),
            spec.variable.label()
        )));
    }
    let grid = spec.grid();
    let mut jobs = Vec::with_capacity(spec.steps * spec.m_list.len());
    for &m in &spec.sorted_m() {
        for &v in &grid {
            jobs.push((m, v));
        }
    }
    let rows: Vec<SweepRow<T>> = jobs
        .par_iter()
        .map(|&(m, value)| {
            let outcome = spec
                .preset
                .params_at(m, spec.variable, value)
                .and_then(|p| f(&p))
                .map_err(|e| e.to_string());
            SweepRow { m, value, outcome }
        })
        .collect();
    Ok(SweepTable {
        variable: spec.variable,
        rows,
    })
}

/// Uncertainty reports over a width sweep.
pub fn sweep_uncertainty(spec: &SweepSpec) -> Result<SweepTable<UncertaintyReport>> {
    run_sweep(spec, SweepVariable::SigmaX, moments::uncertainty_report)
}

/// Entropy reports over an ellipticity sweep.
pub fn sweep_entropy(spec: &SweepSpec) -> Result<SweepTable<EntropyReport>> {
    run_sweep(spec, SweepVariable::EtaX, entropy::entropy_report)
}

/// Which entropy a search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EntropyTarget {
    SA,
    SB,
    SAB,
}

impl EntropyTarget {
    pub fn label(&self) -> &'static str {
        match self {
            EntropyTarget::SA => "s_a",
            EntropyTarget::SB => "s_b",
            EntropyTarget::SAB => "s_ab",
        }
    }

    fn pick(&self, r: &EntropyReport) -> f64 {
        match self {
            EntropyTarget::SA => r.s_a,
            EntropyTarget::SB => r.s_b,
            EntropyTarget::SAB => r.s_ab,
        }
    }
}

impl std::str::FromStr for EntropyTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s_a" => Ok(EntropyTarget::SA),
            "s_b" => Ok(EntropyTarget::SB),
            "s_ab" => Ok(EntropyTarget::SAB),
            other => Err(Error::InvalidArgument(format!(
                "unknown target '{other}' (expected s_a, s_b or s_ab)"
            ))),
        }
    }
}

/// Result of the ellipticity search; `warning` is set instead of erroring
/// when the coarse scan saw more than one interior peak.
#[derive(Debug, Clone, Serialize)]
pub struct OptimalEllipticity {
    pub eta_x: f64,
    pub value: f64,
    pub warning: Option<String>,
}

const SEARCH_LO: f64 = 1e-2;
const SEARCH_HI: f64 = 1e2;
const COARSE_POINTS: usize = 64;
const GOLDEN_TOL: f64 = 1e-5;

/// Golden-section maximization on [a, b]; ties keep the left interval so the
/// smaller abscissa wins.
fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Locates the ellipticity maximizing the chosen entropy on
/// [1e-2, 1e2]: a 64-point coarse scan in log η_x to confirm unimodality,
/// then golden-section refinement to interval width 1e-5.
pub fn optimal_ellipticity(
    preset: &Preset,
    m: u32,
    target: EntropyTarget,
) -> Result<OptimalEllipticity> {
    let eval = |eta: f64| -> Result<f64> {
        let params = preset.params_at(m, SweepVariable::EtaX, eta)?;
        Ok(target.pick(&entropy::entropy_report(&params)?))
    };

    let (llo, lhi) = (SEARCH_LO.ln(), SEARCH_HI.ln());
    let step = (lhi - llo) / (COARSE_POINTS - 1) as f64;
    let mut coarse = Vec::with_capacity(COARSE_POINTS);
    let mut first_err: Option<Error> = None;
    for i in 0..COARSE_POINTS {
        let t = llo + step * i as f64;
        match eval(t.exp()) {
            Ok(v) => coarse.push((t, v)),
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                }
                coarse.push((t, f64::NEG_INFINITY));
            }
        }
    }
    if coarse.iter().all(|&(_, v)| v == f64::NEG_INFINITY) {
        return Err(first_err.unwrap_or_else(|| {
            Error::Domain("entropy target undefined across the whole search interval".into())
        }));
    }

    let best = coarse
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .expect("coarse scan not empty");

    let interior_peaks = (1..COARSE_POINTS - 1)
        .filter(|&i| coarse[i].1 > coarse[i - 1].1 && coarse[i].1 > coarse[i + 1].1)
        .count();
    if interior_peaks > 1 {
        return Ok(OptimalEllipticity {
            eta_x: coarse[best].0.exp(),
            value: coarse[best].1,
            warning: Some(format!(
                "coarse scan found {interior_peaks} interior peaks; returning best coarse point"
            )),
        });
    }

    let a = coarse[best.saturating_sub(1)].0;
    let b = coarse[(best + 1).min(COARSE_POINTS - 1)].0;
    let (t_star, v_star) = golden_max(
        |t| eval(t.exp()).unwrap_or(f64::NEG_INFINITY),
        a,
        b,
        GOLDEN_TOL,
    );
    Ok(OptimalEllipticity {
        eta_x: t_star.exp(),
        value: v_star,
        warning: None,
    })
}

/// Maximal contiguous η_x intervals of the sweep grid on which the lower
/// entropic bound S_ab ≥ |S_a - S_b| holds, per vorticity.
pub fn araki_lieb_region(spec: &SweepSpec) -> Result<BTreeMap<u32, Vec<(f64, f64)>>> {
    let table = sweep_entropy(spec)?;
    let mut out: BTreeMap<u32, Vec<(f64, f64)>> = BTreeMap::new();
    for &m in &spec.sorted_m() {
        let rows: Vec<&SweepRow<EntropyReport>> = table.rows.iter().filter(|r| r.m == m).collect();
        let mut intervals = Vec::new();
        let mut start: Option<f64> = None;
        let mut last = 0.0;
        for row in &rows {
            let ok = matches!(&row.outcome, Ok(r) if r.araki_lieb_ok);
            if ok {
                if start.is_none() {
                    start = Some(row.value);
                }
                last = row.value;
            } else if let Some(s) = start.take() {
                intervals.push((s, last));
            }
        }
        if let Some(s) = start {
            intervals.push((s, last));
        }
        out.insert(m, intervals);
    }
    Ok(out)
}

/// Shape features of the |S_a - S_b| curve along an ellipticity sweep:
/// the interior crossing (if any) and the refined local maxima.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyGapFeatures {
    /// η_x where S_a - S_b changes sign, by linear interpolation.
    pub crossing: Option<f64>,
    /// Local maxima of |S_a - S_b| as (η_x, height), highest first.
    pub peaks: Vec<(f64, f64)>,
}

/// Extracts the crossing and the peaks of |S_a - S_b| for one vorticity,
/// refining each discrete peak by golden section on the continuous curve.
pub fn entropy_gap_features(spec: &SweepSpec, m: u32) -> Result<EntropyGapFeatures> {
    spec.check()?;
    let grid = spec.grid();
    let gap_signed = |eta: f64| -> Result<f64> {
        let r = entropy::entropy_report(&spec.preset.params_at(m, SweepVariable::EtaX, eta)?)?;
        Ok(r.s_a - r.s_b)
    };
    let mut signed = Vec::with_capacity(grid.len());
    for &eta in &grid {
        signed.push(gap_signed(eta)?);
    }

    let mut crossing = None;
    for i in 1..grid.len() {
        if signed[i - 1] == 0.0 {
            crossing = Some(grid[i - 1]);
            break;
        }
        if signed[i - 1] * signed[i] < 0.0 {
            let f = signed[i - 1] / (signed[i - 1] - signed[i]);
            // interpolate in log η, matching the grid spacing
            let t = grid[i - 1].ln() + f * (grid[i].ln() - grid[i - 1].ln());
            crossing = Some(t.exp());
            break;
        }
    }

    let abs: Vec<f64> = signed.iter().map(|v| v.abs()).collect();
    let mut peaks = Vec::new();
    for i in 1..grid.len() - 1 {
        if abs[i] > abs[i - 1] && abs[i] > abs[i + 1] {
            let (t, h) = golden_max(
                |t| {
                    gap_signed(t.exp())
                        .map(f64::abs)
                        .unwrap_or(f64::NEG_INFINITY)
                },
                grid[i - 1].ln(),
                grid[i + 1].ln(),
                GOLDEN_TOL,
            );
            peaks.push((t.exp(), h));
        }
    }
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(EntropyGapFeatures { crossing, peaks })
}

/// Hard checks fail the report; informational findings only record numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckKind {
    Hard,
    Info,
}

/// One named cross-check with its measured deviation (or measured value,
/// for informational findings).
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub kind: CheckKind,
    pub measured: f64,
    pub tolerance: Option<f64>,
    pub passed: bool,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn hard_checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.kind == CheckKind::Hard)
    }

    pub fn all_hard_passed(&self) -> bool {
        self.hard_checks().all(|c| c.passed)
    }

    pub fn find(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Brute-force oracle for the ladder-norm series
/// Σ_n ξ^{2n} (k+2n)! / (4^n n!² k!), the quantity the ₂F₁ route encodes.
pub fn ladder_norm_series(k: u32, xi: f64) -> Result<f64> {
    let z = xi * xi;
    if z >= 1.0 {
        return Err(Error::Domain(format!(
            "ladder series diverges at |xi| >= 1, got {xi}"
        )));
    }
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 0..10_000_000u64 {
        let nf = n as f64;
        let kf = k as f64;
        term *= z * (kf + 2.0 * nf + 1.0) * (kf + 2.0 * nf + 2.0) / (4.0 * (nf + 1.0) * (nf + 1.0));
        sum += term;
        if term <= 1e-18 * sum {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!(
        "ladder series stalled at k={k}, xi={xi}"
    )))
}

fn check_err(name: &str, kind: CheckKind, err: &Error) -> CheckResult {
    CheckResult {
        name: name.into(),
        kind,
        measured: f64::INFINITY,
        tolerance: None,
        passed: false,
        note: format!("failed to evaluate: {err}"),
    }
}

fn hyper_series_check() -> CheckResult {
    let name = "gauss_2f1_vs_ladder_series";
    let ctl = SeriesControl::default();
    let mut worst = 0.0_f64;
    for k in 0..=10u32 {
        for i in 0..=10 {
            let z = 0.099 * i as f64; // ξ² up to 0.99
            let xi = z.sqrt();
            let series =
                match gauss_2f1((k as f64 + 1.0) / 2.0, (k as f64 + 2.0) / 2.0, 1.0, z, ctl) {
                    Ok(v) => v,
                    Err(e) => return check_err(name, CheckKind::Hard, &e),
                };
            let brute = match ladder_norm_series(k, xi) {
                Ok(v) => v,
                Err(e) => return check_err(name, CheckKind::Hard, &e),
            };
            worst = worst.max((series - brute).abs() / brute.abs());
        }
    }
    CheckResult {
        name: name.into(),
        kind: CheckKind::Hard,
        measured: worst,
        tolerance: Some(1e-10),
        passed: worst <= 1e-10,
        note: "hypergeometric series vs direct ladder-norm sum, k <= 10, xi^2 <= 0.99".into(),
    }
}

fn moments_cross_check(params: &QevParams) -> CheckResult {
    let name = "moments_coordinate_vs_fock_circular";
    // The two construction routes describe the same state exactly on the
    // circular family (equal weights, equal squeezing); compare there.
    let zeta = params.zeta_x.clamp(-0.5, 0.5);
    let run = || -> Result<f64> {
        let circ = QevParams::coordinate_consistent(params.m, zeta, zeta)?;
        let pos = moments::position_moments(&circ)?;
        let mom = moments::momentum_moments(&circ)?;
        let vec = state::fock_amplitudes_auto(&circ)?;
        let (fpos, fmom) = moments::fock_moments_oracle(&vec)?;
        let mut worst = 0.0_f64;
        for (a, b) in [
            (pos.mean_x, fpos.mean_x),
            (pos.mean_y, fpos.mean_y),
            (pos.x_sq, fpos.x_sq),
            (pos.y_sq, fpos.y_sq),
            (mom.mean_px, fmom.mean_px),
            (mom.mean_py, fmom.mean_py),
            (mom.px_sq, fmom.px_sq),
            (mom.py_sq, fmom.py_sq),
        ] {
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => CheckResult {
            name: name.into(),
            kind: CheckKind::Hard,
            measured: worst,
            tolerance: Some(1e-6),
            passed: worst <= 1e-6,
            note: format!(
                "quadrature vs ladder-operator moments at m={}, zeta={zeta}",
                params.m
            ),
        },
        Err(e) => check_err(name, CheckKind::Hard, &e),
    }
}

fn marginal_check(params: &QevParams) -> CheckResult {
    let name = "wigner_marginal_vs_density";
    let run = || -> Result<f64> {
        let w = WignerNumeric::new(params)?;
        let psi = w.wavefunction();
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5EED_CAFE);
        let mut worst = 0.0_f64;
        for _ in 0..25 {
            let x = rng.random_range(-3.0..3.0) * psi.sigma_x();
            let y = rng.random_range(-3.0..3.0) * psi.sigma_y();
            let diff = (w.marginal(x, y) - psi.eval(x, y).norm_sqr()).abs();
            worst = worst.max(diff);
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => CheckResult {
            name: name.into(),
            kind: CheckKind::Hard,
            measured: worst,
            tolerance: Some(1e-6),
            passed: worst <= 1e-6,
            note: "momentum-integrated numeric transform vs |psi|^2 at 25 random points".into(),
        },
        Err(e) => check_err(name, CheckKind::Hard, &e),
    }
}

/// Closed-form candidate for the squared normalization constant of the
/// width-coupled coordinate amplitude; kept only to report its ratio to the
/// numerically computed constant.
fn candidate_norm_sq(m: u32, sigma_x: f64, sigma_y: f64) -> Result<f64> {
    let lg = crate::specfun::log_gamma(m as f64 + 0.5)?;
    Ok(2.0_f64.powi(m as i32 - 2) / (sigma_x * sigma_y * lg.exp() * std::f64::consts::PI.sqrt()))
}

/// Ratio of the numerically computed squared normalization constant to the
/// closed-form candidate, for the width-coupled amplitude at the given
/// squeezing. Independent of the widths; equals [`analytic_norm_ratio`].
pub fn coordinate_norm_ratio(m: u32, zeta_x: f64, zeta_y: f64) -> Result<f64> {
    let coupled = QevParams::coordinate_consistent(m, zeta_x, zeta_y)?;
    let psi = Wavefunction::new(coupled)?;
    let cand = candidate_norm_sq(m, psi.sigma_x(), psi.sigma_y())?;
    Ok(psi.norm_constant().powi(2) / cand)
}

fn norm_ratio_check(params: &QevParams) -> CheckResult {
    let name = "coordinate_norm_constant_ratio";
    let run = || coordinate_norm_ratio(params.m, params.zeta_x, params.zeta_y);
    match run() {
        Ok(ratio) => CheckResult {
            name: name.into(),
            kind: CheckKind::Info,
            measured: ratio,
            tolerance: None,
            passed: true,
            note: format!(
                "numeric/candidate squared-norm ratio; analytic value 4 Gamma(m+1/2)/(sqrt(pi) m!) = {:.6} at m={}",
                analytic_norm_ratio(params.m),
                params.m
            ),
        },
        Err(e) => check_err(name, CheckKind::Info, &e),
    }
}

/// 4 Γ(m + 1/2) / (√π m!), the ratio the numeric normalization settles at.
pub fn analytic_norm_ratio(m: u32) -> f64 {
    let lg = crate::specfun::log_gamma(m as f64 + 0.5).expect("m + 1/2 > 0");
    let lf = crate::specfun::log_gamma(m as f64 + 1.0).expect("m + 1 > 0");
    4.0 * (lg - lf).exp() / std::f64::consts::PI.sqrt()
}

fn closed_vs_numeric_check(params: &QevParams) -> CheckResult {
    let name = "wigner_closed_vs_numeric_max_dev";
    let run = || -> Result<f64> {
        let coupled = QevParams::coordinate_consistent(params.m, params.zeta_x, params.zeta_y)?;
        let closed = WignerClosedForm::new(&coupled)?;
        let numeric = WignerNumeric::new(&coupled)?;
        let psi = numeric.wavefunction();
        let spread = (params.m as f64 + 1.0).sqrt();
        let probe = |half: f64, i: usize| -> f64 { half * (i as f64 - 2.0) / 2.0 };
        let mut worst = 0.0_f64;
        for ix in 0..5 {
            let x = probe(1.5 * spread * psi.sigma_x(), ix);
            for iy in 0..5 {
                let y = probe(1.5 * spread * psi.sigma_y(), iy);
                for ipx in 0..5 {
                    let px = probe(1.5 * spread / psi.sigma_x(), ipx);
                    for ipy in 0..5 {
                        let py = probe(1.5 * spread / psi.sigma_y(), ipy);
                        let pt = PhasePoint::new(x, y, px, py);
                        worst = worst.max((closed.eval(&pt) - numeric.eval_unchecked(&pt)).abs());
                    }
                }
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => CheckResult {
            name: name.into(),
            kind: CheckKind::Info,
            measured: worst,
            tolerance: None,
            passed: true,
            note: "compact Gaussian-Laguerre form vs defining transform over a 5^4 probe \
                   lattice; the compact form's Laguerre argument uses a single linear \
                   combination and cross-scaled momenta (sigma_y^3 p_x, sigma_x^3 p_y), so \
                   disagreement is reported, not asserted"
                .into(),
        },
        Err(e) => check_err(name, CheckKind::Info, &e),
    }
}

fn eigen_gap_check(params: &QevParams) -> CheckResult {
    let name = "eigen_vs_modal_entropy_gap";
    let run = || -> Result<f64> {
        let vec = state::fock_amplitudes_auto(params)?;
        let eigen = entropy::eigen_entropy_of(&vec);
        let modal = entropy::shannon_entropy(&entropy::modal_distribution(params, Mode::A)?);
        Ok((eigen - modal).abs())
    };
    match run() {
        Ok(gap) => CheckResult {
            name: name.into(),
            kind: CheckKind::Info,
            measured: gap,
            tolerance: None,
            passed: true,
            note: "diagonal-coefficient entropy vs exact partial-trace eigenvalue entropy".into(),
        },
        Err(e) => check_err(name, CheckKind::Info, &e),
    }
}

struct WidthSweepSummary {
    min_product: f64,
    opposite_slope_fraction: f64,
    decaying_min: f64,
    decaying_max: f64,
    rising_final: f64,
}

fn width_sweep_summary(preset: &Preset, m: u32) -> Result<WidthSweepSummary> {
    let spec = SweepSpec {
        variable: SweepVariable::SigmaX,
        lo: 1.0,
        hi: 10.0,
        steps: 24,
        m_list: vec![m],
        preset: preset.clone(),
    };
    let table = sweep_uncertainty(&spec)?;
    let mut prod_x = Vec::new();
    let mut prod_y = Vec::new();
    for row in &table.rows {
        match &row.outcome {
            Ok(r) => {
                prod_x.push(r.prod_x);
                prod_y.push(r.prod_y);
            }
            Err(msg) => return Err(Error::NonConvergence(msg.clone())),
        }
    }
    let mut opposite = 0usize;
    for i in 1..prod_x.len() {
        let sx = prod_x[i] - prod_x[i - 1];
        let sy = prod_y[i] - prod_y[i - 1];
        if sx * sy < 0.0 {
            opposite += 1;
        }
    }
    let min_product = prod_x
        .iter()
        .chain(&prod_y)
        .cloned()
        .fold(f64::INFINITY, f64::min);
    // Net motion along the sweep decides which product "decays" in the
    // sense of the width-sweep story; with width-coupled weights both are
    // constant and the classification is moot.
    let (dec, ris) = if prod_x.last().unwrap() - prod_x.first().unwrap()
        <= prod_y.last().unwrap() - prod_y.first().unwrap()
    {
        (&prod_x, &prod_y)
    } else {
        (&prod_y, &prod_x)
    };
    Ok(WidthSweepSummary {
        min_product,
        opposite_slope_fraction: opposite as f64 / (prod_x.len() - 1) as f64,
        decaying_min: dec.iter().cloned().fold(f64::INFINITY, f64::min),
        decaying_max: dec.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        rising_final: *ris.last().unwrap(),
    })
}

fn soft_endpoint_check(name: String, measured: f64, reference: f64, note: &str) -> CheckResult {
    let dev = (measured - reference).abs() / reference;
    CheckResult {
        name,
        kind: CheckKind::Info,
        measured,
        tolerance: Some(0.15),
        passed: dev <= 0.15,
        note: format!(
            "{note}; reference {reference:.4}, relative deviation {dev:.3}; \
             soft check (convention-dependent: this crate's Gaussian floor is 1/2)"
        ),
    }
}

fn width_sweep_checks(params: &QevParams, out: &mut Vec<CheckResult>) {
    let m = params.m.max(1);
    for (preset, suffix) in [
        (Preset::Section2, "section2"),
        (Preset::Section2Unit, "section2_unit"),
    ] {
        match width_sweep_summary(&preset, m) {
            Ok(s) => {
                out.push(CheckResult {
                    name: format!("heisenberg_floor_{suffix}"),
                    kind: CheckKind::Hard,
                    measured: s.min_product,
                    tolerance: Some(0.5 - 1e-9),
                    passed: s.min_product >= 0.5 - 1e-9,
                    note: format!("smallest uncertainty product over the width sweep, m={m}"),
                });
                out.push(CheckResult {
                    name: format!("complementarity_fraction_{suffix}"),
                    kind: CheckKind::Info,
                    measured: s.opposite_slope_fraction,
                    tolerance: None,
                    passed: true,
                    note: "fraction of grid steps where the two products move in opposite \
                           directions; with width-coupled weights both products are constant \
                           and this fraction is noise"
                        .into(),
                });
                out.push(soft_endpoint_check(
                    format!("endpoint_decaying_product_min_{suffix}"),
                    s.decaying_min,
                    std::f64::consts::FRAC_1_SQRT_2,
                    "minimum of the decaying uncertainty product",
                ));
                out.push(soft_endpoint_check(
                    format!("endpoint_decaying_product_max_{suffix}"),
                    s.decaying_max,
                    1.25,
                    "maximum of the decaying uncertainty product",
                ));
                out.push(soft_endpoint_check(
                    format!("endpoint_rising_product_saturation_{suffix}"),
                    s.rising_final,
                    1.2,
                    "final value of the rising uncertainty product",
                ));
            }
            Err(e) => out.push(check_err(
                &format!("width_sweep_{suffix}"),
                CheckKind::Hard,
                &e,
            )),
        }
    }
}

/// Runs the full cross-check battery around the given parameter point.
/// Failures never abort; every check lands in the report.
pub fn validate(params: &QevParams) -> ValidationReport {
    let mut checks = vec![
        hyper_series_check(),
        moments_cross_check(params),
        marginal_check(params),
        norm_ratio_check(params),
        closed_vs_numeric_check(params),
        eigen_gap_check(params),
    ];
    width_sweep_checks(params, &mut checks);
    ValidationReport { checks }
}
