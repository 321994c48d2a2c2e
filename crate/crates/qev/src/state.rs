//! Vortex-state construction: the parameter record, the coordinate-space
//! amplitude (degree-m vortex polynomial times an anisotropic Gaussian), and
//! the truncated two-mode Fock expansion built from squeezed-vacuum ladders.
//!
//! Conventions: ħ = 1, x̂ = (a + a†)/√2, p̂ = (a - a†)/(i√2). A single-mode
//! squeeze exp[ζ(a†² - a²)] then turns the vacuum Gaussian into one of width
//! σ = exp(2ζ), and the expansion parameter is ξ = tanh(2ζ).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::GaussHermite;
use crate::specfun::{log_binomial, log_gamma};

/// Largest per-mode dimension the automatic cutoff search will try.
pub const MAX_AUTO_CUTOFF: usize = 4096;

/// Relative probability mass allowed outside the truncated Fock block.
pub const TAIL_MASS_LIMIT: f64 = 1e-10;

/// Full parameter record of a vortex state: vorticity m, ellipticity
/// weights η_x, η_y and squeezing parameters ζ_x, ζ_y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QevParams {
    pub m: u32,
    pub eta_x: f64,
    pub eta_y: f64,
    pub zeta_x: f64,
    pub zeta_y: f64,
}

/// Quantities derived from the squeezing parameters: Gaussian widths
/// σ_i = exp(2ζ_i) and expansion parameters ξ_i = tanh(2ζ_i).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub xi_x: f64,
    pub xi_y: f64,
}

impl QevParams {
    pub fn new(m: u32, eta_x: f64, eta_y: f64, zeta_x: f64, zeta_y: f64) -> Result<Self> {
        let weight_ok = |v: f64| v > 0.0 && v.is_finite();
        if !weight_ok(eta_x) || !weight_ok(eta_y) {
            return Err(Error::Domain(format!(
                "ellipticity weights must be positive and finite, got ({eta_x}, {eta_y})"
            )));
        }
        if !zeta_x.is_finite() || !zeta_y.is_finite() {
            return Err(Error::Domain("squeezing parameters must be finite".into()));
        }
        Ok(Self {
            m,
            eta_x,
            eta_y,
            zeta_x,
            zeta_y,
        })
    }

    /// Couples the weights to the widths as η_i = 1/(√2 σ_i), which makes the
    /// coordinate amplitude a function of x/σ_x and y/σ_y only.
    pub fn coordinate_consistent(m: u32, zeta_x: f64, zeta_y: f64) -> Result<Self> {
        let sx = (2.0 * zeta_x).exp();
        let sy = (2.0 * zeta_y).exp();
        Self::new(
            m,
            1.0 / (std::f64::consts::SQRT_2 * sx),
            1.0 / (std::f64::consts::SQRT_2 * sy),
            zeta_x,
            zeta_y,
        )
    }

    /// Width-sweep regime: ζ_y = ln5/4 + ζ_x (so σ_y = √5 σ_x) with
    /// coordinate-consistent weights.
    pub fn section2(m: u32, sigma_x: f64) -> Result<Self> {
        if sigma_x <= 0.0 || sigma_x.is_nan() {
            return Err(Error::Domain(format!("sigma_x must be > 0, got {sigma_x}")));
        }
        let zeta_x = 0.5 * sigma_x.ln();
        let zeta_y = 5.0_f64.ln() / 4.0 + zeta_x;
        Self::coordinate_consistent(m, zeta_x, zeta_y)
    }

    /// Width-sweep variant with unit vortex weights and σ_y² = 5 σ_x. Under
    /// this coupling the vortex polynomial is not scale-invariant, so the
    /// uncertainty products actually move along the sweep; kept for the
    /// cross-validation report.
    pub fn section2_unit_weights(m: u32, sigma_x: f64) -> Result<Self> {
        if sigma_x <= 0.0 || sigma_x.is_nan() {
            return Err(Error::Domain(format!("sigma_x must be > 0, got {sigma_x}")));
        }
        let zeta_x = 0.5 * sigma_x.ln();
        let zeta_y = (5.0 * sigma_x).ln() / 4.0;
        Self::new(m, 1.0, 1.0, zeta_x, zeta_y)
    }

    /// Ellipticity-sweep regime: σ_x = 5, σ_y = 3 fixed, η_y = 1/(√2 η_x).
    pub fn section3(m: u32, eta_x: f64) -> Result<Self> {
        if eta_x <= 0.0 || eta_x.is_nan() {
            return Err(Error::Domain(format!("eta_x must be > 0, got {eta_x}")));
        }
        Self::new(
            m,
            eta_x,
            1.0 / (std::f64::consts::SQRT_2 * eta_x),
            0.5 * 5.0_f64.ln(),
            0.5 * 3.0_f64.ln(),
        )
    }

    /// σ_i = exp(2ζ_i), ξ_i = tanh(2ζ_i); equivalently ξ = (σ²-1)/(σ²+1).
    pub fn derived(&self) -> DerivedParams {
        DerivedParams {
            sigma_x: (2.0 * self.zeta_x).exp(),
            sigma_y: (2.0 * self.zeta_y).exp(),
            xi_x: (2.0 * self.zeta_x).tanh(),
            xi_y: (2.0 * self.zeta_y).tanh(),
        }
    }
}

/// Normalized coordinate-space amplitude
///
///   Ψ(x, y) = N (η_x x - i η_y y)^m exp[-x²/(2σ_x²) - y²/(2σ_y²)].
///
/// The constant N is always computed numerically so that ∫|Ψ|² = 1; no
/// closed-form candidate is trusted for it.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    params: QevParams,
    sigma_x: f64,
    sigma_y: f64,
    norm: f64,
}

impl Wavefunction {
    pub fn new(params: QevParams) -> Result<Self> {
        let d = params.derived();
        // |Ψ|²/N² is (η_x²x² + η_y²y²)^m times a Gaussian: degree 2m, so a
        // rule of order m+1 is already exact. A little headroom is free.
        let rule = GaussHermite::shared((params.m as usize + 8).max(16))?;
        let (ax, ay) = (params.eta_x * d.sigma_x, params.eta_y * d.sigma_y);
        let integral = d.sigma_x
            * d.sigma_y
            * rule.integrate_2d(|s, t| (ax * ax * s * s + ay * ay * t * t).powi(params.m as i32));
        if integral <= 0.0 || !integral.is_finite() {
            return Err(Error::Domain(format!(
                "norm integral degenerate ({integral}) for {params:?}"
            )));
        }
        Ok(Self {
            params,
            sigma_x: d.sigma_x,
            sigma_y: d.sigma_y,
            norm: 1.0 / integral.sqrt(),
        })
    }

    pub fn params(&self) -> &QevParams {
        &self.params
    }

    /// The numerically determined normalization constant N.
    pub fn norm_constant(&self) -> f64 {
        self.norm
    }

    /// Vortex polynomial factor (η_x x - i η_y y)^m.
    pub fn polynomial(&self, x: f64, y: f64) -> Complex64 {
        Complex64::new(self.params.eta_x * x, -self.params.eta_y * y).powu(self.params.m)
    }

    /// Gaussian exponent -x²/(2σ_x²) - y²/(2σ_y²).
    pub fn envelope_exponent(&self, x: f64, y: f64) -> f64 {
        -0.5 * (x / self.sigma_x).powi(2) - 0.5 * (y / self.sigma_y).powi(2)
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.polynomial(x, y) * (self.norm * self.envelope_exponent(x, y).exp())
    }

    /// Ψ with the Gaussian envelope stripped: N (η_x x - i η_y y)^m. Useful
    /// when quadrature supplies the Gaussian weight itself.
    pub fn eval_bare(&self, x: f64, y: f64) -> Complex64 {
        self.polynomial(x, y) * self.norm
    }

    /// ∂Ψ/∂x with the Gaussian envelope stripped.
    pub fn grad_x_bare(&self, x: f64, y: f64) -> Complex64 {
        let m = self.params.m;
        let w = Complex64::new(self.params.eta_x * x, -self.params.eta_y * y);
        let poly = if m == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            w.powu(m - 1) * (m as f64 * self.params.eta_x)
        };
        let tail = w.powu(m) * (x / (self.sigma_x * self.sigma_x));
        (poly - tail) * self.norm
    }

    /// ∂Ψ/∂y with the Gaussian envelope stripped.
    pub fn grad_y_bare(&self, x: f64, y: f64) -> Complex64 {
        let m = self.params.m;
        let w = Complex64::new(self.params.eta_x * x, -self.params.eta_y * y);
        let poly = if m == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            w.powu(m - 1) * Complex64::new(0.0, -(m as f64) * self.params.eta_y)
        };
        let tail = w.powu(m) * (y / (self.sigma_y * self.sigma_y));
        (poly - tail) * self.norm
    }

    /// ∂Ψ/∂x in closed form (polynomial times Gaussian again).
    pub fn grad_x(&self, x: f64, y: f64) -> Complex64 {
        self.grad_x_bare(x, y) * self.envelope_exponent(x, y).exp()
    }

    /// ∂Ψ/∂y in closed form.
    pub fn grad_y(&self, x: f64, y: f64) -> Complex64 {
        self.grad_y_bare(x, y) * self.envelope_exponent(x, y).exp()
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }

    pub fn sigma_y(&self) -> f64 {
        self.sigma_y
    }
}

/// Truncated two-mode Fock expansion with per-mode dimension `cutoff`.
/// Amplitudes are normalized over the kept block; `tail_mass` records the
/// relative probability the truncation dropped.
#[derive(Debug, Clone)]
pub struct TwoModeFockVector {
    cutoff: usize,
    amps: Vec<Complex64>,
    tail_mass: f64,
}

impl TwoModeFockVector {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn amp(&self, n_a: usize, n_b: usize) -> Complex64 {
        self.amps[n_a * self.cutoff + n_b]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// One squeezed ladder: coefficients of exp[(ξ/2) a†²] a†^j |0⟩ on |j + 2n⟩,
/// namely (ξ/2)^n √((j+2n)!) / n!, as (occupation, log magnitude, sign).
fn ladder_coefficients(j: usize, xi: f64, dim: usize) -> Vec<(usize, f64, f64)> {
    let mut out = Vec::new();
    if j >= dim {
        return out;
    }
    let half = 0.5 * xi.abs();
    let log_half = if half > 0.0 {
        half.ln()
    } else {
        f64::NEG_INFINITY
    };
    let mut n = 0usize;
    loop {
        let occ = j + 2 * n;
        if occ >= dim {
            break;
        }
        let log_mag = if n == 0 {
            0.5 * log_gamma(occ as f64 + 1.0).expect("occ+1 > 0")
        } else if half == 0.0 {
            break;
        } else {
            n as f64 * log_half + 0.5 * log_gamma(occ as f64 + 1.0).expect("occ+1 > 0")
                - log_gamma(n as f64 + 1.0).expect("n+1 > 0")
        };
        let sign = if xi < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        out.push((occ, log_mag, sign));
        n += 1;
    }
    out
}

/// Builds the Fock expansion of the vortex state,
///
///   Σ_k C(m,k) η_x^{m-k} (-i η_y)^k  e^{(ξ_x/2)a†²} a†^{m-k}|0⟩ ⊗
///                                     e^{(ξ_y/2)b†²} b†^{k}|0⟩,
///
/// truncated at `cutoff` per mode and normalized. The truncation loss is
/// estimated against an enlarged working block; if it exceeds
/// [`TAIL_MASS_LIMIT`] the call fails with a truncation error.
pub fn fock_amplitudes(params: &QevParams, cutoff: usize) -> Result<TwoModeFockVector> {
    let m = params.m as usize;
    if cutoff < m + 1 {
        return Err(Error::InvalidArgument(format!(
            "cutoff {cutoff} too small for vorticity {m}; need at least m + 1"
        )));
    }
    let d = params.derived();
    // Working block used to estimate what the requested cutoff loses.
    let work = if cutoff <= 1024 {
        2 * cutoff
    } else {
        cutoff + 256
    };

    let mut table = vec![Complex64::new(0.0, 0.0); work * work];
    for k in 0..=m {
        let log_pref = log_binomial(params.m, k as u32)?
            + (m - k) as f64 * params.eta_x.ln()
            + k as f64 * params.eta_y.ln();
        // (-i)^k cycles with period 4.
        let phase = match k % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        let mode_a = ladder_coefficients(m - k, d.xi_x, work);
        let mode_b = ladder_coefficients(k, d.xi_y, work);
        for &(na, log_a, sign_a) in &mode_a {
            for &(nb, log_b, sign_b) in &mode_b {
                let mag = (log_pref + log_a + log_b).exp();
                table[na * work + nb] += phase * (sign_a * sign_b * mag);
            }
        }
    }

    let mut mass_kept = 0.0;
    let mut mass_total = 0.0;
    for na in 0..work {
        for nb in 0..work {
            let p = table[na * work + nb].norm_sqr();
            mass_total += p;
            if na < cutoff && nb < cutoff {
                mass_kept += p;
            }
        }
    }
    if mass_total <= 0.0 || mass_total.is_nan() {
        return Err(Error::Domain("Fock expansion has zero total mass".into()));
    }
    let tail_mass = (mass_total - mass_kept) / mass_total;
    if tail_mass > TAIL_MASS_LIMIT {
        return Err(Error::Truncation(format!(
            "tail mass {tail_mass:.3e} exceeds {TAIL_MASS_LIMIT:.0e} at cutoff {cutoff}"
        )));
    }

    let scale = 1.0 / mass_kept.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); cutoff * cutoff];
    for na in 0..cutoff {
        for nb in 0..cutoff {
            amps[na * cutoff + nb] = table[na * work + nb] * scale;
        }
    }
    Ok(TwoModeFockVector {
        cutoff,
        amps,
        tail_mass,
    })
}

/// Doubles the cutoff from m + 16 until the tail mass is acceptable,
/// erroring out past [`MAX_AUTO_CUTOFF`].
pub fn fock_amplitudes_auto(params: &QevParams) -> Result<TwoModeFockVector> {
    let mut cutoff = params.m as usize + 16;
    loop {
        match fock_amplitudes(params, cutoff) {
            Err(Error::Truncation(_)) if cutoff * 2 <= MAX_AUTO_CUTOFF => cutoff *= 2,
            Err(Error::Truncation(msg)) => {
                return Err(Error::Truncation(format!(
                    "{msg}; gave up at the {MAX_AUTO_CUTOFF} cutoff cap"
                )))
            }
            other => return other,
        }
    }
}
