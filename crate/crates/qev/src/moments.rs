//! Quadrature means, variances and uncertainty products of the vortex state,
//! computed two independent ways: Gauss-Hermite quadrature over the
//! coordinate amplitude, and ladder-operator quadratic forms over the
//! truncated Fock expansion.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::GaussHermite;
use crate::state::{QevParams, TwoModeFockVector, Wavefunction};

/// Base quadrature order; results are accepted only if doubling the order
/// moves nothing by more than [`QUADRATURE_RTOL`].
const QUADRATURE_ORDER: usize = 128;
const QUADRATURE_RTOL: f64 = 1e-8;

/// First and second position moments: ⟨x⟩, ⟨y⟩, ⟨x²⟩, ⟨y²⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositionMoments {
    pub mean_x: f64,
    pub mean_y: f64,
    pub x_sq: f64,
    pub y_sq: f64,
}

/// First and second momentum moments: ⟨p_x⟩, ⟨p_y⟩, ⟨p_x²⟩, ⟨p_y²⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumMoments {
    pub mean_px: f64,
    pub mean_py: f64,
    pub px_sq: f64,
    pub py_sq: f64,
}

/// Standard deviations of the four quadratures plus the per-mode
/// uncertainty products and their sum (ħ = 1, Gaussian floor 1/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub dx: f64,
    pub dy: f64,
    pub dpx: f64,
    pub dpy: f64,
    pub prod_x: f64,
    pub prod_y: f64,
    pub sum: f64,
}

fn converged(coarse: f64, fine: f64, scale: f64) -> bool {
    (coarse - fine).abs() <= QUADRATURE_RTOL * fine.abs().max(scale)
}

fn position_pass(psi: &Wavefunction, order: usize) -> Result<PositionMoments> {
    let rule = GaussHermite::shared(order)?;
    let (sx, sy) = (psi.sigma_x(), psi.sigma_y());
    let jac = sx * sy;
    // Density with the Gaussian weight pulled out: |Ψ(σ_x s, σ_y t)|² e^{s²+t²}.
    let bare = |s: f64, t: f64| -> f64 { psi.eval_bare(sx * s, sy * t).norm_sqr() };
    let mean_x = jac * rule.integrate_2d(|s, t| sx * s * bare(s, t));
    let mean_y = jac * rule.integrate_2d(|s, t| sy * t * bare(s, t));
    let x_sq = jac * rule.integrate_2d(|s, t| (sx * s).powi(2) * bare(s, t));
    let y_sq = jac * rule.integrate_2d(|s, t| (sy * t).powi(2) * bare(s, t));
    Ok(PositionMoments {
        mean_x,
        mean_y,
        x_sq,
        y_sq,
    })
}

/// Moments of |Ψ|² by two-dimensional Gauss-Hermite quadrature, certified by
/// node doubling.
pub fn position_moments(params: &QevParams) -> Result<PositionMoments> {
    let psi = Wavefunction::new(*params)?;
    let coarse = position_pass(&psi, QUADRATURE_ORDER)?;
    let fine = position_pass(&psi, 2 * QUADRATURE_ORDER)?;
    let scale = fine.x_sq.abs().max(fine.y_sq.abs());
    if !(converged(coarse.x_sq, fine.x_sq, scale)
        && converged(coarse.y_sq, fine.y_sq, scale)
        && converged(coarse.mean_x, fine.mean_x, scale.sqrt())
        && converged(coarse.mean_y, fine.mean_y, scale.sqrt()))
    {
        return Err(Error::NonConvergence(
            "position moments changed under node doubling".into(),
        ));
    }
    Ok(fine)
}

fn momentum_pass(psi: &Wavefunction, order: usize) -> Result<MomentumMoments> {
    let rule = GaussHermite::shared(order)?;
    let (sx, sy) = (psi.sigma_x(), psi.sigma_y());
    let jac = sx * sy;
    // The shared Gaussian of Ψ and of each gradient becomes the quadrature
    // weight e^{-s²-t²} once coordinates are scaled per axis, so only the
    // envelope-free parts enter the integrands.
    // ⟨p_i²⟩ = ∫ |∂Ψ/∂i|²
    let px_sq = jac * rule.integrate_2d(|s, t| psi.grad_x_bare(sx * s, sy * t).norm_sqr());
    let py_sq = jac * rule.integrate_2d(|s, t| psi.grad_y_bare(sx * s, sy * t).norm_sqr());
    // ⟨p_i⟩ = Re[-i ∫ Ψ* ∂Ψ/∂i]
    let mut px = num_complex::Complex64::new(0.0, 0.0);
    let mut py = num_complex::Complex64::new(0.0, 0.0);
    for (&s, &ws) in rule.nodes().iter().zip(rule.weights()) {
        for (&t, &wt) in rule.nodes().iter().zip(rule.weights()) {
            let (x, y) = (sx * s, sy * t);
            let conj = psi.eval_bare(x, y).conj();
            px += conj * psi.grad_x_bare(x, y) * (ws * wt);
            py += conj * psi.grad_y_bare(x, y) * (ws * wt);
        }
    }
    let mean_px = (px * jac * num_complex::Complex64::new(0.0, -1.0)).re;
    let mean_py = (py * jac * num_complex::Complex64::new(0.0, -1.0)).re;
    Ok(MomentumMoments {
        mean_px,
        mean_py,
        px_sq,
        py_sq,
    })
}

/// Momentum moments via the closed-form gradient of the polynomial-times-
/// Gaussian amplitude, certified by node doubling.
pub fn momentum_moments(params: &QevParams) -> Result<MomentumMoments> {
    let psi = Wavefunction::new(*params)?;
    let coarse = momentum_pass(&psi, QUADRATURE_ORDER)?;
    let fine = momentum_pass(&psi, 2 * QUADRATURE_ORDER)?;
    let scale = fine.px_sq.abs().max(fine.py_sq.abs());
    if !(converged(coarse.px_sq, fine.px_sq, scale)
        && converged(coarse.py_sq, fine.py_sq, scale)
        && converged(coarse.mean_px, fine.mean_px, scale.sqrt())
        && converged(coarse.mean_py, fine.mean_py, scale.sqrt()))
    {
        return Err(Error::NonConvergence(
            "momentum moments changed under node doubling".into(),
        ));
    }
    Ok(fine)
}

/// Assembles standard deviations and uncertainty products from the two
/// coordinate-quadrature moment computations.
pub fn uncertainty_report(params: &QevParams) -> Result<UncertaintyReport> {
    let pos = position_moments(params)?;
    let mom = momentum_moments(params)?;
    Ok(assemble_report(&pos, &mom))
}

pub fn assemble_report(pos: &PositionMoments, mom: &MomentumMoments) -> UncertaintyReport {
    let dx = (pos.x_sq - pos.mean_x * pos.mean_x).max(0.0).sqrt();
    let dy = (pos.y_sq - pos.mean_y * pos.mean_y).max(0.0).sqrt();
    let dpx = (mom.px_sq - mom.mean_px * mom.mean_px).max(0.0).sqrt();
    let dpy = (mom.py_sq - mom.mean_py * mom.mean_py).max(0.0).sqrt();
    UncertaintyReport {
        dx,
        dy,
        dpx,
        dpy,
        prod_x: dx * dpx,
        prod_y: dy * dpy,
        sum: dx * dpx + dy * dpy,
    }
}

/// Independent oracle: the same moment set from ladder-operator quadratic
/// forms over the truncated Fock expansion, using x̂ = (a + a†)/√2 and
/// p̂ = (a - a†)/(i√2), so that
///
///   ⟨x̂⟩ = √2 Re⟨a⟩,  ⟨x̂²⟩ = Re⟨a²⟩ + ⟨n⟩ + 1/2,
///   ⟨p̂⟩ = √2 Im⟨a⟩,  ⟨p̂²⟩ = -Re⟨a²⟩ + ⟨n⟩ + 1/2.
pub fn fock_moments_oracle(vec: &TwoModeFockVector) -> Result<(PositionMoments, MomentumMoments)> {
    if vec.tail_mass() > crate::state::TAIL_MASS_LIMIT {
        return Err(Error::Truncation(format!(
            "declared tail mass {:.3e} too large for moment extraction",
            vec.tail_mass()
        )));
    }
    let n = vec.cutoff();
    let mut a_mean = num_complex::Complex64::new(0.0, 0.0);
    let mut a_sq = num_complex::Complex64::new(0.0, 0.0);
    let mut num_a = 0.0;
    let mut b_mean = num_complex::Complex64::new(0.0, 0.0);
    let mut b_sq = num_complex::Complex64::new(0.0, 0.0);
    let mut num_b = 0.0;
    for na in 0..n {
        for nb in 0..n {
            let c = vec.amp(na, nb);
            let p = c.norm_sqr();
            num_a += na as f64 * p;
            num_b += nb as f64 * p;
            if na + 1 < n {
                a_mean += vec.amp(na + 1, nb).conj() * c * ((na + 1) as f64).sqrt();
            }
            if na + 2 < n {
                a_sq += vec.amp(na, nb).conj()
                    * vec.amp(na + 2, nb)
                    * (((na + 1) * (na + 2)) as f64).sqrt();
            }
            if nb + 1 < n {
                b_mean += vec.amp(na, nb + 1).conj() * c * ((nb + 1) as f64).sqrt();
            }
            if nb + 2 < n {
                b_sq += vec.amp(na, nb).conj()
                    * vec.amp(na, nb + 2)
                    * (((nb + 1) * (nb + 2)) as f64).sqrt();
            }
        }
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let pos = PositionMoments {
        mean_x: sqrt2 * a_mean.re,
        mean_y: sqrt2 * b_mean.re,
        x_sq: a_sq.re + num_a + 0.5,
        y_sq: b_sq.re + num_b + 0.5,
    };
    let mom = MomentumMoments {
        mean_px: sqrt2 * a_mean.im,
        mean_py: sqrt2 * b_mean.im,
        px_sq: -a_sq.re + num_a + 0.5,
        py_sq: -b_sq.re + num_b + 0.5,
    };
    Ok((pos, mom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::fock_amplitudes_auto;

    fn circular(m: u32, sigma: f64) -> QevParams {
        let zeta = 0.5 * sigma.ln();
        QevParams::coordinate_consistent(m, zeta, zeta).unwrap()
    }

    #[test]
    fn gaussian_position_moments() {
        // m = 0: ⟨x²⟩ = σ_x²/2, ⟨x⟩ = 0.
        let p = QevParams::coordinate_consistent(0, 0.5 * 2.0_f64.ln(), 0.0).unwrap();
        let pos = position_moments(&p).unwrap();
        assert!((pos.x_sq - 2.0).abs() < 1e-9);
        assert!((pos.y_sq - 0.5).abs() < 1e-10);
        assert!(pos.mean_x.abs() < 1e-12 && pos.mean_y.abs() < 1e-12);
    }

    #[test]
    fn gaussian_momentum_moments() {
        // m = 0: ⟨p_x²⟩ = 1/(2σ_x²).
        let p = QevParams::coordinate_consistent(0, 0.5 * 2.0_f64.ln(), 0.0).unwrap();
        let mom = momentum_moments(&p).unwrap();
        assert!((mom.px_sq - 0.125).abs() < 1e-10);
        assert!((mom.py_sq - 0.5).abs() < 1e-10);
        assert!(mom.mean_px.abs() < 1e-12 && mom.mean_py.abs() < 1e-12);
    }

    #[test]
    fn m1_circular_second_moments() {
        // ⟨x²⟩ = σ², ⟨p_x²⟩ = 1/σ² for the m = 1 circular state.
        let sigma = 1.7_f64;
        let p = circular(1, sigma);
        let pos = position_moments(&p).unwrap();
        let mom = momentum_moments(&p).unwrap();
        assert!((pos.x_sq - sigma * sigma).abs() < 1e-8 * sigma * sigma);
        assert!((mom.px_sq - 1.0 / (sigma * sigma)).abs() < 1e-8);
    }

    #[test]
    fn uncertainty_products_baselines() {
        let gauss = uncertainty_report(&circular(0, 1.3)).unwrap();
        assert!((gauss.prod_x - 0.5).abs() < 1e-6);
        assert!((gauss.prod_y - 0.5).abs() < 1e-6);

        let vortex = uncertainty_report(&circular(1, 2.0)).unwrap();
        assert!((vortex.prod_x - 1.0).abs() < 1e-6);
        assert!((vortex.prod_x - vortex.prod_y).abs() < 1e-9);
        assert!((vortex.sum - vortex.prod_x - vortex.prod_y).abs() < 1e-15);
    }

    #[test]
    fn fock_oracle_vacuum_and_single_photon() {
        let vac = fock_amplitudes_auto(&QevParams::new(0, 1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let (pos, mom) = fock_moments_oracle(&vac).unwrap();
        assert!((pos.x_sq - 0.5).abs() < 1e-12);
        assert!((mom.px_sq - 0.5).abs() < 1e-12);

        // (|1,0> - i|0,1>)/√2 has ⟨x̂²⟩ = 3/2 - |c_10|² ... evaluated directly:
        // mode a occupation 1/2, no ⟨a²⟩ term, so ⟨x̂²⟩ = 0 + 1/2 + 1/2 = 1.
        let v = fock_amplitudes_auto(&QevParams::new(1, 1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let (pos, _) = fock_moments_oracle(&v).unwrap();
        assert!((pos.x_sq - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_mode_number_state_variance() {
        // A pure |1,0> table: ⟨x̂²⟩ for mode a must be 3/2.
        let p = QevParams::new(1, 1.0, 1e-9, 0.0, 0.0);
        // η_y must stay positive; emulate |1,0> by an extreme weight ratio.
        let v = fock_amplitudes_auto(&p.unwrap()).unwrap();
        let (pos, _) = fock_moments_oracle(&v).unwrap();
        assert!((pos.x_sq - 1.5).abs() < 1e-9, "got {}", pos.x_sq);
    }

    #[test]
    fn coordinate_and_fock_routes_agree_on_circular_family() {
        for (m, zeta) in [(0u32, 0.3), (1, 0.0), (1, 0.4), (3, 0.25), (5, 0.5)] {
            let params = QevParams::coordinate_consistent(m, zeta, zeta).unwrap();
            let pos = position_moments(&params).unwrap();
            let mom = momentum_moments(&params).unwrap();
            let fock = fock_amplitudes_auto(&params).unwrap();
            let (fpos, fmom) = fock_moments_oracle(&fock).unwrap();
            let scale = pos.x_sq.max(mom.px_sq);
            for (a, b) in [
                (pos.x_sq, fpos.x_sq),
                (pos.y_sq, fpos.y_sq),
                (mom.px_sq, fmom.px_sq),
                (mom.py_sq, fmom.py_sq),
            ] {
                assert!(
                    (a - b).abs() < 1e-6 * a.abs().max(1.0),
                    "m={m} zeta={zeta}: {a} vs {b} (scale {scale})"
                );
            }
        }
    }
}
