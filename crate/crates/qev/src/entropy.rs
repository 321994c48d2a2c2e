//! Mode entropies of the vortex state.
//!
//! The default route uses the diagonal-coefficient distributions of the
//! reduced states: up to a common normalization, term k of mode a carries
//! C(m,k) η_x^{2(m-k)} η_y^{2k} ₂F₁[(k+1)/2, (k+2)/2; 1; ξ_y²], mode b the
//! mirror image in ξ_x², and the joint system the bare binomial factors.
//! Each distribution is normalized numerically (T_k / Σ T_k) and its base-2
//! Shannon entropy taken.
//!
//! [`eigen_entropy_oracle`] is the labeled alternative: the exact von
//! Neumann entropy from eigenvalues of the partial-traced truncated Fock
//! state. The diagonal coefficients are not eigenvalues of the reduced
//! matrix, so the two numbers differ in general; `analysis::validate`
//! reports the gap.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{gauss_2f1, log_binomial, SeriesControl};
use crate::state::{fock_amplitudes, QevParams, TwoModeFockVector};

/// Tolerance used by the inequality flags.
pub const INEQUALITY_TOL: f64 = 1e-9;

/// Which subsystem a distribution describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    A,
    B,
    Joint,
}

/// Normalized probability vector p_0..p_m for one subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalDistribution {
    pub mode: Mode,
    pub probs: Vec<f64>,
}

/// The three entropies (bits), the index of correlation, and the two
/// entropic-inequality flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    /// I_c = S_a + S_b - S_ab.
    pub i_c: f64,
    /// S_ab ≤ S_a + S_b (within tolerance).
    pub subadditivity_ok: bool,
    /// S_ab ≥ |S_a - S_b| (within tolerance).
    pub araki_lieb_ok: bool,
}

/// The k-dependent weight of term k, in log space.
fn log_term(params: &QevParams, mode: Mode, k: u32, ctl: SeriesControl) -> Result<f64> {
    let m = params.m;
    let d = params.derived();
    let hyper = match mode {
        Mode::A => {
            let z = d.xi_y * d.xi_y;
            gauss_2f1((k as f64 + 1.0) / 2.0, (k as f64 + 2.0) / 2.0, 1.0, z, ctl)?
        }
        Mode::B => {
            let j = (m - k) as f64;
            let z = d.xi_x * d.xi_x;
            gauss_2f1((j + 1.0) / 2.0, (j + 2.0) / 2.0, 1.0, z, ctl)?
        }
        Mode::Joint => 1.0,
    };
    Ok(log_binomial(m, k)?
        + 2.0 * (m - k) as f64 * params.eta_x.ln()
        + 2.0 * k as f64 * params.eta_y.ln()
        + hyper.ln())
}

/// Diagonal-coefficient distribution of mode a, mode b, or the joint system,
/// normalized numerically.
pub fn modal_distribution(params: &QevParams, mode: Mode) -> Result<ModalDistribution> {
    modal_distribution_with(params, mode, SeriesControl::default())
}

pub fn modal_distribution_with(
    params: &QevParams,
    mode: Mode,
    ctl: SeriesControl,
) -> Result<ModalDistribution> {
    let mut logs = Vec::with_capacity(params.m as usize + 1);
    for k in 0..=params.m {
        logs.push(log_term(params, mode, k, ctl)?);
    }
    // Normalize in log space so m up to ~50 stays finite.
    let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = logs.iter().map(|l| (l - peak).exp()).collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    Ok(ModalDistribution { mode, probs })
}

/// Base-2 Shannon entropy with the 0·log 0 = 0 convention.
pub fn shannon_entropy(dist: &ModalDistribution) -> f64 {
    dist.probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// All three entropies plus the inequality flags.
pub fn entropy_report(params: &QevParams) -> Result<EntropyReport> {
    let s_a = shannon_entropy(&modal_distribution(params, Mode::A)?);
    let s_b = shannon_entropy(&modal_distribution(params, Mode::B)?);
    let s_ab = shannon_entropy(&modal_distribution(params, Mode::Joint)?);
    Ok(EntropyReport {
        s_a,
        s_b,
        s_ab,
        i_c: s_a + s_b - s_ab,
        subadditivity_ok: s_ab <= s_a + s_b + INEQUALITY_TOL,
        araki_lieb_ok: s_ab >= (s_a - s_b).abs() - INEQUALITY_TOL,
    })
}

/// Reduced matrix of mode a by partial trace over mode b of the truncated
/// pure state. Real by construction: every amplitude carries a phase set by
/// the parity of n_b alone, which cancels in c(n_a, n_b) c*(n_a', n_b).
fn reduced_mode_a(vec: &TwoModeFockVector) -> DMatrix<f64> {
    let n = vec.cutoff();
    DMatrix::from_fn(n, n, |i, j| {
        let mut acc = 0.0;
        for nb in 0..n {
            let z = vec.amp(i, nb) * vec.amp(j, nb).conj();
            acc += z.re;
        }
        acc
    })
}

/// Exact von Neumann entropy (bits) of mode a at the given cutoff:
/// partial trace, symmetric eigendecomposition, -Σ λ log₂ λ over
/// eigenvalues above 1e-14.
pub fn eigen_entropy_oracle(params: &QevParams, cutoff: usize) -> Result<f64> {
    let vec = fock_amplitudes(params, cutoff)?;
    Ok(eigen_entropy_of(&vec))
}

/// Same oracle on an already-built Fock vector.
pub fn eigen_entropy_of(vec: &TwoModeFockVector) -> f64 {
    let rho = reduced_mode_a(vec);
    let eigen = rho.symmetric_eigen();
    eigen
        .eigenvalues
        .iter()
        .filter(|&&l| l > 1e-14)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Closed-form check target for the joint distribution: Binomial(m, q) with
/// q = η_y²/(η_x² + η_y²).
pub fn joint_binomial_q(params: &QevParams) -> f64 {
    let (ex2, ey2) = (params.eta_x * params.eta_x, params.eta_y * params.eta_y);
    ey2 / (ex2 + ey2)
}

/// Entropy (bits) of Binomial(m, q), an independent route to S_ab.
pub fn binomial_entropy(m: u32, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!(
            "binomial q must be in [0,1], got {q}"
        )));
    }
    let mut s = 0.0;
    for k in 0..=m {
        let lp = log_binomial(m, k)?
            + if q > 0.0 {
                k as f64 * q.ln()
            } else if k == 0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
            + if q < 1.0 {
                (m - k) as f64 * (1.0 - q).ln()
            } else if k == m {
                0.0
            } else {
                f64::NEG_INFINITY
            };
        if lp.is_finite() {
            let p = lp.exp();
            if p > 0.0 {
                s -= p * p.log2();
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::fock_amplitudes_auto;
    use proptest::prelude::*;

    #[test]
    fn single_term_distribution() {
        let p = QevParams::section3(0, 0.8).unwrap();
        for mode in [Mode::A, Mode::B, Mode::Joint] {
            let d = modal_distribution(&p, mode).unwrap();
            assert_eq!(d.probs, vec![1.0]);
        }
    }

    #[test]
    fn joint_symmetric_is_uniform() {
        // Equal weights: p_k ∝ C(1,k) q^k (1-q)^{1-k} with q = 1/2.
        let p = QevParams::new(1, 0.9, 0.9, 0.5 * 5.0_f64.ln(), 0.5 * 3.0_f64.ln()).unwrap();
        let d = modal_distribution(&p, Mode::Joint).unwrap();
        assert!((d.probs[0] - 0.5).abs() < 1e-14);
        assert!((d.probs[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn mode_a_ratio_matches_hypergeometric_closed_forms() {
        // ξ_y = 0.8, equal weights, m = 1:
        // p1/p0 = (1-z)^{-3/2} / (1-z)^{-1/2} = 1/(1-z) = 1/0.36.
        let p = QevParams::new(1, 0.7, 0.7, 0.0, 0.5 * 3.0_f64.ln()).unwrap();
        let d = modal_distribution(&p, Mode::A).unwrap();
        assert!((d.probs[1] / d.probs[0] - 1.0 / 0.36).abs() < 1e-10);
        assert!((d.probs[0] - 0.36 / 1.36).abs() < 1e-12);
        assert!((d.probs[1] - 1.0 / 1.36).abs() < 1e-12);
    }

    #[test]
    fn distributions_normalize() {
        let p = QevParams::section3(7, 1.3).unwrap();
        for mode in [Mode::A, Mode::B, Mode::Joint] {
            let d = modal_distribution(&p, mode).unwrap();
            let total: f64 = d.probs.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(d.probs.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn shannon_entropy_known_values() {
        let one = ModalDistribution {
            mode: Mode::Joint,
            probs: vec![1.0],
        };
        assert_eq!(shannon_entropy(&one), 0.0);

        let uniform = ModalDistribution {
            mode: Mode::Joint,
            probs: vec![0.125; 8],
        };
        assert!((shannon_entropy(&uniform) - 3.0).abs() < 1e-12);

        let skewed = ModalDistribution {
            mode: Mode::A,
            probs: vec![0.25, 0.75],
        };
        assert!((shannon_entropy(&skewed) - 0.811_278_124_459_133).abs() < 1e-12);
    }

    #[test]
    fn report_trivial_and_symmetric_cases() {
        let r = entropy_report(&QevParams::section3(0, 0.8).unwrap()).unwrap();
        assert_eq!((r.s_a, r.s_b, r.s_ab), (0.0, 0.0, 0.0));
        assert!(r.subadditivity_ok && r.araki_lieb_ok);

        // Full a<->b symmetry makes the mode entropies equal.
        let p = QevParams::new(1, 0.8, 0.8, 0.21, 0.21).unwrap();
        let r = entropy_report(&p).unwrap();
        assert!((r.s_a - r.s_b).abs() < 1e-12);
        assert!((r.i_c - (r.s_a + r.s_b - r.s_ab)).abs() < 1e-15);

        // Balanced joint binomial: exactly one bit.
        let q = QevParams::new(1, 0.9, 0.9, 0.3, -0.1).unwrap();
        let r = entropy_report(&q).unwrap();
        assert!((r.s_ab - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_matches_binomial_closed_form() {
        for m in [1u32, 3, 7, 20] {
            let p = QevParams::section3(m, 0.73).unwrap();
            let s_ab = shannon_entropy(&modal_distribution(&p, Mode::Joint).unwrap());
            let q = joint_binomial_q(&p);
            assert!(
                (s_ab - binomial_entropy(m, q).unwrap()).abs() < 1e-12,
                "m={m}"
            );
        }
    }

    #[test]
    fn eigen_oracle_product_and_bell_cases() {
        // m = 0 at any squeezing is a product state: zero entropy.
        for zeta in [0.0, 0.3, -0.4] {
            let p = QevParams::new(0, 1.0, 1.0, zeta, 0.5 * zeta).unwrap();
            let s = eigen_entropy_oracle(&p, 64).unwrap();
            assert!(s.abs() < 1e-9, "zeta={zeta}: {s}");
        }
        // (|1,0> - i|0,1>)/√2 carries exactly one bit.
        let p = QevParams::new(1, 1.0, 1.0, 0.0, 0.0).unwrap();
        let s = eigen_entropy_oracle(&p, 16).unwrap();
        assert!((s - 1.0).abs() < 1e-9, "{s}");
    }

    #[test]
    fn eigen_oracle_propagates_truncation() {
        let p = QevParams::new(1, 1.0, 1.0, 0.6, 0.6).unwrap();
        assert!(matches!(
            eigen_entropy_oracle(&p, 4),
            Err(Error::Truncation(_))
        ));
        let v = fock_amplitudes_auto(&p).unwrap();
        assert!(eigen_entropy_of(&v) > 0.0);
    }

    proptest! {
        #[test]
        fn mode_swap_symmetry(m in 1u32..8, eta_x in 0.2f64..3.0, zx in -0.4f64..0.4, zy in -0.4f64..0.4) {
            // Swapping (η_x, ξ_x) <-> (η_y, ξ_y) maps p_k of mode a to
            // p_{m-k} of mode b.
            let eta_y = 1.0 / (std::f64::consts::SQRT_2 * eta_x);
            let p = QevParams::new(m, eta_x, eta_y, zx, zy).unwrap();
            let swapped = QevParams::new(m, eta_y, eta_x, zy, zx).unwrap();
            let a = modal_distribution(&p, Mode::A).unwrap();
            let b = modal_distribution(&swapped, Mode::B).unwrap();
            for k in 0..=m as usize {
                let diff = (a.probs[k] - b.probs[m as usize - k]).abs();
                prop_assert!(diff < 1e-12, "k={k}: {} vs {}", a.probs[k], b.probs[m as usize - k]);
            }
        }

        #[test]
        fn joint_is_binomial(m in 0u32..15, eta_x in 0.1f64..4.0) {
            let p = QevParams::section3(m, eta_x).unwrap();
            let d = modal_distribution(&p, Mode::Joint).unwrap();
            let q = joint_binomial_q(&p);
            for k in 0..=m {
                let expect = (crate::specfun::log_binomial(m, k).unwrap()
                    + k as f64 * q.ln()
                    + (m - k) as f64 * (1.0 - q).ln())
                .exp();
                prop_assert!((d.probs[k as usize] - expect).abs() < 1e-12);
            }
        }
    }
}
