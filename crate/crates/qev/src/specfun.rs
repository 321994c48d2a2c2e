//! Self-contained special-function kernel: log-gamma, binomial coefficients,
//! associated Laguerre polynomials, and the Gauss hypergeometric series.
//!
//! Only the regimes the rest of the crate needs are implemented. In
//! particular ₂F₁ is evaluated by its defining power series on z ∈ [0, 1),
//! which is the whole story here because the squeezing expansion parameter
//! ξ = tanh(2ζ) satisfies ξ² < 1.

use crate::error::{Error, Result};

/// Termination control for the ₂F₁ power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Stop once the next term falls below `rel_tol` × |partial sum|.
    pub rel_tol: f64,
    /// Hard cap on the number of terms before giving up.
    pub max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if rel_tol <= 0.0 || rel_tol.is_nan() {
            return Err(Error::Domain(format!("rel_tol must be > 0, got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::Domain("max_terms must be >= 1".into()));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

impl Default for SeriesControl {
    /// z = ξ² near 1 converges slowly; the cap prevents hangs.
    fn default() -> Self {
        Self {
            rel_tol: 1e-16,
            max_terms: 1_000_000,
        }
    }
}

/// Lanczos coefficients (g = 7, n = 9), accurate to ~15 significant digits,
/// quoted at published precision.
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x > 0.
///
/// Lanczos approximation with reflection for x < 0.5; good to at least
/// 12 significant digits over the range used here.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 || x.is_nan() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

fn log_gamma_unchecked(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - log_gamma_unchecked(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Binomial coefficient C(m, k) as a float.
///
/// Exact integer arithmetic (u128) for m <= 60, log-gamma beyond that.
/// Errors for k > m and for results outside the f64 range.
pub fn binomial(m: u32, k: u32) -> Result<f64> {
    if k > m {
        return Err(Error::Domain(format!(
            "binomial requires k <= m, got ({m}, {k})"
        )));
    }
    let k = k.min(m - k);
    if m <= 60 {
        let mut acc: u128 = 1;
        for i in 0..k as u128 {
            acc = acc * (m as u128 - i) / (i + 1);
        }
        return Ok(acc as f64);
    }
    let ln = log_gamma_unchecked(m as f64 + 1.0)
        - log_gamma_unchecked(k as f64 + 1.0)
        - log_gamma_unchecked((m - k) as f64 + 1.0);
    let v = ln.exp();
    if !v.is_finite() {
        return Err(Error::Domain(format!("binomial({m}, {k}) overflows f64")));
    }
    Ok(v)
}

/// Natural log of C(m, k); never overflows for representable inputs.
pub fn log_binomial(m: u32, k: u32) -> Result<f64> {
    if k > m {
        return Err(Error::Domain(format!(
            "binomial requires k <= m, got ({m}, {k})"
        )));
    }
    Ok(log_gamma_unchecked(m as f64 + 1.0)
        - log_gamma_unchecked(k as f64 + 1.0)
        - log_gamma_unchecked((m - k) as f64 + 1.0))
}

/// Associated Laguerre polynomial L_m^α(x) by the three-term recurrence
///
///   (k+1) L_{k+1} = (2k + 1 + α - x) L_k - (k + α) L_{k-1}.
pub fn laguerre_assoc(m: u32, alpha: f64, x: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = 1.0 + alpha - x;
    for k in 1..m as u64 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * curr - (kf + alpha) * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) by its defining series,
/// for z ∈ [0, 1 - 1e-6] only.
///
/// Terms follow t_{n+1} = t_n (a+n)(b+n) z / ((c+n)(n+1)); summation stops
/// when the next term drops below `ctl.rel_tol` × |partial sum|.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    if c <= 0.0 && c == c.trunc() {
        return Err(Error::Domain(format!(
            "2F1 undefined for nonpositive integer c = {c}"
        )));
    }
    if !(0.0..=1.0 - 1e-6).contains(&z) {
        return Err(Error::Domain(format!(
            "2F1 series implemented only for z in [0, 1 - 1e-6], got {z}"
        )));
    }
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) * z / ((c + nf) * (nf + 1.0));
        if term.abs() <= ctl.rel_tol * sum.abs() {
            return Ok(sum + term);
        }
        sum += term;
    }
    Err(Error::NonConvergence(format!(
        "2F1({a}, {b}; {c}; {z}) did not settle within {} terms",
        ctl.max_terms
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PI: f64 = std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn log_gamma_known_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-12);
        assert!(rel(log_gamma(0.5).unwrap(), PI.sqrt().ln()) < 1e-12);
        assert!(rel(log_gamma(5.0).unwrap(), 24.0_f64.ln()) < 1e-12);
        assert!(rel(log_gamma(2.0).unwrap().exp(), 1.0) < 1e-12);
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-3.5).is_err());
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(7, 0).unwrap(), 1.0);
        assert_eq!(binomial(5, 2).unwrap(), 10.0);
        assert_eq!(binomial(6, 3).unwrap(), 20.0);
        assert_eq!(binomial(60, 30).unwrap(), 118_264_581_564_861_424.0);
    }

    #[test]
    fn binomial_rejects_k_above_m() {
        assert!(binomial(3, 4).is_err());
    }

    #[test]
    fn binomial_large_m_matches_log_route() {
        // Pascal check just past the exact-integer regime.
        let a = binomial(80, 40).unwrap();
        let b = binomial(79, 39).unwrap() + binomial(79, 40).unwrap();
        assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn laguerre_base_cases() {
        assert_eq!(laguerre_assoc(0, -0.5, 123.0), 1.0);
        // L_1^α(x) = 1 + α - x
        assert!((laguerre_assoc(1, -0.5, 2.0) - (-1.5)).abs() < 1e-14);
        // L_m^α(0) = Γ(m+α+1) / (Γ(α+1) m!)
        assert!((laguerre_assoc(2, -0.5, 0.0) - 0.375).abs() < 1e-14);
    }

    #[test]
    fn gauss_2f1_trivial_and_closed_forms() {
        let ctl = SeriesControl::default();
        assert_eq!(gauss_2f1(0.3, 0.7, 1.9, 0.0, ctl).unwrap(), 1.0);
        // 2F1(a, b; b; z) = (1-z)^{-a}
        assert!(rel(gauss_2f1(0.5, 1.0, 1.0, 0.64, ctl).unwrap(), 1.0 / 0.6) < 1e-14);
        assert!(
            rel(
                gauss_2f1(1.0, 1.5, 1.0, 0.64, ctl).unwrap(),
                0.36_f64.powf(-1.5)
            ) < 1e-14
        );
        // 2F1(1, 1; 2; z) = -ln(1-z)/z
        let z = 0.73;
        assert!(
            rel(
                gauss_2f1(1.0, 1.0, 2.0, z, ctl).unwrap(),
                -(1.0 - z).ln() / z
            ) < 1e-13
        );
    }

    #[test]
    fn gauss_2f1_domain_errors() {
        let ctl = SeriesControl::default();
        assert!(gauss_2f1(0.5, 1.0, 0.0, 0.5, ctl).is_err());
        assert!(gauss_2f1(0.5, 1.0, -2.0, 0.5, ctl).is_err());
        assert!(gauss_2f1(0.5, 1.0, 1.0, -0.1, ctl).is_err());
        assert!(gauss_2f1(0.5, 1.0, 1.0, 1.0 - 1e-9, ctl).is_err());
    }

    #[test]
    fn gauss_2f1_reports_non_convergence() {
        let ctl = SeriesControl::new(1e-16, 5).unwrap();
        match gauss_2f1(0.5, 1.0, 1.0, 0.9, ctl) {
            Err(Error::NonConvergence(_)) => {}
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn laguerre_recurrence_identity(m in 1u32..40, alpha in -0.9f64..3.0, x in -5.0f64..20.0) {
            // (m+1) L_{m+1} = (2m+1+α-x) L_m - (m+α) L_{m-1}
            let lm1 = laguerre_assoc(m - 1, alpha, x);
            let lm = laguerre_assoc(m, alpha, x);
            let lp1 = laguerre_assoc(m + 1, alpha, x);
            let mf = m as f64;
            let rhs = ((2.0 * mf + 1.0 + alpha - x) * lm - (mf + alpha) * lm1) / (mf + 1.0);
            let scale = lp1.abs().max(lm.abs()).max(1.0);
            prop_assert!((lp1 - rhs).abs() / scale < 1e-12);
        }

        #[test]
        fn log_gamma_functional_equation(x in 0.5f64..30.0) {
            // Γ(x+1) = x Γ(x)
            let lhs = log_gamma(x + 1.0).unwrap().exp();
            let rhs = x * log_gamma(x).unwrap().exp();
            prop_assert!((lhs - rhs).abs() / rhs.abs() < 1e-12);
        }

        #[test]
        fn binomial_pascal_rule(m in 2u32..55, k in 1u32..54) {
            prop_assume!(k < m);
            let lhs = binomial(m, k).unwrap();
            let rhs = binomial(m - 1, k - 1).unwrap() + binomial(m - 1, k).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }
    }
}
