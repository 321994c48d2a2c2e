//! Gauss-Hermite and Gauss-Legendre rules. Hermite nodes are seeded by the
//! Golub-Welsch eigenvalue method and polished with Newton steps on the
//! orthonormal recurrence, which keeps them at machine precision for any
//! order used here; weights come from the derivative at each root.
//!
//! Every integrand in this crate is a polynomial times a Gaussian, for which
//! Gauss-Hermite is exact once the order exceeds half the polynomial degree.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

const MAX_NEWTON: usize = 100;
const EPS: f64 = 1e-15;

/// Nodes and weights for ∫ f(t) e^{-t²} dt ≈ Σ w_i f(t_i).
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

static HERMITE_CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();

/// Eigenvalues of the Jacobi matrix of the Hermite recurrence (zero
/// diagonal, off-diagonal √(j/2)), sorted descending. These are the quadrature
/// nodes up to eigensolver accuracy.
fn hermite_eigen_nodes(n: usize) -> Vec<f64> {
    let mut jacobi = nalgebra::DMatrix::<f64>::zeros(n, n);
    for j in 1..n {
        let b = (j as f64 / 2.0).sqrt();
        jacobi[(j - 1, j)] = b;
        jacobi[(j, j - 1)] = b;
    }
    let mut v: Vec<f64> = jacobi.symmetric_eigenvalues().iter().cloned().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

impl GaussHermite {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("Gauss-Hermite order must be >= 1".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let pim4 = std::f64::consts::PI.powf(-0.25);
        let nf = n as f64;
        let seeds = hermite_eigen_nodes(n);

        let half = n.div_ceil(2);
        for i in 0..half {
            let mut z = seeds[i];
            let mut pp = 0.0;
            let mut converged = false;
            for _ in 0..MAX_NEWTON {
                // Orthonormal Hermite recurrence.
                let mut p1 = pim4;
                let mut p2 = 0.0;
                for j in 0..n {
                    let jf = j as f64;
                    let p3 = p2;
                    p2 = p1;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= EPS * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NonConvergence(format!(
                    "Gauss-Hermite root {i} of order {n} did not converge"
                )));
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        if n % 2 == 1 {
            nodes[half - 1] = 0.0;
        }
        for i in 1..n {
            if nodes[i - 1] <= nodes[i] {
                return Err(Error::NonConvergence(format!(
                    "Gauss-Hermite order {n}: nodes {i} and {} collided",
                    i - 1
                )));
            }
        }
        Ok(Self { nodes, weights })
    }

    /// Cached rule; high orders are reused all over the sweep machinery.
    pub fn shared(n: usize) -> Result<Arc<GaussHermite>> {
        let cache = HERMITE_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(rule) = cache.lock().expect("cache lock").get(&n) {
            return Ok(rule.clone());
        }
        let rule = Arc::new(GaussHermite::new(n)?);
        Ok(cache
            .lock()
            .expect("cache lock")
            .entry(n)
            .or_insert(rule)
            .clone())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫ f(t) e^{-t²} dt.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// ∫∫ f(s, t) e^{-s²-t²} ds dt over the tensor grid.
    pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = 0.0;
        for (&s, &ws) in self.nodes.iter().zip(&self.weights) {
            let mut inner = 0.0;
            for (&t, &wt) in self.nodes.iter().zip(&self.weights) {
                inner += wt * f(s, t);
            }
            acc += ws * inner;
        }
        acc
    }
}

/// Nodes and weights for ∫_{-1}^{1} f(t) dt ≈ Σ w_i f(t_i).
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("Gauss-Legendre order must be >= 1".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut pp = 0.0;
            let mut converged = false;
            for _ in 0..MAX_NEWTON {
                let mut p1 = 1.0;
                let mut p2 = 0.0;
                for j in 0..n {
                    let jf = j as f64;
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
                }
                pp = nf * (z * p1 - p2) / (z * z - 1.0);
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= EPS {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NonConvergence(format!(
                    "Gauss-Legendre root {i} of order {n} did not converge"
                )));
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        if n % 2 == 1 {
            nodes[half - 1] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    /// ∫_a^b f(x) dx.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        hw * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + hw * t))
            .sum::<f64>()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::log_gamma;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn hermite_gaussian_moments() {
        for n in [1usize, 2, 5, 24, 96, 192, 256] {
            let q = GaussHermite::new(n).unwrap();
            let total: f64 = q.weights().iter().sum();
            assert!(
                (total - SQRT_PI).abs() < 1e-12 * SQRT_PI,
                "order {n}: weight sum {total}"
            );
        }
        let q = GaussHermite::new(8).unwrap();
        assert!((q.integrate(|t| t * t) - SQRT_PI / 2.0).abs() < 1e-13);
        assert!((q.integrate(|t| t.powi(4)) - 0.75 * SQRT_PI).abs() < 1e-12);
    }

    #[test]
    fn hermite_high_degree_exactness() {
        // ∫ t^{2k} e^{-t²} dt = Γ(k + 1/2)
        let q = GaussHermite::new(64).unwrap();
        for k in [10u32, 20, 40] {
            let exact = log_gamma(k as f64 + 0.5).unwrap().exp();
            let got = q.integrate(|t| t.powi(2 * k as i32));
            assert!(
                (got - exact).abs() < 1e-11 * exact,
                "k={k}: got {got}, want {exact}"
            );
        }
    }

    #[test]
    fn hermite_2d_factorizes() {
        let q = GaussHermite::new(16).unwrap();
        let got = q.integrate_2d(|s, t| s * s * t * t);
        let want = (SQRT_PI / 2.0) * (SQRT_PI / 2.0);
        assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn legendre_polynomials_and_cosine() {
        let q = GaussLegendre::new(12).unwrap();
        assert!((q.integrate(-1.0, 1.0, |x| x * x) - 2.0 / 3.0).abs() < 1e-14);
        assert!((q.integrate(0.0, 2.0, |x| x.powi(7)) - 32.0).abs() < 1e-11);
        let got = q.integrate(0.0, std::f64::consts::FRAC_PI_2, f64::cos);
        assert!((got - 1.0).abs() < 1e-13);
    }

    #[test]
    fn node_symmetry() {
        let q = GaussHermite::new(31).unwrap();
        for i in 0..q.len() {
            assert_eq!(q.nodes()[i], -q.nodes()[q.len() - 1 - i]);
        }
        assert_eq!(q.nodes()[15], 0.0);
    }

    #[test]
    fn zero_order_rejected() {
        assert!(GaussHermite::new(0).is_err());
        assert!(GaussLegendre::new(0).is_err());
    }
}
