//! Quantum elliptical vortex states on two bosonic modes: coordinate and
//! Fock-space construction, Wigner functions, quadrature uncertainties, mode
//! entropies with their inequality checks, and parameter-sweep tooling.
//!
//! Every closed-form path in the crate is paired with an independent
//! brute-force route (direct quadrature, a numeric Wigner transform, or a
//! truncated-Fock partial trace) so results can be cross-validated; see
//! [`analysis::validate`] and the `examples/` directory.
//!
//! ```
//! use qev::{entropy, moments, QevParams};
//!
//! // Vorticity 1 at ellipticity 0.8 in the fixed-width regime.
//! let params = QevParams::section3(1, 0.8)?;
//!
//! let u = moments::uncertainty_report(&params)?;
//! assert!(u.prod_x >= 0.5 && u.prod_y >= 0.5);
//!
//! let e = entropy::entropy_report(&params)?;
//! assert!(e.subadditivity_ok);
//! # Ok::<(), qev::Error>(())
//! ```

pub mod analysis;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod moments;
pub mod quadrature;
pub mod specfun;
pub mod state;
pub mod wigner;

pub use entropy::EntropyReport;
pub use error::{Error, Result};
pub use moments::UncertaintyReport;
pub use state::{QevParams, Wavefunction};
