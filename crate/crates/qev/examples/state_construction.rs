//! Build vortex states both ways: the coordinate-space amplitude and the
//! truncated two-mode Fock expansion.
//!
//! ```bash
//! cargo run -p qev --example state_construction
//! ```

use qev::state::{fock_amplitudes_auto, QevParams, Wavefunction};

fn main() -> qev::Result<()> {
    // Free-form parameters: vorticity 2, elliptical weights, mild squeezing.
    let params = QevParams::new(2, 1.2, 0.7, 0.15, -0.1)?;
    let d = params.derived();
    println!("widths  sigma = ({:.4}, {:.4})", d.sigma_x, d.sigma_y);
    println!("ladders xi    = ({:.4}, {:.4})", d.xi_x, d.xi_y);

    let psi = Wavefunction::new(params)?;
    println!("\namplitude along the diagonal (vanishes at the core):");
    for r in [0.0, 0.5, 1.0, 2.0] {
        let v = psi.eval(r, r);
        println!("  psi({r:.1}, {r:.1}) = {:+.6} {:+.6}i", v.re, v.im);
    }

    // The same state in the photon-number basis, cutoff chosen automatically
    // so the dropped probability mass stays below 1e-10.
    let fock = fock_amplitudes_auto(&params)?;
    println!(
        "\nFock expansion: cutoff {} per mode, tail mass {:.2e}",
        fock.cutoff(),
        fock.tail_mass()
    );
    println!("largest amplitudes (note n_a + n_b always matches the vorticity parity):");
    let mut entries = Vec::new();
    for na in 0..fock.cutoff().min(8) {
        for nb in 0..fock.cutoff().min(8) {
            let a = fock.amp(na, nb);
            if a.norm() > 1e-6 {
                entries.push((a.norm(), na, nb, a));
            }
        }
    }
    entries.sort_by(|x, y| y.0.total_cmp(&x.0));
    for (_, na, nb, a) in entries.iter().take(6) {
        println!("  |{na},{nb}>  {:+.6} {:+.6}i", a.re, a.im);
    }

    // Named regimes used by the sweep tooling.
    let width_regime = QevParams::section2(1, 2.0)?;
    let ellipticity_regime = QevParams::section3(1, 0.8)?;
    println!(
        "\nsection2 at sigma_x=2: eta = ({:.4}, {:.4})",
        width_regime.eta_x, width_regime.eta_y
    );
    println!(
        "section3 at eta_x=0.8: eta_y = {:.4}",
        ellipticity_regime.eta_y
    );
    Ok(())
}
