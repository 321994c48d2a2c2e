//! Wigner function evaluation: the numeric transform (the ground truth),
//! the compact closed form, marginals, and a phase-space slice showing the
//! negative vortex core.
//!
//! ```bash
//! cargo run -p qev --example wigner_slices
//! ```

use qev::state::QevParams;
use qev::wigner::{
    uniform_axis, wigner_grid, EvalMethod, PhaseGridRequest, PhasePoint, Plane, WignerClosedForm,
    WignerNumeric,
};

fn main() -> qev::Result<()> {
    let params = QevParams::coordinate_consistent(1, 0.2, 0.2)?;
    let numeric = WignerNumeric::new(&params)?;
    let closed = WignerClosedForm::new(&params)?;

    let origin = PhasePoint::origin();
    println!("m = 1 vortex core:");
    println!("  numeric transform  W(0) = {:+.6}", numeric.eval(&origin)?);
    println!("  closed form        W(0) = {:+.6}", closed.eval(&origin));
    println!("  (odd vorticity makes the core negative in both routes)");

    // Wigner marginals integrate back to the position density.
    let psi = numeric.wavefunction();
    let (x, y) = (0.8, -0.4);
    println!("\nmarginal check at ({x}, {y}):");
    println!("  integral over momenta = {:.8}", numeric.marginal(x, y));
    println!("  |psi|^2               = {:.8}", psi.eval(x, y).norm_sqr());

    // A small x-p_x slice through the core (numeric route).
    let request = PhaseGridRequest {
        plane: Plane::XPx,
        fixed: [0.0, 0.0],
        axis1: uniform_axis(-2.0, 2.0, 7),
        axis2: uniform_axis(-2.0, 2.0, 7),
    };
    let grid = wigner_grid(&params, &request, EvalMethod::Numeric)?;
    println!("\nx-px slice, numeric transform (negative center, positive ring):");
    for i in 0..7 {
        let cells: Vec<String> = (0..7)
            .map(|j| format!("{:+.3}", grid.value(i, j)))
            .collect();
        println!("  {}", cells.join(" "));
    }

    println!(
        "\nphase-space integral (numeric route): {:.6}",
        numeric.box_integral()
    );
    Ok(())
}
