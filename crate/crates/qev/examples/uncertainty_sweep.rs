//! Quadrature uncertainties along the width sweep, in both width-coupling
//! regimes.
//!
//! ```bash
//! cargo run -p qev --example uncertainty_sweep
//! ```

use qev::analysis::{sweep_uncertainty, Preset, SweepSpec};

fn main() -> qev::Result<()> {
    let mut spec = SweepSpec::section2_default(vec![1]);
    spec.steps = 10;

    println!("section2 (eta_i = 1/(sqrt2 sigma_i)): the state is scale-invariant,");
    println!("so dx grows, dpx shrinks, and the products sit at (m+1)/2 exactly:\n");
    print_table(&sweep_uncertainty(&spec)?);

    spec.preset = Preset::Section2Unit;
    println!("\nsection2-unit (eta = 1, sigma_y^2 = 5 sigma_x): the vortex weight");
    println!("migrates between the modes and the products trade off:\n");
    print_table(&sweep_uncertainty(&spec)?);
    Ok(())
}

fn print_table(table: &qev::analysis::SweepTable<qev::moments::UncertaintyReport>) {
    println!("  sigma_x      dx     dpx  prod_x  prod_y     sum");
    for row in &table.rows {
        match &row.outcome {
            Ok(r) => println!(
                "  {:7.3} {:7.3} {:7.3} {:7.4} {:7.4} {:7.4}",
                row.value, r.dx, r.dpx, r.prod_x, r.prod_y, r.sum
            ),
            Err(e) => println!("  {:7.3}  failed: {e}", row.value),
        }
    }
}
