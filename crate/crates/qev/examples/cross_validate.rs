//! Run the full cross-validation suite and print the report.
//!
//! ```bash
//! cargo run -p qev --example cross_validate
//! ```

use qev::analysis::{validate, CheckKind};
use qev::state::QevParams;

fn main() -> qev::Result<()> {
    let params = QevParams::section3(1, 0.8)?;
    let report = validate(&params);

    println!(
        "{:<44} {:>12} {:>10}  status",
        "check", "measured", "tolerance"
    );
    for c in &report.checks {
        let tol = c
            .tolerance
            .map(|t| format!("{t:.1e}"))
            .unwrap_or_else(|| "-".into());
        let status = match (c.kind, c.passed) {
            (CheckKind::Hard, true) => "ok",
            (CheckKind::Hard, false) => "FAILED",
            (CheckKind::Info, true) => "info",
            (CheckKind::Info, false) => "info (flagged)",
        };
        println!("{:<44} {:>12.4e} {:>10}  {status}", c.name, c.measured, tol);
    }
    println!();
    for c in &report.checks {
        if c.kind == CheckKind::Info {
            println!("note [{}]: {}", c.name, c.note);
        }
    }
    assert!(report.all_hard_passed(), "hard checks must pass");
    Ok(())
}
