//! Check analytic loss gradients against central finite differences, both
//! through the seeded suites and on a hand-written function.
//!
//! ```bash
//! cargo run --example gradcheck
//! ```

use rboxkit::loss::{grad_check, run_suite, LossKind};

fn main() -> Result<(), rboxkit::Error> {
    for kind in LossKind::ALL {
        let r = run_suite(kind, 50, 7)?;
        println!(
            "{kind:<18} trials {:>3}  max rel error {:.2e}  {}",
            r.trials,
            r.max_rel_error,
            if r.passed() { "ok" } else { "MISMATCH" }
        );
    }

    // A deliberately wrong gradient is caught.
    let wrong = |p: &[f64]| Ok((p[0].powi(3), vec![2.0 * p[0] * p[0]]));
    println!(
        "wrong derivative of x^3: rel error {:.3}",
        grad_check(wrong, &[1.5], 1e-5)?
    );
    Ok(())
}
