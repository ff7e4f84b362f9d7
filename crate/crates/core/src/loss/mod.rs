//! Losses with analytic gradients.
//!
//! Every loss returns its value together with the gradient with respect to
//! its continuous inputs. [`grad_check`] compares those gradients against
//! central finite differences.

mod angle;
mod gradcheck;
mod roi;
mod rpn;

pub use angle::{angle_loss, AngleVariant};
pub use gradcheck::{grad_check, run_suite, LossKind, SuiteReport, GRAD_TOLERANCE};
pub use roi::{roi_loss, RoiGrad, RoiMode, RoiSample};
pub use rpn::{rpn_loss, RpnBatch, RpnGrad, RpnSample};

/// Probabilities are clamped to `[PROB_CLAMP, 1 - PROB_CLAMP]` before logs.
pub const PROB_CLAMP: f64 = 1e-12;

/// Smooth-L1 with transition at `|x| = 1`: value and derivative.
pub fn smooth_l1(x: f64) -> (f64, f64) {
    if x.abs() < 1.0 {
        (0.5 * x * x, x)
    } else {
        (x.abs() - 0.5, x.signum())
    }
}

/// Sum of smooth-L1 over `pred - target`, with the gradient w.r.t. `pred`.
pub(crate) fn smooth_l1_sum<const N: usize>(pred: &[f64; N], target: &[f64; N]) -> (f64, [f64; N]) {
    let mut grad = [0.0; N];
    let mut vals = [0.0; N];
    for i in 0..N {
        let (v, d) = smooth_l1(pred[i] - target[i]);
        vals[i] = v;
        grad[i] = d;
    }
    (pairwise_sum(&vals), grad)
}

/// Negative log of a clamped probability, and the derivative w.r.t. the
/// unclamped input (zero where the clamp is active).
pub(crate) fn neg_log(p: f64) -> (f64, f64) {
    let c = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
    let d = if p == c { -1.0 / c } else { 0.0 };
    (-c.ln(), d)
}

/// Pairwise summation; the fixed tree shape makes results reproducible.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}
