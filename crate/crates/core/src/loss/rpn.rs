use super::{neg_log, pairwise_sum, smooth_l1_sum};
use crate::error::{Error, Result};

/// One anchor of a proposal-network mini-batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpnSample {
    /// Predicted objectness probability.
    pub prob: f64,
    /// Ground-truth label: object (true) or background (false).
    pub positive: bool,
    /// Predicted offsets, same layout as [`crate::codec::RegressionTarget`].
    pub pred: [f64; 8],
    /// Target offsets.
    pub target: [f64; 8],
}

#[derive(Debug, Clone, PartialEq)]
pub struct RpnBatch {
    pub samples: Vec<RpnSample>,
    /// Classification normalizer (mini-batch size).
    pub n_obj: usize,
    /// Regression normalizer (number of anchor locations).
    pub n_reg: usize,
    /// Balance between the two terms.
    pub lambda: f64,
}

impl RpnBatch {
    pub const DEFAULT_LAMBDA: f64 = 10.0;

    /// Batch with `n_obj = n_reg = samples.len()` and the default balance.
    pub fn new(samples: Vec<RpnSample>) -> Self {
        let n = samples.len();
        Self {
            samples,
            n_obj: n,
            n_reg: n,
            lambda: Self::DEFAULT_LAMBDA,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RpnGrad {
    pub d_prob: Vec<f64>,
    pub d_pred: Vec<[f64; 8]>,
}

/// Proposal loss: `(1/N_obj) Σ -p*·log p + λ (1/N_reg) Σ p*·smoothL1(t - t*)`.
///
/// Only positive anchors contribute to the regression term.
pub fn rpn_loss(batch: &RpnBatch) -> Result<(f64, RpnGrad)> {
    if batch.samples.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if batch.n_obj == 0 || batch.n_reg == 0 {
        return Err(Error::invalid("normalizers must be positive"));
    }
    if !batch.lambda.is_finite() || batch.lambda < 0.0 {
        return Err(Error::invalid("lambda must be finite and non-negative"));
    }
    let inv_obj = 1.0 / batch.n_obj as f64;
    let reg_scale = batch.lambda / batch.n_reg as f64;

    let n = batch.samples.len();
    let mut obj_terms = Vec::with_capacity(n);
    let mut reg_terms = Vec::with_capacity(n);
    let mut grad = RpnGrad {
        d_prob: vec![0.0; n],
        d_pred: vec![[0.0; 8]; n],
    };
    for (i, s) in batch.samples.iter().enumerate() {
        if !s.prob.is_finite() || s.pred.iter().chain(&s.target).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !s.positive {
            obj_terms.push(0.0);
            reg_terms.push(0.0);
            continue;
        }
        let (nl, dnl) = neg_log(s.prob);
        obj_terms.push(nl);
        grad.d_prob[i] = inv_obj * dnl;

        let (r, dr) = smooth_l1_sum(&s.pred, &s.target);
        reg_terms.push(r);
        grad.d_pred[i] = dr.map(|d| reg_scale * d);
    }
    let loss = inv_obj * pairwise_sum(&obj_terms) + reg_scale * pairwise_sum(&reg_terms);
    Ok((loss, grad))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(prob: f64, positive: bool, pred: [f64; 8], target: [f64; 8]) -> RpnSample {
        RpnSample {
            prob,
            positive,
            pred,
            target,
        }
    }

    #[test]
    fn negatives_contribute_nothing() {
        let b = RpnBatch::new(vec![
            sample(0.0, false, [3.0; 8], [0.0; 8]),
            sample(1e-3, false, [0.0; 8], [1.0; 8]),
        ]);
        let (l, g) = rpn_loss(&b).unwrap();
        assert_eq!(l, 0.0);
        assert!(g.d_prob.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn exact_positive_is_zero() {
        let b = RpnBatch::new(vec![sample(1.0, true, [0.2; 8], [0.2; 8])]);
        let (l, _) = rpn_loss(&b).unwrap();
        assert!(l.abs() < 1e-11, "{l}");
    }

    #[test]
    fn half_probability_fixture() {
        let mut pred = [0.0; 8];
        pred[3] = 0.5;
        let b = RpnBatch {
            samples: vec![sample(0.5, true, pred, [0.0; 8])],
            n_obj: 1,
            n_reg: 1,
            lambda: 10.0,
        };
        let (l, g) = rpn_loss(&b).unwrap();
        assert!((l - 1.943147).abs() < 1e-6, "{l}");
        assert_eq!(g.d_pred[0][3], 5.0);
        assert_eq!(g.d_prob[0], -2.0);
    }

    #[test]
    fn empty_batch_errors() {
        assert!(matches!(
            rpn_loss(&RpnBatch::new(vec![])),
            Err(Error::EmptyBatch)
        ));
    }
}
