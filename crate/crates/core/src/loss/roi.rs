use super::{angle_loss, neg_log, smooth_l1_sum, AngleVariant};
use crate::error::{Error, Result};
use crate::geom::Quad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoiMode {
    /// Classification, HBB and OBB regression, and the angle term.
    #[default]
    Full,
    /// Classification and HBB regression only.
    HbbOnly,
}

/// One region of interest with its predictions and targets.
#[derive(Debug, Clone, PartialEq)]
pub struct RoiSample {
    /// Predicted distribution over `K + 1` classes; index 0 is background.
    pub class_probs: Vec<f64>,
    /// True class `u`.
    pub true_class: usize,
    /// Predicted HBB offsets `{xmin, ymin, w, h}` for class `u`.
    pub hbb_pred: [f64; 4],
    pub hbb_target: [f64; 4],
    /// Predicted OBB corner offsets for class `u`.
    pub obb_pred: [f64; 8],
    pub obb_target: [f64; 8],
    /// Predicted quadrilateral whose angles enter the rectangularity term.
    pub quad: Quad,
    pub lambda: f64,
    pub angle_variant: AngleVariant,
    pub mode: RoiMode,
}

impl RoiSample {
    pub const DEFAULT_LAMBDA: f64 = 1.0;
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RoiGrad {
    pub d_probs: Vec<f64>,
    pub d_hbb: [f64; 4],
    pub d_obb: [f64; 8],
    /// W.r.t. the quad corners `[x1, y1, ..., x4, y4]`.
    pub d_quad: [f64; 8],
}

/// Detection-head loss:
/// `-log p_u + λ[u≥1]·(L_loc-HBB + L_loc-OBB + L_angle)`.
///
/// Background samples (`u = 0`) only pay the classification term and their
/// quad is never inspected.
pub fn roi_loss(s: &RoiSample) -> Result<(f64, RoiGrad)> {
    let k1 = s.class_probs.len();
    if k1 < 2 {
        return Err(Error::invalid("need at least background and one class"));
    }
    if s.true_class >= k1 {
        return Err(Error::invalid(format!(
            "true class {} exceeds K = {}",
            s.true_class,
            k1 - 1
        )));
    }
    if s.class_probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::invalid(
            "class probabilities must be finite and non-negative",
        ));
    }
    let total: f64 = s.class_probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "class probabilities sum to {total}, not 1"
        )));
    }
    if !s.lambda.is_finite() || s.lambda < 0.0 {
        return Err(Error::invalid("lambda must be finite and non-negative"));
    }

    let mut grad = RoiGrad {
        d_probs: vec![0.0; k1],
        ..RoiGrad::default()
    };
    let (cls, dcls) = neg_log(s.class_probs[s.true_class]);
    grad.d_probs[s.true_class] = dcls;
    if s.true_class == 0 {
        return Ok((cls, grad));
    }

    let lam = s.lambda;
    let (hbb, dhbb) = smooth_l1_sum(&s.hbb_pred, &s.hbb_target);
    grad.d_hbb = dhbb.map(|d| lam * d);
    let mut loss = cls + lam * hbb;

    if s.mode == RoiMode::Full {
        let (obb, dobb) = smooth_l1_sum(&s.obb_pred, &s.obb_target);
        grad.d_obb = dobb.map(|d| lam * d);
        let (ang, dang) = angle_loss(&s.quad, s.angle_variant)?;
        grad.d_quad = dang.map(|d| lam * d);
        loss += lam * obb + lam * ang;
    }
    Ok((loss, grad))
}
