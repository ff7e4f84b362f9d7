use super::Anchor;
use crate::codec::{encode_obb, match_corners, CornerMatching, RegressionTarget};
use crate::error::{Error, Result};
use crate::geom::{rotated_iou, rrect_to_quad, ConvexQuad, Point2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelConfig {
    pub pos_thresh: f64,
    pub neg_thresh: f64,
    pub matching: CornerMatching,
}

impl Default for LabelConfig {
    fn default() -> Self {
        Self {
            pos_thresh: 0.7,
            neg_thresh: 0.3,
            matching: CornerMatching::MinDisplacement,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnchorLabel {
    Positive { gt: usize, target: RegressionTarget },
    Negative,
    Ignore,
}

impl AnchorLabel {
    pub fn is_positive(&self) -> bool {
        matches!(self, AnchorLabel::Positive { .. })
    }
}

/// Labels anchors by rotated IoU with the ground truths.
///
/// Positive: IoU ≥ `pos_thresh` with some ground truth (assigned to the
/// best one). A ground truth left without a positive claims its
/// highest-IoU anchor not already positive (lowest index on ties, IoU must be
/// nonzero). Negative: best IoU below `neg_thresh`. Everything else is
/// ignored.
pub fn label_anchors(
    anchors: &[Anchor],
    gts: &[ConvexQuad],
    cfg: &LabelConfig,
) -> Result<Vec<AnchorLabel>> {
    if !(0.0 <= cfg.neg_thresh && cfg.neg_thresh < cfg.pos_thresh && cfg.pos_thresh <= 1.0) {
        return Err(Error::invalid(format!(
            "thresholds must satisfy 0 <= neg < pos <= 1 (got {} / {})",
            cfg.neg_thresh, cfg.pos_thresh
        )));
    }
    let gt_circles: Vec<(Point2, f64)> = gts.iter().map(|g| circle(g.corners())).collect();

    let mut best_iou = vec![0.0f64; anchors.len()];
    let mut best_gt = vec![None::<usize>; anchors.len()];
    // Anchors overlapping each ground truth.
    let mut gt_hits: Vec<Vec<(usize, f64)>> = vec![Vec::new(); gts.len()];
    for (ai, a) in anchors.iter().enumerate() {
        let aq = rrect_to_quad(&a.geometry)?;
        let (ac, ar) = circle(aq.corners());
        for (gi, g) in gts.iter().enumerate() {
            let (gc, gr) = gt_circles[gi];
            if ac.dist(gc) >= ar + gr {
                continue;
            }
            let iou = rotated_iou(&aq, g);
            if iou > best_iou[ai] {
                best_iou[ai] = iou;
                best_gt[ai] = Some(gi);
            }
            if iou > 0.0 {
                gt_hits[gi].push((ai, iou));
            }
        }
    }

    let mut owner: Vec<Option<usize>> = (0..anchors.len())
        .map(|ai| best_gt[ai].filter(|_| best_iou[ai] >= cfg.pos_thresh))
        .collect();
    let mut covered = vec![false; gts.len()];
    for gi in owner.iter().flatten() {
        covered[*gi] = true;
    }
    // Uncovered ground truths take their best unclaimed anchor.
    for (gi, hits) in gt_hits.iter_mut().enumerate() {
        if covered[gi] {
            continue;
        }
        hits.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        if let Some(&(ai, _)) = hits.iter().find(|(ai, _)| owner[*ai].is_none()) {
            owner[ai] = Some(gi);
        }
    }

    anchors
        .iter()
        .enumerate()
        .map(|(ai, a)| match owner[ai] {
            Some(gi) => {
                let gt = match_corners(&a.geometry, &gts[gi].as_quad(), cfg.matching);
                Ok(AnchorLabel::Positive {
                    gt: gi,
                    target: encode_obb(&a.geometry, &gt)?,
                })
            }
            None if best_iou[ai] < cfg.neg_thresh => Ok(AnchorLabel::Negative),
            None => Ok(AnchorLabel::Ignore),
        })
        .collect()
}

/// Bounding circle about the vertex centroid.
fn circle(c: &[Point2; 4]) -> (Point2, f64) {
    let center = c
        .iter()
        .fold(Point2::default(), |a, p| a.add(*p))
        .scale(0.25);
    let r = c.iter().map(|p| p.dist(center)).fold(0.0, f64::max);
    (center, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Quad, RRect};

    fn anchor(cx: f64, cy: f64, w: f64, h: f64, angle: f64) -> Anchor {
        Anchor {
            geometry: RRect::new(cx, cy, w, h, angle).unwrap(),
            level: 2,
            orientation: angle,
        }
    }

    fn gt_of(a: &Anchor) -> ConvexQuad {
        Quad::new(a.geometry.corners()).validate().unwrap()
    }

    #[test]
    fn contested_anchor_falls_back_to_next_best() {
        let a = anchor(5.0, 5.0, 10.0, 10.0, 0.0);
        let b = anchor(15.0, 5.0, 10.0, 10.0, 0.0);
        let g0 = gt_of(&a);
        let g1 = Quad::from_flat([1.0, 0.0, 11.0, 0.0, 11.0, 10.0, 1.0, 10.0])
            .validate()
            .unwrap();
        let labels = label_anchors(&[a, b], &[g0, g1], &LabelConfig::default()).unwrap();
        assert!(matches!(labels[0], AnchorLabel::Positive { gt: 0, .. }));
        assert!(matches!(labels[1], AnchorLabel::Positive { gt: 1, .. }));
    }

    #[test]
    fn identical_anchor_is_positive_with_zero_target() {
        let a = anchor(10.0, 10.0, 8.0, 4.0, 45.0);
        let labels = label_anchors(&[a], &[gt_of(&a)], &LabelConfig::default()).unwrap();
        match labels[0] {
            AnchorLabel::Positive { gt, target } => {
                assert_eq!(gt, 0);
                assert!(target.t.iter().all(|v| v.abs() < 1e-12), "{target:?}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn far_anchor_is_negative() {
        let a = anchor(10.0, 10.0, 8.0, 4.0, 0.0);
        let far = anchor(100.0, 100.0, 8.0, 4.0, 0.0);
        let labels = label_anchors(&[a, far], &[gt_of(&a)], &LabelConfig::default()).unwrap();
        assert_eq!(labels[1], AnchorLabel::Negative);
    }

    #[test]
    fn no_gts_means_all_negative() {
        let a = anchor(10.0, 10.0, 8.0, 4.0, 0.0);
        let labels = label_anchors(&[a, a], &[], &LabelConfig::default()).unwrap();
        assert!(labels.iter().all(|l| *l == AnchorLabel::Negative));
    }

    #[test]
    fn bad_thresholds() {
        let cfg = LabelConfig {
            pos_thresh: 0.3,
            neg_thresh: 0.5,
            ..LabelConfig::default()
        };
        assert!(label_anchors(&[], &[], &cfg).is_err());
    }
}
