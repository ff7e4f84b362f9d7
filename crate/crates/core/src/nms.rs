//! Rotated non-maximum suppression and Soft-NMS.
//!
//! Both run on one class at a time; [`r_nms_per_class`] does the grouping.
//! Equal scores are ordered by original index.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::geom::{hbb_iou, rotated_iou, Aabb, ConvexQuad};

pub const DEFAULT_RNMS_IOU: f64 = 0.1;
pub const DEFAULT_SOFT_NMS_IOU: f64 = 0.3;
pub const DEFAULT_SCORE_FLOOR: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredDetection {
    pub quad: ConvexQuad,
    pub class_id: u32,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbbDetection {
    pub aabb: Aabb,
    pub class_id: u32,
    pub score: f64,
}

fn by_score_desc(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

/// Greedy rotated NMS. Returns kept indices in descending score order.
///
/// A detection is suppressed when its rotated IoU with an already kept one
/// exceeds `iou_thresh`.
pub fn r_nms(dets: &[ScoredDetection], iou_thresh: f64) -> Vec<usize> {
    let scores: Vec<f64> = dets.iter().map(|d| d.score).collect();
    let order = by_score_desc(&scores);
    let mut suppressed = vec![false; dets.len()];
    let mut keep = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        if suppressed[i] {
            continue;
        }
        keep.push(i);
        for &j in &order[pos + 1..] {
            if !suppressed[j] && rotated_iou(&dets[i].quad, &dets[j].quad) > iou_thresh {
                suppressed[j] = true;
            }
        }
    }
    keep
}

/// Runs [`r_nms`] separately for every class id. Returns kept indices into
/// `dets`, grouped by ascending class id.
pub fn r_nms_per_class(dets: &[ScoredDetection], iou_thresh: f64) -> Vec<usize> {
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, d) in dets.iter().enumerate() {
        groups.entry(d.class_id).or_default().push(i);
    }
    groups
        .values()
        .flat_map(|idx| {
            let sub: Vec<ScoredDetection> = idx.iter().map(|&i| dets[i]).collect();
            r_nms(&sub, iou_thresh)
                .into_iter()
                .map(|k| idx[k])
                .collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SoftNmsDecay {
    /// Multiply by `1 - iou` when `iou > iou_thresh`.
    Linear,
    /// Multiply by `exp(-iou² / sigma)` for every overlap.
    Gaussian { sigma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftNmsConfig {
    pub iou_thresh: f64,
    pub score_floor: f64,
    pub decay: SoftNmsDecay,
}

impl Default for SoftNmsConfig {
    fn default() -> Self {
        Self {
            iou_thresh: DEFAULT_SOFT_NMS_IOU,
            score_floor: DEFAULT_SCORE_FLOOR,
            decay: SoftNmsDecay::Linear,
        }
    }
}

/// Soft-NMS over axis-aligned detections.
///
/// Returns `(original index, rescored score)` in selection order, which is
/// also non-increasing in the rescored score. Detections that decay below
/// `score_floor` are dropped.
pub fn soft_nms(dets: &[HbbDetection], cfg: &SoftNmsConfig) -> Vec<(usize, f64)> {
    let mut scores: Vec<f64> = dets.iter().map(|d| d.score).collect();
    let mut alive: Vec<usize> = (0..dets.len())
        .filter(|&i| scores[i] >= cfg.score_floor)
        .collect();
    let mut out = Vec::with_capacity(alive.len());
    while !alive.is_empty() {
        let (pos, _) = alive
            .iter()
            .enumerate()
            .max_by(|(_, &a), (_, &b)| match scores[a].total_cmp(&scores[b]) {
                Ordering::Equal => b.cmp(&a),
                o => o,
            })
            .expect("non-empty");
        let top = alive.swap_remove(pos);
        out.push((top, scores[top]));
        alive.retain(|&j| {
            let iou = hbb_iou(&dets[top].aabb, &dets[j].aabb);
            let factor = match cfg.decay {
                SoftNmsDecay::Linear if iou > cfg.iou_thresh => 1.0 - iou,
                SoftNmsDecay::Linear => 1.0,
                SoftNmsDecay::Gaussian { sigma } => (-iou * iou / sigma).exp(),
            };
            scores[j] *= factor;
            scores[j] >= cfg.score_floor
        });
    }
    out
}
