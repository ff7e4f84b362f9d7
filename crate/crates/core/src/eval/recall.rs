use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geom::{rotated_iou, ConvexQuad};

/// IoU thresholds 0.50, 0.55, ..., 0.95.
pub fn default_iou_grid() -> Vec<f64> {
    (0..10).map(|i| f64::from(50 + 5 * i) / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArResult {
    /// Mean recall over the grid.
    pub ar: f64,
    /// `(iou_threshold, recall)` per grid point.
    pub curve: Vec<(f64, f64)>,
}

/// Average recall of proposals against ground truths, keyed by image.
///
/// Proposals and ground truths are matched one-to-one per image, greedily in
/// order of decreasing IoU. Recall at threshold `t` counts matches with
/// IoU ≥ `t`.
pub fn average_recall(
    proposals: &BTreeMap<String, Vec<ConvexQuad>>,
    gts: &BTreeMap<String, Vec<ConvexQuad>>,
    iou_grid: &[f64],
) -> Result<ArResult> {
    let empty = Vec::new();
    let groups = gts
        .iter()
        .map(|(k, g)| (proposals.get(k).unwrap_or(&empty).as_slice(), g.as_slice()));
    recall_over_groups(groups, iou_grid)
}

pub(crate) fn recall_over_groups<'a>(
    groups: impl Iterator<Item = (&'a [ConvexQuad], &'a [ConvexQuad])>,
    iou_grid: &[f64],
) -> Result<ArResult> {
    if iou_grid.is_empty() {
        return Err(Error::invalid("empty IoU grid"));
    }
    let mut total = 0usize;
    let mut matched: Vec<f64> = Vec::new();
    for (props, gts) in groups {
        total += gts.len();
        matched.extend(greedy_match(props, gts));
    }
    if total == 0 {
        return Err(Error::invalid("no ground truths"));
    }
    let curve: Vec<(f64, f64)> = iou_grid
        .iter()
        .map(|&t| {
            let hits = matched.iter().filter(|&&iou| iou >= t).count();
            (t, hits as f64 / total as f64)
        })
        .collect();
    let ar = curve.iter().map(|(_, r)| r).sum::<f64>() / curve.len() as f64;
    Ok(ArResult { ar, curve })
}

/// IoU of every match made by greedy one-to-one assignment.
fn greedy_match(props: &[ConvexQuad], gts: &[ConvexQuad]) -> Vec<f64> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (gi, g) in gts.iter().enumerate() {
        for (pi, p) in props.iter().enumerate() {
            let iou = rotated_iou(p, g);
            if iou > 0.0 {
                pairs.push((iou, gi, pi));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut gt_used = vec![false; gts.len()];
    let mut prop_used = vec![false; props.len()];
    let mut out = Vec::new();
    for (iou, gi, pi) in pairs {
        if !gt_used[gi] && !prop_used[pi] {
            gt_used[gi] = true;
            prop_used[pi] = true;
            out.push(iou);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Quad;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexQuad {
        Quad::from_flat([x0, y0, x1, y0, x1, y1, x0, y1])
            .validate()
            .unwrap()
    }

    fn one(k: &str, v: Vec<ConvexQuad>) -> BTreeMap<String, Vec<ConvexQuad>> {
        BTreeMap::from([(k.to_string(), v)])
    }

    #[test]
    fn grid_values() {
        let g = default_iou_grid();
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 0.5);
        assert_eq!(g[4], 0.7);
        assert_eq!(g[9], 0.95);
    }

    #[test]
    fn identical_and_empty() {
        let gts = one(
            "a",
            vec![rect(0.0, 0.0, 4.0, 4.0), rect(10.0, 0.0, 12.0, 3.0)],
        );
        let r = average_recall(&gts, &gts, &default_iou_grid()).unwrap();
        assert_eq!(r.ar, 1.0);
        let r = average_recall(&BTreeMap::new(), &gts, &default_iou_grid()).unwrap();
        assert_eq!(r.ar, 0.0);
        assert!(average_recall(&gts, &BTreeMap::new(), &default_iou_grid()).is_err());
    }

    #[test]
    fn single_proposal_at_iou_point_seven() {
        let gts = one("a", vec![rect(0.0, 0.0, 10.0, 10.0)]);
        let props = one("a", vec![rect(0.0, 0.0, 10.0, 7.0)]);
        let r = average_recall(&props, &gts, &default_iou_grid()).unwrap();
        assert_eq!(r.ar, 0.5);
    }

    #[test]
    fn one_proposal_matches_one_gt() {
        let gts = one(
            "a",
            vec![rect(0.0, 0.0, 4.0, 4.0), rect(0.0, 0.0, 4.0, 4.0)],
        );
        let props = one("a", vec![rect(0.0, 0.0, 4.0, 4.0)]);
        let r = average_recall(&props, &gts, &default_iou_grid()).unwrap();
        assert_eq!(r.ar, 0.5);
    }
}
