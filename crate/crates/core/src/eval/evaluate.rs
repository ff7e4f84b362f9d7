use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::ap::{voc_ap, ApMode};
use super::format::{DetRecord, GtRecord};
use super::recall::{default_iou_grid, recall_over_groups};
use crate::error::{Error, Result};
use crate::geom::{hbb_iou, min_area_rect, rotated_iou, rrect_to_quad, Aabb, ConvexQuad, Quad};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Task {
    /// Oriented boxes, matched by rotated IoU of minimum-area rectangles.
    #[default]
    Obb,
    /// Horizontal boxes, matched by axis-aligned IoU.
    Hbb,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Obb => "obb",
            Task::Hbb => "hbb",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub task: Task,
    pub iou_thresh: f64,
    pub ap_mode: ApMode,
    pub ar_grid: Vec<f64>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            task: Task::Obb,
            iou_thresh: 0.5,
            ap_mode: ApMode::ElevenPoint,
            ar_grid: default_iou_grid(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassResult {
    pub ap: f64,
    /// Non-difficult ground truths.
    pub npos: usize,
    pub ndet: usize,
    pub tp: usize,
    pub fp: usize,
    /// `(recall, precision)` after every counted detection.
    #[serde(skip)]
    pub pr_curve: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalResult {
    pub task: &'static str,
    pub iou_thresh: f64,
    pub ap_mode: &'static str,
    pub map: f64,
    pub ar: f64,
    pub classes: BTreeMap<String, ClassResult>,
    /// `(iou_threshold, recall)` behind `ar`.
    pub recall_curve: Vec<(f64, f64)>,
}

impl EvalResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One `category recall precision` line per curve point.
    pub fn pr_curves_text(&self) -> String {
        let mut s = String::new();
        for (name, c) in &self.classes {
            for (r, p) in &c.pr_curve {
                s.push_str(&format!("{name} {r:.6} {p:.6}\n"));
            }
        }
        s
    }
}

/// Matching geometry of one box for the configured task.
enum Shape {
    Rot(ConvexQuad),
    Axis(Aabb),
}

impl Shape {
    fn of(q: &Quad, task: Task) -> Result<Shape> {
        Ok(match task {
            Task::Obb => Shape::Rot(rrect_to_quad(&min_area_rect(q)?)?),
            Task::Hbb => Shape::Axis(Aabb::enclosing(q)),
        })
    }

    fn iou(&self, o: &Shape) -> f64 {
        match (self, o) {
            (Shape::Rot(a), Shape::Rot(b)) => rotated_iou(a, b),
            (Shape::Axis(a), Shape::Axis(b)) => hbb_iou(a, b),
            _ => unreachable!("shapes built for one task"),
        }
    }

    fn as_quad(&self) -> Result<ConvexQuad> {
        match self {
            Shape::Rot(q) => Ok(*q),
            Shape::Axis(b) => b.to_quad().validate(),
        }
    }
}

fn det_shape(d: &DetRecord, task: Task) -> Result<Shape> {
    match task {
        Task::Obb => {
            if !d.is_obb() {
                return Err(Error::invalid(format!(
                    "horizontal detection on image '{}' in an oriented evaluation",
                    d.image_id
                )));
            }
            Shape::of(&d.quad(), task)
        }
        Task::Hbb => Ok(Shape::Axis(d.aabb())),
    }
}

/// Per-class AP, mAP and average recall of `dets` (keyed by category)
/// against `gts` (keyed by image id).
///
/// Detections are processed by descending score, ties in input order. A
/// detection takes its highest-IoU ground truth of the same image and class;
/// it is a true positive if that IoU reaches `iou_thresh` and the ground
/// truth is unmatched, ignored if the ground truth is difficult, and a false
/// positive otherwise. Classes without non-difficult ground truths are not
/// scored. AR pools all classes, matching detections to ground truths of the
/// same image and class.
pub fn evaluate(
    dets: &BTreeMap<String, Vec<DetRecord>>,
    gts: &BTreeMap<String, Vec<GtRecord>>,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    if !(cfg.iou_thresh > 0.0 && cfg.iou_thresh <= 1.0) {
        return Err(Error::invalid("IoU threshold must be in (0, 1]"));
    }
    let vocab: BTreeSet<&str> = gts
        .values()
        .flatten()
        .map(|g| g.category.as_str())
        .collect();
    let unknown: Vec<String> = dets
        .iter()
        .filter(|(c, v)| !v.is_empty() && !vocab.contains(c.as_str()))
        .map(|(c, _)| c.clone())
        .collect();
    if !unknown.is_empty() {
        return Err(Error::UnknownCategories(unknown));
    }

    let mut classes = BTreeMap::new();
    let mut ar_groups: Vec<(Vec<ConvexQuad>, Vec<ConvexQuad>)> = Vec::new();
    let no_dets = Vec::new();
    for &class in &vocab {
        // image -> (shapes, difficult flags)
        let mut class_gts: BTreeMap<&str, (Vec<Shape>, Vec<bool>)> = BTreeMap::new();
        let mut npos = 0;
        for (image, recs) in gts {
            for g in recs.iter().filter(|g| g.category == class) {
                let e = class_gts.entry(image.as_str()).or_default();
                e.0.push(Shape::of(&g.quad, cfg.task)?);
                e.1.push(g.difficult);
                npos += usize::from(!g.difficult);
            }
        }
        let class_dets = dets.get(class).unwrap_or(&no_dets);
        let det_shapes: Vec<Shape> = class_dets
            .iter()
            .map(|d| det_shape(d, cfg.task))
            .collect::<Result<_>>()?;

        let mut ar_props: BTreeMap<&str, Vec<ConvexQuad>> = BTreeMap::new();
        for (d, s) in class_dets.iter().zip(&det_shapes) {
            ar_props
                .entry(d.image_id.as_str())
                .or_default()
                .push(s.as_quad()?);
        }
        for (image, (shapes, difficult)) in &class_gts {
            let g: Vec<ConvexQuad> = shapes
                .iter()
                .zip(difficult)
                .filter(|(_, d)| !**d)
                .map(|(s, _)| s.as_quad())
                .collect::<Result<_>>()?;
            ar_groups.push((ar_props.remove(image).unwrap_or_default(), g));
        }

        if npos == 0 {
            continue;
        }

        let mut order: Vec<usize> = (0..class_dets.len()).collect();
        order.sort_by(|&a, &b| {
            class_dets[b]
                .score
                .total_cmp(&class_dets[a].score)
                .then(a.cmp(&b))
        });
        let mut matched: BTreeMap<&str, Vec<bool>> = class_gts
            .iter()
            .map(|(k, (s, _))| (*k, vec![false; s.len()]))
            .collect();
        let (mut tp, mut fp) = (0usize, 0usize);
        let mut curve = Vec::new();
        for &di in &order {
            let image = class_dets[di].image_id.as_str();
            let best = class_gts.get(image).and_then(|(shapes, _)| {
                shapes
                    .iter()
                    .enumerate()
                    .map(|(j, g)| (j, det_shapes[di].iou(g)))
                    .fold(None, |acc: Option<(usize, f64)>, x| match acc {
                        Some(a) if a.1 >= x.1 => Some(a),
                        _ => Some(x),
                    })
            });
            match best {
                Some((j, iou)) if iou >= cfg.iou_thresh => {
                    if class_gts[image].1[j] {
                        continue;
                    }
                    let m = matched.get_mut(image).expect("image has gts");
                    if m[j] {
                        fp += 1;
                    } else {
                        m[j] = true;
                        tp += 1;
                    }
                }
                _ => fp += 1,
            }
            curve.push((tp as f64 / npos as f64, tp as f64 / (tp + fp) as f64));
        }
        let ap = voc_ap(&curve, cfg.ap_mode)?;
        classes.insert(
            class.to_string(),
            ClassResult {
                ap,
                npos,
                ndet: class_dets.len(),
                tp,
                fp,
                pr_curve: curve,
            },
        );
    }
    if classes.is_empty() {
        return Err(Error::invalid("no non-difficult ground truths to evaluate"));
    }
    let map = classes.values().map(|c| c.ap).sum::<f64>() / classes.len() as f64;
    let ar = recall_over_groups(
        ar_groups.iter().map(|(p, g)| (p.as_slice(), g.as_slice())),
        &cfg.ar_grid,
    )?;
    Ok(EvalResult {
        task: cfg.task.name(),
        iou_thresh: cfg.iou_thresh,
        ap_mode: cfg.ap_mode.name(),
        map,
        ar: ar.ar,
        classes,
        recall_curve: ar.curve,
    })
}
