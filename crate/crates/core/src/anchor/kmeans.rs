//! K-means++ over box shapes with `1 - IoU` as the distance.
//!
//! Two shapes are compared as concentric axis-aligned boxes, so only width
//! and height matter. Seeding and all tie-breaks are driven by a ChaCha8
//! stream seeded from a `u64`, which is portable and bit-reproducible.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{min_area_rect, Quad};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapePrior {
    pub w: f64,
    pub h: f64,
}

impl ShapePrior {
    pub fn new(w: f64, h: f64) -> Self {
        Self { w, h }
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    fn cmp_key(&self, o: &ShapePrior) -> Ordering {
        self.w.total_cmp(&o.w).then(self.h.total_cmp(&o.h))
    }
}

/// IoU of two shapes placed concentric and axis-aligned.
pub fn shape_iou(a: &ShapePrior, b: &ShapePrior) -> f64 {
    let inter = a.w.min(b.w) * a.h.min(b.h);
    inter / (a.area() + b.area() - inter)
}

pub fn iou_distance(a: &ShapePrior, b: &ShapePrior) -> f64 {
    1.0 - shape_iou(a, b)
}

/// Shapes of the minimum-area rectangles of `quads`, long side first.
pub fn shapes_from_quads(quads: &[Quad]) -> Result<Vec<ShapePrior>> {
    quads
        .iter()
        .map(|q| {
            let r = min_area_rect(q)?;
            Ok(ShapePrior::new(r.w.max(r.h), r.w.min(r.h)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Cluster representatives, sorted by area then width.
    pub priors: Vec<ShapePrior>,
    /// Mean distance of each input shape to its assigned prior.
    pub cost: f64,
    /// Cost after every assignment step, first entry right after seeding.
    pub cost_history: Vec<f64>,
    /// Prior index per input shape, in input order.
    pub assignments: Vec<usize>,
}

/// Clusters `shapes` into `k` priors.
///
/// Lloyd iterations alternate nearest-prior assignment with a component-wise
/// median update. A median update is accepted only if it lowers the
/// cluster's total distance, which keeps the cost nonincreasing. Empty
/// clusters are re-seeded from the point farthest from its prior.
///
/// The input is sorted before clustering, so the result does not depend on
/// input order.
pub fn kmeans_iou(
    shapes: &[ShapePrior],
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<Clustering> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if k > shapes.len() {
        return Err(Error::invalid(format!(
            "k = {k} exceeds the number of shapes ({})",
            shapes.len()
        )));
    }
    if shapes
        .iter()
        .any(|s| !(s.w.is_finite() && s.h.is_finite() && s.w > 0.0 && s.h > 0.0))
    {
        return Err(Error::invalid("shapes must have positive finite sides"));
    }

    let mut order: Vec<usize> = (0..shapes.len()).collect();
    order.sort_by(|&a, &b| shapes[a].cmp_key(&shapes[b]));
    let pts: Vec<ShapePrior> = order.iter().map(|&i| shapes[i]).collect();
    let n = pts.len();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = seed_plus_plus(&pts, k, &mut rng);

    let mut assign = vec![0usize; n];
    let mut dist = vec![0.0f64; n];
    let mut history = Vec::new();
    for _ in 0..max_iter.max(1) {
        assign_nearest(&pts, &centers, &mut assign, &mut dist);
        reseed_empty(&mut centers, &pts, &mut assign, &mut dist);
        history.push(mean(&dist));

        let mut changed = false;
        for (c, center) in centers.iter_mut().enumerate() {
            let members: Vec<ShapePrior> =
                (0..n).filter(|&i| assign[i] == c).map(|i| pts[i]).collect();
            if members.is_empty() {
                continue;
            }
            let cand = ShapePrior::new(
                median(members.iter().map(|m| m.w).collect()),
                median(members.iter().map(|m| m.h).collect()),
            );
            let old: f64 = members.iter().map(|m| iou_distance(m, center)).sum();
            let new: f64 = members.iter().map(|m| iou_distance(m, &cand)).sum();
            if new < old {
                *center = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    assign_nearest(&pts, &centers, &mut assign, &mut dist);
    reseed_empty(&mut centers, &pts, &mut assign, &mut dist);
    let cost = mean(&dist);
    if history.last() != Some(&cost) {
        history.push(cost);
    }

    // Sort priors and map assignments back to input order.
    let mut rank: Vec<usize> = (0..k).collect();
    rank.sort_by(|&a, &b| {
        centers[a]
            .area()
            .total_cmp(&centers[b].area())
            .then(centers[a].cmp_key(&centers[b]))
    });
    let mut new_index = vec![0; k];
    for (pos, &c) in rank.iter().enumerate() {
        new_index[c] = pos;
    }
    let mut assignments = vec![0; n];
    for (sorted_pos, &orig) in order.iter().enumerate() {
        assignments[orig] = new_index[assign[sorted_pos]];
    }
    Ok(Clustering {
        priors: rank.iter().map(|&c| centers[c]).collect(),
        cost,
        cost_history: history,
        assignments,
    })
}

fn seed_plus_plus(pts: &[ShapePrior], k: usize, rng: &mut ChaCha8Rng) -> Vec<ShapePrior> {
    let n = pts.len();
    let mut centers = vec![pts[rng.random_range(0..n)]];
    let mut nearest: Vec<f64> = pts.iter().map(|p| iou_distance(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().map(|d| d * d).sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = None;
            for (i, d) in nearest.iter().enumerate() {
                if *d > 0.0 {
                    acc += d * d;
                    chosen = Some(i);
                    if acc > target {
                        break;
                    }
                }
            }
            chosen.unwrap_or(0)
        } else {
            rng.random_range(0..n)
        };
        let c = pts[pick];
        for (d, p) in nearest.iter_mut().zip(pts) {
            *d = d.min(iou_distance(p, &c));
        }
        centers.push(c);
    }
    centers
}

fn assign_nearest(
    pts: &[ShapePrior],
    centers: &[ShapePrior],
    assign: &mut [usize],
    dist: &mut [f64],
) {
    for (i, p) in pts.iter().enumerate() {
        let (best, d) = centers
            .iter()
            .enumerate()
            .map(|(c, ctr)| (c, iou_distance(p, ctr)))
            .fold(
                (0, f64::INFINITY),
                |acc, x| if x.1 < acc.1 { x } else { acc },
            );
        assign[i] = best;
        dist[i] = d;
    }
}

fn reseed_empty(
    centers: &mut [ShapePrior],
    pts: &[ShapePrior],
    assign: &mut [usize],
    dist: &mut [f64],
) {
    for c in 0..centers.len() {
        let mut counts = vec![0usize; centers.len()];
        for &a in assign.iter() {
            counts[a] += 1;
        }
        if counts[c] > 0 {
            continue;
        }
        let far = (0..pts.len()).filter(|&i| counts[assign[i]] > 1).fold(
            None,
            |best: Option<usize>, i| match best {
                Some(b) if dist[b] >= dist[i] => Some(b),
                _ => Some(i),
            },
        );
        if let Some(i) = far {
            centers[c] = pts[i];
            assign[i] = c;
            dist[i] = 0.0;
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(w: f64, h: f64, n: usize) -> Vec<ShapePrior> {
        vec![ShapePrior::new(w, h); n]
    }

    #[test]
    fn distance_properties() {
        let a = ShapePrior::new(10.0, 20.0);
        let b = ShapePrior::new(20.0, 10.0);
        assert_eq!(iou_distance(&a, &a), 0.0);
        assert!((shape_iou(&a, &b) - 100.0 / 300.0).abs() < 1e-15);
    }

    #[test]
    fn single_shape() {
        let c = kmeans_iou(&rep(7.0, 3.0, 10), 1, 0, 50).unwrap();
        assert_eq!(c.priors, vec![ShapePrior::new(7.0, 3.0)]);
        assert_eq!(c.cost, 0.0);
    }

    #[test]
    fn one_prior_per_distinct_shape() {
        let mut s = rep(5.0, 5.0, 3);
        s.extend(rep(9.0, 2.0, 4));
        s.extend(rep(30.0, 40.0, 2));
        for seed in 0..20 {
            let c = kmeans_iou(&s, 3, seed, 50).unwrap();
            assert_eq!(c.cost, 0.0, "seed {seed}");
        }
    }

    #[test]
    fn too_many_clusters() {
        assert!(kmeans_iou(&rep(1.0, 1.0, 2), 3, 0, 10).is_err());
        assert!(kmeans_iou(&rep(1.0, 1.0, 2), 0, 0, 10).is_err());
        assert!(kmeans_iou(&[ShapePrior::new(0.0, 1.0)], 1, 0, 10).is_err());
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
