use std::cmp::Ordering;

use super::{ConvexQuad, Point2, EPS};

pub(crate) fn signed_area(poly: &[Point2]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    // Shoelace relative to the first vertex keeps cancellation small for
    // polygons far from the origin.
    let o = poly[0];
    let mut acc = 0.0;
    for w in poly[1..].windows(2) {
        acc += w[0].sub(o).cross(w[1].sub(o));
    }
    0.5 * acc
}

/// Area of a simple polygon (absolute shoelace area).
pub fn polygon_area(poly: &[Point2]) -> f64 {
    signed_area(poly).abs()
}

/// Both quads are counter-clockwise, so equal point sets differ at most by
/// a cyclic shift.
fn same_corners(a: &ConvexQuad, b: &ConvexQuad) -> bool {
    let (ca, cb) = (a.corners(), b.corners());
    (0..4).any(|s| (0..4).all(|k| ca[k] == cb[(k + s) % 4]))
}

/// Intersection of two convex quads, counter-clockwise.
///
/// Returns an empty vector when the interiors are disjoint, including
/// contact along an edge or at a vertex. The result has at most 8 vertices
/// and is identical for `(a, b)` and `(b, a)`.
pub fn convex_intersect(a: &ConvexQuad, b: &ConvexQuad) -> Vec<Point2> {
    if same_corners(a, b) {
        return a.corners().to_vec();
    }
    let (subject, clipper) = match a.total_cmp(b) {
        Ordering::Greater => (b, a),
        _ => (a, b),
    };
    if !bounds_overlap(subject, clipper) {
        return Vec::new();
    }

    let mut poly: Vec<Point2> = subject.corners().to_vec();
    let mut next: Vec<Point2> = Vec::with_capacity(8);
    let cc = clipper.corners();
    for i in 0..4 {
        let start = cc[i];
        let end = cc[(i + 1) % 4];
        let edge = end.sub(start);
        let len = edge.norm();
        if len == 0.0 {
            continue;
        }
        // Signed distance to the clip line, positive on the inner (left) side.
        let dist = |p: Point2| edge.cross(p.sub(start)) / len;

        next.clear();
        let n = poly.len();
        for j in 0..n {
            let cur = poly[j];
            let prev = poly[(j + n - 1) % n];
            let dc = dist(cur);
            let dp = dist(prev);
            let cur_in = dc >= -EPS;
            let prev_in = dp >= -EPS;
            if cur_in {
                if !prev_in {
                    next.push(crossing(prev, cur, dp, dc));
                }
                next.push(cur);
            } else if prev_in {
                next.push(crossing(prev, cur, dp, dc));
            }
        }
        std::mem::swap(&mut poly, &mut next);
        if poly.is_empty() {
            return poly;
        }
    }

    dedup_ring(&mut poly);
    if poly.len() < 3 || signed_area(&poly) <= EPS * EPS {
        return Vec::new();
    }
    poly
}

fn crossing(p: Point2, q: Point2, dp: f64, dq: f64) -> Point2 {
    let t = dp / (dp - dq);
    p.add(q.sub(p).scale(t))
}

fn dedup_ring(poly: &mut Vec<Point2>) {
    poly.dedup_by(|b, a| a.dist(*b) < EPS);
    while poly.len() > 1 && poly[0].dist(poly[poly.len() - 1]) < EPS {
        poly.pop();
    }
}

fn bounds_overlap(a: &ConvexQuad, b: &ConvexQuad) -> bool {
    let (ax0, ay0, ax1, ay1) = a.bounds();
    let (bx0, by0, bx1, by1) = b.bounds();
    ax0 < bx1 && bx0 < ax1 && ay0 < by1 && by0 < ay1
}

/// Intersection over union of two convex quads, in `[0, 1]`.
///
/// Exactly symmetric in its arguments. Touching quads (zero-area overlap)
/// give 0; quads with the same corners give exactly 1.
pub fn rotated_iou(a: &ConvexQuad, b: &ConvexQuad) -> f64 {
    if same_corners(a, b) {
        return 1.0;
    }
    let inter = polygon_area(&convex_intersect(a, b));
    if inter <= 0.0 {
        return 0.0;
    }
    let inter = inter.min(a.area().min(b.area()));
    let union = a.area() + b.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}
