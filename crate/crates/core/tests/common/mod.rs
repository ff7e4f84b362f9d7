//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rboxkit::geom::rotated_iou;
use rboxkit::{ConvexQuad, Point2, Quad};

/// Random convex quad: four points on a rotated ellipse, angularly spread.
pub fn random_convex_quad(
    rng: &mut ChaCha8Rng,
    center_range: f64,
    r_min: f64,
    r_max: f64,
) -> ConvexQuad {
    loop {
        let cx = rng.random_range(0.0..center_range);
        let cy = rng.random_range(0.0..center_range);
        let a = rng.random_range(r_min..r_max);
        let b = rng.random_range(r_min..r_max);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::PI);
        let mut t: Vec<f64> = (0..4)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        t.sort_by(f64::total_cmp);
        let gaps_ok = (0..4).all(|i| {
            let next = if i == 3 {
                t[0] + std::f64::consts::TAU
            } else {
                t[i + 1]
            };
            next - t[i] > 0.4
        });
        if !gaps_ok {
            continue;
        }
        let (s, c) = phi.sin_cos();
        let pts: Vec<Point2> = t
            .iter()
            .map(|&ti| {
                let (x, y) = (a * ti.cos(), b * ti.sin());
                Point2::new(cx + c * x - s * y, cy + s * x + c * y)
            })
            .collect();
        if let Ok(q) = Quad::new([pts[0], pts[1], pts[2], pts[3]]).validate() {
            return q;
        }
    }
}

/// Arbitrary quad (possibly non-convex or self-intersecting).
pub fn random_any_quad(rng: &mut ChaCha8Rng, range: f64) -> Quad {
    Quad::new(std::array::from_fn(|_| {
        Point2::new(rng.random_range(0.0..range), rng.random_range(0.0..range))
    }))
}

/// x-interval of a convex polygon on the horizontal line `y`.
fn span(poly: &[Point2; 4], y: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..4 {
        let (p, q) = (poly[i], poly[(i + 1) % 4]);
        let (ymin, ymax) = (p.y.min(q.y), p.y.max(q.y));
        if y < ymin || y > ymax || ymin == ymax {
            continue;
        }
        let x = p.x + (y - p.y) / (q.y - p.y) * (q.x - p.x);
        lo = lo.min(x);
        hi = hi.max(x);
    }
    (lo <= hi).then_some((lo, hi))
}

/// IoU by counting pixel centres of an `n × n` grid laid over the joint
/// bounding box, one scanline at a time.
pub fn raster_iou(a: &ConvexQuad, b: &ConvexQuad, n: usize) -> f64 {
    let pa = a.corners();
    let pb = b.corners();
    let all = pa.iter().chain(pb.iter());
    let x0 = all.clone().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let x1 = all.clone().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
    let y0 = all.clone().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let y1 = all.map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let (dx, dy) = ((x1 - x0) / n as f64, (y1 - y0) / n as f64);
    let count = |lo: f64, hi: f64| -> i64 {
        let first = ((lo - x0) / dx - 0.5).ceil().max(0.0) as i64;
        let last = ((hi - x0) / dx - 0.5).floor().min(n as f64 - 1.0) as i64;
        (last - first + 1).max(0)
    };
    let (mut na, mut nb, mut ni) = (0i64, 0i64, 0i64);
    for j in 0..n {
        let y = y0 + (j as f64 + 0.5) * dy;
        let sa = span(pa, y);
        let sb = span(pb, y);
        if let Some((l, h)) = sa {
            na += count(l, h);
        }
        if let Some((l, h)) = sb {
            nb += count(l, h);
        }
        if let (Some((la, ha)), Some((lb, hb))) = (sa, sb) {
            if la.max(lb) <= ha.min(hb) {
                ni += count(la.max(lb), ha.min(hb));
            }
        }
    }
    let union = na + nb - ni;
    if union == 0 {
        0.0
    } else {
        ni as f64 / union as f64
    }
}

/// Greedy NMS by repeated removal: take the best remaining detection, drop
/// everything overlapping it by more than `thresh`, repeat.
pub fn greedy_nms_oracle(quads: &[ConvexQuad], scores: &[f64], thresh: f64) -> Vec<usize> {
    let n = quads.len();
    let iou: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| rotated_iou(&quads[i], &quads[j])).collect())
        .collect();
    let mut alive = vec![true; n];
    let mut kept = Vec::new();
    loop {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if alive[i] && best.is_none_or(|b| scores[i] > scores[b]) {
                best = Some(i);
            }
        }
        let Some(b) = best else { break };
        kept.push(b);
        for i in 0..n {
            if alive[i] && (i == b || iou[b][i] > thresh) {
                alive[i] = false;
            }
        }
    }
    kept
}

/// Smallest axis-aligned bounding box area over orientations `0, step, ...`
/// degrees below 90.
pub fn sweep_min_rect_area(pts: &[Point2], step_deg: f64) -> f64 {
    let mut best = f64::INFINITY;
    let steps = (90.0 / step_deg).round() as usize;
    for k in 0..steps {
        let (s, c) = (k as f64 * step_deg).to_radians().sin_cos();
        let (mut ulo, mut uhi, mut vlo, mut vhi) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for p in pts {
            let u = c * p.x + s * p.y;
            let v = -s * p.x + c * p.y;
            ulo = ulo.min(u);
            uhi = uhi.max(u);
            vlo = vlo.min(v);
            vhi = vhi.max(v);
        }
        best = best.min((uhi - ulo) * (vhi - vlo));
    }
    best
}

/// Interior angles in degrees from `atan2(|cross|, dot)` at each corner.
pub fn angles_oracle(q: &Quad) -> [f64; 4] {
    std::array::from_fn(|i| {
        let c = q.corners[i];
        let u = q.corners[(i + 3) % 4].sub(c);
        let v = q.corners[(i + 1) % 4].sub(c);
        u.cross(v).abs().atan2(u.dot(v)).to_degrees()
    })
}

/// Angle penalties summed over the first three corners, written out
/// directly: `|tan δ|`, smooth-L1 of `δ`, and `δ²`, with `δ` in degrees.
pub fn angle_loss_oracle(q: &Quad) -> [f64; 3] {
    let a = angles_oracle(q);
    let mut out = [0.0; 3];
    for &theta in &a[..3] {
        let d = theta - 90.0;
        out[0] += d.to_radians().tan().abs();
        out[1] += if d.abs() < 1.0 {
            0.5 * d * d
        } else {
            d.abs() - 0.5
        };
        out[2] += d * d;
    }
    out
}

/// Central-difference gradient of `f` at `x`.
pub fn numeric_grad(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut p = x.to_vec();
    (0..x.len())
        .map(|i| {
            p[i] = x[i] + h;
            let fp = f(&p);
            p[i] = x[i] - h;
            let fm = f(&p);
            p[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// `|a - n| / max(1, |a|)`, maximised over components.
pub fn max_rel_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| (a - n).abs() / a.abs().max(1.0))
        .fold(0.0, f64::max)
}

pub fn axis_square(x: f64, y: f64, w: f64, h: f64) -> Quad {
    Quad::from_flat([x, y, x + w, y, x + w, y + h, x, y + h])
}
