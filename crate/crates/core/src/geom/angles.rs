use super::{Point2, Quad, EPS};
use crate::error::{Error, Result};

/// Cosines this close to ±1 are pulled inside the arccos domain.
const COS_LIMIT: f64 = 1.0 - 1e-12;

/// Interior angle at each corner in degrees, from the cosine rule on the
/// triangle formed by the corner and its two neighbours.
///
/// For a convex quad the four angles sum to 360.
pub fn interior_angles(q: &Quad) -> Result<[f64; 4]> {
    let mut out = [0.0; 4];
    for (i, a) in out.iter_mut().enumerate() {
        *a = corner_angle(q, i)?.0;
    }
    Ok(out)
}

/// Angle at corner `i` (degrees) and its gradient with respect to the flat
/// corner vector `[x1, y1, ..., x4, y4]`.
pub(crate) fn interior_angles_with_grad(q: &Quad) -> Result<[(f64, [f64; 8]); 4]> {
    let mut out = [(0.0, [0.0; 8]); 4];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = corner_angle(q, i)?;
    }
    Ok(out)
}

fn corner_angle(q: &Quad, i: usize) -> Result<(f64, [f64; 8])> {
    let ip = (i + 3) % 4;
    let inx = (i + 1) % 4;
    let c = q.corners;
    if !c.iter().all(|p| p.is_finite()) {
        return Err(Error::NonFinite);
    }
    let to_prev = c[ip].sub(c[i]);
    let to_next = c[inx].sub(c[i]);
    let a = to_prev.norm();
    let b = to_next.norm();
    if a <= EPS || b <= EPS {
        return Err(Error::DegenerateSide { corner: i });
    }
    let d = c[ip].dist(c[inx]);
    let raw = (a * a + b * b - d * d) / (2.0 * a * b);
    let cos = raw.clamp(-COS_LIMIT, COS_LIMIT);
    let theta = cos.acos();

    // d(cos)/d(to_prev) and d(cos)/d(to_next); the cosine-rule quotient
    // equals to_prev·to_next / (a b), which gives these in closed form.
    let dcos_dprev = to_next
        .scale(1.0 / (a * b))
        .sub(to_prev.scale(cos / (a * a)));
    let dcos_dnext = to_prev
        .scale(1.0 / (a * b))
        .sub(to_next.scale(cos / (b * b)));
    let dtheta_dcos = -1.0 / (1.0 - cos * cos).sqrt();
    let k = dtheta_dcos.to_degrees();

    let mut g = [0.0; 8];
    let mut put = |idx: usize, v: Point2| {
        g[2 * idx] += k * v.x;
        g[2 * idx + 1] += k * v.y;
    };
    put(ip, dcos_dprev);
    put(inx, dcos_dnext);
    put(i, dcos_dprev.add(dcos_dnext).scale(-1.0));
    Ok((theta.to_degrees(), g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_is_all_right_angles() {
        let q = Quad::from_flat([0.0, 0.0, 4.0, 0.0, 4.0, 2.0, 0.0, 2.0]);
        let a = interior_angles(&q).unwrap();
        assert!(a.iter().all(|t| (t - 90.0).abs() < 1e-12), "{a:?}");
    }

    #[test]
    fn parallelogram() {
        let q = Quad::from_flat([0.0, 0.0, 2.0, 0.0, 3.0, 1.0, 1.0, 1.0]);
        let a = interior_angles(&q).unwrap();
        for (got, want) in a.iter().zip([45.0, 135.0, 45.0, 135.0]) {
            assert!((got - want).abs() < 1e-9, "{a:?}");
        }
    }

    #[test]
    fn angle_sum_is_full_turn() {
        let q = Quad::from_flat([0.0, 0.0, 2.0, 0.0, 3.0, 2.0, 0.0, 2.0]);
        let s: f64 = interior_angles(&q).unwrap().iter().sum();
        assert!((s - 360.0).abs() < 1e-6);
    }

    #[test]
    fn coincident_corners_error() {
        let q = Quad::from_flat([0.0, 0.0, 0.0, 0.0, 3.0, 2.0, 0.0, 2.0]);
        assert!(matches!(
            interior_angles(&q),
            Err(Error::DegenerateSide { corner: 0 })
        ));
    }
}
