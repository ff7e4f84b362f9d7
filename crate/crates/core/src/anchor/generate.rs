use std::ops::RangeInclusive;

use super::ShapePrior;
use crate::error::{Error, Result};
use crate::geom::RRect;

/// Anchor orientations in degrees.
pub const ORIENTATIONS: [f64; 4] = [0.0, 45.0, 90.0, 135.0];

/// Default number of clustered shape priors.
pub const DEFAULT_PRIOR_COUNT: usize = 18;

/// Pyramid levels P2..P6.
pub const LEVELS: RangeInclusive<u8> = 2..=6;

/// Stride of pyramid level `level` in pixels: 4, 8, 16, 32, 64 for P2..P6.
pub fn level_stride(level: u8) -> Result<f64> {
    if !LEVELS.contains(&level) {
        return Err(Error::invalid(format!(
            "pyramid level {level} outside P2..P6"
        )));
    }
    Ok(f64::from(1u32 << level))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anchor {
    pub geometry: RRect,
    pub level: u8,
    pub orientation: f64,
}

/// Assigns each prior to the level whose reference area `(8·stride)²` is
/// nearest to the prior's area; ties go to the lower level.
pub fn assign_priors_to_levels(
    priors: &[ShapePrior],
    levels: &[u8],
) -> Result<Vec<(u8, Vec<ShapePrior>)>> {
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    levels.dedup();
    if levels.is_empty() {
        return Err(Error::invalid("no pyramid levels given"));
    }
    let mut out: Vec<(u8, Vec<ShapePrior>)> = levels.iter().map(|&l| (l, Vec::new())).collect();
    for p in priors {
        let mut best = 0;
        let mut best_gap = f64::INFINITY;
        for (i, &l) in levels.iter().enumerate() {
            let reference = (8.0 * level_stride(l)?).powi(2);
            let gap = (p.area() - reference).abs();
            if gap < best_gap {
                best = i;
                best_gap = gap;
            }
        }
        out[best].1.push(*p);
    }
    Ok(out)
}

/// Places anchors at every stride-spaced cell center of every level, one
/// per assigned prior and orientation.
///
/// Order: level, row, column, prior, orientation.
pub fn generate_anchors(
    image_w: u32,
    image_h: u32,
    priors: &[ShapePrior],
    levels: &[u8],
) -> Result<Vec<Anchor>> {
    if image_w == 0 || image_h == 0 {
        return Err(Error::invalid("image has zero size"));
    }
    if priors.is_empty() {
        return Err(Error::invalid("no shape priors"));
    }
    if priors.iter().any(|p| !(p.w > 0.0 && p.h > 0.0)) {
        return Err(Error::invalid("shape priors must have positive sides"));
    }
    let mut anchors = Vec::new();
    for (level, assigned) in assign_priors_to_levels(priors, levels)? {
        if assigned.is_empty() {
            continue;
        }
        let stride = level_stride(level)?;
        let cols = (f64::from(image_w) / stride).ceil() as u32;
        let rows = (f64::from(image_h) / stride).ceil() as u32;
        for r in 0..rows {
            let cy = (f64::from(r) + 0.5) * stride;
            for c in 0..cols {
                let cx = (f64::from(c) + 0.5) * stride;
                for p in &assigned {
                    for &orientation in &ORIENTATIONS {
                        anchors.push(Anchor {
                            geometry: RRect::new(cx, cy, p.w, p.h, orientation)?,
                            level,
                            orientation,
                        });
                    }
                }
            }
        }
    }
    Ok(anchors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strides() {
        let s: Vec<f64> = LEVELS.map(|l| level_stride(l).unwrap()).collect();
        assert_eq!(s, vec![4.0, 8.0, 16.0, 32.0, 64.0]);
        assert!(level_stride(1).is_err());
    }

    #[test]
    fn single_cell_gives_one_anchor_per_orientation() {
        let a = generate_anchors(64, 64, &[ShapePrior::new(300.0, 200.0)], &[6]).unwrap();
        assert_eq!(a.len(), 4);
        let orients: Vec<f64> = a.iter().map(|x| x.orientation).collect();
        assert_eq!(orients, ORIENTATIONS.to_vec());
        assert!(a
            .iter()
            .all(|x| x.geometry.cx == 32.0 && x.geometry.cy == 32.0));
    }

    #[test]
    fn eighteen_priors_make_seventy_two_per_location() {
        let priors: Vec<ShapePrior> = (0..DEFAULT_PRIOR_COUNT)
            .map(|i| ShapePrior::new(8.0 * 1.3f64.powi(i as i32), 6.0 * 1.25f64.powi(i as i32)))
            .collect();
        let levels: Vec<u8> = LEVELS.collect();
        let per_level = assign_priors_to_levels(&priors, &levels).unwrap();
        let total: usize = per_level
            .iter()
            .map(|(_, p)| p.len() * ORIENTATIONS.len())
            .sum();
        assert_eq!(total, 72);
    }

    #[test]
    fn level_tie_goes_low() {
        // Exactly between 32² and 64² reference areas.
        let mid = 0.5 * (1024.0 + 4096.0);
        let p = ShapePrior::new(mid, 1.0);
        let a = assign_priors_to_levels(&[p], &[2, 3]).unwrap();
        assert_eq!(a[0].1.len(), 1);
    }

    #[test]
    fn zero_image_errors() {
        assert!(generate_anchors(0, 10, &[ShapePrior::new(1.0, 1.0)], &[2]).is_err());
    }
}
