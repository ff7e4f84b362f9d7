use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ApMode {
    /// Mean of the interpolated precision at recall 0, 0.1, ..., 1.0.
    #[default]
    ElevenPoint,
    /// Area under the monotone precision envelope.
    AllPoint,
}

impl ApMode {
    pub fn name(self) -> &'static str {
        match self {
            ApMode::ElevenPoint => "11pt",
            ApMode::AllPoint => "all",
        }
    }
}

/// VOC average precision of a precision/recall curve given as
/// `(recall, precision)` points with nondecreasing recall.
pub fn voc_ap(points: &[(f64, f64)], mode: ApMode) -> Result<f64> {
    if points.is_empty() {
        return Ok(0.0);
    }
    for (i, &(r, p)) in points.iter().enumerate() {
        if !(0.0..=1.0).contains(&r) || !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!(
                "point {i} ({r}, {p}) outside [0, 1]²"
            )));
        }
        if i > 0 && r < points[i - 1].0 {
            return Err(Error::invalid(format!("recall decreases at point {i}")));
        }
    }
    Ok(match mode {
        ApMode::ElevenPoint => {
            let sum: f64 = (0..=10)
                .map(|t| {
                    let thr = f64::from(t) / 10.0;
                    points
                        .iter()
                        .filter(|(r, _)| *r >= thr)
                        .map(|(_, p)| *p)
                        .fold(0.0, f64::max)
                })
                .sum();
            sum / 11.0
        }
        ApMode::AllPoint => {
            let mut rec = vec![0.0];
            let mut prec = vec![0.0];
            rec.extend(points.iter().map(|(r, _)| *r));
            prec.extend(points.iter().map(|(_, p)| *p));
            rec.push(1.0);
            prec.push(0.0);
            for i in (0..prec.len() - 1).rev() {
                prec[i] = prec[i].max(prec[i + 1]);
            }
            (1..rec.len())
                .filter(|&i| rec[i] != rec[i - 1])
                .map(|i| (rec[i] - rec[i - 1]) * prec[i])
                .sum()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_and_empty() {
        let perfect = [(0.5, 1.0), (1.0, 1.0)];
        assert_eq!(voc_ap(&perfect, ApMode::ElevenPoint).unwrap(), 1.0);
        assert_eq!(voc_ap(&perfect, ApMode::AllPoint).unwrap(), 1.0);
        assert_eq!(voc_ap(&[], ApMode::ElevenPoint).unwrap(), 0.0);
    }

    #[test]
    fn two_gt_fixture() {
        // TP 0.9, FP 0.8, TP 0.7 against 2 ground truths.
        let pts = [(0.5, 1.0), (0.5, 0.5), (1.0, 2.0 / 3.0)];
        let ap = voc_ap(&pts, ApMode::ElevenPoint).unwrap();
        assert!((ap - (6.0 + 5.0 * 2.0 / 3.0) / 11.0).abs() < 1e-15);
        assert!((ap - 0.848485).abs() < 1e-6);
        let all = voc_ap(&pts, ApMode::AllPoint).unwrap();
        assert!((all - (0.5 + 0.5 * 2.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn decreasing_recall_rejected() {
        assert!(voc_ap(&[(0.5, 1.0), (0.4, 1.0)], ApMode::ElevenPoint).is_err());
    }
}
