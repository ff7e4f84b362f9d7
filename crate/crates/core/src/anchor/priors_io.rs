use super::ShapePrior;
use crate::error::{Error, Result};

pub const PRIORS_HEADER: &str = "# rboxkit-priors v1";

/// One `w h` line per prior after the header. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_priors(priors: &[ShapePrior]) -> String {
    let mut s = String::from(PRIORS_HEADER);
    s.push('\n');
    for p in priors {
        s.push_str(&format!("{} {}\n", p.w, p.h));
    }
    s
}

pub fn read_priors(text: &str) -> Result<Vec<ShapePrior>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == PRIORS_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header '{PRIORS_HEADER}'"),
            })
        }
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(format!("expected 'w h', got {} fields", fields.len())));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| err(format!("invalid number '{s}'")))
        };
        let (w, h) = (num(fields[0])?, num(fields[1])?);
        if !(w > 0.0 && h > 0.0 && w.is_finite() && h.is_finite()) {
            return Err(err("prior sides must be positive".into()));
        }
        out.push(ShapePrior::new(w, h));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let p = vec![ShapePrior::new(12.5, 3.0), ShapePrior::new(0.1 + 0.2, 1e-3)];
        let text = write_priors(&p);
        assert!(text.starts_with("# rboxkit-priors v1\n12.5 3\n"));
        assert_eq!(read_priors(&text).unwrap(), p);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = read_priors("# rboxkit-priors v1\n1 2\n3 x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        assert!(read_priors("1 2\n").is_err());
    }
}
