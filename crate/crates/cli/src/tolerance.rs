//! Theory-vs-simulation tolerances, written `rel:<bound>`, `abs:<bound>`,
//! or `rel:<bound>:<floor>` to skip rows whose theory value is below `floor`
//! in magnitude.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ToleranceKind {
    Relative,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub kind: ToleranceKind,
    pub bound: f64,
    pub floor: f64,
}

impl Tolerance {
    /// Discrepancy of `measured` from `theory` in this tolerance's units, or
    /// `None` when the row is exempt. Non-finite inputs yield infinity.
    pub fn error(&self, theory: f64, measured: f64) -> Option<f64> {
        if theory.abs() < self.floor {
            return None;
        }
        if !(theory.is_finite() && measured.is_finite()) {
            return Some(f64::INFINITY);
        }
        let gap = (measured - theory).abs();
        Some(match self.kind {
            ToleranceKind::Absolute => gap,
            ToleranceKind::Relative if gap == 0.0 => 0.0,
            ToleranceKind::Relative => gap / theory.abs(),
        })
    }
}

impl FromStr for Tolerance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let kind = match parts[0] {
            "rel" => ToleranceKind::Relative,
            "abs" => ToleranceKind::Absolute,
            other => return Err(format!("unknown tolerance kind `{other}` (rel, abs)")),
        };
        let number = |text: &str, what: &str| -> Result<f64, String> {
            let v: f64 = text.parse().map_err(|_| format!("{what} `{text}` is not a number"))?;
            if v.is_finite() && v >= 0.0 {
                Ok(v)
            } else {
                Err(format!("{what} must be finite and non-negative"))
            }
        };
        match parts.len() {
            2 => Ok(Tolerance {
                kind,
                bound: number(parts[1], "bound")?,
                floor: 0.0,
            }),
            3 => Ok(Tolerance {
                kind,
                bound: number(parts[1], "bound")?,
                floor: number(parts[2], "floor")?,
            }),
            _ => Err(format!("expected `rel:<bound>[:<floor>]` or `abs:<bound>[:<floor>]`, got `{s}`")),
        }
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ToleranceKind::Relative => "rel",
            ToleranceKind::Absolute => "abs",
        };
        if self.floor > 0.0 {
            write!(f, "{kind}:{}:{}", self.bound, self.floor)
        } else {
            write!(f, "{kind}:{}", self.bound)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        for text in ["rel:0.05", "abs:0.02", "rel:0.1:0.01", "abs:0"] {
            assert_eq!(text.parse::<Tolerance>().unwrap().to_string(), text);
        }
        for bad in ["rel", "sq:0.1", "rel:x", "rel:-1", "rel:1:2:3"] {
            assert!(bad.parse::<Tolerance>().is_err(), "{bad}");
        }
    }

    #[test]
    fn errors() {
        let rel: Tolerance = "rel:0.05".parse().unwrap();
        assert!((rel.error(2.0, 2.1).unwrap() - 0.05).abs() < 1e-12);
        assert_eq!(rel.error(0.0, 0.0), Some(0.0));
        assert_eq!(rel.error(1.0, f64::NAN), Some(f64::INFINITY));
        let floored: Tolerance = "rel:0.1:0.01".parse().unwrap();
        assert_eq!(floored.error(0.001, 5.0), None);
        let abs: Tolerance = "abs:0.02".parse().unwrap();
        assert_eq!(abs.error(0.5, 0.25), Some(0.25));
    }
}
