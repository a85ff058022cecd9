//! Parsing helpers for the command line: complex literals and sweep ranges.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Parse a complex literal in the `a+bi` form with no spaces: `0+100i`,
/// `1.5-2e-3i`, `-3i`, `2.5`. The imaginary part, when present, must end in
/// `i` and carry explicit digits.
pub fn parse_complex(token: &str) -> Result<C64> {
    let bad = || Error::invalid("complex literal", format!("`{token}`"));
    let t = token.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(bad());
    }
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // split at the last sign that is not a leading sign and not part of
        // an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = body[..k].parse().map_err(|_| bad())?;
                let im: f64 = body[k..].parse().map_err(|_| bad())?;
                Ok(C64::new(re, im))
            }
            None => {
                let im: f64 = body.parse().map_err(|_| bad())?;
                Ok(C64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        Ok(C64::new(re, 0.0))
    }
}

/// Canonical `a+bi` rendering at 17 significant digits.
pub fn format_complex(z: C64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

/// A swept parameter: either a single value or `start:stop:count` with
/// `count` evenly spaced values, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn single(v: f64) -> Self {
        Range {
            start: v,
            stop: v,
            count: 1,
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        let bad = || Error::invalid("range", format!("`{token}` (expected `value` or `start:stop:count`)"));
        let parts: Vec<&str> = token.split(':').collect();
        match parts.as_slice() {
            [v] => {
                let v: f64 = v.parse().map_err(|_| bad())?;
                Ok(Range::single(v))
            }
            [start, stop, count] => {
                let start: f64 = start.parse().map_err(|_| bad())?;
                let stop: f64 = stop.parse().map_err(|_| bad())?;
                let count: usize = count.parse().map_err(|_| bad())?;
                if count == 0 || !start.is_finite() || !stop.is_finite() {
                    return Err(bad());
                }
                Ok(Range { start, stop, count })
            }
            _ => Err(bad()),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|k| self.start + (self.stop - self.start) * k as f64 / (self.count - 1) as f64)
            .collect()
    }
}

/// Parse a comma-separated list of complex literals.
pub fn parse_complex_list(token: &str) -> Result<Vec<C64>> {
    token.split(',').map(parse_complex).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0+100i").unwrap(), C64::new(0.0, 100.0));
        assert_eq!(parse_complex("1.5-2e-3i").unwrap(), C64::new(1.5, -2e-3));
        assert_eq!(parse_complex("-3i").unwrap(), C64::new(0.0, -3.0));
        assert_eq!(parse_complex("2.5").unwrap(), C64::new(2.5, 0.0));
        assert_eq!(parse_complex("-1e2+0.5i").unwrap(), C64::new(-100.0, 0.5));
        for bad in ["", "i", "1+i", "1 + 2i", "abc", "1+2j"] {
            let err = parse_complex(bad);
            assert!(err.is_err(), "`{bad}` should not parse");
            assert!(format!("{}", err.unwrap_err()).contains(bad.trim()));
        }
    }

    #[test]
    fn complex_round_trip_through_the_canonical_format() {
        let z = C64::new(-0.12345678901234568, 98.7654321);
        let s = format_complex(z);
        assert_eq!(parse_complex(&s).unwrap(), z);
    }

    #[test]
    fn ranges() {
        assert_eq!(Range::parse("0.02").unwrap().values(), vec![0.02]);
        let r = Range::parse("0:0.002:5").unwrap();
        let vals = r.values();
        assert_eq!(vals.len(), 5);
        assert_eq!(vals[0], 0.0);
        assert!((vals[4] - 0.002).abs() < 1e-18);
        assert!((vals[1] - 0.0005).abs() < 1e-18);
        assert!(Range::parse("0:1:0").is_err());
        assert!(Range::parse("0:1").is_err());
        assert!(Range::parse("x:1:3").is_err());
    }
}
