//! Parameter grids: `start:stop:step` (endpoints inclusive within half a
//! step) or an explicit comma-separated list.

use std::fmt;
use std::str::FromStr;

const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    text: String,
    values: Vec<f64>,
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("malformed number '{}'", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite grid value '{}'", s.trim()))
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim().to_string();
        let values = if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            let [start, stop, step] = parts[..] else {
                return Err(format!("grid '{text}' must be start:stop:step"));
            };
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if !(step > 0.0) {
                return Err(format!("grid step must be > 0 in '{text}'"));
            }
            if stop < start {
                return Err(format!("grid stop is below start in '{text}'"));
            }
            let intervals = ((stop - start) / step + 0.5).floor();
            if intervals >= MAX_POINTS as f64 {
                return Err(format!("grid '{text}' has too many points"));
            }
            (0..=intervals as usize)
                .map(|i| start + step * i as f64)
                .collect()
        } else {
            text.split(',').map(number).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err("grid is empty".into());
        }
        if values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(format!("grid '{text}' is not strictly increasing"));
        }
        Ok(Grid { text, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_includes_endpoint() {
        let g: Grid = "0:4:0.1".parse().unwrap();
        assert_eq!(g.values().len(), 41);
        assert!((g.values()[40] - 4.0).abs() < 1e-12);
        let g: Grid = "0:1:0.3".parse().unwrap();
        assert_eq!(g.values(), &[0.0, 0.3, 0.6, 0.8999999999999999]);
        let g: Grid = "0:1.2:0.3".parse().unwrap();
        assert_eq!(g.values().len(), 5);
    }

    #[test]
    fn lists() {
        let g: Grid = "2, 100,1e6".parse().unwrap();
        assert_eq!(g.values(), &[2.0, 100.0, 1e6]);
        assert_eq!(g.as_str(), "2, 100,1e6");
    }

    #[test]
    fn rejects_bad_grids() {
        for bad in [
            "",
            "1:0:0.1",
            "0:1:0",
            "0:1",
            "a:1:0.1",
            "3,2",
            "1,1",
            "0:1:-1",
            "1,nan",
            "0:1e9:1e-3",
        ] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }
}
