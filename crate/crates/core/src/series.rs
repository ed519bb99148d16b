//! Laurent polynomials in `T` with non-negative integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Series {
    coeffs: BTreeMap<i64, usize>,
}

impl Series {
    pub fn new() -> Series {
        Series::default()
    }

    pub fn from_map(coeffs: BTreeMap<i64, usize>) -> Series {
        let coeffs = coeffs.into_iter().filter(|(_, c)| *c != 0).collect();
        Series { coeffs }
    }

    pub fn add_to(&mut self, degree: i64, c: usize) {
        if c > 0 {
            *self.coeffs.entry(degree).or_insert(0) += c;
        }
    }

    pub fn get(&self, degree: i64) -> usize {
        self.coeffs.get(&degree).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.coeffs.values().sum()
    }

    pub fn nonneg_total(&self) -> usize {
        self.coeffs.range(0..).map(|(_, c)| c).sum()
    }

    pub fn negative_total(&self) -> usize {
        self.coeffs.range(..0).map(|(_, c)| c).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.coeffs.iter().map(|(d, c)| (*d, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Parses strings such as `4T^-1+98+84T+32T^2`.
    pub fn parse(text: &str) -> Option<Series> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if text == "0" {
            return Some(Series::new());
        }
        let mut s = Series::new();
        for part in text.split('+') {
            let (coef, deg) = match part.find('T') {
                None => (part, 0),
                Some(pos) => {
                    let rest = &part[pos + 1..];
                    let deg = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')?.parse().ok()?
                    };
                    (&part[..pos], deg)
                }
            };
            let c = if coef.is_empty() { 1 } else { coef.parse().ok()? };
            s.add_to(deg, c);
        }
        Some(s)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (d, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            match (*d, *c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, c) => write!(f, "{c}T")?,
                (d, 1) => write!(f, "T^{d}")?,
                (d, c) => write!(f, "{c}T^{d}")?,
            }
        }
        Ok(())
    }
}
