use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A highest weight: an ordered tuple of coordinates that are either all
/// integers or all half-odd-integers. Stored as doubled integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Weight {
    twice: Vec<i64>,
}

impl Weight {
    pub fn from_twice(twice: Vec<i64>) -> Result<Self> {
        if twice.is_empty() {
            return Err(Error::invalid("weight must have rank >= 1"));
        }
        let parity = twice[0].rem_euclid(2);
        if twice.iter().any(|t| t.rem_euclid(2) != parity) {
            return Err(Error::invalid(format!(
                "weight coordinates {} mix integers and half-integers",
                fmt_coords(&twice)
            )));
        }
        Ok(Self { twice })
    }

    pub fn new(coords: &[f64]) -> Result<Self> {
        let mut twice = Vec::with_capacity(coords.len());
        for &c in coords {
            let t = 2.0 * c;
            if !t.is_finite() || t.fract() != 0.0 || t.abs() > 1e15 {
                return Err(Error::invalid(format!(
                    "weight coordinate {c} is not an integer or half-integer"
                )));
            }
            twice.push(t as i64);
        }
        Self::from_twice(twice)
    }

    /// Parses `"1,0"`, `"1/2,-1/2"` or `"0.5, -0.5"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut coords = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let value = match part.split_once('/') {
                Some((num, den)) => {
                    let num: f64 = num.trim().parse().map_err(|_| bad_coord(part))?;
                    let den: f64 = den.trim().parse().map_err(|_| bad_coord(part))?;
                    if den != 1.0 && den != 2.0 {
                        return Err(bad_coord(part));
                    }
                    num / den
                }
                None => part.parse().map_err(|_| bad_coord(part))?,
            };
            coords.push(value);
        }
        Self::new(&coords)
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            twice: vec![0; rank.max(1)],
        }
    }

    pub fn rank(&self) -> usize {
        self.twice.len()
    }

    /// Coordinates multiplied by two.
    pub fn twice(&self) -> &[i64] {
        &self.twice
    }

    pub fn coords(&self) -> Vec<f64> {
        self.twice.iter().map(|&t| t as f64 / 2.0).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.twice[0].rem_euclid(2) == 0
    }

    pub fn is_zero(&self) -> bool {
        self.twice.iter().all(|&t| t == 0)
    }

    /// `nu_1 >= ... >= nu_{n-1} >= |nu_n|`.
    pub fn is_m_dominant(&self) -> bool {
        let n = self.rank();
        self.twice[..n - 1].windows(2).all(|w| w[0] >= w[1])
            && (n == 1 || self.twice[n - 2] >= self.twice[n - 1].abs())
    }

    /// `nu_1 >= ... >= nu_n >= 0`.
    pub fn is_k_dominant(&self) -> bool {
        self.twice.windows(2).all(|w| w[0] >= w[1]) && *self.twice.last().unwrap() >= 0
    }

    pub fn ensure_m_dominant(&self) -> Result<()> {
        if self.is_m_dominant() {
            Ok(())
        } else {
            Err(Error::invalid(format!("{self} is not a dominant M-weight")))
        }
    }

    pub fn ensure_k_dominant(&self) -> Result<()> {
        if self.is_k_dominant() {
            Ok(())
        } else {
            Err(Error::invalid(format!("{self} is not a dominant K-weight")))
        }
    }

    /// Sum of absolute coordinates, doubled.
    pub(crate) fn height_twice(&self) -> i64 {
        self.twice.iter().map(|t| t.abs()).sum()
    }
}

fn bad_coord(part: &str) -> Error {
    Error::invalid(format!("cannot read weight coordinate {part:?}"))
}

fn fmt_coords(twice: &[i64]) -> String {
    let parts: Vec<String> = twice
        .iter()
        .map(|&t| if t % 2 == 0 { format!("{}", t / 2) } else { format!("{t}/2") })
        .collect();
    format!("({})", parts.join(", "))
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_coords(&self.twice))
    }
}

impl TryFrom<Vec<f64>> for Weight {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Weight::new(&v)
    }
}

impl From<Weight> for Vec<f64> {
    fn from(w: Weight) -> Self {
        w.coords()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms_agree() {
        let a = Weight::parse("1/2, -1/2").unwrap();
        let b = Weight::parse("0.5,-0.5").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.twice(), &[1, -1]);
        assert_eq!(a.to_string(), "(1/2, -1/2)");
    }

    #[test]
    fn mixed_integrality_rejected() {
        assert!(Weight::new(&[1.0, 0.5]).is_err());
        assert!(Weight::parse("1,1/2").is_err());
        assert!(Weight::new(&[0.25]).is_err());
    }

    #[test]
    fn dominance() {
        assert!(Weight::new(&[1.0, -1.0]).unwrap().is_m_dominant());
        assert!(!Weight::new(&[1.0, -1.0]).unwrap().is_k_dominant());
        assert!(!Weight::new(&[0.0, 1.0]).unwrap().is_m_dominant());
        // rank one: D_1 imposes nothing, B_1 needs nu >= 0
        assert!(Weight::new(&[-3.0]).unwrap().is_m_dominant());
        assert!(!Weight::new(&[-3.0]).unwrap().is_k_dominant());
    }

    #[test]
    fn serde_as_float_list() {
        let w = Weight::parse("3/2,1/2").unwrap();
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(text, "[1.5,0.5]");
        assert_eq!(serde_json::from_str::<Weight>(&text).unwrap(), w);
    }
}
