use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::{FuzzyError, Result};

/// A point of `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(FuzzyError::EmptyPoint);
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(FuzzyError::NonFiniteCoordinate { index, value });
        }
        Ok(Point(coords))
    }

    pub fn xy(x: f64, y: f64) -> Result<Self> {
        Point::new(vec![x, y])
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(FuzzyError::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }

    pub fn scaled(&self, a: f64) -> Result<Point> {
        Point::new(self.0.iter().map(|c| a * c).collect())
    }

    pub fn zip_with(&self, other: &Point, f: impl Fn(f64, f64) -> f64) -> Result<Point> {
        other.ensure_dim(self.dim())?;
        Point::new(self.0.iter().zip(&other.0).map(|(a, b)| f(*a, *b)).collect())
    }

    /// Componentwise maximum distance.
    pub fn distance_inf(&self, other: &Point) -> Result<f64> {
        other.ensure_dim(self.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Componentwise closeness with tolerance `tol · max(1, |c|)`.
    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(a, b)| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0))
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = FuzzyError;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert_eq!(Point::new(vec![]), Err(FuzzyError::EmptyPoint));
        assert!(matches!(
            Point::new(vec![0.0, f64::NAN]),
            Err(FuzzyError::NonFiniteCoordinate { index: 1, .. })
        ));
        assert!(Point::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn serde_is_a_plain_array() {
        let p = Point::xy(0.0, 1.5).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[0.0,1.5]");
        let back: Point = serde_json::from_str("[0,1.5]").unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Point>("[]").is_err());
    }

    #[test]
    fn distance_checks_dimension() {
        let a = Point::xy(1.0, 2.0).unwrap();
        let b = Point::new(vec![1.0]).unwrap();
        assert!(a.distance_inf(&b).is_err());
        assert_eq!(a.distance_inf(&Point::xy(0.0, 5.0).unwrap()).unwrap(), 3.0);
    }
}
