use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or vector) in R^d with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("a point needs at least one coordinate".into()));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coordinate {c}")));
        }
        Ok(Point(coords))
    }

    /// Planar point. Coordinates are expected to be finite.
    pub fn xy(x: f64, y: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite());
        Point(vec![x, y])
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.distance_sq(other).sqrt()
    }

    pub fn distance_sq(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    /// `self + s * dir`
    pub fn add_scaled(&self, dir: &Point, s: f64) -> Point {
        Point(self.0.iter().zip(&dir.0).map(|(a, b)| a + s * b).collect())
    }

    /// Unit vector in the same direction. The zero vector is returned as is.
    pub fn normalized(&self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scaled(1.0 / n)
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.0
    }
}
