//! Small fixed-capacity vectors for points and covectors in dimension 1 or 2.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};

/// Largest spatial dimension handled by the library.
pub const MAX_DIM: usize = 2;

/// A point of `R^d` or a covector, `d ∈ {1, 2}`. Copyable and allocation free.
#[derive(Clone, Copy, PartialEq)]
pub struct Vector {
    len: u8,
    data: [f64; MAX_DIM],
}

impl Vector {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(invalid(format!(
                "vectors must have 1 or 2 coordinates, got {}",
                coords.len()
            )));
        }
        let mut data = [0.0; MAX_DIM];
        data[..coords.len()].copy_from_slice(coords);
        Ok(Self {
            len: coords.len() as u8,
            data,
        })
    }

    pub fn d1(x: f64) -> Self {
        Self {
            len: 1,
            data: [x, 0.0],
        }
    }

    pub fn d2(x: f64, y: f64) -> Self {
        Self {
            len: 2,
            data: [x, y],
        }
    }

    /// Zero vector of dimension `dim` (panics outside 1..=2).
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "unsupported dimension {dim}");
        Self {
            len: dim as u8,
            data: [0.0; MAX_DIM],
        }
    }

    /// Unit vector along `axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[axis] = 1.0;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data[..self.len as usize]
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.as_slice()[i]
    }

    pub fn with(mut self, i: usize, value: f64) -> Self {
        assert!(i < self.dim());
        self.data[i] = value;
        self
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.len, other.len);
        self.data[0] * other.data[0] + self.data[1] * other.data[1]
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|c| c.is_finite())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl Add for Vector {
    type Output = Vector;
    #[inline]
    fn add(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.len, rhs.len);
        Vector {
            len: self.len,
            data: [self.data[0] + rhs.data[0], self.data[1] + rhs.data[1]],
        }
    }
}

impl Sub for Vector {
    type Output = Vector;
    #[inline]
    fn sub(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.len, rhs.len);
        Vector {
            len: self.len,
            data: [self.data[0] - rhs.data[0], self.data[1] - rhs.data[1]],
        }
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    #[inline]
    fn mul(self, s: f64) -> Vector {
        Vector {
            len: self.len,
            data: [self.data[0] * s, self.data[1] * s],
        }
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self * -1.0
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_slice().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(deserializer)?;
        Vector::new(&coords).map_err(serde::de::Error::custom)
    }
}
