//! Rectangular space grids. Node `(i0, i1)` has flat index `i0 * count1 + i1`
//! (last axis fastest).

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::vector::{Vector, MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let axis = Self { min, max, count };
        axis.validate()?;
        Ok(axis)
    }

    fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(invalid(format!(
                "axis needs at least 2 nodes, got {}",
                self.count
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.max > self.min) {
            return Err(invalid(format!(
                "axis range [{}, {}] is empty or not finite",
                self.min, self.max
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    #[inline]
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > MAX_DIM {
            return Err(invalid(format!(
                "grids must have 1 or 2 axes, got {}",
                axes.len()
            )));
        }
        for axis in &axes {
            axis.validate()?;
        }
        Ok(Self { axes })
    }

    pub fn line(min: f64, max: f64, count: usize) -> Result<Self> {
        Self::new(vec![Axis::new(min, max, count)?])
    }

    pub fn rect(x: (f64, f64, usize), y: (f64, f64, usize)) -> Result<Self> {
        Self::new(vec![Axis::new(x.0, x.1, x.2)?, Axis::new(y.0, y.1, y.2)?])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> [usize; MAX_DIM] {
        let mut s = [1; MAX_DIM];
        for (k, a) in self.axes.iter().enumerate() {
            s[k] = a.count;
        }
        s
    }

    /// Multi-index of a flat node index.
    pub fn unflatten(&self, index: usize) -> [usize; MAX_DIM] {
        match self.dim() {
            1 => [index, 0],
            _ => {
                let n1 = self.axes[1].count;
                [index / n1, index % n1]
            }
        }
    }

    pub fn flatten(&self, multi: [usize; MAX_DIM]) -> usize {
        match self.dim() {
            1 => multi[0],
            _ => multi[0] * self.axes[1].count + multi[1],
        }
    }

    pub fn node(&self, index: usize) -> Vector {
        let m = self.unflatten(index);
        match self.dim() {
            1 => Vector::d1(self.axes[0].value(m[0])),
            _ => Vector::d2(self.axes[0].value(m[0]), self.axes[1].value(m[1])),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = Vector> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }

    pub fn max_spacing(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).fold(0.0, f64::max)
    }

    /// Lower and upper corners.
    pub fn bounds(&self) -> (Vector, Vector) {
        let lo: Vec<f64> = self.axes.iter().map(|a| a.min).collect();
        let hi: Vec<f64> = self.axes.iter().map(|a| a.max).collect();
        (Vector::new(&lo).unwrap(), Vector::new(&hi).unwrap())
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.axes
            .iter()
            .enumerate()
            .all(|(k, a)| x[k] >= a.min && x[k] <= a.max)
    }

    /// Grid with the same spacing extended by at least `margin` on every side.
    /// Returns the new grid and the multi-index offset of the original origin.
    pub fn expanded(&self, margin: f64) -> (Grid, [usize; MAX_DIM]) {
        let mut offset = [0; MAX_DIM];
        let axes = self
            .axes
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let h = a.spacing();
                let extra = if margin > 0.0 {
                    (margin / h).ceil() as usize
                } else {
                    0
                };
                offset[k] = extra;
                Axis {
                    min: a.min - extra as f64 * h,
                    max: a.max + extra as f64 * h,
                    count: a.count + 2 * extra,
                }
            })
            .collect();
        (Grid { axes }, offset)
    }

    /// Flat indices in `self` of the nodes of `inner`, given the offset returned
    /// by [`Grid::expanded`].
    pub fn sub_indices(&self, inner: &Grid, offset: [usize; MAX_DIM]) -> Vec<usize> {
        (0..inner.len())
            .map(|i| {
                let m = inner.unflatten(i);
                self.flatten([m[0] + offset[0], m[1] + offset[1]])
            })
            .collect()
    }

    /// Multilinear interpolation of nodal `values` at `x` (clamped to the box).
    pub fn interpolate(&self, values: &[f64], x: &Vector) -> f64 {
        let locate = |a: &Axis, v: f64| -> (usize, f64) {
            let s = ((v - a.min) / a.spacing()).clamp(0.0, (a.count - 1) as f64);
            let i = (s.floor() as usize).min(a.count - 2);
            (i, s - i as f64)
        };
        match self.dim() {
            1 => {
                let (i, w) = locate(&self.axes[0], x[0]);
                values[i] * (1.0 - w) + values[i + 1] * w
            }
            _ => {
                let (i, wx) = locate(&self.axes[0], x[0]);
                let (j, wy) = locate(&self.axes[1], x[1]);
                let v = |a: usize, b: usize| values[self.flatten([a, b])];
                v(i, j) * (1.0 - wx) * (1.0 - wy)
                    + v(i + 1, j) * wx * (1.0 - wy)
                    + v(i, j + 1) * (1.0 - wx) * wy
                    + v(i + 1, j + 1) * wx * wy
            }
        }
    }
}
