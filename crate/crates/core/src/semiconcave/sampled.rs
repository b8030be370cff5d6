use std::path::Path;

use super::family::SuperdifferentiableFn;
use crate::error::{invalid, Result};
use crate::vector::Vector;

/// Bounds applied to semi-concavity and Lipschitz estimates from samples.
pub const ESTIMATE_MIN: f64 = 1e-6;
pub const ESTIMATE_MAX: f64 = 1e3;

/// Grid-sampled function of one variable, linearly interpolated and linearly
/// extrapolated with the end slopes.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFn1d {
    xs: Vec<f64>,
    us: Vec<f64>,
}

impl SampledFn1d {
    pub fn new(xs: Vec<f64>, us: Vec<f64>) -> Result<Self> {
        if xs.len() != us.len() || xs.len() < 2 {
            return Err(invalid("sampled data needs at least two (x, u) pairs"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("sample abscissae must be strictly increasing"));
        }
        if xs.iter().chain(&us).any(|v| !v.is_finite()) {
            return Err(invalid("sampled data must be finite"));
        }
        Ok(Self { xs, us })
    }

    /// Reads two-column CSV `x,u` (a non-numeric header row is skipped).
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)?;
        let (mut xs, mut us) = (Vec::new(), Vec::new());
        for (row, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() < 2 {
                return Err(invalid(format!("row {row}: expected two columns")));
            }
            match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
                (Ok(x), Ok(u)) => {
                    xs.push(x);
                    us.push(u);
                }
                _ if row == 0 => continue,
                _ => return Err(invalid(format!("row {row}: not a number"))),
            }
        }
        Self::new(xs, us)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn us(&self) -> &[f64] {
        &self.us
    }

    fn slope(&self, i: usize) -> f64 {
        (self.us[i + 1] - self.us[i]) / (self.xs[i + 1] - self.xs[i])
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.xs.len();
        self.xs
            .partition_point(|&v| v <= x)
            .saturating_sub(1)
            .min(n - 2)
    }

    /// Index of the node at `x`, if any.
    fn node_at(&self, x: f64) -> Option<usize> {
        let i = self.xs.partition_point(|&v| v < x);
        let tol = 1e-12 * (1.0 + x.abs());
        [i.wrapping_sub(1), i]
            .into_iter()
            .find(|&j| j < self.xs.len() && (self.xs[j] - x).abs() <= tol)
    }

    /// Largest positive second difference, clamped to `[ESTIMATE_MIN, ESTIMATE_MAX]`.
    pub fn estimate_semiconcavity(&self) -> f64 {
        let mut b: f64 = 0.0;
        for i in 1..self.xs.len() - 1 {
            let h = 0.5 * (self.xs[i + 1] - self.xs[i - 1]);
            b = b.max((self.slope(i) - self.slope(i - 1)) / h);
        }
        b.clamp(ESTIMATE_MIN, ESTIMATE_MAX)
    }

    /// Largest absolute slope, clamped to `[ESTIMATE_MIN, ESTIMATE_MAX]`.
    pub fn estimate_lipschitz(&self) -> f64 {
        (0..self.xs.len() - 1)
            .map(|i| self.slope(i).abs())
            .fold(0.0, f64::max)
            .clamp(ESTIMATE_MIN, ESTIMATE_MAX)
    }

    /// Smallest and largest slope.
    pub fn slope_range(&self) -> (f64, f64) {
        (0..self.xs.len() - 1)
            .map(|i| self.slope(i))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s), hi.max(s))
            })
    }
}

impl SuperdifferentiableFn for SampledFn1d {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: &Vector) -> f64 {
        let x = x[0];
        let i = self.segment(x);
        self.us[i] + self.slope(i) * (x - self.xs[i])
    }

    /// At a node: the right slope, the left slope and their midpoint. Between
    /// nodes: the segment slope.
    fn supergradients(&self, x: &Vector) -> Vec<Vector> {
        let last = self.xs.len() - 1;
        match self.node_at(x[0]) {
            Some(i) if i > 0 && i < last => {
                let (right, left) = (self.slope(i), self.slope(i - 1));
                if (right - left).abs() <= 1e-14 * (1.0 + left.abs()) {
                    vec![Vector::d1(left)]
                } else {
                    vec![
                        Vector::d1(right),
                        Vector::d1(left),
                        Vector::d1(0.5 * (left + right)),
                    ]
                }
            }
            Some(0) => vec![Vector::d1(self.slope(0))],
            Some(_) => vec![Vector::d1(self.slope(last - 1))],
            None => vec![Vector::d1(self.slope(self.segment(x[0])))],
        }
    }

    fn semiconcavity(&self) -> f64 {
        self.estimate_semiconcavity()
    }

    fn lipschitz(&self) -> f64 {
        self.estimate_lipschitz()
    }
}
