//! Parameter axes and order-preserving grid evaluation.
//!
//! With the `parallel` feature (on by default) grids are evaluated on the
//! rayon pool; without it, or with [`Exec::Sequential`], they run on the
//! calling thread. Results are identical and come back in grid order either
//! way.

use crate::error::{Result, ZenoError};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Point placement along an axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Closed sample range `[min, max]` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize, spacing: Spacing) -> Result<Self> {
        let axis = Self {
            min,
            max,
            steps,
            spacing,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn linear(min: f64, max: f64, steps: usize) -> Result<Self> {
        Self::new(min, max, steps, Spacing::Linear)
    }

    pub fn log(min: f64, max: f64, steps: usize) -> Result<Self> {
        Self::new(min, max, steps, Spacing::Log)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(ZenoError::InvalidParameter("axis bounds must be finite".into()));
        }
        if self.steps < 2 {
            return Err(ZenoError::InvalidParameter(format!(
                "axis needs at least 2 steps, got {}",
                self.steps
            )));
        }
        if self.max < self.min {
            return Err(ZenoError::InvalidParameter(format!(
                "axis max {} is below min {}",
                self.max, self.min
            )));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(ZenoError::InvalidParameter("log-spaced axis needs min > 0".into()));
        }
        Ok(())
    }

    /// `i`-th sample; the end points are hit exactly.
    pub fn value(&self, i: usize) -> f64 {
        let last = self.steps - 1;
        if i == 0 {
            return self.min;
        }
        if i >= last {
            return self.max;
        }
        let f = i as f64 / last as f64;
        match self.spacing {
            Spacing::Linear => self.min + f * (self.max - self.min),
            Spacing::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

/// Evaluation strategy for grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this strategy actually runs on the thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// `f(i, &items[i])` for every item, results in input order.
pub fn map_indexed<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let _ = exec;
    items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

/// Row-major evaluation of `f(outer, inner)`; the outer axis varies slowest.
/// Rows are the unit of parallel work.
pub fn grid_map<R, F>(exec: Exec, outer: &Axis, inner: &Axis, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(f64, f64) -> R + Sync + Send,
{
    let xs = outer.values();
    let ys = inner.values();
    let rows: Vec<Vec<R>> = map_indexed(exec, &xs, |_, &x| ys.iter().map(|&y| f(x, y)).collect());
    rows.into_iter().flatten().collect()
}

/// Fallible variant of [`grid_map`]; the first error in grid order wins.
pub fn try_grid_map<R, F>(exec: Exec, outer: &Axis, inner: &Axis, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(f64, f64) -> Result<R> + Sync + Send,
{
    grid_map(exec, outer, inner, f).into_iter().collect()
}
