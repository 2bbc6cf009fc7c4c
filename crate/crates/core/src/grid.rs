use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Uniform grid on `[0, t_max]` with `n_steps` points (both ends included).
///
/// Used for time in the oscillator model and for propagation distance in the
/// wave model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_max: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_steps: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(param("t_max", format!("must be finite and > 0, got {t_max}")));
        }
        if n_steps < 2 {
            return Err(param("n_steps", format!("must be >= 2, got {n_steps}")));
        }
        Ok(Self { t_max, n_steps })
    }

    /// Grid with spacing `dt` reaching at least `t_max` (rounded to the nearest step count).
    pub fn with_spacing(t_max: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(param("dt", format!("must be finite and > 0, got {dt}")));
        }
        let steps = (t_max / dt).round().max(1.0) as usize;
        Self::new(steps as f64 * dt, steps + 1)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.t_max / (self.n_steps - 1) as f64
    }

    /// Grid point `i`; point 0 is exactly zero and the last point exactly `t_max`.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_steps {
            self.t_max
        } else {
            i as f64 * self.dt()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_steps).map(move |i| self.point(i))
    }

    /// The grid with every interval split in two (`2 n - 1` points).
    pub fn refined(&self) -> Self {
        Self {
            t_max: self.t_max,
            n_steps: 2 * self.n_steps - 1,
        }
    }

    /// Every other point of this grid, if the point count allows it.
    pub fn coarsened(&self) -> Option<Self> {
        (self.n_steps % 2 == 1 && self.n_steps >= 3).then(|| Self {
            t_max: self.t_max,
            n_steps: self.n_steps.div_ceil(2),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = TimeGrid::new(20.0, 1001).unwrap();
        assert_eq!(g.point(0), 0.0);
        assert_eq!(g.point(1000), 20.0);
        assert!((g.dt() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn refine_then_coarsen_is_identity() {
        let g = TimeGrid::new(3.0, 31).unwrap();
        assert_eq!(g.refined().n_steps(), 61);
        assert_eq!(g.refined().coarsened().unwrap(), g);
        assert!(TimeGrid::new(3.0, 30).unwrap().coarsened().is_none());
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(TimeGrid::new(0.0, 10).is_err());
        assert!(TimeGrid::new(1.0, 1).is_err());
        assert!(TimeGrid::new(f64::NAN, 10).is_err());
    }

    #[test]
    fn spacing_constructor() {
        let g = TimeGrid::with_spacing(20.0, 0.01).unwrap();
        assert_eq!(g.n_steps(), 2001);
        assert!((g.dt() - 0.01).abs() < 1e-15);
    }
}
