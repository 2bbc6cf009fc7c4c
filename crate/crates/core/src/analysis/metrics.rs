use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::RealSeries;

/// Pointwise discrepancy between two series on the same grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorMetrics {
    pub max_abs: f64,
    pub rms: f64,
    /// `rms` divided by the RMS of the reference series `b`.
    pub rel_rms: f64,
}

/// Compare `a` against the reference `b`.
pub fn compare_series(a: &RealSeries, b: &RealSeries) -> Result<ErrorMetrics> {
    if a.grid != b.grid || a.values.len() != b.values.len() {
        return Err(Error::Input("series live on different grids".into()));
    }
    let n = a.values.len() as f64;
    let (mut max_abs, mut sq, mut ref_sq) = (0.0_f64, 0.0, 0.0);
    for (x, y) in a.values.iter().zip(&b.values) {
        let d = (x - y).abs();
        max_abs = max_abs.max(d);
        sq += d * d;
        ref_sq += y * y;
    }
    let rms = (sq / n).sqrt();
    let ref_rms = (ref_sq / n).sqrt();
    let rel_rms = if ref_rms > 0.0 {
        rms / ref_rms
    } else if rms == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(ErrorMetrics { max_abs, rms, rel_rms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;

    #[test]
    fn identical_and_offset() {
        let g = TimeGrid::new(3.0, 31).unwrap();
        let a = RealSeries::from_fn(g, f64::sin);
        let m = compare_series(&a, &a).unwrap();
        assert_eq!((m.max_abs, m.rms, m.rel_rms), (0.0, 0.0, 0.0));
        let b = RealSeries::from_fn(g, |t| t.sin() + 0.1);
        let m = compare_series(&b, &a).unwrap();
        assert!((m.max_abs - 0.1).abs() < 1e-15);
        assert!((m.rms - 0.1).abs() < 1e-15);
    }

    #[test]
    fn grid_mismatch() {
        let a = RealSeries::from_fn(TimeGrid::new(3.0, 31).unwrap(), f64::sin);
        let b = RealSeries::from_fn(TimeGrid::new(3.0, 32).unwrap(), f64::sin);
        assert!(compare_series(&a, &b).is_err());
    }
}
