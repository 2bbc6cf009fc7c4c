use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// Real-valued samples on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealSeries {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
}

/// Complex-valued samples on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    pub grid: TimeGrid,
    pub values: Vec<Complex64>,
}

impl RealSeries {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    /// Pairs of `(t, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().zip(self.values.iter().copied())
    }

    /// Keep points with `t <= t_max`.
    pub fn truncated(&self, t_max: f64) -> Result<Self> {
        let n = self.grid.points().take_while(|&t| t <= t_max * (1.0 + 1e-12)).count();
        let grid = TimeGrid::new((n - 1) as f64 * self.grid.dt(), n)?;
        Ok(Self {
            grid,
            values: self.values[..n].to_vec(),
        })
    }

    /// Every `stride`-th point, starting from 0.
    pub fn decimated(&self, stride: usize) -> Result<Self> {
        if stride == 0 || (self.grid.n_steps() - 1) % stride != 0 {
            return Err(Error::Input(format!(
                "stride {stride} does not divide {} intervals",
                self.grid.n_steps() - 1
            )));
        }
        let grid = TimeGrid::new(self.grid.t_max(), (self.grid.n_steps() - 1) / stride + 1)?;
        Ok(Self {
            grid,
            values: self.values.iter().copied().step_by(stride).collect(),
        })
    }
}

impl ComplexSeries {
    pub fn new(grid: TimeGrid, values: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        Ok(Self { grid, values })
    }

    pub fn re(&self) -> RealSeries {
        RealSeries {
            grid: self.grid,
            values: self.values.iter().map(|z| z.re).collect(),
        }
    }
}

fn check_len(grid: &TimeGrid, len: usize) -> Result<()> {
    if grid.n_steps() != len {
        return Err(Error::Input(format!(
            "series length {len} does not match grid of {} points",
            grid.n_steps()
        )));
    }
    Ok(())
}

/// Pointwise ensemble mean of a complex quantity with its standard errors.
///
/// `std_error` is the standard error of the complex mean,
/// `sqrt(se_re^2 + se_im^2)`; the component errors are kept separately so
/// that the real and imaginary parts can be tested on their own.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub grid: TimeGrid,
    pub mean: Vec<Complex64>,
    pub std_error: Vec<f64>,
    pub std_error_re: Vec<f64>,
    pub std_error_im: Vec<f64>,
    pub n_samples: u64,
}

impl EnsembleStats {
    pub fn mean_re(&self) -> RealSeries {
        RealSeries {
            grid: self.grid,
            values: self.mean.iter().map(|z| z.re).collect(),
        }
    }

    pub fn se_re(&self) -> RealSeries {
        RealSeries {
            grid: self.grid,
            values: self.std_error_re.clone(),
        }
    }
}

/// Running per-point moments of a block of samples.
///
/// Blocks are merged with the pairwise update of Chan, Golub and LeVeque, so
/// the result depends only on how samples are assigned to blocks and on the
/// merge tree, never on thread scheduling.
#[derive(Debug, Clone)]
pub(crate) struct Moments {
    count: u64,
    mean: Vec<Complex64>,
    m2_re: Vec<f64>,
    m2_im: Vec<f64>,
}

impl Moments {
    pub(crate) fn new(len: usize) -> Self {
        Self {
            count: 0,
            mean: vec![Complex64::new(0.0, 0.0); len],
            m2_re: vec![0.0; len],
            m2_im: vec![0.0; len],
        }
    }

    pub(crate) fn push(&mut self, sample: &[Complex64]) {
        self.count += 1;
        let n = self.count as f64;
        for (i, &x) in sample.iter().enumerate() {
            let delta = x - self.mean[i];
            self.mean[i] += delta / n;
            let after = x - self.mean[i];
            self.m2_re[i] += delta.re * after.re;
            self.m2_im[i] += delta.im * after.im;
        }
    }

    pub(crate) fn merge(mut self, other: Self) -> Self {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for i in 0..self.mean.len() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * (nb / n);
            self.m2_re[i] += other.m2_re[i] + delta.re * delta.re * na * nb / n;
            self.m2_im[i] += other.m2_im[i] + delta.im * delta.im * na * nb / n;
        }
        self.count += other.count;
        self
    }

    pub(crate) fn finish(self, grid: TimeGrid) -> EnsembleStats {
        let n = self.count as f64;
        let se = |m2: f64| {
            if self.count > 1 {
                (m2.max(0.0) / (n - 1.0) / n).sqrt()
            } else {
                0.0
            }
        };
        let std_error_re: Vec<f64> = self.m2_re.iter().map(|&m| se(m)).collect();
        let std_error_im: Vec<f64> = self.m2_im.iter().map(|&m| se(m)).collect();
        let std_error = std_error_re
            .iter()
            .zip(&std_error_im)
            .map(|(a, b)| a.hypot(*b))
            .collect();
        EnsembleStats {
            grid,
            mean: self.mean,
            std_error,
            std_error_re,
            std_error_im,
            n_samples: self.count,
        }
    }
}

/// Reduce `parts` in a fixed balanced binary tree.
pub(crate) fn pairwise_merge(mut parts: Vec<Moments>) -> Option<Moments> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a.merge(b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, -re / 2.0)
    }

    #[test]
    fn merged_moments_match_single_pass() {
        let data: Vec<f64> = (0..37).map(|i| ((i * 7919) % 101) as f64 / 10.0).collect();
        let mut whole = Moments::new(1);
        for &x in &data {
            whole.push(&[c(x)]);
        }
        let parts: Vec<Moments> = data
            .chunks(5)
            .map(|chunk| {
                let mut m = Moments::new(1);
                for &x in chunk {
                    m.push(&[c(x)]);
                }
                m
            })
            .collect();
        let merged = pairwise_merge(parts).unwrap();
        assert_eq!(merged.count, whole.count);
        assert!((merged.mean[0] - whole.mean[0]).norm() < 1e-12);
        assert!((merged.m2_re[0] - whole.m2_re[0]).abs() < 1e-9);

        let mean = data.iter().sum::<f64>() / data.len() as f64;
        let var = data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (data.len() - 1) as f64;
        let grid = TimeGrid::new(1.0, 2).unwrap();
        let stats = Moments { mean: vec![whole.mean[0]; 2], m2_re: vec![whole.m2_re[0]; 2], m2_im: vec![whole.m2_im[0]; 2], count: whole.count }
            .finish(grid);
        assert!((stats.std_error_re[0] - (var / data.len() as f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let grid = TimeGrid::new(1.0, 3).unwrap();
        assert!(RealSeries::new(grid, vec![0.0; 2]).is_err());
    }

    #[test]
    fn truncate_and_decimate() {
        let grid = TimeGrid::new(10.0, 101).unwrap();
        let s = RealSeries::from_fn(grid, |t| t);
        let head = s.truncated(5.0).unwrap();
        assert_eq!(head.values.len(), 51);
        assert_eq!(*head.values.last().unwrap(), 5.0);
        let d = s.decimated(10).unwrap();
        assert_eq!(d.values, (0..=10).map(|i| i as f64).collect::<Vec<_>>());
        assert!(s.decimated(7).is_err());
    }
}
