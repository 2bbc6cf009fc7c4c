//! Deterministic parallel ensemble driver.
//!
//! Sample `i` of an ensemble always draws from counter stream `i` of the base
//! seed and always lands in block `i / BLOCK`; blocks are merged in a fixed
//! pairwise tree. The result is therefore bit-identical for any number of
//! worker threads.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::series::{pairwise_merge, EnsembleStats, Moments};

const BLOCK: u64 = 64;

/// Run `sample(i)` for `i in 0..n_samples` and accumulate pointwise moments.
pub fn run<F>(grid: TimeGrid, n_samples: u64, sample: F) -> Result<EnsembleStats>
where
    F: Fn(u64) -> Result<Vec<Complex64>> + Sync,
{
    if n_samples == 0 {
        return Err(Error::Input("ensemble needs at least one sample".into()));
    }
    let len = grid.n_steps();
    let n_blocks = n_samples.div_ceil(BLOCK);
    let blocks: Vec<Moments> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = Moments::new(len);
            for i in b * BLOCK..((b + 1) * BLOCK).min(n_samples) {
                let values = sample(i).map_err(|e| Error::Sample {
                    sample: i,
                    source: Box::new(e),
                })?;
                debug_assert_eq!(values.len(), len);
                acc.push(&values);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_merge(blocks)
        .expect("at least one block")
        .finish(grid))
}
