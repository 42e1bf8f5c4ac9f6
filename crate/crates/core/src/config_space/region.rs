use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sweep::symmetric_axis;
use crate::error::{FoldError, Result};
use crate::models::general_solve;

/// Default mask resolution per axis.
pub const DEFAULT_GRID: usize = 201;

/// Where `(rho4, rho5)` admits a fully general folding for a fixed `rho6`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleRegion {
    pub rho6: f64,
    /// Shared grid for `rho4` (rows) and `rho5` (columns), symmetric about 0.
    pub axis: Vec<f64>,
    pub mask: Vec<Vec<bool>>,
}

impl AdmissibleRegion {
    pub fn count(&self) -> usize {
        self.mask.iter().flatten().filter(|&&b| b).count()
    }

    /// Mask value at the grid point nearest to `(rho4, rho5)`.
    pub fn at(&self, rho4: f64, rho5: f64) -> bool {
        let idx = |x: f64| {
            let m = (self.axis.len() - 1) as f64;
            (((x / std::f64::consts::PI + 1.0) / 2.0 * m)
                .round()
                .clamp(0.0, m)) as usize
        };
        self.mask[idx(rho4)][idx(rho5)]
    }
}

/// `mask[i][j]` is true when `general_solve(axis[i], axis[j], rho6)` has a
/// closing branch.
pub fn admissible_region(rho6: f64, grid_n: usize) -> Result<AdmissibleRegion> {
    if grid_n < 2 {
        return Err(FoldError::InvalidInput(format!(
            "grid needs at least 2 points, got {grid_n}"
        )));
    }
    let axis = symmetric_axis(grid_n);
    let mask = axis
        .par_iter()
        .map(|&r4| {
            axis.iter()
                .map(|&r5| Ok(!general_solve(r4, r5, rho6)?.is_empty()))
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AdmissibleRegion { rho6, axis, mask })
}
