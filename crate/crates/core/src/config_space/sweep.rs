use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ConfigSample, CurveTrace, VALID_TOL};
use crate::error::{FoldError, Result};
use crate::models::FoldMode;

/// Samples of a model with two or three drives on a full grid over
/// [-pi, pi] per drive. Cells are row-major with the first drive slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub n: usize,
    pub axis: Vec<f64>,
    pub drive_count: usize,
    pub cells: Vec<Vec<ConfigSample>>,
    /// Grid points where evaluation failed (no real folding there).
    pub failed: usize,
}

impl SampleGrid {
    pub fn drive_at(&self, cell: usize) -> Vec<f64> {
        let mut idx = cell;
        let mut out = vec![0.0; self.drive_count];
        for k in (0..self.drive_count).rev() {
            out[k] = self.axis[idx % self.n];
            idx /= self.n;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Sweep {
    Curve(CurveTrace),
    Grid(SampleGrid),
}

impl Sweep {
    pub fn samples(&self) -> Vec<&ConfigSample> {
        match self {
            Sweep::Curve(c) => c.samples.iter().collect(),
            Sweep::Grid(g) => g.cells.iter().flatten().collect(),
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.samples()
            .iter()
            .map(|s| s.residual)
            .fold(0.0, f64::max)
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Symmetric grid over [-pi, pi]: `x_i = -x_{n-1-i}` exactly.
pub(crate) fn symmetric_axis(n: usize) -> Vec<f64> {
    let m = (n - 1) as f64;
    (0..n)
        .map(|i| (2.0 * i as f64 - m) / m * std::f64::consts::PI)
        .collect()
}

pub fn sweep_model(mode: &FoldMode, n: usize) -> Result<Sweep> {
    sweep_model_with_tol(mode, n, VALID_TOL)
}

/// One-drive models: `n` drives spread over the reachable interval. Two or
/// three drives: an `n x n` or `n x n x n` grid.
pub fn sweep_model_with_tol(mode: &FoldMode, n: usize, tol: f64) -> Result<Sweep> {
    if n < 2 {
        return Err(FoldError::InvalidInput(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    let pattern = mode.pattern()?;
    let eval = |drive: &[f64]| -> Vec<ConfigSample> {
        match mode.evaluate(drive) {
            Ok(vs) => vs
                .into_iter()
                .enumerate()
                .filter_map(|(k, v)| {
                    let branch = if vs_is_multi(mode) {
                        k as u32 + 1
                    } else {
                        mode.mode as u32
                    };
                    ConfigSample::evaluate(&pattern, v, branch, tol).ok()
                })
                .collect(),
            Err(_) => Vec::new(),
        }
    };
    if mode.drive_count() == 1 {
        let (lo, hi) = mode.reachable_interval()?;
        if hi <= lo {
            return Err(FoldError::EmptyInterval);
        }
        let drives = linspace(lo, hi, n);
        let samples: Vec<ConfigSample> = drives.par_iter().flat_map_iter(|&d| eval(&[d])).collect();
        return Ok(Sweep::Curve(CurveTrace {
            samples,
            closed: false,
            diagnostic: None,
        }));
    }
    let axis = symmetric_axis(n);
    let dc = mode.drive_count();
    let total = n.pow(dc as u32);
    let proto = SampleGrid {
        n,
        axis,
        drive_count: dc,
        cells: Vec::new(),
        failed: 0,
    };
    let cells: Vec<Vec<ConfigSample>> = (0..total)
        .into_par_iter()
        .map(|c| eval(&proto.drive_at(c)))
        .collect();
    let failed = cells.iter().filter(|c| c.is_empty()).count();
    Ok(Sweep::Grid(SampleGrid {
        cells,
        failed,
        ..proto
    }))
}

fn vs_is_multi(mode: &FoldMode) -> bool {
    mode.model == crate::models::Model::TwoPair
}
