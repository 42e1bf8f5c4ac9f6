//! Sampling, tracing and exporting configuration spaces.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{closure_residual, folded_geometry, CreasePattern, FoldAngleVector};

mod export;
mod region;
mod sweep;
mod trace;

pub use export::{
    csv_string, export, export_csv, export_json, export_obj, import_json, json_string, obj_string,
    ExportFormat, ExportReport,
};
pub use region::{admissible_region, AdmissibleRegion, DEFAULT_GRID};
pub use sweep::{sweep_model, sweep_model_with_tol, SampleGrid, Sweep};
pub use trace::{
    complete_two_pair, trace_components, trace_implicit_curve, two_pair_components, two_pair_seeds,
    DEFAULT_STEP,
};

/// Residual below which a sample counts as closed.
pub const VALID_TOL: f64 = 1e-8;

/// One point of a configuration space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigSample {
    pub rho: FoldAngleVector,
    pub residual: f64,
    /// Closed within tolerance and free of self-intersection.
    pub valid: bool,
    pub branch: u32,
}

impl ConfigSample {
    /// Scores `rho` on `pattern`.
    pub fn evaluate(
        pattern: &CreasePattern,
        rho: FoldAngleVector,
        branch: u32,
        tol: f64,
    ) -> Result<Self> {
        let residual = closure_residual(pattern, &rho)?;
        let valid = residual < tol.min(VALID_TOL)
            && folded_geometry(pattern, &rho, tol).is_ok_and(|s| !s.self_intersects());
        Ok(ConfigSample {
            rho,
            residual,
            valid,
            branch,
        })
    }
}

/// An ordered run of samples, such as a traced curve or a 1-DOF sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveTrace {
    pub samples: Vec<ConfigSample>,
    /// The trace returned to its start.
    pub closed: bool,
    /// Why tracing stopped early, if it did.
    pub diagnostic: Option<String>,
}

impl CurveTrace {
    /// Largest distance between consecutive samples, with angles compared
    /// modulo `2 pi`.
    pub fn max_gap(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| angular_distance(w[0].rho.as_slice(), w[1].rho.as_slice()))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn angular_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| crate::geometry::normalize_angle(x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}
