//! A uniform front end over the individual models: one validated parameter
//! set, its crease pattern, and an evaluator from drive angles to full
//! fold-angle vectors.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    almost_general, bowtie, bowtie_pattern, check_drive, check_pair, degree4_fold,
    degree4_multipliers, degree4_pattern, general_solve, igloo_1dof, igloo_pattern, igloo_rho1,
    igloo_rho4, opposites_pattern, opposites_solve, trifold, trifold_pattern, two_pair_complete,
    two_pair_rho2_roots, OppositesSolution,
};
use crate::error::{FoldError, Result};
use crate::geometry::{CreasePattern, FoldAngleVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Degree4,
    Trifold,
    BowTie,
    Opposites,
    Igloo2Dof,
    Igloo1Dof,
    TwoPair,
    FullyGeneral,
    AlmostGeneral,
}

impl Model {
    pub const ALL: [Model; 9] = [
        Model::Degree4,
        Model::Trifold,
        Model::BowTie,
        Model::Opposites,
        Model::Igloo2Dof,
        Model::Igloo1Dof,
        Model::TwoPair,
        Model::FullyGeneral,
        Model::AlmostGeneral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::Degree4 => "degree4",
            Model::Trifold => "trifold",
            Model::BowTie => "bow-tie",
            Model::Opposites => "opposites",
            Model::Igloo2Dof => "igloo-2dof",
            Model::Igloo1Dof => "igloo-1dof",
            Model::TwoPair => "two-pair",
            Model::FullyGeneral => "fully-general",
            Model::AlmostGeneral => "almost-general",
        }
    }

    /// Number of independent drive angles.
    pub fn drive_count(self) -> usize {
        match self {
            Model::Opposites | Model::Igloo2Dof | Model::AlmostGeneral => 2,
            Model::FullyGeneral => 3,
            _ => 1,
        }
    }

    /// Valid mode ids.
    pub fn modes(self) -> &'static [u8] {
        match self {
            Model::Opposites => &[1, 2, 3],
            Model::Igloo2Dof | Model::TwoPair => &[1],
            _ => &[1, 2],
        }
    }

    /// Which entries of the full vector are the drives.
    pub fn drive_indices(self, mode: u8) -> Vec<usize> {
        match self {
            Model::Degree4 | Model::Trifold => vec![if mode == 1 { 1 } else { 0 }],
            Model::BowTie | Model::TwoPair => vec![0],
            Model::Opposites => (0..3).filter(|&i| i + 1 != mode as usize).collect(),
            Model::Igloo2Dof => vec![1, 2],
            Model::Igloo1Dof => vec![3],
            Model::FullyGeneral => vec![3, 4, 5],
            Model::AlmostGeneral => vec![5, 0],
        }
    }

    /// Names of the drive angles, e.g. `["rho2"]` for trifold mode 1. The
    /// almost general drives are named as in the fully general case.
    pub fn drive_names(self, mode: u8) -> Vec<String> {
        match self {
            Model::AlmostGeneral => vec!["rho4".into(), "rho5".into()],
            _ => self
                .drive_indices(mode)
                .iter()
                .map(|i| format!("rho{}", i + 1))
                .collect(),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = FoldError;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "degree4" | "d4" => Model::Degree4,
            "trifold" => Model::Trifold,
            "bowtie" => Model::BowTie,
            "opposites" => Model::Opposites,
            "igloo2dof" | "igloo" | "igloo2" => Model::Igloo2Dof,
            "igloo1dof" | "igloo1" => Model::Igloo1Dof,
            "twopair" => Model::TwoPair,
            "fullygeneral" | "general" => Model::FullyGeneral,
            "almostgeneral" => Model::AlmostGeneral,
            _ => return Err(FoldError::InvalidInput(format!("unknown model '{s}'"))),
        })
    }
}

/// A model with its mode and sector parameters. `alpha` is ignored by the
/// trifold and bow tie, both are ignored on the regular vertex (two pair,
/// fully and almost general).
///
/// Mode meanings: degree 4, trifold, bow tie and igloo 1-DOF use the two
/// named modes; opposites uses the mode as the index of the unknown angle;
/// fully and almost general use 1 for the `rho2 >= 0` branch and 2 for
/// `rho2 <= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldMode {
    pub model: Model,
    pub mode: u8,
    pub alpha: f64,
    pub beta: f64,
}

impl FoldMode {
    pub fn new(model: Model, mode: u8, alpha: f64, beta: f64) -> Result<Self> {
        if !model.modes().contains(&mode) {
            return Err(FoldError::InvalidInput(format!(
                "{model} has modes {:?}, got {mode}",
                model.modes()
            )));
        }
        match model {
            Model::Degree4 => {
                check_pair(alpha, beta)?;
                degree4_multipliers(alpha, beta)?;
            }
            Model::Trifold => {
                trifold_pattern(beta)?;
            }
            Model::BowTie => {
                bowtie_pattern(beta, mode)?;
            }
            Model::Opposites | Model::Igloo2Dof | Model::Igloo1Dof => check_pair(alpha, beta)?,
            Model::TwoPair | Model::FullyGeneral | Model::AlmostGeneral => {}
        }
        Ok(FoldMode {
            model,
            mode,
            alpha,
            beta,
        })
    }

    /// Shorthand for a model on the regular vertex (all sectors 60 degrees).
    /// Degree 4 has no such vertex and gets `alpha = pi/3, beta = pi/2`.
    pub fn regular(model: Model, mode: u8) -> Result<Self> {
        let third = PI / 3.0;
        let (alpha, beta) = match model {
            Model::Degree4 => (third, FRAC_PI_2),
            _ => (third, third),
        };
        Self::new(model, mode, alpha, beta)
    }

    pub fn drive_count(&self) -> usize {
        self.model.drive_count()
    }

    pub fn pattern(&self) -> Result<CreasePattern> {
        match self.model {
            Model::Degree4 => degree4_pattern(self.alpha, self.beta),
            Model::Trifold => trifold_pattern(self.beta),
            Model::BowTie => bowtie_pattern(self.beta, self.mode),
            Model::Opposites => opposites_pattern(self.alpha, self.beta),
            Model::Igloo2Dof | Model::Igloo1Dof => igloo_pattern(self.alpha, self.beta),
            Model::TwoPair | Model::FullyGeneral | Model::AlmostGeneral => Ok(CreasePattern::g60()),
        }
    }

    /// All closing fold-angle vectors for the given drives, in the crease
    /// order of [`FoldMode::pattern`]. Single-valued models return one vector;
    /// two pair and the general cases may return none or several.
    pub fn evaluate(&self, drive: &[f64]) -> Result<Vec<FoldAngleVector>> {
        if drive.len() != self.drive_count() {
            return Err(FoldError::InvalidInput(format!(
                "{} takes {} drive angle(s), got {}",
                self.model,
                self.drive_count(),
                drive.len()
            )));
        }
        for &d in drive {
            check_drive(d)?;
        }
        let (a, b, m) = (self.alpha, self.beta, self.mode);
        let one = |v: Vec<f64>| Ok(vec![FoldAngleVector::new(v)?]);
        match self.model {
            Model::Degree4 => Ok(vec![degree4_fold(a, b, m, drive[0])?]),
            Model::Trifold => {
                let (r1, r2) = trifold(b, m, drive[0])?;
                one(vec![r1, r2, r1, r2, r1, r2])
            }
            Model::BowTie => {
                let r1 = drive[0];
                let r2 = bowtie(b, m, r1)?;
                one(vec![r1, r1, r2, r1, r1, r2])
            }
            Model::Opposites => {
                let u = m as usize - 1;
                let mut known = [None; 3];
                let others: Vec<usize> = (0..3).filter(|&i| i != u).collect();
                known[others[0]] = Some(drive[0]);
                known[others[1]] = Some(drive[1]);
                // A free unknown is reported at its flat value.
                let x = match opposites_solve(a, b, known)? {
                    OppositesSolution::Unique(x) => x,
                    OppositesSolution::Free => 0.0,
                };
                let r: Vec<f64> = (0..3).map(|i| known[i].unwrap_or(x)).collect();
                one(vec![r[0], r[1], r[2], r[0], r[1], r[2]])
            }
            Model::Igloo2Dof => {
                let (r2, r3) = (drive[0], drive[1]);
                let r1 = igloo_rho1(a, b, r2, r3)?;
                let r4 = igloo_rho4(a, b, r2, r3)?;
                one(vec![r1, r2, r3, r4, r3, r2])
            }
            Model::Igloo1Dof => {
                let r4 = drive[0];
                let (r1, r2, r3) = igloo_1dof(a, b, m, r4)?;
                one(vec![r1, r2, r3, r4, r3, r2])
            }
            Model::TwoPair => {
                let r1 = drive[0];
                let mut out = Vec::new();
                for r2 in two_pair_rho2_roots(r1) {
                    match two_pair_complete(r1, r2) {
                        Ok(c) => {
                            for (r3, r4) in c {
                                out.push(FoldAngleVector::new(vec![r1, r1, r2, r2, r3, r4])?);
                            }
                        }
                        Err(FoldError::Inconsistent(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
                Ok(out)
            }
            Model::FullyGeneral | Model::AlmostGeneral => {
                let sols = if self.model == Model::FullyGeneral {
                    general_solve(drive[0], drive[1], drive[2])?
                } else {
                    almost_general(drive[0], drive[1])?
                };
                let rho2_at = if self.model == Model::FullyGeneral {
                    1
                } else {
                    3
                };
                Ok(sols
                    .into_iter()
                    .map(|(_, v)| v)
                    .filter(|v| {
                        let r2 = v.as_slice()[rho2_at];
                        r2 == 0.0 || (r2 > 0.0) == (m == 1)
                    })
                    .collect())
            }
        }
    }

    /// Interval of the single drive on which the mode stays inside
    /// [-pi, pi], by bisection on the failure point. Every mode here is odd
    /// in its drive, so the interval is symmetric. Multi-drive models return
    /// the full square side; their admissibility is pointwise.
    pub fn reachable_interval(&self) -> Result<(f64, f64)> {
        if self.drive_count() != 1 {
            return Ok((-PI, PI));
        }
        let ok = |t: f64| matches!(self.evaluate(&[t]), Ok(v) if !v.is_empty());
        if ok(PI) && ok(-PI) {
            return Ok((-PI, PI));
        }
        if !ok(0.0) {
            return Err(FoldError::EmptyInterval);
        }
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo <= 0.0 {
            return Err(FoldError::EmptyInterval);
        }
        Ok((-lo, lo))
    }
}
