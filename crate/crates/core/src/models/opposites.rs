//! Generalized opposites: creases at `0, a, a+b, pi, pi+a, pi+a+b` folding as
//! `(rho1, rho2, rho3, rho1, rho2, rho3)`, subject to
//! `sin a t1 t2 + sin b t2 t3 + sin(a+b) t1 t3 = 0` with `t_i = tan(rho_i/2)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{check_drive, check_pair, half_angle};
use crate::error::{FoldError, Result};
use crate::geometry::CreasePattern;

const FREE_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum OppositesSolution {
    /// The unknown angle is determined.
    Unique(f64),
    /// Every value of the unknown angle satisfies the relation.
    Free,
}

pub fn opposites_pattern(alpha: f64, beta: f64) -> Result<CreasePattern> {
    check_pair(alpha, beta)?;
    let c = PI - alpha - beta;
    CreasePattern::from_sector_angles(&[alpha, beta, c, alpha, beta, c])
}

/// Solves for the one `None` entry of `known`.
///
/// Multiplying the relation by the three half-angle cosines makes it
/// `a sin(x/2) + b cos(x/2) = 0` in the unknown `x`, which has exactly one
/// solution in (-pi, pi] unless `a = b = 0`.
pub fn opposites_solve(
    alpha: f64,
    beta: f64,
    known: [Option<f64>; 3],
) -> Result<OppositesSolution> {
    check_pair(alpha, beta)?;
    let unknown: Vec<usize> = (0..3).filter(|&i| known[i].is_none()).collect();
    if unknown.len() != 1 {
        return Err(FoldError::InvalidInput(
            "exactly one of rho1, rho2, rho3 must be unknown".into(),
        ));
    }
    let u = unknown[0];
    let mut s = [0.0; 3];
    let mut c = [0.0; 3];
    for i in 0..3 {
        if let Some(x) = known[i] {
            check_drive(x)?;
            let (si, ci) = (x / 2.0).sin_cos();
            s[i] = si;
            c[i] = ci;
        }
    }
    let (sa, sb, sab) = (alpha.sin(), beta.sin(), (alpha + beta).sin());
    // Pair coefficients: w12 for t1 t2, w23 for t2 t3, w13 for t1 t3.
    let (a, b) = match u {
        0 => (sa * s[1] * c[2] + sab * c[1] * s[2], sb * s[1] * s[2]),
        1 => (sa * s[0] * c[2] + sb * c[0] * s[2], sab * s[0] * s[2]),
        _ => (sb * s[1] * c[0] + sab * s[0] * c[1], sa * s[0] * s[1]),
    };
    if a.abs() < FREE_TOL && b.abs() < FREE_TOL {
        return Ok(OppositesSolution::Free);
    }
    Ok(OppositesSolution::Unique(half_angle(-b, a)))
}
