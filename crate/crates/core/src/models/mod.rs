//! Closed-form fold-angle relations for each symmetry class.
//!
//! Every evaluator returns angles in [-pi, pi] and is checked against the
//! closure residual on its own crease pattern.

use std::f64::consts::PI;

use crate::error::{FoldError, Result};

pub mod bowtie;
pub mod degree4;
pub mod general;
pub mod igloo;
pub mod mode;
pub mod opposites;
pub mod resch;
pub mod trifold;
pub mod two_pair;

pub use bowtie::{bowtie, bowtie_multiplier, bowtie_pattern};
pub use degree4::{degree4_fold, degree4_multipliers, degree4_pattern, Multipliers};
pub use general::{
    almost_general, general_c3_right, general_cos_rho2, general_rho1, general_rho2, general_rho3,
    general_solve,
};
pub use igloo::{
    igloo_1dof, igloo_pattern, igloo_rho1, igloo_rho1_rational, igloo_rho4, pleat_multiplier,
};
pub use mode::{FoldMode, Model};
pub use opposites::{opposites_pattern, opposites_solve, OppositesSolution};
pub use resch::{
    resch_fold, resch_mesh, resch_reachable_interval, ReschFolding, ReschMesh, ReschVertex,
    RESCH_TOL,
};
pub use trifold::{trifold, trifold_multiplier, trifold_pattern, trifold_reachable};
pub use two_pair::{two_pair_complete, two_pair_curve_residual, two_pair_rho2_roots};

/// Residual accepted when filtering candidate branches.
pub const BRANCH_TOL: f64 = 1e-8;

/// The angle `rho` in [-pi, pi] with `tan(rho/2) = num/den`, computed without
/// dividing so that `den = 0` gives a flat fold signed by `num`.
pub fn half_angle(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            return 0.0;
        }
        return PI.copysign(num);
    }
    2.0 * (num * den.signum()).atan2(den.abs())
}

/// The angle with `tan(rho/4) = x`; fails when `|x| > 1` since `rho` would
/// leave [-pi, pi].
pub fn quarter_angle(x: f64) -> Result<f64> {
    let rho = 4.0 * x.atan();
    if !rho.is_finite() || x.abs() > 1.0 {
        return Err(FoldError::OutOfRange { value: rho });
    }
    Ok(rho)
}

pub(crate) fn check_mode(mode: u8) -> Result<()> {
    if mode == 1 || mode == 2 {
        Ok(())
    } else {
        Err(FoldError::InvalidInput(format!(
            "mode must be 1 or 2, got {mode}"
        )))
    }
}

pub(crate) fn check_drive(x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > PI + 1e-12 {
        return Err(FoldError::InvalidInput(format!(
            "drive angle {x} is not in [-pi, pi]"
        )));
    }
    Ok(())
}

/// Two positive sector parameters with `alpha + beta < pi`.
pub(crate) fn check_pair(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && beta > 0.0 && alpha + beta < PI) {
        return Err(FoldError::Domain(format!(
            "need alpha > 0, beta > 0 and alpha + beta < pi (alpha = {alpha}, beta = {beta})"
        )));
    }
    Ok(())
}

/// Solutions of `a cos x + b sin x = d` in (-pi, pi].
pub(crate) fn solve_harmonic(a: f64, b: f64, d: f64) -> Vec<f64> {
    let r = a.hypot(b);
    if r < 1e-14 {
        return Vec::new();
    }
    let ratio = d / r;
    if ratio.abs() > 1.0 + 1e-9 {
        return Vec::new();
    }
    let phi = b.atan2(a);
    let delta = ratio.clamp(-1.0, 1.0).acos();
    let mut out = vec![crate::geometry::normalize_angle(phi + delta)];
    if delta > 0.0 {
        out.push(crate::geometry::normalize_angle(phi - delta));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_angle_matches_tangent() {
        for (n, d) in [(1.0, 2.0), (-3.0, 0.5), (2.0, -1.0), (-0.1, -4.0)] {
            let r = half_angle(n, d);
            assert!(((r / 2.0).tan() - n / d).abs() < 1e-12);
        }
        assert_eq!(half_angle(1.0, 0.0), PI);
        assert_eq!(half_angle(-1.0, 0.0), -PI);
        assert_eq!(half_angle(0.0, 0.0), 0.0);
    }

    #[test]
    fn quarter_angle_range() {
        assert!((quarter_angle(1.0).unwrap() - PI).abs() < 1e-15);
        assert!(matches!(
            quarter_angle(1.01),
            Err(FoldError::OutOfRange { .. })
        ));
    }

    #[test]
    fn harmonic_roots() {
        for (a, b, d) in [(1.0, 2.0, 0.5), (-2.0, 0.3, 1.0), (0.0, 1.0, -0.2)] {
            let xs = solve_harmonic(a, b, d);
            assert_eq!(xs.len(), 2);
            for x in xs {
                assert!((a * x.cos() + b * x.sin() - d).abs() < 1e-12);
            }
        }
        assert!(solve_harmonic(1.0, 0.0, 2.0).is_empty());
    }
}
