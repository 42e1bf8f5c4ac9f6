//! Generalized bow tie with fold angles `(rho1, rho1, rho2, rho1, rho1, rho2)`.
//!
//! Mode 1 lays the sectors out as `pi - 2b, b, b` (twice) from crease 1, so the
//! `rho2` creases bisect a pair of `b` sectors; mode 2 uses `b, pi - 2b, b`.
//! Both are the same crease pattern with the symmetric crease pair chosen
//! differently.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{check_drive, check_mode, half_angle};
use crate::error::{FoldError, Result};
use crate::geometry::CreasePattern;

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < FRAC_PI_2) {
        return Err(FoldError::Domain(format!(
            "bow tie needs 0 < beta < pi/2, got {beta}"
        )));
    }
    Ok(())
}

/// `tan(rho2/2) / tan(rho1/2)`: `-cos b` in mode 1, `-1/(1 + 2 cos b)` in mode 2.
pub fn bowtie_multiplier(beta: f64, mode: u8) -> Result<f64> {
    check_beta(beta)?;
    check_mode(mode)?;
    Ok(if mode == 1 {
        -beta.cos()
    } else {
        -1.0 / (1.0 + 2.0 * beta.cos())
    })
}

pub fn bowtie_pattern(beta: f64, mode: u8) -> Result<CreasePattern> {
    check_beta(beta)?;
    check_mode(mode)?;
    let w = PI - 2.0 * beta;
    let sectors = if mode == 1 {
        [w, beta, beta, w, beta, beta]
    } else {
        [beta, w, beta, beta, w, beta]
    };
    CreasePattern::from_sector_angles(&sectors)
}

pub fn bowtie(beta: f64, mode: u8, rho1: f64) -> Result<f64> {
    check_drive(rho1)?;
    let m = bowtie_multiplier(beta, mode)?;
    let (s, c) = (rho1 / 2.0).sin_cos();
    Ok(half_angle(m * s, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::closure_residual;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn modes_agree_at_sixty_degrees() {
        let b = PI / 3.0;
        assert!((bowtie_multiplier(b, 1).unwrap() + 0.5).abs() < 1e-15);
        assert!((bowtie_multiplier(b, 2).unwrap() + 0.5).abs() < 1e-15);
        assert_eq!(bowtie(b, 1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn worked_point() {
        let r2 = bowtie(FRAC_PI_4, 1, FRAC_PI_2).unwrap();
        assert!((r2 - 2.0 * (-(2f64.sqrt()) / 2.0).atan()).abs() < 1e-12);
        assert!((r2 + 1.230_959_417_340_775).abs() < 1e-12);
        let pat = bowtie_pattern(FRAC_PI_4, 1).unwrap();
        let r1 = FRAC_PI_2;
        assert!(closure_residual(&pat, &[r1, r1, r2, r1, r1, r2]).unwrap() < 1e-9);
    }

    proptest! {
        #[test]
        fn closes(beta in 0.02f64..1.55, r1 in -PI..PI, mode in 1u8..=2) {
            let pat = bowtie_pattern(beta, mode).unwrap();
            let r2 = bowtie(beta, mode, r1).unwrap();
            prop_assert!(closure_residual(&pat, &[r1, r1, r2, r1, r1, r2]).unwrap() < 1e-9);
        }
    }
}
