//! Generalized trifold: sectors alternate `beta`, `2 pi / 3 - beta` and the
//! fold angles alternate `rho1, rho2`.

use std::f64::consts::PI;

use super::{check_drive, check_mode, quarter_angle};
use crate::error::{FoldError, Result};
use crate::geometry::CreasePattern;

const TWO_THIRDS_PI: f64 = 2.0 * PI / 3.0;

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < TWO_THIRDS_PI) {
        return Err(FoldError::Domain(format!(
            "trifold needs 0 < beta < 2pi/3, got {beta}"
        )));
    }
    Ok(())
}

/// `-(cos b + sqrt3 sin b + sqrt(2 sin b (sqrt3 cos b + sin b)))`, the ratio
/// `tan(rho1/4) / tan(rho2/4)` in mode 1.
pub fn trifold_multiplier(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let s3 = 3f64.sqrt();
    let (s, c) = beta.sin_cos();
    Ok(-(c + s3 * s + (2.0 * s * (s3 * c + s)).sqrt()))
}

pub fn trifold_pattern(beta: f64) -> Result<CreasePattern> {
    check_beta(beta)?;
    let b2 = TWO_THIRDS_PI - beta;
    CreasePattern::from_sector_angles(&[beta, b2, beta, b2, beta, b2])
}

/// Largest `|drive|` for which the driven mode stays within [-pi, pi].
pub fn trifold_reachable(beta: f64) -> Result<f64> {
    Ok(4.0 * (1.0 / trifold_multiplier(beta)?.abs()).atan())
}

/// Returns `(rho1, rho2)`. Mode 1 drives `rho2`; mode 2 drives `rho1` and is
/// mode 1 with the two angles exchanged.
pub fn trifold(beta: f64, mode: u8, rho_drive: f64) -> Result<(f64, f64)> {
    check_mode(mode)?;
    check_drive(rho_drive)?;
    let k = trifold_multiplier(beta)?;
    let other = quarter_angle(k * (rho_drive / 4.0).tan())?;
    Ok(if mode == 1 {
        (other, rho_drive)
    } else {
        (rho_drive, other)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::FoldError;
    use crate::geometry::closure_residual;
    use proptest::prelude::*;

    #[test]
    fn regular_multiplier() {
        let k = trifold_multiplier(PI / 3.0).unwrap();
        assert!((k + 2.0 + 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn worked_point() {
        let (r1, r2) = trifold(PI / 3.0, 1, -0.4).unwrap();
        assert_eq!(r2, -0.4);
        let expected = 4.0 * ((2.0 + 3f64.sqrt()) * 0.1f64.tan()).atan();
        assert!((r1 - expected).abs() < 1e-12);
        assert!((r1 - 1.433_167_927_436_8).abs() < 1e-12);
        let g = CreasePattern::g60();
        assert!(closure_residual(&g, &[r1, r2, r1, r2, r1, r2]).unwrap() < 1e-9);
        assert_eq!(trifold(PI / 3.0, 1, 0.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn out_of_reach() {
        let lim = trifold_reachable(PI / 3.0).unwrap();
        assert!(trifold(PI / 3.0, 1, lim * 0.999).is_ok());
        assert!(matches!(
            trifold(PI / 3.0, 1, lim * 1.001),
            Err(FoldError::OutOfRange { .. })
        ));
        assert!(trifold(2.2, 1, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn modes_close_and_swap(beta in 0.05f64..2.05, u in -0.999f64..0.999) {
            let pat = trifold_pattern(beta).unwrap();
            let t = u * trifold_reachable(beta).unwrap();
            let (a1, a2) = trifold(beta, 1, t).unwrap();
            let (b1, b2) = trifold(beta, 2, t).unwrap();
            prop_assert_eq!((a1, a2), (b2, b1));
            prop_assert!(closure_residual(&pat, &[a1, a2, a1, a2, a1, a2]).unwrap() < 1e-9);
            prop_assert!(closure_residual(&pat, &[b1, b2, b1, b2, b1, b2]).unwrap() < 1e-9);
        }
    }
}
