//! Flat-foldable degree-4 vertex.
//!
//! Sectors counterclockwise from crease 1 are `pi - beta, alpha, beta,
//! pi - alpha`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{check_drive, check_mode, check_pair, half_angle};
use crate::error::{FoldError, Result};
use crate::geometry::{CreasePattern, FoldAngleVector};

/// Folding-angle multipliers of the two modes, with the tangent-half forms
/// `(1 - t_a t_b) / (1 + t_a t_b)` and `(t_a - t_b) / (t_a + t_b)` as a
/// cross-check (`t_x = tan(x/2)`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Multipliers {
    pub p: f64,
    pub q: f64,
    pub p_tan: f64,
    pub q_tan: f64,
}

pub fn degree4_multipliers(alpha: f64, beta: f64) -> Result<Multipliers> {
    check_pair(alpha, beta)?;
    let pd = ((alpha - beta) / 2.0).cos();
    let qd = ((alpha + beta) / 2.0).sin();
    if pd.abs() < 1e-15 || qd.abs() < 1e-15 {
        return Err(FoldError::Singular(format!(
            "multiplier denominators vanish at alpha = {alpha}, beta = {beta}"
        )));
    }
    let (ta, tb) = ((alpha / 2.0).tan(), (beta / 2.0).tan());
    Ok(Multipliers {
        p: ((alpha + beta) / 2.0).cos() / pd,
        q: ((alpha - beta) / 2.0).sin() / qd,
        p_tan: (1.0 - ta * tb) / (1.0 + ta * tb),
        q_tan: (ta - tb) / (ta + tb),
    })
}

pub fn degree4_pattern(alpha: f64, beta: f64) -> Result<CreasePattern> {
    check_pair(alpha, beta)?;
    CreasePattern::from_sector_angles(&[PI - beta, alpha, beta, PI - alpha])
}

/// Mode 1 drives `rho2`: `rho1 = 2 atan(p tan(rho2/2))`, `rho3 = -rho1`,
/// `rho4 = rho2`. Mode 2 drives `rho1`: `rho2 = 2 atan(q tan(rho1/2))`,
/// `rho3 = rho1`, `rho4 = -rho2`.
pub fn degree4_fold(alpha: f64, beta: f64, mode: u8, rho_drive: f64) -> Result<FoldAngleVector> {
    check_mode(mode)?;
    check_drive(rho_drive)?;
    let m = degree4_multipliers(alpha, beta)?;
    let (s, c) = (rho_drive / 2.0).sin_cos();
    let rho = if mode == 1 {
        let r1 = half_angle(m.p * s, c);
        vec![r1, rho_drive, -r1, rho_drive]
    } else {
        let r2 = half_angle(m.q * s, c);
        vec![rho_drive, r2, rho_drive, -r2]
    };
    FoldAngleVector::new(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::closure_residual;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn multiplier_examples() {
        let m = degree4_multipliers(PI / 3.0, FRAC_PI_2).unwrap();
        assert!((m.p - (5.0 * PI / 12.0).cos() / (PI / 12.0).cos()).abs() < 1e-15);
        assert!((m.p - 0.267_949_192_431_122_7).abs() < 1e-12);
        assert!((m.p - m.p_tan).abs() < 1e-14);
        assert!((m.q - m.q_tan).abs() < 1e-14);
        assert_eq!(degree4_multipliers(0.7, 0.7).unwrap().q, 0.0);
        // p(x, pi/2) in tangent form
        for x in [0.3, PI / 3.0, 1.2] {
            let p = degree4_multipliers(x, FRAC_PI_2).unwrap().p;
            let t = (x / 2.0).tan();
            assert!((p - (1.0 - t) / (1.0 + t)).abs() < 1e-14);
        }
        assert!(matches!(
            degree4_multipliers(2.0, 1.5),
            Err(FoldError::Domain(_))
        ));
    }

    #[test]
    fn fold_examples() {
        let z = degree4_fold(PI / 3.0, FRAC_PI_2, 1, 0.0).unwrap();
        assert!(z.as_slice().iter().all(|x| *x == 0.0));
        let v = degree4_fold(PI / 3.0, FRAC_PI_2, 1, FRAC_PI_2).unwrap();
        assert!((v.as_slice()[0] - PI / 6.0).abs() < 1e-12);
        let pat = degree4_pattern(PI / 3.0, FRAC_PI_2).unwrap();
        assert!(closure_residual(&pat, &v).unwrap() < 1e-9);
        for t in [-2.5, 0.4, 3.0] {
            let v = degree4_fold(0.6, 0.6, 2, t).unwrap();
            assert!(v.as_slice()[1].abs() < 1e-15);
        }
        let flat = degree4_fold(PI / 3.0, FRAC_PI_2, 1, PI).unwrap();
        assert!((flat.as_slice()[0] - PI).abs() < 1e-12);
        assert!(degree4_fold(PI / 3.0, FRAC_PI_2, 3, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn multiplier_in_unit_interval(a in 0.01f64..1.55, b in 0.01f64..1.57) {
            let (alpha, beta) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(alpha < beta);
            let p = degree4_multipliers(alpha, beta).unwrap().p;
            prop_assert!(p > -1.0 && p < 1.0);
        }

        #[test]
        fn both_modes_close(a in 0.05f64..1.5, b in 0.05f64..1.5, t in -PI..PI, mode in 1u8..=2) {
            prop_assume!(a + b < PI - 0.05);
            let pat = degree4_pattern(a, b).unwrap();
            let v = degree4_fold(a, b, mode, t).unwrap();
            prop_assert!(closure_residual(&pat, &v).unwrap() < 1e-9);
            let m = degree4_fold(a, b, mode, -t).unwrap();
            prop_assert!(m.as_slice().iter().zip(v.as_slice()).all(|(x, y)| (x + y).abs() < 1e-12));
        }
    }
}
