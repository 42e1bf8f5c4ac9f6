//! Generalized igloo: sectors `a, b, pi-a-b, pi-a-b, b, a` and fold angles
//! `(rho1, rho2, rho3, rho4, rho3, rho2)`.
//!
//! The folded state is symmetric about a plane through creases 1 and 4, so
//! the image of crease 4 after folding creases 2 and 3 fixes `rho1`; the same
//! argument on the pattern read from crease 4 fixes `rho4`.

use std::f64::consts::PI;

use super::{check_drive, check_mode, check_pair, half_angle, quarter_angle};
use crate::error::{FoldError, Result};
use crate::geometry::{rot_x, rot_z, CreasePattern, Vec3};

const AMBIGUOUS_TOL: f64 = 1e-12;

pub fn igloo_pattern(alpha: f64, beta: f64) -> Result<CreasePattern> {
    check_pair(alpha, beta)?;
    let c = PI - alpha - beta;
    CreasePattern::from_sector_angles(&[alpha, beta, c, c, beta, alpha])
}

fn crease_turn(theta: f64, rho: f64) -> crate::geometry::Mat3 {
    rot_z(theta) * rot_x(rho) * rot_z(-theta)
}

/// `rho1` from `(rho2, rho3)`. Fails with [`FoldError::BranchAmbiguity`]
/// when the folded crease 4 lands on crease 1 away from the flat state.
pub fn igloo_rho1(alpha: f64, beta: f64, rho2: f64, rho3: f64) -> Result<f64> {
    check_pair(alpha, beta)?;
    check_drive(rho2)?;
    check_drive(rho3)?;
    if rho2 == 0.0 && rho3 == 0.0 {
        // Creases 1 and 4 form a straight line that folds freely when the
        // rest is flat; the flat member of that family is returned.
        return Ok(0.0);
    }
    let w = crease_turn(alpha, rho2) * crease_turn(alpha + beta, rho3) * Vec3::new(-1.0, 0.0, 0.0);
    if w.y.abs() < AMBIGUOUS_TOL && w.z.abs() < AMBIGUOUS_TOL {
        return Err(FoldError::BranchAmbiguity {
            candidates: vec![0.0, PI],
        });
    }
    Ok(half_angle(w.y, w.z))
}

/// `rho4` from `(rho2, rho3)`: the `rho1` relation on the pattern read
/// clockwise from crease 4, whose first two sectors are `pi-a-b` and `b`.
pub fn igloo_rho4(alpha: f64, beta: f64, rho2: f64, rho3: f64) -> Result<f64> {
    check_pair(alpha, beta)?;
    igloo_rho1(PI - alpha - beta, beta, rho3, rho2)
}

/// The expanded rational form of `tan(rho1/2)`, evaluated as a
/// numerator/denominator pair. Agrees with [`igloo_rho1`]; kept as an
/// independent cross-check.
pub fn igloo_rho1_rational(alpha: f64, beta: f64, rho2: f64, rho3: f64) -> Result<f64> {
    check_pair(alpha, beta)?;
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (sab, cab) = (alpha + beta).sin_cos();
    let (s2, c2) = rho2.sin_cos();
    let (s3, c3) = rho3.sin_cos();
    let num = sa * sb * sab * c3
        + cb * (sa * cab - ca * sab * c2 * c3)
        + ca * (sb * cab * c2 + sab * s2 * s3);
    let den = sb * cab * s2 - sab * (cb * s2 * c3 + c2 * s3);
    Ok(half_angle(num, den))
}

/// `(1 - tan(x/2)) / (1 + tan(x/2))`, the degree-4 multiplier `p(x, pi/2)`
/// of the pleats that split an igloo vertex.
pub fn pleat_multiplier(x: f64) -> f64 {
    let t = (x / 2.0).tan();
    (1.0 - t) / (1.0 + t)
}

/// The two one-parameter modes driven by `rho4`; returns `(rho1, rho2, rho3)`.
///
/// With `t = tan(rho4/4)`, mode 1 has `tan(rho1/4) = p_b t` and
/// `rho2 = rho4/2 - 2 atan(p_a p_b t)`; mode 2 mirrors both
/// (`tan(rho1/4) = -p_b t`, `rho2 = -rho4/2 + 2 atan(p_a p_b t)`).
pub fn igloo_1dof(alpha: f64, beta: f64, mode: u8, rho4: f64) -> Result<(f64, f64, f64)> {
    check_pair(alpha, beta)?;
    check_mode(mode)?;
    check_drive(rho4)?;
    let (pa, pb) = (pleat_multiplier(alpha), pleat_multiplier(beta));
    let t = (rho4 / 4.0).tan();
    let h = alpha / 2.0;
    let (s4, c4) = (rho4 / 2.0).sin_cos();
    let sign = if mode == 1 { 1.0 } else { -1.0 };
    let rho1 = sign * quarter_angle(pb * t)?;
    let rho2 = sign * (rho4 / 2.0 - 2.0 * (pa * pb * t).atan());
    let rho3 = if mode == 1 {
        half_angle(-h.sin() * s4, h.cos() + c4 * (h + beta).sin())
    } else {
        half_angle(
            2.0 * h.cos() * s4,
            (h + beta + rho4 / 2.0).cos() + (h + beta - rho4 / 2.0).cos() - 2.0 * h.sin(),
        )
    };
    Ok((rho1, rho2, rho3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{closure_residual, normalize_angle};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn full(r1: f64, r2: f64, r3: f64, r4: f64) -> [f64; 6] {
        [r1, r2, r3, r4, r3, r2]
    }

    #[test]
    fn flat() {
        assert_eq!(igloo_rho1(0.9, 0.8, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(igloo_rho4(0.9, 0.8, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(igloo_1dof(0.9, 0.8, 1, 0.0).unwrap(), (0.0, 0.0, 0.0));
    }

    #[test]
    fn one_dof_modes_lie_on_the_surface() {
        let a = PI / 3.0;
        for mode in [1, 2] {
            for r4 in [-2.0, -0.3, 0.7, 1.9] {
                let (r1, r2, r3) = igloo_1dof(a, a, mode, r4).unwrap();
                assert!((igloo_rho1(a, a, r2, r3).unwrap() - r1).abs() < 1e-8);
                assert!((igloo_rho4(a, a, r2, r3).unwrap() - r4).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn worked_point() {
        let (a, b) = (PI / 4.0, PI / 6.0);
        let (r1, r2, r3) = igloo_1dof(a, b, 1, 1.0).unwrap();
        let pat = igloo_pattern(a, b).unwrap();
        assert!(closure_residual(&pat, &full(r1, r2, r3, 1.0)).unwrap() < 1e-9);
        assert!((igloo_rho1(a, b, r2, r3).unwrap() - r1).abs() < 1e-9);
    }

    #[test]
    fn right_angle_beta_degenerates() {
        for r4 in [-2.5, -1.0, 0.4, 2.9] {
            let (r1, r2, _) = igloo_1dof(2.0 * PI / 5.0, FRAC_PI_2, 1, r4).unwrap();
            assert!(r1.abs() < 1e-10);
            assert!((r2 - r4 / 2.0).abs() < 1e-9);
            let (r1, r2, _) = igloo_1dof(2.0 * PI / 5.0, FRAC_PI_2, 2, r4).unwrap();
            assert!(r1.abs() < 1e-10);
            assert!((r2 + r4 / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn flipped_pattern_gives_rho4() {
        // Read the igloo clockwise from crease 4: reflect across the x-axis
        // and start at the old crease 4.
        let (a, b) = (0.7, 0.5);
        let (r2, r3) = (0.4, -0.9);
        let r4 = igloo_rho4(a, b, r2, r3).unwrap();
        let r1 = igloo_rho1(a, b, r2, r3).unwrap();
        let flipped = igloo_pattern(PI - a - b, b).unwrap();
        // A reflection keeps fold signs and reverses the crease order.
        let v = [r4, r3, r2, r1, r2, r3];
        assert!(closure_residual(&flipped, &v).unwrap() < 1e-9);
    }

    proptest! {
        #[test]
        fn surface_points_close(
            a in 0.2f64..1.4, b in 0.2f64..1.4,
            r2 in -2.5f64..2.5, r3 in -2.5f64..2.5,
        ) {
            prop_assume!(a + b < PI - 0.2);
            let pat = igloo_pattern(a, b).unwrap();
            let r1 = igloo_rho1(a, b, r2, r3).unwrap();
            let r4 = igloo_rho4(a, b, r2, r3).unwrap();
            prop_assert!(closure_residual(&pat, &full(r1, r2, r3, r4)).unwrap() < 1e-9);
            let rat = igloo_rho1_rational(a, b, r2, r3).unwrap();
            prop_assert!(normalize_angle(rat - r1).abs() < 1e-9);
        }

        #[test]
        fn one_dof_closes(a in 0.2f64..1.4, b in 0.2f64..1.4, r4 in -3.1f64..3.1, mode in 1u8..=2) {
            prop_assume!(a + b < PI - 0.2);
            let pat = igloo_pattern(a, b).unwrap();
            let (r1, r2, r3) = igloo_1dof(a, b, mode, r4).unwrap();
            prop_assert!(closure_residual(&pat, &full(r1, r2, r3, r4)).unwrap() < 1e-9);
        }
    }
}
