//! Fully general folding of the regular vertex, driven by `(rho4, rho5, rho6)`.
//!
//! Crease 3 has two folded images: one through creases 1 and 2, one back
//! through creases 6, 5, 4. Matching them fixes `cos rho2` (two signs), then
//! `rho1` from the angle between the images around the x-axis, and `rho3`
//! from what is left of the closure product.

use std::f64::consts::PI;

use super::{check_drive, BRANCH_TOL};
use crate::error::{FoldError, Result};
use crate::geometry::{
    normalize_angle, residual_of, rot_z, CreasePattern, FoldAngleVector, Mat3, Vec3,
};

const COS_SLACK: f64 = 1e-12;

fn turn(i: usize, rho: f64) -> Mat3 {
    let theta = i as f64 * PI / 3.0;
    rot_z(theta) * crate::geometry::rot_x(rho) * rot_z(-theta)
}

fn c3() -> Vec3 {
    Vec3::new(-0.5, 3f64.sqrt() / 2.0, 0.0)
}

/// `cos rho2` as an explicit trigonometric polynomial in the three drives.
pub fn general_cos_rho2(rho4: f64, rho5: f64, rho6: f64) -> f64 {
    let (s4, c4) = rho4.sin_cos();
    let (s5, c5) = rho5.sin_cos();
    let (s6, c6) = rho6.sin_cos();
    0.25 * (1.0 + c6 - 2.0 * s4 * s5 - 2.0 * c6 * s4 * s5 - 2.0 * s5 * s6
        + c5 * (1.0 + c6 - 4.0 * s4 * s6)
        + c4 * (1.0 - 3.0 * c6 + c5 * (1.0 + c6) - 2.0 * s5 * s6))
}

/// Image of crease 3 folded back through creases 6, 5, 4.
fn c3_left(rho4: f64, rho5: f64, rho6: f64) -> Vec3 {
    turn(5, -rho6) * turn(4, -rho5) * turn(3, -rho4) * c3()
}

/// Image of crease 3 folded forward through creases 1 and 2. Its x-coordinate
/// is `(1 - 3 cos rho2) / 4` whatever `rho1` is.
pub fn general_c3_right(rho1: f64, rho2: f64) -> Vec3 {
    turn(0, rho1) * turn(1, rho2) * c3()
}

/// Both signs of `rho2`, or nothing where `|cos rho2| > 1` (no folding).
pub fn general_rho2(rho4: f64, rho5: f64, rho6: f64) -> Vec<f64> {
    let c = general_cos_rho2(rho4, rho5, rho6);
    if !c.is_finite() || c.abs() > 1.0 + COS_SLACK {
        return Vec::new();
    }
    let r = c.clamp(-1.0, 1.0).acos();
    if r == 0.0 {
        vec![0.0]
    } else {
        vec![r, -r]
    }
}

/// `rho1 = atan2(u_z, u_y) - atan2(v_z, v_y)` where `u` is the back-folded
/// image of crease 3 and `v = R(c2, rho2) c3`.
pub fn general_rho1(rho2: f64, rho4: f64, rho5: f64, rho6: f64) -> Result<f64> {
    for x in [rho2, rho4, rho5, rho6] {
        check_drive(x)?;
    }
    let u = c3_left(rho4, rho5, rho6);
    if u.y.hypot(u.z) < 1e-12 {
        return Err(FoldError::Degenerate(
            "folded crease 3 lies on crease 1; rho1 is undetermined".into(),
        ));
    }
    let s3 = 3f64.sqrt();
    let v = Vec3::new(
        (1.0 - 3.0 * rho2.cos()) / 4.0,
        s3 / 2.0 * (rho2 / 2.0).cos().powi(2),
        s3 / 2.0 * rho2.sin(),
    );
    Ok(normalize_angle(u.z.atan2(u.y) - v.z.atan2(v.y)))
}

/// `rho3` from the rotation left over once the other five creases are folded.
pub fn general_rho3(rho1: f64, rho2: f64, rho4: f64, rho5: f64, rho6: f64) -> f64 {
    let m = (turn(0, rho1) * turn(1, rho2)).transpose()
        * (turn(3, rho4) * turn(4, rho5) * turn(5, rho6)).transpose();
    let theta = 2.0 * PI / 3.0;
    let local = rot_z(-theta) * m * rot_z(theta);
    local[(2, 1)].atan2(local[(1, 1)])
}

/// Every closing fold from `(rho4, rho5, rho6)`, tagged with its branch
/// (1 for `rho2 >= 0`, 2 for `rho2 < 0`).
pub fn general_solve(rho4: f64, rho5: f64, rho6: f64) -> Result<Vec<(u32, FoldAngleVector)>> {
    for x in [rho4, rho5, rho6] {
        check_drive(x)?;
    }
    let g = CreasePattern::g60();
    let mut out = Vec::new();
    for (i, r2) in general_rho2(rho4, rho5, rho6).into_iter().enumerate() {
        let r1 = match general_rho1(r2, rho4, rho5, rho6) {
            Ok(r) => r,
            Err(FoldError::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        };
        let r3 = general_rho3(r1, r2, rho4, rho5, rho6);
        let rho = [r1, r2, r3, rho4, rho5, rho6];
        if residual_of(&g, &rho) < BRANCH_TOL {
            out.push((i as u32 + 1, FoldAngleVector::new(rho.to_vec())?));
        }
    }
    Ok(out)
}

/// The `112345` class: `rho6 = rho5`, reported with the two equal creases
/// first, i.e. `(rho5, rho6, rho1, rho2, rho3, rho4)`.
pub fn almost_general(rho4: f64, rho5: f64) -> Result<Vec<(u32, FoldAngleVector)>> {
    Ok(general_solve(rho4, rho5, rho5)?
        .into_iter()
        .map(|(b, v)| (b, v.rotated(4)))
        .collect())
}
