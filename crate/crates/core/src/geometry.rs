//! Rotation algebra, loop closure and folded-state reconstruction for a
//! single interior vertex.
//!
//! Creases lie in the xy-plane. Folding crease `c` by `rho` rotates space by
//! `rho` about the line through `c` (right-hand rule), and a fold angle vector
//! is a point of the configuration space exactly when the product of these
//! rotations, taken in crease order, is the identity.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{FoldError, Result};

pub type Mat3 = Matrix3<f64>;
pub type Vec3 = Vector3<f64>;

/// Residual below which a fold angle vector lies on the configuration space.
pub const CLOSURE_TOL: f64 = 1e-9;
/// Default residual accepted by [`folded_geometry`].
pub const GEOMETRY_TOL: f64 = 1e-6;

const UNIT_TOL: f64 = 1e-12;
const SECTOR_TOL: f64 = 1e-12;
const DEVELOPABLE_TOL: f64 = 1e-10;
const INTERSECT_EPS: f64 = 1e-9;

/// Unit direction of a crease.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CreaseVector {
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
}

impl CreaseVector {
    pub fn new(lx: f64, ly: f64, lz: f64) -> Result<Self> {
        let c = CreaseVector { lx, ly, lz };
        c.check_unit()?;
        Ok(c)
    }

    /// In-plane crease at polar angle `theta`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        CreaseVector {
            lx: c,
            ly: s,
            lz: 0.0,
        }
    }

    pub fn angle(&self) -> f64 {
        self.ly.atan2(self.lx)
    }

    pub fn to_vec3(&self) -> Vec3 {
        Vec3::new(self.lx, self.ly, self.lz)
    }

    fn check_unit(&self) -> Result<()> {
        let n2 = self.lx * self.lx + self.ly * self.ly + self.lz * self.lz;
        if !n2.is_finite() || (n2 - 1.0).abs() > UNIT_TOL {
            return Err(FoldError::InvalidInput(format!(
                "crease vector ({}, {}, {}) is not unit length",
                self.lx, self.ly, self.lz
            )));
        }
        Ok(())
    }
}

/// Creases around one developable vertex, listed counterclockwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CreasePattern {
    creases: Vec<CreaseVector>,
    sector_angles: Vec<f64>,
}

impl CreasePattern {
    /// Pattern whose first crease points along +x, with `sectors[i]` the angle
    /// from crease `i` to crease `i + 1`.
    pub fn from_sector_angles(sectors: &[f64]) -> Result<Self> {
        Self::with_start(0.0, sectors)
    }

    /// As [`CreasePattern::from_sector_angles`] with the first crease at `theta0`.
    pub fn with_start(theta0: f64, sectors: &[f64]) -> Result<Self> {
        let mut angles = Vec::with_capacity(sectors.len());
        let mut acc = theta0;
        for s in sectors {
            angles.push(acc);
            acc += s;
        }
        validate_sectors(sectors)?;
        Ok(CreasePattern {
            creases: angles
                .iter()
                .map(|&t| CreaseVector::from_angle(t))
                .collect(),
            sector_angles: sectors.to_vec(),
        })
    }

    /// Pattern from polar crease angles listed counterclockwise.
    pub fn from_crease_angles(angles: &[f64]) -> Result<Self> {
        let n = angles.len();
        let sectors: Vec<f64> = (0..n)
            .map(|i| (angles[(i + 1) % n] - angles[i]).rem_euclid(TAU))
            .collect();
        validate_sectors(&sectors)?;
        Ok(CreasePattern {
            creases: angles
                .iter()
                .map(|&t| CreaseVector::from_angle(t))
                .collect(),
            sector_angles: sectors,
        })
    }

    /// The regular degree-6 vertex with creases at multiples of 60 degrees.
    pub fn g60() -> Self {
        let angles: Vec<f64> = (0..6).map(|i| i as f64 * PI / 3.0).collect();
        Self::from_crease_angles(&angles).expect("regular hexagon is a valid pattern")
    }

    /// Same vertex with crease `shift` relabeled as the first crease.
    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.len();
        let shift = shift % n;
        let mut creases = self.creases.clone();
        let mut sectors = self.sector_angles.clone();
        creases.rotate_left(shift);
        sectors.rotate_left(shift);
        CreasePattern {
            creases,
            sector_angles: sectors,
        }
    }

    pub fn len(&self) -> usize {
        self.creases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.creases.is_empty()
    }

    pub fn creases(&self) -> &[CreaseVector] {
        &self.creases
    }

    pub fn sector_angles(&self) -> &[f64] {
        &self.sector_angles
    }

    pub fn crease_angles(&self) -> Vec<f64> {
        self.creases.iter().map(CreaseVector::angle).collect()
    }
}

fn validate_sectors(sectors: &[f64]) -> Result<()> {
    if sectors.len() < 3 {
        return Err(FoldError::InvalidInput(format!(
            "a vertex needs at least 3 creases, got {}",
            sectors.len()
        )));
    }
    for (i, &s) in sectors.iter().enumerate() {
        if !s.is_finite() || s <= SECTOR_TOL || s >= PI - SECTOR_TOL {
            return Err(FoldError::InvalidInput(format!(
                "sector angle {i} = {s} is not in (0, pi)"
            )));
        }
    }
    let total: f64 = sectors.iter().sum();
    if (total - TAU).abs() > DEVELOPABLE_TOL {
        return Err(FoldError::InvalidInput(format!(
            "sector angles sum to {total}, not 2*pi"
        )));
    }
    Ok(())
}

/// Maps an angle to (-pi, pi], leaving values already in [-pi, pi] untouched
/// so that -pi stays a valid flat fold.
pub fn normalize_angle(x: f64) -> f64 {
    if (-PI..=PI).contains(&x) {
        return x;
    }
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// One folding angle per crease.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FoldAngleVector {
    rho: Vec<f64>,
}

impl FoldAngleVector {
    /// Normalizes every entry into [-pi, pi]; rejects non-finite input.
    pub fn new(rho: Vec<f64>) -> Result<Self> {
        if let Some(x) = rho.iter().find(|x| !x.is_finite()) {
            return Err(FoldError::InvalidInput(format!(
                "non-finite fold angle {x}"
            )));
        }
        Ok(FoldAngleVector {
            rho: rho.into_iter().map(normalize_angle).collect(),
        })
    }

    pub fn zeros(n: usize) -> Self {
        FoldAngleVector { rho: vec![0.0; n] }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.rho
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// The mirror fold.
    pub fn negated(&self) -> Self {
        FoldAngleVector {
            rho: self.rho.iter().map(|x| -x).collect(),
        }
    }

    /// Cyclic relabeling matching [`CreasePattern::rotated`].
    pub fn rotated(&self, shift: usize) -> Self {
        let mut rho = self.rho.clone();
        let n = rho.len();
        if n > 0 {
            rho.rotate_left(shift % n);
        }
        FoldAngleVector { rho }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.rho
    }
}

impl AsRef<[f64]> for FoldAngleVector {
    fn as_ref(&self) -> &[f64] {
        &self.rho
    }
}

impl TryFrom<Vec<f64>> for FoldAngleVector {
    type Error = FoldError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        FoldAngleVector::new(v)
    }
}

impl From<FoldAngleVector> for Vec<f64> {
    fn from(v: FoldAngleVector) -> Self {
        v.rho
    }
}

pub fn rot_x(theta: f64) -> Mat3 {
    let (s, c) = theta.sin_cos();
    Mat3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

pub fn rot_z(theta: f64) -> Mat3 {
    let (s, c) = theta.sin_cos();
    rot_z_cs(c, s)
}

fn rot_z_cs(c: f64, s: f64) -> Mat3 {
    Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// `Rz(theta_c) Rx(rho) Rz(-theta_c)` for an in-plane unit crease `c`.
pub fn crease_rotation(c: &CreaseVector, rho: f64) -> Result<Mat3> {
    c.check_unit()?;
    if c.lz != 0.0 {
        return Err(FoldError::InvalidInput(
            "crease vector must lie in the xy-plane".into(),
        ));
    }
    Ok(rotation_about(c, rho))
}

pub(crate) fn rotation_about(c: &CreaseVector, rho: f64) -> Mat3 {
    rot_z_cs(c.lx, c.ly) * rot_x(rho) * rot_z_cs(c.lx, -c.ly)
}

fn check_len(pattern: &CreasePattern, n: usize) -> Result<()> {
    if pattern.len() != n {
        return Err(FoldError::InvalidInput(format!(
            "pattern has {} creases but {} fold angles were given",
            pattern.len(),
            n
        )));
    }
    Ok(())
}

/// `R(c_1, rho_1) R(c_2, rho_2) ... R(c_n, rho_n)`.
pub fn closure_matrix<R: AsRef<[f64]> + ?Sized>(pattern: &CreasePattern, rho: &R) -> Result<Mat3> {
    let rho = rho.as_ref();
    check_len(pattern, rho.len())?;
    Ok(closure_product(pattern, rho))
}

pub(crate) fn closure_product(pattern: &CreasePattern, rho: &[f64]) -> Mat3 {
    pattern
        .creases
        .iter()
        .zip(rho)
        .fold(Mat3::identity(), |m, (c, &r)| m * rotation_about(c, r))
}

/// Frobenius norm of `F(rho) - I`.
pub fn closure_residual<R: AsRef<[f64]> + ?Sized>(pattern: &CreasePattern, rho: &R) -> Result<f64> {
    Ok((closure_matrix(pattern, rho)? - Mat3::identity()).norm())
}

pub(crate) fn residual_of(pattern: &CreasePattern, rho: &[f64]) -> f64 {
    debug_assert_eq!(pattern.len(), rho.len());
    (closure_product(pattern, rho) - Mat3::identity()).norm()
}

/// Sector frames and crease images of a folded vertex at unit radius.
///
/// Sector `i` lies between creases `i` and `i + 1`; the sector between the
/// last and first crease stays fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldedState {
    /// `face_frames[i] = R(c_1, rho_1) ... R(c_{i+1}, rho_{i+1})`.
    pub face_frames: Vec<Mat3>,
    pub crease_images: Vec<Vec3>,
}

impl FoldedState {
    /// The unit triangle (origin, image of crease i, image of crease i+1).
    pub fn sector_triangle(&self, i: usize) -> [Vec3; 3] {
        let n = self.crease_images.len();
        [
            Vec3::zeros(),
            self.crease_images[i],
            self.crease_images[(i + 1) % n],
        ]
    }

    pub fn self_intersects(&self) -> bool {
        self_intersects(self)
    }
}

pub fn folded_geometry<R: AsRef<[f64]> + ?Sized>(
    pattern: &CreasePattern,
    rho: &R,
    tol: f64,
) -> Result<FoldedState> {
    let rho = rho.as_ref();
    let residual = closure_residual(pattern, rho)?;
    if residual.is_nan() || residual > tol {
        return Err(FoldError::NotClosed { residual });
    }
    let mut frame = Mat3::identity();
    let mut face_frames = Vec::with_capacity(rho.len());
    let mut crease_images = Vec::with_capacity(rho.len());
    for (c, &r) in pattern.creases.iter().zip(rho) {
        crease_images.push(frame * c.to_vec3());
        frame *= rotation_about(c, r);
        face_frames.push(frame);
    }
    Ok(FoldedState {
        face_frames,
        crease_images,
    })
}

/// True when two non-adjacent sector triangles have intersecting interiors.
///
/// All sectors share the vertex at the origin, so two of them in distinct
/// planes can only meet along the line where their planes cross. Their
/// interiors overlap exactly when one direction of that line points strictly
/// inside both wedges. Coplanar sectors are stacked layers of a flat fold and
/// count as contact, not intersection; so do shared creases and the vertex.
pub fn self_intersects(state: &FoldedState) -> bool {
    let im = &state.crease_images;
    let n = im.len();
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b) = (im[i], im[(i + 1) % n]);
            let (c, d) = (im[j], im[(j + 1) % n]);
            if wedges_cross(&a, &b, &c, &d) {
                return true;
            }
        }
    }
    false
}

fn wedges_cross(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> bool {
    let ni = a.cross(b);
    let nj = c.cross(d);
    let line = ni.cross(&nj);
    let len = line.norm();
    if len <= INTERSECT_EPS * ni.norm() * nj.norm() {
        return false;
    }
    let dir = line / len;
    [dir, -dir]
        .iter()
        .any(|v| strictly_inside(v, a, b) && strictly_inside(v, c, d))
}

/// Whether `v = s a + t b` with both coefficients strictly positive.
fn strictly_inside(v: &Vec3, a: &Vec3, b: &Vec3) -> bool {
    let n = a.cross(b);
    let nn = n.norm_squared();
    if nn < INTERSECT_EPS * INTERSECT_EPS {
        return false;
    }
    let s = v.cross(b).dot(&n) / nn;
    let t = a.cross(v).dot(&n) / nn;
    s > INTERSECT_EPS && t > INTERSECT_EPS
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: &Vec3, b: &Vec3, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    fn trifold_point(rho2: f64) -> Vec<f64> {
        let rho1 = 4.0 * ((2.0 + 3f64.sqrt()) * (-rho2 / 4.0).tan()).atan();
        vec![rho1, rho2, rho1, rho2, rho1, rho2]
    }

    #[test]
    fn rot_x_examples() {
        assert_eq!(rot_x(0.0), Mat3::identity());
        let y = Vec3::y();
        assert!(close(&(rot_x(PI) * y), &-y, 1e-15));
        assert!(close(&(rot_x(FRAC_PI_2) * y), &Vec3::z(), 1e-15));
    }

    #[test]
    fn crease_rotation_examples() {
        let ex = CreaseVector::from_angle(0.0);
        for r in [-2.0, 0.3, 1.1] {
            assert!((crease_rotation(&ex, r).unwrap() - rot_x(r)).norm() < 1e-15);
        }
        let ey = CreaseVector::new(0.0, 1.0, 0.0).unwrap();
        assert!((crease_rotation(&ey, 0.0).unwrap() - Mat3::identity()).norm() < 1e-15);
        // Rz(pi/2) Rx(pi/2) Rz(-pi/2) e_x = Rz(pi/2) Rx(pi/2) (0,-1,0) = Rz(pi/2) (0,0,-1)
        let img = crease_rotation(&ey, FRAC_PI_2).unwrap() * Vec3::x();
        assert!(close(&img, &Vec3::new(0.0, 0.0, -1.0), 1e-15));
    }

    #[test]
    fn crease_rotation_rejects_bad_vectors() {
        let c = CreaseVector {
            lx: 1.0,
            ly: 1.0,
            lz: 0.0,
        };
        assert!(matches!(
            crease_rotation(&c, 0.1),
            Err(FoldError::InvalidInput(_))
        ));
        let c = CreaseVector {
            lx: 0.6,
            ly: 0.0,
            lz: 0.8,
        };
        assert!(crease_rotation(&c, 0.1).is_err());
        assert!(CreaseVector::new(0.6, 0.8, 0.0).is_ok());
    }

    #[test]
    fn pattern_construction() {
        let g = CreasePattern::g60();
        assert_eq!(g.len(), 6);
        for s in g.sector_angles() {
            assert!((s - PI / 3.0).abs() < 1e-12);
        }
        let p = CreasePattern::from_sector_angles(&[1.0, 2.0, 1.5, TAU - 4.5]).unwrap();
        let a = p.crease_angles();
        for i in 0..4 {
            let d = (a[(i + 1) % 4] - a[i]).rem_euclid(TAU);
            assert!((d - p.sector_angles()[i]).abs() < 1e-12);
        }
        assert!(CreasePattern::from_sector_angles(&[PI, PI / 2.0, PI / 2.0]).is_err());
        assert!(CreasePattern::from_sector_angles(&[1.0, 1.0, 1.0]).is_err());
        assert!(CreasePattern::from_sector_angles(&[PI, PI]).is_err());
    }

    #[test]
    fn fold_angle_vector_normalizes() {
        let v = FoldAngleVector::new(vec![-PI, PI, 3.0 * PI, -4.0, 7.0]).unwrap();
        assert_eq!(v.as_slice()[0], -PI);
        assert_eq!(v.as_slice()[1], PI);
        assert!((v.as_slice()[2] - PI).abs() < 1e-12);
        assert!((v.as_slice()[3] - (TAU - 4.0)).abs() < 1e-12);
        assert!((v.as_slice()[4] - (7.0 - TAU)).abs() < 1e-12);
        assert!(FoldAngleVector::new(vec![f64::NAN]).is_err());
        let json = serde_json::to_string(&v).unwrap();
        let back: FoldAngleVector = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn closure_examples() {
        let g = CreasePattern::g60();
        assert!((closure_matrix(&g, &[0.0; 6]).unwrap() - Mat3::identity()).norm() < 1e-15);
        assert!(closure_residual(&g, &[0.0; 6]).unwrap() < 1e-15);
        assert!(closure_residual(&g, &trifold_point(-0.4)).unwrap() < 1e-9);
        assert!(closure_residual(&g, &[0.3; 6]).unwrap() > 1e-3);
        assert!(closure_residual(&g, &[0.5, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap() > 0.1);
        assert!(matches!(
            closure_residual(&g, &[0.0; 5]),
            Err(FoldError::InvalidInput(_))
        ));
    }

    #[test]
    fn flat_state_geometry() {
        let g = CreasePattern::g60();
        let s = folded_geometry(&g, &[0.0; 6], GEOMETRY_TOL).unwrap();
        for f in &s.face_frames {
            assert!((*f - Mat3::identity()).norm() < 1e-15);
        }
        assert!(!s.self_intersects());
        assert!(matches!(
            folded_geometry(&g, &[0.5, 0.0, 0.0, 0.0, 0.0, 0.0], GEOMETRY_TOL),
            Err(FoldError::NotClosed { .. })
        ));
    }

    #[test]
    fn trifold_images_have_threefold_symmetry() {
        let g = CreasePattern::g60();
        let s = folded_geometry(&g, &trifold_point(-0.4), GEOMETRY_TOL).unwrap();
        assert_eq!(s.crease_images[0], g.creases()[0].to_vec3());
        // Symmetry of the folded state: P[2] Rz(120 deg) carries each crease
        // image two steps forward.
        let r = s.face_frames[1] * rot_z(TAU / 3.0);
        for i in 0..6 {
            let rotated = r * s.crease_images[i];
            assert!(close(&rotated, &s.crease_images[(i + 2) % 6], 1e-12));
        }
        let angle = ((r.trace() - 1.0) / 2.0).acos();
        assert!((angle - TAU / 3.0).abs() < 1e-12);
        for f in &s.face_frames {
            assert!((f.transpose() * f - Mat3::identity()).norm() < 1e-10);
            assert!((f.determinant() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn crossing_flaps_detected() {
        // Two folded sectors pushed through each other.
        let a = Vec3::new(1.0, 0.0, 0.0);
        let b = Vec3::new(0.0, 1.0, 0.0);
        let c = Vec3::new(0.5, 0.5, -1.0).normalize();
        let d = Vec3::new(0.5, 0.5, 1.0).normalize();
        assert!(wedges_cross(&a, &b, &c, &d));
        let c2 = Vec3::new(-0.5, -0.5, -1.0).normalize();
        let d2 = Vec3::new(-0.5, -0.5, 1.0).normalize();
        assert!(!wedges_cross(&a, &b, &c2, &d2));
        // Coplanar overlap is stacking, not crossing.
        assert!(!wedges_cross(
            &a,
            &b,
            &Vec3::new(0.6, 0.8, 0.0),
            &Vec3::new(0.8, 0.6, 0.0)
        ));
    }

    fn crease_strategy() -> impl Strategy<Value = (f64, f64)> {
        (-PI..PI, -PI..PI)
    }

    proptest! {
        #[test]
        fn rotation_is_orthogonal_and_inverts((theta, rho) in crease_strategy()) {
            let c = CreaseVector::from_angle(theta);
            let r = crease_rotation(&c, rho).unwrap();
            prop_assert!((r.transpose() * r - Mat3::identity()).norm() < 1e-12);
            prop_assert!((r.determinant() - 1.0).abs() < 1e-12);
            let inv = crease_rotation(&c, -rho).unwrap();
            prop_assert!((inv - r.transpose()).norm() < 1e-12);
            prop_assert!(((r * c.to_vec3()) - c.to_vec3()).norm() < 1e-12);
        }

        #[test]
        fn mirror_fold_also_closes(t in -1.0f64..1.0) {
            let g = CreasePattern::g60();
            let rho = FoldAngleVector::new(trifold_point(t)).unwrap();
            prop_assert!(closure_residual(&g, &rho).unwrap() < CLOSURE_TOL);
            prop_assert!(closure_residual(&g, &rho.negated()).unwrap() < CLOSURE_TOL);
        }

        #[test]
        fn residual_invariant_under_relabeling(
            rho in proptest::collection::vec(-PI..PI, 6),
            shift in 0usize..6,
        ) {
            let g = CreasePattern::g60();
            let base = closure_residual(&g, &rho).unwrap();
            let rho = FoldAngleVector::new(rho).unwrap();
            let moved = closure_residual(&g.rotated(shift), &rho.rotated(shift)).unwrap();
            prop_assert!((base - moved).abs() < 1e-12);
        }
    }
}
