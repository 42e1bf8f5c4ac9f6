//! First- and second-order rigid foldability at the unfolded state.
//!
//! A path `rho(t)` through the flat state with `rho''(0) = 0` closes to second
//! order when both `sum_i rho'_i skew(c_i)` and the quadratic sum
//! `sum_{i,j} M(i,j) rho'_i rho'_j` vanish. Once the linear term is zero the
//! only independent quadratic entry is
//! `A = sum_{i,j} l^x_{min(i,j)} l^y_{max(i,j)} rho'_i rho'_j`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FoldError, Result};
use crate::geometry::{CreasePattern, CreaseVector, Mat3};
use crate::symmetry::{canonical_form, ColorPattern};

/// Tolerance on both conditions for a reported velocity.
pub const RAY_TOL: f64 = 1e-10;
const NULL_TOL: f64 = 1e-10;
const EIGEN_TOL: f64 = 1e-10;
const DEDUPE_TOL: f64 = 1e-6;
const MERGE_TOL: f64 = 1e-6;
const EXTRA_RAYS: usize = 4;
const RAY_SEED: u64 = 0x5eed_f01d;

/// Fold-angle velocities `rho'_i(0)`, one per crease.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VelocityVector {
    pub rho_dot: Vec<f64>,
}

impl VelocityVector {
    pub fn new(rho_dot: Vec<f64>) -> Self {
        VelocityVector { rho_dot }
    }

    /// Scaled so the first entry that is not negligible equals +1.
    /// `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let scale = self.rho_dot.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 || !scale.is_finite() {
            return None;
        }
        let lead = *self.rho_dot.iter().find(|x| x.abs() > 1e-8 * scale)?;
        Some(VelocityVector {
            rho_dot: self.rho_dot.iter().map(|x| x / lead).collect(),
        })
    }

    fn unit(&self) -> Vec<f64> {
        let n = self.rho_dot.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.rho_dot.iter().map(|x| x / n).collect()
    }
}

/// Mode analysis of one symmetry pattern.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeSolution {
    pub color_pattern: ColorPattern,
    /// Real solution rays, normalized and sorted lexicographically.
    pub velocities: Vec<VelocityVector>,
    pub foldable: bool,
    /// Dimension of the solution cone (0 when not foldable).
    pub dof: usize,
    /// Set when every ray forces two or more classes to coincide; names the
    /// canonical pattern with those classes merged.
    pub reduces_to: Option<ColorPattern>,
}

impl ModeSolution {
    /// Foldable, with no pair of classes forced equal.
    pub fn is_genuine(&self) -> bool {
        self.foldable && self.reduces_to.is_none()
    }
}

fn skew(c: &CreaseVector) -> Mat3 {
    Mat3::new(0.0, 0.0, c.ly, 0.0, 0.0, -c.lx, -c.ly, c.lx, 0.0)
}

fn check_len(pattern: &CreasePattern, n: usize) -> Result<()> {
    if pattern.len() != n {
        return Err(FoldError::InvalidInput(format!(
            "pattern has {} creases but {} velocities were given",
            pattern.len(),
            n
        )));
    }
    Ok(())
}

/// `sum_i rho'_i skew(c_i)`, the linear term of `F(t v)`.
pub fn first_order_matrix(pattern: &CreasePattern, v: &VelocityVector) -> Result<Mat3> {
    check_len(pattern, v.rho_dot.len())?;
    Ok(pattern
        .creases()
        .iter()
        .zip(&v.rho_dot)
        .fold(Mat3::zeros(), |m, (c, &x)| m + skew(c) * x))
}

/// The double sum of the per-pair matrices `M(i,j)` weighted by
/// `rho'_i rho'_j`, with `a = min(i,j)`, `b = max(i,j)`:
///
/// ```text
/// [ -ly_i ly_j    ly_a lx_b    0                      ]
/// [  lx_a ly_b   -lx_i lx_j    0                      ]
/// [  0            0           -lx_i lx_j - ly_i ly_j  ]
/// ```
pub fn second_order_matrix(pattern: &CreasePattern, v: &VelocityVector) -> Result<Mat3> {
    check_len(pattern, v.rho_dot.len())?;
    let c = pattern.creases();
    let n = c.len();
    let mut m = Mat3::zeros();
    for i in 0..n {
        for j in 0..n {
            let w = v.rho_dot[i] * v.rho_dot[j];
            if w == 0.0 {
                continue;
            }
            let (a, b) = (i.min(j), i.max(j));
            let xx = c[i].lx * c[j].lx;
            let yy = c[i].ly * c[j].ly;
            m[(0, 0)] -= yy * w;
            m[(0, 1)] += c[a].ly * c[b].lx * w;
            m[(1, 0)] += c[a].lx * c[b].ly * w;
            m[(1, 1)] -= xx * w;
            m[(2, 2)] -= (xx + yy) * w;
        }
    }
    Ok(m)
}

/// Coefficient matrix of the quadratic `A(v) = v^T C v`.
fn quadratic_form(pattern: &CreasePattern) -> DMatrix<f64> {
    let c = pattern.creases();
    let n = c.len();
    DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (i.min(j), i.max(j));
        c[a].lx * c[b].ly
    })
}

fn expansion(color: &ColorPattern) -> DMatrix<f64> {
    let k = color.k();
    DMatrix::from_fn(color.len(), k, |i, c| {
        if color.classes()[i] as usize == c + 1 {
            1.0
        } else {
            0.0
        }
    })
}

/// Orthonormal basis of the null space of `l` as columns.
fn null_space(l: &DMatrix<f64>) -> DMatrix<f64> {
    let gram = l.transpose() * l;
    let k = gram.nrows();
    let eig = SymmetricEigen::new(gram);
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let cols: Vec<DVector<f64>> = (0..k)
        .filter(|&i| eig.eigenvalues[i].abs() <= NULL_TOL * scale)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(k, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Real isotropic directions of the quadratic form `q` (`w^T q w = 0`).
///
/// Zero eigenvectors and the combinations `e_p / sqrt(l_p) +- e_n / sqrt(-l_n)`
/// of positive and negative eigenpairs are exact solutions. When the cone has
/// dimension above one, further points come from intersecting lines through a
/// known ray with the cone, which keeps the sampled rays generic.
fn isotropic_rays(q: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let d = q.nrows();
    if d == 0 {
        return Vec::new();
    }
    let scale = q.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = EIGEN_TOL * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(RAY_SEED);
    let random_vec = |rng: &mut ChaCha8Rng| DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));

    let eig = SymmetricEigen::new(q.clone());
    let col = |i: usize| eig.eigenvectors.column(i).into_owned();
    let pos: Vec<usize> = (0..d).filter(|&i| eig.eigenvalues[i] > tol).collect();
    let neg: Vec<usize> = (0..d).filter(|&i| eig.eigenvalues[i] < -tol).collect();
    let zero: Vec<usize> = (0..d)
        .filter(|&i| eig.eigenvalues[i].abs() <= tol)
        .collect();

    let mut rays: Vec<DVector<f64>> = zero.iter().map(|&i| col(i)).collect();
    if zero.len() >= 2 {
        for _ in 0..EXTRA_RAYS {
            let w = random_vec(&mut rng);
            rays.push(
                zero.iter()
                    .fold(DVector::zeros(d), |acc, &i| acc + col(i) * w[i]),
            );
        }
    }
    for &p in &pos {
        for &n in &neg {
            let ep = col(p) / eig.eigenvalues[p].sqrt();
            let en = col(n) / (-eig.eigenvalues[n]).sqrt();
            rays.push(&ep + &en);
            rays.push(&ep - &en);
        }
    }
    if !pos.is_empty() && !neg.is_empty() && d >= 3 {
        let base = rays.clone();
        for r0 in &base {
            for _ in 0..EXTRA_RAYS {
                let u = random_vec(&mut rng);
                let qu = q * &u;
                let den = u.dot(&qu);
                if den.abs() > tol {
                    rays.push(r0 - &u * (2.0 * r0.dot(&qu) / den));
                }
            }
        }
    }
    rays.retain(|r| r.norm() > 1e-9);
    rays
}

/// Solves the first- and second-order conditions with one velocity unknown per
/// color class.
///
/// The linear condition restricts the class velocities to a null space `N`;
/// on it the quadratic condition is the form `N^T E^T C E N`, whose real
/// isotropic rays are the modes. Rays are verified against both matrix
/// conditions before being reported.
pub fn symmetric_mode_solve(pattern: &CreasePattern, color: &ColorPattern) -> ModeSolution {
    let unfoldable = ModeSolution {
        color_pattern: color.clone(),
        velocities: Vec::new(),
        foldable: false,
        dof: 0,
        reduces_to: None,
    };
    if color.len() != pattern.len() {
        return unfoldable;
    }
    let k = color.k();
    let e = expansion(color);
    let lx = DVector::from_iterator(pattern.len(), pattern.creases().iter().map(|c| c.lx));
    let ly = DVector::from_iterator(pattern.len(), pattern.creases().iter().map(|c| c.ly));
    let mut l = DMatrix::zeros(2, k);
    l.set_row(0, &(lx.transpose() * &e));
    l.set_row(1, &(ly.transpose() * &e));
    let basis = null_space(&l);
    let d = basis.ncols();
    if d == 0 {
        return unfoldable;
    }
    let c = quadratic_form(pattern);
    let ce = &c + c.transpose();
    let q_full = e.transpose() * (&ce * 0.5) * &e;
    let q = basis.transpose() * &q_full * &basis;

    let mut class_rays: Vec<DVector<f64>> = Vec::new();
    let mut velocities: Vec<VelocityVector> = Vec::new();
    let mut dof = 0;
    let q_scale = q.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let q_zero = q.iter().all(|x| x.abs() <= EIGEN_TOL * q_scale);
    for w in isotropic_rays(&q) {
        let class_v = &basis * &w;
        let full = &e * &class_v;
        let v = VelocityVector::new(full.iter().copied().collect());
        let Some(v) = v.normalized() else { continue };
        let unit = VelocityVector::new(v.unit());
        let ok = first_order_matrix(pattern, &unit)
            .map(|m| m.norm())
            .unwrap_or(f64::INFINITY)
            < RAY_TOL
            && second_order_matrix(pattern, &unit)
                .map(|m| m.norm())
                .unwrap_or(f64::INFINITY)
                < RAY_TOL;
        if !ok {
            continue;
        }
        let u = unit.rho_dot;
        let duplicate = velocities.iter().any(|o| {
            let ou = o.unit();
            let dot: f64 = ou.iter().zip(&u).map(|(a, b)| a * b).sum();
            (1.0 - dot.abs().min(1.0)).max(0.0).sqrt() * std::f64::consts::SQRT_2 < DEDUPE_TOL
        });
        if duplicate {
            continue;
        }
        // Local dimension of the cone at this ray: the gradient of the
        // restricted quadratic either cuts one direction or vanishes.
        let wn = &w / w.norm();
        let grad = (&q * &wn).norm();
        let local = if q_zero || grad <= 1e-8 * q_scale {
            d
        } else {
            d - 1
        };
        dof = if velocities.is_empty() {
            local
        } else {
            dof.min(local)
        };
        class_rays.push(class_v / w.norm());
        velocities.push(v);
    }
    if velocities.is_empty() {
        return unfoldable;
    }
    // A positive or negative semidefinite form vanishes only on its null space.
    if !q_zero {
        let eig = SymmetricEigen::new(q.clone());
        let tol = EIGEN_TOL * q_scale;
        let has_pos = eig.eigenvalues.iter().any(|&x| x > tol);
        let has_neg = eig.eigenvalues.iter().any(|&x| x < -tol);
        if !(has_pos && has_neg) {
            dof = eig.eigenvalues.iter().filter(|x| x.abs() <= tol).count();
        }
    }
    velocities.sort_by(|a, b| {
        a.rho_dot
            .iter()
            .zip(&b.rho_dot)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let reduces_to = forced_merge(color, &class_rays);
    ModeSolution {
        color_pattern: color.clone(),
        velocities,
        foldable: true,
        dof,
        reduces_to,
    }
}

/// Merges class pairs that coincide on every ray; returns the merged
/// canonical pattern if anything merged.
fn forced_merge(color: &ColorPattern, rays: &[DVector<f64>]) -> Option<ColorPattern> {
    let k = color.k();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut merged = false;
    for a in 0..k {
        for b in (a + 1)..k {
            let equal = rays.iter().all(|r| {
                let s = r.norm();
                ((r[a] - r[b]) / s).abs() < MERGE_TOL
            });
            if equal {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[rb] = ra;
                }
                merged = true;
            }
        }
    }
    if !merged {
        return None;
    }
    let labels: Vec<usize> = color
        .classes()
        .iter()
        .map(|&c| find(&mut parent, c as usize - 1))
        .collect();
    Some(canonical_form(&labels))
}
