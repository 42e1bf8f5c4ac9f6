//! Two pair on the regular vertex: fold angles `(rho1, rho1, rho2, rho2, rho3, rho4)`.

use std::f64::consts::PI;

use super::{check_drive, solve_harmonic, BRANCH_TOL};
use crate::error::{FoldError, Result};
use crate::geometry::{normalize_angle, residual_of, CreasePattern};

const CURVE_PRE_TOL: f64 = 1e-7;
const SCAN_POINTS: usize = 1440;

/// LHS minus RHS of the relation between `rho1` and `rho2`:
/// `24c1 + 24c2 + 6c(2r1) + 6c(2r2) + 27c(2(r1+r2)) - 9c(2(r1-r2))
///  = 24c(r1-2r2) + 24c(2r1-r2) + 24c(r1+r2) + 40c(r1-r2) - 34`.
pub fn two_pair_curve_residual(rho1: f64, rho2: f64) -> f64 {
    let c = f64::cos;
    let lhs = 24.0 * c(rho1)
        + 24.0 * c(rho2)
        + 6.0 * c(2.0 * rho1)
        + 6.0 * c(2.0 * rho2)
        + 27.0 * c(2.0 * (rho1 + rho2))
        - 9.0 * c(2.0 * (rho1 - rho2));
    let rhs = 24.0 * c(rho1 - 2.0 * rho2)
        + 24.0 * c(2.0 * rho1 - rho2)
        + 24.0 * c(rho1 + rho2)
        + 40.0 * c(rho1 - rho2)
        - 34.0;
    lhs - rhs
}

/// Sign-change roots of the curve residual in `rho2` for fixed `rho1`,
/// refined by bisection. Tangential (double) roots are not reported.
pub fn two_pair_rho2_roots(rho1: f64) -> Vec<f64> {
    let f = |x: f64| two_pair_curve_residual(rho1, x);
    let xs: Vec<f64> = (0..=SCAN_POINTS)
        .map(|i| -PI + 2.0 * PI * i as f64 / SCAN_POINTS as f64)
        .collect();
    let mut roots = Vec::new();
    for w in xs.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (mut fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa * fb > 0.0 {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = f(m);
            if fa * fm <= 0.0 {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

fn vector(r1: f64, r2: f64, r3: f64, r4: f64) -> [f64; 6] {
    [r1, r1, r2, r2, r3, r4]
}

/// Completions `(rho3, rho4)` of a curve point, sorted by closure residual.
///
/// `rho4` solves `(2 + 2c1) cos r4 - 4 s1 sin r4 = 4c2 + 3c(2r2) - 1 - 2c1`,
/// then `rho3` solves
/// `(1 + 3c(2r2)) cos r3 - 3(c2 - 1) s2 sin r3 = (1 + 3c(2r1)) cos r4 - 3(c1 - 1) s1 sin r4`.
/// Only combinations whose full vector closes are kept.
pub fn two_pair_complete(rho1: f64, rho2: f64) -> Result<Vec<(f64, f64)>> {
    check_drive(rho1)?;
    check_drive(rho2)?;
    let curve = two_pair_curve_residual(rho1, rho2);
    if curve.abs() > CURVE_PRE_TOL {
        return Err(FoldError::InvalidInput(format!(
            "({rho1}, {rho2}) is off the two-pair curve (residual {curve:.3e})"
        )));
    }
    let g = CreasePattern::g60();
    let (s1, c1) = rho1.sin_cos();
    let (s2, c2) = rho2.sin_cos();
    let a4 = 2.0 + 2.0 * c1;
    let b4 = -4.0 * s1;
    let d4 = 4.0 * c2 + 3.0 * (2.0 * rho2).cos() - 1.0 - 2.0 * c1;
    let mut out: Vec<(f64, f64, f64)> = Vec::new();
    for r4 in solve_harmonic(a4, b4, d4) {
        let p = 1.0 + 3.0 * (2.0 * rho2).cos();
        let q = -3.0 * (c2 - 1.0) * s2;
        let rhs = (1.0 + 3.0 * (2.0 * rho1).cos()) * r4.cos() - 3.0 * (c1 - 1.0) * s1 * r4.sin();
        for r3 in solve_harmonic(p, q, rhs) {
            let (r3, r4, res) = polish(&g, rho1, rho2, r3, r4);
            if res < BRANCH_TOL
                && !out.iter().any(|o| {
                    normalize_angle(o.0 - r3).abs() < 1e-9 && normalize_angle(o.1 - r4).abs() < 1e-9
                })
            {
                out.push((r3, r4, res));
            }
        }
    }
    if out.is_empty() {
        return Err(FoldError::Inconsistent(format!(
            "no completion of ({rho1}, {rho2}) closes"
        )));
    }
    out.sort_by(|a, b| a.2.total_cmp(&b.2));
    Ok(out.into_iter().map(|(r3, r4, _)| (r3, r4)).collect())
}

/// A few Gauss-Newton steps on `(rho3, rho4)`; near tangential roots the
/// closed-form candidates lose half their digits.
fn polish(g: &CreasePattern, r1: f64, r2: f64, mut r3: f64, mut r4: f64) -> (f64, f64, f64) {
    let mut res = residual_of(g, &vector(r1, r2, r3, r4));
    if !(1e-13..=1e-4).contains(&res) {
        return (r3, r4, res);
    }
    let entries = |r3: f64, r4: f64| {
        let m = crate::geometry::closure_product(g, &vector(r1, r2, r3, r4));
        [m[(0, 1)], m[(0, 2)], m[(1, 2)]]
    };
    let h = 1e-7;
    for _ in 0..8 {
        let f0 = entries(r3, r4);
        let mut j = [[0.0; 2]; 3];
        for (k, (d3, d4)) in [(h, 0.0), (0.0, h)].into_iter().enumerate() {
            let fp = entries(r3 + d3, r4 + d4);
            let fm = entries(r3 - d3, r4 - d4);
            for i in 0..3 {
                j[i][k] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let mut jtj = [[0.0; 2]; 2];
        let mut jtf = [0.0; 2];
        for i in 0..3 {
            for a in 0..2 {
                jtf[a] += j[i][a] * f0[i];
                for b in 0..2 {
                    jtj[a][b] += j[i][a] * j[i][b];
                }
            }
        }
        let det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let d3 = (jtj[1][1] * jtf[0] - jtj[0][1] * jtf[1]) / det;
        let d4 = (jtj[0][0] * jtf[1] - jtj[1][0] * jtf[0]) / det;
        let (n3, n4) = (normalize_angle(r3 - d3), normalize_angle(r4 - d4));
        let nres = residual_of(g, &vector(r1, r2, n3, n4));
        if nres >= res {
            break;
        }
        (r3, r4, res) = (n3, n4, nres);
    }
    (r3, r4, res)
}
