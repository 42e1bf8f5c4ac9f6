//! Predictor-corrector tracing of implicit curves `f(x, y) = 0` on the torus
//! of angle pairs.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{angular_distance, ConfigSample, CurveTrace, VALID_TOL};
use crate::error::{FoldError, Result};
use crate::geometry::{normalize_angle, CreasePattern, FoldAngleVector};
use crate::models::{two_pair_complete, two_pair_curve_residual, two_pair_rho2_roots};

pub const DEFAULT_STEP: f64 = 0.02;

const SEED_TOL: f64 = 1e-7;
const NODE_TOL: f64 = 1e-6;
const GRAD_H: f64 = 1e-5;
const HESS_H: f64 = 1e-4;
const MAX_STEPS: usize = 200_000;
/// Cosine between the current heading and the start heading for the loop to
/// count as closed. Passing back through a node along the other branch must
/// not qualify.
const SAME_HEADING: f64 = 0.98;

type P = (f64, f64);

fn grad(f: &impl Fn(f64, f64) -> f64, p: P) -> P {
    let h = GRAD_H;
    (
        (f(p.0 + h, p.1) - f(p.0 - h, p.1)) / (2.0 * h),
        (f(p.0, p.1 + h) - f(p.0, p.1 - h)) / (2.0 * h),
    )
}

fn norm(p: P) -> f64 {
    p.0.hypot(p.1)
}

fn unit(p: P) -> P {
    let n = norm(p);
    (p.0 / n, p.1 / n)
}

fn dot(a: P, b: P) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

fn wrapped(p: P) -> P {
    (normalize_angle(p.0), normalize_angle(p.1))
}

fn torus_dist(a: P, b: P) -> f64 {
    angular_distance(&[a.0, a.1], &[b.0, b.1])
}

/// The two branch directions through a node, from the finite-difference
/// Hessian: null directions of `a x^2 + 2b xy + c y^2`.
fn node_directions(f: &impl Fn(f64, f64) -> f64, p: P) -> Result<[P; 2]> {
    let h = HESS_H;
    let f0 = f(p.0, p.1);
    let a = (f(p.0 + h, p.1) - 2.0 * f0 + f(p.0 - h, p.1)) / (h * h);
    let c = (f(p.0, p.1 + h) - 2.0 * f0 + f(p.0, p.1 - h)) / (h * h);
    let b = (f(p.0 + h, p.1 + h) - f(p.0 + h, p.1 - h) - f(p.0 - h, p.1 + h) + f(p.0 - h, p.1 - h))
        / (4.0 * h * h);
    let disc = b * b - a * c;
    if disc <= 0.0 {
        return Err(FoldError::Degenerate(format!(
            "singular point at {p:?} is not a crossing (Hessian discriminant {disc:.3e})"
        )));
    }
    let s = disc.sqrt();
    // Directions (x, y) with a x^2 + 2 b x y + c y^2 = 0.
    let mut dirs = if a.abs() >= c.abs() {
        [unit(((-b + s) / a, 1.0)), unit(((-b - s) / a, 1.0))]
    } else {
        [unit((1.0, (-b + s) / c)), unit((1.0, (-b - s) / c))]
    };
    for d in &mut dirs {
        if d.0 < 0.0 || (d.0 == 0.0 && d.1 < 0.0) {
            *d = (-d.0, -d.1);
        }
    }
    dirs.sort_by(|u, v| u.1.atan2(u.0).total_cmp(&v.1.atan2(v.0)));
    Ok(dirs)
}

/// Newton along the gradient direction at the predicted point.
fn correct(f: &impl Fn(f64, f64) -> f64, p: P, fallback: P, limit: f64) -> Option<P> {
    let g = grad(f, p);
    let n = if norm(g) > NODE_TOL {
        unit(g)
    } else {
        fallback
    };
    let mut s = 0.0;
    for _ in 0..40 {
        let x = (p.0 + s * n.0, p.1 + s * n.1);
        let v = f(x.0, x.1);
        if v.abs() < VALID_TOL * 1e-2 {
            return Some(x);
        }
        let d = dot(grad(f, x), n);
        if d.abs() < 1e-12 {
            return None;
        }
        s -= v / d;
        if !s.is_finite() || s.abs() > limit {
            return None;
        }
    }
    let x = (p.0 + s * n.0, p.1 + s * n.1);
    (f(x.0, x.1).abs() < VALID_TOL).then_some(x)
}

fn sample(f: &impl Fn(f64, f64) -> f64, p: P) -> ConfigSample {
    let w = wrapped(p);
    let residual = f(p.0, p.1).abs();
    ConfigSample {
        rho: FoldAngleVector::new(vec![w.0, w.1]).expect("finite angles"),
        residual,
        valid: residual < VALID_TOL,
        branch: 0,
    }
}

/// Traces the component of `f = 0` through `seed`, treating both
/// coordinates as angles. The trace stops when it returns to the seed with
/// the starting heading (`closed`), or with a diagnostic when the corrector
/// fails or the step budget runs out.
///
/// At a node (gradient norm below `1e-6`) the start heading is the first
/// branch direction of the Hessian, and later passes through a node keep
/// the previous heading, so a figure-eight is traced as one loop crossing
/// itself.
pub fn trace_implicit_curve<F: Fn(f64, f64) -> f64>(
    f: F,
    seed: P,
    step: f64,
) -> Result<CurveTrace> {
    if !(step > 0.0 && step < 1.0) {
        return Err(FoldError::InvalidInput(format!(
            "step must be in (0, 1), got {step}"
        )));
    }
    let f0 = f(seed.0, seed.1);
    if f0.is_nan() || f0.abs() >= SEED_TOL {
        return Err(FoldError::InvalidInput(format!(
            "seed {seed:?} is off the curve (residual {f0:.3e})"
        )));
    }
    let g0 = grad(&f, seed);
    let t0 = if norm(g0) < NODE_TOL {
        node_directions(&f, seed)?[0]
    } else {
        let t = unit((-g0.1, g0.0));
        if t.0 < 0.0 || (t.0 == 0.0 && t.1 < 0.0) {
            (-t.0, -t.1)
        } else {
            t
        }
    };
    let mut samples = vec![sample(&f, seed)];
    let (mut cur, mut tangent) = (seed, t0);
    let mut left = false;
    let mut closed = false;
    let mut diagnostic = None;
    for _ in 0..MAX_STEPS {
        let mut h = step;
        let next = loop {
            let pred = (cur.0 + h * tangent.0, cur.1 + h * tangent.1);
            let normal = (-tangent.1, tangent.0);
            if let Some(p) = correct(&f, pred, normal, h) {
                let d = torus_dist(p, cur);
                if d <= 2.0 * step && d > 0.25 * h {
                    break Some(p);
                }
            }
            h /= 2.0;
            if h < step / 64.0 {
                break None;
            }
        };
        let Some(next) = next else {
            diagnostic = Some(format!("corrector failed near {:?}", wrapped(cur)));
            break;
        };
        let g = grad(&f, next);
        if norm(g) > NODE_TOL {
            let t = unit((-g.1, g.0));
            tangent = if dot(t, tangent) >= 0.0 {
                t
            } else {
                (-t.0, -t.1)
            };
        }
        cur = next;
        let d_seed = torus_dist(cur, seed);
        if d_seed > 3.0 * step {
            left = true;
        }
        if left && d_seed < step && dot(tangent, t0) > SAME_HEADING {
            closed = true;
            break;
        }
        samples.push(sample(&f, cur));
    }
    if !closed && diagnostic.is_none() {
        diagnostic = Some(format!("no return to the seed within {MAX_STEPS} steps"));
    }
    Ok(CurveTrace {
        samples,
        closed,
        diagnostic,
    })
}

/// Traces from every seed in parallel and keeps one trace per component:
/// a trace is dropped when its seed lies on an earlier kept trace.
pub fn trace_components<F>(f: F, seeds: &[P], step: f64) -> Result<Vec<CurveTrace>>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let traces: Vec<Result<CurveTrace>> = seeds
        .par_iter()
        .map(|&s| trace_implicit_curve(&f, s, step))
        .collect();
    let mut kept: Vec<CurveTrace> = Vec::new();
    for (seed, t) in seeds.iter().zip(traces) {
        let on_kept = kept.iter().any(|k| {
            k.samples
                .iter()
                .any(|s| torus_dist((s.rho.as_slice()[0], s.rho.as_slice()[1]), *seed) < 2.0 * step)
        });
        if !on_kept {
            kept.push(t?);
        }
    }
    Ok(kept)
}

/// The origin followed by sign-change roots on evenly spaced `rho1` lines.
pub fn two_pair_seeds(lines: usize) -> Vec<P> {
    let mut seeds = vec![(0.0, 0.0)];
    for i in 0..lines {
        let r1 = -PI + 2.0 * PI * (i as f64 + 0.5) / lines as f64;
        seeds.extend(two_pair_rho2_roots(r1).into_iter().map(|r2| (r1, r2)));
    }
    seeds
}

/// All components of the two-pair curve reachable from [`two_pair_seeds`];
/// the first is the one through the flat state.
pub fn two_pair_components(step: f64) -> Result<Vec<CurveTrace>> {
    trace_components(two_pair_curve_residual, &two_pair_seeds(24), step)
}

/// Full fold-angle vectors `(r1, r1, r2, r2, r3, r4)` for each traced point,
/// one sample per closing completion, scored for closure and
/// self-intersection on the regular vertex. Points without a closing
/// completion are skipped.
pub fn complete_two_pair(trace: &CurveTrace, tol: f64) -> Result<Vec<ConfigSample>> {
    let g = CreasePattern::g60();
    let per_point: Vec<Result<Vec<ConfigSample>>> = trace
        .samples
        .par_iter()
        .map(|s| {
            let (r1, r2) = (s.rho.as_slice()[0], s.rho.as_slice()[1]);
            let cands = match two_pair_complete(r1, r2) {
                Ok(c) => c,
                Err(FoldError::Inconsistent(_)) => return Ok(Vec::new()),
                Err(e) => return Err(e),
            };
            cands
                .into_iter()
                .enumerate()
                .map(|(k, (r3, r4))| {
                    let v = FoldAngleVector::new(vec![r1, r1, r2, r2, r3, r4])?;
                    ConfigSample::evaluate(&g, v, k as u32 + 1, tol)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for p in per_point {
        out.extend(p?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle() {
        let f = |x: f64, y: f64| x * x + y * y - 1.0;
        let t = trace_implicit_curve(f, (1.0, 0.0), 0.02).unwrap();
        assert!(t.closed, "{:?}", t.diagnostic);
        let n = t.samples.len() as f64;
        assert!((n * 0.02 - 2.0 * PI).abs() < 0.05);
        assert!(t.max_gap() <= 0.04);
        assert!(t.samples.iter().all(|s| s.residual < 1e-8));
    }

    #[test]
    fn lemniscate_through_node() {
        // (x^2 + y^2)^2 = x^2 - y^2, node at the origin.
        let f = |x: f64, y: f64| (x * x + y * y).powi(2) - (x * x - y * y);
        let t = trace_implicit_curve(f, (0.0, 0.0), 0.01).unwrap();
        assert!(t.closed, "{:?}", t.diagnostic);
        assert!(t.samples.iter().any(|s| s.rho.as_slice()[0] > 0.9));
        assert!(t.samples.iter().any(|s| s.rho.as_slice()[0] < -0.9));
        let near = t
            .samples
            .iter()
            .filter(|s| norm((s.rho.as_slice()[0], s.rho.as_slice()[1])) < 0.006)
            .count();
        assert!(near >= 2);
    }

    #[test]
    fn off_curve_seed_rejected() {
        let f = |x: f64, y: f64| x * x + y * y - 1.0;
        assert!(trace_implicit_curve(f, (0.5, 0.0), 0.02).is_err());
    }

    #[test]
    fn two_pair_figure_eight() {
        let comps = two_pair_components(DEFAULT_STEP).unwrap();
        let eight = &comps[0];
        assert!(eight.closed, "{:?}", eight.diagnostic);
        assert!(eight.max_gap() <= 2.0 * DEFAULT_STEP);
        assert!(eight.samples.iter().all(|s| s.residual < 1e-8));
    }
}
