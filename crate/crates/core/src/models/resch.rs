//! Resch triangle twist on a hexagonal patch of the triangular lattice,
//! folded with threefold rotational symmetry.
//!
//! The patch has side 2: 19 lattice points, 24 triangles and seven interior
//! vertices. `r1` sits at the origin and folds as a regular trifold in mode 1
//! with `rho2 = t`. Its three `rho1` creases lead to `r2`, `r3`, `r4` (at 0,
//! 120 and 240 degrees), which fold as regular 1-DOF igloos in mode 2 with
//! that angle as their `rho4`. The remaining vertices `r5`, `r6`, `r7` (at 60,
//! 180, 300 degrees) receive `t` from `r1` and one angle from each of two
//! igloo neighbours, and are solved as 2-DOF igloos.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{Rotation3, Unit};
use serde::{Deserialize, Serialize};

use super::{igloo_1dof, igloo_rho1, igloo_rho4, trifold};
use crate::error::{FoldError, Result};
use crate::geometry::{
    closure_residual, normalize_angle, CreasePattern, FoldAngleVector, Mat3, Vec3,
};

/// Closure accepted at each vertex of the patch.
pub const RESCH_TOL: f64 = 1e-6;

const THIRD: f64 = PI / 3.0;
const SCAN: usize = 720;
const MATCH_TOL: f64 = 1e-9;

/// Lattice coordinates `(a, b)` for the point `a e1 + b e2`, `e1 = (1, 0)`,
/// `e2 = (1/2, sqrt3/2)`.
type Lattice = (i32, i32);

/// Unit steps in the six crease directions, `k * 60` degrees.
const STEPS: [Lattice; 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReschVertex {
    /// 1 to 7.
    pub id: usize,
    pub position: [f64; 2],
    /// Global direction of local crease 1, in multiples of 60 degrees.
    pub first_crease: usize,
    pub rho: FoldAngleVector,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReschFolding {
    pub drive: f64,
    pub vertices: Vec<ReschVertex>,
}

impl ReschFolding {
    pub fn vertex(&self, id: usize) -> Option<&ReschVertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn max_residual(&self) -> f64 {
        self.vertices.iter().map(|v| v.residual).fold(0.0, f64::max)
    }
}

fn vertex_site(id: usize) -> (Lattice, usize) {
    // (lattice point, direction of local crease 1)
    match id {
        1 => ((0, 0), 0),
        2 => (STEPS[0], 0),
        3 => (STEPS[2], 2),
        4 => (STEPS[4], 4),
        5 => (STEPS[1], 4),
        6 => (STEPS[3], 0),
        _ => (STEPS[5], 2),
    }
}

fn to_plane(p: Lattice) -> [f64; 2] {
    let (a, b) = (p.0 as f64, p.1 as f64);
    [a + 0.5 * b, 3f64.sqrt() / 2.0 * b]
}

fn add(p: Lattice, q: Lattice) -> Lattice {
    (p.0 + q.0, p.1 + q.1)
}

/// Angle carried by the crease of vertex `id` pointing in global direction `dir`.
fn angle_towards(v: &ReschVertex, dir: usize) -> f64 {
    v.rho.as_slice()[(dir + 6 - v.first_crease) % 6]
}

fn make_vertex(id: usize, rho: Vec<f64>) -> Result<ReschVertex> {
    let (site, first) = vertex_site(id);
    let rho = FoldAngleVector::new(rho)?;
    let residual = closure_residual(&CreasePattern::g60(), &rho)?;
    if residual >= RESCH_TOL {
        return Err(FoldError::Vertex {
            vertex: id,
            source: Box::new(FoldError::NotClosed { residual }),
        });
    }
    Ok(ReschVertex {
        id,
        position: to_plane(site),
        first_crease: first,
        rho,
        residual,
    })
}

/// The `rho3` with `igloo_rho1(60, 60, x, rho3) = t` closest to flat.
fn match_rho3(x: f64, t: f64) -> Result<f64> {
    let f = |r3: f64| -> Result<f64> { Ok(normalize_angle(igloo_rho1(THIRD, THIRD, x, r3)? - t)) };
    let mut best: Option<f64> = None;
    let mut keep = |r: f64| {
        if best.is_none_or(|b| r.abs() < b.abs()) {
            best = Some(r);
        }
    };
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=SCAN {
        let b = -PI + 2.0 * PI * i as f64 / SCAN as f64;
        let fb = match f(b) {
            Ok(v) => v,
            Err(_) => {
                prev = None;
                continue;
            }
        };
        if fb == 0.0 {
            keep(b);
        }
        if let Some((mut a, mut fa)) = prev {
            // Sign changes across the +-pi wrap are not roots.
            if fa * fb < 0.0 && (fa - fb).abs() < PI {
                let mut hi = b;
                for _ in 0..200 {
                    let m = 0.5 * (a + hi);
                    if m <= a || m >= hi {
                        break;
                    }
                    let fm = f(m)?;
                    if fa * fm <= 0.0 {
                        hi = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                keep(0.5 * (a + hi));
            }
        }
        prev = Some((b, fb));
    }
    best.ok_or_else(|| {
        FoldError::Inconsistent(format!("no rho3 matches drive {t} for incoming {x}"))
    })
}

/// Fold angles at all seven interior vertices for drive `t`.
pub fn resch_fold(t: f64) -> Result<ReschFolding> {
    let (t1, _) = trifold(THIRD, 1, t).map_err(|e| FoldError::Vertex {
        vertex: 1,
        source: Box::new(e),
    })?;
    let mut vertices = vec![make_vertex(1, vec![t1, t, t1, t, t1, t])?];
    for id in 2..=4 {
        let (r1, r2, r3) = igloo_1dof(THIRD, THIRD, 2, t1).map_err(|e| FoldError::Vertex {
            vertex: id,
            source: Box::new(e),
        })?;
        vertices.push(make_vertex(id, vec![r1, r2, r3, t1, r3, r2])?);
    }
    // Outer vertices: local c1 points at r1, c2 and c6 at the two igloo
    // neighbours (one step clockwise and counterclockwise).
    for (id, cw, ccw) in [(5, 2, 3), (6, 3, 4), (7, 4, 2)] {
        let (site, first) = vertex_site(id);
        let incoming = |nb: usize| {
            let v = &vertices[nb - 1];
            let (nsite, _) = vertex_site(nb);
            let dir = direction(nsite, site).expect("neighbouring sites");
            angle_towards(v, dir)
        };
        let (x_cw, x_ccw) = (incoming(cw), incoming(ccw));
        debug_assert_eq!(direction(site, vertex_site(cw).0), Some((first + 1) % 6));
        if (x_cw - x_ccw).abs() > MATCH_TOL {
            return Err(FoldError::Vertex {
                vertex: id,
                source: Box::new(FoldError::Inconsistent(format!(
                    "incoming angles {x_cw} and {x_ccw} differ"
                ))),
            });
        }
        let wrap = |e| FoldError::Vertex {
            vertex: id,
            source: Box::new(e),
        };
        let r3 = match_rho3(x_cw, t).map_err(wrap)?;
        let r4 = igloo_rho4(THIRD, THIRD, x_cw, r3).map_err(wrap)?;
        vertices.push(make_vertex(id, vec![t, x_cw, r3, r4, r3, x_ccw])?);
    }
    Ok(ReschFolding { drive: t, vertices })
}

fn direction(from: Lattice, to: Lattice) -> Option<usize> {
    let d = (to.0 - from.0, to.1 - from.1);
    STEPS.iter().position(|&s| s == d)
}

/// Symmetric drive interval on which every vertex folds, found by bisection.
pub fn resch_reachable_interval() -> Result<(f64, f64)> {
    let ok = |t: f64| resch_fold(t).is_ok();
    if !ok(0.0) {
        return Err(FoldError::EmptyInterval);
    }
    let (mut lo, mut hi) = (0.0, PI);
    if ok(hi) && ok(-hi) {
        return Ok((-PI, PI));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) && ok(-mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((-lo, lo))
}

/// Folded triangle mesh of the patch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReschMesh {
    pub vertices: Vec<Vec3>,
    /// Counterclockwise in the flat sheet, 0-based.
    pub faces: Vec<[usize; 3]>,
}

impl ReschMesh {
    pub fn to_obj(&self) -> String {
        let mut s = String::from("o resch\n");
        for v in &self.vertices {
            let _ = writeln!(s, "v {:.12} {:.12} {:.12}", v.x, v.y, v.z);
        }
        for f in &self.faces {
            let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        s
    }
}

fn in_patch(p: Lattice) -> bool {
    let (a, b) = p;
    a.abs() <= 2 && b.abs() <= 2 && (a + b).abs() <= 2
}

fn lattice_points() -> Vec<Lattice> {
    let mut pts = Vec::new();
    for b in -2..=2 {
        for a in -2..=2 {
            if in_patch((a, b)) {
                pts.push((a, b));
            }
        }
    }
    pts
}

fn lattice_faces() -> Vec<[Lattice; 3]> {
    let mut faces = Vec::new();
    for p in lattice_points() {
        // Up and down triangles anchored at p.
        for tri in [
            [p, add(p, (1, 0)), add(p, (0, 1))],
            [p, add(p, (1, -1)), add(p, (1, 0))],
        ] {
            if tri.iter().all(|&q| in_patch(q)) {
                faces.push(tri);
            }
        }
    }
    faces
}

/// Rigid motion `x -> r x + s`.
#[derive(Clone, Copy)]
struct Motion {
    r: Mat3,
    s: Vec3,
}

impl Motion {
    fn apply(&self, x: Vec3) -> Vec3 {
        self.r * x + self.s
    }
}

fn lift(p: Lattice) -> Vec3 {
    let [x, y] = to_plane(p);
    Vec3::new(x, y, 0.0)
}

/// Places every face by walking across creases from the face at the origin
/// and checks that all faces agree on shared lattice points.
pub fn resch_mesh(folding: &ReschFolding) -> Result<ReschMesh> {
    // Fold angle of every edge with an interior endpoint.
    let mut edge_angle: HashMap<(Lattice, Lattice), f64> = HashMap::new();
    for v in &folding.vertices {
        let (site, _) = vertex_site(v.id);
        for (dir, &step) in STEPS.iter().enumerate() {
            let q = add(site, step);
            let rho = angle_towards(v, dir);
            let key = if site < q { (site, q) } else { (q, site) };
            if let Some(&old) = edge_angle.get(&key) {
                if (old - rho).abs() > MATCH_TOL {
                    return Err(FoldError::Inconsistent(format!(
                        "crease {key:?} carries {old} and {rho}"
                    )));
                }
            }
            edge_angle.insert(key, rho);
        }
    }
    let points = lattice_points();
    let index: HashMap<Lattice, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let faces = lattice_faces();
    let mut by_edge: HashMap<(Lattice, Lattice), Vec<usize>> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let (p, q) = (f[k], f[(k + 1) % 3]);
            let key = if p < q { (p, q) } else { (q, p) };
            by_edge.entry(key).or_default().push(fi);
        }
    }
    let start = faces
        .iter()
        .position(|f| f.contains(&(0, 0)))
        .expect("the origin is in the patch");
    let mut motion: Vec<Option<Motion>> = vec![None; faces.len()];
    motion[start] = Some(Motion {
        r: Mat3::identity(),
        s: Vec3::zeros(),
    });
    let mut queue = VecDeque::from([start]);
    while let Some(fi) = queue.pop_front() {
        let m = motion[fi].expect("queued faces are placed");
        for k in 0..3 {
            let (p, q) = (faces[fi][k], faces[fi][(k + 1) % 3]);
            let key = if p < q { (p, q) } else { (q, p) };
            for &gi in &by_edge[&key] {
                if gi == fi || motion[gi].is_some() {
                    continue;
                }
                let rho = *edge_angle.get(&key).ok_or_else(|| {
                    FoldError::Inconsistent(format!("edge {key:?} has no fold angle"))
                })?;
                let (a, b) = (lift(key.0), lift(key.1));
                let axis = b - a;
                let centroid = faces[gi].iter().map(|&x| lift(x)).sum::<Vec3>() / 3.0;
                // Crossing onto the left of the axis is the positive direction.
                let left = axis.x * (centroid.y - a.y) - axis.y * (centroid.x - a.x) > 0.0;
                let phi = if left { rho } else { -rho };
                let rot = Rotation3::from_axis_angle(&Unit::new_normalize(axis), phi).into_inner();
                // x -> m(a + rot (x - a))
                let r = m.r * rot;
                let s = m.apply(a) - r * a;
                motion[gi] = Some(Motion { r, s });
                queue.push_back(gi);
            }
        }
    }
    let mut placed: Vec<Option<Vec3>> = vec![None; points.len()];
    for (fi, f) in faces.iter().enumerate() {
        let m =
            motion[fi].ok_or_else(|| FoldError::Inconsistent("patch is disconnected".into()))?;
        for &p in f {
            let x = m.apply(lift(p));
            let slot = &mut placed[index[&p]];
            match slot {
                Some(y) if (x - *y).norm() > RESCH_TOL => {
                    return Err(FoldError::Inconsistent(format!(
                        "faces disagree on lattice point {p:?} by {:.3e}",
                        (x - *y).norm()
                    )));
                }
                Some(_) => {}
                None => *slot = Some(x),
            }
        }
    }
    Ok(ReschMesh {
        vertices: placed
            .into_iter()
            .map(|x| x.expect("every point is on a face"))
            .collect(),
        faces: faces
            .iter()
            .map(|f| [index[&f[0]], index[&f[1]], index[&f[2]]])
            .collect(),
    })
}
