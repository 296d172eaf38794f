//! Post-hoc diagnostics: constraint and shape report, finite-difference
//! gradient oracle, boundary traction.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::boundary::{boundary_trace, perimeter, unit_speed_violation};
use crate::fe::Discretization;
use crate::forms::{augmented_energy, Assembler, FormsError, Problem};
use crate::state::{evaluate, interpolate, State};

/// Largest accepted `|perimeter - 2 pi|` for a converged run.
pub const PERIMETER_TOL: f64 = 1e-3;
/// Largest accepted `max | |d_theta X| - 1 |` for a converged run.
pub const SPEED_TOL: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeReport {
    pub perimeter: f64,
    pub max_speed_violation: f64,
    /// L2 norm of `|d_theta X|^2 - 1` over the boundary.
    pub l2_speed_violation: f64,
    /// Standard deviation of the boundary points' distances to their centroid.
    pub circularity: f64,
    /// Largest distance of a boundary point to the best-fit plane.
    pub planarity: f64,
    /// Unit normal of the best-fit plane, oriented along the vector area of
    /// the boundary polygon.
    pub plane_normal: [f64; 3],
    /// Signed distance of the plane from the origin, `centroid . normal`.
    pub plane_offset: f64,
    pub centroid: [f64; 3],
    /// Whether the boundary polygon, projected onto the best-fit plane, has
    /// two crossing non-adjacent segments.
    pub self_intersection_hint: bool,
}

impl ShapeReport {
    /// Perimeter and unit-speed thresholds.
    pub fn constraints_satisfied(&self) -> bool {
        (self.perimeter - 2.0 * PI).abs() <= PERIMETER_TOL && self.max_speed_violation < SPEED_TOL
    }
}

/// Boundary trace sampled at every boundary vertex (from the edge starting
/// there) and edge midpoint, in loop order.
pub fn boundary_points(disc: &Discretization, state: &State) -> Vec<[f64; 3]> {
    boundary_trace(disc, state)
        .iter()
        .flat_map(|tr| [tr.coeffs[0], tr.coeffs[2]])
        .collect()
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Least-squares plane through `points`: centroid and unit normal.
fn best_fit_plane(points: &[[f64; 3]]) -> ([f64; 3], [f64; 3]) {
    let n = points.len() as f64;
    let mut c = [0.0; 3];
    for p in points {
        for i in 0..3 {
            c[i] += p[i] / n;
        }
    }
    let mut cov = Matrix3::<f64>::zeros();
    for p in points {
        let d = Vector3::from(sub(*p, c));
        cov += d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let k = eig.eigenvalues.imin();
    let v = eig.eigenvectors.column(k).normalize();
    let mut normal = [v[0], v[1], v[2]];
    // orient by the right-hand rule along the loop
    let mut area = [0.0; 3];
    for k in 0..points.len() {
        let a = cross(sub(points[k], c), sub(points[(k + 1) % points.len()], c));
        for i in 0..3 {
            area[i] += 0.5 * a[i];
        }
    }
    if dot(area, normal) < 0.0 {
        normal = normal.map(|x| -x);
    }
    (c, normal)
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Tests every pair of non-adjacent segments of the closed polygon after
/// projection onto the plane with the given normal.
pub fn polygon_self_intersects(points: &[[f64; 3]], normal: [f64; 3]) -> bool {
    let helper = if normal[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = {
        let v = cross(normal, helper);
        let l = dot(v, v).sqrt();
        v.map(|x| x / l)
    };
    let e2 = cross(normal, e1);
    let proj: Vec<[f64; 2]> = points.iter().map(|p| [dot(*p, e1), dot(*p, e2)]).collect();
    let n = proj.len();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(proj[i], proj[(i + 1) % n], proj[j], proj[(j + 1) % n]) {
                return true;
            }
        }
    }
    false
}

pub fn constraint_report(disc: &Discretization, state: &State) -> ShapeReport {
    let points = boundary_points(disc, state);
    let (centroid, normal) = best_fit_plane(&points);
    let dists: Vec<f64> = points.iter().map(|p| dot(sub(*p, centroid), sub(*p, centroid)).sqrt()).collect();
    let mean = dists.iter().sum::<f64>() / dists.len() as f64;
    let circularity = (dists.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / dists.len() as f64).sqrt();
    let planarity = points
        .iter()
        .map(|p| dot(sub(*p, centroid), normal).abs())
        .fold(0.0, f64::max);
    let (max_speed_violation, l2_speed_violation) = unit_speed_violation(disc, state);
    ShapeReport {
        perimeter: perimeter(disc, state),
        max_speed_violation,
        l2_speed_violation,
        circularity,
        planarity,
        plane_normal: normal,
        plane_offset: dot(centroid, normal),
        centroid,
        self_intersection_hint: polygon_self_intersects(&points, normal),
    }
}

/// Outcome of [`fd_gradient_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct GradientCheck {
    /// `max |fd - g| / max(|g|, 1)` over the tested coordinates.
    pub max_error: f64,
    pub membrane_max_error: f64,
    pub multiplier_max_error: f64,
    pub coordinates: Vec<usize>,
}

/// Coordinates tested (fewer only if the state itself is smaller); at most
/// half come from the multiplier block.
pub const FD_COORDINATES: usize = 120;

/// Compares the residual with central differences of the augmented energy on
/// a seeded random subset of coordinates drawn from both blocks. Entries with
/// `|g| < 1` are compared in absolute terms.
pub fn fd_gradient_check(
    disc: &Discretization,
    problem: &Problem,
    state: &State,
    h: f64,
    seed: u64,
) -> Result<GradientCheck, FormsError> {
    let layout = disc.layout();
    let g = Assembler::new(disc, *problem)?.residual(state)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = |offset: usize, len: usize, k: usize| -> Vec<usize> {
        let mut v: Vec<usize> = sample(&mut rng, len, k.min(len)).into_iter().map(|i| offset + i).collect();
        v.sort_unstable();
        v
    };
    let n_multiplier = (FD_COORDINATES / 2).min(layout.multiplier_total);
    let mut coordinates = pick(0, layout.membrane_total, FD_COORDINATES - n_multiplier);
    coordinates.extend(pick(layout.membrane_total, layout.multiplier_total, n_multiplier));
    let z = state.to_vector();
    let energy_at = |zz: &[f64]| -> Result<f64, FormsError> {
        let s = State::from_vector(layout, zz)?;
        Ok(augmented_energy(disc, problem, &s)?.total)
    };
    let (mut membrane, mut multiplier) = (0.0f64, 0.0f64);
    for &i in &coordinates {
        let mut zz = z.clone();
        zz[i] = z[i] + h;
        let ep = energy_at(&zz)?;
        zz[i] = z[i] - h;
        let em = energy_at(&zz)?;
        let fd = (ep - em) / (2.0 * h);
        let err = (fd - g[i]).abs() / g[i].abs().max(1.0);
        if i < layout.membrane_total {
            membrane = membrane.max(err);
        } else {
            multiplier = multiplier.max(err);
        }
    }
    Ok(GradientCheck {
        max_error: membrane.max(multiplier),
        membrane_max_error: membrane,
        multiplier_max_error: multiplier,
        coordinates,
    })
}

/// A smooth random membrane field plus small noise, with a random multiplier.
pub fn random_state(disc: &Discretization, seed: u64) -> State {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: [f64; 9] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let mut s = interpolate(disc, |[u, v]| {
        [
            u + c[0] * v + c[1] * u * v,
            v + c[2] * u * u + c[3] * v * v,
            c[4] + c[5] * u + c[6] * v + c[7] * u * v + c[8] * v * v,
        ]
    });
    for x in s.x.iter_mut() {
        *x += 1e-2 * rng.random_range(-1.0..1.0);
    }
    for l in s.l.iter_mut() {
        *l = rng.random_range(-2.0..2.0);
    }
    s
}

/// Cumulative boundary integral `F(theta) = int (C grad X) nu ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct TractionProfile {
    /// `(theta, F(theta))`, starting at the first loop vertex with `F = 0`
    /// and followed by one sample at the end of every boundary edge.
    pub samples: Vec<(f64, [f64; 3])>,
}

pub fn traction_profile(disc: &Discretization, problem: &Problem, state: &State) -> TractionProfile {
    let mesh = disc.mesh();
    let loop_ = mesh.boundary_loop();
    let mut acc = [0.0; 3];
    let mut samples = Vec::with_capacity(loop_.len() + 1);
    samples.push((loop_.first().map_or(0.0, |b| b.theta_range.0), acc));
    for b in loop_ {
        let geo = disc.geometry(b.cell);
        let [p0, p1] = b.endpoints.map(|v| mesh.vertices()[v]);
        for (t, w) in disc.edge_rule().iter() {
            let x = [p0[0] + t[0] * (p1[0] - p0[0]), p0[1] + t[0] * (p1[1] - p0[1])];
            let (_, grad) = evaluate(disc, state, b.cell, geo.to_reference(x));
            let flux = problem.tensor.apply(x, &grad);
            let nu = b.outward_normal;
            for i in 0..3 {
                acc[i] += w * b.length * (flux[i][0] * nu[0] + flux[i][1] * nu[1]);
            }
        }
        samples.push((b.theta_range.1, acc));
    }
    TractionProfile { samples }
}
