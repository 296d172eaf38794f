//! Tangential calculus on the boundary trace.
//!
//! Each boundary edge is pulled back to `t in [0, 1]` through the affine angle
//! map `theta(t) = theta_1 + t dtheta` using the exact endpoint angles, so
//! `d_theta = (d/dt) / dtheta` and `d2_theta = (d2/dt2) / dtheta^2`.
//! Derivatives are edgewise; nothing couples neighbouring edges at a vertex.

use crate::fe::Discretization;
use crate::spaces::{p2_segment_basis, segment_quadrature};
use crate::state::State;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundaryError {
    #[error("boundary edge has non-positive angular width {0}")]
    ZeroWidth(f64),
}

/// Trace of the membrane field on one boundary edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeTrace {
    /// `coeffs[s][i]`: component `i` at segment node `s` (start, end, midpoint).
    pub coeffs: [[f64; 3]; 3],
    pub theta_range: (f64, f64),
}

/// Value and first/second angular derivatives of a trace at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentialJet {
    pub value: [f64; 3],
    pub d_theta: [f64; 3],
    pub d2_theta: [f64; 3],
}

impl EdgeTrace {
    pub fn theta_width(&self) -> f64 {
        self.theta_range.1 - self.theta_range.0
    }

    pub fn theta_at(&self, t: f64) -> f64 {
        self.theta_range.0 + t * self.theta_width()
    }
}

pub fn tangential_derivatives(trace: &EdgeTrace, t: f64) -> Result<TangentialJet, BoundaryError> {
    let width = trace.theta_width();
    if !(width > 0.0) {
        return Err(BoundaryError::ZeroWidth(width));
    }
    let (n, dn, d2n) = p2_segment_basis(t);
    let mut jet = TangentialJet {
        value: [0.0; 3],
        d_theta: [0.0; 3],
        d2_theta: [0.0; 3],
    };
    for s in 0..3 {
        for i in 0..3 {
            let c = trace.coeffs[s][i];
            jet.value[i] += n[s] * c;
            jet.d_theta[i] += dn[s] * c / width;
            jet.d2_theta[i] += d2n[s] * c / (width * width);
        }
    }
    Ok(jet)
}

pub fn edge_trace(disc: &Discretization, state: &State, edge: usize) -> EdgeTrace {
    let layout = disc.layout();
    let b = &disc.mesh().boundary_loop()[edge];
    let nodes = layout.boundary_trace_nodes(edge);
    let mut coeffs = [[0.0; 3]; 3];
    for (s, &node) in nodes.iter().enumerate() {
        for (i, c) in coeffs[s].iter_mut().enumerate() {
            *c = state.x[layout.membrane_dof(b.cell, node, i)];
        }
    }
    EdgeTrace {
        coeffs,
        theta_range: b.theta_range,
    }
}

/// Traces of all boundary edges in loop order.
pub fn boundary_trace(disc: &Discretization, state: &State) -> Vec<EdgeTrace> {
    (0..disc.layout().n_boundary_edges())
        .map(|e| edge_trace(disc, state, e))
        .collect()
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `int |d_theta X| dtheta` over the boundary.
pub fn perimeter(disc: &Discretization, state: &State) -> f64 {
    let rule = disc.edge_rule();
    boundary_trace(disc, state)
        .iter()
        .map(|tr| {
            let width = tr.theta_width();
            rule.iter()
                .map(|(p, w)| {
                    let jet = tangential_derivatives(tr, p[0]).expect("mesh edges have positive width");
                    w * width * norm(jet.d_theta)
                })
                .sum::<f64>()
        })
        .sum()
}

/// Maximum of `| |d_theta X| - 1 |` over boundary quadrature points and the
/// L2 norm of `|d_theta X|^2 - 1` over the boundary.
pub fn unit_speed_violation(disc: &Discretization, state: &State) -> (f64, f64) {
    let rule = disc.edge_rule();
    // the squared defect has degree 8 in t
    let fine = segment_quadrature(9).expect("supported degree");
    let mut max_violation: f64 = 0.0;
    let mut l2_sq = 0.0;
    for tr in boundary_trace(disc, state) {
        let width = tr.theta_width();
        for (p, _) in rule.iter() {
            let jet = tangential_derivatives(&tr, p[0]).expect("mesh edges have positive width");
            max_violation = max_violation.max((norm(jet.d_theta) - 1.0).abs());
        }
        for (p, w) in fine.iter() {
            let jet = tangential_derivatives(&tr, p[0]).expect("mesh edges have positive width");
            let s = norm(jet.d_theta);
            l2_sq += w * width * (s * s - 1.0).powi(2);
        }
    }
    (max_violation, l2_sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_disc_mesh;
    use crate::state::interpolate;
    use std::f64::consts::PI;

    fn rotation() -> [[f64; 3]; 3] {
        let (a, b) = (0.7f64, -1.1f64);
        let rz = [[a.cos(), -a.sin(), 0.0], [a.sin(), a.cos(), 0.0], [0.0, 0.0, 1.0]];
        let rx = [[1.0, 0.0, 0.0], [0.0, b.cos(), -b.sin()], [0.0, b.sin(), b.cos()]];
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = (0..3).map(|k| rz[i][k] * rx[k][j]).sum();
            }
        }
        r
    }

    fn rotate(r: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| (0..3).map(|k| r[i][k] * v[k]).sum())
    }

    fn sample() -> EdgeTrace {
        EdgeTrace {
            coeffs: [[0.3, -0.2, 1.0], [0.9, 0.4, -0.5], [0.5, 0.6, 0.1]],
            theta_range: (0.4, 0.4 + 2.0 * PI / 40.0),
        }
    }

    #[test]
    fn linear_trace_has_no_curvature() {
        let tr = EdgeTrace {
            coeffs: [[0.0, 1.0, 2.0], [1.0, 3.0, 0.0], [0.5, 2.0, 1.0]],
            theta_range: (0.0, 0.3),
        };
        let jet = tangential_derivatives(&tr, 0.27).unwrap();
        assert!(jet.d2_theta.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn chain_rule_scaling() {
        let width = 2.0 * PI / 252.0;
        let tr = EdgeTrace {
            coeffs: [[0.0; 3], [1.0, 0.0, 0.0], [0.5, 0.0, 0.0]],
            theta_range: (1.0, 1.0 + width),
        };
        let jet = tangential_derivatives(&tr, 0.3).unwrap();
        assert!((jet.d_theta[0] - 252.0 / (2.0 * PI)).abs() < 1e-10);
        assert_eq!(&jet.d_theta[1..], &[0.0, 0.0]);
    }

    #[test]
    fn zero_width_is_rejected() {
        let mut tr = sample();
        tr.theta_range = (1.0, 1.0);
        assert_eq!(tangential_derivatives(&tr, 0.5), Err(BoundaryError::ZeroWidth(0.0)));
    }

    #[test]
    fn curvature_is_edgewise_constant() {
        let tr = sample();
        let a = tangential_derivatives(&tr, 0.1).unwrap().d2_theta;
        let b = tangential_derivatives(&tr, 0.85).unwrap().d2_theta;
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() <= 1e-13 * a[i].abs().max(1.0));
        }
    }

    #[test]
    fn central_differences_in_theta() {
        let tr = sample();
        let width = tr.theta_width();
        let h = 1e-6;
        for t in [0.2, 0.5, 0.77] {
            let jet = tangential_derivatives(&tr, t).unwrap();
            let plus = tangential_derivatives(&tr, t + h / width).unwrap().value;
            let minus = tangential_derivatives(&tr, t - h / width).unwrap().value;
            for i in 0..3 {
                let fd = (plus[i] - minus[i]) / (2.0 * h);
                assert!((fd - jet.d_theta[i]).abs() <= 1e-6 * jet.d_theta[i].abs().max(1.0));
            }
        }
    }

    #[test]
    fn rotation_equivariance() {
        let r = rotation();
        let tr = sample();
        let mut rotated = tr;
        for s in 0..3 {
            rotated.coeffs[s] = rotate(&r, tr.coeffs[s]);
        }
        let a = tangential_derivatives(&tr, 0.4).unwrap();
        let b = tangential_derivatives(&rotated, 0.4).unwrap();
        let (ra, rb) = (rotate(&r, a.d_theta), rotate(&r, a.d2_theta));
        for i in 0..3 {
            assert!((ra[i] - b.d_theta[i]).abs() < 1e-12 * a.d_theta[i].abs().max(1.0) * 10.0);
            assert!((rb[i] - b.d2_theta[i]).abs() < 1e-12 * a.d2_theta[i].abs().max(1.0) * 10.0);
        }
    }

    #[test]
    fn trace_matches_cell_polynomial() {
        let disc = Discretization::new(generate_disc_mesh(16, 0.5).unwrap());
        let f = |p: [f64; 2]| [p[0] * p[1], p[0] - 2.0 * p[1] * p[1], 1.0 + p[0]];
        let state = interpolate(&disc, f);
        for (e, b) in disc.mesh().boundary_loop().iter().enumerate() {
            let tr = edge_trace(&disc, &state, e);
            let [a, c] = b.endpoints.map(|v| disc.mesh().vertices()[v]);
            let mid = [0.5 * (a[0] + c[0]), 0.5 * (a[1] + c[1])];
            for (s, p) in [a, c, mid].into_iter().enumerate() {
                let exact = f(p);
                for i in 0..3 {
                    assert!((tr.coeffs[s][i] - exact[i]).abs() < 1e-12);
                }
            }
        }
    }

    fn disc_state(disc: &Discretization) -> State {
        interpolate(disc, |p| [-p[1], p[0], 0.0])
    }

    #[test]
    fn speed_of_the_disc_interpolant_is_the_chord_ratio() {
        let disc = Discretization::new(generate_disc_mesh(252, 0.5).unwrap());
        let state = disc_state(&disc);
        let dt = 2.0 * PI / 252.0;
        let expected = (dt / 2.0).sin() / (dt / 2.0);
        assert!((expected - 0.99997).abs() < 1e-5);
        let tr = edge_trace(&disc, &state, 17);
        let jet = tangential_derivatives(&tr, 0.3).unwrap();
        assert!((norm(jet.d_theta) - expected).abs() < 1e-12);
        let p = perimeter(&disc, &state);
        assert!((p - 2.0 * 252.0 * (PI / 252.0).sin()).abs() < 1e-11);
        let (max, _) = unit_speed_violation(&disc, &state);
        assert!((max - (1.0 - expected)).abs() < 1e-12);
    }

    #[test]
    fn perimeter_homogeneity_and_zero() {
        let disc = Discretization::new(generate_disc_mesh(16, 0.5).unwrap());
        let state = interpolate(&disc, |p| [p[0] + p[1] * p[1], p[1], p[0] * p[1]]);
        let p1 = perimeter(&disc, &state);
        let p2 = perimeter(&disc, &state.with_scaled_membrane(2.0));
        assert!((p2 - 2.0 * p1).abs() < 1e-12 * p1);
        let zero = State::zeros(disc.layout());
        assert_eq!(perimeter(&disc, &zero), 0.0);
        let (max, l2) = unit_speed_violation(&disc, &zero);
        assert_eq!(max, 1.0);
        assert!((l2 - (2.0 * PI).sqrt()).abs() < 1e-12);
    }
}
