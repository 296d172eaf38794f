//! Per-cell affine geometry and quadrature tables shared by assembly and
//! diagnostics.

use crate::mesh::Mesh;
use crate::spaces::{
    build_dofmaps, p2_triangle_basis, segment_quadrature, triangle_quadrature, DofLayout, QuadratureRule,
    P2_NODES,
};

/// Affine map `x = origin + B xi` of a triangle, `B = [p1 - p0 | p2 - p0]`.
#[derive(Debug, Clone, Copy)]
pub struct CellGeometry {
    pub origin: [f64; 2],
    pub jacobian: [[f64; 2]; 2],
    /// `B^{-T}`, mapping reference gradients to physical ones.
    pub inv_transpose: [[f64; 2]; 2],
    /// `det B = 2 |T|`.
    pub det: f64,
}

impl CellGeometry {
    pub fn new(corners: [[f64; 2]; 3]) -> Self {
        let [p0, p1, p2] = corners;
        let b = [[p1[0] - p0[0], p2[0] - p0[0]], [p1[1] - p0[1], p2[1] - p0[1]]];
        let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        // inverse of B, then transpose
        let inv = [[b[1][1] / det, -b[0][1] / det], [-b[1][0] / det, b[0][0] / det]];
        CellGeometry {
            origin: p0,
            jacobian: b,
            inv_transpose: [[inv[0][0], inv[1][0]], [inv[0][1], inv[1][1]]],
            det,
        }
    }

    #[inline]
    pub fn map(&self, xi: [f64; 2]) -> [f64; 2] {
        let b = &self.jacobian;
        [
            self.origin[0] + b[0][0] * xi[0] + b[0][1] * xi[1],
            self.origin[1] + b[1][0] * xi[0] + b[1][1] * xi[1],
        ]
    }

    pub fn to_reference(&self, x: [f64; 2]) -> [f64; 2] {
        let d = [x[0] - self.origin[0], x[1] - self.origin[1]];
        // B^{-1} = (B^{-T})^T
        let it = &self.inv_transpose;
        [it[0][0] * d[0] + it[1][0] * d[1], it[0][1] * d[0] + it[1][1] * d[1]]
    }

    #[inline]
    pub fn physical_gradient(&self, g: [f64; 2]) -> [f64; 2] {
        let it = &self.inv_transpose;
        [it[0][0] * g[0] + it[0][1] * g[1], it[1][0] * g[0] + it[1][1] * g[1]]
    }
}

/// Basis values and reference gradients at the points of a triangle rule.
#[derive(Debug, Clone)]
pub struct Tabulation {
    pub rule: QuadratureRule<2>,
    pub values: Vec<[f64; 6]>,
    pub ref_grads: Vec<[[f64; 2]; 6]>,
}

impl Tabulation {
    fn new(rule: QuadratureRule<2>) -> Self {
        let (values, ref_grads) = rule.points.iter().map(|p| p2_triangle_basis(*p)).unzip();
        Tabulation { rule, values, ref_grads }
    }
}

/// Interior quadrature degree for constant coefficients.
pub const CELL_DEGREE_CONSTANT: usize = 4;
/// Interior quadrature degree for spatially varying coefficients.
pub const CELL_DEGREE_VARYING: usize = 6;
/// Edge quadrature degree (4-point Gauss).
pub const EDGE_DEGREE: usize = 7;

/// A mesh together with its DOF layout, cell geometry and quadrature tables.
#[derive(Debug, Clone)]
pub struct Discretization {
    mesh: Mesh,
    layout: DofLayout,
    geometry: Vec<CellGeometry>,
    constant_tab: Tabulation,
    varying_tab: Tabulation,
    edge_rule: QuadratureRule<1>,
}

impl Discretization {
    pub fn new(mesh: Mesh) -> Self {
        let layout = build_dofmaps(&mesh);
        let geometry = (0..mesh.n_triangles())
            .map(|c| CellGeometry::new(mesh.cell_corners(c)))
            .collect();
        Discretization {
            layout,
            geometry,
            constant_tab: Tabulation::new(triangle_quadrature(CELL_DEGREE_CONSTANT).expect("supported degree")),
            varying_tab: Tabulation::new(triangle_quadrature(CELL_DEGREE_VARYING).expect("supported degree")),
            edge_rule: segment_quadrature(EDGE_DEGREE).expect("supported degree"),
            mesh,
        }
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn layout(&self) -> &DofLayout {
        &self.layout
    }

    pub fn geometry(&self, cell: usize) -> &CellGeometry {
        &self.geometry[cell]
    }

    /// Cell tabulation suited to coefficients that are constant or not.
    pub fn cell_tabulation(&self, constant_coefficients: bool) -> &Tabulation {
        if constant_coefficients {
            &self.constant_tab
        } else {
            &self.varying_tab
        }
    }

    pub fn edge_rule(&self) -> &QuadratureRule<1> {
        &self.edge_rule
    }

    /// Physical position of scalar node `node` of `cell`.
    pub fn node_position(&self, cell: usize, node: usize) -> [f64; 2] {
        self.geometry[cell].map(P2_NODES[node])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_and_inverse() {
        let g = CellGeometry::new([[0.1, 0.2], [1.0, 0.3], [0.4, 0.9]]);
        let xi = [0.25, 0.4];
        let back = g.to_reference(g.map(xi));
        assert!((back[0] - xi[0]).abs() < 1e-14 && (back[1] - xi[1]).abs() < 1e-14);
        assert!(g.det > 0.0);
    }

    #[test]
    fn physical_gradient_of_linear_function() {
        // f(x, y) = 2x - 3y, interpolated through the corner values.
        let corners = [[0.1, 0.2], [1.0, 0.3], [0.4, 0.9]];
        let g = CellGeometry::new(corners);
        let f = |p: [f64; 2]| 2.0 * p[0] - 3.0 * p[1];
        let fr = [f(corners[0]), f(corners[1]), f(corners[2])];
        let ref_grad = [fr[1] - fr[0], fr[2] - fr[0]];
        let phys = g.physical_gradient(ref_grad);
        assert!((phys[0] - 2.0).abs() < 1e-13 && (phys[1] + 3.0).abs() < 1e-13);
    }
}
