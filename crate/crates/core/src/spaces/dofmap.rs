use crate::mesh::Mesh;

use super::basis::P2_EDGE_NODES;

/// 6 scalar nodes x 3 components.
pub const MEMBRANE_DOFS_PER_CELL: usize = 18;

/// Global numbering of the coupled unknowns `[membrane | multiplier]`.
///
/// Membrane: cell `c`, scalar node `a` (see [`super::P2_NODES`]) and
/// component `i` map to `18 c + 3 a + i`, so the three components of one node
/// are adjacent. Multiplier: the `k`-th boundary vertex of the loop maps to
/// `2 k` and the midpoint of the `k`-th boundary edge to `2 k + 1`, both offset
/// by `membrane_total`.
#[derive(Debug, Clone)]
pub struct DofLayout {
    pub membrane_total: usize,
    pub multiplier_total: usize,
    n_cells: usize,
    /// Per boundary edge: multiplier indices (relative to the multiplier
    /// block) of its start vertex, end vertex and midpoint.
    boundary_multiplier: Vec<[usize; 3]>,
    /// Per boundary edge: owning cell's local scalar nodes at the start vertex,
    /// end vertex and midpoint.
    boundary_trace_nodes: Vec<[usize; 3]>,
    /// Per interior edge: the local edge index in `T+` and in `T-`.
    interior_local_edges: Vec<[usize; 2]>,
}

/// Local edge index of the directed edge `a -> b` inside `tri`.
fn local_edge(tri: &[usize; 3], a: usize, b: usize) -> Option<usize> {
    (0..3).find(|&k| tri[k] == a && tri[(k + 1) % 3] == b)
}

pub fn build_dofmaps(mesh: &Mesh) -> DofLayout {
    let n_cells = mesh.n_triangles();
    let n_b = mesh.n_boundary_vertices();
    let boundary = mesh.boundary_loop();
    let boundary_multiplier = (0..n_b).map(|k| [2 * k, 2 * ((k + 1) % n_b), 2 * k + 1]).collect();
    let boundary_trace_nodes = boundary
        .iter()
        .map(|e| {
            let tri = &mesh.triangles()[e.cell];
            let k = local_edge(tri, e.endpoints[0], e.endpoints[1])
                .expect("boundary edge follows the orientation of its cell");
            P2_EDGE_NODES[k]
        })
        .collect();
    let interior_local_edges = mesh
        .interior_edges()
        .iter()
        .map(|e| {
            let [a, b] = e.endpoints;
            let plus = local_edge(&mesh.triangles()[e.cells[0]], a, b).expect("edge of T+");
            let minus = local_edge(&mesh.triangles()[e.cells[1]], b, a).expect("edge of T-");
            [plus, minus]
        })
        .collect();
    DofLayout {
        membrane_total: MEMBRANE_DOFS_PER_CELL * n_cells,
        multiplier_total: 2 * n_b,
        n_cells,
        boundary_multiplier,
        boundary_trace_nodes,
        interior_local_edges,
    }
}

impl DofLayout {
    pub fn total(&self) -> usize {
        self.membrane_total + self.multiplier_total
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_boundary_edges(&self) -> usize {
        self.boundary_multiplier.len()
    }

    #[inline]
    pub fn cell_to_global(&self, cell: usize, local: usize) -> usize {
        debug_assert!(local < MEMBRANE_DOFS_PER_CELL);
        MEMBRANE_DOFS_PER_CELL * cell + local
    }

    /// Global index of component `comp` at scalar node `node` of `cell`.
    #[inline]
    pub fn membrane_dof(&self, cell: usize, node: usize, comp: usize) -> usize {
        self.cell_to_global(cell, 3 * node + comp)
    }

    /// Global index of multiplier dof `local` (0 start vertex, 1 end vertex,
    /// 2 midpoint) on boundary edge `edge`.
    #[inline]
    pub fn boundary_to_global(&self, edge: usize, local: usize) -> usize {
        self.membrane_total + self.boundary_multiplier[edge][local]
    }

    /// Multiplier indices relative to the multiplier block.
    pub fn boundary_multiplier(&self, edge: usize) -> [usize; 3] {
        self.boundary_multiplier[edge]
    }

    /// Local scalar nodes of the owning cell on boundary edge `edge`, in
    /// segment order (start, end, midpoint).
    pub fn boundary_trace_nodes(&self, edge: usize) -> [usize; 3] {
        self.boundary_trace_nodes[edge]
    }

    pub fn interior_local_edges(&self, edge: usize) -> [usize; 2] {
        self.interior_local_edges[edge]
    }
}
