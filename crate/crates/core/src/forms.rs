//! Discrete augmented energy, its gradient (the residual) and Hessian (the
//! Newton Jacobian).
//!
//! Every term except the boundary multiplier coupling is quadratic in the
//! membrane coefficients, so the [`Assembler`] builds that part once as a
//! constant matrix `K0` and adds the state-dependent boundary terms on demand.
//! The energy itself is evaluated pointwise, independently of `K0`.

use rayon::prelude::*;

use crate::boundary::{edge_trace, tangential_derivatives, EdgeTrace};
use crate::fe::Discretization;
use crate::mesh::InteriorEdge;
use crate::spaces::{p2_segment_basis, p2_triangle_basis, MEMBRANE_DOFS_PER_CELL};
use crate::state::{State, StateError};
use crate::tensors::{frobenius, ElasticityField, Mat32};

pub use crate::sparse::SparseSymMatrix;

const NL: usize = MEMBRANE_DOFS_PER_CELL;
const REF_VERTICES: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

/// Physical parameters of the discrete problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem {
    /// Shear modulus weighting the membrane term.
    pub mu: f64,
    /// Interior penalty coefficient.
    pub alpha: f64,
    /// Anchor weight against rigid translations.
    pub epsilon: f64,
    pub tensor: ElasticityField,
}

impl Default for Problem {
    fn default() -> Self {
        Problem {
            mu: 1.0,
            alpha: 1e4,
            epsilon: 1e-5,
            tensor: ElasticityField::Identity,
        }
    }
}

impl Problem {
    /// `mu` and `alpha` must be positive, `epsilon` non-negative.
    pub fn validate(&self) -> Result<(), FormsError> {
        let checks = [
            ("mu", self.mu, self.mu > 0.0),
            ("alpha", self.alpha, self.alpha > 0.0),
            ("epsilon", self.epsilon, self.epsilon >= 0.0),
        ];
        for (name, value, ok) in checks {
            if !(ok && value.is_finite()) {
                return Err(FormsError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormsError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("invalid problem parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

/// The augmented energy split into its terms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBreakdown {
    pub bending: f64,
    pub membrane: f64,
    pub constraint: f64,
    pub sipg_consistency: f64,
    pub sipg_penalty: f64,
    pub anchor: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn parts(&self) -> [(&'static str, f64); 6] {
        [
            ("bending", self.bending),
            ("membrane", self.membrane),
            ("constraint", self.constraint),
            ("sipg_consistency", self.sipg_consistency),
            ("sipg_penalty", self.sipg_penalty),
            ("anchor", self.anchor),
        ]
    }
}

/// `[[X]] = (X+ - X-) (x) n+` and `{{C grad X}}`, the mean of the one-sided
/// fluxes.
pub fn apply_jump_average(
    edge: &InteriorEdge,
    plus_trace: [f64; 3],
    minus_trace: [f64; 3],
    plus_flux: &Mat32,
    minus_flux: &Mat32,
) -> (Mat32, Mat32) {
    let n = edge.normal;
    let mut jump = [[0.0; 2]; 3];
    let mut avg = [[0.0; 2]; 3];
    for i in 0..3 {
        let d = plus_trace[i] - minus_trace[i];
        jump[i] = [d * n[0], d * n[1]];
        avg[i] = [
            0.5 * (plus_flux[i][0] + minus_flux[i][0]),
            0.5 * (plus_flux[i][1] + minus_flux[i][1]),
        ];
    }
    (jump, avg)
}

/// Reference point at parameter `s` along local edge `k` (from vertex `k` to
/// vertex `k + 1`).
fn edge_point(k: usize, s: f64) -> [f64; 2] {
    let a = REF_VERTICES[k];
    let b = REF_VERTICES[(k + 1) % 3];
    [(1.0 - s) * a[0] + s * b[0], (1.0 - s) * a[1] + s * b[1]]
}

/// Both one-sided basis tabulations at one interior edge quadrature point.
struct EdgePoint {
    x: [f64; 2],
    dx: f64,
    phi: [[f64; 6]; 2],
    grad: [[[f64; 2]; 6]; 2],
}

fn interior_edge_points(disc: &Discretization, e: usize) -> Vec<EdgePoint> {
    let edge = &disc.mesh().interior_edges()[e];
    let [kp, km] = disc.layout().interior_local_edges(e);
    disc.edge_rule()
        .iter()
        .map(|(s, w)| {
            let s = s[0];
            // T- runs along the shared edge in the opposite direction.
            let xi = [edge_point(kp, s), edge_point(km, 1.0 - s)];
            let mut phi = [[0.0; 6]; 2];
            let mut grad = [[[0.0; 2]; 6]; 2];
            for side in 0..2 {
                let (v, d) = p2_triangle_basis(xi[side]);
                let geo = disc.geometry(edge.cells[side]);
                phi[side] = v;
                for a in 0..6 {
                    grad[side][a] = geo.physical_gradient(d[a]);
                }
            }
            EdgePoint {
                x: disc.geometry(edge.cells[0]).map(xi[0]),
                dx: w * edge.length,
                phi,
                grad,
            }
        })
        .collect()
}

/// `C (e_k (x) g)`.
fn unit_flux(tensor: ElasticityField, x: [f64; 2], k: usize, g: [f64; 2]) -> Mat32 {
    let mut m = [[0.0; 2]; 3];
    m[k] = g;
    tensor.apply(x, &m)
}

/// Membrane and anchor stiffness of one cell, `18 x 18` row-major.
fn cell_matrix(disc: &Discretization, problem: &Problem, cell: usize) -> Vec<f64> {
    let tab = disc.cell_tabulation(problem.tensor.is_constant());
    let geo = disc.geometry(cell);
    let mut k = vec![0.0; NL * NL];
    for (q, (xi, w)) in tab.rule.iter().enumerate() {
        let dx = w * geo.det.abs();
        let x = geo.map(*xi);
        let phi = &tab.values[q];
        let g: [[f64; 2]; 6] = std::array::from_fn(|a| geo.physical_gradient(tab.ref_grads[q][a]));
        for b in 0..6 {
            for kc in 0..3 {
                let col = 3 * b + kc;
                let flux = unit_flux(problem.tensor, x, kc, g[b]);
                for a in 0..6 {
                    for i in 0..3 {
                        let row = 3 * a + i;
                        let mut v = problem.mu * (flux[i][0] * g[a][0] + flux[i][1] * g[a][1]);
                        if i == kc {
                            v += problem.epsilon * phi[a] * phi[b];
                        }
                        k[row * NL + col] += dx * v;
                    }
                }
            }
        }
    }
    k
}

/// Vector mass matrix of one cell, `18 x 18` row-major.
fn cell_mass(disc: &Discretization, cell: usize) -> Vec<f64> {
    let tab = disc.cell_tabulation(true);
    let det = disc.geometry(cell).det.abs();
    let mut m = vec![0.0; NL * NL];
    for (q, (_, w)) in tab.rule.iter().enumerate() {
        let phi = &tab.values[q];
        for a in 0..6 {
            for b in 0..6 {
                let v = w * det * phi[a] * phi[b];
                for i in 0..3 {
                    m[(3 * a + i) * NL + 3 * b + i] += v;
                }
            }
        }
    }
    m
}

/// SIPG consistency and penalty on one interior edge, `36 x 36` row-major
/// over `[T+ dofs | T- dofs]`.
fn interior_edge_matrix(disc: &Discretization, problem: &Problem, e: usize) -> Vec<f64> {
    let edge = &disc.mesh().interior_edges()[e];
    let n = edge.normal;
    let penalty = problem.alpha / edge.length;
    let m = 2 * NL;
    let mut k = vec![0.0; m * m];
    for pt in interior_edge_points(disc, e) {
        // jump scalar and normal flux component of every basis function
        let mut jv = [0.0; 2 * NL];
        let mut fl = [[0.0; 3]; 2 * NL];
        for side in 0..2 {
            let sign = if side == 0 { 1.0 } else { -1.0 };
            for a in 0..6 {
                for c in 0..3 {
                    let idx = NL * side + 3 * a + c;
                    jv[idx] = sign * pt.phi[side][a];
                    let flux = unit_flux(problem.tensor, pt.x, c, pt.grad[side][a]);
                    for i in 0..3 {
                        fl[idx][i] = 0.5 * (flux[i][0] * n[0] + flux[i][1] * n[1]);
                    }
                }
            }
        }
        for r in 0..m {
            let ir = r % 3;
            for c in 0..m {
                let ic = c % 3;
                let mut v = -problem.mu * (jv[c] * fl[r][ic] + jv[r] * fl[c][ir]);
                if ir == ic {
                    v += penalty * jv[r] * jv[c];
                }
                k[r * m + c] += pt.dx * v;
            }
        }
    }
    k
}

/// Boundary bending stiffness of one edge, `9 x 9` over `(segment node, component)`.
fn bending_matrix(width: f64) -> [f64; 81] {
    let (_, _, d2) = p2_segment_basis(0.5);
    let scale = 2.0 / width.powi(3);
    let mut k = [0.0; 81];
    for s in 0..3 {
        for r in 0..3 {
            for i in 0..3 {
                k[(3 * s + i) * 9 + 3 * r + i] = scale * d2[s] * d2[r];
            }
        }
    }
    k
}

/// State-dependent multiplier terms of one boundary edge.
struct BoundaryLocal {
    constraint: f64,
    rx: [f64; 9],
    rl: [f64; 3],
    jxx: [f64; 81],
    jxl: [f64; 27],
}

/// Mass matrix of the quadratic segment basis (start, end, midpoint) over
/// an edge of `theta` width `width`.
fn multiplier_mass(width: f64) -> [f64; 9] {
    let base = [4.0, -1.0, 2.0, -1.0, 4.0, 2.0, 2.0, 2.0, 16.0];
    base.map(|v| v * width / 30.0)
}

fn boundary_local(disc: &Discretization, trace: &EdgeTrace, l: [f64; 3]) -> BoundaryLocal {
    let width = trace.theta_width();
    let mut out = BoundaryLocal {
        constraint: 0.0,
        rx: [0.0; 9],
        rl: [0.0; 3],
        jxx: [0.0; 81],
        jxl: [0.0; 27],
    };
    for (t, w) in disc.edge_rule().iter() {
        let (nv, dn, _) = p2_segment_basis(t[0]);
        let dtheta = w * width;
        let jet = tangential_derivatives(trace, t[0]).expect("mesh edges have positive width");
        let d = jet.d_theta;
        let speed_sq = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        let ell: f64 = (0..3).map(|r| nv[r] * l[r]).sum();
        out.constraint += dtheta * ell * (speed_sq - 1.0);
        for r in 0..3 {
            out.rl[r] += dtheta * nv[r] * (speed_sq - 1.0);
        }
        for s in 0..3 {
            let ds = dn[s] / width;
            for i in 0..3 {
                out.rx[3 * s + i] += dtheta * 2.0 * ell * ds * d[i];
                for q in 0..3 {
                    out.jxx[(3 * s + i) * 9 + 3 * q + i] += dtheta * 2.0 * ell * ds * dn[q] / width;
                }
                for r in 0..3 {
                    out.jxl[(3 * s + i) * 3 + r] += dtheta * 2.0 * nv[r] * ds * d[i];
                }
            }
        }
    }
    out
}

/// Assembles residuals and Jacobians for one discretization and problem.
#[derive(Debug, Clone)]
pub struct Assembler<'d> {
    disc: &'d Discretization,
    problem: Problem,
    k0: SparseSymMatrix,
    /// Membrane mass matrix on the pattern of `k0`.
    membrane_mass: SparseSymMatrix,
    /// Negated boundary mass matrix of the multiplier space, same pattern.
    multiplier_mass: SparseSymMatrix,
}

fn cell_dofs(cell: usize) -> Vec<usize> {
    (NL * cell..NL * (cell + 1)).collect()
}

impl<'d> Assembler<'d> {
    pub fn new(disc: &'d Discretization, problem: Problem) -> Result<Self, FormsError> {
        problem.validate()?;
        let mesh = disc.mesh();
        let layout = disc.layout();
        let n_cells = mesh.n_triangles();

        // Sparsity: each cell couples to itself and its edge neighbours, and
        // a boundary cell couples to the multiplier of its boundary edges.
        let mut neighbours: Vec<Vec<usize>> = (0..n_cells).map(|c| vec![c]).collect();
        for e in mesh.interior_edges() {
            let [p, m] = e.cells;
            neighbours[p].push(m);
            neighbours[m].push(p);
        }
        let mut cell_multipliers: Vec<Vec<usize>> = vec![Vec::new(); n_cells];
        let mut multiplier_cells: Vec<Vec<usize>> = vec![Vec::new(); layout.multiplier_total];
        for (k, b) in mesh.boundary_loop().iter().enumerate() {
            for local in 0..3 {
                let g = layout.boundary_to_global(k, local);
                cell_multipliers[b.cell].push(g);
                multiplier_cells[g - layout.membrane_total].push(b.cell);
            }
        }
        let mut rows = Vec::with_capacity(layout.total());
        for c in 0..n_cells {
            let mut cols: Vec<usize> = neighbours[c].iter().flat_map(|&d| cell_dofs(d)).collect();
            cols.extend_from_slice(&cell_multipliers[c]);
            for _ in 0..NL {
                rows.push(cols.clone());
            }
        }
        // Multipliers also couple along their boundary edges, so that the
        // stabilized Jacobian fits the same pattern.
        let mut multiplier_neighbours: Vec<Vec<usize>> = vec![Vec::new(); layout.multiplier_total];
        for k in 0..layout.n_boundary_edges() {
            let m = layout.boundary_multiplier(k);
            for &a in &m {
                multiplier_neighbours[a].extend(m.iter().map(|&b| b + layout.membrane_total));
            }
        }
        for (cells, extra) in multiplier_cells.iter().zip(multiplier_neighbours) {
            let mut cols: Vec<usize> = cells.iter().flat_map(|&d| cell_dofs(d)).collect();
            cols.extend(extra);
            rows.push(cols);
        }
        let mut k0 = SparseSymMatrix::from_pattern(layout.total(), rows);

        let cells: Vec<Vec<f64>> = (0..n_cells)
            .into_par_iter()
            .map(|c| cell_matrix(disc, &problem, c))
            .collect();
        for (c, k) in cells.iter().enumerate() {
            let dofs = cell_dofs(c);
            k0.add_dense(&dofs, &dofs, k);
        }
        let edges: Vec<Vec<f64>> = (0..mesh.interior_edges().len())
            .into_par_iter()
            .map(|e| interior_edge_matrix(disc, &problem, e))
            .collect();
        for (e, k) in edges.iter().enumerate() {
            let [p, m] = mesh.interior_edges()[e].cells;
            let mut dofs = cell_dofs(p);
            dofs.extend(cell_dofs(m));
            k0.add_dense(&dofs, &dofs, k);
        }
        for (k, b) in mesh.boundary_loop().iter().enumerate() {
            let dofs = Self::trace_dofs(disc, k);
            k0.add_dense(&dofs, &dofs, &bending_matrix(b.theta_width()));
        }
        let mut membrane_mass = k0.clone();
        membrane_mass.values_mut().fill(0.0);
        let mut multiplier_block = membrane_mass.clone();
        for c in 0..n_cells {
            let dofs = cell_dofs(c);
            membrane_mass.add_dense(&dofs, &dofs, &cell_mass(disc, c));
        }
        for (k, b) in mesh.boundary_loop().iter().enumerate() {
            let ld: [usize; 3] = std::array::from_fn(|r| layout.boundary_to_global(k, r));
            let block = multiplier_mass(b.theta_width()).map(|v| -v);
            multiplier_block.add_dense(&ld, &ld, &block);
        }
        Ok(Assembler {
            disc,
            problem,
            k0,
            membrane_mass,
            multiplier_mass: multiplier_block,
        })
    }

    pub fn discretization(&self) -> &'d Discretization {
        self.disc
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    /// Global membrane dofs of the trace on boundary edge `k`, ordered
    /// `(segment node, component)`.
    fn trace_dofs(disc: &Discretization, k: usize) -> [usize; 9] {
        let layout = disc.layout();
        let cell = disc.mesh().boundary_loop()[k].cell;
        let nodes = layout.boundary_trace_nodes(k);
        std::array::from_fn(|j| layout.membrane_dof(cell, nodes[j / 3], j % 3))
    }

    fn multiplier_dofs(&self, k: usize) -> [usize; 3] {
        std::array::from_fn(|r| self.disc.layout().boundary_to_global(k, r))
    }

    fn boundary_locals(&self, state: &State) -> Vec<BoundaryLocal> {
        (0..self.disc.layout().n_boundary_edges())
            .into_par_iter()
            .map(|k| {
                let trace = edge_trace(self.disc, state, k);
                let l = self.multiplier_dofs(k).map(|g| state.l[g - self.disc.layout().membrane_total]);
                boundary_local(self.disc, &trace, l)
            })
            .collect()
    }

    pub fn residual(&self, state: &State) -> Result<Vec<f64>, FormsError> {
        state.validate(self.disc.layout())?;
        let z = state.to_vector();
        let mut r = self.k0.matvec(&z);
        for (k, local) in self.boundary_locals(state).iter().enumerate() {
            for (j, g) in Self::trace_dofs(self.disc, k).into_iter().enumerate() {
                r[g] += local.rx[j];
            }
            for (j, g) in self.multiplier_dofs(k).into_iter().enumerate() {
                r[g] += local.rl[j];
            }
        }
        Ok(r)
    }

    pub fn jacobian(&self, state: &State) -> Result<SparseSymMatrix, FormsError> {
        state.validate(self.disc.layout())?;
        let mut j = self.k0.clone();
        for (k, local) in self.boundary_locals(state).iter().enumerate() {
            let xd = Self::trace_dofs(self.disc, k);
            let ld = self.multiplier_dofs(k);
            j.add_dense(&xd, &xd, &local.jxx);
            j.add_dense(&xd, &ld, &local.jxl);
            let transposed: Vec<f64> = (0..27).map(|idx| local.jxl[(idx % 9) * 3 + idx / 9]).collect();
            j.add_dense(&ld, &xd, &transposed);
        }
        Ok(j)
    }

    /// The Jacobian shifted by `diag(delta_x M_x, -delta_l M_l)`, where `M_x`
    /// is the membrane mass matrix and `M_l` the boundary mass matrix of the
    /// multiplier space in `theta`. The shift follows the inertia of the
    /// saddle-point matrix and regularizes directions that the Jacobian does
    /// not control: rigid motions the energy is invariant under and multiplier
    /// modes the constraint linearization does not see.
    pub fn stabilized_jacobian(&self, state: &State, delta_x: f64, delta_l: f64) -> Result<SparseSymMatrix, FormsError> {
        let mut j = self.jacobian(state)?;
        for (v, (mx, ml)) in j
            .values_mut()
            .iter_mut()
            .zip(self.membrane_mass.values().iter().zip(self.multiplier_mass.values()))
        {
            *v += delta_x * mx + delta_l * ml;
        }
        Ok(j)
    }

    /// `M_x t` for the three rigid translations `t` of the membrane, padded
    /// with zeros on the multiplier block.
    pub fn translation_loads(&self) -> [Vec<f64>; 3] {
        let layout = self.disc.layout();
        std::array::from_fn(|i| {
            let t: Vec<f64> = (0..layout.total())
                .map(|d| if d < layout.membrane_total && d % 3 == i { 1.0 } else { 0.0 })
                .collect();
            self.membrane_mass.matvec(&t)
        })
    }

    pub fn energy(&self, state: &State) -> Result<EnergyBreakdown, FormsError> {
        augmented_energy(self.disc, &self.problem, state)
    }
}

/// Pointwise quadrature of every term of the augmented energy.
pub fn augmented_energy(
    disc: &Discretization,
    problem: &Problem,
    state: &State,
) -> Result<EnergyBreakdown, FormsError> {
    problem.validate()?;
    state.validate(disc.layout())?;
    let mesh = disc.mesh();
    let tensor = problem.tensor;
    let tab = disc.cell_tabulation(tensor.is_constant());

    let cell_terms: Vec<(f64, f64)> = (0..mesh.n_triangles())
        .into_par_iter()
        .map(|cell| {
            let geo = disc.geometry(cell);
            let coeffs = state.cell_coefficients(cell);
            let (mut membrane, mut anchor) = (0.0, 0.0);
            for (q, (xi, w)) in tab.rule.iter().enumerate() {
                let dx = w * geo.det.abs();
                let mut value = [0.0; 3];
                let mut grad = [[0.0; 2]; 3];
                for a in 0..6 {
                    let g = geo.physical_gradient(tab.ref_grads[q][a]);
                    for i in 0..3 {
                        value[i] += tab.values[q][a] * coeffs[a][i];
                        grad[i][0] += coeffs[a][i] * g[0];
                        grad[i][1] += coeffs[a][i] * g[1];
                    }
                }
                let flux = tensor.apply(geo.map(*xi), &grad);
                membrane += dx * 0.5 * problem.mu * frobenius(&flux, &grad);
                anchor += dx * 0.5 * problem.epsilon * (value[0] * value[0] + value[1] * value[1] + value[2] * value[2]);
            }
            (membrane, anchor)
        })
        .collect();

    let edge_terms: Vec<(f64, f64)> = (0..mesh.interior_edges().len())
        .into_par_iter()
        .map(|e| {
            let edge = &mesh.interior_edges()[e];
            let coeffs = edge.cells.map(|c| state.cell_coefficients(c));
            let (mut consistency, mut penalty) = (0.0, 0.0);
            for pt in interior_edge_points(disc, e) {
                let mut trace = [[0.0; 3]; 2];
                let mut flux = [[[0.0; 2]; 3]; 2];
                for side in 0..2 {
                    let mut grad = [[0.0; 2]; 3];
                    for a in 0..6 {
                        for i in 0..3 {
                            trace[side][i] += pt.phi[side][a] * coeffs[side][a][i];
                            grad[i][0] += coeffs[side][a][i] * pt.grad[side][a][0];
                            grad[i][1] += coeffs[side][a][i] * pt.grad[side][a][1];
                        }
                    }
                    flux[side] = tensor.apply(pt.x, &grad);
                }
                let (jump, avg) = apply_jump_average(edge, trace[0], trace[1], &flux[0], &flux[1]);
                consistency -= pt.dx * problem.mu * frobenius(&avg, &jump);
                penalty += pt.dx * 0.5 * problem.alpha / edge.length * frobenius(&jump, &jump);
            }
            (consistency, penalty)
        })
        .collect();

    let layout = disc.layout();
    let boundary_terms: Vec<(f64, f64)> = (0..layout.n_boundary_edges())
        .into_par_iter()
        .map(|k| {
            let trace = edge_trace(disc, state, k);
            let width = trace.theta_width();
            let l = layout.boundary_multiplier(k).map(|m| state.l[m]);
            let (mut bending, mut constraint) = (0.0, 0.0);
            for (t, w) in disc.edge_rule().iter() {
                let jet = tangential_derivatives(&trace, t[0]).expect("mesh edges have positive width");
                let (nv, _, _) = p2_segment_basis(t[0]);
                let ell: f64 = (0..3).map(|r| nv[r] * l[r]).sum();
                let d = jet.d_theta;
                let c = jet.d2_theta;
                bending += w * width * (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
                constraint += w * width * ell * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] - 1.0);
            }
            (bending, constraint)
        })
        .collect();

    let sum = |v: &[(f64, f64)]| v.iter().fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    let (membrane, anchor) = sum(&cell_terms);
    let (sipg_consistency, sipg_penalty) = sum(&edge_terms);
    let (bending, constraint) = sum(&boundary_terms);
    let mut out = EnergyBreakdown {
        bending,
        membrane,
        constraint,
        sipg_consistency,
        sipg_penalty,
        anchor,
        total: 0.0,
    };
    out.total = out.parts().iter().map(|p| p.1).sum();
    Ok(out)
}

/// Gradient of [`augmented_energy`] with respect to `[x | l]`.
pub fn residual(disc: &Discretization, problem: &Problem, state: &State) -> Result<Vec<f64>, FormsError> {
    Assembler::new(disc, *problem)?.residual(state)
}

/// Derivative of [`residual`].
pub fn jacobian(disc: &Discretization, problem: &Problem, state: &State) -> Result<SparseSymMatrix, FormsError> {
    Assembler::new(disc, *problem)?.jacobian(state)
}
