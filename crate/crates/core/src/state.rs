//! Coefficient vectors of the coupled unknowns.

use crate::fe::Discretization;
use crate::spaces::{p2_triangle_basis, DofLayout, MEMBRANE_DOFS_PER_CELL};
use crate::tensors::Mat32;

/// Membrane coefficients `x` (length `membrane_total`) and boundary multiplier
/// coefficients `l` (length `multiplier_total`).
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub x: Vec<f64>,
    pub l: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateError {
    #[error("state has {got} coefficients, layout expects {expected}")]
    Length { got: usize, expected: usize },
    #[error("state coefficient {index} is not finite")]
    NonFinite { index: usize },
}

impl State {
    pub fn zeros(layout: &DofLayout) -> Self {
        State {
            x: vec![0.0; layout.membrane_total],
            l: vec![0.0; layout.multiplier_total],
        }
    }

    /// Splits a stacked `[x | l]` vector.
    pub fn from_vector(layout: &DofLayout, z: &[f64]) -> Result<Self, StateError> {
        if z.len() != layout.total() {
            return Err(StateError::Length {
                got: z.len(),
                expected: layout.total(),
            });
        }
        let (x, l) = z.split_at(layout.membrane_total);
        Ok(State {
            x: x.to_vec(),
            l: l.to_vec(),
        })
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let mut z = Vec::with_capacity(self.x.len() + self.l.len());
        z.extend_from_slice(&self.x);
        z.extend_from_slice(&self.l);
        z
    }

    pub fn len(&self) -> usize {
        self.x.len() + self.l.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks lengths against `layout` and that every entry is finite.
    pub fn validate(&self, layout: &DofLayout) -> Result<(), StateError> {
        if self.x.len() != layout.membrane_total || self.l.len() != layout.multiplier_total {
            return Err(StateError::Length {
                got: self.len(),
                expected: layout.total(),
            });
        }
        if let Some(index) = self.x.iter().chain(&self.l).position(|v| !v.is_finite()) {
            return Err(StateError::NonFinite { index });
        }
        Ok(())
    }

    /// Membrane coefficients multiplied by `factor`; multiplier unchanged.
    pub fn with_scaled_membrane(&self, factor: f64) -> Self {
        State {
            x: self.x.iter().map(|v| v * factor).collect(),
            l: self.l.clone(),
        }
    }

    /// The 18 coefficients of `cell` as `[node][component]`.
    pub fn cell_coefficients(&self, cell: usize) -> [[f64; 3]; 6] {
        let base = MEMBRANE_DOFS_PER_CELL * cell;
        let mut out = [[0.0; 3]; 6];
        for (a, node) in out.iter_mut().enumerate() {
            node.copy_from_slice(&self.x[base + 3 * a..base + 3 * a + 3]);
        }
        out
    }
}

/// Nodal interpolation of `f` into the membrane space; the multiplier is zero.
pub fn interpolate(disc: &Discretization, f: impl Fn([f64; 2]) -> [f64; 3]) -> State {
    let layout = disc.layout();
    let mut state = State::zeros(layout);
    for cell in 0..layout.n_cells() {
        for node in 0..6 {
            let value = f(disc.node_position(cell, node));
            for (comp, v) in value.into_iter().enumerate() {
                state.x[layout.membrane_dof(cell, node, comp)] = v;
            }
        }
    }
    state
}

/// Value and physical gradient of the membrane field in `cell` at reference
/// point `xi`.
pub fn evaluate(disc: &Discretization, state: &State, cell: usize, xi: [f64; 2]) -> ([f64; 3], Mat32) {
    let (phi, dphi) = p2_triangle_basis(xi);
    let geo = disc.geometry(cell);
    let coeffs = state.cell_coefficients(cell);
    let mut value = [0.0; 3];
    let mut grad = [[0.0; 2]; 3];
    for a in 0..6 {
        let g = geo.physical_gradient(dphi[a]);
        for i in 0..3 {
            value[i] += phi[a] * coeffs[a][i];
            grad[i][0] += coeffs[a][i] * g[0];
            grad[i][1] += coeffs[a][i] * g[1];
        }
    }
    (value, grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_disc_mesh;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quadratic_reproduction() {
        let disc = Discretization::new(generate_disc_mesh(16, 0.5).unwrap());
        let f = |p: [f64; 2]| {
            let [u, v] = p;
            [1.0 + 2.0 * u - v + 0.5 * u * v, u * u - 3.0 * v * v, 0.25 - u + 4.0 * u * v]
        };
        let df = |p: [f64; 2]| {
            let [u, v] = p;
            [[2.0 + 0.5 * v, -1.0 + 0.5 * u], [2.0 * u, -6.0 * v], [-1.0 + 4.0 * v, 4.0 * u]]
        };
        let state = interpolate(&disc, f);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let cell = rng.random_range(0..disc.mesh().n_triangles());
            let (mut a, mut b): (f64, f64) = (rng.random(), rng.random());
            if a + b > 1.0 {
                a = 1.0 - a;
                b = 1.0 - b;
            }
            let p = disc.geometry(cell).map([a, b]);
            let (value, grad) = evaluate(&disc, &state, cell, [a, b]);
            let exact = f(p);
            let dexact = df(p);
            for i in 0..3 {
                assert!((value[i] - exact[i]).abs() < 1e-12);
                assert!((grad[i][0] - dexact[i][0]).abs() < 1e-11);
                assert!((grad[i][1] - dexact[i][1]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn vector_round_trip_and_validation() {
        let disc = Discretization::new(generate_disc_mesh(8, 1.0).unwrap());
        let layout = disc.layout();
        let z: Vec<f64> = (0..layout.total()).map(|i| i as f64).collect();
        let s = State::from_vector(layout, &z).unwrap();
        assert_eq!(s.to_vector(), z);
        assert!(s.validate(layout).is_ok());
        let mut bad = s.clone();
        bad.l[0] = f64::NAN;
        assert_eq!(
            bad.validate(layout),
            Err(StateError::NonFinite {
                index: layout.membrane_total
            })
        );
        assert!(State::from_vector(layout, &z[1..]).is_err());
    }
}
