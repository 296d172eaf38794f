//! Reference elements, quadrature and global numbering.
//!
//! The membrane lives in a cellwise quadratic, fully discontinuous vector
//! space (6 scalar nodes x 3 components per triangle). The multiplier lives in
//! the continuous quadratic space on the boundary loop.

mod basis;
mod dofmap;
mod quadrature;

pub use basis::{p2_segment_basis, p2_triangle_basis, P2_NODES, P2_EDGE_NODES};
pub use dofmap::{build_dofmaps, DofLayout, MEMBRANE_DOFS_PER_CELL};
pub use quadrature::{segment_quadrature, triangle_quadrature, QuadratureError, QuadratureRule};
