//! Critical points of boundary bending plus linear membrane energy for
//! disc-type membranes with a length-constrained elastic boundary.
//!
//! The membrane is discretized with discontinuous quadratic elements coupled
//! by a symmetric interior penalty; the unit-speed boundary constraint is
//! enforced by a continuous quadratic Lagrange multiplier, and the coupled
//! system is solved by Newton's method with cubic backtracking.

pub mod boundary;
pub mod fe;
pub mod guesses;
pub mod mesh;
pub mod spaces;
pub mod state;
pub mod tensors;
pub mod forms;
pub mod sparse;
pub mod ldl;
pub mod solver;
pub mod verify;
