//! Catalog of spatially varying elasticity tensors.
//!
//! A tensor `C_ijkl` acts on 3x2 gradients `G_kl = d_l X_k` by
//! `(C G)_ij = C_ijkl G_kl`, where `i, k` index ambient components and `j, l`
//! parametric directions. Mixed-range Kronecker deltas are one iff the numeric
//! indices coincide, so `delta_ij delta_kl G_kl = tr2(G) [i == j]` with
//! `tr2(G) = G_11 + G_22`.

use std::fmt;
use std::str::FromStr;

/// A 3x2 matrix stored by rows: `m[i][j]`, ambient row `i`, parametric column `j`.
pub type Mat32 = [[f64; 2]; 3];

pub fn frobenius(a: &Mat32, b: &Mat32) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        s += a[i][0] * b[i][0] + a[i][1] * b[i][1];
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElasticityField {
    /// `C G = G`.
    Identity,
    /// `C_ijkl = |u| delta_ij delta_kl + 2 delta_ik delta_jl`.
    AnisoTrace,
    /// `C_ijkl = delta_ij delta_kl + 2 (1 + 10 sin^2 u) delta_ik delta_jl`.
    AnisoShear,
}

pub const ALL_TENSORS: [ElasticityField; 3] = [
    ElasticityField::Identity,
    ElasticityField::AnisoTrace,
    ElasticityField::AnisoShear,
];

impl ElasticityField {
    pub fn name(self) -> &'static str {
        match self {
            ElasticityField::Identity => "identity",
            ElasticityField::AnisoTrace => "aniso_trace",
            ElasticityField::AnisoShear => "aniso_shear",
        }
    }

    /// Whether the coefficients are independent of position.
    pub fn is_constant(self) -> bool {
        matches!(self, ElasticityField::Identity)
    }

    /// `(trace weight, identity weight)` at `p = (u, v)`:
    /// `C G = a tr2(G) I2x + b G`.
    #[inline]
    fn weights(self, p: [f64; 2]) -> (f64, f64) {
        let u = p[0];
        match self {
            ElasticityField::Identity => (0.0, 1.0),
            ElasticityField::AnisoTrace => (u.abs(), 2.0),
            ElasticityField::AnisoShear => (1.0, 2.0 * (1.0 + 10.0 * u.sin().powi(2))),
        }
    }

    #[inline]
    pub fn apply(self, p: [f64; 2], g: &Mat32) -> Mat32 {
        let (a, b) = self.weights(p);
        let tr = g[0][0] + g[1][1];
        let mut out = [[0.0; 2]; 3];
        for i in 0..3 {
            for j in 0..2 {
                out[i][j] = b * g[i][j];
            }
        }
        out[0][0] += a * tr;
        out[1][1] += a * tr;
        out
    }

    /// The operator as a 6x6 matrix on row-major flattened 3x2 matrices.
    pub fn operator_matrix(self, p: [f64; 2]) -> [[f64; 6]; 6] {
        let mut m = [[0.0; 6]; 6];
        for col in 0..6 {
            let mut e = [[0.0; 2]; 3];
            e[col / 2][col % 2] = 1.0;
            let ce = self.apply(p, &e);
            for row in 0..6 {
                m[row][col] = ce[row / 2][row % 2];
            }
        }
        m
    }
}

impl fmt::Display for ElasticityField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} `{name}` (expected one of: {expected})")]
pub struct UnknownName {
    pub kind: &'static str,
    pub name: String,
    pub expected: &'static str,
}

impl FromStr for ElasticityField {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_TENSORS
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| UnknownName {
                kind: "tensor",
                name: s.to_string(),
                expected: "identity, aniso_trace, aniso_shear",
            })
    }
}
