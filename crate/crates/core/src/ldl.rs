//! Sparse direct solver for symmetric, possibly indefinite matrices.
//!
//! Rows with identical sparsity patterns are grouped into supernodes (the 18
//! dofs of a cell, for instance). Supernodes whose diagonal block is weak
//! after equilibration, such as the multiplier rows of a saddle-point system,
//! are deferred to a dense tail together with their neighbours. The remaining supernodes are ordered by
//! minimum degree and eliminated by a block `U^T D^{-1} U` factorization in
//! which every diagonal block `D` is factored by LU with partial pivoting.
//! The tail Schur complement is factored densely with partial pivoting.
//!
//! The matrix is first equilibrated symmetrically (Ruiz scaling) so that every
//! row and column has unit infinity norm.
//!
//! Pivots that are negligible relative to their block are dropped: the
//! corresponding solution component is set to zero, which makes the factors a
//! rank-truncated inverse. Iterative refinement then converges to a solution
//! whose residual lies in the dropped directions. [`Factorization::solve`]
//! reports such a system as singular unless the residual is negligible;
//! [`Factorization::solve_truncated`] returns the truncated solution and its
//! relative residual instead.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use nalgebra::{DMatrix, DMatrixView, DMatrixViewMut};

use crate::sparse::SparseSymMatrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinearError {
    #[error("matrix is singular to working precision at pivot for dof {dof}")]
    Singular { dof: usize },
    #[error("right-hand side has length {got}, matrix dimension is {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("matrix or right-hand side contains non-finite values")]
    NonFinite,
}

/// Dense row-major LU factors with row pivoting.
#[derive(Debug, Clone)]
struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    dropped: Vec<bool>,
}

/// A supernode whose equilibrated diagonal block has no entry above this is
/// eliminated in the globally pivoted tail.
const WEAK_DIAGONAL: f64 = 0.1;

/// Column panel width of the dense factorization.
const PANEL: usize = 64;

/// Pivots at most this fraction of the largest entry of their block are
/// dropped.
pub const DROP_TOLERANCE: f64 = 1e-12;

impl DenseLu {
    /// Negligible pivots are dropped; their local positions (after pivoting)
    /// are returned alongside.
    fn new(n: usize, mut a: Vec<f64>) -> (Self, Vec<usize>) {
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tiny = DROP_TOLERANCE * scale;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut dropped = vec![false; n];
        let mut small = Vec::new();
        // Right-looking blocked elimination: each panel is factored column
        // by column, then the trailing block gets one rank-`PANEL` update.
        for k0 in (0..n).step_by(PANEL) {
            let k1 = (k0 + PANEL).min(n);
            for k in k0..k1 {
                let (p, best) = (k..n)
                    .map(|i| (i, a[i * n + k].abs()))
                    .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
                if p != k {
                    for j in 0..n {
                        a.swap(k * n + j, p * n + j);
                    }
                    perm.swap(k, p);
                }
                if best <= tiny {
                    // The remaining column is negligible: decouple it.
                    dropped[k] = true;
                    small.push(k);
                    for i in k + 1..n {
                        a[i * n + k] = 0.0;
                    }
                    continue;
                }
                let (head, rest) = a.split_at_mut((k + 1) * n);
                let pivot_row = &head[k * n..];
                let pivot = pivot_row[k];
                for row in rest.chunks_mut(n) {
                    let f = row[k] / pivot;
                    row[k] = f;
                    if f != 0.0 {
                        for (x, p) in row[k + 1..k1].iter_mut().zip(&pivot_row[k + 1..k1]) {
                            *x -= f * p;
                        }
                    }
                }
            }
            if k1 == n {
                break;
            }
            // U12 = L11^-1 A12
            for k in k0..k1 {
                let (head, rest) = a.split_at_mut((k + 1) * n);
                let pivot_row = &head[k * n + k1..(k + 1) * n];
                for row in rest[..(k1 - k - 1) * n].chunks_mut(n) {
                    let f = row[k];
                    if f != 0.0 {
                        for (x, p) in row[k1..].iter_mut().zip(pivot_row) {
                            *x -= f * p;
                        }
                    }
                }
            }
            // A22 -= L21 U12
            let (m, w) = (n - k1, k1 - k0);
            let l21 = DMatrix::from_fn(m, w, |i, j| a[(k1 + i) * n + k0 + j]);
            let (head, tail) = a.split_at_mut(k1 * n);
            let u12 = DMatrixView::from_slice_with_strides(&head[k0 * n + k1..], w, m, n, 1);
            let mut a22 = DMatrixViewMut::from_slice_with_strides_mut(&mut tail[k1..], m, m, n, 1);
            a22.gemm(-1.0, &l21, &u12, 1.0);
        }
        (DenseLu { n, lu: a, perm, dropped }, small)
    }

    fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            if self.dropped[i] {
                y[i] = 0.0;
                continue;
            }
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * y[j];
            }
            y[i] = s / self.lu[i * n + i];
        }
        b.copy_from_slice(&y);
    }

    /// Solves `D X = B` for a row-major `n x m` block `B`.
    fn solve_block(&self, b: &[f64], m: usize) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * m];
        let mut col = vec![0.0; n];
        for c in 0..m {
            for r in 0..n {
                col[r] = b[r * m + c];
            }
            self.solve_in_place(&mut col);
            for r in 0..n {
                out[r * m + c] = col[r];
            }
        }
        out
    }
}

/// Groups rows with identical patterns; returns the dof lists of each group.
fn supernodes(a: &SparseSymMatrix) -> Vec<Vec<usize>> {
    let mut by_pattern: HashMap<&[usize], usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..a.dim() {
        let cols = a.row(i).0;
        let g = *by_pattern.entry(cols).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

/// Minimum (weighted external) degree elimination on the supernode graph.
/// Deferred nodes are never chosen. Returns the eliminated nodes in order
/// and, for each, its neighbours at elimination time.
fn minimum_degree(adjacency: Vec<Vec<usize>>, sizes: &[usize], deferred: &[bool]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n = adjacency.len();
    let mut adj = adjacency;
    let mut eliminated = vec![false; n];
    let degree = |adj: &Vec<usize>| adj.iter().map(|&q| sizes[q]).sum::<usize>();
    let mut deg: Vec<usize> = adj.iter().map(degree).collect();
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..n).filter(|&p| !deferred[p]).map(|p| Reverse((deg[p], p))).collect();
    let mut order = Vec::new();
    let mut structure = vec![Vec::new(); n];
    while let Some(Reverse((d, p))) = heap.pop() {
        if eliminated[p] || d != deg[p] {
            continue;
        }
        eliminated[p] = true;
        order.push(p);
        let clique = std::mem::take(&mut adj[p]);
        for &q in &clique {
            let mut merged = Vec::with_capacity(adj[q].len() + clique.len());
            let (mut i, mut j) = (0, 0);
            let (x, y) = (&adj[q], &clique);
            while i < x.len() || j < y.len() {
                let next = match (x.get(i), y.get(j)) {
                    (Some(&u), Some(&v)) if u == v => {
                        i += 1;
                        j += 1;
                        u
                    }
                    (Some(&u), Some(&v)) if u < v => {
                        i += 1;
                        u
                    }
                    (Some(_), Some(&v)) | (None, Some(&v)) => {
                        j += 1;
                        v
                    }
                    (Some(&u), None) => {
                        i += 1;
                        u
                    }
                    (None, None) => unreachable!(),
                };
                if next != p && next != q {
                    merged.push(next);
                }
            }
            adj[q] = merged;
            deg[q] = degree(&adj[q]);
            if !deferred[q] {
                heap.push(Reverse((deg[q], q)));
            }
        }
        structure[p] = clique;
    }
    (order, structure)
}

/// Block factorization of a [`SparseSymMatrix`].
#[derive(Debug, Clone)]
pub struct Factorization {
    n: usize,
    nodes: Vec<Vec<usize>>,
    /// Eliminated (non-deferred) nodes in order.
    order: Vec<usize>,
    /// Per node: later nodes it couples to, with the coupling blocks
    /// `U[p][q]` (row-major, `|p| x |q|`).
    upper: Vec<Vec<(usize, Vec<f64>)>>,
    diag: Vec<Option<DenseLu>>,
    /// Dofs of the deferred tail, and its dense factorization.
    tail_dofs: Vec<usize>,
    tail: Option<DenseLu>,
    /// Dofs whose pivots were dropped.
    dropped: Vec<usize>,
    /// Symmetric scaling applied before elimination.
    scale: Vec<f64>,
}

/// Symmetric Ruiz equilibration: `diag(s) A diag(s)` with rows and columns
/// of roughly unit infinity norm.
fn ruiz_scaling(a: &SparseSymMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut s = vec![1.0; n];
    for _ in 0..RUIZ_ITERATIONS {
        let row_max: Vec<f64> = (0..n)
            .map(|i| {
                let (cols, vals) = a.row(i);
                cols.iter().zip(vals).fold(0.0f64, |m, (&j, v)| m.max((s[i] * v * s[j]).abs()))
            })
            .collect();
        let mut done = true;
        for (si, &m) in s.iter_mut().zip(&row_max) {
            if m > 0.0 {
                *si /= m.sqrt();
                done &= (m - 1.0).abs() < 1e-3;
            }
        }
        if done {
            break;
        }
    }
    s
}

const RUIZ_ITERATIONS: usize = 20;

fn transpose_times(u: &[f64], w: &[f64], sp: usize, sq: usize, sr: usize) -> Vec<f64> {
    // (u^T w): u is sp x sq, w is sp x sr
    let mut m = vec![0.0; sq * sr];
    for k in 0..sp {
        let urow = &u[k * sq..(k + 1) * sq];
        let wrow = &w[k * sr..(k + 1) * sr];
        for (a, &ua) in urow.iter().enumerate() {
            if ua == 0.0 {
                continue;
            }
            let mrow = &mut m[a * sr..(a + 1) * sr];
            for (mv, &wv) in mrow.iter_mut().zip(wrow) {
                *mv += ua * wv;
            }
        }
    }
    m
}

impl Factorization {
    pub fn new(a: &SparseSymMatrix) -> Result<Self, LinearError> {
        let n = a.dim();
        if a.values().iter().any(|v| !v.is_finite()) {
            return Err(LinearError::NonFinite);
        }
        let scale = ruiz_scaling(a);
        let nodes = supernodes(a);
        let mut node_of = vec![0usize; n];
        let mut local_of = vec![0usize; n];
        for (g, dofs) in nodes.iter().enumerate() {
            for (l, &d) in dofs.iter().enumerate() {
                node_of[d] = g;
                local_of[d] = l;
            }
        }
        let n_nodes = nodes.len();
        let sizes: Vec<usize> = nodes.iter().map(Vec::len).collect();
        let mut weak = vec![false; n_nodes];
        let mut adjacency = vec![Vec::new(); n_nodes];
        for (g, dofs) in nodes.iter().enumerate() {
            let cols = a.row(dofs[0]).0;
            let mut nb: Vec<usize> = cols.iter().map(|&j| node_of[j]).collect();
            nb.sort_unstable();
            nb.dedup();
            nb.retain(|&q| q != g);
            adjacency[g] = nb;
            let diagonal = dofs
                .iter()
                .flat_map(|&i| dofs.iter().map(move |&j| (i, j)))
                .fold(0.0f64, |m, (i, j)| m.max((scale[i] * a.get(i, j) * scale[j]).abs()));
            weak[g] = diagonal < WEAK_DIAGONAL;
        }
        // Nodes with a weak diagonal block, such as the multiplier rows of a
        // saddle-point system, and their neighbours join the tail, where
        // pivoting is global.
        let deferred: Vec<bool> = (0..n_nodes)
            .map(|g| weak[g] || adjacency[g].iter().any(|&q| weak[q]))
            .collect();
        let (order, structure) = minimum_degree(adjacency, &sizes, &deferred);

        let mut position = vec![usize::MAX; n_nodes];
        for (k, &p) in order.iter().enumerate() {
            position[p] = k;
        }
        let mut tail_dofs = Vec::new();
        let mut tail_index = vec![usize::MAX; n];
        for g in (0..n_nodes).filter(|&g| deferred[g]) {
            position[g] = order.len() + g;
            for &d in &nodes[g] {
                tail_index[d] = tail_dofs.len();
                tail_dofs.push(d);
            }
        }
        let nt = tail_dofs.len();

        let mut upper: Vec<Vec<(usize, Vec<f64>)>> = structure
            .into_iter()
            .enumerate()
            .map(|(p, mut s)| {
                s.sort_unstable_by_key(|&q| position[q]);
                s.into_iter().map(|q| (q, vec![0.0; sizes[p] * sizes[q]])).collect()
            })
            .collect();
        let mut diag_blocks: Vec<Vec<f64>> = sizes.iter().map(|&s| vec![0.0; s * s]).collect();
        let mut tail = vec![0.0; nt * nt];

        for i in 0..n {
            let p = node_of[i];
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let v = scale[i] * v * scale[j];
                let q = node_of[j];
                if deferred[p] && deferred[q] {
                    tail[tail_index[i] * nt + tail_index[j]] = v;
                } else if p == q {
                    diag_blocks[p][local_of[i] * sizes[p] + local_of[j]] = v;
                } else if position[p] < position[q] {
                    let k = upper[p]
                        .binary_search_by_key(&position[q], |(r, _)| position[*r])
                        .expect("original coupling is in the structure");
                    upper[p][k].1[local_of[i] * sizes[q] + local_of[j]] = v;
                }
            }
        }

        let mut diag: Vec<Option<DenseLu>> = vec![None; n_nodes];
        let mut dropped = Vec::new();
        for &p in &order {
            let sp = sizes[p];
            let (lu, small) = DenseLu::new(sp, std::mem::take(&mut diag_blocks[p]));
            dropped.extend(small.into_iter().map(|k| nodes[p][k]));
            let row = std::mem::take(&mut upper[p]);
            let solved: Vec<Vec<f64>> = row.iter().map(|(q, u)| lu.solve_block(u, sizes[*q])).collect();
            for (qi, (q, uq)) in row.iter().enumerate() {
                let (q, sq) = (*q, sizes[*q]);
                for (r, _) in row.iter().skip(qi) {
                    let (r, sr) = (*r, sizes[*r]);
                    let ri = row.iter().position(|(x, _)| *x == r).expect("r in row");
                    let m = transpose_times(uq, &solved[ri], sp, sq, sr);
                    if deferred[q] {
                        for a in 0..sq {
                            let ti = tail_index[nodes[q][a]];
                            for b in 0..sr {
                                let tj = tail_index[nodes[r][b]];
                                tail[ti * nt + tj] -= m[a * sr + b];
                                if q != r {
                                    tail[tj * nt + ti] -= m[a * sr + b];
                                }
                            }
                        }
                    } else if q == r {
                        for (d, v) in diag_blocks[q].iter_mut().zip(&m) {
                            *d -= v;
                        }
                    } else {
                        let k = upper[q]
                            .binary_search_by_key(&position[r], |(x, _)| position[*x])
                            .expect("fill is in the structure");
                        for (d, v) in upper[q][k].1.iter_mut().zip(&m) {
                            *d -= v;
                        }
                    }
                }
            }
            upper[p] = row;
            diag[p] = Some(lu);
        }
        let tail = if nt > 0 {
            let (lu, small) = DenseLu::new(nt, tail);
            dropped.extend(small.into_iter().map(|k| tail_dofs[k]));
            Some(lu)
        } else {
            None
        };
        Ok(Factorization {
            n,
            nodes,
            order,
            upper,
            diag,
            tail_dofs,
            tail,
            dropped,
            scale,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Dofs at which a negligible pivot was dropped.
    pub fn dropped_pivots(&self) -> &[usize] {
        &self.dropped
    }

    /// One forward/backward substitution, no refinement.
    fn substitute(&self, rhs: &[f64]) -> Vec<f64> {
        let mut b: Vec<f64> = rhs.iter().zip(&self.scale).map(|(r, s)| r * s).collect();
        let mut c: Vec<Vec<f64>> = vec![Vec::new(); self.nodes.len()];
        for &p in &self.order {
            let lu = self.diag[p].as_ref().expect("eliminated node has a factor");
            let mut cp: Vec<f64> = self.nodes[p].iter().map(|&d| b[d]).collect();
            lu.solve_in_place(&mut cp);
            for (q, u) in &self.upper[p] {
                let sq = self.nodes[*q].len();
                for (k, &ck) in cp.iter().enumerate() {
                    for (l, &d) in self.nodes[*q].iter().enumerate() {
                        b[d] -= u[k * sq + l] * ck;
                    }
                }
            }
            c[p] = cp;
        }
        let mut x = vec![0.0; self.n];
        if let Some(tail) = &self.tail {
            let mut t: Vec<f64> = self.tail_dofs.iter().map(|&d| b[d]).collect();
            tail.solve_in_place(&mut t);
            for (&d, v) in self.tail_dofs.iter().zip(t) {
                x[d] = v;
            }
        }
        for &p in self.order.iter().rev() {
            let lu = self.diag[p].as_ref().expect("eliminated node has a factor");
            let sp = self.nodes[p].len();
            let mut s = vec![0.0; sp];
            for (q, u) in &self.upper[p] {
                let sq = self.nodes[*q].len();
                for (k, sk) in s.iter_mut().enumerate() {
                    *sk += self.nodes[*q]
                        .iter()
                        .enumerate()
                        .map(|(l, &d)| u[k * sq + l] * x[d])
                        .sum::<f64>();
                }
            }
            lu.solve_in_place(&mut s);
            for (k, &d) in self.nodes[p].iter().enumerate() {
                x[d] = c[p][k] - s[k];
            }
        }
        for (xi, s) in x.iter_mut().zip(&self.scale) {
            *xi *= s;
        }
        x
    }

    /// Solves `A x = rhs`, refining while the residual keeps decreasing.
    /// Fails if pivots were dropped and the system is not consistent with the
    /// retained ones.
    pub fn solve(&self, a: &SparseSymMatrix, rhs: &[f64]) -> Result<Vec<f64>, LinearError> {
        let (x, relative) = self.solve_truncated(a, rhs)?;
        if !self.dropped.is_empty() && !(relative <= CONSISTENCY_TOL) {
            return Err(LinearError::Singular { dof: self.dropped[0] });
        }
        Ok(x)
    }

    /// Refined solve through the truncated factors; returns the solution and
    /// the relative residual `|A x - rhs| / |rhs|`.
    pub fn solve_truncated(&self, a: &SparseSymMatrix, rhs: &[f64]) -> Result<(Vec<f64>, f64), LinearError> {
        if rhs.len() != self.n {
            return Err(LinearError::Dimension {
                got: rhs.len(),
                expected: self.n,
            });
        }
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(LinearError::NonFinite);
        }
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let residual = |x: &[f64]| -> Vec<f64> { a.matvec(x).iter().zip(rhs).map(|(ax, b)| b - ax).collect() };
        let bn = norm(rhs);
        if bn == 0.0 {
            return Ok((vec![0.0; self.n], 0.0));
        }
        let mut x = self.substitute(rhs);
        let mut r = residual(&x);
        let mut rn = norm(&r);
        for _ in 0..MAX_REFINEMENT {
            if !(rn > 1e-14 * bn) {
                break;
            }
            let dx = self.substitute(&r);
            let candidate: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
            let rc = residual(&candidate);
            let rcn = norm(&rc);
            if !(rcn < rn) {
                break;
            }
            x = candidate;
            r = rc;
            rn = rcn;
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(LinearError::NonFinite);
        }
        Ok((x, rn / bn))
    }
}

/// Refinement stops earlier once the residual no longer decreases.
const MAX_REFINEMENT: usize = 20;

/// Relative residual a solve through dropped pivots must reach.
const CONSISTENCY_TOL: f64 = 1e-10;

/// Factors `a` and solves `a x = rhs`.
pub fn solve_linear(a: &SparseSymMatrix, rhs: &[f64]) -> Result<Vec<f64>, LinearError> {
    if rhs.len() != a.dim() {
        return Err(LinearError::Dimension {
            got: rhs.len(),
            expected: a.dim(),
        });
    }
    Factorization::new(a)?.solve(a, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense(n: usize, f: impl Fn(usize, usize) -> f64) -> SparseSymMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = f(i, j);
                if v != 0.0 {
                    t.push((i, j, v));
                }
            }
        }
        SparseSymMatrix::from_triplets(n, &t)
    }

    fn residual_norm(a: &SparseSymMatrix, x: &[f64], b: &[f64]) -> f64 {
        a.matvec(x).iter().zip(b).map(|(ax, bb)| (ax - bb).powi(2)).sum::<f64>().sqrt()
    }

    #[test]
    fn identity() {
        let a = SparseSymMatrix::identity(4);
        assert_eq!(solve_linear(&a, &[1.0, 0.0, 0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn small_saddle_point() {
        let a = SparseSymMatrix::from_triplets(2, &[(0, 0, 2.0), (0, 1, 1.0), (1, 0, 1.0)]);
        let x = solve_linear(&a, &[1.0, 1.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_spd() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 50;
        let m: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = dense(n, |i, j| {
            (0..n).map(|k| m[k * n + i] * m[k * n + j]).sum::<f64>() + if i == j { 1.0 } else { 0.0 }
        });
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = solve_linear(&a, &b).unwrap();
        let bn = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(residual_norm(&a, &x, &b) <= 1e-10 * bn);
    }

    /// Banded indefinite system with a sparse pattern and a multiplier block.
    fn saddle(n: usize, m: usize, rng: &mut ChaCha8Rng) -> SparseSymMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 4.0 + rng.random_range(0.0..1.0)));
            if i + 1 < n {
                let v = rng.random_range(-1.0..1.0);
                t.push((i, i + 1, v));
                t.push((i + 1, i, v));
            }
            if i + 7 < n {
                let v = rng.random_range(-1.0..1.0);
                t.push((i, i + 7, v));
                t.push((i + 7, i, v));
            }
        }
        for k in 0..m {
            for i in [3 * k, 3 * k + 1, (5 * k + 2) % n] {
                let v = rng.random_range(0.5..1.5);
                t.push((n + k, i, v));
                t.push((i, n + k, v));
            }
        }
        SparseSymMatrix::from_triplets(n + m, &t)
    }

    #[test]
    fn sparse_saddle_point_recovers_v() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = saddle(60, 10, &mut rng);
        let v: Vec<f64> = (0..70).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = solve_linear(&a, &a.matvec(&v)).unwrap();
        for i in 0..70 {
            assert!((x[i] - v[i]).abs() < 1e-10, "{i}");
        }
    }

    #[test]
    fn singular_matrix_reports_a_dof() {
        let a = SparseSymMatrix::from_triplets(3, &[(0, 0, 1.0), (1, 1, 1.0), (1, 2, 1.0), (2, 2, 1.0), (2, 1, 1.0)]);
        assert!(matches!(solve_linear(&a, &[1.0, 1.0, 2.0]), Err(LinearError::Singular { .. })));
        // consistent right-hand side: any solution will do
        let x = solve_linear(&a, &[1.0, 1.0, 1.0]).unwrap();
        assert!(residual_norm(&a, &x, &[1.0, 1.0, 1.0]) < 1e-12);
        let zero_tail = SparseSymMatrix::from_triplets(2, &[(0, 0, 1.0), (0, 1, 0.0), (1, 0, 0.0)]);
        assert_eq!(
            solve_linear(&zero_tail, &[1.0, 1.0]),
            Err(LinearError::Singular { dof: 1 })
        );
    }

    #[test]
    fn blocked_dense_lu_spans_panels() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 2 * PANEL + 37;
        let a: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (lu, small) = DenseLu::new(n, a.clone());
        assert!(small.is_empty());
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut b: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum()).collect();
        lu.solve_in_place(&mut b);
        for i in 0..n {
            assert!((b[i] - x[i]).abs() < 1e-9, "{i}");
        }
    }

    #[test]
    fn blocked_dense_lu_drops_dependent_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let (n, r) = (PANEL + 40, PANEL + 30);
        // rank r product of n x r and r x n factors
        let u: Vec<f64> = (0..n * r).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..r * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a: Vec<f64> = (0..n * n)
            .map(|ij| (0..r).map(|k| u[(ij / n) * r + k] * v[k * n + ij % n]).sum())
            .collect();
        let (_, small) = DenseLu::new(n, a);
        assert_eq!(small.len(), n - r);
    }

    #[test]
    fn dimension_mismatch() {
        let a = SparseSymMatrix::identity(3);
        assert_eq!(
            solve_linear(&a, &[1.0]),
            Err(LinearError::Dimension { got: 1, expected: 3 })
        );
    }
}
