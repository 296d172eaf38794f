//! Compressed sparse row storage for structurally symmetric matrices.

/// Square CSR matrix whose sparsity pattern is symmetric. Both triangles are
/// stored; column indices within a row are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    /// Zero matrix with the given pattern; each row's columns are sorted and
    /// deduplicated here.
    pub fn from_pattern(n: usize, mut rows: Vec<Vec<usize>>) -> Self {
        assert_eq!(rows.len(), n, "one column list per row");
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        for cols in rows.iter_mut() {
            cols.sort_unstable();
            cols.dedup();
            assert!(cols.last().is_none_or(|&c| c < n), "column out of range");
            col_idx.extend_from_slice(cols);
            row_ptr.push(col_idx.len());
        }
        let values = vec![0.0; col_idx.len()];
        SparseSymMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Sums duplicate entries. The pattern is symmetrized with explicit zeros.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut rows = vec![Vec::new(); n];
        for &(i, j, _) in triplets {
            rows[i].push(j);
            rows[j].push(i);
        }
        let mut m = Self::from_pattern(n, rows);
        for &(i, j, v) in triplets {
            m.add(i, j, v);
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::from_pattern(n, (0..n).map(|i| vec![i]).collect());
        m.values.fill(1.0);
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let start = self.row_ptr[i];
        self.col_idx[start..self.row_ptr[i + 1]]
            .binary_search(&j)
            .ok()
            .map(|k| start + k)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.position(i, j).map_or(0.0, |p| self.values[p])
    }

    /// Adds `v` to entry `(i, j)`, which must be in the pattern.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let p = self
            .position(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) is outside the sparsity pattern"));
        self.values[p] += v;
    }

    /// Adds the dense block `block[r * cols.len() + c]` at `(rows[r], cols[c])`.
    /// Consecutive column indices are located by a forward scan.
    pub fn add_dense(&mut self, rows: &[usize], cols: &[usize], block: &[f64]) {
        debug_assert_eq!(block.len(), rows.len() * cols.len());
        for (r, &i) in rows.iter().enumerate() {
            let end = self.row_ptr[i + 1];
            let mut pos = None::<usize>;
            for (c, &j) in cols.iter().enumerate() {
                let p = match pos {
                    Some(p) if p + 1 < end && self.col_idx[p + 1] == j => p + 1,
                    _ => self
                        .position(i, j)
                        .unwrap_or_else(|| panic!("entry ({i}, {j}) is outside the sparsity pattern")),
                };
                self.values[p] += block[r * cols.len() + c];
                pos = Some(p);
            }
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(|(&j, v)| v * x[j]).sum()
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |A_ij - A_ji|` over the stored entries.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if j > i {
                    worst = worst.max((v - self.get(j, i)).abs());
                }
            }
        }
        worst
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                row[j] = v;
            }
        }
        d
    }
}
