/// Reference nodes of the quadratic triangle: three vertices followed by the
/// midpoints of edges (0,1), (1,2), (2,0). This is also the VTK node order of
/// a quadratic triangle.
pub const P2_NODES: [[f64; 2]; 6] = [
    [0.0, 0.0],
    [1.0, 0.0],
    [0.0, 1.0],
    [0.5, 0.0],
    [0.5, 0.5],
    [0.0, 0.5],
];

/// Local nodes on local edge `k` (vertex `k` to vertex `k+1 mod 3`): start
/// vertex, end vertex, midpoint. Matches the segment basis node order.
pub const P2_EDGE_NODES: [[usize; 3]; 3] = [[0, 1, 3], [1, 2, 4], [2, 0, 5]];

/// Values and reference gradients of the six quadratic Lagrange basis
/// functions at `p`. Points outside the reference triangle are extrapolated.
pub fn p2_triangle_basis(p: [f64; 2]) -> ([f64; 6], [[f64; 2]; 6]) {
    let [x, y] = p;
    let l = [1.0 - x - y, x, y];
    let dl = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
    let mut values = [0.0; 6];
    let mut grads = [[0.0; 2]; 6];
    for i in 0..3 {
        values[i] = l[i] * (2.0 * l[i] - 1.0);
        let s = 4.0 * l[i] - 1.0;
        grads[i] = [s * dl[i][0], s * dl[i][1]];
    }
    for (k, (a, b)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
        values[3 + k] = 4.0 * l[a] * l[b];
        grads[3 + k] = [
            4.0 * (l[a] * dl[b][0] + l[b] * dl[a][0]),
            4.0 * (l[a] * dl[b][1] + l[b] * dl[a][1]),
        ];
    }
    (values, grads)
}

/// Quadratic Lagrange basis on `[0, 1]` with nodes `0, 1, 1/2`: values,
/// first and second derivatives.
pub fn p2_segment_basis(t: f64) -> ([f64; 3], [f64; 3], [f64; 3]) {
    (
        [(1.0 - t) * (1.0 - 2.0 * t), t * (2.0 * t - 1.0), 4.0 * t * (1.0 - t)],
        [4.0 * t - 3.0, 4.0 * t - 1.0, 4.0 - 8.0 * t],
        [4.0, 4.0, -8.0],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nodal_property() {
        for (k, node) in P2_NODES.iter().enumerate() {
            let (v, _) = p2_triangle_basis(*node);
            for (j, vj) in v.iter().enumerate() {
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((vj - expected).abs() < 1e-15);
            }
        }
        let (v, _, _) = p2_segment_basis(0.0);
        assert_eq!(v, [1.0, 0.0, 0.0]);
        let (v, _, _) = p2_segment_basis(0.5);
        assert_eq!(v, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn partition_of_unity_examples() {
        let (v, g) = p2_triangle_basis([0.3, 0.3]);
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let gs = g.iter().fold([0.0, 0.0], |acc, d| [acc[0] + d[0], acc[1] + d[1]]);
        assert!(gs[0].abs() < 1e-14 && gs[1].abs() < 1e-14);
        let (v, _, _) = p2_segment_basis(0.37);
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bubble_second_derivative() {
        for t in [0.0, 0.2, 0.9] {
            assert_eq!(p2_segment_basis(t).2[2], -8.0);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let p = [0.21, 0.47];
        let h = 1e-6;
        let (_, g) = p2_triangle_basis(p);
        for d in 0..2 {
            let mut pp = p;
            let mut pm = p;
            pp[d] += h;
            pm[d] -= h;
            let (vp, _) = p2_triangle_basis(pp);
            let (vm, _) = p2_triangle_basis(pm);
            for i in 0..6 {
                assert!(((vp[i] - vm[i]) / (2.0 * h) - g[i][d]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn edge_restriction_matches_segment_basis() {
        for (k, nodes) in P2_EDGE_NODES.iter().enumerate() {
            let a = P2_NODES[k];
            let b = P2_NODES[(k + 1) % 3];
            for t in [0.1, 0.45, 0.8] {
                let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                let (v, _) = p2_triangle_basis(p);
                let (s, _, _) = p2_segment_basis(t);
                for (local, node) in nodes.iter().enumerate() {
                    assert!((v[*node] - s[local]).abs() < 1e-14);
                }
                let off: f64 = (0..6).filter(|i| !nodes.contains(i)).map(|i| v[i].abs()).sum();
                assert!(off < 1e-14);
            }
        }
    }

    proptest! {
        #[test]
        fn partition_of_unity(x in 0.0..1.0f64, y in 0.0..1.0f64) {
            let (x, y) = if x + y > 1.0 { (1.0 - x, 1.0 - y) } else { (x, y) };
            let (v, g) = p2_triangle_basis([x, y]);
            prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            let gx: f64 = g.iter().map(|d| d[0]).sum();
            let gy: f64 = g.iter().map(|d| d[1]).sum();
            prop_assert!(gx.abs() < 1e-14 && gy.abs() < 1e-14);
        }

        #[test]
        fn segment_derivatives_consistent(t in 0.0..1.0f64) {
            let (v, d, _) = p2_segment_basis(t);
            prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            prop_assert!(d.iter().sum::<f64>().abs() < 1e-14);
        }
    }
}
