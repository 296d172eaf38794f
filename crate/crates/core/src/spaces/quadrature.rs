use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("no {shape} quadrature rule of degree {degree} (supported: {min}..={max})")]
    UnsupportedDegree {
        shape: &'static str,
        degree: usize,
        min: usize,
        max: usize,
    },
}

/// Points on a reference cell with positive weights summing to its measure.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<const D: usize> {
    pub points: Vec<[f64; D]>,
    pub weights: Vec<f64>,
    /// Total polynomial degree integrated exactly.
    pub degree: usize,
}

impl<const D: usize> QuadratureRule<D> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64; D], f64)> {
        self.points.iter().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn([f64; D]) -> f64) -> f64 {
        self.iter().map(|(p, w)| w * f(*p)).sum()
    }
}

/// Golub-Welsch for the Jacobi weight `(1-x)^a (1+x)^b` on `[-1, 1]`.
fn gauss_jacobi(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut t = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        t[(k, k)] = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k > 0 {
            let num = 4.0 * kf * (kf + a) * (kf + b) * (kf + a + b);
            let den = s * s * (s + 1.0) * (s - 1.0);
            let off = (num / den).sqrt();
            t[(k, k - 1)] = off;
            t[(k - 1, k)] = off;
        }
    }
    // Integral of the weight; this closed form holds for b = 0.
    let mu0 = 2f64.powf(a + b + 1.0) / (a + b + 1.0);
    let eig = SymmetricEigen::new(t);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// Gauss-Legendre rule on `[0, 1]` exact for polynomials of degree `degree`.
pub fn segment_quadrature(degree: usize) -> Result<QuadratureRule<1>, QuadratureError> {
    if !(1..=10).contains(&degree) {
        return Err(QuadratureError::UnsupportedDegree {
            shape: "segment",
            degree,
            min: 1,
            max: 10,
        });
    }
    let n = degree / 2 + 1;
    let (x, w) = gauss_jacobi(n, 0.0, 0.0);
    Ok(QuadratureRule {
        points: x.iter().map(|&x| [0.5 * (x + 1.0)]).collect(),
        weights: w.iter().map(|&w| 0.5 * w).collect(),
        degree,
    })
}

/// Collapsed (Duffy) product rule on the reference triangle
/// `{x, y >= 0, x + y <= 1}`: Gauss-Legendre along the collapsed direction
/// and Gauss-Jacobi with weight `(1 - y)` across it, so the Jacobian of the
/// collapse is absorbed exactly. Weights are positive and sum to 1/2.
pub fn triangle_quadrature(degree: usize) -> Result<QuadratureRule<2>, QuadratureError> {
    if !(1..=8).contains(&degree) {
        return Err(QuadratureError::UnsupportedDegree {
            shape: "triangle",
            degree,
            min: 1,
            max: 8,
        });
    }
    let n = degree / 2 + 1;
    let (xs, wxs) = gauss_jacobi(n, 0.0, 0.0);
    let (ys, wys) = gauss_jacobi(n, 1.0, 0.0);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (&y, &wy) in ys.iter().zip(&wys) {
        // [-1, 1] -> [0, 1]; the weight (1 - x) maps to 2 (1 - eta).
        let eta = 0.5 * (y + 1.0);
        let w_eta = 0.25 * wy;
        for (&x, &wx) in xs.iter().zip(&wxs) {
            let xi = 0.5 * (x + 1.0);
            points.push([xi * (1.0 - eta), eta]);
            weights.push(0.5 * wx * w_eta);
        }
    }
    Ok(QuadratureRule {
        points,
        weights,
        degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Integral of `x^a y^b` over the reference triangle.
    fn triangle_monomial(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn centroid_rule() {
        let q = triangle_quadrature(1).unwrap();
        assert_eq!(q.len(), 1);
        assert!((q.points[0][0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((q.points[0][1] - 1.0 / 3.0).abs() < 1e-15);
        assert!((q.weights[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn midpoint_rule() {
        let q = segment_quadrature(1).unwrap();
        assert_eq!(q.points, vec![[0.5]]);
        assert!((q.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_rules_are_exact() {
        for degree in 1..=8 {
            let q = triangle_quadrature(degree).unwrap();
            assert!((q.weights.iter().sum::<f64>() - 0.5).abs() < 1e-15);
            assert!(q.weights.iter().all(|&w| w > 0.0));
            for p in &q.points {
                assert!(p[0] >= 0.0 && p[1] >= 0.0 && p[0] + p[1] <= 1.0);
            }
            for a in 0..=degree as u32 {
                for b in 0..=(degree as u32 - a) {
                    let got = q.integrate(|p| p[0].powi(a as i32) * p[1].powi(b as i32));
                    let exact = triangle_monomial(a, b);
                    assert!((got - exact).abs() < 1e-13, "deg {degree}: x^{a} y^{b}: {got} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn degree_four_on_x2y2() {
        let q = triangle_quadrature(4).unwrap();
        let got = q.integrate(|p| p[0] * p[0] * p[1] * p[1]);
        assert!((got - 1.0 / 180.0).abs() < 1e-14);
    }

    #[test]
    fn segment_rules_are_exact() {
        for degree in 1..=10 {
            let q = segment_quadrature(degree).unwrap();
            assert!((q.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            for k in 0..=degree as i32 {
                let got = q.integrate(|t| t[0].powi(k));
                assert!((got - 1.0 / (k as f64 + 1.0)).abs() < 1e-13, "deg {degree}, t^{k}");
            }
        }
    }

    #[test]
    fn three_point_gauss_on_t5() {
        let q = segment_quadrature(5).unwrap();
        assert_eq!(q.len(), 3);
        assert!((q.integrate(|t| t[0].powi(5)) - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn unsupported_degrees() {
        assert!(triangle_quadrature(0).is_err());
        assert!(triangle_quadrature(9).is_err());
        assert!(segment_quadrature(0).is_err());
        assert!(segment_quadrature(11).is_err());
    }
}
