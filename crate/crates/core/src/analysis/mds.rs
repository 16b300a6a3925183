use nalgebra::{DMatrix, SymmetricEigen};

use super::DistanceMatrix;
use crate::error::{Error, Result};

/// Low-dimensional coordinates for the rows of a distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding2D {
    pub labels: Vec<String>,
    /// `n` rows of `dims` coordinates.
    pub coords: Vec<Vec<f64>>,
    /// Full spectrum of the double-centred matrix, descending.
    pub eigenvalues: Vec<f64>,
    /// Negative eigenvalues (beyond round-off) that a Euclidean embedding
    /// cannot represent.
    pub negative_eigenvalues: usize,
}

impl Embedding2D {
    pub fn dims(&self) -> usize {
        self.coords.first().map_or(0, Vec::len)
    }
}

/// Classical (Torgerson) multidimensional scaling.
///
/// `B = -1/2 J (D∘D) J` is eigendecomposed and the top `dims` eigenpairs,
/// with negative eigenvalues clamped to zero, give the coordinates. Each
/// axis is flipped so its first clearly nonzero coordinate is positive.
pub fn classical_mds(d: &DistanceMatrix, dims: usize) -> Result<Embedding2D> {
    let n = d.len();
    if dims > n {
        return Err(Error::InvalidArgument(format!("cannot embed {n} points in {dims} dimensions")));
    }
    let sq = DMatrix::from_fn(n, n, |i, j| d.get(i, j) * d.get(i, j));
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let total = row_means.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + total));

    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let scale = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let noise = 1e-9 * scale.max(1e-300);
    let negative_eigenvalues = eigenvalues.iter().filter(|&&v| v < -noise).count();

    let mut coords = vec![vec![0.0; dims]; n];
    for (axis, &k) in order.iter().take(dims).enumerate() {
        let lambda = eig.eigenvalues[k];
        if lambda <= noise {
            continue;
        }
        let s = lambda.sqrt();
        let col = eig.eigenvectors.column(k);
        let flip = col
            .iter()
            .find(|v| v.abs() > 1e-12)
            .map_or(1.0, |&v| if v < 0.0 { -1.0 } else { 1.0 });
        for i in 0..n {
            coords[i][axis] = flip * s * col[i];
        }
    }
    Ok(Embedding2D {
        labels: d.labels().to_vec(),
        coords,
        eigenvalues,
        negative_eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid(points: &[(f64, f64)]) -> DistanceMatrix {
        let n = points.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let (a, b) = (points[i.min(j)], points[i.max(j)]);
                        (a.0 - b.0).hypot(a.1 - b.1)
                    })
                    .collect()
            })
            .collect();
        DistanceMatrix::from_rows((0..n).map(|i| i.to_string()).collect(), rows).unwrap()
    }

    fn embedded_distance(e: &Embedding2D, i: usize, j: usize) -> f64 {
        e.coords[i].iter().zip(&e.coords[j]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }

    #[test]
    fn zero_matrix_collapses_to_origin() {
        let d = DistanceMatrix::from_rows(vec!["a".into(), "b".into(), "c".into()], vec![vec![0.0; 3]; 3]).unwrap();
        let e = classical_mds(&d, 2).unwrap();
        assert!(e.coords.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn collinear_points_recovered() {
        let d = euclid(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let e = classical_mds(&d, 2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((embedded_distance(&e, i, j) - d.get(i, j)).abs() < 1e-9);
            }
        }
        for axis in 0..2 {
            let mean: f64 = e.coords.iter().map(|c| c[axis]).sum::<f64>() / 3.0;
            assert!(mean.abs() < 1e-12);
        }
    }

    #[test]
    fn too_many_dimensions() {
        let d = euclid(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(classical_mds(&d, 3).is_err());
    }

    #[test]
    fn non_euclidean_input_reports_negative_spectrum() {
        // violates the triangle inequality: 0-1 far, both close to 2
        let rows = vec![vec![0.0, 10.0, 1.0], vec![10.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]];
        let d = DistanceMatrix::from_rows(vec!["a".into(), "b".into(), "c".into()], rows).unwrap();
        let e = classical_mds(&d, 2).unwrap();
        assert!(e.negative_eigenvalues >= 1);
        assert!(e.coords.iter().flatten().all(|v| v.is_finite()));
    }
}
