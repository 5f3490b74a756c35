//! Exact PCA reference through nalgebra.

use rand_distr::{Distribution, StandardNormal};
use strata::algos::Matrix;

use super::rng;

pub fn separated_data(n: usize, d: usize, seed: u64) -> Matrix {
    let mut r = rng(seed);
    let scales = [10.0, 8.0, 6.0, 4.0, 2.0];
    let mut loadings = Matrix::from_vec(
        d,
        5,
        (0..d * 5).map(|_| StandardNormal.sample(&mut r)).collect(),
    );
    loadings.orthonormalize_columns();
    let mut data = Matrix::zeros(n, d);
    for i in 0..n {
        let z: Vec<f64> = scales
            .iter()
            .map(|s| {
                let g: f64 = StandardNormal.sample(&mut r);
                s * g
            })
            .collect();
        for j in 0..d {
            let noise: f64 = StandardNormal.sample(&mut r);
            data[(i, j)] = 3.0 + 0.1 * noise + (0..5).map(|c| loadings[(j, c)] * z[c]).sum::<f64>();
        }
    }
    data
}

/// Largest principal angle between the column spans of two orthonormal `d × k` bases.
pub fn subspace_angle(a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>) -> f64 {
    let residual = a - b * (b.transpose() * a);
    let s = residual.svd(false, false).singular_values.max();
    s.min(1.0).asin()
}

pub fn exact_components(data: &Matrix, k: usize) -> nalgebra::DMatrix<f64> {
    let (n, d) = (data.rows(), data.cols());
    let mut x = nalgebra::DMatrix::from_row_slice(n, d, data.as_slice());
    let mean = x.row_mean();
    for mut row in x.row_iter_mut() {
        row -= &mean;
    }
    let cov = x.transpose() * &x / (n as f64 - 1.0);
    let eig = nalgebra::SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    nalgebra::DMatrix::from_columns(
        &order[..k]
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    )
}

pub fn to_na(m: &Matrix) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}
