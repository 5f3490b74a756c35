use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::linalg::{dot, norm, reorthogonalize, symmetric_eigen, Matrix};
use super::{AlgoError, AlgoResult};

/// Inputs with more rows than this go through the randomized solver.
pub const RANDOMIZED_THRESHOLD: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcaMethod {
    PowerIteration,
    RandomizedSvd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaOptions {
    pub seed: u64,
    pub oversampling: usize,
    pub power_iterations: usize,
    /// Overrides the row-count rule.
    pub force: Option<PcaMethod>,
}

impl Default for PcaOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            oversampling: 10,
            power_iterations: 2,
            force: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult {
    /// `d × k`, orthonormal columns.
    pub components: Matrix,
    pub explained_variance: Vec<f64>,
    pub explained_variance_ratio: Vec<f64>,
    /// `n × k` scores of the centered data.
    pub projected: Matrix,
    pub mean: Vec<f64>,
    pub method: PcaMethod,
    /// Set when the centered data has zero variance.
    pub degenerate: bool,
}

pub fn pca(data: &Matrix, k: usize) -> AlgoResult<PcaResult> {
    pca_with(data, k, &PcaOptions::default())
}

pub fn pca_with(data: &Matrix, k: usize, opts: &PcaOptions) -> AlgoResult<PcaResult> {
    let (n, d) = (data.rows(), data.cols());
    if n < 2 {
        return Err(AlgoError::DegenerateInput(format!(
            "pca needs at least 2 rows, got {n}"
        )));
    }
    if k == 0 || k > n.min(d) {
        return Err(AlgoError::InvalidParameter(format!(
            "k = {k} not in 1..={}",
            n.min(d)
        )));
    }
    if data.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(AlgoError::DegenerateInput("non-finite entry".into()));
    }
    let mut mean = vec![0.0; d];
    for i in 0..n {
        mean.iter_mut().zip(data.row(i)).for_each(|(m, x)| *m += x);
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut centered = data.clone();
    for i in 0..n {
        for j in 0..d {
            centered[(i, j)] -= mean[j];
        }
    }
    let denom = (n - 1) as f64;
    let total_variance = centered.frobenius_norm().powi(2) / denom;
    let method = opts.force.unwrap_or(if n > RANDOMIZED_THRESHOLD {
        PcaMethod::RandomizedSvd
    } else {
        PcaMethod::PowerIteration
    });
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut variances, mut components) = match method {
        PcaMethod::PowerIteration => power_iteration(&centered, k, denom, &mut rng),
        PcaMethod::RandomizedSvd => randomized(&centered, k, denom, opts, &mut rng),
    };
    let degenerate =
        total_variance <= f64::EPSILON * (1.0 + mean.iter().map(|m| m * m).sum::<f64>());
    if degenerate {
        variances.iter_mut().for_each(|v| *v = 0.0);
    }
    for j in 0..k {
        let mut c = components.column(j);
        let pivot = c.iter().enumerate().fold(
            0,
            |best, (i, x)| if x.abs() > c[best].abs() { i } else { best },
        );
        if c[pivot] < 0.0 {
            c.iter_mut().for_each(|x| *x = -*x);
            components.set_column(j, &c);
        }
    }
    let ratio = variances
        .iter()
        .map(|v| if degenerate { 0.0 } else { v / total_variance })
        .collect();
    let projected = centered.matmul(&components);
    Ok(PcaResult {
        components,
        explained_variance: variances,
        explained_variance_ratio: ratio,
        projected,
        mean,
        method,
        degenerate,
    })
}

/// Deflated power iteration on the `d × d` covariance.
fn power_iteration(x: &Matrix, k: usize, denom: f64, rng: &mut ChaCha8Rng) -> (Vec<f64>, Matrix) {
    let d = x.cols();
    let mut cov = x.t_matmul(x);
    cov_scale(&mut cov, denom);
    let scale = cov.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut found: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for _ in 0..k {
        let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        reorthogonalize(&mut v, &found);
        normalize(&mut v);
        let mut lambda = 0.0;
        for _ in 0..20_000 {
            let mut w = mat_vec(&cov, &v);
            reorthogonalize(&mut w, &found);
            let l = norm(&w);
            if l <= 1e-14 * scale {
                // remaining spectrum is numerically zero; any orthogonal direction works
                lambda = 0.0;
                break;
            }
            w.iter_mut().for_each(|x| *x /= l);
            let change = v
                .iter()
                .zip(&w)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            v = w;
            lambda = l;
            if change < 1e-13 {
                break;
            }
        }
        let cv = mat_vec(&cov, &v);
        if lambda > 0.0 {
            lambda = dot(&v, &cv);
        }
        for i in 0..d {
            for j in 0..d {
                cov[(i, j)] -= lambda * v[i] * v[j];
            }
        }
        values.push(lambda.max(0.0));
        found.push(v);
    }
    let mut comps = Matrix::zeros(d, k);
    for (j, v) in found.iter().enumerate() {
        comps.set_column(j, v);
    }
    (values, comps)
}

/// Gaussian sketch, subspace iteration, then an exact eigen-solve of the small
/// projected Gram matrix.
fn randomized(
    x: &Matrix,
    k: usize,
    denom: f64,
    opts: &PcaOptions,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, Matrix) {
    let (n, d) = (x.rows(), x.cols());
    let l = (k + opts.oversampling).min(d).min(n);
    let omega = Matrix::from_vec(
        d,
        l,
        (0..d * l).map(|_| StandardNormal.sample(rng)).collect(),
    );
    let mut q = x.matmul(&omega);
    q.orthonormalize_columns();
    for _ in 0..opts.power_iterations {
        let mut z = x.t_matmul(&q);
        z.orthonormalize_columns();
        q = x.matmul(&z);
        q.orthonormalize_columns();
    }
    // B = Qᵀ X is l × d; the right singular vectors of B approximate those of X.
    let b = q.t_matmul(x);
    let mut gram = b.t_matmul(&b);
    cov_scale(&mut gram, denom);
    let (vals, vecs) = symmetric_eigen(&gram);
    let mut comps = Matrix::zeros(d, k);
    for j in 0..k {
        comps.set_column(j, &vecs.column(j));
    }
    comps.orthonormalize_columns();
    (vals[..k].iter().map(|v| v.max(0.0)).collect(), comps)
}

fn cov_scale(m: &mut Matrix, denom: f64) {
    let (r, c) = (m.rows(), m.cols());
    for i in 0..r {
        for j in 0..c {
            m[(i, j)] /= denom;
        }
    }
}

fn mat_vec(m: &Matrix, v: &[f64]) -> Vec<f64> {
    (0..m.rows()).map(|i| dot(m.row(i), v)).collect()
}

fn normalize(v: &mut [f64]) {
    let l = norm(v);
    if l > 0.0 {
        v.iter_mut().for_each(|x| *x /= l);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormality_error(c: &Matrix) -> f64 {
        let g = c.t_matmul(c);
        let mut worst: f64 = 0.0;
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - want).abs());
            }
        }
        worst
    }

    #[test]
    fn collinear_points() {
        let rows: Vec<[f64; 2]> = (0..20).map(|i| [i as f64, 2.0 * i as f64 + 1.0]).collect();
        let r = pca(&Matrix::from_rows(&rows), 1).unwrap();
        assert!((r.explained_variance_ratio[0] - 1.0).abs() < 1e-9);
        let c = r.components.column(0);
        let s = 5f64.sqrt();
        assert!((c[0] - 1.0 / s).abs() < 1e-9 && (c[1] - 2.0 / s).abs() < 1e-9);
        assert_eq!(r.method, PcaMethod::PowerIteration);
    }

    #[test]
    fn threshold_picks_method() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mk = |n: usize, rng: &mut ChaCha8Rng| {
            Matrix::from_vec(
                n,
                4,
                (0..n * 4).map(|_| StandardNormal.sample(rng)).collect(),
            )
        };
        assert_eq!(
            pca(&mk(600, &mut rng), 2).unwrap().method,
            PcaMethod::RandomizedSvd
        );
        assert_eq!(
            pca(&mk(400, &mut rng), 2).unwrap().method,
            PcaMethod::PowerIteration
        );
        assert_eq!(
            pca(&mk(501, &mut rng), 2).unwrap().method,
            PcaMethod::RandomizedSvd
        );
        assert_eq!(
            pca(&mk(500, &mut rng), 2).unwrap().method,
            PcaMethod::PowerIteration
        );
    }

    #[test]
    fn full_rank_reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let data = Matrix::from_vec(
            50,
            5,
            (0..250).map(|_| StandardNormal.sample(&mut rng)).collect(),
        );
        for force in [PcaMethod::PowerIteration, PcaMethod::RandomizedSvd] {
            let opts = PcaOptions {
                force: Some(force),
                ..Default::default()
            };
            let r = pca_with(&data, 5, &opts).unwrap();
            assert!(orthonormality_error(&r.components) < 1e-8, "{force:?}");
            let back = r.projected.matmul(&r.components.transpose());
            let mut err = 0.0;
            let mut total = 0.0;
            for i in 0..50 {
                for j in 0..5 {
                    let c = data[(i, j)] - r.mean[j];
                    err += (back[(i, j)] - c).powi(2);
                    total += c * c;
                }
            }
            assert!((err / total).sqrt() < 1e-6);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let one = Matrix::from_rows(&[[1.0, 2.0]]);
        assert!(matches!(pca(&one, 1), Err(AlgoError::DegenerateInput(_))));
        let two = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        assert!(matches!(pca(&two, 3), Err(AlgoError::InvalidParameter(_))));
        assert!(matches!(pca(&two, 0), Err(AlgoError::InvalidParameter(_))));
    }

    #[test]
    fn constant_data_is_flagged() {
        let r = pca(&Matrix::from_rows(&[[3.0, 3.0], [3.0, 3.0], [3.0, 3.0]]), 2).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.explained_variance, vec![0.0, 0.0]);
        assert!(orthonormality_error(&r.components) < 1e-8);
    }

    #[test]
    fn sign_convention() {
        let rows: Vec<[f64; 2]> = (0..10)
            .map(|i| [-(i as f64), 0.1 * (i % 3) as f64])
            .collect();
        let r = pca(&Matrix::from_rows(&rows), 2).unwrap();
        for j in 0..2 {
            let c = r.components.column(j);
            let big = c
                .iter()
                .cloned()
                .fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
            assert!(big > 0.0);
        }
    }
}
