use nalgebra::DMatrix;

use super::{FieldKind, NoiseModel, Regularity, StochasticOracle, VIProblem};
use crate::error::{check_dim, Error, Result};
use crate::geometry::DomainSpec;

/// Covariance learning game between a linear generator `G(z) = V z` and a
/// quadratic discriminator `D(x) = x^T W x`:
/// `f(V, W) = E[x^T W x] - E[z^T V^T W V z] = tr(W Sigma) - tr(W V V^T)`,
/// minimized in `V` and maximized in `W`. Points are `[vec(V); vec(W)]`,
/// both row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceGame {
    pub dim: usize,
    /// Row-major `Sigma`.
    pub sigma: Vec<f64>,
    /// Row-major lower Cholesky factor of `Sigma`.
    pub(crate) chol: Vec<f64>,
}

fn matmul(a: &[f64], b: &[f64], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    out
}

fn transpose(a: &[f64], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            out[j * d + i] = a[i * d + j];
        }
    }
    out
}

impl CovarianceGame {
    pub fn new(dim: usize, sigma: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfiguration(
                "covariance dimension must be positive".into(),
            ));
        }
        check_dim(dim * dim, sigma.len())?;
        let scale = sigma.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        for i in 0..dim {
            for j in 0..i {
                if (sigma[i * dim + j] - sigma[j * dim + i]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidConfiguration(
                        "covariance matrix must be symmetric".into(),
                    ));
                }
            }
        }
        let chol = DMatrix::from_row_slice(dim, dim, &sigma)
            .cholesky()
            .ok_or_else(|| {
                Error::InvalidConfiguration("covariance matrix must be positive definite".into())
            })?;
        let l = chol.l();
        let chol = (0..dim * dim).map(|k| l[(k / dim, k % dim)]).collect();
        Ok(CovarianceGame { dim, sigma, chol })
    }

    pub fn point_dim(&self) -> usize {
        2 * self.dim * self.dim
    }

    /// `(V, W) = (I, 0)`.
    pub fn default_start(&self) -> Vec<f64> {
        let d = self.dim;
        let mut x = vec![0.0; 2 * d * d];
        for i in 0..d {
            x[i * d + i] = 1.0;
        }
        x
    }

    pub fn loss(&self, x: &[f64]) -> f64 {
        let d = self.dim;
        let (v, w) = x.split_at(d * d);
        let vvt = matmul(v, &transpose(v, d), d);
        // tr(W A) = sum_ij W_ij A_ji
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| w[i * d + j] * (self.sigma[j * d + i] - vvt[j * d + i]))
            .sum()
    }

    pub(crate) fn eval(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        let v = &x[..d * d];
        let vvt = matmul(v, &transpose(v, d), d);
        self.eval_parts(x, &self.sigma, &vvt, None, out);
    }

    /// Field with `Sigma` and `V V^T` replaced by minibatch second moments:
    /// `data_moment` of real samples and `noise_moment` of latent draws.
    pub(crate) fn eval_minibatch(
        &self,
        x: &[f64],
        data_moment: &[f64],
        noise_moment: &[f64],
        out: &mut [f64],
    ) {
        let d = self.dim;
        let v = &x[..d * d];
        let generated = matmul(&matmul(v, noise_moment, d), &transpose(v, d), d);
        self.eval_parts(x, data_moment, &generated, Some(noise_moment), out);
    }

    fn eval_parts(
        &self,
        x: &[f64],
        data: &[f64],
        generated: &[f64],
        noise_moment: Option<&[f64]>,
        out: &mut [f64],
    ) {
        let d = self.dim;
        let (v, w) = x.split_at(d * d);
        let (g_v, g_w) = out.split_at_mut(d * d);
        let sym: Vec<f64> = (0..d * d).map(|k| w[k] + w[(k % d) * d + k / d]).collect();
        // d f / d V = -(W + W^T) V S_z
        let sv = matmul(&sym, v, d);
        let grad_v = match noise_moment {
            Some(sz) => matmul(&sv, sz, d),
            None => sv,
        };
        for (g, s) in g_v.iter_mut().zip(&grad_v) {
            *g = -s;
        }
        // the max player descends -d f / d W = -(Sigma - V V^T)
        for ((g, a), b) in g_w.iter_mut().zip(data).zip(generated) {
            *g = -(a - b);
        }
    }
}

/// Deterministic covariance game; the field uses exact second moments.
pub fn covariance_problem(dim: usize, sigma: Vec<f64>) -> Result<VIProblem> {
    let game = CovarianceGame::new(dim, sigma)?;
    let domain = DomainSpec::unconstrained(game.point_dim())?;
    Ok(VIProblem {
        name: format!("covariance-{dim}"),
        domain,
        field: FieldKind::Covariance(game),
        regularity: Regularity {
            is_monotone: false,
            ..Regularity::default()
        },
        known_solution: None,
    })
}

/// Covariance game sampled through minibatches of `batch` real and latent draws.
pub fn make_covariance_game(
    dim: usize,
    sigma: Vec<f64>,
    batch: usize,
    seed: u64,
) -> Result<StochasticOracle> {
    let problem = covariance_problem(dim, sigma)?;
    StochasticOracle::new(problem, NoiseModel::MinibatchCovariance { batch }, seed)
}
