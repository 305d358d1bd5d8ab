use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{stream_id, FieldKind, Regularity, VIProblem};
use crate::error::{check_dim, Error, Result};
use crate::geometry::DomainSpec;

/// `f(theta, phi) = (theta - theta*)^T M (phi - phi*)`, minimized in `theta`
/// and maximized in `phi`. Points are laid out as `[theta; phi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearGame {
    pub dim: usize,
    /// Row-major `dim x dim`.
    pub matrix: Vec<f64>,
    pub theta_star: Vec<f64>,
    pub phi_star: Vec<f64>,
}

impl BilinearGame {
    pub(crate) fn eval(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        let (theta, phi) = x.split_at(d);
        let (g_theta, g_phi) = out.split_at_mut(d);
        // g_theta = M (phi - phi*)
        for i in 0..d {
            let row = &self.matrix[i * d..(i + 1) * d];
            g_theta[i] = row
                .iter()
                .zip(phi.iter().zip(&self.phi_star))
                .map(|(m, (p, ps))| m * (p - ps))
                .sum();
        }
        // g_phi = -M^T (theta - theta*)
        g_phi.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..d {
            let t = theta[i] - self.theta_star[i];
            let row = &self.matrix[i * d..(i + 1) * d];
            for (g, m) in g_phi.iter_mut().zip(row) {
                *g -= m * t;
            }
        }
    }

    /// Loss value, used by derivative checks.
    pub fn loss(&self, x: &[f64]) -> f64 {
        let d = self.dim;
        let (theta, phi) = x.split_at(d);
        let mut total = 0.0;
        for i in 0..d {
            for j in 0..d {
                total += (theta[i] - self.theta_star[i])
                    * self.matrix[i * d + j]
                    * (phi[j] - self.phi_star[j]);
            }
        }
        total
    }

    pub fn largest_singular_value(&self) -> f64 {
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.matrix);
        m.singular_values().max()
    }
}

/// Gaussian bilinear game: the matrix entries are i.i.d. standard normal draws
/// from a stream keyed by `matrix_seed`.
pub fn make_bilinear(
    dim: usize,
    matrix_seed: u64,
    theta_star: Vec<f64>,
    phi_star: Vec<f64>,
    box_radius: f64,
) -> Result<VIProblem> {
    if dim == 0 {
        return Err(Error::InvalidConfiguration(
            "bilinear dimension must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(matrix_seed);
    rng.set_stream(stream_id("bilinear-matrix"));
    let matrix: Vec<f64> = (0..dim * dim)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    make_bilinear_with_matrix(dim, matrix, theta_star, phi_star, box_radius)
}

/// Gaussian bilinear game whose saddle point is drawn uniformly from
/// `[-amplitude, amplitude]^{2d}` on a second stream keyed by `matrix_seed`.
pub fn make_bilinear_random_saddle(
    dim: usize,
    matrix_seed: u64,
    amplitude: f64,
    box_radius: f64,
) -> Result<VIProblem> {
    if !(amplitude >= 0.0 && amplitude < box_radius) {
        return Err(Error::InvalidConfiguration(format!(
            "saddle amplitude must lie in [0, {box_radius}), got {amplitude}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(matrix_seed);
    rng.set_stream(stream_id("bilinear-saddle"));
    let saddle: Vec<f64> = (0..2 * dim)
        .map(|_| amplitude * (2.0 * rng.random::<f64>() - 1.0))
        .collect();
    make_bilinear(
        dim,
        matrix_seed,
        saddle[..dim].to_vec(),
        saddle[dim..].to_vec(),
        box_radius,
    )
}

pub fn make_bilinear_with_matrix(
    dim: usize,
    matrix: Vec<f64>,
    theta_star: Vec<f64>,
    phi_star: Vec<f64>,
    box_radius: f64,
) -> Result<VIProblem> {
    check_dim(dim * dim, matrix.len())?;
    check_dim(dim, theta_star.len())?;
    check_dim(dim, phi_star.len())?;
    let domain = DomainSpec::symmetric_box(2 * dim, box_radius)?;
    let solution: Vec<f64> = theta_star.iter().chain(&phi_star).copied().collect();
    if solution.iter().any(|v| !(v.abs() < box_radius)) {
        return Err(Error::InvalidConfiguration(format!(
            "saddle point must lie strictly inside the box of radius {box_radius}"
        )));
    }
    let game = BilinearGame {
        dim,
        matrix,
        theta_star,
        phi_star,
    };
    let lipschitz = game.largest_singular_value();
    // sup over the box of ||z - z*||_2
    let reach = solution
        .iter()
        .map(|s| (box_radius + s.abs()).powi(2))
        .sum::<f64>()
        .sqrt();
    let bound = lipschitz * reach;
    Ok(VIProblem {
        name: format!("bilinear-{dim}"),
        domain,
        field: FieldKind::Bilinear(game),
        regularity: Regularity {
            is_monotone: true,
            metric_bound: Some(bound),
            metric_smoothness: Some(lipschitz),
            euclidean_bound: Some(bound),
            euclidean_lipschitz: Some(lipschitz),
        },
        known_solution: Some(solution),
    })
}
