//! Gaussian maximal correlation: the maximal correlation restricted to
//! hermitian observables linear in the quadratures, i.e. the largest
//! singular value of the whitened cross covariance
//! `gamma_A^{-1/2} nu_AB gamma_B^{-1/2}`.
//!
//! Parties may hold several modes; the whitened-norm form only uses
//! linearity of the observables, so it applies to any block bipartition.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    self, inv_sqrt_sym, min_eigenvalue_sym, quadrature_indices, submatrix, top_singular, Mat,
};
use crate::phase_space::{GaussianState, ModePartition};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianCorrelationReport {
    pub mu_g: f64,
    /// Optimal quadrature directions, normalized as `r^T gamma r = 1`.
    pub r_a: Vec<f64>,
    pub r_b: Vec<f64>,
    /// Some party holds more than one mode.
    pub multimode: bool,
}

struct Blocks {
    gamma_a: Mat,
    gamma_b: Mat,
    cross: Mat,
    joint: Mat,
}

fn split(state: &GaussianState, partition: &ModePartition) -> Result<Blocks> {
    if partition.len() != 2 {
        return Err(Error::Partition(format!(
            "expected 2 parties, got {}",
            partition.len()
        )));
    }
    if partition.modes() != state.modes() {
        return Err(Error::Partition(format!(
            "partition covers {} modes, state has {}",
            partition.modes(),
            state.modes()
        )));
    }
    state.ensure_physical(tol::PSD)?;
    let ia = quadrature_indices(&partition.parties()[0]);
    let ib = quadrature_indices(&partition.parties()[1]);
    let all: Vec<usize> = ia.iter().chain(&ib).copied().collect();
    let cov = state.cov();
    Ok(Blocks {
        gamma_a: submatrix(cov, &ia, &ia),
        gamma_b: submatrix(cov, &ib, &ib),
        cross: submatrix(cov, &ia, &ib),
        joint: submatrix(cov, &all, &all),
    })
}

pub fn gaussian_maximal_correlation(
    state: &GaussianState,
    partition: &ModePartition,
) -> Result<GaussianCorrelationReport> {
    let b = split(state, partition)?;
    let wa = inv_sqrt_sym(&b.gamma_a, tol::EIGEN_FLOOR).ok_or(Error::SingularBlock)?;
    let wb = inv_sqrt_sym(&b.gamma_b, tol::EIGEN_FLOOR).ok_or(Error::SingularBlock)?;
    let top = top_singular(&(&wa * &b.cross * &wb));
    let mut r_a = &wa * &top.left;
    let mut r_b = &wb * &top.right;
    // deterministic sign: first nonzero entry of r_a positive
    if r_a
        .iter()
        .find(|x| x.abs() > 1e-14)
        .is_some_and(|&x| x < 0.0)
    {
        r_a.neg_mut();
        r_b.neg_mut();
    }
    Ok(GaussianCorrelationReport {
        mu_g: top.value,
        r_a: r_a.iter().copied().collect(),
        r_b: r_b.iter().copied().collect(),
        multimode: partition.parties().iter().any(|p| p.len() > 1),
    })
}

/// `V = max{q <= 1 : gamma >= q (gamma_A (+) gamma_B)}` by bisection;
/// equals `1 - mu_G`.
pub fn v_parameter(state: &GaussianState, partition: &ModePartition) -> Result<f64> {
    let b = split(state, partition)?;
    let marginals = linalg::direct_sum(&b.gamma_a, &b.gamma_b);
    let feasible = |q: f64| min_eigenvalue_sym(&(&b.joint - &marginals * q)) >= -tol::V_PSD;
    if feasible(1.0) {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > tol::V_BISECTION {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed form in standard form: `|nu_1| / sqrt(lambda_A lambda_B)`, `|nu_1| >= |nu_2|`.
pub fn mu_g_standard_form(lambda_a: f64, lambda_b: f64, nu1: f64, nu2: f64) -> f64 {
    nu1.abs().max(nu2.abs()) / (lambda_a * lambda_b).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn standard(la: f64, lb: f64, n1: f64, n2: f64) -> GaussianState {
        GaussianState::centered(Mat::from_row_slice(
            4,
            4,
            &[
                la, 0., n1, 0., 0., la, 0., n2, n1, 0., lb, 0., 0., n2, 0., lb,
            ],
        ))
        .unwrap()
    }

    fn ab() -> ModePartition {
        ModePartition::singletons(2)
    }

    #[test]
    fn ca_cc_and_tmsv_values() {
        let r = gaussian_maximal_correlation(&standard(2., 2., 1., -1.), &ab()).unwrap();
        assert_abs_diff_eq!(r.mu_g, 0.5, epsilon = 1e-14);
        let r = gaussian_maximal_correlation(&standard(2., 2., 1., 1.), &ab()).unwrap();
        assert_abs_diff_eq!(r.mu_g, 0.5, epsilon = 1e-14);
        let s3 = 3.0_f64.sqrt();
        let r = gaussian_maximal_correlation(&standard(2., 2., s3, -s3), &ab()).unwrap();
        assert_abs_diff_eq!(r.mu_g, s3 / 2.0, epsilon = 1e-14);
        let r = gaussian_maximal_correlation(&standard(2., 3., 0., 0.), &ab()).unwrap();
        assert_eq!(r.mu_g, 0.0);
        assert!(!r.multimode);
    }

    #[test]
    fn witness_normalization() {
        let cov = Mat::from_row_slice(
            4,
            4,
            &[
                3.0, 0.2, 0.9, -0.4, 0.2, 2.5, 0.3, 0.7, 0.9, 0.3, 2.0, 0.1, -0.4, 0.7, 0.1, 2.2,
            ],
        );
        let s = GaussianState::centered(cov.clone()).unwrap();
        let r = gaussian_maximal_correlation(&s, &ab()).unwrap();
        let ra = DVector::from_vec(r.r_a.clone());
        let rb = DVector::from_vec(r.r_b.clone());
        let ga = cov.view((0, 0), (2, 2)).into_owned();
        let gb = cov.view((2, 2), (2, 2)).into_owned();
        let nu = cov.view((0, 2), (2, 2)).into_owned();
        assert_abs_diff_eq!((ra.transpose() * ga * &ra)[(0, 0)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!((rb.transpose() * gb * &rb)[(0, 0)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!((ra.transpose() * nu * &rb)[(0, 0)], r.mu_g, epsilon = 1e-12);
        assert!(r.mu_g < 1.0);
    }

    #[test]
    fn v_parameter_values() {
        assert_eq!(
            v_parameter(&GaussianState::thermal(&[2.0, 3.0]), &ab()).unwrap(),
            1.0
        );
        let v = v_parameter(&standard(2., 2., 1., -1.), &ab()).unwrap();
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn closed_form() {
        assert_abs_diff_eq!(mu_g_standard_form(2., 2., 1., -1.), 0.5, epsilon = 1e-15);
        assert_eq!(mu_g_standard_form(2., 2., 0., 0.), 0.0);
    }

    #[test]
    fn partition_errors() {
        let s = standard(2., 2., 1., -1.);
        assert!(gaussian_maximal_correlation(&s, &ModePartition::singletons(1)).is_err());
        let three = ModePartition::singletons(3);
        assert!(
            gaussian_maximal_correlation(&GaussianState::thermal(&[2., 2., 2.]), &three).is_err()
        );
    }
}
