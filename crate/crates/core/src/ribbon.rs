//! Maximal-correlation ribbon membership.
//!
//! For an `m`-mode state with one mode per party, `theta` is in the ribbon
//! iff `Theta^{-1} (x) I_2 >= G1`, where `G1` is the Gram matrix of the
//! degree-one orthonormal local operators,
//! `G1 = 1/2 Lambda^{-1} conj(U_m) (gamma + i Omega) U_m^T Lambda^{-1}`
//! computed on the local standard form. The Gaussian ribbon restricts to
//! hermitian linear observables and reads
//! `blockdiag(gamma_{A_j} / theta_j) >= gamma`.
//!
//! A party with `theta_j = 0` is dropped from the test (the `1/theta -> inf`
//! limit), as is a decoupled vacuum mode.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    complexify, min_eigenvalue_herm, min_eigenvalue_sym, quadrature_indices, submatrix, CMat,
};
use crate::maxcorr::{zeta0, zeta1};
use crate::phase_space::{symplectic_form, GaussianState, ModePartition};
use crate::standard_form::local_standard_form;
use crate::tol;

/// A point of `[0, 1]^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaPoint(Vec<f64>);

impl ThetaPoint {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::Shape("theta must be non-empty".into()));
        }
        for &t in &theta {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::OutOfRange {
                    name: "theta",
                    value: t,
                    expected: "0 <= theta_j <= 1",
                });
            }
        }
        Ok(Self(theta))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let theta = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad theta component {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(theta)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Verdict plus the minimum eigenvalue of the tested matrix. `margin` is
/// `+inf` when every party was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RibbonVerdict {
    pub accepted: bool,
    pub margin: f64,
}

impl RibbonVerdict {
    fn from_margin(margin: f64, tol: f64) -> Self {
        Self {
            accepted: margin >= -tol,
            margin,
        }
    }
}

/// `U = [[1, -i], [1, i]] / sqrt(2)`.
pub fn upsilon() -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(
        2,
        2,
        &[
            Complex64::new(h, 0.0),
            Complex64::new(0.0, -h),
            Complex64::new(h, 0.0),
            Complex64::new(0.0, h),
        ],
    )
}

/// Degree-one Gram matrix over the modes that are not decoupled.
#[derive(Debug, Clone)]
pub struct RibbonGram {
    pub g1: CMat,
    /// Original mode index of each 2x2 block of `g1`.
    pub active_modes: Vec<usize>,
    pub lambdas: Vec<f64>,
}

pub fn ribbon_gram(state: &GaussianState) -> Result<RibbonGram> {
    let sf = local_standard_form(state)?;
    for (j, (&d, &res)) in sf.decoupled.iter().zip(&sf.decoupled_residual).enumerate() {
        if d && res > tol::DECOUPLED_CORRELATION {
            return Err(Error::DecoupledInconsistent {
                mode: j,
                correlation: res,
            });
        }
    }
    let active: Vec<usize> = (0..state.modes()).filter(|&j| !sf.decoupled[j]).collect();
    let k = active.len();
    let idx = quadrature_indices(&active);
    let gamma = submatrix(sf.standardized.cov(), &idx, &idx);
    let m_op = complexify(&gamma, &symplectic_form(k));

    let u = upsilon();
    let mut u_m = CMat::zeros(2 * k, 2 * k);
    let mut lambda_inv = CMat::zeros(2 * k, 2 * k);
    for (b, &j) in active.iter().enumerate() {
        u_m.view_mut((2 * b, 2 * b), (2, 2)).copy_from(&u);
        let l = sf.lambdas[j];
        lambda_inv[(2 * b, 2 * b)] = Complex64::new(1.0 / zeta0(l), 0.0);
        lambda_inv[(2 * b + 1, 2 * b + 1)] = Complex64::new(1.0 / zeta1(l), 0.0);
    }
    let g1 =
        (&lambda_inv * u_m.conjugate() * m_op * u_m.transpose() * &lambda_inv).map(|z| z * 0.5);
    Ok(RibbonGram {
        g1,
        lambdas: active.iter().map(|&j| sf.lambdas[j]).collect(),
        active_modes: active,
    })
}

impl RibbonGram {
    /// Minimum eigenvalue of `Theta^{-1} (x) I_2 - G1` for a full-length theta.
    pub fn margin(&self, theta: &[f64]) -> f64 {
        let kept: Vec<usize> = (0..self.active_modes.len())
            .filter(|&b| theta[self.active_modes[b]] > 0.0)
            .collect();
        let n = 2 * kept.len();
        let mut m = CMat::zeros(n, n);
        for (r, &br) in kept.iter().enumerate() {
            for (c, &bc) in kept.iter().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        m[(2 * r + i, 2 * c + j)] = -self.g1[(2 * br + i, 2 * bc + j)];
                    }
                }
            }
            let inv = 1.0 / theta[self.active_modes[br]];
            m[(2 * r, 2 * r)] += inv;
            m[(2 * r + 1, 2 * r + 1)] += inv;
        }
        min_eigenvalue_herm(&m)
    }
}

/// Quantum ribbon membership, one mode per party.
pub fn in_ribbon(state: &GaussianState, theta: &ThetaPoint, tol: f64) -> Result<RibbonVerdict> {
    if theta.len() != state.modes() {
        return Err(Error::Shape(format!(
            "theta has {} components for {} modes",
            theta.len(),
            state.modes()
        )));
    }
    let gram = ribbon_gram(state)?;
    Ok(RibbonVerdict::from_margin(gram.margin(theta.values()), tol))
}

/// Bipartite ribbon in closed form: `(1/theta_1 - 1)(1/theta_2 - 1) >= mu^2`.
/// The margin is the left side minus `mu^2` (`+inf` if a theta is 0).
pub fn bipartite_ribbon_check(mu: f64, theta1: f64, theta2: f64, tol: f64) -> RibbonVerdict {
    if theta1 == 0.0 || theta2 == 0.0 {
        return RibbonVerdict::from_margin(f64::INFINITY, tol);
    }
    let lhs = (1.0 / theta1 - 1.0) * (1.0 / theta2 - 1.0);
    RibbonVerdict::from_margin(lhs - mu * mu, tol)
}

/// Gaussian ribbon membership; parties may hold several modes.
pub fn in_gaussian_ribbon(
    state: &GaussianState,
    partition: &ModePartition,
    theta: &ThetaPoint,
    tol: f64,
) -> Result<RibbonVerdict> {
    if partition.modes() != state.modes() {
        return Err(Error::Partition(format!(
            "partition covers {} modes, state has {}",
            partition.modes(),
            state.modes()
        )));
    }
    if theta.len() != partition.len() {
        return Err(Error::Shape(format!(
            "theta has {} components for {} parties",
            theta.len(),
            partition.len()
        )));
    }
    state.ensure_physical(tol::PSD)?;
    let kept: Vec<(Vec<usize>, f64)> = partition
        .parties()
        .iter()
        .zip(theta.values())
        .filter(|(_, &t)| t > 0.0)
        .map(|(p, &t)| (quadrature_indices(p), t))
        .collect();
    let all: Vec<usize> = kept.iter().flat_map(|(i, _)| i.iter().copied()).collect();
    let gamma = submatrix(state.cov(), &all, &all);
    let mut m = -gamma;
    let mut offset = 0;
    for (idx, t) in &kept {
        let block = submatrix(state.cov(), idx, idx) / *t;
        let n = idx.len();
        let mut view = m.view_mut((offset, offset), (n, n));
        view += block;
        offset += n;
    }
    Ok(RibbonVerdict::from_margin(min_eigenvalue_sym(&m), tol))
}

/// Diagonal boundary point of the bipartite ribbon, `1 / (1 + mu)`.
pub fn diagonal_boundary(mu: f64) -> f64 {
    1.0 / (1.0 + mu)
}
