//! Reduction to standard form under local Gaussian unitaries.
//!
//! Each mode is rotated so its 2x2 covariance block is diagonal and then
//! squeezed so the block becomes `lambda_j * I`. For two modes, a further
//! pair of local rotations diagonalizes the cross block to
//! `diag(nu_1, nu_2)` with `nu_1 >= |nu_2|`.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian_ops::{rotation, squeeze, GaussianUnitary};
use crate::linalg::{Mat, Vector};
use crate::phase_space::GaussianState;
use crate::tol;

#[derive(Debug, Clone)]
pub struct StandardFormResult {
    pub standardized: GaussianState,
    /// One 2x2 symplectic per mode; together with `displacement` they map the
    /// input onto `standardized`.
    pub local_symplectics: Vec<Mat>,
    pub displacement: Vector,
    /// Squeezing parameter per mode, `z = ln(g1/g2)/4` for the eigenvalues
    /// `g1, g2` of the rotated block (the applied squeezer is `squeeze(-z)`).
    pub squeezing: Vec<f64>,
    pub lambdas: Vec<f64>,
    /// Diagonal of the cross block (two-mode reduction only).
    pub nu: Option<(f64, f64)>,
    /// Modes with a pure vacuum marginal (`lambda = 1`).
    pub decoupled: Vec<bool>,
    /// Largest correlation entry zeroed on a decoupled mode.
    pub decoupled_residual: Vec<f64>,
}

impl StandardFormResult {
    pub fn unitary(&self) -> GaussianUnitary {
        GaussianUnitary::local(&self.local_symplectics, self.displacement.clone())
            .expect("standard-form witness is symplectic")
    }

    pub fn any_decoupled(&self) -> bool {
        self.decoupled.iter().any(|&d| d)
    }

    /// `(lambda_A, lambda_B, |nu_1|, |nu_2|)` for a two-mode reduction.
    pub fn invariants(&self) -> Option<[f64; 4]> {
        self.nu
            .map(|(a, b)| [self.lambdas[0], self.lambdas[1], a.abs(), b.abs()])
    }

    pub fn summary(&self) -> StandardFormSummary {
        StandardFormSummary {
            lambdas: self.lambdas.clone(),
            nu: self.nu.map(|(a, b)| [a, b]),
            squeezing: self.squeezing.clone(),
            local_symplectics: self
                .local_symplectics
                .iter()
                .map(|s| [[s[(0, 0)], s[(0, 1)]], [s[(1, 0)], s[(1, 1)]]])
                .collect(),
            displacement: self.displacement.iter().copied().collect(),
            decoupled: self.decoupled.clone(),
        }
    }
}

/// Plain-data view of a [`StandardFormResult`] for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardFormSummary {
    pub lambdas: Vec<f64>,
    pub nu: Option<[f64; 2]>,
    pub squeezing: Vec<f64>,
    pub local_symplectics: Vec<[[f64; 2]; 2]>,
    pub displacement: Vec<f64>,
    pub decoupled: Vec<bool>,
}

/// Smallest-angle rotation that diagonalizes a symmetric 2x2 block.
fn diagonalizing_angle(block: &Mat) -> f64 {
    let (a, b, c) = (
        block[(0, 0)],
        0.5 * (block[(0, 1)] + block[(1, 0)]),
        block[(1, 1)],
    );
    if b == 0.0 {
        0.0
    } else if a == c {
        FRAC_PI_4.copysign(b)
    } else {
        0.5 * (2.0 * b / (a - c)).atan()
    }
}

pub fn local_standard_form(state: &GaussianState) -> Result<StandardFormResult> {
    state.ensure_physical(tol::PSD)?;
    let m = state.modes();
    let mut blocks = Vec::with_capacity(m);
    let mut squeezing = Vec::with_capacity(m);
    let mut lambdas = Vec::with_capacity(m);
    for j in 0..m {
        let g = state.block(j, j);
        let r = rotation(diagonalizing_angle(&g));
        let d = &r * &g * r.transpose();
        let (g1, g2) = (d[(0, 0)], d[(1, 1)]);
        let z = 0.25 * (g1 / g2).ln();
        blocks.push(squeeze(-z) * r);
        squeezing.push(z);
        lambdas.push((g1 * g2).sqrt());
    }
    finish(state, blocks, squeezing, lambdas, None)
}

pub fn bipartite_standard_form(state: &GaussianState) -> Result<StandardFormResult> {
    if state.modes() != 2 {
        return Err(Error::Shape(format!(
            "bipartite standard form needs 2 modes, got {}",
            state.modes()
        )));
    }
    let local = local_standard_form(state)?;
    if local.any_decoupled() {
        let mut out = local;
        out.nu = Some((0.0, 0.0));
        return Ok(out);
    }
    let cross = local.standardized.block(0, 1);
    let svd = cross.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v_t requested").transpose();
    let s = &svd.singular_values;
    let (i1, i2) = if s[0] >= s[1] { (0, 1) } else { (1, 0) };
    let mut u_rot = Mat::from_columns(&[u.column(i1), u.column(i2)]);
    let mut v_rot = Mat::from_columns(&[v.column(i1), v.column(i2)]);
    // fold reflections into the sign of nu_2 so both factors are rotations
    let mut sign = 1.0;
    if u_rot.determinant() < 0.0 {
        u_rot.column_mut(1).neg_mut();
        sign = -sign;
    }
    if v_rot.determinant() < 0.0 {
        v_rot.column_mut(1).neg_mut();
        sign = -sign;
    }
    let nu1 = s[i1];
    let nu2 = sign * s[i2] + 0.0;
    let blocks = vec![
        u_rot.transpose() * &local.local_symplectics[0],
        v_rot.transpose() * &local.local_symplectics[1],
    ];
    finish(
        state,
        blocks,
        local.squeezing,
        local.lambdas,
        Some((nu1, nu2)),
    )
}

fn finish(
    state: &GaussianState,
    blocks: Vec<Mat>,
    squeezing: Vec<f64>,
    lambdas: Vec<f64>,
    nu: Option<(f64, f64)>,
) -> Result<StandardFormResult> {
    let m = state.modes();
    let mut s = Mat::zeros(2 * m, 2 * m);
    for (k, b) in blocks.iter().enumerate() {
        s.view_mut((2 * k, 2 * k), (2, 2)).copy_from(b);
    }
    let displacement = &s * state.mean();
    let unitary = GaussianUnitary::local(&blocks, displacement.clone())?;
    let mapped = unitary.apply(state)?;

    let decoupled: Vec<bool> = lambdas
        .iter()
        .map(|&l| (l - 1.0).abs() <= tol::DECOUPLED)
        .collect();
    let mut cov = mapped.cov().clone();
    let mut decoupled_residual = vec![0.0; m];
    for j in (0..m).filter(|&j| decoupled[j]) {
        for k in (0..m).filter(|&k| k != j) {
            for a in 0..2 {
                for b in 0..2 {
                    let v = cov[(2 * j + a, 2 * k + b)];
                    decoupled_residual[j] = f64::max(decoupled_residual[j], v.abs());
                    cov[(2 * j + a, 2 * k + b)] = 0.0;
                    cov[(2 * k + b, 2 * j + a)] = 0.0;
                }
            }
        }
    }
    Ok(StandardFormResult {
        standardized: GaussianState::new(Vector::zeros(2 * m), cov)?,
        local_symplectics: blocks,
        displacement,
        squeezing,
        lambdas,
        nu,
        decoupled,
        decoupled_residual,
    })
}
