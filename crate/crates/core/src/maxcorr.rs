//! Quantum maximal correlation of two-mode Gaussian states.
//!
//! In standard form the correlation operator is block diagonal in the
//! degree `t` of the local orthonormal polynomial bases; its first block
//! `Q1` is a real 2x2 matrix and `mu = ||Q1||`. Higher blocks obey
//! `Q_t = S_t * Q1^{(x)t} * S_t^T`, which bounds `||Q_t|| <= ||Q1||^t`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{top_singular, Mat};
use crate::phase_space::GaussianState;
use crate::standard_form::{bipartite_standard_form, StandardFormResult};
use crate::tol;

/// Largest block degree accepted by [`qt_block`] and [`s_matrix`].
pub const MAX_DEGREE: usize = 12;

pub fn zeta0(lambda: f64) -> f64 {
    ((lambda + 1.0) / 2.0).sqrt()
}

pub fn zeta1(lambda: f64) -> f64 {
    ((lambda - 1.0) / 2.0).sqrt()
}

/// Normalization coefficients of both modes and the cross matrix `omega`
/// (entries of `conj(U) * diag(nu1, nu2) * U^T / 2` with
/// `U = [[1, -i], [1, i]] / sqrt(2)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationCoefficients {
    pub zeta0_a: f64,
    pub zeta1_a: f64,
    pub zeta0_b: f64,
    pub zeta1_b: f64,
    pub omega: [[f64; 2]; 2],
}

impl CorrelationCoefficients {
    pub fn new(lambda_a: f64, lambda_b: f64, nu1: f64, nu2: f64) -> Result<Self> {
        check_lambda("lambda_a", lambda_a)?;
        check_lambda("lambda_b", lambda_b)?;
        let d = (nu1 + nu2) / 4.0;
        let o = (nu1 - nu2) / 4.0;
        Ok(Self {
            zeta0_a: zeta0(lambda_a),
            zeta1_a: zeta1(lambda_a),
            zeta0_b: zeta0(lambda_b),
            zeta1_b: zeta1(lambda_b),
            omega: [[d, o], [o, d]],
        })
    }

    fn alpha(&self, k: usize) -> f64 {
        [self.zeta0_a, self.zeta1_a][k]
    }

    fn beta(&self, k: usize) -> f64 {
        [self.zeta0_b, self.zeta1_b][k]
    }
}

fn check_lambda(name: &'static str, lambda: f64) -> Result<()> {
    if !(lambda > 1.0 + tol::DECOUPLED) {
        return Err(Error::OutOfRange {
            name,
            value: lambda,
            expected: "lambda > 1 (lambda = 1 is a decoupled vacuum mode)",
        });
    }
    Ok(())
}

/// First block `Q1` of the correlation operator in standard form.
pub fn q1_matrix(lambda_a: f64, lambda_b: f64, nu1: f64, nu2: f64) -> Result<Mat> {
    let c = CorrelationCoefficients::new(lambda_a, lambda_b, nu1, nu2)?;
    Ok(Mat::from_fn(2, 2, |i, j| {
        c.omega[i][j] / (c.alpha(i) * c.beta(j))
    }))
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn check_degree(t: usize) -> Result<()> {
    if t == 0 || t > MAX_DEGREE {
        return Err(Error::OutOfRange {
            name: "t",
            value: t as f64,
            expected: "1 <= t <= 12",
        });
    }
    Ok(())
}

/// Degree-`t` block `Q_t`, `(t+1) x (t+1)`, from the constrained
/// multinomial sum over `(p00, p01, p10, p11)` with `p10 + p11 = l`,
/// `p01 + p11 = l'` and `p00 + p01 + p10 + p11 = t`.
pub fn qt_block(lambda_a: f64, lambda_b: f64, nu1: f64, nu2: f64, t: usize) -> Result<Mat> {
    check_degree(t)?;
    let c = CorrelationCoefficients::new(lambda_a, lambda_b, nu1, nu2)?;
    let w = [c.omega[0][0], c.omega[0][1], c.omega[1][0], c.omega[1][1]];
    let ln_w: Vec<f64> = w.iter().map(|x| x.abs().ln()).collect();
    let lf: Vec<f64> = (0..=t).map(ln_factorial).collect();

    let mut q = Mat::zeros(t + 1, t + 1);
    for l in 0..=t {
        for lp in 0..=t {
            let prefactor = 0.5 * (lf[t - l] + lf[l] + lf[t - lp] + lf[lp])
                - (t - l) as f64 * c.alpha(0).ln()
                - l as f64 * c.alpha(1).ln()
                - (t - lp) as f64 * c.beta(0).ln()
                - lp as f64 * c.beta(1).ln();
            let mut sum = 0.0;
            for p11 in 0..=l.min(lp) {
                let p10 = l - p11;
                let p01 = lp - p11;
                if p01 + p10 + p11 > t {
                    continue;
                }
                let p00 = t - p01 - p10 - p11;
                let powers = [p00, p01, p10, p11];
                if powers.iter().zip(&w).any(|(&p, &x)| p > 0 && x == 0.0) {
                    continue;
                }
                let negatives: usize = powers
                    .iter()
                    .zip(&w)
                    .filter(|(_, &x)| x < 0.0)
                    .map(|(&p, _)| p)
                    .sum();
                let ln_term: f64 = powers
                    .iter()
                    .zip(&ln_w)
                    .map(|(&p, &lw)| if p == 0 { 0.0 } else { p as f64 * lw })
                    .sum::<f64>()
                    - powers.iter().map(|&p| lf[p]).sum::<f64>();
                let sign = if negatives.is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                sum += sign * (ln_term + prefactor).exp();
            }
            q[(l, lp)] = sum;
        }
    }
    Ok(q)
}

/// Isometry `S_t`, `(t+1) x 2^t`, with `s_{l,b} = [l == |b|] * sqrt(l!(t-l)!/t!)`.
/// Column `b` is read as a bit string (bit `i` of the column index).
pub fn s_matrix(t: usize) -> Result<Mat> {
    check_degree(t)?;
    let lf: Vec<f64> = (0..=t).map(ln_factorial).collect();
    Ok(Mat::from_fn(t + 1, 1 << t, |l, b| {
        if (b as u32).count_ones() as usize == l {
            (0.5 * (lf[l] + lf[t - l] - lf[t])).exp()
        } else {
            0.0
        }
    }))
}

/// Coefficients of the optimal operators `X_A = a_x x_A + a_p p_A`,
/// `Y_B = b_x x_B + b_p p_B` (quadratures of the input frame).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureCoefficients {
    pub alpha_x: Complex64,
    pub alpha_p: Complex64,
    pub beta_x: Complex64,
    pub beta_p: Complex64,
}

#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub mu: f64,
    /// Coefficients of `X_A` on `(H_{1,0}, H_{0,1})` of mode A.
    pub f: [Complex64; 2],
    pub g: [Complex64; 2],
    pub quadrature_coeffs: QuadratureCoefficients,
    pub q1: Mat,
    pub standard_form: StandardFormResult,
    /// A mode had a pure vacuum marginal, so `mu = 0` with no witness.
    pub decoupled: bool,
}

/// Quadrature coefficients in the standard frame of the operator
/// `c0 * H_{1,0} + c1 * H_{0,1}`, with `H_{1,0} = (x - ip)/sqrt(lambda+1)`
/// and `H_{0,1} = (x + ip)/sqrt(lambda-1)`.
fn linear_coefficients(lambda: f64, c: [Complex64; 2]) -> [Complex64; 2] {
    let i = Complex64::i();
    let h10 = 1.0 / (lambda + 1.0).sqrt();
    let h01 = 1.0 / (lambda - 1.0).sqrt();
    [c[0] * h10 + c[1] * h01, -i * c[0] * h10 + i * c[1] * h01]
}

/// Maps standard-frame coefficients back through the local symplectic `s`:
/// an observable `a^T R` on the standardized state is `(S^T a)^T R` on the input.
fn to_input_frame(s: &Mat, a: [Complex64; 2]) -> [Complex64; 2] {
    [
        a[0] * s[(0, 0)] + a[1] * s[(1, 0)],
        a[0] * s[(0, 1)] + a[1] * s[(1, 1)],
    ]
}

pub fn maximal_correlation(state: &GaussianState) -> Result<CorrelationReport> {
    let sf = bipartite_standard_form(state)?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    if sf.any_decoupled() {
        return Ok(CorrelationReport {
            mu: 0.0,
            f: [one, zero],
            g: [one, zero],
            quadrature_coeffs: QuadratureCoefficients {
                alpha_x: zero,
                alpha_p: zero,
                beta_x: zero,
                beta_p: zero,
            },
            q1: Mat::zeros(2, 2),
            standard_form: sf,
            decoupled: true,
        });
    }
    let (nu1, nu2) = sf.nu.expect("bipartite form sets nu");
    let (la, lb) = (sf.lambdas[0], sf.lambdas[1]);
    let q1 = q1_matrix(la, lb, nu1, nu2)?;
    let top = top_singular(&q1);
    // singular vectors of a real matrix: fix the sign so f's first nonzero entry is positive
    let lead = top
        .left
        .iter()
        .copied()
        .find(|x| x.abs() > 1e-14)
        .unwrap_or(1.0);
    let sign = if lead < 0.0 { -1.0 } else { 1.0 };
    let f = [
        Complex64::new(sign * top.left[0], 0.0),
        Complex64::new(sign * top.left[1], 0.0),
    ];
    let g = [
        Complex64::new(sign * top.right[0], 0.0),
        Complex64::new(sign * top.right[1], 0.0),
    ];
    let a = to_input_frame(&sf.local_symplectics[0], linear_coefficients(la, f));
    let b = to_input_frame(&sf.local_symplectics[1], linear_coefficients(lb, g));
    Ok(CorrelationReport {
        mu: top.value,
        f,
        g,
        quadrature_coeffs: QuadratureCoefficients {
            alpha_x: a[0],
            alpha_p: a[1],
            beta_x: b[0],
            beta_p: b[1],
        },
        q1,
        standard_form: sf,
        decoupled: false,
    })
}

/// `mu` for correlated-anticorrelated states, `nu / sqrt(lambda^2 - 1)`.
pub fn mu_ca(lambda: f64, nu: f64) -> f64 {
    nu / (lambda * lambda - 1.0).sqrt()
}

/// `mu` for correlated-correlated states, `nu / (lambda - 1)`.
pub fn mu_cc(lambda: f64, nu: f64) -> f64 {
    nu / (lambda - 1.0)
}
