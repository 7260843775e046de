//! Gaussian unitaries and channels acting on moments.
//!
//! A unitary is a symplectic matrix `S` plus a displacement `r`, applied as
//! `mean -> S*mean - r`, `cov -> S*cov*S^T` (symplectic first). Composing
//! `u1` then `u2` gives `S = S2*S1`, `r = S2*r1 + r2`.

use crate::error::{Error, Result};
use crate::linalg::{self, complexify, max_abs, min_eigenvalue_herm, Mat, Vector};
use crate::phase_space::{symplectic_form, GaussianState};
use crate::tol;

/// Phase rotation `[[cos t, sin t], [-sin t, cos t]]`.
pub fn rotation(theta: f64) -> Mat {
    let (s, c) = theta.sin_cos();
    Mat::from_row_slice(2, 2, &[c, s, -s, c])
}

/// Single-mode squeezer `diag(e^z, e^-z)`.
pub fn squeeze(z: f64) -> Mat {
    Mat::from_row_slice(2, 2, &[z.exp(), 0.0, 0.0, (-z).exp()])
}

/// Max entry of `S*Omega*S^T - Omega`.
pub fn symplectic_deviation(s: &Mat) -> f64 {
    let omega = symplectic_form(s.nrows() / 2);
    max_abs(&(s * &omega * s.transpose() - omega))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianUnitary {
    symplectic: Mat,
    displacement: Vector,
}

impl GaussianUnitary {
    pub fn new(symplectic: Mat, displacement: Vector) -> Result<Self> {
        let n = displacement.len();
        if n == 0 || !n.is_multiple_of(2) || symplectic.shape() != (n, n) {
            return Err(Error::Shape(format!(
                "symplectic {}x{} does not match displacement of length {n}",
                symplectic.nrows(),
                symplectic.ncols()
            )));
        }
        let deviation = symplectic_deviation(&symplectic);
        if !(deviation <= tol::SYMPLECTIC) {
            return Err(Error::NotSymplectic { deviation });
        }
        Ok(Self {
            symplectic,
            displacement,
        })
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            symplectic: Mat::identity(2 * modes, 2 * modes),
            displacement: Vector::zeros(2 * modes),
        }
    }

    pub fn displacement_only(r: Vector) -> Result<Self> {
        let n = r.len();
        Self::new(Mat::identity(n, n), r)
    }

    /// Local unitary from one 2x2 symplectic block per mode.
    pub fn local(blocks: &[Mat], displacement: Vector) -> Result<Self> {
        let n = 2 * blocks.len();
        let mut s = Mat::zeros(n, n);
        for (k, b) in blocks.iter().enumerate() {
            if b.shape() != (2, 2) {
                return Err(Error::Shape("local blocks must be 2x2".into()));
            }
            s.view_mut((2 * k, 2 * k), (2, 2)).copy_from(b);
        }
        Self::new(s, displacement)
    }

    pub fn symplectic(&self) -> &Mat {
        &self.symplectic
    }

    pub fn displacement(&self) -> &Vector {
        &self.displacement
    }

    pub fn modes(&self) -> usize {
        self.displacement.len() / 2
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GaussianUnitary) -> Result<GaussianUnitary> {
        if self.modes() != next.modes() {
            return Err(Error::Shape(
                "composing unitaries on different mode counts".into(),
            ));
        }
        Ok(GaussianUnitary {
            symplectic: &next.symplectic * &self.symplectic,
            displacement: &next.symplectic * &self.displacement + &next.displacement,
        })
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        apply_unitary(state, self)
    }
}

pub fn apply_unitary(state: &GaussianState, u: &GaussianUnitary) -> Result<GaussianState> {
    if state.modes() != u.modes() {
        return Err(Error::Shape(format!(
            "unitary on {} modes applied to {}-mode state",
            u.modes(),
            state.modes()
        )));
    }
    let s = &u.symplectic;
    GaussianState::new(
        s * state.mean() - &u.displacement,
        s * state.cov() * s.transpose(),
    )
}

/// Covariance-level Gaussian channel on a subset of modes:
/// `cov -> X*cov*X^T + Y` on the acting coordinates, cross blocks
/// left-multiplied by `X`, mean -> `X*mean`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    x: Mat,
    y: Mat,
    modes: Vec<usize>,
}

impl GaussianChannel {
    pub fn new(x: Mat, y: Mat, modes: Vec<usize>) -> Result<Self> {
        let n = 2 * modes.len();
        if modes.is_empty() || x.shape() != (n, n) || y.shape() != (n, n) {
            return Err(Error::Shape(format!(
                "channel on {} modes needs {n}x{n} X and Y",
                modes.len()
            )));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("channel"));
        }
        if linalg::asymmetry(&y) > tol::SYMMETRY {
            return Err(Error::Shape("Y must be symmetric".into()));
        }
        let omega = symplectic_form(modes.len());
        let im = &omega - &x * &omega * x.transpose();
        let min_eigenvalue = min_eigenvalue_herm(&complexify(&y, &im));
        if min_eigenvalue < -tol::PSD {
            return Err(Error::InvalidChannel { min_eigenvalue });
        }
        Ok(Self { x, y, modes })
    }

    /// Pure-loss channel with transmissivity `tau` on `modes`.
    pub fn lossy(tau: f64, modes: Vec<usize>) -> Result<Self> {
        check_transmissivity(tau)?;
        let n = 2 * modes.len();
        Self::new(
            Mat::identity(n, n) * tau.sqrt(),
            Mat::identity(n, n) * (1.0 - tau),
            modes,
        )
    }

    /// Classical additive noise `Y = c*I`, `c >= 0`.
    pub fn additive_noise(c: f64, modes: Vec<usize>) -> Result<Self> {
        if !(c >= 0.0) {
            return Err(Error::OutOfRange {
                name: "noise",
                value: c,
                expected: "c >= 0",
            });
        }
        let n = 2 * modes.len();
        Self::new(Mat::identity(n, n), Mat::identity(n, n) * c, modes)
    }

    pub fn x(&self) -> &Mat {
        &self.x
    }

    pub fn y(&self) -> &Mat {
        &self.y
    }

    pub fn acting_modes(&self) -> &[usize] {
        &self.modes
    }
}

fn check_transmissivity(tau: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::OutOfRange {
            name: "tau",
            value: tau,
            expected: "0 <= tau <= 1",
        });
    }
    Ok(())
}

pub fn apply_channel(state: &GaussianState, channel: &GaussianChannel) -> Result<GaussianState> {
    let n = 2 * state.modes();
    // validates the index set
    state.marginal(&channel.modes)?;
    let idx = linalg::quadrature_indices(&channel.modes);
    let mut x_full = Mat::identity(n, n);
    let mut y_full = Mat::zeros(n, n);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            x_full[(i, j)] = channel.x[(a, b)];
            y_full[(i, j)] = channel.y[(a, b)];
        }
    }
    GaussianState::new(
        &x_full * state.mean(),
        &x_full * state.cov() * x_full.transpose() + y_full,
    )
}

/// Sends `modes` through a pure-loss channel of transmissivity `tau`.
pub fn lossy_channel(state: &GaussianState, modes: &[usize], tau: f64) -> Result<GaussianState> {
    check_transmissivity(tau)?;
    apply_channel(state, &GaussianChannel::lossy(tau, modes.to_vec())?)
}
