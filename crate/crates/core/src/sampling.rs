//! Random physical states for property checks.
//!
//! States are drawn in local standard form (thermal diagonal blocks, random
//! cross blocks pulled back to 95% of the physical boundary at most) and
//! then scrambled with random local rotations, squeezes and displacements,
//! so physicality holds by construction.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gaussian_ops::{rotation, squeeze, GaussianUnitary};
use crate::linalg::{complexify, min_eigenvalue_herm, Mat, Vector};
use crate::phase_space::{symplectic_form, GaussianState};

pub const LAMBDA_RANGE: (f64, f64) = (1.05, 6.0);
pub const MAX_SQUEEZE: f64 = 1.0;
pub const MAX_DISPLACEMENT: f64 = 2.0;
pub const BOUNDARY_FRACTION: f64 = 0.95;

/// Independent stream per `(property, trial)` under one seed.
pub fn trial_rng(seed: u64, property: u32, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(property) << 32) | u64::from(trial));
    rng
}

pub fn random_local_symplectic<R: Rng + ?Sized>(rng: &mut R) -> Mat {
    let a = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let b = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let z = rng.gen_range(-MAX_SQUEEZE..=MAX_SQUEEZE);
    rotation(a) * squeeze(z) * rotation(b)
}

pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R, modes: usize) -> GaussianUnitary {
    let blocks: Vec<Mat> = (0..modes).map(|_| random_local_symplectic(rng)).collect();
    let r = Vector::from_fn(2 * modes, |_, _| {
        rng.gen_range(-MAX_DISPLACEMENT..=MAX_DISPLACEMENT)
    });
    GaussianUnitary::local(&blocks, r).expect("products of rotations and squeezes are symplectic")
}

fn min_eig_plus_omega(cov: &Mat, omega: &Mat) -> f64 {
    min_eigenvalue_herm(&complexify(cov, omega))
}

/// Largest `s` with `base + s * dir + i Omega >= 0`. The minimum eigenvalue
/// is concave in `s` and positive at 0, so the feasible set is an interval.
fn physical_scale(base: &Mat, dir: &Mat, omega: &Mat) -> f64 {
    let ok = |s: f64| min_eig_plus_omega(&(base + dir * s), omega) >= 0.0;
    let mut hi = 1.0;
    while ok(hi) {
        hi *= 2.0;
        if hi > 1e6 {
            return hi;
        }
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Zero-mean state with diagonal blocks `lambda_j I` and random cross blocks.
pub fn random_standard_state<R: Rng + ?Sized>(rng: &mut R, modes: usize) -> GaussianState {
    let lambdas: Vec<f64> = (0..modes)
        .map(|_| rng.gen_range(LAMBDA_RANGE.0..=LAMBDA_RANGE.1))
        .collect();
    let base = GaussianState::thermal(&lambdas).cov().clone();
    let mut dir = Mat::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        for k in (j + 1)..modes {
            for a in 0..2 {
                for b in 0..2 {
                    let v = rng.gen_range(-1.0..=1.0);
                    dir[(2 * j + a, 2 * k + b)] = v;
                    dir[(2 * k + b, 2 * j + a)] = v;
                }
            }
        }
    }
    let omega = symplectic_form(modes);
    let s = if modes > 1 {
        physical_scale(&base, &dir, &omega)
    } else {
        0.0
    };
    let u: f64 = rng.gen();
    let cov = base + dir * (u * BOUNDARY_FRACTION * s);
    GaussianState::centered(cov).expect("square covariance")
}

/// Two-mode standard-form parameters `(lambda_a, lambda_b, nu1, nu2)`.
pub fn random_two_mode_params<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64, f64, f64) {
    let la = rng.gen_range(LAMBDA_RANGE.0..=LAMBDA_RANGE.1);
    let lb = rng.gen_range(LAMBDA_RANGE.0..=LAMBDA_RANGE.1);
    let base = GaussianState::thermal(&[la, lb]).cov().clone();
    let d1: f64 = rng.gen_range(-1.0..=1.0);
    let d2: f64 = rng.gen_range(-1.0..=1.0);
    let mut dir = Mat::zeros(4, 4);
    dir[(0, 2)] = d1;
    dir[(2, 0)] = d1;
    dir[(1, 3)] = d2;
    dir[(3, 1)] = d2;
    let s = physical_scale(&base, &dir, &symplectic_form(2));
    let u: f64 = rng.gen();
    let scale = u * BOUNDARY_FRACTION * s;
    (la, lb, d1 * scale, d2 * scale)
}

/// A random standard-form state scrambled by a random local unitary.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, modes: usize) -> GaussianState {
    let standard = random_standard_state(rng, modes);
    random_local_unitary(rng, modes)
        .apply(&standard)
        .expect("mode counts match")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    #[test]
    fn samples_are_physical() {
        for trial in 0..50 {
            let mut rng = trial_rng(7, 0, trial);
            for m in 1..=3 {
                let s = random_state(&mut rng, m);
                assert!(s.check_physical(tol::PSD).physical);
            }
            let (la, lb, n1, n2) = random_two_mode_params(&mut rng);
            assert!(la >= 1.05 && lb <= 6.0);
            let st = GaussianState::centered(Mat::from_row_slice(
                4,
                4,
                &[
                    la, 0., n1, 0., 0., la, 0., n2, n1, 0., lb, 0., 0., n2, 0., lb,
                ],
            ))
            .unwrap();
            assert!(st.check_physical(tol::PSD).physical);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = trial_rng(1, 2, 3).gen();
        let b: f64 = trial_rng(1, 2, 3).gen();
        let c: f64 = trial_rng(1, 2, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
