//! Seeded self-verification suite behind `gmc verify`.
//!
//! Every property draws its trials from an independent ChaCha stream keyed
//! by `(seed, property index, trial index)`, so reports are reproducible
//! byte for byte and do not depend on which properties are run.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{ca_state, cc_state};
use crate::error::Result;
use crate::gaussian_maxcorr::{gaussian_maximal_correlation, v_parameter};
use crate::gaussian_ops::lossy_channel;
use crate::linalg::{kron, max_abs, spectral_norm};
use crate::maxcorr::{maximal_correlation, mu_ca, mu_cc, q1_matrix, qt_block, s_matrix};
use crate::phase_space::{GaussianState, ModePartition};
use crate::ribbon::{
    bipartite_ribbon_check, diagonal_boundary, in_gaussian_ribbon, in_ribbon, ribbon_gram,
    ThetaPoint,
};
use crate::sampling::{random_local_unitary, random_state, random_two_mode_params, trial_rng};
use crate::standard_form::bipartite_standard_form;
use crate::tol;

/// Half-width of the band around a ribbon boundary where PSD and
/// closed-form verdicts are not compared.
pub const BOUNDARY_BAND: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub checked: u32,
    pub passed: u32,
    pub max_error: f64,
    pub tolerance: f64,
    /// First failing trial, if any.
    pub counterexample: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub trials: u32,
    pub properties: Vec<PropertyReport>,
    pub all_passed: bool,
}

/// Error of one trial (compared against the tolerance) plus context for
/// the counterexample dump.
struct Trial {
    error: f64,
    detail: Value,
}

type Check = fn(&mut ChaCha8Rng) -> Result<Trial>;

struct Property {
    name: &'static str,
    tolerance: f64,
    check: Check,
}

fn doc(state: &GaussianState) -> Value {
    serde_json::to_value(state.to_document()).expect("documents serialize")
}

fn random_theta(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(0.0..=1.0)).collect()
}

fn theta(values: &[f64]) -> ThetaPoint {
    ThetaPoint::new(values.to_vec()).expect("sampled theta lies in [0, 1]")
}

fn qt_oracle(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (la, lb, n1, n2) = random_two_mode_params(rng);
    let q1 = q1_matrix(la, lb, n1, n2)?;
    let mut power = q1.clone();
    let mut err = 0.0_f64;
    for t in 2..=5 {
        power = kron(&power, &q1);
        let s = s_matrix(t)?;
        let oracle = &s * &power * s.transpose();
        err = err.max(max_abs(&(oracle - qt_block(la, lb, n1, n2, t)?)));
    }
    Ok(Trial {
        error: err,
        detail: json!({ "lambda_a": la, "lambda_b": lb, "nu1": n1, "nu2": n2 }),
    })
}

fn norm_chain(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (la, lb, n1, n2) = random_two_mode_params(rng);
    let n1_norm = spectral_norm(&q1_matrix(la, lb, n1, n2)?);
    let mut excess = 0.0_f64;
    for t in 2..=5 {
        excess = excess.max(spectral_norm(&qt_block(la, lb, n1, n2, t)?) - n1_norm);
    }
    Ok(Trial {
        error: excess.max(0.0),
        detail: json!({ "lambda_a": la, "lambda_b": lb, "nu1": n1, "nu2": n2 }),
    })
}

fn invariants(state: &GaussianState) -> Result<[f64; 6]> {
    let sf = bipartite_standard_form(state)?;
    let [la, lb, n1, n2] = sf
        .invariants()
        .unwrap_or([sf.lambdas[0], sf.lambdas[1], 0.0, 0.0]);
    let mu = maximal_correlation(state)?.mu;
    let mu_g = gaussian_maximal_correlation(state, &ModePartition::singletons(2))?.mu_g;
    Ok([mu, mu_g, la, lb, n1.abs(), n2.abs()])
}

fn local_unitary_invariance(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let state = random_state(rng, 2);
    let moved = random_local_unitary(rng, 2).apply(&state)?;
    let (a, b) = (invariants(&state)?, invariants(&moved)?);
    let err = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(Trial {
        error: err,
        detail: json!({ "state": doc(&state), "moved": doc(&moved) }),
    })
}

fn mu_g_of(state: &GaussianState) -> Result<f64> {
    Ok(gaussian_maximal_correlation(state, &ModePartition::singletons(state.modes()))?.mu_g)
}

fn merged_partition() -> ModePartition {
    ModePartition::new(vec![vec![0, 2], vec![1, 3]], 4).expect("valid partition")
}

fn mu_g_tensorization(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let rho = random_state(rng, 2);
    let sigma = random_state(rng, 2);
    let joint = gaussian_maximal_correlation(&rho.tensor(&sigma), &merged_partition())?.mu_g;
    let expected = mu_g_of(&rho)?.max(mu_g_of(&sigma)?);
    Ok(Trial {
        error: (joint - expected).abs(),
        detail: json!({ "rho": doc(&rho), "sigma": doc(&sigma), "joint": joint }),
    })
}

fn lossy_monotonicity(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let state = random_state(rng, 2);
    let tau_a = rng.gen_range(0.0..=1.0);
    let tau_b = rng.gen_range(0.0..=1.0);
    let shared = lossy_channel(&lossy_channel(&state, &[0], tau_a)?, &[1], tau_b)?;
    let mu_gain = maximal_correlation(&shared)?.mu - maximal_correlation(&state)?.mu;
    let mu_g_gain = mu_g_of(&shared)? - mu_g_of(&state)?;
    Ok(Trial {
        error: mu_gain.max(mu_g_gain).max(0.0),
        detail: json!({ "state": doc(&state), "tau_a": tau_a, "tau_b": tau_b }),
    })
}

fn mu_g_below_mu(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let state = random_state(rng, 2);
    let mu = maximal_correlation(&state)?.mu;
    let mu_g = mu_g_of(&state)?;
    Ok(Trial {
        error: (mu_g - mu).max(0.0),
        detail: json!({ "state": doc(&state), "mu": mu, "mu_g": mu_g }),
    })
}

fn v_identity(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let state = random_state(rng, 2);
    let parties = ModePartition::singletons(2);
    let v = v_parameter(&state, &parties)?;
    let mu_g = gaussian_maximal_correlation(&state, &parties)?.mu_g;
    Ok(Trial {
        error: (v - (1.0 - mu_g)).abs(),
        detail: json!({ "state": doc(&state), "v": v, "mu_g": mu_g }),
    })
}

fn closed_forms(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let lambda = rng.gen_range(1.05..=6.0);
    let nu_ca = rng.gen_range(0.0..=1.0) * (lambda * lambda - 1.0_f64).sqrt();
    let nu_cc = rng.gen_range(0.0..=1.0) * (lambda - 1.0);
    let u = random_local_unitary(rng, 2);
    let ca = u.apply(&ca_state(lambda, nu_ca)?)?;
    let cc = u.apply(&cc_state(lambda, nu_cc)?)?;
    let e_ca = (maximal_correlation(&ca)?.mu - mu_ca(lambda, nu_ca)).abs();
    let e_cc = (maximal_correlation(&cc)?.mu - mu_cc(lambda, nu_cc)).abs();
    Ok(Trial {
        error: e_ca.max(e_cc),
        detail: json!({ "lambda": lambda, "nu_ca": nu_ca, "nu_cc": nu_cc }),
    })
}

fn ribbon_consistency(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let state = random_state(rng, 2);
    let mu = maximal_correlation(&state)?.mu;
    let t = random_theta(rng, 2);
    let closed = bipartite_ribbon_check(mu, t[0], t[1], 0.0);
    if closed.margin.abs() <= BOUNDARY_BAND {
        return Ok(Trial {
            error: 0.0,
            detail: Value::Null,
        });
    }
    let psd = in_ribbon(&state, &theta(&t), tol::RIBBON)?;
    Ok(Trial {
        error: if psd.accepted == closed.accepted {
            0.0
        } else {
            1.0
        },
        detail: json!({ "state": doc(&state), "theta": t, "mu": mu, "psd_margin": psd.margin }),
    })
}

/// Bisection for the diagonal boundary `theta_1 = theta_2` of the PSD test.
pub fn bisect_diagonal_boundary(state: &GaussianState) -> Result<f64> {
    let gram = ribbon_gram(state)?;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    if gram.margin(&[1.0, 1.0]) >= 0.0 {
        return Ok(1.0);
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if gram.margin(&[mid, mid]) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn ribbon_boundary(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let state = random_state(rng, 2);
    let mu = maximal_correlation(&state)?.mu;
    let found = bisect_diagonal_boundary(&state)?;
    Ok(Trial {
        error: (found - diagonal_boundary(mu)).abs(),
        detail: json!({ "state": doc(&state), "mu": mu, "bisected": found }),
    })
}

fn ribbon_trivial_region(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let m = rng.gen_range(2..=3);
    let state = random_state(rng, m);
    let raw = random_theta(rng, m);
    let total: f64 = raw.iter().sum();
    let scale = rng.gen_range(0.0..=1.0) / total.max(f64::MIN_POSITIVE);
    let t: Vec<f64> = raw.iter().map(|x| (x * scale).min(1.0)).collect();
    let q = in_ribbon(&state, &theta(&t), tol::RIBBON)?;
    let g = in_gaussian_ribbon(
        &state,
        &ModePartition::singletons(m),
        &theta(&t),
        tol::RIBBON,
    )?;
    let product = GaussianState::thermal(
        &state
            .cov()
            .diagonal()
            .iter()
            .step_by(2)
            .map(|x| x.max(1.0))
            .collect::<Vec<_>>(),
    );
    let full = random_theta(rng, m);
    let p = in_ribbon(&product, &theta(&full), tol::RIBBON)?;
    let failures = [q.accepted, g.accepted, p.accepted]
        .iter()
        .filter(|a| !**a)
        .count();
    Ok(Trial {
        error: failures as f64,
        detail: json!({ "state": doc(&state), "theta": t, "product_theta": full }),
    })
}

fn ribbon_containment(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let m = rng.gen_range(2..=3);
    let state = random_state(rng, m);
    let t = random_theta(rng, m);
    let q = in_ribbon(&state, &theta(&t), 0.0)?;
    let g = in_gaussian_ribbon(
        &state,
        &ModePartition::singletons(m),
        &theta(&t),
        tol::RIBBON,
    )?;
    Ok(Trial {
        error: if q.accepted && !g.accepted { 1.0 } else { 0.0 },
        detail: json!({ "state": doc(&state), "theta": t, "quantum": q.margin, "gaussian": g.margin }),
    })
}

fn ribbon_convexity(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let state = random_state(rng, 2);
    let gram = ribbon_gram(&state)?;
    // rejection-sample two accepted points
    let mut accepted = Vec::new();
    for _ in 0..64 {
        let t = random_theta(rng, 2);
        if gram.margin(&t) >= 0.0 {
            accepted.push(t);
            if accepted.len() == 2 {
                break;
            }
        }
    }
    if accepted.len() < 2 {
        return Ok(Trial {
            error: 0.0,
            detail: Value::Null,
        });
    }
    let w: f64 = rng.gen_range(0.0..=1.0);
    let mix: Vec<f64> = (0..2)
        .map(|k| w * accepted[0][k] + (1.0 - w) * accepted[1][k])
        .collect();
    let margin = gram.margin(&mix);
    Ok(Trial {
        error: (-margin).max(0.0),
        detail: json!({ "state": doc(&state), "a": accepted[0], "b": accepted[1], "w": w }),
    })
}

fn gaussian_ribbon_tensorization(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let rho = random_state(rng, 2);
    let sigma = random_state(rng, 2);
    let joint = rho.tensor(&sigma);
    let t = theta(&random_theta(rng, 2));
    let parties = ModePartition::singletons(2);
    let a = in_gaussian_ribbon(&rho, &parties, &t, 1e-8)?.accepted;
    let b = in_gaussian_ribbon(&sigma, &parties, &t, 1e-8)?.accepted;
    let both = in_gaussian_ribbon(&joint, &merged_partition(), &t, 1e-8)?.accepted;
    Ok(Trial {
        error: if both == (a && b) { 0.0 } else { 1.0 },
        detail: json!({ "rho": doc(&rho), "sigma": doc(&sigma), "theta": t.values() }),
    })
}

fn properties() -> Vec<Property> {
    vec![
        Property {
            name: "qt_tensor_power_oracle",
            tolerance: 1e-9,
            check: qt_oracle,
        },
        Property {
            name: "qt_norm_chain",
            tolerance: 1e-10,
            check: norm_chain,
        },
        Property {
            name: "closed_forms",
            tolerance: 1e-10,
            check: closed_forms,
        },
        Property {
            name: "local_unitary_invariance",
            tolerance: 1e-8,
            check: local_unitary_invariance,
        },
        Property {
            name: "mu_g_tensorization",
            tolerance: 1e-9,
            check: mu_g_tensorization,
        },
        Property {
            name: "lossy_monotonicity",
            tolerance: 1e-10,
            check: lossy_monotonicity,
        },
        Property {
            name: "mu_g_below_mu",
            tolerance: 1e-10,
            check: mu_g_below_mu,
        },
        Property {
            name: "v_equals_one_minus_mu_g",
            tolerance: 1e-8,
            check: v_identity,
        },
        Property {
            name: "ribbon_bipartite_consistency",
            tolerance: 0.0,
            check: ribbon_consistency,
        },
        Property {
            name: "ribbon_diagonal_boundary",
            tolerance: 1e-8,
            check: ribbon_boundary,
        },
        Property {
            name: "ribbon_trivial_region",
            tolerance: 0.0,
            check: ribbon_trivial_region,
        },
        Property {
            name: "ribbon_containment",
            tolerance: 0.0,
            check: ribbon_containment,
        },
        Property {
            name: "ribbon_convexity",
            tolerance: tol::RIBBON,
            check: ribbon_convexity,
        },
        Property {
            name: "gaussian_ribbon_tensorization",
            tolerance: 0.0,
            check: gaussian_ribbon_tensorization,
        },
    ]
}

pub fn property_names() -> Vec<&'static str> {
    properties().iter().map(|p| p.name).collect()
}

fn run_property(index: u32, p: &Property, seed: u64, trials: u32) -> PropertyReport {
    let mut report = PropertyReport {
        name: p.name,
        checked: 0,
        passed: 0,
        max_error: 0.0,
        tolerance: p.tolerance,
        counterexample: None,
    };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, index, trial);
        let (error, detail) = match (p.check)(&mut rng) {
            Ok(t) => (t.error, t.detail),
            Err(e) => (f64::INFINITY, json!({ "error": e.to_string() })),
        };
        report.checked += 1;
        report.max_error = report.max_error.max(error);
        if error <= p.tolerance {
            report.passed += 1;
        } else if report.counterexample.is_none() {
            report.counterexample =
                Some(json!({ "trial": trial, "error": error, "detail": detail }));
        }
    }
    report
}

pub fn run_verification(seed: u64, trials: u32) -> VerificationReport {
    let properties: Vec<PropertyReport> = properties()
        .iter()
        .enumerate()
        .map(|(i, p)| run_property(i as u32, p, seed, trials))
        .collect();
    let all_passed = properties.iter().all(|p| p.passed == p.checked);
    VerificationReport {
        seed,
        trials,
        properties,
        all_passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_pass_trivially() {
        let r = run_verification(42, 0);
        assert!(r.all_passed);
        assert!(r
            .properties
            .iter()
            .all(|p| p.checked == 0 && p.counterexample.is_none()));
    }

    #[test]
    fn small_run_passes_and_repeats() {
        let a = run_verification(3, 10);
        for p in &a.properties {
            assert_eq!(
                p.passed, p.checked,
                "{} failed: {:?}",
                p.name, p.counterexample
            );
        }
        assert_eq!(a, run_verification(3, 10));
    }
}
