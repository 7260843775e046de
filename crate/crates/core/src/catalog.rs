//! Named two-mode families and local-state-transformation verdicts.
//!
//! Both `mu` and `mu_G` are monotone under local operations (local Gaussian
//! operations for `mu_G`) and tensorize, so a target whose measure exceeds
//! the resource's cannot be reached from any number of resource copies.
//! The converse does not hold: no verdict ever claims feasibility.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian_maxcorr::{gaussian_maximal_correlation, mu_g_standard_form};
use crate::gaussian_ops::lossy_channel;
use crate::linalg::Mat;
use crate::maxcorr::{mu_ca, mu_cc};
use crate::phase_space::{GaussianState, ModePartition};
use crate::tol;

fn standard_two_mode(lambda: f64, nu1: f64, nu2: f64) -> GaussianState {
    GaussianState::centered(Mat::from_row_slice(
        4,
        4,
        &[
            lambda, 0.0, nu1, 0.0, //
            0.0, lambda, 0.0, nu2, //
            nu1, 0.0, lambda, 0.0, //
            0.0, nu2, 0.0, lambda,
        ],
    ))
    .expect("4x4 covariance")
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            expected: "lambda > 1",
        });
    }
    Ok(())
}

/// Correlated-anticorrelated state: cross block `diag(nu, -nu)`,
/// physical for `0 <= nu <= sqrt(lambda^2 - 1)`.
pub fn ca_state(lambda: f64, nu: f64) -> Result<GaussianState> {
    check_lambda(lambda)?;
    let bound = (lambda * lambda - 1.0).sqrt();
    if !(nu >= 0.0 && nu <= bound * (1.0 + 1e-12)) {
        return Err(Error::OutOfRange {
            name: "nu",
            value: nu,
            expected: "0 <= nu <= sqrt(lambda^2 - 1)",
        });
    }
    Ok(standard_two_mode(lambda, nu, -nu))
}

/// Correlated-correlated state: cross block `nu * I`, physical (and
/// classical) for `0 <= nu <= lambda - 1`.
pub fn cc_state(lambda: f64, nu: f64) -> Result<GaussianState> {
    check_lambda(lambda)?;
    if !(nu >= 0.0 && nu <= (lambda - 1.0) * (1.0 + 1e-12)) {
        return Err(Error::OutOfRange {
            name: "nu",
            value: nu,
            expected: "0 <= nu <= lambda - 1",
        });
    }
    Ok(standard_two_mode(lambda, nu, nu))
}

/// Two-mode squeezed vacuum: the pure CA state with `nu = sqrt(lambda^2 - 1)`.
pub fn tmsv_state(lambda: f64) -> Result<GaussianState> {
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            expected: "lambda >= 1",
        });
    }
    let nu = (lambda * lambda - 1.0).sqrt();
    Ok(standard_two_mode(lambda, nu, -nu))
}

/// Maximal correlation of the two-qubit noisy Bell state
/// `kappa |Phi+><Phi+| + (1 - kappa) I/4`, which is `kappa`.
pub fn werner_mu(kappa: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::OutOfRange {
            name: "kappa",
            value: kappa,
            expected: "0 <= kappa <= 1",
        });
    }
    Ok(kappa)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Mu,
    MuG,
    RibbonPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Infeasible,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityVerdict {
    pub verdict: Verdict,
    pub measure: Measure,
    pub resource: f64,
    pub target: f64,
}

/// Infeasible iff `target > resource + 1e-9`.
pub fn lst_infeasibility(measure: Measure, resource: f64, target: f64) -> FeasibilityVerdict {
    let verdict = if target > resource + tol::FEASIBILITY {
        Verdict::Infeasible
    } else {
        Verdict::Undecided
    };
    FeasibilityVerdict {
        verdict,
        measure,
        resource,
        target,
    }
}

/// CA versus CC at equal `(lambda, nu)`, both directions, both measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyComparison {
    pub lambda: f64,
    pub nu: f64,
    pub mu_ca: f64,
    pub mu_cc: f64,
    pub mu_g_ca: f64,
    pub mu_g_cc: f64,
    pub cc_to_ca: FeasibilityVerdict,
    pub ca_to_cc: FeasibilityVerdict,
    pub cc_to_ca_gaussian: FeasibilityVerdict,
    pub ca_to_cc_gaussian: FeasibilityVerdict,
}

pub fn cc_ca_comparison(lambda: f64, nu: f64) -> Result<FamilyComparison> {
    // the CC range is the narrower one
    cc_state(lambda, nu)?;
    let (m_ca, m_cc) = (mu_ca(lambda, nu), mu_cc(lambda, nu));
    let g_ca = mu_g_standard_form(lambda, lambda, nu, -nu);
    let g_cc = mu_g_standard_form(lambda, lambda, nu, nu);
    Ok(FamilyComparison {
        lambda,
        nu,
        mu_ca: m_ca,
        mu_cc: m_cc,
        mu_g_ca: g_ca,
        mu_g_cc: g_cc,
        cc_to_ca: lst_infeasibility(Measure::Mu, m_cc, m_ca),
        ca_to_cc: lst_infeasibility(Measure::Mu, m_ca, m_cc),
        cc_to_ca_gaussian: lst_infeasibility(Measure::MuG, g_cc, g_ca),
        ca_to_cc_gaussian: lst_infeasibility(Measure::MuG, g_ca, g_cc),
    })
}

/// Can the initial CA state be recovered from copies of what survives two
/// lossy channels? Compared through `mu_G`.
pub fn lossy_retrieval(lambda: f64, nu: f64, tau_a: f64, tau_b: f64) -> Result<FeasibilityVerdict> {
    let initial = ca_state(lambda, nu)?;
    let shared = lossy_channel(&lossy_channel(&initial, &[0], tau_a)?, &[1], tau_b)?;
    let parties = ModePartition::singletons(2);
    let resource = gaussian_maximal_correlation(&shared, &parties)?.mu_g;
    let target = gaussian_maximal_correlation(&initial, &parties)?.mu_g;
    Ok(lst_infeasibility(Measure::MuG, resource, target))
}

/// `mu_G` of the CA state after lossy channels, in closed form.
pub fn lossy_ca_mu_g(lambda: f64, nu: f64, tau_a: f64, tau_b: f64) -> f64 {
    (tau_a * tau_b).sqrt() * nu
        / ((tau_a * lambda + 1.0 - tau_a) * (tau_b * lambda + 1.0 - tau_b)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxcorr::maximal_correlation;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ca_family() {
        let s = ca_state(2.0, 1.0).unwrap();
        assert!(s.check_physical(tol::PSD).physical);
        let t = ca_state(2.0, 3.0_f64.sqrt()).unwrap();
        assert_abs_diff_eq!(t.purity().unwrap(), 1.0, epsilon = 1e-12);
        assert!(ca_state(2.0, 2.0).is_err());
        assert!(ca_state(1.0, 0.0).is_err());
        assert!(ca_state(2.0, -0.1).is_err());
    }

    #[test]
    fn cc_family() {
        let s = cc_state(2.0, 1.0).unwrap();
        assert!(s.is_classical(tol::PSD));
        let p = cc_state(2.0, 0.0).unwrap();
        assert_eq!(p.block(0, 1), Mat::zeros(2, 2));
        assert!(cc_state(2.0, 1.5).is_err());
    }

    #[test]
    fn tmsv_family() {
        let v = tmsv_state(1.0).unwrap();
        assert_eq!(v, GaussianState::vacuum(2));
        let t = tmsv_state(2.0).unwrap();
        assert_abs_diff_eq!(maximal_correlation(&t).unwrap().mu, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.purity().unwrap(), 1.0, epsilon = 1e-12);
        assert!(!t.is_classical(tol::PSD));
        assert!(tmsv_state(0.5).is_err());
    }

    #[test]
    fn marginals_are_thermal() {
        for s in [ca_state(3.0, 2.0).unwrap(), cc_state(3.0, 2.0).unwrap()] {
            for k in 0..2 {
                assert_eq!(
                    s.marginal(&[k]).unwrap().cov(),
                    &(Mat::identity(2, 2) * 3.0)
                );
            }
        }
    }

    #[test]
    fn werner() {
        assert_eq!(werner_mu(0.0).unwrap(), 0.0);
        assert_eq!(werner_mu(1.0).unwrap(), 1.0);
        assert_eq!(werner_mu(0.5).unwrap(), 0.5);
        assert!(werner_mu(1.1).is_err());
    }

    #[test]
    fn werner_targets_from_ca() {
        let mu = mu_ca(2.0, 1.0);
        assert_eq!(
            lst_infeasibility(Measure::Mu, mu, 0.7).verdict,
            Verdict::Infeasible
        );
        assert_eq!(
            lst_infeasibility(Measure::Mu, mu, 0.5).verdict,
            Verdict::Undecided
        );
        assert_eq!(
            lst_infeasibility(Measure::Mu, 0.4, 0.4).verdict,
            Verdict::Undecided
        );
    }

    #[test]
    fn cc_versus_ca() {
        let c = cc_ca_comparison(2.0, 0.5).unwrap();
        assert_abs_diff_eq!(c.mu_cc, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.mu_ca, 0.5 / 3.0_f64.sqrt(), epsilon = 1e-15);
        assert_eq!(c.ca_to_cc.verdict, Verdict::Infeasible);
        assert_eq!(c.cc_to_ca.verdict, Verdict::Undecided);
        assert_eq!(c.mu_g_ca, c.mu_g_cc);
        assert_eq!(c.ca_to_cc_gaussian.verdict, Verdict::Undecided);
        assert_eq!(c.cc_to_ca_gaussian.verdict, Verdict::Undecided);
        let z = cc_ca_comparison(2.0, 0.0).unwrap();
        assert_eq!(z.ca_to_cc.verdict, Verdict::Undecided);
        assert!(cc_ca_comparison(2.0, 1.5).is_err());
    }

    #[test]
    fn lossy_retrieval_is_infeasible() {
        let v = lossy_retrieval(2.0, 1.0, 0.5, 0.5).unwrap();
        assert_eq!(v.verdict, Verdict::Infeasible);
        assert_abs_diff_eq!(v.resource, 1.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.target, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(
            lossy_ca_mu_g(2.0, 1.0, 0.5, 0.5),
            1.0 / 3.0,
            epsilon = 1e-15
        );
        assert_eq!(
            lossy_retrieval(2.0, 1.0, 1.0, 1.0).unwrap().verdict,
            Verdict::Undecided
        );
    }
}
