use gmc_core::catalog::{ca_state, cc_ca_comparison, cc_state, lossy_ca_mu_g, Verdict};
use gmc_core::linalg::{complexify, max_abs, min_eigenvalue_sym, Mat, Vector};
use gmc_core::maxcorr::{mu_ca, mu_cc};
use gmc_core::ribbon::{in_ribbon, ThetaPoint};
use gmc_core::sampling::{random_state, trial_rng};
use gmc_core::{
    bipartite_standard_form, gaussian_maximal_correlation, lossy_channel, maximal_correlation,
    rotation, squeeze, symplectic_form, GaussianState, GaussianUnitary, ModePartition,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn lambda() -> impl Strategy<Value = f64> {
    1.05..6.0_f64
}

/// Random local Gaussian unitary: per mode `R(a) S(z) R(b)` plus a shift.
fn local_unitary(modes: usize) -> impl Strategy<Value = GaussianUnitary> {
    (
        prop::collection::vec((-3.2..3.2_f64, -1.0..1.0_f64, -3.2..3.2_f64), modes),
        prop::collection::vec(-2.0..2.0_f64, 2 * modes),
    )
        .prop_map(|(params, shift)| {
            let blocks: Vec<Mat> = params
                .iter()
                .map(|&(a, z, b)| rotation(a) * squeeze(z) * rotation(b))
                .collect();
            GaussianUnitary::local(&blocks, Vector::from_vec(shift)).unwrap()
        })
}

/// Random physical state; proptest varies the seed of the sampler.
fn state(modes: usize) -> impl Strategy<Value = GaussianState> {
    any::<u64>().prop_map(move |seed| random_state(&mut trial_rng(seed, 0, 0), modes))
}

fn pair() -> ModePartition {
    ModePartition::singletons(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn physical_states_have_positive_definite_cov(s in state(3)) {
        prop_assert!(s.check_physical(1e-9).physical);
        prop_assert!(min_eigenvalue_sym(s.cov()) > 0.0);
    }

    #[test]
    fn marginals_compose(s in state(4)) {
        let outer = s.marginal(&[3, 1, 2]).unwrap();
        let twice = outer.marginal(&[2, 0]).unwrap();
        let direct = s.marginal(&[2, 3]).unwrap();
        prop_assert_eq!(twice, direct);
    }

    #[test]
    fn classical_implies_physical(l in lambda(), frac in 0.0..1.0_f64) {
        let s = cc_state(l, frac * (l - 1.0)).unwrap();
        prop_assert!(s.is_classical(1e-9));
        prop_assert!(s.check_physical(1e-9).physical);
    }

    #[test]
    fn unitaries_preserve_physicality_and_purity(s in state(2), u in local_unitary(2)) {
        let moved = u.apply(&s).unwrap();
        prop_assert!(moved.check_physical(1e-9).physical);
        let (p0, p1) = (s.purity().unwrap(), moved.purity().unwrap());
        prop_assert!((p0 - p1).abs() < 1e-9 * p0.max(1.0));
    }

    #[test]
    fn unitary_composition(s in state(2), u1 in local_unitary(2), u2 in local_unitary(2)) {
        let stepwise = u2.apply(&u1.apply(&s).unwrap()).unwrap();
        let composed = u1.then(&u2).unwrap().apply(&s).unwrap();
        prop_assert!(max_abs(&(stepwise.cov() - composed.cov())) < 1e-9);
        prop_assert!((stepwise.mean() - composed.mean()).amax() < 1e-9);
    }

    #[test]
    fn standard_form_round_trip(s in state(2)) {
        let sf = bipartite_standard_form(&s).unwrap();
        prop_assert!(sf.lambdas.iter().all(|&l| l >= 1.0 - 1e-9));
        let back = sf.unitary().apply(&s).unwrap();
        prop_assert!(max_abs(&(back.cov() - sf.standardized.cov())) < 1e-9);
        prop_assert!(back.mean().amax() < 1e-9);
        let (n1, n2) = sf.nu.unwrap();
        prop_assert!(n1 >= 0.0 && n1 >= n2.abs() - 1e-12);
    }

    #[test]
    fn invariants_survive_local_unitaries(s in state(2), u in local_unitary(2)) {
        let a = bipartite_standard_form(&s).unwrap().invariants().unwrap();
        let b = bipartite_standard_form(&u.apply(&s).unwrap()).unwrap().invariants().unwrap();
        for k in 0..4 {
            prop_assert!((a[k].abs() - b[k].abs()).abs() < 1e-8, "{:?} vs {:?}", a, b);
        }
    }

    #[test]
    fn mu_is_a_correlation_coefficient(s in state(2)) {
        let r = maximal_correlation(&s).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&r.mu));
        // |f^T Q1 g| reproduces mu
        let f = Vector::from_vec(r.f.iter().map(|z| z.re).collect());
        let g = Vector::from_vec(r.g.iter().map(|z| z.re).collect());
        prop_assert!(((f.transpose() * &r.q1 * g)[(0, 0)].abs() - r.mu).abs() < 1e-12);
    }

    #[test]
    fn witness_is_normalized_and_optimal(s in state(2)) {
        let r = maximal_correlation(&s).unwrap();
        let c = r.quadrature_coeffs;
        let a = nalgebra::DVector::from_vec(vec![c.alpha_x, c.alpha_p]);
        let b = nalgebra::DVector::from_vec(vec![c.beta_x, c.beta_p]);
        let omega = symplectic_form(1);
        let ga = complexify(&s.block(0, 0), &omega);
        let gb = complexify(&s.block(1, 1), &omega);
        let cross = s.block(0, 1).map(|x| Complex64::new(x, 0.0));
        let norm_a = (a.adjoint() * ga * &a)[(0, 0)] * 0.5;
        let norm_b = (b.adjoint() * gb * &b)[(0, 0)] * 0.5;
        let corr = (a.adjoint() * cross * &b)[(0, 0)] * 0.5;
        prop_assert!((norm_a - 1.0).norm() < 1e-8, "{}", norm_a);
        prop_assert!((norm_b - 1.0).norm() < 1e-8, "{}", norm_b);
        prop_assert!((corr.norm() - r.mu).abs() < 1e-8, "{} vs {}", corr.norm(), r.mu);
    }

    #[test]
    fn mu_vanishes_exactly_on_products(l1 in lambda(), l2 in lambda(), u in local_unitary(2)) {
        let product = u.apply(&GaussianState::thermal(&[l1, l2])).unwrap();
        prop_assert!(maximal_correlation(&product).unwrap().mu < 1e-10);
        let ca = u.apply(&ca_state(l1, 0.1).unwrap()).unwrap();
        prop_assert!(maximal_correlation(&ca).unwrap().mu > 1e-10);
    }

    #[test]
    fn mu_g_is_strictly_below_one_and_below_mu(s in state(2)) {
        let mu_g = gaussian_maximal_correlation(&s, &pair()).unwrap().mu_g;
        prop_assert!(mu_g < 1.0);
        prop_assert!(mu_g <= maximal_correlation(&s).unwrap().mu + 1e-9);
    }

    #[test]
    fn family_closed_forms(l in lambda(), frac in 0.0..1.0_f64, u in local_unitary(2)) {
        let nu = frac * (l - 1.0);
        let ca = u.apply(&ca_state(l, nu).unwrap()).unwrap();
        let cc = u.apply(&cc_state(l, nu).unwrap()).unwrap();
        prop_assert!((maximal_correlation(&ca).unwrap().mu - mu_ca(l, nu)).abs() < 1e-10);
        prop_assert!((maximal_correlation(&cc).unwrap().mu - mu_cc(l, nu)).abs() < 1e-10);
    }

    #[test]
    fn cc_dominates_ca_but_mu_g_is_blind(l in lambda(), frac in 0.01..1.0_f64) {
        let c = cc_ca_comparison(l, frac * (l - 1.0)).unwrap();
        prop_assert!(c.mu_cc > c.mu_ca);
        prop_assert!((c.mu_g_cc - c.mu_g_ca).abs() < 1e-10);
        prop_assert_eq!(c.ca_to_cc.verdict, Verdict::Infeasible);
        prop_assert_eq!(c.cc_to_ca.verdict, Verdict::Undecided);
    }

    #[test]
    fn loss_lowers_mu_g_on_ca(l in lambda(), frac in 0.01..1.0_f64, ta in 0.0..1.0_f64, tb in 0.0..=1.0_f64) {
        let nu = frac * (l * l - 1.0).sqrt();
        let s = ca_state(l, nu).unwrap();
        let shared = lossy_channel(&lossy_channel(&s, &[0], ta).unwrap(), &[1], tb).unwrap();
        let mu_g = gaussian_maximal_correlation(&shared, &pair()).unwrap().mu_g;
        prop_assert!((mu_g - lossy_ca_mu_g(l, nu, ta, tb)).abs() < 1e-12);
        prop_assert!(mu_g < nu / l);
    }

    #[test]
    fn ribbon_acceptance_is_downward_closed(
        s in state(3),
        t in prop::collection::vec(0.0..=1.0_f64, 3),
        shrink in prop::collection::vec(0.0..=1.0_f64, 3),
    ) {
        let theta = ThetaPoint::new(t.clone()).unwrap();
        if in_ribbon(&s, &theta, 0.0).unwrap().accepted {
            let lower: Vec<f64> = t.iter().zip(&shrink).map(|(a, b)| a * b).collect();
            prop_assert!(in_ribbon(&s, &ThetaPoint::new(lower).unwrap(), 1e-9).unwrap().accepted);
        }
    }
}
