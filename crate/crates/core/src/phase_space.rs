//! Moment-level description of Gaussian states.
//!
//! Quadratures are ordered `x_1, p_1, ..., x_m, p_m`. A state is the pair of
//! its mean vector (length `2m`) and covariance matrix (`2m x 2m`), with the
//! convention that the vacuum has covariance `I`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, asymmetry, complexify, min_eigenvalue_herm, min_eigenvalue_sym, Mat, Vector,
};
use crate::tol;

/// Block-diagonal symplectic form `Omega_m` with blocks `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(modes: usize) -> Mat {
    let mut omega = Mat::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// First and second moments of an `m`-mode Gaussian state.
///
/// Construction only checks shapes and finiteness; whether the moments
/// describe a physical state is answered by [`GaussianState::check_physical`].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    modes: usize,
    mean: Vector,
    cov: Mat,
}

/// Outcome of the physicality test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalityCheck {
    pub physical: bool,
    pub symmetric: bool,
    /// Minimum eigenvalue of the Hermitian matrix `cov + i*Omega`.
    pub min_eigenvalue: f64,
    /// Physical but with `cov + i*Omega` singular (within tolerance).
    pub boundary: bool,
}

impl GaussianState {
    pub fn new(mean: Vector, cov: Mat) -> Result<Self> {
        let n = mean.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Shape(format!(
                "mean has length {n}, expected a positive even length"
            )));
        }
        if cov.shape() != (n, n) {
            return Err(Error::Shape(format!(
                "cov is {}x{}, expected {n}x{n}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("mean"));
        }
        if cov.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("cov"));
        }
        Ok(Self {
            modes: n / 2,
            mean,
            cov,
        })
    }

    /// Zero-mean state with the given covariance.
    pub fn centered(cov: Mat) -> Result<Self> {
        let n = cov.nrows();
        Self::new(Vector::zeros(n), cov)
    }

    /// `m`-mode vacuum.
    pub fn vacuum(modes: usize) -> Self {
        Self::thermal(&vec![1.0; modes])
    }

    /// Product of single-mode thermal states `lambda_j * I`.
    pub fn thermal(lambdas: &[f64]) -> Self {
        let mut cov = Mat::zeros(2 * lambdas.len(), 2 * lambdas.len());
        for (k, &l) in lambdas.iter().enumerate() {
            cov[(2 * k, 2 * k)] = l;
            cov[(2 * k + 1, 2 * k + 1)] = l;
        }
        Self {
            modes: lambdas.len(),
            mean: Vector::zeros(2 * lambdas.len()),
            cov,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn mean(&self) -> &Vector {
        &self.mean
    }

    pub fn cov(&self) -> &Mat {
        &self.cov
    }

    /// 2x2 block of `cov` between modes `j` and `k`.
    pub fn block(&self, j: usize, k: usize) -> Mat {
        self.cov.view((2 * j, 2 * k), (2, 2)).into_owned()
    }

    pub fn check_physical(&self, tol: f64) -> PhysicalityCheck {
        let asym = asymmetry(&self.cov);
        let symmetric = asym <= tol::SYMMETRY;
        let sym = (&self.cov + self.cov.transpose()) * 0.5;
        let min_eigenvalue = min_eigenvalue_herm(&complexify(&sym, &symplectic_form(self.modes)));
        let physical = symmetric && min_eigenvalue >= -tol;
        PhysicalityCheck {
            physical,
            symmetric,
            min_eigenvalue,
            boundary: physical && min_eigenvalue <= tol,
        }
    }

    /// Fails with a domain error unless the state is physical at `tol`.
    pub fn ensure_physical(&self, tol: f64) -> Result<PhysicalityCheck> {
        let check = self.check_physical(tol);
        if !check.symmetric {
            return Err(Error::NotSymmetric {
                asymmetry: asymmetry(&self.cov),
            });
        }
        if !check.physical {
            return Err(Error::Unphysical {
                min_eigenvalue: check.min_eigenvalue,
            });
        }
        Ok(check)
    }

    /// `1/sqrt(det cov)`; equals 1 exactly for pure states.
    pub fn purity(&self) -> Result<f64> {
        let det = self.cov.determinant();
        if !(det > 0.0) {
            return Err(Error::Unphysical {
                min_eigenvalue: min_eigenvalue_sym(&self.cov),
            });
        }
        Ok(1.0 / det.sqrt())
    }

    /// Minimum eigenvalue of `cov - I`; non-negative for classical states.
    pub fn classicality_margin(&self) -> f64 {
        let n = self.cov.nrows();
        min_eigenvalue_sym(&(&self.cov - Mat::identity(n, n)))
    }

    /// Classical (nonnegative Gaussian P-function) iff `cov - I >= 0`.
    pub fn is_classical(&self, tol: f64) -> bool {
        self.classicality_margin() >= -tol
    }

    /// Reduced state on `modes`, in the given order.
    pub fn marginal(&self, modes: &[usize]) -> Result<GaussianState> {
        self.check_indices(modes)?;
        let idx = linalg::quadrature_indices(modes);
        Ok(GaussianState {
            modes: modes.len(),
            mean: linalg::subvector(&self.mean, &idx),
            cov: linalg::submatrix(&self.cov, &idx, &idx),
        })
    }

    /// Reorders modes so that new mode `k` is old mode `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<GaussianState> {
        if order.len() != self.modes {
            return Err(Error::Shape(format!(
                "permutation has {} entries for {} modes",
                order.len(),
                self.modes
            )));
        }
        self.marginal(order)
    }

    /// Tensor product: modes of `self` first, then those of `other`.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let mut mean = Vector::zeros(self.mean.len() + other.mean.len());
        mean.rows_mut(0, self.mean.len()).copy_from(&self.mean);
        mean.rows_mut(self.mean.len(), other.mean.len())
            .copy_from(&other.mean);
        GaussianState {
            modes: self.modes + other.modes,
            mean,
            cov: linalg::direct_sum(&self.cov, &other.cov),
        }
    }

    fn check_indices(&self, modes: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.modes];
        for &k in modes {
            if k >= self.modes {
                return Err(Error::ModeOutOfRange {
                    index: k,
                    modes: self.modes,
                });
            }
            if seen[k] {
                return Err(Error::Shape(format!("mode {k} selected twice")));
            }
            seen[k] = true;
        }
        if modes.is_empty() {
            return Err(Error::Shape("empty mode selection".into()));
        }
        Ok(())
    }

    pub fn to_document(&self) -> StateDocument {
        StateDocument {
            modes: self.modes,
            ordering: ORDERING.to_string(),
            mean: self.mean.iter().copied().collect(),
            cov: self
                .cov
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
        }
    }

    pub fn from_document(doc: &StateDocument) -> Result<Self> {
        if doc.ordering != ORDERING {
            return Err(Error::Parse(format!(
                "unsupported quadrature ordering {:?}, expected \"xpxp\"",
                doc.ordering
            )));
        }
        let n = 2 * doc.modes;
        if doc.modes == 0 {
            return Err(Error::Shape("modes must be positive".into()));
        }
        if doc.mean.len() != n {
            return Err(Error::Shape(format!(
                "mean has length {}, expected {n}",
                doc.mean.len()
            )));
        }
        if doc.cov.len() != n || doc.cov.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("cov must be {n}x{n}")));
        }
        let cov = Mat::from_fn(n, n, |i, j| doc.cov[i][j]);
        Self::new(Vector::from_vec(doc.mean.clone()), cov)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        // serde_json's message already carries the line and column
        let doc: StateDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("state serializes")
    }
}

pub const ORDERING: &str = "xpxp";

/// On-disk JSON form of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub modes: usize,
    #[serde(default = "default_ordering")]
    pub ordering: String,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
}

fn default_ordering() -> String {
    ORDERING.to_string()
}

/// Assignment of modes to parties: disjoint, covering, non-empty sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModePartition {
    parties: Vec<Vec<usize>>,
}

impl ModePartition {
    pub fn new(parties: Vec<Vec<usize>>, modes: usize) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::Partition("no parties".into()));
        }
        let mut owner = vec![None; modes];
        for (p, set) in parties.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::Partition(format!("party {p} is empty")));
            }
            for &k in set {
                if k >= modes {
                    return Err(Error::ModeOutOfRange { index: k, modes });
                }
                if let Some(q) = owner[k] {
                    return Err(Error::Partition(format!(
                        "mode {k} assigned to parties {q} and {p}"
                    )));
                }
                owner[k] = Some(p);
            }
        }
        if let Some(k) = owner.iter().position(Option::is_none) {
            return Err(Error::Partition(format!("mode {k} not assigned")));
        }
        Ok(Self { parties })
    }

    /// One mode per party.
    pub fn singletons(modes: usize) -> Self {
        Self {
            parties: (0..modes).map(|k| vec![k]).collect(),
        }
    }

    /// Parses `"0,1;2,3"`: parties separated by `;`, modes by `,`.
    pub fn parse(text: &str, modes: usize) -> Result<Self> {
        let parties = text
            .split(';')
            .map(|party| {
                party
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|e| Error::Partition(format!("bad mode index {s:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parties, modes)
    }

    pub fn parties(&self) -> &[Vec<usize>] {
        &self.parties
    }

    pub fn len(&self) -> usize {
        self.parties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parties.is_empty()
    }

    pub fn modes(&self) -> usize {
        self.parties.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_mode(cov: &[f64]) -> GaussianState {
        GaussianState::centered(Mat::from_row_slice(4, 4, cov)).unwrap()
    }

    #[test]
    fn omega_single_mode() {
        assert_eq!(
            symplectic_form(1),
            Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
        );
    }

    #[test]
    fn omega_squares_to_minus_identity() {
        for m in 1..6 {
            let o = symplectic_form(m);
            assert_eq!(&o * &o, -Mat::identity(2 * m, 2 * m));
            assert_eq!(o.transpose() * &o, Mat::identity(2 * m, 2 * m));
            assert_eq!(o.transpose(), -&o);
        }
    }

    #[test]
    fn omega_two_modes_is_block_diagonal() {
        let o = symplectic_form(2);
        assert_eq!(o.fixed_view::<2, 2>(0, 0), o.fixed_view::<2, 2>(2, 2));
        assert_eq!(o.fixed_view::<2, 2>(0, 2).iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn vacuum_is_physical_and_pure() {
        let v = GaussianState::vacuum(1);
        let c = v.check_physical(tol::PSD);
        assert!(c.physical);
        assert!(c.boundary);
        assert_abs_diff_eq!(c.min_eigenvalue, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.purity().unwrap(), 1.0, epsilon = 1e-14);
        assert!(v.is_classical(tol::PSD));
    }

    #[test]
    fn subvacuum_noise_is_unphysical() {
        let s = GaussianState::centered(Mat::identity(2, 2) * 0.5).unwrap();
        let c = s.check_physical(tol::PSD);
        assert!(!c.physical);
        assert_abs_diff_eq!(c.min_eigenvalue, -0.5, epsilon = 1e-12);
        assert!(matches!(
            s.ensure_physical(tol::PSD),
            Err(Error::Unphysical { .. })
        ));
    }

    #[test]
    fn thermal_purity() {
        let s = GaussianState::thermal(&[2.0]);
        assert_abs_diff_eq!(s.purity().unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn asymmetric_cov_is_rejected() {
        let mut cov = Mat::identity(2, 2) * 2.0;
        cov[(0, 1)] = 1e-6;
        let s = GaussianState::centered(cov).unwrap();
        assert!(!s.check_physical(tol::PSD).physical);
        assert!(matches!(
            s.ensure_physical(tol::PSD),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn shape_errors_are_structural() {
        let e = GaussianState::new(Vector::zeros(3), Mat::identity(3, 3)).unwrap_err();
        assert!(e.is_structural());
        let e = GaussianState::new(Vector::zeros(2), Mat::identity(4, 4)).unwrap_err();
        assert!(e.is_structural());
        let e = GaussianState::new(Vector::from_vec(vec![f64::NAN, 0.0]), Mat::identity(2, 2))
            .unwrap_err();
        assert_eq!(e, Error::NonFinite("mean"));
    }

    #[test]
    fn marginal_of_correlated_state_is_thermal() {
        let s = two_mode(&[
            2.0, 0.0, 1.0, 0.0, //
            0.0, 2.0, 0.0, -1.0, //
            1.0, 0.0, 2.0, 0.0, //
            0.0, -1.0, 0.0, 2.0,
        ]);
        let a = s.marginal(&[0]).unwrap();
        assert_eq!(a.cov(), &(Mat::identity(2, 2) * 2.0));
        assert_eq!(a.mean(), &Vector::zeros(2));
        assert!(matches!(
            s.marginal(&[2]),
            Err(Error::ModeOutOfRange { index: 2, modes: 2 })
        ));
        assert!(s.marginal(&[0, 0]).is_err());
    }

    #[test]
    fn marginal_of_product_is_factor() {
        let a = GaussianState::new(
            Vector::from_vec(vec![0.3, -1.0]),
            Mat::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.5]),
        )
        .unwrap();
        let b = GaussianState::thermal(&[3.0]);
        let ab = a.tensor(&b);
        assert_eq!(ab.marginal(&[0]).unwrap(), a);
        assert_eq!(ab.marginal(&[1]).unwrap(), b);
        assert_eq!(ab.permute(&[1, 0]).unwrap(), b.tensor(&a));
    }

    #[test]
    fn document_roundtrip_and_rejections() {
        let s = GaussianState::thermal(&[2.0, 3.0]);
        let back = GaussianState::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(matches!(
            GaussianState::from_json(
                r#"{"modes":1,"ordering":"xxpp","mean":[0,0],"cov":[[1,0],[0,1]]}"#
            ),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            GaussianState::from_json(r#"{"modes":1,"mean":[0,0],"cov":[[1,0]]}"#),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            GaussianState::from_json(r#"{"modes":1,"mean":[0,0],"cov":[[NaN,0],[0,1]]}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn partitions() {
        let p = ModePartition::parse("0,2; 1,3", 4).unwrap();
        assert_eq!(p.parties(), &[vec![0, 2], vec![1, 3]]);
        assert!(ModePartition::parse("0;0,1", 2).is_err());
        assert!(ModePartition::parse("0", 2).is_err());
        assert!(ModePartition::parse("0;x", 2).is_err());
        assert!(ModePartition::new(vec![vec![0], vec![]], 1).is_err());
        assert_eq!(ModePartition::singletons(3).len(), 3);
    }
}
