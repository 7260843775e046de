//! Small dense linear algebra on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;
pub type CMat = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_c(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.norm()))
}

pub fn asymmetry(m: &Mat) -> f64 {
    max_abs(&(m - m.transpose()))
}

/// Minimum eigenvalue of a real symmetric matrix (symmetrized first).
pub fn min_eigenvalue_sym(m: &Mat) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    let s = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(s).eigenvalues.min()
}

/// Minimum eigenvalue of a complex Hermitian matrix (Hermitized first).
pub fn min_eigenvalue_herm(m: &CMat) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    let h = (m + m.adjoint()).map(|z| z * 0.5);
    SymmetricEigen::new(h).eigenvalues.min()
}

/// `re + i*im` as a complex matrix.
pub fn complexify(re: &Mat, im: &Mat) -> CMat {
    re.zip_map(im, Complex64::new)
}

pub fn to_complex(m: &Mat) -> CMat {
    m.map(|a| Complex64::new(a, 0.0))
}

/// Symmetric `m^(-1/2)` through the eigendecomposition; eigenvalues below
/// `floor` are rejected.
pub fn inv_sqrt_sym(m: &Mat, floor: f64) -> Option<Mat> {
    let s = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(s);
    if eig.eigenvalues.iter().any(|&l| l < floor) {
        return None;
    }
    let d = Mat::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    Some(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Largest singular triple of a real matrix.
#[derive(Debug, Clone)]
pub struct TopSingular {
    pub value: f64,
    pub left: Vector,
    pub right: Vector,
}

pub fn top_singular(m: &Mat) -> TopSingular {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return TopSingular {
            value: 0.0,
            left: Vector::zeros(r),
            right: Vector::zeros(c),
        };
    }
    let svd = m.clone().svd(true, true);
    let (idx, value) = svd.singular_values.iter().copied().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |best, (i, s)| if s > best.1 { (i, s) } else { best },
    );
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    TopSingular {
        value,
        left: u.column(idx).into_owned(),
        right: vt.row(idx).transpose(),
    }
}

/// Operator norm (largest singular value).
pub fn spectral_norm(m: &Mat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn spectral_norm_c(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Block direct sum `a (+) b`.
pub fn direct_sum(a: &Mat, b: &Mat) -> Mat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = Mat::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Indices of the (x, p) coordinates of the given modes, in order.
pub fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect()
}

pub fn submatrix(m: &Mat, rows: &[usize], cols: &[usize]) -> Mat {
    Mat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn subvector(v: &Vector, idx: &[usize]) -> Vector {
    Vector::from_iterator(idx.len(), idx.iter().map(|&i| v[i]))
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    Mat::from_fn(ra * rb, ca * cb, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hermitian_min_eigenvalue_of_known_matrix() {
        // [[0.5, i], [-i, 0.5]] has eigenvalues 0.5 +- 1.
        let re = Mat::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        let im = Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert_abs_diff_eq!(
            min_eigenvalue_herm(&complexify(&re, &im)),
            -0.5,
            epsilon = 1e-14
        );
    }

    #[test]
    fn inverse_square_root_roundtrip() {
        let m = Mat::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 3.0]);
        let w = inv_sqrt_sym(&m, 1e-12).unwrap();
        let id = &w * &m * &w;
        assert_abs_diff_eq!(max_abs(&(id - Mat::identity(2, 2))), 0.0, epsilon = 1e-13);
        assert!(inv_sqrt_sym(&Mat::zeros(2, 2), 1e-12).is_none());
    }

    #[test]
    fn top_singular_triple_is_consistent() {
        let m = Mat::from_row_slice(2, 3, &[1.0, 2.0, 0.0, -1.0, 0.5, 3.0]);
        let t = top_singular(&m);
        assert_abs_diff_eq!(
            (t.left.transpose() * &m * &t.right)[(0, 0)],
            t.value,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(t.value, spectral_norm(&m), epsilon = 1e-12);
    }

    #[test]
    fn direct_sum_places_blocks() {
        let a = Mat::from_element(1, 1, 2.0);
        let b = Mat::identity(2, 2);
        let s = direct_sum(&a, &b);
        assert_eq!(s.shape(), (3, 3));
        assert_eq!(s[(0, 0)], 2.0);
        assert_eq!(s[(0, 1)], 0.0);
        assert_eq!(s[(2, 2)], 1.0);
    }
}
