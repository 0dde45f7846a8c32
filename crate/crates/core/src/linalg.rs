//! Thin wrappers around nalgebra for the dense kernels used elsewhere:
//! SVD-based null spaces and condition numbers, QR orthonormalization,
//! inverses, and determinants. All matrices are complex; real data rides
//! along with zero imaginary parts.

use nalgebra::{DMatrix, DVector};

use crate::spaces::Scalar;

/// Ratio of largest to smallest singular value; infinite for singular input.
pub(crate) fn condition_number(m: &DMatrix<Scalar>) -> f64 {
    let svd = m.clone().svd(false, false);
    let mut hi = 0.0_f64;
    let mut lo = f64::INFINITY;
    for &s in svd.singular_values.iter() {
        hi = hi.max(s);
        lo = lo.min(s);
    }
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Null-space basis via SVD. A singular value counts as zero when it is at
/// most `relative_cutoff` times the largest one. Returns the basis as unit
/// columns; an empty matrix (zero rows) yields the full standard basis.
pub(crate) fn nullspace(m: &DMatrix<Scalar>, relative_cutoff: f64) -> Vec<DVector<Scalar>> {
    let ncols = m.ncols();
    if m.nrows() == 0 {
        return (0..ncols)
            .map(|k| DVector::from_fn(ncols, |r, _| if r == k { Scalar::ONE } else { Scalar::ZERO }))
            .collect();
    }
    // nalgebra computes the thin SVD, whose v_t has only min(nrows, ncols)
    // rows; pad wide matrices with zero rows so the full V comes back.
    let padded;
    let work = if m.nrows() < ncols {
        padded = m.clone().resize(ncols, ncols, Scalar::ZERO);
        &padded
    } else {
        m
    };
    let svd = work.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    let cutoff = relative_cutoff * sigma_max;
    let mut basis = Vec::new();
    for k in 0..v_t.nrows() {
        let s = if k < svd.singular_values.len() {
            svd.singular_values[k]
        } else {
            0.0
        };
        if s <= cutoff {
            // v_t stores the adjoint of V, so the null direction is the
            // conjugate of its k-th row.
            basis.push(DVector::from_fn(ncols, |c, _| v_t[(k, c)].conj()));
        }
    }
    basis
}

/// Inverse of a square matrix, if it exists.
pub(crate) fn inverse(m: &DMatrix<Scalar>) -> Option<DMatrix<Scalar>> {
    m.clone().try_inverse()
}

/// |det M|.
pub(crate) fn abs_determinant(m: &DMatrix<Scalar>) -> f64 {
    m.determinant().norm()
}

/// Orthonormalizes the columns of a tall matrix (thin QR); the result has the
/// same span with orthonormal columns.
pub(crate) fn orthonormal_columns(m: &DMatrix<Scalar>) -> DMatrix<Scalar> {
    m.clone().qr().q()
}
