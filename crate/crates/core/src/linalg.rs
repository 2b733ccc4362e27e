//! Dense complex linear algebra on top of `nalgebra`.
//!
//! Every routine that combines operands checks their shapes and reports a
//! [`Error::DimensionMismatch`] instead of panicking. Inverses are never
//! formed explicitly: Hermitian positive-definite systems go through a
//! Cholesky factorisation with one step of iterative refinement.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

/// `aᴴ b`.
pub fn inner(a: &CVector, b: &CVector) -> Result<Complex64> {
    check_dim("inner", a.len(), b.len())?;
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// `H Hᴴ`.
pub fn gram(h: &CMatrix) -> CMatrix {
    h * h.adjoint()
}

/// Checked matrix product.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_dim("matmul", a.ncols(), b.nrows())?;
    Ok(a * b)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖a − b‖_F / ‖b‖_F`, falling back to `‖a‖_F` when `b` is zero.
pub fn relative_frobenius_error(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    check_dim("relative_frobenius_error(rows)", b.nrows(), a.nrows())?;
    check_dim("relative_frobenius_error(cols)", b.ncols(), a.ncols())?;
    let diff = frobenius(&(a - b));
    let reference = frobenius(b);
    Ok(if reference > 0.0 { diff / reference } else { diff })
}

/// Solves `G X = B` for Hermitian positive-definite `G`.
pub fn hpd_solve(g: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    check_dim("hpd_solve(square)", g.nrows(), g.ncols())?;
    check_dim("hpd_solve(rhs)", g.nrows(), rhs.nrows())?;
    let chol = factor(g)?;
    let mut x = chol.solve(rhs);
    let residual = rhs - g * &x;
    x += chol.solve(&residual);
    Ok(x)
}

/// Diagonal of `G⁻¹` for Hermitian positive-definite `G`.
pub fn hpd_inverse_diagonal(g: &CMatrix) -> Result<DVector<f64>> {
    check_dim("hpd_inverse_diagonal", g.nrows(), g.ncols())?;
    let chol = factor(g)?;
    // diag(G⁻¹)_k = ‖L⁻¹ e_k‖²
    let n = g.nrows();
    let l_inv = chol
        .l()
        .solve_lower_triangular(&CMatrix::identity(n, n))
        .ok_or(Error::RankDeficient {
            cond_estimate: f64::INFINITY,
        })?;
    Ok(DVector::from_iterator(
        n,
        (0..n).map(|k| l_inv.column(k).iter().map(|z| z.norm_sqr()).sum()),
    ))
}

fn factor(g: &CMatrix) -> Result<Cholesky<Complex64, nalgebra::Dyn>> {
    Cholesky::new(g.clone()).ok_or_else(|| Error::RankDeficient {
        cond_estimate: hermitian_condition(g),
    })
}

/// Cheap lower bound on the condition number of a Hermitian positive-definite
/// matrix from the extremes of its Cholesky diagonal; infinite when the
/// factorisation breaks down.
pub fn cholesky_condition_estimate(g: &CMatrix) -> f64 {
    match Cholesky::new(g.clone()) {
        Some(chol) => {
            let l = chol.l_dirty();
            let (lo, hi) = (0..g.nrows())
                .map(|i| l[(i, i)].re * l[(i, i)].re)
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
            if lo > 0.0 {
                hi / lo
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    }
}

/// Eigenvalue condition number `λ_max / λ_min` of a Hermitian matrix.
pub fn hermitian_condition(g: &CMatrix) -> f64 {
    if g.nrows() == 0 || g.nrows() != g.ncols() {
        return f64::NAN;
    }
    let eig = SymmetricEigen::new(g.clone());
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .map(|v| v.abs())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// Unitary `n`-point DFT matrix, `F[k, i] = e^{-j2πki/n} / √n`.
pub fn unitary_dft(n: usize) -> CMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |k, i| {
        crate::math::turns(-(((k * i) % n) as f64) / n as f64) * scale
    })
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_rejects_length_mismatch() {
        let a = CVector::from_element(3, c(1.0, 0.0));
        let b = CVector::from_element(2, c(1.0, 0.0));
        assert!(matches!(
            inner(&a, &b),
            Err(Error::DimensionMismatch { expected: 3, found: 2, .. })
        ));
    }

    #[test]
    fn dft_is_unitary() {
        let f = unitary_dft(8);
        let err = frobenius(&(&f * f.adjoint() - CMatrix::identity(8, 8)));
        assert!(err < 1e-13);
    }

    #[test]
    fn hpd_solve_recovers_solution() {
        let a = CMatrix::from_fn(4, 4, |i, j| c((i * 3 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.2));
        let g = gram(&a) + CMatrix::identity(4, 4);
        let x = CMatrix::from_fn(4, 2, |i, j| c(i as f64, j as f64 + 0.5));
        let b = &g * &x;
        let solved = hpd_solve(&g, &b).unwrap();
        assert!(frobenius(&(solved - x)) < 1e-12);
    }

    #[test]
    fn inverse_diagonal_matches_scalar_case() {
        let g = CMatrix::from_diagonal(&CVector::from_vec(vec![c(2.0, 0.0), c(4.0, 0.0)]));
        let d = hpd_inverse_diagonal(&g).unwrap();
        assert!((d[0] - 0.5).abs() < 1e-15 && (d[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let v = CMatrix::from_fn(3, 1, |i, _| c(i as f64 + 1.0, 0.0));
        let g = gram(&v);
        assert!(matches!(hpd_solve(&g, &g), Err(Error::RankDeficient { .. })));
        assert!(cholesky_condition_estimate(&g) > 1e10);
    }

    #[test]
    fn condition_of_diagonal() {
        let g = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(100.0, 0.0)]));
        assert!((hermitian_condition(&g) - 100.0).abs() < 1e-9);
    }
}
