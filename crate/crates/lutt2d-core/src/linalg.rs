//! Small dense linear algebra for two-mode quadratic forms.

use nalgebra::{Matrix2, SymmetricEigen};

use crate::error::bail;
use crate::Result;

/// Eigenvalues of a real symmetric 2×2 matrix, descending.
pub fn sym_eigenvalues(m: Matrix2<f64>) -> [f64; 2] {
    let e = SymmetricEigen::new(m).eigenvalues;
    let (a, b) = (e[0], e[1]);
    if a >= b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Principal square root of a symmetric positive semidefinite matrix.
pub fn sqrt_psd(m: Matrix2<f64>) -> Result<Matrix2<f64>> {
    let eig = SymmetricEigen::new(m);
    let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    let mut d = eig.eigenvalues;
    for x in d.iter_mut() {
        if *x < -1e-14 * scale {
            bail!(Domain, "matrix is not positive semidefinite (eigenvalue {x})");
        }
        *x = libm::sqrt(x.max(0.0));
    }
    Ok(eig.eigenvectors * Matrix2::from_diagonal(&d) * eig.eigenvectors.transpose())
}

/// Normal-mode frequencies of `H = ½ πᵀ K π + ½ φᵀ U φ` with `[φ_i, π_j] = iδ_ij`,
/// descending. They are the square roots of the eigenvalues of `K^½ U K^½`.
pub fn normal_mode_frequencies(k: Matrix2<f64>, u: Matrix2<f64>) -> Result<[f64; 2]> {
    let sk = sqrt_psd(k)?;
    let m = sk * u * sk;
    let [a, b] = sym_eigenvalues((m + m.transpose()) * 0.5);
    let scale = a.abs().max(f64::MIN_POSITIVE);
    if b < -1e-13 * scale {
        bail!(Domain, "quadratic form is not positive definite (omega^2 = {b})");
    }
    Ok([libm::sqrt(a.max(0.0)), libm::sqrt(b.max(0.0))])
}
