//! Covariance-matrix description of Gaussian states.
//!
//! Convention: quadratures are ordered `(q1, p1, ..., qN, pN)` and
//! `Gamma_sl = 2 Re<R_s R_l> - 2 <R_s><R_l>`, so the vacuum has `Gamma = I`.
//! The `-i Lambda` term in the defining formula cancels the antisymmetric
//! part of `2 <R_s R_l>` (the commutator), which is why the stored matrix is
//! real symmetric.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, C64};
use crate::measures::ratio_from_negativity;

pub const SYMMETRY_TOL: f64 = 1e-10;
pub const BONA_FIDE_TOL: f64 = 1e-8;
pub const PURITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    gamma: DMatrix<f64>,
    displacement: DVector<f64>,
}

impl CovarianceMatrix {
    /// Wraps `gamma` after checking shape, symmetry and the bona fide condition.
    pub fn new(gamma: DMatrix<f64>, displacement: DVector<f64>) -> Result<Self> {
        let cm = Self::unchecked(gamma, displacement)?;
        let report = validate_cm(&cm.gamma);
        if !report.ok {
            return Err(Error::InvalidState(format!(
                "covariance matrix is not physical: {}",
                report.reason.unwrap_or_default()
            )));
        }
        Ok(cm)
    }

    fn unchecked(gamma: DMatrix<f64>, displacement: DVector<f64>) -> Result<Self> {
        let n = gamma.nrows();
        if n == 0 || !n.is_multiple_of(2) || gamma.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "covariance matrix must be 2N x 2N, got {}x{}",
                gamma.nrows(),
                gamma.ncols()
            )));
        }
        if displacement.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "displacement of length {} for {n} quadratures",
                displacement.len()
            )));
        }
        if gamma.iter().chain(displacement.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { gamma, displacement })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            gamma: DMatrix::identity(2 * modes, 2 * modes),
            displacement: DVector::zeros(2 * modes),
        }
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.displacement
    }

    pub fn modes(&self) -> usize {
        self.gamma.nrows() / 2
    }

    /// Direct sum, i.e. the covariance matrix of the product state.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n, m) = (self.gamma.nrows(), other.gamma.nrows());
        let mut gamma = DMatrix::zeros(n + m, n + m);
        gamma.view_mut((0, 0), (n, n)).copy_from(&self.gamma);
        gamma.view_mut((n, n), (m, m)).copy_from(&other.gamma);
        let displacement = DVector::from_iterator(
            n + m,
            self.displacement.iter().chain(other.displacement.iter()).copied(),
        );
        Self { gamma, displacement }
    }
}

/// `Lambda = ⊕ J` with `J = [[0, 1], [-1, 0]]`.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        l[(2 * k, 2 * k + 1)] = 1.0;
        l[(2 * k + 1, 2 * k)] = -1.0;
    }
    l
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmValidation {
    pub ok: bool,
    pub max_asymmetry: f64,
    /// Smallest eigenvalue of `Gamma + i Lambda`.
    pub min_bona_fide_eigenvalue: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Checks symmetry and `Gamma + i Lambda >= 0`.
pub fn validate_cm(gamma: &DMatrix<f64>) -> CmValidation {
    let n = gamma.nrows();
    if n == 0 || !n.is_multiple_of(2) || gamma.ncols() != n {
        return CmValidation {
            ok: false,
            max_asymmetry: f64::NAN,
            min_bona_fide_eigenvalue: f64::NAN,
            reason: Some(format!("shape {}x{} is not 2N x 2N", gamma.nrows(), gamma.ncols())),
        };
    }
    let max_asymmetry = (gamma - gamma.transpose()).amax();
    let lambda = symplectic_form(n / 2);
    let h = ComplexMatrix::from_fn(n, n, |i, j| {
        C64::new(0.5 * (gamma[(i, j)] + gamma[(j, i)]), lambda[(i, j)])
    });
    let min_eig = match hermitian_eigenvalues(&h) {
        Ok(e) => e[0],
        Err(_) => f64::NAN,
    };
    let reason = if !(max_asymmetry <= SYMMETRY_TOL) {
        Some(format!("asymmetry {max_asymmetry:e}"))
    } else if !(min_eig >= -BONA_FIDE_TOL) {
        Some(format!(
            "Gamma + i Lambda has eigenvalue {min_eig:e} (uncertainty principle)"
        ))
    } else {
        None
    };
    CmValidation {
        ok: reason.is_none(),
        max_asymmetry,
        min_bona_fide_eigenvalue: min_eig,
        reason,
    }
}

/// Covariance matrix of the two-mode squeezed vacuum `sqrt(1-chi^2) sum chi^n |nn>`:
/// `cosh 2r` on the diagonal, `+sinh 2r` between the q's and `-sinh 2r`
/// between the p's.
pub fn tmsvs_cm(r: f64) -> Result<CovarianceMatrix> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "squeezing must be finite and non-negative, got {r}"
        )));
    }
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    #[rustfmt::skip]
    let gamma = DMatrix::from_row_slice(4, 4, &[
        c,   0.0, s,   0.0,
        0.0, c,   0.0, -s,
        s,   0.0, c,   0.0,
        0.0, -s,  0.0, c,
    ]);
    Ok(CovarianceMatrix {
        gamma,
        displacement: DVector::zeros(4),
    })
}

/// Partial transpose at the covariance level: flips the sign of the momentum
/// quadratures of the listed modes. The output need not be bona fide.
pub fn cm_partial_transpose(gamma: &DMatrix<f64>, modes_a: &[usize]) -> Result<DMatrix<f64>> {
    let n = gamma.nrows();
    if let Some(&k) = modes_a.iter().find(|&&k| 2 * k + 1 >= n) {
        return Err(Error::InvalidParameter(format!(
            "mode {k} out of range for {} modes",
            n / 2
        )));
    }
    let mut sign = vec![1.0; n];
    for &k in modes_a {
        sign[2 * k + 1] = -1.0;
    }
    Ok(DMatrix::from_fn(n, n, |i, j| sign[i] * sign[j] * gamma[(i, j)]))
}

/// Moduli of the eigenvalues of `i Lambda Gamma`, one per mode, descending.
///
/// Computed from the Hermitian matrix `Gamma^{1/2} (i Lambda) Gamma^{1/2}`,
/// which is similar to `i Lambda Gamma`.
pub fn symplectic_eigenvalues(gamma: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = gamma.nrows();
    if n == 0 || !n.is_multiple_of(2) || gamma.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected a 2N x 2N matrix, got {}x{}",
            gamma.nrows(),
            gamma.ncols()
        )));
    }
    let sym = (gamma + gamma.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let min = eig.eigenvalues.min();
    if !(min > 0.0) {
        return Err(Error::NotPositiveDefinite(min));
    }
    let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let lambda = symplectic_form(n / 2);
    let m = &root * &lambda * &root;
    // i * (real antisymmetric) is Hermitian
    let h = ComplexMatrix::from_fn(n, n, |i, j| C64::new(0.0, 0.5 * (m[(i, j)] - m[(j, i)])));
    let spec = hermitian_eigenvalues(&h)?;
    let mut nu: Vec<f64> = spec.iter().rev().take(n / 2).copied().collect();
    nu.sort_by(|a, b| b.total_cmp(a));
    Ok(nu)
}

/// Ratio negativity of a pure two-mode Gaussian state from its covariance
/// matrix: `||rho^TA||_1 = 1 / nu_min` of the transposed spectrum.
pub fn cm_ratio_negativity(cm: &CovarianceMatrix, modes_a: &[usize]) -> Result<f64> {
    if cm.modes() != 2 || modes_a.len() != 1 {
        return Err(Error::Unsupported(
            "covariance-matrix negativity is implemented for 1x1-mode states only".into(),
        ));
    }
    let det = cm.gamma.determinant();
    if (det - 1.0).abs() > PURITY_TOL * det.abs().max(1.0) {
        return Err(Error::Unsupported(format!(
            "covariance-matrix negativity needs a pure state (det Gamma = {det})"
        )));
    }
    let pt = cm_partial_transpose(&cm.gamma, modes_a)?;
    let nu = symplectic_eigenvalues(&pt)?;
    let nu_min = nu[nu.len() - 1];
    let trace_norm = (1.0 / nu_min).max(1.0);
    Ok(ratio_from_negativity(0.5 * (trace_norm - 1.0)))
}

/// JSON schema for covariance matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmFile {
    pub modes: usize,
    pub gamma: Vec<Vec<f64>>,
    pub displacement: Vec<f64>,
}

impl From<&CovarianceMatrix> for CmFile {
    fn from(cm: &CovarianceMatrix) -> Self {
        let n = cm.gamma.nrows();
        Self {
            modes: cm.modes(),
            gamma: (0..n).map(|i| (0..n).map(|j| cm.gamma[(i, j)]).collect()).collect(),
            displacement: cm.displacement.iter().copied().collect(),
        }
    }
}

impl TryFrom<CmFile> for CovarianceMatrix {
    type Error = Error;

    fn try_from(file: CmFile) -> Result<Self> {
        let n = 2 * file.modes;
        if file.gamma.len() != n || file.gamma.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "gamma must be {n}x{n} for {} modes",
                file.modes
            )));
        }
        let gamma = DMatrix::from_fn(n, n, |i, j| file.gamma[i][j]);
        CovarianceMatrix::new(gamma, DVector::from_vec(file.displacement))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_and_zero_matrix() {
        assert!(validate_cm(CovarianceMatrix::vacuum(2).gamma()).ok);
        let bad = validate_cm(&DMatrix::zeros(2, 2));
        assert!(!bad.ok);
        assert!(bad.min_bona_fide_eigenvalue < -0.5);
        assert!(!validate_cm(&DMatrix::zeros(3, 3)).ok);
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(!validate_cm(&asym).ok);
    }

    #[test]
    fn tmsvs_cm_properties() {
        let cm = tmsvs_cm(0.5).unwrap();
        assert!(validate_cm(cm.gamma()).ok);
        assert_abs_diff_eq!(cm.gamma()[(0, 0)], 1f64.cosh(), epsilon = 1e-15);
        assert_abs_diff_eq!(cm.gamma().determinant(), 1.0, epsilon = 1e-12);
        let nu = symplectic_eigenvalues(cm.gamma()).unwrap();
        assert_eq!(nu.len(), 2);
        for v in nu {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-8);
        }
        assert_eq!(tmsvs_cm(0.0).unwrap().gamma(), &DMatrix::identity(4, 4));
    }

    #[test]
    fn partial_transpose_of_tmsvs() {
        let r = 0.5;
        let cm = tmsvs_cm(r).unwrap();
        let pt = cm_partial_transpose(cm.gamma(), &[0]).unwrap();
        assert!(!validate_cm(&pt).ok);
        let nu = symplectic_eigenvalues(&pt).unwrap();
        assert_abs_diff_eq!(nu[0], (2.0 * r).exp(), epsilon = 1e-6);
        assert_abs_diff_eq!(nu[1], (-2.0 * r).exp(), epsilon = 1e-6);
        assert_eq!(&cm_partial_transpose(&pt, &[0]).unwrap(), cm.gamma());
        assert!(cm_partial_transpose(&pt, &[2]).is_err());
    }

    #[test]
    fn product_state_stays_bona_fide() {
        let cm = CovarianceMatrix::vacuum(1).direct_sum(&CovarianceMatrix::vacuum(1));
        let pt = cm_partial_transpose(cm.gamma(), &[0]).unwrap();
        assert!(validate_cm(&pt).ok);
        assert_eq!(cm_ratio_negativity(&cm, &[0]).unwrap(), 0.0);
    }

    #[test]
    fn cm_ratio_negativity_matches_tanh() {
        for r in [0.3, 1.0] {
            let chi = cm_ratio_negativity(&tmsvs_cm(r).unwrap(), &[0]).unwrap();
            assert_abs_diff_eq!(chi, r.tanh(), epsilon = 1e-6);
        }
        let mixed = CovarianceMatrix::new(DMatrix::identity(4, 4) * 2.0, DVector::zeros(4)).unwrap();
        assert!(matches!(cm_ratio_negativity(&mixed, &[0]), Err(Error::Unsupported(_))));
        let three = CovarianceMatrix::vacuum(3);
        assert!(cm_ratio_negativity(&three, &[0]).is_err());
    }

    #[test]
    fn non_positive_definite_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(symplectic_eigenvalues(&m), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn cm_file_roundtrip() {
        let cm = tmsvs_cm(0.4).unwrap();
        let file = CmFile::from(&cm);
        let json = serde_json::to_string(&file).unwrap();
        let back: CovarianceMatrix = serde_json::from_str::<CmFile>(&json).unwrap().try_into().unwrap();
        assert_eq!(back, cm);
        let bad = CmFile {
            modes: 1,
            gamma: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            displacement: vec![0.0, 0.0],
        };
        assert!(CovarianceMatrix::try_from(bad).is_err());
    }
}
