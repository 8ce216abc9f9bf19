//! Dense complex linear algebra over multipartite Hilbert spaces.
//!
//! Matrices are stored row-major. Multipartite indices follow the convention
//! that subsystem 0 is the slowest-varying tensor index, so for dims
//! `[d0, d1, d2]` the basis state `|i0 i1 i2>` sits at
//! `i0 * d1 * d2 + i1 * d2 + i2`.

use std::ops::{Index, IndexMut};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Relative Hermiticity tolerance; scaled by `max(1, ||m||_max)`.
pub const HERM_TOL: f64 = 1e-10;
/// Norm tolerance for pure-state amplitude vectors.
pub const NORM_TOL: f64 = 1e-10;
/// Schmidt coefficients below this do not count towards the rank.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// `|v><v|`
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |m_ij - conj(m_ji)|`
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn herm_tol(&self) -> f64 {
        HERM_TOL * self.max_abs().max(1.0)
    }

    pub fn check_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let defect = self.hermiticity_defect();
        let tol = self.herm_tol();
        if defect > tol {
            return Err(Error::NotHermitian { defect, tol });
        }
        Ok(())
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Subsystem dimensions plus the set of subsystems forming party A.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
    #[serde(rename = "partyA")]
    party_a: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>, mut party_a: Vec<usize>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidLayout("at least two subsystems are required".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidLayout(format!("subsystem dimension {d} < 2")));
        }
        party_a.sort_unstable();
        party_a.dedup();
        if party_a.is_empty() || party_a.len() >= dims.len() {
            return Err(Error::InvalidLayout(
                "party A must be a strict, non-empty subset of the subsystems".into(),
            ));
        }
        if let Some(k) = party_a.iter().find(|&&k| k >= dims.len()) {
            return Err(Error::InvalidLayout(format!(
                "party A index {k} out of range for {} subsystems",
                dims.len()
            )));
        }
        Ok(Self { dims, party_a })
    }

    /// Two subsystems `A | B`.
    pub fn bipartite(dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::new(vec![dim_a, dim_b], vec![0])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn party_a(&self) -> &[usize] {
        &self.party_a
    }

    pub fn party_b(&self) -> Vec<usize> {
        (0..self.dims.len()).filter(|k| !self.party_a.contains(k)).collect()
    }

    pub fn in_party_a(&self, k: usize) -> bool {
        self.party_a.contains(&k)
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn dim_a(&self) -> usize {
        self.party_a.iter().map(|&k| self.dims[k]).product()
    }

    pub fn dim_b(&self) -> usize {
        self.total_dim() / self.dim_a()
    }

    pub fn with_party_a(&self, party_a: Vec<usize>) -> Result<Self> {
        Self::new(self.dims.clone(), party_a)
    }

    /// Layout of `self ⊗ other`, with party A being the union of both A parties.
    pub fn tensor(&self, other: &Self) -> Self {
        let offset = self.dims.len();
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut party_a = self.party_a.clone();
        party_a.extend(other.party_a.iter().map(|k| k + offset));
        Self { dims, party_a }
    }
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Splits every basis index into the part carried by `selected` subsystems
/// and the remainder, both expressed as offsets into the full index.
fn selected_offsets(dims: &[usize], selected: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let n: usize = dims.iter().product();
    (0..n)
        .map(|i| selected.iter().map(|&k| (i / st[k]) % dims[k] * st[k]).sum())
        .collect()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ai in 0..a.rows {
        for aj in 0..a.cols {
            let x = a[(ai, aj)];
            if x == ZERO {
                continue;
            }
            for bi in 0..b.rows {
                let r = ai * b.rows + bi;
                for bj in 0..b.cols {
                    out[(r, aj * b.cols + bj)] = x * b[(bi, bj)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

fn check_layout_dim(m: &ComplexMatrix, dims: &[usize]) -> Result<usize> {
    let n: usize = dims.iter().product();
    if !m.is_square() || m.rows != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix does not match subsystem dims {:?} (total {n})",
            m.rows, m.cols, dims
        )));
    }
    Ok(n)
}

/// Transposes every party-A tensor index: `<j,k|W^TA|l,s> = <l,k|W|j,s>`.
pub fn partial_transpose(rho: &ComplexMatrix, layout: &SubsystemLayout) -> Result<ComplexMatrix> {
    let n = check_layout_dim(rho, layout.dims())?;
    let a_part = selected_offsets(layout.dims(), layout.party_a());
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let (ia, ib) = (a_part[i], i - a_part[i]);
        for j in 0..n {
            let (ja, jb) = (a_part[j], j - a_part[j]);
            out[(ib + ja, jb + ia)] = rho[(i, j)];
        }
    }
    Ok(out)
}

/// Traces out every subsystem not listed in `keep`.
///
/// The result is indexed by the kept subsystems in ascending order.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let n = check_layout_dim(rho, dims)?;
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::InvalidParameter(
            "partial trace must keep at least one subsystem".into(),
        ));
    }
    if let Some(k) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::InvalidParameter(format!(
            "kept subsystem {k} out of range for {} subsystems",
            dims.len()
        )));
    }
    let st = strides(dims);
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let kst = strides(&kept_dims);
    let m: usize = kept_dims.iter().product();
    // (index in the reduced space, offset of the traced digits)
    let split: Vec<(usize, usize)> = (0..n)
        .map(|i| {
            let mut kept = 0;
            let mut kept_off = 0;
            for (pos, &k) in keep.iter().enumerate() {
                let digit = (i / st[k]) % dims[k];
                kept += digit * kst[pos];
                kept_off += digit * st[k];
            }
            (kept, i - kept_off)
        })
        .collect();
    let mut out = ComplexMatrix::zeros(m, m);
    for i in 0..n {
        let (ki, ti) = split[i];
        for j in 0..n {
            let (kj, tj) = split[j];
            if ti == tj {
                out[(ki, kj)] += rho[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Groups basis indices into the connected components of the sparsity graph
/// of `m`. Eigenvalues of a Hermitian matrix are the union of the block
/// spectra, which keeps the partial transpose of Fock-truncated states cheap.
fn components(m: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = m.rows;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if m[(i, j)] != ZERO || m[(j, i)] != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn block_eigenvalues(m: &ComplexMatrix, idx: &[usize], out: &mut Vec<f64>) {
    match idx.len() {
        1 => out.push(m[(idx[0], idx[0])].re),
        2 => {
            let a = m[(idx[0], idx[0])].re;
            let d = m[(idx[1], idx[1])].re;
            let b = m[(idx[0], idx[1])];
            let mean = 0.5 * (a + d);
            let rad = (0.5 * (a - d)).hypot(b.norm());
            out.push(mean - rad);
            out.push(mean + rad);
        }
        k => {
            let sub = DMatrix::from_fn(k, k, |i, j| m[(idx[i], idx[j])]);
            out.extend(SymmetricEigen::new(sub).eigenvalues.iter().copied());
        }
    }
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.check_hermitian()?;
    let mut eig = Vec::with_capacity(m.rows);
    for block in components(m) {
        block_eigenvalues(m, &block, &mut eig);
    }
    if eig.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Full spectral decomposition `m = V diag(w) V^dagger`, eigenvalues ascending
/// with matching eigenvector columns.
pub fn hermitian_eigh(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    m.check_hermitian()?;
    let eig = SymmetricEigen::new(m.to_nalgebra());
    let mut order: Vec<usize> = (0..m.rows).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(m.rows, m.rows, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Trace norm `sum |lambda_i|` of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|x| x.abs()).sum())
}

#[derive(Debug, Clone)]
pub struct Schmidt {
    /// Squared Schmidt coefficients, descending; length `min(dim_a, dim_b)`.
    pub coefficients: Vec<f64>,
    /// Party-A basis vectors (indexed by party-A subsystems in ascending order).
    pub left: Vec<Vec<C64>>,
    pub right: Vec<Vec<C64>>,
    /// Number of coefficients above [`SCHMIDT_CUTOFF`].
    pub rank: usize,
}

impl Schmidt {
    /// `sum_i sqrt(lambda_i) |left_i> |right_i>` in the `(A, B)` index order.
    pub fn reconstruct(&self) -> Vec<C64> {
        let da = self.left.first().map_or(0, Vec::len);
        let db = self.right.first().map_or(0, Vec::len);
        let mut psi = vec![ZERO; da * db];
        for (k, &lam) in self.coefficients.iter().enumerate() {
            let s = lam.sqrt();
            for a in 0..da {
                for b in 0..db {
                    psi[a * db + b] += self.left[k][a] * self.right[k][b] * s;
                }
            }
        }
        psi
    }
}

/// Reorders amplitudes into a `dim_a x dim_b` coefficient matrix.
pub(crate) fn bipartite_matrix(psi: &[C64], layout: &SubsystemLayout) -> (usize, usize, Vec<C64>) {
    let dims = layout.dims();
    let st = strides(dims);
    let a = layout.party_a();
    let b = layout.party_b();
    let a_dims: Vec<usize> = a.iter().map(|&k| dims[k]).collect();
    let b_dims: Vec<usize> = b.iter().map(|&k| dims[k]).collect();
    let (ast, bst) = (strides(&a_dims), strides(&b_dims));
    let (da, db) = (layout.dim_a(), layout.dim_b());
    let mut m = vec![ZERO; da * db];
    for (i, amp) in psi.iter().enumerate() {
        let ia: usize = a.iter().enumerate().map(|(p, &k)| (i / st[k]) % dims[k] * ast[p]).sum();
        let ib: usize = b.iter().enumerate().map(|(p, &k)| (i / st[k]) % dims[k] * bst[p]).sum();
        m[ia * db + ib] = *amp;
    }
    (da, db, m)
}

pub fn schmidt_decompose(psi: &[C64], layout: &SubsystemLayout) -> Result<Schmidt> {
    if psi.len() != layout.total_dim() {
        return Err(Error::DimensionMismatch(format!(
            "amplitude vector of length {} does not match dims {:?}",
            psi.len(),
            layout.dims()
        )));
    }
    let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm2.sqrt() - 1.0).abs() > NORM_TOL {
        return Err(Error::Unnormalized(norm2));
    }
    let (da, db, m) = bipartite_matrix(psi, layout);
    let svd = DMatrix::from_row_slice(da, db, &m).svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let k = da.min(db);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let coefficients: Vec<f64> = order.iter().map(|&i| svd.singular_values[i].powi(2)).collect();
    let left = order.iter().map(|&i| (0..da).map(|a| u[(a, i)]).collect()).collect();
    let right = order.iter().map(|&i| (0..db).map(|b| v_t[(i, b)]).collect()).collect();
    let rank = coefficients.iter().filter(|&&c| c > SCHMIDT_CUTOFF).count();
    Ok(Schmidt {
        coefficients,
        left,
        right,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell_density() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(s), ZERO, ZERO, c(s)])
    }

    #[test]
    fn kron_identity_and_basis() {
        assert_eq!(
            kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4)
        );
        let k = kron(
            &ComplexMatrix::from_real_diag(&[1.0, 0.0]),
            &ComplexMatrix::from_real_diag(&[0.0, 1.0]),
        );
        assert_eq!(k, ComplexMatrix::from_real_diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_of_bells_has_unit_trace() {
        let b = bell_density();
        let k = kron(&b, &b);
        assert_eq!(k.rows(), 16);
        // direct sum over the 16 diagonal entries
        let tr: f64 = (0..16).map(|i| k[(i, i)].re).sum();
        assert_abs_diff_eq!(tr, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let layout = SubsystemLayout::bipartite(2, 2).unwrap();
        let pt = partial_transpose(&bell_density(), &layout).unwrap();
        // hand computation: PT swaps |00><11| into |01><10|
        assert_abs_diff_eq!(pt[(1, 2)].re, 0.5, epsilon = 1e-15);
        assert_eq!(pt[(0, 3)], ZERO);
        let eig = hermitian_eigenvalues(&pt).unwrap();
        for (e, want) in eig.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert_abs_diff_eq!(*e, want, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(trace_norm_hermitian(&pt).unwrap(), 2.0, epsilon = 1e-14);
        assert_eq!(partial_transpose(&pt, &layout).unwrap(), bell_density());
    }

    #[test]
    fn product_state_partial_transpose_is_local_transpose() {
        let sa = ComplexMatrix::new(2, 2, vec![c(0.7), C64::new(0.1, 0.2), C64::new(0.1, -0.2), c(0.3)]).unwrap();
        let sb = ComplexMatrix::from_real_diag(&[0.4, 0.6]);
        let layout = SubsystemLayout::bipartite(2, 2).unwrap();
        let pt = partial_transpose(&kron(&sa, &sb), &layout).unwrap();
        let want = kron(&sa.transpose_for_test(), &sb);
        assert_eq!(pt, want);
        assert!(hermitian_eigenvalues(&pt).unwrap()[0] >= 0.0);
    }

    impl ComplexMatrix {
        fn transpose_for_test(&self) -> Self {
            Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
        }
    }

    #[test]
    fn simple_spectra() {
        let d = ComplexMatrix::from_real_diag(&[3.0, 1.0, 2.0]);
        assert_eq!(hermitian_eigenvalues(&d).unwrap(), vec![1.0, 2.0, 3.0]);
        let x = ComplexMatrix::new(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap();
        let e = hermitian_eigenvalues(&x).unwrap();
        assert_abs_diff_eq!(e[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1], 1.0, epsilon = 1e-15);
        let mixed = ComplexMatrix::identity(4).scale(c(0.25));
        assert_abs_diff_eq!(trace_norm_hermitian(&mixed).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::new(2, 2, vec![ZERO, ONE, ZERO, ZERO]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn dimension_errors() {
        let layout = SubsystemLayout::bipartite(2, 3).unwrap();
        assert!(matches!(
            partial_transpose(&ComplexMatrix::identity(4), &layout),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(ComplexMatrix::new(2, 2, vec![ONE; 3]).is_err());
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![C64::new(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn layout_validation() {
        assert!(SubsystemLayout::new(vec![2, 2], vec![]).is_err());
        assert!(SubsystemLayout::new(vec![2, 2], vec![0, 1]).is_err());
        assert!(SubsystemLayout::new(vec![2, 1], vec![0]).is_err());
        assert!(SubsystemLayout::new(vec![2, 2], vec![2]).is_err());
        let l = SubsystemLayout::new(vec![2, 3, 4], vec![2, 0]).unwrap();
        assert_eq!(l.party_a(), &[0, 2]);
        assert_eq!(l.dim_a(), 8);
        assert_eq!(l.dim_b(), 3);
    }

    #[test]
    fn partial_trace_examples() {
        let dims = [2, 2];
        let rb = partial_trace(&bell_density(), &dims, &[0]).unwrap();
        assert_abs_diff_eq!(rb[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rb[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert_eq!(rb[(0, 1)], ZERO);

        let sa = ComplexMatrix::from_real_diag(&[0.25, 0.75]);
        let sb = ComplexMatrix::new(3, 3, {
            let mut v = vec![ZERO; 9];
            v[0] = c(0.5);
            v[4] = c(0.3);
            v[8] = c(0.2);
            v[1] = C64::new(0.05, 0.01);
            v[3] = C64::new(0.05, -0.01);
            v
        })
        .unwrap();
        let red = partial_trace(&kron(&sa, &sb), &[2, 3], &[1]).unwrap();
        for (x, y) in red.as_slice().iter().zip(sb.as_slice()) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-15);
        }
        assert!(partial_trace(&bell_density(), &dims, &[]).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let layout = SubsystemLayout::bipartite(2, 2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = schmidt_decompose(&[c(s), ZERO, ZERO, c(s)], &layout).unwrap();
        assert_abs_diff_eq!(bell.coefficients[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(bell.coefficients[1], 0.5, epsilon = 1e-14);

        let psi = [c(0.1f64.sqrt()), ZERO, ZERO, c(0.9f64.sqrt())];
        let sch = schmidt_decompose(&psi, &layout).unwrap();
        assert_abs_diff_eq!(sch.coefficients[0], 0.9, epsilon = 1e-14);
        assert_abs_diff_eq!(sch.coefficients[1], 0.1, epsilon = 1e-14);
        let back = sch.reconstruct();
        let overlap: C64 = back.iter().zip(&psi).map(|(a, b)| a.conj() * b).sum();
        assert!(overlap.norm() > 1.0 - 1e-12);

        let prod = schmidt_decompose(&[ONE, ZERO, ZERO, ZERO], &layout).unwrap();
        assert_eq!(prod.rank, 1);
        assert_abs_diff_eq!(prod.coefficients[0], 1.0, epsilon = 1e-15);

        assert!(matches!(
            schmidt_decompose(&[c(2.0), ZERO, ZERO, ZERO], &layout),
            Err(Error::Unnormalized(_))
        ));
    }

    #[test]
    fn schmidt_respects_party_mask() {
        // |0>_0 |1>_1 |0>_2 with A = {1}: product across A|B
        let layout = SubsystemLayout::new(vec![2, 2, 2], vec![1]).unwrap();
        let mut psi = vec![ZERO; 8];
        psi[2] = ONE;
        let s = schmidt_decompose(&psi, &layout).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.coefficients.len(), 2);
    }
}
