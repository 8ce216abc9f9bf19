//! State carriers and constructors: Bell and Schmidt-form pure states,
//! Fock-truncated two-mode squeezed vacuum, and seeded random samplers.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, kron, partial_trace, schmidt_decompose, ComplexMatrix, Schmidt, SubsystemLayout, C64, NORM_TOL, ONE, ZERO,
};

/// Minimum-eigenvalue tolerance for density matrices.
pub const PSD_TOL: f64 = 1e-10;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Largest probability weight a Fock truncation may discard.
pub const MAX_TRUNCATION_DEFICIT: f64 = 0.01;
/// Target tail weight for the default Fock cutoff.
pub const DEFAULT_TAIL: f64 = 1e-12;
pub const MAX_DEFAULT_CUTOFF: usize = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    layout: SubsystemLayout,
    truncation_deficit: f64,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, layout: SubsystemLayout) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {:?}",
                amplitudes.len(),
                layout.dims()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm2.sqrt() - 1.0).abs() > NORM_TOL {
            return Err(Error::Unnormalized(norm2));
        }
        Ok(Self {
            amplitudes,
            layout,
            truncation_deficit: 0.0,
        })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>, layout: SubsystemLayout) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Self::new(amplitudes, layout)
    }

    pub fn with_truncation_deficit(mut self, deficit: f64) -> Self {
        self.truncation_deficit = deficit;
        self
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    /// Same amplitudes, different party-A mask.
    pub fn with_party_a(&self, party_a: Vec<usize>) -> Result<Self> {
        Ok(Self {
            amplitudes: self.amplitudes.clone(),
            layout: self.layout.with_party_a(party_a)?,
            truncation_deficit: self.truncation_deficit,
        })
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes),
            layout: self.layout.clone(),
            truncation_deficit: self.truncation_deficit,
        }
    }

    pub fn schmidt(&self) -> Result<Schmidt> {
        schmidt_decompose(&self.amplitudes, &self.layout)
    }

    /// Reduced density matrix of party A.
    pub fn reduced_a(&self) -> Result<ComplexMatrix> {
        let (da, db, m) = linalg::bipartite_matrix(&self.amplitudes, &self.layout);
        Ok(ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|b| m[i * db + b] * m[j * db + b].conj()).sum()
        }))
    }

    /// Applies a Kraus operator on one subsystem and renormalizes.
    ///
    /// Returns the branch probability `||K psi||^2` with the post-measurement
    /// state; `None` for a zero-probability branch.
    pub fn apply_local(&self, kraus: &ComplexMatrix, subsystem: usize) -> Result<(f64, Option<Self>)> {
        let dims = self.layout.dims();
        if subsystem >= dims.len() {
            return Err(Error::InvalidParameter(format!("subsystem {subsystem} out of range")));
        }
        let d = dims[subsystem];
        if kraus.rows() != d || kraus.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator on a {d}-dimensional subsystem",
                kraus.rows(),
                kraus.cols()
            )));
        }
        let stride = linalg::strides(dims)[subsystem];
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (i, slot) in out.iter_mut().enumerate() {
            let digit = (i / stride) % d;
            let base = i - digit * stride;
            *slot = (0..d)
                .map(|k| kraus[(digit, k)] * self.amplitudes[base + k * stride])
                .sum();
        }
        let p: f64 = out.iter().map(|z| z.norm_sqr()).sum();
        if p <= f64::EPSILON {
            return Ok((p, None));
        }
        let state = Self::normalized(out, self.layout.clone())?.with_truncation_deficit(self.truncation_deficit);
        Ok((p, Some(state)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    layout: SubsystemLayout,
    truncation_deficit: f64,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix, layout: SubsystemLayout) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != layout.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for dims {:?}",
                matrix.rows(),
                matrix.cols(),
                layout.dims()
            )));
        }
        let eig = linalg::hermitian_eigenvalues(&matrix)?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        if eig[0] < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {:e}", eig[0])));
        }
        Ok(Self {
            matrix,
            layout,
            truncation_deficit: 0.0,
        })
    }

    pub(crate) fn from_parts(matrix: ComplexMatrix, layout: SubsystemLayout, truncation_deficit: f64) -> Self {
        Self {
            matrix,
            layout,
            truncation_deficit,
        }
    }

    pub fn with_truncation_deficit(mut self, deficit: f64) -> Self {
        self.truncation_deficit = deficit;
        self
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub fn with_party_a(&self, party_a: Vec<usize>) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.clone(),
            layout: self.layout.with_party_a(party_a)?,
            truncation_deficit: self.truncation_deficit,
        })
    }

    /// `Tr rho^2`
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `self ⊗ other`; party A of the product is the union of both A parties.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: kron(&self.matrix, &other.matrix),
            layout: self.layout.tensor(&other.layout),
            truncation_deficit: self.truncation_deficit + other.truncation_deficit,
        }
    }

    /// Convex combination `sum_i p_i rho_i` over states sharing one layout.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let total: f64 = parts.iter().map(|(p, _)| p).sum();
        if parts.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "mixture weights must be non-negative and sum to 1 (sum {total})"
            )));
        }
        let mut acc = ComplexMatrix::zeros(first.matrix.rows(), first.matrix.cols());
        for (p, rho) in parts {
            if rho.layout != first.layout {
                return Err(Error::DimensionMismatch(
                    "mixture components have different layouts".into(),
                ));
            }
            acc = acc.add(&rho.matrix.scale(C64::new(*p, 0.0)))?;
        }
        Ok(Self {
            matrix: acc,
            layout: first.layout.clone(),
            truncation_deficit: parts.iter().map(|(p, r)| p * r.truncation_deficit).sum(),
        })
    }

    /// Reduced state on `keep`; `party_a` lists the kept subsystems (in the
    /// original numbering) that form party A of the result.
    pub fn reduce(&self, keep: &[usize], party_a: &[usize]) -> Result<Self> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let dims: Vec<usize> = keep.iter().map(|&k| self.layout.dims()[k]).collect();
        let a: Vec<usize> = party_a
            .iter()
            .map(|k| {
                keep.iter()
                    .position(|x| x == k)
                    .ok_or_else(|| Error::InvalidParameter(format!("party A subsystem {k} is traced out")))
            })
            .collect::<Result<_>>()?;
        let layout = SubsystemLayout::new(dims, a)?;
        let m = partial_trace(&self.matrix, self.layout.dims(), &keep)?;
        Ok(Self::from_parts(m, layout, self.truncation_deficit))
    }
}

/// `(|00> + |11>)/sqrt 2` on dims `(2, 2)`, party A = subsystem 0.
pub fn bell_state() -> PureState {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    PureState::new(
        vec![s, ZERO, ZERO, s],
        SubsystemLayout::bipartite(2, 2).expect("valid layout"),
    )
    .expect("normalized")
}

/// `(|0..0> + |1..1>)/sqrt 2` on `n` qubits, party A = subsystem 0.
pub fn ghz_state(n: usize) -> Result<PureState> {
    let layout = SubsystemLayout::new(vec![2; n], vec![0])?;
    let mut amps = vec![ZERO; layout.total_dim()];
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[0] = s;
    amps[layout.total_dim() - 1] = s;
    PureState::new(amps, layout)
}

pub(crate) fn check_distribution(lambda: &[f64]) -> Result<()> {
    if lambda.is_empty() {
        return Err(Error::InvalidDistribution("empty coefficient list".into()));
    }
    if lambda.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
        return Err(Error::InvalidDistribution(
            "coefficients must be finite and non-negative".into(),
        ));
    }
    let total: f64 = lambda.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDistribution(format!(
            "coefficients sum to {total}, not 1"
        )));
    }
    Ok(())
}

/// `sum_a sqrt(lambda_a) |a a>` on dims `(dim_a, dim_b)`.
pub fn pure_from_schmidt(lambda: &[f64], dim_a: usize, dim_b: usize) -> Result<PureState> {
    check_distribution(lambda)?;
    if lambda.iter().any(|&l| l <= 0.0) {
        return Err(Error::InvalidDistribution(
            "Schmidt coefficients must be strictly positive".into(),
        ));
    }
    if lambda.len() > dim_a.min(dim_b) {
        return Err(Error::InvalidDistribution(format!(
            "{} Schmidt coefficients exceed min({dim_a}, {dim_b})",
            lambda.len()
        )));
    }
    let layout = SubsystemLayout::bipartite(dim_a, dim_b)?;
    let mut amps = vec![ZERO; dim_a * dim_b];
    for (k, &l) in lambda.iter().enumerate() {
        amps[k * dim_b + k] = C64::new(l.sqrt(), 0.0);
    }
    PureState::normalized(amps, layout)
}

/// Two-mode squeezed vacuum parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TmsvsSpec {
    r: f64,
    chi: f64,
    cutoff: usize,
}

impl TmsvsSpec {
    /// Squeezing `r` with the default cutoff.
    pub fn new(r: f64) -> Result<Self> {
        Self::from_chi(r.tanh()).map(|s| Self { r, ..s })
    }

    pub fn with_cutoff(r: f64, cutoff: usize) -> Result<Self> {
        Self::new(r)?.set_cutoff(cutoff)
    }

    /// Builds the spec from `chi = tanh r` directly, which keeps products of
    /// `chi` exact under swapping.
    pub fn from_chi(chi: f64) -> Result<Self> {
        if !(chi > 0.0 && chi < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "chi = tanh r must lie in (0, 1), got {chi}"
            )));
        }
        Ok(Self {
            r: chi.atanh(),
            chi,
            cutoff: default_cutoff(chi),
        })
    }

    pub fn set_cutoff(mut self, cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidParameter("Fock cutoff must be >= 1".into()));
        }
        self.cutoff = cutoff;
        Ok(self)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Probability weight beyond the cutoff, `chi^(2(cutoff+1))`.
    pub fn truncation_deficit(&self) -> f64 {
        self.chi.powf(2.0 * (self.cutoff as f64 + 1.0))
    }
}

/// Smallest `n_max >= 1` with `chi^(2(n_max+1)) < 1e-12`, capped at 128.
pub fn default_cutoff(chi: f64) -> usize {
    let mut n = 1usize;
    while n < MAX_DEFAULT_CUTOFF && chi.powf(2.0 * (n as f64 + 1.0)) >= DEFAULT_TAIL {
        n += 1;
    }
    n
}

/// Fock-truncated `sqrt(1-chi^2) sum_n chi^n |n n>`, renormalized to unit norm.
pub fn tmsvs_truncated(spec: &TmsvsSpec) -> Result<PureState> {
    let deficit = spec.truncation_deficit();
    if deficit > MAX_TRUNCATION_DEFICIT {
        return Err(Error::TruncationTooLarge {
            cutoff: spec.cutoff,
            deficit,
            limit: MAX_TRUNCATION_DEFICIT,
        });
    }
    let d = spec.cutoff + 1;
    let layout = SubsystemLayout::bipartite(d, d)?;
    let pref = (1.0 - spec.chi * spec.chi).sqrt();
    let mut amps = vec![ZERO; d * d];
    let mut c = pref;
    for n in 0..d {
        amps[n * d + n] = C64::new(c, 0.0);
        c *= spec.chi;
    }
    Ok(PureState::normalized(amps, layout)?.with_truncation_deficit(deficit))
}

/// Seedable counter-based generator for substream `index` of `master_seed`.
///
/// Samples drawn from distinct indices are independent of evaluation order,
/// so parallel scans are reproducible regardless of thread count.
pub fn sample_rng(master_seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

fn complex_gaussian(rng: &mut ChaCha20Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar-random pure state via normalized complex Gaussian amplitudes.
pub fn random_haar_pure(layout: &SubsystemLayout, seed: u64) -> PureState {
    random_haar_pure_stream(layout, seed, 0)
}

pub fn random_haar_pure_stream(layout: &SubsystemLayout, seed: u64, index: u64) -> PureState {
    let mut rng = sample_rng(seed, index);
    let amps = (0..layout.total_dim()).map(|_| complex_gaussian(&mut rng)).collect();
    PureState::normalized(amps, layout.clone()).expect("Gaussian vector is non-zero")
}

/// Rank-`rank` random density matrix `G G^dagger / Tr(G G^dagger)`.
pub fn random_density_matrix(layout: &SubsystemLayout, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_matrix_stream(layout, rank, seed, 0)
}

pub fn random_density_matrix_stream(
    layout: &SubsystemLayout,
    rank: usize,
    seed: u64,
    index: u64,
) -> Result<DensityMatrix> {
    let n = layout.total_dim();
    if rank < 1 || rank > n {
        return Err(Error::InvalidParameter(format!("rank {rank} outside 1..={n}")));
    }
    let mut rng = sample_rng(seed, index);
    let g: Vec<C64> = (0..n * rank).map(|_| complex_gaussian(&mut rng)).collect();
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: C64 = (0..rank).map(|k| g[i * rank + k] * g[j * rank + k].conj()).sum();
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    let tr = m.trace().re;
    let m = m.scale(C64::new(1.0 / tr, 0.0));
    Ok(DensityMatrix::from_parts(m, layout.clone(), 0.0))
}

/// Computational basis ket `|k>` in dimension `d`.
pub fn basis_ket(d: usize, k: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d];
    v[k] = ONE;
    v
}

/// Either kind of state, as read from a state file.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn layout(&self) -> &SubsystemLayout {
        match self {
            State::Pure(p) => p.layout(),
            State::Mixed(m) => m.layout(),
        }
    }

    pub fn truncation_deficit(&self) -> f64 {
        match self {
            State::Pure(p) => p.truncation_deficit(),
            State::Mixed(m) => m.truncation_deficit(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.density(),
            State::Mixed(m) => m.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

/// JSON schema for state files. Complex numbers are `[re, im]` pairs and
/// matrices are flattened row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    #[serde(rename = "partyA")]
    pub party_a: Vec<usize>,
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub truncation_deficit: f64,
}

fn to_pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

impl From<&State> for StateFile {
    fn from(state: &State) -> Self {
        let layout = state.layout();
        let (kind, amplitudes, matrix) = match state {
            State::Pure(p) => (StateKind::Pure, Some(to_pairs(p.amplitudes())), None),
            State::Mixed(m) => (StateKind::Mixed, None, Some(to_pairs(m.matrix().as_slice()))),
        };
        Self {
            dims: layout.dims().to_vec(),
            party_a: layout.party_a().to_vec(),
            kind,
            amplitudes,
            matrix,
            truncation_deficit: state.truncation_deficit(),
        }
    }
}

impl TryFrom<StateFile> for State {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<Self> {
        let layout = SubsystemLayout::new(file.dims, file.party_a)?;
        let state = match file.kind {
            StateKind::Pure => {
                let amps = file
                    .amplitudes
                    .ok_or_else(|| Error::InvalidState("pure state file needs \"amplitudes\"".into()))?;
                State::Pure(PureState::new(from_pairs(&amps), layout)?.with_truncation_deficit(file.truncation_deficit))
            }
            StateKind::Mixed => {
                let entries = file
                    .matrix
                    .ok_or_else(|| Error::InvalidState("mixed state file needs \"matrix\"".into()))?;
                let n = layout.total_dim();
                let m = ComplexMatrix::new(n, n, from_pairs(&entries))?;
                State::Mixed(DensityMatrix::new(m, layout)?.with_truncation_deficit(file.truncation_deficit))
            }
        };
        Ok(state)
    }
}
