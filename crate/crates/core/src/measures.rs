//! Negativity-family entanglement measures and the pure-state measures used
//! by the swapping rules.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, partial_transpose};
use crate::states::{check_distribution, DensityMatrix, PureState, State, PSD_TOL};

/// Spectrum of `rho^{T_A}` with the quantities every negativity measure needs.
#[derive(Debug, Clone, PartialEq)]
pub struct PtSpectrum {
    pub eigenvalues: Vec<f64>,
    pub trace_norm: f64,
}

impl PtSpectrum {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        let pt = partial_transpose(rho.matrix(), rho.layout())?;
        let eigenvalues = hermitian_eigenvalues(&pt)?;
        let trace_norm = eigenvalues.iter().map(|x| x.abs()).sum();
        Ok(Self {
            eigenvalues,
            trace_norm,
        })
    }

    /// Closed form for pure states: the partial transpose of
    /// `sum sqrt(l_i l_j) |ii><jj|` has eigenvalues `l_i` and
    /// `+-sqrt(l_i l_j)` for `i < j`, padded with zeros. Only the Schmidt
    /// decomposition is computed, so large truncated states stay cheap.
    pub fn of_pure(psi: &PureState) -> Result<Self> {
        let lambda = psi.schmidt()?.coefficients;
        let total = lambda.len() * lambda.len();
        let mut eigenvalues = Vec::with_capacity(total.max(psi.layout().total_dim()));
        for (i, &li) in lambda.iter().enumerate() {
            eigenvalues.push(li);
            for &lj in &lambda[i + 1..] {
                let s = (li * lj).sqrt();
                eigenvalues.push(s);
                eigenvalues.push(-s);
            }
        }
        eigenvalues.resize(psi.layout().total_dim(), 0.0);
        eigenvalues.sort_by(f64::total_cmp);
        let root_sum: f64 = lambda.iter().map(|l| l.sqrt()).sum();
        Ok(Self {
            eigenvalues,
            trace_norm: root_sum * root_sum,
        })
    }

    pub fn of_state(state: &State) -> Result<Self> {
        match state {
            State::Pure(p) => Self::of_pure(p),
            State::Mixed(r) => Self::of(r),
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn is_ppt(&self) -> bool {
        self.min_eigenvalue() >= -PSD_TOL
    }

    /// `(||rho^TA||_1 - 1)/2`, exactly zero for PPT states.
    pub fn negativity(&self) -> f64 {
        if self.is_ppt() {
            0.0
        } else {
            (0.5 * (self.trace_norm - 1.0)).max(0.0)
        }
    }
}

pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    Ok(PtSpectrum::of(rho)?.negativity())
}

/// `log2 ||rho^TA||_1`
pub fn log_negativity(rho: &DensityMatrix) -> Result<f64> {
    let s = PtSpectrum::of(rho)?;
    Ok(if s.is_ppt() { 0.0 } else { s.trace_norm.log2() })
}

/// `ln ||rho^TA||_1`; for the squeezed vacuum this equals `2r`.
pub fn log_negativity_natural(rho: &DensityMatrix) -> Result<f64> {
    let s = PtSpectrum::of(rho)?;
    Ok(if s.is_ppt() { 0.0 } else { s.trace_norm.ln() })
}

pub fn is_ppt(rho: &DensityMatrix) -> Result<bool> {
    Ok(PtSpectrum::of(rho)?.is_ppt())
}

/// `N / (N + 1)`
pub fn ratio_from_negativity(n: f64) -> f64 {
    n / (n + 1.0)
}

/// Inverse of [`ratio_from_negativity`].
pub fn negativity_from_ratio(chi: f64) -> f64 {
    chi / (1.0 - chi)
}

pub fn ratio_negativity(rho: &DensityMatrix) -> Result<f64> {
    negativity(rho).map(ratio_from_negativity)
}

pub fn alpha_ratio_negativity(rho: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(ratio_negativity(rho)?.powf(alpha))
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must be a positive finite number, got {alpha}"
        )))
    }
}

/// Closed form from Schmidt coefficients:
/// `((sum sqrt l)^2 - 1) / ((sum sqrt l)^2 + 1)`.
pub fn ratio_negativity_pure(lambda: &[f64]) -> Result<f64> {
    check_distribution(lambda)?;
    let s: f64 = lambda.iter().map(|l| l.sqrt()).sum();
    let t = s * s;
    Ok((t - 1.0) / (t + 1.0))
}

/// `sqrt(2 (1 - Tr rho_A^2))` for a bipartite pure state.
pub fn concurrence_pure(psi: &PureState) -> Result<f64> {
    let ra = psi.reduced_a()?;
    let purity: f64 = ra.as_slice().iter().map(|z| z.norm_sqr()).sum();
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// `d (prod lambda)^(1/d)`; zero when fewer than `d` coefficients are
/// non-zero.
pub fn g_concurrence_pure(lambda: &[f64], d: usize) -> Result<f64> {
    check_distribution(lambda)?;
    if d < 2 || lambda.len() > d {
        return Err(Error::InvalidParameter(format!(
            "{} Schmidt coefficients for local dimension {d}",
            lambda.len()
        )));
    }
    if lambda.len() < d || lambda.contains(&0.0) {
        return Ok(0.0);
    }
    let mean_log = lambda.iter().map(|l| l.ln()).sum::<f64>() / d as f64;
    Ok(d as f64 * mean_log.exp())
}

/// Singlet conversion probability `2 lambda_min` of a two-qubit pure state.
pub fn scp_pure_qubit(lambda: &[f64]) -> Result<f64> {
    check_distribution(lambda)?;
    match lambda.len() {
        1 => Ok(0.0),
        2 => Ok(2.0 * lambda[0].min(lambda[1])),
        k => Err(Error::Unsupported(format!(
            "singlet conversion probability needs a qubit pair, got {k} Schmidt coefficients"
        ))),
    }
}

/// Why a candidate `f` fails the f-negativity requirements.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum FViolation {
    NonZeroAtOrigin { value: f64 },
    NotStrictlyIncreasing { x0: f64, x1: f64, f0: f64, f1: f64 },
    NonFinite { x: f64 },
}

impl fmt::Display for FViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FViolation::NonZeroAtOrigin { value } => write!(f, "f(0) = {value} != 0"),
            FViolation::NotStrictlyIncreasing { x0, x1, f0, f1 } => {
                write!(f, "f({x0}) = {f0} >= f({x1}) = {f1}")
            }
            FViolation::NonFinite { x } => write!(f, "f({x}) is not finite"),
        }
    }
}

/// 0 followed by 1023 log-spaced points on `[1e-8, 100]`.
pub fn default_f_grid() -> Vec<f64> {
    let (lo, hi) = (1e-8f64.ln(), 100f64.ln());
    std::iter::once(0.0)
        .chain((0..1023).map(|i| (lo + (hi - lo) * i as f64 / 1022.0).exp()))
        .collect()
}

/// Checks `f(0) = 0` (to 1e-12) and strict increase on an ascending grid.
pub fn validate_f(f: impl Fn(f64) -> f64, grid: &[f64]) -> Result<(), FViolation> {
    let f0 = f(0.0);
    if !f0.is_finite() {
        return Err(FViolation::NonFinite { x: 0.0 });
    }
    if f0.abs() > 1e-12 {
        return Err(FViolation::NonZeroAtOrigin { value: f0 });
    }
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    if let Some((&x, _)) = grid.iter().zip(&values).find(|(_, v)| !v.is_finite()) {
        return Err(FViolation::NonFinite { x });
    }
    for k in 1..grid.len() {
        if values[k] <= values[k - 1] {
            return Err(FViolation::NotStrictlyIncreasing {
                x0: grid[k - 1],
                x1: grid[k],
                f0: values[k - 1],
                f1: values[k],
            });
        }
    }
    Ok(())
}

/// A validated generating function for an f-negativity.
///
/// The wrapped function must be side-effect free.
#[derive(Clone)]
pub struct MonotoneFn {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl MonotoneFn {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self, FViolation> {
        validate_f(&f, &default_f_grid())?;
        Ok(Self {
            name: name.into(),
            f: Arc::new(f),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn power(xi: f64) -> Result<Self, FViolation> {
        Self::new(format!("x^{xi}"), move |x| x.powf(xi))
    }

    /// `x / (x + 1)`, which generates the ratio negativity.
    pub fn ratio() -> Self {
        Self::new("x/(x+1)", ratio_from_negativity).expect("x/(x+1) is a valid generator")
    }
}

impl fmt::Debug for MonotoneFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneFn").field("name", &self.name).finish()
    }
}

/// `f(N(rho))`
pub fn f_negativity(f: &MonotoneFn, rho: &DensityMatrix) -> Result<f64> {
    Ok(f.eval(negativity(rho)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Negativity,
    LogNegativity,
    Ratio,
    AlphaRatio,
    Concurrence,
    GConcurrence,
    Scp,
    CustomF,
}

impl MeasureKind {
    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Negativity => "negativity",
            MeasureKind::LogNegativity => "log_negativity",
            MeasureKind::Ratio => "ratio",
            MeasureKind::AlphaRatio => "alpha_ratio",
            MeasureKind::Concurrence => "concurrence",
            MeasureKind::GConcurrence => "g_concurrence",
            MeasureKind::Scp => "scp",
            MeasureKind::CustomF => "custom_f",
        }
    }

    /// Measures that need a pure bipartite input.
    pub fn pure_only(self) -> bool {
        matches!(
            self,
            MeasureKind::Concurrence | MeasureKind::GConcurrence | MeasureKind::Scp
        )
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "negativity" => MeasureKind::Negativity,
            "log_negativity" | "log-negativity" => MeasureKind::LogNegativity,
            "ratio" => MeasureKind::Ratio,
            "alpha_ratio" | "alpha-ratio" => MeasureKind::AlphaRatio,
            "concurrence" => MeasureKind::Concurrence,
            "g_concurrence" | "g-concurrence" => MeasureKind::GConcurrence,
            "scp" => MeasureKind::Scp,
            "custom_f" | "custom-f" => MeasureKind::CustomF,
            other => return Err(Error::InvalidParameter(format!("unknown measure '{other}'"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    pub alpha: Option<f64>,
    pub f: Option<MonotoneFn>,
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind) -> Self {
        Self {
            kind,
            alpha: None,
            f: None,
        }
    }

    pub fn alpha_ratio(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            kind: MeasureKind::AlphaRatio,
            alpha: Some(alpha),
            f: None,
        })
    }

    pub fn custom(f: MonotoneFn) -> Self {
        Self {
            kind: MeasureKind::CustomF,
            alpha: None,
            f: Some(f),
        }
    }
}

/// Serialized form of one measure evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub measure: MeasureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub value: f64,
    pub trace_norm: f64,
    pub ppt: bool,
    pub truncation_deficit: f64,
}

fn schmidt_of(state: &State, kind: MeasureKind) -> Result<(Vec<f64>, usize)> {
    match state {
        State::Pure(p) => {
            let s = p.schmidt()?;
            let d = p.layout().dim_a().min(p.layout().dim_b());
            let total: f64 = s.coefficients.iter().sum();
            let lambda = s.coefficients.iter().map(|c| c / total).collect();
            Ok((lambda, d))
        }
        State::Mixed(_) => Err(Error::Unsupported(format!(
            "{kind} is defined here for pure states only"
        ))),
    }
}

/// Evaluates one measure; the partial-transpose spectrum is always reported.
pub fn evaluate(spec: &MeasureSpec, state: &State) -> Result<MeasureReport> {
    let pt = PtSpectrum::of_state(state)?;
    let n = pt.negativity();
    let value = match spec.kind {
        MeasureKind::Negativity => n,
        MeasureKind::LogNegativity => {
            if pt.is_ppt() {
                0.0
            } else {
                pt.trace_norm.log2()
            }
        }
        MeasureKind::Ratio => ratio_from_negativity(n),
        MeasureKind::AlphaRatio => {
            let alpha = spec
                .alpha
                .ok_or_else(|| Error::InvalidParameter("alpha_ratio needs alpha".into()))?;
            check_alpha(alpha)?;
            ratio_from_negativity(n).powf(alpha)
        }
        MeasureKind::CustomF => {
            let f = spec
                .f
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("custom_f needs a function".into()))?;
            f.eval(n)
        }
        MeasureKind::Concurrence => match state {
            State::Pure(p) => concurrence_pure(p)?,
            State::Mixed(_) => return Err(Error::Unsupported("concurrence of a mixed state".into())),
        },
        MeasureKind::GConcurrence => {
            let (lambda, d) = schmidt_of(state, spec.kind)?;
            let nonzero: Vec<f64> = lambda.into_iter().filter(|&l| l > 0.0).collect();
            let total: f64 = nonzero.iter().sum();
            let nonzero: Vec<f64> = nonzero.iter().map(|l| l / total).collect();
            g_concurrence_pure(&nonzero, d)?
        }
        MeasureKind::Scp => {
            let (lambda, d) = schmidt_of(state, spec.kind)?;
            if d != 2 {
                return Err(Error::Unsupported(format!(
                    "singlet conversion probability needs local dimension 2, got {d}"
                )));
            }
            scp_pure_qubit(&lambda)?
        }
    };
    Ok(MeasureReport {
        measure: spec.kind,
        alpha: spec.alpha.filter(|_| spec.kind == MeasureKind::AlphaRatio),
        value,
        trace_norm: pt.trace_norm,
        ppt: pt.is_ppt(),
        truncation_deficit: state.truncation_deficit(),
    })
}
