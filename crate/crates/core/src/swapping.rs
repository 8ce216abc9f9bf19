//! Entanglement swapping rules for 1D chains and the characteristic length.
//!
//! Each supported protocol multiplies one native measure:
//!
//! | link resource        | measure                   |
//! |----------------------|---------------------------|
//! | pure qubit pair      | concurrence, SCP          |
//! | pure qudit pair      | G-concurrence             |
//! | two-mode squeezed    | ratio / alpha-ratio negativity |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{
    alpha_ratio_negativity, check_alpha, g_concurrence_pure, ratio_negativity, scp_pure_qubit, MeasureKind,
};
use crate::report::serde_extended_f64;
use crate::states::{check_distribution, tmsvs_truncated, TmsvsSpec};

/// Tolerance for the canonical qudit Schmidt vector search.
pub const BISECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinkResource {
    /// Two-qubit pure state with Schmidt coefficients `lambda`.
    QubitPure { lambda: [f64; 2] },
    /// `d x d` pure state with Schmidt coefficients `lambda` (length `d`).
    QuditPure { lambda: Vec<f64> },
    /// Two-mode squeezed vacuum with squeezing `r`.
    Tmsvs { r: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    Qubit,
    Qudit,
    Tmsvs,
}

impl LinkKind {
    /// The measure each swapping rule multiplies by default.
    pub fn native_measure(self) -> MeasureKind {
        match self {
            LinkKind::Qubit => MeasureKind::Concurrence,
            LinkKind::Qudit => MeasureKind::GConcurrence,
            LinkKind::Tmsvs => MeasureKind::Ratio,
        }
    }
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

impl LinkResource {
    pub fn qubit(lambda: [f64; 2]) -> Result<Self> {
        check_distribution(&lambda)?;
        let v = sorted_desc(lambda.to_vec());
        Ok(LinkResource::QubitPure { lambda: [v[0], v[1]] })
    }

    /// Qubit link with the given concurrence.
    pub fn qubit_from_concurrence(c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::InvalidParameter(format!("concurrence {c} outside [0, 1]")));
        }
        Ok(LinkResource::QubitPure {
            lambda: qubit_schmidt_from_concurrence(c),
        })
    }

    pub fn qudit(lambda: Vec<f64>) -> Result<Self> {
        check_distribution(&lambda)?;
        if lambda.len() < 2 {
            return Err(Error::InvalidParameter("qudit link needs local dimension >= 2".into()));
        }
        Ok(LinkResource::QuditPure {
            lambda: sorted_desc(lambda),
        })
    }

    pub fn tmsvs(r: f64) -> Result<Self> {
        if !(r > 0.0) || r.is_nan() {
            return Err(Error::InvalidParameter(format!("squeezing must be positive, got {r}")));
        }
        Ok(LinkResource::Tmsvs { r })
    }

    pub fn kind(&self) -> LinkKind {
        match self {
            LinkResource::QubitPure { .. } => LinkKind::Qubit,
            LinkResource::QuditPure { .. } => LinkKind::Qudit,
            LinkResource::Tmsvs { .. } => LinkKind::Tmsvs,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LinkResource::QubitPure { lambda } => check_distribution(lambda),
            LinkResource::QuditPure { lambda } => {
                check_distribution(lambda)?;
                if lambda.len() < 2 {
                    return Err(Error::InvalidParameter("qudit link needs local dimension >= 2".into()));
                }
                Ok(())
            }
            LinkResource::Tmsvs { r } if *r > 0.0 => Ok(()),
            LinkResource::Tmsvs { r } => Err(Error::InvalidParameter(format!("squeezing must be positive, got {r}"))),
        }
    }

    /// Value of the native measure (concurrence, G-concurrence or `tanh r`).
    pub fn native_value(&self) -> f64 {
        match self {
            LinkResource::QubitPure { lambda } => 2.0 * (lambda[0] * lambda[1]).sqrt(),
            LinkResource::QuditPure { lambda } => g_concurrence_pure(lambda, lambda.len()).unwrap_or(0.0),
            LinkResource::Tmsvs { r } => r.tanh(),
        }
    }

    /// Value of `measure` on this link, if the pairing is multiplicative
    /// under the kind's swapping rule.
    pub fn measure_value(&self, measure: MeasureKind, alpha: Option<f64>) -> Result<f64> {
        match (self, measure) {
            (LinkResource::QubitPure { .. }, MeasureKind::Concurrence | MeasureKind::GConcurrence) => {
                Ok(self.native_value())
            }
            (LinkResource::QubitPure { lambda }, MeasureKind::Scp) => scp_pure_qubit(lambda),
            (LinkResource::QuditPure { .. }, MeasureKind::GConcurrence) => Ok(self.native_value()),
            (LinkResource::Tmsvs { r }, MeasureKind::Ratio) => Ok(r.tanh()),
            (LinkResource::Tmsvs { r }, MeasureKind::AlphaRatio) => {
                let alpha = alpha.ok_or_else(|| Error::InvalidParameter("alpha_ratio needs alpha".into()))?;
                check_alpha(alpha)?;
                Ok(r.tanh().powf(alpha))
            }
            (link, m) => Err(Error::Unsupported(format!(
                "{m} is not multiplicative under the {:?} swapping rule",
                link.kind()
            ))),
        }
    }
}

/// Schmidt pair `((1 + sqrt(1 - C^2))/2, (1 - sqrt(1 - C^2))/2)`.
pub fn qubit_schmidt_from_concurrence(c: f64) -> [f64; 2] {
    let s = (1.0 - c * c).max(0.0).sqrt();
    // (1 - s)/2 rewritten to avoid cancellation at small C
    [(1.0 + s) / 2.0, c * c / (2.0 * (1.0 + s))]
}

/// Output squeezing of the Gaussian swap: `tanh r_out = tanh r1 tanh r2`.
pub fn swap_tmsvs(r1: f64, r2: f64) -> Result<TmsvsSpec> {
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "squeezing parameters must be positive, got {r1}, {r2}"
        )));
    }
    TmsvsSpec::from_chi(r1.tanh() * r2.tanh())
}

/// Deterministic qubit swap multiplying the concurrence.
pub fn swap_qubit_pure(a: &LinkResource, b: &LinkResource) -> Result<LinkResource> {
    match (a, b) {
        (LinkResource::QubitPure { .. }, LinkResource::QubitPure { .. }) => {
            LinkResource::qubit_from_concurrence(a.native_value() * b.native_value())
        }
        _ => Err(Error::KindMismatch(format!(
            "qubit swap needs two qubit links, got {:?} and {:?}",
            a.kind(),
            b.kind()
        ))),
    }
}

/// Deterministic qudit swap multiplying the G-concurrence.
pub fn swap_qudit_gc(a: &LinkResource, b: &LinkResource) -> Result<LinkResource> {
    let (la, lb) = match (a, b) {
        (LinkResource::QuditPure { lambda: la }, LinkResource::QuditPure { lambda: lb }) => (la, lb),
        _ => {
            return Err(Error::KindMismatch(format!(
                "qudit swap needs two qudit links, got {:?} and {:?}",
                a.kind(),
                b.kind()
            )))
        }
    };
    if la.len() != lb.len() {
        return Err(Error::DimensionMismatch(format!(
            "qudit links of dimension {} and {}",
            la.len(),
            lb.len()
        )));
    }
    let target = a.native_value() * b.native_value();
    Ok(LinkResource::QuditPure {
        lambda: canonical_qudit_schmidt(la.len(), target)?,
    })
}

/// Dispatches to the rule matching both links' kind.
pub fn swap(a: &LinkResource, b: &LinkResource) -> Result<LinkResource> {
    match (a, b) {
        (LinkResource::Tmsvs { r: r1 }, LinkResource::Tmsvs { r: r2 }) => Ok(LinkResource::Tmsvs {
            r: swap_tmsvs(*r1, *r2)?.r(),
        }),
        (LinkResource::QubitPure { .. }, _) => swap_qubit_pure(a, b),
        (LinkResource::QuditPure { .. }, _) => swap_qudit_gc(a, b),
        _ => Err(Error::KindMismatch(format!(
            "cannot swap {:?} with {:?}",
            a.kind(),
            b.kind()
        ))),
    }
}

fn geometric_schmidt(d: usize, q: f64) -> Vec<f64> {
    let w: Vec<f64> = (0..d).map(|i| q.powi(i as i32)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

fn geometric_g_concurrence(d: usize, q: f64) -> f64 {
    // d (prod lambda_i)^(1/d) with lambda_i = q^i / Z
    let z: f64 = (0..d).map(|i| q.powi(i as i32)).sum();
    d as f64 * q.powf((d as f64 - 1.0) / 2.0) / z
}

/// Representative `d`-level Schmidt vector with G-concurrence `target`:
/// `lambda_i ∝ q^i`, `q` found by bisection. For `d = 2` this is the unique
/// qubit pair with concurrence `target`.
pub fn canonical_qudit_schmidt(d: usize, target: f64) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::InvalidParameter("dimension must be >= 2".into()));
    }
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::InvalidParameter(format!(
            "G-concurrence {target} outside [0, 1]"
        )));
    }
    if d == 2 {
        return Ok(qubit_schmidt_from_concurrence(target).to_vec());
    }
    if target >= 1.0 {
        return Ok(vec![1.0 / d as f64; d]);
    }
    if target <= 0.0 {
        let mut v = vec![0.0; d];
        v[0] = 1.0;
        return Ok(v);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if geometric_g_concurrence(d, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(geometric_schmidt(d, 0.5 * (lo + hi)))
}

/// `-1 / ln e`; infinite for `e = 1`.
pub fn characteristic_length(e: f64) -> Result<f64> {
    if !(e > 0.0 && e <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "link measure value must lie in (0, 1], got {e}"
        )));
    }
    if e == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-1.0 / e.ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainResult {
    pub kind: LinkKind,
    pub measure: MeasureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Number of links `l`.
    pub hops: usize,
    pub per_hop: Vec<f64>,
    pub end_to_end: f64,
    /// `-l / ln(end_to_end)`; equals `-1/ln e` for identical links.
    #[serde(with = "serde_extended_f64")]
    pub characteristic_length: f64,
    /// Squeezing of the composite link (Gaussian chains only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub composite_r: Option<f64>,
}

/// Composes a homogeneous chain under the measure's multiplicative rule.
pub fn chain_compose(links: &[LinkResource], measure: MeasureKind, alpha: Option<f64>) -> Result<ChainResult> {
    let first = links
        .first()
        .ok_or_else(|| Error::InvalidParameter("chain needs at least one link".into()))?;
    let kind = first.kind();
    for link in links {
        link.validate()?;
        if link.kind() != kind {
            return Err(Error::KindMismatch(format!(
                "heterogeneous chain: {:?} link among {:?} links",
                link.kind(),
                kind
            )));
        }
    }
    if let (LinkResource::QuditPure { lambda }, true) = (first, links.len() > 1) {
        let d = lambda.len();
        if links
            .iter()
            .any(|l| matches!(l, LinkResource::QuditPure { lambda } if lambda.len() != d))
        {
            return Err(Error::DimensionMismatch("qudit links of different dimensions".into()));
        }
    }
    let per_hop = links
        .iter()
        .map(|l| l.measure_value(measure, alpha))
        .collect::<Result<Vec<_>>>()?;
    let end_to_end: f64 = per_hop.iter().product();
    let characteristic_length = if end_to_end == 1.0 {
        f64::INFINITY
    } else if end_to_end == 0.0 {
        0.0
    } else {
        -(links.len() as f64) / end_to_end.ln()
    };
    let composite_r = if kind == LinkKind::Tmsvs {
        let chi: f64 = links.iter().map(|l| l.native_value()).product();
        Some(chi.atanh())
    } else {
        None
    };
    Ok(ChainResult {
        kind,
        measure,
        alpha: alpha.filter(|_| measure == MeasureKind::AlphaRatio),
        hops: links.len(),
        per_hop,
        end_to_end,
        characteristic_length,
        composite_r,
    })
}

/// One row of an `l`-sweep: `(l, E, -l/ln E)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub l: usize,
    pub value: f64,
    #[serde(with = "serde_extended_f64")]
    pub xi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub kind: LinkKind,
}

/// Chains of `1..=max_l` identical links.
pub fn chain_sweep(
    link: &LinkResource,
    max_l: usize,
    measure: MeasureKind,
    alpha: Option<f64>,
) -> Result<Vec<SweepRow>> {
    (1..=max_l)
        .map(|l| {
            let res = chain_compose(&vec![link.clone(); l], measure, alpha)?;
            Ok(SweepRow {
                l,
                value: res.end_to_end,
                xi: res.characteristic_length,
                alpha: res.alpha,
                kind: res.kind,
            })
        })
        .collect()
}

/// Exponents checked by the Fock cross-check besides `alpha = 1`.
pub const CROSSCHECK_ALPHAS: [f64; 3] = [0.5, 2.0, 3.191];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockCrosscheck {
    pub r: f64,
    pub l: usize,
    pub cutoff: usize,
    pub composite_r: f64,
    pub truncation_deficit: f64,
    /// Ratio negativity of the densely built composite state.
    pub dense_ratio: f64,
    /// `tanh(r)^l`
    pub expected_ratio: f64,
    pub deviation: f64,
    /// `(alpha, |dense^alpha - tanh(r)^(l alpha)|)`
    pub alpha_deviations: Vec<(f64, f64)>,
}

/// Swaps `l` identical squeezed links at the rule level, then builds the
/// composite state in a truncated Fock basis and compares its dense ratio
/// negativity with `tanh(r)^l`.
pub fn chain_fock_crosscheck(r: f64, l: usize, cutoff: usize) -> Result<FockCrosscheck> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!(
            "cross-check needs at least two links, got {l}"
        )));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("squeezing must be positive, got {r}")));
    }
    let mut spec = TmsvsSpec::new(r)?;
    for _ in 1..l {
        spec = swap_tmsvs(spec.r(), r)?;
    }
    let spec = spec.set_cutoff(cutoff)?;
    let rho = tmsvs_truncated(&spec)?.density();
    let dense_ratio = ratio_negativity(&rho)?;
    let expected_ratio = r.tanh().powi(l as i32);
    let alpha_deviations = CROSSCHECK_ALPHAS
        .iter()
        .map(|&alpha| {
            let dense = alpha_ratio_negativity(&rho, alpha)?;
            Ok((alpha, (dense - expected_ratio.powf(alpha)).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FockCrosscheck {
        r,
        l,
        cutoff,
        composite_r: spec.r(),
        truncation_deficit: spec.truncation_deficit(),
        dense_ratio,
        expected_ratio,
        deviation: (dense_ratio - expected_ratio).abs(),
        alpha_deviations,
    })
}

/// Per-kind link parameters in chain spec files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LinkParams {
    Tmsvs { r: f64 },
    Concurrence { concurrence: f64 },
    Schmidt { lambda: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChainLinks {
    Identical { identical: LinkParams, count: usize },
    List(Vec<LinkParams>),
}

/// JSON schema for chain experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub kind: LinkKind,
    pub links: ChainLinks,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureKind>,
}

impl ChainSpec {
    fn link(&self, p: &LinkParams) -> Result<LinkResource> {
        match (self.kind, p) {
            (LinkKind::Tmsvs, LinkParams::Tmsvs { r }) => LinkResource::tmsvs(*r),
            (LinkKind::Qubit, LinkParams::Concurrence { concurrence }) => {
                LinkResource::qubit_from_concurrence(*concurrence)
            }
            (LinkKind::Qubit, LinkParams::Schmidt { lambda }) if lambda.len() == 2 => {
                LinkResource::qubit([lambda[0], lambda[1]])
            }
            (LinkKind::Qudit, LinkParams::Schmidt { lambda }) => LinkResource::qudit(lambda.clone()),
            (kind, p) => Err(Error::KindMismatch(format!(
                "link parameters {p:?} do not describe a {kind:?} link"
            ))),
        }
    }

    pub fn links(&self) -> Result<Vec<LinkResource>> {
        match &self.links {
            ChainLinks::Identical { identical, count } => {
                if *count == 0 {
                    return Err(Error::InvalidParameter("count must be >= 1".into()));
                }
                Ok(vec![self.link(identical)?; *count])
            }
            ChainLinks::List(list) => list.iter().map(|p| self.link(p)).collect(),
        }
    }

    /// The measure to compose: explicit, else alpha-ratio when `alpha` is set
    /// on a Gaussian chain, else the kind's native measure.
    pub fn measure(&self) -> MeasureKind {
        match (self.measure, self.kind, self.alpha) {
            (Some(m), _, _) => m,
            (None, LinkKind::Tmsvs, Some(a)) if a != 1.0 => MeasureKind::AlphaRatio,
            (None, kind, _) => kind.native_measure(),
        }
    }

    pub fn run(&self) -> Result<ChainResult> {
        chain_compose(&self.links()?, self.measure(), self.alpha)
    }
}
