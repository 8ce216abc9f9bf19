//! CKW-type monogamy checks for negativity-based measures.
//!
//! Residuals are computed for pure multipartite states only: on pure states
//! the convex-roof extension coincides with the plain measure, while the
//! two-party terms are evaluated on reduced (mixed) states with the plain
//! partial-transpose measure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{SubsystemLayout, C64, ZERO};
use crate::measures::{check_alpha, MeasureKind, MeasureSpec, PtSpectrum};
use crate::par::map_indices;
use crate::states::{random_haar_pure_stream, PureState, State};

/// Residuals below `-VIOLATION_TOL` count as violations.
pub const VIOLATION_TOL: f64 = 1e-9;
/// Tolerance of the scalar inequality grid check.
pub const GRID_TOL: f64 = 1e-12;
pub const HISTOGRAM_BINS: usize = 64;
pub const HISTOGRAM_RANGE: (f64, f64) = (-0.1, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhsTerm {
    /// Subsystem `B_n` paired with party A.
    pub subsystem: usize,
    pub value: f64,
    pub negativity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonogamyReport {
    pub dims: Vec<usize>,
    #[serde(rename = "partyA")]
    pub party_a: Vec<usize>,
    pub measure: MeasureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Measure on the `A | rest` cut.
    pub lhs: f64,
    pub rhs_terms: Vec<RhsTerm>,
    pub residual: f64,
    pub verdict: Verdict,
}

fn pt_measure(spec: &MeasureSpec, n: f64, trace_norm: f64, ppt: bool) -> Result<f64> {
    let chi = n / (n + 1.0);
    Ok(match spec.kind {
        MeasureKind::Negativity => n,
        MeasureKind::LogNegativity => {
            if ppt {
                0.0
            } else {
                trace_norm.log2()
            }
        }
        MeasureKind::Ratio => chi,
        MeasureKind::AlphaRatio => {
            let alpha = spec
                .alpha
                .ok_or_else(|| Error::InvalidParameter("alpha_ratio needs alpha".into()))?;
            check_alpha(alpha)?;
            chi.powf(alpha)
        }
        MeasureKind::CustomF => match &spec.f {
            Some(f) => f.eval(n),
            None => return Err(Error::InvalidParameter("custom_f needs a function".into())),
        },
        other => {
            return Err(Error::Unsupported(format!(
                "{other} has no mixed-state form; monogamy terms need a partial-transpose measure"
            )))
        }
    })
}

fn pt_terms(spec: &MeasureSpec, rho: &crate::states::DensityMatrix) -> Result<(f64, f64)> {
    let pt = PtSpectrum::of(rho)?;
    let n = pt.negativity();
    Ok((pt_measure(spec, n, pt.trace_norm, pt.is_ppt())?, n))
}

/// `lhs - sum(rhs)` for the CKW inequality with party A given by `party_a`
/// and one right-hand term per remaining subsystem.
pub fn ckw_residual(state: &State, spec: &MeasureSpec, party_a: &[usize]) -> Result<MonogamyReport> {
    let psi = match state {
        State::Pure(p) => p,
        State::Mixed(_) => {
            return Err(Error::Unsupported(
                "monogamy residuals need a pure state; mixed states require a convex roof".into(),
            ))
        }
    };
    ckw_residual_pure(psi, spec, party_a)
}

pub fn ckw_residual_pure(psi: &PureState, spec: &MeasureSpec, party_a: &[usize]) -> Result<MonogamyReport> {
    let dims = psi.layout().dims().to_vec();
    if dims.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "monogamy needs at least three parties, got {}",
            dims.len()
        )));
    }
    let psi = psi.with_party_a(party_a.to_vec())?;
    let party_a = psi.layout().party_a().to_vec();
    let rho = psi.density();
    let (lhs, _) = pt_terms(spec, &rho)?;

    let rhs_terms = psi
        .layout()
        .party_b()
        .into_iter()
        .map(|b| {
            let mut keep = party_a.clone();
            keep.push(b);
            let reduced = rho.reduce(&keep, &party_a)?;
            let (value, negativity) = pt_terms(spec, &reduced)?;
            Ok(RhsTerm {
                subsystem: b,
                value,
                negativity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let residual = lhs - rhs_terms.iter().map(|t| t.value).sum::<f64>();
    Ok(MonogamyReport {
        dims,
        party_a,
        measure: spec.kind,
        alpha: spec.alpha.filter(|_| spec.kind == MeasureKind::AlphaRatio),
        lhs,
        rhs_terms,
        residual,
        verdict: if residual < -VIOLATION_TOL {
            Verdict::Violated
        } else {
            Verdict::Satisfied
        },
    })
}

/// `ln 2 / ln(3 (sqrt 2 - 1))`, the smallest exponent for which the
/// alpha-ratio negativity is monogamous on the covered families.
pub fn alpha_threshold() -> f64 {
    std::f64::consts::LN_2 / (3.0 * (std::f64::consts::SQRT_2 - 1.0)).ln()
}

/// `g(r, u) = 2 ln u / ln((1 + r) u / (1 + r u))`.
pub fn aux_g(r: f64, u: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) || !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "aux_g needs r > 0 and 0 < u < 1, got ({r}, {u})"
        )));
    }
    let base = (1.0 + r) * u / (1.0 + r * u);
    if (base - 1.0).abs() < 1e-14 {
        return Err(Error::Numerical(format!("aux_g logarithm base is 1 at ({r}, {u})")));
    }
    Ok(2.0 * u.ln() / base.ln())
}

fn h(t: f64) -> f64 {
    t / (t + 1.0)
}

/// `lhs - rhs` of `h(x)^a + h(y)^a <= h(sqrt(x^2 + y^2))^a` with `h(t) = t/(t+1)`.
pub fn ineq_xy_excess(x: f64, y: f64, alpha: f64) -> f64 {
    h(x).powf(alpha) + h(y).powf(alpha) - h(x.hypot(y)).powf(alpha)
}

/// N-term form of [`ineq_xy_excess`]: `sum h(x_n)^a - h(|x|)^a`.
pub fn ineq_iterated_excess(xs: &[f64], alpha: f64) -> f64 {
    let norm = xs.iter().map(|x| x * x).sum::<f64>().sqrt();
    xs.iter().map(|&x| h(x).powf(alpha)).sum::<f64>() - h(norm).powf(alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub grid_n: usize,
    pub tolerance: f64,
    /// `g(c, b/c)` with `c = sqrt(a^2 + b^2)`.
    pub g_bound: f64,
    pub alpha_covered: bool,
    pub max_excess: f64,
    pub violations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[f64; 2]>,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Evaluates the two-term inequality on a `grid_n x grid_n` lattice over
/// `[0, a] x [0, b]`. The witness is the point of largest excess.
pub fn check_ineq_xya_grid(a: f64, b: f64, alpha: f64, grid_n: usize) -> Result<GridReport> {
    check_ineq_xya_grid_tol(a, b, alpha, grid_n, GRID_TOL)
}

/// [`check_ineq_xya_grid`] counting excesses above `tolerance`.
pub fn check_ineq_xya_grid_tol(a: f64, b: f64, alpha: f64, grid_n: usize, tolerance: f64) -> Result<GridReport> {
    if !(a > 0.0 && a <= b && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "grid check needs 0 < a <= b, got a={a}, b={b}"
        )));
    }
    if grid_n < 100 {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 100 points per axis, got {grid_n}"
        )));
    }
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "grid tolerance must be >= 0, got {tolerance}"
        )));
    }
    check_alpha(alpha)?;
    let c = a.hypot(b);
    let g_bound = aux_g(c, b / c)?;
    let step = |len: f64, i: usize| len * i as f64 / (grid_n - 1) as f64;
    let mut max_excess = f64::NEG_INFINITY;
    let mut witness = [0.0, 0.0];
    let mut violations = 0;
    for i in 0..grid_n {
        let x = step(a, i);
        for j in 0..grid_n {
            let y = step(b, j);
            let e = ineq_xy_excess(x, y, alpha);
            if e > tolerance {
                violations += 1;
            }
            if e > max_excess {
                max_excess = e;
                witness = [x, y];
            }
        }
    }
    Ok(GridReport {
        a,
        b,
        alpha,
        grid_n,
        tolerance,
        g_bound,
        alpha_covered: alpha >= g_bound,
        max_excess,
        violations,
        witness: (violations > 0).then_some(witness),
    })
}

/// `(|000> + |011> + sqrt2 |110>)/2`, which violates CKW for the ratio
/// negativity at `alpha = 1`.
pub fn ckw_violation_state() -> PureState {
    let layout = SubsystemLayout::new(vec![2, 2, 2], vec![0]).expect("valid layout");
    let mut amps = vec![ZERO; 8];
    amps[0b000] = C64::new(0.5, 0.0);
    amps[0b011] = C64::new(0.5, 0.0);
    amps[0b110] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    PureState::new(amps, layout).expect("normalized")
}

/// Whether the proof of monogamy covers `dims` with party A = subsystem 0:
/// N qubits, `2 x 2 x 3`, or `2 x 2 x 2^m`.
pub fn covered_family(dims: &[usize]) -> bool {
    if dims.len() < 3 {
        return false;
    }
    if dims.iter().all(|&d| d == 2) {
        return true;
    }
    dims.len() == 3 && dims[0] == 2 && dims[1] == 2 && (dims[2] == 3 || dims[2].is_power_of_two())
}

/// JSON config of a monogamy scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub dims: Vec<usize>,
    pub samples: usize,
    pub alpha: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        Self {
            lo,
            hi,
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
        }
    }

    pub fn add(&mut self, x: f64) {
        let bins = self.counts.len();
        if x < self.lo {
            self.underflow += 1;
        } else if x > self.hi {
            self.overflow += 1;
        } else {
            let k = (((x - self.lo) / (self.hi - self.lo)) * bins as f64) as usize;
            self.counts[k.min(bins - 1)] += 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub dims: Vec<usize>,
    pub samples: usize,
    pub alpha: f64,
    pub seed: u64,
    pub covered: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    /// True when the fixed violating state was evaluated after the samples.
    pub counterexample_appended: bool,
    pub evaluated: usize,
    pub violation_tolerance: f64,
    pub violations: usize,
    pub min_residual: f64,
    /// Index of the minimum among evaluated states; `samples` denotes the
    /// appended counterexample.
    pub min_residual_index: usize,
    /// Largest negativity among the two-party reduced states.
    pub max_pair_negativity: f64,
    pub histogram: Histogram,
}

struct SampleOutcome {
    residual: f64,
    max_pair_negativity: f64,
}

fn scan_one(psi: &PureState, spec: &MeasureSpec) -> Result<SampleOutcome> {
    let rep = ckw_residual_pure(psi, spec, &[0])?;
    Ok(SampleOutcome {
        residual: rep.residual,
        max_pair_negativity: rep.rhs_terms.iter().map(|t| t.negativity).fold(0.0, f64::max),
    })
}

/// Haar-samples pure states on `dims` (party A = subsystem 0) and aggregates
/// the alpha-ratio CKW residuals. Sample `i` uses RNG stream `i` of `seed`,
/// so results do not depend on the thread count.
pub fn sample_monogamy_scan(dims: &[usize], samples: usize, alpha: f64, seed: u64) -> Result<ScanReport> {
    sample_monogamy_scan_tol(dims, samples, alpha, seed, VIOLATION_TOL)
}

/// [`sample_monogamy_scan`] counting residuals below `-violation_tol`.
pub fn sample_monogamy_scan_tol(
    dims: &[usize],
    samples: usize,
    alpha: f64,
    seed: u64,
    violation_tol: f64,
) -> Result<ScanReport> {
    if !(violation_tol >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "violation tolerance must be >= 0, got {violation_tol}"
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    if dims.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "monogamy scans need at least three parties, got {}",
            dims.len()
        )));
    }
    let layout = SubsystemLayout::new(dims.to_vec(), vec![0])?;
    let spec = MeasureSpec::alpha_ratio(alpha)?;
    let covered = covered_family(dims);
    let append = dims == [2, 2, 2];

    let mut outcomes = map_indices(samples, |i| {
        scan_one(&random_haar_pure_stream(&layout, seed, i as u64), &spec)
    });
    if append {
        outcomes.push(scan_one(&ckw_violation_state(), &spec));
    }

    let mut histogram = Histogram::new(HISTOGRAM_RANGE.0, HISTOGRAM_RANGE.1, HISTOGRAM_BINS);
    let mut violations = 0;
    let mut min_residual = f64::INFINITY;
    let mut min_residual_index = 0;
    let mut max_pair_negativity: f64 = 0.0;
    for (i, o) in outcomes.into_iter().enumerate() {
        let o = o?;
        histogram.add(o.residual);
        if o.residual < -violation_tol {
            violations += 1;
        }
        if o.residual < min_residual {
            min_residual = o.residual;
            min_residual_index = i;
        }
        max_pair_negativity = max_pair_negativity.max(o.max_pair_negativity);
    }
    Ok(ScanReport {
        dims: dims.to_vec(),
        samples,
        alpha,
        seed,
        covered,
        warning: (!covered).then(|| format!("dims {dims:?} are outside the families covered by the monogamy proof")),
        counterexample_appended: append,
        evaluated: samples + append as usize,
        violation_tolerance: violation_tol,
        violations,
        min_residual,
        min_residual_index,
        max_pair_negativity,
        histogram,
    })
}

impl ScanConfig {
    pub fn run(&self) -> Result<ScanReport> {
        sample_monogamy_scan(&self.dims, self.samples, self.alpha, self.seed)
    }
}
