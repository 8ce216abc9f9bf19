//! Grid checks for composition laws `g(x, y)` of chain entanglement.
//!
//! A strictly monotone `f` with `f(g(x, y)) = f(x) f(y)` exists exactly when
//! `g` is a continuous group operation on its interval. The checker tests the
//! group axioms numerically and verifies user-supplied candidates for `f`; it
//! never constructs `f`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::map_indices;
use crate::report::serde_extended_f64;

pub const DEFAULT_GRID: usize = 64;
pub const CLOSURE_TOL: f64 = 1e-9;
pub const ASSOC_TOL: f64 = 1e-9;
pub const IDENTITY_TOL: f64 = 1e-9;
pub const SOLVE_TOL: f64 = 1e-9;
pub const MULTIPLICATIVE_TOL: f64 = 1e-9;
const BISECTION_STEPS: usize = 200;

pub const BUILTIN_LAWS: [&str; 4] = ["product", "tanh_sum", "min", "sum"];

type LawFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Interval with optionally open endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Domain {
    pub fn new(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Result<Self> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "domain needs finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo - tol };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi + tol };
        above && below
    }

    /// `n` evenly spaced points; open endpoints are stepped over.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let s0 = self.lo_open as usize;
        let s1 = self.hi_open as usize;
        let denom = (n + s0 + s1 - 1).max(1) as f64;
        (0..n)
            .map(|i| self.lo + (self.hi - self.lo) * (i + s0) as f64 / denom)
            .collect()
    }

    fn is_endpoint(&self, x: f64) -> bool {
        x == self.lo || x == self.hi
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}

/// A binary law on an interval. `g` must be pure.
#[derive(Clone)]
pub struct CompositionLaw {
    name: String,
    g: LawFn,
    domain: Domain,
    grid: usize,
}

impl fmt::Debug for CompositionLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompositionLaw")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("grid", &self.grid)
            .finish()
    }
}

impl CompositionLaw {
    pub fn new(
        name: impl Into<String>,
        domain: Domain,
        g: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let law = Self {
            name: name.into(),
            g: Arc::new(g),
            domain,
            grid: DEFAULT_GRID,
        };
        let pts = law.domain.grid(law.grid);
        for &x in &pts {
            for &y in &pts {
                law.eval(x, y)?;
            }
        }
        Ok(law)
    }

    pub fn with_grid(mut self, grid: usize) -> Result<Self> {
        if grid < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 points, got {grid}"
            )));
        }
        self.grid = grid;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let v = (self.g)(x, y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical(format!(
                "law {} is not finite at ({x}, {y})",
                self.name
            )))
        }
    }

    /// `xy` on `(0, 1]`.
    pub fn product() -> Self {
        Self::new("product", Domain::new(0.0, 1.0, true, false).unwrap(), |x, y| x * y).unwrap()
    }

    /// `(x + y) / (1 + xy)` on `[0, 1)`.
    pub fn tanh_sum() -> Self {
        Self::new("tanh_sum", Domain::new(0.0, 1.0, false, true).unwrap(), tanh_sum).unwrap()
    }

    /// `min(x, y)` on `[0, 1]`.
    pub fn min() -> Self {
        Self::new("min", Domain::closed(0.0, 1.0).unwrap(), f64::min).unwrap()
    }

    /// `x + y` on `[0, 1]`.
    pub fn sum() -> Self {
        Self::new("sum", Domain::closed(0.0, 1.0).unwrap(), |x, y| x + y).unwrap()
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "product" => Ok(Self::product()),
            "tanh_sum" => Ok(Self::tanh_sum()),
            "min" => Ok(Self::min()),
            "sum" => Ok(Self::sum()),
            other => Err(Error::InvalidParameter(format!(
                "unknown law {other:?}; expected one of {BUILTIN_LAWS:?}"
            ))),
        }
    }
}

fn tanh_sum(x: f64, y: f64) -> f64 {
    (x + y) / (1.0 + x * y)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub passed: bool,
    #[serde(with = "serde_extended_f64")]
    pub max_defect: f64,
    pub tolerance: f64,
    /// Grid point of the largest defect when the axiom fails.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
}

impl AxiomResult {
    fn from_defects(defects: impl IntoIterator<Item = (f64, Vec<f64>)>, tolerance: f64) -> Self {
        let mut max_defect = 0.0;
        let mut witness = None;
        for (d, at) in defects {
            if d > max_defect || (witness.is_none() && d.is_nan()) {
                max_defect = d;
                witness = Some(at);
            }
        }
        let passed = max_defect <= tolerance;
        Self {
            passed,
            max_defect,
            tolerance,
            witness: if passed { None } else { witness },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<f64>,
    /// `max_x max(|g(x, e) - x|, |g(e, x) - x|)`
    #[serde(with = "serde_extended_f64")]
    pub max_defect: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvabilityResult {
    /// `g(x, .)` strictly monotone on the grid for every `x`.
    pub monotone_second: bool,
    /// Pairs `(x, z)` with both strictly inside the domain.
    pub interior: AxiomResult,
    pub interior_failures: usize,
    /// Pairs touching a domain endpoint.
    pub endpoint: AxiomResult,
    pub endpoint_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub law: String,
    pub domain: Domain,
    pub grid: usize,
    pub closure: AxiomResult,
    pub associativity: AxiomResult,
    pub identity: IdentityResult,
    pub solvability: SolvabilityResult,
    /// Closure, associativity, identity and interior solvability all pass.
    pub verdict: bool,
    pub failing: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupTolerances {
    pub closure: f64,
    pub associativity: f64,
    pub identity: f64,
    pub solvability: f64,
}

impl Default for GroupTolerances {
    fn default() -> Self {
        Self {
            closure: CLOSURE_TOL,
            associativity: ASSOC_TOL,
            identity: IDENTITY_TOL,
            solvability: SOLVE_TOL,
        }
    }
}

fn closure(law: &CompositionLaw, pts: &[f64], tol: f64) -> Result<AxiomResult> {
    let d = law.domain;
    let mut defects = Vec::with_capacity(pts.len() * pts.len());
    for &x in pts {
        for &y in pts {
            let v = law.eval(x, y)?;
            let out = if d.contains(v, tol) {
                0.0
            } else {
                (d.lo - v).max(v - d.hi).max(f64::MIN_POSITIVE).max(tol * 2.0)
            };
            defects.push((out, vec![x, y]));
        }
    }
    Ok(AxiomResult::from_defects(defects, tol))
}

fn associativity(law: &CompositionLaw, pts: &[f64], tol: f64) -> Result<AxiomResult> {
    let rows = map_indices(pts.len(), |i| -> Result<(f64, Vec<f64>)> {
        let x = pts[i];
        let mut best = (0.0, vec![x, pts[0], pts[0]]);
        for &y in pts {
            let xy = law.eval(x, y)?;
            for &z in pts {
                let left = law.eval(xy, z)?;
                let right = law.eval(x, law.eval(y, z)?)?;
                let d = (left - right).abs();
                if d > best.0 {
                    best = (d, vec![x, y, z]);
                }
            }
        }
        Ok(best)
    });
    Ok(AxiomResult::from_defects(
        rows.into_iter().collect::<Result<Vec<_>>>()?,
        tol,
    ))
}

/// Root of `phi` on `[lo, hi]` by bisection; `None` without a sign change.
fn bisect(lo: f64, hi: f64, tol: f64, phi: impl Fn(f64) -> Result<f64>) -> Result<Option<f64>> {
    let (flo, fhi) = (phi(lo)?, phi(hi)?);
    if flo.abs() <= tol {
        return Ok(Some(lo));
    }
    if fhi.abs() <= tol {
        return Ok(Some(hi));
    }
    if flo.signum() == fhi.signum() {
        return Ok(None);
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..BISECTION_STEPS {
        let m = 0.5 * (a + b);
        let fm = phi(m)?;
        if fm == 0.0 {
            return Ok(Some(m));
        }
        if fm.signum() == flo.signum() {
            a = m;
        } else {
            b = m;
        }
        if b - a <= f64::EPSILON * (1.0 + a.abs()) {
            break;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

fn identity(law: &CompositionLaw, pts: &[f64], tol: f64) -> Result<IdentityResult> {
    let d = law.domain;
    let x0 = pts[pts.len() / 2];
    let e = bisect(d.lo, d.hi, tol, |e| Ok(law.eval(x0, e)? - x0))?;
    let Some(e) = e else {
        return Ok(IdentityResult {
            passed: false,
            element: None,
            max_defect: f64::INFINITY,
            tolerance: tol,
        });
    };
    let mut max_defect: f64 = 0.0;
    for &x in pts {
        max_defect = max_defect
            .max((law.eval(x, e)? - x).abs())
            .max((law.eval(e, x)? - x).abs());
    }
    Ok(IdentityResult {
        passed: max_defect <= tol && d.contains(e, 0.0),
        element: Some(e),
        max_defect,
        tolerance: tol,
    })
}

fn solvability(law: &CompositionLaw, pts: &[f64], tol: f64) -> Result<SolvabilityResult> {
    let d = law.domain;
    let mut monotone_second = true;
    let mut increasing = Vec::with_capacity(pts.len());
    for &x in pts {
        let vals = pts.iter().map(|&y| law.eval(x, y)).collect::<Result<Vec<_>>>()?;
        let up = vals.windows(2).all(|w| w[1] > w[0]);
        let down = vals.windows(2).all(|w| w[1] < w[0]);
        monotone_second &= up || down;
        increasing.push(up);
    }

    let mut interior = Vec::new();
    let mut endpoint = Vec::new();
    for (i, &x) in pts.iter().enumerate() {
        for &z in pts {
            let defect = if !monotone_second {
                f64::INFINITY
            } else {
                let sign = if increasing[i] { 1.0 } else { -1.0 };
                match bisect(d.lo, d.hi, tol, |y| Ok(sign * (law.eval(x, y)? - z)))? {
                    Some(y) if d.contains(y, 0.0) => (law.eval(x, y)? - z).abs(),
                    // the solution sits on an excluded endpoint
                    Some(_) => f64::INFINITY,
                    None => {
                        let lo = (law.eval(x, d.lo)? - z).abs();
                        let hi = (law.eval(x, d.hi)? - z).abs();
                        lo.min(hi).max(2.0 * tol)
                    }
                }
            };
            let entry = (defect, vec![x, z]);
            if d.is_endpoint(x) || d.is_endpoint(z) {
                endpoint.push(entry);
            } else {
                interior.push(entry);
            }
        }
    }
    let count = |v: &[(f64, Vec<f64>)]| v.iter().filter(|(e, _)| !(*e <= tol)).count();
    let interior_failures = count(&interior);
    let endpoint_failures = count(&endpoint);
    Ok(SolvabilityResult {
        monotone_second,
        interior: AxiomResult::from_defects(interior, tol),
        interior_failures,
        endpoint: AxiomResult::from_defects(endpoint, tol),
        endpoint_failures,
    })
}

/// Closure, associativity, identity and solvability of `g(x, .) = z` on the
/// law's grid.
pub fn check_group_operation(law: &CompositionLaw, tol: &GroupTolerances) -> Result<GroupReport> {
    let pts = law.domain.grid(law.grid);
    let closure = closure(law, &pts, tol.closure)?;
    let associativity = associativity(law, &pts, tol.associativity)?;
    let identity = identity(law, &pts, tol.identity)?;
    let solvability = solvability(law, &pts, tol.solvability)?;
    let mut failing = Vec::new();
    if !closure.passed {
        failing.push("closure".to_string());
    }
    if !associativity.passed {
        failing.push("associativity".to_string());
    }
    if !identity.passed {
        failing.push("identity".to_string());
    }
    if !solvability.interior.passed {
        failing.push("solvability".to_string());
    }
    Ok(GroupReport {
        law: law.name.clone(),
        domain: law.domain,
        grid: law.grid,
        closure,
        associativity,
        identity,
        solvability,
        verdict: failing.is_empty(),
        failing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicativeReport {
    pub law: String,
    pub f: String,
    pub direction: Direction,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[f64; 2]>,
}

/// `max |f(g(x, y)) - f(x) f(y)|` over the law's grid. `f` must be strictly
/// monotone on the grid, in either direction.
pub fn verify_multiplicative_f(
    law: &CompositionLaw,
    f_name: &str,
    f: impl Fn(f64) -> f64,
) -> Result<MultiplicativeReport> {
    let pts = law.domain.grid(law.grid);
    let fv: Vec<f64> = pts.iter().map(|&x| f(x)).collect();
    if fv.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("{f_name} is not finite on the grid")));
    }
    let direction = if fv.windows(2).all(|w| w[1] > w[0]) {
        Direction::Increasing
    } else if fv.windows(2).all(|w| w[1] < w[0]) {
        Direction::Decreasing
    } else {
        return Err(Error::InvalidParameter(format!(
            "{f_name} is not strictly monotone on {}",
            law.domain
        )));
    };
    let mut max_deviation: f64 = 0.0;
    let mut witness = [pts[0], pts[0]];
    for (i, &x) in pts.iter().enumerate() {
        for (j, &y) in pts.iter().enumerate() {
            let dev = (f(law.eval(x, y)?) - fv[i] * fv[j]).abs();
            if !(dev <= max_deviation) {
                max_deviation = dev;
                witness = [x, y];
            }
        }
    }
    let passed = max_deviation <= MULTIPLICATIVE_TOL;
    Ok(MultiplicativeReport {
        law: law.name.clone(),
        f: f_name.to_string(),
        direction,
        max_deviation,
        tolerance: MULTIPLICATIVE_TOL,
        passed,
        witness: (!passed).then_some(witness),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[f64; 2]>,
}

impl ConditionResult {
    fn new(witness: Option<[f64; 2]>) -> Self {
        Self {
            passed: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessaryReport {
    pub law: String,
    /// Closure of the law's domain, where the conditions are evaluated.
    pub domain: Domain,
    pub grid: usize,
    pub increasing_first: ConditionResult,
    pub increasing_second: ConditionResult,
    pub zero_annihilation: ConditionResult,
    pub min_bound: ConditionResult,
    pub passed: bool,
}

/// Conditions any chain composition law must meet on the closed domain:
/// strictly increasing in each argument while the other is positive,
/// `g = 0` exactly when an argument is 0, and `g <= min(x, y)`.
pub fn necessary_conditions_check(law: &CompositionLaw) -> Result<NecessaryReport> {
    let domain = Domain::closed(law.domain.lo, law.domain.hi)?;
    let pts = domain.grid(law.grid);
    let n = pts.len();
    let mut vals = vec![0.0; n * n];
    for (i, &x) in pts.iter().enumerate() {
        for (j, &y) in pts.iter().enumerate() {
            vals[i * n + j] = law.eval(x, y)?;
        }
    }
    let at = |i: usize, j: usize| vals[i * n + j];

    let mut inc_first = None;
    let mut inc_second = None;
    let mut zero = None;
    let mut bound = None;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (pts[i], pts[j]);
            let g = at(i, j);
            if inc_first.is_none() && i + 1 < n && y > 0.0 && !(at(i + 1, j) > g) {
                inc_first = Some([x, y]);
            }
            if inc_second.is_none() && j + 1 < n && x > 0.0 && !(at(i, j + 1) > g) {
                inc_second = Some([x, y]);
            }
            let has_zero = x == 0.0 || y == 0.0;
            if zero.is_none() && (has_zero != (g == 0.0)) {
                zero = Some([x, y]);
            }
            if bound.is_none() && g > x.min(y) + CLOSURE_TOL {
                bound = Some([x, y]);
            }
        }
    }
    let increasing_first = ConditionResult::new(inc_first);
    let increasing_second = ConditionResult::new(inc_second);
    let zero_annihilation = ConditionResult::new(zero);
    let min_bound = ConditionResult::new(bound);
    let passed = increasing_first.passed && increasing_second.passed && zero_annihilation.passed && min_bound.passed;
    Ok(NecessaryReport {
        law: law.name.clone(),
        domain,
        grid: law.grid,
        increasing_first,
        increasing_second,
        zero_annihilation,
        min_bound,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strict() -> GroupTolerances {
        GroupTolerances {
            associativity: 1e-10,
            identity: 1e-10,
            ..Default::default()
        }
    }

    #[test]
    fn grids_respect_open_ends() {
        let d = Domain::new(0.0, 1.0, true, false).unwrap();
        let g = d.grid(4);
        assert_eq!(g, vec![0.25, 0.5, 0.75, 1.0]);
        let d = Domain::new(0.0, 1.0, true, true).unwrap();
        assert!(d.grid(10).iter().all(|&x| x > 0.0 && x < 1.0));
        assert_eq!(Domain::closed(0.0, 1.0).unwrap().grid(3), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn product_is_not_a_group_on_unit_interval() {
        let rep = check_group_operation(&CompositionLaw::product(), &strict()).unwrap();
        assert!(rep.closure.passed && rep.associativity.passed);
        assert!(rep.identity.passed);
        assert_eq!(rep.identity.element, Some(1.0));
        assert!(!rep.solvability.interior.passed);
        let [x, z] = rep.solvability.interior.witness.clone().unwrap()[..] else {
            panic!()
        };
        assert!(z > x);
        assert_eq!(rep.failing, vec!["solvability"]);
        assert!(!rep.verdict);
    }

    #[test]
    fn tanh_sum_axioms() {
        let rep = check_group_operation(&CompositionLaw::tanh_sum(), &strict()).unwrap();
        assert!(rep.closure.passed && rep.associativity.passed && rep.identity.passed);
        assert_eq!(rep.identity.element, Some(0.0));

        let full = CompositionLaw::new("tanh_sum", Domain::new(-1.0, 1.0, true, true).unwrap(), tanh_sum).unwrap();
        let rep = check_group_operation(&full, &strict()).unwrap();
        assert!(rep.verdict, "{rep:?}");
        let f = verify_multiplicative_f(&full, "(1-x)/(1+x)", |x| (1.0 - x) / (1.0 + x)).unwrap();
        assert!(f.passed && f.direction == Direction::Decreasing);
    }

    #[test]
    fn wobbly_law_fails_associativity() {
        let law = CompositionLaw::new("wobbly", Domain::closed(0.0, 1.0).unwrap(), |x, y| {
            x + y + x * y * (1.0 / (x + y + 0.1)).sin()
        })
        .unwrap();
        let rep = check_group_operation(&law, &GroupTolerances::default()).unwrap();
        assert!(!rep.associativity.passed);
        assert_eq!(rep.associativity.witness.as_ref().unwrap().len(), 3);
    }

    #[test]
    fn non_finite_law_is_rejected() {
        assert!(CompositionLaw::new("bad", Domain::closed(0.0, 1.0).unwrap(), |x, y| x / y).is_err());
    }

    #[test]
    fn multiplicative_candidates() {
        for alpha in [0.5, 1.0, 2.0] {
            let rep = verify_multiplicative_f(&CompositionLaw::product(), "x^a", |x| x.powf(alpha)).unwrap();
            assert!(rep.passed && rep.max_deviation < 1e-14, "{rep:?}");
        }
        let rep =
            verify_multiplicative_f(&CompositionLaw::tanh_sum(), "(1-x)/(1+x)", |x| (1.0 - x) / (1.0 + x)).unwrap();
        assert!(rep.max_deviation <= 1e-12);
        let rep = verify_multiplicative_f(&CompositionLaw::min(), "x", |x| x).unwrap();
        assert!(!rep.passed && rep.max_deviation > 0.2 && rep.witness.is_some());
        assert!(verify_multiplicative_f(&CompositionLaw::min(), "x(1-x)", |x| x * (1.0 - x)).is_err());
    }

    #[test]
    fn necessary_conditions() {
        assert!(necessary_conditions_check(&CompositionLaw::product()).unwrap().passed);
        let rep = necessary_conditions_check(&CompositionLaw::sum()).unwrap();
        assert!(!rep.min_bound.passed && rep.min_bound.witness.is_some());
        // the witness is the first in scan order; (0.5, 0.5) violates too
        assert_eq!(CompositionLaw::sum().eval(0.5, 0.5).unwrap(), 1.0);
        let rep = necessary_conditions_check(&CompositionLaw::tanh_sum()).unwrap();
        assert!(!rep.min_bound.passed);
        assert!((tanh_sum(0.5, 0.5) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn builtin_registry() {
        for name in BUILTIN_LAWS {
            assert_eq!(CompositionLaw::builtin(name).unwrap().name(), name);
        }
        assert!(CompositionLaw::builtin("pow").is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&check_group_operation(&CompositionLaw::tanh_sum(), &strict()).unwrap()).unwrap();
        let b = serde_json::to_string(&check_group_operation(&CompositionLaw::tanh_sum(), &strict()).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
