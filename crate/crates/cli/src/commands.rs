use std::collections::BTreeMap;

use qchain_core::gaussian::{
    cm_partial_transpose, cm_ratio_negativity, symplectic_eigenvalues, tmsvs_cm, validate_cm, CmFile, CovarianceMatrix,
    BONA_FIDE_TOL,
};
use qchain_core::groupop::{
    check_group_operation, necessary_conditions_check, verify_multiplicative_f, CompositionLaw, GroupTolerances,
    MultiplicativeReport, MULTIPLICATIVE_TOL,
};
use qchain_core::measures::{evaluate, negativity_from_ratio, MeasureKind, MeasureSpec, PtSpectrum};
use qchain_core::monogamy::{
    alpha_threshold, check_ineq_xya_grid_tol, ckw_residual, sample_monogamy_scan_tol, ScanConfig, GRID_TOL,
    VIOLATION_TOL,
};
use qchain_core::report::csv_f64;
use qchain_core::repro::{run_repro, EXACT_TOL};
use qchain_core::states::{bell_state, tmsvs_truncated, State, StateFile, TmsvsSpec, PSD_TOL, TRACE_TOL};
use qchain_core::swapping::{ChainLinks, ChainResult, ChainSpec, LinkKind, LinkParams, SweepRow, BISECTION_TOL};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    ChainArgs, Cli, Command, GaussianArgs, GridArgs, GroupopArgs, KindArg, MeasureArgs, MonogamyMode, ReproArgs,
    ScanArgs, StateArgs,
};
use crate::output::{read_json, Failure, Outcome};

type Tolerances = BTreeMap<&'static str, f64>;

pub fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let seed = cli.common.seed;
    match &cli.command {
        Command::Measure(a) => measure(a),
        Command::Chain(a) => chain(a),
        Command::Sweep(a) => sweep(a),
        Command::Monogamy(m) => match &m.mode {
            MonogamyMode::Scan(a) => scan(a, seed),
            MonogamyMode::Grid(a) => grid(a),
            MonogamyMode::State(a) => monogamy_state(a),
        },
        Command::Groupop(a) => groupop(a),
        Command::Gaussian(a) => gaussian(a),
        Command::Repro(a) => repro(a),
    }
}

fn row<const N: usize>(cells: [&str; N]) -> Vec<String> {
    cells.iter().map(|c| c.to_string()).collect()
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Numerical(e.to_string()))
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>, Failure> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(Failure::Validation(format!(
            "--{name} must be positive and finite, got {x}"
        ))),
        _ => Ok(v),
    }
}

fn non_negative(name: &str, v: Option<f64>) -> Result<Option<f64>, Failure> {
    match v {
        Some(x) if !(x >= 0.0 && x.is_finite()) => Err(Failure::Validation(format!(
            "--{name} must be >= 0 and finite, got {x}"
        ))),
        _ => Ok(v),
    }
}

fn parse_measure(name: &str) -> Result<MeasureKind, Failure> {
    Ok(name.trim().parse::<MeasureKind>()?)
}

fn measure_spec(kind: MeasureKind, alpha: Option<f64>) -> Result<MeasureSpec, Failure> {
    match kind {
        MeasureKind::AlphaRatio => {
            let alpha = alpha.ok_or_else(|| Failure::Validation("alpha_ratio needs --alpha".into()))?;
            Ok(MeasureSpec::alpha_ratio(alpha)?)
        }
        MeasureKind::CustomF => Err(Failure::Validation(
            "custom_f is available through the library only".into(),
        )),
        k => Ok(MeasureSpec::new(k)),
    }
}

fn load_state(path: &std::path::Path, party_a: &Option<Vec<usize>>) -> Result<State, Failure> {
    let file: StateFile = read_json(path)?;
    let state = State::try_from(file)?;
    Ok(match (party_a, state) {
        (None, s) => s,
        (Some(a), State::Pure(p)) => State::Pure(p.with_party_a(a.clone())?),
        (Some(a), State::Mixed(m)) => State::Mixed(m.with_party_a(a.clone())?),
    })
}

fn state_tolerances() -> Tolerances {
    BTreeMap::from([("psd", PSD_TOL), ("trace", TRACE_TOL)])
}

fn measure(a: &MeasureArgs) -> Result<Outcome, Failure> {
    positive("alpha", a.alpha)?;
    let state = match (&a.input, a.tmsvs, a.bell) {
        (Some(path), _, _) => load_state(path, &a.party_a)?,
        (None, Some(r), _) => {
            let spec = match a.cutoff {
                Some(n) => TmsvsSpec::with_cutoff(r, n)?,
                None => TmsvsSpec::new(r)?,
            };
            State::Pure(tmsvs_truncated(&spec)?)
        }
        _ => State::Pure(bell_state()),
    };
    let kinds = a
        .measures
        .iter()
        .map(|m| parse_measure(m))
        .collect::<Result<Vec<_>, _>>()?;
    let reports = kinds
        .iter()
        .map(|&k| Ok(evaluate(&measure_spec(k, a.alpha)?, &state)?))
        .collect::<Result<Vec<_>, Failure>>()?;
    let pt = PtSpectrum::of_state(&state)?;
    let layout = state.layout();

    let mut csv = vec![row(["measure", "alpha", "value", "trace_norm", "ppt"])];
    for r in &reports {
        csv.push(vec![
            r.measure.to_string(),
            r.alpha.map(csv_f64).unwrap_or_default(),
            csv_f64(r.value),
            csv_f64(r.trace_norm),
            r.ppt.to_string(),
        ]);
    }
    Ok(Outcome {
        result: json!({
            "dims": layout.dims(),
            "partyA": layout.party_a(),
            "truncation_deficit": state.truncation_deficit(),
            "trace_norm": pt.trace_norm,
            "ppt": pt.is_ppt(),
            "measures": to_value(&reports)?,
        }),
        csv,
        tolerances: state_tolerances(),
        passed: true,
    })
}

fn chain_spec(a: &ChainArgs) -> Result<ChainSpec, Failure> {
    positive("alpha", a.alpha)?;
    let measure = a.measure.as_deref().map(parse_measure).transpose()?;
    if let Some(path) = &a.input {
        let mut spec: ChainSpec = read_json(path)?;
        if let Some(m) = measure {
            spec.measure = Some(m);
        }
        if a.alpha.is_some() {
            spec.alpha = a.alpha;
        }
        if let (Some(l), ChainLinks::Identical { count, .. }) = (a.length, &mut spec.links) {
            *count = l;
        }
        return Ok(spec);
    }
    let kind = a
        .kind
        .ok_or_else(|| Failure::Validation("--kind or --input is required".into()))?;
    let params = match (kind, a.r, a.concurrence, &a.schmidt) {
        (KindArg::Tmsvs, Some(r), None, None) => LinkParams::Tmsvs { r },
        (KindArg::Qubit, None, Some(c), None) => LinkParams::Concurrence { concurrence: c },
        (KindArg::Qubit | KindArg::Qudit, None, None, Some(l)) => LinkParams::Schmidt { lambda: l.clone() },
        _ => {
            return Err(Failure::Validation(
                "give exactly one of --r (tmsvs), --concurrence (qubit) or --schmidt (qubit, qudit)".into(),
            ))
        }
    };
    Ok(ChainSpec {
        kind: match kind {
            KindArg::Qubit => LinkKind::Qubit,
            KindArg::Qudit => LinkKind::Qudit,
            KindArg::Tmsvs => LinkKind::Tmsvs,
        },
        links: ChainLinks::Identical {
            identical: params,
            count: a.length.unwrap_or(1),
        },
        alpha: a.alpha,
        measure,
    })
}

fn kind_name(kind: LinkKind) -> &'static str {
    match kind {
        LinkKind::Qubit => "qubit",
        LinkKind::Qudit => "qudit",
        LinkKind::Tmsvs => "tmsvs",
    }
}

/// Prefix rows `(l, E_l, -l / ln E_l)` of a composed chain.
fn prefix_rows(res: &ChainResult) -> Vec<SweepRow> {
    let mut value = 1.0;
    res.per_hop
        .iter()
        .enumerate()
        .map(|(i, e)| {
            value *= e;
            let l = i + 1;
            let xi = if value == 1.0 {
                f64::INFINITY
            } else if value == 0.0 {
                0.0
            } else {
                -(l as f64) / value.ln()
            };
            SweepRow {
                l,
                value,
                xi,
                alpha: res.alpha,
                kind: res.kind,
            }
        })
        .collect()
}

fn sweep_csv(rows: &[SweepRow]) -> Vec<Vec<String>> {
    let mut csv = vec![row(["l", "value", "xi", "alpha", "kind"])];
    for r in rows {
        csv.push(vec![
            r.l.to_string(),
            csv_f64(r.value),
            csv_f64(r.xi),
            r.alpha.map(csv_f64).unwrap_or_default(),
            kind_name(r.kind).to_string(),
        ]);
    }
    csv
}

fn chain_tolerances() -> Tolerances {
    BTreeMap::from([("bisection", BISECTION_TOL)])
}

fn chain(a: &ChainArgs) -> Result<Outcome, Failure> {
    let res = chain_spec(a)?.run()?;
    let rows = prefix_rows(&res);
    Ok(Outcome {
        result: to_value(&res)?,
        csv: sweep_csv(&rows),
        tolerances: chain_tolerances(),
        passed: true,
    })
}

fn sweep(a: &ChainArgs) -> Result<Outcome, Failure> {
    let mut spec = chain_spec(a)?;
    if a.input.is_none() && a.length.is_none() {
        if let ChainLinks::Identical { count, .. } = &mut spec.links {
            *count = 20;
        }
    }
    let res = spec.run()?;
    let rows = prefix_rows(&res);
    Ok(Outcome {
        result: json!({ "rows": rows }),
        csv: sweep_csv(&rows),
        tolerances: chain_tolerances(),
        passed: true,
    })
}

fn scan(a: &ScanArgs, seed: u64) -> Result<Outcome, Failure> {
    let tol = non_negative("tol-violation", a.tol_violation)?.unwrap_or(VIOLATION_TOL);
    let config = match &a.input {
        Some(path) => read_json::<ScanConfig>(path)?,
        None => ScanConfig {
            dims: a.dims.clone(),
            samples: a.samples,
            alpha: positive("alpha", a.alpha)?.unwrap_or_else(alpha_threshold),
            seed,
        },
    };
    let rep = sample_monogamy_scan_tol(&config.dims, config.samples, config.alpha, config.seed, tol)?;
    let mut csv = vec![row(["bin_lo", "bin_hi", "count"])];
    let h = &rep.histogram;
    let width = (h.hi - h.lo) / h.counts.len() as f64;
    for (i, c) in h.counts.iter().enumerate() {
        let lo = h.lo + width * i as f64;
        csv.push(vec![csv_f64(lo), csv_f64(lo + width), c.to_string()]);
    }
    if let Some(w) = &rep.warning {
        eprintln!("qchain: warning: {w}");
    }
    Ok(Outcome {
        result: to_value(&rep)?,
        csv,
        tolerances: BTreeMap::from([("violation", tol)]),
        passed: true,
    })
}

fn grid(a: &GridArgs) -> Result<Outcome, Failure> {
    let tol = non_negative("tol-grid", a.tol_grid)?.unwrap_or(GRID_TOL);
    let alpha = positive("alpha", a.alpha)?.unwrap_or_else(alpha_threshold);
    let rep = check_ineq_xya_grid_tol(a.a, a.b, alpha, a.grid, tol)?;
    let mut csv = vec![row(["quantity", "value"])];
    for (k, v) in [
        ("g_bound", rep.g_bound),
        ("max_excess", rep.max_excess),
        ("violations", rep.violations as f64),
    ] {
        csv.push(vec![k.to_string(), csv_f64(v)]);
    }
    Ok(Outcome {
        result: to_value(&rep)?,
        csv,
        tolerances: BTreeMap::from([("grid", tol)]),
        passed: true,
    })
}

fn monogamy_state(a: &StateArgs) -> Result<Outcome, Failure> {
    positive("alpha", a.alpha)?;
    let state = load_state(&a.input, &None)?;
    let party_a = a.party_a.clone().unwrap_or_else(|| state.layout().party_a().to_vec());
    let spec = measure_spec(parse_measure(&a.measure)?, a.alpha)?;
    let rep = ckw_residual(&state, &spec, &party_a)?;
    let mut csv = vec![row(["term", "subsystem", "value"]), row(["lhs", "", &csv_f64(rep.lhs)])];
    for t in &rep.rhs_terms {
        csv.push(row(["rhs", &t.subsystem.to_string(), &csv_f64(t.value)]));
    }
    csv.push(row(["residual", "", &csv_f64(rep.residual)]));
    let mut tolerances = state_tolerances();
    tolerances.insert("violation", VIOLATION_TOL);
    Ok(Outcome {
        result: to_value(&rep)?,
        csv,
        tolerances,
        passed: true,
    })
}

fn candidate(law: &CompositionLaw, name: &str, alpha: f64) -> Result<MultiplicativeReport, Failure> {
    let rep = match name.trim() {
        "identity" => verify_multiplicative_f(law, "x", |x| x),
        "power" => verify_multiplicative_f(law, &format!("x^{alpha}"), |x| x.powf(alpha)),
        "odds" => verify_multiplicative_f(law, "(1-x)/(1+x)", |x| (1.0 - x) / (1.0 + x)),
        other => {
            return Err(Failure::Validation(format!(
                "unknown candidate {other:?}; expected identity, power or odds"
            )))
        }
    };
    Ok(rep?)
}

fn groupop(a: &GroupopArgs) -> Result<Outcome, Failure> {
    let defaults = GroupTolerances::default();
    let tol = GroupTolerances {
        closure: non_negative("tol-closure", a.tol_closure)?.unwrap_or(defaults.closure),
        associativity: non_negative("tol-assoc", a.tol_assoc)?.unwrap_or(defaults.associativity),
        identity: non_negative("tol-identity", a.tol_identity)?.unwrap_or(defaults.identity),
        solvability: non_negative("tol-solve", a.tol_solve)?.unwrap_or(defaults.solvability),
    };
    let mut law = CompositionLaw::builtin(&a.law)?;
    if let Some(n) = a.grid {
        law = law.with_grid(n)?;
    }
    let group = check_group_operation(&law, &tol)?;
    let necessary = necessary_conditions_check(&law)?;
    let multiplicative = a
        .candidates
        .iter()
        .map(|c| candidate(&law, c, a.alpha))
        .collect::<Result<Vec<_>, _>>()?;

    let mut csv = vec![row(["check", "passed", "max_defect"])];
    for (name, r) in [
        ("closure", &group.closure),
        ("associativity", &group.associativity),
        ("solvability_interior", &group.solvability.interior),
        ("solvability_endpoint", &group.solvability.endpoint),
    ] {
        csv.push(row([name, &r.passed.to_string(), &csv_f64(r.max_defect)]));
    }
    csv.push(row([
        "identity",
        &group.identity.passed.to_string(),
        &csv_f64(group.identity.max_defect),
    ]));
    for (name, c) in [
        ("increasing_first", &necessary.increasing_first),
        ("increasing_second", &necessary.increasing_second),
        ("zero_annihilation", &necessary.zero_annihilation),
        ("min_bound", &necessary.min_bound),
    ] {
        csv.push(row([name, &c.passed.to_string(), ""]));
    }
    for m in &multiplicative {
        csv.push(row([
            &format!("f={}", m.f),
            &m.passed.to_string(),
            &csv_f64(m.max_deviation),
        ]));
    }
    Ok(Outcome {
        result: json!({
            "group": to_value(&group)?,
            "necessary": to_value(&necessary)?,
            "multiplicative": to_value(&multiplicative)?,
        }),
        csv,
        tolerances: BTreeMap::from([
            ("closure", tol.closure),
            ("associativity", tol.associativity),
            ("identity", tol.identity),
            ("solvability", tol.solvability),
            ("multiplicative", MULTIPLICATIVE_TOL),
        ]),
        passed: true,
    })
}

fn gaussian(a: &GaussianArgs) -> Result<Outcome, Failure> {
    let cm = match (&a.input, a.r) {
        (Some(path), _) => CovarianceMatrix::try_from(read_json::<CmFile>(path)?)?,
        (None, Some(r)) => tmsvs_cm(r)?,
        (None, None) => return Err(Failure::Validation("--input or --r is required".into())),
    };
    let validation = validate_cm(cm.gamma());
    let nu = symplectic_eigenvalues(cm.gamma())?;
    let pt = cm_partial_transpose(cm.gamma(), &a.modes_a)?;
    let nu_pt = symplectic_eigenvalues(&pt)?;
    let chi = cm_ratio_negativity(&cm, &a.modes_a)?;
    let mut result = json!({
        "cm": to_value(&CmFile::from(&cm))?,
        "validation": to_value(&validation)?,
        "symplectic_eigenvalues": nu,
        "pt_symplectic_eigenvalues": nu_pt,
        "ratio_negativity": chi,
        "negativity": negativity_from_ratio(chi),
    });
    let mut csv = vec![row(["quantity", "value"]), row(["ratio_negativity", &csv_f64(chi)])];
    if let Some(r) = a.r {
        let spec = match a.cutoff {
            Some(n) => TmsvsSpec::with_cutoff(r, n)?,
            None => TmsvsSpec::new(r)?,
        };
        let fock = PtSpectrum::of_pure(&tmsvs_truncated(&spec)?)?.negativity();
        let fock_chi = fock / (fock + 1.0);
        result["analytic_ratio"] = json!(r.tanh());
        result["fock_ratio"] = json!(fock_chi);
        result["fock_cutoff"] = json!(spec.cutoff());
        result["fock_deviation"] = json!((fock_chi - chi).abs());
        csv.push(row(["analytic_ratio", &csv_f64(r.tanh())]));
        csv.push(row(["fock_ratio", &csv_f64(fock_chi)]));
    }
    Ok(Outcome {
        result,
        csv,
        tolerances: BTreeMap::from([("bona_fide", BONA_FIDE_TOL)]),
        passed: true,
    })
}

fn repro(a: &ReproArgs) -> Result<Outcome, Failure> {
    let only: Vec<String> = a.only.iter().map(|s| s.trim().to_string()).collect();
    let rep = run_repro(&only)?;
    let mut csv = vec![row([
        "fixture",
        "quantity",
        "computed",
        "expected",
        "tolerance",
        "passed",
    ])];
    for f in &rep.fixtures {
        for c in &f.checks {
            csv.push(vec![
                f.name.clone(),
                c.quantity.clone(),
                csv_f64(c.computed),
                csv_f64(c.expected),
                csv_f64(c.tolerance),
                c.passed.to_string(),
            ]);
        }
    }
    for f in &rep.fixtures {
        eprintln!("{} {}", if f.passed { "PASS" } else { "FAIL" }, f.name);
    }
    Ok(Outcome {
        result: to_value(&rep)?,
        csv,
        tolerances: BTreeMap::from([("exact", EXACT_TOL)]),
        passed: rep.all_passed,
    })
}
