use nalgebra::DMatrix;
use proptest::prelude::*;
use qchain_core::linalg::C64;
use qchain_core::measures::{concurrence_pure, g_concurrence_pure, MeasureKind, PtSpectrum};
use qchain_core::states::{pure_from_schmidt, tmsvs_truncated, TmsvsSpec};
use qchain_core::swapping::{
    chain_compose, chain_fock_crosscheck, chain_sweep, characteristic_length, swap, LinkResource,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn random_distribution(rng: &mut ChaCha20Rng, d: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Average G-concurrence after a generalized Bell measurement on the middle
/// pair of `|a>|b>`: `d * sum_k |det M_k|^(2/d)` with `M_k` the unnormalized
/// outer-pair amplitude matrix for outcome `k`.
fn bell_measurement_average(a: &[f64], b: &[f64]) -> f64 {
    let d = a.len();
    let omega = |k: usize| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64);
    let mut total = 0.0;
    for m in 0..d {
        for s in 0..d {
            // <Phi_ms| = d^{-1/2} sum_j omega^{-mj} <j| <j+s|
            let mk = DMatrix::from_fn(d, d, |i, k| {
                if (i + s) % d != k {
                    return C64::new(0.0, 0.0);
                }
                C64::new((a[i] * b[k]).sqrt() / (d as f64).sqrt(), 0.0) * omega(m * i).conj()
            });
            total += mk.determinant().norm().powf(2.0 / d as f64);
        }
    }
    d as f64 * total
}

#[test]
fn qubit_swap_multiplies_concurrence() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for _ in 0..500 {
        let a = LinkResource::qubit_from_concurrence(rng.random_range(0.0..1.0)).unwrap();
        let b = LinkResource::qubit_from_concurrence(rng.random_range(0.0..1.0)).unwrap();
        let out = swap(&a, &b).unwrap();
        let expected = a.native_value() * b.native_value();
        assert!((out.native_value() - expected).abs() < 1e-10);
        let LinkResource::QubitPure { lambda } = out else {
            panic!()
        };
        let dense = concurrence_pure(&pure_from_schmidt(&lambda, 2, 2).unwrap()).unwrap();
        assert!((dense - expected).abs() < 1e-6);
        let (LinkResource::QubitPure { lambda: la }, LinkResource::QubitPure { lambda: lb }) = (&a, &b) else {
            panic!()
        };
        assert!((bell_measurement_average(la, lb) - expected).abs() < 1e-10);
    }
}

#[test]
fn qudit_swap_multiplies_g_concurrence() {
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    for _ in 0..500 {
        let d = rng.random_range(2..=4);
        let la = random_distribution(&mut rng, d);
        let lb = random_distribution(&mut rng, d);
        let (a, b) = (
            LinkResource::qudit(la.clone()).unwrap(),
            LinkResource::qudit(lb.clone()).unwrap(),
        );
        let expected = a.native_value() * b.native_value();
        let out = swap(&a, &b).unwrap();
        assert!((out.native_value() - expected).abs() < 1e-10, "d={d}");
        let LinkResource::QuditPure { lambda } = out else {
            panic!()
        };
        assert!((g_concurrence_pure(&lambda, d).unwrap() - expected).abs() < 1e-6);
        assert!((bell_measurement_average(&la, &lb) - expected).abs() < 1e-9, "d={d}");
    }
}

#[test]
fn tmsvs_swap_multiplies_ratio_negativity() {
    let mut rng = ChaCha20Rng::seed_from_u64(13);
    for _ in 0..500 {
        let (r1, r2) = (rng.random_range(0.05..1.2), rng.random_range(0.05..1.2));
        let a = LinkResource::tmsvs(r1).unwrap();
        let b = LinkResource::tmsvs(r2).unwrap();
        let LinkResource::Tmsvs { r } = swap(&a, &b).unwrap() else {
            panic!()
        };
        let expected = r1.tanh() * r2.tanh();
        assert!((r.tanh() - expected).abs() < 1e-10);
        let psi = tmsvs_truncated(&TmsvsSpec::new(r).unwrap()).unwrap();
        let n = PtSpectrum::of_pure(&psi).unwrap().negativity();
        assert!((n / (n + 1.0) - expected).abs() < 1e-6);
    }
}

#[test]
fn characteristic_length_is_independent_of_l() {
    for link in [
        LinkResource::tmsvs(0.5).unwrap(),
        LinkResource::qubit_from_concurrence(0.8).unwrap(),
        LinkResource::qudit(vec![0.5, 0.3, 0.2]).unwrap(),
    ] {
        let measure = link.kind().native_measure();
        let xi = characteristic_length(link.native_value()).unwrap();
        let rows = chain_sweep(&link, 20, measure, None).unwrap();
        for row in &rows {
            assert!((row.xi - xi).abs() < 1e-10 * xi, "l={}: {} vs {xi}", row.l, row.xi);
        }
        assert!(rows.windows(2).all(|w| w[1].value < w[0].value));
    }
}

#[test]
fn unit_links_have_infinite_length() {
    let link = LinkResource::qubit_from_concurrence(1.0).unwrap();
    let res = chain_compose(&[link.clone(), link], MeasureKind::Concurrence, None).unwrap();
    assert_eq!(res.end_to_end, 1.0);
    assert!(res.characteristic_length.is_infinite());
    let json = serde_json::to_value(&res).unwrap();
    assert_eq!(json["characteristic_length"], "inf");
}

#[test]
fn composite_fock_state_matches_rule() {
    let check = chain_fock_crosscheck(0.5, 5, 40).unwrap();
    assert!(check.deviation < 1e-8, "{check:?}");
    let squared = chain_compose(
        &vec![LinkResource::tmsvs(0.5).unwrap(); 5],
        MeasureKind::AlphaRatio,
        Some(2.0),
    )
    .unwrap();
    let plain = chain_compose(&vec![LinkResource::tmsvs(0.5).unwrap(); 5], MeasureKind::Ratio, None).unwrap();
    assert!((squared.end_to_end - plain.end_to_end.powi(2)).abs() < 1e-15);
    for (alpha, dev) in &check.alpha_deviations {
        assert!(*dev < 1e-8, "alpha={alpha}: {dev}");
    }
}

#[test]
fn gauge_redundancy_of_measures() {
    // every alpha-ratio chain is the ratio chain raised to alpha
    let links: Vec<LinkResource> = [0.3, 0.7, 1.1]
        .iter()
        .map(|&r| LinkResource::tmsvs(r).unwrap())
        .collect();
    let base = chain_compose(&links, MeasureKind::Ratio, None).unwrap();
    for alpha in [0.5, 1.0, 2.0, 3.191] {
        let res = chain_compose(&links, MeasureKind::AlphaRatio, Some(alpha)).unwrap();
        assert!((res.end_to_end - base.end_to_end.powf(alpha)).abs() < 1e-12);
        assert!((res.characteristic_length - base.characteristic_length / alpha).abs() < 1e-9);
    }
}

#[test]
fn mixed_kinds_are_rejected() {
    let links = [
        LinkResource::tmsvs(0.5).unwrap(),
        LinkResource::qubit_from_concurrence(0.5).unwrap(),
    ];
    assert!(chain_compose(&links, MeasureKind::Ratio, None).is_err());
    assert!(swap(&links[0], &links[1]).is_err());
    let qudits = [
        LinkResource::qudit(vec![0.5, 0.5]).unwrap(),
        LinkResource::qudit(vec![0.4, 0.3, 0.3]).unwrap(),
    ];
    assert!(swap(&qudits[0], &qudits[1]).is_err());
    assert!(LinkResource::tmsvs(0.5)
        .unwrap()
        .measure_value(MeasureKind::Negativity, None)
        .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn swapping_is_associative(r in prop::collection::vec(0.05f64..2.0, 3)) {
        let l: Vec<LinkResource> = r.iter().map(|&x| LinkResource::tmsvs(x).unwrap()).collect();
        let left = swap(&swap(&l[0], &l[1]).unwrap(), &l[2]).unwrap();
        let right = swap(&l[0], &swap(&l[1], &l[2]).unwrap()).unwrap();
        prop_assert!((left.native_value() - right.native_value()).abs() < 1e-12);
    }

    #[test]
    fn qubit_swapping_is_associative(c in prop::collection::vec(0.0f64..=1.0, 3)) {
        let l: Vec<LinkResource> = c.iter().map(|&x| LinkResource::qubit_from_concurrence(x).unwrap()).collect();
        let left = swap(&swap(&l[0], &l[1]).unwrap(), &l[2]).unwrap();
        let right = swap(&l[0], &swap(&l[1], &l[2]).unwrap()).unwrap();
        prop_assert!((left.native_value() - right.native_value()).abs() < 1e-12);
    }

    #[test]
    fn longer_chains_decay(r in 0.05f64..2.0, l in 1usize..30) {
        let link = LinkResource::tmsvs(r).unwrap();
        let short = chain_compose(&vec![link.clone(); l], MeasureKind::Ratio, None).unwrap();
        let long = chain_compose(&vec![link; l + 1], MeasureKind::Ratio, None).unwrap();
        prop_assert!(long.end_to_end < short.end_to_end);
    }
}
