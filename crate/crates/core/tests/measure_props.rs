use proptest::prelude::*;
use qchain_core::linalg::{kron, ComplexMatrix, SubsystemLayout, C64};
use qchain_core::measures::{
    concurrence_pure, f_negativity, is_ppt, negativity, ratio_negativity, ratio_negativity_pure, MonotoneFn, PtSpectrum,
};
use qchain_core::repro::{nonconvexity_triple, povm_branches, povm_input_state, povm_kraus};
use qchain_core::states::{
    pure_from_schmidt, random_density_matrix, random_density_matrix_stream, random_haar_pure, random_haar_pure_stream,
    tmsvs_truncated, DensityMatrix, PureState, TmsvsSpec, MAX_TRUNCATION_DEFICIT,
};

fn bipartite() -> impl Strategy<Value = SubsystemLayout> {
    (2usize..=3, 2usize..=3).prop_map(|(a, b)| SubsystemLayout::bipartite(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constructors_produce_valid_states(layout in bipartite(), rank in 1usize..=9, seed in any::<u64>()) {
        let rank = rank.min(layout.total_dim());
        let rho = random_density_matrix(&layout, rank, seed).unwrap();
        prop_assert!(DensityMatrix::new(rho.matrix().clone(), layout.clone()).is_ok());
        let psi = random_haar_pure(&layout, seed);
        prop_assert!(PureState::new(psi.amplitudes().to_vec(), layout).is_ok());
    }

    #[test]
    fn schmidt_coefficients_roundtrip(raw in prop::collection::vec(0.01f64..1.0, 2..=4)) {
        let total: f64 = raw.iter().sum();
        let mut lambda: Vec<f64> = raw.iter().map(|x| x / total).collect();
        lambda.sort_by(|a, b| b.total_cmp(a));
        let d = lambda.len();
        let psi = pure_from_schmidt(&lambda, d, d).unwrap();
        let back = psi.schmidt().unwrap().coefficients;
        for (a, b) in back.iter().zip(&lambda) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn ratio_follows_negativity_ordering(layout in bipartite(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let r1 = random_density_matrix(&layout, 2, s1).unwrap();
        let r2 = random_density_matrix(&layout, 2, s2).unwrap();
        let (n1, n2) = (negativity(&r1).unwrap(), negativity(&r2).unwrap());
        let (c1, c2) = (ratio_negativity(&r1).unwrap(), ratio_negativity(&r2).unwrap());
        prop_assert_eq!((c1 - c2).partial_cmp(&0.0), (n1 - n2).partial_cmp(&0.0));
    }

    #[test]
    fn separable_mixtures_are_ppt(
        layout in bipartite(),
        weights in prop::collection::vec(0.05f64..1.0, 1..=4),
        seed in any::<u64>(),
    ) {
        let (da, db) = (layout.dims()[0], layout.dims()[1]);
        let total: f64 = weights.iter().sum();
        // mixed local states as marginals of random pure states
        let local = |d: usize, index: u64| {
            let l = SubsystemLayout::bipartite(d, 2).unwrap();
            random_haar_pure_stream(&l, seed, index).reduced_a().unwrap()
        };
        let mut m = ComplexMatrix::zeros(da * db, da * db);
        for (i, w) in weights.iter().enumerate() {
            let term = kron(&local(da, 2 * i as u64), &local(db, 2 * i as u64 + 1));
            m = m.add(&term.scale(C64::new(w / total, 0.0))).unwrap();
        }
        let rho = DensityMatrix::new(m, layout).unwrap();
        prop_assert!(negativity(&rho).unwrap() <= 1e-10);
        prop_assert!(is_ppt(&rho).unwrap());
    }

    #[test]
    fn ratio_range_and_ppt(layout in bipartite(), rank in 1usize..=9, seed in any::<u64>()) {
        let rho = random_density_matrix(&layout, rank.min(layout.total_dim()), seed).unwrap();
        let chi = ratio_negativity(&rho).unwrap();
        prop_assert!((0.0..1.0).contains(&chi));
        prop_assert_eq!(chi == 0.0, is_ppt(&rho).unwrap());
    }

    #[test]
    fn pure_qubit_identities(seed in any::<u64>()) {
        let psi = random_haar_pure(&SubsystemLayout::bipartite(2, 2).unwrap(), seed);
        let c = concurrence_pure(&psi).unwrap();
        let rho = psi.density();
        let pt = PtSpectrum::of(&rho).unwrap();
        prop_assert!((pt.trace_norm - (1.0 + c)).abs() < 1e-10);
        prop_assert!((negativity(&rho).unwrap() - c / 2.0).abs() < 1e-10);
        prop_assert!((ratio_negativity(&rho).unwrap() - c / (c + 2.0)).abs() < 1e-10);
        let closed = ratio_negativity_pure(&psi.schmidt().unwrap().coefficients).unwrap();
        prop_assert!((closed - c / (c + 2.0)).abs() < 1e-10);
    }
}

/// Odds `(1 + chi)/(1 - chi)` equal the partial-transpose trace norm, which is
/// multiplicative over tensor products.
#[test]
fn threefold_composition_matches_product_of_odds() {
    let layout = SubsystemLayout::bipartite(2, 2).unwrap();
    for seed in 0..20 {
        let parts: Vec<DensityMatrix> = (0..3)
            .map(|k| random_density_matrix_stream(&layout, 2, seed, k).unwrap())
            .collect();
        let odds: f64 = parts
            .iter()
            .map(|r| {
                let c = ratio_negativity(r).unwrap();
                (1.0 + c) / (1.0 - c)
            })
            .product();
        let joint = parts[0].tensor(&parts[1]).tensor(&parts[2]);
        let chi = ratio_negativity(&joint).unwrap();
        let predicted = (odds - 1.0) / (odds + 1.0);
        assert!((chi - predicted).abs() < 1e-7, "seed {seed}: {chi} vs {predicted}");
    }
}

#[test]
fn truncation_converges_monotonically() {
    for r in [0.1, 0.5, 1.0, 1.5] {
        for n in [5, 10, 20, 40] {
            let small = TmsvsSpec::with_cutoff(r, n).unwrap();
            let big = TmsvsSpec::with_cutoff(r, n + 10).unwrap();
            if small.truncation_deficit() > MAX_TRUNCATION_DEFICIT {
                assert!(tmsvs_truncated(&small).is_err());
                continue;
            }
            let ns = PtSpectrum::of_pure(&tmsvs_truncated(&small).unwrap())
                .unwrap()
                .negativity();
            let nb = PtSpectrum::of_pure(&tmsvs_truncated(&big).unwrap())
                .unwrap()
                .negativity();
            // the truncated trace norm approaches e^{2r} like tanh(r)^(n+1)
            let bound = 10.0 * (2.0 * r).exp() * small.truncation_deficit().sqrt();
            assert!(nb >= ns, "r={r} n={n}");
            assert!(nb - ns < bound, "r={r} n={n}: {} vs {bound}", nb - ns);
            assert!(small.truncation_deficit() > big.truncation_deficit());
        }
    }
}

#[test]
fn nonconvexity_triple_values() {
    let (rho1, rho2, rho) = nonconvexity_triple();
    assert!(negativity(&rho1).unwrap().abs() < 1e-10);
    assert!((negativity(&rho2).unwrap() - 0.5).abs() < 1e-10);
    assert!((negativity(&rho).unwrap() - 0.25).abs() < 1e-10);
    assert!((PtSpectrum::of(&rho).unwrap().trace_norm - 1.5).abs() < 1e-10);

    let generators = [
        MonotoneFn::power(0.5).unwrap(),
        MonotoneFn::new("ln(2x+1)", |x| (2.0 * x + 1.0).ln()).unwrap(),
        MonotoneFn::ratio(),
    ];
    for f in &generators {
        let mixed = f_negativity(f, &rho).unwrap();
        let avg = 0.5 * (f_negativity(f, &rho1).unwrap() + f_negativity(f, &rho2).unwrap());
        assert!(mixed > avg, "{}: {mixed} <= {avg}", f.name());
    }
    let sqrt = &generators[0];
    assert!((f_negativity(sqrt, &rho).unwrap() - 0.5).abs() < 1e-10);
}

#[test]
fn povm_branch_values() {
    let psi = povm_input_state();
    let lambda = psi.schmidt().unwrap().coefficients;
    assert!((lambda[0] - 0.9).abs() < 1e-12 && (lambda[1] - 0.1).abs() < 1e-12);
    let b = povm_branches(&psi, &povm_kraus()).unwrap();
    assert!((b[0].probability - 0.26).abs() < 1e-10);
    assert!((b[1].probability - 0.74).abs() < 1e-10);
    assert!((b[0].negativity - 6.0 / 13.0).abs() < 1e-10);
    assert!((b[1].negativity - 6.0 / 37.0).abs() < 1e-10);
    let f4 = negativity(&psi.density()).unwrap().powi(4);
    assert!((f4 - 0.0081).abs() < 1e-10);
    let avg = b[0].probability * b[0].negativity.powi(4) + b[1].probability * b[1].negativity.powi(4);
    assert!((avg - (1296.0 / 109850.0 + 1296.0 / 2532650.0)).abs() < 1e-10);
}

#[test]
fn complex_phases_do_not_change_measures() {
    let layout = SubsystemLayout::bipartite(2, 2).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phased = PureState::new(
        vec![
            C64::new(s, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::from_polar(s, 1.234),
        ],
        layout,
    )
    .unwrap();
    assert!((ratio_negativity(&phased.density()).unwrap() - 1.0 / 3.0).abs() < 1e-12);
}
