use proptest::prelude::*;
use qchain_core::linalg::{
    hermitian_eigenvalues, kron, partial_trace, partial_transpose, schmidt_decompose, trace_norm_hermitian,
    ComplexMatrix, SubsystemLayout, C64,
};
use qchain_core::states::{random_density_matrix, random_haar_pure};

fn layout_strategy() -> impl Strategy<Value = SubsystemLayout> {
    prop::collection::vec(2usize..=3, 2..=3).prop_flat_map(|dims| {
        let n = dims.len();
        // non-empty strict subset as a bitmask
        (Just(dims), 1u32..((1 << n) - 1)).prop_map(move |(dims, mask)| {
            let party_a = (0..n).filter(|k| mask & (1 << k) != 0).collect();
            SubsystemLayout::new(dims, party_a).unwrap()
        })
    })
}

fn hermitian(n: usize, raw: &[f64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        m[(i, i)] = C64::new(raw[k], 0.0);
        k += 1;
        for j in i + 1..n {
            let z = C64::new(raw[k], raw[k + 1]);
            k += 2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn hermitian_on(layout: SubsystemLayout) -> impl Strategy<Value = (SubsystemLayout, ComplexMatrix)> {
    let n = layout.total_dim();
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |raw| (layout.clone(), hermitian(n, &raw)))
}

/// Characteristic polynomial coefficients by Faddeev-LeVerrier:
/// `det(xI - M) = x^n + c[1] x^(n-1) + ... + c[n]`.
fn char_poly(m: &ComplexMatrix) -> Vec<C64> {
    let n = m.rows();
    let mut c = vec![C64::new(1.0, 0.0); n + 1];
    let mut mk = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        let mut shifted = mk.clone();
        for i in 0..n {
            shifted[(i, i)] += c[k - 1];
        }
        mk = m.matmul(&shifted).unwrap();
        c[k] = -mk.trace() / k as f64;
    }
    c
}

/// Same coefficients from the roots: elementary symmetric polynomials.
fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k] += ck;
            next[k + 1] -= r * ck;
        }
        c = next;
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn partial_transpose_is_an_involution((layout, m) in layout_strategy().prop_flat_map(hermitian_on)) {
        let twice = partial_transpose(&partial_transpose(&m, &layout).unwrap(), &layout).unwrap();
        prop_assert_eq!(twice, m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partial_transpose_keeps_trace(layout in layout_strategy(), seed in any::<u64>()) {
        let rho = random_density_matrix(&layout, layout.total_dim(), seed).unwrap();
        let pt = partial_transpose(rho.matrix(), &layout).unwrap();
        prop_assert!((pt.trace() - rho.matrix().trace()).norm() < 1e-12);
    }

    #[test]
    fn trace_norm_is_multiplicative(l1 in layout_strategy(), l2 in layout_strategy(), s1 in any::<u64>(), s2 in any::<u64>()) {
        prop_assume!(l1.total_dim() * l2.total_dim() <= 144);
        let r1 = random_density_matrix(&l1, 2, s1).unwrap();
        let r2 = random_density_matrix(&l2, 2, s2).unwrap();
        let t1 = trace_norm_hermitian(&partial_transpose(r1.matrix(), &l1).unwrap()).unwrap();
        let t2 = trace_norm_hermitian(&partial_transpose(r2.matrix(), &l2).unwrap()).unwrap();
        let joint = l1.tensor(&l2);
        let t = trace_norm_hermitian(&partial_transpose(&kron(r1.matrix(), r2.matrix()), &joint).unwrap()).unwrap();
        prop_assert!(((t - t1 * t2) / (t1 * t2)).abs() < 1e-8, "{} vs {}", t, t1 * t2);
    }

    #[test]
    fn schmidt_roundtrip(layout in layout_strategy(), seed in any::<u64>()) {
        let psi = random_haar_pure(&layout, seed);
        let s = schmidt_decompose(psi.amplitudes(), &layout).unwrap();
        // the reconstruction is in (A, B) order; compare through the A|B matrix
        let rebuilt = s.reconstruct();
        let (da, db) = (layout.dim_a(), layout.dim_b());
        let dims = layout.dims();
        let strides: Vec<usize> = (0..dims.len()).map(|k| dims[k + 1..].iter().product()).collect();
        let mut overlap = C64::new(0.0, 0.0);
        for (i, amp) in psi.amplitudes().iter().enumerate() {
            let (mut a, mut b) = (0, 0);
            for (k, &d) in dims.iter().enumerate() {
                let digit = (i / strides[k]) % d;
                if layout.in_party_a(k) { a = a * d + digit } else { b = b * d + digit }
            }
            overlap += rebuilt[a * db + b].conj() * amp;
        }
        prop_assert!(overlap.norm() >= 1.0 - 1e-10);
        prop_assert!((s.coefficients.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert_eq!(s.coefficients.len(), da.min(db));
    }

    #[test]
    fn eigenvalues_match_characteristic_polynomial(n in 1usize..=4, raw in prop::collection::vec(-1.0f64..1.0, 16)) {
        let m = hermitian(n, &raw);
        let eig = hermitian_eigenvalues(&m).unwrap();
        prop_assert!(eig.windows(2).all(|w| w[0] <= w[1]));
        let expected = char_poly(&m);
        let got = poly_from_roots(&eig);
        for k in 0..=n {
            prop_assert!(expected[k].im.abs() < 1e-10);
            prop_assert!((expected[k].re - got[k]).abs() < 1e-10, "coefficient {}: {} vs {}", k, expected[k].re, got[k]);
        }
    }

    #[test]
    fn partial_trace_keeps_trace(layout in layout_strategy(), seed in any::<u64>()) {
        let rho = random_density_matrix(&layout, 2, seed).unwrap();
        let reduced = partial_trace(rho.matrix(), layout.dims(), &[0]).unwrap();
        prop_assert_eq!(reduced.rows(), layout.dims()[0]);
        prop_assert!((reduced.trace().re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sparse_tmsvs_sized_spectrum_is_fast() {
    // 3721-dimensional partial transpose made of 1x1 and 2x2 blocks
    use qchain_core::measures::PtSpectrum;
    use qchain_core::states::{tmsvs_truncated, TmsvsSpec};
    let start = std::time::Instant::now();
    let rho = tmsvs_truncated(&TmsvsSpec::with_cutoff(1.0, 60).unwrap())
        .unwrap()
        .density();
    let s = PtSpectrum::of(&rho).unwrap();
    assert_eq!(s.eigenvalues.len(), 61 * 61);
    assert!(start.elapsed().as_secs_f64() < 5.0);
}
