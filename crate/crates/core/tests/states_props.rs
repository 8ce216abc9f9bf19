//! Statistical checks of the Haar sampler against closed-form moments.

use qchain_core::linalg::SubsystemLayout;
use qchain_core::measures::PtSpectrum;
use qchain_core::states::random_haar_pure_stream;

const SAMPLES: u64 = 10_000;

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn two_qubit_negativity_mean() {
    let layout = SubsystemLayout::bipartite(2, 2).unwrap();
    let ns: Vec<f64> = (0..SAMPLES)
        .map(|i| {
            PtSpectrum::of_pure(&random_haar_pure_stream(&layout, 11, i))
                .unwrap()
                .negativity()
        })
        .collect();
    let (mean, se) = mean_and_stderr(&ns);
    assert!(mean > 0.2 && mean < 0.4, "mean {mean}");
    // Haar average concurrence is 3 pi / 16 and N = C / 2
    let exact = 3.0 * std::f64::consts::PI / 32.0;
    assert!((mean - exact).abs() < 5.0 * se, "mean {mean} vs {exact}, se {se}");
}

#[test]
fn marginal_averages_to_maximally_mixed() {
    let layout = SubsystemLayout::bipartite(2, 2).unwrap();
    let marginals: Vec<_> = (0..SAMPLES)
        .map(|i| random_haar_pure_stream(&layout, 5, i).reduced_a().unwrap())
        .collect();
    for r in 0..2 {
        for c in 0..2 {
            let expected = if r == c { 0.5 } else { 0.0 };
            let re: Vec<f64> = marginals.iter().map(|m| m[(r, c)].re).collect();
            let im: Vec<f64> = marginals.iter().map(|m| m[(r, c)].im).collect();
            for (part, target) in [(re, expected), (im, 0.0)] {
                let (mean, se) = mean_and_stderr(&part);
                assert!(
                    (mean - target).abs() <= 5.0 * se,
                    "entry ({r},{c}): {mean} vs {target}, se {se}"
                );
            }
        }
    }
}
