use dia_lab::closed_forms::{phase_average_closed, PhaseBranch};
use dia_lab::ou::{estimate_autocorrelation, generate_ou_path, monte_carlo_phase_average, OUPath};
use dia_lab::{Error, OUParams, RngSeed, TimeGrid};
use proptest::prelude::*;
use rayon::prelude::*;

fn paths(params: &OUParams, grid: &TimeGrid, n: u64, seed: u64) -> Vec<OUPath> {
    (0..n)
        .into_par_iter()
        .map(|i| generate_ou_path(params, grid, RngSeed::new(seed, i)).unwrap())
        .collect()
}

#[test]
fn zero_sigma_gives_zero_path() {
    let grid = TimeGrid::new(5.0, 51).unwrap();
    let p = generate_ou_path(&OUParams::new(0.0, 1.0).unwrap(), &grid, RngSeed::new(1, 0)).unwrap();
    assert!(p.values.iter().all(|&v| v == 0.0));
}

#[test]
fn lambda_zero_is_rejected() {
    assert!(matches!(OUParams::new(1.0, 0.0), Err(Error::Parameter { field: "lambda", .. })));
    assert!(OUParams::new(f64::NAN, 1.0).is_err());
}

#[test]
fn marginal_variance_is_stationary() {
    let params = OUParams::new(1.0, 1.0).unwrap();
    let grid = TimeGrid::new(3.0, 7).unwrap();
    let ps = paths(&params, &grid, 100_000, 42);
    let n = ps.len() as f64;
    for j in 0..grid.n_steps() {
        let sq: Vec<f64> = ps.iter().map(|p| p.values[j] * p.values[j]).collect();
        let mean = sq.iter().sum::<f64>() / n;
        let var = sq.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        assert!((mean - 1.0).abs() <= 4.0 * se, "point {j}: {mean} +- {se}");
    }
}

#[test]
fn same_seed_same_bits() {
    let params = OUParams::new(0.3, 0.7).unwrap();
    let grid = TimeGrid::new(10.0, 101).unwrap();
    let a = generate_ou_path(&params, &grid, RngSeed::new(9, 4)).unwrap();
    let b = generate_ou_path(&params, &grid, RngSeed::new(9, 4)).unwrap();
    let c = generate_ou_path(&params, &grid, RngSeed::new(9, 5)).unwrap();
    assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
    assert_ne!(a.values, c.values);
}

#[test]
fn autocorrelation_examples() {
    let params = OUParams::new(0.5, 1.0).unwrap();
    let grid = TimeGrid::new(20.0, 201).unwrap();
    let ps = paths(&params, &grid, 2000, 3);
    let zero = estimate_autocorrelation(&ps, 0).unwrap();
    assert!((zero.value - 0.25).abs() <= 3.0 * zero.std_error, "{zero:?}");
    // tau = 1/lambda = 1 is lag 10
    let one = estimate_autocorrelation(&ps, 10).unwrap();
    let expect = 0.25 * (-1.0_f64).exp();
    assert!((one.value - expect).abs() <= 3.0 * one.std_error, "{one:?}");

    let flat = OUPath {
        grid,
        values: vec![0.0; grid.n_steps()],
    };
    assert_eq!(estimate_autocorrelation(&[flat], 3).unwrap().value, 0.0);
    assert!(matches!(estimate_autocorrelation(&[], 0), Err(Error::Input(_))));
}

#[test]
fn log_autocorrelation_slope_is_minus_lambda() {
    let lambda = 1.0;
    let params = OUParams::new(1.0, lambda).unwrap();
    let grid = TimeGrid::new(10.0, 101).unwrap();
    let ps = paths(&params, &grid, 100_000, 8);
    let pts: Vec<(f64, f64)> = (0..=10)
        .map(|lag| (grid.point(lag), estimate_autocorrelation(&ps, lag).unwrap().value.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope + lambda).abs() <= 0.05 * lambda, "slope {slope}");
}

#[test]
fn phase_average_without_noise_is_one() {
    let grid = TimeGrid::new(5.0, 51).unwrap();
    let s = monte_carlo_phase_average(&OUParams::new(0.0, 1.0).unwrap(), &grid, 4, 1).unwrap();
    assert!(s.mean.iter().all(|z| z.re == 1.0 && z.im == 0.0));
}

#[test]
fn phase_average_regimes() {
    let grid = TimeGrid::new(5.0, 501).unwrap();
    let last = grid.n_steps() - 1;
    for (lambda, branch) in [(0.1, PhaseBranch::SmallLambda), (10.0, PhaseBranch::LargeLambda)] {
        let ou = OUParams::new(0.2, lambda).unwrap();
        let s = monte_carlo_phase_average(&ou, &grid, 20_000, 17).unwrap();
        let exact = phase_average_closed(&ou, 5.0, PhaseBranch::Exact);
        let limit = phase_average_closed(&ou, 5.0, branch);
        let se = s.std_error_re[last];
        assert!((s.mean[last].re - exact).abs() <= 3.0 * se, "lambda {lambda}");
        // the limit branch differs from the exact law by its own truncation only
        let truncation = (limit - exact).abs();
        assert!((s.mean[last].re - limit).abs() <= 3.0 * se + truncation);
        for (z, se_im) in s.mean.iter().zip(&s.std_error_im) {
            assert!(z.im.abs() <= 4.0 * se_im.max(1e-300));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn paths_are_finite_and_sized(sigma in 0.0..5.0f64, lambda in 0.01..50.0f64, n in 2usize..200, seed: u64) {
        let grid = TimeGrid::new(3.0, n).unwrap();
        let p = generate_ou_path(&OUParams::new(sigma, lambda).unwrap(), &grid, RngSeed::new(seed, 0)).unwrap();
        prop_assert_eq!(p.values.len(), n);
        prop_assert!(p.values.iter().all(|v| v.is_finite()));
    }
}
