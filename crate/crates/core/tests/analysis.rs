use dia_lab::analysis::*;
use dia_lab::closed_forms::{dia_attenuation, dia_freq_factor, dia_wave, Amplitude};
use dia_lab::{Error, RealSeries, TimeGrid, WaveParams};
use proptest::prelude::*;

fn damped(a: f64, rate: f64, omega: f64, phase: f64, t_max: f64, n: usize) -> RealSeries {
    RealSeries::from_fn(TimeGrid::new(t_max, n).unwrap(), |t| {
        a * (-rate * t).exp() * (omega * t + phase).cos()
    })
}

#[test]
fn fit_examples() {
    let f = fit_damped_oscillation(&damped(1.0, 0.05, 0.2, 0.0, 200.0, 4001)).unwrap();
    assert!((f.rate - 0.05).abs() <= 1e-3 * 0.05);
    assert!((f.omega - 0.2).abs() <= 1e-3 * 0.2);

    let f = fit_damped_oscillation(&damped(1.0, 0.0, 0.2, 0.0, 200.0, 4001)).unwrap();
    assert!(f.rate.abs() < 1e-6);

    let grid = TimeGrid::new(10.0, 101).unwrap();
    let short = RealSeries::from_fn(grid, |t| (0.2 * t).cos());
    assert!(matches!(fit_damped_oscillation(&short), Err(Error::Input(_))));
}

#[test]
fn closed_form_wave_rate_is_recovered() {
    let w = WaveParams::new(10.0, 0.1, 0.05).unwrap();
    let grid = TimeGrid::new(40.0, 40_001).unwrap();
    let e = RealSeries::from_fn(grid, |x| dia_wave(&w, x, Amplitude::Normalized).unwrap());
    let f = fit_damped_oscillation(&e).unwrap();
    let rate = dia_attenuation(0.1, 0.05);
    assert!((f.rate - rate).abs() <= 0.01 * rate, "{} vs {rate}", f.rate);
    assert!((f.omega - 10.0 * dia_freq_factor(0.1).unwrap()).abs() < 1e-6);
}

#[test]
fn metric_examples() {
    let g = TimeGrid::new(5.0, 51).unwrap();
    let a = RealSeries::from_fn(g, |t| (0.7 * t).cos());
    let b = RealSeries::from_fn(g, |t| (0.7 * t).cos() + 0.1);
    let m = compare_series(&b, &a).unwrap();
    assert!((m.max_abs - 0.1).abs() < 1e-15 && (m.rms - 0.1).abs() < 1e-15);
    let other = RealSeries::from_fn(TimeGrid::new(5.0, 52).unwrap(), f64::cos);
    assert!(matches!(compare_series(&a, &other), Err(Error::Input(_))));
}

#[test]
fn table_output_is_stable_and_parses() {
    let mut t = Table::new(["t", "value", "flag", "label"]);
    t.push(vec![0.0.into(), 0.1.into(), true.into(), "plain".into()]);
    t.push(vec![1.5.into(), f64::NAN.into(), false.into(), "with, comma".into()]);
    t.push(vec![3.0.into(), f64::NEG_INFINITY.into(), false.into(), "\"quoted\"".into()]);
    let mut first = Vec::new();
    emit_table(&t, &mut first).unwrap();
    let mut second = Vec::new();
    emit_table(&t, &mut second).unwrap();
    assert_eq!(first, second);
    assert!(!first.contains(&b'\r'));

    let mut reader = csv::Reader::from_reader(first.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["t", "value", "flag", "label"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 0.1);
    assert!(rows[1][1].parse::<f64>().unwrap().is_nan());
    assert_eq!(&rows[1][3], "with, comma");
    assert_eq!(rows[2][1].parse::<f64>().unwrap(), f64::NEG_INFINITY);
    assert_eq!(&rows[2][3], "\"quoted\"");
}

#[test]
fn write_table_reports_path() {
    let t = Table::new(["x"]);
    let err = write_table(&t, std::path::Path::new("/nonexistent/dir/x.csv")).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/dir/x.csv"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fit_round_trip(a in 0.5..2.0f64, rate in 0.0..0.1f64, omega in 0.5..3.0f64, phase in 0.0..6.0f64) {
        let f = fit_damped_oscillation(&damped(a, rate, omega, phase, 60.0, 6001)).unwrap();
        prop_assert!((f.omega - omega).abs() <= 5e-3 * omega);
        prop_assert!((f.rate - rate).abs() <= 5e-3 * rate.max(1e-3));
        prop_assert!((f.amplitude - a).abs() <= 5e-3 * a);
    }

    #[test]
    fn metric_axioms(xs in prop::collection::vec(-5.0..5.0f64, 20), ys in prop::collection::vec(-5.0..5.0f64, 20),
                     zs in prop::collection::vec(-5.0..5.0f64, 20)) {
        let g = TimeGrid::new(1.0, 20).unwrap();
        let s = |v: &Vec<f64>| RealSeries::new(g, v.clone()).unwrap();
        let (x, y, z) = (s(&xs), s(&ys), s(&zs));
        let d = |a: &RealSeries, b: &RealSeries| compare_series(a, b).unwrap();
        prop_assert_eq!(d(&x, &x).max_abs, 0.0);
        prop_assert_eq!(d(&x, &y).max_abs, d(&y, &x).max_abs);
        prop_assert_eq!(d(&x, &y).rms, d(&y, &x).rms);
        prop_assert!(d(&x, &z).max_abs <= d(&x, &y).max_abs + d(&y, &z).max_abs + 1e-12);
        prop_assert!(d(&x, &z).rms <= d(&x, &y).rms + d(&y, &z).rms + 1e-12);
    }
}
