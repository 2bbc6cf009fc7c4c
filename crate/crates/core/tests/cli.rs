use std::fs;
use std::path::{Path, PathBuf};

use dia_lab::cli::{self, RunConfig};

const SMALL: &str = "samples = 50\ndepths = [1, 2, 5, 20]\n\
[ou]\nt_max = 10.0\nn_steps = 101\nmax_lag = 10\n\
[oscillator]\nt_max = 10.0\nn_steps = 1001\n\
[wave]\nxi_max = 1.0\nn_steps = 1001\nsigma_table_points = 10\n";

struct Run {
    _tmp: tempfile::TempDir,
    out: PathBuf,
    code: i32,
}

fn run_with(command: &str, toml: &str, extra: &[&str]) -> Run {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("run.toml");
    fs::write(&config, toml).unwrap();
    let out = tmp.path().join("out");
    let mut args = vec![
        "dia-lab",
        command,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--quiet",
    ];
    args.extend_from_slice(extra);
    let code = cli::run(args);
    Run { _tmp: tmp, out, code }
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, rows)
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let (header, rows) = read_csv(path);
    let j = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j].parse().unwrap()).collect()
}

#[test]
fn invalid_configs_exit_with_two() {
    assert_eq!(run_with("ou", "[ou]\nlambda = -1.0\n", &[]).code, 2);
    assert_eq!(run_with("ou", "unknown_key = 3\n", &[]).code, 2);
    assert_eq!(run_with("green", "depths = [3, 2]\n", &[]).code, 2);
    assert_eq!(run_with("green", SMALL, &["--depths", "5,5"]).code, 2);
    let missing = cli::run(["dia-lab", "ou", "--config", "/nonexistent/run.toml"]);
    assert_eq!(missing, 2);
    assert_eq!(cli::run(["dia-lab", "bogus"]), 2);
}

#[test]
fn ou_without_noise_and_headers() {
    let run = run_with("ou", &SMALL.replace("[ou]\n", "[ou]\nsigma = 0.0\n"), &[]);
    assert_eq!(run.code, 0);
    let (header, rows) = read_csv(&run.out.join("paths.csv"));
    assert_eq!(header, ["t", "path_0", "path_1", "path_2", "path_3", "path_4"]);
    assert_eq!(rows.len(), 101);
    for row in &rows {
        assert!(row[1..].iter().all(|v| v.parse::<f64>().unwrap() == 0.0));
    }
    let (header, rows) = read_csv(&run.out.join("autocorrelation.csv"));
    assert_eq!(header, ["lag_index", "tau", "estimate", "std_error", "predicted"]);
    assert_eq!(rows.len(), 11);
}

#[test]
fn written_config_reproduces_the_run() {
    let run = run_with("ou", SMALL, &["--seed", "42", "--samples", "20"]);
    assert_eq!(run.code, 0);
    let written = RunConfig::load(&run.out.join("config.toml")).unwrap();
    assert_eq!(written.seed, 42);
    assert_eq!(written.samples, 20);
    assert_eq!(written.ou.n_steps, 101);
    assert_eq!(RunConfig::parse(&written.to_toml()).unwrap(), written);

    let summary = fs::read_to_string(run.out.join("summary.txt")).unwrap();
    assert!(summary.starts_with("command: ou\n"));
    assert!(summary.lines().all(|l| l.contains(": ")));
}

#[test]
fn green_without_noise_is_a_cosine() {
    let toml = SMALL.replace("[oscillator]\n", "[oscillator]\nsigma = 0.0\n");
    let run = run_with("green", &toml, &[]);
    assert_eq!(run.code, 0);
    let routes = run.out.join("routes.csv");
    let t = column(&routes, "t");
    for name in ["volterra", "monte_carlo", "depth_1", "depth_2", "depth_20"] {
        let v = column(&routes, name);
        for (t, v) in t.iter().zip(&v) {
            assert!((v - (0.2 * t).cos()).abs() < 1e-5, "{name} at t = {t}");
        }
    }
    let (header, _) = read_csv(&run.out.join("fits.csv"));
    assert_eq!(header, ["route", "amplitude", "rate", "omega", "phase", "rms_residual", "behavior", "status"]);
}

#[test]
fn wave_ordering_table() {
    let run = run_with("wave", SMALL, &[]);
    assert_eq!(run.code, 0);
    let path = run.out.join("attenuation_ordering.csv");
    let (_, rows) = read_csv(&path);
    assert_eq!(rows.len(), 10);
    let (p, d) = (column(&path, "perturbative_rate"), column(&path, "dia_rate"));
    assert!(p.iter().zip(&d).all(|(p, d)| d > p));
    assert!(rows.iter().all(|r| r[3] == "true"));
    assert!(run.out.join("rates.csv").exists());
}

#[test]
fn residual_vanishes_without_noise() {
    let toml = SMALL
        .replace("[oscillator]\n", "[oscillator]\nsigma = 0.0\n")
        .replace("[wave]\n", "[wave]\nsigma = 0.0\n");
    let run = run_with("residual", &toml, &[]);
    assert_eq!(run.code, 0);
    let by_depth = run.out.join("residual_by_depth.csv");
    assert!(column(&by_depth, "max_residual").iter().all(|&r| r <= 1e-15));
    assert!(column(&by_depth, "max_conjugate_defect").iter().all(|&r| r == 0.0));
}

/// Set `UPDATE_GOLDEN=1` to regenerate the frozen outputs.
#[test]
fn golden_outputs() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let cases = [
        ("ou", vec!["paths.csv", "autocorrelation.csv"]),
        ("residual", vec!["residual_by_depth.csv", "residual_points.csv"]),
    ];
    for (command, files) in cases {
        let run = run_with(command, SMALL, &["--seed", "3", "--threads", "2"]);
        assert_eq!(run.code, 0);
        for file in files {
            let got = fs::read_to_string(run.out.join(file)).unwrap();
            let frozen = golden.join(format!("{command}_{file}"));
            if update {
                fs::create_dir_all(&golden).unwrap();
                fs::write(&frozen, &got).unwrap();
            } else {
                let want = fs::read_to_string(&frozen).unwrap();
                assert!(got == want, "{command}/{file} differs from {}", frozen.display());
            }
        }
    }
}
