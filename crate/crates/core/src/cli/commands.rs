use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analysis::{compare_series, fit_damped_oscillation, write_table, Cell, EnvelopeFit, Table};
use crate::closed_forms::{self as cf, Amplitude, AppendixOrder};
use crate::error::{Error, Result};
use crate::laplace::{
    dia_approximant, functional_residual, invert_laplace_report, ApproximantSpec, LaplaceFunction, Model,
};
use crate::ou::{estimate_autocorrelation, generate_ou_path, OUPath, RngSeed};
use crate::series::RealSeries;
use crate::solvers;

use super::config::RunConfig;

/// Files written by one command plus its plain-text summary.
struct Report {
    dir: PathBuf,
    summary: String,
}

impl Report {
    fn new(config: &RunConfig, command: &str) -> Result<Self> {
        let dir = config.out.clone();
        fs::create_dir_all(&dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?;
        let report = Self {
            dir,
            summary: format!("command: {command}\n"),
        };
        report.write_file("config.toml", &config.to_toml())?;
        Ok(report)
    }

    fn write_file(&self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, text).map_err(|source| Error::Io { path, source })
    }

    fn table(&self, name: &str, table: &Table) -> Result<()> {
        write_table(table, &self.dir.join(name))
    }

    fn line(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.summary, "{key}: {value}");
    }

    fn finish(self) -> Result<String> {
        self.write_file("summary.txt", &self.summary)?;
        Ok(self.summary)
    }
}

fn series_table(columns: &[(&str, &RealSeries)]) -> Table {
    let grid = columns[0].1.grid;
    let mut t = Table::new(std::iter::once("t").chain(columns.iter().map(|c| c.0)));
    for (i, x) in grid.points().enumerate() {
        let mut row = vec![Cell::from(x)];
        row.extend(columns.iter().map(|c| Cell::from(c.1.values[i])));
        t.push(row);
    }
    t
}

fn fit_row(route: &str, fit: &Result<EnvelopeFit>, span: f64) -> Vec<Cell> {
    match fit {
        Ok(f) => {
            let behavior = if (-f.rate * span).exp() < 0.9 { "decays" } else { "oscillates" };
            vec![
                route.into(),
                f.amplitude.into(),
                f.rate.into(),
                f.omega.into(),
                f.phase.into(),
                f.rms_residual.into(),
                behavior.into(),
                "ok".into(),
            ]
        }
        Err(e) => {
            let mut row = vec![Cell::from(route)];
            row.extend(std::iter::repeat_n(Cell::Float(f64::NAN), 5));
            row.push("unknown".into());
            row.push(e.to_string().into());
            row
        }
    }
}

fn fit_header() -> Table {
    Table::new(["route", "amplitude", "rate", "omega", "phase", "rms_residual", "behavior", "status"])
}

fn invert_depths(
    config: &RunConfig,
    model: Model,
    grid: &crate::grid::TimeGrid,
    report: &mut Report,
) -> Result<Vec<(String, RealSeries)>> {
    let cfg = config.inversion_config();
    let mut out = Vec::new();
    for &depth in &config.depths {
        let spec = ApproximantSpec::new(model, depth)?;
        let f = LaplaceFunction::from_approximant(spec)?;
        let inv = invert_laplace_report(&f, grid, &cfg)?;
        let worst = inv.error_estimate.iter().fold(0.0_f64, |a, &b| a.max(b));
        report.line(&format!("depth_{depth}_abscissa"), f.abscissa());
        report.line(&format!("depth_{depth}_max_error_estimate"), format!("{worst:e}"));
        if inv.imag_exceeds_tolerance() {
            report.line(&format!("depth_{depth}_warning"), format!("imaginary part {:e}", inv.max_imag));
        }
        out.push((format!("depth_{depth}"), inv.series));
    }
    Ok(out)
}

/// Route comparisons against a reference series and envelope fits of every route.
fn compare_and_fit(
    routes: &[(String, RealSeries)],
    reference: &str,
    report: &mut Report,
) -> Result<(Table, Table, Vec<(String, Result<EnvelopeFit>)>)> {
    let reference_series = &routes
        .iter()
        .find(|r| r.0 == reference)
        .expect("reference route present")
        .1;
    let mut comparisons = Table::new(["route", "reference", "max_abs", "rms", "rel_rms"]);
    for (name, s) in routes.iter().filter(|r| r.0 != reference) {
        let m = compare_series(s, reference_series)?;
        comparisons.push(vec![
            name.as_str().into(),
            reference.into(),
            m.max_abs.into(),
            m.rms.into(),
            m.rel_rms.into(),
        ]);
    }
    let span = reference_series.grid.t_max();
    let mut fits = fit_header();
    let mut fitted = Vec::new();
    for (name, s) in routes {
        let fit = fit_damped_oscillation(s);
        fits.push(fit_row(name, &fit, span));
        fitted.push((name.clone(), fit));
    }
    report.line("routes", routes.iter().map(|r| r.0.as_str()).collect::<Vec<_>>().join(","));
    Ok((comparisons, fits, fitted))
}

pub fn cmd_ou(config: &RunConfig) -> Result<String> {
    let params = config.ou_params()?;
    let grid = config.ou_grid()?;
    let mut report = Report::new(config, "ou")?;
    let paths: Vec<OUPath> = (0..config.samples)
        .into_par_iter()
        .map(|i| generate_ou_path(&params, &grid, RngSeed::new(config.seed, i)))
        .collect::<Result<_>>()?;

    let shown = config.ou.paths_written.min(paths.len());
    let mut header = vec!["t".to_owned()];
    header.extend((0..shown).map(|i| format!("path_{i}")));
    let mut table = Table::new(header);
    for (j, t) in grid.points().enumerate() {
        let mut row = vec![Cell::from(t)];
        row.extend(paths[..shown].iter().map(|p| Cell::from(p.values[j])));
        table.push(row);
    }
    report.table("paths.csv", &table)?;

    let mut acf = Table::new(["lag_index", "tau", "estimate", "std_error", "predicted"]);
    let mut worst_z = 0.0_f64;
    for lag in 0..=config.ou.max_lag {
        let est = estimate_autocorrelation(&paths, lag)?;
        let tau = grid.point(lag);
        let predicted = params.autocorrelation(tau);
        if est.std_error > 0.0 {
            worst_z = worst_z.max((est.value - predicted).abs() / est.std_error);
        }
        acf.push(vec![
            lag.into(),
            tau.into(),
            est.value.into(),
            est.std_error.into(),
            predicted.into(),
        ]);
    }
    report.table("autocorrelation.csv", &acf)?;
    report.line("samples", config.samples);
    report.line("variance", params.variance());
    report.line("max_abs_z_score", worst_z);
    report.finish()
}

pub fn cmd_green(config: &RunConfig) -> Result<String> {
    let params = config.model_params()?;
    let grid = config.model_grid()?;
    let mut report = Report::new(config, "green")?;

    let mc = solvers::ensemble_green_function(&params, &grid, config.samples, config.seed)?;
    let volterra = solvers::solve_dia_volterra_model_with(&params, &grid, &config.volterra_config())?;
    let mut routes = vec![
        ("volterra".to_owned(), volterra),
        ("monte_carlo".to_owned(), mc.mean_re()),
    ];
    routes.extend(invert_depths(config, Model::Oscillator(params), &grid, &mut report)?);

    let closed = |f: &dyn Fn(f64) -> Result<f64>| -> RealSeries {
        RealSeries::from_fn(grid, |t| f(t).unwrap_or(f64::NAN))
    };
    let perturbative = closed(&|t| Ok(cf::perturbative_green(&params, t)));
    let third = closed(&|t| Ok(cf::dia_third_green(&params, t)));
    let appendix = closed(&|t| cf::appendix_green_first(&params, t));
    routes.push(("closed_perturbative".into(), perturbative.clone()));
    routes.push(("closed_third".into(), third.clone()));
    if appendix.values.iter().all(|v| v.is_finite()) {
        routes.push(("closed_appendix".into(), appendix.clone()));
    }

    let mut mc_table = Table::new(["t", "mean", "std_error"]);
    for (i, t) in grid.points().enumerate() {
        mc_table.push(vec![t.into(), mc.mean[i].re.into(), mc.std_error_re[i].into()]);
    }
    report.table("monte_carlo.csv", &mc_table)?;

    let orders = [
        ("f_order1", AppendixOrder::First),
        ("f_order2", AppendixOrder::Second),
        ("f_order3", AppendixOrder::Third),
    ];
    let f_series: Vec<(&str, RealSeries)> = orders
        .iter()
        .map(|&(name, o)| (name, closed(&|t| cf::appendix_f_approx(&params, t, o))))
        .collect();
    let mut closed_cols: Vec<(&str, &RealSeries)> = vec![
        ("perturbative", &perturbative),
        ("dia_third", &third),
        ("appendix_green", &appendix),
    ];
    closed_cols.extend(f_series.iter().map(|(n, s)| (*n, s)));
    report.table("closed_forms.csv", &series_table(&closed_cols))?;

    let cols: Vec<(&str, &RealSeries)> = routes.iter().map(|(n, s)| (n.as_str(), s)).collect();
    report.table("routes.csv", &series_table(&cols))?;
    let (comparisons, fits, _) = compare_and_fit(&routes, "volterra", &mut report)?;
    report.table("comparisons.csv", &comparisons)?;
    report.table("fits.csv", &fits)?;

    let limsup = cf::perturbative_green_limsup(&params);
    let envelope = cf::dia_third_envelope(&params, grid.t_max());
    report.line("perturbative_limsup", limsup);
    report.line("third_envelope_at_end", envelope);
    report.line(
        "perturbative_behavior",
        if limsup > 0.0 { "oscillates" } else { "decays" },
    );
    report.line(
        "third_behavior",
        if params.lambda() > 0.0 { "decays" } else { "oscillates" },
    );
    report.finish()
}

pub fn cmd_wave(config: &RunConfig) -> Result<String> {
    let params = config.wave_params()?;
    let grid = config.wave_grid()?;
    let mut report = Report::new(config, "wave")?;

    let mc = solvers::ensemble_wave_field(&params, &grid, config.samples, config.seed)?;
    let volterra = solvers::solve_dia_volterra_wave_with(&params, &grid, &config.volterra_config())?;
    let mut routes = vec![
        ("volterra".to_owned(), volterra),
        ("monte_carlo".to_owned(), mc.mean_re()),
    ];
    routes.extend(invert_depths(config, Model::Wave(params), &grid, &mut report)?);
    let perturbative = RealSeries::from_fn(grid, |x| cf::perturbative_wave(&params, x, Amplitude::Normalized));
    routes.push(("closed_perturbative".into(), perturbative));
    if cf::dia_freq_factor(params.ou.sigma).is_ok() {
        let dia = RealSeries::from_fn(grid, |x| {
            cf::dia_wave(&params, x, Amplitude::Normalized).unwrap_or(f64::NAN)
        });
        routes.push(("closed_dia".into(), dia));
    }

    let mut mc_table = Table::new(["t", "mean", "std_error"]);
    for (i, t) in grid.points().enumerate() {
        mc_table.push(vec![t.into(), mc.mean[i].re.into(), mc.std_error_re[i].into()]);
    }
    report.table("monte_carlo.csv", &mc_table)?;
    let cols: Vec<(&str, &RealSeries)> = routes.iter().map(|(n, s)| (n.as_str(), s)).collect();
    report.table("routes.csv", &series_table(&cols))?;
    let (comparisons, fits, fitted) = compare_and_fit(&routes, "volterra", &mut report)?;
    report.table("comparisons.csv", &comparisons)?;
    report.table("fits.csv", &fits)?;

    let mut ordering = Table::new([
        "sigma",
        "perturbative_rate",
        "dia_rate",
        "dia_exceeds",
        "perturbative_freq_factor",
        "dia_freq_factor",
    ]);
    let n = config.wave.sigma_table_points;
    let mut all_hold = true;
    for i in 1..=n {
        let sigma = config.wave.sigma_table_max * i as f64 / n as f64;
        let (pr, dr) = (
            cf::perturbative_attenuation(sigma, params.lambda()),
            cf::dia_attenuation(sigma, params.lambda()),
        );
        all_hold &= dr > pr;
        ordering.push(vec![
            sigma.into(),
            pr.into(),
            dr.into(),
            (dr > pr).into(),
            cf::perturbative_freq_factor(sigma).into(),
            cf::dia_freq_factor(sigma).unwrap_or(f64::NAN).into(),
        ]);
    }
    report.table("attenuation_ordering.csv", &ordering)?;
    report.line("dia_attenuates_more_everywhere", all_hold);

    let sigma = params.ou.sigma;
    let k = params.k;
    let formulas = [
        (
            "perturbative",
            cf::perturbative_attenuation(sigma, params.lambda()),
            cf::perturbative_freq_factor(sigma) * k,
        ),
        (
            "dia",
            cf::dia_attenuation(sigma, params.lambda()),
            cf::dia_freq_factor(sigma).map_or(f64::NAN, |f| f * k),
        ),
    ];
    let mut rates = Table::new([
        "route",
        "formula",
        "fitted_rate",
        "formula_rate",
        "rate_rel_diff",
        "fitted_omega",
        "formula_omega",
        "omega_rel_diff",
    ]);
    for (route, fit) in &fitted {
        let formula = match route.as_str() {
            "depth_2" | "closed_perturbative" => &formulas[0],
            "depth_1" => continue,
            _ => &formulas[1],
        };
        let (fr, fo) = fit.as_ref().map_or((f64::NAN, f64::NAN), |f| (f.rate, f.omega));
        rates.push(vec![
            route.as_str().into(),
            formula.0.into(),
            fr.into(),
            formula.1.into(),
            ((fr - formula.1) / formula.1).into(),
            fo.into(),
            formula.2.into(),
            ((fo - formula.2) / formula.2).into(),
        ]);
    }
    report.table("rates.csv", &rates)?;
    report.line("squared_shift_printed", cf::squared_shift_printed(sigma));
    report.line("squared_shift_exact", cf::squared_shift_exact(sigma));
    report.finish()
}

pub fn cmd_residual(config: &RunConfig) -> Result<String> {
    let models = [
        ("oscillator", Model::Oscillator(config.model_params()?)),
        ("wave", Model::Wave(config.wave_params()?)),
    ];
    let mut report = Report::new(config, "residual")?;
    let points: Vec<Complex64> = config
        .residual
        .points
        .iter()
        .map(|p| Complex64::new(p[0], p[1]))
        .collect();
    let mut detail = Table::new(["model", "depth", "p_re", "p_im", "residual_abs"]);
    let mut by_depth = Table::new(["model", "depth", "max_residual", "max_conjugate_defect"]);
    for (name, model) in models {
        let mut previous = f64::INFINITY;
        let mut monotone = true;
        for &depth in &config.depths {
            let spec = ApproximantSpec::new(model, depth)?;
            let mut worst = 0.0_f64;
            let mut conj_defect = 0.0_f64;
            for &p in &points {
                let r = functional_residual(&spec, p)?.norm();
                worst = worst.max(r);
                let f = dia_approximant(&spec, p)?;
                let g = dia_approximant(&spec, p.conj())?;
                conj_defect = conj_defect.max((g - f.conj()).norm());
                detail.push(vec![name.into(), depth.into(), p.re.into(), p.im.into(), r.into()]);
            }
            if worst > previous {
                monotone = false;
            }
            previous = worst;
            by_depth.push(vec![name.into(), depth.into(), worst.into(), conj_defect.into()]);
        }
        report.line(&format!("{name}_residual_monotone"), monotone);
    }
    report.table("residual_points.csv", &detail)?;
    report.table("residual_by_depth.csv", &by_depth)?;
    report.finish()
}
