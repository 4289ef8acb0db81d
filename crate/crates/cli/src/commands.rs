//! The generic experiment commands and the figure presets layered on them.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use ctqw_core::lattice::{DefectLineParams, LatticeWindow, NodeState};
use ctqw_core::observables::{probability_distribution, std_dev};
use ctqw_core::propagator::{evolve_spectral, OraclePropagator, QuadratureSpec};
use ctqw_core::spectral::bound_states;

use crate::config::{BackendChoice, ExperimentConfig, Settings, Sweep, SweepVariable};
use crate::error::CliError;
use crate::output::{
    fmt_token, write_dataset, Dataset, Field, ParamsMeta, Sidecar, SweepMeta, WindowMeta,
};

/// Margin used when classifying truncated-spectrum eigenvalues as
/// out-of-band; far below every physical gap, far above truncation error.
const OUT_OF_BAND_MARGIN: f64 = 1e-6;

/// Oracle window radius used for pure spectrum queries (bound counts).
const SPECTRUM_RADIUS: usize = 128;

fn bound_lambdas(params: &DefectLineParams) -> Result<Vec<f64>, CliError> {
    if params.is_disconnected() {
        let window =
            LatticeWindow::new(params.j_defect, SPECTRUM_RADIUS).map_err(CliError::from)?;
        let oracle = OraclePropagator::new(params, &window)?;
        Ok(oracle.out_of_band_eigenvalues(params, OUT_OF_BAND_MARGIN))
    } else {
        Ok(bound_states(params)?.iter().map(|b| b.lambda()).collect())
    }
}

struct EvolveOutcome {
    state: NodeState,
    window: LatticeWindow,
    backend_label: String,
    norm_deviation: f64,
    max_backend_delta: Option<f64>,
}

fn evolve_once(
    params: &DefectLineParams,
    j0: i64,
    t: f64,
    quad: &QuadratureSpec,
    buffer: usize,
    backend: BackendChoice,
) -> Result<EvolveOutcome, CliError> {
    let window = LatticeWindow::for_evolution(params, j0, t, buffer)?;
    let psi0 = NodeState::basis(j0, &window)?;
    let forced = params.is_disconnected();
    let effective = if forced {
        BackendChoice::Oracle
    } else {
        backend
    };
    let backend_label = if forced {
        "oracle (forced)".to_string()
    } else {
        effective.name().to_string()
    };

    let outcome = match effective {
        BackendChoice::Spectral => {
            let (state, report) = evolve_spectral(&psi0, t, params, quad, &window)?;
            EvolveOutcome {
                state,
                window,
                backend_label,
                norm_deviation: report.norm_deviation,
                max_backend_delta: None,
            }
        }
        BackendChoice::Oracle => {
            let state = OraclePropagator::new(params, &window)?.evolve(&psi0, t)?;
            let norm_deviation = (state.norm_sq() - 1.0).abs();
            EvolveOutcome {
                state,
                window,
                backend_label,
                norm_deviation,
                max_backend_delta: None,
            }
        }
        BackendChoice::Both => {
            let (state, report) = evolve_spectral(&psi0, t, params, quad, &window)?;
            let oracle = OraclePropagator::new(params, &window)?.evolve(&psi0, t)?;
            let mut delta = 0.0f64;
            for (a, b) in state.amplitudes().iter().zip(oracle.amplitudes()) {
                delta = delta.max((a.norm_sqr() - b.norm_sqr()).abs());
            }
            EvolveOutcome {
                state,
                window,
                backend_label,
                norm_deviation: report.norm_deviation,
                max_backend_delta: Some(delta),
            }
        }
    };
    Ok(outcome)
}

fn sidecar_base(command: &str, cfg: &ExperimentConfig, started: Instant) -> Sidecar {
    Sidecar {
        command: command.to_string(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        params: ParamsMeta::from(&cfg.params),
        j0: cfg.j0,
        times: cfg.times.clone(),
        backend: cfg.backend.name().to_string(),
        quadrature_nodes: cfg.quadrature.n_nodes(),
        window_buffer: cfg.window_buffer,
        window: None,
        sweep: None,
        norm_deviation: None,
        bound_states: Vec::new(),
        forced_oracle_values: Vec::new(),
        max_backend_delta: None,
        runtime_seconds: started.elapsed().as_secs_f64(),
    }
}

fn require_sweep<'a>(
    cfg: &'a ExperimentConfig,
    command: &str,
    allowed: &[SweepVariable],
) -> Result<&'a Sweep, CliError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config(format!("{command} requires --sweep")))?;
    if !allowed.contains(&sweep.variable) {
        let names: Vec<&str> = allowed.iter().map(|v| v.name()).collect();
        return Err(CliError::config(format!(
            "{command} sweeps over {{{}}}, got '{}'",
            names.join(", "),
            sweep.variable.name()
        )));
    }
    Ok(sweep)
}

/// Bound-energy structure across a defect-strength sweep:
/// rows (value, count, lambda_1, lambda_2).
pub fn bound_energy(cfg: &ExperimentConfig, name: &str) -> Result<(), CliError> {
    let started = Instant::now();
    let sweep = require_sweep(
        cfg,
        "bound-energy",
        &[SweepVariable::Alpha, SweepVariable::Beta],
    )?;

    let per_value: Vec<(f64, Vec<f64>, bool)> = sweep
        .values
        .par_iter()
        .map(|&v| -> Result<_, CliError> {
            let point = cfg.with_value(sweep.variable, v)?;
            let forced = point.params.is_disconnected();
            let lambdas = bound_lambdas(&point.params)?;
            Ok((v, lambdas, forced))
        })
        .collect::<Result<_, _>>()?;

    let mut data = Dataset::new(&[sweep.variable.name(), "count", "lambda_1", "lambda_2"]);
    let mut forced_values = Vec::new();
    for (v, lambdas, forced) in &per_value {
        if *forced {
            forced_values.push(*v);
        }
        let mut row = vec![Field::Num(*v), Field::Int(lambdas.len() as i64)];
        for i in 0..2 {
            row.push(lambdas.get(i).map_or(Field::Empty, |&l| Field::Num(l)));
        }
        data.push(row);
    }

    let mut sidecar = sidecar_base("bound-energy", cfg, started);
    sidecar.sweep = Some(SweepMeta {
        variable: sweep.variable.name().to_string(),
        values: sweep.values.clone(),
    });
    sidecar.forced_oracle_values = forced_values;
    sidecar.backend = "analytic + oracle cross-check".to_string();
    sidecar.runtime_seconds = started.elapsed().as_secs_f64();
    let path = write_dataset(&cfg.out_dir, name, &data, &sidecar)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Probability distribution P_j at each requested time; one CSV per time
/// (and per sweep value when a sweep over alpha, beta, or jd is given).
pub fn evolve(cfg: &ExperimentConfig, name: &str) -> Result<(), CliError> {
    let mut variants: Vec<(String, ExperimentConfig)> = Vec::new();
    match &cfg.sweep {
        None => variants.push((String::new(), cfg.clone())),
        Some(sweep) if sweep.variable == SweepVariable::T => {
            let mut flat = cfg.clone();
            flat.times = sweep.values.clone();
            flat.sweep = None;
            variants.push((String::new(), flat));
        }
        Some(sweep) => {
            for &v in &sweep.values {
                let point = cfg.with_value(sweep.variable, v)?;
                variants.push((format!("_{}{}", sweep.variable.name(), fmt_token(v)), point));
            }
        }
    }

    let mut jobs: Vec<(String, ExperimentConfig, f64)> = Vec::new();
    for (suffix, point) in &variants {
        for &t in &point.times {
            jobs.push((
                format!("{name}{suffix}_t{}", fmt_token(t)),
                point.clone(),
                t,
            ));
        }
    }

    let outputs: Vec<(String, ExperimentConfig, f64, EvolveOutcome, Vec<f64>, f64)> = jobs
        .into_par_iter()
        .map(|(stem, point, t)| -> Result<_, CliError> {
            let started = Instant::now();
            let outcome = evolve_once(
                &point.params,
                point.j0,
                t,
                &point.quadrature,
                point.window_buffer,
                point.backend,
            )?;
            let lambdas = bound_lambdas(&point.params)?;
            Ok((
                stem,
                point,
                t,
                outcome,
                lambdas,
                started.elapsed().as_secs_f64(),
            ))
        })
        .collect::<Result<_, _>>()?;

    for (stem, point, t, outcome, lambdas, runtime) in outputs {
        let mut data = Dataset::new(&["j", "p"]);
        for (j, a) in outcome.state.iter_nodes() {
            data.push(vec![Field::Int(j), Field::Num(a.norm_sqr())]);
        }
        let mut sidecar = sidecar_base("evolve", &point, Instant::now());
        sidecar.runtime_seconds = runtime;
        sidecar.times = vec![t];
        sidecar.backend = outcome.backend_label.clone();
        sidecar.window = Some(WindowMeta::from(&outcome.window));
        sidecar.norm_deviation = Some(outcome.norm_deviation);
        sidecar.bound_states = lambdas;
        sidecar.max_backend_delta = outcome.max_backend_delta;
        let path = write_dataset(&point.out_dir, &stem, &data, &sidecar)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Probability at the defect node as a function of the swept defect
/// strength, at a single fixed time.
pub fn defect_prob(cfg: &ExperimentConfig, name: &str) -> Result<(), CliError> {
    let started = Instant::now();
    let sweep = require_sweep(
        cfg,
        "defect-prob",
        &[SweepVariable::Alpha, SweepVariable::Beta],
    )?;
    if cfg.times.len() != 1 {
        return Err(CliError::config(format!(
            "defect-prob uses exactly one time, got {:?}",
            cfg.times
        )));
    }
    let t = cfg.times[0];

    let per_value: Vec<(f64, f64, bool, Option<f64>)> = sweep
        .values
        .par_iter()
        .map(|&v| -> Result<_, CliError> {
            let point = cfg.with_value(sweep.variable, v)?;
            let outcome = evolve_once(
                &point.params,
                point.j0,
                t,
                &point.quadrature,
                point.window_buffer,
                point.backend,
            )?;
            let p_defect = outcome
                .state
                .amplitude(point.params.j_defect)
                .map(|a| a.norm_sqr())
                .ok_or_else(|| CliError::config("defect node left the window"))?;
            let forced = outcome.backend_label.contains("forced");
            Ok((v, p_defect, forced, outcome.max_backend_delta))
        })
        .collect::<Result<_, _>>()?;

    let mut data = Dataset::new(&[sweep.variable.name(), "p_defect"]);
    let mut forced_values = Vec::new();
    let mut max_delta: Option<f64> = None;
    for (v, p, forced, delta) in &per_value {
        data.push(vec![Field::Num(*v), Field::Num(*p)]);
        if *forced {
            forced_values.push(*v);
        }
        if let Some(d) = delta {
            max_delta = Some(max_delta.map_or(*d, |m: f64| m.max(*d)));
        }
    }

    let mut sidecar = sidecar_base("defect-prob", cfg, started);
    sidecar.times = vec![t];
    sidecar.sweep = Some(SweepMeta {
        variable: sweep.variable.name().to_string(),
        values: sweep.values.clone(),
    });
    sidecar.forced_oracle_values = forced_values;
    sidecar.max_backend_delta = max_delta;
    sidecar.runtime_seconds = started.elapsed().as_secs_f64();
    let path = write_dataset(&cfg.out_dir, name, &data, &sidecar)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Spreading width sigma(t) for the configured defect line, with the
/// defect-free reference series alongside.
pub fn sigma(cfg: &ExperimentConfig, name: &str) -> Result<(), CliError> {
    let started = Instant::now();
    let mut times = cfg.times.clone();
    match &cfg.sweep {
        None => {}
        Some(sweep) if sweep.variable == SweepVariable::T => {
            times = sweep.values.clone();
        }
        Some(sweep) => {
            return Err(CliError::config(format!(
                "sigma sweeps over t only, got '{}'",
                sweep.variable.name()
            )))
        }
    }
    let t_max = times.iter().copied().fold(0.0f64, f64::max);

    let free = DefectLineParams::new(
        cfg.params.epsilon,
        cfg.params.gamma,
        0.0,
        0.0,
        cfg.params.j_defect,
    )
    .map_err(CliError::from)?;

    let forced = cfg.params.is_disconnected();
    let effective = if forced {
        BackendChoice::Oracle
    } else {
        cfg.backend
    };
    let window = LatticeWindow::for_evolution(&cfg.params, cfg.j0, t_max, cfg.window_buffer)?;
    let psi0 = NodeState::basis(cfg.j0, &window)?;

    let sigma_series = |params: &DefectLineParams,
                        backend: BackendChoice|
     -> Result<Vec<f64>, CliError> {
        match backend {
            BackendChoice::Oracle => {
                let prop = OraclePropagator::new(params, &window)?;
                times
                    .iter()
                    .map(|&t| {
                        let state = prop.evolve(&psi0, t)?;
                        Ok(std_dev(&probability_distribution(&state)))
                    })
                    .collect()
            }
            _ => times
                .par_iter()
                .map(|&t| {
                    let (state, _) = evolve_spectral(&psi0, t, params, &cfg.quadrature, &window)?;
                    Ok(std_dev(&probability_distribution(&state)))
                })
                .collect(),
        }
    };

    let (header, columns): (Vec<&str>, Vec<Vec<f64>>) = match effective {
        BackendChoice::Both => {
            let spectral = sigma_series(&cfg.params, BackendChoice::Spectral)?;
            let oracle = sigma_series(&cfg.params, BackendChoice::Oracle)?;
            let free_series = sigma_series(&free, BackendChoice::Oracle)?;
            (
                vec!["t", "sigma_spectral", "sigma_oracle", "sigma_free"],
                vec![spectral, oracle, free_series],
            )
        }
        backend => {
            let main = sigma_series(&cfg.params, backend)?;
            let free_series = sigma_series(&free, backend)?;
            (vec!["t", "sigma", "sigma_free"], vec![main, free_series])
        }
    };

    let mut data = Dataset::new(&header);
    for (i, &t) in times.iter().enumerate() {
        let mut row = vec![Field::Num(t)];
        for col in &columns {
            row.push(Field::Num(col[i]));
        }
        data.push(row);
    }

    let mut sidecar = sidecar_base("sigma", cfg, started);
    sidecar.times = times;
    sidecar.backend = if forced {
        "oracle (forced)".to_string()
    } else {
        effective.name().to_string()
    };
    sidecar.window = Some(WindowMeta::from(&window));
    sidecar.bound_states = bound_lambdas(&cfg.params)?;
    sidecar.runtime_seconds = started.elapsed().as_secs_f64();
    let path = write_dataset(&cfg.out_dir, name, &data, &sidecar)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Run the validation suite; print one line per criterion, write the
/// machine-readable report, and fail with exit status 1 on any miss.
pub fn validate(
    out_dir: &Path,
    only: Option<Vec<u32>>,
    tolerance_scale: f64,
) -> Result<(), CliError> {
    let report = ctqw_core::validate::run_with_scale(tolerance_scale, only.as_deref())
        .map_err(CliError::from)?;

    for id in report.criteria() {
        let ok = report.criterion_passed(id);
        println!("criterion {id:2} [{}]", if ok { "PASS" } else { "FAIL" });
        if !ok {
            for c in report
                .checks
                .iter()
                .filter(|c| c.criterion == id && !c.passed)
            {
                println!(
                    "    FAILED {}: measured {:.12e}, target {:.12e}, tolerance {:.3e}",
                    c.name, c.measured, c.target, c.tolerance
                );
            }
        }
    }

    #[derive(serde::Serialize)]
    struct CheckOut<'a> {
        criterion: u32,
        name: &'a str,
        measured: f64,
        target: f64,
        tolerance: f64,
        passed: bool,
    }
    #[derive(serde::Serialize)]
    struct ReportOut<'a> {
        code_version: &'static str,
        tolerance_scale: f64,
        all_passed: bool,
        checks: Vec<CheckOut<'a>>,
    }
    let out = ReportOut {
        code_version: env!("CARGO_PKG_VERSION"),
        tolerance_scale,
        all_passed: report.all_passed(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckOut {
                criterion: c.criterion,
                name: &c.name,
                measured: c.measured,
                target: c.target,
                tolerance: c.tolerance,
                passed: c.passed,
            })
            .collect(),
    };
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join("validation.json");
    let mut json = serde_json::to_string_pretty(&out)
        .map_err(|e| CliError::config(format!("report serialization: {e}")))?;
    json.push('\n');
    std::fs::write(&path, json)?;
    println!("wrote {}", path.display());

    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::ValidationFailed)
    }
}

fn pinned(settings: &Settings) -> Settings {
    // figure presets keep the user's output/accuracy knobs and pin the rest
    Settings {
        nodes: settings.nodes,
        buffer: settings.buffer,
        out: settings.out.clone(),
        backend: settings.backend.clone(),
        ..Default::default()
    }
}

fn resolve_preset(
    base: &Settings,
    alpha: f64,
    beta: f64,
    jd: i64,
    times: Vec<f64>,
    sweep: Option<String>,
) -> Result<ExperimentConfig, CliError> {
    Settings {
        alpha: Some(alpha),
        beta: Some(beta),
        jd: Some(jd),
        j0: Some(0),
        times: Some(times),
        sweep,
        ..pinned(base)
    }
    .resolve()
}

fn sigma_grid() -> Vec<f64> {
    (0..=30).map(|i| i as f64).collect()
}

/// Bound energy against position-defect strength.
pub fn fig1(user: &Settings) -> Result<(), CliError> {
    let cfg = resolve_preset(user, 0.0, 0.0, 0, vec![30.0], Some("alpha:-6:6:0.1".into()))?;
    bound_energy(&cfg, "fig1_bound_energy")
}

/// Distributions at t = 30 for defect placements 0, 1, 2, 5 (plus the
/// defect-free reference), and defect-site probability against alpha.
pub fn fig2(user: &Settings) -> Result<(), CliError> {
    for jd in [0i64, 1, 2, 5] {
        let cfg = resolve_preset(user, 3.0, 0.0, jd, vec![30.0], None)?;
        evolve(&cfg, &format!("fig2_evolve_jd{jd}"))?;
    }
    let free = resolve_preset(user, 0.0, 0.0, 0, vec![30.0], None)?;
    evolve(&free, "fig2_evolve_free")?;
    for jd in [0i64, 1, 2, 5] {
        let cfg = resolve_preset(
            user,
            3.0,
            0.0,
            jd,
            vec![30.0],
            Some("alpha:-6:6:0.1".into()),
        )?;
        defect_prob(&cfg, &format!("fig2_defect_prob_jd{jd}"))?;
    }
    Ok(())
}

/// Spreading width against time for position-defect placements.
pub fn fig3(user: &Settings) -> Result<(), CliError> {
    for jd in [0i64, 1, 2, 5] {
        let cfg = resolve_preset(user, 3.0, 0.0, jd, sigma_grid(), None)?;
        sigma(&cfg, &format!("fig3_sigma_jd{jd}"))?;
    }
    Ok(())
}

/// Bound energy against transition-defect strength.
pub fn fig4(user: &Settings) -> Result<(), CliError> {
    let cfg = resolve_preset(user, 0.0, 0.0, 0, vec![30.0], Some("beta:-4:4:0.1".into()))?;
    bound_energy(&cfg, "fig4_bound_energy")
}

/// Distributions at t = 30 for transition defects on the starting node.
pub fn fig5(user: &Settings) -> Result<(), CliError> {
    for beta in [-0.9, -0.5, 0.5, 2.0] {
        let cfg = resolve_preset(user, 0.0, beta, 0, vec![30.0], None)?;
        evolve(&cfg, &format!("fig5_evolve_beta{}", fmt_token(beta)))?;
    }
    Ok(())
}

/// Defect-site probability against transition-defect strength.
pub fn fig6(user: &Settings) -> Result<(), CliError> {
    let cfg = resolve_preset(user, 0.0, 0.0, 0, vec![30.0], Some("beta:-4:4:0.1".into()))?;
    defect_prob(&cfg, "fig6_defect_prob")
}

/// Spreading width against time for transition defects.
pub fn fig7(user: &Settings) -> Result<(), CliError> {
    for beta in [-0.9, -0.5, 0.5, 2.0] {
        let cfg = resolve_preset(user, 0.0, beta, 0, sigma_grid(), None)?;
        sigma(&cfg, &format!("fig7_sigma_beta{}", fmt_token(beta)))?;
    }
    Ok(())
}

/// Distributions at t = 30 with the walk starting away from a transition
/// defect.
pub fn fig8(user: &Settings) -> Result<(), CliError> {
    for beta in [-0.5, 0.5] {
        for jd in [1i64, 2, 5] {
            let cfg = resolve_preset(user, 0.0, beta, jd, vec![30.0], None)?;
            evolve(&cfg, &format!("fig8_evolve_beta{}_jd{jd}", fmt_token(beta)))?;
        }
    }
    Ok(())
}
