//! Experiment configuration: defaults, config-file parsing, flag overrides.
//!
//! A configuration is archivable as a single flat key-value file; command
//! line flags win over file entries.

use std::path::{Path, PathBuf};

use ctqw_core::{DefectLineParams, QuadratureSpec};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendChoice {
    Spectral,
    Oracle,
    Both,
}

impl BackendChoice {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "spectral" => Ok(Self::Spectral),
            "oracle" => Ok(Self::Oracle),
            "both" => Ok(Self::Both),
            other => Err(CliError::config(format!(
                "unknown backend '{other}' (expected spectral, oracle, or both)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Spectral => "spectral",
            Self::Oracle => "oracle",
            Self::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Alpha,
    Beta,
    Jd,
    T,
}

impl SweepVariable {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "alpha" => Ok(Self::Alpha),
            "beta" => Ok(Self::Beta),
            "jd" => Ok(Self::Jd),
            "t" => Ok(Self::T),
            other => Err(CliError::config(format!(
                "unknown sweep variable '{other}' (expected alpha, beta, jd, or t)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Alpha => "alpha",
            Self::Beta => "beta",
            Self::Jd => "jd",
            Self::T => "t",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

impl Sweep {
    /// Parse "var:start:stop:step" into an inclusive grid.
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 4 {
            return Err(CliError::config(format!(
                "sweep '{spec}' must have the form var:start:stop:step"
            )));
        }
        let variable = SweepVariable::parse(parts[0])?;
        let nums: Vec<f64> = parts[1..]
            .iter()
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| CliError::config(format!("sweep bound '{p}' is not a number")))
            })
            .collect::<Result<_, _>>()?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if step <= 0.0 || !step.is_finite() {
            return Err(CliError::config(format!(
                "sweep step {step} must be positive"
            )));
        }
        if stop < start {
            return Err(CliError::config(format!(
                "sweep stop {stop} is below start {start}"
            )));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        let values = (0..count).map(|i| start + i as f64 * step).collect();
        Ok(Self { variable, values })
    }
}

/// A fully resolved experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub params: DefectLineParams,
    pub j0: i64,
    pub times: Vec<f64>,
    pub sweep: Option<Sweep>,
    pub quadrature: QuadratureSpec,
    pub window_buffer: usize,
    pub backend: BackendChoice,
    pub out_dir: PathBuf,
}

/// Raw settings before validation; file entries first, flags override.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub epsilon: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub jd: Option<i64>,
    pub j0: Option<i64>,
    pub times: Option<Vec<f64>>,
    pub sweep: Option<String>,
    pub nodes: Option<usize>,
    pub buffer: Option<usize>,
    pub backend: Option<String>,
    pub out: Option<PathBuf>,
}

impl Settings {
    /// Later (flag) settings override earlier (file) ones.
    pub fn overlay(mut self, over: Settings) -> Settings {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if over.$field.is_some() { self.$field = over.$field; })*
            };
        }
        take!(epsilon, gamma, alpha, beta, jd, j0, times, sweep, nodes, buffer, backend, out);
        self
    }

    pub fn from_file(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                CliError::config(format!(
                    "{}:{}: invalid {what} '{value}'",
                    path.display(),
                    lineno + 1
                ))
            };
            match key {
                "epsilon" => s.epsilon = Some(value.parse().map_err(|_| bad("number"))?),
                "gamma" => s.gamma = Some(value.parse().map_err(|_| bad("number"))?),
                "alpha" => s.alpha = Some(value.parse().map_err(|_| bad("number"))?),
                "beta" => s.beta = Some(value.parse().map_err(|_| bad("number"))?),
                "jd" => s.jd = Some(value.parse().map_err(|_| bad("integer"))?),
                "j0" => s.j0 = Some(value.parse().map_err(|_| bad("integer"))?),
                "t" => {
                    let times: Result<Vec<f64>, _> =
                        value.split(',').map(|p| p.trim().parse::<f64>()).collect();
                    s.times = Some(times.map_err(|_| bad("time list"))?);
                }
                "sweep" => s.sweep = Some(value.to_string()),
                "nodes" => s.nodes = Some(value.parse().map_err(|_| bad("node count"))?),
                "buffer" => s.buffer = Some(value.parse().map_err(|_| bad("buffer"))?),
                "backend" => s.backend = Some(value.to_string()),
                "out" => s.out = Some(PathBuf::from(value)),
                other => {
                    return Err(CliError::config(format!(
                        "{}:{}: unknown key '{other}'",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(s)
    }

    pub fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let params = DefectLineParams::new(
            self.epsilon.unwrap_or(2.0),
            self.gamma.unwrap_or(1.0),
            self.alpha.unwrap_or(0.0),
            self.beta.unwrap_or(0.0),
            self.jd.unwrap_or(0),
        )
        .map_err(|e| CliError::config(e.to_string()))?;
        let times = self.times.unwrap_or_else(|| vec![30.0]);
        if times.is_empty() {
            return Err(CliError::config("at least one time is required"));
        }
        if let Some(bad) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(CliError::config(format!(
                "time {bad} must be finite and non-negative"
            )));
        }
        let sweep = self.sweep.as_deref().map(Sweep::parse).transpose()?;
        if let Some(sw) = &sweep {
            if sw.values.is_empty() {
                return Err(CliError::config("sweep grid is empty"));
            }
            if sw.variable == SweepVariable::Jd {
                if let Some(v) = sw.values.iter().find(|v| v.fract().abs() > 1e-9) {
                    return Err(CliError::config(format!(
                        "jd sweep value {v} is not an integer"
                    )));
                }
            }
        }
        let quadrature = QuadratureSpec::new(self.nodes.unwrap_or(2048))
            .map_err(|e| CliError::config(e.to_string()))?;
        let backend = match self.backend.as_deref() {
            Some(name) => BackendChoice::parse(name)?,
            None => BackendChoice::Spectral,
        };
        Ok(ExperimentConfig {
            params,
            j0: self.j0.unwrap_or(0),
            times,
            sweep,
            quadrature,
            window_buffer: self.buffer.unwrap_or(40),
            backend,
            out_dir: self.out.unwrap_or_else(|| PathBuf::from("out")),
        })
    }
}

impl ExperimentConfig {
    /// Copy with one swept variable replaced.
    pub fn with_value(&self, variable: SweepVariable, value: f64) -> Result<Self, CliError> {
        let mut cfg = self.clone();
        let p = &self.params;
        cfg.params = match variable {
            SweepVariable::Alpha => {
                DefectLineParams::new(p.epsilon, p.gamma, value, p.beta, p.j_defect)
            }
            SweepVariable::Beta => {
                DefectLineParams::new(p.epsilon, p.gamma, p.alpha, value, p.j_defect)
            }
            SweepVariable::Jd => {
                DefectLineParams::new(p.epsilon, p.gamma, p.alpha, p.beta, value.round() as i64)
            }
            SweepVariable::T => {
                cfg.times = vec![value];
                return Ok(cfg);
            }
        }
        .map_err(|e| CliError::config(e.to_string()))?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn sweep_grid_is_inclusive() {
        let s = Sweep::parse("alpha:-1:1:0.5").unwrap();
        assert_eq!(s.variable, SweepVariable::Alpha);
        assert_eq!(s.values.len(), 5);
        assert!((s.values[0] + 1.0).abs() < 1e-12);
        assert!((s.values[4] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_rejects_malformed_specs() {
        assert!(Sweep::parse("alpha:0:1").is_err());
        assert!(Sweep::parse("theta:0:1:0.1").is_err());
        assert!(Sweep::parse("beta:0:1:-0.1").is_err());
        assert!(Sweep::parse("beta:1:0:0.1").is_err());
        assert!(Sweep::parse("jd:0:2:0.5").is_ok()); // integer check happens at resolve
    }

    #[test]
    fn defaults_match_reference_configuration() {
        let cfg = Settings::default().resolve().unwrap();
        assert_eq!(cfg.params.epsilon, 2.0);
        assert_eq!(cfg.params.gamma, 1.0);
        assert_eq!(cfg.times, vec![30.0]);
        assert_eq!(cfg.quadrature.n_nodes(), 2048);
        assert_eq!(cfg.window_buffer, 40);
        assert_eq!(cfg.backend, BackendChoice::Spectral);
    }

    #[test]
    fn file_then_flags_precedence() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(
            file,
            "# reference run\nalpha = 3\nbeta = 0.5\nt = 10, 20\nnodes = 512"
        )
        .unwrap();
        let from_file = Settings::from_file(file.path()).unwrap();
        let flags = Settings {
            alpha: Some(1.0),
            ..Default::default()
        };
        let cfg = from_file.overlay(flags).resolve().unwrap();
        assert_eq!(cfg.params.alpha, 1.0); // flag wins
        assert_eq!(cfg.params.beta, 0.5); // file survives
        assert_eq!(cfg.times, vec![10.0, 20.0]);
        assert_eq!(cfg.quadrature.n_nodes(), 512);
    }

    #[test]
    fn config_file_errors_are_reported() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "zeta = 3").unwrap();
        assert!(Settings::from_file(file.path()).is_err());

        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "alpha").unwrap();
        assert!(Settings::from_file(file.path()).is_err());
    }

    #[test]
    fn resolve_rejects_bad_values() {
        let s = Settings {
            gamma: Some(0.0),
            ..Default::default()
        };
        assert!(s.resolve().is_err());
        let s = Settings {
            times: Some(vec![-1.0]),
            ..Default::default()
        };
        assert!(s.resolve().is_err());
        let s = Settings {
            backend: Some("magic".into()),
            ..Default::default()
        };
        assert!(s.resolve().is_err());
        let s = Settings {
            sweep: Some("jd:0:2:0.5".into()),
            ..Default::default()
        };
        assert!(s.resolve().is_err());
    }
}
