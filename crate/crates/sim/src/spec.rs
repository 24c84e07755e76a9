//! Sweep description and its flat `key = value` config format.
//!
//! ```text
//! # figure 5
//! sweep.parameter = alpha_p_mag
//! sweep.grid = log
//! sweep.start = 1
//! sweep.stop = 100
//! sweep.points = 40
//! sweep.coupling = two_pole
//! gate.theta_alpha = 2
//! ```

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: `{key}`: {message}")]
    Field {
        line: usize,
        key: String,
        message: String,
    },
    #[error("`{key}`: {message}")]
    Invalid { key: String, message: String },
}

impl ConfigError {
    fn invalid(key: &str, message: impl Into<String>) -> Self {
        Self::Invalid {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptParameter {
    Sigma2Probe,
    ThetaAlphaProduct,
    AlphaPMag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingRule {
    /// `σ_P²` is an input, unrelated to `θ`.
    Independent,
    /// `θ` and `σ_P²` both follow from a two-pole kernel at its peak.
    TwoPole,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Linear { start: f64, stop: f64, points: usize },
    Log { start: f64, stop: f64, points: usize },
    List(Vec<f64>),
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::Linear { start, stop, points } => spaced(*start, *stop, *points),
            GridSpec::Log { start, stop, points } => {
                spaced(start.log10(), stop.log10(), *points)
                    .into_iter()
                    .map(|x| 10f64.powf(x))
                    .enumerate()
                    // pin the endpoints so they survive the log round trip exactly
                    .map(|(i, x)| {
                        if i == 0 {
                            *start
                        } else if i + 1 == *points {
                            *stop
                        } else {
                            x
                        }
                    })
                    .collect()
            }
            GridSpec::List(v) => v.clone(),
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self {
            GridSpec::Linear { start, stop, points } | GridSpec::Log { start, stop, points } => {
                if !(start.is_finite() && stop.is_finite()) {
                    return Err(ConfigError::invalid("sweep.start", "grid bounds must be finite"));
                }
                if *points == 0 {
                    return Err(ConfigError::invalid("sweep.points", "grid must be non-empty"));
                }
                if *points > 1 && !(stop > start) {
                    return Err(ConfigError::invalid("sweep.stop", "must exceed sweep.start"));
                }
                if matches!(self, GridSpec::Log { .. }) && !(*start > 0.0) {
                    return Err(ConfigError::invalid("sweep.start", "log grid needs a positive start"));
                }
            }
            GridSpec::List(v) => {
                if v.is_empty() {
                    return Err(ConfigError::invalid("sweep.values", "grid must be non-empty"));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(ConfigError::invalid("sweep.values", "values must be finite"));
                }
                if v.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(ConfigError::invalid("sweep.values", "values must be strictly increasing"));
                }
            }
        }
        Ok(())
    }
}

fn spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { b } else { a + step * i as f64 }).collect()
}

/// Kernel used by the two-pole coupling rule. `κ` is not an input: it is
/// chosen so that the peak phase equals the requested `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    pub omega0: f64,
    pub gamma0: f64,
    pub temperature: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            gamma0: 0.0,
            temperature: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub swept: SweptParameter,
    pub grid: GridSpec,
    pub coupling: CouplingRule,
    /// `|α_P|`, unused when sweeping it.
    pub alpha_p: Option<f64>,
    /// Fixed `θ`; exclusive with `theta_alpha`.
    pub theta: Option<f64>,
    /// Fixed `θ|α_P|`; exclusive with `theta`.
    pub theta_alpha: Option<f64>,
    /// Independent coupling only.
    pub sigma2_probe: Option<f64>,
    pub kernel: KernelConfig,
    pub mc_samples: usize,
    pub seed: u64,
    pub tail_tol: f64,
    pub exact: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.grid.validate()?;
        let need = |v: Option<f64>, key: &str| -> Result<(), ConfigError> {
            match v {
                None => Err(ConfigError::invalid(key, "required for this sweep")),
                Some(x) if !x.is_finite() => Err(ConfigError::invalid(key, "must be finite")),
                Some(_) => Ok(()),
            }
        };
        let forbid = |v: Option<f64>, key: &str, why: &str| -> Result<(), ConfigError> {
            match v {
                Some(_) => Err(ConfigError::invalid(key, why.to_string())),
                None => Ok(()),
            }
        };
        match self.swept {
            SweptParameter::AlphaPMag => {
                forbid(self.alpha_p, "gate.alpha_p", "is the swept parameter")?;
                if self.theta.is_some() == self.theta_alpha.is_some() {
                    return Err(ConfigError::invalid(
                        "gate.theta",
                        "set exactly one of gate.theta and gate.theta_alpha",
                    ));
                }
                if self.grid.values()[0] < 0.0 {
                    return Err(ConfigError::invalid("sweep.start", "|alpha_p| must be non-negative"));
                }
            }
            SweptParameter::ThetaAlphaProduct => {
                need(self.alpha_p, "gate.alpha_p")?;
                forbid(self.theta, "gate.theta", "is set by the swept theta*|alpha_p|")?;
                forbid(self.theta_alpha, "gate.theta_alpha", "is the swept parameter")?;
                if !(self.alpha_p.unwrap() > 0.0) {
                    return Err(ConfigError::invalid("gate.alpha_p", "must be positive to sweep theta*|alpha_p|"));
                }
            }
            SweptParameter::Sigma2Probe => {
                need(self.alpha_p, "gate.alpha_p")?;
                if self.theta.is_some() == self.theta_alpha.is_some() {
                    return Err(ConfigError::invalid(
                        "gate.theta",
                        "set exactly one of gate.theta and gate.theta_alpha",
                    ));
                }
                forbid(self.sigma2_probe, "noise.sigma2_probe", "is the swept parameter")?;
                if self.coupling == CouplingRule::TwoPole {
                    return Err(ConfigError::invalid(
                        "sweep.coupling",
                        "two_pole fixes sigma2_probe, it cannot be swept",
                    ));
                }
                if self.grid.values()[0] < 0.0 {
                    return Err(ConfigError::invalid("sweep.start", "sigma2_probe must be non-negative"));
                }
            }
        }
        if self.swept != SweptParameter::Sigma2Probe {
            match self.coupling {
                CouplingRule::Independent => {
                    need(self.sigma2_probe, "noise.sigma2_probe")?;
                    if self.sigma2_probe.unwrap() < 0.0 {
                        return Err(ConfigError::invalid("noise.sigma2_probe", "must be non-negative"));
                    }
                }
                CouplingRule::TwoPole => forbid(
                    self.sigma2_probe,
                    "noise.sigma2_probe",
                    "two_pole coupling derives sigma2_probe from the kernel",
                )?,
            }
        }
        if let Some(a) = self.alpha_p {
            if a < 0.0 {
                return Err(ConfigError::invalid("gate.alpha_p", "must be non-negative"));
            }
        }
        let k = &self.kernel;
        if !(k.omega0 > 0.0 && k.omega0.is_finite()) {
            return Err(ConfigError::invalid("kernel.omega0", "must be positive"));
        }
        if !(k.gamma0 >= 0.0 && k.gamma0 < 2.0 * k.omega0) {
            return Err(ConfigError::invalid("kernel.gamma0", "must lie in [0, 2*omega0)"));
        }
        if !(k.temperature >= 0.0 && k.temperature.is_finite()) {
            return Err(ConfigError::invalid("kernel.temperature", "must be non-negative"));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(ConfigError::invalid("fock.tail_tol", "must lie in (0, 1)"));
        }
        Ok(())
    }

    /// Parses a config file, then validates the assembled spec.
    pub fn from_config_str(text: &str) -> Result<Self, ConfigError> {
        let mut b = Builder::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            })?;
            b.set(line, key.trim(), value.trim())?;
        }
        b.finish()
    }

    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: &dyn fmt::Debug| {
            let _ = writeln!(s, "{k} = {v:?}");
        };
        put("sweep.parameter", &format_args!("{}", self.swept.as_str()));
        put("sweep.coupling", &format_args!("{}", self.coupling.as_str()));
        match &self.grid {
            GridSpec::Linear { start, stop, points } | GridSpec::Log { start, stop, points } => {
                let kind = if matches!(self.grid, GridSpec::Log { .. }) { "log" } else { "linear" };
                put("sweep.grid", &format_args!("{kind}"));
                put("sweep.start", start);
                put("sweep.stop", stop);
                put("sweep.points", points);
            }
            GridSpec::List(v) => {
                put("sweep.grid", &format_args!("list"));
                let joined = v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
                put("sweep.values", &format_args!("{joined}"));
            }
        }
        if let Some(v) = self.alpha_p {
            put("gate.alpha_p", &v);
        }
        if let Some(v) = self.theta {
            put("gate.theta", &v);
        }
        if let Some(v) = self.theta_alpha {
            put("gate.theta_alpha", &v);
        }
        if let Some(v) = self.sigma2_probe {
            put("noise.sigma2_probe", &v);
        }
        put("kernel.omega0", &self.kernel.omega0);
        put("kernel.gamma0", &self.kernel.gamma0);
        put("kernel.temperature", &self.kernel.temperature);
        put("mc.samples", &self.mc_samples);
        put("mc.seed", &self.seed);
        put("fock.tail_tol", &self.tail_tol);
        put("analytics.exact", &self.exact);
        s
    }
}

impl SweptParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweptParameter::Sigma2Probe => "sigma2_probe",
            SweptParameter::ThetaAlphaProduct => "theta_alpha_product",
            SweptParameter::AlphaPMag => "alpha_p_mag",
        }
    }
}

impl FromStr for SweptParameter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sigma2_probe" => Ok(Self::Sigma2Probe),
            "theta_alpha_product" => Ok(Self::ThetaAlphaProduct),
            "alpha_p_mag" => Ok(Self::AlphaPMag),
            _ => Err("expected sigma2_probe, theta_alpha_product or alpha_p_mag".into()),
        }
    }
}

impl CouplingRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            CouplingRule::Independent => "independent",
            CouplingRule::TwoPole => "two_pole",
        }
    }
}

impl FromStr for CouplingRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "independent" => Ok(Self::Independent),
            "two_pole" => Ok(Self::TwoPole),
            _ => Err("expected independent or two_pole".into()),
        }
    }
}

#[derive(Default)]
struct Builder {
    parameter: Option<SweptParameter>,
    coupling: Option<CouplingRule>,
    grid: Option<String>,
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
    values: Option<Vec<f64>>,
    alpha_p: Option<f64>,
    theta: Option<f64>,
    theta_alpha: Option<f64>,
    sigma2_probe: Option<f64>,
    kernel: KernelConfig,
    mc_samples: Option<usize>,
    seed: Option<u64>,
    tail_tol: Option<f64>,
    exact: Option<bool>,
    seen: Vec<(String, usize)>,
}

fn parse<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| ConfigError::Field {
        line,
        key: key.to_string(),
        message: format!("cannot parse `{value}`: {e}"),
    })
}

impl Builder {
    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        if self.seen.iter().any(|(k, _)| k == key) {
            return Err(ConfigError::Field {
                line,
                key: key.to_string(),
                message: "duplicate key".into(),
            });
        }
        match key {
            "sweep.parameter" => self.parameter = Some(parse(line, key, value)?),
            "sweep.coupling" => self.coupling = Some(parse(line, key, value)?),
            "sweep.grid" => match value {
                "linear" | "log" | "list" => self.grid = Some(value.to_string()),
                _ => {
                    return Err(ConfigError::Field {
                        line,
                        key: key.into(),
                        message: "expected linear, log or list".into(),
                    })
                }
            },
            "sweep.start" => self.start = Some(parse(line, key, value)?),
            "sweep.stop" => self.stop = Some(parse(line, key, value)?),
            "sweep.points" => self.points = Some(parse(line, key, value)?),
            "sweep.values" => {
                let v = value
                    .split(',')
                    .map(|x| parse::<f64>(line, key, x.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                self.values = Some(v);
            }
            "gate.alpha_p" => self.alpha_p = Some(parse(line, key, value)?),
            "gate.theta" => self.theta = Some(parse(line, key, value)?),
            "gate.theta_alpha" => self.theta_alpha = Some(parse(line, key, value)?),
            "noise.sigma2_probe" => self.sigma2_probe = Some(parse(line, key, value)?),
            "kernel.omega0" => self.kernel.omega0 = parse(line, key, value)?,
            "kernel.gamma0" => self.kernel.gamma0 = parse(line, key, value)?,
            "kernel.temperature" => self.kernel.temperature = parse(line, key, value)?,
            "mc.samples" => self.mc_samples = Some(parse(line, key, value)?),
            "mc.seed" => self.seed = Some(parse(line, key, value)?),
            "fock.tail_tol" => self.tail_tol = Some(parse(line, key, value)?),
            "analytics.exact" => self.exact = Some(parse(line, key, value)?),
            _ => {
                return Err(ConfigError::Field {
                    line,
                    key: key.to_string(),
                    message: "unknown key".into(),
                })
            }
        }
        self.seen.push((key.to_string(), line));
        Ok(())
    }

    fn finish(self) -> Result<SweepSpec, ConfigError> {
        let seen = self.seen.clone();
        self.assemble().map_err(|e| match e {
            ConfigError::Invalid { key, message } => match seen.iter().find(|(k, _)| *k == key) {
                Some(&(_, line)) => ConfigError::Field { line, key, message },
                None => ConfigError::Invalid { key, message },
            },
            other => other,
        })
    }

    fn assemble(self) -> Result<SweepSpec, ConfigError> {
        let swept = self
            .parameter
            .ok_or_else(|| ConfigError::invalid("sweep.parameter", "missing"))?;
        let grid_kind = self.grid.as_deref().unwrap_or(if self.values.is_some() { "list" } else { "linear" });
        let grid = match grid_kind {
            "list" => {
                if self.start.is_some() || self.stop.is_some() || self.points.is_some() {
                    return Err(ConfigError::invalid("sweep.values", "a list grid takes no start/stop/points"));
                }
                GridSpec::List(
                    self.values
                        .ok_or_else(|| ConfigError::invalid("sweep.values", "missing for a list grid"))?,
                )
            }
            kind => {
                if self.values.is_some() {
                    return Err(ConfigError::invalid("sweep.values", "only valid with sweep.grid = list"));
                }
                let start = self.start.ok_or_else(|| ConfigError::invalid("sweep.start", "missing"))?;
                let stop = self.stop.ok_or_else(|| ConfigError::invalid("sweep.stop", "missing"))?;
                let points = self.points.ok_or_else(|| ConfigError::invalid("sweep.points", "missing"))?;
                if kind == "log" {
                    GridSpec::Log { start, stop, points }
                } else {
                    GridSpec::Linear { start, stop, points }
                }
            }
        };
        let spec = SweepSpec {
            swept,
            grid,
            coupling: self.coupling.unwrap_or(CouplingRule::Independent),
            alpha_p: self.alpha_p,
            theta: self.theta,
            theta_alpha: self.theta_alpha,
            sigma2_probe: self.sigma2_probe,
            kernel: self.kernel,
            mc_samples: self.mc_samples.unwrap_or(0),
            seed: self.seed.unwrap_or(0),
            tail_tol: self.tail_tol.unwrap_or(xpm_core::gate::GateParams::DEFAULT_TAIL_TOL),
            exact: self.exact.unwrap_or(false),
        };
        spec.validate()?;
        Ok(spec)
    }
}
