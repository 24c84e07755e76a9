use rayon::prelude::*;
use thiserror::Error;
use xpm_core::gate::{sample_outcome, summarize, GateParams, McEstimate, SampleOutcome};
use xpm_core::{success_analytic, BlochConstants, NoiseModel, TwoPoleKernel};

use crate::spec::{ConfigError, CouplingRule, GridSpec, KernelConfig, SweepSpec, SweptParameter};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("at {param} = {value}: {source}")]
    Point {
        param: &'static str,
        value: f64,
        source: xpm_core::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McColumns {
    pub p_even: f64,
    pub se_even: f64,
    pub p_odd: f64,
    pub se_odd: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultRow {
    pub param: f64,
    pub p_even: f64,
    pub p_odd: f64,
    pub p_success: f64,
    pub mc: Option<McColumns>,
}

/// Gate inputs at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointParams {
    pub alpha_p: f64,
    pub theta: f64,
    pub sigma2_probe: f64,
}

/// Coupling and probe variance for peak phase `theta` on a two-pole kernel.
pub fn two_pole_model(kernel: &KernelConfig, theta: f64) -> xpm_core::Result<NoiseModel> {
    let unit = TwoPoleKernel::new(kernel.omega0, kernel.gamma0, 1.0)?;
    let kappa = theta / unit.peak_phase();
    let summary = unit.with_kappa(kappa)?.summary(kernel.temperature)?;
    NoiseModel::from_kernel(&summary)
}

impl SweepSpec {
    pub fn point(&self, x: f64) -> xpm_core::Result<(PointParams, NoiseModel)> {
        let alpha_p = match self.swept {
            SweptParameter::AlphaPMag => x,
            _ => self.alpha_p.unwrap_or(0.0),
        };
        let theta = match (self.swept, self.theta, self.theta_alpha) {
            (SweptParameter::ThetaAlphaProduct, _, _) => x / alpha_p,
            (_, Some(t), _) => t,
            (_, None, Some(ta)) => ta / alpha_p,
            (_, None, None) => 0.0,
        };
        if !theta.is_finite() {
            return Err(xpm_core::Error::InvalidParameter {
                name: "theta",
                reason: "theta*|alpha_p| needs |alpha_p| > 0",
            });
        }
        let model = match self.coupling {
            CouplingRule::TwoPole => two_pole_model(&self.kernel, theta)?,
            CouplingRule::Independent => {
                let s2 = match self.swept {
                    SweptParameter::Sigma2Probe => x,
                    _ => self.sigma2_probe.unwrap_or(0.0),
                };
                NoiseModel::from_probe_variance(theta, s2)?
            }
        };
        let p = PointParams {
            alpha_p,
            theta,
            sigma2_probe: model.sigma2_probe,
        };
        Ok((p, model))
    }
}

/// Per-sample outcomes for `0..n_samples`, computed in parallel and
/// collected in index order, then reduced sequentially.
pub fn mc_parallel(params: &GateParams, model: &NoiseModel, n_samples: usize, seed: u64) -> McEstimate {
    let outcomes: Vec<SampleOutcome> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| sample_outcome(params, model, seed, i))
        .collect();
    summarize(&outcomes)
}

/// Same as [`mc_parallel`] on a dedicated pool of `threads` workers.
pub fn mc_with_threads(
    params: &GateParams,
    model: &NoiseModel,
    n_samples: usize,
    seed: u64,
    threads: usize,
) -> McEstimate {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| mc_parallel(params, model, n_samples, seed))
}

pub fn run_sweep(spec: &SweepSpec, constants: &BlochConstants) -> Result<Vec<ResultRow>, SweepError> {
    spec.validate()?;
    let name = spec.swept.as_str();
    let wrap = |x: f64| move |source| SweepError::Point {
        param: name,
        value: x,
        source,
    };
    let mut rows = Vec::new();
    for x in spec.grid.values() {
        let (p, model) = spec.point(x).map_err(wrap(x))?;
        let s = success_analytic(p.alpha_p, p.theta, p.sigma2_probe, constants, spec.exact).map_err(wrap(x))?;
        let mc = if spec.mc_samples > 0 {
            let gp = GateParams::new(p.alpha_p, p.theta, &model, spec.tail_tol).map_err(wrap(x))?;
            let e = mc_parallel(&gp, &model, spec.mc_samples, spec.seed);
            Some(McColumns {
                p_even: e.p_even,
                se_even: e.se_even,
                p_odd: e.p_odd,
                se_odd: e.se_odd,
            })
        } else {
            None
        };
        rows.push(ResultRow {
            param: x,
            p_even: s.p_even,
            p_odd: s.p_odd,
            p_success: s.p_even + s.p_odd,
            mc,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
}

impl Figure {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            3 => Some(Self::Fig3),
            4 => Some(Self::Fig4),
            5 => Some(Self::Fig5),
            _ => None,
        }
    }
}

pub fn figure_preset(which: Figure) -> SweepSpec {
    let base = SweepSpec {
        swept: SweptParameter::Sigma2Probe,
        grid: GridSpec::List(vec![0.0]),
        coupling: CouplingRule::Independent,
        alpha_p: None,
        theta: None,
        theta_alpha: None,
        sigma2_probe: None,
        kernel: KernelConfig::default(),
        mc_samples: 0,
        seed: 0,
        tail_tol: GateParams::DEFAULT_TAIL_TOL,
        exact: false,
    };
    match which {
        // P vs σ_P² at |α_P| = 100, θ = 20 mrad
        Figure::Fig3 => SweepSpec {
            grid: GridSpec::Log {
                start: 1e-8,
                stop: 1e-1,
                points: 50,
            },
            alpha_p: Some(100.0),
            theta: Some(0.02),
            ..base
        },
        // P vs θ|α_P| at σ_P² = 1e-6, |α_P| = 100
        Figure::Fig4 => SweepSpec {
            swept: SweptParameter::ThetaAlphaProduct,
            grid: GridSpec::Linear {
                start: 0.0,
                stop: 5.0,
                points: 50,
            },
            alpha_p: Some(100.0),
            sigma2_probe: Some(1e-6),
            ..base
        },
        // P vs |α_P| with σ_P² = θ from the two-pole kernel, θ|α_P| = 2
        Figure::Fig5 => SweepSpec {
            swept: SweptParameter::AlphaPMag,
            grid: GridSpec::Log {
                start: 1.0,
                stop: 100.0,
                points: 40,
            },
            coupling: CouplingRule::TwoPole,
            theta_alpha: Some(2.0),
            ..base
        },
    }
}
